//! The invariant suite behind `verify`: every inequality and fixture
//! property the crate promises, checked on seeded random instances.
//!
//! Check `c` draws instance `i` from stream `(c << 32) | i` of the seed, so
//! the report does not depend on thread scheduling.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::metrics::{
    apply_povm, classical_fidelity, classical_relative_entropy, encoding_information,
    encoding_information_entropic, fidelity, fuchs_caves, relative_entropy, total_variation,
    trace_distance, EncodingEnsemble, RelativeEntropy,
};
use crate::protocol::{
    cleve_profile, error_probability, fixtures, information_loss, InputEntry, PartitionedInput,
    ProtocolProgram,
};
use crate::purify::{purify, uhlmann_transition, Completion};
use crate::qmat::{random_density, random_povm, random_unitary, DensityOperator, SeededRng};
use crate::reductions::{
    and_distribution, derive_and_protocol, derived_and_cases, monotone_sensitivity,
    paradox_demo, promise_instances, reduction_report, round_elimination_audit,
    BooleanSetFunction, PromiseKind,
};
use crate::{Error, Result};

/// Largest program width the suite accepts.
pub const SUITE_MAX_WIDTH: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub ensembles: usize,
    pub fidelity_pairs: usize,
    pub entropy_instances: usize,
    pub measurement_triples: usize,
    pub transition_pairs: usize,
    pub challengers: usize,
    pub protocols: usize,
    pub truth_tables: usize,
}

impl Default for Counts {
    fn default() -> Self {
        Self {
            ensembles: 500,
            fidelity_pairs: 1000,
            entropy_instances: 500,
            measurement_triples: 500,
            transition_pairs: 200,
            challengers: 100,
            protocols: 100,
            truth_tables: 50,
        }
    }
}

impl Counts {
    /// Every count divided by `factor`, at least 1.
    pub fn reduced(self, factor: usize) -> Self {
        let f = |x: usize| (x / factor.max(1)).max(1);
        Self {
            ensembles: f(self.ensembles),
            fidelity_pairs: f(self.fidelity_pairs),
            entropy_instances: f(self.entropy_instances),
            measurement_triples: f(self.measurement_triples),
            transition_pairs: f(self.transition_pairs),
            challengers: f(self.challengers),
            protocols: f(self.protocols),
            truth_tables: f(self.truth_tables),
        }
    }

    fn all(&self) -> [usize; 8] {
        [
            self.ensembles,
            self.fidelity_pairs,
            self.entropy_instances,
            self.measurement_triples,
            self.transition_pairs,
            self.challengers,
            self.protocols,
            self.truth_tables,
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Replaces every per-check slack when set.
    pub tol: Option<f64>,
    pub counts: Counts,
    /// Shipped fixtures wider than this are skipped.
    pub max_width: usize,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            tol: None,
            counts: Counts::default(),
            max_width: SUITE_MAX_WIDTH,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.counts.all().contains(&0) {
            return Err(Error::InvalidInput("instance counts must be at least 1".into()));
        }
        if self.max_width > SUITE_MAX_WIDTH {
            return Err(Error::WidthOverflow {
                width: self.max_width,
                max: SUITE_MAX_WIDTH,
            });
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidInput(format!("tolerance {t} is not a non-negative number")));
            }
        }
        Ok(())
    }

    fn slack(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub statement: String,
    pub passed: usize,
    pub total: usize,
    pub slack: f64,
    /// Smallest `bound - value` over the instances; below `-slack` is a
    /// violation.
    pub worst_margin: f64,
    /// First few errors raised while evaluating instances.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

impl CheckResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub counts: Counts,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,passed,total,slack,worst_margin\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{:e},{:e}\n",
                c.name, c.passed, c.total, c.slack, c.worst_margin
            ));
        }
        out
    }
}

struct Check<'a> {
    id: u64,
    name: &'a str,
    statement: &'a str,
    slack: f64,
}

impl Check<'_> {
    /// Evaluate `margin(i, rng)` for `n` instances; each instance may
    /// return several margins, all of which must clear `-slack`.
    fn run<F>(&self, seed: u64, n: usize, margin: F) -> CheckResult
    where
        F: Fn(usize, &mut SeededRng) -> Result<Vec<f64>> + Sync,
    {
        let base = SeededRng::new(seed);
        let outcomes: Vec<Result<Vec<f64>>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = base.fork((self.id << 32) | i as u64);
                margin(i, &mut rng)
            })
            .collect();
        let mut passed = 0;
        let mut worst = f64::INFINITY;
        let mut errors = Vec::new();
        for o in outcomes {
            match o {
                Ok(ms) => {
                    let w = ms.iter().copied().fold(f64::INFINITY, f64::min);
                    worst = worst.min(w);
                    if ms.iter().all(|m| *m >= -self.slack) {
                        passed += 1;
                    }
                }
                Err(e) => {
                    if errors.len() < 5 {
                        errors.push(e.to_string());
                    }
                }
            }
        }
        CheckResult {
            name: self.name.to_string(),
            statement: self.statement.to_string(),
            passed,
            total: n,
            slack: self.slack,
            worst_margin: if worst.is_finite() { worst } else { 0.0 },
            errors,
        }
    }
}

fn random_pair(rng: &mut SeededRng, max_dim: usize) -> Result<(DensityOperator, DensityOperator)> {
    let d = rng.range(2, max_dim);
    let r1 = rng.range(1, d);
    let r2 = if rng.coin() { d } else { rng.range(1, d) };
    Ok((random_density(d, r1, rng)?, random_density(d, r2, rng)?))
}

fn random_ensemble(rng: &mut SeededRng, members: usize) -> Result<EncodingEnsemble> {
    let d = rng.range(2, 8);
    let w = rng.simplex(members);
    let mut m = Vec::new();
    for p in w {
        let r = rng.range(1, d);
        m.push((p, random_density(d, r, rng)?));
    }
    EncodingEnsemble::new(m)
}


/// Product-form law over bit pairs with two or three values of `D`.
pub fn random_partitioned(rng: &mut SeededRng) -> PartitionedInput {
    let k = rng.range(2, 3);
    let pd = rng.simplex(k);
    let mut table = Vec::new();
    let mut labels = Vec::new();
    for (d, w) in pd.iter().enumerate() {
        let label = format!("d{d}");
        let qa = rng.simplex(2);
        let qb = rng.simplex(2);
        for a in 0..2 {
            for b in 0..2 {
                table.push(InputEntry {
                    a,
                    b,
                    d: label.clone(),
                    p: w * qa[a] * qb[b],
                });
            }
        }
        labels.push(label);
    }
    PartitionedInput::new(labels, table, 1).expect("product form partitions")
}

/// Shipped two-party fixtures with their input law, skipping any wider than
/// `max_width`.
fn two_party_fixtures(max_width: usize) -> Vec<(String, ProtocolProgram, PartitionedInput)> {
    let and = and_distribution();
    let mut out = vec![
        ("and2".to_string(), fixtures::and2(), and.clone()),
        ("paradox".to_string(), fixtures::paradox(), and.clone()),
        ("noisy-and".to_string(), fixtures::noisy_and(0.6), and.clone()),
    ];
    for n in 2..=3 {
        for k in 1..=2 {
            let dist = and.clone().with_arity(n).expect("positive arity");
            out.push((format!("disj{k}-n{n}"), fixtures::disj(n, k), dist));
        }
    }
    out.retain(|(_, p, _)| p.registers.total_width() <= max_width);
    out
}

/// Second route to monotone sensitivity: sets as membership vectors.
fn sensitivity_by_sets(n: usize, f: impl Fn(&[bool]) -> bool) -> usize {
    let mut best = 0;
    for mask in 0..1usize << n {
        let set: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let here = f(&set);
        let mut flips = 0;
        for i in 0..n {
            if !set[i] {
                let mut bigger = set.clone();
                bigger[i] = true;
                flips += (f(&bigger) != here) as usize;
            }
        }
        best = best.max(flips);
    }
    best
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let seed = cfg.seed;
    let c = cfg.counts;
    let mut checks = Vec::new();
    let mut id = 0u64;
    let mut next = |name: &'static str, statement: &'static str, slack: f64| {
        id += 1;
        Check {
            id,
            name,
            statement,
            slack: cfg.slack(slack),
        }
    };

    checks.push(
        next(
            "encoding-dual-form",
            "Σ p_j S(σ_j || σ̄) = S(σ̄) - Σ p_j S(σ_j)",
            1e-8,
        )
        .run(seed, c.ensembles, |_, rng| {
            let m = rng.range(2, 4);
            let e = random_ensemble(rng, m)?;
            Ok(vec![-(encoding_information(&e) - encoding_information_entropic(&e)).abs()])
        }),
    );

    checks.push(
        next(
            "fidelity-trace-sandwich",
            "2(1 - B) ≤ ||ρ - σ|| ≤ 2 √(1 - B²)",
            1e-8,
        )
        .run(seed, c.fidelity_pairs, |_, rng| {
            let (r, s) = random_pair(rng, 8)?;
            let b = fidelity(&r, &s)?;
            let t = trace_distance(&r, &s)?;
            Ok(vec![t - 2.0 * (1.0 - b), 2.0 * (1.0 - b * b).max(0.0).sqrt() - t])
        }),
    );

    let entropy_pair = |rng: &mut SeededRng| -> Result<(f64, Option<f64>)> {
        let (r, s) = random_pair(rng, 8)?;
        let b = fidelity(&r, &s)?;
        Ok((b, relative_entropy(&r, &s)?.finite()))
    };
    checks.push(
        next("fidelity-entropy-bound", "B ≥ 2^(-S(ρ||σ)/2)", 1e-9).run(
            seed,
            c.entropy_instances,
            |_, rng| {
                let (b, s) = entropy_pair(rng)?;
                Ok(vec![s.map_or(b, |s| b - 2f64.powf(-s / 2.0))])
            },
        ),
    );
    checks.push(
        next("fidelity-entropy-linear", "1 - B ≤ (ln 2 / 2) S(ρ||σ)", 1e-9).run(
            seed,
            c.entropy_instances,
            |_, rng| {
                let (b, s) = entropy_pair(rng)?;
                Ok(vec![s.map_or(f64::INFINITY, |s| LN_2 / 2.0 * s - (1.0 - b))])
            },
        ),
    );
    checks.push(
        next("average-encoding", "Σ p_x (1 - B(σ̄, σ_x)) ≤ (ln 2 / 2) I(X:Q)", 1e-9).run(
            seed,
            c.entropy_instances,
            |_, rng| {
                let m = rng.range(2, 4);
                let e = random_ensemble(rng, m)?;
                let avg = e.average();
                let mut lhs = 0.0;
                for (p, s) in e.members() {
                    lhs += p * (1.0 - fidelity(&avg, s)?);
                }
                Ok(vec![LN_2 / 2.0 * encoding_information(&e) - lhs])
            },
        ),
    );
    checks.push(
        next("uniform-bit-encoding", "1 - B(σ₀, σ₁) ≤ I(X:Q) for uniform X", 1e-9).run(
            seed,
            c.entropy_instances,
            |_, rng| {
                let (r, s) = random_pair(rng, 8)?;
                let b = fidelity(&r, &s)?;
                let e = EncodingEnsemble::uniform(vec![r, s])?;
                Ok(vec![encoding_information(&e) - (1.0 - b)])
            },
        ),
    );

    let measured = |rng: &mut SeededRng| -> Result<_> {
        let (r, s) = random_pair(rng, 6)?;
        let k = rng.range(2, 6);
        let f = random_povm(r.dim(), k, rng)?;
        let (p, q) = (apply_povm(&f, &r)?, apply_povm(&f, &s)?);
        Ok((r, s, p, q))
    };
    checks.push(
        next("measurement-trace-distance", "||Fρ - Fσ||₁ ≤ ||ρ - σ||", 1e-9).run(
            seed,
            c.measurement_triples,
            |_, rng| {
                let (r, s, p, q) = measured(rng)?;
                Ok(vec![trace_distance(&r, &s)? - total_variation(&p, &q)?])
            },
        ),
    );
    checks.push(
        next("measurement-relative-entropy", "S(Fρ || Fσ) ≤ S(ρ || σ)", 1e-8).run(
            seed,
            c.measurement_triples,
            |_, rng| {
                let (r, s, p, q) = measured(rng)?;
                let quantum = relative_entropy(&r, &s)?;
                let classical = classical_relative_entropy(&p, &q)?;
                Ok(vec![match (quantum, classical) {
                    (RelativeEntropy::Infinite, _) => f64::INFINITY,
                    (RelativeEntropy::Finite(_), RelativeEntropy::Infinite) => -1.0,
                    (RelativeEntropy::Finite(a), RelativeEntropy::Finite(b)) => a - b,
                }])
            },
        ),
    );
    checks.push(
        next(
            "measurement-fidelity",
            "B(ρ, σ) ≤ B(Fρ, Fσ), with equality for the optimal measurement when σ has full rank",
            1e-7,
        )
        .run(seed, c.measurement_triples, |_, rng| {
            let (r, s, p, q) = measured(rng)?;
            let b = fidelity(&r, &s)?;
            let fc = fuchs_caves(&r, &s)?;
            let mut m = vec![classical_fidelity(&p, &q)? - b, fc.value - b];
            if !fc.regularized {
                m.push(1e-6 - (fc.value - b).abs());
            }
            Ok(m)
        }),
    );

    let challengers = c.challengers;
    checks.push(
        next(
            "transition-optimality",
            "the constructed unitary reaches B(ρ₁, ρ₂) and no random unitary beats it",
            1e-8,
        )
        .run(seed, c.transition_pairs, move |_, rng| {
            let d = [2, 4][rng.range(0, 1)];
            let r1 = rng.range(1, d);
            let r2 = rng.range(1, d);
            let (a, b) = (random_density(d, r1, rng)?, random_density(d, r2, rng)?);
            let phi1 = purify(&a)?;
            let scramble = random_unitary(d, rng);
            let phi2 = purify(&b)?.apply_on(&["K"], &scramble)?;
            let tr = uhlmann_transition(&phi1, &phi2, &["K"], Completion::default())?;
            let mut m = vec![1e-6 - (tr.overlap - fidelity(&a, &b)?).abs()];
            let mut best: f64 = 0.0;
            for _ in 0..challengers {
                let u = random_unitary(d, rng);
                best = best.max(phi1.inner(&phi2.apply_on(&["K"], &u)?)?.norm());
            }
            m.push(tr.overlap - best);
            Ok(m)
        }),
    );

    checks.push(
        next(
            "and-fixture",
            "two-round AND: error 0, loss 0.5 under the AND law, loss ≥ (1-2ε)²/(4k)",
            1e-9,
        )
        .run(seed, 1, |_, _| {
            let p = fixtures::and2();
            let eps = error_probability(&p, &fixtures::and_cases())?;
            let r = information_loss(&p, &and_distribution())?.with_error(eps);
            Ok(vec![
                -eps,
                -(r.total - 0.5).abs(),
                r.total - r.and_lower_bound().unwrap_or(f64::INFINITY),
            ])
        }),
    );

    let shipped = two_party_fixtures(cfg.max_width);
    let n_shipped = shipped.len();
    checks.push(
        next(
            "cleve-bound",
            "after every prefix, I(sender input : receiver) ≤ 2 · qubits sent",
            1e-8,
        )
        .run(seed, n_shipped + c.protocols, |i, rng| {
            let (p, dist) = if i < n_shipped {
                (shipped[i].1.clone(), shipped[i].2.clone())
            } else {
                (fixtures::random_protocol(rng), random_partitioned(rng))
            };
            Ok(cleve_profile(&p, &dist)?
                .iter()
                .map(|e| 2.0 * e.sent as f64 - e.information)
                .collect())
        }),
    );

    let sources: Vec<(usize, usize)> = [(2, 1), (2, 2), (3, 1), (3, 2)]
        .into_iter()
        .filter(|&(n, k)| fixtures::disj(n, k).registers.total_width() <= cfg.max_width)
        .collect();
    checks.push(
        next(
            "reduction-sandwich",
            "derived AND protocol: (1-2ε)²/(4k) ≤ loss ≤ 2kc/n, each term at most the source term",
            1e-6,
        )
        .run(seed, sources.len(), |i, _| {
            let (n, k) = sources[i];
            let p = fixtures::disj(n, k);
            let mut m = Vec::new();
            for j in 0..n {
                let r = reduction_report(&p, j, None, &and_distribution())?;
                m.push(r.upper_bound - r.loss.total);
                m.push(r.loss.total - r.lower_bound);
                m.extend(r.terms.iter().map(|t| t.source - t.derived));
            }
            Ok(m)
        }),
    );
    checks.push(
        next(
            "derived-error",
            "every derived protocol errs no more than its source",
            1e-9,
        )
        .run(seed, sources.len(), |i, _| {
            let (n, k) = sources[i];
            let p = fixtures::disj(n, k);
            let eps = error_probability(&p, &fixtures::disj_cases(n))?;
            let dist = and_distribution();
            let mut m = Vec::new();
            for j in 0..n {
                for off in 0..1usize << (n - 1) {
                    let dhat: Vec<usize> = (0..n)
                        .map(|l| if l == j { 0 } else { (off >> (l - (l > j) as usize)) & 1 })
                        .collect();
                    let d = derive_and_protocol(&p, j, &dhat, &dist)?;
                    m.push(eps - error_probability(&d, &derived_and_cases(&d)?)?);
                }
            }
            Ok(m)
        }),
    );

    checks.push(
        next(
            "round-elimination-audit",
            "δ₀ = 0, every link δ_t ≤ 4√c_(t-1) + 4√c_t + δ_(t-1), and δ_k ≥ 2 - 4ε",
            1e-6,
        )
        .run(seed, 4, |i, _| {
            let p = match i {
                0 => fixtures::and2(),
                1 => fixtures::paradox(),
                2 => fixtures::noisy_and(0.4),
                _ => fixtures::noisy_and(1.2),
            };
            let r = round_elimination_audit(&p, &and_distribution())?;
            let mut m = vec![if r.delta0() == 0.0 { 0.0 } else { -1.0 }];
            for s in &r.steps {
                if let Some(b) = s.link_bound {
                    m.push(b - s.delta);
                }
                if let Some(b) = s.triangle_bound {
                    m.push(b - s.delta);
                }
                m.push(s.transition_bound - s.transition_distance);
            }
            m.push(r.delta_final - r.remote_distance);
            m.push(r.remote_distance - r.answer_variation);
            m.push(r.answer_variation - r.endpoint_bound);
            m.push(r.chain_sum_bound - r.delta_final);
            m.push(r.concavity_bound - r.delta_final);
            m.push(-(r.eta - r.eta_from_costs).abs() + 1e-10);
            Ok(m)
        }),
    );

    checks.push(
        next(
            "paradox",
            "classical protocol: error 0 and loss 0 exactly; coherent version: loss > 0.01",
            0.0,
        )
        .run(seed, 1, |_, _| {
            let r = paradox_demo()?;
            Ok(vec![
                if r.classical_error == "0" { 0.0 } else { -1.0 },
                -r.classical_il.abs(),
                r.quantum_il - 0.01 - f64::EPSILON,
            ])
        }),
    );

    checks.push(
        next(
            "monotone-sensitivity",
            "s_m([S=∅]) = n, s_m(const) = 0, enumeration routes agree",
            0.0,
        )
        .run(seed, 10 + 1 + c.truth_tables, |i, rng| {
            let (f, expected) = if i < 10 {
                let n = i + 1;
                (BooleanSetFunction::empty_indicator(n)?, Some(n))
            } else if i == 10 {
                (BooleanSetFunction::constant(6, rng.coin())?, Some(0))
            } else {
                let n = rng.range(1, 6);
                let table: Vec<bool> = (0..1 << n).map(|_| rng.coin()).collect();
                (BooleanSetFunction::new(n, table)?, None)
            };
            let got = monotone_sensitivity(&f);
            let other = sensitivity_by_sets(f.n(), |s| {
                f.eval(s.iter().enumerate().map(|(i, &b)| (b as u32) << i).sum())
            });
            let want = expected.unwrap_or(other);
            Ok(vec![-(got.abs_diff(want) as f64), -(got.abs_diff(other) as f64)])
        }),
    );

    checks.push(
        next(
            "promise-fixture",
            "three-party toy protocol is exact on promise instances",
            1e-9,
        )
        .run(seed, 1, |_, rng| {
            let p = fixtures::promise3(2);
            if p.registers.total_width() > SUITE_MAX_WIDTH {
                return Ok(vec![]);
            }
            let inst = promise_instances(PromiseKind::Disjointness { parties: 3 }, 2, usize::MAX, rng)?;
            let cases: Vec<_> = inst
                .iter()
                .map(|x| (fixtures::party_inputs(&x.inputs), x.label))
                .collect();
            Ok(vec![-error_probability(&p, &cases)?])
        }),
    );

    let passed = checks.iter().all(CheckResult::ok);
    Ok(SuiteReport {
        seed,
        counts: c,
        checks,
        passed,
    })
}
