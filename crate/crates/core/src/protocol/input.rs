use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::{Error, Result, TOL};

/// One row `Pr[X_A = a, X_B = b, D = d] = p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEntry {
    pub a: usize,
    pub b: usize,
    pub d: String,
    pub p: f64,
}

/// Joint law of `(X_A, X_B, D)` in which `D` partitions `X`, together with
/// the number `n` of independent copies making up the product form
/// `(X, D)^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInput", into = "RawInput")]
pub struct PartitionedInput {
    labels: Vec<String>,
    table: Vec<InputEntry>,
    arity: usize,
}

#[derive(Serialize, Deserialize)]
struct RawInput {
    labels: Vec<String>,
    #[serde(default = "one")]
    arity: usize,
    table: Vec<InputEntry>,
}

fn one() -> usize {
    1
}

impl TryFrom<RawInput> for PartitionedInput {
    type Error = Error;

    fn try_from(r: RawInput) -> Result<Self> {
        Self::new(r.labels, r.table, r.arity)
    }
}

impl From<PartitionedInput> for RawInput {
    fn from(p: PartitionedInput) -> Self {
        Self {
            labels: p.labels,
            arity: p.arity,
            table: p.table,
        }
    }
}

impl PartitionedInput {
    /// Validates the table and the partition property: for every `d` with
    /// positive mass, `Pr[a, b | d] = Pr[a | d] Pr[b | d]`.
    pub fn new(labels: Vec<String>, table: Vec<InputEntry>, arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidDistribution("arity must be at least 1".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::InvalidDistribution(format!("duplicate label `{l}`")));
            }
        }
        let mut cells = std::collections::BTreeSet::new();
        for e in &table {
            if !labels.contains(&e.d) {
                return Err(Error::InvalidDistribution(format!("unknown label `{}`", e.d)));
            }
            if !(e.p >= 0.0) {
                return Err(Error::InvalidDistribution("negative probability".into()));
            }
            if !cells.insert((e.a, e.b, e.d.clone())) {
                return Err(Error::InvalidDistribution(format!(
                    "repeated entry ({}, {}, {})",
                    e.a, e.b, e.d
                )));
            }
        }
        let total: f64 = table.iter().map(|e| e.p).sum();
        if (total - 1.0).abs() > TOL.distribution {
            return Err(Error::InvalidDistribution(format!("mass {total}")));
        }
        let out = Self {
            labels,
            table,
            arity,
        };
        out.check_partition()?;
        Ok(out)
    }

    fn check_partition(&self) -> Result<()> {
        for d in 0..self.labels.len() {
            let pd = self.prob_d(d);
            if pd <= 0.0 {
                continue;
            }
            let ma = self.marginal_a(d);
            let mb = self.marginal_b(d);
            for (&a, &pa) in &ma {
                for (&b, &pb) in &mb {
                    let joint = self.joint(a, b, d) / pd;
                    if (joint - pa * pb).abs() > TOL.partition {
                        return Err(Error::InvalidDistribution(format!(
                            "D = {} does not partition X: Pr[{a},{b}|d] = {joint}, product {}",
                            self.labels[d],
                            pa * pb
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Point mass on `(a, b)` with a single label `*`.
    pub fn point_mass(a: usize, b: usize) -> Self {
        Self::new(
            vec!["*".into()],
            vec![InputEntry {
                a,
                b,
                d: "*".into(),
                p: 1.0,
            }],
            1,
        )
        .expect("point mass is valid")
    }

    /// Same law, `n` independent copies.
    pub fn with_arity(mut self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("arity must be at least 1".into()));
        }
        self.arity = n;
        Ok(self)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[InputEntry] {
        &self.table
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::OutsideSupport(format!("unknown label `{label}`")))
    }

    fn d_of(&self, e: &InputEntry) -> usize {
        self.labels.iter().position(|l| *l == e.d).expect("validated")
    }

    pub fn prob_d(&self, d: usize) -> f64 {
        self.table.iter().filter(|e| self.d_of(e) == d).map(|e| e.p).sum()
    }

    pub fn joint(&self, a: usize, b: usize, d: usize) -> f64 {
        self.table
            .iter()
            .filter(|e| e.a == a && e.b == b && self.d_of(e) == d)
            .map(|e| e.p)
            .sum()
    }

    fn conditional(&self, d: usize, pick: impl Fn(&InputEntry) -> usize) -> BTreeMap<usize, f64> {
        let pd = self.prob_d(d);
        let mut m = BTreeMap::new();
        for e in self.table.iter().filter(|e| self.d_of(e) == d) {
            *m.entry(pick(e)).or_insert(0.0) += e.p / pd;
        }
        m
    }

    /// `Pr[X_A = · | D = d]` over the values listed in the table.
    pub fn marginal_a(&self, d: usize) -> BTreeMap<usize, f64> {
        self.conditional(d, |e| e.a)
    }

    /// `Pr[X_B = · | D = d]`.
    pub fn marginal_b(&self, d: usize) -> BTreeMap<usize, f64> {
        self.conditional(d, |e| e.b)
    }

    /// Largest value of `X_A` or `X_B` in the table.
    pub fn max_value(&self) -> usize {
        self.table.iter().map(|e| e.a.max(e.b)).max().unwrap_or(0)
    }

    /// Every `d ∈ D^n` with positive probability, with that probability.
    pub fn conditions(&self) -> Vec<(Vec<usize>, f64)> {
        let k = self.labels.len();
        let mut out = Vec::new();
        let total = k.pow(self.arity as u32);
        for code in 0..total {
            let mut c = code;
            let mut tuple = vec![0; self.arity];
            for slot in tuple.iter_mut().rev() {
                *slot = c % k;
                c /= k;
            }
            let w: f64 = tuple.iter().map(|&d| self.prob_d(d)).product();
            if w > 0.0 {
                out.push((tuple, w));
            }
        }
        out
    }

    /// Errors unless `condition` has length `n` and positive probability.
    pub fn check_condition(&self, condition: &[usize]) -> Result<()> {
        if condition.len() != self.arity {
            return Err(Error::OutsideSupport(format!(
                "condition has {} coordinates, expected {}",
                condition.len(),
                self.arity
            )));
        }
        for &d in condition {
            if d >= self.labels.len() || self.prob_d(d) <= 0.0 {
                return Err(Error::OutsideSupport(format!("D = {d} has no mass")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
