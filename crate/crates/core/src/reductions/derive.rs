use serde::Serialize;

use super::embed;
use crate::protocol::{
    coordinate_terms, error_probability, information_loss, information_terms, inputs,
    prior_state, purification_name, Inputs, InfoLossReport, PartitionedInput, PriorEntanglement,
    ProtocolProgram, SIM_MAX_WIDTH,
};
use crate::qmat::{Register, RegisterLayout, Role, CVector, C64};
use crate::{Error, Result};

fn check_source(p: &ProtocolProgram, dist: &PartitionedInput) -> Result<usize> {
    if p.parties.len() != 2 {
        return Err(Error::UnsupportedParties(p.parties.len()));
    }
    p.validate_with(SIM_MAX_WIDTH).into_result()?;
    let n = p.inputs_of(&p.parties[0]).len();
    if n == 0 || p.inputs_of(&p.parties[1]).len() != n {
        return Err(Error::InvalidProtocol(
            "both parties need the same positive number of input registers".into(),
        ));
    }
    if dist.arity() != 1 && dist.arity() != n {
        return Err(Error::InvalidDistribution(format!(
            "distribution of arity {} for {n} coordinates",
            dist.arity()
        )));
    }
    Ok(n)
}

fn check_dhat(dist: &PartitionedInput, n: usize, j: usize, dhat: &[usize]) -> Result<()> {
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, len: n });
    }
    if dhat.len() != n {
        return Err(Error::InvalidInput(format!("dhat has length {}, expected {n}", dhat.len())));
    }
    for (l, &d) in dhat.iter().enumerate() {
        if l != j && (d >= dist.labels().len() || dist.prob_d(d) <= 0.0) {
            return Err(Error::OutsideSupport(format!("dhat[{l}] = {d}")));
        }
    }
    Ok(())
}

/// Protocol for the one-coordinate function obtained by running `p` with
/// coordinate `j` live and every other coordinate `ℓ` preloaded from the
/// law of `X[ℓ]` given `D = dhat[ℓ]` (`dhat[j]` is ignored).
///
/// Each preloaded input, its copy and a purification register
/// `<input>_pur` become entangled registers of the same owner, appended
/// after the remaining registers; the prior state gains the factor
/// `Σ_x √p(x) |x>|x>|x>` for each of them.
pub fn derive_and_protocol(
    p: &ProtocolProgram,
    j: usize,
    dhat: &[usize],
    dist: &PartitionedInput,
) -> Result<ProtocolProgram> {
    let n = check_source(p, dist)?;
    check_dhat(dist, n, j, dhat)?;

    let mut moved = Vec::new();
    for (side, party) in p.parties.iter().enumerate() {
        for (l, (input, copy)) in p.copy_pairs(party).into_iter().enumerate() {
            if l == j {
                continue;
            }
            let law = if side == 0 {
                dist.marginal_a(dhat[l])
            } else {
                dist.marginal_b(dhat[l])
            };
            moved.push((party.clone(), input, copy, law));
        }
    }

    let is_moved = |name: &str| moved.iter().any(|(_, i, c, _)| i == name || c == name);
    let mut regs: Vec<Register> = p
        .registers
        .registers()
        .iter()
        .filter(|r| !is_moved(&r.name))
        .cloned()
        .collect();
    let mut prior = prior_state(p)?;
    for (party, input, copy, law) in &moved {
        let width = p.registers.register(input)?.width;
        let pur = purification_name(input);
        if p.registers.contains(&pur) {
            return Err(Error::DuplicateRegister(pur));
        }
        for name in [input, copy, &pur] {
            regs.push(Register::new(name.clone(), width, party.clone(), Role::Entangled));
        }
        let dim = 1usize << width;
        let mut block = CVector::zeros(dim * dim * dim);
        for (&x, &px) in law {
            if x >= dim {
                return Err(Error::InvalidInput(format!("value {x} does not fit `{input}`")));
            }
            block[(x * dim + x) * dim + x] = C64::new(px.sqrt(), 0.0);
        }
        prior = prior.kronecker(&block);
    }

    let derived = ProtocolProgram {
        parties: p.parties.clone(),
        registers: RegisterLayout::new(regs)?,
        prior_entanglement: if moved.is_empty() {
            p.prior_entanglement.clone()
        } else {
            PriorEntanglement::Raw { amplitudes: prior }
        },
        rounds: p.rounds.clone(),
        answer: p.answer.clone(),
    };
    derived.validate_with(SIM_MAX_WIDTH).into_result()?;
    Ok(derived)
}

/// The four AND cases on the live input registers of a derived protocol.
pub fn derived_and_cases(p: &ProtocolProgram) -> Result<Vec<(Inputs, usize)>> {
    let a = p.inputs_of(&p.parties[0]);
    let b = p.inputs_of(&p.parties[1]);
    if a.len() != 1 || b.len() != 1 {
        return Err(Error::InvalidProtocol("expected one live input per party".into()));
    }
    let mut out = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            out.push((inputs([(a[0].clone(), x), (b[0].clone(), y)]), x & y));
        }
    }
    Ok(out)
}

fn single(dist: &PartitionedInput) -> Result<PartitionedInput> {
    dist.clone().with_arity(1)
}

/// Loss of the derived protocol against the derived protocol's own term
/// and the source protocol's coordinate-`j` term in the branch
/// `D = embed(dhat, j, d)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermComparison {
    pub d: String,
    pub round: usize,
    pub derived: f64,
    pub source: f64,
}

impl TermComparison {
    pub fn holds(&self, slack: f64) -> bool {
        self.derived <= self.source + slack
    }
}

pub fn compare_terms(
    p: &ProtocolProgram,
    j: usize,
    dhat: &[usize],
    dist: &PartitionedInput,
) -> Result<Vec<TermComparison>> {
    let n = check_source(p, dist)?;
    let derived = derive_and_protocol(p, j, dhat, dist)?;
    let one = single(dist)?;
    let many = dist.clone().with_arity(n)?;
    let mut out = Vec::new();
    for d in 0..one.labels().len() {
        if one.prob_d(d) <= 0.0 {
            continue;
        }
        let cond = embed(dhat, j, d)?;
        let src = coordinate_terms(p, &many, j, &cond)?;
        let der = information_terms(&derived, &one, &[d])?;
        for (i, (s, t)) in src.into_iter().zip(der).enumerate() {
            out.push(TermComparison {
                d: one.labels()[d].clone(),
                round: i + 1,
                derived: t,
                source: s,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct DhatChoice {
    pub dhat: Vec<usize>,
    pub loss: InfoLossReport,
}

/// The off-coordinate assignment minimising the derived protocol's loss;
/// ties go to the first in lexicographic order.
pub fn best_dhat(p: &ProtocolProgram, j: usize, dist: &PartitionedInput) -> Result<DhatChoice> {
    let n = check_source(p, dist)?;
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, len: n });
    }
    let one = single(dist)?;
    let support: Vec<usize> = (0..one.labels().len()).filter(|&d| one.prob_d(d) > 0.0).collect();
    let mut best: Option<DhatChoice> = None;
    let mut idx = vec![0usize; n];
    loop {
        let dhat: Vec<usize> = (0..n).map(|l| if l == j { 0 } else { support[idx[l]] }).collect();
        let loss = information_loss(&derive_and_protocol(p, j, &dhat, dist)?, &one)?;
        if best.as_ref().is_none_or(|b| loss.total < b.loss.total) {
            best = Some(DhatChoice { dhat, loss });
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(best.expect("at least one assignment"));
            }
            k -= 1;
            if k == j {
                continue;
            }
            idx[k] += 1;
            if idx[k] < support.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Everything the reduction promises about one derived protocol.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub coordinate: usize,
    pub dhat: Vec<usize>,
    pub source_rounds: usize,
    pub source_qubits: usize,
    pub coordinates: usize,
    pub derived_error: f64,
    pub loss: InfoLossReport,
    /// `2kc/n`.
    pub upper_bound: f64,
    /// `(1 - 2ε)² / (4k)` with the derived protocol's error.
    pub lower_bound: f64,
    pub terms: Vec<TermComparison>,
    pub protocol: ProtocolProgram,
}

impl ReductionReport {
    pub fn sandwich_holds(&self, slack: f64) -> bool {
        self.loss.total <= self.upper_bound + slack && self.loss.total >= self.lower_bound - slack
    }

    pub fn terms_hold(&self, slack: f64) -> bool {
        self.terms.iter().all(|t| t.holds(slack))
    }
}

/// Derive at coordinate `j` (with `dhat`, or the best one when `None`) and
/// evaluate error, loss, bounds and the per-term comparison.
pub fn reduction_report(
    p: &ProtocolProgram,
    j: usize,
    dhat: Option<Vec<usize>>,
    dist: &PartitionedInput,
) -> Result<ReductionReport> {
    let n = check_source(p, dist)?;
    let dhat = match dhat {
        Some(d) => d,
        None => best_dhat(p, j, dist)?.dhat,
    };
    let derived = derive_and_protocol(p, j, &dhat, dist)?;
    let eps = error_probability(&derived, &derived_and_cases(&derived)?)?;
    let loss = information_loss(&derived, &single(dist)?)?.with_error(eps);
    let k = p.rounds();
    let c = p.communication();
    let lower = if k == 0 {
        0.0
    } else {
        (1.0 - 2.0 * eps).max(0.0).powi(2) / (4.0 * k as f64)
    };
    Ok(ReductionReport {
        coordinate: j,
        terms: compare_terms(p, j, &dhat, dist)?,
        dhat,
        source_rounds: k,
        source_qubits: c,
        coordinates: n,
        derived_error: eps,
        loss,
        upper_bound: 2.0 * (k * c) as f64 / n as f64,
        lower_bound: lower,
        protocol: derived,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::fixtures::disj;
    use crate::reductions::and_distribution;

    #[test]
    fn derived_disj_protocol_computes_and() {
        let p = disj(2, 2);
        for j in 0..2 {
            let d = derive_and_protocol(&p, j, &[0, 0], &and_distribution()).unwrap();
            assert!(error_probability(&d, &derived_and_cases(&d).unwrap()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn reduction_sandwich() {
        let r = reduction_report(&disj(2, 2), 0, None, &and_distribution()).unwrap();
        assert_eq!(r.upper_bound, 6.0);
        assert!(r.sandwich_holds(1e-6), "{r:?}");
        assert!(r.terms_hold(1e-8));
    }

    #[test]
    fn bad_arguments() {
        let p = disj(2, 2);
        let d = and_distribution();
        assert!(derive_and_protocol(&p, 2, &[0, 0], &d).is_err());
        assert!(derive_and_protocol(&p, 0, &[0], &d).is_err());
        assert!(derive_and_protocol(&p, 0, &[0, 5], &d).is_err());
    }
}
