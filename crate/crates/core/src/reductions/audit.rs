use serde::Serialize;

use crate::metrics::{
    encoding_information, fidelity, pure_trace_distance, total_variation, trace_distance,
    ClassicalDistribution, EncodingEnsemble,
};
use crate::protocol::{
    error_probability, information_loss, inputs, purification_name, simulate,
    simulate_distribution, PartitionedInput, ProtocolProgram, SimulationTrace,
};
use crate::purify::{schmidt_transition, Completion};
use crate::{Error, Result};

/// Slack on the chain links.
pub const LINK_SLACK: f64 = 1e-6;
/// Slack on the remaining audit inequalities.
pub const AUDIT_SLACK: f64 = 1e-9;

/// One time step of the audit. At a step where `mover` is the first party,
/// a unitary on her registers is built to take `φ₀₀` towards `φ₁₀` and
/// `delta = ‖V φ₀₁ − φ₁₁‖`; for the second party the roles of the two
/// coordinates swap.
#[derive(Debug, Clone, Serialize)]
pub struct AuditStep {
    pub time: usize,
    pub mover: String,
    /// `I(mover's input : other party's registers | D)`.
    pub cost: f64,
    /// The same information with the other input fixed to 0 and the mover's
    /// input uniform.
    pub cost_given_zero: f64,
    /// `B(β₀₀, β₁₀)`, the second party's states for the two values of the
    /// first party's input.
    pub fidelity_b: f64,
    /// `B(α₀₀, α₀₁)`.
    pub fidelity_a: f64,
    pub transition_overlap: f64,
    /// `‖V φ₀₀ − φ₁₀‖` (first party) or `‖V φ₀₀ − φ₀₁‖` (second).
    pub transition_distance: f64,
    /// `4 √cost`.
    pub transition_bound: f64,
    /// `2 √(2 cost_given_zero)`.
    pub transition_tight_bound: f64,
    pub delta: f64,
    /// `4 √cost_{t-1} + 4 √cost_t + δ_{t-1}`.
    pub link_bound: Option<f64>,
    /// `d_{t-1} + d_t + δ_{t-1}` with the achieved transition distances.
    pub triangle_bound: Option<f64>,
}

impl AuditStep {
    pub fn transition_holds(&self) -> bool {
        self.transition_distance <= self.transition_bound + AUDIT_SLACK
            && self.transition_distance <= self.transition_tight_bound + AUDIT_SLACK
            && 1.0 - self.transition_overlap <= self.cost_given_zero + AUDIT_SLACK
    }

    pub fn link_holds(&self) -> bool {
        self.link_bound.is_none_or(|b| self.delta <= b + LINK_SLACK)
    }

    pub fn triangle_holds(&self) -> bool {
        self.triangle_bound.is_none_or(|b| self.delta <= b + AUDIT_SLACK)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub rounds: usize,
    pub steps: Vec<AuditStep>,
    pub delta_final: f64,
    /// Trace distance between the answering party's final states on the
    /// two inputs that `delta_final` compares.
    pub remote_distance: f64,
    /// Total variation between the answer distributions on those inputs.
    pub answer_variation: f64,
    pub error: f64,
    /// `2 - 4ε`.
    pub endpoint_bound: f64,
    /// Information loss of the protocol.
    pub eta: f64,
    /// Sum of the step costs after time 0.
    pub eta_from_costs: f64,
    /// `4k √(η/k)`.
    pub concavity_bound: f64,
    /// `8k √(η/k)`, what chaining the links gives.
    pub chain_sum_bound: f64,
}

impl AuditReport {
    pub fn delta0(&self) -> f64 {
        self.steps[0].delta
    }

    pub fn links_hold(&self) -> bool {
        self.steps.iter().all(AuditStep::link_holds)
    }

    pub fn triangles_hold(&self) -> bool {
        self.steps.iter().all(AuditStep::triangle_holds)
    }

    pub fn transitions_hold(&self) -> bool {
        self.steps.iter().all(AuditStep::transition_holds)
    }

    /// `δ_k ≥ remote ≥ variation ≥ 2 - 4ε`.
    pub fn endpoint_holds(&self) -> bool {
        self.delta_final >= self.remote_distance - AUDIT_SLACK
            && self.remote_distance >= self.answer_variation - AUDIT_SLACK
            && self.answer_variation >= self.endpoint_bound - AUDIT_SLACK
    }

    pub fn concavity_holds(&self) -> bool {
        self.delta_final <= self.concavity_bound + AUDIT_SLACK
    }

    pub fn chain_sum_holds(&self) -> bool {
        self.delta_final <= self.chain_sum_bound + AUDIT_SLACK
    }

    pub fn is_finite(&self) -> bool {
        let ok = |x: f64| x.is_finite() && x >= -AUDIT_SLACK;
        self.steps.iter().all(|s| {
            [
                s.cost,
                s.cost_given_zero,
                s.fidelity_a,
                s.fidelity_b,
                s.transition_distance,
                s.delta,
            ]
            .into_iter()
            .all(ok)
        }) && ok(self.eta)
    }
}

fn check_and_protocol(p: &ProtocolProgram, dist: &PartitionedInput) -> Result<(String, String)> {
    if p.parties.len() != 2 {
        return Err(Error::UnsupportedParties(p.parties.len()));
    }
    let a = p.inputs_of(&p.parties[0]);
    let b = p.inputs_of(&p.parties[1]);
    if a.len() != 1 || b.len() != 1 {
        return Err(Error::Audit("each party needs exactly one input register".into()));
    }
    for r in [&a[0], &b[0], &p.answer.register] {
        if p.registers.register(r)?.width != 1 {
            return Err(Error::Audit(format!("register `{r}` is not a single bit")));
        }
    }
    if dist.arity() != 1 || dist.max_value() > 1 {
        return Err(Error::Audit("distribution is not over single bit pairs".into()));
    }
    Ok((a[0].clone(), b[0].clone()))
}

/// Audit the round-elimination argument on a two-party AND protocol.
pub fn round_elimination_audit(p: &ProtocolProgram, dist: &PartitionedInput) -> Result<AuditReport> {
    let (ia, ib) = check_and_protocol(p, dist)?;
    let (alice, bob) = (p.parties[0].clone(), p.parties[1].clone());
    let k = p.rounds();
    let run = |x: usize, y: usize| simulate(p, &inputs([(ia.clone(), x), (ib.clone(), y)]));
    let phi: [[SimulationTrace; 2]; 2] = [[run(0, 0)?, run(0, 1)?], [run(1, 0)?, run(1, 1)?]];

    let other = |s: &str| if s == alice { bob.clone() } else { alice.clone() };
    let movers: Vec<String> = (0..=k)
        .map(|t| match t {
            0 => match p.rounds.first() {
                Some(r) => other(&r.sender),
                None => other(&p.answer.party),
            },
            _ => p.rounds[t - 1].sender.clone(),
        })
        .collect();

    let branches: Vec<(f64, SimulationTrace)> = dist
        .conditions()
        .into_iter()
        .map(|(c, w)| Ok((w, simulate_distribution(p, dist, &c)?)))
        .collect::<Result<_>>()?;
    let cost = |t: usize, mover: &str| -> Result<f64> {
        let input = if mover == alice { &ia } else { &ib };
        let pur = [purification_name(input)];
        let mut total = 0.0;
        for (w, tr) in &branches {
            let seen = tr.owned_by(t, &other(mover));
            if !seen.is_empty() {
                total += w * tr.at(t).mutual_information(&pur, &seen)?.max(0.0);
            }
        }
        Ok(total)
    };

    let mut steps: Vec<AuditStep> = Vec::with_capacity(k + 1);
    for (t, mover) in movers.iter().enumerate() {
        let st = |x: usize, y: usize| phi[x][y].at(t);
        let regs_a = st(0, 0).layout().owned_by(&alice);
        let regs_b = st(0, 0).layout().owned_by(&bob);
        let alpha = |x, y| st(x, y).reduced(&regs_a);
        let beta = |x, y| st(x, y).reduced(&regs_b);
        let fidelity_b = fidelity(&beta(0, 0)?, &beta(1, 0)?)?;
        let fidelity_a = fidelity(&alpha(0, 0)?, &alpha(0, 1)?)?;

        // target and probe pairs: (φ₁₀, φ₀₁ → φ₁₁) or (φ₀₁, φ₁₀ → φ₁₁)
        let first = *mover == alice;
        let (target, probe, reference, remote) = if first {
            (st(1, 0), st(0, 1), &regs_a, EncodingEnsemble::uniform(vec![beta(0, 0)?, beta(1, 0)?])?)
        } else {
            (st(0, 1), st(1, 0), &regs_b, EncodingEnsemble::uniform(vec![alpha(0, 0)?, alpha(0, 1)?])?)
        };
        let tr = schmidt_transition(target, st(0, 0), reference, Completion::default())?;
        let moved = probe.apply_on(reference, &tr.unitary)?;
        let delta = pure_trace_distance(moved.amplitudes(), st(1, 1).amplitudes());
        let c = cost(t, mover)?;
        let cz = encoding_information(&remote);
        let (link_bound, triangle_bound) = match steps.last() {
            Some(prev) => (
                Some(4.0 * prev.cost.sqrt() + 4.0 * c.sqrt() + prev.delta),
                Some(prev.transition_distance + tr.trace_distance + prev.delta),
            ),
            None => (None, None),
        };
        steps.push(AuditStep {
            time: t,
            mover: mover.clone(),
            cost: c,
            cost_given_zero: cz,
            fidelity_b,
            fidelity_a,
            transition_overlap: tr.overlap,
            transition_distance: tr.trace_distance,
            transition_bound: 4.0 * c.sqrt(),
            transition_tight_bound: 2.0 * (2.0 * cz).sqrt(),
            delta,
            link_bound,
            triangle_bound,
        });
    }

    let last = steps.last().expect("time 0 exists");
    let first_final = last.mover == alice;
    let (u, v) = if first_final {
        (&phi[0][1], &phi[1][1])
    } else {
        (&phi[1][0], &phi[1][1])
    };
    let answerer = other(&last.mover);
    let regs = u.final_state().layout().owned_by(&answerer);
    let remote_distance = trace_distance(
        &u.final_state().reduced(&regs)?,
        &v.final_state().reduced(&regs)?,
    )?;
    let answer_variation = total_variation(
        &ClassicalDistribution::from_probs(u.answer_distribution())?,
        &ClassicalDistribution::from_probs(v.answer_distribution())?,
    )?;

    let mut cases = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            cases.push((inputs([(ia.clone(), x), (ib.clone(), y)]), x & y));
        }
    }
    let error = error_probability(p, &cases)?;
    let eta = information_loss(p, dist)?.total;
    let kf = k as f64;
    let root = if k == 0 { 0.0 } else { (eta / kf).sqrt() };
    Ok(AuditReport {
        rounds: k,
        delta_final: last.delta,
        remote_distance,
        answer_variation,
        error,
        endpoint_bound: 2.0 - 4.0 * error,
        eta,
        eta_from_costs: steps[1..].iter().map(|s| s.cost).sum(),
        concavity_bound: 4.0 * kf * root,
        chain_sum_bound: 8.0 * kf * root,
        steps,
    })
}
