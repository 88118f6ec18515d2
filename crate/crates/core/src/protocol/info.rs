use rayon::prelude::*;
use serde::Serialize;

use super::input::PartitionedInput;
use super::program::ProtocolProgram;
use super::simulate::{purification_name, simulate_distribution, SimulationTrace};
use crate::{Error, Result};

/// One round's contribution: what the receiver's registers just after the
/// message know about the sender's input, given `D`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IlTerm {
    pub round: usize,
    pub sender: String,
    pub receiver: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfoLossReport {
    pub terms: Vec<IlTerm>,
    pub total: f64,
    /// Worst-case error, when a target function was supplied.
    pub error: Option<f64>,
    pub rounds: usize,
    pub qubits: usize,
}

impl InfoLossReport {
    pub fn with_error(mut self, error: f64) -> Self {
        self.error = Some(error);
        self
    }

    /// `(1 - 2ε)² / (4k)`, the smallest loss an `ε`-error `k`-round AND
    /// protocol can have; `None` without an error value or rounds.
    pub fn and_lower_bound(&self) -> Option<f64> {
        let eps = self.error?;
        (self.rounds > 0).then(|| (1.0 - 2.0 * eps).powi(2) / (4.0 * self.rounds as f64))
    }
}

fn two_party(p: &ProtocolProgram) -> Result<()> {
    if p.parties.len() != 2 {
        return Err(Error::UnsupportedParties(p.parties.len()));
    }
    Ok(())
}

/// `I(sender's purified inputs : registers of observer)` at `time`.
/// `coordinate` restricts the inputs to the sender's `j`-th input register.
fn knowledge(
    p: &ProtocolProgram,
    trace: &SimulationTrace,
    time: usize,
    sender: &str,
    observer: &str,
    coordinate: Option<usize>,
) -> Result<f64> {
    let inputs = p.inputs_of(sender);
    let purs: Vec<String> = match coordinate {
        Some(j) => inputs.get(j).map(|r| purification_name(r)).into_iter().collect(),
        None => inputs.iter().map(|r| purification_name(r)).collect(),
    };
    let seen = trace.owned_by(time, observer);
    if purs.is_empty() || seen.is_empty() {
        return Ok(0.0);
    }
    Ok(trace.at(time).mutual_information(&purs, &seen)?.max(0.0))
}

fn traces(p: &ProtocolProgram, dist: &PartitionedInput) -> Result<Vec<(f64, SimulationTrace)>> {
    dist.conditions()
        .into_par_iter()
        .map(|(c, w)| Ok((w, simulate_distribution(p, dist, &c)?)))
        .collect()
}

/// Per-round terms in the branch `D = condition`.
pub fn information_terms(
    p: &ProtocolProgram,
    dist: &PartitionedInput,
    condition: &[usize],
) -> Result<Vec<f64>> {
    two_party(p)?;
    let trace = simulate_distribution(p, dist, condition)?;
    round_terms(p, &trace, None)
}

/// Per-round terms restricted to the sender's `j`-th coordinate, in the
/// branch `D = condition`.
pub fn coordinate_terms(
    p: &ProtocolProgram,
    dist: &PartitionedInput,
    j: usize,
    condition: &[usize],
) -> Result<Vec<f64>> {
    two_party(p)?;
    if j >= dist.arity() {
        return Err(Error::IndexOutOfRange {
            index: j,
            len: dist.arity(),
        });
    }
    let trace = simulate_distribution(p, dist, condition)?;
    round_terms(p, &trace, Some(j))
}

fn round_terms(p: &ProtocolProgram, trace: &SimulationTrace, coordinate: Option<usize>) -> Result<Vec<f64>> {
    p.rounds
        .iter()
        .enumerate()
        .map(|(i, r)| knowledge(p, trace, i + 1, &r.sender, &r.receiver, coordinate))
        .collect()
}

/// Conditional information loss: for each round, the receiver's
/// information about the sender's input just after the message, averaged
/// over `D`. For a protocol where the first party starts and turns
/// alternate this is the usual odd/even sum; otherwise each round is
/// charged to its own sender.
pub fn information_loss(p: &ProtocolProgram, dist: &PartitionedInput) -> Result<InfoLossReport> {
    two_party(p)?;
    let branches = traces(p, dist)?;
    let mut values = vec![0.0; p.rounds.len()];
    for (w, trace) in &branches {
        for (v, t) in values.iter_mut().zip(round_terms(p, trace, None)?) {
            *v += w * t;
        }
    }
    let terms: Vec<IlTerm> = p
        .rounds
        .iter()
        .zip(values)
        .enumerate()
        .map(|(i, (r, v))| IlTerm {
            round: i + 1,
            sender: r.sender.clone(),
            receiver: r.receiver.clone(),
            value: v.max(0.0),
        })
        .collect();
    Ok(InfoLossReport {
        total: terms.iter().fold(0.0, |acc, t| acc + t.value),
        terms,
        error: None,
        rounds: p.rounds.len(),
        qubits: p.communication(),
    })
}

/// Information one party's registers hold about the other's input at some
/// time, next to the number of qubits the input's owner had sent so far.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CleveEntry {
    pub time: usize,
    pub from: String,
    pub to: String,
    pub information: f64,
    pub sent: usize,
}

impl CleveEntry {
    pub fn holds(&self, slack: f64) -> bool {
        self.information <= 2.0 * self.sent as f64 + slack
    }
}

/// Every prefix of the protocol, both directions.
pub fn cleve_profile(p: &ProtocolProgram, dist: &PartitionedInput) -> Result<Vec<CleveEntry>> {
    two_party(p)?;
    let branches = traces(p, dist)?;
    let mut out = Vec::new();
    for time in 0..=p.rounds.len() {
        for (from, to) in [(0, 1), (1, 0)] {
            let (from, to) = (&p.parties[from], &p.parties[to]);
            let mut information = 0.0;
            for (w, trace) in &branches {
                information += w * knowledge(p, trace, time, from, to, None)?;
            }
            let sent = p.rounds[..time]
                .iter()
                .filter(|r| &r.sender == from)
                .map(|r| p.transfer_width(r))
                .sum();
            out.push(CleveEntry {
                time,
                from: from.clone(),
                to: to.clone(),
                information,
                sent,
            });
        }
    }
    Ok(out)
}

/// Per-coordinate informations next to the joint one, at one time and
/// direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubadditivityEntry {
    pub time: usize,
    pub from: String,
    pub to: String,
    pub coordinates: Vec<f64>,
    pub joint: f64,
}

impl SubadditivityEntry {
    pub fn sum(&self) -> f64 {
        self.coordinates.iter().sum()
    }

    pub fn holds(&self, slack: f64) -> bool {
        self.sum() <= self.joint + slack
    }
}

pub fn subadditivity_profile(
    p: &ProtocolProgram,
    dist: &PartitionedInput,
) -> Result<Vec<SubadditivityEntry>> {
    two_party(p)?;
    let branches = traces(p, dist)?;
    let n = dist.arity();
    let mut out = Vec::new();
    for time in 0..=p.rounds.len() {
        for (from, to) in [(0, 1), (1, 0)] {
            let (from, to) = (&p.parties[from], &p.parties[to]);
            let mut coordinates = vec![0.0; n];
            let mut joint = 0.0;
            for (w, trace) in &branches {
                joint += w * knowledge(p, trace, time, from, to, None)?;
                for (j, c) in coordinates.iter_mut().enumerate() {
                    *c += w * knowledge(p, trace, time, from, to, Some(j))?;
                }
            }
            out.push(SubadditivityEntry {
                time,
                from: from.clone(),
                to: to.clone(),
                coordinates,
                joint,
            });
        }
    }
    Ok(out)
}
