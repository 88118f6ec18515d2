use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::and_distribution;
use crate::protocol::{fixtures, information_loss, IlTerm, PartitionedInput};
use crate::Result;

/// What a party can see while acting in a classical protocol.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LocalView {
    pub input: u8,
    /// Bits drawn for the current round; gone once the round ends.
    pub fresh: u8,
    /// Values kept from earlier rounds.
    pub memory: Vec<u8>,
    /// Messages received so far.
    pub received: Vec<u8>,
}

/// The persistent part of a view: input, memory and received messages.
pub type ClassicalState = (u8, Vec<u8>, Vec<u8>);

impl LocalView {
    fn state(&self) -> ClassicalState {
        (self.input, self.memory.clone(), self.received.clone())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClassicalRound {
    /// 0 for the first party, 1 for the second.
    pub sender: usize,
    pub fresh_bits: u32,
    pub message: fn(&LocalView) -> u8,
    /// Appended to the sender's memory after sending, if any.
    pub keep: fn(&LocalView) -> Option<u8>,
}

/// Deterministic two-party protocol driven by private fresh randomness.
#[derive(Debug, Clone)]
pub struct ClassicalProtocol {
    pub rounds: Vec<ClassicalRound>,
    pub answerer: usize,
    pub answer: fn(&LocalView) -> u8,
}

struct Run {
    weight: Rational64,
    /// Receiver state right after each round.
    observed: Vec<ClassicalState>,
    answer: u8,
}

impl ClassicalProtocol {
    /// Every execution on `(a, b)` with its probability.
    fn runs(&self, a: u8, b: u8) -> Vec<Run> {
        let start = [a, b].map(|input| LocalView {
            input,
            fresh: 0,
            memory: vec![],
            received: vec![],
        });
        let mut frontier = vec![(Rational64::from_integer(1), start, Vec::new())];
        for r in &self.rounds {
            let mut next = Vec::new();
            let outcomes = 1u32 << r.fresh_bits;
            let w = Rational64::new(1, outcomes as i64);
            for (weight, views, observed) in &frontier {
                for fresh in 0..outcomes {
                    let mut views = views.clone();
                    let me = &mut views[r.sender];
                    me.fresh = fresh as u8;
                    let msg = (r.message)(me);
                    if let Some(v) = (r.keep)(me) {
                        me.memory.push(v);
                    }
                    me.fresh = 0;
                    let them = &mut views[1 - r.sender];
                    them.received.push(msg);
                    let mut observed = observed.clone();
                    observed.push(them.state());
                    next.push((weight * w, views, observed));
                }
            }
            frontier = next;
        }
        frontier
            .into_iter()
            .map(|(weight, views, observed)| Run {
                weight,
                answer: (self.answer)(&views[self.answerer]),
                observed,
            })
            .collect()
    }

    /// Exact worst-case error against `f`.
    pub fn error(&self, f: impl Fn(u8, u8) -> u8) -> Rational64 {
        let mut worst = Rational64::zero();
        for a in 0..2 {
            for b in 0..2 {
                let e: Rational64 = self
                    .runs(a, b)
                    .iter()
                    .filter(|r| r.answer != f(a, b))
                    .map(|r| r.weight)
                    .sum();
                worst = worst.max(e);
            }
        }
        worst
    }

    /// Per-round information, given `D`, between the sender's input and the
    /// receiver's persistent state just after the round. Each entry is
    /// exactly 0 when the joint law factorises exactly.
    pub fn information_loss(&self, dist: &PartitionedInput) -> Vec<f64> {
        let mut terms = vec![0.0; self.rounds.len()];
        for d in 0..dist.labels().len() {
            let pd = dist.prob_d(d);
            if pd <= 0.0 {
                continue;
            }
            let mut joints: Vec<BTreeMap<(u8, ClassicalState), Rational64>> =
                vec![BTreeMap::new(); self.rounds.len()];
            for e in dist.table().iter().filter(|e| e.d == dist.labels()[d]) {
                let p = exact(e.p) / exact(pd);
                for run in self.runs(e.a as u8, e.b as u8) {
                    for (i, r) in self.rounds.iter().enumerate() {
                        let x = if r.sender == 0 { e.a } else { e.b } as u8;
                        *joints[i].entry((x, run.observed[i].clone())).or_default() +=
                            p * run.weight;
                    }
                }
            }
            for (t, joint) in terms.iter_mut().zip(&joints) {
                *t += pd * exact_mutual_information(joint);
            }
        }
        terms
    }
}

fn exact(p: f64) -> Rational64 {
    Rational64::approximate_float(p).expect("finite probability")
}

fn exact_mutual_information<K: Ord + Clone, V: Ord + Clone>(
    joint: &BTreeMap<(K, V), Rational64>,
) -> f64 {
    let mut px: BTreeMap<K, Rational64> = BTreeMap::new();
    let mut pv: BTreeMap<V, Rational64> = BTreeMap::new();
    for ((x, v), p) in joint {
        *px.entry(x.clone()).or_default() += p;
        *pv.entry(v.clone()).or_default() += p;
    }
    let product = |x: &K, v: &V| px[x] * pv[v];
    let factorises = px
        .keys()
        .all(|x| pv.keys().all(|v| joint.get(&(x.clone(), v.clone())).copied().unwrap_or_default() == product(x, v)));
    if factorises {
        return 0.0;
    }
    joint
        .iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|((x, v), p)| {
            let p = p.to_f64().unwrap();
            p * (p / product(x, v).to_f64().unwrap()).log2()
        })
        .sum()
}

/// First party sends a random bit and keeps it only if her input is 1; the
/// second replies with the random bit XOR his input.
pub fn classical_paradox() -> ClassicalProtocol {
    ClassicalProtocol {
        rounds: vec![
            ClassicalRound {
                sender: 0,
                fresh_bits: 1,
                message: |v| v.fresh,
                keep: |v| (v.input == 1).then_some(v.fresh),
            },
            ClassicalRound {
                sender: 1,
                fresh_bits: 0,
                message: |v| v.received[0] ^ v.input,
                keep: |_| None,
            },
        ],
        answerer: 0,
        answer: |v| match v.memory.first() {
            Some(r) => v.input & (v.received[0] ^ r),
            None => 0,
        },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ParadoxReport {
    pub classical_terms: Vec<f64>,
    pub classical_il: f64,
    /// Exact rational, as `p/q` or an integer.
    pub classical_error: String,
    pub quantum_terms: Vec<IlTerm>,
    pub quantum_il: f64,
    pub quantum_error: f64,
}

pub fn paradox_demo() -> Result<ParadoxReport> {
    let dist = and_distribution();
    let c = classical_paradox();
    let classical_terms = c.information_loss(&dist);
    let q = fixtures::paradox();
    let loss = information_loss(&q, &dist)?;
    Ok(ParadoxReport {
        classical_il: classical_terms.iter().sum(),
        classical_terms,
        classical_error: c.error(|a, b| a & b).to_string(),
        quantum_il: loss.total,
        quantum_terms: loss.terms,
        quantum_error: crate::protocol::error_probability(&q, &fixtures::and_cases())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_side_is_exact() {
        let r = paradox_demo().unwrap();
        assert_eq!(r.classical_error, "0");
        assert_eq!(r.classical_il, 0.0);
        assert!(r.quantum_il > 0.01);
        assert!(r.quantum_error < 1e-12);
    }

    #[test]
    fn keeping_the_bit_always_leaks() {
        let mut c = classical_paradox();
        c.rounds[0].keep = |v| Some(v.fresh);
        let terms = c.information_loss(&and_distribution());
        assert_eq!(terms[0], 0.0);
        assert!((terms[1] - 0.5).abs() < 1e-12);
    }
}
