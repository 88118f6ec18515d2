use rand::seq::SliceRandom;
use serde::Serialize;

use crate::qmat::SeededRng;
use crate::{Error, Result};

/// Largest ground set for promise instances.
pub const MAX_PROMISE_N: usize = 8;
/// Instance sets larger than this are sampled instead of enumerated.
pub const MAX_ENUMERATED: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PromiseKind {
    /// `t` subsets of `[n]`, either pairwise disjoint (label 0) or sharing
    /// exactly one element and otherwise pairwise disjoint (label 1).
    Disjointness { parties: usize },
    /// Two vectors over `{0, ..., m}`: every coordinate differs by at most
    /// 1 (label 0) or some coordinate differs by at least `m` (label 1).
    Linf { m: usize },
}

/// One input per party, as 0/1 membership vectors (disjointness) or
/// coordinate values (`L∞`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PromiseInstance {
    pub inputs: Vec<Vec<usize>>,
    pub label: usize,
}

impl PromiseKind {
    /// Whether `inputs` satisfies the promise, and its label.
    pub fn classify(&self, inputs: &[Vec<usize>]) -> Option<usize> {
        match *self {
            PromiseKind::Disjointness { parties } => {
                if inputs.len() != parties {
                    return None;
                }
                let n = inputs.first()?.len();
                let mut common = 0;
                for l in 0..n {
                    match inputs.iter().filter(|s| s[l] == 1).count() {
                        0 | 1 => {}
                        c if c == parties => common += 1,
                        _ => return None,
                    }
                }
                match common {
                    0 => Some(0),
                    1 => Some(1),
                    _ => None,
                }
            }
            PromiseKind::Linf { m } => {
                let [x, y] = inputs else { return None };
                let gap = x.iter().zip(y).map(|(a, b)| a.abs_diff(*b)).max().unwrap_or(0);
                if gap <= 1 {
                    Some(0)
                } else if gap >= m {
                    Some(1)
                } else {
                    None
                }
            }
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > MAX_PROMISE_N {
            return Err(Error::Infeasible(format!("n = {n} outside 1..={MAX_PROMISE_N}")));
        }
        match *self {
            PromiseKind::Disjointness { parties } if parties < 2 => {
                Err(Error::Infeasible("promise disjointness needs at least two parties".into()))
            }
            PromiseKind::Linf { m } if m < 2 => {
                Err(Error::Infeasible("the L∞ gap needs m ≥ 2".into()))
            }
            _ => Ok(()),
        }
    }
}

fn disjointness_all(t: usize, n: usize) -> Vec<PromiseInstance> {
    // each element goes to one party, to nobody, or (once) to everybody
    let mut out = Vec::new();
    let choices = t + 1;
    let total = choices.pow(n as u32);
    for common in std::iter::once(None).chain((0..n).map(Some)) {
        for code in 0..total {
            let mut sets = vec![vec![0; n]; t];
            let mut c = code;
            let mut skip = false;
            for l in 0..n {
                let owner = c % choices;
                c /= choices;
                if Some(l) == common {
                    if owner != 0 {
                        skip = true;
                        break;
                    }
                    sets.iter_mut().for_each(|s| s[l] = 1);
                } else if owner > 0 {
                    sets[owner - 1][l] = 1;
                }
            }
            if !skip {
                out.push(PromiseInstance {
                    inputs: sets,
                    label: common.is_some() as usize,
                });
            }
        }
    }
    out
}

fn linf_all(m: usize, n: usize) -> Vec<PromiseInstance> {
    let kind = PromiseKind::Linf { m };
    let q = m + 1;
    let vectors: Vec<Vec<usize>> = (0..q.pow(n as u32))
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let v = c % q;
                    c /= q;
                    v
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for x in &vectors {
        for y in &vectors {
            let inputs = vec![x.clone(), y.clone()];
            if let Some(label) = kind.classify(&inputs) {
                out.push(PromiseInstance { inputs, label });
            }
        }
    }
    out
}

fn linf_sample(m: usize, n: usize, count: usize, rng: &mut SeededRng) -> Vec<PromiseInstance> {
    (0..count)
        .map(|i| {
            let mut x: Vec<usize> = (0..n).map(|_| rng.range(0, m)).collect();
            let mut y: Vec<usize> = x
                .iter()
                .map(|&v| (v + rng.range(0, 2)).saturating_sub(1).min(m))
                .collect();
            let label = i % 2;
            if label == 1 {
                // a gap of m within {0, ..., m} is only 0 against m
                let l = rng.range(0, n - 1);
                let low = rng.coin();
                x[l] = if low { 0 } else { m };
                y[l] = m - x[l];
            }
            PromiseInstance {
                inputs: vec![x, y],
                label,
            }
        })
        .collect()
}

/// Instances satisfying the promise, each with its label. Enumerates every
/// instance when there are at most `limit` (and at most
/// [`MAX_ENUMERATED`]); otherwise returns `limit` instances chosen with
/// `rng`, half of each label where possible.
pub fn promise_instances(
    kind: PromiseKind,
    n: usize,
    limit: usize,
    rng: &mut SeededRng,
) -> Result<Vec<PromiseInstance>> {
    kind.check(n)?;
    if limit == 0 {
        return Err(Error::Infeasible("limit must be positive".into()));
    }
    let (mut all, exhaustive) = match kind {
        PromiseKind::Disjointness { parties } => {
            let size = (parties + 1).saturating_pow(n as u32).saturating_mul(n + 1);
            if size > MAX_ENUMERATED {
                return Err(Error::Infeasible(format!("{size} instances to enumerate")));
            }
            (disjointness_all(parties, n), true)
        }
        PromiseKind::Linf { m } => {
            let size = (m + 1).saturating_pow(2 * n as u32);
            if size > MAX_ENUMERATED {
                (linf_sample(m, n, limit, rng), false)
            } else {
                (linf_all(m, n), true)
            }
        }
    };
    if exhaustive && all.len() > limit {
        all.shuffle(rng.inner());
        all.truncate(limit);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjointness_labels() {
        let mut rng = SeededRng::new(1);
        let all = promise_instances(PromiseKind::Disjointness { parties: 3 }, 4, usize::MAX, &mut rng).unwrap();
        assert_eq!(all.len(), 4usize.pow(4) + 4 * 4usize.pow(3));
        let kind = PromiseKind::Disjointness { parties: 3 };
        for i in &all {
            assert_eq!(kind.classify(&i.inputs), Some(i.label));
        }
        let disjoint = vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 1]];
        assert_eq!(kind.classify(&disjoint), Some(0));
        let unique = vec![vec![1, 0, 0, 0], vec![1, 1, 0, 0], vec![1, 0, 1, 1]];
        assert_eq!(kind.classify(&unique), Some(1));
    }

    #[test]
    fn linf_labels() {
        let kind = PromiseKind::Linf { m: 2 };
        assert_eq!(kind.classify(&[vec![0, 1, 2], vec![1, 1, 1]]), Some(0));
        assert_eq!(kind.classify(&[vec![0, 1, 2], vec![2, 1, 1]]), Some(1));
        let mut rng = SeededRng::new(3);
        for i in promise_instances(kind, 3, usize::MAX, &mut rng).unwrap() {
            assert_eq!(kind.classify(&i.inputs), Some(i.label));
        }
        let kind = PromiseKind::Linf { m: 3 };
        let s = promise_instances(kind, 8, 100, &mut rng).unwrap();
        assert_eq!(s.len(), 100);
        for i in &s {
            assert_eq!(kind.classify(&i.inputs), Some(i.label));
        }
    }
}
