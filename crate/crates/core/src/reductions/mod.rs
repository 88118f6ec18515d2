//! Reductions between problems and the finite checks built on them:
//! embedding and collapsing inputs, the AND input distribution, deriving an
//! AND protocol from a many-coordinate one, auditing round elimination,
//! monotone sensitivity, the classical/quantum information-loss paradox
//! and promise instance sets.

mod audit;
mod derive;
mod paradox;
mod promise;
mod sensitivity;

pub use audit::{round_elimination_audit, AuditReport, AuditStep};
pub use derive::{
    best_dhat, compare_terms, derive_and_protocol, derived_and_cases, reduction_report,
    DhatChoice, ReductionReport, TermComparison,
};
pub use paradox::{
    classical_paradox, paradox_demo, ClassicalProtocol, ClassicalRound, LocalView, ParadoxReport,
};
pub use promise::{promise_instances, PromiseInstance, PromiseKind};
pub use sensitivity::{monotone_sensitivity, BooleanSetFunction};

use crate::protocol::{InputEntry, PartitionedInput};
use crate::{Error, Result};

/// `a` with coordinate `j` replaced by `u`.
pub fn embed<T: Clone>(a: &[T], j: usize, u: T) -> Result<Vec<T>> {
    if j >= a.len() {
        return Err(Error::IndexOutOfRange { index: j, len: a.len() });
    }
    let mut out = a.to_vec();
    out[j] = u;
    Ok(out)
}

/// Total function on `X^n` for a finite alphabet `X = {0, ..., q-1}`,
/// tabulated with the first coordinate most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleFunction {
    alphabet: usize,
    arity: usize,
    values: Vec<usize>,
}

impl TupleFunction {
    pub fn new(alphabet: usize, arity: usize, values: Vec<usize>) -> Result<Self> {
        let size = alphabet
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::Infeasible("table too large".into()))?;
        if alphabet == 0 || values.len() != size {
            return Err(Error::InvalidInput(format!(
                "table of length {} for {alphabet}^{arity} inputs",
                values.len()
            )));
        }
        Ok(Self {
            alphabet,
            arity,
            values,
        })
    }

    pub fn from_fn(alphabet: usize, arity: usize, f: impl Fn(&[usize]) -> usize) -> Result<Self> {
        let size = alphabet
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::Infeasible("table too large".into()))?;
        let values = (0..size)
            .map(|i| f(&Self::decode(alphabet, arity, i)))
            .collect();
        Self::new(alphabet, arity, values)
    }

    fn decode(alphabet: usize, arity: usize, mut i: usize) -> Vec<usize> {
        let mut x = vec![0; arity];
        for k in (0..arity).rev() {
            x[k] = i % alphabet;
            i /= alphabet;
        }
        x
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, x: &[usize]) -> Result<usize> {
        if x.len() != self.arity {
            return Err(Error::InvalidInput(format!(
                "tuple of length {} for a function of arity {}",
                x.len(),
                self.arity
            )));
        }
        let mut i = 0;
        for &v in x {
            if v >= self.alphabet {
                return Err(Error::InvalidInput(format!("symbol {v} outside the alphabet")));
            }
            i = i * self.alphabet + v;
        }
        Ok(self.values[i])
    }
}

/// Symbol of the pair alphabet `{0,1}²` for `(a, b)`.
pub fn pair(a: usize, b: usize) -> usize {
    2 * a + b
}

/// `(a, b)` for a pair symbol.
pub fn unpair(v: usize) -> (usize, usize) {
    (v >> 1, v & 1)
}

/// AND on the pair alphabet.
pub fn and_function() -> TupleFunction {
    TupleFunction::from_fn(4, 1, |x| {
        let (a, b) = unpair(x[0]);
        a & b
    })
    .expect("fixed size")
}

/// Intersection indicator of two subsets of `[n]`, as a function of the
/// `n` coordinate pairs.
pub fn disj_function(n: usize) -> Result<TupleFunction> {
    TupleFunction::from_fn(4, n, |x| {
        x.iter().any(|&v| unpair(v) == (1, 1)) as usize
    })
}

/// Whether `x` collapses `f` to `h` at coordinate `j`:
/// `f(embed(x, j, u)) = h(u)` for every symbol `u`.
pub fn collapses(f: &TupleFunction, x: &[usize], j: usize, h: &TupleFunction) -> Result<bool> {
    if h.arity != 1 || h.alphabet != f.alphabet {
        return Err(Error::InvalidInput("h must be a one-coordinate function on the same alphabet".into()));
    }
    for u in 0..f.alphabet {
        if f.eval(&embed(x, j, u)?)? != h.eval(&[u])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`collapses`] at every coordinate.
pub fn collapses_everywhere(f: &TupleFunction, x: &[usize], h: &TupleFunction) -> Result<bool> {
    for j in 0..f.arity {
        if !collapses(f, x, j, h)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The AND input law: `D ∈ {A, B}` uniform; given `D = A` Bob's bit is 0
/// and Alice's is uniform, given `D = B` the roles swap.
pub fn and_distribution() -> PartitionedInput {
    let e = |a, b, d: &str| InputEntry {
        a,
        b,
        d: d.into(),
        p: 0.25,
    };
    PartitionedInput::new(
        vec!["A".into(), "B".into()],
        vec![e(0, 0, "A"), e(1, 0, "A"), e(0, 0, "B"), e(0, 1, "B")],
        1,
    )
    .expect("valid table")
}
