use super::linalg::psd_eig;
use super::{hermitian_deviation, CMatrix};
use crate::{Error, Result, TOL};

/// Positive operator-valued measure: PSD effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<CMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<CMatrix>) -> Result<Self> {
        let dim = effects
            .first()
            .ok_or_else(|| Error::InvalidPovm("no effects".into()))?
            .nrows();
        let mut sum = CMatrix::zeros(dim, dim);
        for (i, e) in effects.iter().enumerate() {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(Error::InvalidPovm(format!("effect {i} has the wrong shape")));
            }
            if hermitian_deviation(e) > TOL.hermitian {
                return Err(Error::InvalidPovm(format!("effect {i} is not Hermitian")));
            }
            psd_eig(e).map_err(|_| Error::InvalidPovm(format!("effect {i} is not PSD")))?;
            sum += e;
        }
        let dev = (sum - CMatrix::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > TOL.povm {
            return Err(Error::InvalidPovm(format!(
                "effects sum to the identity only within {dev:.3e}"
            )));
        }
        Ok(Self { effects })
    }

    /// Projective measurement onto the columns of a unitary.
    pub fn from_basis(u: &CMatrix) -> Result<Self> {
        Self::new(
            (0..u.ncols())
                .map(|j| {
                    let v = u.column(j);
                    &v * v.adjoint()
                })
                .collect(),
        )
    }

    /// Measurement in the computational basis.
    pub fn computational(dim: usize) -> Self {
        Self::from_basis(&CMatrix::identity(dim, dim)).expect("identity basis")
    }

    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].nrows()
    }
}
