use super::layout::{RegisterLayout, DEFAULT_MAX_WIDTH};
use super::linalg::psd_eig;
use super::{hermitian_deviation, hermitize, kron, projector, trace, CMatrix, CVector, Tensor};
use crate::{Error, Result, TOL};

/// Hermitian, PSD, unit-trace operator, optionally labeled by qubit
/// registers.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    layout: Option<RegisterLayout>,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity (eigenvalues down to
    /// `-psd_clamp` are accepted as numerical drift).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch("empty operator".into()));
        }
        let dev = hermitian_deviation(&matrix);
        if dev > TOL.hermitian {
            return Err(Error::NotHermitian(dev));
        }
        let tr = trace(&matrix);
        if (tr.re - 1.0).abs() > TOL.trace || tr.im.abs() > TOL.trace {
            return Err(Error::BadTrace(tr.re));
        }
        psd_eig(&matrix)?;
        Ok(Self {
            layout: None,
            matrix: hermitize(&matrix),
        })
    }

    /// Wraps a matrix known to be a density operator (Gram matrices of
    /// normalized states, convex mixtures, partial traces).
    pub(crate) fn new_unchecked(matrix: CMatrix) -> Self {
        Self {
            layout: None,
            matrix: hermitize(&matrix),
        }
    }

    pub fn with_layout(mut self, layout: RegisterLayout) -> Result<Self> {
        if layout.total_width() >= usize::BITS as usize || layout.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "layout of width {} does not fit an operator of dimension {}",
                layout.total_width(),
                self.dim()
            )));
        }
        self.layout = Some(layout);
        Ok(self)
    }

    pub fn from_pure(v: &CVector) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > TOL.norm * 10.0 {
            return Err(Error::BadNorm(norm));
        }
        Ok(Self::new_unchecked(projector(v)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new_unchecked(CMatrix::identity(dim, dim).unscale(dim as f64))
    }

    /// Convex combination `Σ p_i ρ_i` of operators on a common space.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidDistribution("empty mixture".into()))?;
        let dim = first.1.dim();
        let total: f64 = parts.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > TOL.ensemble || parts.iter().any(|(p, _)| *p < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "mixture weights sum to {total}"
            )));
        }
        let mut m = CMatrix::zeros(dim, dim);
        for (p, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch("mixture components".into()));
            }
            m += rho.matrix().scale(*p);
        }
        Ok(Self {
            layout: first.1.layout.clone(),
            matrix: m,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn layout(&self) -> Option<&RegisterLayout> {
        self.layout.as_ref()
    }

    fn require_layout(&self) -> Result<&RegisterLayout> {
        self.layout
            .as_ref()
            .ok_or_else(|| Error::InvalidLayout("operator carries no register layout".into()))
    }

    /// Eigenvalues (descending) with drift clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        psd_eig(&self.matrix)
            .map(|e| e.values)
            .unwrap_or_else(|_| vec![f64::NAN; self.dim()])
    }

    /// Reduced operator on the registers in `keep` (declaration order).
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        let layout = self.require_layout()?;
        let kept = layout.subset(keep)?;
        let dims: Vec<usize> = layout.registers().iter().map(|r| r.dim()).collect();
        let keep_idx: Vec<usize> = layout
            .registers()
            .iter()
            .enumerate()
            .filter(|(_, r)| kept.contains(&r.name))
            .map(|(i, _)| i)
            .collect();
        let m = partial_trace_dims(&self.matrix, &dims, &keep_idx)?;
        Self::new_unchecked(m).with_layout(kept)
    }
}

impl Tensor for DensityOperator {
    fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = match (&self.layout, &other.layout) {
            (Some(a), Some(b)) => {
                let l = a.concat(b)?;
                l.check_width(DEFAULT_MAX_WIDTH)?;
                Some(l)
            }
            _ => None,
        };
        let dim = self.dim() * other.dim();
        if dim > 1 << DEFAULT_MAX_WIDTH {
            return Err(Error::WidthOverflow {
                width: (dim as f64).log2().ceil() as usize,
                max: DEFAULT_MAX_WIDTH,
            });
        }
        Ok(Self {
            layout,
            matrix: kron(&self.matrix, &other.matrix),
        })
    }
}

/// Partial trace over general subsystem dimensions; `keep` lists the
/// indices of the kept subsystems.
pub fn partial_trace_dims(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(Error::DimensionMismatch(format!(
            "operator of dimension {} vs subsystems {:?}",
            m.nrows(),
            dims
        )));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: dims.len(),
        });
    }
    let (table, dt) = split_indices(dims, keep);
    let dk = table.len();
    let mut out = CMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut s = super::cr(0.0);
            for t in 0..dt {
                s += m[(table[a][t], table[b][t])];
            }
            out[(a, b)] = s;
        }
    }
    Ok(out)
}

/// `table[k][t]` is the global index whose kept digits spell `k` and traced
/// digits spell `t`.
pub(crate) fn split_indices(dims: &[usize], keep: &[usize]) -> (Vec<Vec<usize>>, usize) {
    let dk: usize = keep.iter().map(|&k| dims[k]).product();
    let total: usize = dims.iter().product();
    let dt = total / dk;
    let mut table = vec![vec![0usize; dt]; dk];
    for g in 0..total {
        let mut rem = g;
        let mut digits = vec![0usize; dims.len()];
        for (i, &d) in dims.iter().enumerate().rev() {
            digits[i] = rem % d;
            rem /= d;
        }
        let (mut k, mut t) = (0usize, 0usize);
        for (i, &d) in dims.iter().enumerate() {
            if keep.contains(&i) {
                k = k * d + digits[i];
            } else {
                t = t * d + digits[i];
            }
        }
        table[k][t] = g;
    }
    (table, dt)
}

impl From<&CVector> for DensityOperator {
    fn from(v: &CVector) -> Self {
        Self::new_unchecked(projector(v))
    }
}
