use super::density::DensityOperator;
use super::layout::RegisterLayout;
use super::linalg::psd_eig;
use super::{cr, CMatrix, CVector, Tensor, C64};
use crate::{Error, Result, TOL};

/// Global pure state over named qubit registers.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: RegisterLayout,
    amps: CVector,
}

/// Scatter the bits of `value` onto the (big-endian) global positions
/// `qubits` of a `width`-qubit index.
#[inline]
fn deposit(value: usize, qubits: &[usize], width: usize) -> usize {
    let n = qubits.len();
    let mut g = 0;
    for (i, &q) in qubits.iter().enumerate() {
        let bit = (value >> (n - 1 - i)) & 1;
        g |= bit << (width - 1 - q);
    }
    g
}

impl PureState {
    pub fn new(layout: RegisterLayout, amps: CVector) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a layout of dimension {}",
                amps.len(),
                layout.dim()
            )));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > TOL.norm {
            return Err(Error::BadNorm(norm));
        }
        Ok(Self { layout, amps })
    }

    /// Computational basis state `|index>`.
    pub fn basis(layout: RegisterLayout, index: usize) -> Result<Self> {
        let dim = layout.dim();
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut amps = CVector::zeros(dim);
        amps[index] = cr(1.0);
        Ok(Self { layout, amps })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut CVector {
        &mut self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.layout.names().ne(other.layout.names()) || self.dim() != other.dim() {
            return Err(Error::LayoutMismatch("inner product of different layouts".into()));
        }
        Ok(self.amps.dotc(&other.amps))
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::from(&self.amps)
            .with_layout(self.layout.clone())
            .expect("layout matches amplitudes")
    }

    /// Amplitudes arranged as a matrix: rows indexed by the qubits of `rows`
    /// (declaration order), columns by all remaining qubits.
    pub fn split_matrix<S: AsRef<str>>(&self, rows: &[S]) -> Result<CMatrix> {
        let width = self.layout.total_width();
        let row_q = self.layout.qubits_of(rows)?;
        let col_q: Vec<usize> = (0..width).filter(|q| !row_q.contains(q)).collect();
        let (dr, dc) = (1usize << row_q.len(), 1usize << col_q.len());
        let row_off: Vec<usize> = (0..dr).map(|r| deposit(r, &row_q, width)).collect();
        let col_off: Vec<usize> = (0..dc).map(|c| deposit(c, &col_q, width)).collect();
        Ok(CMatrix::from_fn(dr, dc, |r, c| self.amps[row_off[r] | col_off[c]]))
    }

    /// Inverse of [`split_matrix`](Self::split_matrix).
    pub(crate) fn from_split_matrix<S: AsRef<str>>(
        layout: RegisterLayout,
        rows: &[S],
        m: &CMatrix,
    ) -> Result<Self> {
        let width = layout.total_width();
        let row_q = layout.qubits_of(rows)?;
        let col_q: Vec<usize> = (0..width).filter(|q| !row_q.contains(q)).collect();
        let mut amps = CVector::zeros(layout.dim());
        for r in 0..m.nrows() {
            let ro = deposit(r, &row_q, width);
            for c in 0..m.ncols() {
                amps[ro | deposit(c, &col_q, width)] = m[(r, c)];
            }
        }
        Ok(Self { layout, amps })
    }

    /// Reduced density operator on the named registers.
    pub fn reduced<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityOperator> {
        let psi = self.split_matrix(keep)?;
        let kept = self.layout.subset(keep)?;
        DensityOperator::new_unchecked(&psi * psi.adjoint()).with_layout(kept)
    }

    /// Von Neumann entropy (bits) of the named registers, computed on
    /// whichever side of the bipartition is smaller.
    pub fn entropy_of<S: AsRef<str>>(&self, set: &[S]) -> Result<f64> {
        let psi = self.split_matrix(set)?;
        if psi.nrows() == 1 || psi.ncols() == 1 {
            return Ok(0.0);
        }
        let gram = if psi.nrows() <= psi.ncols() {
            &psi * psi.adjoint()
        } else {
            psi.adjoint() * &psi
        };
        let eig = psd_eig(&gram)?;
        Ok(eig
            .values
            .iter()
            .filter(|&&v| v > 0.0)
            .map(|&v| -v * v.log2())
            .sum::<f64>()
            .max(0.0))
    }

    /// `I(a : b)` of the reduced state on `a ∪ b` (registers disjoint).
    pub fn mutual_information<S: AsRef<str>, T: AsRef<str>>(&self, a: &[S], b: &[T]) -> Result<f64> {
        let a: Vec<&str> = a.iter().map(|s| s.as_ref()).collect();
        let b: Vec<&str> = b.iter().map(|s| s.as_ref()).collect();
        if a.is_empty() || b.is_empty() || a.iter().any(|n| b.contains(n)) {
            return Err(Error::BadCut("mutual information needs two disjoint nonempty sides".into()));
        }
        let ab: Vec<&str> = a.iter().chain(b.iter()).copied().collect();
        let value = self.entropy_of(&a)? + self.entropy_of(&b)? - self.entropy_of(&ab)?;
        Ok(value.max(0.0))
    }

    /// Apply `u` to the named registers (taken in declaration order).
    pub fn apply_on<S: AsRef<str>>(&self, regs: &[S], u: &CMatrix) -> Result<Self> {
        let psi = self.split_matrix(regs)?;
        if u.nrows() != psi.nrows() || u.ncols() != psi.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "operator of dimension {} on registers of dimension {}",
                u.nrows(),
                psi.nrows()
            )));
        }
        Self::from_split_matrix(self.layout.clone(), regs, &(u * psi))
    }

    /// Same state with registers re-declared in `order` (a permutation of
    /// the layout's names).
    pub fn reorder<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        if order.len() != self.layout.len() {
            return Err(Error::LayoutMismatch("reorder needs every register".into()));
        }
        let regs = order
            .iter()
            .map(|n| self.layout.register(n.as_ref()).cloned())
            .collect::<Result<Vec<_>>>()?;
        let new_layout = RegisterLayout::new(regs)?;
        let width = self.layout.total_width();
        let mut perm = Vec::with_capacity(width);
        for n in order {
            let off = self.layout.qubit_offset(n.as_ref())?;
            let w = self.layout.register(n.as_ref())?.width;
            perm.extend(off..off + w);
        }
        let mut amps = CVector::zeros(self.dim());
        for new_idx in 0..self.dim() {
            let old = deposit(new_idx, &perm, width);
            amps[new_idx] = self.amps[old];
        }
        Ok(Self {
            layout: new_layout,
            amps,
        })
    }

    /// Probability of each value of a register under a computational-basis
    /// measurement.
    pub fn register_distribution(&self, name: &str) -> Result<Vec<f64>> {
        let qubits = self.layout.qubits_of(&[name])?;
        let width = self.layout.total_width();
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (g, a) in self.amps.iter().enumerate() {
            let mut v = 0;
            for &q in &qubits {
                v = (v << 1) | ((g >> (width - 1 - q)) & 1);
            }
            probs[v] += a.norm_sqr();
        }
        Ok(probs)
    }

    pub fn set_owner(&mut self, name: &str, owner: &str) -> Result<()> {
        self.layout.set_owner(name, owner)
    }
}

impl Tensor for PureState {
    fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        layout.check_width(super::DEFAULT_MAX_WIDTH)?;
        Ok(Self {
            layout,
            amps: self.amps.kronecker(&other.amps),
        })
    }
}
