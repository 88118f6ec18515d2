//! Purifications and local transitions between purifications.

use crate::metrics::pure_trace_distance;
use crate::qmat::{
    herm_eig, CMatrix, CVector, DensityOperator, PureState, Register, RegisterLayout, Role,
    SeededRng, C64,
};
use crate::{Error, Result, TOL};

/// Outcome of a local transition on the reference side.
#[derive(Debug, Clone)]
pub struct TransitionResult {
    /// Unitary on the reference registers, in their declaration order.
    pub unitary: CMatrix,
    /// `|<φ₁|(I ⊗ U)|φ₂>|`.
    pub overlap: f64,
    /// Trace distance between `φ₁` and `(I ⊗ U) φ₂`.
    pub trace_distance: f64,
    /// `(I ⊗ U) φ₂`.
    pub transformed: PureState,
}

/// How the polar factor is completed on the null space of the cross
/// operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Completion {
    /// Gram-Schmidt over `e_0, e_1, ...`.
    #[default]
    StandardBasis,
    /// Gram-Schmidt over `e_{d-1}, e_{d-2}, ...`.
    ReversedBasis,
    /// Gram-Schmidt over Gaussian vectors drawn from the given seed.
    Seeded(u64),
}

fn qubit_width(dim: usize) -> Result<usize> {
    if !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

fn fresh_name(layout: &RegisterLayout, base: &str) -> String {
    let mut name = base.to_string();
    while layout.contains(&name) {
        name.push('_');
    }
    name
}

/// Canonical purification `Σ_i √λ_i |v_i>|i>` on `H ⊗ K` with
/// `dim K = dim H`. The system keeps the operator's layout (or a single
/// register `H`); the reference is a register `K` owned by `ref`.
pub fn purify(rho: &DensityOperator) -> Result<PureState> {
    let d = rho.dim();
    let w = qubit_width(d)?;
    let system = match rho.layout() {
        Some(l) => l.clone(),
        None => RegisterLayout::single("H", w, "sys", Role::Work),
    };
    let k = fresh_name(&system, "K");
    let mut layout = system;
    layout.push(Register::new(k, w, "ref", Role::Purification))?;
    let eig = herm_eig(rho.matrix())?;
    let mut amps = CVector::zeros(d * d);
    for i in 0..d {
        let s = eig.values[i].max(0.0).sqrt();
        if s == 0.0 {
            continue;
        }
        for h in 0..d {
            amps[h * d + i] = eig.vectors[(h, i)] * s;
        }
    }
    let norm = amps.norm();
    PureState::new(layout, amps.unscale(norm))
}

/// Uhlmann transition: the unitary `U` on `reference` maximising
/// `|<φ₁|(I ⊗ U)|φ₂>|`. The reference must be at least as large as the
/// remaining registers.
pub fn uhlmann_transition<S: AsRef<str>>(
    phi1: &PureState,
    phi2: &PureState,
    reference: &[S],
    completion: Completion,
) -> Result<TransitionResult> {
    transition(phi1, phi2, reference, completion, true)
}

/// Same construction without the dimension requirement. Still optimal for
/// any pair of states sharing the split, since the maximum over unitaries on
/// the reference is the trace norm of the cross operator either way.
pub fn schmidt_transition<S: AsRef<str>>(
    phi1: &PureState,
    phi2: &PureState,
    reference: &[S],
    completion: Completion,
) -> Result<TransitionResult> {
    transition(phi1, phi2, reference, completion, false)
}

fn same_layout(a: &RegisterLayout, b: &RegisterLayout) -> bool {
    a.len() == b.len()
        && a
            .registers()
            .iter()
            .zip(b.registers())
            .all(|(x, y)| x.name == y.name && x.width == y.width)
}

fn transition<S: AsRef<str>>(
    phi1: &PureState,
    phi2: &PureState,
    reference: &[S],
    completion: Completion,
    strict: bool,
) -> Result<TransitionResult> {
    if !same_layout(phi1.layout(), phi2.layout()) {
        return Err(Error::LayoutMismatch("transition between different layouts".into()));
    }
    if reference.is_empty() {
        return Err(Error::BadCut("empty reference".into()));
    }
    let kept = phi1.layout().complement(reference);
    let a = phi1.split_matrix(&kept)?;
    let b = phi2.split_matrix(&kept)?;
    let (dh, dk) = (a.nrows(), a.ncols());
    if strict && dk < dh {
        return Err(Error::ReferenceTooSmall {
            reference: dk,
            required: dh,
        });
    }
    let m = a.adjoint() * &b;
    let (x, sv, y) = match monomial_svd(&m) {
        Some(f) => f,
        None => {
            let d = crate::qmat::svd(&m);
            (d.u, d.values, d.v)
        }
    };
    let top = sv.iter().copied().fold(1.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > TOL.rank * top).count();
    let order = ranked(&sv);
    let x = complete(&select(&x, &order[..rank]), completion, 0)?;
    let y = complete(&select(&y, &order[..rank]), completion, 1)?;
    let unitary = x.map(|z| z.conj()) * y.transpose();
    let transformed = phi2.apply_on(reference, &unitary)?;
    let overlap = phi1.inner(&transformed)?.norm().min(1.0);
    let trace_distance = pure_trace_distance(phi1.amplitudes(), transformed.amplitudes());
    Ok(TransitionResult {
        unitary,
        overlap,
        trace_distance,
        transformed,
    })
}

/// Exact SVD of a matrix with at most one nonzero entry per row and column:
/// each entry `m_ij = |m_ij| e^{iθ}` contributes the pair `(e^{iθ} e_i, e_j)`.
fn monomial_svd(m: &CMatrix) -> Option<(CMatrix, Vec<f64>, CMatrix)> {
    let (r, c) = m.shape();
    let mut used_rows = vec![false; r];
    let mut entries = Vec::new();
    for j in 0..c {
        let mut hit = None;
        for i in 0..r {
            if m[(i, j)] != C64::new(0.0, 0.0) {
                if hit.is_some() || used_rows[i] {
                    return None;
                }
                hit = Some(i);
            }
        }
        if let Some(i) = hit {
            used_rows[i] = true;
            entries.push((i, j, m[(i, j)]));
        }
    }
    let k = entries.len();
    let mut x = CMatrix::zeros(r, k);
    let mut y = CMatrix::zeros(c, k);
    let mut sv = Vec::with_capacity(k);
    for (col, &(i, j, z)) in entries.iter().enumerate() {
        let a = z.norm();
        x[(i, col)] = z / a;
        y[(j, col)] = C64::new(1.0, 0.0);
        sv.push(a);
    }
    Some((x, sv, y))
}

fn ranked(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    idx
}

fn select(m: &CMatrix, cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(m.nrows(), cols.len(), |r, c| m[(r, cols[c])])
}

/// Extend orthonormal columns to a unitary by Gram-Schmidt over candidate
/// vectors chosen by `completion`.
fn complete(cols: &CMatrix, completion: Completion, stream: u64) -> Result<CMatrix> {
    let d = cols.nrows();
    let mut basis: Vec<CVector> = cols.column_iter().map(|c| c.into_owned()).collect();
    let mut rng = match completion {
        Completion::Seeded(seed) => Some(SeededRng::new(seed).fork(stream)),
        _ => None,
    };
    let mut i = 0;
    while basis.len() < d {
        let candidate = match (&completion, rng.as_mut()) {
            (Completion::StandardBasis, _) if i < d => crate::qmat::basis_vector(d, i),
            (Completion::ReversedBasis, _) if i < d => crate::qmat::basis_vector(d, d - 1 - i),
            (Completion::Seeded(_), Some(r)) if i < 16 * d => {
                CVector::from_fn(d, |_, _| r.complex_gaussian())
            }
            _ => return Err(Error::Infeasible("basis completion did not converge".into())),
        };
        i += 1;
        let mut v = candidate;
        for _ in 0..2 {
            for b in &basis {
                let p: C64 = b.dotc(&v);
                v -= b * p;
            }
        }
        let n = v.norm();
        if n > 1e-6 {
            basis.push(v.unscale(n));
        }
    }
    Ok(CMatrix::from_columns(&basis))
}
