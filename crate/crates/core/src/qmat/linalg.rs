use faer::Mat;

use super::{cr, hermitian_deviation, hermitize, CMatrix, CVector, C64};
use crate::{Error, Result, TOL};

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Real eigenvalues, sorted descending.
    pub values: Vec<f64>,
    /// Unitary whose columns are the matching eigenvectors.
    pub vectors: CMatrix,
}

impl HermEig {
    /// `V diag(f(λ)) V^dagger`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let s = cr(f(lambda));
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|x| x)
    }

    pub fn vector(&self, j: usize) -> CVector {
        self.vectors.column(j).into_owned()
    }

    /// Clamp eigenvalues in `[-psd_clamp, 0)` to zero; error below that.
    fn clamp_psd(mut self) -> Result<Self> {
        for v in &mut self.values {
            if *v < 0.0 {
                if *v < -TOL.psd_clamp {
                    return Err(Error::NotPsd(*v));
                }
                *v = 0.0;
            }
        }
        Ok(self)
    }
}

fn check_square(a: &CMatrix) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
pub fn herm_eig(a: &CMatrix) -> Result<HermEig> {
    check_square(a)?;
    let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let dev = hermitian_deviation(a);
    if dev > TOL.hermitian * scale {
        return Err(Error::NotHermitian(dev));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(HermEig {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let h = hermitize(a);
    let mut values = vec![0.0; n];
    let mut vectors = CMatrix::zeros(n, n);
    for block in components(&h) {
        let sub = CMatrix::from_fn(block.len(), block.len(), |i, j| h[(block[i], block[j])]);
        let (vals, vecs) = block_eig(&sub);
        for (c, &col) in block.iter().enumerate() {
            values[col] = vals[c];
            for (r, &row) in block.iter().enumerate() {
                vectors[(row, col)] = vecs[(r, c)];
            }
        }
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let values = order.iter().map(|&i| values[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok(HermEig { values, vectors })
}

/// Index sets of the connected components of the nonzero pattern; the
/// matrix is block diagonal over them.
fn components(h: &CMatrix) -> Vec<Vec<usize>> {
    let n = h.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in 0..n {
        for i in 0..j {
            if h[(i, j)] != C64::new(0.0, 0.0) {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = root(&mut parent, i);
        groups[r].push(i);
    }
    groups.retain(|g| !g.is_empty());
    groups
}

/// Eigenpairs of one Hermitian block, in no particular order.
fn block_eig(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    if n == 1 {
        return (vec![h[(0, 0)].re], CMatrix::identity(1, 1));
    }
    match to_faer(h).self_adjoint_eigen(faer::Side::Lower) {
        Ok(eig) => {
            let (s, u) = (eig.S(), eig.U());
            let values = (0..n).map(|i| s[i].re).collect();
            (values, CMatrix::from_fn(n, n, |r, c| u[(r, c)]))
        }
        Err(_) => jacobi_eig(h),
    }
}

/// Cyclic Jacobi sweeps; each rotation first makes the pivot real by a
/// phase on column `q`.
fn jacobi_eig(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    let mut a = h.clone();
    let mut v = CMatrix::identity(n, n);
    let scale = a.iter().map(|z| z.norm()).fold(f64::MIN_POSITIVE, f64::max);
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|j| (0..n).filter(move |&i| i != j).map(move |i| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let r = a[(p, q)].norm();
                if r <= 1e-300 {
                    continue;
                }
                let e = a[(p, q)] / r;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let (jpp, jpq) = (cr(c), cr(s));
                let (jqp, jqq) = (-e.conj() * s, e.conj() * c);
                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * jpp + y * jqp;
                    a[(k, q)] = x * jpq + y * jqq;
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = jpp.conj() * x + jqp.conj() * y;
                    a[(q, k)] = jpq.conj() * x + jqq.conj() * y;
                }
                for k in 0..n {
                    let (x, y) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = x * jpp + y * jqp;
                    v[(k, q)] = x * jpq + y * jqq;
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// Eigendecomposition of a PSD matrix with small negative eigenvalues
/// clamped to zero.
pub(crate) fn psd_eig(a: &CMatrix) -> Result<HermEig> {
    herm_eig(a)?.clamp_psd()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFunction {
    Sqrt,
    Log2,
    /// `|A| = sqrt(A^dagger A)`; defined for every matrix.
    Abs,
}

/// Apply `f` to a matrix through its spectral decomposition.
///
/// `Log2` rejects singular input; entropy code uses [`log2_spectral`], which
/// keeps the zero eigenvalues as flagged `-inf` slots instead.
pub fn operator_function(a: &CMatrix, f: MatrixFunction) -> Result<CMatrix> {
    match f {
        MatrixFunction::Sqrt => sqrt_psd(a),
        MatrixFunction::Abs => Ok(abs(a)),
        MatrixFunction::Log2 => {
            let eig = psd_eig(a)?;
            if eig.values.iter().any(|&v| v <= 0.0) {
                return Err(Error::SingularLog);
            }
            Ok(eig.map(f64::log2))
        }
    }
}

pub fn sqrt_psd(a: &CMatrix) -> Result<CMatrix> {
    Ok(psd_eig(a)?.map(f64::sqrt))
}

/// Thin singular value decomposition `A = U diag(values) V^dagger` with
/// `min(m, n)` triples in decreasing order of singular value. Vectors
/// belonging to zero singular values are unspecified.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub values: Vec<f64>,
    pub v: CMatrix,
}

pub fn svd(a: &CMatrix) -> Svd {
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return Svd {
            u: CMatrix::zeros(m, 0),
            values: Vec::new(),
            v: CMatrix::zeros(n, 0),
        };
    }
    match to_faer(a).thin_svd() {
        Ok(d) => {
            let (s, u, v) = (d.S(), d.U(), d.V());
            Svd {
                u: CMatrix::from_fn(m, k, |r, c| u[(r, c)]),
                values: (0..k).map(|i| s[i].re.max(0.0)).collect(),
                v: CMatrix::from_fn(n, k, |r, c| v[(r, c)]),
            }
        }
        Err(_) => dilation_svd(a),
    }
}

/// SVD from the eigenpairs of `[[0, A], [A^dagger, 0]]`: the top `min(m, n)`
/// are `σ_i` with eigenvectors `(u_i, v_i)/√2`.
fn dilation_svd(a: &CMatrix) -> Svd {
    let (m, n) = a.shape();
    let k = m.min(n);
    let mut h = CMatrix::zeros(m + n, m + n);
    h.view_mut((0, m), (m, n)).copy_from(a);
    h.view_mut((m, 0), (n, m)).copy_from(&a.adjoint());
    let eig = herm_eig(&h).expect("dilation is Hermitian");
    let mut u = CMatrix::zeros(m, k);
    let mut v = CMatrix::zeros(n, k);
    for c in 0..k {
        let w = eig.vectors.column(c);
        let (x, y) = (w.rows(0, m).into_owned(), w.rows(m, n).into_owned());
        let (nx, ny) = (x.norm(), y.norm());
        if nx > 1e-8 && ny > 1e-8 {
            u.set_column(c, &x.unscale(nx));
            v.set_column(c, &y.unscale(ny));
        }
    }
    Svd {
        u,
        values: eig.values[..k].iter().map(|s| s.max(0.0)).collect(),
        v,
    }
}

fn to_faer(a: &CMatrix) -> Mat<C64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// `|A| = V Σ V^dagger`, which equals `sqrt(A^dagger A)` without squaring
/// the singular values.
pub fn abs(a: &CMatrix) -> CMatrix {
    let d = svd(a);
    let mut scaled = d.v.clone();
    for (j, s) in d.values.iter().enumerate() {
        let s = cr(*s);
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= s;
        }
    }
    scaled * d.v.adjoint()
}

/// Spectral logarithm (base 2) of a PSD matrix.
#[derive(Debug, Clone)]
pub struct SpectralLog {
    pub values: Vec<f64>,
    /// `log2` of each eigenvalue; `-inf` for zero eigenvalues.
    pub logs: Vec<f64>,
    pub vectors: CMatrix,
}

impl SpectralLog {
    /// Eigenvalues with the convention `0 log 0 = 0` for the entropy sum.
    pub fn entropy(&self) -> f64 {
        -self
            .values
            .iter()
            .zip(&self.logs)
            .filter(|(v, _)| **v > 0.0)
            .map(|(v, l)| v * l)
            .sum::<f64>()
    }
}

pub fn log2_spectral(a: &CMatrix) -> Result<SpectralLog> {
    let eig = psd_eig(a)?;
    let logs = eig
        .values
        .iter()
        .map(|&v| if v > 0.0 { v.log2() } else { f64::NEG_INFINITY })
        .collect();
    Ok(SpectralLog {
        values: eig.values,
        logs,
        vectors: eig.vectors,
    })
}

pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    if u.nrows() != u.ncols() {
        return false;
    }
    let err = u.adjoint() * u - CMatrix::identity(u.nrows(), u.ncols());
    err.iter().all(|z| z.norm() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{c, diag, random_density, SeededRng};

    fn pauli_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)])
    }

    fn max_dev(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn jacobi_agrees_with_reconstruction() {
        let mut rng = SeededRng::new(8);
        for d in 2..7 {
            let rho = random_density(d, d, &mut rng).unwrap();
            let (vals, vecs) = jacobi_eig(rho.matrix());
            let rebuilt = &vecs * diag(&vals) * vecs.adjoint();
            assert!(max_dev(&rebuilt, rho.matrix()) < 1e-12);
            assert!(is_unitary(&vecs, 1e-12));
        }
    }

    #[test]
    fn degenerate_sparse_projector() {
        let n = 512;
        let support: Vec<usize> = (0..8).map(|k| 73 * k).collect();
        let mut psi = CVector::zeros(n);
        for &i in &support {
            psi[i] = cr(8f64.sqrt().recip());
        }
        let e = herm_eig(&(&psi * psi.adjoint())).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-12);
        assert!(e.values[1..].iter().all(|v| v.abs() < 1e-12));
        assert!((e.vector(0).dotc(&psi).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dilation_route_matches_direct_svd() {
        let mut rng = SeededRng::new(12);
        let a = CMatrix::from_fn(3, 5, |_, _| rng.complex_gaussian());
        let (d, e) = (svd(&a), dilation_svd(&a));
        for (x, y) in d.values.iter().zip(&e.values) {
            assert!((x - y).abs() < 1e-12);
        }
        let mut rebuilt = CMatrix::zeros(3, 5);
        for (j, s) in e.values.iter().enumerate() {
            rebuilt += (e.u.column(j) * e.v.column(j).adjoint()).scale(*s);
        }
        assert!(max_dev(&rebuilt, &a) < 1e-12);
    }

    #[test]
    fn svd_of_rank_one_product_matches_overlap() {
        let mut rng = SeededRng::new(5);
        for _ in 0..200 {
            let d = rng.range(2, 8);
            let a = crate::qmat::random_state(d, &mut rng);
            let b = crate::qmat::random_state(d, &mut rng);
            let m = crate::qmat::projector(&a) * crate::qmat::projector(&b);
            let overlap = a.dotc(&b).norm();
            let s = svd(&m);
            let total: f64 = s.values.iter().sum();
            assert!((total - overlap).abs() < 1e-12, "{total} vs {overlap}");
            let mut rebuilt = CMatrix::zeros(d, d);
            for (j, v) in s.values.iter().enumerate() {
                rebuilt += (s.u.column(j) * s.v.column(j).adjoint()).scale(*v);
            }
            assert!(max_dev(&rebuilt, &m) < 1e-12);
        }
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let e = herm_eig(&CMatrix::identity(2, 2)).unwrap();
        assert_eq!(e.values.len(), 2);
        for v in e.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_sorted_descending_with_basis_vectors() {
        let e = herm_eig(&diag(&[1.0, 3.0])).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        // eigenvector of 3 is e_1 up to phase
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-12);
        assert!(e.vectors[(0, 0)].norm() < 1e-12);
    }

    #[test]
    fn pauli_x_eigenpairs() {
        // hand solution: λ = ±1 with (|0> ± |1>)/√2
        let e = herm_eig(&pauli_x()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = CVector::from_vec(vec![cr(h), cr(h)]);
        let minus = CVector::from_vec(vec![cr(h), cr(-h)]);
        assert!((e.vector(0).dotc(&plus).norm() - 1.0).abs() < 1e-12);
        assert!((e.vector(1).dotc(&minus).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)]);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian(_))));
        let m = CMatrix::from_row_slice(2, 3, &[cr(0.0); 6]);
        assert!(matches!(herm_eig(&m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn reconstruction_error_is_small() {
        let mut rng = SeededRng::new(5);
        for dim in 1..=8 {
            let rho = random_density(dim, dim, &mut rng).unwrap();
            let e = herm_eig(rho.matrix()).unwrap();
            assert!(max_dev(&e.reconstruct(), rho.matrix()) <= 1e-8 * dim as f64);
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            assert!(is_unitary(&e.vectors, 1e-10));
        }
    }

    #[test]
    fn sqrt_of_diagonal() {
        let s = operator_function(&diag(&[4.0, 9.0]), MatrixFunction::Sqrt).unwrap();
        assert!(max_dev(&s, &diag(&[2.0, 3.0])) < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        let mut rng = SeededRng::new(11);
        for dim in [2, 3, 5, 8] {
            let rho = random_density(dim, dim, &mut rng).unwrap();
            let s = sqrt_psd(rho.matrix()).unwrap();
            assert!(max_dev(&(&s * &s), rho.matrix()) < 1e-8);
        }
    }

    #[test]
    fn abs_of_sign_matrix_is_identity() {
        let a = operator_function(&diag(&[1.0, -1.0]), MatrixFunction::Abs).unwrap();
        assert!(max_dev(&a, &CMatrix::identity(2, 2)) < 1e-12);
        // complex, non-normal input: |E|^2 = E^dagger E
        let e = CMatrix::from_row_slice(2, 2, &[c(1.0, 1.0), cr(2.0), cr(0.0), c(0.0, -1.0)]);
        let a = abs(&e);
        assert!(max_dev(&(&a * &a), &(e.adjoint() * &e)) < 1e-12);
    }

    #[test]
    fn negative_eigenvalue_rejected_and_tiny_clamped() {
        assert!(matches!(sqrt_psd(&diag(&[1.0, -1e-6])), Err(Error::NotPsd(_))));
        let s = sqrt_psd(&diag(&[1.0, -1e-12])).unwrap();
        assert_eq!(s[(1, 1)].re, 0.0);
    }

    #[test]
    fn log_of_singular_is_flagged() {
        assert!(matches!(
            operator_function(&diag(&[1.0, 0.0]), MatrixFunction::Log2),
            Err(Error::SingularLog)
        ));
        let l = log2_spectral(&diag(&[1.0, 0.0])).unwrap();
        assert_eq!(l.logs[1], f64::NEG_INFINITY);
        assert_eq!(l.entropy(), 0.0);
        let l = operator_function(&diag(&[0.5, 0.25]), MatrixFunction::Log2).unwrap();
        assert!((l[(0, 0)].re + 1.0).abs() < 1e-14);
        assert!((l[(1, 1)].re + 2.0).abs() < 1e-14);
    }
}
