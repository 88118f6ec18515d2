use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::density::DensityOperator;
use super::linalg::psd_eig;
use super::povm::Povm;
use super::{c, CMatrix, CVector, C64};
use crate::{Error, Result};

/// Deterministic, platform-independent random stream.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `stream` of the same seed, for parallel work
    /// that must not depend on scheduling.
    pub fn fork(&self, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(self.seed);
        inner.set_stream(stream);
        Self {
            seed: self.seed,
            inner,
        }
    }

    /// The underlying generator, for `rand` adaptors.
    pub fn inner(&mut self) -> &mut ChaCha8Rng {
        &mut self.inner
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn gaussian(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Standard complex Gaussian (unit variance).
    pub fn complex_gaussian(&mut self) -> C64 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        c(self.gaussian() * h, self.gaussian() * h)
    }

    pub fn ginibre(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.complex_gaussian())
    }

    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.inner.random_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.inner.random::<bool>()
    }

    /// Uniform point of the probability simplex.
    pub fn simplex(&mut self, n: usize) -> Vec<f64> {
        let mut w: Vec<f64> = (0..n).map(|_| -self.uniform().max(1e-300).ln()).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        w
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Uniformly random unit vector.
pub fn random_state(dim: usize, rng: &mut SeededRng) -> CVector {
    let v = CVector::from_fn(dim, |_, _| rng.complex_gaussian());
    let n = v.norm();
    v.unscale(n)
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `R`'s diagonal moved into `Q`.
pub fn random_unitary(dim: usize, rng: &mut SeededRng) -> CMatrix {
    let g = rng.ginibre(dim, dim);
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `G G^dagger / Tr(G G^dagger)` with `G` a `dim x rank` Ginibre matrix.
pub fn random_density(dim: usize, rank: usize, rng: &mut SeededRng) -> Result<DensityOperator> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::RankTooLarge { rank, dim });
    }
    let g = rng.ginibre(dim, rank);
    let m = &g * g.adjoint();
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    Ok(DensityOperator::new_unchecked(m.unscale(tr)))
}

/// POVM with `outcomes` effects `S^{-1/2} P_i S^{-1/2}`, where the `P_i`
/// are random PSD parts and `S` their sum.
pub fn random_povm(dim: usize, outcomes: usize, rng: &mut SeededRng) -> Result<Povm> {
    if dim == 0 || outcomes == 0 {
        return Err(Error::InvalidPovm("need dim >= 1 and at least one outcome".into()));
    }
    let parts: Vec<CMatrix> = (0..outcomes)
        .map(|_| {
            let rank = rng.range(1, dim);
            let g = rng.ginibre(dim, rank);
            &g * g.adjoint()
        })
        .collect();
    let sum = parts.iter().fold(CMatrix::zeros(dim, dim), |acc, p| acc + p);
    let eig = psd_eig(&sum)?;
    if eig.values.iter().any(|&v| v <= 1e-12) {
        // parts failed to span the space; an outcome-free direction is
        // assigned to the first effect
        let mut parts = parts;
        parts[0] += CMatrix::identity(dim, dim);
        let sum = parts.iter().fold(CMatrix::zeros(dim, dim), |acc, p| acc + p);
        return normalize_parts(&parts, &sum);
    }
    normalize_parts(&parts, &sum)
}

fn normalize_parts(parts: &[CMatrix], sum: &CMatrix) -> Result<Povm> {
    let inv_sqrt = psd_eig(sum)?.map(|v| 1.0 / v.sqrt());
    let effects = parts.iter().map(|p| &inv_sqrt * p * &inv_sqrt).collect();
    Povm::new(effects)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::is_unitary;

    #[test]
    fn same_seed_same_stream() {
        let mut a = SeededRng::new(42);
        let mut b = SeededRng::new(42);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut f1 = a.fork(3);
        let mut f2 = b.fork(3);
        assert_eq!(f1.gaussian(), f2.gaussian());
        assert_ne!(SeededRng::new(1).next_u64(), SeededRng::new(2).next_u64());
    }

    #[test]
    fn rank_one_density_is_projector() {
        let rho = random_density(2, 1, &mut SeededRng::new(7)).unwrap();
        let ev = rho.eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-12 && ev[1].abs() < 1e-12);
    }

    #[test]
    fn unitary_property() {
        let mut rng = SeededRng::new(8);
        for _ in 0..20 {
            assert!(is_unitary(&random_unitary(4, &mut rng), 1e-10));
        }
    }

    #[test]
    fn povm_sums_to_identity() {
        let mut rng = SeededRng::new(12);
        let f = random_povm(2, 3, &mut rng).unwrap();
        assert_eq!(f.len(), 3);
        let sum = f
            .effects()
            .iter()
            .fold(CMatrix::zeros(2, 2), |acc, e| acc + e);
        let dev = (sum - CMatrix::identity(2, 2)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-9);
    }

    #[test]
    fn rank_above_dim_is_an_error() {
        assert!(matches!(
            random_density(2, 3, &mut SeededRng::new(0)),
            Err(Error::RankTooLarge { .. })
        ));
    }
}
