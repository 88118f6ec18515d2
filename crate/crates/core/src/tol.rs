//! Numerical tolerances used across the crate, gathered in one record.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum entrywise deviation from Hermiticity.
    pub hermitian: f64,
    /// Eigenvalues in `[-psd_clamp, 0)` are clamped to zero.
    pub psd_clamp: f64,
    /// Allowed deviation of a density operator's trace from one.
    pub trace: f64,
    /// Allowed deviation of a state vector's norm from one.
    pub norm: f64,
    /// Allowed deviation of a POVM's effect sum from the identity.
    pub povm: f64,
    /// Allowed deviation of `U^dagger U` from the identity.
    pub unitary: f64,
    /// Allowed deviation of a classical distribution's mass from one.
    pub distribution: f64,
    /// Allowed deviation of an ensemble's probabilities from summing to one.
    pub ensemble: f64,
    /// Factorisation tolerance for a partitioning variable.
    pub partition: f64,
    /// Eigenvalues of the second argument of a relative entropy below this
    /// count as outside the support.
    pub support_sigma: f64,
    /// ... unless the first argument puts at most this much weight there.
    pub support_rho: f64,
    /// Identity shift used to regularise a singular operator before
    /// inverting its square root.
    pub regularization: f64,
    /// Singular values below this are treated as zero when completing a
    /// polar factor.
    pub rank: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-10,
        psd_clamp: 1e-10,
        trace: 1e-9,
        norm: 1e-10,
        povm: 1e-9,
        unitary: 1e-9,
        distribution: 1e-12,
        ensemble: 1e-9,
        partition: 1e-12,
        support_sigma: 1e-10,
        support_rho: 1e-9,
        regularization: 1e-9,
        rank: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub const TOL: Tolerances = Tolerances::DEFAULT;
