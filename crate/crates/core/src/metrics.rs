//! Distances and information functionals on density operators and
//! classical distributions. All logarithms are base 2.

use serde::{Serialize, Serializer};

use crate::qmat::{
    herm_eig, log2_spectral, sqrt_psd, CMatrix, DensityOperator, Povm, C64,
};
use crate::{Error, Result, TOL};

/// Finite distribution over labeled outcomes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalDistribution {
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl ClassicalDistribution {
    pub fn new(labels: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        if labels.len() != probs.len() || probs.is_empty() {
            return Err(Error::InvalidDistribution("labels and probabilities differ in length".into()));
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::InvalidDistribution("negative probability".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > TOL.distribution {
            return Err(Error::InvalidDistribution(format!("mass {total}")));
        }
        Ok(Self { labels, probs })
    }

    /// Outcomes labeled `"0"`, `"1"`, ...
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        let labels = (0..probs.len()).map(|i| i.to_string()).collect();
        Self::new(labels, probs)
    }

    fn from_probs_unchecked(probs: Vec<f64>) -> Self {
        let labels = (0..probs.len()).map(|i| i.to_string()).collect();
        Self { labels, probs }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    fn aligned<'a>(&'a self, other: &'a Self) -> Result<impl Iterator<Item = (f64, f64)> + 'a> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch);
        }
        Ok(self.probs.iter().copied().zip(other.probs.iter().copied()))
    }
}

/// Relative entropy value; support mismatch gives `Infinite`, which is kept
/// distinct from any finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeEntropy {
    Finite(f64),
    Infinite,
}

impl RelativeEntropy {
    pub fn is_finite(self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Infinite => None,
        }
    }

    /// As an `f64`, with `+inf` for the infinite case.
    pub fn value(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl Serialize for RelativeEntropy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(v) => s.serialize_f64(*v),
            Self::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Classical random variable encoded into quantum states: `x -> σ_x` with
/// probability `p_x`.
#[derive(Debug, Clone)]
pub struct EncodingEnsemble {
    members: Vec<(f64, DensityOperator)>,
}

impl EncodingEnsemble {
    pub fn new(members: Vec<(f64, DensityOperator)>) -> Result<Self> {
        let dim = members
            .first()
            .ok_or_else(|| Error::InvalidDistribution("empty ensemble".into()))?
            .1
            .dim();
        if members.iter().any(|(p, s)| *p < 0.0 || s.dim() != dim) {
            return Err(Error::InvalidDistribution("negative weight or mixed dimensions".into()));
        }
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > TOL.ensemble {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(Self { members })
    }

    /// Uniform ensemble over the given states.
    pub fn uniform(states: Vec<DensityOperator>) -> Result<Self> {
        let p = 1.0 / states.len() as f64;
        Self::new(states.into_iter().map(|s| (p, s)).collect())
    }

    pub fn members(&self) -> &[(f64, DensityOperator)] {
        &self.members
    }

    /// `σ̄ = Σ_j p_j σ_j`.
    pub fn average(&self) -> DensityOperator {
        let dim = self.members[0].1.dim();
        let m = self
            .members
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, (p, s)| acc + s.matrix().scale(*p));
        DensityOperator::new_unchecked(m)
    }
}

fn same_dim(rho: &DensityOperator, sigma: &DensityOperator) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(())
}

/// `Tr |ρ - σ|`, in `[0, 2]`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho, sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    let eig = herm_eig(&diff)?;
    Ok(eig.values.iter().map(|v| v.abs()).sum::<f64>().min(2.0))
}

/// Trace distance between `|a><a|` and `|b><b|` for unit vectors, computed as
/// `2 sqrt(1 - |<a|b>|^2)` without the cancellation of the naive formula.
pub fn pure_trace_distance(a: &crate::qmat::CVector, b: &crate::qmat::CVector) -> f64 {
    let ov = a.dotc(b);
    let mag = ov.norm();
    let phase = if mag > 0.0 { ov / mag } else { C64::new(1.0, 0.0) };
    // ||a - e^{-iθ} b||^2 = 2 - 2|<a|b>| for unit vectors
    let gap: f64 = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y / phase).norm_sqr())
        .sum();
    let one_minus = (0.5 * gap).clamp(0.0, 1.0);
    2.0 * (one_minus * (1.0 + mag.min(1.0))).sqrt()
}

/// `Σ_i |P(i) - Q(i)|` (no factor one half).
pub fn total_variation(p: &ClassicalDistribution, q: &ClassicalDistribution) -> Result<f64> {
    Ok(p.aligned(q)?.map(|(a, b)| (a - b).abs()).sum())
}

/// `B(ρ, σ) = Tr |√ρ √σ|`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho, sigma)?;
    let prod = sqrt_psd(rho.matrix())? * sqrt_psd(sigma.matrix())?;
    Ok(crate::qmat::abs(&prod)
        .diagonal()
        .iter()
        .map(|z| z.re)
        .sum::<f64>()
        .clamp(0.0, 1.0))
}

/// `B(P, Q) = Σ_i sqrt(P(i) Q(i))`.
pub fn classical_fidelity(p: &ClassicalDistribution, q: &ClassicalDistribution) -> Result<f64> {
    Ok(p.aligned(q)?.map(|(a, b)| (a * b).sqrt()).sum::<f64>().min(1.0))
}

pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    log2_spectral(rho.matrix())
        .map(|l| l.entropy().max(0.0))
        .unwrap_or(f64::NAN)
}

pub fn shannon_entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}

/// `S(ρ || σ) = Tr ρ (log ρ - log σ)`.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<RelativeEntropy> {
    same_dim(rho, sigma)?;
    let r = log2_spectral(rho.matrix())?;
    let s = log2_spectral(sigma.matrix())?;
    let neg_entropy = -r.entropy();
    let mut cross = 0.0;
    for (j, &mu) in s.values.iter().enumerate() {
        let w = s.vectors.column(j);
        let weight = (w.adjoint() * rho.matrix() * w)[(0, 0)].re;
        if mu <= TOL.support_sigma {
            if weight > TOL.support_rho {
                return Ok(RelativeEntropy::Infinite);
            }
            continue;
        }
        cross += weight * s.logs[j];
    }
    Ok(RelativeEntropy::Finite((neg_entropy - cross).max(0.0)))
}

pub fn classical_relative_entropy(
    p: &ClassicalDistribution,
    q: &ClassicalDistribution,
) -> Result<RelativeEntropy> {
    let mut total = 0.0;
    for (a, b) in p.aligned(q)? {
        if a <= 0.0 {
            continue;
        }
        if b <= TOL.support_sigma {
            if a > TOL.support_rho {
                return Ok(RelativeEntropy::Infinite);
            }
            continue;
        }
        total += a * (a / b).log2();
    }
    Ok(RelativeEntropy::Finite(total.max(0.0)))
}

fn check_cut<S: AsRef<str>>(rho: &DensityOperator, cut: &[S]) -> Result<Vec<String>> {
    let layout = rho
        .layout()
        .ok_or_else(|| Error::BadCut("operator has no register layout".into()))?;
    if cut.is_empty() {
        return Err(Error::BadCut("empty cut".into()));
    }
    for n in cut {
        layout.register(n.as_ref())?;
    }
    let rest = layout.complement(cut);
    if rest.is_empty() {
        return Err(Error::BadCut("cut must be a proper subset".into()));
    }
    Ok(rest)
}

/// `I(A : B) = S(A) + S(B) - S(AB)` with `A` the registers in `cut` and `B`
/// the rest.
pub fn mutual_information<S: AsRef<str>>(rho: &DensityOperator, cut: &[S]) -> Result<f64> {
    let rest = check_cut(rho, cut)?;
    let sa = von_neumann_entropy(&rho.partial_trace(cut)?);
    let sb = von_neumann_entropy(&rho.partial_trace(&rest)?);
    let sab = von_neumann_entropy(rho);
    Ok((sa + sb - sab).max(0.0))
}

/// `I((A : B) | C) = Σ_c p_c I(A^c : B^c)` for a classical conditioning
/// variable whose branches are given explicitly.
pub fn conditional_mutual_information<S: AsRef<str>>(
    branches: &[(f64, DensityOperator)],
    cut: &[S],
) -> Result<f64> {
    let total: f64 = branches.iter().map(|(p, _)| p).sum();
    if branches.is_empty() || (total - 1.0).abs() > TOL.ensemble {
        return Err(Error::InvalidDistribution(format!("branch weights sum to {total}")));
    }
    let mut acc = 0.0;
    for (p, rho) in branches {
        acc += p * mutual_information(rho, cut)?;
    }
    Ok(acc)
}

/// `I(X : M) = Σ_j p_j S(σ_j || σ̄)`.
pub fn encoding_information(e: &EncodingEnsemble) -> f64 {
    let avg = e.average();
    e.members()
        .iter()
        .filter(|(p, _)| *p > 0.0)
        .map(|(p, s)| {
            p * relative_entropy(s, &avg)
                .expect("dimensions checked by the ensemble")
                .finite()
                .expect("members lie in the support of the average")
        })
        .sum()
}

/// The same quantity through entropies: `S(σ̄) - Σ_j p_j S(σ_j)`.
pub fn encoding_information_entropic(e: &EncodingEnsemble) -> f64 {
    let avg = von_neumann_entropy(&e.average());
    avg - e
        .members()
        .iter()
        .map(|(p, s)| p * von_neumann_entropy(s))
        .sum::<f64>()
}

/// Mutual information between a classical `X` (prior `prior`) and the
/// classical output of the channel `x -> rows[x]`.
pub fn classical_channel_information(prior: &[f64], rows: &[ClassicalDistribution]) -> f64 {
    let k = rows[0].probs().len();
    let mut avg = vec![0.0; k];
    for (p, row) in prior.iter().zip(rows) {
        for (a, q) in avg.iter_mut().zip(row.probs()) {
            *a += p * q;
        }
    }
    shannon_entropy(&avg)
        - prior
            .iter()
            .zip(rows)
            .map(|(p, r)| p * shannon_entropy(r.probs()))
            .sum::<f64>()
}

/// Outcome distribution `i -> Tr(F_i ρ)`.
pub fn apply_povm(f: &Povm, rho: &DensityOperator) -> Result<ClassicalDistribution> {
    if f.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "POVM on dimension {} applied to dimension {}",
            f.dim(),
            rho.dim()
        )));
    }
    let probs = f
        .effects()
        .iter()
        .map(|e| {
            let t: C64 = (e * rho.matrix()).diagonal().iter().sum();
            t.re.max(0.0)
        })
        .collect();
    Ok(ClassicalDistribution::from_probs_unchecked(probs))
}

/// Optimal measurement attaining the fidelity.
#[derive(Debug, Clone)]
pub struct FuchsCaves {
    /// `Σ_i sqrt(Tr(M_i ρ) Tr(M_i σ))` for the returned measurement.
    pub value: f64,
    pub measurement: Povm,
    /// Whether σ was shifted by `regularization · I` (and renormalised)
    /// before inverting its square root.
    pub regularized: bool,
}

/// Complete orthogonal measurement in the eigenbasis of
/// `σ^{-1/2} (σ^{1/2} ρ σ^{1/2})^{1/2} σ^{-1/2}`.
pub fn fuchs_caves(rho: &DensityOperator, sigma: &DensityOperator) -> Result<FuchsCaves> {
    same_dim(rho, sigma)?;
    let d = sigma.dim();
    let eig = herm_eig(sigma.matrix())?;
    let regularized = eig.values.iter().any(|&v| v <= TOL.support_sigma);
    let s = if regularized {
        let shifted = sigma.matrix() + CMatrix::identity(d, d).scale(TOL.regularization);
        shifted.unscale(1.0 + TOL.regularization * d as f64)
    } else {
        sigma.matrix().clone()
    };
    let s_eig = herm_eig(&s)?;
    let s_half = s_eig.map(|v| v.max(0.0).sqrt());
    let s_inv_half = s_eig.map(|v| 1.0 / v.max(TOL.regularization).sqrt());
    let inner = &s_half * rho.matrix() * &s_half;
    let middle = sqrt_psd(&crate::qmat::DensityOperator::new_unchecked(inner).into_matrix())?;
    let op = &s_inv_half * middle * &s_inv_half;
    let basis = herm_eig(&crate::qmat::DensityOperator::new_unchecked(op).into_matrix())?;
    let measurement = Povm::from_basis(&basis.vectors)?;
    let p = apply_povm(&measurement, rho)?;
    let q = apply_povm(&measurement, sigma)?;
    let value = p
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(a, b)| (a * b).sqrt())
        .sum();
    Ok(FuchsCaves {
        value,
        measurement,
        regularized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{
        basis_vector, cr, diag, random_density, random_povm, CVector, RegisterLayout, Role,
        SeededRng, Tensor,
    };

    fn pure(v: &[f64]) -> DensityOperator {
        let v = CVector::from_iterator(v.len(), v.iter().map(|&x| cr(x)));
        DensityOperator::from_pure(&v.normalize()).unwrap()
    }

    fn ket(i: usize) -> DensityOperator {
        DensityOperator::from_pure(&basis_vector(2, i)).unwrap()
    }

    fn plus() -> DensityOperator {
        pure(&[1.0, 1.0])
    }

    fn d(vals: &[f64]) -> DensityOperator {
        DensityOperator::new(diag(vals)).unwrap()
    }

    fn qubits(names: &[&str]) -> RegisterLayout {
        RegisterLayout::new(
            names
                .iter()
                .map(|n| crate::qmat::Register::new(*n, 1, "A", Role::Work))
                .collect(),
        )
        .unwrap()
    }

    /// scalar binary entropy, independent of the matrix path
    fn h2(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    #[test]
    fn trace_distance_examples() {
        let rho = random_density(3, 2, &mut SeededRng::new(1)).unwrap();
        assert!(trace_distance(&rho, &rho).unwrap() < 1e-12);
        assert!((trace_distance(&ket(0), &ket(1)).unwrap() - 2.0).abs() < 1e-12);
        // eigenvalues of |0><0| - I/2 are ±1/2
        let mixed = DensityOperator::maximally_mixed(2);
        assert!((trace_distance(&ket(0), &mixed).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            trace_distance(&ket(0), &DensityOperator::maximally_mixed(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn pure_trace_distance_matches_operator_form() {
        let mut rng = SeededRng::new(4);
        for _ in 0..10 {
            let a = crate::qmat::random_state(4, &mut rng);
            let b = crate::qmat::random_state(4, &mut rng);
            let full = trace_distance(
                &DensityOperator::from_pure(&a).unwrap(),
                &DensityOperator::from_pure(&b).unwrap(),
            )
            .unwrap();
            assert!((pure_trace_distance(&a, &b) - full).abs() < 1e-10);
        }
        let a = basis_vector(2, 0);
        assert_eq!(pure_trace_distance(&a, &a), 0.0);
    }

    #[test]
    fn total_variation_examples() {
        let p = ClassicalDistribution::from_probs(vec![0.5, 0.5]).unwrap();
        let q = ClassicalDistribution::from_probs(vec![0.75, 0.25]).unwrap();
        assert_eq!(total_variation(&p, &p).unwrap(), 0.0);
        let a = ClassicalDistribution::from_probs(vec![1.0, 0.0]).unwrap();
        let b = ClassicalDistribution::from_probs(vec![0.0, 1.0]).unwrap();
        assert_eq!(total_variation(&a, &b).unwrap(), 2.0);
        assert!((total_variation(&p, &q).unwrap() - 0.5).abs() < 1e-15);
        let r = ClassicalDistribution::new(vec!["x".into(), "y".into()], vec![0.5, 0.5]).unwrap();
        assert!(matches!(total_variation(&p, &r), Err(Error::LabelMismatch)));
    }

    #[test]
    fn fidelity_examples() {
        let rho = random_density(4, 3, &mut SeededRng::new(2)).unwrap();
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-8);
        assert!(fidelity(&ket(0), &ket(1)).unwrap() < 1e-7);
        // |<0|+>| = 1/√2
        assert!((fidelity(&ket(0), &plus()).unwrap() - 0.70711).abs() < 1e-5);
        assert!((fidelity(&ket(0), &plus()).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-7);
    }

    #[test]
    fn fidelity_is_symmetric() {
        let mut rng = SeededRng::new(3);
        for dim in 2..6 {
            let a = random_density(dim, dim, &mut rng).unwrap();
            let b = random_density(dim, 1 + dim / 2, &mut rng).unwrap();
            assert!((fidelity(&a, &b).unwrap() - fidelity(&b, &a).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&plus()) < 1e-12);
        assert!((von_neumann_entropy(&DensityOperator::maximally_mixed(2)) - 1.0).abs() < 1e-12);
        let v = von_neumann_entropy(&d(&[0.25, 0.75]));
        assert!((v - h2(0.25)).abs() < 1e-12);
        assert!((v - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = random_density(3, 3, &mut SeededRng::new(5)).unwrap();
        assert!(relative_entropy(&rho, &rho).unwrap().value() < 1e-10);
        // direct scalar formula: ½ log(½/¾) + ½ log(½/¼)
        let oracle = 0.5 * (0.5f64 / 0.75).log2() + 0.5 * (0.5f64 / 0.25).log2();
        let v = relative_entropy(&d(&[0.5, 0.5]), &d(&[0.75, 0.25])).unwrap().value();
        assert!((v - oracle).abs() < 1e-12);
        assert!((v - 0.207519).abs() < 1e-6);
        assert_eq!(
            relative_entropy(&d(&[0.5, 0.5]), &d(&[1.0, 0.0])).unwrap(),
            RelativeEntropy::Infinite
        );
    }

    #[test]
    fn mutual_information_examples() {
        let mut rng = SeededRng::new(6);
        let a = random_density(2, 2, &mut rng).unwrap().with_layout(qubits(&["a"])).unwrap();
        let b = random_density(2, 2, &mut rng).unwrap().with_layout(qubits(&["b"])).unwrap();
        let prod = a.tensor(&b).unwrap();
        assert!(mutual_information(&prod, &["a"]).unwrap() < 1e-10);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = CVector::from_vec(vec![cr(h), cr(0.0), cr(0.0), cr(h)]);
        let bell = DensityOperator::from_pure(&bell).unwrap().with_layout(qubits(&["a", "b"])).unwrap();
        assert!((mutual_information(&bell, &["a"]).unwrap() - 2.0).abs() < 1e-10);

        let copy = d(&[0.5, 0.0, 0.0, 0.5]).with_layout(qubits(&["a", "b"])).unwrap();
        assert!((mutual_information(&copy, &["b"]).unwrap() - 1.0).abs() < 1e-10);

        assert!(matches!(mutual_information(&copy, &[] as &[&str]), Err(Error::BadCut(_))));
        assert!(matches!(mutual_information(&copy, &["a", "b"]), Err(Error::BadCut(_))));
        assert!(mutual_information(&d(&[0.5, 0.5]), &["a"]).is_err());
    }

    #[test]
    fn conditional_mutual_information_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let l = qubits(&["a", "b"]);
        let bell = CVector::from_vec(vec![cr(h), cr(0.0), cr(0.0), cr(h)]);
        let bell = DensityOperator::from_pure(&bell).unwrap().with_layout(l.clone()).unwrap();
        let prod = d(&[0.25, 0.25, 0.25, 0.25]).with_layout(l).unwrap();
        let one = conditional_mutual_information(&[(1.0, bell.clone())], &["a"]).unwrap();
        assert!((one - mutual_information(&bell, &["a"]).unwrap()).abs() < 1e-15);
        let mix = conditional_mutual_information(&[(0.5, prod.clone()), (0.5, bell)], &["a"]).unwrap();
        assert!((mix - 1.0).abs() < 1e-10);
        let zero = conditional_mutual_information(&[(0.3, prod.clone()), (0.7, prod)], &["a"]).unwrap();
        assert!(zero < 1e-10);
    }

    #[test]
    fn encoding_information_examples() {
        let rho = random_density(3, 2, &mut SeededRng::new(8)).unwrap();
        let same = EncodingEnsemble::uniform(vec![rho.clone(), rho]).unwrap();
        assert!(encoding_information(&same) < 1e-10);

        let classical = EncodingEnsemble::uniform(vec![ket(0), ket(1)]).unwrap();
        assert!((encoding_information(&classical) - 1.0).abs() < 1e-10);

        // average of |0><0| and |+><+| has eigenvalues cos²(π/8), sin²(π/8)
        let e = EncodingEnsemble::uniform(vec![ket(0), plus()]).unwrap();
        let c2 = (std::f64::consts::PI / 8.0).cos().powi(2);
        let oracle = h2(c2);
        assert!((encoding_information(&e) - oracle).abs() < 1e-10);
        assert!((encoding_information(&e) - 0.600876).abs() < 1e-6);
        assert!((encoding_information_entropic(&e) - oracle).abs() < 1e-10);
    }

    #[test]
    fn povm_examples() {
        let p = apply_povm(&Povm::computational(2), &plus()).unwrap();
        assert!((p.probs()[0] - 0.5).abs() < 1e-12 && (p.probs()[1] - 0.5).abs() < 1e-12);
        let single = Povm::new(vec![CMatrix::identity(2, 2)]).unwrap();
        assert!((apply_povm(&single, &plus()).unwrap().probs()[0] - 1.0).abs() < 1e-12);
        let mut rng = SeededRng::new(9);
        for _ in 0..20 {
            let f = random_povm(3, 4, &mut rng).unwrap();
            let rho = random_density(3, 2, &mut rng).unwrap();
            let s: f64 = apply_povm(&f, &rho).unwrap().probs().iter().sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
        assert!(apply_povm(&Povm::computational(3), &plus()).is_err());
    }

    #[test]
    fn fuchs_caves_examples() {
        let rho = random_density(3, 3, &mut SeededRng::new(10)).unwrap();
        assert!((fuchs_caves(&rho, &rho).unwrap().value - 1.0).abs() < 1e-8);

        let fc = fuchs_caves(&ket(0), &ket(1)).unwrap();
        assert!(fc.regularized);
        assert!(fc.value < 1e-4);

        let mut rng = SeededRng::new(11);
        for _ in 0..10 {
            let a = random_density(4, 4, &mut rng).unwrap();
            let b = random_density(4, 4, &mut rng).unwrap();
            let fc = fuchs_caves(&a, &b).unwrap();
            assert!(!fc.regularized);
            assert_eq!(fc.measurement.len(), 4);
            assert!((fc.value - fidelity(&a, &b).unwrap()).abs() < 1e-6);
        }
    }
}
