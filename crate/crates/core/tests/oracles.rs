//! Library values against small oracles computed here by hand.

use std::collections::BTreeMap;

use qcc_lab::metrics::{
    classical_relative_entropy, conditional_mutual_information, encoding_information, fidelity,
    mutual_information, relative_entropy, total_variation, trace_distance, von_neumann_entropy,
    ClassicalDistribution, EncodingEnsemble,
};
use qcc_lab::protocol::{
    error_probability_fn, fixtures, information_loss, simulate, simulate_loaded,
};
use qcc_lab::purify::purify;
use qcc_lab::qmat::{
    herm_eig, CMatrix, CVector, DensityOperator, Register, RegisterLayout, Role, C64,
};
use qcc_lab::reductions::{
    and_distribution, derive_and_protocol, monotone_sensitivity, round_elimination_audit,
    BooleanSetFunction,
};

fn cr(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn h2(p: f64) -> f64 {
    [p, 1.0 - p]
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|x| -x * x.log2())
        .sum()
}

fn ket(amps: &[f64]) -> CVector {
    let v = CVector::from_iterator(amps.len(), amps.iter().map(|&x| cr(x)));
    v.normalize()
}

fn qubits(names: &[&str]) -> RegisterLayout {
    RegisterLayout::new(
        names
            .iter()
            .map(|n| Register::new(*n, 1, "A", Role::Work))
            .collect(),
    )
    .unwrap()
}

fn diag_state(p: &[f64]) -> DensityOperator {
    let m = CMatrix::from_diagonal(&CVector::from_iterator(p.len(), p.iter().map(|&x| cr(x))));
    DensityOperator::new(m).unwrap()
}

fn bell() -> DensityOperator {
    DensityOperator::from_pure(&ket(&[1.0, 0.0, 0.0, 1.0]))
        .unwrap()
        .with_layout(qubits(&["x", "y"]))
        .unwrap()
}

#[test]
fn bell_marginal_by_direct_sum() {
    let rho = bell();
    let mut oracle = CMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                oracle[(i, j)] += rho.matrix()[(2 * i + k, 2 * j + k)];
            }
        }
    }
    let lib = rho.partial_trace(&["x"]).unwrap();
    assert!((lib.matrix() - &oracle).norm() < 1e-12);
    assert!((oracle - CMatrix::identity(2, 2).scale(0.5)).norm() < 1e-12);
}

#[test]
fn pauli_x_spectrum() {
    let x = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
    let e = herm_eig(&x).unwrap();
    assert!((e.values[0] - 1.0).abs() < 1e-12 && (e.values[1] + 1.0).abs() < 1e-12);
    let s = 0.5f64.sqrt();
    let plus = ket(&[s, s]);
    let minus = ket(&[s, -s]);
    assert!((e.vector(0).dotc(&plus).norm() - 1.0).abs() < 1e-12);
    assert!((e.vector(1).dotc(&minus).norm() - 1.0).abs() < 1e-12);
}

#[test]
fn scalar_formula_examples() {
    let zero = diag_state(&[1.0, 0.0]);
    let half = diag_state(&[0.5, 0.5]);
    // eigenvalues of the difference are ±1/2
    assert!((trace_distance(&zero, &half).unwrap() - 1.0).abs() < 1e-12);

    let p = ClassicalDistribution::from_probs(vec![0.5, 0.5]).unwrap();
    let q = ClassicalDistribution::from_probs(vec![0.75, 0.25]).unwrap();
    assert!((total_variation(&p, &q).unwrap() - 0.5).abs() < 1e-12);

    let plus = DensityOperator::from_pure(&ket(&[1.0, 1.0])).unwrap();
    let overlap = ket(&[1.0, 0.0]).dotc(&ket(&[1.0, 1.0])).norm();
    assert!((fidelity(&zero, &plus).unwrap() - overlap).abs() < 1e-9);

    let s = von_neumann_entropy(&diag_state(&[0.25, 0.75]));
    assert!((s - h2(0.25)).abs() < 1e-12);
    assert!((s - 0.811278).abs() < 1e-6);

    let oracle = 0.5 * (0.5f64 / 0.75).log2() + 0.5 * (0.5f64 / 0.25).log2();
    let q_state = diag_state(&[0.75, 0.25]);
    assert!((relative_entropy(&half, &q_state).unwrap().value() - oracle).abs() < 1e-12);
    assert!((classical_relative_entropy(&p, &q).unwrap().value() - oracle).abs() < 1e-12);
    assert!((oracle - 0.207519).abs() < 1e-6);
}

#[test]
fn mutual_information_examples() {
    // S(x) + S(y) - S(xy) = 1 + 1 - 0
    assert!((mutual_information(&bell(), &["x"]).unwrap() - 2.0).abs() < 1e-10);

    let copy = diag_state(&[0.5, 0.0, 0.0, 0.5])
        .with_layout(qubits(&["x", "y"]))
        .unwrap();
    let joint = [[0.5, 0.0], [0.0, 0.5]];
    let mut classical = 0.0;
    for row in &joint {
        for (b, &p) in row.iter().enumerate() {
            if p > 0.0 {
                let pa: f64 = row.iter().sum();
                let pb: f64 = joint.iter().map(|r| r[b]).sum();
                classical += p * (p / (pa * pb)).log2();
            }
        }
    }
    assert!((mutual_information(&copy, &["x"]).unwrap() - classical).abs() < 1e-10);

    let product = diag_state(&[1.0, 0.0, 0.0, 0.0])
        .with_layout(qubits(&["x", "y"]))
        .unwrap();
    let cmi = conditional_mutual_information(&[(0.5, product), (0.5, bell())], &["x"]).unwrap();
    assert!((cmi - (0.5 * 0.0 + 0.5 * 2.0)).abs() < 1e-10);
}

#[test]
fn encoding_information_examples() {
    let basis = EncodingEnsemble::uniform(vec![diag_state(&[1.0, 0.0]), diag_state(&[0.0, 1.0])])
        .unwrap();
    assert!((encoding_information(&basis) - 1.0).abs() < 1e-10);

    let plus = DensityOperator::from_pure(&ket(&[1.0, 1.0])).unwrap();
    let e = EncodingEnsemble::uniform(vec![diag_state(&[1.0, 0.0]), plus]).unwrap();
    // average has eigenvalues cos²(π/8), sin²(π/8); the members are pure
    let c = (std::f64::consts::PI / 8.0).cos().powi(2);
    assert!((encoding_information(&e) - h2(c)).abs() < 1e-10);
    assert!((h2(c) - 0.600876).abs() < 1e-6);
}

#[test]
fn purification_of_maximally_mixed_qubit() {
    let phi = purify(&DensityOperator::maximally_mixed(2)).unwrap();
    let m = phi.split_matrix(&["H"]).unwrap();
    let schmidt = herm_eig(&(&m * m.adjoint())).unwrap().values;
    assert!(schmidt.iter().all(|v| (v - 0.5).abs() < 1e-12));
    let back = phi.reduced(&["H"]).unwrap();
    assert!((back.matrix() - CMatrix::identity(2, 2).scale(0.5)).norm() < 1e-12);
}

#[test]
fn and_protocol_by_truth_table() {
    let p = fixtures::and2();
    for x in 0..2 {
        for y in 0..2 {
            let d = simulate(&p, &fixtures::two_party_inputs(&[x], &[y]))
                .unwrap()
                .answer_distribution();
            assert!((d[x & y] - 1.0).abs() < 1e-12, "x={x} y={y}: {d:?}");
        }
    }
}

#[test]
fn loaded_input_and_its_purification() {
    let p = fixtures::and2();
    let loads = BTreeMap::from([
        ("a_in0".to_string(), BTreeMap::from([(0, 0.5), (1, 0.5)])),
        ("b_in0".to_string(), BTreeMap::from([(0, 1.0)])),
    ]);
    let t = simulate_loaded(&p, &loads).unwrap();
    let rho = t.at(0).reduced(&["a_in0", "a_in0_pur"]).unwrap();
    let oracle = diag_state(&[0.5, 0.0, 0.0, 0.5]);
    assert!((rho.matrix() - oracle.matrix()).norm() < 1e-12);
}

/// The first message is a copy of Alice's bit and the second is `a ∧ b`:
/// classical mutual information branch by branch.
#[test]
fn and_information_loss_branch_by_branch() {
    let dist = and_distribution();
    let mut round1 = 0.0;
    let mut round2 = 0.0;
    for d in 0..dist.labels().len() {
        let pd = dist.prob_d(d);
        let pa = dist.marginal_a(d);
        let pb = dist.marginal_b(d);
        let ha: f64 = pa.values().filter(|&&p| p > 0.0).map(|p| -p * p.log2()).sum();
        round1 += pd * ha;
        // I(b : a∧b) with a, b independent
        let p_a1 = pa.get(&1).copied().unwrap_or(0.0);
        let p_b1 = pb.get(&1).copied().unwrap_or(0.0);
        let i2 = h2(p_a1 * p_b1) - p_b1 * h2(p_a1);
        round2 += pd * i2;
    }
    let r = information_loss(&fixtures::and2(), &dist).unwrap();
    assert!((r.terms[0].value - round1).abs() < 1e-9);
    assert!((r.terms[1].value - round2).abs() < 1e-9);
    assert!((r.total - 0.5).abs() < 1e-9);
}

#[test]
fn distribution_table_arithmetic() {
    let d = and_distribution();
    let a = d.label_index("A").unwrap();
    assert!((d.joint(0, 0, a) / d.prob_d(a) - 0.5).abs() < 1e-15);
    assert_eq!(d.joint(1, 1, a), 0.0);
    let pa1: f64 = d.table().iter().filter(|e| e.a == 1).map(|e| e.p).sum();
    assert!((pa1 - 0.25).abs() < 1e-15);
}

#[test]
fn derived_and_protocol_is_exact() {
    let p = fixtures::disj(2, 2);
    let derived = derive_and_protocol(&p, 1, &[0, 0], &and_distribution()).unwrap();
    let a = derived.inputs_of(&derived.parties[0]);
    let b = derived.inputs_of(&derived.parties[1]);
    let mut domain = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            domain.push(qcc_lab::protocol::inputs([(a[0].clone(), x), (b[0].clone(), y)]));
        }
    }
    let eps = error_probability_fn(&derived, &domain, |m| m.values().product()).unwrap();
    assert!(eps.abs() < 1e-12);
}

fn brute_sensitivity(n: usize, f: impl Fn(u32) -> bool) -> usize {
    (0u32..1 << n)
        .map(|s| {
            (0..n)
                .filter(|&i| s >> i & 1 == 0 && f(s | 1 << i) != f(s))
                .count()
        })
        .max()
        .unwrap_or(0)
}

#[test]
fn sensitivity_examples() {
    let empty = BooleanSetFunction::empty_indicator(4).unwrap();
    assert_eq!(monotone_sensitivity(&empty), 4);
    assert_eq!(brute_sensitivity(4, |s| s == 0), 4);
    let at_least_two = BooleanSetFunction::from_fn(3, |s| s.count_ones() >= 2).unwrap();
    assert_eq!(monotone_sensitivity(&at_least_two), 2);
    assert_eq!(brute_sensitivity(3, |s| s.count_ones() >= 2), 2);
    assert_eq!(at_least_two.flips_at(0b001), 2);
}

#[test]
fn zero_round_audit_endpoint() {
    let r = round_elimination_audit(&fixtures::zero_round(), &and_distribution()).unwrap();
    assert_eq!(r.delta0(), 0.0);
    assert_eq!(r.delta_final, 0.0);
    assert!(r.error >= 0.5 && r.endpoint_holds());
    for eps in [0.0, 0.25, 0.49] {
        assert!(r.delta_final < 2.0 - 4.0 * eps);
    }
}
