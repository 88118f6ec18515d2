use super::fixtures::*;
use super::*;
use crate::qmat::{Register, RegisterLayout, Role, SeededRng};

fn and_dist() -> PartitionedInput {
    let e = |a, b, d: &str| InputEntry { a, b, d: d.into(), p: 0.25 };
    PartitionedInput::new(
        vec!["A".into(), "B".into()],
        vec![e(0, 0, "A"), e(1, 0, "A"), e(0, 0, "B"), e(0, 1, "B")],
        1,
    )
    .unwrap()
}

#[test]
fn fixtures_validate() {
    for p in [and2(), noisy_and(0.3), zero_round(), disj(2, 1), disj(2, 2), disj(3, 2), paradox(), promise3(2)] {
        let r = p.validate_with(SIM_MAX_WIDTH);
        assert!(r.is_ok(), "{:?}", r);
    }
    assert_eq!(disj(2, 2).communication(), 3);
    assert_eq!(and2().communication(), 2);
}

#[test]
fn and2_is_exact() {
    let p = and2();
    let t = simulate(&p, &two_party_inputs(&[1], &[1])).unwrap();
    assert!((t.answer_distribution()[1] - 1.0).abs() < 1e-12);
    let t = simulate(&p, &two_party_inputs(&[0], &[1])).unwrap();
    assert!((t.answer_distribution()[0] - 1.0).abs() < 1e-12);
    assert!(error_probability(&p, &and_cases()).unwrap() < 1e-12);
    for s in t.snapshots() {
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn reduced_answer_matches_full() {
    let t = simulate(&noisy_and(0.4), &two_party_inputs(&[1], &[1])).unwrap();
    let (a, b) = (t.answer_distribution(), t.answer_distribution_reduced());
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn noisy_and_error_is_cos_squared() {
    for th in [0.2, 0.7, 1.3] {
        let e = error_probability(&noisy_and(th), &and_cases()).unwrap();
        assert!((e - th.cos().powi(2)).abs() < 1e-12);
    }
}

#[test]
fn disj_fixtures_are_exact() {
    for n in 1..=3 {
        for k in 1..=2 {
            assert!(error_probability(&disj(n, k), &disj_cases(n)).unwrap() < 1e-10, "n={n} k={k}");
        }
    }
}

#[test]
fn paradox_and_promise_compute_correctly() {
    assert!(error_probability(&paradox(), &and_cases()).unwrap() < 1e-12);
    let p = promise3(2);
    let t = simulate(&p, &party_inputs(&[vec![0, 1], vec![1, 1], vec![0, 1]])).unwrap();
    assert!((t.answer_distribution()[1] - 1.0).abs() < 1e-10);
    let t = simulate(&p, &party_inputs(&[vec![1, 0], vec![1, 1], vec![0, 1]])).unwrap();
    assert!((t.answer_distribution()[0] - 1.0).abs() < 1e-10);
}

#[test]
fn and2_information_loss() {
    let r = information_loss(&and2(), &and_dist()).unwrap();
    assert!((r.total - 0.5).abs() < 1e-9, "{r:?}");
    assert!((r.terms[0].value - 0.5).abs() < 1e-9);
    assert!(r.terms[1].value.abs() < 1e-9);
    let z = information_loss(&zero_round(), &and_dist()).unwrap();
    assert_eq!(z.total, 0.0);
}

#[test]
fn paradox_quantum_loss_positive() {
    let r = information_loss(&paradox(), &and_dist()).unwrap();
    assert!(r.total > 0.01, "{r:?}");
}

#[test]
fn loaded_input_marginal() {
    let dist = and_dist();
    let t = simulate_distribution(&and2(), &dist, &[1]).unwrap();
    let rho = t.at(0).reduced(&["b_in0".to_string(), purification_name("b_in0")]).unwrap();
    let m = rho.matrix();
    assert!((m[(0, 0)].re - 0.5).abs() < 1e-12);
    assert!((m[(3, 3)].re - 0.5).abs() < 1e-12);
    assert!(m[(0, 3)].norm() < 1e-12);
}

#[test]
fn point_mass_matches_plain_simulation() {
    let dist = PartitionedInput::point_mass(1, 1);
    let a = simulate_distribution(&and2(), &dist, &[0]).unwrap();
    let b = simulate(&and2(), &two_party_inputs(&[1], &[1])).unwrap();
    assert_eq!(a.answer_distribution().len(), b.answer_distribution().len());
    for (x, y) in a.answer_distribution().iter().zip(b.answer_distribution()) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn more_than_two_parties_rejected_for_loss() {
    assert!(matches!(
        information_loss(&promise3(1), &and_dist()),
        Err(crate::Error::UnsupportedParties(3))
    ));
}

#[test]
fn validation_catches_violations() {
    let mut p = and2();
    p.rounds[1].gates.push(GateSpec::x(QubitRef::new("b_in0", 0)));
    assert!(p.validate().has(ViolationKind::SafeInput));

    let mut p = and2();
    p.rounds[0].transfer.clear();
    assert!(p.validate().has(ViolationKind::Round));

    let mut p = and2();
    p.rounds[1].gates.push(GateSpec::x(QubitRef::new("a_in0", 0)));
    assert!(p.validate().has(ViolationKind::SafeInput));

    let mut p = and2();
    p.answer.party = "B".into();
    assert!(p.validate().has(ViolationKind::Answer));

    let mut p = and2();
    p.rounds[0].gates.push(GateSpec::x(QubitRef::new("b_cp0", 0)));
    assert!(p.validate().has(ViolationKind::Ownership));

    let mut regs: Vec<Register> = and2().registers.registers().to_vec();
    regs.push(Register::new("big", 12, "A", Role::Work));
    let mut p = and2();
    p.registers = RegisterLayout::new(regs).unwrap();
    assert!(p.validate().has(ViolationKind::Width));
}

#[test]
fn json_round_trip() {
    for p in [and2(), noisy_and(0.4), paradox(), disj(2, 2)] {
        let q = ProtocolProgram::from_json(&p.to_json()).unwrap();
        assert_eq!(p.to_json(), q.to_json());
    }
    let d = and_dist();
    assert_eq!(PartitionedInput::from_json(&d.to_json()).unwrap(), d);
}

#[test]
fn random_protocols_are_valid_and_satisfy_cleve() {
    let mut rng = SeededRng::new(7);
    for _ in 0..20 {
        let p = random_protocol(&mut rng);
        assert!(p.validate().is_ok());
        assert!(p.rounds.len() <= 3 && p.registers.total_width() <= 10);
        for e in cleve_profile(&p, &and_dist()).unwrap() {
            assert!(e.holds(1e-9), "{e:?}");
        }
    }
}
