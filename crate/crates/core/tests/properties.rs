use proptest::prelude::*;

use qcc_lab::metrics::{
    apply_povm, classical_channel_information, classical_fidelity, fidelity, trace_distance,
    ClassicalDistribution,
};
use qcc_lab::protocol::{fixtures, ProtocolProgram};
use qcc_lab::purify::purify;
use qcc_lab::qmat::{
    is_unitary, random_density, random_povm, random_unitary, sqrt_psd, CMatrix, SeededRng,
};
use qcc_lab::reductions::{embed, monotone_sensitivity, BooleanSetFunction};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

fn dist(p: Vec<f64>) -> ClassicalDistribution {
    let total: f64 = p.iter().sum();
    ClassicalDistribution::from_probs(p.iter().map(|x| x / total).collect()).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn binary_channel_bound(
        p in prop::collection::vec(0.01f64..1.0, 2..6),
        q in prop::collection::vec(0.01f64..1.0, 2..6),
    ) {
        let k = p.len().min(q.len());
        let (p, q) = (dist(p[..k].to_vec()), dist(q[..k].to_vec()));
        let b = classical_fidelity(&p, &q).unwrap();
        let info = classical_channel_information(&[0.5, 0.5], &[p, q]);
        prop_assert!(1.0 - b <= info + 1e-12);
    }

    #[test]
    fn state_metrics_ranges(seed in any::<u64>(), d in 2usize..7) {
        let mut rng = SeededRng::new(seed);
        let r1 = rng.range(1, d);
        let r2 = rng.range(1, d);
        let a = random_density(d, r1, &mut rng).unwrap();
        let b = random_density(d, r2, &mut rng).unwrap();
        let f = fidelity(&a, &b).unwrap();
        let t = trace_distance(&a, &b).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&t));
        prop_assert!((f - fidelity(&b, &a).unwrap()).abs() < 1e-9);
        prop_assert!((t - trace_distance(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn square_root_squares_back(seed in any::<u64>(), d in 1usize..9) {
        let mut rng = SeededRng::new(seed);
        let rank = rng.range(1, d);
        let rho = random_density(d, rank, &mut rng).unwrap();
        let s = sqrt_psd(rho.matrix()).unwrap();
        prop_assert!((&s * &s - rho.matrix()).camax() < 1e-8);
    }

    #[test]
    fn random_objects_are_well_formed(seed in any::<u64>(), d in 1usize..9, k in 1usize..6) {
        let mut rng = SeededRng::new(seed);
        prop_assert!(is_unitary(&random_unitary(d, &mut rng), 1e-10));
        let f = random_povm(d, k, &mut rng).unwrap();
        let sum = f.effects().iter().fold(CMatrix::zeros(d, d), |acc, e| acc + e);
        prop_assert!((sum - CMatrix::identity(d, d)).camax() < 1e-9);
        let rho = random_density(d, d, &mut rng).unwrap();
        let p = apply_povm(&f, &rho).unwrap();
        prop_assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn purification_traces_back(seed in any::<u64>(), w in 1usize..4) {
        let mut rng = SeededRng::new(seed);
        let d = 1 << w;
        let rank = rng.range(1, d);
        let rho = random_density(d, rank, &mut rng).unwrap();
        let phi = purify(&rho).unwrap();
        let back = phi.reduced(&["H"]).unwrap();
        prop_assert!((back.matrix() - rho.matrix()).camax() < 1e-9);
    }

    #[test]
    fn embed_replaces_exactly_one(a in prop::collection::vec(0usize..5, 1..8), u in 0usize..5, j in 0usize..8) {
        match embed(&a, j, u) {
            Ok(b) => {
                prop_assert!(j < a.len());
                for (i, (x, y)) in a.iter().zip(&b).enumerate() {
                    prop_assert_eq!(*y, if i == j { u } else { *x });
                }
            }
            Err(_) => prop_assert!(j >= a.len()),
        }
    }

    #[test]
    fn sensitivity_bounded_and_hex_round_trip(n in 0usize..7, bits in any::<u64>()) {
        let table: Vec<bool> = (0..1usize << n).map(|i| bits >> (i % 64) & 1 == 1).collect();
        let f = BooleanSetFunction::new(n, table).unwrap();
        prop_assert!(monotone_sensitivity(&f) <= n);
        let back = BooleanSetFunction::from_hex(&f.to_hex(), Some(n)).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn random_protocol_json_round_trip(seed in any::<u64>()) {
        let p = fixtures::random_protocol(&mut SeededRng::new(seed));
        let back = ProtocolProgram::from_json(&p.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), p.to_json());
        prop_assert!(back.validate().is_ok());
    }
}
