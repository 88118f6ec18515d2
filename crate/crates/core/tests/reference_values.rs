use num_rational::Rational64;

use qcc_lab::protocol::{error_probability, fixtures, information_loss};
use qcc_lab::reductions::{
    and_distribution, and_function, classical_paradox, collapses, collapses_everywhere,
    compare_terms, disj_function, embed, reduction_report, round_elimination_audit,
};

#[test]
fn and_law_conditionals() {
    let d = and_distribution();
    let (a, b) = (d.label_index("A").unwrap(), d.label_index("B").unwrap());
    for (x, y, label) in [(0, 0, a), (1, 0, a), (0, 0, b), (0, 1, b)] {
        assert_eq!(d.joint(x, y, label) / d.prob_d(label), 0.5);
    }
    assert_eq!(d.joint(1, 1, a), 0.0);
    assert_eq!(d.joint(1, 1, b), 0.0);
    assert_eq!(d.prob_d(a), 0.5);
}

#[test]
fn embedding_replaces_the_middle_entry() {
    assert_eq!(embed(&["a1", "a2", "a3"], 1, "u").unwrap(), vec!["a1", "u", "a3"]);
}

#[test]
fn disjoint_backgrounds_collapse_disj_to_and() {
    let f = disj_function(3).unwrap();
    let h = and_function();
    for x in [vec![0, 0, 0], vec![1, 2, 0], vec![2, 1, 2]] {
        assert!(collapses_everywhere(&f, &x, &h).unwrap());
    }
    // a background that already intersects fixes DISJ to 1
    assert!(!collapses(&f, &[3, 0, 0], 1, &h).unwrap());
}

#[test]
fn exact_and_meets_the_loss_lower_bound() {
    let p = fixtures::and2();
    let eps = error_probability(&p, &fixtures::and_cases()).unwrap();
    let r = information_loss(&p, &and_distribution()).unwrap().with_error(eps);
    let bound = r.and_lower_bound().unwrap();
    assert_eq!(bound, 1.0 / 8.0);
    assert!(r.total >= bound);
}

#[test]
fn reduction_respects_the_upper_bound_and_each_term() {
    let p = fixtures::disj(2, 2);
    let r = reduction_report(&p, 1, None, &and_distribution()).unwrap();
    assert_eq!((r.source_rounds, r.source_qubits, r.coordinates), (2, 3, 2));
    assert_eq!(r.upper_bound, 6.0);
    assert!(r.loss.total <= 6.0);
    for dhat in [[0, 0], [1, 0], [0, 1], [1, 1]] {
        for t in compare_terms(&p, 1, &dhat, &and_distribution()).unwrap() {
            assert!(t.derived <= t.source + 1e-8, "{t:?}");
        }
    }
}

#[test]
fn chain_starts_at_zero() {
    for p in [fixtures::zero_round(), fixtures::and2(), fixtures::noisy_and(0.3)] {
        let r = round_elimination_audit(&p, &and_distribution()).unwrap();
        assert_eq!(r.delta0(), 0.0);
    }
}

#[test]
fn random_pad_protocol_is_exact_and_lossless() {
    let c = classical_paradox();
    assert_eq!(c.error(|a, b| a & b), Rational64::from_integer(0));
    let terms = c.information_loss(&and_distribution());
    assert!(terms.iter().all(|&t| t == 0.0), "{terms:?}");
}
