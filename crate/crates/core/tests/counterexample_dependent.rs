//! The dependent-feature example (ε = 1/4): where duality breaks and why.

mod common;

use common::problem;
use infoclust::scalar::rational;
use infoclust::{
    check_lagrangian_link, clusters, dilworth_truncation_bruteforce, mmi, pp, relax_optimize, size_constrained,
    sweep_duality, verify_duality, Partition, Rational, Subset,
};

fn q(n: i64, d: i64) -> Rational {
    rational(n, d)
}

fn s(v: &[usize]) -> Subset {
    Subset::from_indices(v.iter().copied())
}

#[test]
fn mmi_values() {
    let p = problem("example_d.json");
    assert_eq!(mmi(p.oracle(), s(&[0, 2, 3])).unwrap(), q(3, 2));
    assert_eq!(mmi(p.oracle(), s(&[0, 1, 2])).unwrap(), q(1, 1));
    assert_eq!(mmi(p.oracle(), s(&[0, 1, 3])).unwrap(), q(1, 1));
    assert!(!p.features_independent());
}

#[test]
fn trivial_partition_is_uniquely_optimal_at_one() {
    let p = problem("example_d.json");
    let bf = dilworth_truncation_bruteforce(p.oracle(), &q(1, 1)).unwrap();
    assert_eq!(bf.optimal, vec![Partition::trivial(4)]);
    assert_eq!(bf.value, q(13, 4));
}

#[test]
fn forward_direction_fails_at_one() {
    let p = problem("example_d.json");
    let relax = relax_optimize(&p, &q(1, 1)).unwrap();
    assert_eq!(relax.optimizers.unwrap(), vec![s(&[1]), s(&[1, 2]), s(&[1, 2, 3]), s(&[1, 3])]);
    let r = verify_duality(&p, &q(1, 1)).unwrap();
    assert!(!r.passed);
    assert_eq!(r.forward_witnesses(), vec![s(&[1]), s(&[1, 2]), s(&[1, 3])]);
    assert!(r.backward_witnesses().is_empty());
}

#[test]
fn block_023_appears_only_above_one_plus_eps() {
    let p = problem("example_d.json");
    // {1} separates once γ exceeds H(X1) = 5/4; {0,2,3} holds together until 3/2.
    assert_eq!(clusters(p.oracle(), &q(6, 5)).unwrap().clusters, vec![s(&[0, 1, 2, 3])]);
    assert_eq!(clusters(p.oracle(), &q(11, 8)).unwrap().clusters, vec![s(&[0, 2, 3])]);
    assert!(clusters(p.oracle(), &q(8, 5)).unwrap().clusters.is_empty());
}

#[test]
fn backward_direction_fails_between_breakpoints() {
    let p = problem("example_d.json");
    let r = verify_duality(&p, &q(11, 8)).unwrap();
    assert!(!r.passed);
    assert_eq!(r.backward_witnesses(), vec![s(&[0, 2, 3])]);
}

#[test]
fn pair_23_is_never_relax_optimal() {
    let p = problem("example_d.json");
    let k2 = size_constrained(&p, 2).unwrap();
    assert_eq!(k2.argmax, vec![s(&[1, 2]), s(&[1, 3])]);
    assert!(!pp(&p).unwrap().all_optimizers().unwrap().contains(&s(&[2, 3])));
}

#[test]
fn lagrangian_link_survives_dependence() {
    let p = problem("example_d.json");
    for g in [-1, 0, 4, 5, 6, 8, 11, 12, 16] {
        assert!(check_lagrangian_link(&p, &q(g, 4)).unwrap().passed, "γ = {g}/4");
    }
}

#[test]
fn sweep_failures_confined_to_closed_one_to_three_halves() {
    let p = problem("example_d.json");
    for r in sweep_duality(&p).unwrap() {
        let inside = q(1, 1) <= r.gamma && r.gamma <= q(3, 2);
        assert_eq!(r.passed, !inside, "γ = {}", r.gamma);
    }
}
