//! Worked examples loaded from the shipped fixtures.

mod common;

use common::{fixture, problem};
use infoclust::scalar::rational;
use infoclust::{
    check_block_structure, check_lagrangian_link, check_supermodular_objective, clusters, conditional_entropy,
    dilworth_truncation, entropy, extended_clusters, is_mutually_independent, mmi, mutual_information,
    partition_value, psp, residual, sfm_bruteforce, Partition, Rational, SetFunction, SourceModel, Subset,
    Supermodularity,
};

fn q(n: i64, d: i64) -> Rational {
    rational(n, d)
}

fn s(v: &[usize]) -> Subset {
    Subset::from_indices(v.iter().copied())
}

fn with_exact<R>(name: &str, f: impl FnOnce(&infoclust::LinearAtomicSource) -> R) -> R {
    let SourceModel::LinearAtomic(src) = fixture(name) else { panic!("{name} is not linear-atomic") };
    f(&src)
}

#[test]
fn entropies_and_information() {
    with_exact("example_a.json", |h| {
        assert_eq!(entropy(h, s(&[1])).unwrap(), q(2, 1));
        assert_eq!(entropy(h, s(&[2])).unwrap(), q(1, 1));
        assert_eq!(mutual_information(h, s(&[0]), s(&[1])).unwrap(), q(2, 1));
        assert_eq!(conditional_entropy(h, s(&[1, 2]), s(&[0])).unwrap(), q(0, 1));
        assert!(is_mutually_independent(h, &[s(&[1]), s(&[2])]).unwrap());
    });
    with_exact("example_c.json", |h| assert_eq!(entropy(h, s(&[0])).unwrap(), q(7, 3)));
    with_exact("example_d.json", |h| {
        assert_eq!(mutual_information(h, s(&[2]), s(&[3])).unwrap(), q(1, 1));
        assert_eq!(conditional_entropy(h, s(&[2]), s(&[3])).unwrap(), q(1, 1));
        assert!(!is_mutually_independent(h, &[s(&[1]), s(&[2]), s(&[3])]).unwrap());
    });
}

#[test]
fn pmf_matches_linear_atomic_on_example_a() {
    let SourceModel::Pmf(p) = fixture("example_a_pmf.json") else { panic!() };
    with_exact("example_a.json", |h| {
        for b in Subset::full(3).subsets() {
            assert!((p.eval(b) - infoclust::Scalar::to_f64(&h.eval(b))).abs() < 1e-9, "{b}");
        }
    });
}

#[test]
fn residual_and_partition_values() {
    with_exact("example_a.json", |h| {
        assert_eq!(residual(h, q(1, 1)).eval(s(&[2])), q(0, 1));
        assert_eq!(residual(h, q(2, 1)).eval(Subset::full(3)), q(1, 1));
        let g = residual(h, q(1, 1));
        assert_eq!(partition_value(&g, &Partition::trivial(3)).unwrap(), q(2, 1));
        assert_eq!(partition_value(&g, &Partition::from_lists(3, &[vec![0, 1], vec![2]]).unwrap()).unwrap(), q(2, 1));
        let sfm = sfm_bruteforce(&residual(h, q(3, 2)), Subset::full(3), Subset::empty()).unwrap();
        assert_eq!((sfm.value, sfm.minimal), (q(-3, 2), Subset::empty()));
    });
}

#[test]
fn clustering_examples() {
    with_exact("example_a.json", |h| {
        assert_eq!(dilworth_truncation(h, &q(1, 2)).unwrap().value, q(5, 2));
        assert_eq!(clusters(h, &q(3, 2)).unwrap().clusters, vec![s(&[0, 1])]);
        assert_eq!(clusters(h, &q(1, 2)).unwrap().clusters, vec![s(&[0, 1, 2])]);
        assert_eq!(extended_clusters(h, &q(3, 2)).unwrap().clusters, vec![s(&[0, 1])]);
        assert!(extended_clusters(h, &q(3, 1)).unwrap().clusters.is_empty());
    });
    with_exact("example_b.json", |h| {
        let r = psp(h).unwrap();
        assert_eq!(r.critical_values, vec![q(1, 1)]);
        assert_eq!(r.partitions, vec![Partition::trivial(3), Partition::singletons(3)]);
        assert!(clusters(h, &q(1, 1)).unwrap().clusters.is_empty());
    });
    with_exact("example_c.json", |h| {
        let r = psp(h).unwrap();
        assert_eq!(r.partitions.first(), Some(&Partition::trivial(5)));
        assert_eq!(r.partitions.last(), Some(&Partition::singletons(5)));
        assert_eq!(mmi(h, s(&[0, 4])).unwrap(), q(1, 3));
    });
}

#[test]
fn feature_selection_examples() {
    assert!(check_lagrangian_link(&problem("example_a.json"), &q(3, 2)).unwrap().passed);
    assert_eq!(check_supermodular_objective(&problem("example_a.json")).unwrap(), Supermodularity::Holds);
    assert_eq!(check_supermodular_objective(&problem("example_d.json")).unwrap(), Supermodularity::NotApplicable);
    let r = check_block_structure(&problem("example_b.json"), &q(1, 1)).unwrap();
    assert!(r.passed);
    assert_eq!(r.partitions.len(), 4);
}
