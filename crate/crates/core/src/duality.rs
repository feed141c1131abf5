//! The link between feature selection and clustering of the lifted source
//! `V = {0} ∪ U`: `B` maximizes `f_γ` iff `{0} ∪ B` is a block of some
//! optimal partition of `ĥ_γ(V)`. The equivalence needs mutually independent
//! features; reports are produced regardless so failures can be exhibited.

use crate::clustering::{dedup_breakpoints, dilworth_truncation_bruteforce, psp, MAX_BRUTE_FORCE};
use crate::error::{Error, Result};
use crate::featsel::{pp, relax_optimize, FeatureProblem};
use crate::partition::{block_partition, Partition};
use crate::scalar::Scalar;
use crate::set::Subset;
use crate::submodular::SetFunction;

fn guard<F: SetFunction>(problem: &FeatureProblem<F>) -> Result<()> {
    let n = problem.ground_size();
    if n > MAX_BRUTE_FORCE {
        return Err(Error::GroundTooLarge { size: n, limit: MAX_BRUTE_FORCE });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockStructureReport<V> {
    pub gamma: V,
    /// Each optimal partition with the `B` for which it equals the
    /// `({0}∪B)`-block partition, or `None` if it has another shape.
    pub partitions: Vec<(Partition, Option<Subset>)>,
    pub passed: bool,
}

/// Checks that for `γ > 0` and independent features every optimal partition
/// is a block partition around the dependent variable.
pub fn check_block_structure<F: SetFunction>(problem: &FeatureProblem<F>, gamma: &F::Value) -> Result<BlockStructureReport<F::Value>> {
    guard(problem)?;
    if !gamma.tol_gt(&F::Value::zero()) {
        return Err(Error::PreconditionViolated(format!("γ = {gamma} must be positive")));
    }
    if !problem.features_independent() {
        return Err(Error::PreconditionViolated("features are not mutually independent".into()));
    }
    let n = problem.ground_size();
    let bf = dilworth_truncation_bruteforce(problem.oracle(), gamma)?;
    let mut partitions = Vec::with_capacity(bf.optimal.len());
    for p in bf.optimal {
        let c = p.block_of(0).expect("0 is in the ground set");
        let b = (block_partition(c, n)? == p).then(|| c.without(0));
        partitions.push((p, b));
    }
    let passed = partitions.iter().all(|(_, b)| b.is_some());
    Ok(BlockStructureReport { gamma: gamma.clone(), partitions, passed })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualityReport<V> {
    pub gamma: V,
    /// Each relaxation optimizer `B`: is `{0}∪B` a block of some optimal partition?
    pub forward: Vec<(Subset, bool)>,
    /// Each block `{0}∪B` of some optimal partition: is `B` a relaxation optimizer?
    pub backward: Vec<(Subset, bool)>,
    pub independent: bool,
    pub passed: bool,
}

impl<V> DualityReport<V> {
    /// Optimizers `B` whose `{0}∪B` is never an optimal block.
    pub fn forward_witnesses(&self) -> Vec<Subset> {
        self.forward.iter().filter(|(_, ok)| !ok).map(|(b, _)| *b).collect()
    }

    /// Optimal blocks `{0}∪B` whose `B` is not a relaxation optimizer.
    pub fn backward_witnesses(&self) -> Vec<Subset> {
        self.backward.iter().filter(|(_, ok)| !ok).map(|(c, _)| *c).collect()
    }
}

/// Evaluates both directions of the equivalence at `gamma`, using every
/// optimal partition rather than only the finest.
pub fn verify_duality<F: SetFunction>(problem: &FeatureProblem<F>, gamma: &F::Value) -> Result<DualityReport<F::Value>> {
    guard(problem)?;
    let bf = dilworth_truncation_bruteforce(problem.oracle(), gamma)?;
    let mut blocks: Vec<Subset> = bf.optimal.iter().map(|p| p.block_of(0).expect("0 is in the ground set")).collect();
    blocks.sort();
    blocks.dedup();
    let relax = relax_optimize(problem, gamma)?;
    let optimizers = relax.optimizers.expect("family kept at this size");
    let forward: Vec<(Subset, bool)> = optimizers.iter().map(|&b| (b, blocks.contains(&b.with(0)))).collect();
    let backward: Vec<(Subset, bool)> = blocks.iter().map(|&c| (c, optimizers.contains(&c.without(0)))).collect();
    let passed = forward.iter().chain(&backward).all(|(_, ok)| *ok);
    Ok(DualityReport { gamma: gamma.clone(), forward, backward, independent: problem.features_independent(), passed })
}

/// Thresholds covering every regime: all critical values of the lifted PSP
/// and of the PP, `0`, every midpoint between consecutive points, and one
/// point beyond each end (the lower one negative).
pub fn sweep_gammas<F: SetFunction>(problem: &FeatureProblem<F>) -> Result<Vec<F::Value>> {
    let mut points = psp(problem.oracle())?.critical_values;
    points.extend(pp(problem)?.breakpoints);
    points.push(F::Value::zero());
    points.sort_by(|a, b| a.tol_cmp(b));
    let points = dedup_breakpoints(points);
    let one = F::Value::from_i64(1);
    let mut out = vec![points[0].clone() - one.clone()];
    for w in points.windows(2) {
        out.push(w[0].clone());
        out.push(w[0].midpoint(&w[1]));
    }
    let last = points.last().expect("0 is always present").clone();
    out.push(last.clone());
    out.push(last + one);
    Ok(out)
}

pub fn sweep_duality<F: SetFunction>(problem: &FeatureProblem<F>) -> Result<Vec<DualityReport<F::Value>>> {
    sweep_gammas(problem)?.iter().map(|g| verify_duality(problem, g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};
    use crate::sources::LinearAtomicSource;

    fn la(bits: &[&str], atoms: &[(&str, Rational)], vars: &[(&str, &[&str])]) -> FeatureProblem<LinearAtomicSource> {
        let src = LinearAtomicSource::new(
            bits.iter().map(|s| s.to_string()).collect(),
            atoms.iter().map(|(n, w)| (n.to_string(), w.clone())).collect(),
            vars.iter().map(|(n, c)| (n.to_string(), c.to_vec())).collect(),
        )
        .unwrap();
        FeatureProblem::new(src).unwrap()
    }

    fn example_a() -> FeatureProblem<LinearAtomicSource> {
        la(&["a", "b", "c"], &[], &[("Y", &["a", "b", "c"]), ("X1", &["a", "b"]), ("X2", &["c"])])
    }

    fn example_b() -> FeatureProblem<LinearAtomicSource> {
        la(&["a", "b"], &[], &[("Y", &["a", "b"]), ("X1", &["a"]), ("X2", &["b"])])
    }

    fn s(v: &[usize]) -> Subset {
        Subset::from_indices(v.iter().copied())
    }

    #[test]
    fn block_structure() {
        let r = check_block_structure(&example_a(), &rational(3, 2)).unwrap();
        assert!(r.passed);
        assert_eq!(r.partitions.iter().map(|(_, b)| *b).collect::<Vec<_>>(), vec![Some(s(&[1]))]);
        let r = check_block_structure(&example_a(), &rational(1, 2)).unwrap();
        assert_eq!(r.partitions[0].1, Some(s(&[1, 2])));
        let r = check_block_structure(&example_b(), &rational(1, 1)).unwrap();
        let mut bs: Vec<Subset> = r.partitions.iter().filter_map(|(_, b)| *b).collect();
        bs.sort();
        assert_eq!(bs, vec![Subset::empty(), s(&[1]), s(&[1, 2]), s(&[2])]);
        assert!(check_block_structure(&example_a(), &rational(0, 1)).is_err());
    }

    #[test]
    fn duality_holds_on_independent_examples() {
        let r = verify_duality(&example_a(), &rational(3, 2)).unwrap();
        assert!(r.passed && r.independent);
        let r = verify_duality(&example_b(), &rational(1, 1)).unwrap();
        assert!(r.passed);
        let blocks: Vec<Subset> = r.backward.iter().map(|(c, _)| *c).collect();
        assert!(blocks.contains(&s(&[0, 1])) && blocks.contains(&s(&[0, 2])));
    }

    #[test]
    fn sweep_points_of_example_a() {
        let want: Vec<Rational> = [(-1, 1), (0, 1), (1, 2), (1, 1), (3, 2), (2, 1), (3, 1)]
            .iter()
            .map(|&(n, d)| rational(n, d))
            .collect();
        assert_eq!(sweep_gammas(&example_a()).unwrap(), want);
        assert!(sweep_duality(&example_a()).unwrap().iter().all(|r| r.passed));
        let gb: Vec<Rational> = sweep_gammas(&example_b()).unwrap();
        assert_eq!(gb, [(-1, 1), (0, 1), (1, 2), (1, 1), (2, 1)].iter().map(|&(n, d)| rational(n, d)).collect::<Vec<_>>());
    }
}
