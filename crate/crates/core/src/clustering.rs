//! Info-clustering: Dilworth truncation of the residual entropy, the
//! principal sequence of partitions, multivariate mutual information, and
//! the original and extended cluster sets.

use crate::error::{Error, Result};
use crate::partition::{partitions, refines, Partition, SetPartitions};
use crate::scalar::{Scalar, BREAKPOINT_SNAP};
use crate::set::{check_within, Subset, MAX_GROUND};
use crate::submodular::{partition_value, residual, restrict, sfm_bruteforce, FnSetFunction, SetFunction};

/// Ground-set limit for routes that enumerate partitions.
pub const MAX_BRUTE_FORCE: usize = 10;

/// Ground-set limit for [`extended_clusters`], which evaluates the MMI of every subset.
pub const MAX_EXTENDED: usize = 12;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DtMethod {
    Incremental,
    BruteForce,
}

/// `ĥ_γ(V)` with its finest optimal partition.
#[derive(Clone, Debug, PartialEq)]
pub struct DtResult<V> {
    pub gamma: V,
    pub value: V,
    pub finest: Partition,
    pub method: DtMethod,
}

/// Minimizes `Σ_{C∈𝒫} (h(C) − γ)` over all partitions of the ground set.
///
/// Elements are processed in index order. For element `i` the vector entry
/// `x_i = min { h_γ(B) − x(B∖{i}) : i ∈ B ⊆ {0..i} }` is computed by
/// exhaustive minimization, and the blocks meeting the minimal minimizer are
/// fused with it. Using minimal minimizers yields the finest optimal partition.
pub fn dilworth_truncation<F: SetFunction + ?Sized>(h: &F, gamma: &F::Value) -> Result<DtResult<F::Value>> {
    let n = h.ground_size();
    if n == 0 {
        return Err(Error::EmptyGround);
    }
    if n > MAX_GROUND {
        return Err(Error::GroundTooLarge { size: n, limit: MAX_GROUND });
    }
    let hg = residual(h, gamma.clone());
    let mut x: Vec<F::Value> = Vec::with_capacity(n);
    let mut blocks: Vec<Subset> = Vec::with_capacity(n);
    for i in 0..n {
        let tight = {
            let x = &x;
            let g = FnSetFunction::new(n, |b: Subset| hg.eval(b) - b.without(i).iter().map(|j| x[j].clone()).sum());
            sfm_bruteforce(&g, Subset::full(i + 1), Subset::singleton(i))?
        };
        x.push(tight.value);
        let (touching, mut rest): (Vec<Subset>, Vec<Subset>) =
            blocks.into_iter().partition(|b| b.intersects(tight.minimal));
        rest.push(touching.into_iter().fold(tight.minimal, Subset::union));
        blocks = rest;
    }
    Ok(DtResult {
        gamma: gamma.clone(),
        value: x.into_iter().sum(),
        finest: Partition::new(n, blocks)?,
        method: DtMethod::Incremental,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DtBruteForce<V> {
    pub gamma: V,
    pub value: V,
    /// Every optimal partition, in enumeration order.
    pub optimal: Vec<Partition>,
    pub finest: Partition,
}

impl<V: Clone> DtBruteForce<V> {
    pub fn to_result(&self) -> DtResult<V> {
        DtResult {
            gamma: self.gamma.clone(),
            value: self.value.clone(),
            finest: self.finest.clone(),
            method: DtMethod::BruteForce,
        }
    }
}

/// Dilworth truncation by enumerating every partition.
pub fn dilworth_truncation_bruteforce<F: SetFunction + ?Sized>(h: &F, gamma: &F::Value) -> Result<DtBruteForce<F::Value>> {
    let n = h.ground_size();
    if n == 0 {
        return Err(Error::EmptyGround);
    }
    if n > MAX_BRUTE_FORCE {
        return Err(Error::GroundTooLarge { size: n, limit: MAX_BRUTE_FORCE });
    }
    let table: Vec<F::Value> = Subset::full(n).subsets().map(|b| h.eval(b) - gamma.clone()).collect();
    let mut best: Option<F::Value> = None;
    let mut optimal: Vec<Partition> = Vec::new();
    for p in partitions(n)? {
        let v: F::Value = p.blocks().iter().map(|b| table[b.mask() as usize].clone()).sum();
        match &best {
            Some(cur) if v.tol_gt(cur) => {}
            Some(cur) if v.tol_eq(cur) => optimal.push(p),
            _ => {
                best = Some(v);
                optimal = vec![p];
            }
        }
    }
    let value = best.expect("at least one partition");
    let finest = finest_of(&optimal)?;
    Ok(DtBruteForce { gamma: gamma.clone(), value, optimal, finest })
}

fn finest_of(optimal: &[Partition]) -> Result<Partition> {
    let mut found = optimal
        .iter()
        .filter(|p| optimal.iter().all(|q| refines(p, q).unwrap_or(false)));
    match (found.next(), found.next()) {
        (Some(p), None) => Ok(p.clone()),
        _ => Err(Error::NoUniqueFinest),
    }
}

/// The principal sequence of partitions.
///
/// `partitions[j]` is the finest optimal partition on the open interval
/// `(critical_values[j-1], critical_values[j])`, with the first interval
/// unbounded below and the last unbounded above. `partitions[0]` is `{V}` and
/// the last entry is the partition into singletons.
#[derive(Clone, Debug, PartialEq)]
pub struct PspResult<V> {
    pub critical_values: Vec<V>,
    pub partitions: Vec<Partition>,
    /// `h[P_j] = Σ_{C∈P_j} h(C)`; the line of `P_j` is `h[P_j] − |P_j|·γ`.
    pub intercepts: Vec<V>,
}

impl<V: Scalar> PspResult<V> {
    /// `ĥ_γ(V)` as the lower envelope of the chain's lines.
    pub fn value_at(&self, gamma: &V) -> V {
        self.partitions
            .iter()
            .zip(&self.intercepts)
            .map(|(p, c)| c.clone() - V::from_usize(p.len()) * gamma.clone())
            .reduce(|a, b| if b.tol_lt(&a) { b } else { a })
            .expect("chain is never empty")
    }

    /// Finest optimal partition at `gamma`. At a critical value this is the
    /// partition of the interval to its right.
    pub fn partition_at(&self, gamma: &V) -> &Partition {
        let idx = self.critical_values.iter().filter(|c| c.tol_le(gamma)).count();
        &self.partitions[idx]
    }
}

#[derive(Clone, Debug)]
struct Line<V> {
    intercept: V,
    blocks: usize,
}

impl<V: Scalar> Line<V> {
    fn of<F: SetFunction<Value = V> + ?Sized>(h: &F, p: &Partition) -> Result<Self> {
        Ok(Line { intercept: partition_value(h, p)?, blocks: p.len() })
    }

    fn at(&self, gamma: &V) -> V {
        self.intercept.clone() - V::from_usize(self.blocks) * gamma.clone()
    }

    /// Abscissa where two lines of different slope cross.
    fn crossing(&self, other: &Self) -> V {
        (other.intercept.clone() - self.intercept.clone()) / V::from_i64(other.blocks as i64 - self.blocks as i64)
    }
}

/// Computes the principal sequence of partitions by parametric search.
///
/// Starting from the lines of `{V}` and the singletons, the crossing of two
/// envelope lines is tested with [`dilworth_truncation`]: a value strictly
/// below the lines exposes a new envelope line (the finest optimal partition
/// there) and the interval splits; otherwise the crossing is a critical value.
pub fn psp<F: SetFunction + ?Sized>(h: &F) -> Result<PspResult<F::Value>> {
    let n = h.ground_size();
    if n == 0 {
        return Err(Error::EmptyGround);
    }
    if n > MAX_GROUND {
        return Err(Error::GroundTooLarge { size: n, limit: MAX_GROUND });
    }
    let top = Line::of(h, &Partition::trivial(n))?;
    let bottom = Line::of(h, &Partition::singletons(n))?;
    let mut critical = Vec::new();
    if n > 1 {
        split_psp(h, &top, &bottom, &mut critical)?;
    }
    critical.sort_by(|a, b| a.tol_cmp(b));
    let critical = dedup_breakpoints(critical);

    let mut chain = Vec::with_capacity(critical.len() + 1);
    for gamma in interval_representatives(&critical) {
        chain.push(dilworth_truncation(h, &gamma)?.finest);
    }
    let intercepts = chain.iter().map(|p| partition_value(h, p)).collect::<Result<_>>()?;
    Ok(PspResult { critical_values: critical, partitions: chain, intercepts })
}

fn split_psp<F: SetFunction + ?Sized>(h: &F, left: &Line<F::Value>, right: &Line<F::Value>, out: &mut Vec<F::Value>) -> Result<()> {
    let gamma = left.crossing(right);
    let dt = dilworth_truncation(h, &gamma)?;
    if dt.value.tol_lt(&left.at(&gamma)) {
        let mid = Line::of(h, &dt.finest)?;
        if left.blocks < mid.blocks && mid.blocks < right.blocks {
            split_psp(h, left, &mid, out)?;
            return split_psp(h, &mid, right, out);
        }
    }
    out.push(gamma);
    Ok(())
}

/// Merges breakpoints that coincide (exactly, or within the snap distance on floats).
pub(crate) fn dedup_breakpoints<V: Scalar>(sorted: Vec<V>) -> Vec<V> {
    let mut out: Vec<V> = Vec::with_capacity(sorted.len());
    for v in sorted {
        let dup = out.last().is_some_and(|last| {
            if V::EXACT {
                last.tol_eq(&v)
            } else {
                (v.to_f64() - last.to_f64()).abs() < BREAKPOINT_SNAP
            }
        });
        if !dup {
            out.push(v);
        }
    }
    out
}

/// One point inside each interval cut out by the sorted breakpoints.
pub(crate) fn interval_representatives<V: Scalar>(breakpoints: &[V]) -> Vec<V> {
    let one = V::from_i64(1);
    match (breakpoints.first(), breakpoints.last()) {
        (Some(first), Some(last)) => std::iter::once(first.clone() - one.clone())
            .chain(breakpoints.windows(2).map(|w| w[0].midpoint(&w[1])))
            .chain(std::iter::once(last.clone() + one))
            .collect(),
        _ => vec![V::zero()],
    }
}

/// `I(Z_B)` by its defining minimum over partitions of `B` with at least two
/// blocks. Returns the value and the first minimizing partition found.
pub fn mmi_bruteforce<F: SetFunction + ?Sized>(h: &F, b: Subset) -> Result<(F::Value, Vec<Subset>)> {
    check_within(b, h.ground_size())?;
    if b.len() < 2 {
        return Err(Error::SubsetTooSmall(b.len()));
    }
    if b.len() > MAX_BRUTE_FORCE {
        return Err(Error::GroundTooLarge { size: b.len(), limit: MAX_BRUTE_FORCE });
    }
    let joint = h.eval(b);
    let mut best: Option<(F::Value, Vec<Subset>)> = None;
    for blocks in SetPartitions::new(b).filter(|blocks| blocks.len() > 1) {
        let sum: F::Value = blocks.iter().map(|&c| h.eval(c)).sum();
        let v = (sum - joint.clone()) / F::Value::from_usize(blocks.len() - 1);
        if best.as_ref().is_none_or(|(cur, _)| v.tol_lt(cur)) {
            best = Some((v, blocks));
        }
    }
    Ok(best.expect("a set of two or more elements has a multi-block partition"))
}

/// `I(Z_B)` as the first critical value of the principal sequence of
/// partitions of `h` restricted to `B`.
pub fn mmi<F: SetFunction + ?Sized>(h: &F, b: Subset) -> Result<F::Value> {
    check_within(b, h.ground_size())?;
    if b.len() < 2 {
        return Err(Error::SubsetTooSmall(b.len()));
    }
    if b.len() == 2 {
        let joint = h.eval(b);
        return Ok(b.iter().map(|i| h.eval(Subset::singleton(i))).sum::<F::Value>() - joint);
    }
    first_critical_value(&restrict(h, b)?)
}

fn first_critical_value<F: SetFunction + ?Sized>(h: &F) -> Result<F::Value> {
    let n = h.ground_size();
    let top = Line::of(h, &Partition::trivial(n))?;
    let mut right = Line::of(h, &Partition::singletons(n))?;
    loop {
        let gamma = top.crossing(&right);
        let dt = dilworth_truncation(h, &gamma)?;
        if !dt.value.tol_lt(&top.at(&gamma)) {
            return Ok(gamma);
        }
        let next = Line::of(h, &dt.finest)?;
        if next.blocks <= top.blocks || next.blocks >= right.blocks {
            return Ok(gamma);
        }
        right = next;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterSet<V> {
    pub gamma: V,
    /// Sorted; every member has at least two elements.
    pub clusters: Vec<Subset>,
    pub extended: bool,
}

impl<V> ClusterSet<V> {
    pub fn contains(&self, b: Subset) -> bool {
        self.clusters.contains(&b)
    }
}

/// Clusters at threshold `gamma`: the non-singleton blocks of the finest
/// optimal partition.
pub fn clusters<F: SetFunction + ?Sized>(h: &F, gamma: &F::Value) -> Result<ClusterSet<F::Value>> {
    let dt = dilworth_truncation(h, gamma)?;
    let mut clusters: Vec<Subset> = dt.finest.non_singleton_blocks().collect();
    clusters.sort();
    Ok(ClusterSet { gamma: gamma.clone(), clusters, extended: false })
}

/// Extended clusters: the original clusters plus every `B` with `|B| > 1`
/// and `I(Z_B) = γ` that does not cut through an original cluster
/// (each original cluster is disjoint from `B` or contained in it).
///
/// On the float backend a candidate whose MMI is within tolerance of `γ`
/// raises [`Error::FloatEqualityAmbiguous`].
pub fn extended_clusters<F: SetFunction + ?Sized>(h: &F, gamma: &F::Value) -> Result<ClusterSet<F::Value>> {
    let n = h.ground_size();
    if n > MAX_EXTENDED {
        return Err(Error::GroundTooLarge { size: n, limit: MAX_EXTENDED });
    }
    let original = clusters(h, gamma)?;
    let mut out = original.clusters.clone();
    for b in Subset::full(n).subsets().filter(|b| b.len() > 1) {
        if original.contains(b) {
            continue;
        }
        let consistent = original.clusters.iter().all(|&c| c.is_disjoint(b) || c.is_subset_of(b));
        if !consistent {
            continue;
        }
        let info = mmi(h, b)?;
        if info.tol_eq(gamma) {
            if !F::Value::EXACT {
                return Err(Error::FloatEqualityAmbiguous { set: b.to_string() });
            }
            out.push(b);
        }
    }
    out.sort();
    Ok(ClusterSet { gamma: gamma.clone(), clusters: out, extended: true })
}

/// Extended clusters as the non-singleton blocks of every optimal partition.
pub fn extended_clusters_bruteforce<F: SetFunction + ?Sized>(h: &F, gamma: &F::Value) -> Result<ClusterSet<F::Value>> {
    let bf = dilworth_truncation_bruteforce(h, gamma)?;
    let mut out: Vec<Subset> = bf.optimal.iter().flat_map(|p| p.non_singleton_blocks()).collect();
    out.sort();
    out.dedup();
    Ok(ClusterSet { gamma: gamma.clone(), clusters: out, extended: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};
    use crate::submodular::TableFunction;

    /// Example A entropies: H(Z0) = 3, H(Z1) = 2, H(Z2) = 1, Z0 = (Z1, Z2).
    fn example_a() -> TableFunction<Rational> {
        TableFunction::from_fn(3, |b| {
            let z0 = b.contains(0);
            let h = if z0 { 3 } else { 2 * b.contains(1) as i64 + b.contains(2) as i64 };
            rational(h, 1)
        })
        .unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        rational(n, d)
    }

    fn part(lists: &[&[usize]]) -> Partition {
        Partition::from_lists(3, lists).unwrap()
    }

    #[test]
    fn truncation_on_fig_segments() {
        let h = example_a();
        let dt = dilworth_truncation(&h, &q(1, 2)).unwrap();
        assert_eq!(dt.value, q(5, 2));
        assert_eq!(dt.finest, Partition::trivial(3));
        let dt = dilworth_truncation(&h, &q(3, 2)).unwrap();
        assert_eq!(dt.value, q(1, 1));
        assert_eq!(dt.finest, part(&[&[0, 1], &[2]]));
        let dt = dilworth_truncation(&h, &q(-100, 1)).unwrap();
        assert_eq!(dt.finest, Partition::trivial(3));
    }

    #[test]
    fn bruteforce_ties_and_finest() {
        let h = example_a();
        let bf = dilworth_truncation_bruteforce(&h, &q(1, 1)).unwrap();
        assert_eq!(bf.value, q(2, 1));
        assert_eq!(bf.optimal.len(), 2);
        assert!(bf.optimal.contains(&Partition::trivial(3)));
        assert_eq!(bf.finest, part(&[&[0, 1], &[2]]));
        let bf = dilworth_truncation_bruteforce(&h, &q(3, 1)).unwrap();
        assert_eq!(bf.optimal, vec![Partition::singletons(3)]);
    }

    #[test]
    fn single_element() {
        let h = TableFunction::from_fn(1, |b| rational(b.len() as i64 * 5, 1)).unwrap();
        let bf = dilworth_truncation_bruteforce(&h, &q(2, 1)).unwrap();
        assert_eq!(bf.value, q(3, 1));
        let p = psp(&h).unwrap();
        assert!(p.critical_values.is_empty());
        assert_eq!(p.partitions, vec![Partition::trivial(1)]);
    }

    #[test]
    fn psp_of_example_a() {
        let p = psp(&example_a()).unwrap();
        assert_eq!(p.critical_values, vec![q(1, 1), q(2, 1)]);
        assert_eq!(p.partitions, vec![Partition::trivial(3), part(&[&[0, 1], &[2]]), Partition::singletons(3)]);
        let values: Vec<Rational> = [0, 1, 2, 3].iter().map(|&g| p.value_at(&q(g, 1))).collect();
        assert_eq!(values, vec![q(3, 1), q(2, 1), q(0, 1), q(-3, 1)]);
        assert_eq!(p.partition_at(&q(1, 1)), &part(&[&[0, 1], &[2]]));
    }

    #[test]
    fn mmi_table() {
        let h = example_a();
        let s = |v: &[usize]| Subset::from_indices(v.iter().copied());
        for (b, want) in [(s(&[1, 2]), 0), (s(&[0, 1]), 2), (s(&[0, 2]), 1), (s(&[0, 1, 2]), 1)] {
            assert_eq!(mmi(&h, b).unwrap(), q(want, 1), "{b}");
            assert_eq!(mmi_bruteforce(&h, b).unwrap().0, q(want, 1), "{b}");
        }
        assert!(matches!(mmi(&h, s(&[1])), Err(Error::SubsetTooSmall(1))));
    }

    #[test]
    fn clusters_of_example_a() {
        let h = example_a();
        assert_eq!(clusters(&h, &q(3, 2)).unwrap().clusters, vec![Subset::from_indices([0, 1])]);
        assert_eq!(clusters(&h, &q(1, 2)).unwrap().clusters, vec![Subset::full(3)]);
        let ext = extended_clusters(&h, &q(3, 2)).unwrap();
        assert_eq!(ext.clusters, vec![Subset::from_indices([0, 1])]);
        assert!(extended_clusters(&h, &q(5, 1)).unwrap().clusters.is_empty());
    }

    #[test]
    fn snapping_merges_close_float_breakpoints() {
        let v = dedup_breakpoints(vec![1.0, 1.0 + 1e-8, 2.0]);
        assert_eq!(v.len(), 2);
        let exact = dedup_breakpoints(vec![q(1, 1), q(1, 1), q(3, 2)]);
        assert_eq!(exact, vec![q(1, 1), q(3, 2)]);
    }
}
