//! Feature selection by mutual information: the size-constrained problem,
//! its parametric relaxation `max_B I(Y∧X_B) − γ|B|`, and the principal
//! partition of relaxation optimizers.
//!
//! A [`FeatureProblem`] wraps a lifted oracle: index 0 is the dependent
//! variable `Y`, indices `1..n` are the features `U`.

use std::sync::OnceLock;

use crate::clustering::{dedup_breakpoints, interval_representatives};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::set::{check_within, Subset, MAX_GROUND};
use crate::submodular::{check_supermodular, FnSetFunction, SetFunction};

/// Feature-count limit for routes that materialize whole optimizer families.
pub const MAX_FAMILY: usize = 12;

/// Feature-count limit for the exhaustive supermodularity check.
pub const MAX_SUPERMODULAR_CHECK: usize = 10;

pub struct FeatureProblem<F: SetFunction> {
    lifted: F,
    table: OnceLock<Vec<F::Value>>,
    independent: OnceLock<bool>,
}

impl<F: SetFunction> FeatureProblem<F> {
    /// `lifted` must hold the dependent variable at index 0.
    pub fn new(lifted: F) -> Result<Self> {
        let n = lifted.ground_size();
        if n == 0 {
            return Err(Error::EmptyGround);
        }
        if n > MAX_GROUND {
            return Err(Error::GroundTooLarge { size: n, limit: MAX_GROUND });
        }
        Ok(Self { lifted, table: OnceLock::new(), independent: OnceLock::new() })
    }

    pub fn oracle(&self) -> &F {
        &self.lifted
    }

    pub fn ground_size(&self) -> usize {
        self.lifted.ground_size()
    }

    pub fn feature_count(&self) -> usize {
        self.ground_size() - 1
    }

    /// `U`, as a subset of the lifted ground set.
    pub fn features(&self) -> Subset {
        Subset::full(self.ground_size()).without(0)
    }

    /// Whether `Σ_i H(X_i) = H(X_U)`. Computed once.
    pub fn features_independent(&self) -> bool {
        *self.independent.get_or_init(|| {
            let sum: F::Value = self.features().iter().map(|i| self.lifted.eval(Subset::singleton(i))).sum();
            sum.tol_eq(&self.lifted.eval(self.features()))
        })
    }

    pub fn check_features(&self, b: Subset) -> Result<()> {
        check_within(b, self.ground_size())?;
        if b.contains(0) {
            return Err(Error::PreconditionViolated("feature sets cannot contain the dependent variable".into()));
        }
        Ok(())
    }

    /// `f(B)` for every `B ⊆ U`, indexed by `mask >> 1`.
    fn table(&self) -> &[F::Value] {
        self.table.get_or_init(|| {
            let y = Subset::singleton(0);
            let hy = self.lifted.eval(y);
            self.features()
                .subsets()
                .map(|b| hy.clone() + self.lifted.eval(b) - self.lifted.eval(b.union(y)))
                .collect()
        })
    }

    fn f(&self, b: Subset) -> F::Value {
        self.table()[(b.mask() >> 1) as usize].clone()
    }
}

/// `f(B) = I(Y ∧ X_B)`, with `f(∅) = 0`.
pub fn objective<F: SetFunction>(problem: &FeatureProblem<F>, b: Subset) -> Result<F::Value> {
    problem.check_features(b)?;
    Ok(problem.f(b))
}

/// `f_γ(B) = f(B) − γ|B|`.
pub fn penalized<F: SetFunction>(problem: &FeatureProblem<F>, b: Subset, gamma: &F::Value) -> Result<F::Value> {
    Ok(objective(problem, b)? - F::Value::from_usize(b.len()) * gamma.clone())
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelaxResult<V> {
    pub gamma: V,
    /// `f*(γ)`.
    pub value: V,
    pub minimal: Subset,
    pub maximal: Subset,
    /// Every optimizer in canonical order, when `|U| ≤ 12`.
    pub optimizers: Option<Vec<Subset>>,
}

/// Maximizes `f_γ` by scanning every `B ⊆ U`.
pub fn relax_optimize<F: SetFunction>(problem: &FeatureProblem<F>, gamma: &F::Value) -> Result<RelaxResult<F::Value>> {
    let keep_family = problem.feature_count() <= MAX_FAMILY;
    let mut best: Option<F::Value> = None;
    let mut family: Vec<Subset> = Vec::new();
    for b in problem.features().subsets() {
        let v = problem.f(b) - F::Value::from_usize(b.len()) * gamma.clone();
        match &best {
            Some(cur) if v.tol_lt(cur) => {}
            Some(cur) if v.tol_eq(cur) => family.push(b),
            _ => {
                best = Some(v);
                family = vec![b];
            }
        }
    }
    family.sort();
    let minimal = family.iter().copied().reduce(Subset::intersection).expect("∅ is always scanned");
    let maximal = family.iter().copied().reduce(Subset::union).expect("∅ is always scanned");
    Ok(RelaxResult {
        gamma: gamma.clone(),
        value: best.expect("∅ is always scanned"),
        minimal,
        maximal,
        optimizers: keep_family.then_some(family),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SizeConstrained<V> {
    pub k: usize,
    pub value: V,
    /// All maximizers of size `k`, in canonical order.
    pub argmax: Vec<Subset>,
}

/// `max { f(B) : B ⊆ U, |B| = k }` by exhaustive search.
pub fn size_constrained<F: SetFunction>(problem: &FeatureProblem<F>, k: usize) -> Result<SizeConstrained<F::Value>> {
    let m = problem.feature_count();
    if k > m {
        return Err(Error::BadSize { k, max: m });
    }
    let mut best: Option<F::Value> = None;
    let mut argmax = Vec::new();
    for b in problem.features().subsets().filter(|b| b.len() == k) {
        let v = problem.f(b);
        match &best {
            Some(cur) if v.tol_lt(cur) => {}
            Some(cur) if v.tol_eq(cur) => argmax.push(b),
            _ => {
                best = Some(v);
                argmax = vec![b];
            }
        }
    }
    argmax.sort();
    Ok(SizeConstrained { k, value: best.expect("some subset has size k"), argmax })
}

/// One open interval between consecutive breakpoints of `f*`.
#[derive(Clone, Debug, PartialEq)]
pub struct PpRegion<V> {
    /// `None` means unbounded.
    pub lower: Option<V>,
    pub upper: Option<V>,
    /// `f(B)` and `|B|` of the optimizers inside the interval: `f* = intercept − size·γ`.
    pub intercept: V,
    pub size: usize,
    pub minimal: Subset,
    pub maximal: Subset,
    pub optimizers: Option<Vec<Subset>>,
}

/// The principal partition.
///
/// `regions[j]` covers `(breakpoints[j-1], breakpoints[j])`; optimizers at a
/// breakpoint are kept separately in `at_breakpoints`, since a breakpoint may
/// admit optimizers that are optimal nowhere else.
#[derive(Clone, Debug, PartialEq)]
pub struct PpResult<V> {
    pub breakpoints: Vec<V>,
    /// `f*` at each breakpoint.
    pub tangent_values: Vec<V>,
    pub regions: Vec<PpRegion<V>>,
    pub at_breakpoints: Vec<RelaxResult<V>>,
}

impl<V: Scalar> PpResult<V> {
    /// `f*(γ)` as the upper envelope of the region lines.
    pub fn value_at(&self, gamma: &V) -> V {
        self.regions
            .iter()
            .map(|r| r.intercept.clone() - V::from_usize(r.size) * gamma.clone())
            .reduce(|a, b| if b.tol_gt(&a) { b } else { a })
            .expect("at least one region")
    }

    /// Every optimizer on the closed region `j`: its interior optimizers plus
    /// those at its endpoints. Requires families.
    pub fn closed_family(&self, j: usize) -> Option<Vec<Subset>> {
        let mut out = self.regions[j].optimizers.clone()?;
        if j > 0 {
            out.extend(self.at_breakpoints[j - 1].optimizers.clone()?);
        }
        if j < self.at_breakpoints.len() {
            out.extend(self.at_breakpoints[j].optimizers.clone()?);
        }
        out.sort();
        out.dedup();
        Some(out)
    }

    /// Every optimizer at any `γ`, when families are available.
    pub fn all_optimizers(&self) -> Option<Vec<Subset>> {
        let mut out = Vec::new();
        for r in &self.regions {
            out.extend(r.optimizers.clone()?);
        }
        for b in &self.at_breakpoints {
            out.extend(b.optimizers.clone()?);
        }
        out.sort();
        out.dedup();
        Some(out)
    }
}

#[derive(Clone, Debug)]
struct Line<V> {
    intercept: V,
    size: usize,
}

impl<V: Scalar> Line<V> {
    fn at(&self, gamma: &V) -> V {
        self.intercept.clone() - V::from_usize(self.size) * gamma.clone()
    }
}

/// Breakpoints of the convex envelope `f*(γ) = max_B f(B) − γ|B|`, found by
/// intersecting envelope lines and testing the crossing with
/// [`relax_optimize`], then optimizer families inside and between them.
pub fn pp<F: SetFunction>(problem: &FeatureProblem<F>) -> Result<PpResult<F::Value>> {
    let m = problem.feature_count();
    if m > MAX_FAMILY {
        return Err(Error::GroundTooLarge { size: m, limit: MAX_FAMILY });
    }
    let u = problem.features();
    let full = Line { intercept: problem.f(u), size: m };
    let empty = Line { intercept: F::Value::zero(), size: 0 };
    let mut breakpoints = Vec::new();
    if m > 0 {
        split_pp(problem, &full, &empty, &mut breakpoints)?;
    }
    breakpoints.sort_by(|a, b| a.tol_cmp(b));
    let breakpoints = dedup_breakpoints(breakpoints);

    let mut regions = Vec::with_capacity(breakpoints.len() + 1);
    for (j, gamma) in interval_representatives(&breakpoints).into_iter().enumerate() {
        let r = relax_optimize(problem, &gamma)?;
        regions.push(PpRegion {
            lower: j.checked_sub(1).map(|i| breakpoints[i].clone()),
            upper: breakpoints.get(j).cloned(),
            intercept: problem.f(r.maximal),
            size: r.maximal.len(),
            minimal: r.minimal,
            maximal: r.maximal,
            optimizers: r.optimizers,
        });
    }
    let at_breakpoints = breakpoints.iter().map(|g| relax_optimize(problem, g)).collect::<Result<Vec<_>>>()?;
    let tangent_values = at_breakpoints.iter().map(|r| r.value.clone()).collect();
    Ok(PpResult { breakpoints, tangent_values, regions, at_breakpoints })
}

// `left` is the steeper line (larger |B|).
fn split_pp<F: SetFunction>(
    problem: &FeatureProblem<F>,
    left: &Line<F::Value>,
    right: &Line<F::Value>,
    out: &mut Vec<F::Value>,
) -> Result<()> {
    let gamma = (left.intercept.clone() - right.intercept.clone()) / F::Value::from_usize(left.size - right.size);
    let r = relax_optimize(problem, &gamma)?;
    if r.value.tol_gt(&right.at(&gamma)) {
        let mid = Line { intercept: problem.f(r.maximal), size: r.maximal.len() };
        if right.size < mid.size && mid.size < left.size {
            split_pp(problem, left, &mid, out)?;
            return split_pp(problem, &mid, right, out);
        }
    }
    out.push(gamma);
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianReport<V> {
    pub gamma: V,
    /// Each relaxation optimizer and whether it maximizes `f` among sets of its size.
    pub entries: Vec<(Subset, bool)>,
    pub passed: bool,
}

impl<V> LagrangianReport<V> {
    pub fn witnesses(&self) -> impl Iterator<Item = Subset> + '_ {
        self.entries.iter().filter(|(_, ok)| !ok).map(|(b, _)| b).copied()
    }
}

/// Checks that every maximizer of `f_γ` also solves the size-constrained
/// problem for its own size.
pub fn check_lagrangian_link<F: SetFunction>(problem: &FeatureProblem<F>, gamma: &F::Value) -> Result<LagrangianReport<F::Value>> {
    let m = problem.feature_count();
    if m > MAX_FAMILY {
        return Err(Error::GroundTooLarge { size: m, limit: MAX_FAMILY });
    }
    let relax = relax_optimize(problem, gamma)?;
    let mut best_by_size: Vec<Option<F::Value>> = vec![None; m + 1];
    let mut entries = Vec::new();
    for b in relax.optimizers.expect("family kept for |U| ≤ 12") {
        let k = b.len();
        if best_by_size[k].is_none() {
            best_by_size[k] = Some(size_constrained(problem, k)?.value);
        }
        let best = best_by_size[k].as_ref().expect("just filled");
        entries.push((b, problem.f(b).tol_eq(best)));
    }
    let passed = entries.iter().all(|(_, ok)| *ok);
    Ok(LagrangianReport { gamma: gamma.clone(), entries, passed })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Supermodularity {
    Holds,
    /// Pairs `(B₁, B₂)` of feature sets, as subsets of the lifted ground set.
    Violated(Vec<(Subset, Subset)>),
    /// Features are not mutually independent.
    NotApplicable,
}

/// Checks `f(B₁) + f(B₂) ≤ f(B₁∪B₂) + f(B₁∩B₂)` over all pairs, which holds
/// whenever the features are mutually independent.
pub fn check_supermodular_objective<F: SetFunction>(problem: &FeatureProblem<F>) -> Result<Supermodularity> {
    let m = problem.feature_count();
    if m > MAX_SUPERMODULAR_CHECK {
        return Err(Error::GroundTooLarge { size: m, limit: MAX_SUPERMODULAR_CHECK });
    }
    if !problem.features_independent() {
        return Ok(Supermodularity::NotApplicable);
    }
    let shift = |b: Subset| Subset::from_mask(b.mask() << 1);
    let f = FnSetFunction::new(m, |b: Subset| problem.f(shift(b)));
    let pairs = check_supermodular(&f)?;
    Ok(if pairs.is_empty() {
        Supermodularity::Holds
    } else {
        Supermodularity::Violated(pairs.into_iter().map(|(a, b)| (shift(a), shift(b))).collect())
    })
}
