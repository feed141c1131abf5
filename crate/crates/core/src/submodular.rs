//! Set-function oracles, residual functions, submodularity checks, and
//! brute-force submodular function minimization.
//!
//! Minimization scans every feasible subset. The [`SetFunction`] trait is the
//! only thing algorithms see, so a polynomial minimizer can replace
//! [`sfm_bruteforce`] without touching callers.

use crate::error::{Error, Result};
use crate::partition::{Partition, MAX_ENUMERATION};
use crate::scalar::Scalar;
use crate::set::{check_within, Subset, MAX_GROUND};

/// A total map `2^V → scalar`. Must be deterministic.
pub trait SetFunction {
    type Value: Scalar;

    fn ground_size(&self) -> usize;

    fn eval(&self, b: Subset) -> Self::Value;
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    type Value = F::Value;

    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn eval(&self, b: Subset) -> F::Value {
        (**self).eval(b)
    }
}

/// `h_γ(B) = h(B) − γ`, including `h_γ(∅) = −γ`.
#[derive(Clone, Debug)]
pub struct Residual<F: SetFunction> {
    base: F,
    gamma: F::Value,
}

pub fn residual<F: SetFunction>(h: F, gamma: F::Value) -> Residual<F> {
    Residual { base: h, gamma }
}

impl<F: SetFunction> Residual<F> {
    pub fn gamma(&self) -> &F::Value {
        &self.gamma
    }

    pub fn base(&self) -> &F {
        &self.base
    }
}

impl<F: SetFunction> SetFunction for Residual<F> {
    type Value = F::Value;

    fn ground_size(&self) -> usize {
        self.base.ground_size()
    }

    fn eval(&self, b: Subset) -> F::Value {
        self.base.eval(b) - self.gamma.clone()
    }
}

/// `h` restricted to the elements of `within`, re-indexed `0..|within|`.
#[derive(Clone, Debug)]
pub struct Restriction<F> {
    base: F,
    elements: Vec<usize>,
}

pub fn restrict<F: SetFunction>(h: F, within: Subset) -> Result<Restriction<F>> {
    check_within(within, h.ground_size())?;
    Ok(Restriction { base: h, elements: within.to_vec() })
}

impl<F> Restriction<F> {
    /// Maps a subset of the restricted ground back into the original one.
    pub fn lift(&self, b: Subset) -> Subset {
        b.iter().map(|i| self.elements[i]).collect()
    }
}

impl<F: SetFunction> SetFunction for Restriction<F> {
    type Value = F::Value;

    fn ground_size(&self) -> usize {
        self.elements.len()
    }

    fn eval(&self, b: Subset) -> F::Value {
        self.base.eval(self.lift(b))
    }
}

/// Adapts a closure.
pub struct FnSetFunction<V, G> {
    n: usize,
    f: G,
    _value: std::marker::PhantomData<fn() -> V>,
}

impl<V: Scalar, G: Fn(Subset) -> V> FnSetFunction<V, G> {
    pub fn new(n: usize, f: G) -> Self {
        Self { n, f, _value: std::marker::PhantomData }
    }
}

impl<V: Scalar, G: Fn(Subset) -> V> SetFunction for FnSetFunction<V, G> {
    type Value = V;

    fn ground_size(&self) -> usize {
        self.n
    }

    fn eval(&self, b: Subset) -> V {
        (self.f)(b)
    }
}

/// A set function stored as a full table indexed by mask.
#[derive(Clone, Debug, PartialEq)]
pub struct TableFunction<V> {
    n: usize,
    values: Vec<V>,
}

impl<V: Scalar> TableFunction<V> {
    pub fn new(n: usize, values: Vec<V>) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::GroundTooLarge { size: n, limit: MAX_GROUND });
        }
        if values.len() != 1 << n {
            return Err(Error::MalformedModel(format!("table has {} entries, expected {}", values.len(), 1usize << n)));
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(Subset) -> V) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::GroundTooLarge { size: n, limit: MAX_GROUND });
        }
        Self::new(n, Subset::full(n).subsets().map(f).collect())
    }

    /// `g(B) = Σ_{i∈B} w_i`.
    pub fn modular(weights: &[V]) -> Result<Self> {
        Self::from_fn(weights.len(), |b| b.iter().map(|i| weights[i].clone()).sum())
    }
}

impl<V: Scalar> SetFunction for TableFunction<V> {
    type Value = V;

    fn ground_size(&self) -> usize {
        self.n
    }

    fn eval(&self, b: Subset) -> V {
        self.values[b.mask() as usize].clone()
    }
}

/// Pairs `(B₁, B₂)` with `h(B₁) + h(B₂) < h(B₁∪B₂) + h(B₁∩B₂)`.
///
/// Only incomparable pairs are examined (comparable pairs hold with equality),
/// each unordered pair once with `B₁ < B₂` by mask.
pub fn check_submodular<F: SetFunction + ?Sized>(h: &F) -> Result<Vec<(Subset, Subset)>> {
    let n = h.ground_size();
    if n > MAX_ENUMERATION {
        return Err(Error::GroundTooLarge { size: n, limit: MAX_ENUMERATION });
    }
    let table: Vec<F::Value> = Subset::full(n).subsets().map(|b| h.eval(b)).collect();
    let at = |b: Subset| &table[b.mask() as usize];
    let mut violations = Vec::new();
    for m1 in 0..table.len() as u32 {
        for m2 in (m1 + 1)..table.len() as u32 {
            let (b1, b2) = (Subset::from_mask(m1), Subset::from_mask(m2));
            if b1.is_subset_of(b2) || b2.is_subset_of(b1) {
                continue;
            }
            let lhs = at(b1).clone() + at(b2).clone();
            let rhs = at(b1.union(b2)).clone() + at(b1.intersection(b2)).clone();
            if lhs.tol_lt(&rhs) {
                violations.push((b1, b2));
            }
        }
    }
    Ok(violations)
}

/// Supermodularity is submodularity of `-h`.
pub fn check_supermodular<F: SetFunction + ?Sized>(h: &F) -> Result<Vec<(Subset, Subset)>> {
    let neg = FnSetFunction::new(h.ground_size(), |b| -h.eval(b));
    check_submodular(&neg)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SfmResult<V> {
    pub value: V,
    /// Intersection of all minimizers.
    pub minimal: Subset,
    /// Union of all minimizers.
    pub maximal: Subset,
}

/// Minimizes `g` over `must_contain ⊆ B ⊆ within` by exhaustive scan.
///
/// Subsets are visited by increasing cardinality, then mask value. For
/// submodular `g` the minimizers form a lattice, so the returned intersection
/// and union are minimizers themselves; debug builds assert this.
pub fn sfm_bruteforce<F: SetFunction + ?Sized>(g: &F, within: Subset, must_contain: Subset) -> Result<SfmResult<F::Value>> {
    if within.len() > MAX_GROUND {
        return Err(Error::GroundTooLarge { size: within.len(), limit: MAX_GROUND });
    }
    check_within(within, g.ground_size())?;
    if !must_contain.is_subset_of(within) {
        return Err(Error::PreconditionViolated(format!("{must_contain} is not contained in {within}")));
    }
    let free = within.difference(must_contain);
    let mut order: Vec<Subset> = free.subsets().map(|s| s.union(must_contain)).collect();
    order.sort_by_key(|s| (s.len(), s.mask()));

    let mut best: Option<SfmResult<F::Value>> = None;
    for b in order {
        let v = g.eval(b);
        match &mut best {
            None => best = Some(SfmResult { value: v, minimal: b, maximal: b }),
            Some(cur) => {
                if v.tol_lt(&cur.value) {
                    *cur = SfmResult { value: v, minimal: b, maximal: b };
                } else if v.tol_eq(&cur.value) {
                    cur.minimal = cur.minimal.intersection(b);
                    cur.maximal = cur.maximal.union(b);
                }
            }
        }
    }
    let best = best.expect("at least must_contain itself is scanned");
    debug_assert!(
        g.eval(best.minimal).tol_eq(&best.value) && g.eval(best.maximal).tol_eq(&best.value),
        "minimizers of a submodular function are closed under ∩ and ∪"
    );
    Ok(best)
}

/// `h[𝒫] = Σ_{C∈𝒫} h(C)`.
pub fn partition_value<F: SetFunction + ?Sized>(h: &F, p: &Partition) -> Result<F::Value> {
    if p.ground_size() != h.ground_size() {
        return Err(Error::GroundMismatch { left: h.ground_size(), right: p.ground_size() });
    }
    Ok(p.blocks().iter().map(|&c| h.eval(c)).sum())
}
