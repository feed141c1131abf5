//! Exact discrete sources and the information measures derived from their
//! entropy oracles. Entropy is in bits throughout.

mod linear_atomic;
mod pmf;
mod table;

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

pub use linear_atomic::LinearAtomicSource;
pub use pmf::PmfSource;
pub use table::EntropyTableSource;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::set::{check_within, GroundSet, Subset};
use crate::submodular::SetFunction;

/// Arithmetic a backend computes in.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarKind {
    ExactRational,
    FloatWithTolerance,
}

#[derive(Clone, Debug)]
pub enum SourceModel {
    LinearAtomic(LinearAtomicSource),
    Pmf(PmfSource),
    EntropyTable(EntropyTableSource),
}

/// Runs `$body` with `$src` bound to the concrete backend of `$model`.
/// Every arm must evaluate to the same type.
#[macro_export]
macro_rules! with_source {
    ($model:expr, $src:ident => $body:expr) => {
        match $model {
            $crate::SourceModel::LinearAtomic($src) => $body,
            $crate::SourceModel::Pmf($src) => $body,
            $crate::SourceModel::EntropyTable($src) => $body,
        }
    };
}

impl SourceModel {
    pub fn ground(&self) -> &GroundSet {
        with_source!(self, s => s.ground())
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            SourceModel::Pmf(_) => ScalarKind::FloatWithTolerance,
            _ => ScalarKind::ExactRational,
        }
    }

    pub fn backend_name(&self) -> &'static str {
        match self {
            SourceModel::LinearAtomic(_) => "linear_atomic",
            SourceModel::Pmf(_) => "pmf",
            SourceModel::EntropyTable(_) => "entropy_table",
        }
    }

    /// Semantic checks on an already-constructed model. Structural problems
    /// (dangling references, wrong arity, missing table rows) are rejected at
    /// construction instead.
    pub fn validate(&self) -> Vec<Violation> {
        match self {
            SourceModel::LinearAtomic(_) => Vec::new(),
            SourceModel::Pmf(s) => s.validate(),
            SourceModel::EntropyTable(s) => s.validate(),
        }
    }

    /// Same model with variables permuted: position `i` holds old variable `order[i]`.
    pub fn reordered(&self, order: &[usize]) -> Result<SourceModel> {
        let n = self.ground().len();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::PreconditionViolated(format!("{order:?} is not a permutation of 0..{n}")));
        }
        Ok(match self {
            SourceModel::LinearAtomic(s) => SourceModel::LinearAtomic(s.reordered(order)?),
            SourceModel::Pmf(s) => SourceModel::Pmf(s.reordered(order)?),
            SourceModel::EntropyTable(s) => SourceModel::EntropyTable(s.reordered(order)?),
        })
    }

    /// Moves `dependent` to index 0, keeping the remaining variables in
    /// declaration order.
    pub fn lift(&self, dependent: &str) -> Result<SourceModel> {
        let ground = self.ground();
        let d = ground.index_of(dependent).ok_or_else(|| Error::UnknownVariable(dependent.to_string()))?;
        let order: Vec<usize> = std::iter::once(d).chain((0..ground.len()).filter(|&i| i != d)).collect();
        self.reordered(&order)
    }
}

impl From<LinearAtomicSource> for SourceModel {
    fn from(s: LinearAtomicSource) -> Self {
        SourceModel::LinearAtomic(s)
    }
}

impl From<PmfSource> for SourceModel {
    fn from(s: PmfSource) -> Self {
        SourceModel::Pmf(s)
    }
}

impl From<EntropyTableSource> for SourceModel {
    fn from(s: EntropyTableSource) -> Self {
        SourceModel::EntropyTable(s)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub severity: Severity,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ViolationKind {
    ProbabilitySum { total: Rational },
    NonPositiveProbability { outcome: usize, probability: Rational },
    Arity { outcome: usize, expected: usize, found: usize },
    UnknownReference { variable: String, name: String },
    AtomInXor { variable: String, expr: String },
    NonPositiveWeight { atom: String, weight: Rational },
    DuplicateName(String),
    TooManyPrimitives { kind: &'static str, count: usize, limit: usize },
    MissingEntry { set: String },
    DuplicateEntry { set: String },
    NonZeroEmptyEntry { value: Rational },
    NegativeEntropy { set: String },
    NonMonotone { subset: String, superset: String },
    NonSubmodular { b1: String, b2: String },
    ChecksSkipped { reason: String },
    UndeclaredVariable { section: &'static str, name: String },
    MissingDefinition { variable: String },
    BadValue { section: &'static str, detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}", self.kind)
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::scalar::format_rational as q;
        match self {
            ViolationKind::ProbabilitySum { total } => write!(f, "probabilities sum to {}, not 1", q(total)),
            ViolationKind::NonPositiveProbability { outcome, probability } => {
                write!(f, "outcome {outcome} has non-positive probability {}", q(probability))
            }
            ViolationKind::Arity { outcome, expected, found } => {
                write!(f, "outcome {outcome} has {found} values, expected {expected}")
            }
            ViolationKind::UnknownReference { variable, name } => {
                write!(f, "variable {variable} references undeclared primitive {name:?}")
            }
            ViolationKind::AtomInXor { variable, expr } => {
                write!(f, "variable {variable}: atom used inside XOR expression {expr:?}")
            }
            ViolationKind::NonPositiveWeight { atom, weight } => write!(f, "atom {atom} has weight {} <= 0", q(weight)),
            ViolationKind::DuplicateName(n) => write!(f, "duplicate name {n}"),
            ViolationKind::TooManyPrimitives { kind, count, limit } => write!(f, "{count} {kind} declared, limit {limit}"),
            ViolationKind::MissingEntry { set } => write!(f, "no entropy given for {set}"),
            ViolationKind::DuplicateEntry { set } => write!(f, "entropy given twice for {set}"),
            ViolationKind::NonZeroEmptyEntry { value } => write!(f, "entropy of the empty set given as {}", q(value)),
            ViolationKind::NegativeEntropy { set } => write!(f, "negative entropy for {set}"),
            ViolationKind::NonMonotone { subset, superset } => write!(f, "h({superset}) < h({subset})"),
            ViolationKind::NonSubmodular { b1, b2 } => write!(f, "submodularity fails for ({b1}, {b2})"),
            ViolationKind::ChecksSkipped { reason } => f.write_str(reason),
            ViolationKind::UndeclaredVariable { section, name } => write!(f, "{section} refers to undeclared variable {name}"),
            ViolationKind::MissingDefinition { variable } => write!(f, "variable {variable} has no components"),
            ViolationKind::BadValue { section, detail } => write!(f, "{section}: {detail}"),
        }
    }
}

/// Per-instance memo keyed by subset mask. Clones start empty.
pub(crate) struct EntropyCache<V> {
    map: Mutex<HashMap<u32, V>>,
}

impl<V: Clone> EntropyCache<V> {
    pub(crate) fn get_or_compute(&self, b: Subset, compute: impl FnOnce() -> V) -> V {
        if let Some(v) = self.map.lock().expect("entropy cache poisoned").get(&b.mask()) {
            return v.clone();
        }
        let v = compute();
        self.map.lock().expect("entropy cache poisoned").insert(b.mask(), v.clone());
        v
    }
}

impl<V> Default for EntropyCache<V> {
    fn default() -> Self {
        Self { map: Mutex::new(HashMap::new()) }
    }
}

impl<V> Clone for EntropyCache<V> {
    fn clone(&self) -> Self {
        Self::default()
    }
}

impl<V> fmt::Debug for EntropyCache<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EntropyCache").finish_non_exhaustive()
    }
}

/// `H(Z_B)`.
pub fn entropy<F: SetFunction + ?Sized>(h: &F, b: Subset) -> Result<F::Value> {
    check_within(b, h.ground_size())?;
    Ok(h.eval(b))
}

/// `I(Z_a ∧ Z_b) = H(a) + H(b) − H(a∪b)`.
pub fn mutual_information<F: SetFunction + ?Sized>(h: &F, a: Subset, b: Subset) -> Result<F::Value> {
    check_within(a.union(b), h.ground_size())?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(h.eval(a) + h.eval(b) - h.eval(a.union(b)))
}

/// `H(Z_a | Z_b) = H(a∪b) − H(b)`.
pub fn conditional_entropy<F: SetFunction + ?Sized>(h: &F, a: Subset, given: Subset) -> Result<F::Value> {
    check_within(a.union(given), h.ground_size())?;
    Ok(h.eval(a.union(given)) - h.eval(given))
}

/// `Σ H(member) = H(∪ members)`.
pub fn is_mutually_independent<F: SetFunction + ?Sized>(h: &F, family: &[Subset]) -> Result<bool> {
    let mut union = Subset::empty();
    for &m in family {
        if m.is_empty() || m.intersects(union) {
            return Err(Error::OverlappingFamily);
        }
        union = union.union(m);
    }
    check_within(union, h.ground_size())?;
    let sum: F::Value = family.iter().map(|&m| h.eval(m)).sum();
    Ok(sum.tol_eq(&h.eval(union)))
}

/// Document-level validation: constructs the model and reports every
/// violation found on the way instead of failing on the first.
pub fn validate(doc: &crate::document::ModelDocument) -> Vec<Violation> {
    match doc.build() {
        Ok(model) => model.validate(),
        Err(Error::InvalidModel(v)) => v,
        Err(e) => vec![Violation {
            severity: Severity::Error,
            kind: ViolationKind::ChecksSkipped { reason: format!("model could not be constructed: {e}") },
        }],
    }
}
