use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use super::{EntropyCache, Severity, Violation, ViolationKind};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::set::{GroundSet, Subset};
use crate::submodular::SetFunction;

/// An explicit joint distribution with rational probabilities.
///
/// Entropies are computed in `f64` from exact marginal probabilities.
#[derive(Clone, Debug)]
pub struct PmfSource {
    ground: GroundSet,
    outcomes: Vec<(Rational, Vec<String>)>,
    cache: EntropyCache<f64>,
}

impl PmfSource {
    /// Tuples must have one value per variable. Probability mass is not
    /// checked here; see [`PmfSource::validate`].
    pub fn new(variables: Vec<String>, outcomes: Vec<(Rational, Vec<String>)>) -> Result<Self> {
        let ground = GroundSet::new(variables)?;
        let violations: Vec<Violation> = outcomes
            .iter()
            .enumerate()
            .filter(|(_, (_, values))| values.len() != ground.len())
            .map(|(i, (_, values))| Violation {
                severity: Severity::Error,
                kind: ViolationKind::Arity { outcome: i, expected: ground.len(), found: values.len() },
            })
            .collect();
        if !violations.is_empty() {
            return Err(Error::InvalidModel(violations));
        }
        Ok(Self { ground, outcomes, cache: EntropyCache::default() })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn outcomes(&self) -> &[(Rational, Vec<String>)] {
        &self.outcomes
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, (p, _)) in self.outcomes.iter().enumerate() {
            if !p.is_positive() {
                out.push(Violation {
                    severity: Severity::Error,
                    kind: ViolationKind::NonPositiveProbability { outcome: i, probability: p.clone() },
                });
            }
        }
        let total: Rational = self.outcomes.iter().map(|(p, _)| p.clone()).sum();
        if total != Rational::one() {
            out.push(Violation { severity: Severity::Error, kind: ViolationKind::ProbabilitySum { total } });
        }
        out
    }

    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        Ok(Self {
            ground: self.ground.reordered(order)?,
            outcomes: self
                .outcomes
                .iter()
                .map(|(p, vals)| (p.clone(), order.iter().map(|&i| vals[i].clone()).collect()))
                .collect(),
            cache: EntropyCache::default(),
        })
    }

    fn compute(&self, b: Subset) -> f64 {
        if b.is_empty() {
            return 0.0;
        }
        let idx = b.to_vec();
        let mut marginal: HashMap<Vec<&str>, Rational> = HashMap::new();
        for (p, values) in &self.outcomes {
            let key: Vec<&str> = idx.iter().map(|&i| values[i].as_str()).collect();
            *marginal.entry(key).or_insert_with(<Rational as Zero>::zero) += p;
        }
        marginal
            .values()
            .map(Scalar::to_f64)
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.log2())
            .sum()
    }
}

impl SetFunction for PmfSource {
    type Value = f64;

    fn ground_size(&self) -> usize {
        self.ground.len()
    }

    fn eval(&self, b: Subset) -> f64 {
        self.cache.get_or_compute(b, || self.compute(b))
    }
}
