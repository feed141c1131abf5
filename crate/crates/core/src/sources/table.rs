use num_traits::{Signed, Zero};

use super::{Severity, Violation, ViolationKind};
use crate::error::{Error, Result};
use crate::partition::MAX_ENUMERATION;
use crate::scalar::{Rational, Scalar};
use crate::set::{GroundSet, Subset};
use crate::submodular::{check_submodular, SetFunction};

/// Entropy given directly for every non-empty subset.
#[derive(Clone, Debug)]
pub struct EntropyTableSource {
    ground: GroundSet,
    values: Vec<Rational>,
}

impl EntropyTableSource {
    /// Every non-empty subset must appear exactly once.
    pub fn new(variables: Vec<String>, entries: Vec<(Subset, Rational)>) -> Result<Self> {
        let ground = GroundSet::new(variables)?;
        let size = 1usize << ground.len();
        let mut values: Vec<Option<Rational>> = vec![None; size];
        values[0] = Some(<Rational as Zero>::zero());
        let mut violations = Vec::new();
        for (b, v) in entries {
            ground.check(b)?;
            if b.is_empty() {
                if !v.is_zero() {
                    violations.push(Violation {
                        severity: Severity::Error,
                        kind: ViolationKind::NonZeroEmptyEntry { value: v },
                    });
                }
                continue;
            }
            let slot = &mut values[b.mask() as usize];
            if slot.is_some() {
                violations.push(Violation {
                    severity: Severity::Error,
                    kind: ViolationKind::DuplicateEntry { set: ground.format_subset(b) },
                });
            }
            *slot = Some(v);
        }
        for (mask, v) in values.iter().enumerate() {
            if v.is_none() {
                violations.push(Violation {
                    severity: Severity::Error,
                    kind: ViolationKind::MissingEntry { set: ground.format_subset(Subset::from_mask(mask as u32)) },
                });
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidModel(violations));
        }
        Ok(Self { ground, values: values.into_iter().map(Option::unwrap).collect() })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    /// Polymatroid checks. All findings are warnings: a table that is not an
    /// entropy function is still a valid set function.
    pub fn validate(&self) -> Vec<Violation> {
        let warn = |kind| Violation { severity: Severity::Warning, kind };
        let mut out = Vec::new();
        let n = self.ground.len();
        for b in Subset::full(n).subsets() {
            if self.eval(b).is_negative() {
                out.push(warn(ViolationKind::NegativeEntropy { set: self.ground.format_subset(b) }));
            }
        }
        if n > MAX_ENUMERATION {
            out.push(warn(ViolationKind::ChecksSkipped { reason: format!("monotonicity and submodularity not checked for n > {MAX_ENUMERATION}") }));
            return out;
        }
        for b in Subset::full(n).subsets() {
            for i in Subset::full(n).difference(b).iter() {
                let bigger = b.with(i);
                if self.eval(bigger).tol_lt(&self.eval(b)) {
                    out.push(warn(ViolationKind::NonMonotone {
                        subset: self.ground.format_subset(b),
                        superset: self.ground.format_subset(bigger),
                    }));
                }
            }
        }
        if let Ok(pairs) = check_submodular(self) {
            out.extend(pairs.into_iter().map(|(b1, b2)| {
                warn(ViolationKind::NonSubmodular { b1: self.ground.format_subset(b1), b2: self.ground.format_subset(b2) })
            }));
        }
        out
    }

    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let n = self.ground.len();
        let values = Subset::full(n)
            .subsets()
            .map(|b| {
                let original: Subset = b.iter().map(|i| order[i]).collect();
                self.values[original.mask() as usize].clone()
            })
            .collect();
        Ok(Self { ground: self.ground.reordered(order)?, values })
    }
}

impl SetFunction for EntropyTableSource {
    type Value = Rational;

    fn ground_size(&self) -> usize {
        self.ground.len()
    }

    fn eval(&self, b: Subset) -> Rational {
        self.values[b.mask() as usize].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn incomplete_table_is_rejected() {
        let e = EntropyTableSource::new(names(&["A", "B"]), vec![(Subset::singleton(0), rational(1, 1))]).unwrap_err();
        let Error::InvalidModel(v) = e else { panic!() };
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn submodularity_violation_names_the_pair() {
        // h({1}) + h({2}) < h({1,2}) among three variables.
        let entries = vec![
            (Subset::from_indices([0]), rational(1, 1)),
            (Subset::from_indices([1]), rational(1, 2)),
            (Subset::from_indices([2]), rational(1, 2)),
            (Subset::from_indices([0, 1]), rational(3, 2)),
            (Subset::from_indices([0, 2]), rational(3, 2)),
            (Subset::from_indices([1, 2]), rational(2, 1)),
            (Subset::from_indices([0, 1, 2]), rational(3, 1)),
        ];
        let t = EntropyTableSource::new(names(&["V0", "V1", "V2"]), entries).unwrap();
        let v = t.validate();
        assert!(v.iter().all(|x| x.severity == Severity::Warning));
        assert!(v.iter().any(|x| matches!(&x.kind,
            ViolationKind::NonSubmodular { b1, b2 } if b1 == "{V1}" && b2 == "{V2}")));
    }

    #[test]
    fn reorder_permutes_entries() {
        let entries = vec![
            (Subset::from_indices([0]), rational(1, 1)),
            (Subset::from_indices([1]), rational(2, 1)),
            (Subset::from_indices([0, 1]), rational(3, 1)),
        ];
        let t = EntropyTableSource::new(names(&["A", "B"]), entries).unwrap();
        let r = t.reordered(&[1, 0]).unwrap();
        assert_eq!(r.ground().name(0), "B");
        assert_eq!(r.eval(Subset::singleton(0)), rational(2, 1));
    }
}
