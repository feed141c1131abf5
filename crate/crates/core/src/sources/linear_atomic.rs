use std::collections::HashSet;

use num_traits::{Signed, Zero};

use super::{EntropyCache, Severity, Violation, ViolationKind};
use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::set::{GroundSet, Subset};
use crate::submodular::SetFunction;

const MAX_BITS: usize = 128;
const MAX_ATOMS: usize = 64;

/// Variables built from independent primitives.
///
/// A *bit* is a uniform binary variable of entropy 1; a variable component
/// may be any GF(2) combination of bits, written `W2^W3^W4`. An *atom* is an
/// independent primitive with rational entropy `w > 0`; it may appear only as
/// a whole component, never inside an XOR. The entropy of a collection is
/// the GF(2) rank of its bit combinations plus the total weight of its atoms.
#[derive(Clone, Debug)]
pub struct LinearAtomicSource {
    ground: GroundSet,
    bits: Vec<String>,
    atoms: Vec<(String, Rational)>,
    // Per variable: bit combinations as masks over `bits`, atoms as a mask.
    combos: Vec<Vec<u128>>,
    atom_masks: Vec<u64>,
    cache: EntropyCache<Rational>,
}

impl LinearAtomicSource {
    /// `variables` pairs a name with its component expressions.
    pub fn new<S: AsRef<str>>(
        bits: Vec<String>,
        atoms: Vec<(String, Rational)>,
        variables: Vec<(String, Vec<S>)>,
    ) -> Result<Self> {
        let mut violations = Vec::new();
        let err = |kind| Violation { severity: Severity::Error, kind };

        let mut seen = HashSet::new();
        for name in bits.iter().chain(atoms.iter().map(|(n, _)| n)) {
            if !seen.insert(name.as_str()) {
                violations.push(err(ViolationKind::DuplicateName(name.clone())));
            }
        }
        if bits.len() > MAX_BITS {
            violations.push(err(ViolationKind::TooManyPrimitives { kind: "bits", count: bits.len(), limit: MAX_BITS }));
        }
        if atoms.len() > MAX_ATOMS {
            violations.push(err(ViolationKind::TooManyPrimitives { kind: "atoms", count: atoms.len(), limit: MAX_ATOMS }));
        }
        for (name, w) in &atoms {
            if !w.is_positive() {
                violations.push(err(ViolationKind::NonPositiveWeight { atom: name.clone(), weight: w.clone() }));
            }
        }

        let bit_index = |name: &str| bits.iter().position(|b| b == name).filter(|&i| i < MAX_BITS);
        let atom_index = |name: &str| atoms.iter().position(|(a, _)| a == name).filter(|&i| i < MAX_ATOMS);

        let mut combos = Vec::with_capacity(variables.len());
        let mut atom_masks = Vec::with_capacity(variables.len());
        for (var, exprs) in &variables {
            let mut var_combos = Vec::new();
            let mut var_atoms = 0u64;
            for expr in exprs {
                let expr = expr.as_ref();
                let terms: Vec<&str> = expr.split('^').map(str::trim).collect();
                if terms.len() == 1 {
                    if let Some(a) = atom_index(terms[0]) {
                        var_atoms |= 1 << a;
                        continue;
                    }
                }
                let mut mask = 0u128;
                for term in terms {
                    if let Some(b) = bit_index(term) {
                        mask ^= 1 << b;
                    } else if atom_index(term).is_some() {
                        violations.push(err(ViolationKind::AtomInXor { variable: var.clone(), expr: expr.to_string() }));
                    } else {
                        violations.push(err(ViolationKind::UnknownReference {
                            variable: var.clone(),
                            name: term.to_string(),
                        }));
                    }
                }
                var_combos.push(mask);
            }
            combos.push(var_combos);
            atom_masks.push(var_atoms);
        }

        let ground = GroundSet::new(variables.iter().map(|(n, _)| n.clone()));
        if !violations.is_empty() {
            return Err(Error::InvalidModel(violations));
        }
        Ok(Self { ground: ground?, bits, atoms, combos, atom_masks, cache: EntropyCache::default() })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn bits(&self) -> &[String] {
        &self.bits
    }

    pub fn atoms(&self) -> &[(String, Rational)] {
        &self.atoms
    }

    /// Component expressions of variable `i`, as accepted by [`Self::new`].
    pub fn components(&self, i: usize) -> Vec<String> {
        let mut out: Vec<String> = self.combos[i]
            .iter()
            .map(|&m| {
                let terms: Vec<&str> = (0..MAX_BITS).filter(|&b| m >> b & 1 == 1).map(|b| self.bits[b].as_str()).collect();
                if terms.is_empty() {
                    // The zero combination carries no entropy; any bit XORed with itself encodes it.
                    format!("{0}^{0}", self.bits[0])
                } else {
                    terms.join("^")
                }
            })
            .collect();
        out.extend((0..self.atoms.len()).filter(|&a| self.atom_masks[i] >> a & 1 == 1).map(|a| self.atoms[a].0.clone()));
        out
    }

    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        Ok(Self {
            ground: self.ground.reordered(order)?,
            bits: self.bits.clone(),
            atoms: self.atoms.clone(),
            combos: order.iter().map(|&i| self.combos[i].clone()).collect(),
            atom_masks: order.iter().map(|&i| self.atom_masks[i]).collect(),
            cache: EntropyCache::default(),
        })
    }

    fn compute(&self, b: Subset) -> Rational {
        let mut basis = [0u128; MAX_BITS];
        let mut rank = 0i64;
        let mut atoms = 0u64;
        for i in b.iter() {
            atoms |= self.atom_masks[i];
            for &c in &self.combos[i] {
                if insert_into_basis(&mut basis, c) {
                    rank += 1;
                }
            }
        }
        let weight: Rational = (0..self.atoms.len())
            .filter(|&a| atoms >> a & 1 == 1)
            .fold(Rational::zero(), |acc, a| acc + &self.atoms[a].1);
        Rational::from_integer(rank.into()) + weight
    }
}

/// Gaussian elimination over GF(2); returns whether `v` was independent.
fn insert_into_basis(basis: &mut [u128; MAX_BITS], mut v: u128) -> bool {
    while v != 0 {
        let lead = 127 - v.leading_zeros() as usize;
        if basis[lead] == 0 {
            basis[lead] = v;
            return true;
        }
        v ^= basis[lead];
    }
    false
}

impl SetFunction for LinearAtomicSource {
    type Value = Rational;

    fn ground_size(&self) -> usize {
        self.ground.len()
    }

    fn eval(&self, b: Subset) -> Rational {
        self.cache.get_or_compute(b, || self.compute(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn var(name: &str, comps: &[&str]) -> (String, Vec<String>) {
        (name.to_string(), names(comps))
    }

    #[test]
    fn rank_plus_weight() {
        let src = LinearAtomicSource::new(
            names(&["W1", "W2", "W3", "W4"]),
            vec![("W5".into(), rational(1, 3))],
            vec![
                var("Y", &["W1", "W2^W3^W4", "W5"]),
                var("X1", &["W1", "W2"]),
                var("X2", &["W3"]),
                var("X3", &["W4"]),
                var("X4", &["W5"]),
            ],
        )
        .unwrap();
        assert_eq!(src.eval(Subset::singleton(0)), rational(7, 3));
        assert_eq!(src.eval(Subset::from_indices([0, 1])), rational(10, 3));
        assert_eq!(src.eval(Subset::full(5)), rational(13, 3));
        assert_eq!(src.eval(Subset::empty()), rational(0, 1));
    }

    #[test]
    fn dependent_combinations_do_not_add_rank() {
        let src = LinearAtomicSource::new(
            names(&["a", "b"]),
            vec![],
            vec![var("A", &["a"]), var("B", &["b"]), var("C", &["a^b"])],
        )
        .unwrap();
        assert_eq!(src.eval(Subset::full(3)), rational(2, 1));
        assert_eq!(src.eval(Subset::from_indices([0, 2])), rational(2, 1));
    }

    #[test]
    fn rejects_atoms_inside_xor_and_unknown_names() {
        let e = LinearAtomicSource::new(
            names(&["a"]),
            vec![("w".into(), rational(1, 2))],
            vec![var("A", &["a^w"]), var("B", &["zz"])],
        )
        .unwrap_err();
        let Error::InvalidModel(v) = e else { panic!("expected InvalidModel") };
        assert!(v.iter().any(|x| matches!(x.kind, ViolationKind::AtomInXor { .. })));
        assert!(v.iter().any(|x| matches!(x.kind, ViolationKind::UnknownReference { .. })));
    }

    #[test]
    fn rejects_non_positive_weights() {
        let e = LinearAtomicSource::new(Vec::new(), vec![("w".into(), rational(0, 1))], vec![var("A", &["w"])]);
        assert!(matches!(e, Err(Error::InvalidModel(_))));
    }

    #[test]
    fn components_round_trip() {
        let src = LinearAtomicSource::new(
            names(&["a", "b"]),
            vec![("w".into(), rational(1, 2))],
            vec![var("A", &["a^b", "w"])],
        )
        .unwrap();
        assert_eq!(src.components(0), vec!["a^b".to_string(), "w".to_string()]);
    }
}
