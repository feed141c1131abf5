//! Ground sets and subsets.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Library-wide cap on the number of variables.
pub const MAX_GROUND: usize = 20;

/// Ordered, duplicate-free list of variable identifiers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct GroundSet {
    names: Vec<String>,
}

impl GroundSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::EmptyGround);
        }
        if names.len() > MAX_GROUND {
            return Err(Error::GroundTooLarge { size: names.len(), limit: MAX_GROUND });
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        Ok(Self { names })
    }

    /// `0, 1, ..., n-1` as names.
    pub fn indexed(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn subset<'a, I>(&self, names: I) -> Result<Subset>
    where
        I: IntoIterator<Item = &'a str>,
    {
        names.into_iter().try_fold(Subset::empty(), |acc, name| {
            self.index_of(name)
                .map(|i| acc.with(i))
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))
        })
    }

    pub fn check(&self, b: Subset) -> Result<()> {
        check_within(b, self.len())
    }

    pub fn subset_names(&self, b: Subset) -> Vec<String> {
        b.iter().map(|i| self.names[i].clone()).collect()
    }

    pub fn format_subset(&self, b: Subset) -> String {
        format!("{{{}}}", self.subset_names(b).join(","))
    }

    /// Copy with elements permuted: position `i` of the result is
    /// element `order[i]` of `self`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        Self::new(order.iter().map(|&i| self.names[i].clone()))
    }
}

impl TryFrom<Vec<String>> for GroundSet {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<GroundSet> for Vec<String> {
    fn from(g: GroundSet) -> Self {
        g.names
    }
}

pub(crate) fn check_within(b: Subset, n: usize) -> Result<()> {
    match b.iter().find(|&i| i >= n) {
        Some(i) => Err(Error::UnknownVariable(format!("index {i}"))),
        None => Ok(()),
    }
}

/// Membership mask over a ground set indexed by declaration order.
///
/// Ordering is lexicographic on the ascending element lists, so `{0,1}`
/// sorts before `{0,1,2}` which sorts before `{0,2}`.
///
/// Serializes as the ascending list of member indices.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", from = "Vec<usize>")]
pub struct Subset(u32);

impl From<Subset> for Vec<usize> {
    fn from(b: Subset) -> Self {
        b.to_vec()
    }
}

impl From<Vec<usize>> for Subset {
    fn from(v: Vec<usize>) -> Self {
        Subset::from_indices(v)
    }
}

impl Subset {
    pub const fn empty() -> Self {
        Subset(0)
    }

    pub const fn from_mask(mask: u32) -> Self {
        Subset(mask)
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= 32);
        if n == 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(items: I) -> Self {
        items.into_iter().fold(Subset::empty(), Subset::with)
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    #[must_use]
    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | (1 << i))
    }

    #[must_use]
    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    pub fn union(self, other: Self) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn intersects(self, other: Self) -> bool {
        !self.is_disjoint(other)
    }

    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, in increasing mask order (starting with ∅).
    pub fn subsets(self) -> Subsets {
        Subsets { of: self.0, next: Some(0) }
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Subset::from_indices(iter)
    }
}

#[derive(Clone, Debug)]
pub struct Elements(u32);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

#[derive(Clone, Debug)]
pub struct Subsets {
    of: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        // Standard submask successor in increasing order.
        self.next = if cur == self.of { None } else { Some(((cur | !self.of).wrapping_add(1)) & self.of) };
        Some(Subset(cur))
    }
}
