//! Set partitions, the refinement order, and enumeration.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::{GroundSet, Subset, MAX_GROUND};

/// Largest ground set that [`enumerate_partitions`] accepts (Bell(12) = 4213597).
pub const MAX_ENUMERATION: usize = 12;

/// Disjoint non-empty blocks covering `{0, .., n-1}`.
///
/// Always stored in canonical form: blocks sorted by smallest element.
/// Equality and hashing therefore coincide with set-partition equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "PartitionRepr", try_from = "PartitionRepr")]
pub struct Partition {
    n: usize,
    blocks: Vec<Subset>,
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    n: usize,
    blocks: Vec<Subset>,
}

impl From<Partition> for PartitionRepr {
    fn from(p: Partition) -> Self {
        PartitionRepr { n: p.n, blocks: p.blocks }
    }
}

impl TryFrom<PartitionRepr> for Partition {
    type Error = Error;

    fn try_from(r: PartitionRepr) -> Result<Self> {
        Partition::new(r.n, r.blocks)
    }
}

impl Partition {
    pub fn new(n: usize, mut blocks: Vec<Subset>) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::GroundTooLarge { size: n, limit: MAX_GROUND });
        }
        let mut seen = Subset::empty();
        for &b in &blocks {
            if b.is_empty() {
                return Err(Error::EmptyBlock);
            }
            if b.intersects(seen) {
                return Err(Error::NotAPartition(format!("block {b} overlaps another block")));
            }
            seen = seen.union(b);
        }
        if seen != Subset::full(n) {
            return Err(Error::NotAPartition(format!(
                "blocks cover {seen}, expected all of {}",
                Subset::full(n)
            )));
        }
        blocks.sort_by_key(|b| b.min_element());
        Ok(Self { n, blocks })
    }

    /// Builds from index lists, e.g. `[[0, 1], [2]]`.
    pub fn from_lists<B: AsRef<[usize]>>(n: usize, lists: &[B]) -> Result<Self> {
        Self::new(n, lists.iter().map(|l| Subset::from_indices(l.as_ref().iter().copied())).collect())
    }

    /// `{V}`.
    pub fn trivial(n: usize) -> Self {
        Self { n, blocks: vec![Subset::full(n)] }
    }

    pub fn singletons(n: usize) -> Self {
        Self { n, blocks: (0..n).map(Subset::singleton).collect() }
    }

    /// Canonical form without validation; callers guarantee the invariants.
    pub(crate) fn from_blocks_unchecked(n: usize, mut blocks: Vec<Subset>) -> Self {
        blocks.sort_by_key(|b| b.min_element());
        debug_assert!(Self::new(n, blocks.clone()).is_ok());
        Self { n, blocks }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, i: usize) -> Option<Subset> {
        self.blocks.iter().copied().find(|b| b.contains(i))
    }

    pub fn contains_block(&self, b: Subset) -> bool {
        self.blocks.contains(&b)
    }

    pub fn non_singleton_blocks(&self) -> impl Iterator<Item = Subset> + '_ {
        self.blocks.iter().copied().filter(|b| b.len() > 1)
    }

    pub fn format_with(&self, ground: &GroundSet) -> String {
        let inner: Vec<String> = self.blocks.iter().map(|&b| ground.format_subset(b)).collect();
        format!("{{{}}}", inner.join(","))
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.to_vec()).collect()
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("}")
    }
}

fn same_ground(p: &Partition, q: &Partition) -> Result<()> {
    if p.n != q.n {
        return Err(Error::GroundMismatch { left: p.n, right: q.n });
    }
    Ok(())
}

/// `p ⪯ q`: every block of `p` lies inside some block of `q`.
pub fn refines(p: &Partition, q: &Partition) -> Result<bool> {
    same_ground(p, q)?;
    Ok(p.blocks.iter().all(|&b| q.blocks.iter().any(|&c| b.is_subset_of(c))))
}

/// Common refinement: all non-empty blockwise intersections.
pub fn partition_meet(p: &Partition, q: &Partition) -> Result<Partition> {
    same_ground(p, q)?;
    let blocks = p
        .blocks
        .iter()
        .flat_map(|&b| q.blocks.iter().map(move |&c| b.intersection(c)))
        .filter(|b| !b.is_empty())
        .collect();
    Ok(Partition::from_blocks_unchecked(p.n, blocks))
}

/// Finest common coarsening: connected components of the block-overlap graph.
pub fn partition_join(p: &Partition, q: &Partition) -> Result<Partition> {
    same_ground(p, q)?;
    let mut blocks: Vec<Subset> = p.blocks.clone();
    for &c in &q.blocks {
        let (touching, rest): (Vec<Subset>, Vec<Subset>) = blocks.into_iter().partition(|b| b.intersects(c));
        let merged = touching.into_iter().fold(c, Subset::union);
        blocks = rest;
        blocks.push(merged);
    }
    Ok(Partition::from_blocks_unchecked(p.n, blocks))
}

/// `{C} ∪ {{i} : i ∉ C}`.
pub fn block_partition(c: Subset, n: usize) -> Result<Partition> {
    if c.is_empty() {
        return Err(Error::EmptyBlock);
    }
    crate::set::check_within(c, n)?;
    let mut blocks = vec![c];
    blocks.extend(Subset::full(n).difference(c).iter().map(Subset::singleton));
    Ok(Partition::from_blocks_unchecked(n, blocks))
}

/// Every partition of the ground set exactly once, in restricted-growth-string order.
pub fn enumerate_partitions(ground: &GroundSet) -> Result<impl Iterator<Item = Partition>> {
    partitions(ground.len())
}

pub fn partitions(n: usize) -> Result<impl Iterator<Item = Partition>> {
    if n > MAX_ENUMERATION {
        return Err(Error::GroundTooLarge { size: n, limit: MAX_ENUMERATION });
    }
    Ok(SetPartitions::new(Subset::full(n)).map(move |blocks| Partition { n, blocks }))
}

/// Partitions of an arbitrary subset, as block lists sorted by smallest element.
#[derive(Clone, Debug)]
pub struct SetPartitions {
    elements: Vec<usize>,
    // Restricted growth string: rgs[0] = 0, rgs[i] <= 1 + max(rgs[..i]).
    rgs: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(set: Subset) -> Self {
        let elements = set.to_vec();
        let rgs = vec![0; elements.len()];
        Self { elements, rgs, done: false }
    }

    fn advance(&mut self) {
        let k = self.rgs.len();
        // prefix_max[i] = max(rgs[..i])
        let mut prefix_max = vec![0; k];
        for i in 1..k {
            prefix_max[i] = prefix_max[i - 1].max(self.rgs[i - 1]);
        }
        for i in (1..k).rev() {
            if self.rgs[i] <= prefix_max[i] {
                self.rgs[i] += 1;
                self.rgs[i + 1..].iter_mut().for_each(|v| *v = 0);
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<Subset>;

    fn next(&mut self) -> Option<Vec<Subset>> {
        if self.done {
            return None;
        }
        let count = self.rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Subset::empty(); count];
        for (&label, &e) in self.rgs.iter().zip(&self.elements) {
            blocks[label] = blocks[label].with(e);
        }
        self.advance();
        if self.elements.is_empty() {
            self.done = true;
        }
        Some(blocks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, lists: &[&[usize]]) -> Partition {
        Partition::from_lists(n, lists).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(partitions(1).unwrap().count(), 1);
        assert_eq!(partitions(3).unwrap().count(), 5);
        assert_eq!(partitions(5).unwrap().count(), 52);
        assert!(matches!(partitions(13), Err(Error::GroundTooLarge { .. })));
    }

    #[test]
    fn refinement_examples() {
        let fine = p(3, &[&[0, 1], &[2]]);
        let coarse = p(3, &[&[0, 1, 2]]);
        assert!(refines(&fine, &coarse).unwrap());
        assert!(!refines(&coarse, &fine).unwrap());
        assert!(refines(&fine, &fine).unwrap());
        let other = p(3, &[&[0, 2], &[1]]);
        assert!(!refines(&other, &fine).unwrap());
        assert!(!refines(&fine, &other).unwrap());
        assert!(matches!(refines(&fine, &Partition::trivial(4)), Err(Error::GroundMismatch { .. })));
    }

    #[test]
    fn meet_and_join_examples() {
        let a = p(3, &[&[0, 1], &[2]]);
        let b = p(3, &[&[0, 2], &[1]]);
        assert_eq!(partition_meet(&a, &b).unwrap(), Partition::singletons(3));
        assert_eq!(partition_join(&a, &b).unwrap(), Partition::trivial(3));
        assert_eq!(partition_meet(&a, &a).unwrap(), a);
        assert_eq!(partition_join(&a, &a).unwrap(), a);
    }

    #[test]
    fn block_partition_examples() {
        let c = Subset::from_indices([0, 1]);
        assert_eq!(block_partition(c, 3).unwrap(), p(3, &[&[0, 1], &[2]]));
        assert_eq!(block_partition(Subset::full(3), 3).unwrap(), Partition::trivial(3));
        assert_eq!(block_partition(Subset::singleton(0), 3).unwrap(), Partition::singletons(3));
        assert!(matches!(block_partition(Subset::empty(), 3), Err(Error::EmptyBlock)));
    }

    #[test]
    fn construction_validates() {
        assert!(matches!(Partition::from_lists(3, &[&[0, 1][..], &[1, 2]]), Err(Error::NotAPartition(_))));
        assert!(matches!(Partition::from_lists(3, &[&[0, 1][..]]), Err(Error::NotAPartition(_))));
        assert!(matches!(Partition::from_lists(3, &[&[0, 1, 2][..], &[]]), Err(Error::EmptyBlock)));
        let q = Partition::from_lists(3, &[&[2][..], &[1, 0]]).unwrap();
        assert_eq!(q.to_string(), "{{0,1},{2}}");
    }

    #[test]
    fn partitions_of_subset() {
        let s = Subset::from_indices([1, 4, 6]);
        let all: Vec<Vec<Subset>> = SetPartitions::new(s).collect();
        assert_eq!(all.len(), 5);
        for blocks in &all {
            assert_eq!(blocks.iter().fold(Subset::empty(), |a, &b| a.union(b)), s);
        }
        assert_eq!(SetPartitions::new(Subset::empty()).count(), 1);
    }
}
