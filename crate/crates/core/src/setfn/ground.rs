//! Ground sets and subsets.
//!
//! A [`GroundSet`] is an ordered list of distinct string labels; the label
//! order is the declaration order and fixes every tie-break downstream
//! (sorting, lexicographic scans). A [`Subset`] is a bitset over the element
//! indices of one ground set.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug)]
struct GroundInner {
    labels: Vec<String>,
}

/// An ordered ground set of distinct element labels.
///
/// Cloning is cheap (shared storage). Two ground sets compare equal when
/// their label sequences are identical.
#[derive(Debug, Clone)]
pub struct GroundSet(Arc<GroundInner>);

impl GroundSet {
    /// Builds a ground set from labels in declaration order.
    ///
    /// Fails on an empty list or duplicate labels.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::input("ground set must contain at least one element"));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(Error::input(format!("duplicate ground element label {l:?}")));
            }
        }
        Ok(GroundSet(Arc::new(GroundInner { labels })))
    }

    /// Convenience constructor with labels `e1, e2, ..., en`.
    pub fn with_size(n: usize) -> Result<Self> {
        GroundSet::new((1..=n).map(|i| format!("e{i}")))
    }

    pub fn n(&self) -> usize {
        self.0.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.0.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.labels.iter().position(|l| l == label)
    }

    /// Builds a subset from element labels; unknown labels are input errors.
    pub fn subset_from_labels<'a, I>(&self, labels: I) -> Result<Subset>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut s = Subset::empty(self.n());
        for label in labels {
            match self.index_of(label) {
                Some(i) => s.insert(i),
                None => {
                    return Err(Error::input(format!(
                        "element {label:?} is not in the ground set"
                    )))
                }
            }
        }
        Ok(s)
    }

    /// Labels of the members of `s`, in ground order.
    pub fn labels_of(&self, s: &Subset) -> Vec<String> {
        s.iter().map(|i| self.0.labels[i].clone()).collect()
    }
}

impl PartialEq for GroundSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.labels == other.0.labels
    }
}

impl Eq for GroundSet {}

const BLOCK_BITS: usize = 64;

/// A subset of a ground set, with bitset semantics.
///
/// Subsets carry only the ground-set size, not the labels; all operations
/// require both operands to range over ground sets of the same size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    n: usize,
    blocks: Vec<u64>,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Subset {
            n,
            blocks: vec![0; n.div_ceil(BLOCK_BITS)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Subset::empty(n);
        for b in 0..s.blocks.len() {
            s.blocks[b] = !0u64;
        }
        s.trim();
        s
    }

    /// Subset from element indices. Panics if an index is out of range.
    pub fn from_indices(n: usize, indices: &[usize]) -> Self {
        let mut s = Subset::empty(n);
        for &i in indices {
            s.insert(i);
        }
        s
    }

    /// Subset of a ground set with `n <= 64` from a bitmask.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 64, "mask constructor requires n <= 64");
        if n < 64 {
            assert!(mask < (1u64 << n), "mask has bits outside the ground set");
        }
        let mut s = Subset::empty(n);
        if !s.blocks.is_empty() {
            s.blocks[0] = mask;
        }
        s
    }

    /// The bitmask of a subset over a ground set with `n <= 64`.
    pub fn to_mask(&self) -> u64 {
        assert!(self.n <= 64, "mask accessor requires n <= 64");
        self.blocks.first().copied().unwrap_or(0)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize) -> bool {
        assert!(i < self.n);
        self.blocks[i / BLOCK_BITS] >> (i % BLOCK_BITS) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.n);
        self.blocks[i / BLOCK_BITS] |= 1u64 << (i % BLOCK_BITS);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.n);
        self.blocks[i / BLOCK_BITS] &= !(1u64 << (i % BLOCK_BITS));
    }

    pub fn cardinality(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn union(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Subset {
        let mut s = self.zip_with(self, |a, _| !a);
        s.trim();
        s
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        assert_eq!(self.n, other.n, "subsets range over different ground sets");
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &Subset) -> bool {
        assert_eq!(self.n, other.n, "subsets range over different ground sets");
        self.blocks.iter().zip(&other.blocks).all(|(&a, &b)| a & b == 0)
    }

    /// Iterates member indices in ascending (ground) order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let base = bi * BLOCK_BITS;
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let tz = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(base + tz)
                }
            })
        })
    }

    pub fn with(&self, i: usize) -> Subset {
        let mut s = self.clone();
        s.insert(i);
        s
    }

    pub fn without(&self, i: usize) -> Subset {
        let mut s = self.clone();
        s.remove(i);
        s
    }

    /// Compares two subsets as "smaller cardinality first, then earlier
    /// elements first" — the tie-break order used by the brute-force
    /// optimizer.
    pub fn cmp_card_lex(&self, other: &Subset) -> Ordering {
        self.cardinality()
            .cmp(&other.cardinality())
            .then_with(|| self.iter().cmp(other.iter()))
    }

    fn zip_with(&self, other: &Subset, f: impl Fn(u64, u64) -> u64) -> Subset {
        assert_eq!(self.n, other.n, "subsets range over different ground sets");
        Subset {
            n: self.n,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn trim(&mut self) {
        let spare = self.blocks.len() * BLOCK_BITS - self.n;
        if spare > 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= !0u64 >> spare;
            }
        }
    }
}

// Numeric order on the subset encoding Σ_{i ∈ S} 2^i; used as the
// deterministic scan order for uncrossing and candidate merging.
impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.blocks.iter().rev().cmp(other.blocks.iter().rev()))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}
