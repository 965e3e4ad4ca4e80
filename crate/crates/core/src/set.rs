//! Bitmask subsets of a small labelled ground set.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest ground set the rank-table representation accepts.
pub const MAX_ELEMENTS: usize = 24;

/// A subset of `{0, .., n-1}` stored as a bitmask.
///
/// The ground-set size travels with the set so that complements stay
/// inside the ground set. Binary operations on sets of different ground
/// sets are a logic error and panic in debug builds.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ElementSet {
    bits: u32,
    n: u8,
}

#[inline]
fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl ElementSet {
    pub fn empty(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        ElementSet { bits: 0, n: n as u8 }
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        ElementSet { bits: full_mask(n), n: n as u8 }
    }

    pub fn singleton(n: usize, e: usize) -> Self {
        assert!(e < n, "element {e} outside ground set of size {n}");
        ElementSet { bits: 1 << e, n: n as u8 }
    }

    /// Builds a set from raw bits, masking off anything outside the ground set.
    pub fn from_bits(n: usize, bits: u32) -> Self {
        ElementSet { bits: bits & full_mask(n), n: n as u8 }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        let mut s = Self::empty(n);
        for e in it {
            s.insert(e);
        }
        s
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn ground_size(self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(self, e: usize) -> bool {
        e < self.n as usize && self.bits >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        assert!(e < self.n as usize, "element {e} outside ground set of size {}", self.n);
        self.bits |= 1 << e;
    }

    pub fn remove(&mut self, e: usize) {
        if e < self.n as usize {
            self.bits &= !(1 << e);
        }
    }

    pub fn with(mut self, e: usize) -> Self {
        self.insert(e);
        self
    }

    pub fn without(mut self, e: usize) -> Self {
        self.remove(e);
        self
    }

    pub fn complement(self) -> Self {
        ElementSet { bits: !self.bits & full_mask(self.n as usize), n: self.n }
    }

    pub fn is_subset(self, other: ElementSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: ElementSet) -> bool {
        self.bits & other.bits == 0
    }

    /// Lowest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Elements {
        Elements { bits: self.bits }
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> Subsets {
        Subsets { mask: self.bits, next: Some(0), n: self.n }
    }

    /// All subsets of `self` with exactly `k` elements, in increasing bit order.
    pub fn subsets_of_size(self, k: usize) -> Vec<ElementSet> {
        let elems = self.to_vec();
        let mut out = Vec::new();
        if k > elems.len() {
            return out;
        }
        for local in combinations(elems.len(), k) {
            let mut bits = 0u32;
            let mut l = local;
            while l != 0 {
                let i = l.trailing_zeros() as usize;
                bits |= 1 << elems[i];
                l &= l - 1;
            }
            out.push(ElementSet { bits, n: self.n });
        }
        out
    }

    /// Canonical order key: size first, then bit value.
    pub fn canonical_key(self) -> (u32, u32) {
        (self.bits.count_ones(), self.bits)
    }

    /// Renders the set with the given element labels, e.g. `{a, b, c}`.
    pub fn display_with(self, labels: &[String]) -> String {
        let names: Vec<&str> = self.iter().map(|e| labels[e].as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// Sorts a family of sets into the canonical `(size, bits)` order and removes duplicates.
pub fn sort_canonical(family: &mut Vec<ElementSet>) {
    family.sort_by_key(|s| s.canonical_key());
    family.dedup();
}

/// Bitmasks over `{0..n}` with exactly `k` bits set, ascending (Gosper's hack).
pub fn combinations(n: usize, k: usize) -> Combinations {
    let start = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(((1u64 << k) - 1) as u32)
    };
    Combinations { next: start, limit: 1u64 << n, k }
}

pub struct Combinations {
    next: Option<u32>,
    limit: u64,
    k: usize,
}

impl Iterator for Combinations {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        let cur = self.next?;
        if (cur as u64) >= self.limit {
            self.next = None;
            return None;
        }
        if self.k == 0 {
            self.next = None;
            return Some(0);
        }
        let c = cur as u64;
        let low = c & c.wrapping_neg();
        let ripple = c + low;
        let nxt = (((ripple ^ c) >> 2) / low) | ripple;
        self.next = if nxt >= self.limit { None } else { Some(nxt as u32) };
        Some(cur)
    }
}

pub struct Elements {
    bits: u32,
}

impl Iterator for Elements {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let e = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.bits.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

/// Carry-rippler enumeration of the subsets of a mask.
pub struct Subsets {
    mask: u32,
    next: Option<u32>,
    n: u8,
}

impl Iterator for Subsets {
    type Item = ElementSet;

    fn next(&mut self) -> Option<ElementSet> {
        let cur = self.next?;
        let nxt = cur.wrapping_sub(self.mask) & self.mask;
        self.next = if nxt == 0 { None } else { Some(nxt) };
        Some(ElementSet { bits: cur, n: self.n })
    }
}

impl IntoIterator for ElementSet {
    type Item = usize;
    type IntoIter = Elements;

    fn into_iter(self) -> Elements {
        self.iter()
    }
}

macro_rules! set_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for ElementSet {
            type Output = ElementSet;

            #[inline]
            fn $method(self, rhs: ElementSet) -> ElementSet {
                debug_assert_eq!(self.n, rhs.n, "sets over different ground sets");
                ElementSet { bits: self.bits $op rhs.bits, n: self.n }
            }
        }
    };
}

set_binop!(BitOr, bitor, |);
set_binop!(BitAnd, bitand, &);
set_binop!(BitXor, bitxor, ^);

impl Sub for ElementSet {
    type Output = ElementSet;

    #[inline]
    fn sub(self, rhs: ElementSet) -> ElementSet {
        debug_assert_eq!(self.n, rhs.n, "sets over different ground sets");
        ElementSet { bits: self.bits & !rhs.bits, n: self.n }
    }
}

impl Not for ElementSet {
    type Output = ElementSet;

    fn not(self) -> ElementSet {
        self.complement()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.canonical_key()).cmp(&(other.n, other.canonical_key()))
    }
}

// Sets serialize as sorted index lists; the ground-set size comes from context.
impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ElementSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&e| e >= MAX_ELEMENTS) {
            return Err(serde::de::Error::custom(format!("element index {bad} too large")));
        }
        let n = v.iter().map(|&e| e + 1).max().unwrap_or(0);
        Ok(ElementSet::from_indices(n.max(1), v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(6, 3).count(), 20);
        assert_eq!(combinations(4, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(combinations(3, 4).count(), 0);
        assert_eq!(combinations(5, 5).collect::<Vec<_>>(), vec![0b11111]);
        assert!(combinations(10, 4).all(|c| c.count_ones() == 4));
    }

    #[test]
    fn subsets_enumerates_powerset() {
        let s = ElementSet::from_indices(8, [1, 4, 6]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset(s)));
        assert_eq!(ElementSet::empty(5).subsets().count(), 1);
    }

    #[test]
    fn complement_stays_in_ground_set() {
        let s = ElementSet::from_indices(5, [0, 2]);
        assert_eq!(s.complement().to_vec(), vec![1, 3, 4]);
        assert_eq!(ElementSet::full(5).complement(), ElementSet::empty(5));
    }

    #[test]
    fn canonical_sort() {
        let mut fam = vec![
            ElementSet::from_indices(4, [0, 1, 2]),
            ElementSet::from_indices(4, [3]),
            ElementSet::from_indices(4, [0, 3]),
            ElementSet::from_indices(4, [3]),
        ];
        sort_canonical(&mut fam);
        let v: Vec<_> = fam.iter().map(|s| s.to_vec()).collect();
        assert_eq!(v, vec![vec![3], vec![0, 3], vec![0, 1, 2]]);
    }

    proptest! {
        #[test]
        fn set_algebra_laws(n in 1usize..=MAX_ELEMENTS, a in any::<u32>(), b in any::<u32>()) {
            let x = ElementSet::from_bits(n, a);
            let y = ElementSet::from_bits(n, b);
            let full = ElementSet::full(n);
            prop_assert!(x.bits() < (1u64 << n) as u32 || n == 32);
            prop_assert_eq!(!(x | y), !x & !y);
            prop_assert_eq!(x - y, x & !y);
            prop_assert_eq!(x | !x, full);
            prop_assert_eq!((x & y).len() + (x | y).len(), x.len() + y.len());
            prop_assert!((x & y).is_subset(x));
            prop_assert_eq!(x.iter().count(), x.len());
        }
    }
}
