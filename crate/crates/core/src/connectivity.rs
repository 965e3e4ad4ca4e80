//! Connectivity function, separations, vertical partitions, minimal
//! partitions, 2-sum decomposition and Bixby's dichotomy.

use std::collections::HashMap;

use serde::Serialize;

use crate::constructions::two_sum;
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::set::ElementSet;

/// `λ(X) = r(X) + r(E - X) - r(M)`.
pub fn lambda(m: &Matroid, x: ElementSet) -> usize {
    lambda_bits(m, x.bits()) as usize
}

#[inline]
pub fn lambda_bits(m: &Matroid, x: u32) -> u32 {
    let full = m.ground().bits();
    m.r(x) + m.r(full & !x) - m.rank() as u32
}

/// `⊓(A, B) = r(A) + r(B) - r(A ∪ B)`.
pub fn local_connectivity(m: &Matroid, a: ElementSet, b: ElementSet) -> usize {
    (m.r(a.bits()) + m.r(b.bits()) - m.r((a | b).bits())) as usize
}

/// `X` is `k`-separating when `λ(X) < k`.
pub fn is_k_separating(m: &Matroid, x: ElementSet, k: usize) -> bool {
    lambda(m, x) < k
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub x: ElementSet,
    pub k: usize,
    pub exact: bool,
}

impl Separation {
    /// The separation `(X, E - X)` of the smallest order it qualifies for, if any.
    pub fn classify(m: &Matroid, x: ElementSet) -> Option<Separation> {
        let l = lambda(m, x);
        let k = l + 1;
        let small = x.len().min(m.n() - x.len());
        (small >= k).then_some(Separation { x, k, exact: true })
    }

    pub fn verify(&self, m: &Matroid) -> bool {
        let l = lambda(m, self.x);
        l < self.k && self.x.len() >= self.k && m.n() - self.x.len() >= self.k && self.exact == (l + 1 == self.k)
    }
}

/// Smallest-order separation of order below 3, if one exists. Sides are
/// scanned up to complement symmetry.
pub fn three_connectivity_violation(m: &Matroid) -> Option<Separation> {
    let n = m.n();
    if n == 1 {
        return None;
    }
    let full = m.ground().bits();
    let top = 1u32 << (n - 1);
    let rank = m.rank() as u32;
    let mut best: Option<Separation> = None;
    for x in 1..top {
        let size = x.count_ones() as usize;
        let other = n - size;
        let small = size.min(other);
        let l = (m.r(x) + m.r(full & !x) - rank) as usize;
        if l >= 2 || small < l + 1 || (l == 1 && small < 2) {
            continue;
        }
        let sep = Separation { x: ElementSet::from_bits(n, x), k: l + 1, exact: true };
        if l == 0 {
            return Some(sep);
        }
        if best.is_none() {
            best = Some(sep);
        }
    }
    best
}

pub fn is_3_connected(m: &Matroid) -> bool {
    three_connectivity_violation(m).is_none()
}

/// Every `X` (both sides listed) with `(X, E - X)` a 1- or 2-separation.
pub fn small_separations(m: &Matroid) -> Vec<Separation> {
    let n = m.n();
    let full = m.ground().bits();
    let rank = m.rank() as u32;
    let mut out = Vec::new();
    for x in 1..full {
        let size = x.count_ones() as usize;
        let small = size.min(n - size);
        let l = (m.r(x) + m.r(full & !x) - rank) as usize;
        if l <= 1 && small > l {
            out.push(Separation { x: ElementSet::from_bits(n, x), k: l + 1, exact: true });
        }
    }
    out
}

/// `si(M / x)` is 3-connected.
pub fn si_contract_is_3_connected(m: &Matroid, x: usize) -> Result<bool> {
    let (si, _) = m.contract_element(x)?.simplify()?;
    Ok(is_3_connected(&si))
}

/// `co(M \ x)` is 3-connected.
pub fn co_delete_is_3_connected(m: &Matroid, x: usize) -> Result<bool> {
    let (co, _) = m.delete_element(x)?.cosimplify()?;
    Ok(is_3_connected(&co))
}

/// An ordered triple `(X1, X2, x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VerticalPartition {
    pub x1: ElementSet,
    pub x2: ElementSet,
    pub x: usize,
    pub k: usize,
}

impl VerticalPartition {
    pub fn flipped(self) -> VerticalPartition {
        VerticalPartition { x1: self.x2, x2: self.x1, ..self }
    }

    /// Orientation with `X1` holding the lowest element other than `x`.
    pub fn canonical(self) -> VerticalPartition {
        if self.x1.first() < self.x2.first() {
            self
        } else {
            self.flipped()
        }
    }

    pub fn is_valid(&self, m: &Matroid) -> bool {
        is_vertical_partition(m, self.x1, self.x2, self.x, self.k)
    }

    pub fn display(&self, m: &Matroid) -> String {
        format!(
            "({}, {}, {})",
            self.x1.display_with(m.labels()),
            self.x2.display_with(m.labels()),
            m.label(self.x)
        )
    }
}

pub fn is_vertical_partition(m: &Matroid, x1: ElementSet, x2: ElementSet, x: usize, k: usize) -> bool {
    let n = m.n();
    if k == 0 || x >= n || x1.contains(x) || x2.contains(x) || !x1.is_disjoint(x2) {
        return false;
    }
    if (x1 | x2).with(x) != m.ground() {
        return false;
    }
    let (a, b) = (x1.bits(), x2.bits());
    let k = k as u32;
    lambda_bits(m, a) + 1 == k
        && lambda_bits(m, b) + 1 == k
        && m.r(a) >= k
        && m.r(b) >= k
        && m.r(a | 1 << x) == m.r(a)
        && m.r(b | 1 << x) == m.r(b)
}

/// All vertical `k`-partitions with apex `x`, canonically oriented and sorted.
pub fn vertical_k_partitions(m: &Matroid, x: usize, k: usize) -> Vec<VerticalPartition> {
    let n = m.n();
    let rest = m.ground().without(x);
    let Some(anchor) = rest.first() else {
        return Vec::new();
    };
    let free = rest.without(anchor);
    let mut out = Vec::new();
    for s in free.subsets() {
        let x1 = s.with(anchor);
        let x2 = rest - x1;
        if x2.is_empty() {
            continue;
        }
        if is_vertical_partition(m, x1, x2, x, k) {
            out.push(VerticalPartition { x1, x2, x, k });
        }
    }
    debug_assert!(out.iter().all(|p| p.x1.ground_size() == n));
    out.sort();
    out
}

/// All vertical 3-partitions with apex `x` of a 3-connected matroid.
pub fn vertical_3_partitions(m: &Matroid, x: usize) -> Result<Vec<VerticalPartition>> {
    require_3_connected(m)?;
    if x >= m.n() {
        return Err(Error::BadParams(format!("element {x} out of range")));
    }
    Ok(vertical_k_partitions(m, x, 3))
}

pub(crate) fn require_3_connected(m: &Matroid) -> Result<()> {
    match three_connectivity_violation(m) {
        None => Ok(()),
        Some(sep) => Err(Error::NotThreeConnected(format!(
            "{}-separation {}",
            sep.k,
            sep.x.display_with(m.labels())
        ))),
    }
}

/// Vertical 3-partitions grouped by apex, both orientations, computed on demand.
pub struct VerticalIndex<'a> {
    m: &'a Matroid,
    by_apex: HashMap<usize, Vec<VerticalPartition>>,
}

impl<'a> VerticalIndex<'a> {
    pub fn new(m: &'a Matroid) -> VerticalIndex<'a> {
        VerticalIndex { m, by_apex: HashMap::new() }
    }

    /// Ordered vertical 3-partitions at `y`, both orientations.
    pub fn ordered(&mut self, y: usize) -> &[VerticalPartition] {
        let m = self.m;
        self.by_apex.entry(y).or_insert_with(|| {
            let mut all = Vec::new();
            for p in vertical_k_partitions(m, y, 3) {
                all.push(p);
                all.push(p.flipped());
            }
            all.sort();
            all
        })
    }
}

/// Checks conditions (i)-(iii) of a minimal partition with respect to `A`.
/// Partitions are compared as ordered triples.
pub fn is_minimal_partition(m: &Matroid, a: ElementSet, p: &VerticalPartition) -> bool {
    let mut index = VerticalIndex::new(m);
    minimal_with_index(&mut index, a, p)
}

pub(crate) fn minimal_with_index(index: &mut VerticalIndex, a: ElementSet, p: &VerticalPartition) -> bool {
    if p.k != 3 || !p.is_valid(index.m) || !a.contains(p.x) {
        return false;
    }
    for y in (a & p.x1.with(p.x)).iter() {
        for q in index.ordered(y) {
            if p.x2.is_disjoint(q.x1) && *q != *p {
                return false;
            }
            if p.x2.is_disjoint(q.x2) && q.flipped() != *p {
                return false;
            }
        }
    }
    true
}

/// Builds a minimal partition with respect to `A` from a seed `(Z1, Z2, z)`
/// with `z ∈ A`, following the two-stage choice: first an inclusion-minimal
/// `Z1'` among vertical 3-partitions at `z` inside `Z1`, then among the
/// partitions `(S1, S2, s)` with `s ∈ A ∩ Z1'`, `S1 ⊆ Z1'`, one with
/// `S1 ∪ s` inclusion-minimal. Ties go to the smaller set in canonical order.
pub fn find_minimal_partition(m: &Matroid, a: ElementSet, seed: &VerticalPartition) -> Result<VerticalPartition> {
    require_3_connected(m)?;
    if seed.k != 3 || !seed.is_valid(m) {
        return Err(Error::SeedInvalid(format!("{} is not a vertical 3-partition", seed.display(m))));
    }
    if !a.contains(seed.x) {
        return Err(Error::SeedInvalid(format!("apex {} is not in A", m.label(seed.x))));
    }
    let mut index = VerticalIndex::new(m);
    let z = seed.x;
    let z_prime = *index
        .ordered(z)
        .iter()
        .filter(|s| s.x1.is_subset(seed.x1))
        .min_by_key(|s| s.x1.canonical_key())
        .expect("the seed itself qualifies");

    let mut s1: Vec<VerticalPartition> = Vec::new();
    for s in (a & z_prime.x1).iter() {
        s1.extend(index.ordered(s).iter().filter(|q| q.x1.is_subset(z_prime.x1)));
    }
    let result = s1
        .into_iter()
        .min_by_key(|q| (q.x1.with(q.x).canonical_key(), q.x))
        .unwrap_or(z_prime);
    if !minimal_with_index(&mut index, a, &result) {
        return Err(Error::Invariant(format!("constructed partition {} is not minimal", result.display(m))));
    }
    Ok(result)
}

/// The two parts of a 2-sum decomposition along a fresh basepoint `p`.
#[derive(Clone, Debug)]
pub struct TwoSumParts {
    pub m1: Matroid,
    pub m2: Matroid,
    /// Index of `p` in `m1` (last) and in `m2` (last).
    pub p1: usize,
    pub p2: usize,
    /// Original indices of the non-basepoint elements of `m1` and `m2`.
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
}

/// Splits `M` along an exact 2-separation `(X1, E - X1)` into `M1 ⊕2 M2`.
///
/// `r1(Y) = r(Y)` and `r1(Y ∪ p) = r(Y) + 1 - ⊓(Y, X2)` for `Y ⊆ X1`, and
/// symmetrically for `M2`. The result is checked by recomposition.
pub fn decompose_2_separation(m: &Matroid, x1: ElementSet) -> Result<TwoSumParts> {
    let x2 = m.ground() - x1;
    if lambda(m, x1) != 1 || x1.len() < 2 || x2.len() < 2 {
        return Err(Error::NotA2Separation(format!(
            "λ({}) = {}, sides of size {} and {}",
            x1.display_with(m.labels()),
            lambda(m, x1),
            x1.len(),
            x2.len()
        )));
    }
    let mut p_label = "p".to_string();
    while m.labels().contains(&p_label) {
        p_label.push('\'');
    }
    let part = |side: ElementSet, other: ElementSet| -> Result<(Matroid, Vec<usize>)> {
        let elems = side.to_vec();
        let k = elems.len();
        let mut labels: Vec<String> = elems.iter().map(|&e| m.label(e).to_string()).collect();
        labels.push(p_label.clone());
        let ob = other.bits();
        let ro = m.r(ob);
        let part = Matroid::from_rank_fn(
            labels,
            |y| {
                let mut orig = 0u32;
                for (i, &e) in elems.iter().enumerate() {
                    if y >> i & 1 == 1 {
                        orig |= 1 << e;
                    }
                }
                let base = m.r(orig);
                if y >> k & 1 == 1 {
                    (m.r(orig | ob) - ro + 1) as usize
                } else {
                    base as usize
                }
            },
            false,
        )?;
        Ok((part, elems))
    };
    let (m1, e1) = part(x1, x2)?;
    let (m2, e2) = part(x2, x1)?;
    let (p1, p2) = (m1.n() - 1, m2.n() - 1);
    let sum = two_sum(&m1, &m2, p1, p2)?;
    let order: Vec<usize> = e1.iter().chain(e2.iter()).copied().collect();
    if sum.permute(&order) != *m {
        return Err(Error::Invariant("2-sum recomposition differs from the input".into()));
    }
    Ok(TwoSumParts { m1, m2, p1, p2, x1: e1, x2: e2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Bixby {
    SiOk,
    CoOk,
    Both,
}

/// Evaluates both sides of Bixby's dichotomy at `x`.
pub fn bixby_check(m: &Matroid, x: usize) -> Result<Bixby> {
    require_3_connected(m)?;
    if m.n() < 4 {
        return Err(Error::HypothesisViolated(format!("ground set of size {} < 4", m.n())));
    }
    let si = si_contract_is_3_connected(m, x)?;
    let co = co_delete_is_3_connected(m, x)?;
    match (si, co) {
        (true, true) => Ok(Bixby::Both),
        (true, false) => Ok(Bixby::SiOk),
        (false, true) => Ok(Bixby::CoOk),
        (false, false) => Err(Error::Invariant(format!(
            "neither si(M/{0}) nor co(M\\{0}) is 3-connected",
            m.label(x)
        ))),
    }
}
