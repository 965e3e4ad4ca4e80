//! Matroid isomorphism by pruned backtracking.
//!
//! Candidate images are restricted to elements with the same invariant:
//! the number of bases through the element together with the multiset of
//! circuit sizes through it. Partial maps are checked against the rank of
//! every subset of the mapped domain that contains the newest element, so
//! a complete map is an isomorphism by construction.

use crate::matroid::Matroid;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementInvariant {
    pub bases: u64,
    /// `circuits[k]` = number of `k`-element circuits through the element.
    pub circuits: Vec<u32>,
}

/// Isomorphism-invariant summary of a whole matroid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoKey {
    pub n: usize,
    pub rank: usize,
    pub basis_count: u64,
    pub elements: Vec<ElementInvariant>,
}

pub fn element_invariants(m: &Matroid) -> Vec<ElementInvariant> {
    let n = m.n();
    let r = m.rank() as u32;
    let mut bases = vec![0u64; n];
    let mut circuits = vec![vec![0u32; n + 1]; n];
    for x in 1u32..(1u32 << n) {
        let k = x.count_ones();
        let rx = m.r(x);
        if k == r && rx == r {
            let mut rest = x;
            while rest != 0 {
                bases[rest.trailing_zeros() as usize] += 1;
                rest &= rest - 1;
            }
        } else if rx + 1 == k {
            let mut rest = x;
            let mut minimal = true;
            while rest != 0 {
                let e = rest.trailing_zeros();
                if m.r(x & !(1 << e)) != k - 1 {
                    minimal = false;
                    break;
                }
                rest &= rest - 1;
            }
            if minimal {
                let mut rest = x;
                while rest != 0 {
                    circuits[rest.trailing_zeros() as usize][k as usize] += 1;
                    rest &= rest - 1;
                }
            }
        }
    }
    bases
        .into_iter()
        .zip(circuits)
        .map(|(bases, circuits)| ElementInvariant { bases, circuits })
        .collect()
}

pub fn iso_key(m: &Matroid) -> IsoKey {
    iso_key_from(m, &element_invariants(m))
}

pub fn iso_key_from(m: &Matroid, inv: &[ElementInvariant]) -> IsoKey {
    let mut elements = inv.to_vec();
    elements.sort();
    // every basis is counted once per member
    let basis_count = if m.rank() == 0 { 1 } else { elements.iter().map(|e| e.bases).sum::<u64>() / m.rank() as u64 };
    IsoKey { n: m.n(), rank: m.rank(), basis_count, elements }
}

/// Returns `perm` with `perm[e]` the image in `m2` of element `e` of `m1`.
pub fn is_isomorphic(m1: &Matroid, m2: &Matroid) -> Option<Vec<usize>> {
    if m1.n() != m2.n() || m1.rank() != m2.rank() {
        return None;
    }
    let inv1 = element_invariants(m1);
    let inv2 = element_invariants(m2);
    find_isomorphism(m1, &inv1, m2, &inv2)
}

/// Isomorphism search with precomputed element invariants.
pub fn find_isomorphism(
    m1: &Matroid,
    inv1: &[ElementInvariant],
    m2: &Matroid,
    inv2: &[ElementInvariant],
) -> Option<Vec<usize>> {
    let n = m1.n();
    if n != m2.n() || m1.rank() != m2.rank() {
        return None;
    }
    let mut s1 = inv1.to_vec();
    let mut s2 = inv2.to_vec();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return None;
    }
    // Most constrained elements first.
    let class_size = |e: usize| inv1.iter().filter(|i| **i == inv1[e]).count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&e| (class_size(e), e));
    let candidates: Vec<Vec<usize>> = order
        .iter()
        .map(|&e| (0..n).filter(|&f| inv2[f] == inv1[e]).collect())
        .collect();

    let mut search = Search {
        m1,
        m2,
        order: &order,
        candidates: &candidates,
        perm: vec![usize::MAX; n],
        used: 0,
        src: vec![0],
        dst: vec![0],
    };
    if search.extend(0) {
        Some(search.perm)
    } else {
        None
    }
}

struct Search<'a> {
    m1: &'a Matroid,
    m2: &'a Matroid,
    order: &'a [usize],
    candidates: &'a [Vec<usize>],
    perm: Vec<usize>,
    used: u32,
    // src[s] / dst[s]: the s-th subset of the mapped domain and its image
    src: Vec<u32>,
    dst: Vec<u32>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let e = self.order[depth];
        let half = self.src.len();
        for &f in &self.candidates[depth] {
            if self.used >> f & 1 == 1 {
                continue;
            }
            let consistent = (0..half).all(|s| {
                self.m1.r(self.src[s] | 1 << e) == self.m2.r(self.dst[s] | 1 << f)
            });
            if !consistent {
                continue;
            }
            self.perm[e] = f;
            self.used |= 1 << f;
            for s in 0..half {
                let (a, b) = (self.src[s] | 1 << e, self.dst[s] | 1 << f);
                self.src.push(a);
                self.dst.push(b);
            }
            if self.extend(depth + 1) {
                return true;
            }
            self.src.truncate(half);
            self.dst.truncate(half);
            self.used &= !(1 << f);
            self.perm[e] = usize::MAX;
        }
        false
    }
}

/// Checks that `perm` maps the rank function of `m1` onto that of `m2`.
pub fn verify_isomorphism(m1: &Matroid, m2: &Matroid, perm: &[usize]) -> bool {
    if m1.n() != m2.n() || perm.len() != m1.n() {
        return false;
    }
    let mut seen = 0u32;
    for &p in perm {
        if p >= m2.n() || seen >> p & 1 == 1 {
            return false;
        }
        seen |= 1 << p;
    }
    m1.permute(perm).same_structure(m2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{graphic, uniform, Graph};

    #[test]
    fn identity_isomorphism() {
        let m = uniform(2, 5).unwrap();
        let p = is_isomorphic(&m, &m).unwrap();
        assert!(verify_isomorphism(&m, &m, &p));
    }

    #[test]
    fn different_ranks_are_not_isomorphic() {
        assert!(is_isomorphic(&uniform(2, 4).unwrap(), &uniform(3, 4).unwrap()).is_none());
    }

    #[test]
    fn relabelled_graph_is_isomorphic() {
        let k4 = graphic(&Graph::complete(4)).unwrap();
        let p = vec![3, 5, 0, 1, 4, 2];
        let shuffled = k4.permute(&p);
        let found = is_isomorphic(&k4, &shuffled).unwrap();
        assert!(verify_isomorphism(&k4, &shuffled, &found));
    }

    #[test]
    fn same_invariants_different_structure() {
        // K_{3,3} and the triangular prism: both rank 5 on 9 elements.
        let k33 = graphic(&Graph::from_edges(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)])).unwrap();
        let prism = graphic(&Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])).unwrap();
        assert!(is_isomorphic(&k33, &prism).is_none());
        assert!(is_isomorphic(&k33.dual(), &k33.dual()).is_some());
    }

    #[test]
    fn iso_key_counts_bases() {
        let m = uniform(2, 4).unwrap();
        assert_eq!(iso_key(&m).basis_count, 6);
    }
}
