//! Explicit small matroids backed by a full rank table.
//!
//! Every subset of the ground set has its rank stored in a `u8` table of
//! length `2^n`. All other notions (bases, circuits, closure, duality,
//! minors) are derived from that table, so the table is the single source
//! of truth. The table is shared behind an `Arc`; matroids are immutable
//! once built.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::{combinations, sort_canonical, ElementSet, MAX_ELEMENTS};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matroid {
    labels: Vec<String>,
    rank: Arc<[u8]>,
}

/// Record of what [`Matroid::simplify`] / [`Matroid::cosimplify`] removed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reduction {
    /// Original indices of the surviving elements, in their new order.
    pub kept: Vec<usize>,
    /// Removed element and the original index of its kept representative.
    /// `None` for loops (resp. coloops), which have no representative.
    pub removed: Vec<(usize, Option<usize>)>,
}

/// On-disk matroid format: `{"n": .., "labels": [..], "bases": [[..], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidJson {
    pub n: usize,
    pub labels: Vec<String>,
    pub bases: Vec<Vec<usize>>,
}

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::EmptyGroundSet);
    }
    if labels.len() > MAX_ELEMENTS {
        return Err(Error::TooLarge { n: labels.len(), cap: MAX_ELEMENTS });
    }
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Maps each compact index `y` of a `survivors.len()`-element set to the
/// original bit pattern it stands for.
fn spread_table(survivors: &[usize]) -> Vec<u32> {
    let size = 1usize << survivors.len();
    let mut spread = vec![0u32; size];
    for y in 1..size {
        let low = y.trailing_zeros() as usize;
        spread[y] = spread[y & (y - 1)] | (1 << survivors[low]);
    }
    spread
}

impl Matroid {
    /// Trusted constructor from a complete rank table.
    pub(crate) fn from_table(labels: Vec<String>, rank: Vec<u8>) -> Matroid {
        debug_assert_eq!(rank.len(), 1usize << labels.len());
        Matroid { labels, rank: rank.into() }
    }

    /// Builds a matroid from a rank function evaluated on every subset.
    /// With `validate`, the rank axioms are checked exhaustively.
    pub fn from_rank_fn<F: FnMut(u32) -> usize>(
        labels: Vec<String>,
        mut f: F,
        validate: bool,
    ) -> Result<Matroid> {
        check_labels(&labels)?;
        let size = 1usize << labels.len();
        let mut table = Vec::with_capacity(size);
        for x in 0..size {
            let r = f(x as u32);
            if r > u8::MAX as usize {
                return Err(Error::Validation(format!("rank {r} out of range")));
            }
            table.push(r as u8);
        }
        let m = Matroid::from_table(labels, table);
        if validate {
            m.check_rank_axioms()?;
        }
        Ok(m)
    }

    /// Builds a matroid from its family of bases.
    ///
    /// With `validate`, duplicate bases, size mismatches and the basis
    /// exchange axiom are all checked; the error names the failing pair.
    pub fn from_bases(labels: Vec<String>, bases: &[ElementSet], validate: bool) -> Result<Matroid> {
        check_labels(&labels)?;
        let n = labels.len();
        if bases.is_empty() {
            return Err(Error::Validation("a matroid needs at least one basis".into()));
        }
        let r = bases[0].len();
        if validate {
            let full = ElementSet::full(n).bits();
            let mut seen = HashSet::new();
            for b in bases {
                if b.bits() & !full != 0 {
                    return Err(Error::Validation(format!("basis {b:?} out of range")));
                }
                if b.len() != r {
                    return Err(Error::Validation(format!(
                        "basis {b:?} has size {} but the first basis has size {r}",
                        b.len()
                    )));
                }
                if !seen.insert(b.bits()) {
                    return Err(Error::Validation(format!("duplicate basis {b:?}")));
                }
            }
            for b1 in bases {
                for b2 in bases {
                    let only1 = b1.bits() & !b2.bits();
                    let only2 = b2.bits() & !b1.bits();
                    for e in ElementSet::from_bits(n, only1) {
                        let base = b1.bits() & !(1 << e);
                        let ok = ElementSet::from_bits(n, only2)
                            .iter()
                            .any(|f| seen.contains(&(base | 1 << f)));
                        if !ok {
                            return Err(Error::Validation(format!(
                                "basis exchange fails for B1={} B2={} at element {}",
                                b1.display_with(&labels),
                                b2.display_with(&labels),
                                labels[e]
                            )));
                        }
                    }
                }
            }
        }
        let size = 1usize << n;
        let mut indep = vec![false; size];
        for b in bases {
            indep[b.bits() as usize] = true;
        }
        for x in (0..size).rev() {
            if indep[x] {
                continue;
            }
            let mut missing = !(x as u32) & ((size - 1) as u32);
            while missing != 0 {
                let e = missing.trailing_zeros();
                if indep[x | 1 << e] {
                    indep[x] = true;
                    break;
                }
                missing &= missing - 1;
            }
        }
        Ok(Matroid::from_table(labels, rank_from_independence(&indep)))
    }

    /// Builds a matroid from its circuits. With `validate`, the circuit
    /// elimination axiom is enforced indirectly by checking the rank axioms
    /// of the resulting rank function.
    pub fn from_circuits(labels: Vec<String>, circuits: &[ElementSet], validate: bool) -> Result<Matroid> {
        check_labels(&labels)?;
        let size = 1usize << labels.len();
        let mut dep = vec![false; size];
        for c in circuits {
            if c.is_empty() {
                return Err(Error::Validation("empty circuit".into()));
            }
            dep[c.bits() as usize] = true;
        }
        for x in 1..size {
            if dep[x] {
                continue;
            }
            let mut rest = x as u32;
            while rest != 0 {
                let e = rest.trailing_zeros();
                if dep[x & !(1 << e)] {
                    dep[x] = true;
                    break;
                }
                rest &= rest - 1;
            }
        }
        let indep: Vec<bool> = dep.iter().map(|d| !d).collect();
        let m = Matroid::from_table(labels, rank_from_independence(&indep));
        if validate {
            m.check_rank_axioms()?;
            // The circuits must be recovered exactly.
            let mut given: Vec<ElementSet> = circuits.to_vec();
            sort_canonical(&mut given);
            if given != m.circuits() {
                return Err(Error::Validation("circuit family does not satisfy the circuit axioms".into()));
            }
        }
        Ok(m)
    }

    /// Exhaustive check of normalisation, unit increase, and local submodularity.
    pub fn check_rank_axioms(&self) -> Result<()> {
        let n = self.n();
        let size = 1usize << n;
        if self.rank[0] != 0 {
            return Err(Error::Validation("rank of the empty set is not zero".into()));
        }
        for x in 0..size as u32 {
            let rx = self.r(x);
            for e in 0..n {
                if x >> e & 1 == 1 {
                    continue;
                }
                let rxe = self.r(x | 1 << e);
                if rxe < rx || rxe > rx + 1 {
                    return Err(Error::Validation(format!(
                        "rank not unit-increasing at {} + {}",
                        ElementSet::from_bits(n, x).display_with(&self.labels),
                        self.labels[e]
                    )));
                }
                for f in (e + 1)..n {
                    if x >> f & 1 == 1 {
                        continue;
                    }
                    if self.r(x | 1 << e) + self.r(x | 1 << f) < self.r(x | 1 << e | 1 << f) + rx {
                        return Err(Error::Validation(format!(
                            "rank not submodular at {} with {}, {}",
                            ElementSet::from_bits(n, x).display_with(&self.labels),
                            self.labels[e],
                            self.labels[f]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(json: &MatroidJson) -> Result<Matroid> {
        if json.labels.len() != json.n {
            return Err(Error::Validation(format!(
                "n = {} but {} labels given",
                json.n,
                json.labels.len()
            )));
        }
        if json.n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if json.n > MAX_ELEMENTS {
            return Err(Error::TooLarge { n: json.n, cap: MAX_ELEMENTS });
        }
        let mut bases = Vec::with_capacity(json.bases.len());
        for b in &json.bases {
            let mut s = ElementSet::empty(json.n);
            for &e in b {
                if e >= json.n {
                    return Err(Error::Validation(format!("index {e} out of range in basis {b:?}")));
                }
                if s.contains(e) {
                    return Err(Error::Validation(format!("repeated index {e} in basis {b:?}")));
                }
                s.insert(e);
            }
            bases.push(s);
        }
        Matroid::from_bases(json.labels.clone(), &bases, true)
    }

    pub fn parse_json(text: &str) -> Result<Matroid> {
        let json: MatroidJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Matroid::from_json(&json)
    }

    pub fn to_json(&self) -> MatroidJson {
        MatroidJson {
            n: self.n(),
            labels: self.labels.clone(),
            bases: self.bases().into_iter().map(|b| b.to_vec()).collect(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: usize) -> &str {
        &self.labels[e]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Looks up several labels at once.
    pub fn set_of(&self, labels: &[&str]) -> Result<ElementSet> {
        let mut s = self.empty();
        for l in labels {
            s.insert(self.index_of(l)?);
        }
        Ok(s)
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Matroid> {
        if labels.len() != self.n() {
            return Err(Error::BadParams("label count mismatch".into()));
        }
        check_labels(&labels)?;
        Ok(Matroid { labels, rank: self.rank.clone() })
    }

    pub fn ground(&self) -> ElementSet {
        ElementSet::full(self.n())
    }

    pub fn empty(&self) -> ElementSet {
        ElementSet::empty(self.n())
    }

    pub fn set(&self, elems: &[usize]) -> ElementSet {
        ElementSet::from_indices(self.n(), elems.iter().copied())
    }

    /// Raw rank lookup on a bitmask.
    #[inline]
    pub fn r(&self, bits: u32) -> u32 {
        self.rank[bits as usize] as u32
    }

    pub fn rank_table(&self) -> &[u8] {
        &self.rank
    }

    /// Rank of the whole matroid.
    pub fn rank(&self) -> usize {
        self.rank[self.rank.len() - 1] as usize
    }

    pub fn corank(&self) -> usize {
        self.n() - self.rank()
    }

    pub fn rank_of(&self, x: ElementSet) -> usize {
        self.rank[x.bits() as usize] as usize
    }

    /// `{e : r(X ∪ e) = r(X)}`.
    pub fn closure(&self, x: ElementSet) -> ElementSet {
        let rx = self.r(x.bits());
        let mut cl = x;
        for e in x.complement() {
            if self.r(x.bits() | 1 << e) == rx {
                cl.insert(e);
            }
        }
        cl
    }

    /// Closure in the dual matroid, computed without building the dual.
    pub fn coclosure(&self, x: ElementSet) -> ElementSet {
        // e ∈ cl*(X) iff r(E − X − e) < r(E − X)
        let comp = x.complement();
        let rc = self.r(comp.bits());
        let mut cl = x;
        for e in comp {
            if self.r(comp.bits() & !(1 << e)) < rc {
                cl.insert(e);
            }
        }
        cl
    }

    /// Rank in the dual: `r*(X) = |X| + r(E − X) − r(M)`.
    pub fn corank_of(&self, x: ElementSet) -> usize {
        x.len() + self.rank_of(x.complement()) - self.rank()
    }

    pub fn is_independent(&self, x: ElementSet) -> bool {
        self.rank_of(x) == x.len()
    }

    pub fn is_basis(&self, x: ElementSet) -> bool {
        x.len() == self.rank() && self.is_independent(x)
    }

    pub fn is_flat(&self, x: ElementSet) -> bool {
        self.closure(x) == x
    }

    pub fn is_circuit(&self, x: ElementSet) -> bool {
        let k = x.len() as u32;
        if k == 0 || self.r(x.bits()) != k - 1 {
            return false;
        }
        x.iter().all(|e| self.r(x.bits() & !(1 << e)) == k - 1)
    }

    pub fn is_cocircuit(&self, x: ElementSet) -> bool {
        if x.is_empty() {
            return false;
        }
        let h = x.complement();
        let r = self.rank() as u32;
        if self.r(h.bits()) + 1 != r {
            return false;
        }
        x.iter().all(|e| self.r(h.bits() | 1 << e) == r)
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.r(1 << e) == 0
    }

    pub fn is_coloop(&self, e: usize) -> bool {
        let full = self.ground().bits();
        self.r(full & !(1 << e)) < self.r(full)
    }

    pub fn loops(&self) -> ElementSet {
        ElementSet::from_indices(self.n(), (0..self.n()).filter(|&e| self.is_loop(e)))
    }

    pub fn coloops(&self) -> ElementSet {
        ElementSet::from_indices(self.n(), (0..self.n()).filter(|&e| self.is_coloop(e)))
    }

    /// All bases in canonical order.
    pub fn bases(&self) -> Vec<ElementSet> {
        let r = self.rank() as u32;
        combinations(self.n(), r as usize)
            .filter(|&b| self.r(b) == r)
            .map(|b| ElementSet::from_bits(self.n(), b))
            .collect()
    }

    pub fn basis_count(&self) -> usize {
        let r = self.rank() as u32;
        combinations(self.n(), r as usize).filter(|&b| self.r(b) == r).count()
    }

    /// All circuits in canonical order.
    pub fn circuits(&self) -> Vec<ElementSet> {
        let n = self.n();
        let mut out = Vec::new();
        for k in 1..=n.min(self.rank() + 1) {
            for c in combinations(n, k) {
                let s = ElementSet::from_bits(n, c);
                if self.is_circuit(s) {
                    out.push(s);
                }
            }
        }
        out
    }

    /// All cocircuits in canonical order; the circuits of the dual.
    pub fn cocircuits(&self) -> Vec<ElementSet> {
        self.dual().circuits()
    }

    /// Circuits of a fixed size.
    pub fn circuits_of_size(&self, k: usize) -> Vec<ElementSet> {
        combinations(self.n(), k)
            .map(|c| ElementSet::from_bits(self.n(), c))
            .filter(|&s| self.is_circuit(s))
            .collect()
    }

    pub fn cocircuits_of_size(&self, k: usize) -> Vec<ElementSet> {
        combinations(self.n(), k)
            .map(|c| ElementSet::from_bits(self.n(), c))
            .filter(|&s| self.is_cocircuit(s))
            .collect()
    }

    pub fn dual(&self) -> Matroid {
        let n = self.n();
        let size = 1usize << n;
        let full = (size - 1) as u32;
        let r = self.rank() as u32;
        let table = (0..size as u32)
            .map(|x| (x.count_ones() + self.r(full & !x) - r) as u8)
            .collect();
        Matroid::from_table(self.labels.clone(), table)
    }

    /// `M \ delete / contract`. The two sets must be disjoint.
    pub fn minor(&self, delete: ElementSet, contract: ElementSet) -> Result<Matroid> {
        if !delete.is_disjoint(contract) {
            return Err(Error::BadParams("delete and contract sets overlap".into()));
        }
        let survivors: Vec<usize> = (self.ground() - delete - contract).to_vec();
        if survivors.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        let spread = spread_table(&survivors);
        let c = contract.bits();
        let rc = self.r(c);
        let table = spread.iter().map(|&x| (self.r(x | c) - rc) as u8).collect();
        let labels = survivors.iter().map(|&e| self.labels[e].clone()).collect();
        Ok(Matroid::from_table(labels, table))
    }

    pub fn delete(&self, d: ElementSet) -> Result<Matroid> {
        self.minor(d, self.empty())
    }

    pub fn contract(&self, c: ElementSet) -> Result<Matroid> {
        self.minor(self.empty(), c)
    }

    pub fn delete_element(&self, e: usize) -> Result<Matroid> {
        self.delete(ElementSet::singleton(self.n(), e))
    }

    pub fn contract_element(&self, e: usize) -> Result<Matroid> {
        self.contract(ElementSet::singleton(self.n(), e))
    }

    /// `M | X`.
    pub fn restrict(&self, x: ElementSet) -> Result<Matroid> {
        self.delete(x.complement())
    }

    /// Parallel classes of non-loop elements, each sorted, ordered by lowest member.
    pub fn parallel_classes(&self) -> Vec<ElementSet> {
        let n = self.n();
        let mut assigned = self.loops();
        let mut classes = Vec::new();
        for e in 0..n {
            if assigned.contains(e) {
                continue;
            }
            let mut class = ElementSet::singleton(n, e);
            for f in (e + 1)..n {
                if !assigned.contains(f) && self.r(1 << e | 1 << f) == 1 {
                    class.insert(f);
                }
            }
            assigned = assigned | class;
            classes.push(class);
        }
        classes
    }

    /// `si(M)`: delete loops and all but the lowest-index element of each parallel class.
    pub fn simplify(&self) -> Result<(Matroid, Reduction)> {
        let mut removed: Vec<(usize, Option<usize>)> = self.loops().iter().map(|e| (e, None)).collect();
        let mut kept = Vec::new();
        for class in self.parallel_classes() {
            let rep = class.first().expect("nonempty class");
            kept.push(rep);
            removed.extend(class.without(rep).iter().map(|e| (e, Some(rep))));
        }
        removed.sort();
        let del = ElementSet::from_indices(self.n(), removed.iter().map(|&(e, _)| e));
        let m = self.delete(del)?;
        Ok((m, Reduction { kept, removed }))
    }

    /// `co(M) = si(M*)*`.
    pub fn cosimplify(&self) -> Result<(Matroid, Reduction)> {
        let (d, red) = self.dual().simplify()?;
        Ok((d.dual(), red))
    }

    pub fn is_simple(&self) -> bool {
        self.loops().is_empty() && self.parallel_classes().len() == self.n()
    }

    /// Same rank table, labels ignored.
    pub fn same_structure(&self, other: &Matroid) -> bool {
        self.rank == other.rank
    }

    /// Applies a permutation: element `i` of `self` becomes element `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Matroid {
        let n = self.n();
        assert_eq!(perm.len(), n);
        let mut labels = vec![String::new(); n];
        for (i, &p) in perm.iter().enumerate() {
            labels[p] = self.labels[i].clone();
        }
        let mut inv = vec![0usize; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let spread = spread_table(&inv);
        let table = spread.iter().map(|&x| self.rank[x as usize]).collect();
        Matroid::from_table(labels, table)
    }
}

/// Rank table from an independence table (indexed by bitmask).
fn rank_from_independence(indep: &[bool]) -> Vec<u8> {
    let size = indep.len();
    let mut rank = vec![0u8; size];
    for x in 1..size {
        if indep[x] {
            rank[x] = (x as u32).count_ones() as u8;
            continue;
        }
        let mut best = 0u8;
        let mut rest = x as u32;
        while rest != 0 {
            let e = rest.trailing_zeros();
            best = best.max(rank[x & !(1 << e)]);
            rest &= rest - 1;
        }
        rank[x] = best;
    }
    rank
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matroid(n={}, r={}, labels={:?})", self.n(), self.rank(), self.labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(r: usize, n: usize) -> Matroid {
        Matroid::from_rank_fn(default_labels(n), |x| (x.count_ones() as usize).min(r), false).unwrap()
    }

    #[test]
    fn uniform_rank_and_closure() {
        let m = uniform(2, 4);
        assert_eq!(m.rank_of(m.set(&[0, 1, 2])), 2);
        assert_eq!(m.rank_of(m.empty()), 0);
        assert_eq!(m.closure(m.set(&[0, 1])), m.ground());
        assert_eq!(m.closure(m.set(&[3])), m.set(&[3]));
        assert_eq!(m.bases().len(), 6);
    }

    #[test]
    fn circuits_and_cocircuits_of_u24() {
        let m = uniform(2, 4);
        let c = m.circuits();
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|s| s.len() == 3));
        assert_eq!(m.cocircuits(), c);
    }

    #[test]
    fn bases_roundtrip() {
        let m = uniform(3, 6);
        let again = Matroid::from_bases(m.labels().to_vec(), &m.bases(), true).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn circuits_roundtrip() {
        let m = uniform(2, 5);
        let again = Matroid::from_circuits(m.labels().to_vec(), &m.circuits(), true).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn exchange_failure_is_reported() {
        // {0,1} and {2,3} as the only bases violates exchange.
        let labels = default_labels(4);
        let bases = vec![ElementSet::from_indices(4, [0, 1]), ElementSet::from_indices(4, [2, 3])];
        let err = Matroid::from_bases(labels, &bases, true).unwrap_err();
        match err {
            Error::Validation(msg) => assert!(msg.contains("exchange"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn json_rejections() {
        let ok = r#"{"n":3,"labels":["a","b","c"],"bases":[[0,1],[0,2],[1,2]]}"#;
        assert_eq!(Matroid::parse_json(ok).unwrap().rank(), 2);
        let dup = r#"{"n":3,"labels":["a","b","c"],"bases":[[0,1],[0,1]]}"#;
        assert!(matches!(Matroid::parse_json(dup), Err(Error::Validation(_))));
        let size = r#"{"n":3,"labels":["a","b"],"bases":[[0,1]]}"#;
        assert!(matches!(Matroid::parse_json(size), Err(Error::Validation(_))));
        let range = r#"{"n":3,"labels":["a","b","c"],"bases":[[0,3]]}"#;
        assert!(matches!(Matroid::parse_json(range), Err(Error::Validation(_))));
        let labels = r#"{"n":2,"labels":["a","a"],"bases":[[0]]}"#;
        assert!(matches!(Matroid::parse_json(labels), Err(Error::DuplicateLabel(_))));
        assert!(matches!(Matroid::parse_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn dual_is_involution_and_contract_matches_dual_delete() {
        let m = uniform(2, 5);
        assert_eq!(m.dual().dual(), m);
        assert_eq!(m.dual().rank(), 3);
        let c = m.set(&[1]);
        let lhs = m.contract(c).unwrap();
        let rhs = m.dual().delete(c).unwrap().dual();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn contract_u24_is_u13() {
        let m = uniform(2, 4);
        let c = m.contract_element(0).unwrap();
        assert_eq!(c.n(), 3);
        assert_eq!(c.rank(), 1);
        assert_eq!(c.bases().len(), 3);
        assert_eq!(c.labels(), &["1", "2", "3"]);
    }

    #[test]
    fn emptying_the_ground_set_fails() {
        let m = uniform(1, 2);
        assert_eq!(m.delete(m.ground()), Err(Error::EmptyGroundSet));
        let loops = Matroid::from_rank_fn(default_labels(2), |_| 0, true).unwrap();
        assert_eq!(loops.simplify().unwrap_err(), Error::EmptyGroundSet);
    }

    #[test]
    fn simplify_keeps_lowest_representative() {
        // U_{1,3} plus a loop: elements 0 (loop), 1, 2, 3 all parallel.
        let m = Matroid::from_rank_fn(default_labels(4), |x| ((x & 0b1110) != 0) as usize, true).unwrap();
        let (s, red) = m.simplify().unwrap();
        assert_eq!(s.n(), 1);
        assert_eq!(s.labels(), &["1"]);
        assert_eq!(red.kept, vec![1]);
        assert_eq!(red.removed, vec![(0, None), (2, Some(1)), (3, Some(1))]);
        assert!(s.is_simple());
    }

    #[test]
    fn cosimplify_contracts_series_pairs() {
        // A 4-circuit: every pair is a series pair; co(U_{3,4}) is a single loop.
        let m = uniform(3, 4);
        let (c, red) = m.cosimplify().unwrap();
        assert_eq!(c.n(), 1);
        assert_eq!(c.rank(), 0);
        assert_eq!(red.kept, vec![0]);
    }

    #[test]
    fn coclosure_matches_dual_closure() {
        let m = uniform(2, 5);
        let d = m.dual();
        for x in m.ground().subsets() {
            assert_eq!(m.coclosure(x), d.closure(x));
        }
    }

    #[test]
    fn permute_preserves_structure() {
        let bases = vec![
            ElementSet::from_indices(3, [0, 1]),
            ElementSet::from_indices(3, [0, 2]),
        ];
        let m = Matroid::from_bases(default_labels(3), &bases, true).unwrap();
        let p = m.permute(&[2, 0, 1]);
        // old element 0 (coloop) is now element 2
        assert!(p.is_coloop(2));
        assert_eq!(p.label(2), "0");
        assert!(p.r(0b011) == 1);
    }
}
