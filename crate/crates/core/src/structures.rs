//! Detectors for triangles, triads, four-element fans, segments,
//! cosegments, segment-cosegment pairs and spores.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::connectivity::small_separations;
use crate::matroid::Matroid;
use crate::set::{sort_canonical, ElementSet};
use crate::witness::{labels_of, Witness};

pub fn triangles(m: &Matroid) -> Vec<ElementSet> {
    m.circuits_of_size(3)
}

pub fn triads(m: &Matroid) -> Vec<ElementSet> {
    m.cocircuits_of_size(3)
}

/// `{x1, x2, x3}` a triangle and `{x2, x3, x4}` a triad.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fan {
    pub x1: usize,
    pub x2: usize,
    pub x3: usize,
    pub x4: usize,
}

impl Fan {
    pub fn elements(&self) -> [usize; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    pub fn triangle(&self, n: usize) -> ElementSet {
        ElementSet::from_indices(n, [self.x1, self.x2, self.x3])
    }

    pub fn triad(&self, n: usize) -> ElementSet {
        ElementSet::from_indices(n, [self.x2, self.x3, self.x4])
    }

    pub fn is_valid(&self, m: &Matroid) -> bool {
        let e = self.elements();
        let distinct = (0..4).all(|i| e[i] < m.n() && (i + 1..4).all(|j| e[i] != e[j]));
        distinct && m.is_circuit(self.triangle(m.n())) && m.is_cocircuit(self.triad(m.n()))
    }

    pub fn witnesses(&self, m: &Matroid) -> Vec<Witness> {
        vec![
            Witness::circuit(self.triangle(m.n()), "triangle {x1, x2, x3}"),
            Witness::cocircuit(self.triad(m.n()), "triad {x2, x3, x4}"),
        ]
    }

    pub fn display(&self, m: &Matroid) -> String {
        format!("({}, {}, {}, {})", m.label(self.x1), m.label(self.x2), m.label(self.x3), m.label(self.x4))
    }
}

/// All ordered four-element fans.
pub fn fans(m: &Matroid) -> Vec<Fan> {
    let triads: BTreeSet<u32> = triads(m).into_iter().map(|t| t.bits()).collect();
    let mut out = Vec::new();
    for t in triangles(m) {
        let e = t.to_vec();
        for x1 in 0..3 {
            let (x2, x3) = match x1 {
                0 => (e[1], e[2]),
                1 => (e[0], e[2]),
                _ => (e[0], e[1]),
            };
            for x4 in (m.ground() - t).iter() {
                if triads.contains(&(1 << x2 | 1 << x3 | 1 << x4)) {
                    out.push(Fan { x1: e[x1], x2, x3, x4 });
                    out.push(Fan { x1: e[x1], x2: x3, x3: x2, x4 });
                }
            }
        }
    }
    out.sort();
    out
}

/// Segments of `M`: sets of at least three elements every three of which
/// form a circuit. With `all`, every subset of size at least three of a
/// maximal segment is listed too.
pub fn segments(m: &Matroid, all: bool) -> Vec<ElementSet> {
    let n = m.n();
    let mut found: BTreeSet<ElementSet> = BTreeSet::new();
    let mut lines: BTreeSet<u32> = BTreeSet::new();
    for t in triangles(m) {
        lines.insert(m.closure(t).bits());
    }
    for line in lines {
        let line = ElementSet::from_bits(n, line) - m.loops();
        let classes: Vec<ElementSet> = m.parallel_classes().into_iter().filter(|c| c.is_subset(line)).collect();
        if classes.len() < 3 {
            continue;
        }
        // one representative per parallel class, in every combination
        let mut choices = vec![m.empty()];
        for class in &classes {
            choices = choices.iter().flat_map(|c| class.iter().map(move |e| c.with(e))).collect();
        }
        for max in choices {
            if all {
                for k in 3..=max.len() {
                    found.extend(max.subsets_of_size(k));
                }
            } else {
                found.insert(max);
            }
        }
    }
    let mut out: Vec<ElementSet> = found.into_iter().collect();
    sort_canonical(&mut out);
    out
}

pub fn cosegments(m: &Matroid, all: bool) -> Vec<ElementSet> {
    segments(&m.dual(), all)
}

/// `L = {x1..xt}` a segment and `L* = {y1..yt}` disjoint from it with every
/// `(cl(L) - xi) ∪ yi` a cocircuit. `pairs` holds `(xi, yi)` with the
/// `xi` ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SegCosegPair {
    pub l: ElementSet,
    pub lstar: ElementSet,
    pub pairs: Vec<(usize, usize)>,
}

impl SegCosegPair {
    pub fn t(&self) -> usize {
        self.pairs.len()
    }

    pub fn partner(&self, xi: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 == xi).map(|p| p.1)
    }

    pub fn cocircuit_for(&self, m: &Matroid, i: usize) -> ElementSet {
        let (xi, yi) = self.pairs[i];
        (m.closure(self.l).without(xi)).with(yi)
    }

    pub fn is_valid(&self, m: &Matroid) -> bool {
        let xs = ElementSet::from_indices(m.n(), self.pairs.iter().map(|p| p.0));
        let ys = ElementSet::from_indices(m.n(), self.pairs.iter().map(|p| p.1));
        self.t() >= 3
            && xs == self.l
            && ys == self.lstar
            && ys.len() == self.t()
            && m.closure(self.l).is_disjoint(self.lstar)
            && is_segment(m, self.l)
            && (0..self.t()).all(|i| m.is_cocircuit(self.cocircuit_for(m, i)))
    }

    pub fn witnesses(&self, m: &Matroid) -> Vec<Witness> {
        (0..self.t())
            .map(|i| {
                let (xi, yi) = self.pairs[i];
                Witness::cocircuit(self.cocircuit_for(m, i), format!("(cl(L) - {}) ∪ {}", m.label(xi), m.label(yi)))
            })
            .collect()
    }

    pub fn to_json(&self, m: &Matroid) -> Value {
        json!({
            "L": labels_of(m, self.l),
            "Lstar": labels_of(m, self.lstar),
            "pairs": self.pairs.iter().map(|&(x, y)| [m.label(x), m.label(y)]).collect::<Vec<_>>(),
        })
    }
}

pub fn is_segment(m: &Matroid, l: ElementSet) -> bool {
    l.len() >= 3 && l.subsets_of_size(3).into_iter().all(|t| m.is_circuit(t))
}

pub fn is_cosegment(m: &Matroid, l: ElementSet) -> bool {
    l.len() >= 3 && l.subsets_of_size(3).into_iter().all(|t| m.is_cocircuit(t))
}

/// All segment-cosegment pairs whose segment is any segment of `M`
/// (maximal or not), with every admissible matching of partners.
pub fn seg_coseg_pairs(m: &Matroid) -> Vec<SegCosegPair> {
    let mut out = Vec::new();
    for l in segments(m, true) {
        out.extend(pairs_for_segment(m, l));
    }
    out.sort();
    out
}

/// Segment-cosegment pairs with the given segment.
pub fn pairs_for_segment(m: &Matroid, l: ElementSet) -> Vec<SegCosegPair> {
    let cl = m.closure(l);
    let xs = l.to_vec();
    let outside = m.ground() - cl;
    let candidates: Vec<Vec<usize>> = xs
        .iter()
        .map(|&xi| outside.iter().filter(|&y| m.is_cocircuit(cl.without(xi).with(y))).collect())
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(xs.len());
    distinct_representatives(&candidates, 0, 0, &mut chosen, &mut |ys| {
        let pairs: Vec<(usize, usize)> = xs.iter().copied().zip(ys.iter().copied()).collect();
        let lstar = ElementSet::from_indices(m.n(), ys.iter().copied());
        out.push(SegCosegPair { l, lstar, pairs });
    });
    out
}

fn distinct_representatives(
    candidates: &[Vec<usize>],
    depth: usize,
    used: u32,
    chosen: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if depth == candidates.len() {
        emit(chosen);
        return;
    }
    for &y in &candidates[depth] {
        if used >> y & 1 == 0 {
            chosen.push(y);
            distinct_representatives(candidates, depth + 1, used | 1 << y, chosen, emit);
            chosen.pop();
        }
    }
}

/// `P` a rank-one flat and `P ∪ s` a cocircuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Spore {
    pub p: ElementSet,
    pub s: usize,
}

impl Spore {
    pub fn is_valid(&self, m: &Matroid) -> bool {
        !self.p.contains(self.s)
            && m.rank_of(self.p) == 1
            && m.is_flat(self.p)
            && m.is_cocircuit(self.p.with(self.s))
    }

    pub fn display(&self, m: &Matroid) -> String {
        format!("({}, {})", self.p.display_with(m.labels()), m.label(self.s))
    }
}

pub fn spores(m: &Matroid) -> Vec<Spore> {
    let loops = m.loops();
    let mut out = Vec::new();
    for class in m.parallel_classes() {
        let p = class | loops;
        for s in (m.ground() - p).iter() {
            if m.is_cocircuit(p.with(s)) {
                out.push(Spore { p, s });
            }
        }
    }
    out.sort();
    out
}

/// The unique spore of `M`, provided every 1- or 2-separation has a side
/// inside `P ∪ s`.
pub fn is_3conn_up_to_unique_spore(m: &Matroid) -> Option<Spore> {
    let all = spores(m);
    let [spore] = all.as_slice() else {
        return None;
    };
    let zone = spore.p.with(spore.s);
    small_separations(m)
        .iter()
        .all(|sep| sep.x.is_subset(zone) || (m.ground() - sep.x).is_subset(zone))
        .then_some(*spore)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, fig1_matroid, theta, theta_double, uniform};

    /// Brute-force fan oracle over all ordered 4-tuples.
    fn brute_fans(m: &Matroid) -> Vec<Fan> {
        let n = m.n();
        let mut out = Vec::new();
        for x1 in 0..n {
            for x2 in 0..n {
                for x3 in 0..n {
                    for x4 in 0..n {
                        let f = Fan { x1, x2, x3, x4 };
                        if f.is_valid(m) {
                            out.push(f);
                        }
                    }
                }
            }
        }
        out
    }

    fn brute_segments(m: &Matroid) -> Vec<ElementSet> {
        let mut out: Vec<ElementSet> = m.ground().subsets().filter(|&l| is_segment(m, l)).collect();
        sort_canonical(&mut out);
        out
    }

    #[test]
    fn triangle_counts() {
        assert_eq!(triangles(&uniform(2, 4).unwrap()).len(), 4);
        assert!(triangles(&uniform(3, 6).unwrap()).is_empty());
        assert_eq!(triads(&complete(4).unwrap()).len(), 4);
    }

    #[test]
    fn fans_match_brute_force() {
        for m in [uniform(2, 4).unwrap(), complete(4).unwrap(), uniform(3, 6).unwrap(), theta_double(3).unwrap().dual()] {
            assert_eq!(fans(&m), brute_fans(&m));
        }
        assert!(!fans(&uniform(2, 4).unwrap()).is_empty());
        assert!(fans(&uniform(3, 6).unwrap()).is_empty());
    }

    #[test]
    fn fig1_fan() {
        let m = fig1_matroid();
        let idx = |l: &str| m.index_of(l).unwrap();
        let fan = Fan { x1: idx("ad"), x2: idx("cd"), x3: idx("ac"), x4: idx("bc") };
        assert!(fan.is_valid(&m));
        assert!(fans(&m).contains(&fan));
        assert!(fan.witnesses(&m).iter().all(|w| w.verify(&m)));
    }

    #[test]
    fn segments_match_brute_force() {
        for m in [uniform(2, 4).unwrap(), complete(4).unwrap(), theta(4).unwrap(), theta_double(3).unwrap().dual()] {
            assert_eq!(segments(&m, true), brute_segments(&m));
        }
        let u = uniform(2, 4).unwrap();
        assert_eq!(segments(&u, false), vec![u.ground()]);
        let k4 = complete(4).unwrap();
        assert_eq!(segments(&k4, false), triangles(&k4));
    }

    #[test]
    fn theta_b_is_a_segment() {
        let t = theta(5).unwrap();
        let b = ElementSet::from_bits(10, 0b11111 << 5);
        assert!(segments(&t, false).contains(&b));
    }

    #[test]
    fn seg_coseg_examples() {
        assert!(seg_coseg_pairs(&uniform(2, 4).unwrap()).is_empty());
        // in M(K4) each triangle pairs with the triad of edges at the fourth vertex
        let k4 = complete(4).unwrap();
        let pairs = seg_coseg_pairs(&k4);
        assert_eq!(pairs.len(), 4);
        for p in &pairs {
            assert!(p.is_valid(&k4));
            assert_eq!(p.lstar, k4.ground() - p.l);
            assert!(k4.is_cocircuit(p.lstar));
        }
        let m = theta_double(3).unwrap().dual();
        let c = m.set_of(&["a2", "a3", "a2'", "a3'"]).unwrap();
        let a = m.set_of(&["a1", "a2", "a3"]).unwrap();
        let pairs = seg_coseg_pairs(&m);
        assert!(pairs.iter().all(|p| p.is_valid(&m)));
        assert!(pairs.iter().any(|p| p.l == a && (p.l - c).len() == 1));
        assert!(pairs.iter().all(|p| !p.l.is_subset(c)));
    }

    #[test]
    fn spore_fixture() {
        // U_{2,3} with one element doubled: {0, 1} is a parallel pair
        let m = Matroid::from_rank_fn(
            (0..4).map(|i| i.to_string()).collect(),
            |x| {
                let folded = (x & 1) | (x >> 1);
                (folded.count_ones() as usize).min(2)
            },
            true,
        )
        .unwrap();
        let sp = spores(&m);
        assert!(sp.iter().all(|s| s.is_valid(&m)));
        assert_eq!(sp.len(), 4);
        assert!(sp.contains(&Spore { p: m.set(&[0, 1]), s: 2 }));
        assert!(sp.contains(&Spore { p: m.set(&[2]), s: 3 }));
        assert!(is_3conn_up_to_unique_spore(&m).is_none());
        assert!(spores(&complete(4).unwrap()).is_empty());
        assert!(is_3conn_up_to_unique_spore(&complete(4).unwrap()).is_none());
    }
}
