use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::set::{ElementSet, MAX_ELEMENTS};

/// Element order of `P(M1, M2)`: the elements of `M1` in order (the
/// basepoint stays at `p1` with `M1`'s label), then the elements of `M2`
/// other than `p2`, primed when their label is already taken.
fn glue_map(m1: &Matroid, m2: &Matroid, p1: usize, p2: usize) -> Result<(usize, Vec<usize>, Vec<String>)> {
    if p1 >= m1.n() || p2 >= m2.n() {
        return Err(Error::BadParams("basepoint out of range".into()));
    }
    let n = m1.n() + m2.n() - 1;
    if n > MAX_ELEMENTS {
        return Err(Error::TooLarge { n, cap: MAX_ELEMENTS });
    }
    let mut map2 = Vec::with_capacity(m2.n());
    let mut labels = m1.labels().to_vec();
    for j in 0..m2.n() {
        if j == p2 {
            map2.push(p1);
        } else {
            map2.push(labels.len());
            let mut label = m2.label(j).to_string();
            while labels.contains(&label) {
                label.push('\'');
            }
            labels.push(label);
        }
    }
    Ok((n, map2, labels))
}

fn remap(set: ElementSet, map: &[usize], n: usize) -> ElementSet {
    ElementSet::from_indices(n, set.iter().map(|e| map[e]))
}

/// Parallel connection of `M1` and `M2` with `p1` identified with `p2`.
///
/// Circuits are those of `M1`, those of `M2`, and `(C1 - p) ∪ (C2 - p)` for
/// circuits through the basepoint. If the basepoint is a loop of `M1` the
/// result is `M1 ⊕ M2/p`; if it is a loop of `M2` only, `M1/p ⊕ M2`.
pub fn parallel_connection(m1: &Matroid, m2: &Matroid, p1: usize, p2: usize) -> Result<Matroid> {
    let (n, map2, labels) = glue_map(m1, m2, p1, p2)?;
    let map1: Vec<usize> = (0..m1.n()).collect();
    let mut circuits = Vec::new();
    if m1.is_loop(p1) {
        circuits.extend(m1.circuits().into_iter().map(|c| remap(c, &map1, n)));
        if m2.n() > 1 {
            let m2p = m2.contract_element(p2)?;
            let map: Vec<usize> = (0..m2.n()).filter(|&j| j != p2).map(|j| map2[j]).collect();
            circuits.extend(m2p.circuits().into_iter().map(|c| remap(c, &map, n)));
        }
    } else if m2.is_loop(p2) {
        if m1.n() > 1 {
            let m1p = m1.contract_element(p1)?;
            let map: Vec<usize> = (0..m1.n()).filter(|&i| i != p1).collect();
            circuits.extend(m1p.circuits().into_iter().map(|c| remap(c, &map, n)));
        }
        circuits.extend(m2.circuits().into_iter().map(|c| remap(c, &map2, n)));
    } else {
        let c1 = m1.circuits();
        let c2: Vec<ElementSet> = m2.circuits().into_iter().map(|c| remap(c, &map2, n)).collect();
        let c1: Vec<ElementSet> = c1.into_iter().map(|c| remap(c, &map1, n)).collect();
        for a in c1.iter().filter(|c| c.contains(p1)) {
            for b in c2.iter().filter(|c| c.contains(p1)) {
                circuits.push((*a | *b).without(p1));
            }
        }
        circuits.extend(c1);
        circuits.extend(c2);
    }
    Matroid::from_circuits(labels, &circuits, false)
}

/// `M1 ⊕2 M2 = P(M1, M2) \ p`.
pub fn two_sum(m1: &Matroid, m2: &Matroid, p1: usize, p2: usize) -> Result<Matroid> {
    for (m, p, side) in [(m1, p1, "M1"), (m2, p2, "M2")] {
        if p >= m.n() {
            return Err(Error::BadParams("basepoint out of range".into()));
        }
        if m.is_loop(p) {
            return Err(Error::BasepointDegenerate(format!("{} is a loop of {side}", m.label(p))));
        }
        if m.is_coloop(p) {
            return Err(Error::BasepointDegenerate(format!("{} is a coloop of {side}", m.label(p))));
        }
    }
    parallel_connection(m1, m2, p1, p2)?.delete_element(p1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{graphic, uniform, Graph};
    use crate::iso::is_isomorphic;

    /// Modular rank formula for a parallel connection at a non-loop basepoint.
    fn oracle_rank(m1: &Matroid, m2: &Matroid, p1: usize, p2: usize, x: u32) -> usize {
        let n1 = m1.n();
        let mut x1 = x & ((1u32 << n1) - 1);
        let mut x2 = 0u32;
        let mut k = n1;
        for j in 0..m2.n() {
            if j == p2 {
                if x >> p1 & 1 == 1 {
                    x2 |= 1 << j;
                }
            } else {
                if x >> k & 1 == 1 {
                    x2 |= 1 << j;
                }
                k += 1;
            }
        }
        let with_p = (m1.r(x1 | 1 << p1) + m2.r(x2 | 1 << p2) - 1) as usize;
        if x >> p1 & 1 == 1 {
            return with_p;
        }
        x1 &= !(1 << p1);
        with_p.min((m1.r(x1) + m2.r(x2)) as usize)
    }

    #[test]
    fn two_triangles() {
        let t = uniform(2, 3).unwrap();
        let p = parallel_connection(&t, &t, 0, 0).unwrap();
        assert_eq!(p.n(), 5);
        assert_eq!(p.rank(), 3);
        p.check_rank_axioms().unwrap();
        let s = two_sum(&t, &t, 0, 0).unwrap();
        assert!(s.same_structure(&uniform(3, 4).unwrap()));
    }

    #[test]
    fn agrees_with_modular_formula() {
        let k4 = graphic(&Graph::complete(4)).unwrap();
        let u24 = uniform(2, 4).unwrap().with_labels(vec!["w".into(), "x".into(), "y".into(), "z".into()]).unwrap();
        for p2 in 0..4 {
            let p = parallel_connection(&k4, &u24, 2, p2).unwrap();
            for x in 0..(1u32 << p.n()) {
                assert_eq!(p.r(x) as usize, oracle_rank(&k4, &u24, 2, p2, x));
            }
        }
    }

    #[test]
    fn deletion_commutes_with_connection() {
        let k4 = graphic(&Graph::complete(4)).unwrap();
        let w = graphic(&Graph::wheel(3)).unwrap();
        let p = parallel_connection(&k4, &w, 0, 0).unwrap();
        for e in 1..k4.n() {
            let lhs = p.delete_element(e).unwrap();
            let rhs = parallel_connection(&k4.delete_element(e).unwrap(), &w, 0, 0).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn loop_basepoint_gives_direct_sum() {
        let loopy = Matroid::from_rank_fn(vec!["p".into(), "q".into()], |x| (x >> 1 & 1) as usize, true).unwrap();
        let t = uniform(2, 3).unwrap();
        let p = parallel_connection(&loopy, &t, 0, 0).unwrap();
        // M1 ⊕ M2/p: p a loop, q a coloop, the rest a parallel pair
        assert!(p.is_loop(0));
        assert!(p.is_coloop(1));
        assert_eq!(p.rank(), 2);
        assert_eq!(p.r(0b1100), 1);
    }

    #[test]
    fn degenerate_basepoints() {
        let t = uniform(2, 3).unwrap();
        let coloop = uniform(1, 1).unwrap();
        assert!(matches!(two_sum(&t, &coloop, 0, 0), Err(Error::BasepointDegenerate(_))));
        let too_big = uniform(2, 16).unwrap();
        let other = uniform(2, 10).unwrap();
        assert!(matches!(parallel_connection(&too_big, &other, 0, 0), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn two_sums_of_k4_agree_up_to_isomorphism() {
        let k4 = graphic(&Graph::complete(4)).unwrap();
        let a = two_sum(&k4, &k4, 0, 0).unwrap();
        let b = two_sum(&k4, &k4, 5, 1).unwrap();
        assert!(is_isomorphic(&a, &b).is_some());
    }
}
