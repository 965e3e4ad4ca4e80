//! Reference implementations written straight from the definitions, sharing
//! nothing with the library beyond the rank oracle.

#![allow(dead_code)]

use matroid_lab::Matroid;

pub fn full(m: &Matroid) -> u32 {
    ((1u64 << m.n()) - 1) as u32
}

pub fn r(m: &Matroid, x: u32) -> u32 {
    m.r(x)
}

pub fn lambda(m: &Matroid, x: u32) -> u32 {
    r(m, x) + r(m, full(m) & !x) - r(m, full(m))
}

pub fn closure(m: &Matroid, x: u32) -> u32 {
    let rx = r(m, x);
    (0..m.n()).filter(|&e| r(m, x | 1 << e) == rx).fold(x, |acc, e| acc | 1 << e)
}

pub fn coclosure(m: &Matroid, x: u32) -> u32 {
    closure(&m.dual(), x)
}

pub fn is_circuit(m: &Matroid, c: u32) -> bool {
    c != 0 && r(m, c) + 1 == c.count_ones() && (0..m.n()).filter(|e| c >> e & 1 == 1).all(|e| r(m, c & !(1 << e)) == c.count_ones() - 1)
}

pub fn is_cocircuit(m: &Matroid, c: u32) -> bool {
    is_circuit(&m.dual(), c)
}

/// No k-separation for k = 1, 2.
pub fn is_3_connected(m: &Matroid) -> bool {
    let e = full(m);
    let n = m.n() as u32;
    (0..=e).all(|x| {
        let size = x.count_ones();
        let l = lambda(m, x);
        !(size >= 1 && n - size >= 1 && l < 1) && !(size >= 2 && n - size >= 2 && l < 2)
    })
}

/// Every ordered vertical 3-partition `(X1, X2)` at `x`.
pub fn vertical3(m: &Matroid, x: usize) -> Vec<(u32, u32)> {
    let rest = full(m) & !(1 << x);
    let mut out = Vec::new();
    let mut x1 = rest;
    loop {
        let x2 = rest & !x1;
        if lambda(m, x1) == 2
            && lambda(m, x2) == 2
            && r(m, x1) >= 3
            && r(m, x2) >= 3
            && closure(m, x1) >> x & 1 == 1
            && closure(m, x2) >> x & 1 == 1
        {
            out.push((x1, x2));
        }
        if x1 == 0 {
            break;
        }
        x1 = (x1 - 1) & rest;
    }
    out
}

/// Conditions (i)-(iii) of a minimal partition, with `parts(y)` listing the
/// ordered vertical 3-partitions at `y`.
pub fn is_minimal(a: u32, x1: u32, x2: u32, x: usize, parts: &mut dyn FnMut(usize) -> Vec<(u32, u32)>) -> bool {
    if a >> x & 1 == 0 {
        return false;
    }
    let apexes = a & (x1 | 1 << x);
    for y in (0..32).filter(|y| apexes >> y & 1 == 1) {
        for (y1, y2) in parts(y) {
            if x2 & y1 == 0 && (y1, y2, y) != (x1, x2, x) {
                return false;
            }
            if x2 & y2 == 0 && (y2, y1, y) != (x1, x2, x) {
                return false;
            }
        }
    }
    true
}

/// Segment-cosegment pairs `(L, [(xi, yi)])` by brute force: `L` a segment,
/// `yi ∉ cl(L)` distinct, `(cl(L) - xi) ∪ yi` a cocircuit.
pub fn seg_coseg_pairs(m: &Matroid) -> Vec<(u32, Vec<(usize, usize)>)> {
    let n = m.n();
    let mut out = Vec::new();
    for l in 1..=full(m) {
        if l.count_ones() < 3 || !is_segment(m, l) {
            continue;
        }
        let cl = closure(m, l);
        let xs: Vec<usize> = (0..n).filter(|e| l >> e & 1 == 1).collect();
        let cands: Vec<Vec<usize>> = xs
            .iter()
            .map(|&xi| (0..n).filter(|&y| cl >> y & 1 == 0 && is_cocircuit(m, (cl & !(1 << xi)) | 1 << y)).collect())
            .collect();
        let mut chosen = Vec::new();
        assign(&cands, 0, &mut chosen, &mut |ys| out.push((l, xs.iter().copied().zip(ys.iter().copied()).collect())));
    }
    out
}

fn assign(cands: &[Vec<usize>], i: usize, chosen: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if i == cands.len() {
        emit(chosen);
        return;
    }
    for &y in &cands[i] {
        if !chosen.contains(&y) {
            chosen.push(y);
            assign(cands, i + 1, chosen, emit);
            chosen.pop();
        }
    }
}

pub fn is_segment(m: &Matroid, l: u32) -> bool {
    let elems: Vec<usize> = (0..m.n()).filter(|e| l >> e & 1 == 1).collect();
    elems.len() >= 3
        && elems.iter().enumerate().all(|(i, &a)| {
            elems[i + 1..].iter().enumerate().all(|(j, &b)| elems[i + j + 2..].iter().all(|&c| is_circuit(m, 1 << a | 1 << b | 1 << c)))
        })
}

pub fn is_cosegment(m: &Matroid, l: u32) -> bool {
    is_segment(&m.dual(), l)
}
