//! `Θ_r`: a basis `A = {a_1..a_r}` together with `r` points `b_1..b_r` placed
//! freely on a line, `b_i` lying in the hyperplane spanned by `A - a_i`.
//!
//! The realization is `a_i = e_i` and `b_i = q_i p - p_i q` for integer
//! vectors `p, q`, so coordinate `i` of `b_i` vanishes and every `b_i` lies
//! in `span(p, q)`. Freeness is certified by drawing several `(p, q)`
//! pairs, keeping the draws with the most bases, and requiring two of them
//! to give isomorphic matroids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::iso::is_isomorphic;
use crate::matroid::Matroid;
use crate::set::ElementSet;

pub const DEFAULT_THETA_SEED: u64 = 0x7e7a;

const ENTRY_BOUND: i64 = 13;
const DRAWS: usize = 6;
const MAX_ATTEMPTS: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaSpec {
    pub r: usize,
    pub p: Vec<i64>,
    pub q: Vec<i64>,
    /// Columns `a_1..a_r, b_1..b_r`.
    pub vectors: Vec<Vec<i64>>,
}

impl ThetaSpec {
    fn draw(r: usize, rng: &mut ChaCha8Rng) -> ThetaSpec {
        let p: Vec<i64> = (0..r).map(|_| rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND)).collect();
        let q: Vec<i64> = (0..r)
            .map(|_| loop {
                let v = rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND);
                if v != 0 {
                    break v;
                }
            })
            .collect();
        let mut vectors = Vec::with_capacity(2 * r);
        for i in 0..r {
            let mut e = vec![0; r];
            e[i] = 1;
            vectors.push(e);
        }
        for i in 0..r {
            vectors.push((0..r).map(|k| q[i] * p[k] - p[i] * q[k]).collect());
        }
        ThetaSpec { r, p, q, vectors }
    }

    pub fn matroid(&self) -> Result<Matroid> {
        let labels = theta_labels(self.r);
        Matroid::from_rank_fn(labels, |x| column_rank(&self.vectors, x), false)
    }
}

fn theta_labels(r: usize) -> Vec<String> {
    (1..=r).map(|i| format!("a{i}")).chain((1..=r).map(|i| format!("b{i}"))).collect()
}

/// Rank of the selected columns by fraction-free elimination.
fn column_rank(vectors: &[Vec<i64>], bits: u32) -> usize {
    let mut rows: Vec<Vec<i128>> = ElementSet::from_bits(vectors.len(), bits)
        .iter()
        .map(|i| vectors[i].iter().map(|&v| v as i128).collect())
        .collect();
    let width = vectors.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        for i in (rank + 1)..rows.len() {
            for j in (col + 1)..width {
                rows[i][j] = (rows[rank][col] * rows[i][j] - rows[i][col] * rows[rank][j]) / prev;
            }
            rows[i][col] = 0;
        }
        prev = rows[rank][col];
        rank += 1;
    }
    rank
}

/// The structural requirements every realization must meet.
fn structurally_valid(m: &Matroid, r: usize) -> bool {
    let a = (1u32 << r) - 1;
    let b = a << r;
    if m.rank() != r || m.r(b) != 2 || !m.is_simple() {
        return false;
    }
    (0..r).all(|i| m.r(a & !(1 << i) | 1 << (r + i)) == (r - 1) as u32)
}

/// `Θ_r` from the default seed.
pub fn theta(r: usize) -> Result<Matroid> {
    theta_with_seed(r, DEFAULT_THETA_SEED).map(|(m, _)| m)
}

pub fn theta_with_seed(r: usize, seed: u64) -> Result<(Matroid, ThetaSpec)> {
    if !(3..=6).contains(&r) {
        return Err(Error::BadParams(format!("theta needs 3 <= r <= 6, got {r}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws: Vec<(Matroid, ThetaSpec, usize)> = Vec::new();
    for _ in 0..MAX_ATTEMPTS {
        if draws.len() == DRAWS {
            break;
        }
        let spec = ThetaSpec::draw(r, &mut rng);
        let m = spec.matroid()?;
        if structurally_valid(&m, r) {
            let count = m.basis_count();
            draws.push((m, spec, count));
        }
    }
    let best = draws.iter().map(|d| d.2).max().ok_or_else(|| {
        Error::DegenerateRealization(format!("no structurally valid draw in {MAX_ATTEMPTS} attempts"))
    })?;
    let mut top = draws.into_iter().filter(|d| d.2 == best);
    let (first, spec, _) = top.next().expect("best exists");
    let Some((second, _, _)) = top.next() else {
        return Err(Error::DegenerateRealization(format!("only one draw reached {best} bases")));
    };
    if is_isomorphic(&first, &second).is_none() {
        return Err(Error::DegenerateRealization("two maximal draws are not isomorphic".into()));
    }
    Ok((first, spec))
}

/// The generalized parallel connection of `Θ_r` with a copy of itself
/// along the line `B`. Elements are ordered `a1..ar, a1'..ar', b1..br`.
///
/// Flats are the sets `F` with `F ∩ (A ∪ B)` and `F ∩ (A' ∪ B)` both flats
/// of `Θ_r`. Closure is the intersection of the flats above a set, and the
/// rank of a flat is the length of the longest chain of flats below it.
pub fn theta_double(r: usize) -> Result<Matroid> {
    if !(3..=4).contains(&r) {
        return Err(Error::BadParams(format!("theta_double needs 3 <= r <= 4, got {r}")));
    }
    let theta = theta(r)?;
    let n = 3 * r;
    let size = 1usize << n;
    let full = (size - 1) as u32;
    let mask_r = (1u32 << r) - 1;
    let side = |x: u32, primed: bool| -> u32 {
        let a = if primed { x >> r & mask_r } else { x & mask_r };
        a | (x >> (2 * r) & mask_r) << r
    };

    let is_flat: Vec<bool> = (0..size as u32)
        .map(|x| theta.is_flat(ElementSet::from_bits(2 * r, side(x, false))) && theta.is_flat(ElementSet::from_bits(2 * r, side(x, true))))
        .collect();

    // closure[X] = AND of all flats containing X
    let mut closure: Vec<u32> = (0..size as u32).map(|x| if is_flat[x as usize] { x } else { full }).collect();
    for bit in 0..n {
        for x in 0..size {
            if x >> bit & 1 == 0 {
                closure[x] &= closure[x | 1 << bit];
            }
        }
    }

    let mut flats: Vec<u32> = (0..size as u32).filter(|&x| is_flat[x as usize]).collect();
    flats.sort_by_key(|f| (f.count_ones(), *f));
    let mut flat_rank = vec![0u8; size];
    for (i, &f) in flats.iter().enumerate() {
        flat_rank[f as usize] = flats[..i]
            .iter()
            .filter(|&&g| g & f == g)
            .map(|&g| flat_rank[g as usize] + 1)
            .max()
            .unwrap_or(0);
    }

    let labels: Vec<String> = (1..=r)
        .map(|i| format!("a{i}"))
        .chain((1..=r).map(|i| format!("a{i}'")))
        .chain((1..=r).map(|i| format!("b{i}")))
        .collect();
    let from_flats = Matroid::from_rank_fn(labels.clone(), |x| flat_rank[closure[x as usize] as usize] as usize, false)?;
    for x in 0..size {
        if closure[x] as usize & x != x || closure[closure[x] as usize] != closure[x] {
            return Err(Error::Invariant("flat family is not closed under intersection".into()));
        }
    }
    let via_bases = Matroid::from_bases(labels, &from_flats.bases(), true)?;
    if via_bases != from_flats {
        return Err(Error::Invariant("flat lattice rank is not matroidal".into()));
    }
    Ok(via_bases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, k5_minus_e};

    #[test]
    fn elimination_rank() {
        let v = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1], vec![1, 3, 4]];
        assert_eq!(column_rank(&v, 0b0011), 1);
        assert_eq!(column_rank(&v, 0b0101), 2);
        assert_eq!(column_rank(&v, 0b1111), 2);
        assert_eq!(column_rank(&v, 0), 0);
    }

    #[test]
    fn theta3_is_k4() {
        let t = theta(3).unwrap();
        assert!(is_isomorphic(&t, &complete(4).unwrap()).is_some());
    }

    #[test]
    fn theta_self_dual_and_b_is_a_line() {
        for r in 3..=5 {
            let t = theta(r).unwrap();
            assert!(is_isomorphic(&t, &t.dual()).is_some(), "r = {r}");
            let b = ElementSet::from_bits(2 * r, ((1u32 << r) - 1) << r);
            assert_eq!(t.rank_of(b), 2);
        }
    }

    #[test]
    fn seeds_agree_up_to_isomorphism() {
        let (m1, s1) = theta_with_seed(4, 1).unwrap();
        let (m2, s2) = theta_with_seed(4, 2).unwrap();
        assert_ne!(s1, s2);
        assert!(is_isomorphic(&m1, &m2).is_some());
        for (i, b) in s1.vectors[4..].iter().enumerate() {
            assert_eq!(b[i], 0);
        }
    }

    #[test]
    fn bad_params() {
        assert!(matches!(theta(2), Err(Error::BadParams(_))));
        assert!(matches!(theta_double(5), Err(Error::BadParams(_))));
    }

    #[test]
    fn double_of_theta3_is_k5_minus_e() {
        let m = theta_double(3).unwrap();
        assert_eq!(m.rank(), 4);
        assert!(is_isomorphic(&m, &k5_minus_e()).is_some());
    }

    #[test]
    fn double_circuit() {
        for r in 3..=4 {
            let m = theta_double(r).unwrap();
            let a = (1u32 << r) - 1;
            let c = (a & !1) | (a & !1) << r;
            assert!(m.is_circuit(ElementSet::from_bits(3 * r, c)), "r = {r}");
        }
    }
}
