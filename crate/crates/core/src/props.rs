//! Executable property suites for the connectivity, segment and partition
//! statements. Each suite tallies checks per named property; a failure
//! records a short description of the offending instance.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalogue::Catalogue;
use crate::connectivity::{
    bixby_check, decompose_2_separation, find_minimal_partition, is_3_connected, is_vertical_partition, lambda,
    lambda_bits, local_connectivity, minimal_with_index, small_separations, vertical_3_partitions, VerticalIndex,
    VerticalPartition,
};
use crate::constructions::{complete, parallel_connection, two_sum, uniform, wheel};
use crate::iso::is_isomorphic;
use crate::matroid::Matroid;
use crate::minors::{GenericOracle, MinorOracle};
use crate::set::ElementSet;
use crate::structures::{is_3conn_up_to_unique_spore, is_cosegment, seg_coseg_pairs, Spore};
use crate::theorem::{co_si_of_contraction, si_of_contraction};

const MAX_EXAMPLES: usize = 5;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: u64,
    pub failed: u64,
    /// Observations worth a human look that are not failures.
    pub flagged: u64,
    pub examples: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub tallies: BTreeMap<String, Tally>,
}

impl PropertyReport {
    pub fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let t = self.tallies.entry(name.to_string()).or_default();
        t.checked += 1;
        if !ok {
            t.failed += 1;
            if t.examples.len() < MAX_EXAMPLES {
                t.examples.push(detail());
            }
        }
    }

    pub fn flag(&mut self, name: &str, detail: impl FnOnce() -> String) {
        let t = self.tallies.entry(name.to_string()).or_default();
        t.flagged += 1;
        if t.examples.len() < MAX_EXAMPLES {
            t.examples.push(detail());
        }
    }

    pub fn merge(&mut self, other: PropertyReport) {
        for (k, v) in other.tallies {
            let t = self.tallies.entry(k).or_default();
            t.checked += v.checked;
            t.failed += v.failed;
            t.flagged += v.flagged;
            for e in v.examples {
                if t.examples.len() < MAX_EXAMPLES {
                    t.examples.push(e);
                }
            }
        }
    }

    pub fn failures(&self) -> Vec<&str> {
        self.tallies.iter().filter(|(_, t)| t.failed > 0).map(|(k, _)| k.as_str()).collect()
    }

    pub fn all_pass(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn checked(&self, name: &str) -> u64 {
        self.tallies.get(name).map_or(0, |t| t.checked)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("tallies serialize")
    }

    /// One line per property.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for (k, t) in &self.tallies {
            let status = if t.failed == 0 { "PASS" } else { "FAIL" };
            s.push_str(&format!("{status} {k}: {} checked, {} failed, {} flagged\n", t.checked, t.failed, t.flagged));
            if t.failed > 0 || t.flagged > 0 {
                for e in &t.examples {
                    s.push_str(&format!("    {e}\n"));
                }
            }
        }
        s
    }
}

/// Exhaustive up to `exhaustive_max_n` elements, `trials` random draws above.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Budget {
    pub exhaustive_max_n: usize,
    pub trials: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { exhaustive_max_n: 8, trials: 200 }
    }
}

fn full(n: usize) -> u32 {
    ElementSet::full(n).bits()
}

/// Draws a random assignment of every element to one of `parts` parts.
fn random_parts(rng: &mut ChaCha8Rng, n: usize, parts: usize) -> Vec<u32> {
    let mut out = vec![0u32; parts];
    for e in 0..n {
        out[rng.gen_range(0..parts)] |= 1 << e;
    }
    out
}

/// Every assignment of the ground set to `parts` parts (exhaustive) or
/// `trials` random ones.
fn partitions(n: usize, parts: usize, budget: Budget, rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    if n <= budget.exhaustive_max_n {
        let total = parts.pow(n as u32);
        (0..total)
            .map(|mut code| {
                let mut out = vec![0u32; parts];
                for e in 0..n {
                    out[code % parts] |= 1 << e;
                    code /= parts;
                }
                out
            })
            .collect()
    } else {
        (0..budget.trials).map(|_| random_parts(rng, n, parts)).collect()
    }
}

fn show(m: &Matroid, x: u32) -> String {
    ElementSet::from_bits(m.n(), x).display_with(m.labels())
}

/// Connectivity-function statements that hold in every matroid, plus the
/// 3-connected ones when `M` is 3-connected.
pub fn section2(m: &Matroid, name: &str, budget: Budget, rng: &mut ChaCha8Rng) -> PropertyReport {
    let mut rep = PropertyReport::default();
    let n = m.n();
    let e = full(n);
    let r = |x: u32| m.r(x) as i64;
    let lam = |x: u32| lambda_bits(m, x) as i64;

    // submodularity of λ
    for p in partitions(n, 4, budget, rng) {
        let (x, y) = (p[0] | p[2], p[1] | p[2]);
        rep.check("submodularity", lam(x & y) + lam(x | y) <= lam(x) + lam(y), || {
            format!("{name}: X = {}, Y = {}", show(m, x), show(m, y))
        });
    }

    // λ_{M*} = λ_M
    let dual = m.dual();
    for x in 0..=e {
        rep.check("lambda_duality", lambda_bits(&dual, x) == lambda_bits(m, x), || format!("{name}: X = {}", show(m, x)));
    }

    // guts: z in exactly one of cl(X)∩cl(Y), cl*(X)∩cl*(Y) when λ(X) = λ(Y)
    for z in 0..n {
        let rest = e & !(1 << z);
        let mut x = rest;
        loop {
            let y = rest & !x;
            if lam(x) == lam(y) {
                let xs = ElementSet::from_bits(n, x);
                let ys = ElementSet::from_bits(n, y);
                let in_cl = m.closure(xs).contains(z) && m.closure(ys).contains(z);
                let in_cocl = m.coclosure(xs).contains(z) && m.coclosure(ys).contains(z);
                rep.check("guts", in_cl != in_cocl, || format!("{name}: X = {}, z = {}", show(m, x), m.label(z)));
            }
            if x == 0 {
                break;
            }
            x = (x - 1) & rest;
        }
    }

    // flowers3: ⊓(A,B) + λ(C) = ⊓(A,C) + λ(B)
    for p in partitions(n, 3, budget, rng) {
        let (a, b, c) = (p[0], p[1], p[2]);
        let sq = |u: u32, v: u32| r(u) + r(v) - r(u | v);
        rep.check("flowers3", sq(a, b) + lam(c) == sq(a, c) + lam(b), || {
            format!("{name}: A = {}, B = {}, C = {}", show(m, a), show(m, b), show(m, c))
        });
    }

    // prop7: ⊓(X,Y) = 1 and x, y ∈ X ∩ cl(Y) ⟹ r({x,y}) <= 1
    for p in partitions(n, 3, budget, rng) {
        let (x, y) = (p[0], p[1]);
        let (xs, ys) = (ElementSet::from_bits(n, x), ElementSet::from_bits(n, y));
        if local_connectivity(m, xs, ys) == 1 {
            let shared = xs & m.closure(ys);
            rep.check("prop7", m.rank_of(shared) <= 1, || format!("{name}: X = {}, Y = {}", show(m, x), show(m, y)));
        }
    }

    // prop1: λ_N(E(N) ∩ X) <= λ_M(X) on random minors
    for _ in 0..budget.trials {
        let p = random_parts(rng, n, 3);
        let (del, con) = (ElementSet::from_bits(n, p[1]), ElementSet::from_bits(n, p[2]));
        let Ok(minor) = m.minor(del, con) else { continue };
        let x: u32 = rng.gen::<u32>() & e;
        let survivors = (m.ground() - del - con).to_vec();
        let local = ElementSet::from_indices(minor.n(), survivors.iter().enumerate().filter(|(_, &s)| x >> s & 1 == 1).map(|(i, _)| i));
        rep.check("prop1", lambda(&minor, local) <= lam(x) as usize, || {
            format!("{name}: D = {}, C = {}, X = {}", show(m, p[1]), show(m, p[2]), show(m, x))
        });
    }

    if n >= 4 && is_3_connected(m) {
        section2_connected(m, name, budget, rng, &mut rep);
    }
    rep
}

fn section2_connected(m: &Matroid, name: &str, budget: Budget, rng: &mut ChaCha8Rng, rep: &mut PropertyReport) {
    let n = m.n();
    let e = full(n);
    let lam = |x: u32| lambda_bits(m, x);

    // cosegment: X exactly 3-separating, A ⊆ cl*(X) - X with |A| >= 3 is a cosegment
    for x in 1..e {
        if lam(x) != 2 {
            continue;
        }
        let xs = ElementSet::from_bits(n, x);
        let b = m.coclosure(xs) - xs;
        if b.len() >= 3 {
            rep.check("cosegment", is_cosegment(m, b), || format!("{name}: X = {}", show(m, x)));
        }
    }

    // flowers1: exact 3-partitions have equal pairwise local connectivity
    for p in partitions(n, 3, budget, rng) {
        if p.iter().all(|&s| s != 0 && lam(s) == 2) {
            let sets: Vec<ElementSet> = p.iter().map(|&s| ElementSet::from_bits(n, s)).collect();
            let a = local_connectivity(m, sets[0], sets[1]);
            let b = local_connectivity(m, sets[0], sets[2]);
            let c = local_connectivity(m, sets[1], sets[2]);
            rep.check("flowers1", a == b && b == c, || {
                format!("{name}: ({}, {}, {})", show(m, p[0]), show(m, p[1]), show(m, p[2]))
            });
        }
    }

    for x in 0..n {
        let parts = vertical_3_partitions(m, x).unwrap_or_default();
        let si_ok = si_of_contraction(m, x).is_ok_and(|s| is_3_connected(&s.matroid));

        // contr2 and its converse
        rep.check("contr2", si_ok || !parts.is_empty(), || format!("{name}: x = {}", m.label(x)));
        if !parts.is_empty() {
            rep.check("contr2_converse", !si_ok, || format!("{name}: x = {}", m.label(x)));
        }

        match bixby_check(m, x) {
            Ok(_) => rep.check("bixby", true, String::new),
            Err(err) => rep.check("bixby", false, || format!("{name}: x = {}: {err}", m.label(x))),
        }

        // vertcl over both orientations
        for p in parts.iter().flat_map(|p| [*p, p.flipped()]) {
            let t = p.x1 & m.closure(p.x2.with(p.x));
            let subsets: Vec<ElementSet> = if t.len() <= 6 {
                t.subsets().filter(|s| !s.is_empty()).collect()
            } else {
                (0..budget.trials).map(|_| ElementSet::from_bits(n, rng.gen::<u32>() & t.bits())).collect()
            };
            for a in subsets {
                let ok = is_vertical_partition(m, p.x1 - a, (p.x2 | a).without(p.x), p.x, 3);
                rep.check("vertcl", ok, || format!("{name}: {} with A = {}", p.display(m), a.display_with(m.labels())));
            }
        }
    }
}

/// Parallel-connection identities on small pairs glued at every basepoint choice.
pub fn prop6_suite() -> PropertyReport {
    let mut rep = PropertyReport::default();
    let relabel = |m: Matroid, prefix: &str| {
        let labels = (0..m.n()).map(|i| format!("{prefix}{i}")).collect();
        m.with_labels(labels).expect("fresh labels")
    };
    let pieces = [uniform(2, 4).unwrap(), complete(4).unwrap(), uniform(1, 3).unwrap(), uniform(2, 3).unwrap(), wheel(3).unwrap()];
    for (i, a) in pieces.iter().enumerate() {
        for (j, b) in pieces.iter().enumerate() {
            let m1 = relabel(a.clone(), "s");
            let m2 = relabel(b.clone(), "t");
            let (p1, p2) = (m1.n() - 1, 0);
            let Ok(p) = parallel_connection(&m1, &m2, p1, p2) else { continue };
            for e in 0..p1 {
                for contract in [false, true] {
                    let lhs = if contract { p.contract_element(e) } else { p.delete_element(e) };
                    let m1e = if contract { m1.contract_element(e) } else { m1.delete_element(e) };
                    let ok = match (lhs, m1e) {
                        (Ok(lhs), Ok(m1e)) => parallel_connection(&m1e, &m2, p1 - 1, p2)
                            .is_ok_and(|rhs| same_by_labels(&lhs, &rhs)),
                        _ => false,
                    };
                    rep.check("prop6", ok, || {
                        format!("pieces {i},{j}: {} {}", if contract { "contract" } else { "delete" }, m1.label(e))
                    });
                }
            }
        }
    }
    rep
}

/// Equal as matroids once elements are matched by label.
pub fn same_by_labels(a: &Matroid, b: &Matroid) -> bool {
    if a.n() != b.n() {
        return false;
    }
    let mut perm = Vec::with_capacity(a.n());
    for l in a.labels() {
        match b.index_of(l) {
            Ok(i) => perm.push(i),
            Err(_) => return false,
        }
    }
    a.permute(&perm).same_structure(b)
}

/// 2-sum decompose/recompose on every exact 2-separation of the non-3-connected
/// reductions `si(M / x)` and `co(M \ x)`, and on 2-sums built from the pieces.
pub fn two_sum_suite(m: &Matroid, name: &str, limit: usize) -> PropertyReport {
    let mut rep = PropertyReport::default();
    let mut targets = Vec::new();
    for x in 0..m.n() {
        if let Ok(s) = si_of_contraction(m, x) {
            targets.push((format!("si({name}/{})", m.label(x)), s.matroid));
        }
    }
    for (tname, t) in targets {
        let seps: Vec<_> = small_separations(&t)
            .into_iter()
            .filter(|s| lambda(&t, s.x) == 1 && s.x.len() >= 2 && t.n() - s.x.len() >= 2)
            .take(limit)
            .collect();
        for sep in seps {
            let ok = decompose_2_separation(&t, sep.x).is_ok();
            rep.check("two_sum_round_trip", ok, || format!("{tname}: X = {}", sep.x.display_with(t.labels())));
        }
    }
    if m.n() >= 3 && m.n() <= 8 {
        let k4 = complete(4).unwrap();
        if let Ok(s) = two_sum(m, &k4, 0, 0) {
            let x1 = ElementSet::from_indices(s.n(), 0..m.n() - 1);
            rep.check("two_sum_round_trip", decompose_2_separation(&s, x1).is_ok(), || format!("{name} ⊕2 M(K4)"));
        }
    }
    rep
}

/// prop5 and smallside: for every vertical 3-partition `(X1, X2, x)` with
/// an `N`-minor in `M / x`, the witness meets one side in at most one
/// element, and contracting any `e ∈ X1 - cl(X2)` from that small side keeps
/// an `N`-minor.
pub fn minors_suite(m: &Matroid, name: &str, targets: &[(String, Matroid)]) -> PropertyReport {
    let mut rep = PropertyReport::default();
    if m.n() < 4 || !is_3_connected(m) {
        return rep;
    }
    for (nname, nm) in targets {
        if nm.n() > m.n() || !is_3_connected(nm) {
            continue;
        }
        let mut oracle = GenericOracle::new(m.clone(), nm.clone());
        for x in 0..m.n() {
            let parts = vertical_3_partitions(m, x).unwrap_or_default();
            if parts.is_empty() {
                continue;
            }
            let w = match oracle.query(m.empty(), m.set(&[x])) {
                Ok(Some(w)) => w,
                Ok(None) => continue,
                Err(err) => {
                    rep.check("prop5", false, || format!("{name}/{}: {err}", m.label(x)));
                    continue;
                }
            };
            rep.check("witness_replay", w.replay(m, nm), || format!("{name}/{}, N = {nname}", m.label(x)));
            let en = m.ground() - w.delete - w.contract;
            for p in parts.iter().flat_map(|p| [*p, p.flipped()]) {
                let small = (en & p.x1).len() <= 1;
                rep.check("prop5", small || (en & p.x2).len() <= 1, || format!("{name}, N = {nname}: {}", p.display(m)));
                if !small {
                    continue;
                }
                for e in (p.x1 - m.closure(p.x2)).iter() {
                    let ok = oracle.query(m.empty(), m.set(&[x, e])).is_ok_and(|r| r.is_some());
                    rep.check("smallside", ok, || format!("{name}, N = {nname}: {} at e = {}", p.display(m), m.label(e)));
                }
            }
        }
    }
    rep
}

/// prop9, prop10, crocspore and prop4 over every segment-cosegment pair.
pub fn section3(m: &Matroid, name: &str) -> PropertyReport {
    let mut rep = PropertyReport::default();
    if !is_3_connected(m) {
        return rep;
    }
    for pair in seg_coseg_pairs(m) {
        let label = || format!("{name}: L = {}, L* = {}", pair.l.display_with(m.labels()), pair.lstar.display_with(m.labels()));
        rep.check("pair_valid", pair.is_valid(m), label);
        rep.check("prop9", is_cosegment(m, pair.lstar), label);
        let cl = m.closure(pair.l);
        if cl == m.ground() {
            // M / E is the empty matroid, 3-connected by convention.
            rep.check("prop10", true, label);
            continue;
        }
        let mcl = m.contract(cl).expect("cl(L) ⊂ E");
        let mcl_3c = is_3_connected(&mcl);
        rep.check("prop10", mcl_3c, label);
        if m.n() - cl.len() < 4 {
            continue;
        }
        for &(xi, yi) in &pair.pairs {
            let mx = m.contract_element(xi).expect("xi ∈ E");
            let shift = |e: usize| e - usize::from(e > xi);
            let want = Spore {
                p: ElementSet::from_indices(m.n() - 1, cl.without(xi).iter().map(shift)),
                s: shift(yi),
            };
            rep.check("crocspore", is_3conn_up_to_unique_spore(&mx) == Some(want), || {
                format!("{} at x = {}", label(), m.label(xi))
            });
            if mcl_3c {
                let ok = co_si_of_contraction(m, xi).is_ok_and(|c| is_isomorphic(&c.matroid, &mcl).is_some());
                rep.check("prop4", ok, || format!("{} at x = {}", label(), m.label(xi)));
            }
        }
    }
    rep
}

/// Partition statements over every cocircuit (and the whole ground set as `A`).
pub fn section4(m: &Matroid, name: &str) -> PropertyReport {
    let mut rep = PropertyReport::default();
    if m.n() < 4 || !is_3_connected(m) {
        return rep;
    }
    let mut index = VerticalIndex::new(m);
    let all: Vec<VerticalPartition> = (0..m.n()).flat_map(|x| index.ordered(x).to_vec()).collect();
    if all.is_empty() {
        return rep;
    }
    let si_bad: Vec<bool> =
        (0..m.n()).map(|x| !si_of_contraction(m, x).is_ok_and(|s| is_3_connected(&s.matroid))).collect();
    let mut sets: Vec<(ElementSet, bool)> = m.cocircuits().into_iter().map(|c| (c, true)).collect();
    sets.push((m.ground(), false));

    for (a, is_cocircuit) in sets {
        let aname = || format!("{name}, A = {}", a.display_with(m.labels()));
        if is_cocircuit {
            for p in all.iter().filter(|p| a.contains(p.x)) {
                let ok = !(a & (p.x1 - m.closure(p.x2))).is_empty();
                rep.check("biglem", ok, || format!("{}: {}", aname(), p.display(m)));
            }
        }
        // minimality lemma via the constructive search
        for seed in all.iter().filter(|p| a.contains(p.x)) {
            let z = seed.x1 - m.closure(seed.x2);
            let ok = find_minimal_partition(m, a, seed)
                .is_ok_and(|q| minimal_with_index(&mut index, a, &q) && q.x1.is_subset(z) && (a & z.with(seed.x)).contains(q.x));
            rep.check("minimal_lemma", ok, || format!("{}: seed {}", aname(), seed.display(m)));
        }
        let minimal: Vec<VerticalPartition> =
            all.iter().filter(|p| minimal_with_index(&mut index, a, p)).copied().collect();
        for p in &minimal {
            rep.check("prop11", m.is_flat(p.x2.with(p.x)), || format!("{}: {}", aname(), p.display(m)));
            let hyp_bigstep = is_cocircuit && (a & p.x1).iter().all(|x0| si_bad[x0]);
            for q in all.iter().filter(|q| a.contains(q.x) && p.x1.contains(q.x) && q.x1.contains(p.x)) {
                crossetc(m, p, q, &mut rep, &aname);
                if hyp_bigstep {
                    rep.check("bigstep", (p.x1 & q.x2).len() == 1, || {
                        format!("{}: {} vs {}", aname(), p.display(m), q.display(m))
                    });
                }
            }
        }
    }
    rep
}

fn crossetc(m: &Matroid, p: &VerticalPartition, q: &VerticalPartition, rep: &mut PropertyReport, aname: &dyn Fn() -> String) {
    let (x1, x2, x) = (p.x1, p.x2, p.x);
    let (y1, y2, y) = (q.x1, q.x2, q.x);
    let detail = || format!("{}: X = {}, Y = {}", aname(), p.display(m), q.display(m));
    let sep = |s: ElementSet, k: usize| lambda(m, s) < k;
    let not_in_cl = |s: ElementSet, t: ElementSet| !s.is_subset(m.closure(t));

    let i = [x1 & y1, x1 & y2, x2 & y1, x2 & y2].iter().all(|s| !s.is_empty());
    rep.check("crossetc_i", i, detail);
    let ii = [x1 & y2, (x1 & y2).with(y), x2 & y1, (x2 & y1).with(x), x2 & y2].iter().all(|&s| sep(s, 3));
    rep.check("crossetc_ii", ii, detail);
    let mid = (x1 & y1).with(x).with(y);
    rep.check("crossetc_iii", sep(mid, 4), detail);
    let iv = not_in_cl(x1 & y1, x2) && not_in_cl(x1 & y2, x2) && not_in_cl(x1 & y1, y2) && not_in_cl(x1 & y2, y1);
    rep.check("crossetc_iv", iv, detail);
    rep.check("crossetc_v", m.rank_of((x1 & y2).with(y)) == 2, detail);
    if sep(mid, 3) {
        rep.check("crossetc_vi", m.rank_of(mid) == 2, detail);
    }
}

/// Which groups of suites to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sections {
    pub s2: bool,
    pub s3: bool,
    pub s4: bool,
}

impl Sections {
    pub const ALL: Sections = Sections { s2: true, s3: true, s4: true };
}

/// Runs the selected suites over every catalogue entry in parallel.
pub fn run_catalogue(
    cat: &Catalogue,
    targets: &[(String, Matroid)],
    budget: Budget,
    seed: u64,
    sections: Sections,
) -> PropertyReport {
    let mut rep = cat
        .entries
        .par_iter()
        .enumerate()
        .map(|(i, entry)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let m = &entry.matroid;
            let mut rep = PropertyReport::default();
            if sections.s2 {
                rep.merge(section2(m, &entry.name, budget, &mut rng));
                rep.merge(two_sum_suite(m, &entry.name, 4));
                rep.merge(minors_suite(m, &entry.name, targets));
            }
            if sections.s3 {
                rep.merge(section3(m, &entry.name));
            }
            if sections.s4 {
                rep.merge(section4(m, &entry.name));
            }
            rep
        })
        .reduce(PropertyReport::default, |mut a, b| {
            a.merge(b);
            a
        });
    if sections.s2 {
        rep.merge(prop6_suite());
    }
    rep
}

/// Random matroids for the randomized tier: restrictions and contractions
/// of catalogue members down to `n` elements.
pub fn random_minor_of(m: &Matroid, n: usize, rng: &mut ChaCha8Rng) -> Option<Matroid> {
    if n > m.n() {
        return None;
    }
    let mut cur = m.clone();
    while cur.n() > n {
        let e = rng.gen_range(0..cur.n());
        cur = if rng.gen_bool(0.5) { cur.delete_element(e).ok()? } else { cur.contract_element(e).ok()? };
    }
    Some(cur)
}
