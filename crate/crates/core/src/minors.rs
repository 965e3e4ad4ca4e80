//! Minor testing with replayable witnesses.
//!
//! The generic engine walks deletions and contractions, deleting only
//! non-coloops and contracting only non-loops so every step moves towards
//! the target's rank and corank. Minors already shown to have no `N`-minor
//! are remembered by isomorphism class: a bucket keyed by [`IsoKey`] holds
//! representatives, and a new minor is pruned when it is isomorphic to one.
//!
//! The graph engine searches for disjoint connected branch sets. For a
//! 3-connected target `H`, `M(G)` has an `M(H)`-minor exactly when `G` has
//! an `H`-minor: a graph `G'` with `M(G') ≅ M(H)` and no isolated vertices
//! is isomorphic to `H` by Whitney's 2-isomorphism theorem.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Map, Value};

use crate::connectivity::is_3_connected;
use crate::constructions::{graphic, Graph};
use crate::error::{Error, Result};
use crate::iso::{element_invariants, find_isomorphism, iso_key_from, verify_isomorphism, ElementInvariant, IsoKey};
use crate::matroid::Matroid;
use crate::set::ElementSet;

pub const GENERIC_CAP: usize = 14;
pub const GRAPH_VERTEX_CAP: usize = 12;

/// `M \ delete / contract ≅ N`, with `iso[i] = (e, f)` sending element `e`
/// of `M` to element `f` of `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorWitness {
    pub delete: ElementSet,
    pub contract: ElementSet,
    pub iso: Vec<(usize, usize)>,
}

impl MinorWitness {
    /// Re-derives the minor and checks the bijection is an isomorphism.
    pub fn replay(&self, m: &Matroid, n: &Matroid) -> bool {
        let Ok(minor) = m.minor(self.delete, self.contract) else {
            return false;
        };
        let survivors = (m.ground() - self.delete - self.contract).to_vec();
        if survivors.len() != n.n() || self.iso.len() != n.n() {
            return false;
        }
        let mut perm = vec![usize::MAX; n.n()];
        for &(e, f) in &self.iso {
            let Some(pos) = survivors.iter().position(|&s| s == e) else {
                return false;
            };
            perm[pos] = f;
        }
        verify_isomorphism(&minor, n, &perm)
    }

    pub fn to_json(&self, m: &Matroid, n: &Matroid) -> Value {
        let labels = |s: ElementSet| s.iter().map(|e| m.label(e).to_string()).collect::<Vec<_>>();
        let iso: Map<String, Value> = self
            .iso
            .iter()
            .map(|&(e, f)| (m.label(e).to_string(), Value::String(n.label(f).to_string())))
            .collect();
        json!({ "delete": labels(self.delete), "contract": labels(self.contract), "iso": iso })
    }

    pub fn from_json(value: &Value, m: &Matroid, n: &Matroid) -> Result<MinorWitness> {
        let set = |key: &str| -> Result<ElementSet> {
            let arr = value[key].as_array().ok_or_else(|| Error::Parse(format!("witness needs a {key:?} list")))?;
            let mut s = m.empty();
            for v in arr {
                let l = v.as_str().ok_or_else(|| Error::Parse(format!("{key:?} entries must be labels")))?;
                s.insert(m.index_of(l)?);
            }
            Ok(s)
        };
        let obj = value["iso"].as_object().ok_or_else(|| Error::Parse("witness needs an \"iso\" map".into()))?;
        let mut iso = Vec::new();
        for (k, v) in obj {
            let f = v.as_str().ok_or_else(|| Error::Parse("iso values must be labels".into()))?;
            iso.push((m.index_of(k)?, n.index_of(f)?));
        }
        iso.sort();
        Ok(MinorWitness { delete: set("delete")?, contract: set("contract")?, iso })
    }
}

/// Answers "does `host \ D / C` have an `N`-minor?" for a fixed host and target.
pub trait MinorOracle {
    fn host(&self) -> &Matroid;
    fn target(&self) -> &Matroid;
    /// Witnesses are expressed in the host's elements and include `D` and `C`.
    fn query(&mut self, delete: ElementSet, contract: ElementSet) -> Result<Option<MinorWitness>>;

    fn has_minor_after_contracting(&mut self, c: ElementSet) -> Result<Option<MinorWitness>> {
        let empty = self.host().empty();
        self.query(empty, c)
    }
}

/// Generic search with a failure memo shared across all queries on the same target.
pub struct GenericOracle {
    host: Matroid,
    target: Matroid,
    target_inv: Vec<ElementInvariant>,
    target_key: IsoKey,
    failed: HashMap<IsoKey, Vec<Matroid>>,
    cap: usize,
}

impl GenericOracle {
    pub fn new(host: Matroid, target: Matroid) -> GenericOracle {
        GenericOracle::with_cap(host, target, GENERIC_CAP)
    }

    pub fn with_cap(host: Matroid, target: Matroid, cap: usize) -> GenericOracle {
        let target_inv = element_invariants(&target);
        let target_key = iso_key_from(&target, &target_inv);
        GenericOracle { host, target, target_inv, target_key, failed: HashMap::new(), cap }
    }

    pub fn memo_size(&self) -> usize {
        self.failed.values().map(Vec::len).sum()
    }

    /// Searches `m` directly; witness indices refer to `m`.
    pub fn search(&mut self, m: &Matroid) -> Result<Option<MinorWitness>> {
        if m.n() > self.cap {
            return Err(Error::CapExceeded { what: "minor search ground set", size: m.n(), cap: self.cap });
        }
        let orig: Vec<usize> = (0..m.n()).collect();
        let mut path = Path { delete: Vec::new(), contract: Vec::new() };
        Ok(self.walk(m, &orig, &mut path).map(|iso| MinorWitness {
            delete: ElementSet::from_indices(m.n(), path.delete.iter().copied()),
            contract: ElementSet::from_indices(m.n(), path.contract.iter().copied()),
            iso,
        }))
    }

    fn walk(&mut self, m: &Matroid, orig: &[usize], path: &mut Path) -> Option<Vec<(usize, usize)>> {
        let (rn, cn) = (self.target.rank(), self.target.corank());
        if m.rank() < rn || m.corank() < cn {
            return None;
        }
        let inv = element_invariants(m);
        if m.n() == self.target.n() {
            let perm = find_isomorphism(m, &inv, &self.target, &self.target_inv)?;
            return Some(orig.iter().copied().zip(perm).collect());
        }
        let key = iso_key_from(m, &inv);
        if key == self.target_key {
            unreachable!("sizes differ");
        }
        if let Some(bucket) = self.failed.get(&key) {
            for rep in bucket {
                if rep.same_structure(m) || find_isomorphism(rep, &element_invariants(rep), m, &inv).is_some() {
                    return None;
                }
            }
        }
        let n = m.n();
        if m.rank() > rn {
            for e in 0..n {
                if m.is_loop(e) {
                    continue;
                }
                let child = m.contract_element(e).expect("n > |E(N)| >= 1");
                let child_orig = without(orig, e);
                path.contract.push(orig[e]);
                if let Some(found) = self.walk(&child, &child_orig, path) {
                    return Some(found);
                }
                path.contract.pop();
            }
        }
        if m.corank() > cn {
            for e in 0..n {
                if m.is_coloop(e) {
                    continue;
                }
                let child = m.delete_element(e).expect("n > |E(N)| >= 1");
                let child_orig = without(orig, e);
                path.delete.push(orig[e]);
                if let Some(found) = self.walk(&child, &child_orig, path) {
                    return Some(found);
                }
                path.delete.pop();
            }
        }
        self.failed.entry(key).or_default().push(m.clone());
        None
    }
}

struct Path {
    delete: Vec<usize>,
    contract: Vec<usize>,
}

fn without(orig: &[usize], e: usize) -> Vec<usize> {
    orig.iter().enumerate().filter(|&(i, _)| i != e).map(|(_, &v)| v).collect()
}

/// Lifts a witness on `host \ D / C` back to host indices.
fn lift(w: MinorWitness, host_n: usize, delete: ElementSet, contract: ElementSet) -> MinorWitness {
    let survivors = (ElementSet::full(host_n) - delete - contract).to_vec();
    MinorWitness {
        delete: delete | ElementSet::from_indices(host_n, w.delete.iter().map(|i| survivors[i])),
        contract: contract | ElementSet::from_indices(host_n, w.contract.iter().map(|i| survivors[i])),
        iso: w.iso.into_iter().map(|(e, f)| (survivors[e], f)).collect(),
    }
}

impl MinorOracle for GenericOracle {
    fn host(&self) -> &Matroid {
        &self.host
    }

    fn target(&self) -> &Matroid {
        &self.target
    }

    fn query(&mut self, delete: ElementSet, contract: ElementSet) -> Result<Option<MinorWitness>> {
        let minor = self.host.minor(delete, contract)?;
        let found = self.search(&minor)?;
        let n = self.host.n();
        Ok(found.map(|w| lift(w, n, delete, contract)))
    }
}

/// `Some(witness)` iff `M` has a minor isomorphic to `N`.
pub fn has_minor(m: &Matroid, n: &Matroid) -> Result<Option<MinorWitness>> {
    GenericOracle::new(m.clone(), n.clone()).search(m)
}

/// Reference search without memoization or pruning beyond rank bounds:
/// every independent `C` of size `r(M) - r(N)` and every `D` of the right
/// size in the rest.
pub fn naive_has_minor(m: &Matroid, n: &Matroid) -> Option<MinorWitness> {
    if m.rank() < n.rank() || m.corank() < n.corank() {
        return None;
    }
    let c_size = m.rank() - n.rank();
    let d_size = m.corank() - n.corank();
    for c in m.ground().subsets_of_size(c_size) {
        if !m.is_independent(c) {
            continue;
        }
        for d in (m.ground() - c).subsets_of_size(d_size) {
            let minor = m.minor(d, c).ok()?;
            if minor.rank() != n.rank() {
                continue;
            }
            let inv1 = element_invariants(&minor);
            let inv2 = element_invariants(n);
            if let Some(perm) = find_isomorphism(&minor, &inv1, n, &inv2) {
                let survivors = (m.ground() - c - d).to_vec();
                return Some(MinorWitness { delete: d, contract: c, iso: survivors.into_iter().zip(perm).collect() });
            }
        }
    }
    None
}

/// Branch sets of an `H`-minor: `branch[v]` is the vertex set of `G` for vertex `v` of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMinorWitness {
    pub branch: Vec<u32>,
}

impl GraphMinorWitness {
    pub fn verify(&self, g: &Graph, h: &Graph) -> bool {
        if self.branch.len() != h.vertex_count() {
            return false;
        }
        let adj = g.adjacency();
        let mut used = 0u32;
        for &b in &self.branch {
            if b == 0 || used & b != 0 || !connected_in(&adj, b) {
                return false;
            }
            used |= b;
        }
        h.edges()
            .iter()
            .all(|e| e.u == e.v || blocks_adjacent(&adj, self.branch[e.u], self.branch[e.v]))
    }

    /// The matroid witness: contract spanning trees of the branch sets, keep
    /// one edge of `G` per edge of `H`, delete everything else.
    pub fn to_matroid_witness(&self, g: &Graph, h: &Graph) -> Option<MinorWitness> {
        let edges = g.edges();
        let mut contract = 0u32;
        for &b in &self.branch {
            // BFS spanning tree inside the block
            let start = b.trailing_zeros() as usize;
            let mut reached = 1u32 << start;
            let mut frontier = vec![start];
            while let Some(v) = frontier.pop() {
                for (i, e) in edges.iter().enumerate() {
                    let w = if e.u == v { e.v } else if e.v == v { e.u } else { continue };
                    if b >> w & 1 == 1 && reached >> w & 1 == 0 {
                        reached |= 1 << w;
                        contract |= 1 << i;
                        frontier.push(w);
                    }
                }
            }
        }
        let mut iso = Vec::new();
        let mut kept = 0u32;
        for (f, he) in h.edges().iter().enumerate() {
            let (bu, bv) = (self.branch[he.u], self.branch[he.v]);
            let i = edges.iter().enumerate().position(|(i, e)| {
                kept >> i & 1 == 0 && (bu >> e.u & 1 == 1 && bv >> e.v & 1 == 1 || bu >> e.v & 1 == 1 && bv >> e.u & 1 == 1)
            })?;
            kept |= 1 << i;
            iso.push((i, f));
        }
        let n = g.edge_count();
        let all = ElementSet::full(n).bits();
        iso.sort();
        Some(MinorWitness {
            delete: ElementSet::from_bits(n, all & !contract & !kept),
            contract: ElementSet::from_bits(n, contract),
            iso,
        })
    }
}

fn connected_in(adj: &[u32], block: u32) -> bool {
    let start = block.trailing_zeros();
    let mut reached = 1u32 << start;
    let mut frontier = reached;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & block & !reached;
        reached |= new;
        frontier |= new;
    }
    reached == block
}

fn blocks_adjacent(adj: &[u32], a: u32, b: u32) -> bool {
    let mut rest = a;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if adj[v] & b != 0 {
            return true;
        }
    }
    false
}

/// Searches for an `H`-minor of `G` via branch sets.
pub fn graph_has_minor(g: &Graph, h: &Graph) -> Result<Option<GraphMinorWitness>> {
    graph_has_minor_capped(g, h, GRAPH_VERTEX_CAP)
}

pub fn graph_has_minor_capped(g: &Graph, h: &Graph, cap: usize) -> Result<Option<GraphMinorWitness>> {
    let nv = g.vertex_count();
    if nv > cap {
        return Err(Error::CapExceeded { what: "graph minor search vertex count", size: nv, cap });
    }
    let k = h.vertex_count();
    if k == 0 {
        return Ok(Some(GraphMinorWitness { branch: Vec::new() }));
    }
    if k > nv {
        return Ok(None);
    }
    let adj = g.adjacency();
    let mut h_adj = vec![0u32; k];
    for e in h.edges() {
        if e.u != e.v {
            h_adj[e.u] |= 1 << e.v;
            h_adj[e.v] |= 1 << e.u;
        }
    }
    let h_edges = h_adj.iter().map(|a| a.count_ones()).sum::<u32>() / 2;
    let g_edges = adj.iter().map(|a| a.count_ones()).sum::<u32>() / 2;
    if h_edges > g_edges {
        return Ok(None);
    }
    let mut search = BranchSearch { adj: &adj, h_adj: &h_adj, k, blocks: vec![0; k], found: None };
    search.assign(0, 0, nv);
    Ok(search.found)
}

struct BranchSearch<'a> {
    adj: &'a [u32],
    h_adj: &'a [u32],
    k: usize,
    blocks: Vec<u32>,
    found: Option<GraphMinorWitness>,
}

impl BranchSearch<'_> {
    /// Restricted-growth assignment of vertex `v` onwards; `open` blocks exist.
    fn assign(&mut self, v: usize, open: usize, nv: usize) -> bool {
        if nv - v < self.k - open {
            return false;
        }
        if v == nv {
            return self.check();
        }
        // leave v unused
        if self.assign(v + 1, open, nv) {
            return true;
        }
        for b in 0..open {
            self.blocks[b] |= 1 << v;
            let hit = self.assign(v + 1, open, nv);
            self.blocks[b] &= !(1 << v);
            if hit {
                return true;
            }
        }
        if open < self.k {
            self.blocks[open] = 1 << v;
            let hit = self.assign(v + 1, open + 1, nv);
            self.blocks[open] = 0;
            if hit {
                return true;
            }
        }
        false
    }

    fn check(&mut self) -> bool {
        if !self.blocks.iter().all(|&b| connected_in(self.adj, b)) {
            return false;
        }
        let k = self.k;
        let mut quotient = vec![0u32; k];
        for i in 0..k {
            for j in (i + 1)..k {
                if blocks_adjacent(self.adj, self.blocks[i], self.blocks[j]) {
                    quotient[i] |= 1 << j;
                    quotient[j] |= 1 << i;
                }
            }
        }
        let mut map = vec![usize::MAX; k];
        if embed(self.h_adj, &quotient, &mut map, 0, 0) {
            self.found = Some(GraphMinorWitness { branch: map.iter().map(|&b| self.blocks[b]).collect() });
            return true;
        }
        false
    }
}

/// Injective map of `H`'s vertices onto quotient blocks preserving adjacency.
fn embed(h_adj: &[u32], q: &[u32], map: &mut [usize], v: usize, used: u32) -> bool {
    if v == h_adj.len() {
        return true;
    }
    for b in 0..q.len() {
        if used >> b & 1 == 1 {
            continue;
        }
        let ok = (0..v).all(|u| h_adj[v] >> u & 1 == 0 || q[b] >> map[u] & 1 == 1);
        if ok {
            map[v] = b;
            if embed(h_adj, q, map, v + 1, used | 1 << b) {
                return true;
            }
        }
    }
    map[v] = usize::MAX;
    false
}

/// Graphic fast path: host `M(G)`, target `M(H)` with `H` 3-connected.
pub struct GraphOracle {
    graph: Graph,
    host: Matroid,
    h: Graph,
    target: Matroid,
    cap: usize,
}

impl GraphOracle {
    pub fn new(graph: Graph, h: Graph) -> Result<GraphOracle> {
        let host = graphic(&graph)?;
        let target = graphic(&h)?;
        if !is_3_connected(&target) || !h.is_simple_3_connected() {
            return Err(Error::HypothesisViolated("graph fast path needs a 3-connected simple target".into()));
        }
        Ok(GraphOracle { graph, host, h, target, cap: GRAPH_VERTEX_CAP })
    }

    pub fn with_cap(graph: Graph, h: Graph, cap: usize) -> Result<GraphOracle> {
        GraphOracle::new(graph, h).map(|o| GraphOracle { cap, ..o })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Graph after deleting `D` and contracting `C`, plus host indices of its edges.
    pub fn reduced_graph(&self, delete: ElementSet, contract: ElementSet) -> (Graph, Vec<usize>) {
        let (g, _) = self.graph.contract_edges(contract.bits());
        let surviving_after_c: Vec<usize> = (self.host.ground() - contract).to_vec();
        let mut local = 0u32;
        for (i, e) in surviving_after_c.iter().enumerate() {
            if delete.contains(*e) {
                local |= 1 << i;
            }
        }
        let g = g.delete_edges(local);
        let survivors = (self.host.ground() - delete - contract).to_vec();
        (g, survivors)
    }
}

impl MinorOracle for GraphOracle {
    fn host(&self) -> &Matroid {
        &self.host
    }

    fn target(&self) -> &Matroid {
        &self.target
    }

    fn query(&mut self, delete: ElementSet, contract: ElementSet) -> Result<Option<MinorWitness>> {
        if !delete.is_disjoint(contract) {
            return Err(Error::BadParams("delete and contract sets overlap".into()));
        }
        let (g, survivors) = self.reduced_graph(delete, contract);
        let Some(bw) = graph_has_minor_capped(&g, &self.h, self.cap)? else {
            return Ok(None);
        };
        let local = bw
            .to_matroid_witness(&g, &self.h)
            .ok_or_else(|| Error::Invariant("branch sets do not realize the target".into()))?;
        let n = self.host.n();
        let w = MinorWitness {
            delete: delete | ElementSet::from_indices(n, local.delete.iter().map(|i| survivors[i])),
            contract: contract | ElementSet::from_indices(n, local.contract.iter().map(|i| survivors[i])),
            iso: local.iso.into_iter().map(|(e, f)| (survivors[e], f)).collect(),
        };
        Ok(Some(w))
    }
}

/// Histogram of memo buckets, for diagnostics.
pub fn memo_histogram(oracle: &GenericOracle) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for bucket in oracle.failed.values() {
        *out.entry(bucket.len()).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, k5_minus_e, uniform, wheel};

    #[test]
    fn naive_rejects_larger_corank() {
        // same size, corank 2 < 3
        let m = uniform(4, 6).unwrap();
        let n = uniform(3, 6).unwrap();
        assert!(naive_has_minor(&m, &n).is_none());
        assert!(has_minor(&m, &n).unwrap().is_none());
    }

    #[test]
    fn identity_minor() {
        let m = k5_minus_e();
        let w = has_minor(&m, &m).unwrap().unwrap();
        assert!(w.delete.is_empty() && w.contract.is_empty());
        assert!(w.replay(&m, &m));
    }

    #[test]
    fn rank_blocks_minor() {
        assert!(has_minor(&uniform(2, 4).unwrap(), &uniform(3, 4).unwrap()).unwrap().is_none());
    }

    #[test]
    fn k4_in_contractions_of_k5e_dual() {
        let m = k5_minus_e().dual();
        let k4 = complete(4).unwrap();
        for l in ["a", "b", "c", "d"] {
            let x = m.index_of(l).unwrap();
            let mx = m.contract_element(x).unwrap();
            let w = has_minor(&mx, &k4).unwrap().unwrap();
            assert!(w.replay(&mx, &k4));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let big = uniform(2, 15).unwrap();
        assert!(matches!(has_minor(&big, &uniform(2, 4).unwrap()), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn agrees_with_naive_search() {
        let targets = [uniform(2, 4).unwrap(), complete(4).unwrap(), uniform(1, 3).unwrap()];
        let hosts = [wheel(4).unwrap(), k5_minus_e(), uniform(3, 7).unwrap(), k5_minus_e().dual()];
        for h in &hosts {
            for t in &targets {
                let fast = has_minor(h, t).unwrap();
                let slow = naive_has_minor(h, t);
                assert_eq!(fast.is_some(), slow.is_some());
                if let Some(w) = fast {
                    assert!(w.replay(h, t));
                }
                if let Some(w) = slow {
                    assert!(w.replay(h, t));
                }
            }
        }
    }

    #[test]
    fn witness_json_round_trip() {
        let m = k5_minus_e().dual();
        let k4 = complete(4).unwrap();
        let mx = m.contract_element(0).unwrap();
        let w = has_minor(&mx, &k4).unwrap().unwrap();
        let j = w.to_json(&mx, &k4);
        assert_eq!(MinorWitness::from_json(&j, &mx, &k4).unwrap(), w);
    }

    #[test]
    fn graph_minors() {
        let k6 = Graph::complete(6);
        let w = graph_has_minor(&k6, &Graph::complete(5)).unwrap().unwrap();
        assert!(w.verify(&k6, &Graph::complete(5)));
        assert!(graph_has_minor(&Graph::wheel(5), &Graph::complete(5)).unwrap().is_none());
        assert!(graph_has_minor(&Graph::wheel(5), &Graph::complete(4)).unwrap().is_some());
        let too_big = Graph::wheel(12);
        assert!(matches!(graph_has_minor(&too_big, &Graph::complete(4)), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn graph_oracle_witness_replays() {
        let g = Graph::wheel(6);
        let mut oracle = GraphOracle::new(g, Graph::complete(4)).unwrap();
        let host = oracle.host().clone();
        let target = oracle.target().clone();
        let w = oracle.query(host.empty(), host.set(&[6])).unwrap().unwrap();
        assert!(w.contract.contains(6));
        assert!(w.replay(&host, &target));
        let mut generic = GenericOracle::new(host.clone(), target.clone());
        for e in 0..host.n() {
            let c = host.set(&[e]);
            let fast = oracle.query(host.empty(), c).unwrap().is_some();
            let slow = generic.query(host.empty(), c).unwrap().is_some();
            assert_eq!(fast, slow, "contracting {}", host.label(e));
        }
    }
}
