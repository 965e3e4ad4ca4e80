//! Instance catalogue for sweeps: small uniform matroids, the Θ double and
//! its dual, wheels, and every 3-connected simple graph within a size bound.

use std::collections::HashSet;

use serde::Serialize;

use crate::connectivity::is_3_connected;
use crate::constructions::{graphic, theta, theta_double, uniform, Graph};
use crate::error::Result;
use crate::iso::{iso_key, is_isomorphic};
use crate::matroid::Matroid;
use crate::set::combinations;

#[derive(Clone, Debug, Serialize)]
pub struct CatalogueSpec {
    pub uniform_max_rank: usize,
    pub uniform_max_n: usize,
    pub graph_max_vertices: usize,
    pub graph_max_edges: usize,
    pub theta_double: bool,
    pub wheels: Vec<usize>,
    /// Θ_3..Θ_5 and `theta_double(4)` with its dual; off for the default sweep.
    pub extra_thetas: bool,
}

impl Default for CatalogueSpec {
    fn default() -> Self {
        CatalogueSpec {
            uniform_max_rank: 4,
            uniform_max_n: 8,
            graph_max_vertices: 7,
            graph_max_edges: 11,
            theta_double: true,
            wheels: vec![3, 4, 5],
            extra_thetas: false,
        }
    }
}

impl CatalogueSpec {
    pub fn empty() -> Self {
        CatalogueSpec {
            uniform_max_rank: 0,
            uniform_max_n: 0,
            graph_max_vertices: 0,
            graph_max_edges: 0,
            theta_double: false,
            wheels: Vec::new(),
            extra_thetas: false,
        }
    }

    /// The default catalogue plus the extra Θ family, used by the property suites.
    pub fn extended() -> Self {
        CatalogueSpec { extra_thetas: true, ..CatalogueSpec::default() }
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub matroid: Matroid,
    pub graph: Option<Graph>,
}

#[derive(Clone, Debug, Default)]
pub struct Catalogue {
    pub entries: Vec<Entry>,
    /// Candidates left out, with the reason.
    pub skipped: Vec<String>,
}

impl Catalogue {
    pub fn build(spec: &CatalogueSpec) -> Result<Catalogue> {
        let mut raw: Vec<Entry> = Vec::new();
        for n in 1..=spec.uniform_max_n {
            for r in 0..=spec.uniform_max_rank.min(n) {
                raw.push(Entry { name: format!("U{r},{n}"), matroid: uniform(r, n)?, graph: None });
            }
        }
        if spec.theta_double {
            let m = theta_double(3)?;
            raw.push(Entry { name: "theta_double(3)*".into(), matroid: m.dual(), graph: None });
            raw.push(Entry { name: "theta_double(3)".into(), matroid: m, graph: None });
        }
        if spec.extra_thetas {
            for r in 3..=5 {
                raw.push(Entry { name: format!("theta({r})"), matroid: theta(r)?, graph: None });
            }
            let m = theta_double(4)?;
            raw.push(Entry { name: "theta_double(4)*".into(), matroid: m.dual(), graph: None });
            raw.push(Entry { name: "theta_double(4)".into(), matroid: m, graph: None });
        }
        for &k in &spec.wheels {
            let g = Graph::wheel(k);
            raw.push(Entry { name: format!("W{k}"), matroid: graphic(&g)?, graph: Some(g) });
        }
        for g in three_connected_graphs(spec.graph_max_vertices, spec.graph_max_edges) {
            let name = format!("G{}v{}e", g.vertex_count(), g.edge_count());
            raw.push(Entry { name, matroid: graphic(&g)?, graph: Some(g) });
        }

        let mut out = Catalogue::default();
        let mut counts = std::collections::HashMap::<String, usize>::new();
        for mut e in raw {
            if !is_3_connected(&e.matroid) {
                out.skipped.push(format!("{}: not 3-connected", e.name));
                continue;
            }
            let key = iso_key(&e.matroid);
            let dup = out
                .entries
                .iter()
                .find(|f| iso_key(&f.matroid) == key && is_isomorphic(&f.matroid, &e.matroid).is_some());
            if let Some(f) = dup {
                out.skipped.push(format!("{}: isomorphic to {}", e.name, f.name));
                continue;
            }
            if e.name.starts_with('G') {
                let c = counts.entry(e.name.clone()).or_insert(0);
                *c += 1;
                e.name = format!("{}#{}", e.name, c);
            }
            out.entries.push(e);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// 3-connected simple graphs with `4..=max_v` vertices and at most `max_e`
/// edges, one per isomorphism class.
pub fn three_connected_graphs(max_v: usize, max_e: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for nv in 4..=max_v {
        let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|u| ((u + 1)..nv).map(move |v| (u, v))).collect();
        let min_e = (3 * nv).div_ceil(2);
        let max = max_e.min(pairs.len());
        let perms = permutations(nv);
        let mut seen = HashSet::new();
        for ne in min_e..=max {
            for mask in combinations(pairs.len(), ne) {
                let combo: Vec<usize> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).collect();
                let mut deg = vec![0usize; nv];
                for &i in &combo {
                    deg[pairs[i].0] += 1;
                    deg[pairs[i].1] += 1;
                }
                if deg.iter().any(|&d| d < 3) {
                    continue;
                }
                let edges: Vec<(usize, usize)> = combo.iter().map(|&i| pairs[i]).collect();
                let g = Graph::from_edges(nv, &edges);
                if !g.is_simple_3_connected() {
                    continue;
                }
                if seen.insert(canonical_edges(nv, &edges, &perms)) {
                    out.push(g);
                }
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: u32, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if used >> v & 1 == 0 {
                prefix.push(v);
                go(prefix, used | 1 << v, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 0, n, &mut out);
    out
}

/// Smallest adjacency bitmask over all relabellings.
fn canonical_edges(nv: usize, edges: &[(usize, usize)], perms: &[Vec<usize>]) -> u64 {
    let bit = |u: usize, v: usize| {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        a * nv + b
    };
    perms
        .iter()
        .map(|p| edges.iter().fold(0u64, |acc, &(u, v)| acc | 1 << bit(p[u], p[v])))
        .min()
        .expect("at least one permutation")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graph_census() {
        // K4; W4, K5\e, K5 on five vertices.
        assert_eq!(three_connected_graphs(4, 6).len(), 1);
        assert_eq!(three_connected_graphs(5, 10).len(), 4);
    }

    #[test]
    fn empty_spec_gives_empty_catalogue() {
        assert!(Catalogue::build(&CatalogueSpec::empty()).unwrap().is_empty());
    }

    #[test]
    fn default_catalogue_is_3_connected_and_deduplicated() {
        let c = Catalogue::build(&CatalogueSpec::default()).unwrap();
        assert!(c.entries.iter().any(|e| e.name == "W3"));
        assert!(c.entries.iter().any(|e| e.name == "theta_double(3)*"));
        assert!(c.skipped.iter().any(|s| s.contains("isomorphic to theta_double(3)")));
        for e in &c.entries {
            assert!(is_3_connected(&e.matroid), "{}", e.name);
        }
    }
}
