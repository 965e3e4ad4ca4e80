use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::set::MAX_ELEMENTS;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: String,
}

/// Undirected multigraph with labelled edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(vertices: usize) -> Graph {
        Graph { vertices, edges: Vec::new() }
    }

    /// Adds an edge. Self-loops are accepted; they become matroid loops.
    pub fn add_edge(&mut self, u: usize, v: usize, label: impl Into<String>) -> Result<()> {
        let label = label.into();
        if u >= self.vertices || v >= self.vertices {
            return Err(Error::BadParams(format!("edge {label} has an endpoint out of range")));
        }
        if self.edges.iter().any(|e| e.label == label) {
            return Err(Error::DuplicateLabel(label));
        }
        self.edges.push(Edge { u, v, label });
        Ok(())
    }

    /// Edges labelled `"{u}{v}"` with single-digit vertex numbers.
    pub fn from_edges(vertices: usize, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph::new(vertices);
        for &(u, v) in edges {
            let label = if vertices <= 10 { format!("{u}{v}") } else { format!("{u}-{v}") };
            g.add_edge(u, v, label).expect("valid edge list");
        }
        g
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges)
    }

    /// Wheel with `spokes` rim vertices; vertex 0 is the hub.
    pub fn wheel(spokes: usize) -> Graph {
        let mut g = Graph::new(spokes + 1);
        for i in 1..=spokes {
            g.add_edge(0, i, format!("s{i}")).unwrap();
        }
        for i in 1..=spokes {
            let j = if i == spokes { 1 } else { i + 1 };
            g.add_edge(i, j, format!("r{i}")).unwrap();
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_index(&self, label: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn labels(&self) -> Vec<String> {
        self.edges.iter().map(|e| e.label.clone()).collect()
    }

    /// Indices of the edges incident with `v` (loops excluded).
    pub fn star(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| {
                let e = &self.edges[i];
                (e.u == v) != (e.v == v)
            })
            .collect()
    }

    /// Removes the edges whose indices are set in `mask`.
    pub fn delete_edges(&self, mask: u32) -> Graph {
        Graph {
            vertices: self.vertices,
            edges: self
                .edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 0)
                .map(|(_, e)| e.clone())
                .collect(),
        }
    }

    /// Contracts the edges in `mask`. Returns the contracted graph and the
    /// map from old vertices to new ones. Contracted edges disappear; other
    /// edges that become loops are kept as loops.
    pub fn contract_edges(&self, mask: u32) -> (Graph, Vec<usize>) {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, e) in self.edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut map = vec![usize::MAX; self.vertices];
        let mut next = 0;
        for v in 0..self.vertices {
            let root = find(&mut parent, v);
            if map[root] == usize::MAX {
                map[root] = next;
                next += 1;
            }
            map[v] = map[root];
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 0)
            .map(|(_, e)| Edge { u: map[e.u], v: map[e.v], label: e.label.clone() })
            .collect();
        (Graph { vertices: next, edges }, map)
    }

    /// Adjacency bitmasks of the underlying simple graph.
    pub fn adjacency(&self) -> Vec<u32> {
        assert!(self.vertices <= 32, "adjacency masks need at most 32 vertices");
        let mut adj = vec![0u32; self.vertices];
        for e in &self.edges {
            if e.u != e.v {
                adj[e.u] |= 1 << e.v;
                adj[e.v] |= 1 << e.u;
            }
        }
        adj
    }

    /// Vertex connectivity at least 3 (and at least 4 vertices), no loops or parallel edges.
    pub fn is_simple_3_connected(&self) -> bool {
        let n = self.vertices;
        if !(4..=32).contains(&n) {
            return false;
        }
        let mut seen = HashSet::new();
        for e in &self.edges {
            if e.u == e.v || !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return false;
            }
        }
        let adj = self.adjacency();
        let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        for a in 0..n {
            for b in a..n {
                let alive = all & !(1 << a) & !(1 << b);
                if !connected(&adj, alive) {
                    return false;
                }
            }
        }
        true
    }

    /// Text format: header `vertices N`, then one `u v label` line per edge.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut graph: Option<Graph> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: &str| Error::Parse(format!("line {}: {msg}: {raw:?}", lineno + 1));
            match graph.as_mut() {
                None => {
                    if fields.len() != 2 || fields[0] != "vertices" {
                        return Err(err("expected `vertices N` header"));
                    }
                    let n: usize = fields[1].parse().map_err(|_| err("bad vertex count"))?;
                    graph = Some(Graph::new(n));
                }
                Some(g) => {
                    if fields.len() != 3 {
                        return Err(err("expected `u v label`"));
                    }
                    let u: usize = fields[0].parse().map_err(|_| err("bad vertex"))?;
                    let v: usize = fields[1].parse().map_err(|_| err("bad vertex"))?;
                    g.add_edge(u, v, fields[2]).map_err(|e| err(&e.to_string()))?;
                }
            }
        }
        graph.ok_or_else(|| Error::Parse("empty graph file".into()))
    }

    pub fn load(path: &Path) -> Result<Graph> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Graph::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("vertices {}\n", self.vertices);
        for e in &self.edges {
            writeln!(s, "{} {} {}", e.u, e.v, e.label).unwrap();
        }
        s
    }
}

pub(crate) fn connected(adj: &[u32], alive: u32) -> bool {
    if alive == 0 {
        return true;
    }
    let start = alive.trailing_zeros();
    let mut reached = 1u32 << start;
    let mut frontier = reached;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & alive & !reached;
        reached |= new;
        frontier |= new;
    }
    reached == alive
}

/// The cycle matroid `M(G)`; element `i` is edge `i`.
pub fn graphic(g: &Graph) -> Result<Matroid> {
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if m > MAX_ELEMENTS {
        return Err(Error::TooManyEdges { edges: m, cap: MAX_ELEMENTS });
    }
    let ends: Vec<(usize, usize)> = g.edges.iter().map(|e| (e.u, e.v)).collect();
    let size = 1usize << m;
    let mut table = vec![0u8; size];
    let mut parent = vec![0usize; g.vertices];
    for x in 1..size {
        // rank(X) = rank(X - e) + [e joins two components of X - e], e the top edge
        let top = 31 - (x as u32).leading_zeros() as usize;
        let rest = x & !(1 << top);
        for (v, p) in parent.iter_mut().enumerate() {
            *p = v;
        }
        let mut bits = rest as u32;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (a, b) = (find(&mut parent, ends[i].0), find(&mut parent, ends[i].1));
            if a != b {
                parent[a] = b;
            }
        }
        let joins = find(&mut parent, ends[top].0) != find(&mut parent, ends[top].1);
        table[x] = table[rest] + joins as u8;
    }
    Matroid::from_rank_fn(g.labels(), |x| table[x as usize] as usize, false)
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}
