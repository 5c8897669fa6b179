//! Simple undirected graphs, graph file formats, and exact clique numbers by
//! exhaustive subset enumeration.
//!
//! Vertices are 0-indexed in memory and 1-indexed in files (DIMACS convention).

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest vertex count accepted by the exhaustive clique search.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 20;

/// Simple undirected graph stored as a dense 0/1 adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self { n, adj: vec![false; n * n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.set_edge(i, j);
            }
        }
        g
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 1..n {
            g.set_edge(i - 1, i);
        }
        g
    }

    /// Builds a graph from 0-indexed edges. Duplicates collapse; loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Erdős–Rényi `G(n, p)`.
    pub fn random_gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random::<f64>() < p {
                    g.set_edge(i, j);
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::validation(format!("self-loop on vertex {}", u + 1)));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::validation(format!(
                "edge ({}, {}) out of range for {} vertices",
                u + 1,
                v + 1,
                self.n
            )));
        }
        self.set_edge(u, v);
        Ok(())
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.n + v] = true;
        self.adj[v * self.n + u] = true;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    /// Number of edges ê.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&x| x).count() / 2
    }

    /// Edges `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| if self.has_edge(i, j) { 1.0 } else { 0.0 })
    }

    /// Neighbourhood of `v` as a bitmask. Only meaningful for `n <= 64`.
    fn neighbour_mask(&self, v: usize) -> u64 {
        (0..self.n).filter(|&u| self.has_edge(v, u)).fold(0, |m, u| m | (1 << u))
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}

/// Graph plus clique-size threshold `c`, with `1 <= c <= n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueInstance {
    graph: Graph,
    c: usize,
}

impl CliqueInstance {
    pub fn new(graph: Graph, c: usize) -> Result<Self> {
        if c == 0 || c > graph.n() {
            return Err(Error::validation(format!("clique size {c} outside [1, {}]", graph.n())));
        }
        Ok(Self { graph, c })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn c(&self) -> usize {
        self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Answer {
    Yes,
    No,
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
        })
    }
}

/// A maximum clique found by exhaustive search (0-indexed vertices, ascending).
pub fn maximum_clique(g: &Graph) -> Result<Vec<usize>> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::Budget(format!(
            "exhaustive clique search limited to {BRUTE_FORCE_MAX_VERTICES} vertices, got {n}"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let nbr: Vec<u64> = (0..n).map(|v| g.neighbour_mask(v)).collect();
    // is_clique[mask] built from mask minus its lowest vertex.
    let total = 1usize << n;
    let mut is_clique = vec![false; total];
    is_clique[0] = true;
    let mut best = 0usize;
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if is_clique[rest] && (nbr[low] as usize & rest) == rest {
            is_clique[mask] = true;
            if mask.count_ones() > best.count_ones() {
                best = mask;
            }
        }
    }
    Ok((0..n).filter(|&v| best >> v & 1 == 1).collect())
}

/// Exact clique number ω.
pub fn max_clique_bruteforce(g: &Graph) -> Result<usize> {
    if g.n() == 0 {
        return Err(Error::validation("graph has no vertices"));
    }
    maximum_clique(g).map(|c| c.len())
}

/// YES iff the graph has a clique of size at least `c`.
pub fn solve_clique(inst: &CliqueInstance) -> Result<Answer> {
    let omega = max_clique_bruteforce(inst.graph())?;
    Ok(if omega >= inst.c() { Answer::Yes } else { Answer::No })
}

/// Answers the instances the reduction does not accept: `c = 1` (always YES)
/// and edgeless graphs (`ω = 1`). Returns `None` when the reduction applies.
pub fn answer_degenerate(inst: &CliqueInstance) -> Option<Answer> {
    if inst.c() == 1 {
        Some(Answer::Yes)
    } else if inst.graph().edge_count() == 0 {
        Some(Answer::No)
    } else {
        None
    }
}

#[derive(Deserialize)]
struct JsonGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Parses a DIMACS edge file (`p edge n m`, `e u v`, `c ...` comments) or a
/// JSON document `{"n": n, "edges": [[u, v], ...]}`; both 1-indexed.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_dimacs(text)
    }
}

fn parse_json(text: &str) -> Result<Graph> {
    let doc: JsonGraph = serde_json::from_str(text)
        .map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
    let mut g = Graph::empty(doc.n);
    for (u, v) in doc.edges {
        if u == 0 || v == 0 {
            return Err(Error::validation("vertices are 1-indexed"));
        }
        g.add_edge(u - 1, v - 1)?;
    }
    Ok(g)
}

fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
        match fields[0] {
            "p" => {
                if fields.len() != 4 || !matches!(fields[1], "edge" | "col") {
                    return Err(bad("expected `p edge <n> <m>`"));
                }
                if graph.is_some() {
                    return Err(bad("duplicate problem line"));
                }
                let n: usize = fields[2].parse().map_err(|_| bad("vertex count is not an integer"))?;
                let _m: usize = fields[3].parse().map_err(|_| bad("edge count is not an integer"))?;
                if n == 0 {
                    return Err(bad("graph must have at least one vertex"));
                }
                graph = Some(Graph::empty(n));
            }
            "e" => {
                if fields.len() != 3 {
                    return Err(bad("expected `e <u> <v>`"));
                }
                let u: usize = fields[1].parse().map_err(|_| bad("vertex is not an integer"))?;
                let v: usize = fields[2].parse().map_err(|_| bad("vertex is not an integer"))?;
                if u == v {
                    return Err(Error::validation(format!("line {line_no}: self-loop on vertex {u}")));
                }
                if u == 0 || v == 0 {
                    return Err(bad("vertices are 1-indexed"));
                }
                let g = graph.as_mut().ok_or_else(|| bad("edge before problem line"))?;
                g.add_edge(u - 1, v - 1).map_err(|e| match e {
                    Error::Validation(msg) => Error::validation(format!("line {line_no}: {msg}")),
                    other => other,
                })?;
            }
            _ => return Err(bad("unrecognised line")),
        }
    }
    graph.ok_or(Error::Parse { line: 0, msg: "missing problem line".into() })
}

/// Serializes to the JSON graph document.
pub fn to_json(g: &Graph) -> String {
    let edges: Vec<(usize, usize)> = g.edges().into_iter().map(|(u, v)| (u + 1, v + 1)).collect();
    serde_json::json!({ "n": g.n(), "edges": edges }).to_string()
}

pub fn to_dimacs(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("p edge {} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

/// One representative per isomorphism class of graphs on `n <= 7` vertices.
pub fn nonisomorphic_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 7, "isomorphism-class enumeration is limited to 7 vertices");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let pair_index = |i: usize, j: usize| {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    let perms = permutations(n);
    // Bit position of each pair after relabelling by each permutation.
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(i, j)| pair_index(p[i], p[j])).collect())
        .collect();
    let total = 1usize << pairs.len();
    let mut seen = vec![false; total];
    let mut reps = Vec::new();
    for mask in 0..total {
        if seen[mask] {
            continue;
        }
        for img in &images {
            let mut m = 0usize;
            for (bit, &to) in img.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    m |= 1 << to;
                }
            }
            seen[m] = true;
        }
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &p)| p).collect();
        reps.push(Graph::from_edges(n, &edges).expect("valid pairs"));
    }
    reps
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}
