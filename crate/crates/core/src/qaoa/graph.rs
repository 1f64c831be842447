use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Weighted complete graph: one MaxCut instance.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphInstance {
    num_vertices: usize,
    edges: Vec<Edge>,
    seed: u64,
}

/// Complete graph on `n` vertices with i.i.d. uniform `[0, 1)` weights drawn
/// from ChaCha8 seeded with `seed`, in lexicographic edge order.
pub fn generate_complete_graph(n: usize, seed: u64) -> Result<GraphInstance> {
    if n < 2 {
        return Err(Error::InvalidSize { n, reason: "a graph needs at least 2 vertices" });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push(Edge { i, j, weight: rng.random::<f64>() });
        }
    }
    Ok(GraphInstance { num_vertices: n, edges, seed })
}

#[derive(Deserialize)]
struct GraphJson {
    n: usize,
    seed: u64,
    edges: Vec<(usize, usize, f64)>,
}

impl GraphInstance {
    /// Builds a graph from explicit edges. Every pair `i < j` must appear
    /// exactly once with a weight in `[0, 1]`; edges are stored sorted.
    pub fn from_edges(n: usize, seed: u64, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize { n, reason: "a graph needs at least 2 vertices" });
        }
        let mut seen = vec![false; n * n];
        let mut out = Vec::new();
        for (a, b, w) in edges {
            let (i, j) = (a.min(b), a.max(b));
            if i == j || j >= n {
                return Err(Error::InvalidArgument(format!("bad edge ({a}, {b}) for {n} vertices")));
            }
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::InvalidArgument(format!("weight {w} outside [0, 1]")));
            }
            if std::mem::replace(&mut seen[i * n + j], true) {
                return Err(Error::InvalidArgument(format!("duplicate edge ({i}, {j})")));
            }
            out.push(Edge { i, j, weight: w });
        }
        if out.len() != n * (n - 1) / 2 {
            return Err(Error::InvalidArgument(format!(
                "graph is not complete: {} of {} edges",
                out.len(),
                n * (n - 1) / 2
            )));
        }
        out.sort_by_key(|e| (e.i, e.j));
        Ok(GraphInstance { num_vertices: n, edges: out, seed })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        let (i, j) = (i.min(j), i.max(j));
        self.edges.iter().find(|e| e.i == i && e.j == j).map(|e| e.weight)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// `{"n": …, "seed": …, "edges": [[i, j, w], …]}` with weights at 17
    /// significant digits.
    pub fn to_json(&self) -> String {
        let edges: Vec<String> =
            self.edges.iter().map(|e| format!("[{},{},{:.16e}]", e.i, e.j, e.weight)).collect();
        format!("{{\"n\":{},\"seed\":{},\"edges\":[{}]}}", self.num_vertices, self.seed, edges.join(","))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(text).map_err(|e| Error::Serde(e.to_string()))?;
        Self::from_edges(raw.n, raw.seed, raw.edges)
    }
}
