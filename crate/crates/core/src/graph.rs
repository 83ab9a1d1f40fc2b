//! Simple undirected graphs and linearly ordered graphs.

use crate::error::{Error, Result};

/// A simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged, self-loops
    /// are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Input(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::Input(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .map(move |&v| (u, v as usize))
                .filter(|&(u, v)| u < v)
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                let w = w as usize;
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Graph on the same vertex set with every non-edge turned into an edge.
    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).expect("complement of a simple graph is simple")
    }

    /// Isomorphism test by degree-pruned backtracking; meant for patterns.
    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        let n = self.n();
        if n != other.n() || self.m() != other.m() || n > 64 {
            return false;
        }
        let mut da: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut db: Vec<usize> = (0..n).map(|v| other.degree(v)).collect();
        da.sort_unstable();
        db.sort_unstable();
        if da != db {
            return false;
        }
        let (a, b) = (self.adjacency_masks(), other.adjacency_masks());
        fn rec(a: &[u64], b: &[u64], img: &mut Vec<usize>, used: u64) -> bool {
            let x = img.len();
            if x == a.len() {
                return true;
            }
            for y in 0..b.len() {
                if used >> y & 1 == 1 || a[x].count_ones() != b[y].count_ones() {
                    continue;
                }
                if (0..x).all(|u| (a[x] >> u & 1) == (b[y] >> img[u] & 1)) {
                    img.push(y);
                    if rec(a, b, img, used | 1 << y) {
                        return true;
                    }
                    img.pop();
                }
            }
            false
        }
        rec(&a, &b, &mut Vec::new(), 0)
    }

    /// Adjacency as one bitmask per vertex. Only valid for `n <= 64`.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64, "bitmask adjacency needs at most 64 vertices");
        self.adj
            .iter()
            .map(|list| list.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect()
    }
}

/// A graph together with a total order on its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearGraph {
    graph: Graph,
    position: Vec<u32>,
    order: Vec<u32>,
}

impl LinearGraph {
    /// `order[k]` is the vertex placed at position `k`.
    pub fn from_order(graph: Graph, order: Vec<usize>) -> Result<Self> {
        let n = graph.n();
        if order.len() != n {
            return Err(Error::Input(format!(
                "ordering has {} entries, graph has {n} vertices",
                order.len()
            )));
        }
        let mut position = vec![u32::MAX; n];
        for (k, &v) in order.iter().enumerate() {
            if v >= n || position[v] != u32::MAX {
                return Err(Error::Input(format!(
                    "ordering is not a permutation (vertex {v} at position {k})"
                )));
            }
            position[v] = k as u32;
        }
        Ok(LinearGraph {
            graph,
            position,
            order: order.into_iter().map(|v| v as u32).collect(),
        })
    }

    /// Vertices ordered by id.
    pub fn identity(graph: Graph) -> Self {
        let order = (0..graph.n()).collect();
        Self::from_order(graph, order).expect("identity is a permutation")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v] as usize
    }

    pub fn vertex_at(&self, k: usize) -> usize {
        self.order[k] as usize
    }

    pub fn order(&self) -> Vec<usize> {
        self.order.iter().map(|&v| v as usize).collect()
    }

    pub fn less(&self, u: usize, v: usize) -> bool {
        self.position[u] < self.position[v]
    }

    /// Relabels vertices so that vertex ids coincide with positions.
    pub fn to_position_labels(&self) -> LinearGraph {
        let n = self.n();
        let edges: Vec<(usize, usize)> = self
            .graph
            .edges()
            .map(|(u, v)| (self.position(u), self.position(v)))
            .collect();
        let graph = Graph::from_edges(n, &edges).expect("relabeling preserves simplicity");
        LinearGraph::identity(graph)
    }

    /// Neighbours of `v` that come earlier in the order.
    pub fn left_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let pv = self.position[v];
        self.graph
            .neighbors(v)
            .iter()
            .filter(move |&&u| self.position[u as usize] < pv)
            .map(|&u| u as usize)
    }
}
