//! The counting dag: canonical pattern fragments joined by product
//! hyperedges and coefficiented subtraction edges.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tog::Tog;

pub const DAG_FORMAT_VERSION: u32 = 1;

/// How a non-linear node is split into two pieces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// The left piece holds the first child subtree below the branching
    /// vertex; a single linear piece whenever that subtree is a path.
    #[default]
    FirstLeaf,
    /// Child subtrees are split into two groups of similar size.
    Balanced,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first-leaf" => Ok(Strategy::FirstLeaf),
            "balanced" => Ok(Strategy::Balanced),
            _ => Err(Error::Input(format!("unknown strategy {s:?}"))),
        }
    }
}

/// Search guidance for leaf vertex `i`: its image lies within `len` steps of
/// the image of leaf vertex `target > i`, along a path above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Anchor {
    pub target: usize,
    pub len: usize,
}

/// Per-leaf search metadata. Vectors are indexed by leaf vertex `0..p-1`
/// (the maximum vertex has no entry).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafMeta {
    pub anchors: Vec<Anchor>,
    /// Weak radius needed by anchored search.
    pub radius: usize,
    /// Weak radius needed when every vertex is drawn from the set of the
    /// maximum.
    pub flat_radius: usize,
    /// Strong-mode hint sets; empty means "fall back to the weak set of the
    /// maximum at the pattern size".
    pub hints: Vec<Vec<usize>>,
    pub strong_radius: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagNode {
    pub tog: Tog,
    /// Set on sources: the number of labeled pattern relaxations in the class.
    pub multiplicity: Option<u64>,
    /// Set exactly on linear nodes.
    pub leaf: Option<LeafMeta>,
}

impl DagNode {
    pub fn is_leaf(&self) -> bool {
        self.leaf.is_some()
    }

    pub fn is_source(&self) -> bool {
        self.multiplicity.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProdEdge {
    pub node: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubEdge {
    pub node: usize,
    pub defect: usize,
    pub gamma: Ratio<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingDag {
    pub pattern: Graph,
    pub name: Option<String>,
    /// `|Aut(pattern)|`.
    pub aut: u64,
    pub strategy: Strategy,
    pub nodes: Vec<DagNode>,
    pub prod_edges: Vec<ProdEdge>,
    pub sub_edges: Vec<SubEdge>,
}

/// Size summary: nodes, leaves, edges (product plus subtraction) and the
/// largest weak radius any leaf needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DagStats {
    pub nodes: usize,
    pub leaves: usize,
    pub edges: usize,
    pub depth: usize,
}

impl fmt::Display for DagStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}) {} {}", self.nodes, self.leaves, self.edges, self.depth)
    }
}

impl CountingDag {
    pub fn sources(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.multiplicity.map(|m| (i, m)))
    }

    pub fn leaf_ids(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].is_leaf()).collect()
    }

    pub fn prod_edge(&self, node: usize) -> Option<&ProdEdge> {
        self.prod_edges.iter().find(|e| e.node == node)
    }

    pub fn sub_edges_of(&self, node: usize) -> impl Iterator<Item = &SubEdge> + '_ {
        self.sub_edges.iter().filter(move |e| e.node == node)
    }

    pub fn stats(&self) -> DagStats {
        DagStats {
            nodes: self.nodes.len(),
            leaves: self.nodes.iter().filter(|n| n.is_leaf()).count(),
            edges: self.prod_edges.len() + self.sub_edges.len(),
            depth: self.max_radius(),
        }
    }

    /// Largest anchored weak radius over all leaves.
    pub fn max_radius(&self) -> usize {
        self.nodes
            .iter()
            .filter_map(|n| n.leaf.as_ref().map(|l| l.radius))
            .max()
            .unwrap_or(1)
    }

    pub fn max_flat_radius(&self) -> usize {
        self.nodes
            .iter()
            .filter_map(|n| n.leaf.as_ref().map(|l| l.flat_radius))
            .max()
            .unwrap_or(1)
    }

    pub fn max_strong_radius(&self) -> usize {
        self.nodes
            .iter()
            .filter_map(|n| n.leaf.as_ref().map(|l| l.strong_radius))
            .max()
            .unwrap_or(1)
    }

    /// Out-neighbours of each node (product children and defects).
    fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for e in &self.prod_edges {
            out[e.node].push(e.left);
            out[e.node].push(e.right);
        }
        for e in &self.sub_edges {
            out[e.node].push(e.defect);
        }
        out
    }

    /// Node ids with every node after all of its successors.
    pub fn bottom_up_order(&self) -> Result<Vec<usize>> {
        let succ = self.successors();
        let n = self.nodes.len();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        let mut out = Vec::with_capacity(n);
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            state[start] = 1;
            while let Some(&mut (v, ref mut k)) = stack.last_mut() {
                if *k < succ[v].len() {
                    let w = succ[v][*k];
                    *k += 1;
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            stack.push((w, 0));
                        }
                        1 => return Err(Error::Dag(format!("cycle through node {w}"))),
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    out.push(v);
                    stack.pop();
                }
            }
        }
        Ok(out)
    }

    /// Number of edges on the longest path.
    pub fn longest_path(&self) -> Result<usize> {
        let succ = self.successors();
        let mut len = vec![0usize; self.nodes.len()];
        for v in self.bottom_up_order()? {
            len[v] = succ[v].iter().map(|&w| len[w] + 1).max().unwrap_or(0);
        }
        Ok(len.into_iter().max().unwrap_or(0))
    }

    /// Whether `|V| - |stem|` strictly decreases along every edge.
    pub fn strict_measure_holds(&self) -> bool {
        let f = |i: usize| self.nodes[i].tog.measure();
        self.prod_edges.iter().all(|e| f(e.left) < f(e.node) && f(e.right) < f(e.node))
            && self.sub_edges.iter().all(|e| f(e.defect) < f(e.node))
    }

    /// Checks the structural invariants: ids in range, acyclicity, leaves
    /// are exactly the linear nodes, one product edge per internal node,
    /// stem nesting, decrease of `(|V| - |stem|, -|E|)` along every edge and
    /// integrality of the coefficients.
    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        let bad = |m: String| Err(Error::Dag(m));
        let mut prod_of = vec![None; n];
        for (k, e) in self.prod_edges.iter().enumerate() {
            for id in [e.node, e.left, e.right] {
                if id >= n {
                    return bad(format!("product edge {k} refers to node {id}"));
                }
            }
            if prod_of[e.node].replace(k).is_some() {
                return bad(format!("node {} has two product edges", e.node));
            }
        }
        for (k, e) in self.sub_edges.iter().enumerate() {
            if e.node >= n || e.defect >= n {
                return bad(format!("subtraction edge {k} refers to a missing node"));
            }
            if *e.gamma.numer() <= 0 {
                return bad(format!("subtraction edge {k} has non-positive coefficient"));
            }
            if prod_of[e.node].is_none() {
                return bad(format!("subtraction edge {k} leaves a node without product edge"));
            }
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let linear = node.tog.is_linear();
            if linear != node.is_leaf() {
                return bad(format!("node {i}: leaf metadata does not match linearity"));
            }
            if linear == prod_of[i].is_some() {
                return bad(format!("node {i}: product edge does not match linearity"));
            }
            if !node.tog.is_order_compatible() || node.tog.stem() != (0..node.tog.stem_len()).collect::<Vec<_>>() {
                return bad(format!("node {i} is not in canonical numbering"));
            }
            if let Some(meta) = &node.leaf {
                let p = node.tog.n();
                if meta.anchors.len() + 1 != p.max(1) || meta.hints.len() + 1 != p.max(1) {
                    return bad(format!("node {i}: leaf metadata has wrong length"));
                }
                for (x, a) in meta.anchors.iter().enumerate() {
                    if a.target <= x || a.target >= p {
                        return bad(format!("node {i}: anchor {x} points to {}", a.target));
                    }
                }
                for (x, hs) in meta.hints.iter().enumerate() {
                    if hs.iter().any(|&j| j <= x || j >= p) {
                        return bad(format!("node {i}: hint for {x} out of range"));
                    }
                }
            }
        }
        if self.sources().next().is_none() {
            return bad("no source nodes".into());
        }
        self.bottom_up_order()?;
        let key = |i: usize| {
            let t = &self.nodes[i].tog;
            (t.measure(), usize::MAX - t.edge_count())
        };
        for e in &self.prod_edges {
            let k = self.nodes[e.node].tog.stem_len();
            for c in [e.left, e.right] {
                if self.nodes[c].tog.stem_len() < k || key(c) >= key(e.node) {
                    return bad(format!("product edge {} -> {c} breaks stem nesting or measure", e.node));
                }
            }
        }
        for e in &self.sub_edges {
            let k = self.nodes[e.node].tog.stem_len();
            let d = &self.nodes[e.defect].tog;
            if d.stem_len() < k || key(e.defect) >= key(e.node) {
                return bad(format!("subtraction edge {} -> {} breaks stem nesting or measure", e.node, e.defect));
            }
            // γ = η/α with α | η
            if !e.gamma.is_integer() {
                return bad(format!("coefficient {} of edge {} -> {} is not integral", e.gamma, e.node, e.defect));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DagFile::from(self)).expect("dag serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DagFile = serde_json::from_str(text).map_err(|e| Error::Dag(e.to_string()))?;
        file.into_dag()
    }
}

#[derive(Serialize, Deserialize)]
struct DagFile {
    version: u32,
    strategy: Strategy,
    pattern: PatternFile,
    aut: u64,
    nodes: Vec<NodeFile>,
    prod_edges: Vec<ProdFile>,
    sub_edges: Vec<SubFile>,
}

#[derive(Serialize, Deserialize)]
struct PatternFile {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct NodeFile {
    id: usize,
    n: usize,
    parent: Vec<Option<usize>>,
    edges: Vec<[usize; 2]>,
    stem_len: usize,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    multiplicity: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    flat_radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    strong_radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    anchors: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hints: Option<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
struct ProdFile {
    node: usize,
    left: usize,
    right: usize,
}

#[derive(Serialize, Deserialize)]
struct SubFile {
    node: usize,
    defect: usize,
    gamma: [i64; 2],
}

impl From<&CountingDag> for DagFile {
    fn from(d: &CountingDag) -> Self {
        let nodes = d
            .nodes
            .iter()
            .enumerate()
            .map(|(id, node)| {
                let t = &node.tog;
                let leaf = node.leaf.as_ref();
                NodeFile {
                    id,
                    n: t.n(),
                    parent: t.parents().to_vec(),
                    edges: t.edges().into_iter().map(|(u, v)| [u, v]).collect(),
                    stem_len: t.stem_len(),
                    kind: if leaf.is_some() { "leaf" } else { "internal" }.into(),
                    multiplicity: node.multiplicity,
                    radius: leaf.map(|l| l.radius),
                    flat_radius: leaf.map(|l| l.flat_radius),
                    strong_radius: leaf.map(|l| l.strong_radius),
                    anchors: leaf.map(|l| l.anchors.iter().map(|a| [a.target, a.len]).collect()),
                    hints: leaf.map(|l| l.hints.clone()),
                }
            })
            .collect();
        DagFile {
            version: DAG_FORMAT_VERSION,
            strategy: d.strategy,
            pattern: PatternFile {
                n: d.pattern.n(),
                edges: d.pattern.edges().map(|(u, v)| [u, v]).collect(),
                name: d.name.clone(),
            },
            aut: d.aut,
            nodes,
            prod_edges: d
                .prod_edges
                .iter()
                .map(|e| ProdFile { node: e.node, left: e.left, right: e.right })
                .collect(),
            sub_edges: d
                .sub_edges
                .iter()
                .map(|e| SubFile {
                    node: e.node,
                    defect: e.defect,
                    gamma: [*e.gamma.numer(), *e.gamma.denom()],
                })
                .collect(),
        }
    }
}

impl DagFile {
    fn into_dag(self) -> Result<CountingDag> {
        if self.version != DAG_FORMAT_VERSION {
            return Err(Error::Dag(format!(
                "unsupported version {} (expected {DAG_FORMAT_VERSION})",
                self.version
            )));
        }
        let pattern_edges: Vec<(usize, usize)> = self.pattern.edges.iter().map(|e| (e[0], e[1])).collect();
        let pattern = Graph::from_edges(self.pattern.n, &pattern_edges)?;
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for (i, nf) in self.nodes.into_iter().enumerate() {
            if nf.id != i {
                return Err(Error::Dag(format!("node at index {i} has id {}", nf.id)));
            }
            if nf.parent.len() != nf.n || nf.n == 0 || nf.n > crate::tog::MAX_TOG_SIZE {
                return Err(Error::Dag(format!("node {i}: bad vertex count")));
            }
            let mut adj = vec![0u64; nf.n];
            for [u, v] in nf.edges {
                if u >= nf.n || v >= nf.n || u == v {
                    return Err(Error::Dag(format!("node {i}: bad edge {u}-{v}")));
                }
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
            let tog = Tog::new(adj, nf.parent).map_err(|e| Error::Dag(format!("node {i}: {e}")))?;
            if tog.stem_len() != nf.stem_len {
                return Err(Error::Dag(format!("node {i}: stem length mismatch")));
            }
            let leaf = match nf.kind.as_str() {
                "leaf" => {
                    let anchors = nf
                        .anchors
                        .ok_or_else(|| Error::Dag(format!("leaf {i} without anchors")))?
                        .into_iter()
                        .map(|[target, len]| Anchor { target, len })
                        .collect();
                    Some(LeafMeta {
                        anchors,
                        radius: nf.radius.ok_or_else(|| Error::Dag(format!("leaf {i} without radius")))?,
                        flat_radius: nf.flat_radius.unwrap_or(pattern.n()),
                        hints: nf.hints.ok_or_else(|| Error::Dag(format!("leaf {i} without hints")))?,
                        strong_radius: nf.strong_radius.unwrap_or(pattern.n()),
                    })
                }
                "internal" => None,
                k => return Err(Error::Dag(format!("node {i}: unknown kind {k:?}"))),
            };
            nodes.push(DagNode {
                tog,
                multiplicity: nf.multiplicity,
                leaf,
            });
        }
        let mut sub_edges = Vec::with_capacity(self.sub_edges.len());
        for s in self.sub_edges {
            if s.gamma[1] <= 0 {
                return Err(Error::Dag("coefficient denominator must be positive".into()));
            }
            sub_edges.push(SubEdge {
                node: s.node,
                defect: s.defect,
                gamma: Ratio::new(s.gamma[0], s.gamma[1]),
            });
        }
        let dag = CountingDag {
            pattern,
            name: self.pattern.name,
            aut: self.aut,
            strategy: self.strategy,
            nodes,
            prod_edges: self
                .prod_edges
                .into_iter()
                .map(|p| ProdEdge { node: p.node, left: p.left, right: p.right })
                .collect(),
            sub_edges,
        };
        dag.validate()?;
        Ok(dag)
    }
}
