//! Tree-ordered graphs: elimination trees, tree order relaxations, stems,
//! pieces and canonical forms.
//!
//! Togs are pattern-sized objects, so adjacency is kept as one `u64` bitmask
//! per vertex and vertex counts are limited to [`MAX_TOG_SIZE`].

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::LinearGraph;

pub const MAX_TOG_SIZE: usize = 32;

/// A graph whose vertex set carries a tree order guarding every edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tog {
    adj: Vec<u64>,
    parent: Vec<Option<usize>>,
    /// Strict ancestors of each vertex as a bitmask.
    anc: Vec<u64>,
    children: Vec<Vec<usize>>,
    stem: Vec<usize>,
}

impl Tog {
    /// Validates that `parent` describes a single rooted tree and that every
    /// edge joins comparable vertices.
    pub fn new(adj: Vec<u64>, parent: Vec<Option<usize>>) -> Result<Self> {
        let n = adj.len();
        if n == 0 || n > MAX_TOG_SIZE {
            return Err(Error::Input(format!("tog size {n} outside 1..={MAX_TOG_SIZE}")));
        }
        if parent.len() != n {
            return Err(Error::Input("parent array length mismatch".into()));
        }
        for (v, &row) in adj.iter().enumerate() {
            if row & (1 << v) != 0 || (n < 64 && row >> n != 0) {
                return Err(Error::Input(format!("bad adjacency row for vertex {v}")));
            }
            for u in bits(row) {
                if adj[u] & (1 << v) == 0 {
                    return Err(Error::Input("adjacency is not symmetric".into()));
                }
            }
        }
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::Input(format!("tree order needs one root, found {}", roots.len())));
        }
        let mut anc = vec![0u64; n];
        for v in 0..n {
            let mut cur = v;
            let mut steps = 0;
            while let Some(p) = parent[cur] {
                if p >= n {
                    return Err(Error::Input(format!("parent {p} out of range")));
                }
                anc[v] |= 1 << p;
                cur = p;
                steps += 1;
                if steps > n {
                    return Err(Error::Input("parent links contain a cycle".into()));
                }
            }
        }
        for v in 0..n {
            for u in bits(adj[v]) {
                if anc[v] & (1 << u) == 0 && anc[u] & (1 << v) == 0 {
                    return Err(Error::Input(format!("edge {u}-{v} is not guarded")));
                }
            }
        }
        let mut children = vec![Vec::new(); n];
        for v in 0..n {
            if let Some(p) = parent[v] {
                children[p].push(v);
            }
        }
        let mut stem = vec![roots[0]];
        loop {
            let last = *stem.last().unwrap();
            if children[last].len() == 1 {
                stem.push(children[last][0]);
            } else {
                break;
            }
        }
        Ok(Tog {
            adj,
            parent,
            anc,
            children,
            stem,
        })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn adj(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for v in bits(self.adj[u]) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn root(&self) -> usize {
        self.stem[0]
    }

    pub fn stem(&self) -> &[usize] {
        &self.stem
    }

    pub fn stem_len(&self) -> usize {
        self.stem.len()
    }

    /// Strict ancestors of `v` as a bitmask.
    pub fn ancestors(&self, v: usize) -> u64 {
        self.anc[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.anc[v].count_ones() as usize
    }

    /// `u ≼ v` in the tree order.
    pub fn precedes_eq(&self, u: usize, v: usize) -> bool {
        u == v || self.anc[v] & (1 << u) != 0
    }

    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.precedes_eq(u, v) || self.precedes_eq(v, u)
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.children[v].is_empty()).collect()
    }

    pub fn is_linear(&self) -> bool {
        self.stem.len() == self.n()
    }

    /// Vertices of the subtree rooted at `v`, including `v`.
    pub fn subtree(&self, v: usize) -> u64 {
        (0..self.n())
            .filter(|&u| u == v || self.anc[u] & (1 << v) != 0)
            .fold(0, |m, u| m | (1 << u))
    }

    /// The root path of `v` as a bitmask (ancestors plus `v`).
    pub fn root_path(&self, v: usize) -> u64 {
        self.anc[v] | (1 << v)
    }

    /// Number of vertices minus stem length; zero exactly for linear togs.
    pub fn measure(&self) -> usize {
        self.n() - self.stem_len()
    }

    /// Vertices in an order where every parent precedes its children
    /// (depth-first, children ascending).
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n());
        let mut stack = vec![self.root()];
        while let Some(v) = stack.pop() {
            out.push(v);
            for &c in self.children[v].iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Whether every vertex number exceeds its parent's number.
    pub fn is_order_compatible(&self) -> bool {
        (0..self.n()).all(|v| self.parent[v].map_or(true, |p| p < v))
    }

    /// The induced subtog on `mask`. Vertices are renumbered in ascending
    /// order of their old ids; the parent of a vertex becomes its nearest
    /// ancestor inside `mask`. Fails if `mask` has no unique minimum.
    pub fn induced(&self, mask: u64) -> Result<(Tog, Vec<usize>)> {
        let verts: Vec<usize> = bits(mask).collect();
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in verts.iter().enumerate() {
            new_id[v] = i;
        }
        let mut adj = Vec::with_capacity(verts.len());
        let mut parent = Vec::with_capacity(verts.len());
        for &v in &verts {
            let row = bits(self.adj[v] & mask).fold(0u64, |m, u| m | (1 << new_id[u]));
            adj.push(row);
            let mut p = self.parent[v];
            while let Some(x) = p {
                if mask & (1 << x) != 0 {
                    break;
                }
                p = self.parent[x];
            }
            parent.push(p.map(|x| new_id[x]));
        }
        Ok((Tog::new(adj, parent)?, verts))
    }

    /// The piece induced by a nonempty set of leaves: the subtog on the union
    /// of their root paths.
    pub fn piece(&self, leaves: &[usize]) -> Result<Tog> {
        if leaves.is_empty() {
            return Err(Error::Input("piece needs at least one leaf".into()));
        }
        let mut mask = 0u64;
        for &l in leaves {
            if l >= self.n() || !self.children[l].is_empty() {
                return Err(Error::Input(format!("vertex {l} is not a leaf")));
            }
            mask |= self.root_path(l);
        }
        Ok(self.induced(mask)?.0)
    }

    /// Canonical code as a token sequence. Two togs get equal codes iff they
    /// are isomorphic as tree-ordered graphs.
    fn codes(&self) -> Vec<Vec<u32>> {
        let n = self.n();
        let mut codes: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut order = self.preorder();
        order.reverse();
        for v in order {
            // adjacency to ancestors, indexed by ancestor depth
            let mut label = 0u32;
            for a in bits(self.anc[v] & self.adj[v]) {
                label |= 1 << self.depth(a);
            }
            let mut kids: Vec<&Vec<u32>> = self.children[v].iter().map(|&c| &codes[c]).collect();
            kids.sort();
            let mut code = vec![label, kids.len() as u32];
            for k in kids {
                code.extend_from_slice(k);
            }
            codes[v] = code;
        }
        codes
    }

    /// Canonical relabeling: depth-first numbering with children visited in
    /// increasing code order. Returns the canonical tog and `map[old] = new`.
    /// The result is tree-order compatible with the stem first.
    pub fn canonical_with_map(&self) -> (Tog, Vec<usize>) {
        let codes = self.codes();
        let n = self.n();
        let mut map = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = vec![self.root()];
        while let Some(v) = stack.pop() {
            map[v] = next;
            next += 1;
            let mut kids = self.children[v].clone();
            kids.sort_by(|&a, &b| codes[a].cmp(&codes[b]));
            for c in kids.into_iter().rev() {
                stack.push(c);
            }
        }
        let mut adj = vec![0u64; n];
        let mut parent = vec![None; n];
        for v in 0..n {
            adj[map[v]] = bits(self.adj[v]).fold(0u64, |m, u| m | (1 << map[u]));
            parent[map[v]] = self.parent[v].map(|p| map[p]);
        }
        (Tog::new(adj, parent).expect("relabeling preserves validity"), map)
    }

    pub fn canonical(&self) -> Tog {
        self.canonical_with_map().0
    }

    /// Byte encoding of the canonical form.
    pub fn canonical_encode(&self) -> Vec<u8> {
        let codes = self.codes();
        codes[self.root()]
            .iter()
            .flat_map(|t| t.to_le_bytes())
            .collect()
    }
}

/// Iterates over the set bits of a mask.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

/// Elimination-tree parent links of a linear graph given by adjacency masks
/// and an order (`order[k]` is the vertex at position `k`). The first
/// `prefix` vertices of the order are chained; the remaining vertices form the
/// elimination forest of the graph minus that prefix, hung below its last
/// vertex. With `prefix == 0` this is the plain elimination tree and the graph
/// must be connected.
pub fn elimination_parents(adj: &[u64], order: &[usize], prefix: usize) -> Result<Vec<Option<usize>>> {
    let n = adj.len();
    debug_assert_eq!(order.len(), n);
    let mut pos = vec![0usize; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let mut parent = vec![None; n];
    let mut uf: Vec<usize> = (0..n).collect();
    let mut top: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for k in (prefix..n).rev() {
        let v = order[k];
        for u in bits(adj[v]) {
            if pos[u] <= k {
                continue;
            }
            let ru = find(&mut uf, u);
            let rv = find(&mut uf, v);
            if ru != rv {
                parent[top[ru]] = Some(v);
                uf[ru] = rv;
                top[rv] = v;
            }
        }
    }
    if prefix == 0 {
        let roots = (0..n).filter(|&v| parent[v].is_none()).count();
        if roots != 1 {
            return Err(Error::Disconnected);
        }
    } else {
        for k in 1..prefix.min(n) {
            parent[order[k]] = Some(order[k - 1]);
        }
        let anchor = order[prefix.min(n) - 1];
        for k in prefix..n {
            let v = order[k];
            if parent[v].is_none() {
                parent[v] = Some(anchor);
            }
        }
    }
    Ok(parent)
}

/// Tree order relaxation of a linear graph given as masks and an order.
pub fn relax_masks(adj: &[u64], order: &[usize], prefix: usize) -> Result<Tog> {
    let parent = elimination_parents(adj, order, prefix)?;
    Tog::new(adj.to_vec(), parent)
}

/// Elimination tree of a connected linear graph as parent links.
pub fn elimination_tree(h: &LinearGraph) -> Result<Vec<Option<usize>>> {
    if h.n() > MAX_TOG_SIZE {
        return Err(Error::PatternTooLarge { size: h.n(), cap: MAX_TOG_SIZE });
    }
    if h.n() == 0 || !h.graph().is_connected() {
        return Err(Error::Disconnected);
    }
    elimination_parents(&h.graph().adjacency_masks(), &h.order(), 0)
}

/// Tree order relaxation of a connected linear graph, keeping its vertex ids.
pub fn relaxation(h: &LinearGraph) -> Result<Tog> {
    let parent = elimination_tree(h)?;
    Tog::new(h.graph().adjacency_masks(), parent)
}

impl PartialOrd for Tog {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Tog {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n(), &self.parent, &self.adj).cmp(&(other.n(), &other.parent, &other.adj))
    }
}
