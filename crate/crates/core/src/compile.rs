//! Pattern compilation: relaxations, piece-sum decompositions, defects,
//! coefficients and per-leaf search metadata.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use log::{debug, warn};
use num_rational::Ratio;

use crate::dag::{Anchor, CountingDag, DagNode, LeafMeta, ProdEdge, Strategy, SubEdge};
use crate::embed::{aut_count, count_embeddings, embedding_maps, is_embedding, rooted_automorphisms, EmbedMode};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tog::{bits, Tog, MAX_TOG_SIZE};

pub const DEFAULT_SIZE_CAP: usize = 10;

#[derive(Clone, Copy, Debug)]
pub struct CompileOptions {
    pub strategy: Strategy,
    pub size_cap: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            strategy: Strategy::FirstLeaf,
            size_cap: DEFAULT_SIZE_CAP,
        }
    }
}

/// A class of isomorphic pattern relaxations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelaxationClass {
    /// Canonical representative.
    pub tog: Tog,
    /// Number of distinct labeled relaxations in the class.
    pub multiplicity: u64,
}

fn components(adj: &[u64], mask: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut left = mask;
    while left != 0 {
        let start = left.trailing_zeros() as usize;
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj[v] & mask & !comp;
            comp |= new;
            frontier |= new;
        }
        out.push(comp);
        left &= !comp;
    }
    out
}

type Partial = Vec<(usize, Option<usize>)>;

fn product(left: Vec<Partial>, right: &[Partial]) -> Vec<Partial> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for l in &left {
        for r in right {
            let mut x = l.clone();
            x.extend_from_slice(r);
            out.push(x);
        }
    }
    out
}

/// Elimination forests of the connected vertex set `set` hung below
/// `parent`, where each root must be minimal in `set` under `pred`.
fn forests(adj: &[u64], pred: &[u64], set: u64, parent: Option<usize>) -> Vec<Partial> {
    let mut out = Vec::new();
    for r in bits(set) {
        if pred[r] & set != 0 {
            continue;
        }
        let mut partial: Vec<Partial> = vec![vec![(r, parent)]];
        for comp in components(adj, set & !(1 << r)) {
            let sub = forests(adj, pred, comp, Some(r));
            partial = product(partial, &sub);
            if partial.is_empty() {
                break;
            }
        }
        out.extend(partial);
    }
    out
}

/// Whether the tree order given by `parent` together with `pred` is acyclic,
/// i.e. some linear extension of `pred` has this elimination tree.
fn compatible(parent: &[Option<usize>], pred: &[u64]) -> bool {
    let n = parent.len();
    let mut before = pred.to_vec();
    for v in 0..n {
        if let Some(p) = parent[v] {
            before[v] |= 1 << p;
        }
    }
    let mut done = 0u64;
    for _ in 0..n {
        let Some(v) = (0..n).find(|&v| done & (1 << v) == 0 && before[v] & !done == 0) else {
            return false;
        };
        done |= 1 << v;
    }
    true
}

/// All distinct elimination trees of vertex orders that extend the strict
/// order `pred` (`pred[v]` = vertices that must precede `v`). The vertices
/// of `prefix` come first and form a chain; the rest is an elimination
/// forest hung below the last prefix vertex. Without a prefix the graph must
/// be connected.
pub fn relaxation_trees(adj: &[u64], prefix: &[usize], pred: &[u64]) -> Result<Vec<Vec<Option<usize>>>> {
    let n = adj.len();
    if n == 0 || n > MAX_TOG_SIZE {
        return Err(Error::Input(format!("{n} vertices is outside 1..={MAX_TOG_SIZE}")));
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut partials: Vec<Partial>;
    let rest;
    if prefix.is_empty() {
        if components(adj, all).len() != 1 {
            return Err(Error::Disconnected);
        }
        partials = forests(adj, pred, all, None);
    } else {
        let mut chain = Vec::new();
        let mut pm = 0u64;
        for (i, &x) in prefix.iter().enumerate() {
            chain.push((x, if i == 0 { None } else { Some(prefix[i - 1]) }));
            pm |= 1 << x;
        }
        rest = all & !pm;
        let last = *prefix.last().unwrap();
        partials = vec![chain];
        for comp in components(adj, rest) {
            let sub = forests(adj, pred, comp, Some(last));
            partials = product(partials, &sub);
        }
    }
    let mut out = Vec::new();
    for p in partials {
        let mut parent = vec![None; n];
        for (v, par) in p {
            parent[v] = par;
        }
        if compatible(&parent, pred) {
            out.push(parent);
        }
    }
    Ok(out)
}

fn check_pattern(h: &Graph, cap: usize) -> Result<()> {
    if h.n() > cap.min(MAX_TOG_SIZE) {
        return Err(Error::PatternTooLarge { size: h.n(), cap: cap.min(MAX_TOG_SIZE) });
    }
    if h.n() < 2 {
        return Err(Error::Input("pattern needs at least two vertices".into()));
    }
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Labeled relaxations of `h` over all vertex orders, and their
/// isomorphism classes sorted by canonical encoding.
pub fn pattern_relaxations(h: &Graph) -> Result<(Vec<Tog>, Vec<RelaxationClass>)> {
    check_pattern(h, MAX_TOG_SIZE)?;
    let adj = h.adjacency_masks();
    let trees = relaxation_trees(&adj, &[], &vec![0; h.n()])?;
    let mut labeled = Vec::with_capacity(trees.len());
    let mut classes: BTreeMap<Vec<u8>, RelaxationClass> = BTreeMap::new();
    for parent in trees {
        let t = Tog::new(adj.clone(), parent)?;
        classes
            .entry(t.canonical_encode())
            .or_insert_with(|| RelaxationClass {
                tog: t.canonical(),
                multiplicity: 0,
            })
            .multiplicity += 1;
        labeled.push(t);
    }
    Ok((labeled, classes.into_values().collect()))
}

/// Vertex masks of the two pieces of a piece-sum decomposition. Both contain
/// the stem; the child subtrees of the branching vertex are split between
/// them, so the pieces meet exactly in the stem.
pub fn piece_masks(t: &Tog, strategy: Strategy) -> Result<(u64, u64)> {
    if t.is_linear() {
        return Err(Error::Input("a linear tog has no piece-sum decomposition".into()));
    }
    let branch = *t.stem().last().unwrap();
    let mut kids = t.children(branch).to_vec();
    kids.sort_unstable();
    let stem = t.root_path(branch);
    let (g1, g2): (Vec<usize>, Vec<usize>) = match strategy {
        Strategy::FirstLeaf => (vec![kids[0]], kids[1..].to_vec()),
        Strategy::Balanced => {
            let size = |c: usize| t.subtree(c).count_ones();
            let mut by_size = kids.clone();
            by_size.sort_by_key(|&c| (std::cmp::Reverse(size(c)), c));
            let (mut a, mut b) = (Vec::new(), Vec::new());
            let (mut sa, mut sb) = (0, 0);
            for c in by_size {
                if sa <= sb {
                    sa += size(c);
                    a.push(c);
                } else {
                    sb += size(c);
                    b.push(c);
                }
            }
            (a, b)
        }
    };
    let m1 = g1.iter().fold(stem, |m, &c| m | t.subtree(c));
    let m2 = g2.iter().fold(stem, |m, &c| m | t.subtree(c));
    Ok((m1, m2))
}

/// The two pieces `H1 ⊕ H2 = t`, numbered by ascending vertex id of `t`.
pub fn decompose_piece_sum(t: &Tog, strategy: Strategy) -> Result<(Tog, Tog)> {
    let (m1, m2) = piece_masks(t, strategy)?;
    Ok((t.induced(m1)?.0, t.induced(m2)?.0))
}

fn stem_mask(t: &Tog) -> u64 {
    t.stem().iter().fold(0, |m, &x| m | (1 << x))
}

/// Defect maps for pieces `m1`, `m2` of `t`: partial isomorphisms from
/// `V1 = m1 - stem` to `V2 = m2 - stem` that fix the stem and whose matching
/// is monotone. Each map is a list of pairs `(u, κ(u))`.
pub fn defect_maps(t: &Tog, m1: u64, m2: u64) -> Vec<Vec<(usize, usize)>> {
    let x = stem_mask(t);
    let v1: Vec<usize> = bits(m1 & !x).collect();
    let v2 = m2 & !x;
    let mut out = Vec::new();
    let mut pairs = Vec::new();
    fn rec(
        t: &Tog,
        x: u64,
        v1: &[usize],
        k: usize,
        free2: u64,
        pairs: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if k == v1.len() {
            if monotone(t, pairs) {
                out.push(pairs.clone());
            }
            return;
        }
        rec(t, x, v1, k + 1, free2, pairs, out);
        let u = v1[k];
        for w in bits(free2) {
            if t.adj(u) & x != t.adj(w) & x {
                continue;
            }
            if pairs.iter().any(|&(a, b)| t.has_edge(u, a) != t.has_edge(w, b)) {
                continue;
            }
            pairs.push((u, w));
            rec(t, x, v1, k + 1, free2 & !(1 << w), pairs, out);
            pairs.pop();
        }
    }
    rec(t, x, &v1, 0, v2, &mut pairs, &mut out);
    out
}

/// Whether identifying the matched pairs keeps the tree order acyclic.
fn monotone(t: &Tog, pairs: &[(usize, usize)]) -> bool {
    let n = t.n();
    let mut rep: Vec<usize> = (0..n).collect();
    for &(u, w) in pairs {
        rep[w] = u;
    }
    let mut before = vec![0u64; n];
    for v in 0..n {
        if let Some(p) = t.parent(v) {
            before[rep[v]] |= 1 << rep[p];
        }
    }
    let alive = (0..n).filter(|&v| rep[v] == v).fold(0u64, |m, v| m | (1 << v));
    let mut done = 0u64;
    while done != alive {
        let Some(v) = bits(alive & !done).find(|&v| before[v] & !done & alive == 0) else {
            return false;
        };
        done |= 1 << v;
    }
    true
}

/// Labeled defects: identify the matched pairs, add the extra edges, and
/// relax every compatible order with the stem kept as a prefix chain.
fn labeled_defects(t: &Tog, m1: u64, m2: u64) -> Result<Vec<Tog>> {
    let n = t.n();
    let x = stem_mask(t);
    let v1 = m1 & !x;
    let v2 = m2 & !x;
    let mut out = Vec::new();
    for kappa in defect_maps(t, m1, m2) {
        let mut rep: Vec<usize> = (0..n).collect();
        let mut matched1 = 0u64;
        let mut matched2 = 0u64;
        for &(u, w) in &kappa {
            rep[w] = u;
            matched1 |= 1 << u;
            matched2 |= 1 << w;
        }
        let keep: Vec<usize> = (0..n).filter(|&v| matched2 & (1 << v) == 0).collect();
        let mut id = vec![usize::MAX; n];
        for (i, &v) in keep.iter().enumerate() {
            id[v] = i;
        }
        let phi: Vec<usize> = (0..n).map(|v| id[rep[v]]).collect();
        let m = keep.len();
        let mut base = vec![0u64; m];
        for (u, v) in t.edges() {
            let (a, b) = (phi[u], phi[v]);
            base[a] |= 1 << b;
            base[b] |= 1 << a;
        }
        // identified order relation, transitively closed
        let mut pred = vec![0u64; m];
        for v in 0..n {
            if let Some(p) = t.parent(v) {
                pred[phi[v]] |= 1 << phi[p];
            }
        }
        loop {
            let mut changed = false;
            for v in 0..m {
                let closed = bits(pred[v]).fold(pred[v], |acc, u| acc | pred[u]);
                if closed != pred[v] {
                    pred[v] = closed;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let prefix: Vec<usize> = t.stem().iter().map(|&s| phi[s]).collect();
        let extra: Vec<(usize, usize)> = bits(v1 & !matched1)
            .flat_map(|a| bits(v2 & !matched2).map(move |b| (a, b)))
            .filter(|&(a, b)| !t.has_edge(a, b))
            .collect();
        if extra.len() > 20 {
            return Err(Error::Guardrail(format!("{} candidate extra edges", extra.len())));
        }
        for sel in 0u32..(1 << extra.len()) {
            if sel == 0 && kappa.is_empty() {
                continue;
            }
            let mut adj = base.clone();
            for (k, &(a, b)) in extra.iter().enumerate() {
                if sel & (1 << k) != 0 {
                    adj[phi[a]] |= 1 << phi[b];
                    adj[phi[b]] |= 1 << phi[a];
                }
            }
            for parent in relaxation_trees(&adj, &prefix, &pred)? {
                let d = Tog::new(adj.clone(), parent)?;
                if !is_embedding(t, &d, &phi, EmbedMode::Cover { first: m1, second: m2 }) {
                    debug!("skipping candidate defect without the identity embedding");
                    continue;
                }
                if count_embeddings(t, &d, &prefix, EmbedMode::All)? != 0 {
                    continue;
                }
                out.push(d);
            }
        }
    }
    Ok(out)
}

/// The defects of the decomposition `(m1, m2)` of `t`, canonical and sorted
/// by canonical encoding.
pub fn defects(t: &Tog, m1: u64, m2: u64) -> Result<Vec<Tog>> {
    let mut set: BTreeMap<Vec<u8>, Tog> = BTreeMap::new();
    for d in labeled_defects(t, m1, m2)? {
        set.entry(d.canonical_encode()).or_insert_with(|| d.canonical());
    }
    Ok(set.into_values().collect())
}

/// Subtraction coefficient of defect `d` for the decomposition `(m1, m2)`
/// of `t`: `η`, `α` and `γ = η / α`.
///
/// Each copy of `d` in a host is met `α` times by its embedding count and
/// carries exactly `η` piece pairs, hence one factor of `α`, not two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coefficient {
    pub eta: u64,
    pub alpha: u64,
    pub gamma: Ratio<i64>,
}

/// `η` counts maps that embed both pieces, fix the stem and cover `d`;
/// `α` counts automorphisms of `d` fixing the stem of `t`. Returns `None`
/// when `η = 0`.
pub fn coefficient(t: &Tog, m1: u64, m2: u64, d: &Tog) -> Result<Option<Coefficient>> {
    let k = t.stem_len();
    if d.stem_len() < k {
        return Err(Error::Input("defect stem shorter than the decomposed stem".into()));
    }
    let prefix = &d.stem()[..k];
    let eta = count_embeddings(t, d, prefix, EmbedMode::Cover { first: m1, second: m2 })?;
    if eta == 0 {
        return Ok(None);
    }
    let alpha = rooted_automorphisms(d, k);
    if eta % alpha != 0 {
        return Err(Error::Invariant(format!("α = {alpha} does not divide η = {eta}")));
    }
    let gamma = Ratio::from_integer((eta / alpha) as i64);
    Ok(Some(Coefficient { eta, alpha, gamma }))
}

struct Builder {
    strategy: Strategy,
    togs: Vec<Tog>,
    index: HashMap<Vec<u8>, usize>,
    prod: Vec<ProdEdge>,
    /// Per product edge: child vertex -> parent vertex, for left and right.
    prod_maps: Vec<[Vec<usize>; 2]>,
    sub: Vec<SubEdge>,
    /// Per subtraction edge: every covering map from the node into the defect.
    sub_maps: Vec<Vec<Vec<usize>>>,
}

impl Builder {
    fn intern(&mut self, t: Tog) -> usize {
        let key = t.canonical_encode();
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        self.togs.push(t);
        self.index.insert(key, self.togs.len() - 1);
        self.togs.len() - 1
    }

    fn expand(&mut self, id: usize) -> Result<()> {
        let t = self.togs[id].clone();
        if t.is_linear() {
            return Ok(());
        }
        let (m1, m2) = piece_masks(&t, self.strategy)?;
        let mut children = [0usize; 2];
        let mut maps: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (side, m) in [m1, m2].into_iter().enumerate() {
            let (piece, old) = t.induced(m)?;
            let (canon, to_canon) = piece.canonical_with_map();
            let mut back = vec![0usize; old.len()];
            for (j, &o) in old.iter().enumerate() {
                back[to_canon[j]] = o;
            }
            children[side] = self.intern(canon);
            maps[side] = back;
        }
        self.prod.push(ProdEdge {
            node: id,
            left: children[0],
            right: children[1],
        });
        self.prod_maps.push(maps);
        let k = t.stem_len();
        for d in defects(&t, m1, m2)? {
            let Some(c) = coefficient(&t, m1, m2, &d)? else {
                warn!("dropping defect with no covering embedding");
                continue;
            };
            let maps = embedding_maps(&t, &d, &d.stem()[..k], EmbedMode::Cover { first: m1, second: m2 })?;
            let defect = self.intern(d);
            self.sub.push(SubEdge {
                node: id,
                defect,
                gamma: c.gamma,
            });
            self.sub_maps.push(maps);
        }
        Ok(())
    }
}

/// Compiles a connected pattern into its counting dag.
pub fn build_counting_dag(h: &Graph, opts: &CompileOptions) -> Result<CountingDag> {
    check_pattern(h, opts.size_cap)?;
    let (_, classes) = pattern_relaxations(h)?;
    let mut b = Builder {
        strategy: opts.strategy,
        togs: Vec::new(),
        index: HashMap::new(),
        prod: Vec::new(),
        prod_maps: Vec::new(),
        sub: Vec::new(),
        sub_maps: Vec::new(),
    };
    let mut mult = HashMap::new();
    for c in &classes {
        let id = b.intern(c.tog.clone());
        mult.insert(id, c.multiplicity);
    }
    let mut next = 0;
    while next < b.togs.len() {
        b.expand(next)?;
        next += 1;
    }
    let metas = leaf_metadata(&b, &mult, h.n());
    let nodes = b
        .togs
        .iter()
        .enumerate()
        .map(|(i, t)| DagNode {
            tog: t.clone(),
            multiplicity: mult.get(&i).copied(),
            leaf: metas.get(&i).cloned(),
        })
        .collect();
    let dag = CountingDag {
        pattern: h.clone(),
        name: None,
        aut: aut_count(h),
        strategy: opts.strategy,
        nodes,
        prod_edges: b.prod,
        sub_edges: b.sub,
    };
    dag.validate()?;
    Ok(dag)
}

/// Where leaf occurrences live: a context node and the leaf's vertex images.
type Occurrences = BTreeMap<usize, BTreeSet<(usize, Vec<usize>)>>;

/// Every way a leaf sits inside a context whose embeddings are counted
/// exactly: a source or defect (via the product decompositions below it), or
/// a defect reached through one of the covering maps of a subtraction edge.
fn occurrences(b: &Builder, roots: &BTreeSet<usize>) -> Occurrences {
    let mut prod_of = HashMap::new();
    for (k, e) in b.prod.iter().enumerate() {
        prod_of.insert(e.node, k);
    }
    fn visit(
        b: &Builder,
        prod_of: &HashMap<usize, usize>,
        node: usize,
        map: Vec<usize>,
        ctx: usize,
        acc: &mut Occurrences,
    ) {
        match prod_of.get(&node) {
            None => {
                acc.entry(node).or_default().insert((ctx, map));
            }
            Some(&k) => {
                let e = b.prod[k];
                for (side, child) in [e.left, e.right].into_iter().enumerate() {
                    let m: Vec<usize> = b.prod_maps[k][side].iter().map(|&v| map[v]).collect();
                    visit(b, prod_of, child, m, ctx, acc);
                }
            }
        }
    }
    let mut acc = Occurrences::new();
    for &r in roots {
        let n = b.togs[r].n();
        visit(b, &prod_of, r, (0..n).collect(), r, &mut acc);
    }
    for (s, e) in b.sub.iter().enumerate() {
        let k = prod_of[&e.node];
        let pe = b.prod[k];
        for phi in &b.sub_maps[s] {
            for (side, child) in [pe.left, pe.right].into_iter().enumerate() {
                let m: Vec<usize> = b.prod_maps[k][side].iter().map(|&v| phi[v]).collect();
                visit(b, &prod_of, child, m, e.defect, &mut acc);
            }
        }
    }
    acc
}

/// Shortest path from `a` to `b` inside the vertex set `allowed`.
fn path_len(t: &Tog, a: usize, b: usize, allowed: u64) -> Option<usize> {
    if a == b {
        return Some(0);
    }
    let mut dist = vec![usize::MAX; t.n()];
    dist[a] = 0;
    let mut q = VecDeque::from([a]);
    while let Some(v) = q.pop_front() {
        for w in bits(t.adj(v) & allowed) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                if w == b {
                    return Some(dist[w]);
                }
                q.push_back(w);
            }
        }
    }
    None
}

/// Length of a shortest `a`-`b` path whose vertices all lie above `a`.
fn weak_len(t: &Tog, a: usize, b: usize) -> Option<usize> {
    path_len(t, a, b, t.subtree(a))
}

/// Length of a shortest `a`-`b` path all of whose vertices other than `a`
/// lie above `b`, for `a` below `b`.
fn strong_len(t: &Tog, a: usize, b: usize) -> Option<usize> {
    let above = t.subtree(b);
    bits(t.adj(a) & above)
        .filter_map(|w| path_len(t, b, w, above).map(|l| l + 1))
        .min()
}

fn leaf_metadata(b: &Builder, mult: &HashMap<usize, u64>, h: usize) -> HashMap<usize, LeafMeta> {
    let mut roots: BTreeSet<usize> = mult.keys().copied().collect();
    roots.extend(b.sub.iter().map(|e| e.defect));
    let occ = occurrences(b, &roots);
    let mut out = HashMap::new();
    for (id, t) in b.togs.iter().enumerate() {
        if !t.is_linear() {
            continue;
        }
        let empty = BTreeSet::new();
        let occs: Vec<&(usize, Vec<usize>)> = occ.get(&id).unwrap_or(&empty).iter().collect();
        out.insert(id, leaf_meta(b, t.n(), &occs, h));
    }
    out
}

fn leaf_meta(b: &Builder, p: usize, occs: &[&(usize, Vec<usize>)], h: usize) -> LeafMeta {
    let last = p - 1;
    // weak[o][i][j], strong[o][i][j]
    let table = |f: fn(&Tog, usize, usize) -> Option<usize>| -> Vec<Vec<Vec<Option<usize>>>> {
        occs.iter()
            .map(|(ctx, map)| {
                let t = &b.togs[*ctx];
                (0..p)
                    .map(|i| (0..p).map(|j| if j > i { f(t, map[i], map[j]) } else { None }).collect())
                    .collect()
            })
            .collect()
    };
    let weak = table(weak_len);
    let strong = table(strong_len);
    let worst = |tab: &Vec<Vec<Vec<Option<usize>>>>, i: usize, j: usize| -> Option<usize> {
        tab.iter().try_fold(0usize, |m, o| o[i][j].map(|l| m.max(l)))
    };
    let mut anchors = Vec::with_capacity(last);
    let mut flat_radius = 1;
    for i in 0..last {
        let best = (i + 1..p).filter_map(|j| worst(&weak, i, j).map(|l| (l, j))).min();
        anchors.push(match best {
            Some((len, target)) => Anchor { target, len: len.max(1) },
            None => Anchor { target: last, len: h },
        });
        flat_radius = flat_radius.max(worst(&weak, i, last).unwrap_or(h));
    }
    let radius = anchors.iter().map(|a| a.len).max().unwrap_or(1);
    let mut hints = Vec::with_capacity(last);
    let mut strong_radius = 1;
    for i in 0..last {
        if let Some((len, j)) = (i + 1..p).filter_map(|j| worst(&strong, i, j).map(|l| (l, j))).min() {
            hints.push(vec![j]);
            strong_radius = strong_radius.max(len);
            continue;
        }
        let options: Vec<Vec<(usize, usize)>> = strong
            .iter()
            .map(|o| (i + 1..p).filter_map(|j| o[i][j].map(|l| (j, l))).collect())
            .collect();
        if options.iter().any(|o| o.is_empty()) {
            hints.push(Vec::new());
            continue;
        }
        // greedy cover of the occurrences by hint positions
        let mut chosen: Vec<usize> = Vec::new();
        let mut open: Vec<usize> = (0..options.len()).collect();
        while !open.is_empty() {
            let j = (i + 1..p)
                .max_by_key(|&j| {
                    let c = open.iter().filter(|&&o| options[o].iter().any(|&(x, _)| x == j)).count();
                    (c, std::cmp::Reverse(j))
                })
                .unwrap();
            chosen.push(j);
            open.retain(|&o| !options[o].iter().any(|&(x, _)| x == j));
        }
        chosen.sort_unstable();
        for o in &options {
            let l = o.iter().filter(|(x, _)| chosen.contains(x)).map(|&(_, l)| l).min().unwrap();
            strong_radius = strong_radius.max(l);
        }
        hints.push(chosen);
    }
    if hints.iter().any(|h| h.is_empty()) {
        strong_radius = strong_radius.max(h);
    }
    LeafMeta {
        anchors,
        radius,
        flat_radius,
        hints,
        strong_radius,
    }
}
