//! Evaluation of a counting dag over an ordered host graph.
//!
//! All tries are keyed by host *positions*: the host is relabeled so that
//! vertex ids coincide with positions before any search runs.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::time::{Duration, Instant};

use log::debug;
use rayon::prelude::*;

use crate::compile::{build_counting_dag, CompileOptions};
use crate::dag::CountingDag;
use crate::error::{Error, Result};
use crate::graph::{Graph, LinearGraph};
use crate::num::Count;
use crate::order::{degeneracy_order, sreach_sets, wreach_sets, ReachSets};
use crate::tog::Tog;
use crate::trie::CountTrie;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Leaf vertices are drawn from weakly reachable sets.
    #[default]
    Weak,
    /// Leaf vertices are drawn from strongly reachable sets of hint vertices.
    Strong,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(Mode::Weak),
            "strong" => Ok(Mode::Strong),
            _ => Err(Error::Input(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RadiusPolicy {
    /// Reach sets of radius `|H|`.
    #[default]
    Full,
    /// The smallest radius the dag's leaf metadata asks for.
    Computed,
    /// A caller-chosen radius; refused if below the computed requirement
    /// unless `EngineConfig::unchecked_radius` is set.
    Fixed(usize),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EngineConfig {
    pub mode: Mode,
    pub radius: RadiusPolicy,
    /// Worker threads for leaf counting; `None` uses the rayon default.
    pub threads: Option<usize>,
    /// Weak mode only: draw each leaf vertex from the reach set of its
    /// anchor instead of from the set of the leaf's maximum.
    pub anchored: bool,
    pub unchecked_radius: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Timings {
    pub reach: Duration,
    pub leaves: Duration,
    pub propagate: Duration,
}

#[derive(Clone, Debug)]
pub struct CountReport<T> {
    /// Number of induced copies of the pattern.
    pub total: T,
    /// Per source node: `(node, multiplicity, embedding count)`.
    pub source_totals: Vec<(usize, u64, T)>,
    pub radius: usize,
    pub max_reach: usize,
    pub mean_reach: f64,
    pub timings: Timings,
}

fn needed(cfg: &EngineConfig, dag: &CountingDag) -> usize {
    match (cfg.mode, cfg.anchored) {
        (Mode::Weak, false) => dag.max_flat_radius(),
        (Mode::Weak, true) => dag.max_radius(),
        (Mode::Strong, _) => dag.max_strong_radius(),
    }
}

/// The reach-set radius used for `dag` under `cfg`.
pub fn required_radius(dag: &CountingDag, cfg: &EngineConfig) -> Result<usize> {
    let need = needed(cfg, dag);
    match cfg.radius {
        RadiusPolicy::Full => Ok(dag.pattern.n().max(need)),
        RadiusPolicy::Computed => Ok(need),
        RadiusPolicy::Fixed(0) => Err(Error::Input("radius must be at least 1".into())),
        RadiusPolicy::Fixed(r) if r < need && !cfg.unchecked_radius => Err(Error::Input(format!(
            "radius {r} is below the {need} this dag requires"
        ))),
        RadiusPolicy::Fixed(r) => Ok(r),
    }
}

/// Where the candidates for one leaf position come from.
enum Source<'a> {
    /// The set of the leaf's maximum.
    Top(&'a ReachSets),
    /// The set of an already fixed leaf vertex.
    At(&'a ReachSets, usize),
    /// Union of the sets of several fixed leaf vertices.
    Union(&'a ReachSets, &'a [usize]),
}

struct LeafSearch<'a> {
    g: &'a Graph,
    leaf: &'a Tog,
    sources: Vec<Source<'a>>,
    /// Length of the key prefix kept per tuple.
    keep: usize,
}

impl LeafSearch<'_> {
    fn run(&self, v: usize, out: &mut (Vec<u32>, u64)) {
        let p = self.leaf.n();
        let mut y = vec![0u32; p];
        y[p - 1] = v as u32;
        let mut scratch = Vec::new();
        self.extend(p - 1, &mut y, out, &mut scratch);
    }

    fn candidates<'s>(&'s self, i: usize, y: &[u32], scratch: &'s mut Vec<u32>) -> &'s [u32] {
        let p = y.len();
        match &self.sources[i] {
            Source::Top(r) => r.get(y[p - 1] as usize),
            Source::At(r, j) => r.get(y[*j] as usize),
            Source::Union(r, js) => {
                scratch.clear();
                for &j in js.iter() {
                    scratch.extend_from_slice(r.get(y[j] as usize));
                }
                scratch.sort_unstable();
                scratch.dedup();
                scratch
            }
        }
    }

    /// Fixes leaf vertices `fixed-1` down to `0`.
    fn extend(&self, fixed: usize, y: &mut [u32], out: &mut (Vec<u32>, u64), scratch: &mut Vec<u32>) {
        if fixed == 0 {
            out.0.extend_from_slice(&y[..self.keep]);
            out.1 += 1;
            return;
        }
        let i = fixed - 1;
        let bound = y[fixed];
        let mut local = std::mem::take(scratch);
        let cands: Vec<u32> = {
            let c = self.candidates(i, y, &mut local);
            let end = c.partition_point(|&x| x < bound);
            c[..end].to_vec()
        };
        for c in cands {
            let ok = (fixed..y.len()).all(|j| self.leaf.has_edge(i, j) == self.g.has_edge(c as usize, y[j] as usize));
            if ok {
                y[i] = c;
                self.extend(i, y, out, &mut local);
            }
        }
        *scratch = local;
    }
}

/// Runs the search from every admissible maximum and counts the kept
/// prefixes of all tuples found.
fn leaf_trie<T: Count>(g: &Graph, search: &LeafSearch<'_>, min_reach: impl Fn(usize) -> bool + Sync) -> Result<CountTrie<T>> {
    let keep = search.keep;
    let chunks: Vec<(Vec<u32>, u64)> = (0..g.n())
        .into_par_iter()
        .with_min_len(256)
        .fold(
            || (Vec::new(), 0),
            |mut acc, v| {
                if min_reach(v) {
                    search.run(v, &mut acc);
                }
                acc
            },
        )
        .collect();
    let found: u64 = chunks.iter().map(|c| c.1).sum();
    if keep == 0 {
        let c = T::from_u64(found).ok_or(Error::Overflow("leaf count"))?;
        return CountTrie::from_sorted(0, std::iter::once((&[][..], c)));
    }
    let mut keys: Vec<&[u32]> = Vec::with_capacity(found as usize);
    for c in &chunks {
        keys.extend(c.0.chunks_exact(keep));
    }
    keys.par_sort_unstable();
    let runs = keys.chunk_by(|a, b| a == b).map(|run| (run[0], T::from_usize(run.len()).unwrap()));
    CountTrie::from_sorted(keep, runs)
}

fn check_positions(g: &LinearGraph) -> Result<()> {
    if (0..g.n()).any(|v| g.position(v) != v) {
        return Err(Error::Input("host must be labeled by position".into()));
    }
    Ok(())
}

fn weak_leaf<T: Count>(g: &LinearGraph, dag: &CountingDag, id: usize, reach: &ReachSets, anchored: bool, keep: usize) -> Result<CountTrie<T>> {
    let node = &dag.nodes[id];
    let meta = node.leaf.as_ref().ok_or_else(|| Error::Input(format!("node {id} is not a leaf")))?;
    let p = node.tog.n();
    let sources = (0..p - 1)
        .map(|i| {
            if anchored {
                Source::At(reach, meta.anchors[i].target)
            } else {
                Source::Top(reach)
            }
        })
        .collect();
    let search = LeafSearch {
        g: g.graph(),
        leaf: &node.tog,
        sources,
        keep,
    };
    if anchored {
        leaf_trie(g.graph(), &search, |_| true)
    } else {
        leaf_trie(g.graph(), &search, |v| reach.get(v).len() >= p)
    }
}

fn strong_leaf<T: Count>(
    g: &LinearGraph,
    dag: &CountingDag,
    id: usize,
    sreach: &ReachSets,
    fallback: Option<&ReachSets>,
    keep: usize,
) -> Result<CountTrie<T>> {
    let node = &dag.nodes[id];
    let meta = node.leaf.as_ref().ok_or_else(|| Error::Input(format!("node {id} is not a leaf")))?;
    let p = node.tog.n();
    let mut sources = Vec::with_capacity(p - 1);
    for i in 0..p - 1 {
        sources.push(match meta.hints[i].as_slice() {
            [] => Source::Top(fallback.ok_or_else(|| {
                Error::Input(format!("leaf {id} has no hint for vertex {i} and no fallback sets"))
            })?),
            [j] => Source::At(sreach, *j),
            js => Source::Union(sreach, js),
        });
    }
    let search = LeafSearch {
        g: g.graph(),
        leaf: &node.tog,
        sources,
        keep,
    };
    leaf_trie(g.graph(), &search, |_| true)
}

/// Leaf tries in weak mode. `g` must be labeled by position. With
/// `anchored`, leaf vertex `i` is drawn from `reach` of its anchor;
/// otherwise every vertex is drawn from `reach` of the leaf's maximum.
pub fn count_leaves_weak<T: Count>(
    g: &LinearGraph,
    dag: &CountingDag,
    reach: &ReachSets,
    anchored: bool,
) -> Result<HashMap<usize, CountTrie<T>>> {
    check_positions(g)?;
    dag.leaf_ids()
        .into_iter()
        .map(|id| Ok((id, weak_leaf(g, dag, id, reach, anchored, dag.nodes[id].tog.n())?)))
        .collect()
}

/// Leaf tries in strong mode: leaf vertex `i` is drawn from the strongly
/// reachable sets of its hint vertices. Leaf vertices without hints fall
/// back to `fallback`, weak sets drawn from the leaf's maximum.
pub fn count_leaves_strong<T: Count>(
    g: &LinearGraph,
    dag: &CountingDag,
    sreach: &ReachSets,
    fallback: Option<&ReachSets>,
) -> Result<HashMap<usize, CountTrie<T>>> {
    check_positions(g)?;
    dag.leaf_ids()
        .into_iter()
        .map(|id| Ok((id, strong_leaf(g, dag, id, sreach, fallback, dag.nodes[id].tog.n())?)))
        .collect()
}

/// Deepest prefix any consumer of `id` reads: the stem length of each node
/// it feeds, or nothing beyond the total for a pure source.
fn read_depth(dag: &CountingDag, id: usize) -> usize {
    let stem = |v: usize| dag.nodes[v].tog.stem_len();
    let prods = dag.prod_edges.iter().filter(|e| e.left == id || e.right == id).map(|e| stem(e.node));
    let subs = dag.sub_edges.iter().filter(|e| e.defect == id).map(|e| stem(e.node));
    prods.chain(subs).max().unwrap_or(0)
}

/// Evaluates every internal node bottom-up. Returns the tries of the source
/// nodes, or of all nodes with `keep_all`.
pub fn propagate<T: Count>(
    dag: &CountingDag,
    mut leaves: HashMap<usize, CountTrie<T>>,
    keep_all: bool,
) -> Result<HashMap<usize, CountTrie<T>>> {
    propagate_with(dag, |id| leaves.remove(&id).ok_or_else(|| Error::Input(format!("missing trie for leaf {id}"))), keep_all)
}

/// [`propagate`] with leaf tries produced on demand, each one right before
/// its first use, so only live tries are held.
pub fn propagate_with<T: Count>(
    dag: &CountingDag,
    mut leaf: impl FnMut(usize) -> Result<CountTrie<T>>,
    keep_all: bool,
) -> Result<HashMap<usize, CountTrie<T>>> {
    let n = dag.nodes.len();
    let mut uses = vec![0usize; n];
    for e in &dag.prod_edges {
        uses[e.left] += 1;
        uses[e.right] += 1;
    }
    for e in &dag.sub_edges {
        uses[e.defect] += 1;
    }
    let mut tries: HashMap<usize, CountTrie<T>> = HashMap::new();
    for id in dag.bottom_up_order()? {
        let node = &dag.nodes[id];
        let trie = if node.is_leaf() {
            if !(keep_all || uses[id] == 0) || tries.contains_key(&id) {
                continue;
            }
            leaf(id)?
        } else {
            let e = dag.prod_edge(id).expect("validated dag");
            for child in [e.left, e.right].into_iter().chain(dag.sub_edges_of(id).map(|s| s.defect)) {
                if let Entry::Vacant(slot) = tries.entry(child) {
                    let t = leaf(child)?;
                    debug!("leaf {child}: {} keys", t.key_count());
                    slot.insert(t);
                }
            }
            let k = node.tog.stem_len();
            let mut c = tries[&e.left].mul_at_depth(&tries[&e.right], k)?;
            for s in dag.sub_edges_of(id) {
                let scaled = tries[&s.defect].truncated(k)?.scale(&s.gamma).map_err(|err| match err {
                    Error::Integrality(m) => {
                        Error::Integrality(format!("node {id}, defect {}: {m}", s.defect))
                    }
                    other => other,
                })?;
                c = c.sub_at_depth(&scaled, k)?;
            }
            for child in [e.left, e.right]
                .into_iter()
                .chain(dag.sub_edges_of(id).map(|s| s.defect))
            {
                uses[child] -= 1;
                if uses[child] == 0 && !keep_all && !dag.nodes[child].is_source() {
                    tries.remove(&child);
                }
            }
            c
        };
        debug!("node {id}: {} keys", trie.key_count());
        tries.insert(id, trie);
    }
    if !keep_all {
        tries.retain(|&id, _| dag.nodes[id].is_source());
    }
    Ok(tries)
}

/// `Σ μ · total(source)` divided exactly by `|Aut(H)|`.
pub fn aggregate<T: Count>(dag: &CountingDag, tries: &HashMap<usize, CountTrie<T>>) -> Result<(T, Vec<(usize, u64, T)>)> {
    let mut sum = T::zero();
    let mut per_source = Vec::new();
    for (id, mu) in dag.sources() {
        let t = tries
            .get(&id)
            .ok_or_else(|| Error::Input(format!("missing trie for source {id}")))?
            .total()
            .clone();
        if t.is_negative() {
            return Err(Error::Invariant(format!("source {id} has negative count {t}")));
        }
        let m = T::from_u64(mu).ok_or(Error::Overflow("multiplicity"))?;
        sum = sum
            .checked_add(&t.checked_mul(&m).ok_or(Error::Overflow("aggregate"))?)
            .ok_or(Error::Overflow("aggregate"))?;
        per_source.push((id, mu, t));
    }
    let aut = T::from_u64(dag.aut).ok_or(Error::Overflow("automorphisms"))?;
    let (q, r) = sum.div_rem(&aut);
    if !r.is_zero() {
        return Err(Error::Invariant(format!("{sum} embeddings are not divisible by {}", dag.aut)));
    }
    Ok((q, per_source))
}

fn mean(r: &ReachSets) -> (usize, f64) {
    (r.max_size(), r.mean_size())
}

/// Counts induced copies of the dag's pattern in an ordered host.
pub fn count_induced<T: Count>(g: &LinearGraph, dag: &CountingDag, cfg: &EngineConfig) -> Result<CountReport<T>> {
    let run = || -> Result<CountReport<T>> {
        let radius = required_radius(dag, cfg)?;
        let pg = g.to_position_labels();
        let mut timings = Timings::default();
        let t0 = Instant::now();
        let mut leaf_time = std::time::Duration::ZERO;
        let (tries, (max_reach, mean_reach)) = match cfg.mode {
            Mode::Weak => {
                let w = wreach_sets(&pg, radius);
                timings.reach = t0.elapsed();
                let tries = propagate_with(
                    dag,
                    |id| {
                        let t = Instant::now();
                        let trie = weak_leaf(&pg, dag, id, &w, cfg.anchored, read_depth(dag, id));
                        leaf_time += t.elapsed();
                        trie
                    },
                    false,
                )?;
                (tries, mean(&w))
            }
            Mode::Strong => {
                let s = sreach_sets(&pg, radius);
                let needs_fallback = dag
                    .nodes
                    .iter()
                    .filter_map(|n| n.leaf.as_ref())
                    .any(|m| m.hints.iter().any(|h| h.is_empty()));
                let w = needs_fallback.then(|| wreach_sets(&pg, radius.max(dag.pattern.n())));
                timings.reach = t0.elapsed();
                let tries = propagate_with(
                    dag,
                    |id| {
                        let t = Instant::now();
                        let trie = strong_leaf(&pg, dag, id, &s, w.as_ref(), read_depth(dag, id));
                        leaf_time += t.elapsed();
                        trie
                    },
                    false,
                )?;
                (tries, mean(&s))
            }
        };
        timings.leaves = leaf_time;
        timings.propagate = t0.elapsed() - timings.reach - leaf_time;
        let (total, source_totals) = aggregate(dag, &tries)?;
        Ok(CountReport {
            total,
            source_totals,
            radius,
            max_reach,
            mean_reach,
            timings,
        })
    };
    match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Input(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

/// Compiles `h`, orders `g` by degeneracy and counts with 128-bit integers.
pub fn count_pattern(g: &Graph, h: &Graph, cfg: &EngineConfig) -> Result<CountReport<i128>> {
    let dag = build_counting_dag(h, &CompileOptions::default())?;
    count_induced(&degeneracy_order(g), &dag, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{clique, cycle, lookup, path, star};

    fn all_configs() -> Vec<EngineConfig> {
        let mut out = Vec::new();
        for mode in [Mode::Weak, Mode::Strong] {
            for radius in [RadiusPolicy::Full, RadiusPolicy::Computed] {
                for anchored in [false, true] {
                    out.push(EngineConfig {
                        mode,
                        radius,
                        anchored,
                        ..Default::default()
                    });
                }
            }
        }
        out
    }

    #[test]
    fn micro_examples() {
        let k3 = clique(3);
        let k13 = star(3);
        for cfg in all_configs() {
            assert_eq!(count_pattern(&k3, &path(3), &cfg).unwrap().total, 0);
            assert_eq!(count_pattern(&k13, &path(3), &cfg).unwrap().total, 3);
            assert_eq!(count_pattern(&clique(5), &clique(4), &cfg).unwrap().total, 5);
            assert_eq!(count_pattern(&clique(4), &clique(3), &cfg).unwrap().total, 4);
            assert_eq!(count_pattern(&cycle(6), &path(4), &cfg).unwrap().total, 6);
        }
    }

    #[test]
    fn edge_leaf_on_star() {
        let dag = build_counting_dag(&path(3), &CompileOptions::default()).unwrap();
        let edge = dag.nodes.iter().position(|n| n.tog.n() == 2).unwrap();
        // center first
        let g = LinearGraph::identity(star(3));
        let w = wreach_sets(&g, 3);
        let leaves = count_leaves_weak::<i64>(&g, &dag, &w, false).unwrap();
        assert_eq!(leaves[&edge].prefix_query(&[0]).unwrap(), 3);
        let tri = dag.nodes.iter().position(|n| n.tog.n() == 3 && n.tog.edge_count() == 3).unwrap();
        assert!(leaves[&tri].is_empty());
        let all = propagate(&dag, leaves, true).unwrap();
        let star_node = dag.prod_edges[0].node;
        assert_eq!(all[&star_node].prefix_query(&[0]).unwrap(), 6);
    }

    #[test]
    fn strong_mode_uses_hints() {
        let g = LinearGraph::identity(lookup("bull").unwrap());
        let dag = build_counting_dag(&path(3), &CompileOptions::default()).unwrap();
        let s = sreach_sets(&g, 3);
        let w = wreach_sets(&g, 3);
        let strong: HashMap<usize, CountTrie<i64>> = count_leaves_strong(&g, &dag, &s, None).unwrap();
        let weak: HashMap<usize, CountTrie<i64>> = count_leaves_weak(&g, &dag, &w, false).unwrap();
        let a = aggregate(&dag, &propagate(&dag, strong, false).unwrap()).unwrap().0;
        let b = aggregate(&dag, &propagate(&dag, weak, false).unwrap()).unwrap().0;
        assert_eq!(a, b);
    }

    #[test]
    fn radius_policies() {
        let dag = build_counting_dag(&clique(4), &CompileOptions::default()).unwrap();
        let cfg = EngineConfig {
            radius: RadiusPolicy::Computed,
            anchored: true,
            ..Default::default()
        };
        assert_eq!(required_radius(&dag, &cfg).unwrap(), 1);
        assert_eq!(required_radius(&dag, &EngineConfig::default()).unwrap(), 4);
        let dag = build_counting_dag(&path(4), &CompileOptions::default()).unwrap();
        let low = EngineConfig {
            radius: RadiusPolicy::Fixed(1),
            anchored: true,
            ..Default::default()
        };
        assert!(required_radius(&dag, &low).is_err());
        let unchecked = EngineConfig { unchecked_radius: true, ..low };
        assert_eq!(required_radius(&dag, &unchecked).unwrap(), 1);
    }

    #[test]
    fn big_integers_agree() {
        let g = LinearGraph::identity(cycle(7));
        let dag = build_counting_dag(&path(3), &CompileOptions::default()).unwrap();
        let a: CountReport<i64> = count_induced(&g, &dag, &EngineConfig::default()).unwrap();
        let b: CountReport<num_bigint::BigInt> = count_induced(&g, &dag, &EngineConfig::default()).unwrap();
        assert_eq!(a.total, 7);
        assert_eq!(b.total, 7.into());
    }
}
