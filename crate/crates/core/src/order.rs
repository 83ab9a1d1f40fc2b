//! Host orderings and weakly/strongly r-reachable sets.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use crate::graph::{Graph, LinearGraph};

/// Per-vertex reachable sets for a fixed radius. Each set contains the vertex
/// itself and is sorted by host position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachSets {
    radius: usize,
    sets: Vec<Vec<u32>>,
}

impl ReachSets {
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// The set of `v`, sorted by position, `v` last.
    pub fn get(&self, v: usize) -> &[u32] {
        &self.sets[v]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn max_size(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn mean_size(&self) -> f64 {
        if self.sets.is_empty() {
            return 0.0;
        }
        self.sets.iter().map(Vec::len).sum::<usize>() as f64 / self.sets.len() as f64
    }
}

/// Summary of reachable-set sizes for one ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderStats {
    pub radius: usize,
    pub max_weak: usize,
    pub mean_weak: f64,
    pub max_strong: usize,
    pub mean_strong: f64,
}

/// Smallest-last ordering: repeatedly remove a vertex of minimum remaining
/// degree (smallest id on ties) and fill positions from the right.
pub fn degeneracy_order(g: &Graph) -> LinearGraph {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..n).map(|v| Reverse((deg[v], v))).collect();
    let mut order = vec![0usize; n];
    let mut next = n;
    while let Some(Reverse((d, v))) = heap.pop() {
        if removed[v] || d != deg[v] {
            continue;
        }
        removed[v] = true;
        next -= 1;
        order[next] = v;
        for &u in g.neighbors(v) {
            let u = u as usize;
            if !removed[u] {
                deg[u] -= 1;
                heap.push(Reverse((deg[u], u)));
            }
        }
    }
    LinearGraph::from_order(g.clone(), order).expect("every vertex is removed once")
}

/// Greedy right-to-left ordering that places, at each step, the vertex with
/// the fewest already-placed vertices reaching it by paths of length at most
/// `r` through placed vertices. Ties go to smaller degree, then smaller id.
pub fn wreach_greedy_order(g: &Graph, r: usize) -> LinearGraph {
    assert!(r >= 1, "radius must be at least 1");
    let n = g.n();
    let mut placed = vec![false; n];
    let mut score = vec![0usize; n];
    // positions fill from the right, so the larger id wins an id tie and an
    // edgeless graph comes out in identity order
    let mut heap: BinaryHeap<Reverse<(usize, usize, Reverse<usize>)>> =
        (0..n).map(|v| Reverse((0, g.degree(v), Reverse(v)))).collect();
    let mut order = vec![0usize; n];
    let mut next = n;
    let mut dist = vec![usize::MAX; n];
    let mut touched: Vec<usize> = Vec::new();
    while let Some(Reverse((s, _, Reverse(v)))) = heap.pop() {
        if placed[v] || s != score[v] {
            continue;
        }
        placed[v] = true;
        next -= 1;
        order[next] = v;
        // unplaced vertices within distance r of v through placed vertices
        let mut affected = Vec::new();
        let mut queue = VecDeque::new();
        dist[v] = 0;
        touched.push(v);
        queue.push_back(v);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x];
            if dx == r {
                continue;
            }
            for &w in g.neighbors(x) {
                let w = w as usize;
                if dist[w] != usize::MAX {
                    continue;
                }
                dist[w] = dx + 1;
                touched.push(w);
                if placed[w] {
                    queue.push_back(w);
                } else {
                    affected.push(w);
                }
            }
        }
        for &x in &touched {
            dist[x] = usize::MAX;
        }
        touched.clear();
        for u in affected {
            let s = placed_reach_count(g, &placed, u, r, &mut dist, &mut touched);
            if s != score[u] {
                score[u] = s;
                heap.push(Reverse((s, g.degree(u), Reverse(u))));
            }
        }
    }
    LinearGraph::from_order(g.clone(), order).expect("every vertex is placed once")
}

fn placed_reach_count(
    g: &Graph,
    placed: &[bool],
    v: usize,
    r: usize,
    dist: &mut [usize],
    touched: &mut Vec<usize>,
) -> usize {
    let mut queue = VecDeque::new();
    dist[v] = 0;
    touched.push(v);
    queue.push_back(v);
    let mut count = 0;
    while let Some(x) = queue.pop_front() {
        let dx = dist[x];
        if dx == r {
            continue;
        }
        for &w in g.neighbors(x) {
            let w = w as usize;
            if placed[w] && dist[w] == usize::MAX {
                dist[w] = dx + 1;
                touched.push(w);
                count += 1;
                queue.push_back(w);
            }
        }
    }
    for &x in touched.iter() {
        dist[x] = usize::MAX;
    }
    touched.clear();
    count
}

/// Bounded BFS from `src` through vertices accepted by `allow`, returning
/// every vertex reached within `depth` steps (excluding `src`) with its
/// distance.
fn bounded_bfs(g: &Graph, src: usize, depth: usize, allow: impl Fn(usize) -> bool) -> Vec<(usize, usize)> {
    let mut seen = std::collections::HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(src, 0usize);
    queue.push_back(src);
    let mut out = Vec::new();
    while let Some(x) = queue.pop_front() {
        let dx = seen[&x];
        if dx == depth {
            continue;
        }
        for &w in g.neighbors(x) {
            let w = w as usize;
            if !allow(w) || seen.contains_key(&w) {
                continue;
            }
            seen.insert(w, dx + 1);
            out.push((w, dx + 1));
            queue.push_back(w);
        }
    }
    out
}

fn sort_by_position(g: &LinearGraph, sets: &mut [Vec<u32>]) {
    sets.par_iter_mut().for_each(|s| {
        s.sort_unstable_by_key(|&u| g.position(u as usize));
        s.dedup();
    });
}

/// Weakly r-reachable sets: `u ∈ W[v]` iff some path of length at most `r`
/// between `v` and `u` has `u` as its minimum.
pub fn wreach_sets(g: &LinearGraph, r: usize) -> ReachSets {
    assert!(r >= 1, "radius must be at least 1");
    let n = g.n();
    let found: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let pu = g.position(u);
            bounded_bfs(g.graph(), u, r, |w| g.position(w) > pu)
                .into_iter()
                .map(|(w, _)| w)
                .collect()
        })
        .collect();
    let mut sets: Vec<Vec<u32>> = (0..n).map(|v| vec![v as u32]).collect();
    for (u, reached) in found.into_iter().enumerate() {
        for w in reached {
            sets[w].push(u as u32);
        }
    }
    sort_by_position(g, &mut sets);
    ReachSets { radius: r, sets }
}

/// Strongly r-reachable sets: `u ∈ S[v]` iff `u` precedes `v` and some path
/// of length at most `r` from `v` to `u` has all other vertices after `v`.
pub fn sreach_sets(g: &LinearGraph, r: usize) -> ReachSets {
    assert!(r >= 1, "radius must be at least 1");
    let n = g.n();
    let mut sets: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|v| {
            let pv = g.position(v);
            let mut set = vec![v as u32];
            let mut inner = vec![v];
            inner.extend(
                bounded_bfs(g.graph(), v, r - 1, |w| g.position(w) > pv)
                    .into_iter()
                    .map(|(w, _)| w),
            );
            for x in inner {
                for &u in g.graph().neighbors(x) {
                    if g.position(u as usize) < pv {
                        set.push(u);
                    }
                }
            }
            set
        })
        .collect();
    sort_by_position(g, &mut sets);
    ReachSets { radius: r, sets }
}

pub fn order_stats(g: &LinearGraph, r: usize) -> OrderStats {
    let w = wreach_sets(g, r);
    let s = sreach_sets(g, r);
    OrderStats {
        radius: r,
        max_weak: w.max_size(),
        mean_weak: w.mean_size(),
        max_strong: s.max_size(),
        mean_strong: s.mean_size(),
    }
}
