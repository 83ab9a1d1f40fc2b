#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsecount::engine::{EngineConfig, Mode, RadiusPolicy};
use sparsecount::{Graph, LinearGraph, Tog};

pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn shuffled(g: &Graph, seed: u64) -> LinearGraph {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    LinearGraph::from_order(g.clone(), order).unwrap()
}

pub fn configs() -> Vec<EngineConfig> {
    let mut out = Vec::new();
    for mode in [Mode::Weak, Mode::Strong] {
        for radius in [RadiusPolicy::Full, RadiusPolicy::Computed] {
            for anchored in [false, true] {
                if mode == Mode::Strong && anchored {
                    continue;
                }
                out.push(EngineConfig { mode, radius, anchored, ..Default::default() });
            }
        }
    }
    out
}

/// Maps `t → d` fixing the first `t.stem_len()` stem vertices, whose
/// restrictions to both vertex sets `m1`, `m2` are tree-order preserving
/// induced embeddings; with `covering`, the image must be all of `d`.
pub fn piece_pair_maps(t: &Tog, m1: u64, m2: u64, d: &Tog, covering: bool) -> u64 {
    let n = t.n();
    let k = t.stem_len();
    let free: Vec<usize> = (0..n).filter(|x| !t.stem()[..k].contains(x)).collect();
    let mut phi = vec![0usize; n];
    for i in 0..k {
        phi[t.stem()[i]] = d.stem()[i];
    }
    let embeds = |phi: &[usize], mask: u64| {
        let vs: Vec<usize> = (0..n).filter(|&u| mask >> u & 1 == 1).collect();
        vs.iter().all(|&u| {
            vs.iter().all(|&v| {
                u == v
                    || (phi[u] != phi[v]
                        && t.has_edge(u, v) == d.has_edge(phi[u], phi[v])
                        && (!t.precedes_eq(u, v) || d.precedes_eq(phi[u], phi[v])))
            })
        })
    };
    let mut count = 0;
    for code in 0..d.n().pow(free.len() as u32) {
        let mut c = code;
        for &x in &free {
            phi[x] = c % d.n();
            c /= d.n();
        }
        let image: u64 = phi.iter().fold(0, |acc, &y| acc | 1 << y);
        if embeds(&phi, m1) && embeds(&phi, m2) && (!covering || image.count_ones() as usize == d.n()) {
            count += 1;
        }
    }
    count
}

/// Automorphisms of `d` (edges and tree order) fixing its first `k` stem
/// vertices.
pub fn rooted_automorphisms(d: &Tog, k: usize) -> u64 {
    let n = d.n();
    let mut count = 0;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let fixed = d.stem()[..k].iter().all(|&s| p[s] == s);
        let ok = (0..n).all(|u| {
            (0..n).all(|v| d.has_edge(u, v) == d.has_edge(p[u], p[v]) && d.precedes_eq(u, v) == d.precedes_eq(p[u], p[v]))
        });
        if fixed && ok {
            count += 1;
        }
    });
    count
}

fn permute(p: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, f);
        p.swap(i, j);
    }
}
