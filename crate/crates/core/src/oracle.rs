//! Brute-force ground truth for desk-sized instances.
//!
//! Nothing here calls into the compiler or the counting engine; the graph
//! types are used as plain data only.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, LinearGraph};
use crate::tog::Tog;

#[derive(Clone, Copy, Debug)]
pub struct OracleLimits {
    pub max_pattern: usize,
    pub max_host: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_pattern: 6,
            max_host: 60,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub count: u64,
    /// Vertex sets (sorted ids) inducing a copy of the pattern, when asked for.
    pub witnesses: Option<Vec<Vec<usize>>>,
}

fn pair_index(i: usize, j: usize) -> usize {
    // i < j
    j * (j - 1) / 2 + i
}

/// Adjacency of `vs` (in the given order) packed into upper-triangle bits.
fn packed(g: &Graph, vs: &[usize]) -> u32 {
    let mut key = 0u32;
    for j in 0..vs.len() {
        for i in 0..j {
            if g.has_edge(vs[i], vs[j]) {
                key |= 1 << pair_index(i, j);
            }
        }
    }
    key
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
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
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Counts vertex subsets of `g` inducing a graph isomorphic to `h`.
pub fn oracle_count_induced(g: &Graph, h: &Graph, witnesses: bool, limits: OracleLimits) -> Result<OracleResult> {
    let k = h.n();
    if k == 0 || k > limits.max_pattern || g.n() > limits.max_host {
        return Err(Error::Guardrail(format!(
            "oracle handles patterns up to {} and hosts up to {} vertices, got {k} and {}",
            limits.max_pattern,
            limits.max_host,
            g.n()
        )));
    }
    let mut shapes = vec![false; 1 << (k * (k - 1) / 2)];
    for p in permutations(k) {
        shapes[packed(h, &p) as usize] = true;
    }

    fn rec(g: &Graph, k: usize, shapes: &[bool], cur: &mut Vec<usize>, key: u32, wit: &mut Option<Vec<Vec<usize>>>) -> u64 {
        let i = cur.len();
        if i == k {
            if shapes[key as usize] {
                if let Some(w) = wit {
                    w.push(cur.clone());
                }
                return 1;
            }
            return 0;
        }
        let start = cur.last().map_or(0, |&v| v + 1);
        let mut total = 0;
        for c in start..=g.n() - (k - i) {
            let mut next = key;
            for (j, &u) in cur.iter().enumerate() {
                if g.has_edge(u, c) {
                    next |= 1 << pair_index(j, i);
                }
            }
            cur.push(c);
            total += rec(g, k, shapes, cur, next, wit);
            cur.pop();
        }
        total
    }

    if g.n() < k {
        return Ok(OracleResult {
            count: 0,
            witnesses: witnesses.then(Vec::new),
        });
    }
    let parts: Vec<(u64, Option<Vec<Vec<usize>>>)> = (0..=g.n() - k)
        .into_par_iter()
        .map(|first| {
            let mut wit = witnesses.then(Vec::new);
            let c = rec(g, k, &shapes, &mut vec![first], 0, &mut wit);
            (c, wit)
        })
        .collect();
    let count = parts.iter().map(|p| p.0).sum();
    let witnesses = witnesses.then(|| parts.into_iter().flat_map(|p| p.1.unwrap()).collect());
    Ok(OracleResult { count, witnesses })
}

/// Ancestors of each vertex including itself, from a parent array.
fn ancestors_incl(parent: &[Option<usize>]) -> Vec<u64> {
    (0..parent.len())
        .map(|v| {
            let mut m = 1u64 << v;
            let mut cur = v;
            while let Some(p) = parent[cur] {
                m |= 1 << p;
                cur = p;
            }
            m
        })
        .collect()
}

/// Maps `φ: V(h) → V(g)` that are injective, preserve edges and non-edges,
/// send `h`'s tree order into `g`'s linear order and extend
/// `h.stem()[i] ↦ prefix[i]`.
pub fn oracle_embeddings(h: &Tog, g: &LinearGraph, prefix: &[usize]) -> Result<u64> {
    if prefix.len() > h.stem().len() {
        return Err(Error::Input("prefix is longer than the stem".into()));
    }
    if prefix.iter().any(|&y| y >= g.n()) {
        return Err(Error::Input("prefix vertex out of range".into()));
    }
    let free = h.n() - prefix.len();
    if (g.n() as f64).powi(free as i32) > 1e10 {
        return Err(Error::Guardrail(format!("{} free pattern vertices on {} host vertices", free, g.n())));
    }
    let anc = ancestors_incl(h.parents());
    let mut phi: Vec<Option<usize>> = vec![None; h.n()];
    for (&x, &y) in h.stem().iter().zip(prefix) {
        phi[x] = Some(y);
    }
    let fits = |phi: &[Option<usize>], x: usize, y: usize| {
        phi.iter().enumerate().all(|(u, img)| match *img {
            None => true,
            Some(_) if u == x => true,
            Some(yu) => {
                yu != y
                    && h.has_edge(u, x) == g.graph().has_edge(yu, y)
                    && (anc[x] & (1 << u) == 0 || g.position(yu) < g.position(y))
                    && (anc[u] & (1 << x) == 0 || g.position(y) < g.position(yu))
            }
        })
    };
    for &x in &h.stem()[..prefix.len()] {
        if !fits(&phi, x, phi[x].unwrap()) {
            return Ok(0);
        }
    }
    fn rec(h: &Tog, g: &LinearGraph, phi: &mut Vec<Option<usize>>, fits: &dyn Fn(&[Option<usize>], usize, usize) -> bool) -> u64 {
        let Some(x) = (0..h.n()).find(|&x| phi[x].is_none()) else {
            return 1;
        };
        let mut total = 0;
        for y in 0..g.n() {
            if fits(phi, x, y) {
                phi[x] = Some(y);
                total += rec(h, g, phi, fits);
                phi[x] = None;
            }
        }
        total
    }
    Ok(rec(h, g, &mut phi, &fits))
}

/// Weak and strong `r`-reachable sets by enumerating every simple path of
/// length at most `r`. Sets contain their own vertex and are sorted by
/// position.
pub fn oracle_reach_sets(g: &LinearGraph, r: usize) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>)> {
    if g.n() > 30 {
        return Err(Error::Guardrail(format!("path enumeration on {} vertices", g.n())));
    }
    let pos = |v: usize| g.position(v);
    let mut weak = Vec::with_capacity(g.n());
    let mut strong = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let mut w = BTreeSet::new();
        let mut s = BTreeSet::new();
        // (path, min position along it, whether every vertex after v lies after v)
        let mut stack = vec![(vec![v], pos(v), true)];
        while let Some((path, low, inner_after)) = stack.pop() {
            let end = *path.last().unwrap();
            if pos(end) == low {
                w.insert((pos(end), end));
            }
            if end == v || (pos(end) < pos(v) && inner_after) {
                s.insert((pos(end), end));
            }
            if path.len() > r {
                continue;
            }
            for &u in g.graph().neighbors(end) {
                let u = u as usize;
                if path.contains(&u) {
                    continue;
                }
                let mut next = path.clone();
                next.push(u);
                let after = inner_after && (end == v || pos(end) > pos(v));
                stack.push((next, low.min(pos(u)), after));
            }
        }
        weak.push(w.into_iter().map(|p| p.1).collect());
        strong.push(s.into_iter().map(|p| p.1).collect());
    }
    Ok((weak, strong))
}

/// Elimination-tree parents of the vertices in `mask`, visited in `order`.
fn relax(adj: &[u64], mask: u64, rank: &[usize], parent: &mut [Option<usize>], above: Option<usize>) -> usize {
    let mut rest = mask;
    let mut comps = 0;
    while rest != 0 {
        let seed = rest.trailing_zeros() as usize;
        let mut comp = 1u64 << seed;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj[v] & mask & !comp;
            comp |= new;
            frontier |= new;
        }
        rest &= !comp;
        comps += 1;
        let low = (0..adj.len())
            .filter(|&v| comp & (1 << v) != 0)
            .min_by_key(|&v| rank[v])
            .unwrap();
        parent[low] = above;
        relax(adj, comp & !(1 << low), rank, parent, Some(low));
    }
    comps
}

/// Whether `phi` (partial, over `dom`) sends tog `(a_adj, a_anc)` into tog
/// `(b_adj, b_anc)`.
fn maps_into(a_adj: &[u64], a_anc: &[u64], dom: u64, b_adj: &[u64], b_anc: &[u64], phi: &[usize]) -> bool {
    let vs: Vec<usize> = (0..a_adj.len()).filter(|&v| dom & (1 << v) != 0).collect();
    vs.iter().all(|&u| {
        vs.iter().all(|&v| {
            u == v
                || ((a_adj[u] >> v & 1 == 1) == (b_adj[phi[u]] >> phi[v] & 1 == 1)
                    && (a_anc[v] >> u & 1 == 0 || b_anc[phi[v]] >> phi[u] & 1 == 1))
        })
    })
}

fn any_embedding(a_adj: &[u64], a_anc: &[u64], b_adj: &[u64], b_anc: &[u64], b_verts: u64) -> bool {
    fn rec(a_adj: &[u64], a_anc: &[u64], b_adj: &[u64], b_anc: &[u64], free: u64, phi: &mut Vec<usize>) -> bool {
        let x = phi.len();
        if x == a_adj.len() {
            return true;
        }
        let mut f = free;
        while f != 0 {
            let y = f.trailing_zeros() as usize;
            f &= f - 1;
            let ok = (0..x).all(|u| {
                (a_adj[u] >> x & 1 == 1) == (b_adj[phi[u]] >> y & 1 == 1)
                    && (a_anc[x] >> u & 1 == 0 || b_anc[y] >> phi[u] & 1 == 1)
                    && (a_anc[u] >> x & 1 == 0 || b_anc[phi[u]] >> y & 1 == 1)
            });
            if ok {
                phi.push(y);
                if rec(a_adj, a_anc, b_adj, b_anc, free & !(1 << y), phi) {
                    return true;
                }
                phi.pop();
            }
        }
        false
    }
    rec(a_adj, a_anc, b_adj, b_anc, b_verts, &mut Vec::new())
}

/// All defects of the pieces `v1`, `v2` (vertex masks of `h` meeting in its
/// stem), found by checking the defining conditions on every candidate
/// relaxation. Results are in canonical form.
pub fn oracle_defects(h: &Tog, v1: u64, v2: u64) -> Result<Vec<Tog>> {
    let n = h.n();
    if n > 5 {
        return Err(Error::Guardrail(format!("defect search on a {n}-vertex pattern")));
    }
    let stem: u64 = h.stem().iter().fold(0, |m, &v| m | 1 << v);
    if v1 & v2 != stem || v1 | v2 != (1u64 << n) - 1 {
        return Err(Error::Input("pieces must cover the pattern and meet in its stem".into()));
    }
    let h_adj = h.adjacency().to_vec();
    let h_anc = ancestors_incl(h.parents());
    let p1: Vec<usize> = (0..n).filter(|&v| (v1 & !stem) >> v & 1 == 1).collect();
    let p2: Vec<usize> = (0..n).filter(|&v| (v2 & !stem) >> v & 1 == 1).collect();
    let mut found = BTreeSet::new();

    // sigma[i]: the V1 vertex that p2[i] is identified with, if any
    let mut sigmas: Vec<Vec<Option<usize>>> = vec![vec![]];
    for _ in &p2 {
        let mut next = Vec::new();
        for s in &sigmas {
            let mut none = s.clone();
            none.push(None);
            next.push(none);
            for &a in &p1 {
                if !s.contains(&Some(a)) {
                    let mut t = s.clone();
                    t.push(Some(a));
                    next.push(t);
                }
            }
        }
        sigmas = next;
    }

    for sigma in sigmas {
        let mut phi: Vec<usize> = (0..n).collect();
        let mut kept = v1;
        for (i, &b) in p2.iter().enumerate() {
            match sigma[i] {
                Some(a) => phi[b] = a,
                None => kept |= 1 << b,
            }
        }
        let image: u64 = (0..n).filter(|&v| v2 >> v & 1 == 1).fold(0, |m, v| m | 1 << phi[v]);
        // forced adjacency, or None where a pair is left open
        let mut forced = vec![vec![None::<bool>; n]; n];
        let mut clash = false;
        let mut set = |u: usize, v: usize, e: bool, forced: &mut Vec<Vec<Option<bool>>>| {
            for (a, b) in [(u, v), (v, u)] {
                match forced[a][b] {
                    Some(old) if old != e => clash = true,
                    _ => forced[a][b] = Some(e),
                }
            }
        };
        for u in 0..n {
            for v in 0..n {
                if u < v && v1 >> u & v1 >> v & 1 == 1 {
                    set(u, v, h_adj[u] >> v & 1 == 1, &mut forced);
                }
                if u < v && v2 >> u & v2 >> v & 1 == 1 {
                    set(phi[u], phi[v], h_adj[u] >> v & 1 == 1, &mut forced);
                }
            }
        }
        if clash {
            continue;
        }
        let verts: Vec<usize> = (0..n).filter(|&v| kept >> v & 1 == 1).collect();
        let open: Vec<(usize, usize)> = verts
            .iter()
            .flat_map(|&u| verts.iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| u < v && forced[u][v].is_none())
            .collect();
        debug_assert!(open.iter().all(|&(u, v)| image >> u & image >> v & 1 == 0 || v1 >> u & v1 >> v & 1 == 0));
        for extra in 0u64..1 << open.len() {
            let mut adj = vec![0u64; n];
            for &u in &verts {
                for &v in &verts {
                    if forced[u][v] == Some(true) {
                        adj[u] |= 1 << v;
                    }
                }
            }
            for (i, &(u, v)) in open.iter().enumerate() {
                if extra >> i & 1 == 1 {
                    adj[u] |= 1 << v;
                    adj[v] |= 1 << u;
                }
            }
            for order in permutations(verts.len()) {
                let mut rank = vec![usize::MAX; n];
                for (r, &i) in order.iter().enumerate() {
                    rank[verts[i]] = r;
                }
                let mut parent = vec![None; n];
                if relax(&adj, kept, &rank, &mut parent, None) != 1 {
                    break; // disconnected: no order helps
                }
                let d_anc = ancestors_incl(&parent);
                let id: Vec<usize> = (0..n).collect();
                if !maps_into(&h_adj, &h_anc, v1, &adj, &d_anc, &id)
                    || !maps_into(&h_adj, &h_anc, v2, &adj, &d_anc, &phi)
                    || any_embedding(&h_adj, &h_anc, &adj, &d_anc, kept)
                {
                    continue;
                }
                let index = |v: usize| verts.iter().position(|&x| x == v).unwrap();
                let c_adj = verts
                    .iter()
                    .map(|&u| verts.iter().enumerate().filter(|&(_, &v)| adj[u] >> v & 1 == 1).fold(0u64, |m, (j, _)| m | 1 << j))
                    .collect();
                let c_parent = verts.iter().map(|&u| parent[u].map(index)).collect();
                found.insert(Tog::new(c_adj, c_parent)?.canonical());
            }
        }
    }
    Ok(found.into_iter().collect())
}
