//! Brute-force ordered embedding counts between pattern-sized togs.
//!
//! Embeddings are induced: edges and non-edges are both preserved, and the
//! tree order is respected (`u ≼ v` implies `φ(u) ≼ φ(v)`).

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tog::{bits, Tog};

/// Which maps are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbedMode {
    /// Injective induced embeddings of the whole tog.
    All,
    /// Maps that restrict to an embedding on each of the two vertex sets
    /// (bitmasks over the source tog) and whose image covers the target.
    /// Vertices of different parts may collide, and pairs split across parts
    /// are unconstrained.
    Cover { first: u64, second: u64 },
}

/// Counts maps `φ: V(h) → V(g)` extending `h.stem()[i] ↦ prefix[i]`.
pub fn count_embeddings(h: &Tog, g: &Tog, prefix: &[usize], mode: EmbedMode) -> Result<u64> {
    let mut count = 0u64;
    for_each_embedding(h, g, prefix, mode, &mut |_| count += 1)?;
    Ok(count)
}

/// All maps counted by [`count_embeddings`], as `map[x] = φ(x)`.
pub fn embedding_maps(h: &Tog, g: &Tog, prefix: &[usize], mode: EmbedMode) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for_each_embedding(h, g, prefix, mode, &mut |phi| out.push(phi.to_vec()))?;
    Ok(out)
}

/// Whether the given total map is counted under `mode`.
pub fn is_embedding(h: &Tog, g: &Tog, phi: &[usize], mode: EmbedMode) -> bool {
    let n = h.n();
    if phi.len() != n || phi.iter().any(|&y| y >= g.n()) {
        return false;
    }
    let Ok(linked) = linked_masks(n, mode) else {
        return false;
    };
    let all = full_mask(n);
    if !(0..n).all(|x| consistent(h, g, phi, &linked, x, all & !(1 << x))) {
        return false;
    }
    match mode {
        EmbedMode::All => true,
        EmbedMode::Cover { .. } => phi.iter().fold(0u64, |m, &y| m | (1 << y)) == full_mask(g.n()),
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Pairs constrained to behave like an embedding, per vertex.
fn linked_masks(n: usize, mode: EmbedMode) -> Result<Vec<u64>> {
    let full = full_mask(n);
    match mode {
        EmbedMode::All => Ok((0..n).map(|v| full & !(1 << v)).collect()),
        EmbedMode::Cover { first, second } => {
            if (first | second) != full {
                return Err(Error::Input("cover parts must span the pattern".into()));
            }
            Ok((0..n)
                .map(|v| {
                    let mut m = 0;
                    if first & (1 << v) != 0 {
                        m |= first;
                    }
                    if second & (1 << v) != 0 {
                        m |= second;
                    }
                    m & !(1 << v)
                })
                .collect())
        }
    }
}

fn for_each_embedding(
    h: &Tog,
    g: &Tog,
    prefix: &[usize],
    mode: EmbedMode,
    visit: &mut dyn FnMut(&[usize]),
) -> Result<()> {
    if prefix.len() > h.stem_len() {
        return Err(Error::Input(format!(
            "prefix of length {} exceeds stem length {}",
            prefix.len(),
            h.stem_len()
        )));
    }
    if prefix.iter().any(|&y| y >= g.n()) {
        return Err(Error::Input("prefix image out of range".into()));
    }
    let n = h.n();
    let linked = linked_masks(n, mode)?;
    let order = h.preorder();
    let mut phi = vec![usize::MAX; n];
    let mut fixed = 0u64;
    for (i, &y) in prefix.iter().enumerate() {
        let x = h.stem()[i];
        phi[x] = y;
        fixed |= 1 << x;
    }
    // the fixed prefix must itself be consistent
    for x in bits(fixed) {
        if !consistent(h, g, &phi, &linked, x, fixed & !(1 << x)) {
            return Ok(());
        }
    }
    let rest: Vec<usize> = order.into_iter().filter(|&v| fixed & (1 << v) == 0).collect();
    let cover = matches!(mode, EmbedMode::Cover { .. });
    let target_full = full_mask(g.n());
    search(h, g, &rest, 0, &mut phi, fixed, &linked, &mut |phi| {
        if cover {
            let img = phi.iter().fold(0u64, |m, &y| m | (1 << y));
            if img != target_full {
                return;
            }
        }
        visit(phi);
    });
    Ok(())
}

fn consistent(h: &Tog, g: &Tog, phi: &[usize], linked: &[u64], x: usize, placed: u64) -> bool {
    let y = phi[x];
    for u in bits(placed & linked[x]) {
        let yu = phi[u];
        if yu == y || h.has_edge(x, u) != g.has_edge(y, yu) {
            return false;
        }
        if h.precedes_eq(u, x) && !g.precedes_eq(yu, y) {
            return false;
        }
        if h.precedes_eq(x, u) && !g.precedes_eq(y, yu) {
            return false;
        }
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn search(
    h: &Tog,
    g: &Tog,
    rest: &[usize],
    k: usize,
    phi: &mut Vec<usize>,
    placed: u64,
    linked: &[u64],
    visit: &mut dyn FnMut(&[usize]),
) {
    if k == rest.len() {
        visit(phi);
        return;
    }
    let x = rest[k];
    for y in 0..g.n() {
        phi[x] = y;
        if consistent(h, g, phi, linked, x, placed) {
            search(h, g, rest, k + 1, phi, placed | (1 << x), linked, visit);
        }
    }
    phi[x] = usize::MAX;
}

/// Rooted automorphisms of `t` fixing its first `k` stem vertices.
pub fn rooted_automorphisms(t: &Tog, k: usize) -> u64 {
    let prefix: Vec<usize> = t.stem()[..k].to_vec();
    count_embeddings(t, t, &prefix, EmbedMode::All).expect("identity prefix is valid")
}

/// Number of automorphisms of a graph, by backtracking over permutations.
pub fn aut_count(h: &Graph) -> u64 {
    let n = h.n();
    let adj = h.adjacency_masks();
    let deg: Vec<u32> = adj.iter().map(|r| r.count_ones()).collect();
    fn rec(adj: &[u64], deg: &[u32], k: usize, img: &mut Vec<usize>, used: u64) -> u64 {
        let n = adj.len();
        if k == n {
            return 1;
        }
        let mut total = 0;
        for y in 0..n {
            if used & (1 << y) != 0 || deg[y] != deg[k] {
                continue;
            }
            let ok = (0..k).all(|u| (adj[k] >> u & 1) == (adj[y] >> img[u] & 1));
            if ok {
                img.push(y);
                total += rec(adj, deg, k + 1, img, used | (1 << y));
                img.pop();
            }
        }
        total
    }
    rec(&adj, &deg, 0, &mut Vec::with_capacity(n), 0)
}
