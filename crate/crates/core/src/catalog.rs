//! Named small graphs.
//!
//! Accepted names: `P<n>`, `C<n>`, `K<n>`, `S<n>` (star with `n` leaves),
//! `W<n>` (wheel: hub plus `C<n>`), `K{a,b}` / `Ka,b` (complete
//! bipartite), the named graphs below, and a `co-` prefix for complements.

use crate::error::{Error, Result};
use crate::graph::Graph;

const NAMED: &[(&str, usize, &[(usize, usize)])] = &[
    ("paw", 4, &[(0, 1), (0, 2), (1, 2), (0, 3)]),
    ("diamond", 4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]),
    ("bull", 5, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 4)]),
    ("cricket", 5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4)]),
    ("butterfly", 5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]),
    ("gem", 5, &[(0, 1), (1, 2), (2, 3), (0, 4), (1, 4), (2, 4), (3, 4)]),
    ("house", 5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 4)]),
    ("kite", 5, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (0, 4)]),
    ("dart", 5, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (1, 4)]),
    ("net", 6, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 4), (2, 5)]),
    ("fish", 6, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (0, 5), (4, 5)]),
    ("domino", 6, &[(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)]),
];

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n, &edges).expect("valid path")
}

pub fn cycle(n: usize) -> Graph {
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    edges.push((n - 1, 0));
    Graph::from_edges(n, &edges).expect("valid cycle")
}

pub fn clique(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::from_edges(n, &edges).expect("valid clique")
}

pub fn biclique(a: usize, b: usize) -> Graph {
    let edges: Vec<_> = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
    Graph::from_edges(a + b, &edges).expect("valid biclique")
}

pub fn star(leaves: usize) -> Graph {
    biclique(1, leaves)
}

pub fn wheel(rim: usize) -> Graph {
    let mut edges: Vec<_> = (1..rim).map(|v| (v - 1, v)).collect();
    edges.push((rim - 1, 0));
    edges.extend((0..rim).map(|v| (v, rim)));
    Graph::from_edges(rim + 1, &edges).expect("valid wheel")
}

fn number(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn biclique_sizes(s: &str) -> Option<(usize, usize)> {
    let inner = s
        .strip_prefix("K{")
        .and_then(|r| r.strip_suffix('}'))
        .or_else(|| s.strip_prefix("K_{").and_then(|r| r.strip_suffix('}')))
        .or_else(|| s.strip_prefix('K'))?;
    let (a, b) = inner.split_once(',')?;
    Some((number(a.trim())?, number(b.trim())?))
}

/// Resolves a pattern name.
pub fn lookup(name: &str) -> Result<Graph> {
    let unknown = || Error::Input(format!("unknown pattern name {name:?}"));
    if let Some(rest) = name.strip_prefix("co-") {
        let g = lookup(rest)?.complement();
        if !g.is_connected() {
            return Err(Error::Input(format!("{name} is disconnected")));
        }
        return Ok(g);
    }
    if let Some(&(_, n, edges)) = NAMED.iter().find(|(k, _, _)| *k == name) {
        return Graph::from_edges(n, edges);
    }
    if let Some((a, b)) = biclique_sizes(name) {
        if a == 0 || b == 0 {
            return Err(unknown());
        }
        return Ok(biclique(a, b));
    }
    let (head, tail) = name.split_at(name.chars().next().map_or(0, |c| c.len_utf8()));
    let n = number(tail).ok_or_else(unknown)?;
    match head {
        "P" if n >= 1 => Ok(path(n)),
        "C" if n >= 3 => Ok(cycle(n)),
        "K" if n >= 1 => Ok(clique(n)),
        "S" if n >= 1 => Ok(star(n)),
        "W" if n >= 3 => Ok(wheel(n)),
        _ => Err(unknown()),
    }
}

/// Every fixed name in the catalogue.
pub fn names() -> Vec<&'static str> {
    NAMED.iter().map(|(k, _, _)| *k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::aut_count;

    #[test]
    fn sizes() {
        for (name, n, m) in [
            ("P3", 3, 2),
            ("C5", 5, 5),
            ("K4", 4, 6),
            ("S3", 4, 3),
            ("W4", 5, 8),
            ("K{2,3}", 5, 6),
            ("K3,3", 6, 9),
            ("bull", 5, 5),
            ("co-net", 6, 9),
            ("co-P4", 4, 3),
        ] {
            let g = lookup(name).unwrap();
            assert_eq!((g.n(), g.m()), (n, m), "{name}");
            assert!(g.is_connected());
        }
    }

    #[test]
    fn named_graphs_are_connected() {
        for name in names() {
            assert!(lookup(name).unwrap().is_connected(), "{name}");
        }
    }

    #[test]
    fn w3_is_k4() {
        assert_eq!(aut_count(&lookup("W3").unwrap()), 24);
    }

    #[test]
    fn bad_names() {
        for name in ["Q3", "C2", "co-K3", "K{0,2}", "P", "Px"] {
            assert!(lookup(name).is_err(), "{name}");
        }
    }
}
