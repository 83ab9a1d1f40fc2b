mod common;

use common::{gnp, shuffled};
use proptest::prelude::*;
use sparsecount::oracle::oracle_reach_sets;
use sparsecount::order::{degeneracy_order, sreach_sets, wreach_greedy_order, wreach_sets, ReachSets};
use sparsecount::LinearGraph;

fn as_vecs(r: &ReachSets) -> Vec<Vec<usize>> {
    (0..r.len()).map(|v| r.get(v).iter().map(|&u| u as usize).collect()).collect()
}

fn subset(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn check(lg: &LinearGraph) -> Result<(), TestCaseError> {
    let mut prev: Option<(ReachSets, ReachSets)> = None;
    for r in 1..=4 {
        let (w, s) = (wreach_sets(lg, r), sreach_sets(lg, r));
        let (ow, os) = oracle_reach_sets(lg, r).unwrap();
        prop_assert_eq!(as_vecs(&w), ow, "weak r={}", r);
        prop_assert_eq!(as_vecs(&s), os, "strong r={}", r);
        for v in 0..lg.n() {
            prop_assert!(subset(s.get(v), w.get(v)));
            prop_assert_eq!(*w.get(v).last().unwrap() as usize, v);
            if let Some((pw, ps)) = &prev {
                prop_assert!(subset(pw.get(v), w.get(v)));
                prop_assert!(subset(ps.get(v), s.get(v)));
            }
            if r == 1 {
                let mut left: Vec<usize> = lg.left_neighbors(v).collect();
                left.sort_by_key(|&u| lg.position(u));
                left.push(v);
                prop_assert_eq!(&as_vecs(&w)[v], &left);
                prop_assert_eq!(&as_vecs(&s)[v], &left);
            }
        }
        prev = Some((w, s));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reach_sets_match_path_enumeration(seed in any::<u64>(), n in 1usize..=30, p in 0.02f64..0.3) {
        let g = gnp(n, p, seed);
        check(&shuffled(&g, seed.wrapping_add(1)))?;
        check(&degeneracy_order(&g))?;
        check(&wreach_greedy_order(&g, 2))?;
    }

    #[test]
    fn degeneracy_bounds_left_degree(seed in any::<u64>(), n in 1usize..=40, p in 0.02f64..0.4) {
        let g = gnp(n, p, seed);
        let lg = degeneracy_order(&g);
        let max_left = (0..n).map(|v| lg.left_neighbors(v).count()).max().unwrap();
        // the k-core peeling certifies that no order beats max_left
        let mut alive: Vec<bool> = vec![true; n];
        let mut best = 0;
        for _ in 0..n {
            let deg = |v: usize| g.neighbors(v).iter().filter(|&&u| alive[u as usize]).count();
            let v = (0..n).filter(|&v| alive[v]).min_by_key(|&v| deg(v)).unwrap();
            best = best.max(deg(v));
            alive[v] = false;
        }
        prop_assert_eq!(max_left, best);
    }
}
