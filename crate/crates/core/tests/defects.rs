use sparsecount::catalog::lookup;
use sparsecount::compile::{build_counting_dag, defects, piece_masks, CompileOptions};
use sparsecount::dag::Strategy;
use sparsecount::oracle::oracle_defects;

const PATTERNS: &[&str] = &[
    "P3", "P4", "P5", "C4", "C5", "K3", "K4", "S3", "S4", "paw", "diamond", "bull", "cricket", "dart", "kite", "house",
    "gem", "butterfly", "K{2,3}", "W4",
];

#[test]
fn generated_defects_match_definition() {
    for strategy in [Strategy::FirstLeaf, Strategy::Balanced] {
        for name in PATTERNS {
            let opts = CompileOptions { strategy, ..Default::default() };
            let dag = build_counting_dag(&lookup(name).unwrap(), &opts).unwrap();
            for node in dag.nodes.iter().filter(|n| !n.is_leaf() && n.tog.n() <= 5) {
                let (m1, m2) = piece_masks(&node.tog, strategy).unwrap();
                let mut mine = defects(&node.tog, m1, m2).unwrap();
                let mut truth = oracle_defects(&node.tog, m1, m2).unwrap();
                mine.sort_by_key(|t| t.canonical_encode());
                truth.sort_by_key(|t| t.canonical_encode());
                assert_eq!(mine, truth, "{name} {strategy:?} node {:?}", node.tog);
            }
        }
    }
}
