//! Induced subgraph counting in sparse host graphs.
//!
//! A connected pattern is compiled into a counting dag of ordered pattern
//! fragments ([`compile`]), which is then evaluated over a linear ordering of
//! the host graph with small weakly or strongly reachable sets ([`engine`]).

pub mod catalog;
pub mod compile;
pub mod dag;
pub mod engine;
pub mod embed;
pub mod error;
pub mod graph;
pub mod io;
pub mod num;
pub mod oracle;
pub mod order;
pub mod tog;
pub mod trie;

pub use error::{Error, Result};
pub use graph::{Graph, LinearGraph};
pub use num::Count;
pub use num_bigint::BigInt;
pub use tog::Tog;
pub use trie::CountTrie;

/// Trie with 128-bit counts, the default accumulator.
pub type Trie = CountTrie<i128>;
/// Trie with arbitrary-precision counts.
pub type BigTrie = CountTrie<num_bigint::BigInt>;
