//! Finite-scale machinery for Scott ranks and rank-preserving embeddings.
//!
//! The crate works with finite relational structures and provides:
//!
//! * exact isomorphism, automorphism and orbit computation ([`iso`]);
//! * the back-and-forth hierarchy and Scott ranks of finite structures
//!   ([`backforth`]);
//! * tree ranks, thinness, and rank-homogeneous tree generation ([`trees`]);
//! * three embeddings: trees into graphs ([`embed_graph`]), graphs into
//!   radical extension towers of function fields ([`field`]), and graphs into
//!   linear orders of rational sequences ([`order`]);
//! * sweeps that check isomorphism preservation, orbit correspondence and
//!   family transfer on exhaustively enumerated inputs ([`harness`]).
//!
//! ```
//! use scottkit::{backforth, FiniteStructure, Signature};
//!
//! let mut two_chain = FiniteStructure::new(Signature::binary("<"), [0, 1]);
//! two_chain.insert("<", vec![0, 1]).unwrap();
//! assert_eq!(backforth::scott_rank(&two_chain).unwrap(), 2);
//! ```

pub mod backforth;
pub mod budget;
pub mod embed_graph;
pub mod enumerate;
mod error;
pub mod field;
pub mod harness;
pub mod iso;
pub mod operator;
pub mod order;
pub mod structure;
pub mod trees;

pub use budget::Budget;
pub use error::{Error, Result};
pub use iso::{isomorphic, Bijection, OrbitPartition};
pub use operator::{apply_operator, DiagramOperator};
pub use structure::{AtomicDiagram, ElementId, FiniteStructure, Signature, Symbol};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/structures.md")]
    mod structures {}
    #[doc = include_str!("../../../book/src/back-and-forth.md")]
    mod back_and_forth {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/tree-to-graph.md")]
    mod tree_to_graph {}
    #[doc = include_str!("../../../book/src/graph-to-field.md")]
    mod graph_to_field {}
    #[doc = include_str!("../../../book/src/graph-to-order.md")]
    mod graph_to_order {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
}
