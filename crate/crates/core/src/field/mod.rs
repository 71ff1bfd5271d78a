//! Graphs into fields: one transcendental per vertex, one radical per edge.
//!
//! Only the finitely generated part is built: the rational function field
//! `k(b_1, ..., b_n)` over the prime field `k`, extended by the edge
//! radicals. Edges are recovered by deciding which `b_i + b_j` have roots.

mod image;
pub mod kummer;
pub mod operator;
pub mod poly;
pub mod ratfun;
pub mod scalar;
pub mod tower;

pub use kummer::{decode_field, find_root, has_root, radicand_class, RadicandClass};
pub use operator::{graph_field_operator, GraphFieldOperator};
pub use poly::Poly;
pub use ratfun::RatFun;
pub use scalar::Scalar;
pub use tower::{build_field, FieldElement, FieldPresentation};
