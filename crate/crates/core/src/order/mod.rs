//! Graphs into linear orders of rational sequences.
//!
//! The rationals are split into dense classes, one per natural number. A
//! tuple of vertices is coded by a sequence that alternates vertex classes
//! with separator classes, followed by a discrete block whose size is the
//! index of the tuple's atomic type. The graph is read back from the block
//! sizes, and graph isomorphisms lift to the orders by back-and-forth.

pub mod element;
pub mod family;
pub mod partition;
pub mod rational;
pub mod types;

pub use element::{
    check_member, coding_fragment, coding_fragment_within, compare, decode_fragment,
    decode_fragment_within, discrete_block, enumerate_fragment, enumerate_fragment_within, f_map,
    g_decode, member, sufficient_height, OrderElement,
};
pub use family::{
    element_orbit_labels, elements_same_orbit, fragment_same_orbit, fragments_isomorphic, FamilyMap,
};
pub use partition::{class_of, dense_pick, dense_pick_within, first_in_class, ClassId};
pub use rational::Rational;
pub use types::{tuple_type_index, type_at, type_count, type_index, AtomicType};
