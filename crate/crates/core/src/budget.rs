//! Size caps for the exhaustive procedures.
//!
//! Every search in the crate is exponential in something. The caps here turn
//! runaway inputs into [`Error::Budget`](crate::Error::Budget) instead of
//! hangs. They are plain configuration: pick a preset with
//! [`Budget::profile`] or set the fields directly.

use serde::{Deserialize, Serialize};

/// Environment variable read by [`Budget::from_env`].
pub const PROFILE_ENV: &str = "SCOTTKIT_BUDGET_PROFILE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest universe accepted by isomorphism and automorphism search.
    pub iso_max_universe: usize,
    /// Largest universe for which the full automorphism group is listed.
    pub automorphism_listing_max: usize,
    /// Cap on `|A|^k` when partitioning k-tuples into orbits.
    pub orbit_tuple_max: u128,
    /// Cap on the number of tuple pairs tracked by the back-and-forth table.
    pub bf_table_max: u128,
    /// Cap on the number of elements produced by a bounded order enumeration.
    pub fragment_max: usize,
    /// Cap on rationals examined by a single dense pick.
    pub dense_pick_step_cap: u64,
    /// Largest vertex id probed when decoding an order image.
    pub max_vertex_id: u64,
    /// Cap on nodes produced by the rank-homogeneous generator.
    pub tree_max_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            iso_max_universe: 64,
            automorphism_listing_max: 8,
            orbit_tuple_max: 1_000_000,
            bf_table_max: 4_000_000,
            fragment_max: 200_000,
            dense_pick_step_cap: 1_000_000,
            max_vertex_id: 63,
            tree_max_nodes: 10_000,
        }
    }
}

impl Budget {
    /// Named presets: `default`, `small`, `large`.
    pub fn profile(name: &str) -> Option<Budget> {
        let base = Budget::default();
        match name {
            "default" => Some(base),
            "small" => Some(Budget {
                iso_max_universe: 32,
                orbit_tuple_max: 100_000,
                bf_table_max: 250_000,
                fragment_max: 20_000,
                dense_pick_step_cap: 100_000,
                max_vertex_id: 31,
                tree_max_nodes: 1_000,
                ..base
            }),
            "large" => Some(Budget {
                iso_max_universe: 256,
                automorphism_listing_max: 9,
                orbit_tuple_max: 20_000_000,
                bf_table_max: 50_000_000,
                fragment_max: 2_000_000,
                dense_pick_step_cap: 20_000_000,
                max_vertex_id: 255,
                tree_max_nodes: 100_000,
            }),
            _ => None,
        }
    }

    /// Reads [`PROFILE_ENV`]; unset means `default`, an unknown name is `None`.
    pub fn from_env() -> Option<Budget> {
        match std::env::var(PROFILE_ENV) {
            Ok(name) => Budget::profile(name.trim()),
            Err(_) => Some(Budget::default()),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.iso_max_universe > 0
            && self.automorphism_listing_max > 0
            && self.orbit_tuple_max > 0
            && self.bf_table_max > 0
            && self.fragment_max > 0
            && self.dense_pick_step_cap > 0
            && self.tree_max_nodes > 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        for name in ["default", "small", "large"] {
            assert!(Budget::profile(name).unwrap().is_valid(), "{name}");
        }
        assert!(Budget::profile("huge").is_none());
    }
}
