//! Atomic types of vertex tuples in graphs, and their fixed enumeration.
//!
//! An `n`-variable type is given by equality bits and then adjacency bits,
//! each over the pairs `i < j` in lexicographic order. Types are listed by
//! number of variables, then lexicographically by these bits with `false`
//! first. The single 0-variable type is number 0, so the 1-variable type is
//! 1, and the 2-variable types are 2 (distinct, non-adjacent), 3 (adjacent)
//! and 4 (equal).

use std::sync::OnceLock;

use crate::error::{check_budget, Error, Result};
use crate::structure::{ElementId, FiniteStructure};

/// Largest number of variables handled by [`type_index`].
pub const MAX_VARIABLES: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomicType {
    pub variables: usize,
    /// `x_i = x_j` for pairs `i < j`.
    pub equal: Vec<bool>,
    /// `E(x_i, x_j)` for pairs `i < j`.
    pub adjacent: Vec<bool>,
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl AtomicType {
    pub fn of_tuple(g: &FiniteStructure, tuple: &[ElementId]) -> AtomicType {
        let n = tuple.len();
        let ps = pairs(n);
        AtomicType {
            variables: n,
            equal: ps.iter().map(|&(i, j)| tuple[i] == tuple[j]).collect(),
            adjacent: ps
                .iter()
                .map(|&(i, j)| g.has_edge(tuple[i], tuple[j]))
                .collect(),
        }
    }

    pub fn is_equal(&self, i: usize, j: usize) -> bool {
        i == j || self.equal[pair_index(self.variables, i, j)]
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.adjacent[pair_index(self.variables, i, j)]
    }

    /// Whether some irreflexive symmetric graph realizes the pattern.
    pub fn is_consistent(&self) -> bool {
        let n = self.variables;
        if self.equal.len() != n * n.saturating_sub(1) / 2
            || self.adjacent.len() != self.equal.len()
        {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.is_equal(i, j) && self.is_equal(j, k) && !self.is_equal(i, k) {
                        return false;
                    }
                    if self.is_equal(i, j) && self.is_adjacent(i, k) != self.is_adjacent(j, k) {
                        return false;
                    }
                }
                if i != j && self.is_equal(i, j) && self.is_adjacent(i, j) {
                    return false;
                }
            }
        }
        true
    }

    fn bits(&self) -> Vec<bool> {
        self.equal.iter().chain(&self.adjacent).copied().collect()
    }
}

fn consistent_types(n: usize) -> &'static [AtomicType] {
    static TABLE: OnceLock<Vec<Vec<AtomicType>>> = OnceLock::new();
    &TABLE.get_or_init(|| {
        (0..=MAX_VARIABLES)
            .map(|n| {
                let m = n * n.saturating_sub(1) / 2;
                let mut out = Vec::new();
                for code in 0u64..1 << (2 * m) {
                    // most significant bit first, so numeric order is lexicographic
                    let bit = |k: usize| code >> (2 * m - 1 - k) & 1 == 1;
                    let t = AtomicType {
                        variables: n,
                        equal: (0..m).map(bit).collect(),
                        adjacent: (m..2 * m).map(bit).collect(),
                    };
                    if t.is_consistent() {
                        out.push(t);
                    }
                }
                out
            })
            .collect()
    })[n]
}

/// Number of consistent `n`-variable types: 1, 1, 3, 15, 127, ...
pub fn type_count(n: usize) -> Result<u64> {
    check_budget("atomic type variables", n as u128, MAX_VARIABLES as u128)?;
    Ok(consistent_types(n).len() as u64)
}

/// Position of `t` in the enumeration of all types.
pub fn type_index(t: &AtomicType) -> Result<u64> {
    if !t.is_consistent() {
        return Err(Error::Pattern(format!("{t:?}")));
    }
    check_budget(
        "atomic type variables",
        t.variables as u128,
        MAX_VARIABLES as u128,
    )?;
    let before: u64 = (0..t.variables)
        .map(|n| consistent_types(n).len() as u64)
        .sum();
    let list = consistent_types(t.variables);
    let bits = t.bits();
    let pos = list
        .binary_search_by(|u| u.bits().cmp(&bits))
        .expect("consistent types are listed");
    Ok(before + pos as u64)
}

/// Inverse of [`type_index`].
pub fn type_at(mut index: u64) -> Result<AtomicType> {
    for n in 0..=MAX_VARIABLES {
        let list = consistent_types(n);
        if index < list.len() as u64 {
            return Ok(list[index as usize].clone());
        }
        index -= list.len() as u64;
    }
    Err(Error::Budget {
        what: "atomic type index",
        needed: index as u128,
        cap: 0,
    })
}

/// Index of the type of `tuple` in `g`.
pub fn tuple_type_index(g: &FiniteStructure, tuple: &[ElementId]) -> Result<u64> {
    type_index(&AtomicType::of_tuple(g, tuple))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let counts: Vec<u64> = (0..=4).map(|n| type_count(n).unwrap()).collect();
        assert_eq!(counts, vec![1, 1, 3, 15, 127]);
    }

    #[test]
    fn small_indices() {
        let g = FiniteStructure::graph(0..3, [(0, 1)]).unwrap();
        assert_eq!(tuple_type_index(&g, &[]).unwrap(), 0);
        assert_eq!(tuple_type_index(&g, &[2]).unwrap(), 1);
        assert_eq!(tuple_type_index(&g, &[0, 2]).unwrap(), 2);
        assert_eq!(tuple_type_index(&g, &[0, 1]).unwrap(), 3);
        assert_eq!(tuple_type_index(&g, &[1, 1]).unwrap(), 4);
        assert_eq!(tuple_type_index(&g, &[0, 1, 2]).unwrap(), 5 + 4);
    }

    #[test]
    fn index_round_trips() {
        for i in 0..(1 + 1 + 3 + 15 + 127) {
            assert_eq!(type_index(&type_at(i).unwrap()).unwrap(), i);
        }
    }

    #[test]
    fn inconsistent_patterns() {
        let t = AtomicType {
            variables: 2,
            equal: vec![true],
            adjacent: vec![true],
        };
        assert!(matches!(type_index(&t), Err(Error::Pattern(_))));
        let t = AtomicType {
            variables: 3,
            equal: vec![true, true, false],
            adjacent: vec![false, false, false],
        };
        assert!(!t.is_consistent());
    }
}
