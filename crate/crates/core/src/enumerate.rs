//! Exhaustive enumeration of small graphs and binary structures up to
//! isomorphism.
//!
//! Both grow structures one element at a time and keep one representative
//! per isomorphism class, bucketed by a cheap invariant. Every structure on
//! `n + 1` points arises from one on `n` points by deleting the last point, so
//! extending all representatives by all possible new points reaches every
//! class. Representatives use universe `0..n` and are sorted by their facts.

use std::collections::HashMap;

use crate::error::Result;
use crate::iso::isomorphic;
use crate::structure::{FiniteStructure, Signature};

/// All simple undirected graphs on exactly `n` vertices, up to isomorphism.
pub fn graphs(n: usize) -> Result<Vec<FiniteStructure>> {
    grow(n, Signature::graph(), "E", true)
}

/// Graphs with at most `max` vertices, by size.
pub fn graphs_up_to(max: usize) -> Result<Vec<FiniteStructure>> {
    up_to(max, graphs)
}

/// All structures on exactly `n` points with one binary relation `name`
/// (loops allowed), up to isomorphism.
pub fn binary_structures(n: usize, name: &str) -> Result<Vec<FiniteStructure>> {
    grow(n, Signature::binary(name), name, false)
}

pub fn binary_structures_up_to(max: usize, name: &str) -> Result<Vec<FiniteStructure>> {
    up_to(max, |n| binary_structures(n, name))
}

fn up_to(
    max: usize,
    f: impl Fn(usize) -> Result<Vec<FiniteStructure>>,
) -> Result<Vec<FiniteStructure>> {
    let mut out = Vec::new();
    for n in 0..=max {
        out.extend(f(n)?);
    }
    Ok(out)
}

fn grow(n: usize, sig: Signature, name: &str, undirected: bool) -> Result<Vec<FiniteStructure>> {
    let mut level = vec![FiniteStructure::new(sig, [])];
    for size in 0..n as u64 {
        let mut buckets: HashMap<Vec<(usize, usize, bool)>, Vec<usize>> = HashMap::new();
        let mut next: Vec<FiniteStructure> = Vec::new();
        // choices for the new point: in/out bits to each old point, plus a loop
        let bits = if undirected { size } else { 2 * size + 1 };
        for base in &level {
            for mask in 0u64..(1 << bits) {
                let mut s = base.clone();
                s.add_element(size);
                for old in 0..size {
                    if undirected {
                        if mask >> old & 1 == 1 {
                            s.add_edge(old, size)?;
                        }
                    } else {
                        if mask >> (2 * old) & 1 == 1 {
                            s.insert(name, vec![old, size])?;
                        }
                        if mask >> (2 * old + 1) & 1 == 1 {
                            s.insert(name, vec![size, old])?;
                        }
                    }
                }
                if !undirected && mask >> (2 * size) & 1 == 1 {
                    s.insert(name, vec![size, size])?;
                }
                let key = invariant(&s);
                let bucket = buckets.entry(key).or_default();
                let mut fresh = true;
                for &i in bucket.iter() {
                    if isomorphic(&next[i], &s)?.is_some() {
                        fresh = false;
                        break;
                    }
                }
                if fresh {
                    bucket.push(next.len());
                    next.push(s);
                }
            }
        }
        level = next;
    }
    level.sort_by(|a, b| {
        let ka = (a.relation(0).len(), a.relation(0));
        let kb = (b.relation(0).len(), b.relation(0));
        ka.cmp(&kb)
    });
    Ok(level)
}

/// Sorted (out-degree, in-degree, loop) triples.
fn invariant(s: &FiniteStructure) -> Vec<(usize, usize, bool)> {
    let rel = s.relation(0);
    let mut v: Vec<(usize, usize, bool)> = s
        .universe()
        .iter()
        .map(|&x| {
            let out = rel.iter().filter(|t| t[0] == x).count();
            let inn = rel.iter().filter(|t| t[1] == x).count();
            (out, inn, rel.contains(&vec![x, x]))
        })
        .collect();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts() {
        let counts: Vec<usize> = (0..=6).map(|n| graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn graphs_are_simple() {
        for g in graphs_up_to(4).unwrap() {
            assert!(g.is_undirected_graph());
        }
    }

    #[test]
    fn binary_counts() {
        let counts: Vec<usize> = (1..=3)
            .map(|n| binary_structures(n, "R").unwrap().len())
            .collect();
        assert_eq!(counts, vec![2, 10, 104]);
    }

    #[test]
    fn deterministic() {
        assert_eq!(graphs(5).unwrap(), graphs(5).unwrap());
    }
}
