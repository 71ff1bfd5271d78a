//! Elements of the order attached to a graph, and the maps in and out.
//!
//! An element is a rational sequence `q_1 r_1 ... q_n r_n k` with `n >= 1` and
//! `k` a natural number. It belongs to the order of `G` when every `q_i` lies
//! in the class of a vertex `a_i`, `r_1, ..., r_{n-1}` lie in class 0, `r_n`
//! lies in class 1, and `k` is below the index of the atomic type of
//! `(a_1, ..., a_n)`. Sequences are ordered lexicographically with a proper
//! prefix first.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{check_budget, Error, Result};
use crate::order::partition::{class_of, first_in_class, ClassId};
use crate::order::rational::{rationals_of_height, Rational};
use crate::order::types::{tuple_type_index, type_at};
use crate::structure::{ElementId, FiniteStructure};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderElement {
    pub body: Vec<Rational>,
    pub tail: u64,
}

impl OrderElement {
    pub fn new(body: Vec<Rational>, tail: u64) -> OrderElement {
        OrderElement { body, tail }
    }

    /// Number of `(q, r)` pairs.
    pub fn pairs(&self) -> usize {
        self.body.len() / 2
    }

    pub fn q(&self, i: usize) -> Rational {
        self.body[2 * i]
    }

    pub fn r(&self, i: usize) -> Rational {
        self.body[2 * i + 1]
    }

    /// The whole sequence, with the tail as its last term.
    pub fn terms(&self) -> Vec<Rational> {
        let mut t = self.body.clone();
        t.push(Rational::integer(self.tail as i64));
        t
    }

    pub fn term(&self, i: usize) -> Rational {
        if i < self.body.len() {
            self.body[i]
        } else {
            Rational::integer(self.tail as i64)
        }
    }

    pub fn len(&self) -> usize {
        self.body.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Length of the longest common prefix of the two sequences.
    pub fn common_prefix(&self, other: &OrderElement) -> usize {
        let n = self.len().min(other.len());
        (0..n).find(|&i| self.term(i) != other.term(i)).unwrap_or(n)
    }

    pub fn from_json(text: &str) -> Result<OrderElement> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("elements serialize")
    }
}

impl Ord for OrderElement {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.len().min(other.len());
        for i in 0..n {
            match self.term(i).cmp(&other.term(i)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.len().cmp(&other.len())
    }
}

impl PartialOrd for OrderElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The vertex tuple read off the `q` terms, if the shape and `r` classes are
/// right; the tail is not checked.
fn read_tuple(g: &FiniteStructure, x: &OrderElement) -> Result<Vec<ElementId>> {
    if x.body.is_empty() || x.body.len() % 2 != 0 {
        return Err(Error::NotMember(format!("body of length {}", x.body.len())));
    }
    let n = x.pairs();
    let mut tuple = Vec::with_capacity(n);
    for i in 0..n {
        let a = class_of(x.q(i));
        if !g.contains(a) {
            return Err(Error::NotMember(format!(
                "q_{} = {} has class {a}, not a vertex",
                i + 1,
                x.q(i)
            )));
        }
        tuple.push(a);
        let want = if i + 1 == n { 1 } else { 0 };
        let got = class_of(x.r(i));
        if got != want {
            return Err(Error::NotMember(format!(
                "r_{} = {} has class {got}, expected {want}",
                i + 1,
                x.r(i)
            )));
        }
    }
    Ok(tuple)
}

/// Size of the discrete block of an element with vertex tuple `tuple`.
pub fn block_size(g: &FiniteStructure, tuple: &[ElementId]) -> Result<u64> {
    tuple_type_index(g, tuple)
}

pub fn member(g: &FiniteStructure, x: &OrderElement) -> bool {
    check_member(g, x).is_ok()
}

/// Like [`member`], with the reason for failure.
pub fn check_member(g: &FiniteStructure, x: &OrderElement) -> Result<Vec<ElementId>> {
    let tuple = read_tuple(g, x)?;
    let m = block_size(g, &tuple)?;
    if x.tail >= m {
        return Err(Error::NotMember(format!("tail {} not below {m}", x.tail)));
    }
    Ok(tuple)
}

pub fn compare(x: &OrderElement, y: &OrderElement) -> Ordering {
    x.cmp(y)
}

/// The element coding a vertex tuple: first members of the classes, tail 0.
pub fn f_map(g: &FiniteStructure, tuple: &[ElementId]) -> Result<OrderElement> {
    if tuple.is_empty() {
        return Err(Error::NotMember("empty tuple".into()));
    }
    if let Some(a) = tuple.iter().find(|&&a| !g.contains(a)) {
        return Err(Error::Structure(format!("{a} is not a vertex")));
    }
    block_size(g, tuple)?;
    Ok(OrderElement::new(body_for(tuple, first_in_class), 0))
}

pub(crate) fn body_for(tuple: &[ElementId], pick: impl Fn(ClassId) -> Rational) -> Vec<Rational> {
    let n = tuple.len();
    let mut body = Vec::with_capacity(2 * n);
    for (i, &a) in tuple.iter().enumerate() {
        body.push(pick(a));
        body.push(pick(if i + 1 == n { 1 } else { 0 }));
    }
    body
}

/// The vertex tuple of a member with tail 0.
pub fn g_decode(g: &FiniteStructure, x: &OrderElement) -> Result<Vec<ElementId>> {
    let tuple = check_member(g, x)?;
    if x.tail != 0 {
        return Err(Error::NotMember(format!("tail {} is not 0", x.tail)));
    }
    Ok(tuple)
}

/// Position of a member in its maximal discrete block, and the block size.
pub fn discrete_block(g: &FiniteStructure, x: &OrderElement) -> Result<(u64, u64)> {
    let tuple = check_member(g, x)?;
    Ok((x.tail, block_size(g, &tuple)?))
}

/// Rationals of height at most `h`, grouped by class.
fn classes_up_to(h: u64) -> BTreeMap<ClassId, Vec<Rational>> {
    let mut by_class: BTreeMap<ClassId, Vec<Rational>> = BTreeMap::new();
    for x in (1..=h).flat_map(rationals_of_height) {
        by_class.entry(class_of(x)).or_default().push(x);
    }
    by_class
}

/// All members with at most `max_len` pairs whose terms, tail included, have
/// height at most `height`; sorted in the order.
pub fn enumerate_fragment(
    g: &FiniteStructure,
    max_len: usize,
    height: u64,
) -> Result<Vec<OrderElement>> {
    enumerate_fragment_within(g, max_len, height, &Budget::default())
}

pub fn enumerate_fragment_within(
    g: &FiniteStructure,
    max_len: usize,
    height: u64,
    budget: &Budget,
) -> Result<Vec<OrderElement>> {
    let by_class = classes_up_to(height);
    let choices = |a: ClassId| by_class.get(&a).map_or(&[][..], |v| &v[..]);
    let vertices: Vec<ElementId> = g.universe().iter().copied().collect();
    let mut total: u128 = 0;
    let mut tuples = Vec::new();
    for n in 1..=max_len {
        for tuple in crate::structure::tuples(&vertices, n) {
            let m = block_size(g, &tuple)?;
            let tails = m.min(height + 1) as u128;
            let mut count = tails;
            for (i, &a) in tuple.iter().enumerate() {
                let r = if i + 1 == n { 1 } else { 0 };
                count = count.saturating_mul(choices(a).len() as u128 * choices(r).len() as u128);
            }
            total = total.saturating_add(count);
            check_budget("order fragment", total, budget.fragment_max as u128)?;
            if count > 0 {
                tuples.push((tuple, m.min(height + 1)));
            }
        }
    }
    let mut out = Vec::with_capacity(total as usize);
    for (tuple, tails) in tuples {
        let n = tuple.len();
        let slots: Vec<&[Rational]> = (0..2 * n)
            .map(|p| {
                let class = if p % 2 == 0 {
                    tuple[p / 2]
                } else if p + 1 == 2 * n {
                    1
                } else {
                    0
                };
                choices(class)
            })
            .collect();
        let mut idx = vec![0usize; 2 * n];
        'outer: loop {
            let body: Vec<Rational> = idx.iter().zip(&slots).map(|(&i, s)| s[i]).collect();
            for k in 0..tails {
                out.push(OrderElement::new(body.clone(), k));
            }
            for p in (0..2 * n).rev() {
                idx[p] += 1;
                if idx[p] < slots[p].len() {
                    continue 'outer;
                }
                idx[p] = 0;
            }
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// A height at which [`enumerate_fragment`] contains a coding element for
/// every tuple of `g` and every block in full, with at most `max_len` pairs.
pub fn sufficient_height(g: &FiniteStructure, max_len: usize) -> Result<u64> {
    let mut h = [0, 1]
        .iter()
        .map(|&a| first_in_class(a).height())
        .max()
        .unwrap_or(1);
    for &v in g.universe() {
        h = h.max(first_in_class(v).height());
    }
    let vertices: Vec<ElementId> = g.universe().iter().copied().collect();
    for n in 1..=max_len {
        for tuple in crate::structure::tuples(&vertices, n) {
            h = h.max(block_size(g, &tuple)?.saturating_sub(1));
        }
    }
    Ok(h)
}

/// The coding elements of all tuples with at most `max_len` vertices, each
/// with its full discrete block; sorted in the order.
pub fn coding_fragment(g: &FiniteStructure, max_len: usize) -> Result<Vec<OrderElement>> {
    coding_fragment_within(g, max_len, &Budget::default())
}

pub fn coding_fragment_within(
    g: &FiniteStructure,
    max_len: usize,
    budget: &Budget,
) -> Result<Vec<OrderElement>> {
    let vertices: Vec<ElementId> = g.universe().iter().copied().collect();
    let mut out = Vec::new();
    for n in 1..=max_len {
        check_budget(
            "order fragment",
            (vertices.len() as u128).saturating_pow(n as u32),
            budget.fragment_max as u128,
        )?;
        for tuple in crate::structure::tuples(&vertices, n) {
            let x = f_map(g, &tuple)?;
            for k in 0..block_size(g, &tuple)? {
                out.push(OrderElement::new(x.body.clone(), k));
            }
            check_budget(
                "order fragment",
                out.len() as u128,
                budget.fragment_max as u128,
            )?;
        }
    }
    out.sort();
    Ok(out)
}

/// Reads a graph back from a fragment that holds full blocks for every
/// vertex and every pair of vertices.
pub fn decode_fragment(elements: &[OrderElement]) -> Result<FiniteStructure> {
    decode_fragment_within(elements, &Budget::default())
}

pub fn decode_fragment_within(
    elements: &[OrderElement],
    budget: &Budget,
) -> Result<FiniteStructure> {
    let mut blocks: BTreeMap<Vec<Rational>, BTreeSet<u64>> = BTreeMap::new();
    for x in elements {
        if x.body.is_empty() || x.body.len() % 2 != 0 {
            return Err(Error::InvalidImage(format!(
                "body of length {}",
                x.body.len()
            )));
        }
        blocks.entry(x.body.clone()).or_default().insert(x.tail);
    }
    let mut vertices = BTreeSet::new();
    let mut pair_types: BTreeMap<(ElementId, ElementId), u64> = BTreeMap::new();
    for (body, tails) in &blocks {
        let m = tails.len() as u64;
        if tails.iter().copied().ne(0..m) {
            return Err(Error::InvalidImage(format!(
                "block with tails {tails:?} has a gap"
            )));
        }
        let n = body.len() / 2;
        let mut tuple = Vec::with_capacity(n);
        for i in 0..n {
            let a = class_of(body[2 * i]);
            if a > budget.max_vertex_id {
                return Err(Error::Budget {
                    what: "vertex id",
                    needed: a as u128,
                    cap: budget.max_vertex_id as u128,
                });
            }
            let want = if i + 1 == n { 1 } else { 0 };
            if class_of(body[2 * i + 1]) != want {
                return Err(Error::InvalidImage(format!(
                    "r_{} in the wrong class",
                    i + 1
                )));
            }
            tuple.push(a);
        }
        vertices.extend(tuple.iter().copied());
        let t =
            type_at(m).map_err(|_| Error::InvalidImage(format!("block size {m} names no type")))?;
        if t.variables != n {
            return Err(Error::InvalidImage(format!(
                "block size {m} does not fit {n} vertices"
            )));
        }
        for i in 0..n {
            for j in i + 1..n {
                if t.is_equal(i, j) != (tuple[i] == tuple[j]) {
                    return Err(Error::InvalidImage(format!(
                        "block size {m} contradicts the classes"
                    )));
                }
            }
        }
        if n == 2 && tuple[0] != tuple[1] {
            let key = (tuple[0].min(tuple[1]), tuple[0].max(tuple[1]));
            let edge = t.is_adjacent(0, 1) as u64;
            if let Some(&old) = pair_types.get(&key) {
                if old != edge {
                    return Err(Error::InvalidImage(format!(
                        "conflicting blocks for {key:?}"
                    )));
                }
            }
            pair_types.insert(key, edge);
        }
    }
    let mut g = FiniteStructure::graph(vertices.iter().copied(), [])?;
    let vs: Vec<ElementId> = vertices.into_iter().collect();
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            match pair_types.get(&(a, b)) {
                Some(1) => g.add_edge(a, b)?,
                Some(_) => {}
                None => {
                    return Err(Error::InvalidImage(format!(
                        "no block for the pair ({a}, {b})"
                    )))
                }
            }
        }
    }
    Ok(g)
}
