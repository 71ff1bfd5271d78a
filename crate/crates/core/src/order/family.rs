//! Partial isomorphisms between the orders of two isomorphic graphs.
//!
//! A [`FamilyMap`] is a finite partial map `b_i ↦ b_i'` together with a
//! graph isomorphism `σ`. It keeps four invariants:
//!
//! * `σ` sends the vertex tuple of `b_i` to the vertex tuple of `b_i'`;
//! * the map preserves the order;
//! * `b_i` and `b_i'` have the same tail;
//! * `b_i, b_j` and `b_i', b_j'` have common prefixes of the same length.
//!
//! Any such map extends to any further element, in either direction, by
//! copying the image of the nearest element up to the point of divergence and
//! then picking a fresh rational of the right class in the matching gap.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::iso::automorphisms_within;
use crate::order::element::{
    block_size, body_for, check_member, coding_fragment_within, enumerate_fragment_within, f_map,
    member, OrderElement,
};
use crate::order::partition::{class_of, dense_pick_within, first_in_class};
use crate::structure::{tuples, ElementId, FiniteStructure};

#[derive(Clone, Debug)]
pub struct FamilyMap<'a> {
    source: &'a FiniteStructure,
    target: &'a FiniteStructure,
    forth: BTreeMap<ElementId, ElementId>,
    back: BTreeMap<ElementId, ElementId>,
    pairs: Vec<(OrderElement, OrderElement)>,
    step_cap: u64,
}

fn apply(map: &BTreeMap<ElementId, ElementId>, tuple: &[ElementId]) -> Vec<ElementId> {
    tuple.iter().map(|a| map[a]).collect()
}

impl<'a> FamilyMap<'a> {
    /// The empty map over the graph isomorphism `iso: source → target`.
    pub fn new(
        source: &'a FiniteStructure,
        target: &'a FiniteStructure,
        iso: BTreeMap<ElementId, ElementId>,
    ) -> Result<FamilyMap<'a>> {
        let bad = || Error::Extension("not a graph isomorphism".into());
        if iso.keys().ne(source.universe().iter()) {
            return Err(bad());
        }
        let back: BTreeMap<ElementId, ElementId> = iso.iter().map(|(&a, &b)| (b, a)).collect();
        if back.keys().ne(target.universe().iter()) {
            return Err(bad());
        }
        for (&a, &b) in &iso {
            for (&c, &d) in &iso {
                if source.has_edge(a, c) != target.has_edge(b, d) {
                    return Err(bad());
                }
            }
        }
        Ok(FamilyMap {
            source,
            target,
            forth: iso,
            back,
            pairs: Vec::new(),
            step_cap: Budget::default().dense_pick_step_cap,
        })
    }

    pub fn with_step_cap(mut self, cap: u64) -> Self {
        self.step_cap = cap;
        self
    }

    pub fn pairs(&self) -> &[(OrderElement, OrderElement)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Adds `b ↦ b2` after checking every invariant against the current map.
    pub fn insert(&mut self, b: OrderElement, b2: OrderElement) -> Result<()> {
        let t = check_member(self.source, &b)?;
        let t2 = check_member(self.target, &b2)?;
        if apply(&self.forth, &t) != t2 {
            return Err(Error::Extension(format!("{t:?} is not sent to {t2:?}")));
        }
        if b.tail != b2.tail {
            return Err(Error::Extension("tails differ".into()));
        }
        for (c, c2) in &self.pairs {
            if (c == &b) != (c2 == &b2) {
                return Err(Error::Extension("not injective".into()));
            }
            if b.cmp(c) != b2.cmp(c2) {
                return Err(Error::Extension("order not preserved".into()));
            }
            if b.common_prefix(c) != b2.common_prefix(c2) {
                return Err(Error::Extension("common prefixes differ".into()));
            }
        }
        if !self.pairs.iter().any(|(c, _)| c == &b) {
            self.pairs.push((b, b2));
        }
        Ok(())
    }

    /// Extends the map to `b` in the source and returns its image.
    pub fn extend_forth(&mut self, b: &OrderElement) -> Result<OrderElement> {
        if let Some((_, img)) = self.pairs.iter().find(|(c, _)| c == b) {
            return Ok(img.clone());
        }
        let oriented: Vec<(&OrderElement, &OrderElement)> =
            self.pairs.iter().map(|(c, d)| (c, d)).collect();
        let img = extension(self.source, &self.forth, &oriented, b, self.step_cap)?;
        self.insert(b.clone(), img.clone())?;
        Ok(img)
    }

    /// Extends the map so that `b2` in the target is hit, and returns its
    /// preimage.
    pub fn extend_back(&mut self, b2: &OrderElement) -> Result<OrderElement> {
        if let Some((pre, _)) = self.pairs.iter().find(|(_, d)| d == b2) {
            return Ok(pre.clone());
        }
        let oriented: Vec<(&OrderElement, &OrderElement)> =
            self.pairs.iter().map(|(c, d)| (d, c)).collect();
        let pre = extension(self.target, &self.back, &oriented, b2, self.step_cap)?;
        self.insert(pre.clone(), b2.clone())?;
        Ok(pre)
    }
}

/// The image of `b` under some extension of `pairs` (oriented from the side
/// of `b`), following `sigma` on vertex tuples.
fn extension(
    from: &FiniteStructure,
    sigma: &BTreeMap<ElementId, ElementId>,
    pairs: &[(&OrderElement, &OrderElement)],
    b: &OrderElement,
    step_cap: u64,
) -> Result<OrderElement> {
    let tuple = check_member(from, b)?;
    let image_tuple = apply(sigma, &tuple);
    let fresh = body_for(&image_tuple, first_in_class);
    let nearest = pairs.iter().max_by_key(|(c, _)| b.common_prefix(c));
    let Some((near, near_img)) = nearest else {
        return Ok(OrderElement::new(fresh, b.tail));
    };
    let l = b.common_prefix(near);
    let prefix: Vec<_> = near_img.terms()[..l].to_vec();
    if l == b.body.len() {
        return Ok(OrderElement::new(prefix, b.tail));
    }
    if l > b.body.len() {
        return Err(Error::Extension("element already mapped".into()));
    }
    let x = b.term(l);
    let (mut lo, mut hi) = (None, None);
    for (c, c2) in pairs {
        if b.common_prefix(c) < l {
            continue;
        }
        if c.len() <= l {
            return Err(Error::Extension(
                "a mapped element is a prefix of the new one".into(),
            ));
        }
        let (y, y2) = (c.term(l), c2.term(l));
        match y.cmp(&x) {
            Ordering::Less => {
                if lo.map_or(true, |(v, _)| y > v) {
                    lo = Some((y, y2));
                }
            }
            Ordering::Greater => {
                if hi.map_or(true, |(v, _)| y < v) {
                    hi = Some((y, y2));
                }
            }
            Ordering::Equal => unreachable!("l is the longest common prefix"),
        }
    }
    let class = if l % 2 == 0 {
        image_tuple[l / 2]
    } else {
        class_of(x)
    };
    let v = dense_pick_within(class, lo.map(|p| p.1), hi.map(|p| p.1), step_cap)?;
    let mut body = prefix;
    body.push(v);
    body.extend_from_slice(&fresh[l + 1..]);
    Ok(OrderElement::new(body, b.tail))
}

/// Whether the coding elements of `a` and `a2` are exchanged by some map that
/// extends forth and back over the fragments with `max_len` pairs and terms of
/// height at most `height`.
pub fn fragment_same_orbit(
    g: &FiniteStructure,
    a: &[ElementId],
    a2: &[ElementId],
    max_len: usize,
    height: u64,
    budget: &Budget,
) -> Result<bool> {
    if a.len() != a2.len() {
        return Ok(false);
    }
    elements_same_orbit(g, &f_map(g, a)?, &f_map(g, a2)?, max_len, height, budget)
}

/// Like [`fragment_same_orbit`] for arbitrary elements; non-members are in
/// no orbit.
pub fn elements_same_orbit(
    g: &FiniteStructure,
    x: &OrderElement,
    x2: &OrderElement,
    max_len: usize,
    height: u64,
    budget: &Budget,
) -> Result<bool> {
    if !member(g, x) || !member(g, x2) {
        return Ok(false);
    }
    let mut frag = None;
    for sigma in automorphisms_within(g, budget)? {
        let iso = sigma.as_map().clone();
        let mut map = FamilyMap::new(g, g, iso)?.with_step_cap(budget.dense_pick_step_cap);
        if map.insert(x.clone(), x2.clone()).is_err() {
            continue;
        }
        if frag.is_none() {
            frag = Some(sweep_set(g, max_len, height, budget)?);
        }
        let frag = frag.as_ref().expect("just set");
        sweep(&mut map, frag, frag)?;
        return Ok(true);
    }
    Ok(false)
}

/// The enumerated fragment together with the coding elements, so that every
/// vertex shows up whatever the height.
fn sweep_set(
    g: &FiniteStructure,
    max_len: usize,
    height: u64,
    budget: &Budget,
) -> Result<Vec<OrderElement>> {
    let mut set = enumerate_fragment_within(g, max_len, height, budget)?;
    set.extend(coding_fragment_within(g, max_len, budget)?);
    set.sort();
    set.dedup();
    Ok(set)
}

/// Orbit labels for a list of elements: equal labels exactly when
/// [`elements_same_orbit`] holds against the first element of the label.
pub fn element_orbit_labels(
    g: &FiniteStructure,
    xs: &[OrderElement],
    max_len: usize,
    height: u64,
    budget: &Budget,
) -> Result<Vec<u32>> {
    let autos = automorphisms_within(g, budget)?;
    let frag = sweep_set(g, max_len, height, budget)?;
    let mut reps: Vec<usize> = Vec::new();
    let mut labels = Vec::with_capacity(xs.len());
    'next: for (i, x) in xs.iter().enumerate() {
        if member(g, x) {
            for (label, &r) in reps.iter().enumerate() {
                for sigma in &autos {
                    let mut map = FamilyMap::new(g, g, sigma.as_map().clone())?
                        .with_step_cap(budget.dense_pick_step_cap);
                    if map.insert(xs[r].clone(), x.clone()).is_err() {
                        continue;
                    }
                    sweep(&mut map, &frag, &frag)?;
                    labels.push(label as u32);
                    continue 'next;
                }
            }
        }
        labels.push(reps.len() as u32);
        reps.push(i);
    }
    Ok(labels)
}

fn sweep(map: &mut FamilyMap<'_>, source: &[OrderElement], target: &[OrderElement]) -> Result<()> {
    for (b, b2) in source.iter().zip(target) {
        map.extend_forth(b)?;
        map.extend_back(b2)?;
    }
    let n = source.len().min(target.len());
    for b in &source[n..] {
        map.extend_forth(b)?;
    }
    for b2 in &target[n..] {
        map.extend_back(b2)?;
    }
    Ok(())
}

/// Block sizes of the coding elements of all tuples of length at most `n`.
fn block_profile(g: &FiniteStructure, n: usize) -> Result<Vec<(usize, u64)>> {
    let vertices: Vec<ElementId> = g.universe().iter().copied().collect();
    let mut out = Vec::new();
    for k in 1..=n {
        for t in tuples(&vertices, k) {
            out.push((k, block_size(g, &t)?));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Compares the orders of two graphs through their fragments.
///
/// The set of block sizes carried by coding elements of tuples as long as
/// the larger graph is an isomorphism invariant of the order, and a tuple
/// listing all vertices whose block size reappears on the other side gives a
/// vertex correspondence. That correspondence is then confirmed by extending
/// forth and back over both fragments.
pub fn fragments_isomorphic(
    g: &FiniteStructure,
    h: &FiniteStructure,
    max_len: usize,
    height: u64,
    budget: &Budget,
) -> Result<bool> {
    let n = g.len().max(h.len());
    if block_profile(g, n)? != block_profile(h, n)? {
        return Ok(false);
    }
    let gv: Vec<ElementId> = g.universe().iter().copied().collect();
    let hv: Vec<ElementId> = h.universe().iter().copied().collect();
    let m = block_size(g, &gv)?;
    let Some(ht) = tuples(&hv, n)
        .into_iter()
        .find(|t| block_size(h, t).ok() == Some(m))
    else {
        return Ok(false);
    };
    let iso: BTreeMap<ElementId, ElementId> = gv.iter().copied().zip(ht).collect();
    let mut map = FamilyMap::new(g, h, iso)?.with_step_cap(budget.dense_pick_step_cap);
    let gf = sweep_set(g, max_len, height, budget)?;
    let hf = sweep_set(h, max_len, height, budget)?;
    sweep(&mut map, &gf, &hf)?;
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::element::enumerate_fragment;

    fn path() -> FiniteStructure {
        FiniteStructure::graph(0..3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn extends_the_flip_of_a_path() {
        let g = path();
        let flip: BTreeMap<_, _> = [(0, 2), (1, 1), (2, 0)].into_iter().collect();
        let mut map = FamilyMap::new(&g, &g, flip).unwrap();
        map.insert(f_map(&g, &[0, 1]).unwrap(), f_map(&g, &[2, 1]).unwrap())
            .unwrap();
        let frag = enumerate_fragment(&g, 2, 2).unwrap();
        for x in &frag {
            let y = map.extend_forth(x).unwrap();
            assert!(member(&g, &y));
            let z = map.extend_back(x).unwrap();
            assert!(member(&g, &z));
        }
        let pairs = map.pairs().to_vec();
        for (a, a2) in &pairs {
            for (b, b2) in &pairs {
                assert_eq!(a.cmp(b), a2.cmp(b2));
            }
        }
    }

    #[test]
    fn rejects_bad_starts() {
        let g = path();
        let id: BTreeMap<_, _> = (0..3).map(|v| (v, v)).collect();
        let mut map = FamilyMap::new(&g, &g, id).unwrap();
        let wrong = map.insert(f_map(&g, &[0]).unwrap(), f_map(&g, &[1]).unwrap());
        assert!(matches!(wrong, Err(Error::Extension(_))));
        let not_iso: BTreeMap<_, _> = [(0, 1), (1, 0), (2, 2)].into_iter().collect();
        assert!(FamilyMap::new(&g, &g, not_iso).is_err());
    }

    #[test]
    fn orbits_of_a_path() {
        let g = path();
        let b = Budget::default();
        assert!(fragment_same_orbit(&g, &[0], &[2], 2, 2, &b).unwrap());
        assert!(!fragment_same_orbit(&g, &[0], &[1], 2, 2, &b).unwrap());
        assert!(fragment_same_orbit(&g, &[0, 1], &[2, 1], 2, 2, &b).unwrap());
    }

    #[test]
    fn isomorphism_of_orders() {
        let b = Budget::default();
        let g = path();
        let h = FiniteStructure::graph([5, 6, 7], [(5, 7), (7, 6)]).unwrap();
        let k = FiniteStructure::graph(0..3, [(0, 1)]).unwrap();
        assert!(fragments_isomorphic(&g, &h, 2, 2, &b).unwrap());
        assert!(!fragments_isomorphic(&g, &k, 2, 2, &b).unwrap());
    }
}
