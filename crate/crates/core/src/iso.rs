//! Isomorphism, automorphism, and orbit computation for finite structures.
//!
//! Both sides are colour-refined jointly (an element's new colour is its old
//! colour plus the multiset of coloured tuples it occurs in, per symbol and
//! argument position), then the search individualizes one element of the
//! smallest non-trivial cell and backtracks. Cells and candidates are always
//! visited in ascending order, so the witness returned for a given pair of
//! inputs never changes.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{check_budget, Error, Result};
use crate::structure::{ElementId, FiniteStructure};

/// A bijection between two universes, stored as sorted pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Bijection(BTreeMap<ElementId, ElementId>);

impl Bijection {
    pub fn identity(elems: impl IntoIterator<Item = ElementId>) -> Bijection {
        Bijection(elems.into_iter().map(|x| (x, x)).collect())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (ElementId, ElementId)>) -> Bijection {
        Bijection(pairs.into_iter().collect())
    }

    pub fn apply(&self, x: ElementId) -> Option<ElementId> {
        self.0.get(&x).copied()
    }

    pub fn apply_tuple(&self, t: &[ElementId]) -> Option<Vec<ElementId>> {
        t.iter().map(|&x| self.apply(x)).collect()
    }

    pub fn inverse(&self) -> Bijection {
        Bijection(self.0.iter().map(|(&a, &b)| (b, a)).collect())
    }

    /// `self` followed by `then`.
    pub fn compose(&self, then: &Bijection) -> Option<Bijection> {
        self.0
            .iter()
            .map(|(&a, &b)| then.apply(b).map(|c| (a, c)))
            .collect::<Option<BTreeMap<_, _>>>()
            .map(Bijection)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        self.0.iter().map(|(&a, &b)| (a, b))
    }

    pub fn as_map(&self) -> &BTreeMap<ElementId, ElementId> {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|(a, b)| a == b)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True iff the map is a bijection `|a| → |b|` preserving every relation
    /// in both directions.
    pub fn is_isomorphism(&self, a: &FiniteStructure, b: &FiniteStructure) -> bool {
        if a.signature() != b.signature() || a.len() != b.len() || self.0.len() != a.len() {
            return false;
        }
        if !a
            .universe()
            .iter()
            .all(|x| self.apply(*x).is_some_and(|y| b.contains(y)))
        {
            return false;
        }
        let image: HashSet<_> = self.0.values().collect();
        if image.len() != a.len() {
            return false;
        }
        (0..a.signature().len()).all(|s| {
            a.relation(s).len() == b.relation(s).len()
                && a.relation(s)
                    .iter()
                    .all(|t| b.holds(s, &self.apply_tuple(t).expect("total")))
        })
    }
}

/// Dense re-indexing of a structure: elements are `0..n` in ascending id order.
pub(crate) struct Dense {
    ids: Vec<ElementId>,
    rels: Vec<HashSet<Vec<u32>>>,
    /// For each element: (symbol, position, tuple) occurrences.
    incidence: Vec<Vec<(u32, u32, usize)>>,
    tuples: Vec<Vec<u32>>,
}

/// An element's colour with its sorted (symbol, position, tuple colours)
/// occurrences.
type Refined = (u32, Vec<(u32, u32, Vec<u32>)>);

impl Dense {
    pub(crate) fn new(s: &FiniteStructure) -> Dense {
        let ids: Vec<ElementId> = s.universe().iter().copied().collect();
        let index: HashMap<ElementId, u32> = ids
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i as u32))
            .collect();
        let mut rels = Vec::with_capacity(s.signature().len());
        let mut incidence = vec![Vec::new(); ids.len()];
        let mut tuples = Vec::new();
        for sym in 0..s.signature().len() {
            let mut rel = HashSet::new();
            for t in s.relation(sym) {
                let dt: Vec<u32> = t.iter().map(|x| index[x]).collect();
                let ti = tuples.len();
                for (pos, &x) in dt.iter().enumerate() {
                    incidence[x as usize].push((sym as u32, pos as u32, ti));
                }
                tuples.push(dt.clone());
                rel.insert(dt);
            }
            rels.push(rel);
        }
        Dense {
            ids,
            rels,
            incidence,
            tuples,
        }
    }

    pub(crate) fn n(&self) -> usize {
        self.ids.len()
    }

    pub(crate) fn id(&self, i: usize) -> ElementId {
        self.ids[i]
    }

    pub(crate) fn index_of(&self, x: ElementId) -> Option<usize> {
        self.ids.binary_search(&x).ok()
    }

    fn signature_of(&self, x: usize, colours: &[u32]) -> Refined {
        let mut occ: Vec<(u32, u32, Vec<u32>)> = self.incidence[x]
            .iter()
            .map(|&(s, p, ti)| {
                (
                    s,
                    p,
                    self.tuples[ti]
                        .iter()
                        .map(|&y| colours[y as usize])
                        .collect(),
                )
            })
            .collect();
        occ.sort_unstable();
        (colours[x], occ)
    }

    fn is_isomorphism(&self, other: &Dense, map: &[u32]) -> bool {
        self.rels.iter().zip(&other.rels).all(|(ra, rb)| {
            ra.len() == rb.len()
                && ra.iter().all(|t| {
                    let img: Vec<u32> = t.iter().map(|&x| map[x as usize]).collect();
                    rb.contains(&img)
                })
        })
    }
}

fn distinct(colours: &[Vec<u32>]) -> usize {
    let set: HashSet<u32> = colours.iter().flatten().copied().collect();
    set.len()
}

/// Joint colour refinement to the coarsest equitable partition.
fn refine(structs: &[&Dense], colours: &mut [Vec<u32>]) {
    let mut classes = distinct(colours);
    loop {
        let sigs: Vec<Vec<_>> = structs
            .iter()
            .zip(colours.iter())
            .map(|(d, c)| (0..d.n()).map(|x| d.signature_of(x, c)).collect())
            .collect();
        let mut all: Vec<&Refined> = sigs.iter().flatten().collect();
        all.sort_unstable();
        all.dedup();
        for (c, s) in colours.iter_mut().zip(&sigs) {
            for (slot, sig) in c.iter_mut().zip(s) {
                *slot = all.binary_search(&sig).expect("present") as u32;
            }
        }
        if all.len() == classes {
            return;
        }
        classes = all.len();
    }
}

/// Initial colouring with the tuple entries individualized; a repeated entry
/// keeps the colour of its first occurrence.
fn pointed_colours(n: usize, tuple: &[usize]) -> Vec<u32> {
    let mut c = vec![0u32; n];
    for (i, &x) in tuple.iter().enumerate() {
        if c[x] == 0 {
            c[x] = i as u32 + 1;
        }
    }
    c
}

fn same_equality_pattern(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (0..a.len()).all(|i| (0..i).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

fn search(a: &Dense, b: &Dense, ca: Vec<u32>, cb: Vec<u32>) -> Option<Vec<u32>> {
    let mut cols = [ca, cb];
    refine(&[a, b], &mut cols);
    let [ca, cb] = cols;
    let mut hist: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
    for &c in &ca {
        hist.entry(c).or_default().0 += 1;
    }
    for &c in &cb {
        hist.entry(c).or_default().1 += 1;
    }
    if hist.values().any(|(x, y)| x != y) {
        return None;
    }
    let target = hist
        .iter()
        .filter(|(_, (x, _))| *x > 1)
        .min_by_key(|(c, (x, _))| (*x, **c))
        .map(|(c, _)| *c);
    match target {
        None => {
            let mut by_colour = vec![0u32; cb.len()];
            for (y, &c) in cb.iter().enumerate() {
                by_colour[c as usize] = y as u32;
            }
            let map: Vec<u32> = ca.iter().map(|&c| by_colour[c as usize]).collect();
            a.is_isomorphism(b, &map).then_some(map)
        }
        Some(t) => {
            let fresh = hist.keys().next_back().copied().unwrap_or(0) + 1;
            let x = ca.iter().position(|&c| c == t).expect("cell nonempty");
            for y in (0..cb.len()).filter(|&y| cb[y] == t) {
                let mut ca2 = ca.clone();
                let mut cb2 = cb.clone();
                ca2[x] = fresh;
                cb2[y] = fresh;
                if let Some(m) = search(a, b, ca2, cb2) {
                    return Some(m);
                }
            }
            None
        }
    }
}

fn check_iso_inputs(a: &FiniteStructure, b: &FiniteStructure, budget: &Budget) -> Result<()> {
    a.signature().ensure_same(b.signature())?;
    let n = a.len().max(b.len());
    check_budget(
        "isomorphism search universe",
        n as u128,
        budget.iso_max_universe as u128,
    )
}

fn to_bijection(a: &Dense, b: &Dense, map: &[u32]) -> Bijection {
    Bijection(
        map.iter()
            .enumerate()
            .map(|(x, &y)| (a.id(x), b.id(y as usize)))
            .collect(),
    )
}

/// An isomorphism `a → b`, or `None`. Deterministic.
pub fn isomorphic(a: &FiniteStructure, b: &FiniteStructure) -> Result<Option<Bijection>> {
    isomorphic_within(a, b, &Budget::default())
}

pub fn isomorphic_within(
    a: &FiniteStructure,
    b: &FiniteStructure,
    budget: &Budget,
) -> Result<Option<Bijection>> {
    pointed_isomorphic_within(a, &[], b, &[], budget)
}

/// An isomorphism `(a, ta) → (b, tb)`: it must send `ta[i]` to `tb[i]`.
pub fn pointed_isomorphic(
    a: &FiniteStructure,
    ta: &[ElementId],
    b: &FiniteStructure,
    tb: &[ElementId],
) -> Result<Option<Bijection>> {
    pointed_isomorphic_within(a, ta, b, tb, &Budget::default())
}

pub fn pointed_isomorphic_within(
    a: &FiniteStructure,
    ta: &[ElementId],
    b: &FiniteStructure,
    tb: &[ElementId],
    budget: &Budget,
) -> Result<Option<Bijection>> {
    check_iso_inputs(a, b, budget)?;
    if ta.len() != tb.len() {
        return Err(Error::LengthMismatch(ta.len(), tb.len()));
    }
    if a.len() != b.len() {
        return Ok(None);
    }
    let (da, db) = (Dense::new(a), Dense::new(b));
    let ia = dense_tuple(&da, ta)?;
    let ib = dense_tuple(&db, tb)?;
    if !same_equality_pattern(&ia, &ib) {
        return Ok(None);
    }
    let ca = pointed_colours(da.n(), &ia);
    let cb = pointed_colours(db.n(), &ib);
    Ok(search(&da, &db, ca, cb).map(|m| to_bijection(&da, &db, &m)))
}

fn dense_tuple(d: &Dense, t: &[ElementId]) -> Result<Vec<usize>> {
    t.iter()
        .map(|&x| {
            d.index_of(x)
                .ok_or_else(|| Error::Structure(format!("{x} is not in the universe")))
        })
        .collect()
}

/// Generators of the automorphism group, as dense permutations. The set is
/// the union of transversals along a stabilizer chain, so it generates the
/// whole group.
pub(crate) fn generators_dense(d: &Dense) -> Vec<Vec<u32>> {
    let n = d.n();
    let mut fixed: Vec<usize> = Vec::new();
    let mut gens: Vec<Vec<u32>> = Vec::new();
    loop {
        let mut cols = [pointed_colours(n, &fixed)];
        refine(&[d], &mut cols);
        let [colours] = cols;
        let mut sizes: BTreeMap<u32, usize> = BTreeMap::new();
        for &c in &colours {
            *sizes.entry(c).or_default() += 1;
        }
        let Some(cell) = sizes
            .iter()
            .filter(|(_, &s)| s > 1)
            .min_by_key(|(c, s)| (**s, **c))
            .map(|(c, _)| *c)
        else {
            break;
        };
        let members: Vec<usize> = (0..n).filter(|&y| colours[y] == cell).collect();
        let x = members[0];
        let mut level: Vec<Vec<u32>> = Vec::new();
        let mut orbit: HashSet<usize> = HashSet::from([x]);
        for &y in &members[1..] {
            if orbit.contains(&y) {
                continue;
            }
            let mut tx = fixed.clone();
            tx.push(x);
            let mut ty = fixed.clone();
            ty.push(y);
            if let Some(p) = search(d, d, pointed_colours(n, &tx), pointed_colours(n, &ty)) {
                level.push(p);
                orbit = point_orbit(x, &level);
            }
        }
        gens.extend(level);
        fixed.push(x);
    }
    gens
}

fn point_orbit(x: usize, gens: &[Vec<u32>]) -> HashSet<usize> {
    let mut seen = HashSet::from([x]);
    let mut stack = vec![x];
    while let Some(y) = stack.pop() {
        for g in gens {
            let z = g[y] as usize;
            if seen.insert(z) {
                stack.push(z);
            }
        }
    }
    seen
}

fn dense_to_bijection(d: &Dense, p: &[u32]) -> Bijection {
    Bijection(
        p.iter()
            .enumerate()
            .map(|(x, &y)| (d.id(x), d.id(y as usize)))
            .collect(),
    )
}

/// A generating set of `Aut(a)` (empty when the group is trivial).
pub fn automorphism_generators(a: &FiniteStructure) -> Result<Vec<Bijection>> {
    automorphism_generators_within(a, &Budget::default())
}

pub fn automorphism_generators_within(
    a: &FiniteStructure,
    budget: &Budget,
) -> Result<Vec<Bijection>> {
    check_budget(
        "automorphism search universe",
        a.len() as u128,
        budget.iso_max_universe as u128,
    )?;
    let d = Dense::new(a);
    Ok(generators_dense(&d)
        .iter()
        .map(|p| dense_to_bijection(&d, p))
        .collect())
}

/// Every automorphism of `a`, sorted. Only for small universes.
pub fn automorphisms(a: &FiniteStructure) -> Result<Vec<Bijection>> {
    automorphisms_within(a, &Budget::default())
}

pub fn automorphisms_within(a: &FiniteStructure, budget: &Budget) -> Result<Vec<Bijection>> {
    check_budget(
        "automorphism listing universe",
        a.len() as u128,
        budget.automorphism_listing_max as u128,
    )?;
    let d = Dense::new(a);
    let gens = generators_dense(&d);
    let id: Vec<u32> = (0..d.n() as u32).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([id.clone()]);
    let mut stack = vec![id];
    while let Some(p) = stack.pop() {
        for g in &gens {
            let q: Vec<u32> = p.iter().map(|&x| g[x as usize]).collect();
            if seen.insert(q.clone()) {
                stack.push(q);
            }
        }
    }
    let mut all: Vec<Bijection> = seen.iter().map(|p| dense_to_bijection(&d, p)).collect();
    all.sort();
    Ok(all)
}

/// The partition of `A^k` into automorphism orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    elements: Vec<ElementId>,
    k: usize,
    /// Orbit label per tuple, tuples indexed in lexicographic order.
    labels: Vec<u32>,
}

impl OrbitPartition {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tuple_count(&self) -> usize {
        self.labels.len()
    }

    fn index(&self, t: &[ElementId]) -> Option<usize> {
        if t.len() != self.k {
            return None;
        }
        let n = self.elements.len();
        let mut idx = 0usize;
        for x in t {
            idx = idx * n + self.elements.binary_search(x).ok()?;
        }
        Some(idx)
    }

    fn tuple_at(&self, mut idx: usize) -> Vec<ElementId> {
        let n = self.elements.len();
        let mut t = vec![0; self.k];
        for slot in t.iter_mut().rev() {
            *slot = self.elements[idx % n];
            idx /= n;
        }
        t
    }

    /// Orbit label of `t`; labels are numbered by first occurrence.
    pub fn label(&self, t: &[ElementId]) -> Option<u32> {
        self.index(t).map(|i| self.labels[i])
    }

    pub fn same_orbit(&self, a: &[ElementId], b: &[ElementId]) -> bool {
        matches!((self.label(a), self.label(b)), (Some(x), Some(y)) if x == y)
    }

    pub fn orbit_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Cells in order of their least tuple, each sorted.
    pub fn cells(&self) -> Vec<Vec<Vec<ElementId>>> {
        let mut cells = vec![Vec::new(); self.orbit_count()];
        for (i, &l) in self.labels.iter().enumerate() {
            cells[l as usize].push(self.tuple_at(i));
        }
        cells
    }
}

/// Orbits of `Aut(a)` on k-tuples.
pub fn orbits(a: &FiniteStructure, k: usize) -> Result<OrbitPartition> {
    orbits_within(a, k, &Budget::default())
}

pub fn orbits_within(a: &FiniteStructure, k: usize, budget: &Budget) -> Result<OrbitPartition> {
    let n = a.len();
    let total = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    check_budget("orbit tuples", total, budget.orbit_tuple_max)?;
    check_budget(
        "automorphism search universe",
        n as u128,
        budget.iso_max_universe as u128,
    )?;
    let d = Dense::new(a);
    let gens = generators_dense(&d);
    let total = total as usize;
    let mut uf = UnionFind::new(total);
    let mut digits = vec![0usize; k];
    for idx in 0..total {
        let mut rest = idx;
        for slot in digits.iter_mut().rev() {
            *slot = rest % n;
            rest /= n;
        }
        for g in &gens {
            let img = digits
                .iter()
                .fold(0usize, |acc, &x| acc * n + g[x] as usize);
            uf.union(idx, img);
        }
    }
    let mut relabel: HashMap<usize, u32> = HashMap::new();
    let labels = (0..total)
        .map(|i| {
            let r = uf.find(i);
            let next = relabel.len() as u32;
            *relabel.entry(r).or_insert(next)
        })
        .collect();
    Ok(OrbitPartition {
        elements: a.universe().iter().copied().collect(),
        k,
        labels,
    })
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Signature;

    fn graph(n: u64, edges: &[(u64, u64)]) -> FiniteStructure {
        FiniteStructure::graph(0..n, edges.iter().copied()).unwrap()
    }

    fn all_perms(n: usize) -> Vec<Vec<u64>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, (n - 1) as u64);
                out.push(q);
            }
        }
        out
    }

    /// Brute-force automorphism count over all permutations.
    fn brute_aut_count(g: &FiniteStructure) -> usize {
        let n = g.len();
        all_perms(n)
            .into_iter()
            .filter(|p| {
                Bijection::from_pairs((0..n as u64).zip(p.iter().copied())).is_isomorphism(g, g)
            })
            .count()
    }

    #[test]
    fn singletons_are_isomorphic() {
        let a = graph(1, &[]);
        let w = isomorphic(&a, &a).unwrap().unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn p3_is_k12() {
        let p3 = graph(3, &[(0, 1), (1, 2)]);
        let star = graph(3, &[(1, 0), (0, 2)]);
        let w = isomorphic(&p3, &star).unwrap().unwrap();
        assert!(w.is_isomorphism(&p3, &star));
        assert_eq!(w.apply(1), Some(0));
    }

    #[test]
    fn p4_is_not_k13() {
        let p4 = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        // oracle: none of the 24 bijections works
        let brute = all_perms(4)
            .into_iter()
            .any(|p| Bijection::from_pairs((0..4).zip(p)).is_isomorphism(&p4, &star));
        assert!(!brute);
        assert_eq!(isomorphic(&p4, &star).unwrap(), None);
    }

    #[test]
    fn witness_is_deterministic() {
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let other = graph(4, &[(0, 2), (2, 1), (1, 3), (3, 0)]);
        let w1 = isomorphic(&c4, &other).unwrap();
        let w2 = isomorphic(&c4, &other).unwrap();
        assert_eq!(w1, w2);
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let g = graph(2, &[]);
        let o = FiniteStructure::new(Signature::binary("<"), [0, 1]);
        assert!(matches!(
            isomorphic(&g, &o),
            Err(Error::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn automorphism_examples() {
        let empty3 = graph(3, &[]);
        assert_eq!(automorphisms(&empty3).unwrap().len(), 6);

        let mut chain = FiniteStructure::new(Signature::binary("S"), 0..3);
        chain.insert("S", vec![0, 1]).unwrap();
        chain.insert("S", vec![1, 2]).unwrap();
        let auts = automorphisms(&chain).unwrap();
        assert_eq!(auts.len(), 1);
        assert!(auts[0].is_identity());

        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(brute_aut_count(&c4), 8);
        assert_eq!(automorphisms(&c4).unwrap().len(), 8);
    }

    #[test]
    fn listing_cap() {
        let big = graph(9, &[]);
        assert!(matches!(automorphisms(&big), Err(Error::Budget { .. })));
        assert!(!automorphism_generators(&big).unwrap().is_empty());
    }

    #[test]
    fn orbit_examples() {
        let e2 = graph(2, &[]);
        let o = orbits(&e2, 1).unwrap();
        assert_eq!(o.cells(), vec![vec![vec![0], vec![1]]]);

        let mut chain = FiniteStructure::new(Signature::binary("<"), 0..2);
        chain.insert("<", vec![0, 1]).unwrap();
        assert_eq!(orbits(&chain, 1).unwrap().orbit_count(), 2);

        // 4-cycle pairs: distance 0, 1, 2 give the three orbits.
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let o = orbits(&c4, 2).unwrap();
        assert_eq!(o.orbit_count(), 3);
        let dist = |a: u64, b: u64| -> u64 {
            let d = (a as i64 - b as i64).rem_euclid(4) as u64;
            d.min(4 - d)
        };
        for cell in o.cells() {
            let d0 = dist(cell[0][0], cell[0][1]);
            assert!(cell.iter().all(|t| dist(t[0], t[1]) == d0));
        }
    }

    #[test]
    fn orbit_budget() {
        let g = graph(10, &[]);
        let tight = Budget {
            orbit_tuple_max: 99,
            ..Budget::default()
        };
        assert!(orbits_within(&g, 2, &tight).is_err());
        assert!(orbits_within(&g, 1, &tight).is_ok());
    }
}
