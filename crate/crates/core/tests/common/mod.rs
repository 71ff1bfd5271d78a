//! Slow, direct reimplementations used as oracles by the integration tests.
//! Nothing here calls into the library code under test except to read
//! structures and trees.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use scottkit::trees::{FiniteTree, Node};
use scottkit::{ElementId, FiniteStructure};

/// All permutations of `items`, in no particular order.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.push(p);
        }
    }
    out
}

fn index_tuples(len: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| (0..len).map(move |i| [t.clone(), vec![i]].concat()))
            .collect();
    }
    out
}

/// Same equalities and same relation facts on every choice of positions.
pub fn atomic_agree(
    a: &FiniteStructure,
    ta: &[ElementId],
    b: &FiniteStructure,
    tb: &[ElementId],
) -> bool {
    if ta.len() != tb.len() {
        return false;
    }
    for i in 0..ta.len() {
        for j in 0..ta.len() {
            if (ta[i] == ta[j]) != (tb[i] == tb[j]) {
                return false;
            }
        }
    }
    for (s, sym) in a.signature().symbols().iter().enumerate() {
        for pos in index_tuples(ta.len(), sym.arity) {
            let xa: Vec<ElementId> = pos.iter().map(|&i| ta[i]).collect();
            let xb: Vec<ElementId> = pos.iter().map(|&i| tb[i]).collect();
            if a.holds(s, &xa) != b.holds(s, &xb) {
                return false;
            }
        }
    }
    true
}

/// Every bijection `A → B` checked fact by fact.
pub fn brute_isomorphisms(
    a: &FiniteStructure,
    b: &FiniteStructure,
) -> Vec<BTreeMap<ElementId, ElementId>> {
    if a.len() != b.len() || a.signature() != b.signature() {
        return vec![];
    }
    let ea: Vec<ElementId> = a.universe().iter().copied().collect();
    let eb: Vec<ElementId> = b.universe().iter().copied().collect();
    permutations(&eb)
        .into_iter()
        .filter(|p| atomic_agree(a, &ea, b, p))
        .map(|p| ea.iter().copied().zip(p).collect())
        .collect()
}

pub fn brute_isomorphic(a: &FiniteStructure, b: &FiniteStructure) -> bool {
    !brute_isomorphisms(a, b).is_empty()
}

/// `(A, ta) ≅ (B, tb)`.
pub fn brute_pointed_iso(
    a: &FiniteStructure,
    ta: &[ElementId],
    b: &FiniteStructure,
    tb: &[ElementId],
) -> bool {
    ta.len() == tb.len()
        && brute_isomorphisms(a, b)
            .iter()
            .any(|m| ta.iter().zip(tb).all(|(x, y)| m[x] == *y))
}

/// Orbit labels of all k-tuples (every element in every position), keyed by
/// tuple, under the brute-force automorphism group.
pub fn brute_orbits(a: &FiniteStructure, k: usize) -> BTreeMap<Vec<ElementId>, usize> {
    let elems: Vec<ElementId> = a.universe().iter().copied().collect();
    let autos = brute_isomorphisms(a, a);
    let mut label = BTreeMap::new();
    let mut next = 0;
    for pos in index_tuples(elems.len(), k) {
        let t: Vec<ElementId> = pos.iter().map(|&i| elems[i]).collect();
        if label.contains_key(&t) {
            continue;
        }
        for m in &autos {
            label.insert(t.iter().map(|x| m[x]).collect(), next);
        }
        next += 1;
    }
    label
}

/// Back-and-forth equivalence of injective tuples of one structure, read
/// straight from the recursive definition. Extending by an element already
/// in the tuple is matched by the element in the same position, so only
/// fresh elements are tried.
pub struct NaiveBf<'a> {
    a: &'a FiniteStructure,
    autos: Vec<BTreeMap<ElementId, ElementId>>,
    memo: HashMap<(Vec<ElementId>, Vec<ElementId>, usize), bool>,
}

impl<'a> NaiveBf<'a> {
    pub fn new(a: &'a FiniteStructure) -> NaiveBf<'a> {
        NaiveBf {
            a,
            autos: brute_isomorphisms(a, a),
            memo: HashMap::new(),
        }
    }

    pub fn equiv(&mut self, x: &[ElementId], y: &[ElementId], level: usize) -> bool {
        let key = (x.to_vec(), y.to_vec(), level);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = if level == 0 {
            atomic_agree(self.a, x, self.a, y)
        } else {
            self.equiv(x, y, level - 1)
                && self.forth(x, y, level - 1)
                && self.forth(y, x, level - 1)
        };
        self.memo.insert(key, v);
        v
    }

    /// Every fresh `c` beside `x` has a fresh `d` beside `y`.
    fn forth(&mut self, x: &[ElementId], y: &[ElementId], level: usize) -> bool {
        let elems: Vec<ElementId> = self.a.universe().iter().copied().collect();
        for &c in elems.iter().filter(|c| !x.contains(c)) {
            let xc = [x, &[c]].concat();
            let found = elems
                .iter()
                .filter(|d| !y.contains(d))
                .any(|&d| self.equiv(&xc, &[y, &[d]].concat(), level));
            if !found {
                return false;
            }
        }
        true
    }

    /// Least level at which equivalence to `x` forces a pointed isomorphism.
    pub fn tuple_rank(&mut self, x: &[ElementId]) -> usize {
        let others = injective_tuples(self.a, x.len());
        for level in 0.. {
            let a = self.a;
            if others
                .iter()
                .all(|y| !self.equiv(x, y, level) || brute_pointed_iso(a, x, a, y))
            {
                return level;
            }
            assert!(level <= 2 * a.len() + 2, "no rank found for {x:?}");
        }
        unreachable!()
    }
}

pub fn injective_tuples(a: &FiniteStructure, len: usize) -> Vec<Vec<ElementId>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t: Vec<ElementId>| {
                a.universe()
                    .iter()
                    .filter(|c| !t.contains(c))
                    .map(|&c| [t.clone(), vec![c]].concat())
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

/// One more than the largest rank of an injective tuple.
pub fn naive_scott_rank(a: &FiniteStructure) -> usize {
    let mut bf = NaiveBf::new(a);
    let mut top = 0;
    for len in 0..=a.len() {
        for t in injective_tuples(a, len) {
            top = top.max(bf.tuple_rank(&t));
        }
    }
    top + 1
}

/// Nested-parenthesis canonical string of the subtree at `at`.
pub fn tree_code(t: &FiniteTree, at: &[u32]) -> String {
    let mut kids: Vec<String> = t
        .children(at)
        .into_iter()
        .map(|c| tree_code(t, c))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

pub fn tree_canon(t: &FiniteTree) -> String {
    if t.is_empty() {
        String::new()
    } else {
        tree_code(t, &[])
    }
}

/// Rooted trees with `n` nodes from all parent arrays, one per canonical code.
pub fn brute_rooted_trees(n: usize) -> Vec<FiniteTree> {
    fn from_parents(parents: &[usize]) -> FiniteTree {
        let mut paths: Vec<Node> = vec![vec![]];
        let mut used = vec![0u32; parents.len() + 1];
        for &p in parents {
            let mut path = paths[p].clone();
            path.push(used[p]);
            used[p] += 1;
            paths.push(path);
        }
        FiniteTree::new(paths).expect("parents precede children")
    }
    let mut seen = BTreeMap::new();
    let mut parents = vec![0usize; n.saturating_sub(1)];
    loop {
        let t = from_parents(&parents);
        seen.entry(tree_canon(&t)).or_insert(t);
        // node i + 1 may hang below any of 0..=i
        let mut i = parents.len();
        loop {
            if i == 0 {
                return seen.into_values().collect();
            }
            i -= 1;
            if parents[i] < i {
                parents[i] += 1;
                for p in &mut parents[i + 1..] {
                    *p = 0;
                }
                break;
            }
        }
    }
}

/// Labelled graphs on `0..n`, one per isomorphism class, deduplicated by
/// brute-force isomorphism.
pub fn brute_graphs(n: u64) -> Vec<FiniteStructure> {
    let pairs: Vec<(u64, u64)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let mut reps: Vec<FiniteStructure> = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        let g = FiniteStructure::graph(0..n, edges).unwrap();
        if !reps.iter().any(|r| brute_isomorphic(r, &g)) {
            reps.push(g);
        }
    }
    reps
}

/// Rank-homogeneous tree built top down by recursion: a node of rank `α` at
/// level `n` gets `k` subtrees for each listed rank below `α` at level
/// `n + 1`, largest rank first.
pub fn recursive_rank_homogeneous(levels: &[BTreeSet<u64>], k: usize) -> FiniteTree {
    fn build(
        levels: &[BTreeSet<u64>],
        k: usize,
        depth: usize,
        rank: u64,
        path: Node,
        out: &mut Vec<Node>,
    ) {
        out.push(path.clone());
        let Some(next) = levels.get(depth + 1) else {
            return;
        };
        let mut child = 0u32;
        for &beta in next.iter().rev().filter(|&&b| b < rank) {
            for _ in 0..k {
                let mut p = path.clone();
                p.push(child);
                child += 1;
                build(levels, k, depth + 1, beta, p, out);
            }
        }
    }
    let root = *levels[0].iter().next().expect("root rank");
    let mut nodes = Vec::new();
    build(levels, k, 0, root, vec![], &mut nodes);
    FiniteTree::new(nodes).expect("prefix closed")
}

/// Ranks by the leaf-up definition, computed from the node set alone.
pub fn naive_node_ranks(t: &FiniteTree) -> BTreeMap<Node, u64> {
    let mut ranks = BTreeMap::new();
    for n in t.nodes().iter().rev() {
        let r = t
            .children(n)
            .iter()
            .map(|c| ranks[*c] + 1)
            .max()
            .unwrap_or(0);
        ranks.insert(n.clone(), r);
    }
    ranks
}
