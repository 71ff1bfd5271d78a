//! Finite trees under the prefix order: ranks, rank spectra, thinness of
//! level specifications below ω², truncated rank-homogeneity, and a
//! generator for rank-homogeneous trees with exact child multiplicities.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{check_budget, Error, Result};
use crate::structure::{ElementId, FiniteStructure, Signature, Symbol};

pub type Node = Vec<u32>;

/// Name of the successor relation in the structure view of a tree.
pub const SUCCESSOR: &str = "S";
pub const ROOT: &str = "root";

/// `{S/2, root/1}`; `S(a, b)` holds when `b` is a child of `a`.
pub fn tree_signature() -> Signature {
    Signature::new(vec![
        Symbol::relation(SUCCESSOR, 2),
        Symbol::relation(ROOT, 1),
    ])
    .expect("static signature")
}

/// A prefix-closed set of sequences; the empty sequence is the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Node>", into = "Vec<Node>")]
pub struct FiniteTree {
    nodes: BTreeSet<Node>,
}

impl TryFrom<Vec<Node>> for FiniteTree {
    type Error = Error;

    fn try_from(nodes: Vec<Node>) -> Result<Self> {
        FiniteTree::new(nodes)
    }
}

impl From<FiniteTree> for Vec<Node> {
    fn from(t: FiniteTree) -> Self {
        t.nodes.into_iter().collect()
    }
}

impl FiniteTree {
    pub fn new(nodes: impl IntoIterator<Item = Node>) -> Result<FiniteTree> {
        let nodes: BTreeSet<Node> = nodes.into_iter().collect();
        for n in &nodes {
            if let Some((_, parent)) = n.split_last() {
                if !nodes.contains(parent) {
                    return Err(Error::Tree(format!("{n:?} present but its parent is not")));
                }
            }
        }
        Ok(FiniteTree { nodes })
    }

    /// The tree with only a root.
    pub fn root_only() -> FiniteTree {
        FiniteTree {
            nodes: [vec![]].into(),
        }
    }

    /// A path with `n` nodes: ε, ⟨0⟩, ⟨0,0⟩, ...
    pub fn chain(n: usize) -> FiniteTree {
        FiniteTree {
            nodes: (0..n).map(|k| vec![0; k]).collect(),
        }
    }

    pub fn nodes(&self) -> &BTreeSet<Node> {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, n: &[u32]) -> bool {
        self.nodes.contains(n)
    }

    /// Adds a node together with all of its prefixes.
    pub fn insert_path(&mut self, n: &[u32]) {
        for k in 0..=n.len() {
            self.nodes.insert(n[..k].to_vec());
        }
    }

    /// Children in increasing order.
    pub fn children(&self, n: &[u32]) -> Vec<&Node> {
        self.nodes
            .range(n.to_vec()..)
            .skip(1)
            .take_while(|m| m.starts_with(n))
            .filter(|m| m.len() == n.len() + 1)
            .collect()
    }

    pub fn level(&self, depth: usize) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(move |n| n.len() == depth)
    }

    /// Length of the longest node, or `None` for the empty tree.
    pub fn height(&self) -> Option<usize> {
        self.nodes.iter().map(|n| n.len()).max()
    }

    /// Attaches `sub` below a fresh child of the root.
    pub fn graft(&mut self, sub: &FiniteTree) {
        self.insert_path(&[]);
        let next = self.children(&[]).last().map_or(0, |c| c[0] + 1);
        for n in &sub.nodes {
            let mut m = vec![next];
            m.extend(n);
            self.nodes.insert(m);
        }
    }

    /// Ranks of all nodes, bottom-up.
    pub fn ranks(&self) -> BTreeMap<Node, u64> {
        let mut out: BTreeMap<Node, u64> = BTreeMap::new();
        let mut by_depth: Vec<&Node> = self.nodes.iter().collect();
        by_depth.sort_by_key(|n| std::cmp::Reverse(n.len()));
        for n in by_depth {
            let r = self
                .children(n)
                .iter()
                .map(|c| out[*c] + 1)
                .max()
                .unwrap_or(0);
            out.insert(n.clone(), r);
        }
        out
    }

    /// Position of each node in lexicographic order; the structure view uses
    /// these as element ids.
    pub fn node_ids(&self) -> BTreeMap<Node, ElementId> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as ElementId))
            .collect()
    }

    pub fn to_structure(&self) -> FiniteStructure {
        let ids = self.node_ids();
        let mut s = FiniteStructure::new(tree_signature(), ids.values().copied());
        for (n, &id) in &ids {
            match n.split_last() {
                Some((_, parent)) => s.insert(SUCCESSOR, vec![ids[parent], id]),
                None => s.insert(ROOT, vec![id]),
            }
            .expect("ids are in the universe");
        }
        s
    }

    /// Reads a tree back from a successor structure: one root, every other
    /// element with exactly one parent, no cycles. Children are numbered in
    /// increasing id order.
    pub fn from_structure(s: &FiniteStructure) -> Result<FiniteTree> {
        tree_signature().ensure_same(s.signature())?;
        let roots: Vec<ElementId> = s.relation(1).iter().map(|t| t[0]).collect();
        if s.is_empty() {
            return if roots.is_empty() {
                Ok(FiniteTree::default())
            } else {
                Err(Error::Tree("root outside universe".into()))
            };
        }
        let [root] = roots[..] else {
            return Err(Error::Tree(format!(
                "expected one root, found {}",
                roots.len()
            )));
        };
        let mut kids: BTreeMap<ElementId, Vec<ElementId>> = BTreeMap::new();
        let mut parents: BTreeMap<ElementId, usize> = BTreeMap::new();
        for t in s.relation(0) {
            kids.entry(t[0]).or_default().push(t[1]);
            *parents.entry(t[1]).or_default() += 1;
        }
        let mut nodes = BTreeSet::new();
        let mut stack = vec![(root, Vec::new())];
        let mut seen = BTreeSet::new();
        while let Some((x, path)) = stack.pop() {
            if !seen.insert(x) {
                return Err(Error::Tree(format!("element {x} reached twice")));
            }
            for (i, &c) in kids.get(&x).into_iter().flatten().enumerate() {
                let mut p: Node = path.clone();
                p.push(i as u32);
                stack.push((c, p));
            }
            nodes.insert(path);
        }
        if seen.len() != s.len() || parents.contains_key(&root) || parents.values().any(|&p| p != 1)
        {
            return Err(Error::Tree(
                "successor relation is not a rooted tree".into(),
            ));
        }
        Ok(FiniteTree { nodes })
    }

    /// A string equal for two trees exactly when they are isomorphic.
    pub fn canonical_form(&self) -> String {
        if self.is_empty() {
            String::new()
        } else {
            sub_form(self, &[])
        }
    }

    /// The isomorphic tree whose children are numbered `0..` in the order of
    /// their canonical forms.
    pub fn canonical(&self) -> FiniteTree {
        fn go(t: &FiniteTree, n: &[u32], at: Node, out: &mut BTreeSet<Node>) {
            let mut kids: Vec<(String, &Node)> = t
                .children(n)
                .into_iter()
                .map(|c| (sub_form(t, c), c))
                .collect();
            kids.sort();
            for (i, (_, c)) in kids.into_iter().enumerate() {
                let mut m = at.clone();
                m.push(i as u32);
                go(t, c, m, out);
            }
            out.insert(at);
        }
        let mut nodes = BTreeSet::new();
        if !self.is_empty() {
            go(self, &[], vec![], &mut nodes);
        }
        FiniteTree { nodes }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trees serialize")
    }

    pub fn from_json(text: &str) -> Result<FiniteTree> {
        Ok(serde_json::from_str(text)?)
    }
}

fn sub_form(t: &FiniteTree, n: &[u32]) -> String {
    let mut parts: Vec<String> = t.children(n).iter().map(|c| sub_form(t, c)).collect();
    parts.sort();
    format!("({})", parts.concat())
}

/// Rank of `sigma`: 0 for leaves, otherwise the least natural exceeding every
/// child rank.
pub fn tree_rank(t: &FiniteTree, sigma: &[u32]) -> Result<u64> {
    if !t.contains(sigma) {
        return Err(Error::NodeAbsent(sigma.to_vec()));
    }
    Ok(t.ranks()[sigma])
}

/// Ranks of the nodes at level `n`, sorted.
pub fn rank_spectrum(t: &FiniteTree, n: usize) -> Vec<u64> {
    let ranks = t.ranks();
    let mut v: Vec<u64> = t.level(n).map(|m| ranks[m]).collect();
    v.sort_unstable();
    v
}

/// Ranks occurring at each level, from the root down.
pub fn rank_sets(t: &FiniteTree) -> Vec<BTreeSet<u64>> {
    let ranks = t.ranks();
    let mut out = vec![BTreeSet::new(); t.height().map_or(0, |h| h + 1)];
    for (n, r) in ranks {
        out[n.len()].insert(r);
    }
    out
}

/// `ω·a + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SmallOrdinal {
    pub a: u64,
    pub b: u64,
}

impl SmallOrdinal {
    pub const ZERO: SmallOrdinal = SmallOrdinal { a: 0, b: 0 };

    pub fn finite(b: u64) -> SmallOrdinal {
        SmallOrdinal { a: 0, b }
    }

    pub fn omega_times(a: u64) -> SmallOrdinal {
        SmallOrdinal { a, b: 0 }
    }
}

impl fmt::Display for SmallOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, b) => write!(f, "{b}"),
            (1, 0) => write!(f, "ω"),
            (1, b) => write!(f, "ω+{b}"),
            (a, 0) => write!(f, "ω·{a}"),
            (a, b) => write!(f, "ω·{a}+{b}"),
        }
    }
}

/// A set of ordinals below ω² given by finitely many pieces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRanks {
    /// Individual ranks.
    #[serde(default)]
    pub points: BTreeSet<SmallOrdinal>,
    /// `a` here stands for the whole block `{ω·a + b : b ∈ ℕ}`.
    #[serde(default)]
    pub blocks: BTreeSet<u64>,
    /// `b` here stands for `{ω·a + b : a ∈ ℕ}`.
    #[serde(default)]
    pub columns: BTreeSet<u64>,
    /// Annotation only: the level also has nodes of rank ∞.
    #[serde(default)]
    pub infinite: bool,
}

impl LevelRanks {
    pub fn finite(ranks: impl IntoIterator<Item = u64>) -> LevelRanks {
        LevelRanks {
            points: ranks.into_iter().map(SmallOrdinal::finite).collect(),
            ..Default::default()
        }
    }

    fn is_finite_set(&self) -> bool {
        self.blocks.is_empty() && self.columns.is_empty()
    }

    /// Order type of the described set.
    pub fn order_type(&self) -> SmallOrdinal {
        if !self.columns.is_empty() {
            // infinitely many nonempty finite blocks after the last full one
            return SmallOrdinal::omega_times(self.blocks.len() as u64 + 1);
        }
        let tail = match self.blocks.iter().next_back() {
            Some(&last) => self.points.iter().filter(|p| p.a > last).count(),
            None => self.points.len(),
        };
        SmallOrdinal {
            a: self.blocks.len() as u64,
            b: tail as u64,
        }
    }
}

/// Rank sets per level, from the root down.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub levels: Vec<LevelRanks>,
}

impl LevelSpec {
    pub fn finite(levels: impl IntoIterator<Item = impl IntoIterator<Item = u64>>) -> LevelSpec {
        LevelSpec {
            levels: levels.into_iter().map(LevelRanks::finite).collect(),
        }
    }

    pub fn of_tree(t: &FiniteTree) -> LevelSpec {
        LevelSpec {
            levels: rank_sets(t).into_iter().map(LevelRanks::finite).collect(),
        }
    }

    /// Finite rank sets per level, or an error if a level is infinite or uses
    /// a rank `≥ ω`.
    pub fn finite_levels(&self) -> Result<Vec<BTreeSet<u64>>> {
        self.levels
            .iter()
            .enumerate()
            .map(|(n, l)| {
                if !l.is_finite_set() || l.points.iter().any(|p| p.a > 0) || l.infinite {
                    Err(Error::OrdinalRange(format!(
                        "level {n} is not a finite set of finite ranks"
                    )))
                } else {
                    Ok(l.points.iter().map(|p| p.b).collect())
                }
            })
            .collect()
    }
}

/// Every level `n ≥ 1` has order type at most `ω·n`. Level 0 holds only the
/// root and is not constrained.
pub fn is_thin(spec: &LevelSpec) -> bool {
    spec.levels
        .iter()
        .enumerate()
        .skip(1)
        .all(|(n, l)| l.order_type() <= SmallOrdinal::omega_times(n as u64))
}

/// Every node at level `n < depth` has at least `k` children of each rank
/// `α < rk(σ)` that occurs at level `n + 1`.
pub fn is_rank_homogeneous_k(t: &FiniteTree, k: usize, depth: usize) -> bool {
    let ranks = t.ranks();
    let sets = rank_sets(t);
    for (n, r) in &ranks {
        if n.len() >= depth || n.len() + 1 >= sets.len() {
            continue;
        }
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for c in t.children(n) {
            *counts.entry(ranks[c]).or_default() += 1;
        }
        for &alpha in sets[n.len() + 1].range(..*r) {
            if counts.get(&alpha).copied().unwrap_or(0) < k {
                return false;
            }
        }
    }
    true
}

/// Checks that a finite spec describes the rank sets of some tree built with
/// [`generate_rank_homogeneous`], and returns its levels.
fn realizable_levels(spec: &LevelSpec, k: usize, depth: usize) -> Result<Vec<BTreeSet<u64>>> {
    let levels = spec.finite_levels()?;
    if k == 0 {
        return Err(Error::Unrealizable(
            "multiplicity k must be at least 1".into(),
        ));
    }
    match levels.first() {
        Some(l0) if l0.len() == 1 => {}
        _ => {
            return Err(Error::Unrealizable(
                "level 0 must hold exactly one rank".into(),
            ))
        }
    }
    if levels.len() > depth + 1 {
        return Err(Error::Unrealizable(format!(
            "spec has {} levels, depth is {depth}",
            levels.len()
        )));
    }
    for n in 0..levels.len() {
        if levels[n].is_empty() {
            return Err(Error::Unrealizable(format!("level {n} is empty")));
        }
        let below = levels.get(n + 1).cloned().unwrap_or_default();
        for &alpha in &levels[n] {
            if alpha > 0 && !below.contains(&(alpha - 1)) {
                return Err(Error::Unrealizable(format!(
                    "rank {alpha} at level {n} needs rank {} at level {}",
                    alpha - 1,
                    n + 1
                )));
            }
        }
        let top = *levels[n].iter().next_back().expect("nonempty");
        if let Some(&beta) = below.iter().next_back() {
            if beta >= top {
                return Err(Error::Unrealizable(format!(
                    "rank {beta} at level {} has no parent of larger rank at level {n}",
                    n + 1
                )));
            }
        }
    }
    Ok(levels)
}

/// Builds the tree in which a node of rank `α` at level `n` has exactly `k`
/// children of each rank `β < α` listed at level `n + 1`, children ordered by
/// rank.
pub fn generate_rank_homogeneous(spec: &LevelSpec, k: usize, depth: usize) -> Result<FiniteTree> {
    generate_rank_homogeneous_within(spec, k, depth, &Budget::default())
}

pub fn generate_rank_homogeneous_within(
    spec: &LevelSpec,
    k: usize,
    depth: usize,
    budget: &Budget,
) -> Result<FiniteTree> {
    let levels = realizable_levels(spec, k, depth)?;
    let root_rank = *levels[0].iter().next().expect("one root rank");
    let mut nodes = BTreeSet::new();
    let mut frontier: Vec<(Node, u64)> = vec![(vec![], root_rank)];
    while let Some((n, alpha)) = frontier.pop() {
        let below = levels.get(n.len() + 1);
        let mut i = 0u32;
        for &beta in below.into_iter().flatten().filter(|&&b| b < alpha) {
            for _ in 0..k {
                let mut c = n.clone();
                c.push(i);
                i += 1;
                frontier.push((c, beta));
            }
        }
        nodes.insert(n);
        check_budget(
            "tree nodes",
            nodes.len() as u128,
            budget.tree_max_nodes as u128,
        )?;
    }
    Ok(FiniteTree { nodes })
}

/// Rooted trees with exactly `n` nodes, one per isomorphism class, children
/// of every node in canonical order.
pub fn rooted_trees(n: usize) -> Vec<FiniteTree> {
    if n == 0 {
        return vec![FiniteTree::default()];
    }
    let mut level: BTreeMap<String, FiniteTree> = BTreeMap::new();
    level.insert(
        FiniteTree::root_only().canonical_form(),
        FiniteTree::root_only(),
    );
    for _ in 1..n {
        let mut next = BTreeMap::new();
        for t in level.values() {
            for at in &t.nodes {
                let mut u = t.clone();
                let fresh = t.children(at).last().map_or(0, |c| c[at.len()] + 1);
                let mut leaf = at.clone();
                leaf.push(fresh);
                u.nodes.insert(leaf);
                next.entry(u.canonical_form())
                    .or_insert_with(|| u.canonical());
            }
        }
        level = next;
    }
    level.into_values().collect()
}

/// Rooted trees with between 1 and `max` nodes, by size.
pub fn rooted_trees_up_to(max: usize) -> Vec<FiniteTree> {
    (1..=max).flat_map(rooted_trees).collect()
}

/// All ordered trees with exactly `n` nodes, children numbered `0..`.
pub fn plane_trees(n: usize) -> Vec<FiniteTree> {
    fn forests(n: usize) -> Vec<Vec<FiniteTree>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 1..=n {
            for t in plane_trees(first) {
                for mut rest in forests(n - first) {
                    rest.insert(0, t.clone());
                    out.push(rest);
                }
            }
        }
        out
    }
    if n == 0 {
        return vec![FiniteTree::default()];
    }
    forests(n - 1)
        .into_iter()
        .map(|f| {
            let mut t = FiniteTree::root_only();
            for sub in &f {
                t.graft(sub);
            }
            t
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(tree_rank(&FiniteTree::root_only(), &[]).unwrap(), 0);
        assert_eq!(tree_rank(&FiniteTree::chain(3), &[]).unwrap(), 2);
        let mut t = FiniteTree::root_only();
        t.graft(&FiniteTree::root_only());
        t.graft(&FiniteTree::chain(3));
        let kids: Vec<u64> = t
            .children(&[])
            .iter()
            .map(|c| tree_rank(&t, c).unwrap())
            .collect();
        assert_eq!(kids, vec![0, 2]);
        assert_eq!(tree_rank(&t, &[]).unwrap(), 3);
        assert_eq!(tree_rank(&t, &[5]), Err(Error::NodeAbsent(vec![5])));
    }

    #[test]
    fn prefix_closure_enforced() {
        assert!(FiniteTree::new([vec![], vec![0, 1]]).is_err());
        assert!(FiniteTree::new([vec![], vec![0], vec![0, 1]]).is_ok());
    }

    #[test]
    fn spectra() {
        assert_eq!(rank_spectrum(&FiniteTree::root_only(), 0), vec![0]);
        let mut full = FiniteTree::root_only();
        for p in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            full.insert_path(&p);
        }
        assert_eq!(rank_spectrum(&full, 1), vec![1, 1]);
        assert_eq!(rank_spectrum(&full, 2), vec![0, 0, 0, 0]);
    }

    #[test]
    fn thinness() {
        let t = generate_rank_homogeneous(&LevelSpec::finite([vec![2], vec![0, 1], vec![0]]), 2, 3)
            .unwrap();
        assert!(is_thin(&LevelSpec::of_tree(&t)));

        let mut one = LevelRanks::finite([0, 1]);
        one.columns.insert(0);
        assert_eq!(one.order_type(), SmallOrdinal::omega_times(1));

        let two = LevelRanks {
            blocks: [0, 1].into(),
            ..Default::default()
        };
        assert_eq!(two.order_type(), SmallOrdinal::omega_times(2));
        let spec = LevelSpec {
            levels: vec![
                LevelRanks::finite([3]),
                LevelRanks::finite([0, 1, 2]),
                two.clone(),
            ],
        };
        assert!(is_thin(&spec));
        let spec = LevelSpec {
            levels: vec![LevelRanks::finite([3]), two],
        };
        assert!(!is_thin(&spec));

        let mut tail = LevelRanks {
            blocks: [0].into(),
            ..Default::default()
        };
        tail.points.insert(SmallOrdinal { a: 3, b: 1 });
        tail.points.insert(SmallOrdinal { a: 0, b: 5 });
        assert_eq!(tail.order_type(), SmallOrdinal { a: 1, b: 1 });
    }

    #[test]
    fn homogeneity_examples() {
        assert!(is_rank_homogeneous_k(&FiniteTree::root_only(), 5, 3));
        let mut star = FiniteTree::root_only();
        for _ in 0..3 {
            star.graft(&FiniteTree::root_only());
        }
        assert!(is_rank_homogeneous_k(&star, 3, 1));
        let mut t = FiniteTree::root_only();
        t.graft(&FiniteTree::root_only());
        t.graft(&FiniteTree::chain(2));
        assert!(!is_rank_homogeneous_k(&t, 2, 2));
    }

    #[test]
    fn generator_examples() {
        let t = generate_rank_homogeneous(&LevelSpec::finite([vec![1], vec![0]]), 3, 1).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(rank_spectrum(&t, 1), vec![0, 0, 0]);

        let spec = LevelSpec::finite([vec![2], vec![0, 1], vec![0]]);
        let t = generate_rank_homogeneous(&spec, 2, 2).unwrap();
        assert_eq!(rank_spectrum(&t, 1), vec![0, 0, 1, 1]);
        for c in t.children(&[]) {
            if tree_rank(&t, c).unwrap() == 1 {
                assert_eq!(t.children(c).len(), 2);
            }
        }
        assert!(is_rank_homogeneous_k(&t, 2, 2));
        assert_eq!(LevelSpec::of_tree(&t), spec);
        assert_eq!(t, generate_rank_homogeneous(&spec, 2, 2).unwrap());
    }

    #[test]
    fn unrealizable_specs() {
        for spec in [
            LevelSpec::finite([vec![2], vec![0]]),
            LevelSpec::finite([vec![0, 1]]),
            LevelSpec::finite([vec![1], vec![0, 1]]),
            LevelSpec::finite([vec![1], vec![0], vec![0]]),
        ] {
            assert!(
                matches!(
                    generate_rank_homogeneous(&spec, 2, 5),
                    Err(Error::Unrealizable(_))
                ),
                "{spec:?}"
            );
        }
        assert!(
            generate_rank_homogeneous(&LevelSpec::finite([vec![2], vec![1], vec![0]]), 1, 1)
                .is_err()
        );
    }

    #[test]
    fn enumeration_counts() {
        let rooted: Vec<usize> = (1..=7).map(|n| rooted_trees(n).len()).collect();
        assert_eq!(rooted, vec![1, 1, 2, 4, 9, 20, 48]);
        let plane: Vec<usize> = (1..=6).map(|n| plane_trees(n).len()).collect();
        assert_eq!(plane, vec![1, 1, 2, 5, 14, 42]);
    }

    #[test]
    fn structure_round_trip() {
        for t in plane_trees(5) {
            let s = t.to_structure();
            let back = FiniteTree::from_structure(&s).unwrap();
            assert_eq!(back.canonical_form(), t.canonical_form());
        }
    }

    #[test]
    fn json_round_trip() {
        let t = FiniteTree::chain(3);
        assert_eq!(t.to_json(), "[[],[0],[0,0]]");
        assert_eq!(FiniteTree::from_json(&t.to_json()).unwrap(), t);
        assert!(FiniteTree::from_json("[[1]]").is_err());
    }
}
