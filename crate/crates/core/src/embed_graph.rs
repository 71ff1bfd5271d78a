//! Trees into undirected graphs.
//!
//! A tree node `a` becomes a vertex `r(a)` with a pendant triangle. A
//! successor pair `(a, a')` becomes a vertex `q(a, a')` with a pendant square,
//! joined to `r(a)` by a path with 2 edges and to `r(a')` by a path with 3
//! edges. The root also counts as a successor of itself. Every gadget vertex
//! is private to its gadget.
//!
//! The decoder recognizes node representatives as vertices outside every
//! triangle that touch one, and successor pairs through square-marked
//! vertices with a 2-path and a 3-path of degree-2 vertices.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::iso::isomorphic_within;
use crate::operator::{pair, unpair, DiagramOperator};
use crate::structure::{AtomicDiagram, ElementId, FiniteStructure, Signature, EQUALITY};
use crate::trees::{FiniteTree, Node, ROOT, SUCCESSOR};

/// Slots per id block; `16 * pair(a, a') + slot` is the vertex id.
const BLOCK: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GadgetKind {
    NodeRep,
    NodeTriangle,
    SuccRep,
    SuccSquare,
    Chain2,
    Chain3,
}

impl GadgetKind {
    fn colour(self) -> &'static str {
        match self {
            GadgetKind::NodeRep => "gold",
            GadgetKind::NodeTriangle => "lightblue",
            GadgetKind::SuccRep => "salmon",
            GadgetKind::SuccSquare => "palegreen",
            GadgetKind::Chain2 | GadgetKind::Chain3 => "lightgrey",
        }
    }
}

/// Where a graph vertex comes from. Node gadgets have `source = (a, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GadgetId {
    pub kind: GadgetKind,
    pub source: (ElementId, ElementId),
    pub index: u8,
}

impl GadgetId {
    pub fn node_rep(a: ElementId) -> GadgetId {
        GadgetId {
            kind: GadgetKind::NodeRep,
            source: (a, a),
            index: 0,
        }
    }

    pub fn succ_rep(a: ElementId, b: ElementId) -> GadgetId {
        GadgetId {
            kind: GadgetKind::SuccRep,
            source: (a, b),
            index: 0,
        }
    }

    fn slot(&self) -> u64 {
        let i = self.index as u64;
        match self.kind {
            GadgetKind::NodeRep => 0,
            GadgetKind::NodeTriangle => 1 + i,
            GadgetKind::SuccRep => 4,
            GadgetKind::SuccSquare => 5 + i,
            GadgetKind::Chain2 => 9,
            GadgetKind::Chain3 => 10 + i,
        }
    }

    pub fn vertex(&self) -> ElementId {
        BLOCK * pair(self.source.0, self.source.1) + self.slot()
    }

    /// Inverse of [`vertex`](Self::vertex) on the ids it produces.
    pub fn from_vertex(v: ElementId) -> Option<GadgetId> {
        let source = unpair(v / BLOCK);
        let (kind, index) = match v % BLOCK {
            0 => (GadgetKind::NodeRep, 0),
            s @ 1..=3 => (GadgetKind::NodeTriangle, s - 1),
            4 => (GadgetKind::SuccRep, 0),
            s @ 5..=8 => (GadgetKind::SuccSquare, s - 5),
            9 => (GadgetKind::Chain2, 0),
            s @ 10..=11 => (GadgetKind::Chain3, s - 10),
            _ => return None,
        };
        if matches!(kind, GadgetKind::NodeRep | GadgetKind::NodeTriangle) && source.0 != source.1 {
            return None;
        }
        Some(GadgetId {
            kind,
            source,
            index: index as u8,
        })
    }
}

pub(crate) fn node_gadget(a: ElementId) -> Vec<(GadgetId, GadgetId)> {
    let r = GadgetId::node_rep(a);
    let t = |i| GadgetId {
        kind: GadgetKind::NodeTriangle,
        source: (a, a),
        index: i,
    };
    vec![(r, t(0)), (t(0), t(1)), (t(1), t(2)), (t(2), t(0))]
}

pub(crate) fn successor_gadget(a: ElementId, b: ElementId) -> Vec<(GadgetId, GadgetId)> {
    let g = |kind, index| GadgetId {
        kind,
        source: (a, b),
        index,
    };
    let q = g(GadgetKind::SuccRep, 0);
    let s = |i| g(GadgetKind::SuccSquare, i);
    let m = g(GadgetKind::Chain2, 0);
    let (n1, n2) = (g(GadgetKind::Chain3, 0), g(GadgetKind::Chain3, 1));
    vec![
        (q, s(0)),
        (s(0), s(1)),
        (s(1), s(2)),
        (s(2), s(3)),
        (s(3), s(0)),
        (GadgetId::node_rep(a), m),
        (m, q),
        (GadgetId::node_rep(b), n1),
        (n1, n2),
        (n2, q),
    ]
}

fn emit(d: &mut AtomicDiagram, edges: &[(GadgetId, GadgetId)]) -> Result<()> {
    for (x, y) in edges {
        let (x, y) = (x.vertex(), y.vertex());
        d.insert_element(x)?;
        d.insert_element(y)?;
        d.insert("E", vec![x, y], true)?;
        d.insert("E", vec![y, x], true)?;
    }
    Ok(())
}

/// The fragment-wise form of the embedding over the tree signature
/// `{S/2, root/1}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct TreeGraphOperator;

pub fn tree_graph_operator() -> TreeGraphOperator {
    TreeGraphOperator
}

impl DiagramOperator for TreeGraphOperator {
    fn target_signature(&self) -> Signature {
        Signature::graph()
    }

    fn apply(&self, fragment: &AtomicDiagram) -> Result<AtomicDiagram> {
        fragment.check_consistent()?;
        let mut out = AtomicDiagram::new();
        for (sym, t, positive) in fragment.iter() {
            if !positive {
                continue;
            }
            match sym {
                EQUALITY if t[0] == t[1] => emit(&mut out, &node_gadget(t[0]))?,
                ROOT if t.len() == 1 => emit(&mut out, &successor_gadget(t[0], t[0]))?,
                SUCCESSOR if t.len() == 2 => emit(&mut out, &successor_gadget(t[0], t[1]))?,
                EQUALITY => {}
                other => return Err(Error::Inconsistent(format!("unexpected fact {other}{t:?}"))),
            }
        }
        Ok(out)
    }
}

/// The image graph; tree nodes are numbered as in [`FiniteTree::node_ids`].
pub fn encode_tree(t: &FiniteTree) -> FiniteStructure {
    let ids = t.node_ids();
    let mut g = FiniteStructure::new(Signature::graph(), []);
    let mut add = |edges: Vec<(GadgetId, GadgetId)>| {
        for (x, y) in edges {
            g.add_element(x.vertex());
            g.add_element(y.vertex());
            g.add_edge(x.vertex(), y.vertex())
                .expect("gadget edges join distinct vertices");
        }
    };
    for (n, &a) in &ids {
        add(node_gadget(a));
        let parent = n.split_last().map_or(a, |(_, p)| ids[p]);
        add(successor_gadget(parent, a));
    }
    g
}

/// `r(a)` for every tree node, keyed by node.
pub fn node_vertices(t: &FiniteTree) -> BTreeMap<Node, ElementId> {
    t.node_ids()
        .into_iter()
        .map(|(n, a)| (n, GadgetId::node_rep(a).vertex()))
        .collect()
}

/// Vertex colouring for DOT output by gadget kind.
pub fn gadget_colour(v: ElementId) -> Option<&'static str> {
    GadgetId::from_vertex(v).map(|g| g.kind.colour())
}

/// Result of decoding: the tree and the representative vertex of each node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub tree: FiniteTree,
    pub reps: BTreeMap<Node, ElementId>,
}

/// Decodes with the isomorphism cap raised to the size of `g`.
pub fn decode_graph(g: &FiniteStructure) -> Result<FiniteTree> {
    Ok(decode_graph_with_reps(g)?.tree)
}

pub fn decode_graph_within(g: &FiniteStructure, budget: &Budget) -> Result<FiniteTree> {
    Ok(decode_graph_with_reps_within(g, budget)?.tree)
}

pub fn decode_graph_with_reps(g: &FiniteStructure) -> Result<Decoded> {
    let base = Budget::default();
    let budget = Budget {
        iso_max_universe: base.iso_max_universe.max(g.len()),
        ..base
    };
    decode_graph_with_reps_within(g, &budget)
}

/// Decodes and then checks that re-encoding gives a graph isomorphic to `g`.
pub fn decode_graph_with_reps_within(g: &FiniteStructure, budget: &Budget) -> Result<Decoded> {
    Signature::graph().ensure_same(g.signature())?;
    if !g.is_undirected_graph() {
        return Err(Error::InvalidImage("not an undirected graph".into()));
    }
    if g.is_empty() {
        return Ok(Decoded {
            tree: FiniteTree::default(),
            reps: BTreeMap::new(),
        });
    }
    let nb: BTreeMap<ElementId, BTreeSet<ElementId>> = g
        .universe()
        .iter()
        .map(|&x| (x, g.neighbours(x).into_iter().collect()))
        .collect();
    let deg = |x: ElementId| nb[&x].len();

    let in_triangle: BTreeSet<ElementId> = nb
        .iter()
        .filter(|(x, ns)| {
            ns.iter()
                .any(|y| nb[y].iter().any(|z| z != *x && ns.contains(z)))
        })
        .map(|(&x, _)| x)
        .collect();
    // x lies on a chordless 4-cycle x-y-z-w
    let in_square: BTreeSet<ElementId> = nb
        .iter()
        .filter(|(&x, ns)| {
            ns.iter().any(|&y| {
                nb[&y].iter().any(|&z| {
                    z != x
                        && !ns.contains(&z)
                        && nb[&z]
                            .iter()
                            .any(|&w| w != y && ns.contains(&w) && !nb[&y].contains(&w))
                })
            })
        })
        .map(|(&x, _)| x)
        .collect();
    let u: BTreeSet<ElementId> = nb
        .iter()
        .filter(|(x, ns)| !in_triangle.contains(x) && ns.iter().any(|y| in_triangle.contains(y)))
        .map(|(&x, _)| x)
        .collect();
    let qs: Vec<ElementId> = nb
        .iter()
        .filter(|(x, ns)| {
            !in_square.contains(x)
                && !in_triangle.contains(x)
                && ns.iter().any(|y| in_square.contains(y))
        })
        .map(|(&x, _)| x)
        .collect();

    let mut succ: BTreeSet<(ElementId, ElementId)> = BTreeSet::new();
    for &q in &qs {
        let mut from = Vec::new();
        let mut to = Vec::new();
        for &m in &nb[&q] {
            if in_square.contains(&m) || deg(m) != 2 {
                continue;
            }
            let next = *nb[&m].iter().find(|&&y| y != q).expect("degree 2");
            if u.contains(&next) {
                from.push(next);
            } else if deg(next) == 2 {
                let last = *nb[&next].iter().find(|&&y| y != m).expect("degree 2");
                if u.contains(&last) {
                    to.push(last);
                }
            }
        }
        match (&from[..], &to[..]) {
            ([x], [y]) => {
                succ.insert((*x, *y));
            }
            _ => {
                return Err(Error::InvalidImage(format!(
                    "vertex {q} does not mark a successor pair"
                )))
            }
        }
    }

    let roots: Vec<ElementId> = succ
        .iter()
        .filter(|(x, y)| x == y)
        .map(|&(x, _)| x)
        .collect();
    let [root] = roots[..] else {
        return Err(Error::InvalidImage(format!(
            "expected one self-successor, found {}",
            roots.len()
        )));
    };
    let mut kids: BTreeMap<ElementId, Vec<ElementId>> = BTreeMap::new();
    for &(x, y) in &succ {
        if x != y {
            kids.entry(x).or_default().push(y);
        }
    }
    let mut reps = BTreeMap::new();
    let mut stack = vec![(root, Vec::new())];
    while let Some((x, path)) = stack.pop() {
        if reps.values().any(|&v| v == x) || reps.len() > u.len() {
            return Err(Error::InvalidImage(
                "successor relation is not a tree".into(),
            ));
        }
        for (i, &c) in kids.get(&x).into_iter().flatten().enumerate() {
            let mut p: Node = path.clone();
            p.push(i as u32);
            stack.push((c, p));
        }
        reps.insert(path, x);
    }
    if reps.len() != u.len() {
        return Err(Error::InvalidImage(
            "node representatives unreachable from the root".into(),
        ));
    }
    let tree = FiniteTree::new(reps.keys().cloned())?;
    if isomorphic_within(&encode_tree(&tree), g, budget)?.is_none() {
        return Err(Error::InvalidImage(
            "graph has material outside the gadgets".into(),
        ));
    }
    Ok(Decoded { tree, reps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::apply_operator;
    use crate::trees::{plane_trees, rooted_trees_up_to};

    #[test]
    fn small_images() {
        assert!(encode_tree(&FiniteTree::default()).is_empty());
        let one = encode_tree(&FiniteTree::root_only());
        assert_eq!(one.len(), 12);
        assert_eq!(one.edges().len(), 14);
        assert_eq!(encode_tree(&FiniteTree::chain(2)).len(), 24);
    }

    #[test]
    fn gadget_ids_round_trip() {
        for t in rooted_trees_up_to(4) {
            for v in encode_tree(&t).universe() {
                let g = GadgetId::from_vertex(*v).unwrap();
                assert_eq!(g.vertex(), *v);
            }
        }
    }

    #[test]
    fn decode_round_trip() {
        for t in rooted_trees_up_to(5) {
            let back = decode_graph(&encode_tree(&t)).unwrap();
            assert_eq!(back.canonical_form(), t.canonical_form());
        }
    }

    #[test]
    fn decode_reps_are_node_vertices() {
        let t = FiniteTree::chain(3);
        let d = decode_graph_with_reps(&encode_tree(&t)).unwrap();
        assert_eq!(d.reps, node_vertices(&t));
    }

    #[test]
    fn rejects_non_images() {
        let tri = FiniteStructure::graph(0..3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(matches!(decode_graph(&tri), Err(Error::InvalidImage(_))));
        let mut g = encode_tree(&FiniteTree::chain(2));
        g.add_element(10_000);
        assert!(decode_graph(&g).is_err());
        let mut g = encode_tree(&FiniteTree::chain(2));
        let r = GadgetId::node_rep(0).vertex();
        let extra = GadgetId::node_rep(1).vertex();
        g.add_edge(r, extra).unwrap();
        assert!(decode_graph(&g).is_err());
    }

    #[test]
    fn operator_matches_encoder() {
        for t in plane_trees(4) {
            let via_op = apply_operator(&tree_graph_operator(), &t.to_structure()).unwrap();
            assert_eq!(via_op, encode_tree(&t));
        }
        assert!(tree_graph_operator()
            .apply(&AtomicDiagram::new())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn operator_is_monotone_on_fragments() {
        let d = FiniteTree::chain(3).to_structure().diagram();
        let facts: Vec<_> = d
            .iter()
            .map(|(s, t, p)| (s.to_string(), t.to_vec(), p))
            .collect();
        let mut small = AtomicDiagram::new();
        let mut prev = tree_graph_operator().apply(&small).unwrap();
        for (s, t, p) in facts {
            small.insert(&s, t, p).unwrap();
            let next = tree_graph_operator().apply(&small).unwrap();
            assert!(prev.is_subset_of(&next));
            prev = next;
        }
    }

    #[test]
    fn root_fragment_gives_twelve_vertices() {
        let mut d = AtomicDiagram::new();
        d.insert_element(0).unwrap();
        d.insert(ROOT, vec![0], true).unwrap();
        let g = FiniteStructure::from_positive_diagram(
            Signature::graph(),
            &tree_graph_operator().apply(&d).unwrap(),
        )
        .unwrap();
        assert_eq!(g.len(), 12);
    }
}
