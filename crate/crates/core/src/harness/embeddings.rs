//! The three shipped embeddings behind the sweep interface, each with
//! optional seeded faults.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::embed_graph::{decode_graph, encode_tree, node_gadget, successor_gadget, GadgetId};
use crate::error::{Error, Result};
use crate::field::operator::{generator_id, graph_field_operator};
use crate::field::{build_field, decode_field, FieldPresentation};
use crate::harness::EmbeddingUnderTest;
use crate::iso::{isomorphic_within, orbits_within};
use crate::operator::apply_operator;
use crate::order::element::block_size;
use crate::order::{
    decode_fragment_within, element_orbit_labels, f_map, first_in_class, fragments_isomorphic,
    g_decode, OrderElement,
};
use crate::structure::{tuples, ElementId, FiniteStructure, Signature};
use crate::trees::FiniteTree;

fn fault_name<T: Serialize>(fault: T) -> String {
    serde_json::to_value(fault)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn image_labels(
    image: &FiniteStructure,
    tuples: &[Vec<ElementId>],
    k: usize,
    budget: &Budget,
) -> Result<Vec<u32>> {
    let orbits = orbits_within(image, k, budget)?;
    tuples
        .iter()
        .map(|t| {
            orbits
                .label(t)
                .ok_or_else(|| Error::InvalidImage(format!("{t:?} is not in the image")))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeGraphFault {
    #[default]
    None,
    /// The root gets no self-successor gadget.
    DropRootLoop,
    /// Every successor gadget hangs off the root.
    AttachToRoot,
    /// The 2-path goes to the child and the 3-path to the parent.
    SwapChains,
}

/// Trees (as `{S, root}` structures) into graphs.
#[derive(Clone, Debug, Default)]
pub struct TreeGraph {
    pub budget: Budget,
    pub fault: TreeGraphFault,
}

impl TreeGraph {
    pub fn with_fault(fault: TreeGraphFault) -> TreeGraph {
        TreeGraph {
            fault,
            ..TreeGraph::default()
        }
    }

    fn encode_tree(&self, t: &FiniteTree) -> FiniteStructure {
        if self.fault == TreeGraphFault::None {
            return encode_tree(t);
        }
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
        let root = ids.get(&Vec::new()).copied();
        for (n, &a) in &ids {
            add(node_gadget(a));
            let parent = n.split_last().map_or(a, |(_, p)| ids[p]);
            match self.fault {
                TreeGraphFault::DropRootLoop if n.is_empty() => {}
                TreeGraphFault::AttachToRoot => add(successor_gadget(root.unwrap_or(a), a)),
                TreeGraphFault::SwapChains => add(successor_gadget(a, parent)),
                _ => add(successor_gadget(parent, a)),
            }
        }
        g
    }
}

impl EmbeddingUnderTest for TreeGraph {
    type Image = FiniteStructure;

    fn name(&self) -> String {
        match self.fault {
            TreeGraphFault::None => "tree-graph".into(),
            f => format!("tree-graph[{}]", fault_name(f)),
        }
    }

    fn encode(&self, source: &FiniteStructure) -> Result<FiniteStructure> {
        Ok(self.encode_tree(&FiniteTree::from_structure(source)?))
    }

    fn decode(&self, image: &FiniteStructure) -> Result<FiniteStructure> {
        Ok(decode_graph(image)?.to_structure())
    }

    fn images_isomorphic(&self, a: &FiniteStructure, b: &FiniteStructure) -> Result<bool> {
        Ok(isomorphic_within(a, b, &self.budget)?.is_some())
    }

    fn image_orbit_labels(
        &self,
        source: &FiniteStructure,
        image: &FiniteStructure,
        k: usize,
    ) -> Result<Vec<u32>> {
        let elems: Vec<ElementId> = source.universe().iter().copied().collect();
        let ts: Vec<Vec<ElementId>> = tuples(&elems, k)
            .into_iter()
            .map(|t| {
                t.into_iter()
                    .map(|a| GadgetId::node_rep(a).vertex())
                    .collect()
            })
            .collect();
        image_labels(image, &ts, k, &self.budget)
    }

    fn budget(&self) -> &Budget {
        &self.budget
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFieldFault {
    #[default]
    None,
    /// Radicals go on the non-edges instead of the edges.
    ComplementRadicals,
    /// One extra radical on the first non-edge.
    ExtraRadical,
}

/// Graphs into fields.
#[derive(Clone, Debug)]
pub struct GraphField {
    pub budget: Budget,
    pub characteristic: u64,
    pub fault: GraphFieldFault,
}

impl Default for GraphField {
    fn default() -> Self {
        GraphField {
            budget: Budget::default(),
            characteristic: 0,
            fault: GraphFieldFault::None,
        }
    }
}

/// The presentation and the finite piece of the field diagram produced by
/// the fragment operator.
#[derive(Clone, Debug)]
pub struct FieldImage {
    pub field: FieldPresentation,
    pub fragment: FiniteStructure,
}

impl GraphField {
    pub fn new(characteristic: u64) -> GraphField {
        GraphField {
            characteristic,
            ..GraphField::default()
        }
    }

    pub fn with_fault(fault: GraphFieldFault) -> GraphField {
        GraphField {
            fault,
            ..GraphField::default()
        }
    }

    fn radical_graph(&self, g: &FiniteStructure) -> Result<FiniteStructure> {
        let vs: Vec<ElementId> = g.universe().iter().copied().collect();
        let non_edges = || {
            vs.iter()
                .enumerate()
                .flat_map(|(i, &a)| vs[i + 1..].iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| !g.has_edge(a, b))
        };
        Ok(match self.fault {
            GraphFieldFault::None => g.clone(),
            GraphFieldFault::ComplementRadicals => {
                FiniteStructure::graph(vs.iter().copied(), non_edges())?
            }
            GraphFieldFault::ExtraRadical => {
                let mut h = g.clone();
                if let Some((a, b)) = non_edges().next() {
                    h.add_edge(a, b)?;
                }
                h
            }
        })
    }
}

impl EmbeddingUnderTest for GraphField {
    type Image = FieldImage;

    fn name(&self) -> String {
        let base = format!("graph-field/char{}", self.characteristic);
        match self.fault {
            GraphFieldFault::None => base,
            f => format!("{base}[{}]", fault_name(f)),
        }
    }

    fn encode(&self, source: &FiniteStructure) -> Result<FieldImage> {
        let h = self.radical_graph(source)?;
        Ok(FieldImage {
            field: build_field(&h, self.characteristic)?,
            fragment: apply_operator(&graph_field_operator(self.characteristic)?, &h)?,
        })
    }

    fn decode(&self, image: &FieldImage) -> Result<FiniteStructure> {
        decode_field(&image.field)
    }

    fn images_isomorphic(&self, a: &FieldImage, b: &FieldImage) -> Result<bool> {
        Ok(isomorphic_within(&a.fragment, &b.fragment, &self.budget)?.is_some())
    }

    fn image_orbit_labels(
        &self,
        source: &FiniteStructure,
        image: &FieldImage,
        k: usize,
    ) -> Result<Vec<u32>> {
        let elems: Vec<ElementId> = source.universe().iter().copied().collect();
        let ts: Vec<Vec<ElementId>> = tuples(&elems, k)
            .into_iter()
            .map(|t| t.into_iter().map(generator_id).collect())
            .collect();
        image_labels(&image.fragment, &ts, k, &self.budget)
    }

    fn budget(&self) -> &Budget {
        &self.budget
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphOrderFault {
    #[default]
    None,
    /// The tuple map puts the inner separators in class 1 and the last in 0.
    SwapSeparatorClasses,
    /// The tuple map ends in 1 instead of 0.
    TailOne,
}

/// Graphs into linear orders, compared through bounded fragments.
#[derive(Clone, Debug)]
pub struct GraphOrder {
    pub budget: Budget,
    /// Longest vertex tuple coded in fragments.
    pub max_len: usize,
    /// Height cap on the rationals of enumerated fragments.
    pub height: u64,
    pub fault: GraphOrderFault,
}

impl Default for GraphOrder {
    fn default() -> Self {
        GraphOrder {
            budget: Budget::default(),
            max_len: 2,
            height: 2,
            fault: GraphOrderFault::None,
        }
    }
}

/// The order of a graph is fixed by the graph; the image carries the graph as
/// its membership oracle and the coding elements with their blocks.
#[derive(Clone, Debug)]
pub struct OrderImage {
    pub graph: FiniteStructure,
    pub coding: Vec<OrderElement>,
}

impl GraphOrder {
    pub fn with_fault(fault: GraphOrderFault) -> GraphOrder {
        GraphOrder {
            fault,
            ..GraphOrder::default()
        }
    }

    /// The tuple map, faults included.
    pub fn tuple_map(&self, g: &FiniteStructure, tuple: &[ElementId]) -> Result<OrderElement> {
        let mut x = f_map(g, tuple)?;
        match self.fault {
            GraphOrderFault::None => {}
            GraphOrderFault::SwapSeparatorClasses => {
                let n = tuple.len();
                for i in 0..n {
                    x.body[2 * i + 1] = first_in_class(if i + 1 == n { 0 } else { 1 });
                }
            }
            GraphOrderFault::TailOne => x.tail = 1,
        }
        Ok(x)
    }
}

impl EmbeddingUnderTest for GraphOrder {
    type Image = OrderImage;

    fn name(&self) -> String {
        match self.fault {
            GraphOrderFault::None => "graph-order".into(),
            f => format!("graph-order[{}]", fault_name(f)),
        }
    }

    fn encode(&self, source: &FiniteStructure) -> Result<OrderImage> {
        let vs: Vec<ElementId> = source.universe().iter().copied().collect();
        let mut coding = Vec::new();
        for n in 1..=self.max_len {
            for t in tuples(&vs, n) {
                let x = self.tuple_map(source, &t)?;
                for k in 0..block_size(source, &t)? {
                    coding.push(OrderElement::new(x.body.clone(), k));
                }
            }
        }
        coding.sort();
        Ok(OrderImage {
            graph: source.clone(),
            coding,
        })
    }

    fn decode(&self, image: &OrderImage) -> Result<FiniteStructure> {
        decode_fragment_within(&image.coding, &self.budget)
    }

    fn images_isomorphic(&self, a: &OrderImage, b: &OrderImage) -> Result<bool> {
        fragments_isomorphic(&a.graph, &b.graph, self.max_len, self.height, &self.budget)
    }

    fn image_orbit_labels(
        &self,
        source: &FiniteStructure,
        image: &OrderImage,
        k: usize,
    ) -> Result<Vec<u32>> {
        let vs: Vec<ElementId> = source.universe().iter().copied().collect();
        let xs = tuples(&vs, k)
            .iter()
            .map(|t| self.tuple_map(source, t))
            .collect::<Result<Vec<_>>>()?;
        element_orbit_labels(
            &image.graph,
            &xs,
            self.max_len.max(k),
            self.height,
            &self.budget,
        )
    }

    fn tuple_round_trip(
        &self,
        source: &FiniteStructure,
        image: &OrderImage,
        tuple: &[ElementId],
    ) -> Result<bool> {
        Ok(g_decode(&image.graph, &self.tuple_map(source, tuple)?)? == tuple)
    }

    fn budget(&self) -> &Budget {
        &self.budget
    }
}
