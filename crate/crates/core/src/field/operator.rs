//! The field embedding as a fragment operator.
//!
//! A graph fragment is sent to a finite piece of the diagram of its field:
//! the generators `b_v`, the sums `b_v + b_w`, and for each edge the radical
//! with its defining product facts. Element ids are allocated by pairing:
//! `b_v = ⟨0, v⟩`, `b_v + b_w = ⟨1, ⟨v, w⟩⟩`, `s_vw = ⟨2, ⟨v, w⟩⟩` and, in
//! characteristic 2, `s_vw² = ⟨3, ⟨v, w⟩⟩` (always `v < w`).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::scalar::check_characteristic;
use crate::operator::{pair, unpair, DiagramOperator};
use crate::structure::{AtomicDiagram, ElementId, Signature, Symbol, EQUALITY};

pub const ADD: &str = "Add";
pub const MUL: &str = "Mul";

/// `{Add/3, Mul/3}`: `Add(x, y, z)` means `x + y = z`.
pub fn field_fragment_signature() -> Signature {
    Signature::new(vec![Symbol::relation(ADD, 3), Symbol::relation(MUL, 3)])
        .expect("static signature")
}

pub fn generator_id(v: ElementId) -> ElementId {
    pair(0, v)
}

/// Inverse of [`generator_id`].
pub fn generator_vertex(x: ElementId) -> Option<ElementId> {
    match unpair(x) {
        (0, v) => Some(v),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GraphFieldOperator {
    characteristic: u64,
}

pub fn graph_field_operator(characteristic: u64) -> Result<GraphFieldOperator> {
    check_characteristic(characteristic)?;
    Ok(GraphFieldOperator { characteristic })
}

impl GraphFieldOperator {
    fn sum(&self, d: &mut AtomicDiagram, v: ElementId, w: ElementId) -> Result<ElementId> {
        let (v, w) = (v.min(w), v.max(w));
        let (bv, bw, s) = (generator_id(v), generator_id(w), pair(1, pair(v, w)));
        for x in [bv, bw, s] {
            d.insert_element(x)?;
        }
        d.insert(ADD, vec![bv, bw, s], true)?;
        d.insert(ADD, vec![bw, bv, s], true)?;
        Ok(s)
    }
}

impl DiagramOperator for GraphFieldOperator {
    fn target_signature(&self) -> Signature {
        field_fragment_signature()
    }

    fn apply(&self, fragment: &AtomicDiagram) -> Result<AtomicDiagram> {
        fragment.check_consistent()?;
        let mut out = AtomicDiagram::new();
        let mut vertices = BTreeSet::new();
        for (sym, t, positive) in fragment.iter() {
            match (sym, positive) {
                (EQUALITY, true) if t[0] == t[1] => {
                    vertices.insert(t[0]);
                }
                (EQUALITY, _) | (_, false) => {}
                ("E", true) if t.len() == 2 && t[0] != t[1] => {
                    let (v, w) = (t[0].min(t[1]), t[0].max(t[1]));
                    vertices.insert(v);
                    vertices.insert(w);
                    let d = self.sum(&mut out, v, w)?;
                    let s = pair(2, pair(v, w));
                    out.insert_element(s)?;
                    if self.characteristic == 2 {
                        let s2 = pair(3, pair(v, w));
                        out.insert_element(s2)?;
                        out.insert(MUL, vec![s, s, s2], true)?;
                        out.insert(MUL, vec![s2, s, d], true)?;
                        out.insert(MUL, vec![s, s2, d], true)?;
                    } else {
                        out.insert(MUL, vec![s, s, d], true)?;
                    }
                }
                (other, _) => {
                    return Err(Error::Inconsistent(format!("unexpected fact {other}{t:?}")))
                }
            }
        }
        let vs: Vec<ElementId> = vertices.into_iter().collect();
        for (k, &v) in vs.iter().enumerate() {
            out.insert_element(generator_id(v))?;
            for &w in &vs[k + 1..] {
                self.sum(&mut out, v, w)?;
            }
        }
        Ok(out)
    }
}
