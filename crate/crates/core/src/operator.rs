//! Finite enumeration operators on atomic diagrams.
//!
//! An embedding is presented as a map from finite diagram fragments to finite
//! diagram fragments over a fresh id space. It must be monotone and never
//! emit both polarities of a fact; [`apply_operator`] runs it on the complete
//! diagram of a structure and reads the image structure off the result.

use crate::error::{Error, Result};
use crate::structure::{AtomicDiagram, FiniteStructure, Signature};

pub trait DiagramOperator {
    /// Signature of the image structures.
    fn target_signature(&self) -> Signature;

    /// Image of a finite fragment. Must be monotone in `fragment`.
    fn apply(&self, fragment: &AtomicDiagram) -> Result<AtomicDiagram>;
}

/// Runs `op` on the complete diagram of `source` and builds the image from
/// the positive facts of the output.
pub fn apply_operator<O: DiagramOperator + ?Sized>(
    op: &O,
    source: &FiniteStructure,
) -> Result<FiniteStructure> {
    let out = op.apply(&source.diagram())?;
    FiniteStructure::from_positive_diagram(op.target_signature(), &out)
        .map_err(|e| Error::Inconsistent(format!("operator output: {e}")))
}

/// Cantor pairing, the fixed injection ℕ² → ℕ used to allocate image ids.
pub fn pair(a: u64, b: u64) -> u64 {
    let s = a.checked_add(b).expect("pairing overflow");
    s.checked_mul(s + 1).expect("pairing overflow") / 2 + b
}

/// Inverse of [`pair`].
pub fn unpair(z: u64) -> (u64, u64) {
    // w = floor((sqrt(8z + 1) - 1) / 2), corrected for float error
    let mut w = ((((8.0 * z as f64) + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    let b = z - w * (w + 1) / 2;
    (w - b, b)
}

/// Pairs a whole sequence, right-nested, with the length folded in so that
/// sequences of different lengths never collide.
pub fn pair_seq(items: &[u64]) -> u64 {
    let body = items.iter().rev().fold(0u64, |acc, &x| pair(x, acc));
    pair(items.len() as u64, body)
}
