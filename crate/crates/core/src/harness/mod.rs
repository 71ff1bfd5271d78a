//! Sweeps that check an embedding on exhaustive families of small inputs.
//!
//! Each property checks every instance (or pair of instances) in order and
//! keeps the first failure as the counterexample. Budget errors abort the
//! sweep; any other error while encoding or decoding counts as a failure.

pub mod embeddings;
pub mod mutants;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::iso::{isomorphic_within, orbits_within};
use crate::structure::{tuples, ElementId, FiniteStructure};

pub use embeddings::{GraphField, GraphOrder, TreeGraph};
pub use mutants::{all_mutants, run_fault_injection, run_mutant, Mutant, MutantOutcome};

/// An embedding as seen by the sweeps.
pub trait EmbeddingUnderTest {
    type Image;

    fn name(&self) -> String;

    fn encode(&self, source: &FiniteStructure) -> Result<Self::Image>;

    /// A structure isomorphic to the source, read back from the image.
    fn decode(&self, image: &Self::Image) -> Result<FiniteStructure>;

    fn images_isomorphic(&self, a: &Self::Image, b: &Self::Image) -> Result<bool>;

    /// For every k-tuple of the source, in [`tuples`] order, the label of the
    /// orbit of its image tuple.
    fn image_orbit_labels(
        &self,
        source: &FiniteStructure,
        image: &Self::Image,
        k: usize,
    ) -> Result<Vec<u32>>;

    /// Whether the tuple map followed by its decoder returns `tuple`.
    fn tuple_round_trip(
        &self,
        _source: &FiniteStructure,
        _image: &Self::Image,
        _tuple: &[ElementId],
    ) -> Result<bool> {
        Ok(true)
    }

    fn budget(&self) -> &Budget;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub property: String,
    pub embedding: String,
    pub instances: usize,
    pub checks: usize,
    pub failures: usize,
    pub passed: bool,
    /// The first failure in instance order.
    pub counterexample: Option<Value>,
}

impl SweepReport {
    fn new(property: &str, embedding: String, instances: usize) -> SweepReport {
        SweepReport {
            property: property.into(),
            embedding,
            instances,
            checks: 0,
            failures: 0,
            passed: true,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            self.passed = false;
            if self.counterexample.is_none() {
                self.counterexample = Some(witness());
            }
        }
    }

    /// Adds the counts of `other`, keeping the earlier counterexample.
    pub fn absorb(&mut self, other: SweepReport) {
        self.checks += other.checks;
        self.failures += other.failures;
        self.passed &= other.passed;
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn structure_json(s: &FiniteStructure) -> Value {
    serde_json::from_str(&s.to_json()).expect("structures serialize")
}

/// Splits results into budget errors, which abort, and the rest.
fn soft<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Err(e @ Error::Budget { .. }) => Err(e),
        Err(e) => Ok(Err(e.to_string())),
        Ok(v) => Ok(Ok(v)),
    }
}

/// `decode(encode(A)) ≅ A` for every instance, and the tuple decoder inverts
/// the tuple map on tuples of length at most `max_tuple`.
pub fn check_round_trip<E: EmbeddingUnderTest>(
    e: &E,
    instances: &[FiniteStructure],
    max_tuple: usize,
) -> Result<SweepReport> {
    let mut report = SweepReport::new("round-trip", e.name(), instances.len());
    for (i, a) in instances.iter().enumerate() {
        let image = match soft(e.encode(a))? {
            Ok(img) => img,
            Err(msg) => {
                report.record(
                    false,
                    || json!({"instance": i, "source": structure_json(a), "error": msg}),
                );
                continue;
            }
        };
        let back = soft(
            e.decode(&image)
                .and_then(|b| isomorphic_within(a, &b, e.budget()).map(|m| (b, m))),
        )?;
        match back {
            Ok((_, Some(_))) => report.record(true, || Value::Null),
            Ok((b, None)) => report.record(false, || {
                json!({"instance": i, "source": structure_json(a), "decoded": structure_json(&b)})
            }),
            Err(msg) => report.record(false, || json!({"instance": i, "source": structure_json(a), "error": msg})),
        }
        let elems: Vec<ElementId> = a.universe().iter().copied().collect();
        for k in 1..=max_tuple {
            for t in tuples(&elems, k) {
                let ok = soft(e.tuple_round_trip(a, &image, &t))?;
                report.record(ok == Ok(true), || {
                    json!({"instance": i, "source": structure_json(a), "tuple": t, "error": ok.err()})
                });
            }
        }
    }
    Ok(report)
}

/// `A ≅ A′ ⟺ encode(A) ≅ encode(A′)` for every pair `i <= j`.
pub fn check_iso_preservation<E: EmbeddingUnderTest>(
    e: &E,
    instances: &[FiniteStructure],
) -> Result<SweepReport> {
    let mut report = SweepReport::new("iso-preservation", e.name(), instances.len());
    let mut images = Vec::with_capacity(instances.len());
    for a in instances {
        images.push(soft(e.encode(a))?);
    }
    for i in 0..instances.len() {
        for j in i..instances.len() {
            let (a, b) = (&instances[i], &instances[j]);
            let witness = |detail: Value| json!({"pair": [i, j], "left": structure_json(a), "right": structure_json(b), "detail": detail});
            let (ia, ib) = match (&images[i], &images[j]) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(m), _) | (_, Err(m)) => {
                    report.record(false, || witness(json!({"error": m})));
                    continue;
                }
            };
            let source = isomorphic_within(a, b, e.budget())?.is_some();
            match soft(e.images_isomorphic(ia, ib))? {
                Ok(image) => report.record(source == image, || {
                    witness(json!({"source_isomorphic": source, "images_isomorphic": image}))
                }),
                Err(m) => report.record(false, || witness(json!({"error": m}))),
            }
        }
    }
    Ok(report)
}

/// `ā, ā′` share an orbit of `A` exactly when their images share an orbit of
/// `encode(A)`, for all pairs of k-tuples.
pub fn check_orbit_correspondence<E: EmbeddingUnderTest>(
    e: &E,
    a: &FiniteStructure,
    k: usize,
) -> Result<SweepReport> {
    let mut report = SweepReport::new("orbit-correspondence", e.name(), 1);
    let elems: Vec<ElementId> = a.universe().iter().copied().collect();
    let ts = tuples(&elems, k);
    let source = orbits_within(a, k, e.budget())?;
    let labels = match soft(e.encode(a).and_then(|img| e.image_orbit_labels(a, &img, k)))? {
        Ok(l) => l,
        Err(m) => {
            report.record(
                false,
                || json!({"source": structure_json(a), "k": k, "error": m}),
            );
            return Ok(report);
        }
    };
    for i in 0..ts.len() {
        for j in i..ts.len() {
            let same_source = source.same_orbit(&ts[i], &ts[j]);
            let same_image = labels[i] == labels[j];
            report.record(same_source == same_image, || {
                json!({
                    "source": structure_json(a),
                    "k": k,
                    "tuples": [ts[i], ts[j]],
                    "source_same_orbit": same_source,
                    "image_same_orbit": same_image,
                })
            });
        }
    }
    Ok(report)
}

/// [`check_orbit_correspondence`] over a list of instances and all tuple
/// lengths `1..=max_k`, merged in instance order.
pub fn check_orbits_all<E: EmbeddingUnderTest>(
    e: &E,
    instances: &[FiniteStructure],
    max_k: usize,
) -> Result<SweepReport> {
    let mut report = SweepReport::new("orbit-correspondence", e.name(), instances.len());
    for a in instances {
        for k in 1..=max_k {
            report.absorb(check_orbit_correspondence(e, a, k)?);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub embedding: String,
    pub family_size: usize,
    /// `C_n ≅ target` for each n.
    pub source_verdicts: Vec<bool>,
    /// `encode(C_n) ≅ encode(target)` for each n.
    pub image_verdicts: Vec<bool>,
    pub passed: bool,
}

impl TransferReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Encodes every member of the family and compares both verdict vectors.
/// An instance whose encoding fails gets image verdict `false`.
pub fn transfer_family<E: EmbeddingUnderTest>(
    e: &E,
    family: &[FiniteStructure],
    target: &FiniteStructure,
) -> Result<TransferReport> {
    let target_image = soft(e.encode(target))?;
    let mut source_verdicts = Vec::with_capacity(family.len());
    let mut image_verdicts = Vec::with_capacity(family.len());
    for c in family {
        source_verdicts.push(isomorphic_within(c, target, e.budget())?.is_some());
        let verdict = match (&target_image, soft(e.encode(c))?) {
            (Ok(t), Ok(b)) => soft(e.images_isomorphic(&b, t))?.unwrap_or(false),
            _ => false,
        };
        image_verdicts.push(verdict);
    }
    Ok(TransferReport {
        embedding: e.name(),
        family_size: family.len(),
        passed: source_verdicts == image_verdicts,
        source_verdicts,
        image_verdicts,
    })
}

/// Turns a transfer report into a sweep report for uniform handling.
pub fn transfer_as_sweep(t: &TransferReport) -> SweepReport {
    let mut r = SweepReport::new("transfer", t.embedding.clone(), t.family_size);
    for (n, (s, i)) in t.source_verdicts.iter().zip(&t.image_verdicts).enumerate() {
        r.record(
            s == i,
            || json!({"index": n, "source_verdict": s, "image_verdict": i}),
        );
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{rooted_trees_up_to, FiniteTree};

    fn trees(n: usize) -> Vec<FiniteStructure> {
        rooted_trees_up_to(n)
            .iter()
            .map(FiniteTree::to_structure)
            .collect()
    }

    #[test]
    fn tree_graph_passes() {
        let e = TreeGraph::default();
        let ts = trees(4);
        assert!(check_round_trip(&e, &ts, 1).unwrap().passed);
        assert!(check_iso_preservation(&e, &ts).unwrap().passed);
        assert!(check_orbits_all(&e, &ts, 1).unwrap().passed);
    }

    #[test]
    fn path_orbits_under_each_embedding() {
        let path = FiniteStructure::graph(0..3, [(0, 1), (1, 2)]).unwrap();
        let r = check_orbit_correspondence(&GraphField::default(), &path, 1).unwrap();
        assert!(r.passed, "{}", r.to_json());
        let r = check_orbit_correspondence(&GraphOrder::default(), &path, 1).unwrap();
        assert!(r.passed, "{}", r.to_json());
        assert_eq!(r.checks, 6);
    }

    #[test]
    fn transfer_examples() {
        let e = TreeGraph::default();
        let family = trees(4);
        let target = FiniteTree::chain(3).to_structure();
        let t = transfer_family(&e, &family, &target).unwrap();
        assert!(t.passed);
        assert_eq!(t.source_verdicts.iter().filter(|&&v| v).count(), 1);
        let one = transfer_family(&e, std::slice::from_ref(&target), &target).unwrap();
        assert_eq!(one.source_verdicts, vec![true]);
        assert_eq!(one.image_verdicts, vec![true]);
    }

    #[test]
    fn reports_serialize() {
        let r = check_round_trip(&TreeGraph::default(), &trees(2), 0).unwrap();
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["instances"], 2);
    }
}
