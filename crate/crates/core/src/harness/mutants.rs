//! Seeded faults in the encoders and tuple maps, and the sweeps that should
//! catch them.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::enumerate::graphs_up_to;
use crate::error::Result;
use crate::harness::embeddings::{GraphFieldFault, GraphOrderFault, TreeGraphFault};
use crate::harness::{
    check_iso_preservation, check_orbits_all, check_round_trip, transfer_as_sweep, transfer_family,
    EmbeddingUnderTest, GraphField, GraphOrder, SweepReport, TreeGraph,
};
use crate::structure::FiniteStructure;
use crate::trees::{rooted_trees_up_to, FiniteTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "embedding", content = "fault")]
pub enum Mutant {
    TreeGraph(TreeGraphFault),
    GraphField(GraphFieldFault),
    GraphOrder(GraphOrderFault),
}

pub fn all_mutants() -> Vec<Mutant> {
    vec![
        Mutant::TreeGraph(TreeGraphFault::DropRootLoop),
        Mutant::TreeGraph(TreeGraphFault::AttachToRoot),
        Mutant::TreeGraph(TreeGraphFault::SwapChains),
        Mutant::GraphField(GraphFieldFault::ComplementRadicals),
        Mutant::GraphField(GraphFieldFault::ExtraRadical),
        Mutant::GraphOrder(GraphOrderFault::SwapSeparatorClasses),
        Mutant::GraphOrder(GraphOrderFault::TailOne),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MutantOutcome {
    pub mutant: Mutant,
    pub name: String,
    /// Properties that failed on the mutant.
    pub caught_by: Vec<String>,
    pub caught: bool,
}

fn sweeps<E: EmbeddingUnderTest>(
    e: &E,
    instances: &[FiniteStructure],
    target: &FiniteStructure,
) -> Result<Vec<SweepReport>> {
    Ok(vec![
        check_round_trip(e, instances, 1)?,
        check_iso_preservation(e, instances)?,
        check_orbits_all(e, instances, 1)?,
        transfer_as_sweep(&transfer_family(e, instances, target)?),
    ])
}

fn outcome<E: EmbeddingUnderTest>(
    mutant: Mutant,
    e: &E,
    instances: &[FiniteStructure],
    target: &FiniteStructure,
) -> Result<MutantOutcome> {
    let caught_by: Vec<String> = sweeps(e, instances, target)?
        .into_iter()
        .filter(|r| !r.passed)
        .map(|r| r.property)
        .collect();
    Ok(MutantOutcome {
        mutant,
        name: e.name(),
        caught: !caught_by.is_empty(),
        caught_by,
    })
}

/// Runs every sweep against one mutant on trees with at most 4 nodes or
/// graphs with at most 3 vertices.
pub fn run_mutant(mutant: Mutant, budget: &Budget) -> Result<MutantOutcome> {
    let trees: Vec<FiniteStructure> = rooted_trees_up_to(4)
        .iter()
        .map(FiniteTree::to_structure)
        .collect();
    let graphs = graphs_up_to(3)?;
    let path = FiniteStructure::graph(0..3, [(0, 1), (1, 2)])?;
    match mutant {
        Mutant::TreeGraph(fault) => {
            let e = TreeGraph {
                budget: budget.clone(),
                fault,
            };
            outcome(mutant, &e, &trees, &FiniteTree::chain(3).to_structure())
        }
        Mutant::GraphField(fault) => {
            let e = GraphField {
                budget: budget.clone(),
                fault,
                ..GraphField::default()
            };
            outcome(mutant, &e, &graphs, &path)
        }
        Mutant::GraphOrder(fault) => {
            let e = GraphOrder {
                budget: budget.clone(),
                fault,
                ..GraphOrder::default()
            };
            outcome(mutant, &e, &graphs, &path)
        }
    }
}

pub fn run_fault_injection(budget: &Budget) -> Result<Vec<MutantOutcome>> {
    all_mutants()
        .into_iter()
        .map(|m| run_mutant(m, budget))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unmutated_embeddings_pass_the_same_sweeps() {
        let b = Budget::default();
        let trees: Vec<FiniteStructure> = rooted_trees_up_to(4)
            .iter()
            .map(FiniteTree::to_structure)
            .collect();
        let target = FiniteTree::chain(3).to_structure();
        assert!(sweeps(&TreeGraph::default(), &trees, &target)
            .unwrap()
            .iter()
            .all(|r| r.passed));
        let graphs = graphs_up_to(3).unwrap();
        let path = FiniteStructure::graph(0..3, [(0, 1), (1, 2)]).unwrap();
        for r in sweeps(
            &GraphField {
                budget: b.clone(),
                ..GraphField::default()
            },
            &graphs,
            &path,
        )
        .unwrap()
        {
            assert!(r.passed, "{}", r.to_json());
        }
        for r in sweeps(&GraphOrder::default(), &graphs, &path).unwrap() {
            assert!(r.passed, "{}", r.to_json());
        }
    }

    #[test]
    fn every_mutant_is_caught() {
        let outcomes = run_fault_injection(&Budget::default()).unwrap();
        assert!(outcomes.len() >= 6);
        for o in outcomes {
            assert!(o.caught, "{} slipped through", o.name);
        }
    }
}
