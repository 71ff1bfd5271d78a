//! Every acceptance criterion, one pass/fail line each.
//!
//! Run with `cargo test -p scottkit --test acceptance -- --nocapture` to see
//! the report.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scottkit::embed_graph::{decode_graph, encode_tree, node_vertices};
use scottkit::enumerate::{binary_structures, graphs, graphs_up_to};
use scottkit::field::{build_field, decode_field, has_root, FieldElement, FieldPresentation};
use scottkit::harness::{run_fault_injection, transfer_family, GraphField, TreeGraph};
use scottkit::iso::{automorphisms, orbits};

use scottkit::backforth::scott_rank;
use scottkit::order::{
    class_of, coding_fragment, dense_pick_within, discrete_block, enumerate_fragment, f_map,
    g_decode, FamilyMap, OrderElement, Rational,
};
use scottkit::structure::tuples;
use scottkit::trees::{
    generate_rank_homogeneous, is_rank_homogeneous_k, rooted_trees_up_to, FiniteTree, LevelSpec,
};
use scottkit::{isomorphic, Budget, ElementId, FiniteStructure, Signature};

use common::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: scottkit::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn back_and_forth_oracle() -> Outcome {
    let mut order = FiniteStructure::new(Signature::binary("R"), [0, 1]);
    order.insert("R", vec![0, 1]).unwrap();
    let spot = (lib(scott_rank(&order))?, naive_scott_rank(&order));
    ensure(spot == (2, 2), || {
        format!("2-chain ranks {spot:?}, expected 2")
    })?;

    let known = [1, 2, 10, 104, 3044];
    let mut total = 0;
    for (n, &count) in known.iter().enumerate() {
        let all = lib(binary_structures(n, "R"))?;
        ensure(all.len() == count, || {
            format!("{} structures of size {n}", all.len())
        })?;
        for a in &all {
            let fast = lib(scott_rank(a))?;
            let slow = naive_scott_rank(a);
            ensure(fast == slow, || {
                format!("table {fast}, naive {slow} on {}", a.to_json())
            })?;
        }
        total += all.len();
    }
    Ok(format!("{total} structures agree; 2-chain has rank 2"))
}

fn tree_graph_embedding() -> Outcome {
    let trees = rooted_trees_up_to(5);
    let brute: usize = (1..=5).map(|n| brute_rooted_trees(n).len()).sum();
    ensure(trees.len() == brute && brute == 17, || {
        format!("{} trees, brute force {brute}", trees.len())
    })?;
    let images: Vec<FiniteStructure> = trees.iter().map(encode_tree).collect();
    for (t, g) in trees.iter().zip(&images) {
        ensure(g.len() == 12 * t.len(), || {
            format!("{} vertices for {} nodes", g.len(), t.len())
        })?;
        let back = lib(decode_graph(g))?;
        ensure(tree_canon(&back) == tree_canon(t), || {
            format!("decode changed {}", tree_canon(t))
        })?;
    }
    let mut pairs = 0;
    for i in 0..trees.len() {
        for j in i..trees.len() {
            let source = tree_canon(&trees[i]) == tree_canon(&trees[j]);
            let image = lib(isomorphic(&images[i], &images[j]))?.is_some();
            ensure(source == image, || {
                format!("trees {i}, {j}: source {source}, image {image}")
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{} trees, {pairs} pairs", trees.len()))
}

fn orbit_correspondence() -> Outcome {
    let mut checks = 0usize;
    for t in rooted_trees_up_to(4) {
        let source = t.to_structure();
        let ids = t.node_ids();
        let vertex = node_vertices(&t);
        let image = encode_tree(&t);
        let to_vertex: BTreeMap<ElementId, ElementId> =
            ids.iter().map(|(n, &id)| (id, vertex[n])).collect();
        let elems: Vec<ElementId> = source.universe().iter().copied().collect();
        for k in 1..=2 {
            let src = brute_orbits(&source, k);
            let img = lib(orbits(&image, k))?;
            let ts = tuples(&elems, k);
            for x in &ts {
                for y in &ts {
                    let vx: Vec<ElementId> = x.iter().map(|a| to_vertex[a]).collect();
                    let vy: Vec<ElementId> = y.iter().map(|a| to_vertex[a]).collect();
                    let same_source = src[x] == src[y];
                    let same_image = img.same_orbit(&vx, &vy);
                    ensure(same_source == same_image, || {
                        format!(
                            "{} k={k} tuples {x:?} {y:?}: source {same_source}, image {same_image}",
                            tree_canon(&t)
                        )
                    })?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} tuple pairs"))
}

/// Sums of scalar multiples of `b_i · s_k^e`, with small random coefficients.
fn random_element(f: &FieldPresentation, rng: &mut ChaCha8Rng) -> FieldElement {
    let mut x = f.scalar(rng.gen_range(-3..=3));
    for _ in 0..rng.gen_range(1..=2) {
        let mut t = f.mul(
            &f.scalar(rng.gen_range(-3..=3)),
            &f.b(rng.gen_range(0..f.nvars())),
        );
        if !f.radicals().is_empty() && rng.gen_bool(0.5) {
            t = f.mul(&t, &f.radical(rng.gen_range(0..f.radicals().len())));
        }
        x = f.add(&x, &t);
    }
    x
}

fn graph_field() -> Outcome {
    let gs = lib(graphs(4))?;
    let brute = brute_graphs(4);
    ensure(gs.len() == 11 && brute.len() == 11, || {
        format!("{} graphs, brute force {}", gs.len(), brute.len())
    })?;
    for p in [0, 3, 2] {
        for g in &gs {
            let f = lib(build_field(g, p))?;
            let back = lib(decode_field(&f))?;
            ensure(&back == g, || {
                format!("char {p}: decoded {} from {}", back.to_json(), g.to_json())
            })?;
            let vs = f.vertices().to_vec();
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    let root = lib(has_root(&f, &f.linear_form(i, j)))?;
                    ensure(root == g.has_edge(vs[i], vs[j]), || {
                        format!(
                            "char {p}: root of b{}+b{} is {root} in {}",
                            i + 1,
                            j + 1,
                            g.to_json()
                        )
                    })?;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 0..1000 {
        let g = &gs[n % gs.len()];
        let p = [0, 3, 2][n % 3];
        let f = lib(build_field(g, p))?;
        let (x, y, z) = (
            random_element(&f, &mut rng),
            random_element(&f, &mut rng),
            random_element(&f, &mut rng),
        );
        let fail = |law: &str| {
            format!(
                "{law} fails in char {p} over {}: {x}, {y}, {z}",
                g.to_json()
            )
        };
        ensure(
            f.mul(&f.mul(&x, &y), &z) == f.mul(&x, &f.mul(&y, &z)),
            || fail("associativity"),
        )?;
        ensure(
            f.add(&f.add(&x, &y), &z) == f.add(&x, &f.add(&y, &z)),
            || fail("additive associativity"),
        )?;
        ensure(f.mul(&x, &y) == f.mul(&y, &x), || fail("commutativity"))?;
        ensure(
            f.mul(&x, &f.add(&y, &z)) == f.add(&f.mul(&x, &y), &f.mul(&x, &z)),
            || fail("distributivity"),
        )?;
        ensure(f.sub(&f.add(&x, &y), &y) == x, || fail("additive inverse"))?;
        if !x.is_zero() {
            let xi = lib(f.inv(&x))?;
            ensure(f.mul(&x, &xi) == f.one(), || fail("inverse"))?;
        }
    }
    Ok("11 graphs in characteristics 0, 3, 2; 1000 axiom triples".into())
}

/// Rationals `p/q` in `(0, 10)` with `q ≤ 8`.
fn small_endpoints() -> Vec<Rational> {
    let set: BTreeSet<Rational> = (1..=8)
        .flat_map(|q| (1..10 * q).map(move |p| Rational::new(p, q).unwrap()))
        .collect();
    set.into_iter().collect()
}

fn graph_order() -> Outcome {
    let budget = Budget::default();
    let ends = small_endpoints();
    let mut picks = 0usize;
    for a in 0..=8 {
        for (i, &lo) in ends.iter().enumerate() {
            for &hi in &ends[i + 1..] {
                let x = lib(dense_pick_within(
                    a,
                    Some(lo),
                    Some(hi),
                    budget.dense_pick_step_cap,
                ))?;
                ensure(lo < x && x < hi && class_of(x) == a, || {
                    format!("pick {x} for class {a} in ({lo}, {hi})")
                })?;
                picks += 1;
            }
        }
    }

    let small = lib(graphs_up_to(4))?;
    let mut decoded = 0;
    for g in &small {
        let elems: Vec<ElementId> = g.universe().iter().copied().collect();
        for k in 1..=2 {
            for t in tuples(&elems, k) {
                let back = lib(f_map(g, &t).and_then(|x| g_decode(g, &x)))?;
                ensure(back == t, || {
                    format!("g(f({t:?})) = {back:?} in {}", g.to_json())
                })?;
                decoded += 1;
            }
        }
    }

    // every block is complete once tails up to 3 are allowed
    let mut blocks = 0;
    for g in &small {
        let fragment = lib(enumerate_fragment(g, 2, 3))?;
        let mut counts: BTreeMap<&[Rational], u64> = BTreeMap::new();
        for x in &fragment {
            *counts.entry(&x.body).or_default() += 1;
        }
        for x in fragment.iter().filter(|x| x.tail == 0) {
            let (_, m) = lib(discrete_block(g, x))?;
            ensure(counts[&x.body[..]] == m, || {
                format!(
                    "block of {} has {} members, size {m}",
                    x.to_json(),
                    counts[&x.body[..]]
                )
            })?;
            blocks += 1;
        }
    }

    let mut maps = 0;
    for g in lib(graphs_up_to(3))? {
        let sweep: BTreeSet<OrderElement> = lib(enumerate_fragment(&g, 2, 2))?
            .into_iter()
            .chain(lib(coding_fragment(&g, 2))?)
            .collect();
        for sigma in lib(automorphisms(&g))? {
            let mut map = lib(FamilyMap::new(&g, &g, sigma.as_map().clone()))?;
            for x in &sweep {
                lib(map.extend_forth(x))?;
                lib(map.extend_back(x))?;
            }
            maps += 1;
        }
    }
    Ok(format!(
        "{picks} picks, {decoded} tuples, {blocks} blocks, {maps} automorphism maps"
    ))
}

fn family_transfer() -> Outcome {
    let trees: Vec<FiniteStructure> = rooted_trees_up_to(4)
        .iter()
        .map(FiniteTree::to_structure)
        .collect();
    let gs = lib(graphs(4))?;
    let tree_graph = TreeGraph::default();
    let graph_field = GraphField::default();
    for target in &trees {
        let r = lib(transfer_family(&tree_graph, &trees, target))?;
        let oracle: Vec<bool> = trees.iter().map(|c| brute_isomorphic(c, target)).collect();
        ensure(r.passed && r.source_verdicts == oracle, || r.to_json())?;
    }
    for target in &gs {
        let r = lib(transfer_family(&graph_field, &gs, target))?;
        let oracle: Vec<bool> = gs.iter().map(|c| brute_isomorphic(c, target)).collect();
        ensure(r.passed && r.source_verdicts == oracle, || r.to_json())?;
    }
    Ok(format!(
        "{} tree targets, {} graph targets",
        trees.len(),
        gs.len()
    ))
}

fn rank_homogeneity() -> Outcome {
    let specs: [(&[&[u64]], usize); 10] = [
        (&[&[0]], 1),
        (&[&[1], &[0]], 3),
        (&[&[2], &[0, 1], &[0]], 1),
        (&[&[2], &[0, 1], &[0]], 2),
        (&[&[2], &[1], &[0]], 3),
        (&[&[3], &[2], &[1], &[0]], 2),
        (&[&[3], &[0, 1, 2], &[0, 1], &[0]], 1),
        (&[&[3], &[0, 1, 2], &[0, 1], &[0]], 2),
        (&[&[3], &[1, 2], &[0, 1], &[0]], 2),
        (&[&[3], &[0, 2], &[1], &[0]], 3),
    ];
    let mut nodes = 0;
    for (levels, k) in specs {
        let sets: Vec<BTreeSet<u64>> = levels.iter().map(|l| l.iter().copied().collect()).collect();
        let spec = LevelSpec::finite(sets.clone());
        let t = lib(generate_rank_homogeneous(&spec, k, 3))?;
        let u = recursive_rank_homogeneous(&sets, k);
        ensure(tree_canon(&t) == tree_canon(&u), || {
            format!("{levels:?} k={k}: generators disagree")
        })?;
        ensure(
            lib(isomorphic(&t.to_structure(), &u.to_structure()))?.is_some(),
            || format!("{levels:?}: not isomorphic"),
        )?;
        ensure(
            is_rank_homogeneous_k(&t, k, 3) && LevelSpec::of_tree(&t) == spec,
            || format!("{levels:?}: wrong shape"),
        )?;
        let ranks = naive_node_ranks(&u);
        ensure(ranks[&vec![]] == levels[0][0], || {
            format!("{levels:?}: root rank {}", ranks[&vec![]])
        })?;
        nodes += t.len();
    }
    Ok(format!("10 specs, {nodes} nodes"))
}

fn fault_injection() -> Outcome {
    let outcomes = lib(run_fault_injection(&Budget::default()))?;
    ensure(outcomes.len() >= 6, || {
        format!("only {} mutants", outcomes.len())
    })?;
    let missed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.caught)
        .map(|o| o.name.as_str())
        .collect();
    ensure(missed.is_empty(), || format!("not caught: {missed:?}"))?;
    Ok(format!("{} mutants caught", outcomes.len()))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        (
            "1 back-and-forth oracle",
            Duration::from_secs(120),
            back_and_forth_oracle,
        ),
        (
            "2 tree to graph",
            Duration::from_secs(120),
            tree_graph_embedding,
        ),
        (
            "3 orbit correspondence",
            Duration::from_secs(300),
            orbit_correspondence,
        ),
        ("4 graph to field", Duration::from_secs(120), graph_field),
        ("5 graph to order", Duration::from_secs(300), graph_order),
        (
            "6 family transfer",
            Duration::from_secs(120),
            family_transfer,
        ),
        (
            "7 rank homogeneity",
            Duration::from_secs(60),
            rank_homogeneity,
        ),
        (
            "8 fault injection",
            Duration::from_secs(600),
            fault_injection,
        ),
    ];
    let mut failed = Vec::new();
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let result = outcome.and_then(|detail| {
            if elapsed > limit {
                Err(format!(
                    "{detail}, but took longer than {}s",
                    limit.as_secs()
                ))
            } else {
                Ok(detail)
            }
        });
        match &result {
            Ok(detail) => println!(
                "PASS criterion {name} ({:.1}s): {detail}",
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                println!(
                    "FAIL criterion {name} ({:.1}s): {why}",
                    elapsed.as_secs_f64()
                );
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
