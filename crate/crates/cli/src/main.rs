use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use scottkit::backforth::scott_report_within;
use scottkit::embed_graph::{decode_graph, encode_tree, gadget_colour};
use scottkit::enumerate::graphs_up_to;
use scottkit::field::{build_field, decode_field, FieldPresentation};
use scottkit::harness::{
    check_iso_preservation, check_orbits_all, check_round_trip, run_fault_injection,
    transfer_family, EmbeddingUnderTest, GraphField, GraphOrder, TreeGraph,
};
use scottkit::iso::orbits_within;
use scottkit::order::{
    coding_fragment_within, decode_fragment_within, enumerate_fragment_within, OrderElement,
};
use scottkit::trees::{
    generate_rank_homogeneous_within, is_rank_homogeneous_k, is_thin, rank_sets,
    rooted_trees_up_to, FiniteTree, LevelSpec,
};
use scottkit::{Budget, FiniteStructure};

#[derive(Parser)]
#[command(
    name = "scottkit",
    version,
    about = "Scott ranks, tree ranks and the three embeddings on finite inputs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: Config,
}

#[derive(Args, Clone)]
struct Config {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized generation
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on rationals examined by one dense pick
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    step_cap: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Embedding {
    TreeGraph,
    #[value(alias = "field")]
    GraphField,
    #[value(alias = "order")]
    GraphOrder,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Tree,
    Graph,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Iso,
    Orbits,
    RoundTrip,
    Transfer,
    Faults,
}

#[derive(Subcommand)]
enum Command {
    /// Generate trees or graphs
    Gen {
        kind: Kind,
        /// Every tree or graph with at most this many nodes or vertices
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=12))]
        max_size: Option<u64>,
        /// Rank sets per level for a rank-homogeneous tree, e.g. "2;0,1;0"
        #[arg(long)]
        levels: Option<String>,
        /// Children of each admissible rank
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// A random graph on this many vertices, edges chosen with `--seed`
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=64))]
        random: Option<u64>,
    },
    /// Encode an input under one embedding
    Embed {
        embedding: Embedding,
        input: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Read the source back from an image
    Decode {
        embedding: Embedding,
        input: PathBuf,
    },
    /// Scott ranks of a structure and its injective tuples
    ScottRank { input: PathBuf },
    /// Node ranks and per-level rank sets of a tree
    TreeRank {
        input: PathBuf,
        /// Also check k-rank-homogeneity to this depth
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: Option<u64>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Automorphism orbits of k-tuples
    Orbits {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Run a property sweep over all small instances
    Sweep {
        property: Property,
        #[arg(long, value_enum)]
        embedding: Option<Embedding>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(0..=8))]
        max_size: u64,
        /// Tuple length for orbit and round-trip sweeps
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Target of a transfer sweep
        #[arg(long)]
        target: Option<PathBuf>,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        order: OrderArgs,
    },
}

#[derive(Args, Clone, Copy)]
struct FieldArgs {
    /// Characteristic of the prime field: 0 or a prime
    #[arg(long = "char", default_value_t = 0)]
    characteristic: u64,
}

#[derive(Args, Clone, Copy)]
struct OrderArgs {
    /// Most (q, r) pairs in an order element
    #[arg(long, default_value_t = 2)]
    max_len: usize,
    /// Height cap for enumerated order elements; without it, `embed` emits
    /// only the coding elements and their blocks
    #[arg(long)]
    height: Option<u64>,
}

enum Failure {
    /// Bad input or a library error; exit code 2.
    Error(String),
    /// A sweep found a counterexample; exit code 1.
    Property(Value),
}

impl From<scottkit::Error> for Failure {
    fn from(e: scottkit::Error) -> Self {
        Failure::Error(e.to_string())
    }
}

type Out = Result<String, Failure>;

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Error(format!("cannot read {}: {e}", path.display())))
}

fn read_structure(path: &PathBuf) -> Result<FiniteStructure, Failure> {
    FiniteStructure::from_json(&read(path)?)
        .map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

/// A tree given either as a list of node paths or as a successor structure.
fn read_tree(path: &PathBuf) -> Result<FiniteTree, Failure> {
    let text = read(path)?;
    FiniteTree::from_json(&text)
        .or_else(|_| FiniteStructure::from_json(&text).and_then(|s| FiniteTree::from_structure(&s)))
        .map_err(|e| Failure::Error(format!("{}: not a tree: {e}", path.display())))
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

fn structure_out(s: &FiniteStructure, format: Format) -> String {
    match format {
        Format::Dot => s.to_dot(),
        _ => s.to_json_pretty(),
    }
}

fn budget(config: &Config) -> Result<Budget, Failure> {
    let mut b = Budget::from_env().ok_or_else(|| {
        Failure::Error(format!(
            "unknown {} (expected default, small or large)",
            scottkit::budget::PROFILE_ENV
        ))
    })?;
    if let Some(cap) = config.step_cap {
        b.dense_pick_step_cap = cap;
    }
    Ok(b)
}

fn parse_levels(text: &str) -> Result<LevelSpec, Failure> {
    let levels = text
        .split(';')
        .map(|level| {
            level
                .split(',')
                .map(|r| r.trim().parse::<u64>())
                .collect::<Result<Vec<u64>, _>>()
                .map_err(|e| Failure::Error(format!("--levels: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LevelSpec::finite(levels))
}

fn gen(
    kind: Kind,
    max_size: Option<u64>,
    levels: Option<String>,
    k: u64,
    depth: usize,
    random: Option<u64>,
    config: &Config,
) -> Out {
    let b = budget(config)?;
    match (kind, levels, max_size, random) {
        (Kind::Tree, Some(levels), None, None) => {
            let t =
                generate_rank_homogeneous_within(&parse_levels(&levels)?, k as usize, depth, &b)?;
            Ok(match config.format {
                Format::Dot => t.to_structure().to_dot(),
                _ => t.to_json(),
            })
        }
        (Kind::Tree, None, Some(n), None) => Ok(pretty(
            &rooted_trees_up_to(n as usize)
                .iter()
                .map(|t| t.nodes().clone())
                .collect::<Vec<_>>(),
        )),
        (Kind::Graph, None, Some(n), None) => {
            let gs = graphs_up_to(n as usize)?;
            Ok(pretty(
                &gs.iter()
                    .map(|g| serde_json::from_str::<Value>(&g.to_json()).expect("json"))
                    .collect::<Vec<_>>(),
            ))
        }
        (Kind::Graph, None, None, Some(n)) => {
            eprintln!("seed {}", config.seed);
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let edges: Vec<(u64, u64)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |c| (a, c)))
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            Ok(structure_out(
                &FiniteStructure::graph(0..n, edges)?,
                config.format,
            ))
        }
        (Kind::Tree, ..) => Err(Failure::Error(
            "gen tree takes exactly one of --levels or --max-size".into(),
        )),
        (Kind::Graph, ..) => Err(Failure::Error(
            "gen graph takes exactly one of --max-size or --random".into(),
        )),
    }
}

fn embed(
    embedding: Embedding,
    input: &PathBuf,
    field: FieldArgs,
    order: OrderArgs,
    config: &Config,
) -> Out {
    let b = budget(config)?;
    match embedding {
        Embedding::TreeGraph => {
            let g = encode_tree(&read_tree(input)?);
            Ok(match config.format {
                Format::Dot => g.to_dot_with(gadget_colour),
                _ => g.to_json_pretty(),
            })
        }
        Embedding::GraphField => {
            let f = build_field(&read_structure(input)?, field.characteristic)?;
            Ok(match config.format {
                Format::Text => f.describe(),
                _ => pretty(&f),
            })
        }
        Embedding::GraphOrder => {
            let g = read_structure(input)?;
            Ok(pretty(&match order.height {
                Some(h) => enumerate_fragment_within(&g, order.max_len, h, &b)?,
                None => coding_fragment_within(&g, order.max_len, &b)?,
            }))
        }
    }
}

fn decode(embedding: Embedding, input: &PathBuf, config: &Config) -> Out {
    let b = budget(config)?;
    let bad = |e: serde_json::Error| Failure::Error(format!("{}: {e}", input.display()));
    match embedding {
        Embedding::TreeGraph => {
            let t = decode_graph(&read_structure(input)?)?;
            Ok(match config.format {
                Format::Dot => t.to_structure().to_dot(),
                _ => t.to_json(),
            })
        }
        Embedding::GraphField => {
            let f: FieldPresentation = serde_json::from_str(&read(input)?).map_err(bad)?;
            Ok(structure_out(&decode_field(&f)?, config.format))
        }
        Embedding::GraphOrder => {
            let xs: Vec<OrderElement> = serde_json::from_str(&read(input)?).map_err(bad)?;
            Ok(structure_out(
                &decode_fragment_within(&xs, &b)?,
                config.format,
            ))
        }
    }
}

fn tree_rank(input: &PathBuf, k: Option<u64>, depth: usize) -> Out {
    let t = read_tree(input)?;
    let ranks: Vec<Value> = t
        .ranks()
        .into_iter()
        .map(|(n, r)| json!({"node": n, "rank": r}))
        .collect();
    let levels = rank_sets(&t);
    let spec = LevelSpec::of_tree(&t);
    let mut out = json!({"ranks": ranks, "levels": levels, "thin": is_thin(&spec)});
    if let Some(k) = k {
        out["rank_homogeneous"] = json!(is_rank_homogeneous_k(&t, k as usize, depth));
    }
    Ok(pretty(&out))
}

fn sweep_one<E: EmbeddingUnderTest>(
    e: &E,
    property: Property,
    instances: &[FiniteStructure],
    k: usize,
    target: &FiniteStructure,
) -> Result<(Value, bool), Failure> {
    let report = match property {
        Property::Iso => check_iso_preservation(e, instances)?,
        Property::Orbits => check_orbits_all(e, instances, k)?,
        Property::RoundTrip => check_round_trip(e, instances, k)?,
        Property::Transfer => {
            let t = transfer_family(e, instances, target)?;
            let passed = t.passed;
            return Ok((serde_json::to_value(t).expect("json"), passed));
        }
        Property::Faults => unreachable!("handled by the caller"),
    };
    let passed = report.passed;
    Ok((serde_json::to_value(report).expect("json"), passed))
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    property: Property,
    embedding: Option<Embedding>,
    max_size: u64,
    k: usize,
    target: Option<PathBuf>,
    field: FieldArgs,
    order: OrderArgs,
    config: &Config,
) -> Out {
    let b = budget(config)?;
    if property == Property::Faults {
        let outcomes = run_fault_injection(&b)?;
        let all = outcomes.iter().all(|o| o.caught);
        let v = serde_json::to_value(&outcomes).expect("json");
        return if all {
            Ok(pretty(&v))
        } else {
            Err(Failure::Property(v))
        };
    }
    let embedding = embedding.ok_or_else(|| Failure::Error("--embedding is required".into()))?;
    let n = max_size as usize;
    let (value, passed) = match embedding {
        Embedding::TreeGraph => {
            let trees: Vec<FiniteStructure> = rooted_trees_up_to(n)
                .iter()
                .map(FiniteTree::to_structure)
                .collect();
            let target = match &target {
                Some(p) => read_tree(p)?.to_structure(),
                None => FiniteTree::chain(n.max(1)).to_structure(),
            };
            sweep_one(
                &TreeGraph {
                    budget: b,
                    ..TreeGraph::default()
                },
                property,
                &trees,
                k,
                &target,
            )?
        }
        Embedding::GraphField | Embedding::GraphOrder => {
            let graphs = graphs_up_to(n)?;
            let target = match &target {
                Some(p) => read_structure(p)?,
                None => FiniteStructure::graph(0..n as u64, (1..n as u64).map(|v| (v - 1, v)))?,
            };
            if embedding == Embedding::GraphField {
                let e = GraphField {
                    budget: b,
                    ..GraphField::new(field.characteristic)
                };
                sweep_one(&e, property, &graphs, k, &target)?
            } else {
                let e = GraphOrder {
                    budget: b,
                    max_len: order.max_len,
                    height: order.height.unwrap_or(2),
                    ..GraphOrder::default()
                };
                sweep_one(&e, property, &graphs, k, &target)?
            }
        }
    };
    if passed {
        Ok(pretty(&value))
    } else {
        Err(Failure::Property(value))
    }
}

fn run(cli: Cli) -> Out {
    let config = cli.config;
    match cli.command {
        Command::Gen {
            kind,
            max_size,
            levels,
            k,
            depth,
            random,
        } => gen(kind, max_size, levels, k, depth, random, &config),
        Command::Embed {
            embedding,
            input,
            field,
            order,
        } => embed(embedding, &input, field, order, &config),
        Command::Decode { embedding, input } => decode(embedding, &input, &config),
        Command::ScottRank { input } => {
            let report = scott_report_within(&read_structure(&input)?, &budget(&config)?)?;
            Ok(match config.format {
                Format::Text => report.structure_rank.to_string(),
                _ => pretty(&report),
            })
        }
        Command::TreeRank { input, k, depth } => tree_rank(&input, k, depth),
        Command::Orbits { input, k } => {
            let a = read_structure(&input)?;
            let p = orbits_within(&a, k, &budget(&config)?)?;
            Ok(pretty(
                &json!({"k": k, "orbit_count": p.orbit_count(), "orbits": p.cells()}),
            ))
        }
        Command::Sweep {
            property,
            embedding,
            max_size,
            k,
            target,
            field,
            order,
        } => sweep(
            property, embedding, max_size, k, target, field, order, &config,
        ),
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Property(v)) => {
            emit(&pretty(&v));
            ExitCode::from(1)
        }
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
