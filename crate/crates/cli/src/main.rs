//! Command-line front end: parse graph documents, dispatch computations,
//! emit tables or JSON.
//!
//! Exit codes: 0 success, 1 computation error, 2 usage error.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ncdist::chain::{self, Chain};
use ncdist::decomposition;
use ncdist::estimators;
use ncdist::graph::{parse_graph, GraphDocument, WeightedGraph};
use ncdist::solver::{self, SolverConfig};
use ncdist::NcdError;

mod report;

#[derive(Parser)]
#[command(
    name = "ncdist",
    about = "Noncommutative distances on finite weighted graphs: exact values and all estimates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct CommonOpts {
    /// Relative tolerance of the exact solver
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Newton-step budget per solve
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    /// Independent solver restarts
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Seed for solver restarts
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

impl CommonOpts {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            tol: self.tol,
            max_iterations: self.max_iter,
            restarts: self.restarts,
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct InputOpt {
    /// Graph document path, or '-' for stdin
    #[arg(long, default_value = "-")]
    input: String,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a graph document and check every invariant
    Validate {
        #[command(flatten)]
        input: InputOpt,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Exact noncommutative distance between two vertices
    Distance {
        /// First vertex (1-based); required unless --all-pairs
        i: Option<usize>,
        /// Second vertex (1-based); required unless --all-pairs
        j: Option<usize>,
        /// Compute the full symmetric distance matrix
        #[arg(long)]
        all_pairs: bool,
        #[command(flatten)]
        input: InputOpt,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Every bound on the distance, merged into one interval
    Bounds {
        i: usize,
        j: usize,
        /// Also solve exactly and report the value inside the interval
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        input: InputOpt,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Bounds and noncommutative length of a weighted chain like "1-2-1"
    Chain {
        /// Dash-separated positive weights
        literal: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Block-cutpoint tree, pruning and blob-chain decomposition
    Decompose {
        i: usize,
        j: usize,
        #[command(flatten)]
        input: InputOpt,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Emit a reproducible random connected graph document
    Gen {
        /// Vertex count
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge probability in [0,1]
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0.5)]
        wmin: f64,
        #[arg(long, default_value_t = 2.0)]
        wmax: f64,
    },
    /// Recompute the built-in worked chain examples and flag mismatches
    Report {
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn read_document(input: &InputOpt) -> Result<GraphDocument, NcdError> {
    let text = if input.input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| NcdError::Parse(e.to_string()))?;
        buf
    } else {
        std::fs::read_to_string(&input.input).map_err(|e| NcdError::Parse(e.to_string()))?
    };
    parse_graph(&text)
}

/// 6 significant digits for tables; infinities render as "inf".
fn sig6(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    format!("{:.*}", decimals, x)
}

fn json_f64(x: f64) -> serde_json::Value {
    if x.is_infinite() {
        json!("inf")
    } else {
        json!(x)
    }
}

fn run() -> Result<(), NcdError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { input, common } => {
            let doc = read_document(&input)?;
            let g = doc.graph();
            let kind = match &doc {
                GraphDocument::Weighted(_) => "weighted-graph",
                GraphDocument::Dirac(_) => "dirac",
            };
            match common.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "kind": kind,
                        "n": g.vertex_count(),
                        "edges": g.edge_count(),
                        "connected": g.is_connected(),
                        "max_degree": g.max_degree(),
                    }))
                    .unwrap()
                ),
                Format::Table => {
                    println!("kind:       {kind}");
                    println!("vertices:   {}", g.vertex_count());
                    println!("edges:      {}", g.edge_count());
                    println!("connected:  {}", g.is_connected());
                    println!("max degree: {}", g.max_degree());
                }
            }
            Ok(())
        }
        Command::Distance {
            i,
            j,
            all_pairs,
            input,
            common,
        } => {
            let doc = read_document(&input)?;
            let d = doc.dirac();
            let cfg = common.config();
            cfg.validate()?;
            if all_pairs {
                let matrix = solver::nc_distance_matrix(&d, &cfg)?;
                match common.format {
                    Format::Json => {
                        let rows: Vec<Vec<serde_json::Value>> = matrix
                            .iter()
                            .map(|row| row.iter().map(|&x| json_f64(x)).collect())
                            .collect();
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({ "distances": rows })).unwrap()
                        );
                    }
                    Format::Table => {
                        for row in &matrix {
                            let cells: Vec<String> = row.iter().map(|&x| sig6(x)).collect();
                            println!("{}", cells.join("  "));
                        }
                    }
                }
                return Ok(());
            }
            let (i, j) = match (i, j) {
                (Some(i), Some(j)) => (i, j),
                _ => {
                    return Err(NcdError::InvalidParameter(
                        "vertices i and j are required unless --all-pairs is given".into(),
                    ))
                }
            };
            let result = solver::nc_distance(&d, i, j, &cfg)?;
            match common.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "i": i,
                        "j": j,
                        "value": json_f64(result.value),
                        "witness": result.witness.as_slice(),
                        "iterations": result.iterations,
                        "converged": result.converged,
                    }))
                    .unwrap()
                ),
                Format::Table => {
                    println!("d({i},{j}) = {}", sig6(result.value));
                    println!(
                        "iterations: {} (converged: {})",
                        result.iterations, result.converged
                    );
                    let witness: Vec<String> = result
                        .witness
                        .as_slice()
                        .iter()
                        .map(|&x| sig6(x))
                        .collect();
                    println!("witness:    [{}]", witness.join(", "));
                }
            }
            Ok(())
        }
        Command::Bounds {
            i,
            j,
            exact,
            input,
            common,
        } => {
            let doc = read_document(&input)?;
            let d = doc.dirac();
            let cfg = common.config();
            cfg.validate()?;
            let est = estimators::merged_bounds(&d, i, j, &cfg, exact)?;
            match common.format {
                Format::Json => {
                    let provenance: Vec<serde_json::Value> = est
                        .provenance
                        .iter()
                        .map(|(name, value)| json!({"bound": name, "value": json_f64(*value)}))
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "i": i,
                            "j": j,
                            "lower": json_f64(est.lower),
                            "upper": json_f64(est.upper),
                            "exact": est.exact.map(json_f64),
                            "provenance": provenance,
                        }))
                        .unwrap()
                    );
                }
                Format::Table => {
                    println!("d({i},{j}) in [{}, {}]", sig6(est.lower), sig6(est.upper));
                    if let Some(e) = est.exact {
                        println!("exact: {}", sig6(e));
                    }
                    for (name, value) in &est.provenance {
                        println!("  {name:<24} {}", sig6(*value));
                    }
                }
            }
            Ok(())
        }
        Command::Chain { literal, common } => {
            let c = Chain::parse(&literal)?;
            let cfg = common.config();
            cfg.validate()?;
            let rep = chain::chain_bounds_report(&c, &cfg);
            match common.format {
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&rep).unwrap())
                }
                Format::Table => {
                    println!("chain:     {literal}");
                    println!("edges:     {}", c.len());
                    println!("geodesic:  {}", sig6(c.geodesic_length()));
                    println!("bare L0:   {}", sig6(rep.bare));
                    println!("bare R0:   {}", sig6(rep.r_bare));
                    println!("R1:        {}", sig6(rep.r1));
                    println!("R2:        {}", sig6(rep.r2));
                    if let Some(lambda) = rep.lambda {
                        println!("lambda:    {}", sig6(lambda));
                    }
                    println!("L1:        {}", sig6(rep.l1));
                    println!("L2:        {}", sig6(rep.l2));
                    println!("extremal:  {}", rep.extremal);
                    println!("L1 cuts:   {:?}", rep.best_decomposition_l1);
                    println!("R1 cuts:   {:?}", rep.best_decomposition_r1);
                }
            }
            Ok(())
        }
        Command::Decompose {
            i,
            j,
            input,
            common,
        } => {
            let doc = read_document(&input)?;
            let g = doc.graph();
            let tree = decomposition::block_cut_tree(&g)?;
            let pruning = decomposition::prune(&g, i, j)?;
            let bc = decomposition::blob_chain(&g, i, j)?;
            match common.format {
                Format::Json => {
                    let blobs: Vec<serde_json::Value> = bc
                        .blobs
                        .iter()
                        .map(|b| json!({"vertices": b.vertices, "entry": b.entry, "exit": b.exit}))
                        .collect();
                    let chains: Vec<serde_json::Value> = bc
                        .chains
                        .iter()
                        .map(|c| json!({"vertices": c.vertices, "weights": c.weights}))
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "blocks": tree.blocks,
                            "cutpoints": tree.cutpoints,
                            "pruning": pruning,
                            "blobs": blobs,
                            "chains": chains,
                        }))
                        .unwrap()
                    );
                }
                Format::Table => {
                    println!("blocks:");
                    for (k, b) in tree.blocks.iter().enumerate() {
                        let tag = if tree.is_bridge(k) { " (bridge)" } else { "" };
                        println!("  {:?}{tag}", b);
                    }
                    println!("cutpoints: {:?}", tree.cutpoints);
                    println!("pruning({i},{j}): {:?}", pruning);
                    for b in &bc.blobs {
                        println!(
                            "blob {:?} entry {} exit {}{}",
                            b.vertices,
                            b.entry,
                            b.exit,
                            if b.is_degenerate() { " (degenerate)" } else { "" }
                        );
                    }
                    for c in &bc.chains {
                        println!("chain {:?} weights {:?}", c.vertices, c.weights);
                    }
                }
            }
            Ok(())
        }
        Command::Gen {
            n,
            seed,
            density,
            wmin,
            wmax,
        } => {
            let g = WeightedGraph::random_instance(seed, n, density, (wmin, wmax))?;
            println!("{}", serde_json::to_string_pretty(&g.to_json()).unwrap());
            Ok(())
        }
        Command::Report { common } => {
            let cfg = common.config();
            cfg.validate()?;
            let rep = report::worked_examples(&cfg);
            match common.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&rep).unwrap()),
                Format::Table => report::print_table(&rep),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
