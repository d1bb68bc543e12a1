//! `diversity`: score, rank, audit and symmetry-analyze diversity measures
//! on finite pseudometric spaces.
//!
//! Exit codes: 0 success, 1 input error, 2 assertion failure (an audit
//! found unexpected violations, or a documented violation failed to show).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use diversity_core::audit::{
    probe_continuity, run_audit, theorem2_demo, violation_expected, AuditConfig, AxiomId,
};
use diversity_core::io;
use diversity_core::measures::{rank, score, MeasureKind, RankedEntry, ScoreInput};
use diversity_core::metric::DistanceMatrix;
use diversity_core::random::Ensemble;
use diversity_core::symmetry::edge_orbits;
use diversity_core::tree::WeightedTree;
use diversity_core::Error;

#[derive(Parser)]
#[command(name = "diversity", version, about = "Diversity measures on finite pseudometric spaces")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for all randomized operations.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Size cap for the merging recursion and the automorphism search.
    #[arg(long, global = true, default_value_t = 8)]
    max_n: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Score one subset of a distance matrix, point cloud, or tree.
    Score {
        /// Input file: .tree (edge list), or CSV (matrix, or point cloud
        /// when the header is "metric,<kind>").
        file: PathBuf,
        #[arg(long)]
        measure: String,
        /// Comma-separated labels; defaults to every point for matrix input.
        #[arg(long)]
        subset: Option<String>,
        /// Accept decimal entries (parsed exactly, flagged inexact paths).
        #[arg(long)]
        allow_decimal: bool,
    },
    /// Score several subsets and print them in descending order.
    Rank {
        file: PathBuf,
        #[arg(long)]
        measure: String,
        /// Semicolon-separated subsets of comma-separated labels,
        /// e.g. "u,x,y;u,w,y".
        #[arg(long)]
        subsets: String,
        #[arg(long)]
        allow_decimal: bool,
    },
    /// Property-audit a measure against the axioms.
    Audit {
        #[arg(long)]
        measure: String,
        /// Comma-separated axiom ids from {1,2,4,5,5a,5b}, or "all".
        #[arg(long, default_value = "all")]
        axioms: String,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        /// Random-metric ensemble: euclidean-sample or shortest-path-repair.
        #[arg(long, default_value = "shortest-path-repair")]
        ensemble: String,
        /// Also write the JSON report to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append the empirical continuity table (evidence, never pass/fail).
        #[arg(long)]
        continuity: bool,
    },
    /// Edge-orbit analysis or orbit averaging of a partial graph.
    Symmetry {
        /// Partial-graph JSON file.
        graph: PathBuf,
        /// Print the labeled-edge orbits.
        #[arg(long, conflicts_with = "average")]
        orbits: bool,
        /// Average the orbits against this source matrix CSV.
        #[arg(long)]
        average: Option<PathBuf>,
        #[arg(long)]
        allow_decimal: bool,
    },
    /// Demonstrations.
    Demo {
        /// The strong-equidistance inconsistency construction.
        #[arg(long)]
        theorem2: bool,
        #[arg(long, default_value = "d-merging")]
        measure: String,
        /// Search bound for the minimal k.
        #[arg(long, default_value_t = 100)]
        k_bound: usize,
    },
}

/// Input error (exit 1) vs. failed audit assertion (exit 2).
enum Failure {
    Input(String),
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Assertion(msg)) => {
            eprintln!("assertion failure: {msg}");
            ExitCode::from(2)
        }
    }
}

enum Input {
    Matrix(DistanceMatrix),
    Tree(WeightedTree),
}

fn read_input(path: &Path, allow_decimal: bool) -> Result<Input, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if path.extension().and_then(|e| e.to_str()) == Some("tree") {
        return Ok(Input::Tree(io::parse_tree(&text)?));
    }
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let matrix = if first.starts_with("metric,") {
        io::parse_point_cloud_csv(&text)?.to_distance_matrix()?
    } else {
        io::parse_matrix_csv(&text, allow_decimal)?
    };
    let check = matrix.validate();
    if !check.ok() {
        let mut msg = format!("{} is not a valid pseudometric:", path.display());
        for v in &check.violations {
            let names: Vec<&str> = v
                .witness
                .iter()
                .map(|&i| matrix.labels()[i].as_str())
                .collect();
            let _ = write!(msg, "\n  {:?} witness {:?} slack {}", v.kind, names, v.slack);
        }
        return Err(Failure::Input(msg));
    }
    Ok(Input::Matrix(matrix))
}

fn parse_subset(spec: &str) -> Vec<String> {
    spec.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn print_score_text(entry: &io::ScoreRecord) {
    let value = if entry.value.den == "1" {
        entry.value.num.clone()
    } else {
        format!("{}/{}", entry.value.num, entry.value.den)
    };
    let exactness = if entry.exact { "" } else { " (inexact)" };
    println!(
        "{}({}) = {}{}",
        entry.measure,
        entry.subset.join(","),
        value,
        exactness
    );
    for note in &entry.notes {
        println!("  note: {note}");
    }
}

fn cmd_score(
    cli: &Cli,
    file: &Path,
    measure: &str,
    subset: &Option<String>,
    allow_decimal: bool,
) -> Result<(), Failure> {
    let kind: MeasureKind = measure.parse()?;
    let input = read_input(file, allow_decimal)?;
    let subset: Vec<String> = match (subset, &input) {
        (Some(spec), _) => parse_subset(spec),
        (None, Input::Matrix(m)) => m.labels().to_vec(),
        (None, Input::Tree(_)) => {
            return Err(Failure::Input(
                "tree input needs an explicit --subset".to_string(),
            ))
        }
    };
    let refs: Vec<&str> = subset.iter().map(String::as_str).collect();
    let score_input = match &input {
        Input::Matrix(m) => ScoreInput::Matrix(m),
        Input::Tree(t) => ScoreInput::Tree(t),
    };
    let result = score(score_input, &refs, &kind, cli.max_n)?;
    let record = io::ScoreRecord::from_score(&result, subset);
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&record).unwrap()),
        Format::Text => print_score_text(&record),
    }
    Ok(())
}

fn cmd_rank(
    cli: &Cli,
    file: &Path,
    measure: &str,
    subsets: &str,
    allow_decimal: bool,
) -> Result<(), Failure> {
    let kind: MeasureKind = measure.parse()?;
    let input = read_input(file, allow_decimal)?;
    let subsets: Vec<Vec<String>> = subsets
        .split(';')
        .map(parse_subset)
        .filter(|s| !s.is_empty())
        .collect();
    if subsets.is_empty() {
        return Err(Failure::Input("no subsets given".to_string()));
    }
    let score_input = match &input {
        Input::Matrix(m) => ScoreInput::Matrix(m),
        Input::Tree(t) => ScoreInput::Tree(t),
    };
    let ranked: Vec<RankedEntry> = rank(score_input, &subsets, &kind, cli.max_n)?;
    match cli.format {
        Format::Json => {
            let records: Vec<serde_json::Value> = ranked
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "rank": e.rank,
                        "tied": e.tied,
                        "score": io::ScoreRecord::from_score(&e.score, e.subset.clone()),
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&records).unwrap());
        }
        Format::Text => {
            for e in &ranked {
                let tie = if e.tied { " (tie)" } else { "" };
                println!(
                    "{:>3}.{} {{{}}} = {}",
                    e.rank,
                    tie,
                    e.subset.join(","),
                    e.score.value
                );
            }
        }
    }
    Ok(())
}

fn parse_axioms(spec: &str) -> Result<Vec<AxiomId>, Error> {
    if spec == "all" {
        return Ok(AxiomId::ALL.to_vec());
    }
    spec.split(',')
        .map(|s| s.trim().parse::<AxiomId>())
        .collect()
}

fn cmd_audit(
    cli: &Cli,
    measure: &str,
    axioms: &str,
    instances: usize,
    ensemble: &str,
    out: &Option<PathBuf>,
    continuity: bool,
) -> Result<(), Failure> {
    let kind: MeasureKind = measure.parse()?;
    let axioms = parse_axioms(axioms)?;
    let ensemble: Ensemble = ensemble.parse()?;
    let cfg = AuditConfig {
        seed: cli.seed,
        instances,
        ensemble,
        merging_limit: cli.max_n,
        ..AuditConfig::default()
    };
    let report = run_audit(&kind, &axioms, &cfg);
    let json = serde_json::to_string_pretty(&report).unwrap();
    if let Some(path) = out {
        std::fs::write(path, &json).map_err(Error::from)?;
    }
    match cli.format {
        Format::Json => println!("{json}"),
        Format::Text => print!("{}", report.summary()),
    }
    if continuity {
        let probe_matrix =
            diversity_core::random::random_metric(4.min(cli.max_n), ensemble, cli.seed)?;
        let table = probe_continuity(&kind, &probe_matrix, &cfg)?;
        match cli.format {
            Format::Json => println!("{}", serde_json::to_string_pretty(&table).unwrap()),
            Format::Text => {
                println!("continuity evidence (max |score change| per perturbation bound):");
                for row in &table.rows {
                    println!(
                        "  delta {}: {} samples, max change {}",
                        row.delta, row.samples, row.max_abs_delta_score
                    );
                }
            }
        }
    }
    // expected-violation mode: for measure/axiom pairs with documented
    // counterexamples the audit must find one; everywhere else it must not.
    let mut failures = Vec::new();
    for section in &report.sections {
        let expected = violation_expected(&kind, section.axiom);
        if expected && section.violations.is_empty() {
            failures.push(format!(
                "axiom {}: documented violation for {} was not found",
                section.axiom, kind
            ));
        }
        if !expected && !section.violations.is_empty() {
            failures.push(format!(
                "axiom {}: {} unexpected violation(s) for {}",
                section.axiom,
                section.violations.len(),
                kind
            ));
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Assertion(failures.join("; ")))
    }
}

fn cmd_symmetry(
    cli: &Cli,
    graph: &Path,
    orbits: bool,
    average: &Option<PathBuf>,
    allow_decimal: bool,
) -> Result<(), Failure> {
    let text = std::fs::read_to_string(graph)
        .map_err(|e| Failure::Input(format!("{}: {e}", graph.display())))?;
    let g = io::parse_partial_graph_json(&text)?;
    match (orbits, average) {
        (true, None) => {
            let partition = edge_orbits(&g, cli.max_n.max(g.len()))?;
            match cli.format {
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&partition).unwrap())
                }
                Format::Text => {
                    println!("automorphism group size: {}", partition.group_size);
                    for (i, orbit) in partition.orbits.iter().enumerate() {
                        let edges: Vec<String> = orbit
                            .iter()
                            .map(|(u, v, l)| format!("{l}=({},{})", u + 1, v + 1))
                            .collect();
                        println!("orbit {}: {}", i + 1, edges.join(" "));
                    }
                }
            }
            Ok(())
        }
        (false, Some(source_path)) => {
            let source = match read_input(source_path, allow_decimal)? {
                Input::Matrix(m) => m,
                Input::Tree(_) => {
                    return Err(Failure::Input(
                        "orbit averaging needs a matrix source, not a tree".to_string(),
                    ))
                }
            };
            let averaged =
                diversity_core::symmetry::average_orbits(&source, &g, cli.max_n.max(g.len()))?;
            match cli.format {
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&averaged).unwrap())
                }
                Format::Text => print!("{}", io::matrix_to_csv(&averaged)),
            }
            Ok(())
        }
        _ => Err(Failure::Input(
            "pass exactly one of --orbits or --average <source.csv>".to_string(),
        )),
    }
}

fn cmd_demo(cli: &Cli, theorem2: bool, measure: &str, k_bound: usize) -> Result<(), Failure> {
    if !theorem2 {
        return Err(Failure::Input(
            "the only demo currently available is --theorem2".to_string(),
        ));
    }
    let kind: MeasureKind = measure.parse()?;
    let cfg = AuditConfig {
        seed: cli.seed,
        merging_limit: cli.max_n,
        ..AuditConfig::default()
    };
    let demo = theorem2_demo(&kind, &cfg, k_bound)?;
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&demo).unwrap()),
        Format::Text => {
            println!("measure: {}", demo.measure);
            println!("D(S) = {} (S has side lengths 1, 1, 2)", demo.d_s);
            println!(
                "minimal k with D(S) > D(U_k): k = {}; D(U_{}) = {}",
                demo.minimal_k, demo.minimal_k, demo.d_u_k
            );
            println!(
                "after padding both sets with {} duplicate point(s): D(S') = {}, D(U') = {}",
                demo.padding_copies, demo.d_s_padded, demo.d_u_k_padded
            );
            println!("{}", demo.contradiction);
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Score {
            file,
            measure,
            subset,
            allow_decimal,
        } => cmd_score(cli, file, measure, subset, *allow_decimal),
        Command::Rank {
            file,
            measure,
            subsets,
            allow_decimal,
        } => cmd_rank(cli, file, measure, subsets, *allow_decimal),
        Command::Audit {
            measure,
            axioms,
            instances,
            ensemble,
            out,
            continuity,
        } => cmd_audit(cli, measure, axioms, *instances, ensemble, out, *continuity),
        Command::Symmetry {
            graph,
            orbits,
            average,
            allow_decimal,
        } => cmd_symmetry(cli, graph, *orbits, average, *allow_decimal),
        Command::Demo {
            theorem2,
            measure,
            k_bound,
        } => cmd_demo(cli, *theorem2, measure, *k_bound),
    }
}
