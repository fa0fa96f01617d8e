use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use relsep::crosscheck::{self, CrosscheckConfig, CrosscheckSummary};
use relsep::query::{format_matrix, matrix_rows, relation_by_name, run_query, Method, QueryReport};
use relsep::{ConditionalRelations, Graph, UndirectedPath, VertexSet};

const SEPARATED: u8 = 0;
const CONNECTED: u8 = 1;
const FAILURE: u8 = 2;
const DISAGREE: u8 = 3;

#[derive(Parser)]
#[command(name = "relsep", version, about = "d-separation on directed graphs with cycles and loops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether X and Y are d-separated given a set of vertices
    Query {
        graph: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Comma-separated conditioning set; "" is the empty set
        #[arg(long, default_value = "")]
        given: String,
        /// Comma-separated subset of relational, reachability, enumeration
        #[arg(long, default_value = "relational,reachability")]
        methods: String,
        /// Length bound for enumeration (default 2|V|+2)
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Print one of the derived relations as a 0/1 matrix
    Relations {
        graph: PathBuf,
        #[arg(long, default_value = "")]
        given: String,
        #[arg(long)]
        which: String,
        #[arg(long)]
        json: bool,
    },
    /// Compare all deciders on random graphs
    Crosscheck {
        #[arg(long, default_value_t = 5)]
        vertices: usize,
        #[arg(long, default_value_t = 0.3)]
        edge_prob: f64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also sweep every graph and conditioning set on up to M vertices (M <= 4)
        #[arg(long)]
        max_vertices_exhaustive: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Print an active path between X and Y, or `separated`
    Witness {
        graph: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "")]
        given: String,
    },
}

type Result<T> = std::result::Result<T, Box<dyn Error>>;

fn load(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Graph::parse_edge_list(&text).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn csv(list: &str) -> impl Iterator<Item = &str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn given_set(graph: &Graph, list: &str) -> Result<VertexSet> {
    Ok(graph.vertex_set(csv(list))?)
}

fn braces(names: &[String]) -> String {
    format!("{{{}}}", names.join(", "))
}

fn word(separated: bool) -> &'static str {
    if separated {
        "separated"
    } else {
        "connected"
    }
}

fn print_report(graph: &Graph, report: &QueryReport) -> Result<()> {
    println!("{} vs {} given {}", report.x, report.y, braces(&report.given));
    let width = report.verdicts.keys().map(String::len).max().unwrap_or(0);
    for (method, &separated) in &report.verdicts {
        println!("  {method:width$}  {}", word(separated));
    }
    match report.verdict() {
        Some(separated) => println!("verdict: {}", word(separated)),
        None => println!("verdict: methods disagree"),
    }
    if let Some(records) = &report.witness {
        let path = UndirectedPath::from_records(graph, records)?;
        println!("witness: {}", path.display(graph));
    }
    Ok(())
}

fn print_summary(summary: &CrosscheckSummary) {
    println!("seed: {}", summary.seed);
    println!("trials: {}", summary.trials);
    println!("pairs checked: {}", summary.pairs_checked);
    println!("moral checks: {}", summary.moral_checked);
    if let Some(ex) = &summary.exhaustive {
        println!(
            "exhaustive (up to {} vertices): {} graphs, {} pairs, {} moral checks, {} disagreements",
            ex.max_vertices, ex.graphs, ex.pairs_checked, ex.moral_checked, ex.disagreements
        );
    }
    println!("disagreements: {}", summary.disagreements);
    if let Some(cx) = &summary.first_counterexample {
        println!("first counterexample:");
        for line in cx.graph.lines() {
            println!("  {line}");
        }
        println!("  given {}", braces(&cx.given));
        if let (Some(x), Some(y)) = (&cx.x, &cx.y) {
            println!("  pair {x}, {y}");
        }
        if let (Some(b), Some(c)) = (&cx.sources, &cx.targets) {
            println!("  sets {} and {}", braces(b), braces(c));
        }
        for (method, &separated) in &cx.verdicts {
            println!("  {method}: {}", word(separated));
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Query { graph, x, y, given, methods, max_len, json } => {
            let g = load(&graph)?;
            let (x, y) = (g.vertex(&x)?, g.vertex(&y)?);
            let w = given_set(&g, &given)?;
            let mut chosen = csv(&methods).map(str::parse).collect::<std::result::Result<Vec<Method>, _>>()?;
            chosen.sort();
            chosen.dedup();
            if chosen.is_empty() {
                return Err("--methods names no method".into());
            }
            let report = run_query(&g, x, y, &w, &chosen, max_len);
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_report(&g, &report)?;
            }
            Ok(match report.verdict() {
                Some(true) => SEPARATED,
                Some(false) => CONNECTED,
                None => DISAGREE,
            })
        }
        Command::Relations { graph, given, which, json } => {
            let g = load(&graph)?;
            let w = given_set(&g, &given)?;
            let r = relation_by_name(&g, &w, &which)?;
            if json {
                let value = serde_json::json!({
                    "relation": which,
                    "given": g.set_names(&w),
                    "vertices": g.names(),
                    "matrix": matrix_rows(&r),
                });
                println!("{}", serde_json::to_string_pretty(&value)?);
            } else {
                print!("{}", format_matrix(&g, &r));
            }
            Ok(SEPARATED)
        }
        Command::Crosscheck { vertices, edge_prob, trials, seed, max_vertices_exhaustive, json } => {
            let config = CrosscheckConfig {
                vertices,
                edge_prob,
                trials,
                seed,
                max_vertices_exhaustive,
                ..CrosscheckConfig::default()
            };
            let summary = crosscheck::run(&config)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                print_summary(&summary);
            }
            Ok(if summary.disagreements == 0 { SEPARATED } else { DISAGREE })
        }
        Command::Witness { graph, x, y, given } => {
            let g = load(&graph)?;
            let (x, y) = (g.vertex(&x)?, g.vertex(&y)?);
            let w = given_set(&g, &given)?;
            let rel = ConditionalRelations::new(&g, &w)?;
            match rel.witness(&g, x, y) {
                None => {
                    println!("separated");
                    Ok(SEPARATED)
                }
                Some(path) => {
                    if !path.is_active(&g, &w)? || path.endpoints() != (x, y) {
                        eprintln!("error: constructed path {} is not an active path", path.display(&g));
                        return Ok(DISAGREE);
                    }
                    println!("{}", path.display(&g));
                    Ok(CONNECTED)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(FAILURE)
        }
    }
}
