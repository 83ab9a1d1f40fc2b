use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use sparsecount::compile::{build_counting_dag, CompileOptions};
use sparsecount::dag::{CountingDag, Strategy};
use sparsecount::engine::{count_induced, CountReport, EngineConfig, Mode, RadiusPolicy};
use sparsecount::io::{read_edge_list, read_ordering, write_ordering, NamedGraph};
use sparsecount::oracle::{oracle_count_induced, OracleLimits};
use sparsecount::order::{degeneracy_order, order_stats, wreach_greedy_order};
use sparsecount::{catalog, Error, Graph, LinearGraph};

#[derive(Parser, Debug)]
#[command(name = "sparsecount", version, about = "Induced subgraph counting on sparse graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a pattern into a counting dag
    Compile {
        /// Pattern name (P4, C5, K{2,3}, bull, co-P4, ...) or edge-list file
        pattern: String,
        /// Write the dag as JSON to this file
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "first-leaf")]
        strategy: Strategy,
        /// Largest accepted pattern size
        #[arg(long, default_value_t = sparsecount::compile::DEFAULT_SIZE_CAP)]
        size_cap: usize,
    },
    /// Compute a vertex ordering of a host graph
    Order {
        graph: PathBuf,
        #[command(flatten)]
        ordering: OrderArgs,
        /// Radius for the wreach heuristic and for --stats
        #[arg(short, long, default_value_t = 2)]
        r: usize,
        /// Write the ordering here instead of stdout
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Print max/mean sizes of the weak and strong reachable sets
        #[arg(long)]
        stats: bool,
    },
    /// Count induced copies of a pattern
    Count(CountArgs),
    /// Brute-force count for small hosts
    Oracle {
        graph: PathBuf,
        pattern: String,
        /// List the vertex sets of all copies
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = OracleLimits::default().max_host)]
        max_host: usize,
    },
    /// Size and reachability statistics of a host under an ordering
    Stats {
        graph: PathBuf,
        #[command(flatten)]
        ordering: OrderArgs,
        #[arg(short, long, default_value_t = 2)]
        r: usize,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Method {
    Degeneracy,
    Wreach,
}

#[derive(Args, Debug)]
struct OrderArgs {
    #[arg(long, value_enum, default_value = "degeneracy")]
    method: Method,
    /// Read the ordering from a file (one vertex token per line)
    #[arg(long, conflicts_with = "method")]
    order: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CountArgs {
    graph: PathBuf,
    /// Pattern name or edge-list file
    #[arg(short, long, required_unless_present = "dag")]
    pattern: Option<String>,
    /// Precompiled counting dag
    #[arg(long)]
    dag: Option<PathBuf>,
    #[arg(long, default_value = "weak")]
    mode: Mode,
    #[command(flatten)]
    ordering: OrderArgs,
    /// full, computed, or a number
    #[arg(long, default_value = "full")]
    radius: String,
    /// Weak mode: nested search from anchor vertices
    #[arg(long)]
    anchored: bool,
    /// Accept a fixed radius below the dag's requirement
    #[arg(long)]
    unchecked_radius: bool,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value = "first-leaf")]
    strategy: Strategy,
    /// Use arbitrary-precision counters
    #[arg(long)]
    big: bool,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn load_pattern(spec: &str) -> CliResult<Graph> {
    let path = Path::new(spec);
    if path.is_file() {
        return Ok(read_edge_list(path)?.graph);
    }
    Ok(catalog::lookup(spec)?)
}

fn ordering(g: &NamedGraph, args: &OrderArgs, r: usize) -> CliResult<LinearGraph> {
    if let Some(path) = &args.order {
        return Ok(read_ordering(path, g)?);
    }
    Ok(match args.method {
        Method::Degeneracy => degeneracy_order(&g.graph),
        Method::Wreach => wreach_greedy_order(&g.graph, r),
    })
}

fn write_out(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Input(format!("{}: {e}", p.display())).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn radius_policy(s: &str) -> CliResult<RadiusPolicy> {
    match s {
        "full" => Ok(RadiusPolicy::Full),
        "computed" => Ok(RadiusPolicy::Computed),
        n => match n.parse::<usize>() {
            Ok(r) if r >= 1 => Ok(RadiusPolicy::Fixed(r)),
            _ => Err(Failure::Usage(format!("invalid radius {s:?}"))),
        },
    }
}

fn print_stats(lg: &LinearGraph, r: usize) {
    let s = order_stats(lg, r);
    println!("max |W^{r}| = {}", s.max_weak);
    println!("mean |W^{r}| = {:.3}", s.mean_weak);
    println!("max |S^{r}| = {}", s.max_strong);
    println!("mean |S^{r}| = {:.3}", s.mean_strong);
}

fn report<T: std::fmt::Display>(r: &CountReport<T>) {
    println!("{}", r.total);
    eprintln!("radius: {}", r.radius);
    eprintln!("reach sets: max {} mean {:.3}", r.max_reach, r.mean_reach);
    eprintln!(
        "time: reach {:?}, leaves {:?}, propagate {:?}",
        r.timings.reach, r.timings.leaves, r.timings.propagate
    );
    for (id, mu, t) in &r.source_totals {
        info!("source {id} (x{mu}): {t}");
    }
}

fn count(args: CountArgs) -> CliResult<()> {
    let host = read_edge_list(&args.graph)?;
    let dag = match (&args.dag, &args.pattern) {
        (Some(path), pattern) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
            let dag = CountingDag::from_json(&text)?;
            if let Some(p) = pattern {
                if !load_pattern(p)?.is_isomorphic(&dag.pattern) {
                    return Err(Error::Input(format!("{} was not compiled from pattern {p}", path.display())).into());
                }
            }
            dag
        }
        (None, Some(p)) => {
            let opts = CompileOptions {
                strategy: args.strategy,
                ..Default::default()
            };
            build_counting_dag(&load_pattern(p)?, &opts)?
        }
        (None, None) => unreachable!("clap requires one of them"),
    };
    let lg = ordering(&host, &args.ordering, dag.pattern.n())?;
    let cfg = EngineConfig {
        mode: args.mode,
        radius: radius_policy(&args.radius)?,
        threads: args.threads,
        anchored: args.anchored,
        unchecked_radius: args.unchecked_radius,
    };
    if args.big {
        report(&count_induced::<sparsecount::BigInt>(&lg, &dag, &cfg)?);
    } else {
        report(&count_induced::<i128>(&lg, &dag, &cfg)?);
    }
    Ok(())
}

fn run(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Compile {
            pattern,
            out,
            strategy,
            size_cap,
        } => {
            let h = load_pattern(&pattern)?;
            let mut dag = build_counting_dag(&h, &CompileOptions { strategy, size_cap })?;
            dag.name = Some(pattern);
            if let Some(path) = &out {
                write_out(&Some(path.clone()), &dag.to_json())?;
            }
            println!("{}", dag.stats());
        }
        Command::Order {
            graph,
            ordering: args,
            r,
            out,
            stats,
        } => {
            if r == 0 {
                return Err(Failure::Usage("radius must be at least 1".into()));
            }
            let g = read_edge_list(&graph)?;
            let lg = ordering(&g, &args, r)?;
            write_out(&out, &write_ordering(&lg, &g.names))?;
            if stats {
                print_stats(&lg, r);
            }
        }
        Command::Count(args) => count(args)?,
        Command::Oracle {
            graph,
            pattern,
            witness,
            max_host,
        } => {
            let g = read_edge_list(&graph)?;
            let h = load_pattern(&pattern)?;
            let limits = OracleLimits {
                max_host,
                ..Default::default()
            };
            let res = oracle_count_induced(&g.graph, &h, witness, limits)?;
            println!("{}", res.count);
            for set in res.witnesses.unwrap_or_default() {
                let names: Vec<&str> = set.iter().map(|&v| g.names[v].as_str()).collect();
                println!("{}", names.join(" "));
            }
        }
        Command::Stats { graph, ordering: args, r } => {
            if r == 0 {
                return Err(Failure::Usage("radius must be at least 1".into()));
            }
            let g = read_edge_list(&graph)?;
            let lg = ordering(&g, &args, r)?;
            println!("vertices = {}", g.graph.n());
            println!("edges = {}", g.graph.m());
            let max_left = (0..lg.n()).map(|v| lg.left_neighbors(v).count()).max().unwrap_or(0);
            println!("max left degree = {max_left}");
            print_stats(&lg, r);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            let internal = matches!(e, Error::Invariant(_) | Error::Integrality(_) | Error::Overflow(_));
            ExitCode::from(if internal { 3 } else { 2 })
        }
    }
}
