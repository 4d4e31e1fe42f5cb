//! Command-line front end: generate base graphs, build densified complexes
//! and their walk chains, run the verification ledger, and emit mixing
//! curves. One verb per pipeline stage.
//!
//! Exit codes: 0 = success / all required bounds pass, 2 = a required bound
//! failed, 3 = invalid input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hdxlab_core::io;
use hdxlab_core::walks::verify::{build_chains, mixing_summary, verify_all, VerifyConfig};
use hdxlab_core::{
    graph, BoundReport, DensifiedComplex64, SimplicialComplex64, WeightedGraph64,
};

#[derive(Parser)]
#[command(name = "hdxlab", version, about = "Densified-complex walk laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a triangle-free regular graph and write it as JSON.
    GenGraph(GenGraphArgs),
    /// Build the densified complex and its walk chains, writing JSON dumps.
    Build(InstanceArgs),
    /// Print the spectral summary of a graph.
    Spectrum(GraphSource),
    /// Run the full verification ledger for one instance.
    Verify(VerifyArgs),
    /// Emit the exact/sampled TV curve of the down-up walk as CSV.
    Mix(MixArgs),
    /// Pretty-print a previously written verification report.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenGraphArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct GraphSource {
    /// Load the base graph from a JSON file.
    #[arg(long, conflicts_with = "gen")]
    graph: Option<PathBuf>,
    /// Generate the base graph: `n,t,seed`.
    #[arg(long, value_name = "N,T,SEED", default_value = "5,2,1")]
    gen: String,
}

#[derive(Args)]
struct InstanceArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Vertex count of the complete base complex.
    #[arg(long, default_value_t = 4)]
    s: usize,
    /// Dimension of the base complex.
    #[arg(long = "H", default_value_t = 2)]
    h: usize,
    /// Walk level.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Spectral comparison tolerance.
    #[arg(long = "tol-spec", default_value_t = 1e-9)]
    tol_spec: f64,
    /// Stochasticity/balance residual tolerance.
    #[arg(long = "tol-balance", default_value_t = 1e-12)]
    tol_balance: f64,
    /// Epsilon for the mixing-time entries.
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
}

#[derive(Args)]
struct MixArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    /// Curve horizon; defaults to the measured-gap mixing bound.
    #[arg(long = "t-max")]
    t_max: Option<usize>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Index of the start state (point mass); worst case when omitted.
    #[arg(long)]
    start: Option<usize>,
}

#[derive(Args)]
struct ReportArgs {
    /// Report JSON file to print.
    #[arg(long = "in")]
    input: PathBuf,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("HDXLAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::GenGraph(args) => gen_graph(args),
        Command::Build(args) => build(args),
        Command::Spectrum(args) => spectrum(args),
        Command::Verify(args) => verify(args),
        Command::Mix(args) => mix(args),
        Command::Report(args) => report(args),
    }
}

fn parse_gen(spec: &str) -> Result<(usize, usize, u64), String> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("--gen expects n,t,seed (got {spec:?})"));
    }
    let n = parts[0].trim().parse().map_err(|e| format!("bad n: {e}"))?;
    let t = parts[1].trim().parse().map_err(|e| format!("bad t: {e}"))?;
    let seed = parts[2].trim().parse().map_err(|e| format!("bad seed: {e}"))?;
    Ok((n, t, seed))
}

fn load_graph(source: &GraphSource) -> Result<WeightedGraph64, Box<dyn std::error::Error>> {
    if let Some(path) = &source.graph {
        let text = fs::read_to_string(path)?;
        return Ok(io::graph_from_json(&text)?);
    }
    let (n, t, seed) = parse_gen(&source.gen)?;
    Ok(graph::random_regular_triangle_free(n, t, seed)?)
}

fn build_instance(args: &InstanceArgs) -> Result<(DensifiedComplex64, usize), Box<dyn std::error::Error>> {
    if args.s < args.h + 1 {
        return Err(format!("need s >= H+1 (got s={}, H={})", args.s, args.h).into());
    }
    if args.k >= args.h {
        return Err(format!("need k < H (got k={}, H={})", args.k, args.h).into());
    }
    if args.k == 0 {
        return Err("need k >= 1".into());
    }
    let g = load_graph(&args.source)?;
    let b = SimplicialComplex64::complete(args.s, args.h)?;
    Ok((DensifiedComplex64::build(g, b)?, args.k))
}

fn gen_graph(args: GenGraphArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let g = graph::random_regular_triangle_free::<f64>(args.n, args.t, args.seed)?;
    let spec = g.spectrum()?;
    let girth = g.girth().map_or("none".to_string(), |x| x.to_string());
    eprintln!(
        "generated {}-vertex {}-regular graph: girth {girth}, two-sided gap {:.6}",
        args.n, args.t, spec.two_sided_gap
    );
    let text = io::graph_to_json(&g);
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn build(args: InstanceArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let (q, k) = build_instance(&args)?;
    fs::create_dir_all(&args.out)?;
    let chains = build_chains(&q, k)?;
    write_out(&args.out, "complex.json", &io::complex_to_json(q.complex()))?;
    write_out(&args.out, "chain-downup.json", &io::chain_to_json(&chains.qw.chain))?;
    write_out(&args.out, "chain-split.json", &io::chain_to_json(&chains.split.chain))?;
    eprintln!(
        "built complex with {} faces; down-up chain {} states, split chain {} states",
        q.complex().face_count(),
        chains.qw.chain.len(),
        chains.split.chain.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn spectrum(source: GraphSource) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let g = load_graph(&source)?;
    let spec = g.spectrum()?;
    println!("{}", serde_json::to_string_pretty(&spec)?);
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let (q, k) = build_instance(&args.instance)?;
    let cfg = VerifyConfig {
        tol_spectral: args.tol_spec,
        tol_balance: args.tol_balance,
        eps: args.eps,
        ..VerifyConfig::default()
    };
    let report = verify_all(&q, k, &cfg)?;
    let json = report.to_json();
    fs::create_dir_all(&args.instance.out)?;
    write_out(&args.instance.out, "report.json", &json)?;
    print_report(&report);
    if report.all_required_pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn mix(args: MixArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let (q, k) = build_instance(&args.instance)?;
    let summary = mixing_summary(&q, k, args.eps);
    let (chain, headers) = match summary {
        Ok(s) => {
            let headers = vec![
                format!("eps = {}", args.eps),
                format!("mixing_time_gap_bound = {:.3}", s.gap_bound),
                format!("mixing_time_headline_bound = {:.3}", s.headline_bound),
            ];
            (s.chain, headers)
        }
        Err(hdxlab_core::Error::NonMixing) => {
            // Degenerate gap: still emit the curve, minus the bound lines.
            let chains = build_chains(&q, k)?;
            (chains.qw.chain, vec!["warning: non-positive spectral gap".into()])
        }
        Err(e) => return Err(e.into()),
    };
    let n = chain.len();
    let start = match args.start {
        Some(i) if i >= n => return Err(format!("start {i} out of range ({n} states)").into()),
        Some(i) => i,
        None => worst_start(&chain),
    };
    let mut nu = vec![0.0; n];
    nu[start] = 1.0;
    let t_max = args.t_max.unwrap_or_else(|| {
        headers
            .iter()
            .find_map(|h| h.strip_prefix("mixing_time_gap_bound = "))
            .and_then(|v| v.parse::<f64>().ok())
            .map_or(100, |b| b.ceil() as usize)
    });
    let curve = chain.simulate_tv(&nu, t_max, args.trials, args.seed)?;
    let mut headers = headers;
    headers.push(format!("start_state = {start}"));
    let csv = io::tv_curve_to_csv(&curve, &headers);
    fs::create_dir_all(&args.instance.out)?;
    write_out(&args.instance.out, "mix.csv", &csv)?;
    eprintln!("wrote mix.csv ({} rows)", curve.len());
    Ok(ExitCode::SUCCESS)
}

/// Start state with the slowest one-step L1 contraction: the point mass
/// with the smallest stationary probability.
fn worst_start(chain: &hdxlab_core::MarkovChain64) -> usize {
    chain
        .stationary()
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0)
}

fn report(args: ReportArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let text = fs::read_to_string(&args.input)?;
    let report: BoundReport = serde_json::from_str(&text)?;
    print_report(&report);
    if report.all_required_pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn print_report(report: &BoundReport) {
    let rel = |r| match r {
        hdxlab_core::Relation::Ge => ">=",
        hdxlab_core::Relation::Le => "<=",
        hdxlab_core::Relation::Eq => "==",
    };
    println!(
        "{:<44} {:>14} {:>3} {:>14} {:>10} status",
        "bound", "lhs", "", "rhs", "slack"
    );
    for e in &report.entries {
        let status = match (e.pass, e.required) {
            (true, true) => "pass",
            (false, true) => "FAIL",
            (true, false) => "pass (info)",
            (false, false) => "noted (info)",
        };
        println!(
            "{:<44} {:>14.6e} {:>3} {:>14.6e} {:>10.2e} {}",
            e.id,
            e.lhs,
            rel(e.relation),
            e.rhs,
            e.slack,
            status
        );
    }
    let required = report.entries.iter().filter(|e| e.required).count();
    let passed = report.entries.iter().filter(|e| e.required && e.pass).count();
    println!("required bounds: {passed}/{required} pass");
    if !report.all_required_pass() {
        for e in report.failed_required() {
            println!("FAILED: {} (lhs {:.6e}, rhs {:.6e})", e.id, e.lhs, e.rhs);
        }
    }
}

fn write_out(dir: &Path, name: &str, text: &str) -> std::io::Result<()> {
    fs::write(dir.join(name), text)
}
