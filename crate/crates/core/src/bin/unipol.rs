use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use unipol::baselines::{generate, GeneratorFamily};
use unipol::bench::{run_bench, write_csv, Algorithm, BenchConfig, DEFAULT_LENGTHS};
use unipol::io::{read_sequence_file, write_sequence, write_sequence_file, RunRecord};
use unipol::metrics::{autocorrelation, merit_factor};
use unipol::solver::{PhaseRange, SolverConfig};
use unipol::Error;

#[derive(Parser)]
#[command(name = "unipol", version, about = "Design unimodular sequences with low autocorrelation sidelobes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver and write its run record and final sequence.
    Design(DesignArgs),
    /// Report ISL, PSL, merit factor and sidelobe levels of a sequence file.
    Metrics(MetricsArgs),
    /// Write a classical sequence (barker, frank, golomb, chu, p4).
    Generate(GenerateArgs),
    /// Seeded Monte Carlo benchmark, one CSV row per trial.
    Bench(BenchArgs),
}

#[derive(Args)]
struct DesignArgs {
    #[arg(long, default_value = "unipol", value_parser = parse_algo)]
    algo: Algorithm,
    #[arg(short = 'N', long = "length", value_parser = parse_length)]
    n: usize,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    iters: u64,
    /// Stop after 3 consecutive relative ISL decreases below this (0 = fixed budget).
    #[arg(long, default_value_t = 0.0, value_parser = parse_tol)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Initial phase range: "full" ([0, 2π)) or "paper" ([0, 1] rad).
    #[arg(long, default_value = "full", value_parser = parse_range)]
    phase_range: PhaseRange,
    /// Use the O(N²) direct surrogate construction instead of transforms.
    #[arg(long)]
    direct: bool,
    /// Start from this sequence file instead of a seeded random start.
    #[arg(long)]
    init: Option<PathBuf>,
    /// Run record (JSON); printed to stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Final sequence table; defaults to `<output stem>.seq.csv` next to the record.
    #[arg(long)]
    sequence: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    input: PathBuf,
    /// Emit JSON instead of the text report.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_parser = parse_family)]
    family: GeneratorFamily,
    #[arg(short = 'N', long = "length", value_parser = parse_length)]
    n: usize,
    /// Sequence table; printed to stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![Algorithm::Unipol, Algorithm::Can], value_parser = parse_algo)]
    algos: Vec<Algorithm>,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_LENGTHS.to_vec(), value_parser = parse_bench_length)]
    lengths: Vec<usize>,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    iters: u64,
    #[arg(long, default_value_t = 0.0, value_parser = parse_tol)]
    tol: f64,
    /// Trial t uses seed `seed + t`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "full", value_parser = parse_range)]
    phase_range: PhaseRange,
    #[arg(long)]
    direct: bool,
    /// CSV path; printed to stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_family(s: &str) -> Result<GeneratorFamily, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<PhaseRange, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_length(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("length must be a positive integer, got {s:?}")),
    }
}

fn parse_bench_length(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 2 => Ok(n),
        _ => Err(format!("benchmark lengths must be integers >= 2, got {s:?}")),
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t >= 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be a finite nonnegative number, got {s:?}")),
    }
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::UnsupportedLength { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn io_at(path: &Path) -> impl Fn(io::Error) -> Failure + '_ {
    move |e| Failure::Runtime(format!("{}: {e}", path.display()))
}

fn sequence_path(args: &DesignArgs) -> Option<PathBuf> {
    if let Some(p) = &args.sequence {
        return Some(p.clone());
    }
    let out = args.output.as_ref()?;
    let stem = out.file_stem()?.to_string_lossy().into_owned();
    Some(out.with_file_name(format!("{stem}.seq.csv")))
}

fn design(args: DesignArgs) -> Result<(), Failure> {
    let cfg = SolverConfig::new(args.n)
        .with_iterations(args.iters as usize)
        .with_tolerance(args.tol)
        .with_seed(args.seed)
        .with_phase_range(args.phase_range)
        .with_fast_path(!args.direct);
    let init = match &args.init {
        Some(path) => Some(read_sequence_file(path).map_err(|e| match e {
            Error::Io(io) => io_at(path)(io),
            other => Failure::Runtime(other.to_string()),
        })?),
        None => None,
    };
    let trace = args.algo.run_from(&cfg, init)?;
    let record = RunRecord::from_trace(args.algo.name(), &trace);

    match &args.output {
        Some(path) => fs::write(path, record.to_json() + "\n").map_err(io_at(path))?,
        None => println!("{}", record.to_json()),
    }
    if let Some(path) = sequence_path(&args) {
        write_sequence_file(&path, &trace.final_sequence).map_err(|e| match e {
            Error::Io(io) => io_at(&path)(io),
            other => other.into(),
        })?;
    }
    eprintln!(
        "{}: N = {}, {} iterations, ISL {:.6e} -> {:.6e} ({:.3} s)",
        args.algo,
        args.n,
        trace.iterations_run,
        trace.initial_isl(),
        trace.final_isl(),
        trace.total_seconds()
    );
    Ok(())
}

fn metrics(args: MetricsArgs) -> Result<(), Failure> {
    let x = read_sequence_file(&args.input).map_err(|e| match e {
        Error::Io(io) => io_at(&args.input)(io),
        Error::Format { .. } => Failure::Runtime(e.to_string()),
        other => other.into(),
    })?;
    let profile = autocorrelation(&x);
    let isl = profile.isl();
    let psl = profile.psl();
    let mf = merit_factor(&x).ok();
    let db = profile.sidelobes_db();

    let stdout = io::stdout();
    let mut out = stdout.lock();
    if args.json {
        let finite = |v: f64| if v.is_finite() { Some(v) } else { None };
        let doc = serde_json::json!({
            "N": x.len(),
            "isl": isl,
            "psl": psl,
            "meritFactor": mf.and_then(finite),
            "sidelobesDb": db.iter().map(|&v| finite(v)).collect::<Vec<_>>(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
    } else {
        writeln!(out, "N {}", x.len())?;
        writeln!(out, "isl {isl:.16e}")?;
        writeln!(out, "psl {psl:.16e}")?;
        match mf {
            Some(v) => writeln!(out, "merit_factor {v:.16e}")?,
            None => writeln!(out, "merit_factor undefined")?,
        }
        writeln!(out, "lag,db")?;
        for (k, v) in db.iter().enumerate() {
            writeln!(out, "{k},{v:.6}")?;
        }
    }
    Ok(())
}

fn generate_cmd(args: GenerateArgs) -> Result<(), Failure> {
    let x = generate(args.family, args.n)?;
    match &args.output {
        Some(path) => write_sequence_file(path, &x).map_err(|e| match e {
            Error::Io(io) => io_at(path)(io),
            other => other.into(),
        })?,
        None => write_sequence(io::stdout().lock(), &x)?,
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    let cfg = BenchConfig {
        algos: args.algos,
        lengths: args.lengths,
        runs: args.runs as usize,
        iterations: args.iters as usize,
        rel_tolerance: args.tol,
        base_seed: args.seed,
        phase_range: args.phase_range,
        fast_path: !args.direct,
    };
    cfg.validate()?;
    let rows = run_bench(&cfg)?;
    match &args.output {
        Some(path) => {
            let file = fs::File::create(path).map_err(io_at(path))?;
            write_csv(io::BufWriter::new(file), &rows)?;
        }
        None => write_csv(io::stdout().lock(), &rows)?,
    }
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("UNIPOL_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("UNIPOL_THREADS must be a nonnegative integer, got {raw:?}")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Design(a) => design(a),
        Command::Metrics(a) => metrics(a),
        Command::Generate(a) => generate_cmd(a),
        Command::Bench(a) => bench(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
