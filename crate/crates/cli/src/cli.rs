//! Command-line front end: `h2p run`, `h2p spectrum`, `h2p compare`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use h2p_core::model::HubbardParams;
use h2p_core::observables::ObservableSeries;
use h2p_core::semiclassics::Trajectory;
use h2p_core::spectral::{doublon_band_sweep, momentum_grid};

use crate::compare::{compare_runs, DEFAULT_THRESHOLD};
use crate::config::{ExperimentConfig, Momentum, Overrides, Preset};
use crate::experiment::{output_dir, run_and_write, run_sweep, thread_cap, RunError};

pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "h2p",
    version,
    about = "Two interacting particles on a 1D lattice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve a two-particle wave packet and write its artifacts.
    Run(RunArgs),
    /// Export the doublon bands over a grid of total quasi-momenta.
    Spectrum(SpectrumArgs),
    /// Compare a quantum series with a semiclassical trajectory.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PresetName {
    Fig2,
    Fig3,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, value_enum, conflicts_with_all = ["config", "sweep"])]
    preset: Option<PresetName>,
    #[arg(long, conflicts_with = "sweep")]
    config: Option<PathBuf>,
    /// Run several config files in parallel, each into `<out>/<file stem>`.
    #[arg(long, num_args = 1..)]
    sweep: Vec<PathBuf>,
    #[arg(long)]
    n_sites: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    w: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = Momentum::parse)]
    px: Option<Momentum>,
    #[arg(long, allow_hyphen_values = true, value_parser = Momentum::parse)]
    py: Option<Momentum>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Shape {
    Exponential,
    Onsite,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    /// Number of K points on [-π, π], both ends included.
    #[arg(long, default_value_t = 101)]
    k_points: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = -6.0)]
    u: f64,
    #[arg(long, default_value_t = 1.0 / 12.0)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = Shape::Exponential)]
    shape: Shape,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    quantum: PathBuf,
    semiclassical: PathBuf,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    /// Per-sample deviations as CSV.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn fail(code: i32, message: impl std::fmt::Display) -> i32 {
    eprintln!("h2p: {message}");
    code
}

fn overrides(args: &RunArgs) -> Overrides {
    Overrides {
        n_sites: args.n_sites,
        t_final: args.t_max,
        onsite: args.u,
        gamma: args.gamma,
        w: args.w,
        d: args.d,
        px: args.px,
        py: args.py,
        out: args.out.clone(),
    }
}

fn run(args: RunArgs) -> i32 {
    let over = overrides(&args);
    if !args.sweep.is_empty() {
        let mut jobs = Vec::new();
        for path in &args.sweep {
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            match ExperimentConfig::from_file(path).and_then(|c| over.apply(c)) {
                Ok(c) => jobs.push((name, c)),
                Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", path.display())),
            }
        }
        let root = args.out.clone().unwrap_or_else(|| PathBuf::from("h2p-out"));
        let mut code = 0;
        for (name, result) in run_sweep(&jobs, &root) {
            match result {
                Ok(summary) => println!(
                    "{name}: {}",
                    serde_json::to_string(&summary).unwrap_or_default()
                ),
                Err(e) => code = code.max(fail(e.exit_code(), format!("{name}: {e}"))),
            }
        }
        return code;
    }
    let base = match (&args.preset, &args.config) {
        (Some(PresetName::Fig2), _) => Ok(Preset::Fig2.config()),
        (Some(PresetName::Fig3), _) => Ok(Preset::Fig3.config()),
        (None, Some(path)) => ExperimentConfig::from_file(path),
        (None, None) => {
            return fail(
                EXIT_CONFIG,
                "one of --preset, --config or --sweep is required",
            )
        }
    };
    let config = match base.and_then(|c| over.apply(c)) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let dir = output_dir(&config, args.out.as_deref());
    match run_and_write(&config, &dir) {
        Ok(output) => {
            for w in &output.warnings {
                eprintln!("h2p: warning: {w}");
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&output.summary).unwrap_or_default()
            );
            0
        }
        Err(e) => fail(e.exit_code(), e),
    }
}

fn spectrum(args: SpectrumArgs) -> i32 {
    if args.k_points < 2 {
        return fail(EXIT_CONFIG, "--k-points must be at least 2");
    }
    let params = match args.shape {
        Shape::Exponential => HubbardParams::exponential(1.0, args.u, args.gamma),
        Shape::Onsite => HubbardParams::onsite_only(1.0, args.u),
    };
    let table = match doublon_band_sweep(&params, &momentum_grid(args.k_points)) {
        Ok(t) => t,
        Err(e) => {
            let e = RunError::from(e);
            return fail(e.exit_code(), e);
        }
    };
    let written = match &args.out {
        Some(path) => File::create(path).and_then(|f| table.write_csv(BufWriter::new(f))),
        None => table.write_csv(io::stdout().lock()),
    };
    match written {
        Ok(()) => 0,
        Err(e) => fail(EXIT_IO, e),
    }
}

fn open(path: &Path) -> io::Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn compare(args: CompareArgs) -> i32 {
    let quantum = open(&args.quantum)
        .map_err(RunError::from)
        .and_then(|r| Ok(ObservableSeries::read_csv(r)?));
    let semiclassical = open(&args.semiclassical)
        .map_err(RunError::from)
        .and_then(|r| Ok(Trajectory::read_csv(r)?));
    let (quantum, semiclassical) = match (quantum, semiclassical) {
        (Ok(q), Ok(s)) => (q, s),
        (Err(e), _) | (_, Err(e)) => return fail(EXIT_CONFIG, e),
    };
    let report = match compare_runs(&quantum, &semiclassical, args.threshold) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    if let Some(path) = &args.report {
        if let Err(e) = File::create(path).and_then(|f| report.write_csv(BufWriter::new(f))) {
            return fail(EXIT_IO, e);
        }
    }
    let mut out = io::stdout().lock();
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&report).unwrap_or_default()
    );
    0
}

/// Entry point shared by the binary and tests. Returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    if let Some(n) = thread_cap() {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match cli.command {
        Command::Run(a) => run(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Compare(a) => compare(a),
    }
}
