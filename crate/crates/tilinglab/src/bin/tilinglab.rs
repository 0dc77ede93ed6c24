//! Thin command-line front end: parses a job, hands it to the library
//! dispatcher, prints the result envelope.
//!
//! JSON goes to stdout; human-readable summaries, timing and error objects
//! go to stderr. Exit codes: 0 verdict pass, 1 verdict fail, 2 usage or
//! validation problem, 3 internal/resource condition.

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use tilinglab::envelope::{self, corpus_table, error_exit_code, error_object, run_corpus, JobSpec};
use tilinglab::error::TilingError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Markdown,
}

#[derive(Debug, Parser)]
#[command(
    name = "tilinglab",
    version,
    about = "Exact and numerical checks for translational tilings and spectral sets"
)]
struct Cli {
    /// Output format for stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Run the built-in acceptance corpus and print a pass/fail table.
    #[arg(long)]
    corpus: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

/// Shared per-job arguments: a parameter document plus the common
/// overrides every command accepts.
#[derive(Debug, Clone, clap::Args)]
struct JobArgs {
    /// JSON parameter document: a file path, or `-` for stdin.
    #[arg(long)]
    params: Option<String>,

    /// Set or override one parameter: KEY=JSON (repeatable).
    #[arg(long = "set", value_name = "KEY=JSON")]
    sets: Vec<String>,

    /// Numerical tolerance override.
    #[arg(long)]
    tol: Option<f64>,

    /// Search/verification radius override.
    #[arg(long)]
    radius: Option<f64>,

    /// RNG seed for sampled checks (default 0).
    #[arg(long)]
    seed: Option<u64>,

    /// Bitmap resolution exponent for the region builder.
    #[arg(long)]
    grid_exponent: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Notched cube: Fourier criterion plus exact level-1 verification.
    Notched(JobArgs),
    /// Extended cube with odd signed codimension.
    ExtendedCube(JobArgs),
    /// All cyclic permutation variants of a notched-cube lattice.
    CyclicVariants(JobArgs),
    /// Verify a tiling (exact, sampled or Fourier mode).
    VerifyTiling(JobArgs),
    /// Verify a packing at a given level.
    VerifyPacking(JobArgs),
    /// Zero grid of an edge measure, with transform sampling.
    ZeroGrid(JobArgs),
    /// Hajós-style integral-row predicate for a rational basis.
    Hajos(JobArgs),
    /// Minkowski lattice-point search for a determinant-one basis.
    Minkowski(JobArgs),
    /// Greedy common-tile builder for a lattice family.
    MultitileBuild(JobArgs),
    /// Direct-sum (rational-independence) check for a lattice family.
    DirectSumCheck(JobArgs),
    /// Parity obstruction certificate for a three-lattice cover.
    ThreeLatticeObstruction(JobArgs),
    /// Soft (convolution) common tile with level verification.
    SoftTile(JobArgs),
    /// Steinhaus three-squares certificate for a quadratic form.
    SteinhausCertify(JobArgs),
    /// Search for diagonal 3D forms satisfying the certificate.
    SteinhausSearch(JobArgs),
    /// Admissible Steinhaus radii below a bound.
    SteinhausRadii(JobArgs),
    /// Cube spectrum ⇔ tiling equivalence check.
    CubeSpectrum(JobArgs),
    /// Lattice spectrum check for a box-union domain.
    LatticeSpectrum(JobArgs),
    /// Packing-to-tiling transfer harness.
    PackingTransfer(JobArgs),
    /// Rigid-motion counterexample demo (square vs parallelogram).
    RigidMotionDemo(JobArgs),
    /// Gabor frame identity for a tile and a pair of lattices.
    GaborCheck(JobArgs),
    /// Disk non-spectrality certificate.
    DiskCertificate(JobArgs),
    /// Markdown certificate bundle (disk, Steinhaus, notched cubes).
    Report(JobArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Notched(_) => "notched",
            Command::ExtendedCube(_) => "extended-cube",
            Command::CyclicVariants(_) => "cyclic-variants",
            Command::VerifyTiling(_) => "verify-tiling",
            Command::VerifyPacking(_) => "verify-packing",
            Command::ZeroGrid(_) => "zero-grid",
            Command::Hajos(_) => "hajos",
            Command::Minkowski(_) => "minkowski",
            Command::MultitileBuild(_) => "multitile-build",
            Command::DirectSumCheck(_) => "direct-sum-check",
            Command::ThreeLatticeObstruction(_) => "three-lattice-obstruction",
            Command::SoftTile(_) => "soft-tile",
            Command::SteinhausCertify(_) => "steinhaus-certify",
            Command::SteinhausSearch(_) => "steinhaus-search",
            Command::SteinhausRadii(_) => "steinhaus-radii",
            Command::CubeSpectrum(_) => "cube-spectrum",
            Command::LatticeSpectrum(_) => "lattice-spectrum",
            Command::PackingTransfer(_) => "packing-transfer",
            Command::RigidMotionDemo(_) => "rigid-motion-demo",
            Command::GaborCheck(_) => "gabor-check",
            Command::DiskCertificate(_) => "disk-certificate",
            Command::Report(_) => "report",
        }
    }

    fn args(&self) -> &JobArgs {
        match self {
            Command::Notched(a)
            | Command::ExtendedCube(a)
            | Command::CyclicVariants(a)
            | Command::VerifyTiling(a)
            | Command::VerifyPacking(a)
            | Command::ZeroGrid(a)
            | Command::Hajos(a)
            | Command::Minkowski(a)
            | Command::MultitileBuild(a)
            | Command::DirectSumCheck(a)
            | Command::ThreeLatticeObstruction(a)
            | Command::SoftTile(a)
            | Command::SteinhausCertify(a)
            | Command::SteinhausSearch(a)
            | Command::SteinhausRadii(a)
            | Command::CubeSpectrum(a)
            | Command::LatticeSpectrum(a)
            | Command::PackingTransfer(a)
            | Command::RigidMotionDemo(a)
            | Command::GaborCheck(a)
            | Command::DiskCertificate(a)
            | Command::Report(a) => a,
        }
    }
}

fn load_params(args: &JobArgs) -> Result<Value, TilingError> {
    let mut base: Map<String, Value> = match &args.params {
        None => Map::new(),
        Some(path) => {
            let text = if path == "-" {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| TilingError::Parse(format!("reading stdin: {e}")))?;
                buf
            } else {
                std::fs::read_to_string(path)
                    .map_err(|e| TilingError::Parse(format!("reading {path}: {e}")))?
            };
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| TilingError::Parse(format!("parameter document: {e}")))?;
            match v {
                Value::Object(m) => m,
                _ => {
                    return Err(TilingError::Parse(
                        "parameter document must be a JSON object".into(),
                    ))
                }
            }
        }
    };
    for kv in &args.sets {
        let (key, raw) = kv
            .split_once('=')
            .ok_or_else(|| TilingError::Parse(format!("--set needs KEY=JSON, got '{kv}'")))?;
        let value: Value = serde_json::from_str(raw)
            .map_err(|e| TilingError::Parse(format!("--set {key}: {e}")))?;
        base.insert(key.to_string(), value);
    }
    Ok(Value::Object(base))
}

/// Worker cap from the environment; the value is validated but never
/// echoed into any output. Results are identical at any cap.
fn thread_cap() -> Result<usize, TilingError> {
    match std::env::var("TILINGLAB_THREADS") {
        Err(_) => Ok(1),
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| {
                TilingError::Parse("TILINGLAB_THREADS must be a positive integer".into())
            }),
    }
}

fn run_one(cmd: &Command, format: Format) -> Result<bool, TilingError> {
    let args = cmd.args();
    let params = load_params(args)?;
    let spec = JobSpec {
        command: cmd.name().to_string(),
        params,
        tol: args.tol,
        radius: args.radius,
        window: None,
        seed: args.seed,
        grid_exponent: args.grid_exponent,
    };
    let started = Instant::now();
    let env = envelope::run(&spec)?;
    let elapsed = started.elapsed();
    match format {
        Format::Json => {
            println!("{}", env.to_json());
            eprint!("{}", envelope::render_text(&env));
        }
        Format::Text => print!("{}", envelope::render_text(&env)),
        Format::Markdown => print!("{}", envelope::render_markdown(&env)),
    }
    eprintln!("elapsed: {:.3}s", elapsed.as_secs_f64());
    Ok(env.pass)
}

fn run_corpus_mode(format: Format) -> bool {
    let rows = run_corpus();
    let all_ok = rows.iter().all(|r| r.ok);
    match format {
        Format::Json => {
            let body = serde_json::to_string_pretty(&rows).expect("corpus rows serialize");
            println!("{body}");
            eprint!("{}", corpus_table(&rows));
        }
        Format::Text => print!("{}", corpus_table(&rows)),
        Format::Markdown => {
            println!("## corpus\n");
            println!("| name | command | expect | outcome | ok |");
            println!("|---|---|---|---|---|");
            for r in &rows {
                println!(
                    "| {} | {} | {:?} | {} | {} |",
                    r.name,
                    r.command,
                    r.expect,
                    r.outcome,
                    if r.ok { "ok" } else { "MISMATCH" }
                );
            }
        }
    }
    all_ok
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = thread_cap() {
        eprintln!("{}", error_object(&e));
        return ExitCode::from(2);
    }
    if cli.corpus {
        return if run_corpus_mode(cli.format) {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        };
    }
    let Some(cmd) = cli.command else {
        let e = TilingError::Parse("a subcommand (or --corpus) is required".into());
        eprintln!("{}", error_object(&e));
        return ExitCode::from(2);
    };
    match run_one(&cmd, cli.format) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", error_object(&e));
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
