use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use pinch_core::oracle::{run_suite, Suite, SuiteReport, TrialConfig};
use pinch_core::report::{
    analyze_file, linear_grid, reports_to_json, resolve_options, sweep_csv, ManifoldFile,
    SweepFamily,
};

/// Curvature-pinching analysis for immersed submanifolds of space forms.
#[derive(Parser)]
#[command(name = "pinch", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyze the entries of a manifold file and emit JSON pinching reports.
    Analyze(AnalyzeArgs),
    /// Sweep a model family over a parameter grid and emit CSV.
    Sweep(SweepArgs),
    /// Run the randomized inequality verification suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Manifold file (JSON): {"entries": [...], "options": {...}}.
    file: PathBuf,
    /// Differentiation step override for immersion entries.
    #[arg(long)]
    step: Option<f64>,
    /// Seed for the frame searches.
    #[arg(long)]
    seed: Option<u64>,
    /// Restart budget for the frame searches.
    #[arg(long)]
    budget: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Model family: `clifford` or `cylinder`.
    #[arg(long)]
    family: String,
    /// Submanifold dimension.
    #[arg(long)]
    n: usize,
    /// Smallest parameter value (lambda or h0).
    #[arg(long = "param-min")]
    param_min: f64,
    /// Largest parameter value.
    #[arg(long = "param-max")]
    param_max: f64,
    /// Number of grid points, endpoints included.
    #[arg(long = "param-steps")]
    param_steps: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suites to run (repeatable); defaults to all of
    /// chain3d, sectional, r1234, fourframe, alphagap, scalar.
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Trials per suite.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Coefficient scale of the random forms.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Relative tolerance of the scale-free comparisons.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Analyze(args) => analyze(args),
        Cmd::Sweep(args) => sweep(args),
        Cmd::Verify(args) => verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

const USAGE_ERROR: u8 = 2;

fn emit(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn analyze(args: AnalyzeArgs) -> anyhow::Result<ExitCode> {
    let text = match fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.file.display());
            return Ok(ExitCode::from(USAGE_ERROR));
        }
    };
    let file: ManifoldFile = match serde_json::from_str(&text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!(
                "error: {} is not a valid manifold file: parse error at line {}, column {}: {e}",
                args.file.display(),
                e.line(),
                e.column()
            );
            return Ok(ExitCode::from(USAGE_ERROR));
        }
    };
    if file.entries.is_empty() {
        eprintln!("error: {} declares no entries", args.file.display());
        return Ok(ExitCode::from(USAGE_ERROR));
    }
    let opts = resolve_options(&file.options, args.seed, args.budget, args.step);
    // Hypothesis failures are report content; only evaluation failures
    // (degenerate points, constraint violations) abort with a nonzero exit.
    let reports = analyze_file(&file, &opts)?;
    emit(&reports_to_json(&reports), args.out.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn sweep(args: SweepArgs) -> anyhow::Result<ExitCode> {
    let family = match SweepFamily::from_name(&args.family) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(USAGE_ERROR));
        }
    };
    let grid = match linear_grid(args.param_min, args.param_max, args.param_steps) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(USAGE_ERROR));
        }
    };
    let csv = sweep_csv(family, args.n, &grid)?;
    emit(&csv, args.out.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

#[derive(serde::Serialize)]
struct VerifyOutput {
    seed: u64,
    trials: usize,
    suites: Vec<SuiteReport>,
    violations_total: usize,
}

fn verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    if args.trials == 0 {
        eprintln!("error: --trials must be >= 1");
        return Ok(ExitCode::from(USAGE_ERROR));
    }
    let suites: Vec<Suite> = if args.suites.is_empty() {
        Suite::all().to_vec()
    } else {
        let mut v = Vec::with_capacity(args.suites.len());
        for name in &args.suites {
            match Suite::from_name(name) {
                Ok(s) => v.push(s),
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(USAGE_ERROR));
                }
            }
        }
        v
    };
    let cfg = TrialConfig {
        seed: args.seed,
        trials: args.trials,
        scale: args.scale,
        tol: args.tol,
        ..TrialConfig::default()
    };
    let mut reports = Vec::with_capacity(suites.len());
    for suite in suites {
        reports.push(run_suite(suite, &cfg)?);
    }
    let violations_total = reports.iter().map(|r| r.violations.len()).sum();
    let output = VerifyOutput {
        seed: cfg.seed,
        trials: cfg.trials,
        suites: reports,
        violations_total,
    };
    let mut json = serde_json::to_string_pretty(&output)?;
    json.push('\n');
    emit(&json, args.out.as_ref())?;
    Ok(if violations_total == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
