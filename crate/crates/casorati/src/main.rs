//! Command-line driver for the verification suites.
//!
//! Exit codes: 0 all checks passed, 1 at least one check failed, 2 config or
//! usage error. `CASORATI_THREADS` caps the worker pool.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use casorati::checks::CheckName;
use casorati::runner::{fmt17, run, sweep_table, OutputFormat, RGrid, RunConfig};
use casorati::verifier::{
    check_inequality, equality_shape_operator, p_hessian_spectrum, InequalityVariant,
};
use casorati::{SpaceKind, SpaceSpec};

#[derive(Parser)]
#[command(name = "casorati", version, about = "Verification of delta-Casorati curvature inequalities for real hypersurfaces of two-plane Grassmannians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a report.
    Verify(CommonArgs),
    /// Run the inequality sweep and emit a plot-ready table.
    Sweep(CommonArgs),
    /// Evaluate both sides of the inequality on the equality-case shape
    /// operator diag(a, ..., a, n(n-1)a/r).
    EqualityCase(EqualityArgs),
    /// Report the Hessian spectrum of the proof's quadratic polynomial.
    Hessian(HessianArgs),
    /// Run only the hyperplane-extremization oracle agreement checks.
    Oracle(CommonArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<String>,
    /// Ambient geometry: g2 (compact) or su2m (noncompact).
    #[arg(long)]
    space: Option<String>,
    /// Quaternionic dimension; the hypersurface dimension is n = 4m-1.
    #[arg(long)]
    m: Option<usize>,
    /// r values, or "auto" for 8 log-spaced points per admissible regime.
    #[arg(long = "r", num_args = 1.., value_name = "FLOAT|auto")]
    r_values: Option<Vec<String>>,
    /// Random samples per check.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Half-width of the uniform distribution for random shape operators.
    #[arg(long)]
    entry_scale: Option<f64>,
    /// Subset of checks to run.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    checks: Option<Vec<CheckName>>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Args)]
struct EqualityArgs {
    #[arg(long)]
    space: Option<String>,
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 30.0)]
    r: f64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
}

#[derive(Args)]
struct HessianArgs {
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 30.0)]
    r: f64,
}

fn parse_space(s: &str) -> Result<SpaceKind, String> {
    match s {
        "g2" => Ok(SpaceKind::Compact),
        "su2m" => Ok(SpaceKind::Noncompact),
        other => Err(format!("unknown space {other:?}, expected g2 or su2m")),
    }
}

fn parse_r_values(values: &[String]) -> Result<RGrid, String> {
    if values.len() == 1 && values[0] == "auto" {
        return Ok(RGrid::Auto);
    }
    let mut out = Vec::with_capacity(values.len());
    for v in values {
        out.push(
            v.parse::<f64>()
                .map_err(|e| format!("bad r value {v:?}: {e}"))?,
        );
    }
    Ok(RGrid::List(out))
}

/// Builds the effective config: file (if given), then flag overrides.
fn resolve_config(args: &CommonArgs) -> Result<RunConfig, String> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            serde_json::from_str::<RunConfig>(&text).map_err(|e| {
                format!("{path}:{}:{}: {e}", e.line(), e.column())
            })?
        }
        None => {
            let space = args
                .space
                .as_deref()
                .ok_or("either --config or --space is required")?;
            RunConfig {
                space: parse_space(space)?,
                m: 3,
                r_values: RGrid::Auto,
                samples: 1000,
                seed: 0,
                entry_scale: 1.0,
                checks: casorati::checks::ALL_CHECKS.to_vec(),
                output_path: None,
                format: OutputFormat::Json,
            }
        }
    };
    if let Some(space) = &args.space {
        config.space = parse_space(space)?;
    }
    if let Some(m) = args.m {
        config.m = m;
    }
    if let Some(r) = &args.r_values {
        config.r_values = parse_r_values(r)?;
    }
    if let Some(samples) = args.samples {
        config.samples = samples;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(scale) = args.entry_scale {
        config.entry_scale = scale;
    }
    if let Some(checks) = &args.checks {
        config.checks = checks.clone();
    }
    if let Some(out) = &args.out {
        config.output_path = Some(out.clone());
    }
    if let Some(format) = args.format {
        config.format = format;
    }
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn emit(config: &RunConfig, content: &str) -> Result<(), String> {
    match &config.output_path {
        Some(path) => fs::write(path, content).map_err(|e| format!("{path}: {e}")),
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn cmd_verify(args: &CommonArgs) -> Result<bool, String> {
    let config = resolve_config(args)?;
    let report = run(&config).map_err(|e| e.to_string())?;
    let content = match config.format {
        OutputFormat::Json => serde_json::to_string_pretty(&report).unwrap(),
        OutputFormat::Csv => {
            let mut s = String::from("name,worst_violation,samples_run,pass\n");
            for r in &report.records {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    r.name,
                    fmt17(r.worst_violation),
                    r.samples_run,
                    r.pass
                ));
            }
            s
        }
    };
    emit(&config, &content)?;
    for r in &report.records {
        eprintln!(
            "{} {} (worst violation {:.3e})",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.worst_violation
        );
    }
    Ok(report.all_pass)
}

fn cmd_sweep(args: &CommonArgs) -> Result<bool, String> {
    let config = resolve_config(args)?;
    let (report, csv) = sweep_table(&config).map_err(|e| e.to_string())?;
    let content = match config.format {
        OutputFormat::Csv => csv,
        OutputFormat::Json => serde_json::to_string_pretty(&report).unwrap(),
    };
    emit(&config, &content)?;
    Ok(report.all_pass)
}

fn cmd_equality_case(args: &EqualityArgs) -> Result<bool, String> {
    let kind = match &args.space {
        Some(s) => parse_space(s)?,
        None => SpaceKind::Compact,
    };
    let spec = SpaceSpec::new(kind, args.m).map_err(|e| e.to_string())?;
    let h = equality_shape_operator(spec.n, args.r, args.a).map_err(|e| e.to_string())?;
    let n = spec.n as f64;
    let variant = if args.r < n * (n - 1.0) {
        InequalityVariant::LowerR(args.r)
    } else {
        InequalityVariant::UpperR(args.r)
    };
    let check = check_inequality(&spec, &h, variant).map_err(|e| e.to_string())?;
    println!(
        "n = {}, r = {}, a = {}\nlhs = {}\nrhs = {}\ngap = {}\nequality_flagged = {}",
        spec.n,
        args.r,
        args.a,
        fmt17(check.lhs),
        fmt17(check.rhs),
        fmt17(check.gap),
        check.equality_flagged
    );
    Ok(check.pass)
}

fn cmd_hessian(args: &HessianArgs) -> Result<bool, String> {
    let n = 4 * args.m - 1;
    let spectrum = p_hessian_spectrum(n, args.r).map_err(|e| e.to_string())?;
    println!("{}", serde_json::to_string_pretty(&spectrum).unwrap());
    Ok(spectrum.max_deviation <= 1e-9)
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("CASORATI_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::EqualityCase(args) => cmd_equality_case(args),
        Command::Hessian(args) => cmd_hessian(args),
        Command::Oracle(args) => {
            let mut args = args.clone();
            args.checks = Some(vec![CheckName::OracleAgreement]);
            cmd_verify(&args)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
