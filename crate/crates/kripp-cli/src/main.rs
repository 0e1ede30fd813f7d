//! `kripp`: Krippendorff's alpha from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use krippendorff::{
    alpha_point, dfbeta, parse, resample_alpha, resample_alpha_with_progress, run_coverage,
    true_alpha, AlphaError, AnovaConfig, BootstrapConfig, BootstrapResult, DistanceSpec,
    InfluenceError, ReliabilityMatrix, SimulateError,
};
use krippendorff::expr::validate_distance;
use kripp_cli::ingest::{ingest, IngestError, InputSpec};
use kripp_cli::progress::ProgressBar;
use kripp_cli::report::{boot_sample_csv, per_rep_csv, InfluenceReport, RunReport, SimulateReport};
use kripp_cli::svg::emit_histogram;

#[derive(Parser)]
#[command(
    name = "kripp",
    version,
    about = "Krippendorff's alpha agreement toolkit",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate alpha from a CSV of scores, with a bootstrap interval
    Alpha(AlphaArgs),
    /// Leave-one-out influence of units or coders on alpha
    Influence(InfluenceArgs),
    /// Bootstrap coverage study on simulated one-way ANOVA data
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct InputArgs {
    /// CSV of scores, one row per unit and one column per coder; "-" reads stdin
    input: String,
    /// Treat the first row as a header and skip it
    #[arg(long)]
    header: bool,
    /// Token meaning "missing"; repeatable, replaces the default of NA and empty
    #[arg(long = "na-token", value_name = "TOKEN")]
    na_tokens: Vec<String>,
    /// Field delimiter
    #[arg(long, default_value_t = ',')]
    delimiter: char,
}

impl InputArgs {
    fn to_spec(&self) -> InputSpec {
        let mut spec = InputSpec::new(&self.input);
        spec.has_header = self.header;
        if !self.na_tokens.is_empty() {
            spec.na_tokens = self.na_tokens.clone();
        }
        spec.delimiter = self.delimiter;
        spec
    }
}

#[derive(Args)]
struct DistanceArgs {
    /// Measurement level of the scores
    #[arg(long, value_enum, default_value_t = Level::Interval)]
    level: Level,
    /// Custom distance expression in x and y, e.g. "abs(x-y)"
    #[arg(long, value_name = "EXPR", conflicts_with = "level")]
    distance: Option<String>,
    /// Number of scale points, required by --level circular
    #[arg(long, value_name = "N")]
    intervals: Option<u32>,
    /// Scale minimum, required by --level bipolar
    #[arg(long, value_name = "MIN")]
    min: Option<f64>,
    /// Scale maximum, required by --level bipolar
    #[arg(long, value_name = "MAX")]
    max: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Level {
    Nominal,
    Ordinal,
    Interval,
    Ratio,
    Bipolar,
    Circular,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Args)]
struct AlphaArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    dist: DistanceArgs,
    /// Bootstrap replicates
    #[arg(long, default_value_t = 1000)]
    bootit: usize,
    /// Report the point estimate only, skipping the bootstrap
    #[arg(long, conflicts_with_all = ["boot_sample", "hist", "verbose"])]
    no_confint: bool,
    /// Two-sided confidence level
    #[arg(long, default_value_t = 0.95)]
    conf_level: f64,
    /// RNG seed; drawn at random (and echoed in the report) when omitted
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for the bootstrap; results do not depend on this
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output format
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    out: OutFormat,
    /// Write the replicate alphas to a CSV file, one per line
    #[arg(long, value_name = "PATH")]
    boot_sample: Option<PathBuf>,
    /// Write an SVG histogram of the replicates
    #[arg(long, value_name = "PATH")]
    hist: Option<PathBuf>,
    /// Print a progress bar to stderr
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct InfluenceArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    dist: DistanceArgs,
    /// 1-based unit rows to probe, comma separated
    #[arg(long, value_delimiter = ',', value_name = "ROWS")]
    units: Vec<usize>,
    /// 1-based coder columns to probe, comma separated
    #[arg(long, value_delimiter = ',', value_name = "COLS")]
    coders: Vec<usize>,
    /// Output format
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    out: OutFormat,
}

#[derive(Args)]
struct SimulateArgs {
    /// Grand mean of the generated scores
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    /// Between-unit standard deviation
    #[arg(long, default_value_t = 1.0)]
    sigma_tau: f64,
    /// Within-unit standard deviation
    #[arg(long, default_value_t = 1.0)]
    sigma_eps: f64,
    /// Units per simulated matrix
    #[arg(long, default_value_t = 30)]
    units: usize,
    /// Coders per simulated matrix
    #[arg(long, default_value_t = 4)]
    coders: usize,
    /// Probability that any one cell is blanked
    #[arg(long, default_value_t = 0.0)]
    missing_rate: f64,
    /// Number of simulated matrices
    #[arg(long, default_value_t = 100)]
    reps: usize,
    /// Bootstrap replicates per matrix
    #[arg(long, default_value_t = 1000)]
    bootit: usize,
    /// Two-sided confidence level
    #[arg(long, default_value_t = 0.95)]
    conf_level: f64,
    /// Master seed; drawn at random (and echoed) when omitted
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, parallelizing replications
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Write one CSV row per replication
    #[arg(long, value_name = "PATH")]
    per_rep: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Data(String),
    Degenerate(String),
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Degenerate(_) => 4,
            CliError::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Data(m)
            | CliError::Degenerate(m)
            | CliError::Runtime(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Alpha(args) => run_alpha(args),
        Command::Influence(args) => run_influence(args),
        Command::Simulate(args) => run_simulate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn call_string() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn read_matrix(input: &InputArgs) -> Result<ReliabilityMatrix, CliError> {
    ingest(&input.to_spec()).map_err(|e| match e {
        IngestError::BadDelimiter(_) => CliError::Usage(e.to_string()),
        other => CliError::Data(other.to_string()),
    })
}

/// Picks the distance function and a label for reports. Custom expressions
/// are probed on the observed score values; anything suspicious (asymmetry,
/// nonzero diagonal, evaluation failures) becomes a warning on stderr.
fn resolve_distance(
    args: &DistanceArgs,
    matrix: &ReliabilityMatrix,
) -> Result<(DistanceSpec, String), CliError> {
    if let Some(src) = &args.distance {
        let expr = parse(src).map_err(|e| CliError::Usage(format!("--distance: {e}")))?;
        let mut grid: Vec<f64> = matrix.present_scores().collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let diagnostics = validate_distance(&expr, &grid);
        for v in &diagnostics.diagonal_violations {
            eprintln!(
                "warning: custom distance is {} at ({}, {}); a distance should be 0 there",
                v.value, v.x, v.x
            );
        }
        for v in &diagnostics.symmetry_violations {
            eprintln!(
                "warning: custom distance is asymmetric at ({}, {}): {} forward vs {} reverse",
                v.x, v.y, v.forward, v.reverse
            );
        }
        for f in &diagnostics.failures {
            eprintln!(
                "warning: custom distance fails at ({}, {}): {}",
                f.x, f.y, f.error
            );
        }
        return Ok((DistanceSpec::custom(expr), format!("custom({src})")));
    }
    if args.intervals.is_some() && args.level != Level::Circular {
        return Err(CliError::Usage(
            "--intervals only applies to --level circular".into(),
        ));
    }
    if (args.min.is_some() || args.max.is_some()) && args.level != Level::Bipolar {
        return Err(CliError::Usage(
            "--min/--max only apply to --level bipolar".into(),
        ));
    }
    let spec = match args.level {
        Level::Nominal => DistanceSpec::Nominal,
        Level::Ordinal => DistanceSpec::Ordinal,
        Level::Interval => DistanceSpec::Interval,
        Level::Ratio => DistanceSpec::Ratio,
        Level::Bipolar => {
            let (Some(min), Some(max)) = (args.min, args.max) else {
                return Err(CliError::Usage(
                    "--level bipolar needs both --min and --max".into(),
                ));
            };
            DistanceSpec::bipolar(min, max).map_err(|e| CliError::Usage(e.to_string()))?
        }
        Level::Circular => {
            let Some(n) = args.intervals else {
                return Err(CliError::Usage("--level circular needs --intervals".into()));
            };
            DistanceSpec::circular(n).map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    let label = spec.to_string();
    Ok((spec, label))
}

fn alpha_error_to_cli(e: &AlphaError) -> CliError {
    match e {
        AlphaError::DegenerateData(_) => CliError::Degenerate(e.to_string()),
        _ => CliError::Data(e.to_string()),
    }
}

fn write_artifact(path: &PathBuf, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn run_alpha(args: AlphaArgs) -> Result<(), CliError> {
    let call = call_string();
    let matrix = read_matrix(&args.input)?;
    let (distance, label) = resolve_distance(&args.dist, &matrix)?;
    let estimate = alpha_point(&matrix, &distance).map_err(|e| alpha_error_to_cli(&e))?;

    let bootstrap: Option<BootstrapResult> = if args.no_confint {
        None
    } else {
        let config = BootstrapConfig {
            bootit: args.bootit,
            conf_level: args.conf_level,
            seed: args.seed.unwrap_or_else(rand::random),
            workers: args.workers,
            max_redraws: 100,
        };
        let outcome = if args.verbose {
            let bar = ProgressBar::start(config.bootit);
            let r = resample_alpha_with_progress(&matrix, &distance, &config, &|| bar.tick());
            if r.is_ok() {
                bar.finish();
            } else {
                eprintln!();
            }
            r
        } else {
            resample_alpha(&matrix, &distance, &config)
        };
        Some(outcome.map_err(|e| match e {
            krippendorff::BootstrapError::Alpha(inner) => alpha_error_to_cli(&inner),
            krippendorff::BootstrapError::ZeroBootit
            | krippendorff::BootstrapError::BadConfLevel(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        })?)
    };

    if let Some(path) = &args.boot_sample {
        let b = bootstrap.as_ref().expect("bootstrap runs unless --no-confint");
        write_artifact(path, &boot_sample_csv(&b.replicates))?;
    }
    if let Some(path) = &args.hist {
        let b = bootstrap.as_ref().expect("bootstrap runs unless --no-confint");
        emit_histogram(&b.replicates, estimate.alpha, (b.ci_lower, b.ci_upper), path)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    }

    let report = RunReport::new(
        &estimate,
        bootstrap.as_ref(),
        matrix.n_units(),
        matrix.n_coders(),
        label,
    );
    match args.out {
        OutFormat::Text => print!("{}", report.render_text(&call)),
        OutFormat::Json => println!("{}", report.to_json()),
    }
    Ok(())
}

fn run_influence(args: InfluenceArgs) -> Result<(), CliError> {
    let matrix = read_matrix(&args.input)?;
    let (distance, label) = resolve_distance(&args.dist, &matrix)?;
    if args.units.is_empty() && args.coders.is_empty() {
        return Err(CliError::Usage(
            "nothing to probe: pass --units and/or --coders".into(),
        ));
    }
    let to_zero_based = |values: &[usize], what: &str| -> Result<Vec<usize>, CliError> {
        values
            .iter()
            .map(|&v| {
                v.checked_sub(1).ok_or_else(|| {
                    CliError::Usage(format!("{what} indices are 1-based; got 0"))
                })
            })
            .collect()
    };
    let units = to_zero_based(&args.units, "unit")?;
    let coders = to_zero_based(&args.coders, "coder")?;
    let report = dfbeta(&matrix, &distance, &units, &coders).map_err(|e| match &e {
        InfluenceError::BaseFit(inner)
        | InfluenceError::UnitRefit { source: inner, .. }
        | InfluenceError::CoderRefit { source: inner, .. } => match inner {
            AlphaError::DegenerateData(_) => CliError::Degenerate(e.to_string()),
            _ => CliError::Data(e.to_string()),
        },
        InfluenceError::UnitDrop { .. } | InfluenceError::CoderDrop { .. } => {
            CliError::Usage(e.to_string())
        }
    })?;
    let report = InfluenceReport::new(&report, label);
    match args.out {
        OutFormat::Text => print!("{}", report.render_text()),
        OutFormat::Json => println!("{}", report.to_json()),
    }
    Ok(())
}

fn run_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let cfg = AnovaConfig {
        mu: args.mu,
        sigma_tau: args.sigma_tau,
        sigma_eps: args.sigma_eps,
        n_units: args.units,
        n_coders: args.coders,
        missing_rate: args.missing_rate,
    };
    let bcfg = BootstrapConfig {
        bootit: args.bootit,
        conf_level: args.conf_level,
        seed: args.seed.unwrap_or_else(rand::random),
        workers: args.workers,
        max_redraws: 100,
    };
    let report = run_coverage(&cfg, args.reps, &bcfg).map_err(|e| match &e {
        SimulateError::Rep { source, .. } => match source {
            krippendorff::BootstrapError::Alpha(AlphaError::DegenerateData(_)) => {
                CliError::Degenerate(e.to_string())
            }
            _ => CliError::Runtime(e.to_string()),
        },
        _ => CliError::Usage(e.to_string()),
    })?;
    if let Some(path) = &args.per_rep {
        write_artifact(path, &per_rep_csv(&report))?;
    }
    let out = SimulateReport {
        reps: report.reps,
        hits: report.hits,
        coverage: report.coverage,
        mean_ci_width: report.mean_ci_width,
        true_alpha: true_alpha(&cfg),
        mu: cfg.mu,
        sigma_tau: cfg.sigma_tau,
        sigma_eps: cfg.sigma_eps,
        n_units: cfg.n_units,
        n_coders: cfg.n_coders,
        missing_rate: cfg.missing_rate,
        bootit: bcfg.bootit,
        conf_level: bcfg.conf_level,
        seed: bcfg.seed,
        workers: bcfg.workers,
    };
    println!("{}", out.to_json());
    Ok(())
}
