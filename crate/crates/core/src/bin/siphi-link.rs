//! Command-line surface: budget checks, duplet optimization, length sweeps,
//! the full variant grid, and the optimizer-vs-oracle self check.
//!
//! Exit codes: 0 success, 1 oracle mismatch, 2 validation error, 3 I/O error.

use std::fmt;
use std::fs;
use std::io::Write;
use std::num::NonZeroU32;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{ArgAction, Parser, Subcommand, ValueEnum};

use siphi_link::budget::LinkGeometry;
use siphi_link::config::{load_config, load_energy_model, ConfigError};
use siphi_link::explore::{build_grid, sweep};
use siphi_link::optimize::{BitrateSearch, Optimizer, DEFAULT_MIN_SPACING_LINEWIDTHS};
use siphi_link::platform::{
    apply_pathways, builtin_platform, builtin_platforms, enumerate_variants, FabricationPlatform,
    LinkVariant, PathwaySet,
};
use siphi_link::report;

#[derive(Parser)]
#[command(
    name = "siphi-link",
    version,
    about = "Power budgets, duplet optimization, and viability grids for photonic interposer links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON file with user-defined platforms (and optionally an energy model).
    #[arg(long, global = true, value_name = "PATH")]
    platforms_file: Option<PathBuf>,

    /// JSON file with energy-model coefficients; overrides the platforms file.
    #[arg(long, global = true, value_name = "PATH")]
    energy_model: Option<PathBuf>,

    /// Minimum channel spacing in filter linewidths.
    #[arg(long, global = true, default_value_t = DEFAULT_MIN_SPACING_LINEWIDTHS)]
    min_spacing_linewidths: f64,

    /// How many times the lumped coupling loss is incurred per link.
    #[arg(long, global = true, default_value_t = 1)]
    coupler_count: u32,

    /// Search bitrates in 0.5 Gb/s steps instead of fixing the line rate.
    #[arg(long, global = true, action = ArgAction::SetTrue)]
    br_sweep: bool,

    /// Output format; each command has a sensible default.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Write output to a file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Add a generation timestamp to plot-data comments.
    #[arg(long, global = true, action = ArgAction::SetTrue)]
    stamp: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Plot,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the power budget of one (N, BR) duplet.
    Budget {
        #[arg(long)]
        platform: String,
        /// Pathways to apply: `vanilla` or a list like `ml,wf,im`.
        #[arg(long, conflicts_with = "vanilla")]
        pathways: Option<String>,
        /// Shorthand for `--pathways vanilla`.
        #[arg(long, action = ArgAction::SetTrue)]
        vanilla: bool,
        /// Waveguide length in cm.
        #[arg(long)]
        length: f64,
        /// Number of wavelength channels.
        #[arg(long)]
        nlambda: u32,
        /// Channel bitrate in Gb/s.
        #[arg(long)]
        br: f64,
    },
    /// Find the optimal duplet for one variant and length.
    Optimize {
        #[arg(long)]
        platform: String,
        #[arg(long, conflicts_with = "vanilla")]
        pathways: Option<String>,
        #[arg(long, action = ArgAction::SetTrue)]
        vanilla: bool,
        #[arg(long)]
        length: f64,
    },
    /// Optimize a variant at every length from 1 cm up.
    Sweep {
        #[arg(long)]
        platform: String,
        /// Pathways to apply, or `all` for one block per pathway set.
        #[arg(long, conflicts_with = "vanilla")]
        pathways: Option<String>,
        #[arg(long, action = ArgAction::SetTrue)]
        vanilla: bool,
        #[arg(long, default_value_t = 10.0)]
        lmax: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
    },
    /// Emit the platforms × pathway-sets viability grid.
    Grid {
        #[arg(long, default_value_t = 10.0)]
        lmax: f64,
        /// Length at which the duplet columns are reported.
        #[arg(long, default_value_t = 8.0)]
        report_length: f64,
    },
    /// Compare the optimizer with the brute-force oracle on every cell.
    OracleCheck {
        #[arg(long, default_value_t = 10.0)]
        lmax: f64,
    },
}

enum CliError {
    Validation(String),
    Io(String),
    OracleMismatch(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::OracleMismatch(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) | CliError::Io(msg) | CliError::OracleMismatch(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let platforms = load_platforms(&cli)?;
    let optimizer = build_optimizer(&cli, &platforms)?;

    match &cli.command {
        Command::Budget {
            platform,
            pathways,
            vanilla,
            length,
            nlambda,
            br,
        } => {
            let variant = select_variant(&platforms, platform, pathways.as_deref(), *vanilla)?;
            let geometry = geometry(*length)?;
            let n = NonZeroU32::new(*nlambda)
                .ok_or_else(|| CliError::Validation("--nlambda must be at least 1".into()))?;
            if !(*br > 0.0 && *br <= variant.effective.bitrate_max) {
                return Err(CliError::Validation(format!(
                    "--br must be in (0, {}] Gb/s for {}",
                    variant.effective.bitrate_max, variant.effective.name
                )));
            }
            let evaluation = optimizer.model.evaluate(&variant, geometry, n, *br);
            let text = match cli.format.unwrap_or(OutputFormat::Json) {
                OutputFormat::Json => report::to_json(&report::budget_report(
                    &variant,
                    *length,
                    *nlambda,
                    *br,
                    &evaluation,
                )),
                _ => return Err(CliError::Validation("budget reports are JSON only".into())),
            };
            emit(&cli, &text)
        }
        Command::Optimize {
            platform,
            pathways,
            vanilla,
            length,
        } => {
            let variant = select_variant(&platforms, platform, pathways.as_deref(), *vanilla)?;
            let geometry = geometry(*length)?;
            let optimum = optimizer.optimize(&variant, geometry);
            let text = match cli.format.unwrap_or(OutputFormat::Json) {
                OutputFormat::Json => {
                    report::to_json(&report::optimize_report(&variant, *length, &optimum))
                }
                _ => {
                    return Err(CliError::Validation(
                        "optimize reports are JSON only".into(),
                    ))
                }
            };
            emit(&cli, &text)
        }
        Command::Sweep {
            platform,
            pathways,
            vanilla,
            lmax,
            step,
        } => {
            let record = find_platform(&platforms, platform)?;
            let sets = sweep_pathway_sets(pathways.as_deref(), *vanilla)?;
            let stamp = cli.stamp.then(unix_stamp);
            let mut results = Vec::new();
            for set in sets {
                let variant = apply_pathways(&record, set);
                results.push(
                    sweep(&optimizer, &variant, *lmax, *step)
                        .map_err(|e| CliError::Validation(e.to_string()))?,
                );
            }
            let text = match cli.format.unwrap_or(OutputFormat::Plot) {
                // one blank-line-separated block per pathway set
                OutputFormat::Plot => results
                    .iter()
                    .map(|s| report::sweep_plot(s, stamp.as_deref()))
                    .collect::<Vec<_>>()
                    .join("\n"),
                OutputFormat::Json => {
                    if results.len() == 1 {
                        report::to_json(&results[0])
                    } else {
                        report::to_json(&results)
                    }
                }
                OutputFormat::Csv => {
                    return Err(CliError::Validation(
                        "sweep emits plot data or JSON; use --format plot or json".into(),
                    ))
                }
            };
            emit(&cli, &text)
        }
        Command::Grid {
            lmax,
            report_length,
        } => {
            let grid = build_grid(&optimizer, &platforms, *lmax, *report_length)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let text = match cli.format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => report::grid_csv(&grid),
                OutputFormat::Json => report::to_json(&grid),
                OutputFormat::Plot => {
                    return Err(CliError::Validation(
                        "grid emits CSV or JSON; use --format csv or json".into(),
                    ))
                }
            };
            emit(&cli, &text)
        }
        Command::OracleCheck { lmax } => {
            let variants =
                enumerate_variants(&platforms).map_err(|e| CliError::Validation(e.to_string()))?;
            oracle_check(&cli, &optimizer, &variants, *lmax)
        }
    }
}

fn load_platforms(cli: &Cli) -> Result<Vec<FabricationPlatform>, CliError> {
    match &cli.platforms_file {
        Some(path) => Ok(load_config(path)?.platforms),
        None => Ok(builtin_platforms()),
    }
}

fn build_optimizer(cli: &Cli, _platforms: &[FabricationPlatform]) -> Result<Optimizer, CliError> {
    if !cli.min_spacing_linewidths.is_finite() || cli.min_spacing_linewidths <= 0.0 {
        return Err(CliError::Validation(
            "--min-spacing-linewidths must be positive".into(),
        ));
    }
    if cli.coupler_count < 1 {
        return Err(CliError::Validation(
            "--coupler-count must be at least 1".into(),
        ));
    }
    let mut optimizer = Optimizer {
        min_spacing_linewidths: cli.min_spacing_linewidths,
        bitrate_search: if cli.br_sweep {
            BitrateSearch::Sweep
        } else {
            BitrateSearch::FixedMax
        },
        ..Optimizer::default()
    };
    optimizer.model.coupler_count = cli.coupler_count;

    // energy model: platforms file first, dedicated file wins
    if let Some(path) = &cli.platforms_file {
        if let Some(energy) = load_config(path)?.energy_model {
            optimizer.energy = energy;
        }
    }
    if let Some(path) = &cli.energy_model {
        optimizer.energy = load_energy_model(path)?;
    }
    Ok(optimizer)
}

fn find_platform(
    platforms: &[FabricationPlatform],
    name: &str,
) -> Result<FabricationPlatform, CliError> {
    if let Some(found) = platforms.iter().find(|p| p.name.eq_ignore_ascii_case(name)) {
        return Ok(found.clone());
    }
    // built-in aliases still work when no platforms file replaced them
    if platforms == builtin_platforms().as_slice() {
        if let Some(found) = builtin_platform(name) {
            return Ok(found);
        }
    }
    let known: Vec<&str> = platforms.iter().map(|p| p.name.as_str()).collect();
    Err(CliError::Validation(format!(
        "unknown platform `{name}` (known: {})",
        known.join(", ")
    )))
}

fn parse_pathways(text: &str) -> Result<PathwaySet, CliError> {
    text.parse::<PathwaySet>()
        .map_err(|e| CliError::Validation(e.to_string()))
}

fn select_variant(
    platforms: &[FabricationPlatform],
    platform: &str,
    pathways: Option<&str>,
    vanilla: bool,
) -> Result<LinkVariant, CliError> {
    let record = find_platform(platforms, platform)?;
    let set = match (pathways, vanilla) {
        (Some(text), false) => {
            if text.eq_ignore_ascii_case("all") {
                return Err(CliError::Validation(
                    "this command needs a single pathway set, not `all`".into(),
                ));
            }
            parse_pathways(text)?
        }
        (None, _) => PathwaySet::VANILLA,
        (Some(_), true) => unreachable!("clap conflicts_with"),
    };
    Ok(apply_pathways(&record, set))
}

fn sweep_pathway_sets(pathways: Option<&str>, vanilla: bool) -> Result<Vec<PathwaySet>, CliError> {
    match (pathways, vanilla) {
        (Some(text), false) if text.eq_ignore_ascii_case("all") => {
            Ok(PathwaySet::all_sets().to_vec())
        }
        (Some(text), false) => Ok(vec![parse_pathways(text)?]),
        (None, _) => Ok(vec![PathwaySet::VANILLA]),
        (Some(_), true) => unreachable!("clap conflicts_with"),
    }
}

fn geometry(length: f64) -> Result<LinkGeometry, CliError> {
    LinkGeometry::new(length).map_err(|e| CliError::Validation(e.to_string()))
}

fn unix_stamp() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{secs}")
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

fn oracle_check(
    cli: &Cli,
    optimizer: &Optimizer,
    variants: &[LinkVariant],
    lmax: f64,
) -> Result<(), CliError> {
    if lmax < 1.0 {
        return Err(CliError::Validation("--lmax must be at least 1".into()));
    }
    // test hook: lets the harness prove a perturbed selection rule is caught
    let inject_fault = std::env::var("SIPHI_LINK_FAULT_INJECT").as_deref() == Ok("selection");
    let mut cells = 0u32;
    for variant in variants {
        for length in 1..=(lmax.floor() as u32) {
            let geometry = geometry(length as f64)?;
            let fast = optimizer.optimize(variant, geometry);
            let mut oracle = optimizer.brute_force_optimum(variant, geometry);
            if inject_fault && oracle.feasible && oracle.n_lambda > 1 {
                oracle.n_lambda -= 1;
                oracle.aggregate_bw_gbps = oracle.n_lambda as f64 * oracle.br_gbps;
            }
            cells += 1;
            if fast != oracle {
                return Err(CliError::OracleMismatch(format!(
                    "oracle mismatch at {} {} @{length} cm: optimize {:?} vs brute force {:?}",
                    variant.base.name, variant.pathways, fast, oracle
                )));
            }
        }
    }
    emit(cli, &format!("{cells}/{cells} match\n"))
}
