use clap::{Args, Parser, Subcommand};

use dirichlet_br::error::Error;
use dirichlet_br::model::{Dataset, ParamVector};
use dirichlet_br::simulation::{builtin_setting, metrics_csv, run_grid, GridReport};
use dirichlet_br::solver::{fit, SolverConfig};
use dirichlet_br::table::{
    default_columns, parse_methods, read_csv, DataSummary, FitReport,
};
use dirichlet_br::ternary::ternary_svg;

#[derive(Parser)]
#[command(
    name = "dirichlet-br",
    about = "Dirichlet parameter estimation with bias-reducing adjusted score equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit estimators to a CSV of simplex observations
    Fit(FitArgs),
    /// Run the Monte Carlo comparison grid
    Simulate(SimulateArgs),
    /// Emit an SVG ternary plot of 3-part compositions
    Ternary(TernaryArgs),
}

#[derive(Args)]
struct FitArgs {
    /// Input CSV (rows are compositions; optional header line)
    csv_path: String,
    /// Comma-separated subset of: ml, mean-br, median-br
    #[arg(long, default_value = "ml,mean-br,median-br")]
    methods: String,
    /// Wald confidence level
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Rescale each row to sum to one before validation (never fixes zeros)
    #[arg(long)]
    renormalize: bool,
    /// Output format: text or json
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct SimulateArgs {
    /// Built-in setting name (S1, S2, S3, S4); repeatable
    #[arg(long = "setting")]
    settings: Vec<String>,
    /// Inline true parameter vector like "0.5,1.5,2"; repeatable
    #[arg(long = "alpha")]
    alphas: Vec<String>,
    /// Comma-separated sample sizes
    #[arg(long, default_value = "10,20,40")]
    n: String,
    /// Replications per cell
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    /// Master seed for the reproducible stream tree
    #[arg(long, env = "DIRICHLET_BR_SEED", default_value_t = 42)]
    seed: u64,
    /// Wald confidence level
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Write the flat metrics CSV here
    #[arg(long)]
    out_csv: Option<String>,
    /// Write the full JSON report here
    #[arg(long)]
    out_json: Option<String>,
}

#[derive(Args)]
struct TernaryArgs {
    /// Input CSV with exactly 3 columns
    csv_path: String,
    /// Output SVG path
    #[arg(short, long)]
    output: String,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Usage(_) | Error::Domain(_) => 2,
        Error::InvalidEntry { .. }
        | Error::RowSum { .. }
        | Error::Parse(_)
        | Error::Io { .. }
        | Error::DimensionMismatch { .. } => 3,
        Error::Diverged { .. }
        | Error::NoProgress { .. }
        | Error::MaxIterations { .. }
        | Error::NotPositiveDefinite
        | Error::Sampling(_) => 4,
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Ternary(args) => cmd_ternary(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(exit_code(&err));
    }
}

fn cmd_fit(args: FitArgs) -> Result<(), Error> {
    let methods = parse_methods(&args.methods)?;
    if args.format != "text" && args.format != "json" {
        return Err(Error::Usage(format!(
            "unknown format '{}' (expected text or json)",
            args.format
        )));
    }
    let csv = read_csv(&args.csv_path)?;
    let data = if args.renormalize {
        Dataset::renormalized(csv.rows.clone())?
    } else {
        Dataset::new(csv.rows.clone())?
    };
    let config = SolverConfig {
        ci_level: args.level,
        ..SolverConfig::default()
    };
    let mut fits = Vec::new();
    for method in methods {
        fits.push(fit(&data, method, &config)?);
    }
    let report = FitReport {
        data: DataSummary {
            n: data.n_rows(),
            m: data.n_cols(),
            column_means: data.column_means(),
            columns: default_columns(data.n_cols(), csv.headers.as_ref()),
        },
        fits,
    };
    if args.format == "json" {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        print!("{}", report.to_text());
    }
    Ok(())
}

fn parse_usize_list(spec: &str) -> Result<Vec<usize>, Error> {
    let vals: Result<Vec<usize>, _> = spec
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| Error::Usage(format!("invalid sample size '{p}'")))
        })
        .collect();
    let vals = vals?;
    if vals.is_empty() {
        return Err(Error::Usage("no sample sizes given".into()));
    }
    Ok(vals)
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Error> {
    let mut settings: Vec<(String, ParamVector)> = Vec::new();
    for name in &args.settings {
        let alpha = builtin_setting(name)
            .ok_or_else(|| Error::Usage(format!("unknown setting '{name}' (expected S1..S4)")))?;
        settings.push((name.clone(), alpha));
    }
    for (k, spec) in args.alphas.iter().enumerate() {
        let vals: Result<Vec<f64>, _> = spec
            .split(',')
            .map(str::trim)
            .map(|p| {
                p.parse::<f64>()
                    .map_err(|_| Error::Usage(format!("invalid alpha component '{p}'")))
            })
            .collect();
        let alpha = ParamVector::new(vals?)
            .map_err(|e| Error::Usage(format!("invalid alpha '{spec}': {e}")))?;
        settings.push((format!("A{}", k + 1), alpha));
    }
    if settings.is_empty() {
        // default: the full built-in grid
        settings = dirichlet_br::simulation::builtin_settings();
    }
    let n_values = parse_usize_list(&args.n)?;
    if args.reps == 0 {
        return Err(Error::Usage("--reps must be at least 1".into()));
    }

    let report = run_grid(&settings, &n_values, args.reps, args.seed, args.level)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    print_summary(&report);
    if let Some(path) = &args.out_csv {
        std::fs::write(path, metrics_csv(&report.rows)).map_err(|e| Error::Io {
            path: path.clone(),
            message: e.to_string(),
        })?;
    }
    if let Some(path) = &args.out_json {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        std::fs::write(path, json).map_err(|e| Error::Io {
            path: path.clone(),
            message: e.to_string(),
        })?;
    }
    Ok(())
}

fn print_summary(report: &GridReport) {
    println!(
        "{:<8} {:>4} {:<10} {:>4} {:>8} {:>8} {:>8} {:>10} {:>9}",
        "setting", "n", "estimator", "comp", "PU", "RB", "WALD", "reps_used", "failures"
    );
    for row in &report.rows {
        println!(
            "{:<8} {:>4} {:<10} {:>4} {:>8.2} {:>8.2} {:>8.2} {:>10} {:>9}",
            row.setting,
            row.n,
            row.estimator.name(),
            row.component,
            row.pu,
            row.rb,
            row.wald,
            row.reps_used,
            row.failures
        );
    }
    println!(
        "# {} rows in {:.1}s (seed {})",
        report.rows.len(),
        report.wall_time_secs,
        report.config.master_seed
    );
}

fn cmd_ternary(args: TernaryArgs) -> Result<(), Error> {
    let csv = read_csv(&args.csv_path)?;
    if csv.rows[0].len() != 3 {
        return Err(Error::Usage(format!(
            "ternary plots need exactly 3 columns, got {}",
            csv.rows[0].len()
        )));
    }
    let cols = default_columns(3, csv.headers.as_ref());
    let labels = [cols[0].clone(), cols[1].clone(), cols[2].clone()];
    let svg = ternary_svg(&csv.rows, &labels)?;
    std::fs::write(&args.output, svg).map_err(|e| Error::Io {
        path: args.output.clone(),
        message: e.to_string(),
    })?;
    Ok(())
}
