//! `mixrisk`: solve, verify and validate scenario files.
//!
//! Exit codes: 0 success, 1 I/O, 2 parse or configuration, 3 solver,
//! 4 numerical.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mixrisk::quadrature::Quadrature;
use mixrisk::report::{render_convergence, render_table, run_report, write_atomic};
use mixrisk::saving::precautionary_report;
use mixrisk::scenario_file::{parse_scenario_file, ReportKind, ScenarioFile};
use mixrisk::taylor::{epsilon_scaling_study, ThresholdReport};
use mixrisk::utility::validate_utility;
use mixrisk::{saving, Error, Result};

const NODES_ENV: &str = "MIXRISK_QUAD_NODES";

#[derive(Parser)]
#[command(name = "mixrisk", version, about = "Optimal saving under mixed fuzzy/random risk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every situation and report the precautionary-saving indicators.
    Solve {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Overrides the document's `outputs.reports`.
        #[arg(long, value_delimiter = ',')]
        outputs: Option<Vec<OutputArg>>,
        /// Overrides the document's `outputs.csv_path` (single file only).
        #[arg(long)]
        csv_path: Option<PathBuf>,
    },
    /// Solve, then compare Taylor predictions with quadrature over shrinking risks.
    Verify {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025")]
        epsilons: Vec<f64>,
    },
    /// Parse the document and check both utilities.
    Validate { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Table,
    Csv,
}

impl From<OutputArg> for ReportKind {
    fn from(o: OutputArg) -> Self {
        match o {
            OutputArg::Table => ReportKind::Table,
            OutputArg::Csv => ReportKind::Csv,
        }
    }
}

fn default_nodes() -> Result<usize> {
    match std::env::var(NODES_ENV) {
        Err(_) => Ok(Quadrature::DEFAULT_NODES),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 2 => Ok(n),
            _ => Err(Error::Config(format!("{NODES_ENV} must be an integer >= 2, got `{v}`"))),
        },
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn solve_one(path: &Path, outputs: Option<&[ReportKind]>, csv_path: Option<&Path>, nodes: usize) -> Result<String> {
    let (file, scenario) = parse_scenario_file(&read(path)?, nodes)?;
    let outputs = outputs.unwrap_or(&file.outputs.reports);
    let rendered = run_report(&scenario, outputs)?;
    let mut out = rendered.table.unwrap_or_default();
    if let Some(csv) = rendered.csv {
        match csv_path.map(Path::to_path_buf).or(file.outputs.csv_path.as_ref().map(PathBuf::from)) {
            Some(p) => write_atomic(&p, &csv)?,
            None => out.push_str(&csv),
        }
    }
    Ok(out)
}

fn solve(files: &[PathBuf], outputs: Option<Vec<OutputArg>>, csv_path: Option<PathBuf>) -> Result<Vec<Result<String>>> {
    if csv_path.is_some() && files.len() > 1 {
        return Err(Error::Config("--csv-path needs a single scenario file".into()));
    }
    let nodes = default_nodes()?;
    let outputs: Option<Vec<ReportKind>> = outputs.map(|o| o.into_iter().map(ReportKind::from).collect());
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = files
            .iter()
            .map(|f| {
                let outputs = outputs.as_deref();
                let csv_path = csv_path.as_deref();
                scope.spawn(move || solve_one(f, outputs, csv_path, nodes))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|p| std::panic::resume_unwind(p)))
            .collect()
    });
    Ok(results)
}

fn verify(path: &Path, epsilons: &[f64]) -> Result<String> {
    let (_, scenario) = parse_scenario_file(&read(path)?, default_nodes()?)?;
    let report = precautionary_report(&scenario)?;
    let threshold = ThresholdReport::matching(scenario.config()).transpose()?;
    let mut out = render_table(&report, threshold.as_ref());
    out.push('\n');
    let study = epsilon_scaling_study(&scenario, epsilons)?;
    out.push_str(&render_convergence(&study));
    Ok(out)
}

/// Prints the utility checks as it goes, so they survive a later failure.
fn validate(path: &Path) -> Result<()> {
    let file = ScenarioFile::from_json(&read(path)?)?;
    let nodes = default_nodes()?;
    let config = file.to_config(nodes)?;
    for (role, u) in [("utility_u", &config.u), ("utility_v", &config.v)] {
        let r = validate_utility(u, saving::VALIDATION_GRID)?;
        println!(
            "{role}: {} on {} grid points: increasing in y {}, increasing in x {}, concave {}, derivative check ratio {:.3e}, override {}",
            r.family,
            r.points_checked,
            r.increasing_in_income,
            r.increasing_in_background,
            r.strictly_concave,
            r.max_derivative_discrepancy,
            r.monotonicity_override
        );
        for w in &r.warnings {
            println!("  warning: {w}");
        }
    }
    let scenario = file.to_scenario(nodes)?;
    let (lo, hi) = scenario.feasible_interval();
    println!("scenario ok: model {}, feasible saving [{lo}, {hi}]", scenario.kind());
    Ok(())
}

fn report_error(context: Option<&Path>, e: &Error) -> ExitCode {
    match context {
        Some(p) => eprintln!("error [{}] {}: {e}", e.category(), p.display()),
        None => eprintln!("error [{}]: {e}", e.category()),
    }
    ExitCode::from(e.category().exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve { files, outputs, csv_path } => match solve(&files, outputs, csv_path) {
            Err(e) => report_error(None, &e),
            Ok(results) => {
                let many = files.len() > 1;
                let mut code = ExitCode::SUCCESS;
                let mut failed = false;
                for (path, r) in files.iter().zip(results) {
                    match r {
                        Ok(text) => {
                            if many {
                                println!("== {} ==", path.display());
                            }
                            print!("{text}");
                        }
                        Err(e) => {
                            let c = report_error(Some(path), &e);
                            if !failed {
                                code = c;
                                failed = true;
                            }
                        }
                    }
                }
                code
            }
        },
        Command::Verify { file, epsilons } => match verify(&file, &epsilons) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => report_error(Some(&file), &e),
        },
        Command::Validate { file } => match validate(&file) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => report_error(Some(&file), &e),
        },
    }
}
