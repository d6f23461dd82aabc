use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qtms_core::gaussian::{covariance_detected, covariance_source, is_entangled, simon_parameter};
use qtms_core::monte_carlo::{
    empirical_false_alarm, mean_and_standard_error, pearson_over_seeds, DetectorStatistic, RngSpec,
};
use qtms_core::noise::FalseAlarmSpec;
use qtms_core::physics::channel_transfer;
use qtms_core::qtms::rho_tmsv;
use qtms_core::scenario::{
    evaluate, load_scenario, report_to_json, run_sweep, table3_report, table_to_csv, table_to_json, ScenarioError,
    SweepAxis, SweepSpec, Table, Table3Row,
};
use qtms_core::Error;

#[derive(Parser)]
#[command(name = "qtms", version, about = "Radar range-equation models for direct, noise and QTMS radars")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Scenario file or preset name (e.g. table3:proposed)
    #[arg(long)]
    scenario: Option<String>,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one scenario
    Eval {
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a scenario over a parameter grid
    Sweep {
        #[command(flatten)]
        common: Common,
        /// `path=v1,v2`, `path=lin:a:b:n` or `path=log:a:b:n`; repeat for a cartesian product
        #[arg(long = "axis", required = true)]
        axes: Vec<String>,
        /// Derived quantities to report (comma separated or repeated)
        #[arg(long = "output", value_delimiter = ',')]
        outputs: Vec<String>,
    },
    /// Reproduce the four-system comparison table
    Table3 {
        #[command(flatten)]
        common: Common,
    },
    /// Monte-Carlo checks of the correlation estimator
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "correlation")]
        mode: SimMode,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Photons per mode of the simulated source (correlation mode)
        #[arg(long, default_value_t = 0.5)]
        photons: f64,
        /// Samples per batch (correlation mode) or per record, M (false-alarm mode)
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Independent batches (correlation mode)
        #[arg(long, default_value_t = 100)]
        seeds: usize,
        /// Target false-alarm probability (false-alarm mode)
        #[arg(long, default_value_t = 0.5)]
        p_fa: f64,
        /// Records (false-alarm mode)
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, value_enum, default_value = "in-phase")]
        statistic: Statistic,
    },
    /// Simon separability parameter of the source and of the detected state
    Entanglement {
        #[command(flatten)]
        common: Common,
        /// Target ranges (m)
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 10.0, 100.0, 1000.0])]
        ranges: Vec<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SimMode {
    Correlation,
    FalseAlarm,
}

#[derive(Clone, Copy, ValueEnum)]
enum Statistic {
    InPhase,
    Complex,
}

enum Failure {
    Validation(String),
    Solver(String),
    Io(String),
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Model(Error::Solver(_)) => Failure::Solver(e.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        ScenarioError::Model(e).into()
    }
}

fn scenario_arg(common: &Common, default: Option<&str>) -> Result<String, Failure> {
    common
        .scenario
        .clone()
        .or(default.map(str::to_string))
        .ok_or_else(|| Failure::Validation("--scenario is required".into()))
}

fn render_table(table: &Table, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Csv => table_to_csv(table)?,
        Format::Json => table_to_json(table)? + "\n",
    })
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval { common } => {
            let s = load_scenario(&scenario_arg(&common, None)?)?;
            let report = evaluate(&s)?;
            let text = match common.format.unwrap_or(Format::Json) {
                Format::Json => report_to_json(&report)? + "\n",
                Format::Csv => {
                    let keys: Vec<String> = report.derived.keys().map(|k| k.to_string()).collect();
                    let table = Table {
                        labels: Some(("quantity".into(), keys)),
                        columns: vec!["value".into()],
                        rows: report.derived.values().map(|d| vec![d.value]).collect(),
                    };
                    render_table(&table, Format::Csv)?
                }
            };
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            emit(&common, &text)
        }
        Command::Sweep { common, axes, outputs } => {
            let s = load_scenario(&scenario_arg(&common, None)?)?;
            let axes = axes
                .iter()
                .map(|a| a.parse::<SweepAxis>())
                .collect::<Result<Vec<_>, _>>()?;
            let table = run_sweep(&s, &SweepSpec { axes, outputs })?;
            emit(&common, &render_table(&table, common.format.unwrap_or(Format::Csv))?)
        }
        Command::Table3 { common } => {
            let rows = table3_report()?;
            let text = render_table(&Table3Row::to_table(&rows), common.format.unwrap_or(Format::Csv))?;
            emit(&common, &text)
        }
        Command::Simulate {
            common,
            mode,
            seed,
            photons,
            samples,
            seeds,
            p_fa,
            trials,
            statistic,
        } => {
            let rng = RngSpec::new(seed);
            let table = match mode {
                SimMode::Correlation => {
                    let cov = covariance_source(photons)?;
                    let est = pearson_over_seeds(&cov, samples, seeds, &rng)?;
                    let (mean, se) = mean_and_standard_error(&est);
                    let theory = rho_tmsv(photons)?;
                    Table {
                        labels: None,
                        columns: ["photons", "samples", "seeds", "mean_rho", "standard_error", "rho_tmsv", "z_score"]
                            .map(String::from)
                            .to_vec(),
                        rows: vec![[photons, samples as f64, seeds as f64, mean, se, theory, (mean - theory) / se]
                            .map(Some)
                            .to_vec()],
                    }
                }
                SimMode::FalseAlarm => {
                    let stat = match statistic {
                        Statistic::InPhase => DetectorStatistic::InPhase,
                        Statistic::Complex => DetectorStatistic::Complex,
                    };
                    let est = empirical_false_alarm(samples, trials, &FalseAlarmSpec::new(p_fa)?, stat, &rng)?;
                    Table {
                        labels: None,
                        columns: ["p_fa", "samples", "trials", "rho_th", "observed_rate", "expected_rate", "ci_halfwidth"]
                            .map(String::from)
                            .to_vec(),
                        rows: vec![[
                            p_fa,
                            samples as f64,
                            trials as f64,
                            est.threshold,
                            est.observed_rate,
                            est.expected_rate,
                            est.ci_halfwidth,
                        ]
                        .map(Some)
                        .to_vec()],
                    }
                }
            };
            emit(&common, &render_table(&table, common.format.unwrap_or(Format::Csv))?)
        }
        Command::Entanglement { common, ranges } => {
            let s = load_scenario(&scenario_arg(&common, Some("table3:proposed"))?)?;
            let cfg = s
                .chain_config()?
                .ok_or_else(|| Failure::Validation("scenario has no [chain] section".into()))?;
            let link = s.link.build()?;
            let src = covariance_source(cfg.source_photons)?;
            let mut labels = vec!["source".to_string()];
            let mut rows = vec![vec![None, None, Some(src.s1), Some(src.s2), Some(src.cq), Some(simon_parameter(&src)), Some(f64::from(u8::from(is_entangled(&src))))]];
            for r in ranges {
                let eta = channel_transfer(&link, r)?.min(1.0);
                let c = covariance_detected(&cfg, eta)?;
                labels.push("detected".into());
                rows.push(vec![
                    Some(r),
                    Some(eta),
                    Some(c.s1),
                    Some(c.s2),
                    Some(c.cq),
                    Some(simon_parameter(&c)),
                    Some(f64::from(u8::from(is_entangled(&c)))),
                ]);
            }
            let table = Table {
                labels: Some(("state".into(), labels)),
                columns: ["range", "eta", "s1", "s2", "cq", "simon_f", "entangled"].map(String::from).to_vec(),
                rows,
            };
            emit(&common, &render_table(&table, common.format.unwrap_or(Format::Csv))?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(m)) | Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
