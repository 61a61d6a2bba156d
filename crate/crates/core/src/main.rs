use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use headcount::engine::{self, io, CalibrationGrid, ConfigError, EngineConfig, EngineError};
use headcount::simulator::{generate, scenario};

#[derive(Parser)]
#[command(
    name = "headcount",
    version,
    about = "Doorway people counting from head detections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count entries and exits in a detection stream.
    Run {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        events_out: Option<PathBuf>,
        #[arg(long)]
        report_out: Option<PathBuf>,
    },
    /// Write a synthetic detection stream and its ground truth.
    Simulate {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        truth_out: Option<PathBuf>,
    },
    /// Time the engine on simulated scenarios.
    Bench {
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "clean_entry,crossing_pair,multi_3"
        )]
        scenarios: Vec<String>,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Rank tracker thresholds by accuracy on simulated scenarios.
    Calibrate {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, value_delimiter = ',')]
        scenarios: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4")]
        seeds: Vec<u64>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// An error paired with the exit code it maps to.
struct Failure(i32, anyhow::Error);

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure(e.exit_code(), e.into())
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure(2, e.into())
    }
}

fn input_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure(1, e.into())
}

fn load_config(path: Option<&Path>) -> Result<EngineConfig, Failure> {
    Ok(match path {
        Some(p) => EngineConfig::load(p)?,
        None => EngineConfig::default(),
    })
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            input,
            config,
            events_out,
            report_out,
        } => {
            let config = load_config(config.as_deref())?;
            let file = File::open(&input)
                .with_context(|| format!("cannot open {}", input.display()))
                .map_err(input_err)?;
            let out = engine::run(BufReader::new(file), config)?;
            if let Some(path) = events_out {
                io::create(&path)
                    .and_then(|w| io::write_events(w, out.events()))
                    .with_context(|| format!("cannot write {}", path.display()))
                    .map_err(input_err)?;
            }
            if let Some(path) = report_out {
                let text = serde_json::to_string_pretty(&out.report).map_err(input_err)?;
                std::fs::write(&path, text + "\n")
                    .with_context(|| format!("cannot write {}", path.display()))
                    .map_err(input_err)?;
            }
            println!(
                "{}",
                serde_json::to_string(&out.report.ledger).map_err(input_err)?
            );
        }
        Command::Simulate {
            scenario: name,
            seed,
            out,
            truth_out,
        } => {
            let sim = generate(&scenario(&name, seed).map_err(input_err)?).map_err(input_err)?;
            io::create(&out)
                .and_then(|w| io::write_frames(w, &sim.frames))
                .with_context(|| format!("cannot write {}", out.display()))
                .map_err(input_err)?;
            if let Some(path) = truth_out {
                io::create(&path)
                    .and_then(|w| io::write_truth(w, &sim.truth.events))
                    .with_context(|| format!("cannot write {}", path.display()))
                    .map_err(input_err)?;
            }
            println!(
                "{name} seed {seed}: {} frames, truth {} in / {} out",
                sim.frames.len(),
                sim.truth.final_ins,
                sim.truth.final_outs
            );
        }
        Command::Bench {
            scenarios,
            reps,
            config,
        } => {
            let config = load_config(config.as_deref())?;
            let specs = scenarios
                .iter()
                .map(|n| scenario(n, 0))
                .collect::<Result<Vec<_>, _>>()
                .map_err(input_err)?;
            let report = engine::bench(&specs, reps, config)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).map_err(input_err)?
            );
        }
        Command::Calibrate {
            grid,
            scenarios,
            seeds,
            config,
        } => {
            let config = load_config(config.as_deref())?;
            let text = std::fs::read_to_string(&grid)
                .with_context(|| format!("cannot read {}", grid.display()))
                .map_err(|e| Failure(2, e))?;
            let grid = CalibrationGrid::from_toml(&text)?;
            let rows = engine::calibrate(&grid, &scenarios, &seeds, &config)?;
            println!(
                "{:>6} {:>6} {:>4} {:>8} {:>6} {:>9}",
                "T", "D", "E", "observed", "error", "accuracy"
            );
            for r in rows {
                println!(
                    "{:>6.3} {:>6.3} {:>4} {:>8} {:>6} {:>8.2}%",
                    r.feature_threshold,
                    r.spatial_threshold,
                    r.miss_limit,
                    r.total_observations,
                    r.error,
                    r.accuracy_percent
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(code as u8)
        }
    }
}
