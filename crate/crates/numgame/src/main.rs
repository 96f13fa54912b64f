use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use numgame::commands::{self, agent_kind, AgentRun, Outcome};
use numgame::{Error, Result, RunConfig};
use numgame_core::agent::AgentSpec;
use numgame_core::readout::{Condition, Measurement};
use numgame_core::Task;

/// Number-game hypothesis spaces, Bayesian reference readouts, (alpha, beta) fits
/// and readout metrics.
#[derive(Debug, Parser)]
#[command(name = "numgame", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory [default: $NUMGAME_OUT, then ./numgame-out].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Stimulus file (repeatable); required for bigelow16.
    #[arg(long, global = true)]
    stimuli: Vec<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// KL floor added to reference bins.
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Only read records with this condition (repeatable).
    #[arg(long = "only-condition", global = true, value_parser = parse_condition)]
    only_condition: Vec<Condition>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a hypothesis space, export it and check its counts.
    Space {
        #[arg(long, value_parser = parse_task)]
        task: Task,
        #[arg(long, default_value_t = 100)]
        d: u32,
    },
    /// Emit the (1, 1) Bayesian predictive for every presentation.
    Reference {
        #[arg(long, value_parser = parse_task)]
        task: Task,
        #[arg(long, default_value_t = 100)]
        d: u32,
    },
    /// Check readout files against a manifest of expected cells.
    IngestValidate {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Fit (alpha, beta) to prediction curves.
    Fit {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// full, n1, n2, n3 or n4 (repeatable).
        #[arg(long = "scope")]
        scopes: Vec<String>,
        /// Fit all tasks jointly.
        #[arg(long)]
        pool_tasks: bool,
        /// Drop the observed examples from the fitted targets.
        #[arg(long)]
        exclude_examples: bool,
    },
    /// Compare readouts with reference curves.
    Metrics {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Reference readout files (repeatable, e.g. d=100 and d=200).
        #[arg(long = "reference", required = true)]
        references: Vec<PathBuf>,
    },
    /// Emit readouts from a synthetic agent.
    Agent {
        /// bayesian, map-only, narrowest-compatible or uniform-noise.
        #[arg(long, default_value = "bayesian")]
        kind: String,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Half-width of the additive uniform noise.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_task)]
        task: Task,
        #[arg(long, default_value_t = 100)]
        d: u32,
        /// prediction or generation.
        #[arg(long, default_value = "prediction", value_parser = parse_measurement)]
        measurement: Measurement,
        /// Label budget for generation readouts.
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value = "default", value_parser = parse_condition)]
        condition: Condition,
        #[arg(long)]
        thinking: bool,
        /// Output file name inside the output directory.
        #[arg(long)]
        file: Option<String>,
    },
}

fn parse_task(s: &str) -> std::result::Result<Task, String> {
    s.parse().map_err(|_| format!("unknown task {s:?} (expected tenenbaum99 or bigelow16)"))
}

fn parse_condition(s: &str) -> std::result::Result<Condition, String> {
    s.parse().map_err(|_| format!("unknown condition {s:?}"))
}

fn parse_measurement(s: &str) -> std::result::Result<Measurement, String> {
    s.parse().map_err(|_| format!("unknown measurement {s:?}"))
}

fn resolve_config(global: &Global) -> Result<RunConfig> {
    let mut cfg = match &global.config {
        Some(path) => RunConfig::read(path)?,
        None => RunConfig::default(),
    };
    if global.out.is_some() {
        cfg.out = global.out.clone();
    }
    cfg.stimuli.extend(global.stimuli.iter().cloned());
    if global.workers.is_some() {
        cfg.workers = global.workers;
    }
    if let Some(eps) = global.epsilon {
        cfg.epsilon = eps;
    }
    if !global.only_condition.is_empty() {
        cfg.conditions = global.only_condition.clone();
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<Outcome> {
    let mut cfg = resolve_config(&cli.global)?;
    match cli.command {
        Command::Space { task, d } => commands::space(&cfg, task, d),
        Command::Reference { task, d } => commands::reference(&cfg, task, d),
        Command::IngestValidate { manifest, inputs } => commands::ingest_validate(&cfg, &manifest, &inputs),
        Command::Fit {
            inputs,
            scopes,
            pool_tasks,
            exclude_examples,
        } => {
            if !scopes.is_empty() {
                cfg.scopes = scopes;
            }
            cfg.pool_tasks |= pool_tasks;
            cfg.fit.exclude_examples |= exclude_examples;
            commands::fit(&cfg, &inputs)
        }
        Command::Metrics { inputs, references } => commands::metrics(&cfg, &inputs, &references),
        Command::Agent {
            kind,
            alpha,
            beta,
            noise,
            seed,
            task,
            d,
            measurement,
            k,
            condition,
            thinking,
            file,
        } => {
            let kind = agent_kind(&kind, alpha, beta).ok_or_else(|| Error::Usage(format!("unknown agent kind {kind:?}")))?;
            let run = AgentRun {
                spec: AgentSpec { kind, noise, seed },
                task,
                d,
                measurement,
                k,
                condition,
                thinking,
                file_name: file.unwrap_or_else(|| format!("agent_{}_d{d}_{measurement}.jsonl", task.as_str())),
            };
            commands::agent(&cfg, &run)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            for note in &outcome.notes {
                eprintln!("note: {note}");
            }
            match outcome.failure {
                Some(reason) => {
                    eprintln!("error: {reason}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
