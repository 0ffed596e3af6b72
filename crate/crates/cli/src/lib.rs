//! Driver behind the `qnetk` binary.
//!
//! Exit codes: 0 when every `expect:` annotation is met, 1 on a verdict
//! mismatch, 2 on any operational error.

mod dot;
mod relations;
mod report;
mod trace;

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use qnetk::protocols::DEFAULT_SAMPLES;
use qnetk::{build_graph, parse_network_file, BuildOptions, ConfigGraph, Network, Sample};

pub use report::{FormulaReport, GraphSummary, NodeVerdict, RunReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qnetk",
    version,
    about = "Epistemic model checker for quantum network protocols"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every formula of a `.qf` file at its selected nodes.
    Check {
        network: PathBuf,
        formulas: PathBuf,
        /// Print the run report as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Print the configuration graph as Graphviz DOT.
    Graph {
        network: PathBuf,
        /// Overlay an agent's possibility classes (repeatable; the first is
        /// drawn solid, the second dashed).
        #[arg(long = "classes", value_name = "AGENT")]
        classes: Vec<String>,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// List an agent's possibility classes.
    Relations {
        network: PathBuf,
        agent: String,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Print every maximal path from the selected nodes.
    Trace {
        network: PathBuf,
        selector: String,
        #[command(flatten)]
        build: BuildArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    /// Comma-separated sample aliases fed into every quantum input
    /// (0, 1, plus, minus, plusi, minusi).
    #[arg(long, value_name = "LIST")]
    pub samples: Option<String>,
    /// State comparison tolerance.
    #[arg(long, value_name = "REAL", default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long = "max-nodes", value_name = "N", default_value_t = 100_000)]
    pub max_nodes: usize,
}

/// A parsed network with its explored graph.
pub struct Loaded {
    pub network: Network,
    pub graph: ConfigGraph,
    pub samples: Vec<String>,
    pub tol: f64,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn load(path: &Path, build: &BuildArgs) -> Result<Loaded> {
    let text = read(path)?;
    let network: Network = parse_network_file(&path.display().to_string(), &text)?;
    if !(build.tol.is_finite() && build.tol >= 0.0) {
        bail!("--tol must be a non-negative number, got {}", build.tol);
    }
    let labels: Vec<String> = if network.quantum_inputs().is_empty() {
        Vec::new()
    } else {
        match &build.samples {
            Some(list) => list.split(',').map(|s| s.trim().to_string()).collect(),
            None => DEFAULT_SAMPLES.iter().map(|s| s.to_string()).collect(),
        }
    };
    let samples = labels
        .iter()
        .map(|l| Sample::named(l).ok_or_else(|| anyhow!("unknown sample alias `{l}`")))
        .collect::<Result<Vec<_>>>()?;
    let mut options = BuildOptions::default();
    options.tol.compare = build.tol;
    options.max_nodes = build.max_nodes;
    let graph = build_graph(&network, &samples, &options)?;
    Ok(Loaded {
        network,
        graph,
        samples: labels,
        tol: build.tol,
    })
}

/// Runs one command, writing its normal output to `out`, and returns the
/// exit code. Operational failures come back as `Err` (exit code 2).
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<u8> {
    match &cli.command {
        Command::Check {
            network,
            formulas,
            json,
            build,
        } => {
            let started = std::time::Instant::now();
            let loaded = load(network, build)?;
            let qf = read(formulas)?;
            let file =
                qnetk::parse_formula_file(&formulas.display().to_string(), &qf, &loaded.network)?;
            let mut report = report::run_report(&loaded, &file)?;
            report.elapsed_us = started.elapsed().as_micros() as u64;
            if *json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                report::write_text(&report, out)?;
            }
            Ok(if report.all_passed {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            })
        }
        Command::Graph {
            network,
            classes,
            build,
        } => {
            let loaded = load(network, build)?;
            let text = dot::render(&loaded, classes)?;
            out.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Relations {
            network,
            agent,
            json,
            build,
        } => {
            let loaded = load(network, build)?;
            relations::write(&loaded, agent, *json, out)?;
            Ok(EXIT_OK)
        }
        Command::Trace {
            network,
            selector,
            build,
        } => {
            let loaded = load(network, build)?;
            trace::write(&loaded, selector, out)?;
            Ok(EXIT_OK)
        }
    }
}
