//! Scenario runner for Gaussian packet dynamics under the lambda-coupled
//! nonlinear Schrodinger equation: run a config file or a named preset,
//! sweep coupling values, and write plot-ready CSV/JSON artifacts.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use bohmflow::scenario::{
    preset, preset_names, sweep_lambda, OutputFormat, RunOptions, ScenarioConfig,
};

#[derive(Parser)]
#[command(name = "bohmflow", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config file or a named preset.
    Run {
        /// Path to a TOML scenario config, or a preset name (see `presets`).
        target: String,
        /// Output directory (defaults to ./bohmflow-out).
        #[arg(long, env = "BOHMFLOW_OUT")]
        out: Option<PathBuf>,
        /// Exit nonzero when the Bohmian non-crossing audit reports violations.
        #[arg(long)]
        strict_audits: bool,
        /// Override the integration step.
        #[arg(long)]
        dt: Option<f64>,
        /// Override the coupling with a value or comma-separated sweep list.
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<f64>>,
        /// Output format for trajectory/node/density artifacts.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// List the built-in presets.
    Presets,
    /// Print a preset's fully expanded configuration as TOML.
    Show {
        /// Preset name.
        preset: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

fn load_target(target: &str) -> Result<(ScenarioConfig, Option<String>)> {
    if let Some(config) = preset(target) {
        return Ok((config, Some(target.to_string())));
    }
    let path = PathBuf::from(target);
    if !path.exists() {
        bail!(
            "`{target}` is neither a preset (see `bohmflow presets`) nor an existing config file"
        );
    }
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let config =
        ScenarioConfig::from_toml(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok((config, None))
}

fn cmd_run(
    target: &str,
    out: Option<PathBuf>,
    strict_audits: bool,
    dt: Option<f64>,
    lambda: Option<Vec<f64>>,
    format: Format,
) -> Result<ExitCode> {
    let (mut config, preset_name) = load_target(target)?;
    if let Some(dt) = dt {
        config.integration.dt = dt;
    }
    if let Some(values) = lambda {
        config = config.with_lambda(&values);
    }
    let out_dir = out.unwrap_or_else(|| PathBuf::from("bohmflow-out"));
    let options = RunOptions::new(&out_dir).with_format(format.into());

    let sweep = sweep_lambda(&config, preset_name.as_deref(), &options)?;
    let mut audit_failed = false;
    let mut run_failed = false;
    for artifact in &sweep.runs {
        let m = &artifact.manifest;
        for notice in &m.notices {
            eprintln!("notice [lambda = {}]: {notice}", m.lambda);
        }
        match (&m.failure, &artifact.summary) {
            (Some(failure), _) => {
                eprintln!("lambda = {}: FAILED: {failure}", m.lambda);
                run_failed = true;
            }
            (None, Some(s)) => {
                println!(
                    "lambda = {}: final width {:.6}, min width {:.6}, \
                     non-crossing violations {}{}",
                    s.lambda,
                    s.final_width,
                    s.min_width,
                    s.bohm_violations,
                    s.node_spacing
                        .map(|v| format!(", node spacing {v:.6}"))
                        .unwrap_or_default()
                );
                if s.bohm_violations > 0 {
                    audit_failed = true;
                }
            }
            (None, None) => {}
        }
    }
    if let Some(summary) = &sweep.summary_file {
        println!("sweep summary: {}", summary.display());
    }
    println!("artifacts in {}", out_dir.display());

    if run_failed {
        return Ok(ExitCode::from(1));
    }
    if strict_audits && audit_failed {
        eprintln!("strict audits: Bohmian ordering violations detected");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            target,
            out,
            strict_audits,
            dt,
            lambda,
            format,
        } => cmd_run(&target, out, strict_audits, dt, lambda, format),
        Command::Presets => {
            for name in preset_names() {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Show { preset: name } => match preset(&name) {
            Some(config) => {
                print!("{}", config.to_toml());
                Ok(ExitCode::SUCCESS)
            }
            None => Err(anyhow::anyhow!(
                "unknown preset `{name}` (see `bohmflow presets`)"
            )),
        },
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
