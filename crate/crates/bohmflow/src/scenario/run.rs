//! The artifact-producing runner: simulate a scenario at one coupling value
//! (or a sweep) and write trajectory, node, density, and audit files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{config_err, Placement, ScenarioConfig, ScenarioError};
use crate::analytic::AnalyticCase;
use crate::gaussian::{Constants, GaussianState};
use crate::heller::{self, IntegrationControls, HARMONIC_LAMBDA_LIMIT};
use crate::potential::Potential;
use crate::superposition::{detect_nodes, NodeReport, ScanWindow, SuperpositionState};
use crate::trajectory::{
    analytic_ensemble, classical_ensemble, ensemble_starts, integrate_ensemble, non_crossing_audit,
    quantile_offsets, uniform_offsets, velocity_single, ClassicalStart, CrossingReport, FieldSpec,
    PathLabel, PathStart, TrajectoryEnsemble,
};

/// Cap on `grid.nx * stored time slices` for density maps.
const MAX_GRID_CELLS: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

impl RunOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        RunOptions {
            out_dir: out_dir.into(),
            format: OutputFormat::Csv,
        }
    }

    pub fn with_format(mut self, format: OutputFormat) -> Self {
        self.format = format;
        self
    }
}

/// Everything a single-coupling simulation produces, before any file I/O.
#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    pub lambda: f64,
    pub times: Vec<f64>,
    /// Parameter series per packet at the stored times.
    pub packet_series: Vec<Vec<GaussianState>>,
    /// Packet widths per packet at the stored times (well-defined even at
    /// analytic focal instants).
    pub widths: Vec<Vec<f64>>,
    pub bohmian: TrajectoryEnsemble,
    pub classical: Option<TrajectoryEnsemble>,
    pub bohm_audit: CrossingReport,
    pub classical_audit: Option<CrossingReport>,
    /// Node report at the instant of maximum packet overlap.
    pub nodes: Option<NodeReport>,
    /// Node reports at every stored time (when node output is requested).
    pub nodes_series: Vec<NodeReport>,
    pub expected_node_spacing: Option<f64>,
    pub notices: Vec<String>,
}

/// One row of the sweep summary.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub lambda: f64,
    pub final_width: f64,
    pub min_width: f64,
    pub node_spacing: Option<f64>,
    pub expected_node_spacing: Option<f64>,
    pub bohm_violations: usize,
    pub classical_violations: Option<usize>,
    pub node_deflections: usize,
    pub max_speed: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub preset: Option<String>,
    pub lambda: f64,
    pub config: ScenarioConfig,
    pub notices: Vec<String>,
    pub failure: Option<String>,
    pub files: Vec<String>,
    pub timings_ms: TimingRecord,
}

#[derive(Debug, Clone, Serialize)]
pub struct TimingRecord {
    pub simulate: u64,
    pub write: u64,
}

#[derive(Debug, Clone)]
pub struct RunArtifact {
    pub manifest: Manifest,
    pub files: Vec<PathBuf>,
    pub summary: Option<RunSummary>,
}

/// Simulate one coupling value without touching the filesystem.
pub fn simulate(config: &ScenarioConfig, lambda: f64) -> Result<SimulationOutcome, ScenarioError> {
    config.validate()?;
    let constants = config.constants;
    let potential = config.potential.build()?;
    let packets0: Vec<GaussianState> = config
        .packets
        .iter()
        .map(|p| p.build(&constants))
        .collect::<Result<_, _>>()?;
    let controls = IntegrationControls {
        dt: config.integration.dt,
        t_final: config.integration.t_final,
        lambda,
        store_every: config.integration.store_every,
    };
    controls.validate().map_err(ScenarioError::Physics)?;
    let mut notices = Vec::new();

    let offsets = match config.ensemble.placement {
        Placement::Uniform => uniform_offsets(config.ensemble.count, config.ensemble.span_sigma),
        Placement::Quantile => quantile_offsets(config.ensemble.count),
    };
    let starts = ensemble_starts(&packets0, &offsets, &constants);

    let analytic_route =
        matches!(potential, Potential::Harmonic { .. }) && lambda > HARMONIC_LAMBDA_LIMIT;

    let mut analytic_cases: Option<Vec<AnalyticCase>> = None;
    let (times, packet_series, widths, bohmian) = if analytic_route {
        let omega = match potential {
            Potential::Harmonic { omega } => omega,
            _ => unreachable!(),
        };
        notices.push(format!(
            "harmonic coupling lambda = {lambda} exceeds the fixed-step limit {HARMONIC_LAMBDA_LIMIT}; \
             propagating with the analytic lambda = 1 solution"
        ));
        let cases: Vec<AnalyticCase> = packets0
            .iter()
            .map(|p| AnalyticCase::HarmonicClassical {
                x0: p.x,
                p0: p.p,
                alpha0: p.alpha,
                omega,
            })
            .collect();
        // a mirror pair whose centroids reach the axis exactly at the focal
        // instant (p0 = 2 alpha0_r x0): the axis is a streamline, so a path
        // hands over to the outgoing packet at the crossing and its position
        // is side * |G(t)| * |x(0)| (same in-packet quantile, folded factor)
        let foldable_pair = packets0.len() == 2
            && (packets0[0].x + packets0[1].x).abs() < 1e-12
            && (packets0[0].p + packets0[1].p).abs() < 1e-12
            && packets0[0].alpha == packets0[1].alpha
            && (packets0[0].p - 2.0 * packets0[0].alpha.re * packets0[0].x).abs() < 1e-12;
        if packets0.len() == 2 {
            let d = (packets0[0].x - packets0[1].x).abs();
            let sigma = packets0[0]
                .sigma(&constants)
                .max(packets0[1].sigma(&constants));
            let bound = (-d * d / (8.0 * sigma * sigma)).exp();
            if foldable_pair {
                notices.push(format!(
                    "two-packet analytic propagation hands each path to the outgoing packet at \
                     the axis crossing (x(t) = sign(x0) |G(t)| |x(0)|, keeping the in-packet \
                     quantile); the neglected interference cross term is bounded by \
                     exp(-d^2/8 sigma^2) = {bound:.3e}"
                ));
            } else {
                notices.push(format!(
                    "two-packet analytic propagation treats the paths of each packet \
                     independently; the neglected cross term is bounded by \
                     exp(-d^2/8 sigma^2) = {bound:.3e}"
                ));
            }
        }

        let n_steps = (controls.t_final / controls.dt).round() as usize;
        let times: Vec<f64> = crate::trajectory::stored_indices(n_steps, controls.store_every)
            .into_iter()
            .map(|k| k as f64 * controls.dt)
            .collect();

        let mut packet_series = Vec::new();
        let mut widths = Vec::new();
        for case in &cases {
            let series: Vec<GaussianState> = times
                .iter()
                .map(|&t| case.state_at(t, &constants))
                .collect::<Result<_, _>>()
                .map_err(ScenarioError::Physics)?;
            let width: Vec<f64> = times
                .iter()
                .map(|&t| case.width_at(t, &constants))
                .collect::<Result<_, _>>()
                .map_err(ScenarioError::Physics)?;
            packet_series.push(series);
            widths.push(width);
        }

        let mut merged: Option<TrajectoryEnsemble> = None;
        for (k, case) in cases.iter().enumerate() {
            let sub: Vec<PathStart> = starts
                .iter()
                .copied()
                .filter(|s| s.label.packet == k)
                .collect();
            let mut ens = analytic_ensemble(case, &sub, &times, &constants)
                .map_err(ScenarioError::Physics)?;
            if foldable_pair {
                let factors: Vec<f64> = times
                    .iter()
                    .map(|&t| case.trajectory_factor(t, &constants))
                    .collect::<Result<_, _>>()
                    .map_err(ScenarioError::Physics)?;
                for (path, start) in ens.paths.iter_mut().zip(&sub) {
                    let side = start.x.signum();
                    let r = start.x.abs();
                    for (x, &f) in path.iter_mut().zip(&factors) {
                        *x = side * f * r;
                    }
                }
            }
            merged = Some(match merged {
                None => ens,
                Some(mut acc) => {
                    acc.paths.extend(ens.paths);
                    acc.labels.extend(ens.labels);
                    acc
                }
            });
        }
        let bohmian = merged.expect("at least one packet");
        analytic_cases = Some(cases);
        (times, packet_series, widths, bohmian)
    } else {
        let field = match packets0.len() {
            1 => FieldSpec::Single(packets0[0]),
            _ => FieldSpec::Superposition(
                SuperpositionState::new(packets0.clone(), &constants)
                    .map_err(ScenarioError::Physics)?,
            ),
        };
        let bohmian = integrate_ensemble(&starts, &field, &potential, &controls, &constants)
            .map_err(ScenarioError::Physics)?;
        let mut packet_series = Vec::new();
        let mut widths = Vec::new();
        for packet in &packets0 {
            let series = heller::integrate(packet, &controls, &potential, &constants)
                .map_err(ScenarioError::Physics)?;
            widths.push(series.iter().map(|s| s.sigma(&constants)).collect());
            packet_series.push(series);
        }
        let times = bohmian.times.clone();
        (times, packet_series, widths, bohmian)
    };

    let classical = if config.outputs.classical {
        let span = config.ensemble.span_sigma;
        let mut cstarts = Vec::new();
        for (k, packet) in packets0.iter().enumerate() {
            let sigma = packet.sigma(&constants);
            for &off in &[-span, 0.0, span] {
                let x = packet.x + off * sigma;
                cstarts.push(ClassicalStart {
                    x,
                    p: constants.mass * velocity_single(packet, x, &constants),
                    label: PathLabel {
                        packet: k,
                        offset_sigma0: off,
                    },
                });
            }
        }
        Some(
            classical_ensemble(&cstarts, &potential, &controls, &constants)
                .map_err(ScenarioError::Physics)?,
        )
    } else {
        None
    };

    let bohm_audit = non_crossing_audit(&bohmian);
    let classical_audit = classical.as_ref().map(non_crossing_audit);

    let (nodes, nodes_series) = if packets0.len() == 2 && config.outputs.nodes {
        let series: Vec<NodeReport> = (0..times.len())
            .map(|k| node_report_for(&packet_series[0][k], &packet_series[1][k], &constants))
            .collect::<Result<_, _>>()?;
        // nodes are exact only at the exact overlap instant, which rarely
        // falls on the stored grid; refine it before reporting
        let refined = refined_overlap_report(
            &times,
            &packet_series,
            analytic_cases.as_deref(),
            lambda,
            &potential,
            &constants,
        )?;
        (Some(refined), series)
    } else {
        (None, Vec::new())
    };

    Ok(SimulationOutcome {
        lambda,
        times,
        packet_series,
        widths,
        bohmian,
        classical,
        bohm_audit,
        classical_audit,
        nodes,
        nodes_series,
        expected_node_spacing: config.expected_node_spacing(),
        notices,
    })
}

fn node_report_for(
    a: &GaussianState,
    b: &GaussianState,
    constants: &Constants,
) -> Result<NodeReport, ScenarioError> {
    let sup = SuperpositionState::new(vec![*a, *b], constants).map_err(ScenarioError::Physics)?;
    let sigma = a.sigma(constants).max(b.sigma(constants));
    let center = 0.5 * (a.x + b.x);
    let half = 0.5 * (a.x - b.x).abs() + 4.0 * sigma;
    Ok(detect_nodes(
        &sup,
        &ScanWindow::new(center - half, center + half),
        constants,
    ))
}

/// Locate the instant of maximum packet overlap between stored samples and
/// report the nodes there. Centroids follow the classical equations, so the
/// separation is smooth; the bracket around the best stored sample is
/// searched with finely re-stepped parameter states.
fn refined_overlap_report(
    times: &[f64],
    packet_series: &[Vec<GaussianState>],
    analytic_cases: Option<&[AnalyticCase]>,
    lambda: f64,
    potential: &Potential,
    constants: &Constants,
) -> Result<NodeReport, ScenarioError> {
    let k_star = (0..times.len())
        .min_by(|&a, &b| {
            let da = (packet_series[0][a].x - packet_series[1][a].x).abs();
            let db = (packet_series[0][b].x - packet_series[1][b].x).abs();
            da.partial_cmp(&db).unwrap()
        })
        .expect("non-empty time grid");
    let k_lo = k_star.saturating_sub(1);
    let k_hi = (k_star + 1).min(times.len() - 1);
    let (t_lo, t_hi) = (times[k_lo], times[k_hi]);

    let pair_at = |t: f64| -> Result<(GaussianState, GaussianState), ScenarioError> {
        if let Some(cases) = analytic_cases {
            let a = cases[0]
                .state_at(t, constants)
                .map_err(ScenarioError::Physics)?;
            let b = cases[1]
                .state_at(t, constants)
                .map_err(ScenarioError::Physics)?;
            return Ok((a, b));
        }
        // re-step from the stored bracket edge in fine increments
        let steps = 32;
        let h = (t - t_lo) / steps as f64;
        let mut a = packet_series[0][k_lo];
        let mut b = packet_series[1][k_lo];
        if h != 0.0 {
            for _ in 0..steps {
                a = heller::rk4_step(&a, h, lambda, potential, constants);
                b = heller::rk4_step(&b, h, lambda, potential, constants);
            }
        }
        Ok((a, b))
    };

    let separation = |t: f64| -> Result<f64, ScenarioError> {
        // centroids are classical and stay finite through focal instants
        if let Some(cases) = analytic_cases {
            let (xa, _) = cases[0].centroid_at(t, constants);
            let (xb, _) = cases[1].centroid_at(t, constants);
            return Ok(xa - xb);
        }
        let (a, b) = pair_at(t)?;
        Ok(a.x - b.x)
    };

    let (mut lo, mut hi) = (t_lo, t_hi);
    let (s_lo, s_hi) = (separation(lo)?, separation(hi)?);
    let t_star = if s_lo == 0.0 {
        lo
    } else if s_hi == 0.0 {
        hi
    } else if s_lo * s_hi < 0.0 {
        // centroids cross: bisect the signed separation
        let mut f_lo = s_lo;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let f_mid = separation(mid)?;
            if f_mid == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if f_lo * f_mid < 0.0 {
                hi = mid;
            } else {
                lo = mid;
                f_lo = f_mid;
            }
        }
        0.5 * (lo + hi)
    } else {
        // closest approach without crossing: golden-section on |separation|
        let phi = 0.5 * (5.0f64.sqrt() - 1.0);
        let mut x1 = hi - phi * (hi - lo);
        let mut x2 = lo + phi * (hi - lo);
        let mut f1 = separation(x1)?.abs();
        let mut f2 = separation(x2)?.abs();
        for _ in 0..90 {
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = separation(x1)?.abs();
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = separation(x2)?.abs();
            }
        }
        0.5 * (lo + hi)
    };

    match pair_at(t_star) {
        Ok((a, b)) => node_report_for(&a, &b, constants),
        // overlap exactly at a focal instant: the packets are singular
        // there and no node structure survives the zero-width limit
        Err(ScenarioError::Physics(crate::error::Error::SingularFocus { .. })) => Ok(NodeReport {
            t: t_star,
            positions: Vec::new(),
            spacing: None,
        }),
        Err(e) => Err(e),
    }
}

fn summarize(outcome: &SimulationOutcome) -> RunSummary {
    RunSummary {
        lambda: outcome.lambda,
        final_width: *outcome.widths[0].last().unwrap(),
        min_width: outcome.widths[0]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min),
        node_spacing: outcome.nodes.as_ref().and_then(|n| n.spacing),
        expected_node_spacing: outcome.expected_node_spacing,
        bohm_violations: outcome.bohm_audit.violations,
        classical_violations: outcome.classical_audit.as_ref().map(|a| a.violations),
        node_deflections: outcome.bohmian.node_deflections.len(),
        max_speed: outcome.bohmian.max_speed,
    }
}

/// Run a single-coupling scenario and write its artifacts. Integration
/// failures after a valid config still produce a manifest carrying the
/// failure record.
pub fn run(
    config: &ScenarioConfig,
    preset_name: Option<&str>,
    options: &RunOptions,
) -> Result<RunArtifact, ScenarioError> {
    config.validate()?;
    let lambdas = config.lambda.values();
    if lambdas.len() != 1 {
        return Err(config_err(
            "lambda",
            "run takes a single value; use sweep_lambda",
        ));
    }
    let lambda = lambdas[0];
    fs::create_dir_all(&options.out_dir)?;

    let sim_start = Instant::now();
    let outcome = match simulate(config, lambda) {
        Ok(outcome) => outcome,
        Err(ScenarioError::Physics(e)) => {
            // partial artifact: manifest with the failure record
            let manifest = Manifest {
                tool: "bohmflow".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                preset: preset_name.map(String::from),
                lambda,
                config: config.clone(),
                notices: Vec::new(),
                failure: Some(e.to_string()),
                files: Vec::new(),
                timings_ms: TimingRecord {
                    simulate: sim_start.elapsed().as_millis() as u64,
                    write: 0,
                },
            };
            write_json(&options.out_dir.join("manifest.json"), &manifest)?;
            return Ok(RunArtifact {
                manifest,
                files: vec![options.out_dir.join("manifest.json")],
                summary: None,
            });
        }
        Err(other) => return Err(other),
    };
    let simulate_ms = sim_start.elapsed().as_millis() as u64;

    let write_start = Instant::now();
    let mut files: Vec<PathBuf> = Vec::new();
    let ext = match options.format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };

    if config.outputs.trajectories {
        let path = options.out_dir.join(format!("trajectories.{ext}"));
        write_ensemble(&path, &outcome.bohmian, options.format)?;
        files.push(path);
    }
    if let Some(classical) = &outcome.classical {
        let path = options.out_dir.join(format!("classical.{ext}"));
        write_ensemble(&path, classical, options.format)?;
        files.push(path);
    }
    if config.outputs.nodes && !outcome.nodes_series.is_empty() {
        let path = options.out_dir.join(format!("nodes.{ext}"));
        write_nodes(&path, &outcome.nodes_series, options.format)?;
        files.push(path);
    }
    if config.outputs.density {
        if let Some(grid) = &config.grid {
            let cells = grid.nx as u64 * outcome.times.len() as u64;
            if cells > MAX_GRID_CELLS {
                return Err(ScenarioError::GridTooFine {
                    cells,
                    max: MAX_GRID_CELLS,
                });
            }
            let path = options.out_dir.join(format!("density.{ext}"));
            write_density(&path, grid, &outcome, &config.constants, options.format)?;
            files.push(path);
        }
    }
    let summary = summarize(&outcome);
    if config.outputs.audits {
        let path = options.out_dir.join("audits.json");
        write_json(
            &path,
            &AuditFile {
                bohmian: &outcome.bohm_audit,
                classical: outcome.classical_audit.as_ref(),
                nodes: outcome.nodes.as_ref(),
                expected_node_spacing: outcome.expected_node_spacing,
                node_deflections: outcome.bohmian.node_deflections.len(),
                max_speed: outcome.bohmian.max_speed,
            },
        )?;
        files.push(path);
    }

    let manifest = Manifest {
        tool: "bohmflow".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        preset: preset_name.map(String::from),
        lambda,
        config: config.clone(),
        notices: outcome.notices.clone(),
        failure: None,
        files: files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect(),
        timings_ms: TimingRecord {
            simulate: simulate_ms,
            write: write_start.elapsed().as_millis() as u64,
        },
    };
    let manifest_path = options.out_dir.join("manifest.json");
    write_json(&manifest_path, &manifest)?;
    files.push(manifest_path);

    Ok(RunArtifact {
        manifest,
        files,
        summary: Some(summary),
    })
}

/// Artifacts of a coupling sweep.
#[derive(Debug, Clone)]
pub struct SweepArtifact {
    pub runs: Vec<RunArtifact>,
    pub summary_file: Option<PathBuf>,
}

/// Run every coupling value of the config. A single value degenerates to
/// [`run`]; a real sweep executes concurrently, writes per-value artifacts
/// into `lambda_<value>/` subdirectories, and adds a comparative summary.
pub fn sweep_lambda(
    config: &ScenarioConfig,
    preset_name: Option<&str>,
    options: &RunOptions,
) -> Result<SweepArtifact, ScenarioError> {
    config.validate()?;
    let lambdas = config.lambda.values();
    if lambdas.len() == 1 {
        let single = run(&config.clone().with_lambda(&lambdas), preset_name, options)?;
        return Ok(SweepArtifact {
            runs: vec![single],
            summary_file: None,
        });
    }
    for (i, a) in lambdas.iter().enumerate() {
        if lambdas[..i].contains(a) {
            return Err(config_err("lambda", format!("duplicate sweep value {a}")));
        }
    }
    fs::create_dir_all(&options.out_dir)?;

    let runs: Vec<RunArtifact> = lambdas
        .par_iter()
        .map(|&lambda| {
            let sub = RunOptions {
                out_dir: options.out_dir.join(format!("lambda_{lambda}")),
                format: options.format,
            };
            run(&config.clone().with_lambda(&[lambda]), preset_name, &sub)
        })
        .collect::<Result<_, _>>()?;

    let summary_path = options.out_dir.join("summary.csv");
    let mut out = String::from(
        "lambda,final_width,min_width,node_spacing,expected_node_spacing,\
         bohm_violations,classical_violations,node_deflections,max_speed\n",
    );
    for artifact in &runs {
        match &artifact.summary {
            Some(s) => {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    fmt(s.lambda),
                    fmt(s.final_width),
                    fmt(s.min_width),
                    opt(s.node_spacing),
                    opt(s.expected_node_spacing),
                    s.bohm_violations,
                    s.classical_violations
                        .map(|v| v.to_string())
                        .unwrap_or_default(),
                    s.node_deflections,
                    fmt(s.max_speed),
                ));
            }
            None => out.push_str(&format!("{},,,,,,,,\n", fmt(artifact.manifest.lambda))),
        }
    }
    fs::write(&summary_path, out)?;

    Ok(SweepArtifact {
        runs,
        summary_file: Some(summary_path),
    })
}

#[derive(Serialize)]
struct AuditFile<'a> {
    bohmian: &'a CrossingReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    classical: Option<&'a CrossingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<&'a NodeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_node_spacing: Option<f64>,
    node_deflections: usize,
    max_speed: f64,
}

fn fmt(x: f64) -> String {
    format!("{x:.12e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ScenarioError> {
    let mut file = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, value).map_err(std::io::Error::from)?;
    file.write_all(b"\n")?;
    Ok(())
}

fn write_ensemble(
    path: &Path,
    ensemble: &TrajectoryEnsemble,
    format: OutputFormat,
) -> Result<(), ScenarioError> {
    match format {
        OutputFormat::Json => write_json(path, ensemble),
        OutputFormat::Csv => {
            let mut out = String::from("t");
            for (i, label) in ensemble.labels.iter().enumerate() {
                out.push_str(&format!(
                    ",path_{i}@{}:{:+.3}",
                    label.packet, label.offset_sigma0
                ));
            }
            out.push('\n');
            for (k, &t) in ensemble.times.iter().enumerate() {
                out.push_str(&fmt(t));
                for path in &ensemble.paths {
                    out.push(',');
                    out.push_str(&fmt(path[k]));
                }
                out.push('\n');
            }
            fs::write(path, out)?;
            Ok(())
        }
    }
}

fn write_nodes(
    path: &Path,
    series: &[NodeReport],
    format: OutputFormat,
) -> Result<(), ScenarioError> {
    match format {
        OutputFormat::Json => write_json(path, &series),
        OutputFormat::Csv => {
            let mut out = String::from("t,node_index,x\n");
            for report in series {
                for (i, &x) in report.positions.iter().enumerate() {
                    out.push_str(&format!("{},{},{}\n", fmt(report.t), i, fmt(x)));
                }
            }
            fs::write(path, out)?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct DensityRow {
    t: f64,
    x: f64,
    rho: f64,
}

fn write_density(
    path: &Path,
    grid: &super::GridSpec,
    outcome: &SimulationOutcome,
    constants: &Constants,
    format: OutputFormat,
) -> Result<(), ScenarioError> {
    let step = (grid.x_max - grid.x_min) / (grid.nx - 1) as f64;
    let mut rows: Vec<DensityRow> = Vec::with_capacity(grid.nx * outcome.times.len());
    for (k, &t) in outcome.times.iter().enumerate() {
        let density: Box<dyn Fn(f64) -> f64> = match outcome.packet_series.len() {
            1 => {
                let state = outcome.packet_series[0][k];
                Box::new(move |x| state.evaluate(x, constants).density)
            }
            _ => {
                let sup = SuperpositionState::new(
                    vec![outcome.packet_series[0][k], outcome.packet_series[1][k]],
                    constants,
                )
                .map_err(ScenarioError::Physics)?;
                Box::new(move |x| sup.density(x, constants))
            }
        };
        for j in 0..grid.nx {
            let x = grid.x_min + j as f64 * step;
            rows.push(DensityRow {
                t,
                x,
                rho: density(x),
            });
        }
    }
    match format {
        OutputFormat::Json => write_json(path, &rows),
        OutputFormat::Csv => {
            let mut out = String::from("t,x,rho\n");
            for row in rows {
                out.push_str(&format!("{},{},{}\n", fmt(row.t), fmt(row.x), fmt(row.rho)));
            }
            fs::write(path, out)?;
            Ok(())
        }
    }
}
