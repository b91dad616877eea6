//! Bohmian and classical trajectory ensembles.
//!
//! Packet parameters are integrated once per run and shared read-only; each
//! path then integrates `dx/dt = v(x, t)` against that series with the same
//! fixed-step fourth-order scheme (midpoint parameter states are produced
//! by a half step, so the staged field stays at the scheme's order). Paths
//! are independent and integrate in parallel; the result is identical to a
//! serial run.
//!
//! Near a node of a superposed wave the velocity field is stiff: a step
//! whose local density falls under [`NODE_GUARD_DENSITY`] (or whose speed
//! passes [`V_TRIGGER`]) is redone with [`SUBSTEPS`] sub-steps, and if the
//! speed still passes [`V_CAP`] the velocity is capped and the path flagged
//! `node-deflected` at that time instead of being discarded. Sharp turns
//! next to nodes are legitimate dynamics and must not be lost to stiffness.

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::analytic::AnalyticCase;
use crate::error::{Error, Result};
use crate::gaussian::{Constants, GaussianState};
use crate::heller::{self, IntegrationControls};
use crate::potential::Potential;
use crate::superposition::SuperpositionState;

/// Density below which a path step counts as entering a node neighborhood.
pub const NODE_GUARD_DENSITY: f64 = 1e-9;
/// Stage speed that triggers sub-stepping.
pub const V_TRIGGER: f64 = 1e2;
/// Hard speed cap inside sub-stepped segments (natural units).
pub const V_CAP: f64 = 1e3;
/// Sub-steps used when a step is redone.
pub const SUBSTEPS: usize = 10;

/// Bohmian velocity of a single packet, `v = [p + 2 alpha_r (x - xc)] / m`.
pub fn velocity_single(state: &GaussianState, x: f64, constants: &Constants) -> f64 {
    (state.p + 2.0 * state.alpha.re * (x - state.x)) / constants.mass
}

/// Provenance of one path: source packet and launch offset in width units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathLabel {
    pub packet: usize,
    pub offset_sigma0: f64,
}

/// Launch point of one Bohmian path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathStart {
    pub x: f64,
    pub label: PathLabel,
}

/// Launch point of one classical comparison path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalStart {
    pub x: f64,
    pub p: f64,
    pub label: PathLabel,
}

/// A path that had its velocity capped next to a node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeDeflection {
    pub path: usize,
    pub t: f64,
}

/// Time-indexed positions of an ensemble plus per-path provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryEnsemble {
    pub times: Vec<f64>,
    /// `paths[i][k]` is the position of path `i` at `times[k]`.
    pub paths: Vec<Vec<f64>>,
    pub labels: Vec<PathLabel>,
    /// Largest stage speed seen anywhere in the run.
    pub max_speed: f64,
    pub node_deflections: Vec<NodeDeflection>,
}

/// Initial wave field driving an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    Single(GaussianState),
    Superposition(SuperpositionState),
}

impl FieldSpec {
    pub fn packets(&self) -> Vec<GaussianState> {
        match self {
            FieldSpec::Single(s) => vec![*s],
            FieldSpec::Superposition(s) => s.packets().to_vec(),
        }
    }
}

/// `count` equally spaced offsets over `[-span, +span]`, in width units.
pub fn uniform_offsets(count: usize, span_sigma: f64) -> Vec<f64> {
    if count == 1 {
        return vec![0.0];
    }
    (0..count)
        .map(|i| -span_sigma + 2.0 * span_sigma * i as f64 / (count - 1) as f64)
        .collect()
}

/// Offsets at the normal quantiles `(i + 1/2)/count`, in width units. Used
/// for flux checks, where the path fraction in an interval should track the
/// probability content.
pub fn quantile_offsets(count: usize) -> Vec<f64> {
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    (0..count)
        .map(|i| normal.inverse_cdf((i as f64 + 0.5) / count as f64))
        .collect()
}

/// Launch points at the given width-unit offsets around every packet centroid.
pub fn ensemble_starts(
    packets: &[GaussianState],
    offsets: &[f64],
    constants: &Constants,
) -> Vec<PathStart> {
    let mut starts = Vec::with_capacity(packets.len() * offsets.len());
    for (k, packet) in packets.iter().enumerate() {
        let sigma = packet.sigma(constants);
        for &off in offsets {
            starts.push(PathStart {
                x: packet.x + off * sigma,
                label: PathLabel {
                    packet: k,
                    offset_sigma0: off,
                },
            });
        }
    }
    starts
}

/// Parameter series at full step resolution plus half-step midpoints.
struct ParamTrack {
    states: Vec<Vec<GaussianState>>,
    mids: Vec<Vec<GaussianState>>,
}

fn propagate_params(
    packets: &[GaussianState],
    controls: &IntegrationControls,
    potential: &Potential,
    constants: &Constants,
) -> Result<ParamTrack> {
    let full_controls = IntegrationControls {
        store_every: 1,
        ..*controls
    };
    let mut states: Vec<Vec<GaussianState>> = Vec::new();
    let mut mids: Vec<Vec<GaussianState>> = Vec::new();
    for packet in packets {
        let series = heller::integrate(packet, &full_controls, potential, constants)?;
        let mid: Vec<GaussianState> = series
            .iter()
            .take(series.len() - 1)
            .map(|s| heller::rk4_step(s, 0.5 * controls.dt, controls.lambda, potential, constants))
            .collect();
        states.push(series);
        mids.push(mid);
    }
    Ok(ParamTrack { states, mids })
}

/// Velocity and (unnormalized) local density of the field assembled from
/// per-packet states. A single packet never vanishes, so its density is
/// reported as 1.
fn field_velocity(packets: &[GaussianState], x: f64, constants: &Constants) -> (f64, f64) {
    match packets {
        [single] => (velocity_single(single, x, constants), 1.0),
        [a, b] => two_packet_velocity(a, b, x, constants),
        _ => unreachable!("field holds 1 or 2 packets"),
    }
}

/// `v = Im[(psi1' + psi2')/(psi1 + psi2)]/m` with the dominant exponent
/// factored out, plus `|psi1 + psi2|^2` relative to that factoring.
fn two_packet_velocity(
    a: &GaussianState,
    b: &GaussianState,
    x: f64,
    constants: &Constants,
) -> (f64, f64) {
    let za = a.exponent(x, constants);
    let zb = b.exponent(x, constants);
    let (lead, trail, z_lead, w) = if za.re >= zb.re {
        (a, b, za, zb - za)
    } else {
        (b, a, zb, za - zb)
    };
    let ew = w.exp();
    let d_lead = lead.log_derivative(x, constants);
    let d_trail = trail.log_derivative(x, constants);
    let ratio = (d_lead + d_trail * ew) / (1.0 + ew);
    let density = (2.0 * z_lead.re).exp() * (1.0 + ew).norm_sqr();
    (ratio.im / constants.mass, density)
}

struct StageStats {
    min_density: f64,
    max_speed: f64,
}

fn path_rk4(
    x: f64,
    begin: &[GaussianState],
    mid: &[GaussianState],
    end: &[GaussianState],
    dt: f64,
    constants: &Constants,
) -> (f64, StageStats) {
    let mut stats = StageStats {
        min_density: f64::INFINITY,
        max_speed: 0.0,
    };
    let mut eval = |packets: &[GaussianState], x: f64| {
        let (v, d) = field_velocity(packets, x, constants);
        stats.min_density = stats.min_density.min(d);
        stats.max_speed = stats.max_speed.max(v.abs());
        v
    };
    let k1 = eval(begin, x);
    let k2 = eval(mid, x + 0.5 * dt * k1);
    let k3 = eval(mid, x + 0.5 * dt * k2);
    let k4 = eval(end, x + dt * k3);
    (x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), stats)
}

/// Redo one step with sub-steps and a capped velocity. Returns the new
/// position, whether the cap engaged, and the largest (capped) speed.
fn substepped_path_rk4(
    x: f64,
    begin: &[GaussianState],
    dt: f64,
    lambda: f64,
    potential: &Potential,
    constants: &Constants,
) -> (f64, bool, f64) {
    let h = dt / SUBSTEPS as f64;
    let mut capped = false;
    let mut max_speed = 0.0f64;
    let mut eval = |packets: &[GaussianState], x: f64| {
        let (v, _) = field_velocity(packets, x, constants);
        let v = if v.abs() > V_CAP {
            capped = true;
            V_CAP.copysign(v)
        } else {
            v
        };
        max_speed = max_speed.max(v.abs());
        v
    };
    let advance = |packets: &[GaussianState], step: f64| -> Vec<GaussianState> {
        packets
            .iter()
            .map(|s| heller::rk4_step(s, step, lambda, potential, constants))
            .collect()
    };

    let mut xx = x;
    let mut state = begin.to_vec();
    for _ in 0..SUBSTEPS {
        let mid = advance(&state, 0.5 * h);
        let end = advance(&state, h);
        let k1 = eval(&state, xx);
        let k2 = eval(&mid, xx + 0.5 * h * k1);
        let k3 = eval(&mid, xx + 0.5 * h * k2);
        let k4 = eval(&end, xx + h * k3);
        xx += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        state = end;
    }
    (xx, capped, max_speed)
}

/// Integrate a Bohmian ensemble: packet parameters once, then every path
/// against the shared parameter series.
pub fn integrate_ensemble(
    starts: &[PathStart],
    field: &FieldSpec,
    potential: &Potential,
    controls: &IntegrationControls,
    constants: &Constants,
) -> Result<TrajectoryEnsemble> {
    controls.validate()?;
    if starts.iter().any(|s| !s.x.is_finite()) {
        return Err(Error::BadControls("non-finite trajectory start".into()));
    }
    let packets = field.packets();
    let track = propagate_params(&packets, controls, potential, constants)?;
    let n_steps = track.states[0].len() - 1;

    let at = |k: usize| -> Vec<GaussianState> { track.states.iter().map(|s| s[k]).collect() };
    let mid_at = |k: usize| -> Vec<GaussianState> { track.mids.iter().map(|s| s[k]).collect() };

    let stored: Vec<usize> = stored_indices(n_steps, controls.store_every);
    let times: Vec<f64> = stored.iter().map(|&k| track.states[0][k].t).collect();

    struct PathResult {
        positions: Vec<f64>,
        deflections: Vec<f64>,
        max_speed: f64,
    }

    let results: Vec<PathResult> = starts
        .par_iter()
        .map(|start| {
            let mut x = start.x;
            let mut positions = Vec::with_capacity(stored.len());
            let mut deflections = Vec::new();
            let mut max_speed = 0.0f64;
            let mut next_store = 0;
            if stored[next_store] == 0 {
                positions.push(x);
                next_store += 1;
            }
            for k in 0..n_steps {
                let begin = at(k);
                let (candidate, stats) =
                    path_rk4(x, &begin, &mid_at(k), &at(k + 1), controls.dt, constants);
                max_speed = max_speed.max(stats.max_speed);
                if stats.min_density < NODE_GUARD_DENSITY || stats.max_speed > V_TRIGGER {
                    let (xx, capped, speed) = substepped_path_rk4(
                        x,
                        &begin,
                        controls.dt,
                        controls.lambda,
                        potential,
                        constants,
                    );
                    x = xx;
                    max_speed = max_speed.max(speed);
                    if capped {
                        deflections.push(track.states[0][k + 1].t);
                    }
                } else {
                    x = candidate;
                }
                if next_store < stored.len() && stored[next_store] == k + 1 {
                    positions.push(x);
                    next_store += 1;
                }
            }
            PathResult {
                positions,
                deflections,
                max_speed,
            }
        })
        .collect();

    let mut paths = Vec::with_capacity(results.len());
    let mut node_deflections = Vec::new();
    let mut max_speed = 0.0f64;
    for (i, r) in results.into_iter().enumerate() {
        paths.push(r.positions);
        node_deflections.extend(
            r.deflections
                .into_iter()
                .map(|t| NodeDeflection { path: i, t }),
        );
        max_speed = max_speed.max(r.max_speed);
    }

    Ok(TrajectoryEnsemble {
        times,
        paths,
        labels: starts.iter().map(|s| s.label).collect(),
        max_speed,
        node_deflections,
    })
}

/// Ensemble propagated by a closed-form trajectory law instead of the ODE
/// path; used where the fixed-step route is refused (harmonic `lambda = 1`).
pub fn analytic_ensemble(
    case: &AnalyticCase,
    starts: &[PathStart],
    times: &[f64],
    constants: &Constants,
) -> Result<TrajectoryEnsemble> {
    let mut paths = Vec::with_capacity(starts.len());
    for start in starts {
        let mut positions = Vec::with_capacity(times.len());
        for &t in times {
            positions.push(case.trajectory(start.x, t, constants)?);
        }
        paths.push(positions);
    }
    Ok(TrajectoryEnsemble {
        times: times.to_vec(),
        paths,
        labels: starts.iter().map(|s| s.label).collect(),
        max_speed: 0.0,
        node_deflections: Vec::new(),
    })
}

/// Classical point-particle comparison ensemble under the same controls.
pub fn classical_ensemble(
    starts: &[ClassicalStart],
    potential: &Potential,
    controls: &IntegrationControls,
    constants: &Constants,
) -> Result<TrajectoryEnsemble> {
    controls.validate()?;
    let m = constants.mass;
    let dt = controls.dt;
    let n_steps = (controls.t_final / dt).round() as usize;
    let stored = stored_indices(n_steps, controls.store_every);
    let times: Vec<f64> = stored.iter().map(|&k| k as f64 * dt).collect();

    let paths: Vec<Vec<f64>> = starts
        .par_iter()
        .map(|start| {
            let mut x = start.x;
            let mut p = start.p;
            let mut positions = Vec::with_capacity(stored.len());
            let mut next_store = 0;
            if stored[next_store] == 0 {
                positions.push(x);
                next_store += 1;
            }
            let accel = |x: f64| -potential.taylor_at(x, constants).v1;
            for k in 0..n_steps {
                // RK4 on (x, p)
                let (k1x, k1p) = (p / m, accel(x));
                let (k2x, k2p) = ((p + 0.5 * dt * k1p) / m, accel(x + 0.5 * dt * k1x));
                let (k3x, k3p) = ((p + 0.5 * dt * k2p) / m, accel(x + 0.5 * dt * k2x));
                let (k4x, k4p) = ((p + dt * k3p) / m, accel(x + dt * k3x));
                x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
                p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
                if next_store < stored.len() && stored[next_store] == k + 1 {
                    positions.push(x);
                    next_store += 1;
                }
            }
            positions
        })
        .collect();

    Ok(TrajectoryEnsemble {
        times,
        paths,
        labels: starts.iter().map(|s| s.label).collect(),
        max_speed: 0.0,
        node_deflections: Vec::new(),
    })
}

pub(crate) fn stored_indices(n_steps: usize, store_every: usize) -> Vec<usize> {
    let mut stored: Vec<usize> = (0..=n_steps)
        .filter(|&k| k == 0 || k.is_multiple_of(store_every) || k == n_steps)
        .collect();
    stored.dedup();
    stored
}

/// First strict ordering inversion between two paths, if any.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingViolation {
    pub t: f64,
    pub path_a: usize,
    pub path_b: usize,
}

/// Outcome of the non-crossing audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingReport {
    pub first_violation: Option<CrossingViolation>,
    /// Number of (time, adjacent pair) strict inversions.
    pub violations: usize,
}

impl CrossingReport {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

/// Verify that the initial ordering of paths is preserved at every sample
/// time. Ties are allowed (paths may touch at a focus); only strict
/// inversions count.
pub fn non_crossing_audit(ensemble: &TrajectoryEnsemble) -> CrossingReport {
    let n = ensemble.paths.len();
    if n < 2 {
        return CrossingReport {
            first_violation: None,
            violations: 0,
        };
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        ensemble.paths[i][0]
            .partial_cmp(&ensemble.paths[j][0])
            .unwrap()
    });

    let mut first = None;
    let mut violations = 0;
    for (k, &t) in ensemble.times.iter().enumerate() {
        for pair in order.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            if ensemble.paths[lo][k] > ensemble.paths[hi][k] {
                violations += 1;
                if first.is_none() {
                    first = Some(CrossingViolation {
                        t,
                        path_a: lo,
                        path_b: hi,
                    });
                }
            }
        }
    }
    CrossingReport {
        first_violation: first,
        violations,
    }
}
