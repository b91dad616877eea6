//! The lambda-coupled equations of motion for the Gaussian parameters and a
//! fixed-step fourth-order integrator.
//!
//! The six real equations are
//!
//! ```text
//! dx/dt       = p/m
//! dp/dt       = -V'
//! dalpha_r/dt = -2 alpha_r^2/m + (1 - lambda) 2 alpha_i^2/m - V''/2
//! dalpha_i/dt = -4 alpha_r alpha_i / m
//! dgamma_r/dt = -(1 - lambda) hbar alpha_i/m + p^2/(2m) - V
//! dgamma_i/dt = hbar alpha_r / m
//! ```
//!
//! The centroid pair `(x, p)` closes on itself, so its trajectory is
//! bit-for-bit independent of `lambda`. At `lambda = 1` the `alpha_r`
//! equation decouples from `alpha_i` (but not vice versa): perturbing the
//! width leaves the chirp untouched, while a chirp always feeds the width.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{Constants, GaussianState};
use crate::potential::Potential;

/// Margin below `lambda = 1` where harmonic integration is refused: the
/// chirp develops tan-like singularities at focal instants and a fixed-step
/// scheme cannot cross them. The analytic propagator handles `lambda = 1`.
pub const HARMONIC_LAMBDA_LIMIT: f64 = 1.0 - 1e-6;

/// Tolerance on the normalization constraint checked at every stored step.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-6;

/// Time-derivatives of the six packet parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HellerDerivative {
    pub dx: f64,
    pub dp: f64,
    pub dalpha: Complex64,
    pub dgamma: Complex64,
}

/// Fixed-step integration controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationControls {
    /// Step size.
    pub dt: f64,
    /// End time; the run stops at the step count nearest `t_final / dt`.
    pub t_final: f64,
    /// Coupling strength in `[0, 1]`.
    pub lambda: f64,
    /// Keep every n-th step in the output (the final step is always kept).
    pub store_every: usize,
}

impl IntegrationControls {
    pub fn new(lambda: f64, t_final: f64) -> Self {
        IntegrationControls {
            dt: 1e-3,
            t_final,
            lambda,
            store_every: 1,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_store_every(mut self, n: usize) -> Self {
        self.store_every = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::BadControls(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::BadControls(format!(
                "t_final must be non-negative, got {}",
                self.t_final
            )));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::LambdaOutOfRange(self.lambda));
        }
        if self.store_every == 0 {
            return Err(Error::BadControls("store_every must be at least 1".into()));
        }
        Ok(())
    }
}

/// Right-hand side of the parameter equations (checked entry point).
pub fn heller_rhs(
    state: &GaussianState,
    lambda: f64,
    potential: &Potential,
    constants: &Constants,
) -> Result<HellerDerivative> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    Ok(rhs(state, lambda, potential, constants))
}

pub(crate) fn rhs(
    state: &GaussianState,
    lambda: f64,
    potential: &Potential,
    constants: &Constants,
) -> HellerDerivative {
    let m = constants.mass;
    let h = constants.hbar;
    let taylor = potential.taylor_at(state.x, constants);
    let ar = state.alpha.re;
    let ai = state.alpha.im;

    let dx = state.p / m;
    let dp = -taylor.v1;
    let dar = -2.0 * ar * ar / m + (1.0 - lambda) * 2.0 * ai * ai / m - 0.5 * taylor.v2;
    let dai = -4.0 * ar * ai / m;
    // p*(dx/dt) - E with E = p^2/2m + V reduces to the Lagrangian p^2/2m - V
    let dgr = -(1.0 - lambda) * h * ai / m + state.p * state.p / (2.0 * m) - taylor.v;
    let dgi = h * ar / m;

    HellerDerivative {
        dx,
        dp,
        dalpha: Complex64::new(dar, dai),
        dgamma: Complex64::new(dgr, dgi),
    }
}

fn offset(s: &GaussianState, d: &HellerDerivative, h: f64) -> GaussianState {
    GaussianState {
        t: s.t + h,
        x: s.x + h * d.dx,
        p: s.p + h * d.dp,
        alpha: s.alpha + h * d.dalpha,
        gamma: s.gamma + h * d.dgamma,
    }
}

/// One classic fourth-order Runge-Kutta step.
pub fn rk4_step(
    state: &GaussianState,
    dt: f64,
    lambda: f64,
    potential: &Potential,
    constants: &Constants,
) -> GaussianState {
    let k1 = rhs(state, lambda, potential, constants);
    let k2 = rhs(&offset(state, &k1, 0.5 * dt), lambda, potential, constants);
    let k3 = rhs(&offset(state, &k2, 0.5 * dt), lambda, potential, constants);
    let k4 = rhs(&offset(state, &k3, dt), lambda, potential, constants);
    let w = dt / 6.0;
    GaussianState {
        t: state.t + dt,
        x: state.x + w * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
        p: state.p + w * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp),
        alpha: state.alpha + w * (k1.dalpha + 2.0 * k2.dalpha + 2.0 * k3.dalpha + k4.dalpha),
        gamma: state.gamma + w * (k1.dgamma + 2.0 * k2.dgamma + 2.0 * k3.dgamma + k4.dgamma),
    }
}

/// Integrate the parameter equations, storing every `store_every`-th step.
///
/// Refuses the harmonic potential for `lambda > 1 - 1e-6`; see
/// [`HARMONIC_LAMBDA_LIMIT`] and the analytic propagator. Fails with the
/// time of failure if `Im alpha` stops being positive and finite, or if the
/// normalization constraint drifts beyond [`CONSTRAINT_TOLERANCE`].
pub fn integrate(
    state0: &GaussianState,
    controls: &IntegrationControls,
    potential: &Potential,
    constants: &Constants,
) -> Result<Vec<GaussianState>> {
    if matches!(potential, Potential::Harmonic { .. }) && controls.lambda > HARMONIC_LAMBDA_LIMIT {
        return Err(Error::HarmonicLambdaNearOne {
            lambda: controls.lambda,
            limit: HARMONIC_LAMBDA_LIMIT,
        });
    }
    integrate_unchecked(state0, controls, potential, constants)
}

/// [`integrate`] without the harmonic near-`lambda = 1` refusal. Singularity
/// detection still applies, so runs that cross a focal instant fail with the
/// time of failure instead of producing infinities.
pub fn integrate_unchecked(
    state0: &GaussianState,
    controls: &IntegrationControls,
    potential: &Potential,
    constants: &Constants,
) -> Result<Vec<GaussianState>> {
    controls.validate()?;
    let residual0 = state0.normalization_residual(constants);
    if !(residual0.abs() <= 1e-9) {
        return Err(Error::NotNormalized {
            residual: residual0,
        });
    }

    let n_steps = (controls.t_final / controls.dt).round() as usize;
    let mut out = Vec::with_capacity(n_steps / controls.store_every + 2);
    out.push(*state0);

    let mut state = *state0;
    for k in 1..=n_steps {
        state = rk4_step(&state, controls.dt, controls.lambda, potential, constants);
        // exact multiples keep the time grid free of accumulated rounding
        state.t = state0.t + k as f64 * controls.dt;
        check_state(&state, constants)?;
        if k.is_multiple_of(controls.store_every) || k == n_steps {
            out.push(state);
        }
    }
    Ok(out)
}

fn check_state(state: &GaussianState, constants: &Constants) -> Result<()> {
    let finite = state.x.is_finite()
        && state.p.is_finite()
        && state.alpha.re.is_finite()
        && state.alpha.im.is_finite()
        && state.gamma.re.is_finite()
        && state.gamma.im.is_finite();
    if !finite {
        return Err(Error::IntegrationFailure {
            t: state.t,
            reason: "non-finite parameter value".into(),
        });
    }
    if state.alpha.im <= 0.0 {
        return Err(Error::IntegrationFailure {
            t: state.t,
            reason: format!("Im(alpha) = {} is no longer positive", state.alpha.im),
        });
    }
    let residual = state.normalization_residual(constants);
    if residual.abs() > CONSTRAINT_TOLERANCE {
        return Err(Error::IntegrationFailure {
            t: state.t,
            reason: format!("normalization constraint drift {residual:.3e}"),
        });
    }
    Ok(())
}
