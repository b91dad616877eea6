//! Gaussian wave packets in the time-dependent parameterization
//!
//! ```text
//! psi(x) = exp[ i*alpha*(x - xc)^2/hbar + i*p*(x - xc)/hbar + i*gamma/hbar ]
//! ```
//!
//! with real centroid `(xc, p)` and complex `alpha`, `gamma`. `Im alpha > 0`
//! sets the width, `Re alpha` the position-dependent phase curvature that
//! drives trajectory spreading. Normalization ties `Im gamma` to `Im alpha`
//! (see [`gamma_imag_from_alpha`]); every constructor enforces the tie, and
//! the integrator asserts it instead of re-imposing it, so drift is detected
//! rather than masked.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heller;
use crate::potential::Potential;

/// Physical constants of a run. Natural units `hbar = mass = 1` by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

impl Constants {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if hbar > 0.0 && mass > 0.0 && hbar.is_finite() && mass.is_finite() {
            Ok(Constants { hbar, mass })
        } else {
            Err(Error::BadConstants { hbar, mass })
        }
    }

    /// Natural units, the default for every preset.
    pub fn natural() -> Self {
        Self::default()
    }
}

/// Imaginary part of `gamma` imposed by `int |psi|^2 dx = 1`:
///
/// ```text
/// gamma_i = -(hbar/4) * ln( 2*alpha_i / (pi*hbar) )
/// ```
pub fn gamma_imag_from_alpha(alpha_i: f64, constants: &Constants) -> Result<f64> {
    if !(alpha_i > 0.0) || !alpha_i.is_finite() {
        return Err(Error::NonNormalizable(alpha_i));
    }
    let h = constants.hbar;
    Ok(-(h / 4.0) * (2.0 * alpha_i / (std::f64::consts::PI * h)).ln())
}

/// One Gaussian packet: centroid, complex width/chirp, complex phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    /// Time the parameters refer to.
    pub t: f64,
    /// Centroid position.
    pub x: f64,
    /// Centroid momentum.
    pub p: f64,
    /// Complex width/chirp parameter; `Im alpha > 0` for a normalizable packet.
    pub alpha: Complex64,
    /// Complex accumulated phase; `Im gamma` is fixed by normalization.
    pub gamma: Complex64,
}

impl GaussianState {
    /// Minimum-uncertainty packet of width `sigma0`:
    /// `alpha = i*hbar/(4 sigma0^2)`, `gamma = i*(hbar/4) ln(2 pi sigma0^2)`.
    pub fn minimum_uncertainty(
        x0: f64,
        p0: f64,
        sigma0: f64,
        constants: &Constants,
    ) -> Result<Self> {
        if !(sigma0 > 0.0) || !sigma0.is_finite() {
            return Err(Error::NonPositiveWidth(sigma0));
        }
        let alpha_i = constants.hbar / (4.0 * sigma0 * sigma0);
        Self::from_alpha(x0, p0, Complex64::new(0.0, alpha_i), constants)
    }

    /// Packet with an arbitrary complex `alpha0` (nonzero real part adds a
    /// position-dependent chirp). `gamma` starts at the normalization value
    /// with zero real phase.
    pub fn from_alpha(x0: f64, p0: f64, alpha0: Complex64, constants: &Constants) -> Result<Self> {
        let gamma_i = gamma_imag_from_alpha(alpha0.im, constants)?;
        Ok(GaussianState {
            t: 0.0,
            x: x0,
            p: p0,
            alpha: alpha0,
            gamma: Complex64::new(0.0, gamma_i),
        })
    }

    /// RMS width `sigma = sqrt(hbar / (4 Im alpha))`.
    pub fn sigma(&self, constants: &Constants) -> f64 {
        (constants.hbar / (4.0 * self.alpha.im)).sqrt()
    }

    /// Deviation of `Im gamma` from the normalization constraint. Zero (to
    /// rounding) for any state produced by the constructors or the integrator.
    pub fn normalization_residual(&self, constants: &Constants) -> f64 {
        match gamma_imag_from_alpha(self.alpha.im, constants) {
            Ok(gi) => self.gamma.im - gi,
            Err(_) => f64::INFINITY,
        }
    }

    /// Complex exponent `z(x)` with `psi = exp(z)`.
    pub fn exponent(&self, x: f64, constants: &Constants) -> Complex64 {
        let xi = x - self.x;
        let i = Complex64::i();
        (i / constants.hbar) * (self.alpha * xi * xi + self.p * xi + self.gamma)
    }

    /// Wave-function value at `x`.
    pub fn psi(&self, x: f64, constants: &Constants) -> Complex64 {
        self.exponent(x, constants).exp()
    }

    /// Logarithmic derivative `psi'/psi = i (2 alpha (x - xc) + p) / hbar`.
    pub fn log_derivative(&self, x: f64, constants: &Constants) -> Complex64 {
        let xi = x - self.x;
        Complex64::i() * (2.0 * self.alpha * xi + self.p) / constants.hbar
    }

    /// Local fields at `x`: amplitude, density, phase, velocity, and quantum
    /// potential, all in closed form from the parameters.
    ///
    /// For the Gaussian amplitude `A = exp[-alpha_i (x-xc)^2/hbar - gamma_i/hbar]`
    /// the quantum potential `-(hbar^2/2m) A''/A` reduces to
    ///
    /// ```text
    /// Q(x) = hbar*alpha_i/m - (2 alpha_i^2 / m) (x - xc)^2 .
    /// ```
    pub fn evaluate(&self, x: f64, constants: &Constants) -> WaveSample {
        let h = constants.hbar;
        let m = constants.mass;
        let xi = x - self.x;
        let z = self.exponent(x, constants);
        let amplitude = z.exp();
        let density = (2.0 * z.re).exp();
        let phase = self.alpha.re * xi * xi + self.p * xi + self.gamma.re;
        let velocity = (self.p + 2.0 * self.alpha.re * xi) / m;
        let ai = self.alpha.im;
        let quantum_potential = h * ai / m - 2.0 * ai * ai * xi * xi / m;
        WaveSample {
            x,
            amplitude,
            density,
            phase,
            velocity,
            quantum_potential,
        }
    }
}

/// Local wave-function data at one position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSample {
    pub x: f64,
    pub amplitude: Complex64,
    /// `|amplitude|^2`.
    pub density: f64,
    /// Phase `S` in action units; `velocity = (dS/dx)/m`.
    pub phase: f64,
    pub velocity: f64,
    /// `-(hbar^2/2m) A''/A`, evaluated analytically.
    pub quantum_potential: f64,
}

/// Residual of the phase equation
///
/// ```text
/// -dS/dt - (dS/dx)^2/(2m) - V(x) - (1 - lambda) Q(x)
/// ```
///
/// with `dS/dt` taken from the parameter equations of motion at coupling
/// `lambda`. Vanishes identically (to rounding) when the parameters obey
/// those equations; at `lambda = 1` it is the classical Hamilton-Jacobi
/// residual.
pub fn phase_equation_residual(
    state: &GaussianState,
    lambda: f64,
    potential: &Potential,
    x: f64,
    constants: &Constants,
) -> f64 {
    debug_assert!((0.0..=1.0).contains(&lambda));
    let m = constants.mass;
    let xi = x - state.x;
    let d = heller::rhs(state, lambda, potential, constants);

    // dS/dt at fixed x from S = alpha_r xi^2 + p xi + gamma_r, xi = x - xc(t)
    let ds_dt = d.dalpha.re * xi * xi + (d.dp - 2.0 * state.alpha.re * d.dx) * xi - state.p * d.dx
        + d.dgamma.re;

    let ds_dx = state.p + 2.0 * state.alpha.re * xi;
    let v = potential.taylor_at(x, constants).v;
    let ai = state.alpha.im;
    let q = constants.hbar * ai / m - 2.0 * ai * ai * xi * xi / m;

    -ds_dt - ds_dx * ds_dx / (2.0 * m) - v - (1.0 - lambda) * q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Potential;

    const C: Constants = Constants {
        hbar: 1.0,
        mass: 1.0,
    };

    /// Composite Simpson quadrature on a uniform grid (test oracle only).
    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        assert!(n.is_multiple_of(2));
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + k as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn gamma_imag_closed_form_values() {
        // sigma0 = 0.5 -> alpha_i = 1; cross-checked against (hbar/4) ln(2 pi sigma0^2)
        let gi = gamma_imag_from_alpha(1.0, &C).unwrap();
        let expect = 0.25 * (2.0 * std::f64::consts::PI * 0.25).ln();
        assert!((gi - expect).abs() < 1e-15);
        assert!((gi - 0.112895676).abs() < 1e-8);

        // argument of the log equals one
        let gi = gamma_imag_from_alpha(std::f64::consts::PI / 2.0, &C).unwrap();
        assert!(gi.abs() < 1e-15);

        // sigma0 = 1 -> alpha_i = 1/4 -> (1/4) ln(2 pi)
        let gi = gamma_imag_from_alpha(0.25, &C).unwrap();
        assert!((gi - 0.25 * (2.0 * std::f64::consts::PI).ln()).abs() < 1e-15);
        assert!((gi - 0.459469).abs() < 1e-6);
    }

    #[test]
    fn gamma_imag_rejects_nonpositive_alpha() {
        assert!(matches!(
            gamma_imag_from_alpha(0.0, &C),
            Err(Error::NonNormalizable(_))
        ));
        assert!(matches!(
            gamma_imag_from_alpha(-1.0, &C),
            Err(Error::NonNormalizable(_))
        ));
    }

    #[test]
    fn minimum_uncertainty_matches_initial_conditions() {
        let s = GaussianState::minimum_uncertainty(0.0, 0.0, 0.5, &C).unwrap();
        assert_eq!(s.alpha.re, 0.0);
        assert!((s.alpha.im - 1.0).abs() < 1e-15);
        assert_eq!(s.gamma.re, 0.0);
        assert!((s.gamma.im - 0.112895676).abs() < 1e-8);
        assert!((s.sigma(&C) - 0.5).abs() < 1e-15);

        // Glauber state of a unit oscillator: sigma0 = sqrt(hbar/2 m w) -> alpha_i = m w / 2
        let sigma0 = (0.5f64).sqrt();
        let g = GaussianState::minimum_uncertainty(0.0, 1.0, sigma0, &C).unwrap();
        assert!((g.alpha.im - 0.5).abs() < 1e-15);

        assert!(matches!(
            GaussianState::minimum_uncertainty(0.0, 0.0, -0.1, &C),
            Err(Error::NonPositiveWidth(_))
        ));
    }

    #[test]
    fn constructed_states_satisfy_the_constraint_exactly() {
        for &sig in &[0.1, 0.5, 1.0, 3.0] {
            let s = GaussianState::minimum_uncertainty(1.0, -2.0, sig, &C).unwrap();
            assert_eq!(s.normalization_residual(&C), 0.0);
        }
        let s = GaussianState::from_alpha(0.0, 0.0, Complex64::new(0.7, 0.3), &C).unwrap();
        assert_eq!(s.normalization_residual(&C), 0.0);
    }

    #[test]
    fn evaluate_peak_density_and_centroid_velocity() {
        let s = GaussianState::minimum_uncertainty(1.5, 2.0, 0.5, &C).unwrap();
        let w = s.evaluate(s.x, &C);
        // peak density = exp(-2 gamma_i/hbar) = (2 pi sigma0^2)^(-1/2)
        let expect = 1.0 / (2.0 * std::f64::consts::PI * 0.25).sqrt();
        assert!((w.density - expect).abs() < 1e-14);
        assert!((w.density - (2.0 * s.alpha.im / std::f64::consts::PI).sqrt()).abs() < 1e-14);
        // velocity at the centroid is p/m for any alpha
        let s2 = GaussianState::from_alpha(1.5, 2.0, Complex64::new(0.8, 0.6), &C).unwrap();
        assert_eq!(s2.evaluate(s2.x, &C).velocity, 2.0);
        // density really is |amplitude|^2
        let w3 = s2.evaluate(0.3, &C);
        assert!((w3.density - w3.amplitude.norm_sqr()).abs() < 1e-15 * w3.density.max(1.0));
    }

    #[test]
    fn density_integrates_to_one() {
        for s in [
            GaussianState::minimum_uncertainty(0.0, 0.0, 0.5, &C).unwrap(),
            GaussianState::minimum_uncertainty(-2.0, 3.0, 1.3, &C).unwrap(),
            GaussianState::from_alpha(1.0, -1.0, Complex64::new(0.4, 0.9), &C).unwrap(),
        ] {
            let sig = s.sigma(&C);
            let norm = simpson(
                |x| s.evaluate(x, &C).density,
                s.x - 10.0 * sig,
                s.x + 10.0 * sig,
                20_000,
            );
            assert!((norm - 1.0).abs() < 1e-10, "norm = {norm}");
        }
    }

    #[test]
    fn velocity_field_is_linear_with_slope_two_alpha_r_over_m() {
        let s = GaussianState::from_alpha(0.5, 1.2, Complex64::new(0.8, 0.4), &C).unwrap();
        let v0 = s.evaluate(s.x, &C).velocity;
        let xs = [s.x - 1.0, s.x + 0.7, s.x + 2.3];
        for &x in &xs {
            let v = s.evaluate(x, &C).velocity;
            let slope = (v - v0) / (x - s.x);
            assert!((slope - 2.0 * s.alpha.re / C.mass).abs() < 1e-12);
        }
    }

    #[test]
    fn quantum_potential_matches_finite_differences() {
        // oracle: Q = -(hbar^2/2m) A''/A with A = |psi| differentiated numerically
        let s = GaussianState::from_alpha(0.3, -0.7, Complex64::new(0.5, 0.8), &C).unwrap();
        let amp = |x: f64| s.psi(x, &C).norm();
        let h = 1e-4;
        for &x in &[s.x, s.x + 0.4, s.x - 0.9, s.x + 1.6] {
            let second = (amp(x + h) - 2.0 * amp(x) + amp(x - h)) / (h * h);
            let q_fd = -0.5 * C.hbar * C.hbar / C.mass * second / amp(x);
            let q = s.evaluate(x, &C).quantum_potential;
            assert!((q - q_fd).abs() < 1e-5, "x = {x}: {q} vs {q_fd}");
        }
    }

    #[test]
    fn phase_residual_vanishes_in_all_regimes() {
        // lambda = 1: classical Hamilton-Jacobi residual, any state, any x
        let s = GaussianState::from_alpha(0.4, 1.1, Complex64::new(0.3, 0.9), &C).unwrap();
        let hw = Potential::harmonic(1.0).unwrap();
        for &x in &[s.x - 1.0, s.x, s.x + 2.0] {
            assert!(phase_equation_residual(&s, 1.0, &hw, x, &C).abs() < 1e-8);
        }

        // lambda = 0: coherent state in a harmonic well
        let sigma0 = (0.5f64).sqrt();
        let g = GaussianState::minimum_uncertainty(0.0, 1.0, sigma0, &C).unwrap();
        for &x in &[-1.0, 0.2, 1.7] {
            assert!(phase_equation_residual(&g, 0.0, &hw, x, &C).abs() < 1e-8);
        }

        // lambda = 0.5: free packet, x = xc + sigma0
        let f = GaussianState::minimum_uncertainty(0.0, 0.0, 0.5, &C).unwrap();
        let free = Potential::Free;
        assert!(phase_equation_residual(&f, 0.5, &free, f.x + 0.5, &C).abs() < 1e-8);
    }
}
