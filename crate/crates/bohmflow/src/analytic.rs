//! Closed-form propagators for every analytically solvable regime.
//!
//! These double as fast propagators and as ground truth for the fixed-step
//! integrator and the trajectory engine. Five families are covered:
//!
//! * free space, linear coupling, minimum-uncertainty start;
//! * free space, linear coupling, arbitrary complex `alpha0`;
//! * free space, `lambda = 1`;
//! * harmonic well, linear coupling, arbitrary complex `alpha0`;
//! * harmonic well, `lambda = 1`.
//!
//! In the harmonic `lambda = 1` family the chirp follows a tan law that is
//! independent of the width, the width shrinks to zero at focal instants,
//! and the trajectory offset factor carries an absolute value: paths touch
//! the central one at a focus but never cross it, so the sign of the
//! initial offset is preserved.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gaussian::{gamma_imag_from_alpha, Constants, GaussianState};
use crate::potential::Potential;

/// Width below which a harmonic `lambda = 1` evaluation is reported as a
/// focal singularity instead of returning astronomically large parameters.
const FOCUS_EPS: f64 = 1e-12;

/// One analytically solvable configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticCase {
    /// Free packet, `lambda = 0`, `alpha0 = i hbar / (4 sigma0^2)`.
    FreeLinear { x0: f64, p0: f64, sigma0: f64 },
    /// Free packet, `lambda = 0`, arbitrary `alpha0` with positive imaginary part.
    FreeGeneralAlpha { x0: f64, p0: f64, alpha0: Complex64 },
    /// Free packet, `lambda = 1`.
    FreeClassical { x0: f64, p0: f64, alpha0: Complex64 },
    /// Harmonic well, `lambda = 0`.
    HarmonicLinear {
        x0: f64,
        p0: f64,
        alpha0: Complex64,
        omega: f64,
    },
    /// Harmonic well, `lambda = 1`.
    HarmonicClassical {
        x0: f64,
        p0: f64,
        alpha0: Complex64,
        omega: f64,
    },
}

impl AnalyticCase {
    /// Coupling strength this family solves.
    pub fn lambda(&self) -> f64 {
        match self {
            AnalyticCase::FreeLinear { .. }
            | AnalyticCase::FreeGeneralAlpha { .. }
            | AnalyticCase::HarmonicLinear { .. } => 0.0,
            AnalyticCase::FreeClassical { .. } | AnalyticCase::HarmonicClassical { .. } => 1.0,
        }
    }

    pub fn potential(&self) -> Potential {
        match self {
            AnalyticCase::FreeLinear { .. }
            | AnalyticCase::FreeGeneralAlpha { .. }
            | AnalyticCase::FreeClassical { .. } => Potential::Free,
            AnalyticCase::HarmonicLinear { omega, .. }
            | AnalyticCase::HarmonicClassical { omega, .. } => {
                Potential::Harmonic { omega: *omega }
            }
        }
    }

    pub fn initial_state(&self, constants: &Constants) -> Result<GaussianState> {
        self.state_at(0.0, constants)
    }

    /// Classical centroid `(x, p)` at time `t`; finite at every instant,
    /// including focal singularities of the packet shape.
    pub fn centroid_at(&self, t: f64, constants: &Constants) -> (f64, f64) {
        match *self {
            AnalyticCase::FreeLinear { x0, p0, .. }
            | AnalyticCase::FreeGeneralAlpha { x0, p0, .. }
            | AnalyticCase::FreeClassical { x0, p0, .. } => (x0 + p0 * t / constants.mass, p0),
            AnalyticCase::HarmonicLinear { x0, p0, omega, .. }
            | AnalyticCase::HarmonicClassical { x0, p0, omega, .. } => (
                classical_position(x0, p0, omega, t, constants),
                classical_momentum(x0, p0, omega, t, constants),
            ),
        }
    }

    /// Packet parameters at time `t`.
    pub fn state_at(&self, t: f64, constants: &Constants) -> Result<GaussianState> {
        match *self {
            AnalyticCase::FreeLinear { x0, p0, sigma0 } => {
                free_linear(x0, p0, sigma0, t, constants)
            }
            AnalyticCase::FreeGeneralAlpha { x0, p0, alpha0 } => {
                free_general_state(x0, p0, alpha0, t, constants)
            }
            AnalyticCase::FreeClassical { x0, p0, alpha0 } => {
                free_classical(x0, p0, alpha0, t, constants)
            }
            AnalyticCase::HarmonicLinear {
                x0,
                p0,
                alpha0,
                omega,
            } => harmonic_linear(x0, p0, alpha0, omega, t, constants),
            AnalyticCase::HarmonicClassical {
                x0,
                p0,
                alpha0,
                omega,
            } => harmonic_classical(x0, p0, alpha0, omega, t, constants),
        }
    }

    /// RMS width at `t`. Well-defined even at harmonic `lambda = 1` focal
    /// instants, where it is exactly zero.
    pub fn width_at(&self, t: f64, constants: &Constants) -> Result<f64> {
        if let AnalyticCase::HarmonicClassical { alpha0, omega, .. } = *self {
            check_alpha0(alpha0)?;
            let sigma0 = (constants.hbar / (4.0 * alpha0.im)).sqrt();
            let g = focus_factor(alpha0.re, omega, t, constants);
            return Ok(sigma0 * g.abs());
        }
        Ok(self.state_at(t, constants)?.sigma(constants))
    }

    /// Offset growth factor `f(t)` of the closed-form trajectories
    /// `x(t) = xc(t) + f(t) * (x(0) - x0)`.
    pub fn trajectory_factor(&self, t: f64, constants: &Constants) -> Result<f64> {
        let m = constants.mass;
        match *self {
            AnalyticCase::FreeLinear { sigma0, .. } => {
                check_sigma0(sigma0)?;
                let tau = 2.0 * m * sigma0 * sigma0 / constants.hbar;
                Ok((1.0 + (t / tau) * (t / tau)).sqrt())
            }
            AnalyticCase::FreeGeneralAlpha { alpha0, .. } => {
                check_alpha0(alpha0)?;
                let u = 2.0 * alpha0.norm() * t / m;
                Ok((1.0 + 4.0 * alpha0.re * t / m + u * u).sqrt())
            }
            AnalyticCase::FreeClassical { alpha0, .. } => {
                check_alpha0(alpha0)?;
                let f = 1.0 + 2.0 * alpha0.re * t / m;
                if f <= 0.0 {
                    Err(Error::SingularCollapse {
                        t,
                        t_collapse: -m / (2.0 * alpha0.re),
                    })
                } else {
                    Ok(f)
                }
            }
            AnalyticCase::HarmonicLinear { alpha0, omega, .. } => {
                check_alpha0(alpha0)?;
                Ok(breathing_factor(alpha0, omega, t, constants).sqrt())
            }
            AnalyticCase::HarmonicClassical { alpha0, omega, .. } => {
                check_alpha0(alpha0)?;
                // |.| keeps every path on its side of the centroid across foci
                Ok(focus_factor(alpha0.re, omega, t, constants).abs())
            }
        }
    }

    /// Closed-form Bohmian trajectory launched from `x_start` at `t = 0`.
    pub fn trajectory(&self, x_start: f64, t: f64, constants: &Constants) -> Result<f64> {
        let (x0, xc) = match *self {
            AnalyticCase::FreeLinear { x0, p0, .. }
            | AnalyticCase::FreeGeneralAlpha { x0, p0, .. }
            | AnalyticCase::FreeClassical { x0, p0, .. } => (x0, x0 + p0 * t / constants.mass),
            AnalyticCase::HarmonicLinear { x0, p0, omega, .. }
            | AnalyticCase::HarmonicClassical { x0, p0, omega, .. } => {
                (x0, classical_position(x0, p0, omega, t, constants))
            }
        };
        Ok(xc + self.trajectory_factor(t, constants)? * (x_start - x0))
    }
}

fn check_sigma0(sigma0: f64) -> Result<()> {
    if sigma0 > 0.0 && sigma0.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveWidth(sigma0))
    }
}

fn check_alpha0(alpha0: Complex64) -> Result<()> {
    if alpha0.im > 0.0 && alpha0.is_finite() {
        Ok(())
    } else {
        Err(Error::NonNormalizable(alpha0.im))
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveFrequency(omega))
    }
}

/// Dispersion timescale `tau = 2 m sigma0^2 / hbar`.
pub fn characteristic_time(sigma0: f64, constants: &Constants) -> Result<f64> {
    check_sigma0(sigma0)?;
    Ok(2.0 * constants.mass * sigma0 * sigma0 / constants.hbar)
}

/// Free minimum-uncertainty packet under linear coupling.
pub fn free_linear(
    x0: f64,
    p0: f64,
    sigma0: f64,
    t: f64,
    constants: &Constants,
) -> Result<GaussianState> {
    check_sigma0(sigma0)?;
    let alpha0 = Complex64::new(0.0, constants.hbar / (4.0 * sigma0 * sigma0));
    free_general_state(x0, p0, alpha0, t, constants)
}

/// `alpha(t) = alpha0 / (1 + 2 alpha0 t / m)` for the free linear case.
pub fn free_general_alpha(alpha0: Complex64, t: f64, constants: &Constants) -> Result<Complex64> {
    check_alpha0(alpha0)?;
    Ok(alpha0 / (1.0 + 2.0 * alpha0 * t / constants.mass))
}

/// Full state for the free linear case with arbitrary `alpha0`.
pub fn free_general_state(
    x0: f64,
    p0: f64,
    alpha0: Complex64,
    t: f64,
    constants: &Constants,
) -> Result<GaussianState> {
    check_alpha0(alpha0)?;
    let m = constants.mass;
    let h = constants.hbar;
    let w = 1.0 + 2.0 * alpha0 * t / m;
    let alpha = alpha0 / w;
    // Im(w) = 2 alpha0_i t / m only crosses zero at t = 0 where Re(w) = 1,
    // so the principal log is continuous along the whole evolution
    let gamma0_i = gamma_imag_from_alpha(alpha0.im, constants)?;
    let gamma = Complex64::new(0.0, gamma0_i)
        + Complex64::i() * (h / 2.0) * w.ln()
        + p0 * p0 * t / (2.0 * m);
    Ok(GaussianState {
        t,
        x: x0 + p0 * t / m,
        p: p0,
        alpha,
        gamma,
    })
}

/// Free packet at `lambda = 1`. A purely imaginary `alpha0` is rigid; a
/// chirped one expands or focuses linearly and a focusing packet collapses
/// at `t = -m / (2 alpha0_r)`.
pub fn free_classical(
    x0: f64,
    p0: f64,
    alpha0: Complex64,
    t: f64,
    constants: &Constants,
) -> Result<GaussianState> {
    check_alpha0(alpha0)?;
    let m = constants.mass;
    let f = 1.0 + 2.0 * alpha0.re * t / m;
    if f <= 0.0 {
        return Err(Error::SingularCollapse {
            t,
            t_collapse: -m / (2.0 * alpha0.re),
        });
    }
    let alpha = Complex64::new(alpha0.re / f, alpha0.im / (f * f));
    let gamma_i = gamma_imag_from_alpha(alpha.im, constants)?;
    let gamma_r = p0 * p0 * t / (2.0 * m);
    Ok(GaussianState {
        t,
        x: x0 + p0 * t / m,
        p: p0,
        alpha,
        gamma: Complex64::new(gamma_r, gamma_i),
    })
}

fn classical_position(x0: f64, p0: f64, omega: f64, t: f64, constants: &Constants) -> f64 {
    x0 * (omega * t).cos() + p0 / (constants.mass * omega) * (omega * t).sin()
}

fn classical_momentum(x0: f64, p0: f64, omega: f64, t: f64, constants: &Constants) -> f64 {
    p0 * (omega * t).cos() - constants.mass * omega * x0 * (omega * t).sin()
}

/// Action integral of the classical harmonic orbit from 0 to `t`.
fn harmonic_action(x0: f64, p0: f64, omega: f64, t: f64, constants: &Constants) -> f64 {
    let m = constants.mass;
    (p0 * p0 / (2.0 * m) - 0.5 * m * omega * omega * x0 * x0) * (2.0 * omega * t).sin()
        / (2.0 * omega)
        - p0 * x0 * (omega * t).sin().powi(2)
}

/// Denominator `cos wt + (2 alpha0 / m w) sin wt` of the harmonic solution,
/// with its argument unwound so the accumulated phase is continuous in `t`.
/// The factor flips sign every half period, so the unwound argument is the
/// principal argument on `[0, pi)` plus `pi` per completed half period.
fn harmonic_denominator(
    alpha0: Complex64,
    omega: f64,
    t: f64,
    constants: &Constants,
) -> (Complex64, f64) {
    let theta = omega * t;
    let half_periods = (theta / PI).floor();
    let theta_red = theta - half_periods * PI;
    let z_at = |th: f64| {
        Complex64::new(th.cos(), 0.0)
            + 2.0 * alpha0 / (constants.mass * omega) * Complex64::new(th.sin(), 0.0)
    };
    let z = z_at(theta);
    let arg = z_at(theta_red).arg() + PI * half_periods;
    (z, arg)
}

/// Breathing factor `F = cos^2 wt + (2 a0r/mw) sin 2wt + (2|a0|/mw)^2 sin^2 wt`,
/// strictly positive for `Im alpha0 > 0`. The width is `sigma0 sqrt(F)` and
/// the linear-regime trajectory offset grows as `sqrt(F)`.
fn breathing_factor(alpha0: Complex64, omega: f64, t: f64, constants: &Constants) -> f64 {
    let b = 2.0 / (constants.mass * omega);
    let (s, c) = (omega * t).sin_cos();
    c * c + b * alpha0.re * 2.0 * s * c + b * b * alpha0.norm_sqr() * s * s
}

/// Harmonic well under linear coupling, arbitrary `alpha0`.
pub fn harmonic_linear(
    x0: f64,
    p0: f64,
    alpha0: Complex64,
    omega: f64,
    t: f64,
    constants: &Constants,
) -> Result<GaussianState> {
    check_alpha0(alpha0)?;
    check_omega(omega)?;
    let m = constants.mass;
    let h = constants.hbar;
    let mw = m * omega;
    let (s, c) = (omega * t).sin_cos();

    let numer = 2.0 * alpha0 * c - Complex64::new(mw * s, 0.0);
    let denom = 2.0 * alpha0 * s + Complex64::new(mw * c, 0.0);
    let alpha = 0.5 * mw * numer / denom;

    let (_, arg) = harmonic_denominator(alpha0, omega, t, constants);
    let gamma_r = -0.5 * h * arg + harmonic_action(x0, p0, omega, t, constants);
    let gamma_i = gamma_imag_from_alpha(alpha.im, constants)?;

    Ok(GaussianState {
        t,
        x: classical_position(x0, p0, omega, t, constants),
        p: classical_momentum(x0, p0, omega, t, constants),
        alpha,
        gamma: Complex64::new(gamma_r, gamma_i),
    })
}

/// Width factor `G = cos wt + (2 alpha0_r / m w) sin wt` of the harmonic
/// `lambda = 1` solution; zero exactly at focal instants.
fn focus_factor(alpha0_r: f64, omega: f64, t: f64, constants: &Constants) -> f64 {
    let (s, c) = (omega * t).sin_cos();
    c + 2.0 * alpha0_r / (constants.mass * omega) * s
}

/// Harmonic well at `lambda = 1`. The chirp is independent of the width,
/// the width is `sigma0 |G|`, and evaluation exactly at a focal instant
/// returns the singular-focus marker.
pub fn harmonic_classical(
    x0: f64,
    p0: f64,
    alpha0: Complex64,
    omega: f64,
    t: f64,
    constants: &Constants,
) -> Result<GaussianState> {
    check_alpha0(alpha0)?;
    check_omega(omega)?;
    let m = constants.mass;
    let h = constants.hbar;
    let mw = m * omega;
    let (s, c) = (omega * t).sin_cos();

    let g = focus_factor(alpha0.re, omega, t, constants);
    if g.abs() < FOCUS_EPS {
        return Err(Error::SingularFocus { t });
    }
    let alpha_r = 0.5 * mw * (2.0 * alpha0.re / mw * c - s) / g;
    let alpha_i = alpha0.im / (g * g);
    let gamma_i = gamma_imag_from_alpha(alpha0.im, constants)? + 0.5 * h * g.abs().ln();
    let gamma_r = harmonic_action(x0, p0, omega, t, constants);

    Ok(GaussianState {
        t,
        x: classical_position(x0, p0, omega, t, constants),
        p: classical_momentum(x0, p0, omega, t, constants),
        alpha: Complex64::new(alpha_r, alpha_i),
        gamma: Complex64::new(gamma_r, gamma_i),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: Constants = Constants {
        hbar: 1.0,
        mass: 1.0,
    };

    #[test]
    fn free_linear_initial_and_dispersed_width() {
        let s0 = free_linear(0.0, 0.0, 0.5, 0.0, &C).unwrap();
        assert!((s0.alpha - Complex64::i()).norm() < 1e-15);
        assert!((s0.sigma(&C) - 0.5).abs() < 1e-15);

        // sigma(1) = 0.5 sqrt(1 + (t/tau)^2) with tau = 0.5
        let s1 = free_linear(0.0, 0.0, 0.5, 1.0, &C).unwrap();
        assert!((s1.sigma(&C) - 0.5 * 5.0f64.sqrt()).abs() < 1e-12);
        assert!((s1.sigma(&C) - 1.118034).abs() < 1e-6);

        // alpha(0.5) = i/(1+i) = (1+i)/2
        let sh = free_linear(0.0, 0.0, 0.5, 0.5, &C).unwrap();
        assert!((sh.alpha - Complex64::new(0.5, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn free_general_alpha_reduces_and_decays() {
        // purely imaginary alpha0 reduces to the minimum-uncertainty law
        let a = free_general_alpha(Complex64::i(), 0.7, &C).unwrap();
        let s = free_linear(0.0, 0.0, 0.5, 0.7, &C).unwrap();
        assert!((a - s.alpha).norm() < 1e-15);

        // complex-arithmetic oracle: |denominator|^2 = 1 + 4 a0r t/m + (2|a0|t/m)^2
        let alpha0 = Complex64::new(0.25, 0.25);
        let t = 1.0;
        let den = 1.0 + 2.0 * alpha0 * t;
        let d2 = 1.0 + 4.0 * alpha0.re * t + (2.0 * alpha0.norm() * t).powi(2);
        assert!((den.norm_sqr() - d2).abs() < 1e-14);
        let at = free_general_alpha(alpha0, t, &C).unwrap();
        assert!((at - alpha0 / den).norm() < 1e-15);

        // long-time tail: alpha -> m/(2t), real-dominant
        let far = free_general_alpha(alpha0, 1e3, &C).unwrap();
        assert!((far - Complex64::new(0.5e-3, 0.0)).norm() < 1e-6);
        assert!(far.re > 100.0 * far.im);
    }

    #[test]
    fn free_classical_rigid_chirped_and_singular() {
        // dispersionless for purely imaginary alpha0
        let s = free_classical(0.0, 2.0, Complex64::i(), 5.0, &C).unwrap();
        assert_eq!(s.alpha, Complex64::i());
        assert!((s.x - 10.0).abs() < 1e-15);

        // chirped: alpha_r 1/(1+2 a0r t/m), alpha_i 1/(1+..)^2
        let s = free_classical(0.0, 0.0, Complex64::new(0.5, 1.0), 1.0, &C).unwrap();
        assert!((s.alpha.re - 0.25).abs() < 1e-15);
        assert!((s.alpha.im - 0.25).abs() < 1e-15);

        // focusing packet collapses at t = 1
        let err = free_classical(0.0, 0.0, Complex64::new(-0.5, 1.0), 1.0, &C).unwrap_err();
        assert!(matches!(err, Error::SingularCollapse { .. }));
        let err = free_classical(0.0, 0.0, Complex64::new(-0.5, 1.0), 1.5, &C).unwrap_err();
        match err {
            Error::SingularCollapse { t_collapse, .. } => {
                assert!((t_collapse - 1.0).abs() < 1e-15)
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn harmonic_linear_glauber_and_squeezed() {
        // Glauber alpha0 = i m w / 2 is stationary
        let glauber = Complex64::new(0.0, 0.5);
        for t in [0.3, 1.1, 4.9] {
            let s = harmonic_linear(0.0, 1.0, glauber, 1.0, t, &C).unwrap();
            assert!((s.alpha - glauber).norm() < 1e-14);
        }

        // squeezed alpha0 = i m w: alpha(pi/2 w) = i m w / 4, width doubles
        let squeezed = Complex64::new(0.0, 1.0);
        let quarter = 0.5 * PI;
        let s = harmonic_linear(0.0, 0.0, squeezed, 1.0, quarter, &C).unwrap();
        assert!((s.alpha - Complex64::new(0.0, 0.25)).norm() < 1e-14);
        let sigma0 = GaussianState::from_alpha(0.0, 0.0, squeezed, &C)
            .unwrap()
            .sigma(&C);
        assert!((s.sigma(&C) - 2.0 * sigma0).abs() < 1e-14);

        // exact recurrence after a full period
        let s = harmonic_linear(0.3, -0.4, squeezed, 1.0, 2.0 * PI, &C).unwrap();
        assert!((s.alpha - squeezed).norm() < 1e-12);
        assert!((s.x - 0.3).abs() < 1e-12);
        assert!((s.p + 0.4).abs() < 1e-12);
    }

    #[test]
    fn squeezed_width_extremes_follow_the_alpha_law() {
        // alpha oscillates between alpha0 (wt = 0, pi, ...) and
        // -m^2 w^2/(4 alpha0) (wt = pi/2, 3pi/2, ...)
        let alpha0 = Complex64::new(0.0, 1.0);
        let flip = -Complex64::new(1.0, 0.0) / (4.0 * alpha0);
        for (k, expect) in [(0, alpha0), (1, flip), (2, alpha0), (3, flip)] {
            let t = 0.5 * PI * k as f64;
            let s = harmonic_linear(0.0, 0.0, alpha0, 1.0, t, &C).unwrap();
            assert!((s.alpha - expect).norm() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn harmonic_classical_width_law() {
        let glauber = Complex64::new(0.0, 0.5);
        let sigma0 = (0.5f64).sqrt();
        let case = AnalyticCase::HarmonicClassical {
            x0: 1.0,
            p0: 0.0,
            alpha0: glauber,
            omega: 1.0,
        };

        let w = case.width_at(0.25 * PI, &C).unwrap();
        assert!((w - sigma0 / 2.0f64.sqrt()).abs() < 1e-15);
        // zero width exactly at the focus; state evaluation reports the marker
        assert!(case.width_at(0.5 * PI, &C).unwrap() < 1e-15);
        assert!(matches!(
            harmonic_classical(1.0, 0.0, glauber, 1.0, 0.5 * PI, &C),
            Err(Error::SingularFocus { .. })
        ));
        // full revival at wt = pi
        assert!((case.width_at(PI, &C).unwrap() - sigma0).abs() < 1e-15);
    }

    #[test]
    fn characteristic_time_values() {
        assert!((characteristic_time(0.5, &C).unwrap() - 0.5).abs() < 1e-15);
        assert!((characteristic_time(1.0, &C).unwrap() - 2.0).abs() < 1e-15);
        let t1 = characteristic_time(0.7, &C).unwrap();
        let t2 = characteristic_time(1.4, &C).unwrap();
        assert!((t2 / t1 - 4.0).abs() < 1e-12);
        assert!(characteristic_time(0.0, &C).is_err());
    }

    #[test]
    fn trajectories_ride_or_spread() {
        // zero offset rides the centroid
        let case = AnalyticCase::FreeLinear {
            x0: 0.5,
            p0: 2.0,
            sigma0: 0.5,
        };
        let x = case.trajectory(0.5, 1.7, &C).unwrap();
        assert!((x - (0.5 + 2.0 * 1.7)).abs() < 1e-12);

        // hyperbolic spreading: offset sigma0 grows by sigma_t/sigma0
        let case = AnalyticCase::FreeLinear {
            x0: 0.0,
            p0: 0.0,
            sigma0: 0.5,
        };
        let x = case.trajectory(0.5, 1.0, &C).unwrap();
        assert!((x - 5.0f64.sqrt() * 0.5).abs() < 1e-12);
        assert!((x - 1.118034).abs() < 1e-6);

        // all harmonic lambda = 1 paths meet the centroid at the focus
        let case = AnalyticCase::HarmonicClassical {
            x0: 1.0,
            p0: 0.0,
            alpha0: Complex64::new(0.0, 0.5),
            omega: 1.0,
        };
        let sigma0 = (0.5f64).sqrt();
        let x = case.trajectory(1.0 + sigma0, 0.5 * PI, &C).unwrap();
        let xc = classical_position(1.0, 0.0, 1.0, 0.5 * PI, &C);
        assert!((x - xc).abs() < 1e-12);
        // and the offset factor never flips sign past the focus
        let late = case.trajectory_factor(0.6 * PI, &C).unwrap();
        assert!(late > 0.0);
    }

    #[test]
    fn gamma_phase_is_continuous_across_half_periods() {
        let alpha0 = Complex64::new(0.3, 0.8);
        let mut prev = harmonic_linear(0.2, 0.5, alpha0, 1.0, 0.0, &C)
            .unwrap()
            .gamma
            .re;
        let mut t = 0.0;
        while t < 4.0 * PI {
            t += 0.01;
            let g = harmonic_linear(0.2, 0.5, alpha0, 1.0, t, &C)
                .unwrap()
                .gamma
                .re;
            assert!((g - prev).abs() < 0.05, "jump at t = {t}: {prev} -> {g}");
            prev = g;
        }
    }
}
