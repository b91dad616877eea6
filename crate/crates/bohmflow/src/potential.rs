//! External potentials, restricted to polynomials of degree at most two.
//!
//! For a quadratic the local Taylor data `(V, V', V'')` at the packet
//! centroid is exact, which is what keeps Gaussian packets Gaussian. Higher
//! polynomial degrees are rejected at construction rather than silently
//! truncated.

use crate::error::{Error, Result};
use crate::gaussian::Constants;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    /// `V = 0`.
    Free,
    /// `V = m omega^2 x^2 / 2`.
    Harmonic { omega: f64 },
    /// `V = c0 + c1 x + c2 x^2`.
    Quadratic { c0: f64, c1: f64, c2: f64 },
}

/// Local Taylor data of the potential at one point; exact for every kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialTaylor {
    pub v: f64,
    pub v1: f64,
    pub v2: f64,
}

impl Potential {
    pub fn harmonic(omega: f64) -> Result<Self> {
        if omega > 0.0 && omega.is_finite() {
            Ok(Potential::Harmonic { omega })
        } else {
            Err(Error::NonPositiveFrequency(omega))
        }
    }

    /// Build from polynomial coefficients `[c0, c1, c2, ...]`; more than
    /// three coefficients is a degree-3+ polynomial and is refused.
    pub fn from_coefficients(c: &[f64]) -> Result<Self> {
        if c.len() > 3 {
            return Err(Error::UnsupportedPotentialDegree { n_coeffs: c.len() });
        }
        let get = |i: usize| c.get(i).copied().unwrap_or(0.0);
        Ok(Potential::Quadratic {
            c0: get(0),
            c1: get(1),
            c2: get(2),
        })
    }

    /// `(V, V', V'')` at `x`. The mass enters only through the harmonic kind.
    pub fn taylor_at(&self, x: f64, constants: &Constants) -> PotentialTaylor {
        match *self {
            Potential::Free => PotentialTaylor {
                v: 0.0,
                v1: 0.0,
                v2: 0.0,
            },
            Potential::Harmonic { omega } => {
                let k = constants.mass * omega * omega;
                PotentialTaylor {
                    v: 0.5 * k * x * x,
                    v1: k * x,
                    v2: k,
                }
            }
            Potential::Quadratic { c0, c1, c2 } => PotentialTaylor {
                v: c0 + c1 * x + c2 * x * x,
                v1: c1 + 2.0 * c2 * x,
                v2: 2.0 * c2,
            },
        }
    }
}
