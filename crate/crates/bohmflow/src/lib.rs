//! Gaussian wave-packet dynamics for the lambda-coupled nonlinear
//! Schrodinger equation, with Bohmian and classical trajectory ensembles.
//!
//! The equation interpolates between ordinary quantum propagation
//! (`lambda = 0`) and a regime whose phase obeys the classical
//! Hamilton-Jacobi equation (`lambda = 1`) by subtracting a tunable fraction
//! of the quantum potential. Restricted to at-most-quadratic potentials,
//! Gaussian packets stay Gaussian and the whole dynamics reduces to six
//! coupled parameter equations, which this crate integrates, solves in
//! closed form where possible, and probes with trajectory ensembles.
//!
//! ```
//! use bohmflow::{Constants, GaussianState, IntegrationControls, Potential};
//!
//! let c = Constants::natural();
//! let packet = GaussianState::minimum_uncertainty(0.0, 0.0, 0.5, &c)?;
//! let series = bohmflow::heller::integrate(
//!     &packet,
//!     &IntegrationControls::new(1.0, 2.0),
//!     &Potential::Free,
//!     &c,
//! )?;
//! // full coupling freezes the width
//! assert!((series.last().unwrap().sigma(&c) - 0.5).abs() < 1e-12);
//! # Ok::<(), bohmflow::Error>(())
//! ```
//!
//! A narrative guide with derivations and worked examples lives in the
//! `book/` directory of the repository.

// validation uses `!(x > 0.0)` forms on purpose: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod gaussian;
pub mod heller;
pub mod potential;
pub mod scenario;
pub mod superposition;
pub mod trajectory;

pub use analytic::AnalyticCase;
pub use error::{Error, Result};
pub use gaussian::{Constants, GaussianState, WaveSample};
pub use heller::{HellerDerivative, IntegrationControls};
pub use potential::{Potential, PotentialTaylor};
pub use superposition::{NodeReport, SuperpositionState};
pub use trajectory::{FieldSpec, TrajectoryEnsemble};
