use thiserror::Error;

/// Errors raised by the packet, integrator, and trajectory layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("packet is not normalizable: Im(alpha) must be positive, got {0}")]
    NonNormalizable(f64),

    #[error("initial width sigma0 must be positive, got {0}")]
    NonPositiveWidth(f64),

    #[error("harmonic frequency omega must be positive, got {0}")]
    NonPositiveFrequency(f64),

    #[error("hbar and mass must be positive, got hbar = {hbar}, mass = {mass}")]
    BadConstants { hbar: f64, mass: f64 },

    #[error("coupling lambda must lie in [0, 1], got {0}")]
    LambdaOutOfRange(f64),

    #[error("invalid integration controls: {0}")]
    BadControls(String),

    #[error("initial state violates the normalization constraint (residual {residual:.3e})")]
    NotNormalized { residual: f64 },

    #[error("integration failed at t = {t}: {reason}")]
    IntegrationFailure { t: f64, reason: String },

    #[error(
        "harmonic integration with lambda > {limit} hits focal singularities; \
         use the analytic lambda = 1 propagator instead"
    )]
    HarmonicLambdaNearOne { lambda: f64, limit: f64 },

    #[error("focusing packet collapses to zero width at t = {t_collapse}; requested t = {t}")]
    SingularCollapse { t: f64, t_collapse: f64 },

    #[error("focal instant at t = {t}: packet width vanishes and the state is singular")]
    SingularFocus { t: f64 },

    #[error("wave-function node at x = {x}: phase and velocity are undefined")]
    NodeSingularity { x: f64 },

    #[error("potential polynomial degree exceeds 2 ({n_coeffs} coefficients)")]
    UnsupportedPotentialDegree { n_coeffs: usize },

    #[error("superposition must hold 1 or 2 packets, got {0}")]
    BadPacketCount(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
