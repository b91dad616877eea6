//! Built-in scenarios matching the reference trajectory figures.
//!
//! Family layout, all in natural units with 15 paths spanning 2.5 widths:
//!
//! * `fig1a`-`fig1d`: free packet, `sigma0 = 0.5`, at rest; coupling
//!   0 / 0.7 / 0.9 / 1 suppresses the dispersion.
//! * `fig2a`-`fig2d`: harmonic coherent packet launched from the center
//!   with `p0 = 1`; coupling 0 / 0.7 / 0.9 / 0.999 focuses at the turning
//!   points.
//! * `fig3a`-`fig3d`: same but launched from the turning point `x0 = 1`.
//! * `fig4a`, `fig4b`: finely sampled zooms of `fig2d` / `fig3d` around the
//!   first focal instant.
//! * `fig5a`-`fig5d`: two free packets at `x = +-3`, at rest (slow
//!   dispersive overlap).
//! * `fig6a`-`fig6d`: the same pair thrown head-on with `p = -+10`; full
//!   overlap at `t = 0.3`.
//! * `fig7a`-`fig7d`: two coherent packets from opposite harmonic turning
//!   points `x = +-5`.
//! * `fig8a`, `fig8b`: finely sampled zooms of `fig7a` / `fig7d` around the
//!   first approach.

use std::f64::consts::PI;

use super::{
    EnsembleSpec, GridSpec, IntegrationSpec, LambdaSpec, OutputSpec, PacketSpec, Placement,
    PotentialSpec, ScenarioConfig,
};
use crate::gaussian::Constants;

/// Coherent-state width of the unit harmonic oscillator, `sqrt(hbar/2mw)`.
fn glauber_sigma() -> f64 {
    std::f64::consts::FRAC_1_SQRT_2
}

fn base(
    potential: PotentialSpec,
    packets: Vec<PacketSpec>,
    lambda: f64,
    t_final: f64,
    store_every: usize,
) -> ScenarioConfig {
    ScenarioConfig {
        constants: Constants::natural(),
        potential,
        packets,
        lambda: LambdaSpec::One(lambda),
        integration: IntegrationSpec {
            dt: 1e-3,
            t_final,
            store_every,
        },
        ensemble: EnsembleSpec {
            count: 15,
            span_sigma: 2.5,
            placement: Placement::Uniform,
        },
        outputs: OutputSpec {
            trajectories: true,
            classical: false,
            density: false,
            nodes: false,
            audits: true,
        },
        grid: None,
    }
}

fn packet(x0: f64, p0: f64, sigma0: f64) -> PacketSpec {
    PacketSpec {
        x0,
        p0,
        sigma0: Some(sigma0),
        alpha0: None,
    }
}

fn fig1(lambda: f64) -> ScenarioConfig {
    base(
        PotentialSpec::Free,
        vec![packet(0.0, 0.0, 0.5)],
        lambda,
        5.0,
        10,
    )
}

fn fig2(lambda: f64) -> ScenarioConfig {
    let mut config = base(
        PotentialSpec::Harmonic { omega: 1.0 },
        vec![packet(0.0, 1.0, glauber_sigma())],
        lambda,
        4.0 * PI,
        20,
    );
    config.outputs.classical = true;
    config
}

fn fig3(lambda: f64) -> ScenarioConfig {
    let mut config = fig2(lambda);
    config.packets = vec![packet(1.0, 0.0, glauber_sigma())];
    config
}

fn fig4(parent: ScenarioConfig) -> ScenarioConfig {
    let mut config = parent;
    config.integration = IntegrationSpec {
        dt: 1e-3,
        t_final: 2.4,
        store_every: 1,
    };
    config
}

fn fig5(lambda: f64) -> ScenarioConfig {
    let mut config = base(
        PotentialSpec::Free,
        vec![packet(3.0, 0.0, 0.5), packet(-3.0, 0.0, 0.5)],
        lambda,
        5.0,
        10,
    );
    config.outputs.nodes = true;
    config
}

fn fig6(lambda: f64) -> ScenarioConfig {
    let mut config = base(
        PotentialSpec::Free,
        vec![packet(3.0, -10.0, 0.5), packet(-3.0, 10.0, 0.5)],
        lambda,
        0.6,
        1,
    );
    config.outputs.nodes = true;
    config.outputs.classical = true;
    config.grid = Some(GridSpec {
        x_min: -6.0,
        x_max: 6.0,
        nx: 601,
    });
    config
}

fn fig7(lambda: f64) -> ScenarioConfig {
    let mut config = base(
        PotentialSpec::Harmonic { omega: 1.0 },
        vec![
            packet(5.0, 0.0, glauber_sigma()),
            packet(-5.0, 0.0, glauber_sigma()),
        ],
        lambda,
        4.0 * PI,
        20,
    );
    config.outputs.nodes = true;
    config.outputs.classical = true;
    config
}

fn fig8(parent: ScenarioConfig) -> ScenarioConfig {
    let mut config = parent;
    config.integration = IntegrationSpec {
        dt: 1e-3,
        t_final: 2.4,
        store_every: 1,
    };
    config
}

/// Expand a preset name into a fully explicit config.
pub fn preset(name: &str) -> Option<ScenarioConfig> {
    let config = match name {
        "fig1a" => fig1(0.0),
        "fig1b" => fig1(0.7),
        "fig1c" => fig1(0.9),
        "fig1d" => fig1(1.0),
        "fig2a" => fig2(0.0),
        "fig2b" => fig2(0.7),
        "fig2c" => fig2(0.9),
        "fig2d" => fig2(0.999),
        "fig3a" => fig3(0.0),
        "fig3b" => fig3(0.7),
        "fig3c" => fig3(0.9),
        "fig3d" => fig3(0.999),
        "fig4a" => fig4(fig2(0.999)),
        "fig4b" => fig4(fig3(0.999)),
        "fig5a" => fig5(0.0),
        "fig5b" => fig5(0.7),
        "fig5c" => fig5(0.9),
        "fig5d" => fig5(1.0),
        "fig6a" => fig6(0.0),
        "fig6b" => fig6(0.7),
        "fig6c" => fig6(0.9),
        "fig6d" => fig6(1.0),
        "fig7a" => fig7(0.0),
        "fig7b" => fig7(0.7),
        "fig7c" => fig7(0.9),
        "fig7d" => fig7(0.999),
        "fig8a" => fig8(fig7(0.0)),
        "fig8b" => fig8(fig7(0.999)),
        _ => return None,
    };
    Some(config)
}

pub fn preset_names() -> &'static [&'static str] {
    &[
        "fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b",
        "fig3c", "fig3d", "fig4a", "fig4b", "fig5a", "fig5b", "fig5c", "fig5d", "fig6a", "fig6b",
        "fig6c", "fig6d", "fig7a", "fig7b", "fig7c", "fig7d", "fig8a", "fig8b",
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_expands_and_validates() {
        for name in preset_names() {
            let config = preset(name).unwrap_or_else(|| panic!("missing preset {name}"));
            config.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(preset("fig9z").is_none());
    }

    #[test]
    fn presets_round_trip_through_toml() {
        for name in preset_names() {
            let config = preset(name).unwrap();
            let text = config.to_toml();
            let back = ScenarioConfig::from_toml(&text)
                .unwrap_or_else(|e| panic!("{name} failed to re-parse: {e}\n{text}"));
            assert_eq!(config, back, "{name} did not round-trip");
        }
    }

    #[test]
    fn preset_parameters_match_the_figure_captions() {
        // fig1: free, sigma0 = 0.5, at rest, lambda 0/0.7/0.9/1
        let f = preset("fig1d").unwrap();
        assert_eq!(f.potential, PotentialSpec::Free);
        assert_eq!(f.packets[0].sigma0, Some(0.5));
        assert_eq!((f.packets[0].x0, f.packets[0].p0), (0.0, 0.0));
        assert_eq!(f.lambda, LambdaSpec::One(1.0));
        assert_eq!(preset("fig1b").unwrap().lambda, LambdaSpec::One(0.7));

        // fig2: harmonic coherent packet from the center with p0 = 1
        let f = preset("fig2d").unwrap();
        assert_eq!(f.potential, PotentialSpec::Harmonic { omega: 1.0 });
        assert_eq!((f.packets[0].x0, f.packets[0].p0), (0.0, 1.0));
        assert!((f.packets[0].sigma0.unwrap() - (0.5f64).sqrt()).abs() < 1e-15);
        assert_eq!(f.lambda, LambdaSpec::One(0.999));

        // fig3: launched from the turning point
        let f = preset("fig3a").unwrap();
        assert_eq!((f.packets[0].x0, f.packets[0].p0), (1.0, 0.0));
        assert_eq!(f.lambda, LambdaSpec::One(0.0));

        // fig5/6: pair at +-3; fig6 adds head-on momenta -+10
        let f = preset("fig5a").unwrap();
        assert_eq!((f.packets[0].x0, f.packets[1].x0), (3.0, -3.0));
        assert_eq!((f.packets[0].p0, f.packets[1].p0), (0.0, 0.0));
        let f = preset("fig6c").unwrap();
        assert_eq!((f.packets[0].p0, f.packets[1].p0), (-10.0, 10.0));
        assert_eq!(f.lambda, LambdaSpec::One(0.9));

        // fig7: harmonic pair from opposite turning points at +-5
        let f = preset("fig7d").unwrap();
        assert_eq!((f.packets[0].x0, f.packets[1].x0), (5.0, -5.0));
        assert_eq!(f.lambda, LambdaSpec::One(0.999));

        // every preset: 15 paths spanning 2.5 widths, natural units
        for name in preset_names() {
            let config = preset(name).unwrap();
            assert_eq!(config.ensemble.count, 15, "{name}");
            assert_eq!(config.ensemble.span_sigma, 2.5, "{name}");
            assert_eq!(config.constants, Constants::natural(), "{name}");
        }
    }
}
