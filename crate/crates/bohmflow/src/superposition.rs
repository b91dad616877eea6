//! Coherent one- and two-packet superpositions: exact normalization,
//! velocity fields, and node detection.
//!
//! A superposition holds each packet's full parameter set and evaluates
//! `psi = nu (psi_1 + psi_2)` in closed form. The normalization prefactor
//! `nu` always comes from the exact overlap integral; for well-separated
//! packets it approaches `1/sqrt(2)`.
//!
//! Under nonlinear coupling the sum of two packet solutions is not an exact
//! solution of the equation of motion (the equation is nonlinear). The
//! convention used throughout this crate is the one the trajectory figures
//! are built on: each packet's parameters evolve independently at the given
//! coupling, and the velocity field is computed from the exact instantaneous
//! sum. Treat two-packet results at `lambda > 0` as defined by that
//! convention rather than as solutions of the full nonlinear problem.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{Constants, GaussianState};

/// Density threshold under which the wave function counts as a node: the
/// phase (and so the velocity) is undefined there.
pub const EPSILON_NODE: f64 = 1e-12;

/// Exact overlap `<a|b>` of two normalized packets (complex Gaussian
/// integral in closed form).
pub fn overlap(a: &GaussianState, b: &GaussianState, constants: &Constants) -> Complex64 {
    let i = Complex64::i();
    let h = constants.hbar;
    // conj(exponent_a) + exponent_b as a quadratic q2 x^2 + q1 x + q0
    let a_bar = a.alpha.conj();
    let g_bar = a.gamma.conj();
    let q2 = i * (b.alpha - a_bar) / h;
    let q1 = i * (2.0 * (a_bar * a.x - b.alpha * b.x) + b.p - a.p) / h;
    let q0 =
        i * (b.alpha * b.x * b.x - a_bar * a.x * a.x + a.p * a.x - b.p * b.x + b.gamma - g_bar) / h;
    // int exp(q2 x^2 + q1 x + q0) dx, convergent because Re(-q2) > 0
    let neg = -q2;
    (std::f64::consts::PI / neg).sqrt() * (q0 + q1 * q1 / (4.0 * neg)).exp()
}

/// One or two Gaussian packets in a coherent sum.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionState {
    packets: Vec<GaussianState>,
    norm_factor: f64,
}

impl SuperpositionState {
    /// Build from 1 or 2 packets; the normalization prefactor is computed
    /// exactly from the overlap integral.
    pub fn new(packets: Vec<GaussianState>, constants: &Constants) -> Result<Self> {
        match packets.len() {
            1 => Ok(SuperpositionState {
                packets,
                norm_factor: 1.0,
            }),
            2 => {
                for p in &packets {
                    if !(p.alpha.im > 0.0) {
                        return Err(Error::NonNormalizable(p.alpha.im));
                    }
                }
                let cross = overlap(&packets[0], &packets[1], constants).re;
                let norm_factor = 1.0 / (2.0 + 2.0 * cross).sqrt();
                Ok(SuperpositionState {
                    packets,
                    norm_factor,
                })
            }
            n => Err(Error::BadPacketCount(n)),
        }
    }

    pub fn packets(&self) -> &[GaussianState] {
        &self.packets
    }

    /// Amplitude prefactor of the sum; `1/sqrt(2)` for well-separated
    /// packets, `1/2` for two identical ones.
    pub fn norm_factor(&self) -> f64 {
        self.norm_factor
    }

    /// Common time of the packets.
    pub fn t(&self) -> f64 {
        self.packets[0].t
    }

    pub fn psi(&self, x: f64, constants: &Constants) -> Complex64 {
        match self.packets.len() {
            1 => self.packets[0].psi(x, constants),
            _ => {
                let (_, z_lead, w) = self.split_exponents(x, constants);
                self.norm_factor * z_lead.exp() * (1.0 + w.exp())
            }
        }
    }

    pub fn density(&self, x: f64, constants: &Constants) -> f64 {
        self.psi(x, constants).norm_sqr()
    }

    /// Bohmian velocity `v = Im[psi'/psi]/m` from the exact sum. Errors with
    /// the position when the density lies below [`EPSILON_NODE`].
    pub fn velocity(&self, x: f64, constants: &Constants) -> Result<f64> {
        let (v, density) = self.velocity_and_density(x, constants);
        if density < EPSILON_NODE {
            return Err(Error::NodeSingularity { x });
        }
        Ok(v)
    }

    /// Velocity together with the local density, without the node check.
    /// Near a node the returned velocity can be arbitrarily large; callers
    /// that integrate trajectories are expected to look at the density.
    pub fn velocity_and_density(&self, x: f64, constants: &Constants) -> (f64, f64) {
        let m = constants.mass;
        match self.packets.len() {
            1 => {
                let p = &self.packets[0];
                (
                    (p.p + 2.0 * p.alpha.re * (x - p.x)) / m,
                    p.evaluate(x, constants).density,
                )
            }
            _ => {
                // factor out the dominant exponent: psi'/psi =
                // (d_lead + d_trail e^w) / (1 + e^w), Re(w) <= 0
                let (lead, z_lead, w) = self.split_exponents(x, constants);
                let d_lead = self.packets[lead].log_derivative(x, constants);
                let d_trail = self.packets[1 - lead].log_derivative(x, constants);
                let ew = w.exp();
                let ratio = (d_lead + d_trail * ew) / (1.0 + ew);
                let nf = self.norm_factor;
                let density = nf * nf * (2.0 * z_lead.re).exp() * (1.0 + ew).norm_sqr();
                (ratio.im / m, density)
            }
        }
    }

    /// Dominant packet index, its exponent, and the relative exponent
    /// `w = z_other - z_lead` with `Re(w) <= 0`, so `e^w` never overflows.
    fn split_exponents(&self, x: f64, constants: &Constants) -> (usize, Complex64, Complex64) {
        let z0 = self.packets[0].exponent(x, constants);
        let z1 = self.packets[1].exponent(x, constants);
        if z0.re >= z1.re {
            (0, z0, z1 - z0)
        } else {
            (1, z1, z0 - z1)
        }
    }

    /// Interference factor `cosh((z1 - z2)/2)`; the superposition vanishes
    /// exactly where this does.
    fn interference_factor(&self, x: f64, constants: &Constants) -> Complex64 {
        let u =
            0.5 * (self.packets[0].exponent(x, constants) - self.packets[1].exponent(x, constants));
        u.cosh()
    }

    /// Peak of the cross term `2 nu^2 |psi_1| |psi_2|` over a scan; used to
    /// decide whether the packets overlap at all.
    fn max_cross_density(&self, window: &ScanWindow, constants: &Constants) -> f64 {
        let mut max = 0.0f64;
        for x in window.points_iter() {
            let z0 = self.packets[0].exponent(x, constants).re;
            let z1 = self.packets[1].exponent(x, constants).re;
            let cross = 2.0 * self.norm_factor * self.norm_factor * (z0 + z1).exp();
            max = max.max(cross);
        }
        max
    }
}

/// Uniform scan grid for node searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanWindow {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl ScanWindow {
    pub fn new(lo: f64, hi: f64) -> Self {
        ScanWindow {
            lo,
            hi,
            points: 4001,
        }
    }

    fn points_iter(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.points.max(2);
        let step = (self.hi - self.lo) / (n - 1) as f64;
        (0..n).map(move |k| self.lo + k as f64 * step)
    }
}

/// Positions where the superposed density vanishes, plus their mean gap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeReport {
    pub t: f64,
    pub positions: Vec<f64>,
    /// Mean gap between consecutive nodes; `None` below two nodes.
    pub spacing: Option<f64>,
}

impl NodeReport {
    fn empty(t: f64) -> Self {
        NodeReport {
            t,
            positions: Vec::new(),
            spacing: None,
        }
    }
}

/// Locate nodes of a two-packet superposition inside `window`.
///
/// The superposition vanishes where `cosh((z1 - z2)/2)` does, so the scan
/// brackets sign changes of its real part, bisects each bracket, and keeps
/// the root when the actual density there lies below [`EPSILON_NODE`].
/// Non-overlapping packets (cross density below the node threshold
/// everywhere) yield an empty report.
pub fn detect_nodes(
    superposition: &SuperpositionState,
    window: &ScanWindow,
    constants: &Constants,
) -> NodeReport {
    let t = superposition.t();
    if superposition.packets().len() != 2 {
        return NodeReport::empty(t);
    }
    if superposition.max_cross_density(window, constants) < EPSILON_NODE {
        return NodeReport::empty(t);
    }

    let re_q = |x: f64| superposition.interference_factor(x, constants).re;
    let mut positions = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for x in window.points_iter() {
        let f = re_q(x);
        if let Some((x0, f0)) = prev {
            if f0 == 0.0 {
                positions.push(x0);
            } else if f0 * f < 0.0 {
                let root = bisect(&re_q, x0, x);
                if superposition.density(root, constants) < EPSILON_NODE {
                    positions.push(root);
                }
            }
        }
        prev = Some((x, f));
    }

    positions.sort_by(|a, b| a.partial_cmp(b).unwrap());
    positions.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let spacing = if positions.len() >= 2 {
        Some((positions[positions.len() - 1] - positions[0]) / (positions.len() - 1) as f64)
    } else {
        None
    };
    NodeReport {
        t,
        positions,
        spacing,
    }
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: Constants = Constants {
        hbar: 1.0,
        mass: 1.0,
    };

    fn packet(x0: f64, p0: f64, sigma0: f64) -> GaussianState {
        GaussianState::minimum_uncertainty(x0, p0, sigma0, &C).unwrap()
    }

    /// Complex Simpson quadrature oracle for the overlap integral.
    fn overlap_quadrature(a: &GaussianState, b: &GaussianState) -> Complex64 {
        let lo = a.x.min(b.x) - 12.0;
        let hi = a.x.max(b.x) + 12.0;
        let n = 40_000;
        let h = (hi - lo) / n as f64;
        let f = |x: f64| a.psi(x, &C).conj() * b.psi(x, &C);
        let mut acc = f(lo) + f(hi);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(lo + k as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn overlap_matches_quadrature() {
        let a = packet(-1.0, 2.0, 0.5);
        let b = packet(0.5, -1.0, 0.8);
        let exact = overlap(&a, &b, &C);
        let quad = overlap_quadrature(&a, &b);
        assert!((exact - quad).norm() < 1e-10, "{exact} vs {quad}");
        // self-overlap of a normalized packet is one
        assert!((overlap(&a, &a, &C) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn norm_factor_limits() {
        // far-separated packets: nu -> 1/sqrt(2)
        let sup = SuperpositionState::new(vec![packet(-3.0, 0.0, 0.5), packet(3.0, 0.0, 0.5)], &C)
            .unwrap();
        assert!((sup.norm_factor() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
        // identical packets: nu = 1/2
        let p = packet(0.0, 1.0, 0.5);
        let sup = SuperpositionState::new(vec![p, p], &C).unwrap();
        assert!((sup.norm_factor() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn superposed_density_normalizes() {
        let sup = SuperpositionState::new(vec![packet(-1.0, 3.0, 0.5), packet(1.0, -3.0, 0.5)], &C)
            .unwrap();
        let n = 60_000;
        let (lo, hi) = (-12.0, 12.0);
        let h = (hi - lo) / n as f64;
        let mut acc = sup.density(lo, &C) + sup.density(hi, &C);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * sup.density(lo + k as f64 * h, &C);
        }
        let norm = acc * h / 3.0;
        assert!((norm - 1.0).abs() < 1e-10, "norm = {norm}");
    }

    #[test]
    fn symmetry_axis_is_a_streamline() {
        let sup = SuperpositionState::new(vec![packet(-2.0, 5.0, 0.5), packet(2.0, -5.0, 0.5)], &C)
            .unwrap();
        assert!(sup.velocity(0.0, &C).unwrap().abs() < 1e-12);
    }

    #[test]
    fn degenerate_double_packet_equals_single() {
        let p = packet(0.3, 1.7, 0.6);
        let sup = SuperpositionState::new(vec![p, p], &C).unwrap();
        for &x in &[-1.0, 0.3, 0.9, 2.4] {
            let v_single = crate::trajectory::velocity_single(&p, x, &C);
            assert!((sup.velocity(x, &C).unwrap() - v_single).abs() < 1e-12);
        }
    }

    #[test]
    fn far_packets_decouple_locally() {
        // d = 6, sigma0 = 0.5: cross term is exp(-d^2/8 sigma0^2) ~ exp(-18)
        let p1 = packet(-3.0, 0.0, 0.5);
        let p2 = packet(3.0, 0.0, 0.5);
        let sup = SuperpositionState::new(vec![p1, p2], &C).unwrap();
        for &dx in &[-0.05, 0.0, 0.05] {
            let x = p1.x + dx;
            let v_sup = sup.velocity(x, &C).unwrap();
            let v_one = crate::trajectory::velocity_single(&p1, x, &C);
            let scale = v_one.abs().max(1.0);
            assert!((v_sup - v_one).abs() / scale < 1e-6);
        }
    }

    #[test]
    fn head_on_node_spacing() {
        // two rigid packets fully overlapped with opposite momenta p0 = 10:
        // nodes every pi hbar / p0
        let sup =
            SuperpositionState::new(vec![packet(0.0, -10.0, 0.5), packet(0.0, 10.0, 0.5)], &C)
                .unwrap();
        let report = detect_nodes(&sup, &ScanWindow::new(-1.5, 1.5), &C);
        assert!(
            report.positions.len() >= 8,
            "found {}",
            report.positions.len()
        );
        let spacing = report.spacing.unwrap();
        assert!(
            (spacing - std::f64::consts::PI / 10.0).abs() < 1e-6,
            "{spacing}"
        );
    }

    #[test]
    fn velocity_errors_at_a_node() {
        let sup =
            SuperpositionState::new(vec![packet(0.0, -10.0, 0.5), packet(0.0, 10.0, 0.5)], &C)
                .unwrap();
        // first node sits at pi/(2 p0)
        let node = std::f64::consts::PI / 20.0;
        match sup.velocity(node, &C) {
            Err(Error::NodeSingularity { x }) => assert!((x - node).abs() < 1e-9),
            other => panic!("expected node singularity, got {other:?}"),
        }
    }

    #[test]
    fn separated_packets_have_no_nodes() {
        let sup =
            SuperpositionState::new(vec![packet(-10.0, 0.0, 0.5), packet(10.0, 0.0, 0.5)], &C)
                .unwrap();
        let report = detect_nodes(&sup, &ScanWindow::new(-12.0, 12.0), &C);
        assert!(report.positions.is_empty());
        assert_eq!(report.spacing, None);
    }
}
