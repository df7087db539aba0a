// Copyright 2026 wgqed contributors
// SPDX-License-Identifier: Apache-2.0

//! Gate fidelity and leakage for Gaussian photon pulses.
//!
//! Pulses have spectral intensity `g^2(w) = exp(-(w - c)^2 / sigma^2) / (sigma sqrt(pi))`,
//! normalized to one, and temporal width `delta_t = 1 / (2 sigma)`.
//!
//! Leakage is `1 - <phi_f|phi_f>^2`: the norm of the output state enters
//! squared. The more common `1 - <phi_f|phi_f>` is available as
//! `1 - GateMetrics::survival`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::amplitudes::{ground, meta_resonant, raman, three_level, AtomState};
use crate::error::{Error, Result};
use crate::params::{round_trip, SystemParams3LS, SystemParams4LS};
use crate::protocol::ProtocolOptions;
use crate::quadrature::{QuadratureGrid, Rule};

/// Largest accepted change of F or P_l between the grid and its refinement.
pub const GRID_TOLERANCE: f64 = 1e-4;

/// Gaussian pulse in frequency space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PulseSpec {
    pub center: f64,
    pub sigma: f64,
    pub delta_t: f64,
}

impl PulseSpec {
    pub fn from_delta_t(center: f64, delta_t: f64) -> Result<Self> {
        if !(delta_t > 0.0 && delta_t.is_finite()) {
            return Err(Error::BadInput(format!("pulse width must be positive, got {delta_t}")));
        }
        Ok(PulseSpec {
            center,
            sigma: 0.5 / delta_t,
            delta_t,
        })
    }

    /// Spectral amplitude `g(w)`.
    pub fn amplitude(&self, omega: f64) -> f64 {
        self.intensity(omega).sqrt()
    }

    /// `g^2(w)`, unit area.
    pub fn intensity(&self, omega: f64) -> f64 {
        let d = (omega - self.center) / self.sigma;
        (-d * d).exp() / (self.sigma * PI.sqrt())
    }
}

/// Purcell factor `P = gamma / gamma_prime`; `Infinite` means no loss.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Purcell {
    Finite(f64),
    Infinite,
}

impl Purcell {
    pub fn gamma_prime(&self, gamma: f64) -> f64 {
        match *self {
            Purcell::Finite(p) => gamma / p,
            Purcell::Infinite => 0.0,
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Purcell::Finite(p) => p,
            Purcell::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Purcell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Purcell::Finite(p) => write!(f, "{p}"),
            Purcell::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Purcell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" => Ok(Purcell::Infinite),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::BadInput(format!("cannot parse Purcell factor '{s}'")))?;
                if p.is_infinite() && p > 0.0 {
                    Ok(Purcell::Infinite)
                } else if p > 0.0 {
                    Ok(Purcell::Finite(p))
                } else {
                    Err(Error::BadInput(format!("Purcell factor must be positive, got {p}")))
                }
            }
        }
    }
}

impl Serialize for Purcell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Purcell::Finite(p) => s.serialize_f64(p),
            Purcell::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GateMetrics {
    pub fidelity: f64,
    /// `1 - <phi_f|phi_f>^2`.
    pub leakage: f64,
    /// Max change of fidelity or leakage under grid refinement.
    pub grid_residual: f64,
    /// `<phi_f|phi_f>`.
    pub survival: f64,
}

#[derive(Clone, Copy, Debug)]
struct RawMetrics {
    fidelity: f64,
    survival: f64,
}

impl RawMetrics {
    fn leakage(&self) -> f64 {
        (1.0 - self.survival * self.survival).clamp(0.0, 1.0)
    }
}

fn converge<F: Fn(&QuadratureGrid) -> RawMetrics>(grid: &QuadratureGrid, eval: F) -> Result<GateMetrics> {
    grid.validate()?;
    let coarse = eval(grid);
    let fine = eval(&grid.refined());
    let residual = (coarse.fidelity - fine.fidelity)
        .abs()
        .max((coarse.leakage() - fine.leakage()).abs());
    if residual.is_nan() || residual > GRID_TOLERANCE {
        return Err(Error::GridNotConverged {
            residual,
            limit: GRID_TOLERANCE,
        });
    }
    Ok(GateMetrics {
        fidelity: coarse.fidelity.clamp(0.0, 1.0),
        leakage: coarse.leakage(),
        grid_residual: residual,
        survival: coarse.survival,
    })
}

/// Per-node samples of a pulse over its quadrature window.
struct Sampled {
    rule: Rule,
    /// `w_k g^2(x_k)`.
    weight: Vec<f64>,
}

impl Sampled {
    fn new(pulse: &PulseSpec, grid: &QuadratureGrid) -> Self {
        let rule = grid.rule(pulse.center, pulse.sigma);
        let weight = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| w * pulse.intensity(x))
            .collect();
        Sampled { rule, weight }
    }

    fn sum<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        self.rule.nodes.iter().zip(&self.weight).map(|(&x, &w)| w * f(x)).sum()
    }

    /// `sum_k w_k g(x_k) g_other(x_k + shift) f(x_k)`, an overlap with a shifted pulse.
    fn cross<F: Fn(f64) -> Complex64>(&self, pulse: &PulseSpec, other: &PulseSpec, shift: f64, f: F) -> Complex64 {
        self.rule
            .nodes
            .iter()
            .zip(&self.rule.weights)
            .map(|(&x, &w)| w * pulse.amplitude(x) * other.amplitude(x + shift) * f(x))
            .sum()
    }
}

/// Fidelity and leakage of the four-level gate for A and B pulses at
/// `omega1` and C at `Omega32`, target `-|phi_A>|phi_B>|phi_C>|1>`.
pub fn fidelity_4ls(
    p: &SystemParams4LS,
    delta_t: f64,
    grid: &QuadratureGrid,
    opts: ProtocolOptions,
) -> Result<GateMetrics> {
    p.require_valid()?;
    let qubit = PulseSpec::from_delta_t(p.omega1, delta_t)?;
    if p.omega13() < 20.0 * qubit.sigma {
        return Err(Error::PulseOverlap {
            omega13: p.omega13(),
            sigma: qubit.sigma,
        });
    }
    converge(grid, |g| evaluate_4ls(p, delta_t, g, opts))
}

fn evaluate_4ls(p: &SystemParams4LS, delta_t: f64, grid: &QuadratureGrid, opts: ProtocolOptions) -> RawMetrics {
    let qubit = PulseSpec::from_delta_t(p.omega1, delta_t).expect("checked by caller");
    let aux = PulseSpec { center: p.omega32, ..qubit };
    let omega13 = p.omega13();
    let q = Sampled::new(&qubit, grid);
    let c = Sampled::new(&aux, grid);

    let n = q.rule.len();
    let mut a_direct = Vec::with_capacity(n); // r11^2
    let mut a_trapped = Vec::with_capacity(n); // r13 r31(w~)
    let mut b_ground = Vec::with_capacity(n); // r11
    let mut b_meta = Vec::with_capacity(n); // R3
    let mut f2_a = Vec::with_capacity(n); // r11 R3
    let mut f3_a0 = Vec::with_capacity(n); // r11 r13
    let mut f3_a1 = Vec::with_capacity(n); // r13 r33(w~)
    let mut b_trap = Vec::with_capacity(n); // r13
    for &w in &q.rule.nodes {
        let (r11, r13) = ground(p, w);
        let (r33t, r31t) = raman(p, w - omega13);
        let r3 = meta_resonant(p, w);
        a_direct.push(r11 * r11);
        a_trapped.push(r13 * r31t);
        b_ground.push(r11);
        b_meta.push(r3);
        f2_a.push(r11 * r3);
        f3_a0.push(r11 * r13);
        f3_a1.push(r13 * r33t);
        b_trap.push(r13);
    }

    let c_pass = |w: f64| {
        if opts.c_trivial_phase {
            -round_trip(w, p.a)
        } else {
            Complex64::new(1.0, 0.0)
        }
    };
    let c_pass_sum = c.sum(c_pass);

    // f1 branch: 2D tensor product over (A, B) times the C factor
    let mut f1_overlap = Complex64::new(0.0, 0.0);
    let mut f1_norm = 0.0;
    for i in 0..n {
        let wa = q.weight[i];
        let mut row = Complex64::new(0.0, 0.0);
        let mut row_norm = 0.0;
        for j in 0..n {
            let f1 = a_direct[i] * b_ground[j] + a_trapped[i] * b_meta[j];
            row += q.weight[j] * f1;
            row_norm += q.weight[j] * f1.norm_sqr();
        }
        f1_overlap += wa * row;
        f1_norm += wa * row_norm;
    }
    let c_total: f64 = c.weight.iter().sum();

    // f2, f3 branches leave the emitter in 3 or return the C photon at
    // w_C + Omega13; only the latter can overlap the target, through
    // Gaussians evaluated Omega13 away from their centers.
    let r31_c = |w: f64| raman(p, w).1;
    let c_released = c.cross(&aux, &aux, omega13, r31_c);
    let f2_overlap = q.sum_indexed(&f2_a) * q.cross_indexed(&qubit, -omega13, &b_trap) * c_released;
    let f3_overlap = (q.cross_indexed(&qubit, -omega13, &f3_a0) * q.sum_indexed(&b_ground)
        + q.cross_indexed(&qubit, -omega13, &f3_a1) * q.sum_indexed(&b_meta))
        * c_released;
    let overlap = -(f1_overlap * c_pass_sum + f2_overlap + f3_overlap);

    let mut f23_norm = 0.0;
    for i in 0..n {
        for j in 0..n {
            let f2 = f2_a[i] * b_trap[j];
            let f3 = f3_a0[i] * b_ground[j] + f3_a1[i] * b_meta[j];
            f23_norm += q.weight[i] * q.weight[j] * (f2.norm_sqr() + f3.norm_sqr());
        }
    }
    let c_raman: f64 = c
        .rule
        .nodes
        .iter()
        .zip(&c.weight)
        .map(|(&w, &g)| {
            let (r33, r31) = raman(p, w);
            g * (r33.norm_sqr() + r31.norm_sqr())
        })
        .sum();

    RawMetrics {
        fidelity: overlap.norm_sqr(),
        survival: f1_norm * c_total + f23_norm * c_raman,
    }
}

impl Sampled {
    fn sum_indexed(&self, values: &[Complex64]) -> Complex64 {
        self.weight.iter().zip(values).map(|(&w, &v)| w * v).sum()
    }

    fn cross_indexed(&self, pulse: &PulseSpec, shift: f64, values: &[Complex64]) -> Complex64 {
        self.rule
            .nodes
            .iter()
            .zip(&self.rule.weights)
            .zip(values)
            .map(|((&x, &w), &v)| w * pulse.amplitude(x) * pulse.amplitude(x + shift) * v)
            .sum()
    }
}

/// Photon-atom gate fidelity for a pulse at `omega1` and the atom in
/// `(|g> + |s>)/sqrt 2`, target `|omega1> (-|g> + |s>)/sqrt 2`.
pub fn fidelity_3ls(p: &SystemParams3LS, delta_t: f64, grid: &QuadratureGrid) -> Result<GateMetrics> {
    p.require_valid()?;
    let pulse = PulseSpec::from_delta_t(p.omega1, delta_t)?;
    converge(grid, |g| {
        let s = Sampled::new(&pulse, g);
        let overlap = 0.5 * s.sum(|w| three_level(p, AtomState::G, w) - three_level(p, AtomState::S, w));
        let survival = s
            .sum(|w| Complex64::new(0.5 * (three_level(p, AtomState::G, w).norm_sqr() + 1.0), 0.0))
            .re;
        RawMetrics {
            fidelity: overlap.norm_sqr(),
            survival,
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateScheme {
    FourLevel(SystemParams4LS),
    ThreeLevel(SystemParams3LS),
}

impl GateScheme {
    fn metrics(&self, delta_t: f64, purcell: Purcell, grid: &QuadratureGrid, opts: ProtocolOptions) -> Result<GateMetrics> {
        match self {
            GateScheme::FourLevel(p) => {
                let p = p.with_gamma_prime(purcell.gamma_prime(p.gamma));
                fidelity_4ls(&p, delta_t, grid, opts)
            }
            GateScheme::ThreeLevel(p) => {
                let p = p.with_gamma_prime(purcell.gamma_prime(p.gamma));
                fidelity_3ls(&p, delta_t, grid)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub delta_t: f64,
    pub purcell: Purcell,
    pub fidelity: f64,
    pub leakage: f64,
    pub grid_residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Rows with the given pulse width, in sweep order.
    pub fn at_delta_t(&self, delta_t: f64) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.delta_t == delta_t)
    }

    /// True if leakage strictly decreases along the rows.
    pub fn leakage_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].leakage < w[0].leakage)
    }
}

/// Cartesian sweep over pulse widths (outer) and Purcell factors (inner).
/// Rows are computed in parallel and returned in sweep order.
pub fn fidelity_sweep(
    scheme: &GateScheme,
    delta_ts: &[f64],
    purcells: &[Purcell],
    grid: &QuadratureGrid,
    opts: ProtocolOptions,
) -> Result<SweepResult> {
    let points: Vec<(f64, Purcell)> = delta_ts
        .iter()
        .flat_map(|&dt| purcells.iter().map(move |&pf| (dt, pf)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(delta_t, purcell)| {
            let m = scheme.metrics(delta_t, purcell, grid, opts)?;
            Ok(SweepRow {
                delta_t,
                purcell,
                fidelity: m.fidelity,
                leakage: m.leakage,
                grid_residual: m.grid_residual,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

/// Leakage of the four-level gate against the Purcell factor at fixed pulse width.
pub fn leakage_sweep_4ls(
    p: &SystemParams4LS,
    delta_t: f64,
    purcells: &[Purcell],
    grid: &QuadratureGrid,
    opts: ProtocolOptions,
) -> Result<SweepResult> {
    fidelity_sweep(&GateScheme::FourLevel(*p), &[delta_t], purcells, grid, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn purcell_parsing() {
        assert_eq!("inf".parse::<Purcell>().unwrap(), Purcell::Infinite);
        assert_eq!("20".parse::<Purcell>().unwrap(), Purcell::Finite(20.0));
        assert!("-3".parse::<Purcell>().is_err());
        assert!("abc".parse::<Purcell>().is_err());
        assert_eq!(Purcell::Infinite.gamma_prime(1.0), 0.0);
    }

    #[test]
    fn pulse_width_relation() {
        let pulse = PulseSpec::from_delta_t(0.0, 10.0).unwrap();
        assert_eq!(pulse.sigma, 0.05);
        assert!(PulseSpec::from_delta_t(0.0, 0.0).is_err());
    }

    #[test]
    fn overlapping_pulses_rejected() {
        let p = SystemParams4LS::antinode_preset(0.0);
        // sigma = 50 > Omega13 / 20
        let err = fidelity_4ls(&p, 0.01, &QuadratureGrid::default(), ProtocolOptions::default()).unwrap_err();
        assert!(matches!(err, Error::PulseOverlap { .. }));
    }

    #[test]
    fn empty_sweep_is_empty() {
        let scheme = GateScheme::FourLevel(SystemParams4LS::antinode_preset(0.0));
        let r = fidelity_sweep(&scheme, &[], &[Purcell::Infinite], &QuadratureGrid::default(), Default::default())
            .unwrap();
        assert!(r.rows.is_empty());
    }

    /// Full three-dimensional tensor-product overlap of the f1 branch.
    fn f1_overlap_3d(p: &SystemParams4LS, delta_t: f64, grid: &QuadratureGrid) -> Complex64 {
        let qubit = PulseSpec::from_delta_t(p.omega1, delta_t).unwrap();
        let aux = PulseSpec { center: p.omega32, ..qubit };
        let qa = grid.rule(qubit.center, qubit.sigma);
        let qc = grid.rule(aux.center, aux.sigma);
        let mut total = Complex64::new(0.0, 0.0);
        for (&wa, &xa) in qa.weights.iter().zip(&qa.nodes) {
            for (&wb, &xb) in qa.weights.iter().zip(&qa.nodes) {
                let (r11a, r13a) = ground(p, xa);
                let (r11b, _) = ground(p, xb);
                let r31t = raman(p, xa - p.omega13()).1;
                let f1 = r11a * r11a * r11b + r13a * r31t * meta_resonant(p, xb);
                for (&wc, &xc) in qc.weights.iter().zip(&qc.nodes) {
                    total += wa * wb * wc * qubit.intensity(xa) * qubit.intensity(xb) * aux.intensity(xc) * f1;
                }
            }
        }
        total
    }

    #[test]
    fn three_dimensional_quadrature_factorizes() {
        let p = SystemParams4LS::antinode_preset(1.0 / 20.0);
        let grid = QuadratureGrid {
            points_per_dim: 51,
            ..Default::default()
        };
        let full = f1_overlap_3d(&p, 10.0, &grid);
        let raw = evaluate_4ls(&p, 10.0, &grid, ProtocolOptions::default());
        assert!((full.norm_sqr() - raw.fidelity).abs() < 1e-8, "{} vs {}", full.norm_sqr(), raw.fidelity);
    }
}
