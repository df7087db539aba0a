// Copyright 2026 wgqed contributors
// SPDX-License-Identifier: Apache-2.0

//! Direct numerical solution of the single-excitation scattering problem.
//!
//! An emitter at `x = 0` couples with strength `V = sqrt(gamma / 2)` to a
//! set of waveguide channels (one per final emitter level), each closed by
//! a perfect mirror at `x = a`. In every channel the photon wavefunction is
//! piecewise plane waves; matching the delta-coupling jumps at the emitter,
//! the hard wall at the mirror, and the emitter's own equation of motion
//! gives a small dense linear system. Solving it is independent of the
//! closed-form amplitudes and serves as a cross-check.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::amplitudes::{ground, meta_resonant, raman, three_level, AtomState};
use crate::error::{Error, Result};
use crate::params::{SystemParams3LS, SystemParams4LS};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Systems with a larger condition number are rejected.
pub const MAX_CONDITION: f64 = 1e12;
/// Largest accepted `|A x - b|_inf` after the solve.
pub const MAX_RESIDUAL: f64 = 1e-10;

/// One emitter, several channels, incoming photon in channel 0.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearScatterProblem {
    /// Excited-level energy minus total energy of the incoming state.
    pub detuning: f64,
    pub gamma: f64,
    pub gamma_prime: f64,
    pub a: f64,
    /// Photon wavenumber in each channel; channel 0 carries the incoming photon.
    pub wavenumbers: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSolution {
    /// Outgoing left-moving amplitude per channel.
    pub outgoing: Vec<Complex64>,
    pub emitter: Complex64,
    pub condition: f64,
    pub residual: f64,
}

fn phase(k: f64, a: f64) -> Complex64 {
    Complex64::from_polar(1.0, (k * a).rem_euclid(TAU))
}

impl LinearScatterProblem {
    /// Unknowns per channel `c`: `beta_R`, `alpha_L`, `beta_L` at indices
    /// `3c..3c+3`; the emitter amplitude is last.
    pub fn assemble(&self) -> (DMatrix<Complex64>, DVector<Complex64>) {
        let nc = self.wavenumbers.len();
        let n = 3 * nc + 1;
        let e = n - 1;
        let v = (0.5 * self.gamma).sqrt();
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        let mut b = DVector::<Complex64>::zeros(n);
        let one = Complex64::new(1.0, 0.0);

        for (c, &k) in self.wavenumbers.iter().enumerate() {
            let (br, al, bl) = (3 * c, 3 * c + 1, 3 * c + 2);
            let incoming = if c == 0 { one } else { Complex64::new(0.0, 0.0) };
            // right-mover jump: beta_R - in = -i V e
            m[(br, br)] = one;
            m[(br, e)] = I * v;
            b[br] = incoming;
            // left-mover jump: beta_L - alpha_L = i V e
            m[(al, bl)] = one;
            m[(al, al)] = -one;
            m[(al, e)] = -I * v;
            // wall
            m[(bl, br)] = phase(k, self.a);
            m[(bl, bl)] = phase(-k, self.a);
            // emitter: field at x = 0 taken as the mean of both sides
            m[(e, br)] += 0.5 * v;
            m[(e, al)] += 0.5 * v;
            m[(e, bl)] += 0.5 * v;
            b[e] -= 0.5 * v * incoming;
        }
        m[(e, e)] = Complex64::new(self.detuning, -0.5 * self.gamma_prime);
        (m, b)
    }

    pub fn solve(&self) -> Result<OracleSolution> {
        let (m, b) = self.assemble();
        let sv = m.clone().svd(false, false).singular_values;
        let smax = sv.max();
        let smin = sv.min();
        let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if condition.is_nan() || condition > MAX_CONDITION {
            return Err(Error::SingularSystem { condition });
        }
        let x = m
            .clone()
            .lu()
            .solve(&b)
            .ok_or(Error::SingularSystem { condition })?;
        let residual = (&m * &x - &b).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if residual.is_nan() || residual > MAX_RESIDUAL {
            return Err(Error::SingularSystem { condition });
        }
        let nc = self.wavenumbers.len();
        Ok(OracleSolution {
            outgoing: (0..nc).map(|c| x[3 * c + 1]).collect(),
            emitter: x[3 * nc],
            condition,
            residual,
        })
    }
}

/// `(r11, r13)` from the two-channel problem.
pub fn oracle_reflect_from_ground(p: &SystemParams4LS, omega: f64) -> Result<(Complex64, Complex64)> {
    p.require_valid()?;
    let sol = LinearScatterProblem {
        detuning: p.omega12 - omega,
        gamma: p.gamma,
        gamma_prime: p.gamma_prime,
        a: p.a,
        wavenumbers: vec![omega, omega - p.omega13()],
    }
    .solve()?;
    Ok((sol.outgoing[0], sol.outgoing[1]))
}

/// `R3` from the single-channel problem on the 3-4 transition.
pub fn oracle_reflect_from_meta(p: &SystemParams4LS, omega: f64) -> Result<Complex64> {
    p.require_valid()?;
    let sol = LinearScatterProblem {
        detuning: p.omega34 - omega,
        gamma: p.gamma,
        gamma_prime: p.gamma_prime,
        a: p.a,
        wavenumbers: vec![omega],
    }
    .solve()?;
    Ok(sol.outgoing[0])
}

/// `(r33, r31)` from the two-channel problem on the 3-2 transition.
pub fn oracle_reflect_raman(p: &SystemParams4LS, omega: f64) -> Result<(Complex64, Complex64)> {
    p.require_valid()?;
    let sol = LinearScatterProblem {
        detuning: p.omega32 - omega,
        gamma: p.gamma,
        gamma_prime: p.gamma_prime,
        a: p.a,
        wavenumbers: vec![omega, omega + p.omega13()],
    }
    .solve()?;
    Ok((sol.outgoing[0], sol.outgoing[1]))
}

pub fn oracle_reflect_3ls(p: &SystemParams3LS, atom: AtomState, omega: f64) -> Result<Complex64> {
    p.require_valid()?;
    let (gamma, detuning) = match atom {
        AtomState::G => (p.gamma, p.detuning(omega)),
        // decoupled: the emitter row only fixes its own (zero) amplitude
        AtomState::S => (0.0, 1.0),
    };
    let sol = LinearScatterProblem {
        detuning,
        gamma,
        gamma_prime: p.gamma_prime,
        a: p.a,
        wavenumbers: vec![omega],
    }
    .solve()?;
    Ok(sol.outgoing[0])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyDeviation {
    pub family: String,
    pub samples: usize,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgreementReport {
    pub seed: u64,
    pub families: Vec<FamilyDeviation>,
}

impl AgreementReport {
    pub fn max_deviation(&self) -> f64 {
        self.families.iter().map(|f| f.max_deviation).fold(0.0, f64::max)
    }
}

/// Random accepted emitter parameters: `gamma in [0.1, 2]`, `gamma'` in
/// `[0, gamma]`, `Omega12 in [1000, 3000]`, `Omega32` between `0.1` and
/// `0.8 Omega12`, `omega0` between `1.2` and `1.8 Omega12`, `a in [0.05, 2]`.
/// Draws that fail validation (emitter at a field node) are redrawn.
pub fn random_params_4ls<R: Rng>(rng: &mut R) -> SystemParams4LS {
    loop {
        let gamma = 10f64.powf(rng.gen_range(-1.0..0.3));
        let omega12 = rng.gen_range(1000.0..3000.0);
        let p = SystemParams4LS {
            gamma,
            gamma_prime: gamma * rng.gen_range(0.0..1.0),
            omega12,
            omega32: omega12 * rng.gen_range(0.1..0.8),
            omega34: omega12,
            a: rng.gen_range(0.05..2.0),
            omega0: omega12 * rng.gen_range(1.2..1.8),
            omega1: omega12,
        };
        if p.validate().ok {
            return p;
        }
    }
}

/// Probe frequency: half the time within a few linewidths of `center`,
/// otherwise anywhere within `+- spread`.
pub fn random_probe<R: Rng>(rng: &mut R, center: f64, gamma: f64, spread: f64) -> f64 {
    if rng.gen_bool(0.5) {
        center + gamma * rng.gen_range(-5.0..5.0)
    } else {
        center + rng.gen_range(-spread..spread)
    }
}

/// Compares closed forms with the linear-system solution on `samples`
/// random draws per amplitude family.
pub fn agreement_check(seed: u64, samples: usize) -> Result<AgreementReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dev = [0.0f64; 4];
    for _ in 0..samples {
        let p = random_params_4ls(&mut rng);
        let w = random_probe(&mut rng, p.omega12, p.gamma, 200.0);
        let (a, b) = (ground(&p, w), oracle_reflect_from_ground(&p, w)?);
        dev[0] = dev[0].max((a.0 - b.0).norm()).max((a.1 - b.1).norm());

        let w = random_probe(&mut rng, p.omega34, p.gamma, 200.0);
        dev[1] = dev[1].max((meta_resonant(&p, w) - oracle_reflect_from_meta(&p, w)?).norm());

        let w = random_probe(&mut rng, p.omega32, p.gamma, 200.0);
        let (a, b) = (raman(&p, w), oracle_reflect_raman(&p, w)?);
        dev[2] = dev[2].max((a.0 - b.0).norm()).max((a.1 - b.1).norm());

        let p3 = SystemParams3LS {
            gamma: p.gamma,
            gamma_prime: p.gamma_prime,
            omega_eg: p.omega12,
            a: p.a,
            omega0: p.omega0,
            omega1: p.omega12,
        };
        let atom = if rng.gen_bool(0.5) { AtomState::G } else { AtomState::S };
        let w = random_probe(&mut rng, p3.omega_eg, p3.gamma, 200.0);
        dev[3] = dev[3].max((three_level(&p3, atom, w) - oracle_reflect_3ls(&p3, atom, w)?).norm());
    }
    let names = ["reflect_from_ground", "reflect_from_meta_resonant", "reflect_from_meta_raman", "reflect_3ls"];
    Ok(AgreementReport {
        seed,
        families: names
            .iter()
            .zip(dev)
            .map(|(name, max_deviation)| FamilyDeviation {
                family: name.to_string(),
                samples,
                max_deviation,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_mirror_from_linear_system() {
        let sol = LinearScatterProblem {
            detuning: 3.0,
            gamma: 0.0,
            gamma_prime: 0.0,
            a: 0.7,
            wavenumbers: vec![2.0],
        }
        .solve()
        .unwrap();
        let expected = -Complex64::from_polar(1.0, 2.0 * 2.0 * 0.7);
        assert!((sol.outgoing[0] - expected).norm() < 1e-14);
        assert_eq!(sol.emitter, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn resonant_lossless_decoupled_is_singular() {
        let err = LinearScatterProblem {
            detuning: 0.0,
            gamma: 0.0,
            gamma_prime: 0.0,
            a: 1.0,
            wavenumbers: vec![1.0],
        }
        .solve()
        .unwrap_err();
        assert!(matches!(err, Error::SingularSystem { .. }));
    }

    #[test]
    fn matches_closed_form_at_trap_point() {
        let p = SystemParams4LS::antinode_preset(0.1);
        let (r11, r13) = oracle_reflect_from_ground(&p, p.omega1).unwrap();
        let (c11, c13) = ground(&p, p.omega1);
        assert!((r11 - c11).norm() < 1e-10);
        assert!((r13 - c13).norm() < 1e-10);
    }

    #[test]
    fn small_agreement_run() {
        let report = agreement_check(7, 50).unwrap();
        assert_eq!(report.families.len(), 4);
        assert!(report.max_deviation() < 1e-9, "{report:?}");
    }
}
