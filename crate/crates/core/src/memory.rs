// Copyright 2026 wgqed contributors
// SPDX-License-Identifier: Apache-2.0

//! M-type five-level quantum memory for frequency-encoded photon qubits.
//!
//! The `|omega0>` and `|omega1>` components each see their own Lambda
//! branch `g -> e_i -> s_i`, which is the four-level trapping process with
//! `Omega12 -> omega_i` and `Omega32 -> omega_es`. Both branches emit the
//! auxiliary photon at `omega_es`, so the photon factors out.
//!
//! Storage puts a `-1` on each branch for ideal parameters. That is a
//! global phase and is reported as is.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::amplitudes::{ground, raman};
use crate::error::{Error, Result};
use crate::params::{phase_residual, round_trip, SystemParams4LS, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemoryParams {
    pub gamma: f64,
    pub gamma_prime: f64,
    /// `g -> e0` transition, equal to the qubit frequency `omega0`.
    pub omega_e0g: f64,
    /// `g -> e1` transition, equal to `omega1`.
    pub omega_e1g: f64,
    /// Common `s_i -> e_i` transition frequency.
    pub omega_es: f64,
    pub a: f64,
}

impl MemoryParams {
    /// `gamma = 1`, `a = pi / 200`, `omega0 = 1500`, `omega1 = 1100`,
    /// `omega_es = 100`. Both branches satisfy the trapping condition and sit
    /// at antinodes (`2 omega_i a` odd multiples of pi), so their losses match.
    pub fn symmetric_preset(gamma_prime: f64) -> Self {
        MemoryParams {
            gamma: 1.0,
            gamma_prime,
            omega_e0g: 1500.0,
            omega_e1g: 1100.0,
            omega_es: 100.0,
            a: std::f64::consts::PI / 200.0,
        }
    }

    /// The four-level problem seen by branch `i`.
    pub fn branch(&self, i: usize) -> SystemParams4LS {
        let omega_i = if i == 0 { self.omega_e0g } else { self.omega_e1g };
        let other = if i == 0 { self.omega_e1g } else { self.omega_e0g };
        SystemParams4LS {
            gamma: self.gamma,
            gamma_prime: self.gamma_prime,
            omega12: omega_i,
            omega32: self.omega_es,
            omega34: omega_i,
            a: self.a,
            omega0: other,
            omega1: omega_i,
        }
    }

    /// Trapping-condition residual `2 (omega_i + omega_es) a mod 2 pi` for each branch.
    pub fn condition_residuals(&self) -> [f64; 2] {
        [0, 1].map(|i| {
            let b = self.branch(i);
            phase_residual(2.0 * (b.omega12 + b.omega32) * self.a)
        })
    }

    pub fn validate(&self) -> Result<()> {
        let tol = Tolerances::default();
        let mut problems = Vec::new();
        if !(self.gamma >= 0.0 && self.gamma_prime >= 0.0 && self.a > 0.0) {
            problems.push("gamma, gamma_prime must be >= 0 and a > 0".to_string());
        }
        if (self.omega_e0g - self.omega_e1g).abs() < tol.detuning_floor * self.gamma {
            problems.push(format!(
                "|omega0 - omega1| = {} below detuning floor",
                (self.omega_e0g - self.omega_e1g).abs()
            ));
        }
        for i in 0..2 {
            let b = self.branch(i);
            if b.omega13() <= 0.0 || b.omega13() < tol.detuning_floor * self.gamma {
                problems.push(format!("branch {i}: omega_es must lie at least the floor below omega_{i}"));
            }
            if (round_trip(b.omega1, self.a) - 1.0).norm() <= tol.node_floor {
                problems.push(format!("branch {i}: emitter at a field node"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::BadInput(format!("invalid memory parameters: {}", problems.join("; "))))
        }
    }

    pub fn conditions_met(&self) -> bool {
        self.condition_residuals().iter().all(|&r| r < Tolerances::default().cond_tol)
    }
}

/// Amplitudes on the metastable states `|s0>` and `|s1>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatterQubit {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl MatterQubit {
    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }
}

/// Maps `alpha |omega0> + beta |omega1>` onto `alpha' |s0> + beta' |s1>`
/// and returns the auxiliary photon frequency `omega_es`.
pub fn store(mp: &MemoryParams, alpha: Complex64, beta: Complex64) -> Result<(MatterQubit, f64)> {
    mp.validate()?;
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::BadInput(format!("input qubit not normalized: |alpha|^2 + |beta|^2 = {norm}")));
    }
    let (_, t0) = ground(&mp.branch(0), mp.omega_e0g);
    let (_, t1) = ground(&mp.branch(1), mp.omega_e1g);
    Ok((
        MatterQubit {
            alpha: alpha * t0,
            beta: beta * t1,
        },
        mp.omega_es,
    ))
}

/// Releases the stored qubit by sending the auxiliary photon back in.
pub fn retrieve(mp: &MemoryParams, q: MatterQubit) -> Result<(Complex64, Complex64)> {
    mp.validate()?;
    let (_, r0) = raman(&mp.branch(0), mp.omega_es);
    let (_, r1) = raman(&mp.branch(1), mp.omega_es);
    Ok((q.alpha * r0, q.beta * r1))
}

/// `|<in|out>|^2` for a store-retrieve cycle.
pub fn round_trip_fidelity(mp: &MemoryParams, alpha: Complex64, beta: Complex64) -> Result<f64> {
    let (q, _) = store(mp, alpha, beta)?;
    let (a, b) = retrieve(mp, q)?;
    Ok((alpha.conj() * a + beta.conj() * b).norm_sqr())
}
