// Copyright 2026 wgqed contributors
// SPDX-License-Identifier: Apache-2.0

//! Physical parameters of the emitter-mirror system and the phase
//! conditions that make the gate work.
//!
//! Units follow hbar = c = 1. Frequencies and rates are angular and share
//! one unit (normally the waveguide decay rate `gamma`); the emitter-mirror
//! distance `a` is a time, so `2 * omega * a` is the round-trip phase.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Thresholds used when validating parameter sets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Minimum detuning between distinct transitions, in units of `gamma`.
    pub detuning_floor: f64,
    /// Allowed residual (radians) on the phase conditions.
    pub cond_tol: f64,
    /// Minimum of `|exp(2i omega1 a) - 1|`; below it the emitter sits at a field node.
    pub node_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            detuning_floor: 100.0,
            cond_tol: 1e-9,
            node_floor: 0.1,
        }
    }
}

/// Distance of `phase` from the nearest multiple of 2 pi.
pub fn phase_residual(phase: f64) -> f64 {
    (phase - TAU * (phase / TAU).round()).abs()
}

/// Distance of `phase` from the nearest odd multiple of pi.
pub fn odd_pi_residual(phase: f64) -> f64 {
    phase_residual(phase - PI)
}

/// `exp(2i omega a)`, reduced modulo 2 pi before exponentiation.
pub fn round_trip(omega: f64, a: f64) -> Complex64 {
    Complex64::from_polar(1.0, (2.0 * omega * a).rem_euclid(TAU))
}

/// Four-level emitter side-coupled to a semi-infinite waveguide.
///
/// Level 1 is the energy reference. Transitions 1-2, 3-2 and 3-4 couple to
/// the waveguide with the same rate `gamma`; levels 2 and 4 leak at
/// `gamma_prime`, level 3 is metastable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams4LS {
    pub gamma: f64,
    pub gamma_prime: f64,
    pub omega12: f64,
    pub omega32: f64,
    pub omega34: f64,
    pub a: f64,
    pub omega0: f64,
    pub omega1: f64,
}

impl SystemParams4LS {
    /// Builds a lossless-or-lossy parameter set from a solved condition set.
    pub fn from_solution(gamma: f64, gamma_prime: f64, sol: &ConditionSolution) -> Self {
        SystemParams4LS {
            gamma,
            gamma_prime,
            omega12: sol.omega12,
            omega32: sol.omega32,
            omega34: sol.omega12,
            a: sol.a,
            omega0: sol.omega0,
            omega1: sol.omega12,
        }
    }

    /// Reference working point: `gamma = 1`, `omega12 = 1000`, emitter at an
    /// antinode of the `omega1` standing wave (`2 omega1 a = 3 pi`), which
    /// puts `omega32 = 1000/3` and `omega0 = 5000/3`.
    pub fn antinode_preset(gamma_prime: f64) -> Self {
        let omega12 = 1000.0;
        let a = 3.0 * PI / (2.0 * omega12);
        let sol = solve_gate_conditions(omega12, omega12 / 3.0, 5.0 * omega12 / 3.0, a)
            .expect("preset satisfies the gate conditions");
        SystemParams4LS::from_solution(1.0, gamma_prime, &sol)
    }

    /// Level-3 energy, `Omega12 - Omega32`.
    pub fn omega13(&self) -> f64 {
        self.omega12 - self.omega32
    }

    pub fn purcell(&self) -> f64 {
        self.gamma / self.gamma_prime
    }

    pub fn with_gamma_prime(mut self, gamma_prime: f64) -> Self {
        self.gamma_prime = gamma_prime;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    /// Residual of `2 (Omega12 + Omega32) a = 2 n1 pi`.
    pub fn raman_condition_residual(&self) -> f64 {
        phase_residual(2.0 * (self.omega12 + self.omega32) * self.a)
    }

    /// Residual of `2 omega0 a = (2 n0 + 1) pi`.
    pub fn qubit_condition_residual(&self) -> f64 {
        odd_pi_residual(2.0 * self.omega0 * self.a)
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(&Tolerances::default())
    }

    pub fn validate_with(&self, tol: &Tolerances) -> ValidationReport {
        let mut r = ValidationReport::new(tol.cond_tol);
        let all = [
            self.gamma,
            self.gamma_prime,
            self.omega12,
            self.omega32,
            self.omega34,
            self.a,
            self.omega0,
            self.omega1,
        ];
        r.check("finite", all.iter().all(|x| x.is_finite()), 0.0);
        r.check("gamma_nonnegative", self.gamma >= 0.0, self.gamma);
        r.check("gamma_prime_nonnegative", self.gamma_prime >= 0.0, self.gamma_prime);
        r.check("distance_positive", self.a > 0.0, self.a);

        let scale = self.omega12.abs().max(1.0);
        let d1 = (self.omega1 - self.omega12).abs();
        r.check("omega1_equals_omega12", d1 <= 1e-12 * scale, d1);
        let d34 = (self.omega34 - self.omega12).abs();
        r.check("omega34_equals_omega12", d34 <= 1e-12 * scale, d34);
        r.check("omega13_positive", self.omega13() > 0.0, self.omega13());

        let floor = tol.detuning_floor * self.gamma;
        let raman = (self.omega32 - self.omega12).abs();
        r.check("raman_detuning", raman >= floor, raman);
        let qubit = (self.omega0 - self.omega12).abs();
        r.check("qubit_detuning", qubit >= floor, qubit);

        let node = (round_trip(self.omega1, self.a) - 1.0).norm();
        r.check("node_guard", node > tol.node_floor, node);

        r.raman_condition = self.raman_condition_residual();
        r.qubit_condition = self.qubit_condition_residual();
        r
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(report))
        }
    }
}

/// Three-level emitter (`g`, `e`, metastable `s`); only `g`-`e` couples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams3LS {
    pub gamma: f64,
    pub gamma_prime: f64,
    pub omega_eg: f64,
    pub a: f64,
    pub omega0: f64,
    pub omega1: f64,
}

impl SystemParams3LS {
    /// `gamma = 1`, `omega_eg = 1000`, `2 omega_eg a = pi`, `omega0 = 5000`
    /// (`2 omega0 a = 5 pi`).
    pub fn antinode_preset(gamma_prime: f64) -> Self {
        let omega_eg = 1000.0;
        let a = PI / (2.0 * omega_eg);
        let sol = solve_3ls_conditions(omega_eg, 5.0 * omega_eg, a)
            .expect("preset satisfies the 3LS conditions");
        SystemParams3LS {
            gamma: 1.0,
            gamma_prime,
            omega_eg: sol.omega_eg,
            a,
            omega0: sol.omega0,
            omega1: sol.omega_eg,
        }
    }

    /// Detuning `Omega_eg - omega`.
    pub fn detuning(&self, omega: f64) -> f64 {
        self.omega_eg - omega
    }

    pub fn with_gamma_prime(mut self, gamma_prime: f64) -> Self {
        self.gamma_prime = gamma_prime;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(&Tolerances::default())
    }

    pub fn validate_with(&self, tol: &Tolerances) -> ValidationReport {
        let mut r = ValidationReport::new(tol.cond_tol);
        let all = [self.gamma, self.gamma_prime, self.omega_eg, self.a, self.omega0, self.omega1];
        r.check("finite", all.iter().all(|x| x.is_finite()), 0.0);
        r.check("gamma_nonnegative", self.gamma >= 0.0, self.gamma);
        r.check("gamma_prime_nonnegative", self.gamma_prime >= 0.0, self.gamma_prime);
        r.check("distance_positive", self.a > 0.0, self.a);
        let d1 = (self.omega1 - self.omega_eg).abs();
        r.check(
            "omega1_equals_omega_eg",
            d1 <= 1e-12 * self.omega_eg.abs().max(1.0),
            d1,
        );
        let qubit = (self.omega0 - self.omega_eg).abs();
        r.check("qubit_detuning", qubit >= tol.detuning_floor * self.gamma, qubit);
        r.raman_condition = odd_pi_residual(2.0 * self.omega_eg * self.a);
        r.qubit_condition = odd_pi_residual(2.0 * self.omega0 * self.a);
        r
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(report))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Measured quantity the check was applied to.
    pub measured: f64,
}

/// Outcome of parameter validation. `ok` covers the hard invariants only;
/// the phase conditions are reported separately through
/// [`ValidationReport::gate_conditions_met`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub checks: Vec<Check>,
    /// Residual (rad) of the trapping condition (4LS) or `2 Omega_eg a` odd-pi condition (3LS).
    pub raman_condition: f64,
    /// Residual (rad) of `2 omega0 a = (2 n0 + 1) pi`.
    pub qubit_condition: f64,
    pub cond_tol: f64,
}

impl ValidationReport {
    fn new(cond_tol: f64) -> Self {
        ValidationReport {
            ok: true,
            checks: Vec::new(),
            raman_condition: f64::NAN,
            qubit_condition: f64::NAN,
            cond_tol,
        }
    }

    fn check(&mut self, name: &str, pass: bool, measured: f64) {
        self.ok &= pass;
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            measured,
        });
    }

    pub fn gate_conditions_met(&self) -> bool {
        self.raman_condition < self.cond_tol && self.qubit_condition < self.cond_tol
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "all checks passed");
        }
        let failed: Vec<String> = self
            .failures()
            .map(|c| format!("{} (measured {})", c.name, c.measured))
            .collect();
        write!(f, "failed checks: {}", failed.join(", "))
    }
}

/// Parameters adjusted onto the phase-condition lattice at fixed `a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionSolution {
    pub omega12: f64,
    pub a: f64,
    pub omega32: f64,
    pub omega0: f64,
    /// `(Omega12 + Omega32) a = n1 pi`.
    pub n1: i64,
    /// `2 omega0 a = (2 n0 + 1) pi`.
    pub n0: i64,
    /// Residuals of the trapping and qubit conditions, radians.
    pub residuals: [f64; 2],
}

impl ConditionSolution {
    /// The odd integer `2 n0 + 1`.
    pub fn odd_multiple(&self) -> i64 {
        2 * self.n0 + 1
    }
}

/// Solves the two 4LS phase conditions with `gamma = 1` and default tolerances.
pub fn solve_gate_conditions(
    omega12: f64,
    omega32_target: f64,
    omega0_target: f64,
    a_target: f64,
) -> Result<ConditionSolution> {
    solve_gate_conditions_with(omega12, omega32_target, omega0_target, a_target, 1.0, &Tolerances::default())
}

/// Holds `a` fixed and moves `Omega32` and `omega0` to the nearest points
/// satisfying `2 (Omega12 + Omega32) a = 2 n1 pi` and `2 omega0 a = (2 n0 + 1) pi`.
pub fn solve_gate_conditions_with(
    omega12: f64,
    omega32_target: f64,
    omega0_target: f64,
    a: f64,
    gamma: f64,
    tol: &Tolerances,
) -> Result<ConditionSolution> {
    if !(omega12 > 0.0 && omega32_target > 0.0 && omega0_target > 0.0 && a > 0.0) {
        return Err(Error::BadInput(
            "omega12, omega32, omega0 and a must all be positive".into(),
        ));
    }
    let n1 = ((omega12 + omega32_target) * a / PI).round() as i64;
    let omega32 = n1 as f64 * PI / a - omega12;
    let m = nearest_odd(2.0 * omega0_target * a / PI);
    let omega0 = m as f64 * PI / (2.0 * a);

    let floor = tol.detuning_floor * gamma;
    if !(omega32 > 0.0 && omega32 < omega12) {
        return Err(Error::NoValidSolution(format!(
            "adjusted omega32 = {omega32} is not in (0, omega12)"
        )));
    }
    if (omega12 - omega32).abs() < floor {
        return Err(Error::NoValidSolution(format!(
            "adjusted omega32 = {omega32} is within {floor} of omega12"
        )));
    }
    if omega0 <= 0.0 || (omega0 - omega12).abs() < floor {
        return Err(Error::NoValidSolution(format!(
            "adjusted omega0 = {omega0} violates positivity or the detuning floor"
        )));
    }

    Ok(ConditionSolution {
        omega12,
        a,
        omega32,
        omega0,
        n1,
        n0: (m - 1) / 2,
        residuals: [
            phase_residual(2.0 * (omega12 + omega32) * a),
            odd_pi_residual(2.0 * omega0 * a),
        ],
    })
}

/// Solution of the 3LS conditions `2 Omega_eg a` and `2 omega0 a` both odd multiples of pi.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeLevelSolution {
    pub a: f64,
    pub omega_eg: f64,
    pub omega0: f64,
    pub residuals: [f64; 2],
}

pub fn solve_3ls_conditions(omega_eg_target: f64, omega0_target: f64, a: f64) -> Result<ThreeLevelSolution> {
    if !(omega_eg_target > 0.0 && omega0_target > 0.0 && a > 0.0) {
        return Err(Error::BadInput("frequencies and a must be positive".into()));
    }
    let omega_eg = nearest_odd(2.0 * omega_eg_target * a / PI) as f64 * PI / (2.0 * a);
    let omega0 = nearest_odd(2.0 * omega0_target * a / PI) as f64 * PI / (2.0 * a);
    if omega_eg <= 0.0 || omega0 <= 0.0 || (omega0 - omega_eg).abs() < Tolerances::default().detuning_floor {
        return Err(Error::NoValidSolution(format!(
            "adjusted (omega_eg, omega0) = ({omega_eg}, {omega0}) are degenerate"
        )));
    }
    Ok(ThreeLevelSolution {
        a,
        omega_eg,
        omega0,
        residuals: [
            odd_pi_residual(2.0 * omega_eg * a),
            odd_pi_residual(2.0 * omega0 * a),
        ],
    })
}

fn nearest_odd(x: f64) -> i64 {
    2 * ((x - 1.0) / 2.0).round() as i64 + 1
}
