// Copyright 2026 wgqed contributors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form single-photon reflection amplitudes.
//!
//! Every amplitude is the coefficient of the outgoing (left-moving) wave
//! for a unit-amplitude incoming photon; the waveguide ends in a perfect
//! mirror, so there is no transmission.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::params::{round_trip, SystemParams3LS, SystemParams4LS};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A probe frequency together with its Raman-shifted partners.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftedFrequencies {
    pub omega: f64,
    /// `omega - Omega13`: frequency after a 1 -> 3 Raman transition.
    pub omega_tilde: f64,
    /// `omega + Omega13`: frequency after a 3 -> 1 Raman transition.
    pub omega_bar: f64,
}

impl ShiftedFrequencies {
    pub fn new(p: &SystemParams4LS, omega: f64) -> Self {
        let omega13 = p.omega13();
        ShiftedFrequencies {
            omega,
            omega_tilde: omega - omega13,
            omega_bar: omega + omega13,
        }
    }
}

/// All 4LS amplitudes evaluated at one probe frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReflectionSet {
    pub r11: Complex64,
    pub r13: Complex64,
    pub r33: Complex64,
    pub r31: Complex64,
    #[serde(rename = "R3")]
    pub r3: Complex64,
}

impl ReflectionSet {
    pub fn at(p: &SystemParams4LS, omega: f64) -> Result<Self> {
        p.require_valid()?;
        let (r11, r13) = ground(p, omega);
        let (r33, r31) = raman(p, omega);
        Ok(ReflectionSet {
            r11,
            r13,
            r33,
            r31,
            r3: meta_resonant(p, omega),
        })
    }

    /// `|r11|^2 + |r13|^2`.
    pub fn ground_flux(&self) -> f64 {
        self.r11.norm_sqr() + self.r13.norm_sqr()
    }

    /// `|r33|^2 + |r31|^2`.
    pub fn raman_flux(&self) -> f64 {
        self.r33.norm_sqr() + self.r31.norm_sqr()
    }
}

/// Photon incident on the emitter in level 1: returns `(r11, r13)`.
///
/// `r13` multiplies the Raman-scattered photon at `omega - Omega13` with the
/// emitter left in level 3.
pub fn reflect_from_ground(p: &SystemParams4LS, omega: f64) -> Result<(Complex64, Complex64)> {
    p.require_valid()?;
    Ok(ground(p, omega))
}

/// Photon incident on the emitter in level 3, near the 3-4 transition
/// (the 3-2 transition is neglected).
pub fn reflect_from_meta_resonant(p: &SystemParams4LS, omega: f64) -> Result<Complex64> {
    p.require_valid()?;
    Ok(meta_resonant(p, omega))
}

/// Photon incident on the emitter in level 3, near the 3-2 transition:
/// returns `(r33, r31)`, with `r31` multiplying the photon at `omega + Omega13`.
pub fn reflect_from_meta_raman(p: &SystemParams4LS, omega: f64) -> Result<(Complex64, Complex64)> {
    p.require_valid()?;
    Ok(raman(p, omega))
}

/// Internal state of the three-level emitter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AtomState {
    #[serde(rename = "g")]
    G,
    #[serde(rename = "s")]
    S,
}

/// Reflection off the 3LS. Only `g` couples; an atom in `s` leaves the
/// bare mirror phase `-exp(2i omega a)`.
pub fn reflect_3ls(p: &SystemParams3LS, atom: AtomState, omega: f64) -> Result<Complex64> {
    p.require_valid()?;
    Ok(three_level(p, atom, omega))
}

pub(crate) fn ground(p: &SystemParams4LS, omega: f64) -> (Complex64, Complex64) {
    let e = round_trip(omega, p.a);
    if p.gamma == 0.0 {
        return (-e, Complex64::new(0.0, 0.0));
    }
    let et = round_trip(omega - p.omega13(), p.a);
    let half_g = 0.5 * p.gamma;
    let loss = Complex64::new(0.0, 0.5 * p.gamma_prime);
    let den = (p.omega12 - omega) - loss + I * half_g * (et + e - 2.0);
    let r11 = e * (-(p.omega12 - omega) + loss - I * half_g * (et - e.conj())) / den;
    let r13 = I * half_g * (e - 1.0) * (et - 1.0) / den;
    (r11, r13)
}

pub(crate) fn meta_resonant(p: &SystemParams4LS, omega: f64) -> Complex64 {
    let e = round_trip(omega, p.a);
    if p.gamma == 0.0 {
        return -e;
    }
    let d = Complex64::new(p.omega34 - omega, -0.5 * p.gamma_prime);
    let path = I * 0.5 * p.gamma * (1.0 - e);
    (-d * e + path) / (d - path)
}

pub(crate) fn raman(p: &SystemParams4LS, omega: f64) -> (Complex64, Complex64) {
    let e = round_trip(omega, p.a);
    if p.gamma == 0.0 {
        return (-e, Complex64::new(0.0, 0.0));
    }
    let eb = round_trip(omega + p.omega13(), p.a);
    let half_g = 0.5 * p.gamma;
    let loss = Complex64::new(0.0, 0.5 * p.gamma_prime);
    let den = (p.omega32 - omega) - loss + I * half_g * (eb + e - 2.0);
    let r33 = e * (-(p.omega32 - omega) + loss - I * half_g * (eb - e.conj())) / den;
    let r31 = I * half_g * (e - 1.0) * (eb - 1.0) / den;
    (r33, r31)
}

pub(crate) fn three_level(p: &SystemParams3LS, atom: AtomState, omega: f64) -> Complex64 {
    let e = round_trip(omega, p.a);
    match atom {
        AtomState::S => -e,
        AtomState::G if p.gamma == 0.0 => -e,
        AtomState::G => {
            let d = Complex64::new(p.detuning(omega), -0.5 * p.gamma_prime);
            let path = I * 0.5 * p.gamma * (1.0 - e);
            (-d * e + path) / (d - path)
        }
    }
}
