// Copyright 2026 wgqed contributors
// SPDX-License-Identifier: Apache-2.0

//! The four-step photon-photon phase gate on the four-level emitter, and
//! the three-level alternative.
//!
//! Photons are monochromatic and sent one at a time; each step rescatters
//! one photon off the emitter and the joint state is tracked as a sparse
//! superposition of (photon frequencies, emitter level) terms. Amplitudes
//! are not normalized away: loss shows up as a norm below one.

use std::f64::consts::FRAC_1_SQRT_2;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::amplitudes::{ground, meta_resonant, raman, three_level, AtomState};
use crate::error::{Error, Result};
use crate::params::{round_trip, SystemParams3LS, SystemParams4LS};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PhotonLabel {
    A,
    B,
    C,
}

/// One outgoing photon. `shift` counts Raman shifts by `Omega13`
/// (`-1` after trapping, back to `0` after retrieval).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Photon {
    pub label: PhotonLabel,
    pub omega: f64,
    pub shift: i8,
}

impl Photon {
    fn new(label: PhotonLabel, omega: f64) -> Self {
        Photon { label, omega, shift: 0 }
    }

    fn same_mode(&self, other: &Photon) -> bool {
        self.label == other.label && same_frequency(self.omega, other.omega)
    }
}

fn same_frequency(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EmitterState {
    /// 4LS ground level.
    One,
    /// 4LS metastable level.
    Three,
    G,
    S,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Term {
    pub photons: Vec<Photon>,
    pub emitter: EmitterState,
    pub amplitude: Complex64,
}

impl Term {
    fn photon(&self, label: PhotonLabel) -> Option<&Photon> {
        self.photons.iter().find(|p| p.label == label)
    }

    fn same_key(&self, other: &Term) -> bool {
        self.emitter == other.emitter
            && self.photons.len() == other.photons.len()
            && self.photons.iter().zip(&other.photons).all(|(a, b)| a.same_mode(b))
    }
}

/// Sparse superposition of photon-emitter product states. Terms with the
/// same photon modes and emitter level are merged on insertion.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MultiPhotonState {
    terms: Vec<Term>,
}

impl MultiPhotonState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, term: Term) {
        if let Some(t) = self.terms.iter_mut().find(|t| t.same_key(&term)) {
            t.amplitude += term.amplitude;
        } else {
            self.terms.push(term);
        }
    }

    /// `sum |amplitude|^2`; terms are orthogonal by construction.
    pub fn norm_sqr(&self) -> f64 {
        self.terms.iter().map(|t| t.amplitude.norm_sqr()).sum()
    }

    /// Total weight on emitter level `level`.
    pub fn population(&self, level: EmitterState) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.emitter == level)
            .map(|t| t.amplitude.norm_sqr())
            .sum()
    }

    /// Drops terms whose amplitude is exactly zero.
    pub fn pruned(mut self) -> Self {
        self.terms.retain(|t| t.amplitude != ZERO);
        self
    }

    fn labels(&self) -> Vec<PhotonLabel> {
        self.terms
            .first()
            .map(|t| t.photons.iter().map(|p| p.label).collect())
            .unwrap_or_default()
    }

    fn expect_labels(&self, labels: &[PhotonLabel], step: &str) -> Result<()> {
        let consistent = self
            .terms
            .iter()
            .all(|t| t.photons.iter().map(|p| p.label).eq(labels.iter().copied()));
        if self.terms.is_empty() || !consistent {
            return Err(Error::BadInput(format!(
                "{step} expects photons {labels:?}, state carries {:?}",
                self.labels()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProtocolOptions {
    /// Give the C photon the bare mirror phase `-exp(2i omega_C a)` when it
    /// meets the emitter in level 1. Off by default: C then passes unchanged.
    pub c_trivial_phase: bool,
}

/// Outgoing branches for a photon hitting the emitter in level 1.
fn scatter_ground(p: &SystemParams4LS, photon: Photon) -> [(Photon, EmitterState, Complex64); 2] {
    let (r11, r13) = ground(p, photon.omega);
    let trapped = Photon {
        omega: photon.omega - p.omega13(),
        shift: photon.shift - 1,
        ..photon
    };
    [(photon, EmitterState::One, r11), (trapped, EmitterState::Three, r13)]
}

/// Outgoing branches for a photon near the 3-2 transition with the emitter in level 3.
fn scatter_raman(p: &SystemParams4LS, photon: Photon) -> [(Photon, EmitterState, Complex64); 2] {
    let (r33, r31) = raman(p, photon.omega);
    let released = Photon {
        omega: photon.omega + p.omega13(),
        shift: photon.shift + 1,
        ..photon
    };
    [(photon, EmitterState::Three, r33), (released, EmitterState::One, r31)]
}

fn replace(photons: &[Photon], new: Photon) -> Vec<Photon> {
    photons
        .iter()
        .map(|p| if p.label == new.label { new } else { *p })
        .collect()
}

/// Step 1: photon A meets the emitter in level 1.
pub fn step1_trap(p: &SystemParams4LS, omega_a: f64) -> Result<MultiPhotonState> {
    p.require_valid()?;
    let mut out = MultiPhotonState::new();
    for (photon, emitter, amp) in scatter_ground(p, Photon::new(PhotonLabel::A, omega_a)) {
        out.push(Term {
            photons: vec![photon],
            emitter,
            amplitude: amp,
        });
    }
    Ok(out)
}

/// Step 2: photon B scatters; it is trapped if the emitter is still in
/// level 1 and picks up `R3` if the emitter holds A in level 3.
pub fn step2_phase(p: &SystemParams4LS, state: &MultiPhotonState, omega_b: f64) -> Result<MultiPhotonState> {
    p.require_valid()?;
    state.expect_labels(&[PhotonLabel::A], "step 2")?;
    let b = Photon::new(PhotonLabel::B, omega_b);
    let mut out = MultiPhotonState::new();
    for t in &state.terms {
        match t.emitter {
            EmitterState::One => {
                for (photon, emitter, amp) in scatter_ground(p, b) {
                    out.push(Term {
                        photons: vec![t.photons[0], photon],
                        emitter,
                        amplitude: t.amplitude * amp,
                    });
                }
            }
            EmitterState::Three => out.push(Term {
                photons: vec![t.photons[0], b],
                emitter: EmitterState::Three,
                amplitude: t.amplitude * meta_resonant(p, omega_b),
            }),
            _ => return Err(Error::BadInput("3LS level in a 4LS state".into())),
        }
    }
    Ok(out)
}

/// Step 3: the outgoing A photon is sent back in.
///
/// With the emitter in level 1 it scatters like a fresh photon. In level 3
/// a Raman-shifted A (it was trapped in step 1) is released through the
/// 3-2 transition, while an unshifted A (B was trapped) sees only the 3-4
/// transition.
pub fn step3_retrieve_a(p: &SystemParams4LS, state: &MultiPhotonState) -> Result<MultiPhotonState> {
    p.require_valid()?;
    state.expect_labels(&[PhotonLabel::A, PhotonLabel::B], "step 3")?;
    let mut out = MultiPhotonState::new();
    for t in &state.terms {
        let a = t.photons[0];
        match t.emitter {
            EmitterState::One => {
                for (photon, emitter, amp) in scatter_ground(p, a) {
                    out.push(Term {
                        photons: replace(&t.photons, photon),
                        emitter,
                        amplitude: t.amplitude * amp,
                    });
                }
            }
            EmitterState::Three if a.shift < 0 => {
                for (photon, emitter, amp) in scatter_raman(p, a) {
                    out.push(Term {
                        photons: replace(&t.photons, photon),
                        emitter,
                        amplitude: t.amplitude * amp,
                    });
                }
            }
            EmitterState::Three => out.push(Term {
                photons: t.photons.clone(),
                emitter: EmitterState::Three,
                amplitude: t.amplitude * meta_resonant(p, a.omega),
            }),
            _ => return Err(Error::BadInput("3LS level in a 4LS state".into())),
        }
    }
    Ok(out)
}

/// Step 4: the auxiliary photon C releases whatever is still stored in level 3.
pub fn step4_retrieve_b(
    p: &SystemParams4LS,
    state: &MultiPhotonState,
    omega_c: f64,
    opts: ProtocolOptions,
) -> Result<MultiPhotonState> {
    p.require_valid()?;
    state.expect_labels(&[PhotonLabel::A, PhotonLabel::B], "step 4")?;
    let c = Photon::new(PhotonLabel::C, omega_c);
    let pass = if opts.c_trivial_phase {
        -round_trip(omega_c, p.a)
    } else {
        ONE
    };
    let mut out = MultiPhotonState::new();
    for t in &state.terms {
        match t.emitter {
            EmitterState::One => {
                let mut photons = t.photons.clone();
                photons.push(c);
                out.push(Term {
                    photons,
                    emitter: EmitterState::One,
                    amplitude: t.amplitude * pass,
                });
            }
            EmitterState::Three => {
                for (photon, emitter, amp) in scatter_raman(p, c) {
                    let mut photons = t.photons.clone();
                    photons.push(photon);
                    out.push(Term {
                        photons,
                        emitter,
                        amplitude: t.amplitude * amp,
                    });
                }
            }
            _ => return Err(Error::BadInput("3LS level in a 4LS state".into())),
        }
    }
    Ok(out)
}

/// Runs all four steps for monochromatic photons A, B and C.
pub fn run_protocol(
    p: &SystemParams4LS,
    omega_a: f64,
    omega_b: f64,
    omega_c: f64,
    opts: ProtocolOptions,
) -> Result<MultiPhotonState> {
    let s1 = step1_trap(p, omega_a)?;
    let s2 = step2_phase(p, &s1, omega_b)?;
    let s3 = step3_retrieve_a(p, &s2)?;
    step4_retrieve_b(p, &s3, omega_c, opts)
}

/// Closed-form coefficients of the final state: `f1` on `|A, B, C>|1>`,
/// `f2` on `|A, B~>|phi3(C)>`, `f3` on `|A~, B>|phi3(C)>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FinalCoefficients {
    pub f1: Complex64,
    pub f2: Complex64,
    pub f3: Complex64,
}

/// General (off-center) coefficients, with `r31` evaluated at `omega_a - Omega13`.
pub fn final_coefficients(p: &SystemParams4LS, omega_a: f64, omega_b: f64) -> FinalCoefficients {
    let (r11a, r13a) = ground(p, omega_a);
    let (r11b, r13b) = ground(p, omega_b);
    let (r33t, r31t) = raman(p, omega_a - p.omega13());
    let r3a = meta_resonant(p, omega_a);
    let r3b = meta_resonant(p, omega_b);
    FinalCoefficients {
        f1: r11a * r11a * r11b + r13a * r31t * r3b,
        f2: r11a * r3a * r13b,
        f3: r11a * r13a * r11b + r13a * r33t * r3b,
    }
}

/// Simplified `f1` with `r13(omega_a)^2` in place of `r13(omega_a) r31(omega_a - Omega13)`.
pub fn f1_simplified(p: &SystemParams4LS, omega_a: f64, omega_b: f64) -> Complex64 {
    let (r11a, r13a) = ground(p, omega_a);
    let (r11b, _) = ground(p, omega_b);
    r11a * r11a * r11b + r13a * r13a * meta_resonant(p, omega_b)
}

/// Two-qubit phase table indexed `[i][j]` for inputs `|omega_i>_A |omega_j>_B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruthTable {
    pub entries: [[Complex64; 2]; 2],
}

impl TruthTable {
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i][j]
    }

    /// `t00 t11 / (t01 t10)`: equals -1 for a controlled-Z up to local
    /// phases and +1 for a product of local phases.
    pub fn conditional_phase(&self) -> Complex64 {
        let t = &self.entries;
        t[0][0] * t[1][1] / (t[0][1] * t[1][0])
    }

    /// Removes single-qubit phases so the 00, 01 and 10 entries are real.
    pub fn local_normalized(&self) -> TruthTable {
        let t = &self.entries;
        let unit = |z: Complex64| if z == ZERO { ONE } else { z / z.norm() };
        let (p00, p01, p10) = (unit(t[0][0]), unit(t[0][1]), unit(t[1][0]));
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let ui = if i == 1 { p10 / p00 } else { ONE };
                let uj = if j == 1 { p01 / p00 } else { ONE };
                *e = t[i][j] / (p00 * ui * uj);
            }
        }
        TruthTable { entries: out }
    }

    /// Largest deviation from the ideal `(-1)^{ij}` table.
    pub fn max_error_from_cz(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let ideal = if i == 1 && j == 1 { -ONE } else { ONE };
                worst = worst.max((self.entries[i][j] - ideal).norm());
            }
        }
        worst
    }
}

impl Serialize for TruthTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        for i in 0..2 {
            for j in 0..2 {
                let z = self.entries[i][j];
                m.serialize_entry(&format!("{i}{j}"), &[z.re, z.im])?;
            }
        }
        m.end()
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..2 {
            for j in 0..2 {
                let z = self.entries[i][j];
                writeln!(f, "{i}{j}: {:+.12} {:+.12}i", z.re, z.im)?;
            }
        }
        Ok(())
    }
}

/// Amplitude on `|omega_i>_A |omega_j>_B |1>` after the C photon at
/// `Omega32` is filtered out. The retrieved B can leave either as B itself
/// or as the C photon, with B then carrying the filtered frequency.
fn target_amplitude(state: &MultiPhotonState, omega_i: f64, omega_j: f64, filtered: f64) -> Complex64 {
    state
        .terms()
        .iter()
        .filter(|t| t.emitter == EmitterState::One)
        .filter(|t| {
            let (Some(a), Some(b), Some(c)) = (
                t.photon(PhotonLabel::A),
                t.photon(PhotonLabel::B),
                t.photon(PhotonLabel::C),
            ) else {
                return false;
            };
            same_frequency(a.omega, omega_i)
                && ((same_frequency(b.omega, omega_j) && same_frequency(c.omega, filtered))
                    || (same_frequency(b.omega, filtered) && same_frequency(c.omega, omega_j)))
        })
        .map(|t| t.amplitude)
        .sum()
}

/// Gate table at the qubit center frequencies, C sent at `Omega32`.
pub fn truth_table(p: &SystemParams4LS, opts: ProtocolOptions) -> Result<TruthTable> {
    p.require_valid()?;
    let freqs = [p.omega0, p.omega1];
    let mut entries = [[ZERO; 2]; 2];
    for (i, &wi) in freqs.iter().enumerate() {
        for (j, &wj) in freqs.iter().enumerate() {
            let out = run_protocol(p, wi, wj, p.omega32, opts)?;
            entries[i][j] = target_amplitude(&out, wi, wj, p.omega32);
        }
    }
    Ok(TruthTable { entries })
}

/// Tolerance for truth-table entries that involve `omega0`.
pub fn omega0_tolerance(p: &SystemParams4LS) -> f64 {
    let d = (p.omega0 - p.omega12).abs().min((p.omega32 - p.omega0).abs());
    5.0 * p.gamma / d
}

/// Photon-atom phase table indexed `[photon qubit][atom]`, atom `g = 0`, `s = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotonAtomTable {
    pub entries: [[Complex64; 2]; 2],
}

impl PhotonAtomTable {
    pub fn get(&self, photon: usize, atom: AtomState) -> Complex64 {
        self.entries[photon][atom_index(atom)]
    }
}

impl Serialize for PhotonAtomTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        for i in 0..2 {
            for (k, name) in ["g", "s"].iter().enumerate() {
                let z = self.entries[i][k];
                m.serialize_entry(&format!("{i}{name}"), &[z.re, z.im])?;
            }
        }
        m.end()
    }
}

fn atom_index(atom: AtomState) -> usize {
    match atom {
        AtomState::G => 0,
        AtomState::S => 1,
    }
}

/// Reflection phases of `omega0` and `omega1` photons for each atom state.
pub fn three_ls_photon_atom_gate(p: &SystemParams3LS) -> Result<PhotonAtomTable> {
    p.require_valid()?;
    let mut entries = [[ZERO; 2]; 2];
    for (i, &w) in [p.omega0, p.omega1].iter().enumerate() {
        for atom in [AtomState::G, AtomState::S] {
            entries[i][atom_index(atom)] = three_level(p, atom, w);
        }
    }
    Ok(PhotonAtomTable { entries })
}

/// Rotation angles applied to the atom after photon A and after photon B.
/// The rotation is `[[cos t/2, -sin t/2], [sin t/2, cos t/2]]` on `(g, s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationConvention {
    pub first: f64,
    pub second: f64,
}

impl Default for RotationConvention {
    fn default() -> Self {
        RotationConvention {
            first: PI / 2.0,
            second: -PI / 2.0,
        }
    }
}

impl RotationConvention {
    pub fn reversed() -> Self {
        RotationConvention {
            first: -PI / 2.0,
            second: PI / 2.0,
        }
    }
}

/// Result of the three-level photon-photon gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotonPhotonGate {
    pub table: TruthTable,
    /// Von Neumann entropy (nats) of the atom for a uniform photon input.
    pub entropy: f64,
    /// Final atom state `(g, s)` shared by all inputs.
    pub atom: [Complex64; 2],
}

pub const DISENTANGLE_LIMIT: f64 = 1e-9;

fn rotate(theta: f64, v: [Complex64; 2]) -> [Complex64; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    [v[0] * c - v[1] * s, v[0] * s + v[1] * c]
}

fn reflect(p: &SystemParams3LS, omega: f64, v: [Complex64; 2]) -> [Complex64; 2] {
    [
        v[0] * three_level(p, AtomState::G, omega),
        v[1] * three_level(p, AtomState::S, omega),
    ]
}

/// Photon A, rotation, photon B, rotation, photon A again, with the atom
/// starting in `(|g> + |s>)/sqrt 2`. Fails if the atom stays entangled
/// with the photons beyond [`DISENTANGLE_LIMIT`].
pub fn three_ls_photon_photon_gate(p: &SystemParams3LS, rot: RotationConvention) -> Result<PhotonPhotonGate> {
    three_ls_photon_photon_gate_with_limit(p, rot, DISENTANGLE_LIMIT)
}

pub fn three_ls_photon_photon_gate_with_limit(
    p: &SystemParams3LS,
    rot: RotationConvention,
    limit: f64,
) -> Result<PhotonPhotonGate> {
    p.require_valid()?;
    let freqs = [p.omega0, p.omega1];
    let start = [Complex64::new(FRAC_1_SQRT_2, 0.0); 2];
    let mut finals = [[[ZERO; 2]; 2]; 2];
    for (i, &wa) in freqs.iter().enumerate() {
        for (j, &wb) in freqs.iter().enumerate() {
            let mut v = reflect(p, wa, start);
            v = rotate(rot.first, v);
            v = reflect(p, wb, v);
            v = rotate(rot.second, v);
            finals[i][j] = reflect(p, wa, v);
        }
    }

    // reduced atom density matrix for the input (1/2) sum_ij |ij>
    let mut rho = [[ZERO; 2]; 2];
    for v in finals.iter().flatten() {
        for r in 0..2 {
            for c in 0..2 {
                rho[r][c] += v[r] * v[c].conj();
            }
        }
    }
    let trace = (rho[0][0] + rho[1][1]).re;
    let (lmax, lmin, atom) = hermitian_2x2_eigen(&rho);
    let entropy = [lmax / trace, lmin / trace]
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum::<f64>();
    if entropy > limit {
        return Err(Error::AtomNotDisentangled { entropy });
    }

    let mut entries = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let v = finals[i][j];
            entries[i][j] = atom[0].conj() * v[0] + atom[1].conj() * v[1];
        }
    }
    // fix the arbitrary phase of the atom state so t00 is real positive
    let phase = if entries[0][0] == ZERO {
        ONE
    } else {
        entries[0][0] / entries[0][0].norm()
    };
    for e in entries.iter_mut().flatten() {
        *e /= phase;
    }
    Ok(PhotonPhotonGate {
        table: TruthTable { entries },
        entropy,
        atom: [atom[0] * phase, atom[1] * phase],
    })
}

/// Eigenvalues (descending) and the leading unit eigenvector of a 2x2 Hermitian matrix.
fn hermitian_2x2_eigen(m: &[[Complex64; 2]; 2]) -> (f64, f64, [Complex64; 2]) {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = m[0][1];
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    let lmax = mean + half_gap;
    // product form avoids cancellation in the small eigenvalue
    let det = a * d - b.norm_sqr();
    let lmin = if lmax > 0.0 { det / lmax } else { mean - half_gap };
    let v = if b.norm() > 1e-300 {
        [b, Complex64::new(lmax - a, 0.0)]
    } else if a >= d {
        [ONE, ZERO]
    } else {
        [ZERO, ONE]
    };
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    (lmax, lmin.max(0.0), [v[0] / n, v[1] / n])
}
