// Copyright 2026 wgqed contributors
// SPDX-License-Identifier: Apache-2.0

//! Worked examples for each public operation.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use wgqed::memory::{retrieve, store};
use wgqed::metrics::fidelity_3ls;
use wgqed::params::solve_3ls_conditions;
use wgqed::protocol::{
    run_protocol, step1_trap, step2_phase, step3_retrieve_a, step4_retrieve_b, three_ls_photon_atom_gate,
    three_ls_photon_photon_gate, EmitterState, MultiPhotonState, ProtocolOptions, RotationConvention, Term,
};
use wgqed::*;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn solved(gamma_prime: f64) -> SystemParams4LS {
    let sol = solve_gate_conditions(1000.0, 600.0, 800.0, 1.0).unwrap();
    SystemParams4LS::from_solution(1.0, gamma_prime, &sol)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

/// Term with the largest amplitude.
fn dominant(s: &MultiPhotonState) -> &Term {
    s.terms()
        .iter()
        .max_by(|a, b| a.amplitude.norm().total_cmp(&b.amplitude.norm()))
        .unwrap()
}

fn freqs(t: &Term) -> Vec<f64> {
    t.photons.iter().map(|p| p.omega).collect()
}

#[test]
fn solver_example_values() {
    let sol = solve_gate_conditions(1000.0, 600.0, 800.0, 1.0).unwrap();
    assert_eq!(sol.n1, 509);
    assert_eq!(sol.odd_multiple(), 509);
    assert!((sol.omega32 - (509.0 * PI - 1000.0)).abs() < 1e-9);
    assert!((sol.omega0 - 509.0 * PI / 2.0).abs() < 1e-9);
    assert!(sol.residuals[0] <= 1e-12);

    let p = SystemParams4LS::from_solution(1.0, 0.0, &sol);
    let report = p.validate();
    assert!(report.ok && report.gate_conditions_met(), "{report}");
}

#[test]
fn exact_lattice_point_caught_by_detuning_floor() {
    let err = solve_gate_conditions(PI, PI, PI / 2.0, 1.0).unwrap_err();
    assert!(matches!(err, Error::NoValidSolution(_)), "{err}");
}

#[test]
fn validation_failures() {
    let mut p = solved(0.0);
    p.a = 0.0;
    assert!(!p.validate().ok);
    let mut p = solved(0.0);
    p.omega32 = p.omega12;
    let report = p.validate();
    assert!(!report.ok);
    assert!(report.failures().any(|c| c.name == "raman_detuning"));
}

#[test]
fn raman_example_matches_oracle() {
    let p = solved(0.1);
    let w = p.omega32 + 0.3;
    let (r33, r31) = reflect_from_meta_raman(&p, w).unwrap();
    let (o33, o31) = oracle::oracle_reflect_raman(&p, w).unwrap();
    assert!(close(r33, o33, 1e-10) && close(r31, o31, 1e-10));
    let p = solved(0.05);
    let (r11, r13) = reflect_from_ground(&p, p.omega1).unwrap();
    let (o11, o13) = oracle::oracle_reflect_from_ground(&p, p.omega1).unwrap();
    assert!(close(r11, o11, 1e-10) && close(r13, o13, 1e-10));
}

#[test]
fn oracle_special_values() {
    let p = solved(0.0);
    let (r33, r31) = oracle::oracle_reflect_raman(&p, p.omega32).unwrap();
    assert!(r33.norm() < 1e-10 && close(r31, -ONE, 1e-10));
    let p3 = SystemParams3LS::antinode_preset(0.0);
    assert!(close(oracle::oracle_reflect_3ls(&p3, AtomState::G, p3.omega1).unwrap(), -ONE, 1e-10));
    let p0 = solved(0.0).with_gamma(0.0);
    let (r11, r13) = oracle::oracle_reflect_from_ground(&p0, 1234.0).unwrap();
    assert!(close(r11, -wgqed::params::round_trip(1234.0, p0.a), 1e-12) && r13.norm() < 1e-15);
}

#[test]
fn three_level_reflection_is_unimodular_without_loss() {
    let p = SystemParams3LS::antinode_preset(0.0);
    for dw in [-30.0, -1.0, -0.2, 0.0, 0.7, 5.0, 400.0] {
        assert!((reflect_3ls(&p, AtomState::G, p.omega_eg + dw).unwrap().norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn protocol_steps_for_each_input() {
    let p = solved(0.0);
    let tol = 5.0 * p.gamma / (p.omega0 - p.omega12).abs();
    let (w0, w1, w32) = (p.omega0, p.omega1, p.omega32);

    // step 1
    let s = step1_trap(&p, w1).unwrap();
    let t = dominant(&s);
    assert!(close(t.amplitude, -ONE, 1e-12) && t.emitter == EmitterState::Three);
    assert!((freqs(t)[0] - w32).abs() < 1e-9);
    let t = dominant(&step1_trap(&p, w0).unwrap()).clone();
    assert!(close(t.amplitude, ONE, tol) && t.emitter == EmitterState::One);

    // step 2
    let s11 = step2_phase(&p, &step1_trap(&p, w1).unwrap(), w1).unwrap();
    let t = dominant(&s11);
    assert!(close(t.amplitude, ONE, 1e-12) && t.emitter == EmitterState::Three);
    let s00 = step2_phase(&p, &step1_trap(&p, w0).unwrap(), w0).unwrap();
    assert!(close(dominant(&s00).amplitude, ONE, 2.0 * tol));
    let s01 = step2_phase(&p, &step1_trap(&p, w0).unwrap(), w1).unwrap();
    let t = dominant(&s01);
    assert!(close(t.amplitude, -ONE, tol) && t.emitter == EmitterState::Three);
    assert!((freqs(t)[1] - w32).abs() < 1e-9);

    // step 3
    let t = dominant(&step3_retrieve_a(&p, &s11).unwrap()).clone();
    assert!(close(t.amplitude, -ONE, 1e-12) && t.emitter == EmitterState::One);
    assert!(freqs(&t).iter().all(|&w| (w - w1).abs() < 1e-9));
    let t = dominant(&step3_retrieve_a(&p, &s00).unwrap()).clone();
    assert!(close(t.amplitude, ONE, 3.0 * tol) && t.emitter == EmitterState::One);
    let t = dominant(&step3_retrieve_a(&p, &s01).unwrap()).clone();
    assert!(close(t.amplitude, -ONE, 2.0 * tol) && t.emitter == EmitterState::Three);

    // step 4
    let opts = ProtocolOptions::default();
    let after = |s: &MultiPhotonState| step4_retrieve_b(&p, &step3_retrieve_a(&p, s).unwrap(), w32, opts).unwrap();
    let t = dominant(&after(&s11)).clone();
    assert!(close(t.amplitude, -ONE, 1e-12) && t.emitter == EmitterState::One);
    let t = dominant(&after(&s00)).clone();
    assert!(close(t.amplitude, ONE, 3.0 * tol));
    let out01 = after(&s01);
    let t = dominant(&out01);
    assert!(close(t.amplitude, ONE, 2.0 * tol) && t.emitter == EmitterState::One);
    assert!(t.photons.iter().any(|ph| (ph.omega - w1).abs() < 1e-9), "B retrieved at omega1");
}

#[test]
fn decoupled_protocol_is_pure_mirror() {
    let p = solved(0.0).with_gamma(0.0);
    let (wa, wb, wc) = (p.omega1 + 0.3, p.omega0, p.omega32);
    let out = run_protocol(&p, wa, wb, wc, ProtocolOptions::default()).unwrap().pruned();
    assert_eq!(out.len(), 1);
    let t = &out.terms()[0];
    assert_eq!(t.emitter, EmitterState::One);
    let m = |w: f64| -wgqed::params::round_trip(w, p.a);
    // A meets the emitter twice, B once; C passes unchanged
    assert!(close(t.amplitude, m(wa) * m(wa) * m(wb), 1e-12));
}

#[test]
fn lossy_truth_table_keeps_pi_phase() {
    let t = truth_table(&solved(1.0 / 20.0), ProtocolOptions::default()).unwrap();
    let t11 = t.get(1, 1);
    assert!(t11.norm() < 1.0);
    assert!((t11.arg().abs() - PI).abs() < 0.05, "{t11}");
}

#[test]
fn decoupled_truth_table_is_identity_after_normalization() {
    let t = truth_table(&solved(0.0).with_gamma(0.0), ProtocolOptions::default()).unwrap();
    let n = t.local_normalized();
    for i in 0..2 {
        for j in 0..2 {
            assert!(close(n.get(i, j), ONE, 1e-12));
        }
    }
}

#[test]
fn truth_table_has_controlled_phase() {
    let p = solved(0.0);
    let t = truth_table(&p, ProtocolOptions::default()).unwrap();
    // local phases from off-resonant passes cancel to second order in gamma / detuning
    assert!(close(t.conditional_phase(), -ONE, wgqed::protocol::omega0_tolerance(&p).powi(2)));
    assert!(close(t.get(1, 1), -ONE, 1e-9));
}

#[test]
fn photon_atom_table() {
    let p = SystemParams3LS::antinode_preset(0.0);
    let t = three_ls_photon_atom_gate(&p).unwrap();
    assert!(close(t.get(1, AtomState::G), -ONE, 1e-12));
    assert!(close(t.get(1, AtomState::S), ONE, 1e-12));
    assert!(close(t.get(0, AtomState::S), ONE, 1e-12));
    assert!(close(t.get(0, AtomState::G), ONE, 5.0 / (p.omega0 - p.omega_eg)));

    let t = three_ls_photon_atom_gate(&p.with_gamma(0.0)).unwrap();
    for i in 0..2 {
        assert_eq!(t.get(i, AtomState::G), t.get(i, AtomState::S));
    }
    let t = three_ls_photon_atom_gate(&SystemParams3LS::antinode_preset(1.0 / 20.0)).unwrap();
    assert!(t.get(1, AtomState::G).norm() < 1.0);
}

/// 3LS with the qubit frequency far enough from resonance that the atom
/// disentangles to within the default limit.
fn far_detuned_3ls() -> SystemParams3LS {
    let a = PI / 2000.0;
    let sol = solve_3ls_conditions(1000.0, 1e9, a).unwrap();
    SystemParams3LS {
        gamma: 1.0,
        gamma_prime: 0.0,
        omega_eg: sol.omega_eg,
        a,
        omega0: sol.omega0,
        omega1: sol.omega_eg,
    }
}

#[test]
fn photon_photon_gate_is_controlled_z() {
    let g = three_ls_photon_photon_gate(&far_detuned_3ls(), RotationConvention::default()).unwrap();
    assert!(g.entropy < 1e-9);
    assert!(close(g.table.conditional_phase(), -ONE, 1e-6));
    assert!(g.table.local_normalized().max_error_from_cz() < 1e-6);
    assert!(close(g.table.get(1, 1) / g.table.get(0, 0), -ONE, 1e-6));
}

#[test]
fn photon_photon_gate_detects_residual_entanglement() {
    let err = three_ls_photon_photon_gate(&SystemParams3LS::antinode_preset(0.0), RotationConvention::default())
        .unwrap_err();
    assert!(matches!(err, Error::AtomNotDisentangled { .. }));
}

#[test]
fn decoupled_photon_photon_gate_is_identity() {
    let g = three_ls_photon_photon_gate(&far_detuned_3ls().with_gamma(0.0), RotationConvention::default()).unwrap();
    assert!(g.table.local_normalized().entries.iter().flatten().all(|&z| close(z, ONE, 1e-9)));
}

#[test]
fn memory_examples() {
    let mp = MemoryParams::symmetric_preset(0.0);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let (q, c) = store(&mp, h, h).unwrap();
    assert!(close(q.alpha, -h, 1e-12) && close(q.beta, -h, 1e-12));
    assert_eq!(c, mp.omega_es);
    let (a, b) = retrieve(&mp, store(&mp, ONE, Complex64::new(0.0, 0.0)).unwrap().0).unwrap();
    assert!(close(a, ONE, 1e-12) && b.norm() < 1e-12);

    let lossy = MemoryParams::symmetric_preset(1.0 / 20.0);
    let (q, _) = store(&lossy, h, h).unwrap();
    assert!(q.norm_sqr() < 1.0);
    assert!((q.alpha.norm() - q.beta.norm()).abs() < 1e-12, "equal attenuation");

    let lossy = MemoryParams::symmetric_preset(1.0 / 40.0);
    let f = round_trip_fidelity(&lossy, ONE, Complex64::new(0.0, 0.0)).unwrap();
    let (_, r13) = reflect_from_ground(&lossy.branch(0), lossy.omega_e0g).unwrap();
    let (_, r31) = reflect_from_meta_raman(&lossy.branch(0), lossy.omega_es).unwrap();
    assert!(f < 1.0);
    assert!((f - (r13 * r31).norm_sqr()).abs() < 1e-12);
}

#[test]
fn three_level_fidelity_saturates_with_pulse_length() {
    let p = SystemParams3LS::antinode_preset(0.0);
    let grid = QuadratureGrid::default();
    let long = fidelity_3ls(&p, 200.0, &grid).unwrap();
    let short = fidelity_3ls(&p, 2.0, &grid).unwrap();
    assert!(long.fidelity > short.fidelity);
}

#[test]
fn high_purcell_limit_has_vanishing_leakage() {
    let p = SystemParams4LS::antinode_preset(0.0);
    let r = leakage_sweep_4ls(
        &p,
        10.0,
        &[Purcell::Finite(1e4), Purcell::Finite(1e6), Purcell::Infinite],
        &QuadratureGrid::default(),
        ProtocolOptions::default(),
    )
    .unwrap();
    assert!(r.leakage_strictly_decreasing());
    assert!(r.rows[1].leakage < 1e-4);
}

#[test]
fn config_loads_and_validates() {
    let cfg = config::RunConfig::new(config::SchemeParams::FourLevel(solved(0.0)));
    let text = cfg.to_json();
    let back = config::RunConfig::from_json(&text).unwrap();
    match back.system {
        config::SchemeParams::FourLevel(p) => assert!(p.validate().ok),
        _ => panic!("wrong scheme"),
    }
}
