// Copyright 2026 wgqed contributors
// SPDX-License-Identifier: Apache-2.0

//! Single-photon scattering off a mirror-terminated waveguide emitter, and
//! the photon-photon phase gates and quantum memory built from it.
//!
//! Units: `hbar = c = 1`, frequencies and rates in units of `gamma`.

pub mod amplitudes;
pub mod config;
pub mod error;
pub mod memory;
pub mod metrics;
pub mod oracle;
pub mod params;
pub mod protocol;
pub mod quadrature;

pub use amplitudes::{
    reflect_3ls, reflect_from_ground, reflect_from_meta_raman, reflect_from_meta_resonant, AtomState, ReflectionSet,
};
pub use error::{Error, Result};
pub use memory::{retrieve, round_trip_fidelity, store, MatterQubit, MemoryParams};
pub use metrics::{
    fidelity_3ls, fidelity_4ls, fidelity_sweep, leakage_sweep_4ls, GateMetrics, GateScheme, Purcell, SweepResult,
    SweepRow,
};
pub use params::{
    solve_3ls_conditions, solve_gate_conditions, ConditionSolution, SystemParams3LS, SystemParams4LS, Tolerances,
    ValidationReport,
};
pub use protocol::{run_protocol, truth_table, ProtocolOptions, TruthTable};
pub use quadrature::{QuadratureGrid, Scheme};
