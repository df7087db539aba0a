// Copyright 2026 wgqed contributors
// SPDX-License-Identifier: Apache-2.0

//! JSON run configuration.
//!
//! ```json
//! {
//!   "scheme": "4ls",
//!   "params": { "gamma": 1.0, "gamma_prime": 0.05, "omega12": 1000.0, ... },
//!   "grid": { "half_width": 6.0, "points_per_dim": 301, "scheme": "gauss-legendre" },
//!   "tolerances": { "detuning_floor": 100.0 },
//!   "c_trivial_phase": false
//! }
//! ```
//!
//! `scheme` is one of `4ls`, `3ls`, `memory`, and `params` then holds the
//! fields of `SystemParams4LS`, `SystemParams3LS` or `MemoryParams`. Every
//! key except `scheme` and `params` is optional; unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::memory::MemoryParams;
use crate::params::{SystemParams3LS, SystemParams4LS, Tolerances};
use crate::quadrature::QuadratureGrid;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", content = "params")]
pub enum SchemeParams {
    #[serde(rename = "4ls")]
    FourLevel(SystemParams4LS),
    #[serde(rename = "3ls")]
    ThreeLevel(SystemParams3LS),
    #[serde(rename = "memory")]
    Memory(MemoryParams),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(flatten)]
    pub system: SchemeParams,
    #[serde(default)]
    pub grid: QuadratureGrid,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub c_trivial_phase: bool,
}

impl RunConfig {
    pub fn new(system: SchemeParams) -> Self {
        RunConfig {
            system,
            grid: QuadratureGrid::default(),
            tolerances: Tolerances::default(),
            c_trivial_phase: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::BadInput(format!("bad config: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::BadInput(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_json() {
        let cfg = RunConfig::new(SchemeParams::FourLevel(SystemParams4LS::antinode_preset(0.05)));
        let back = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn minimal_three_level_config() {
        let text = r#"{"scheme": "3ls", "params": {"gamma": 1, "gamma_prime": 0, "omega_eg": 1000,
            "a": 0.0015707963267948966, "omega0": 5000, "omega1": 1000}}"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert!(matches!(cfg.system, SchemeParams::ThreeLevel(_)));
        assert_eq!(cfg.grid, QuadratureGrid::default());
    }

    #[test]
    fn rejects_unknown_and_missing_fields() {
        assert!(RunConfig::from_json(r#"{"scheme": "4ls", "params": {"gamma": 1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"scheme": "5ls", "params": {}}"#).is_err());
        let cfg = RunConfig::new(SchemeParams::Memory(MemoryParams::symmetric_preset(0.0)));
        let text = cfg.to_json().replacen('{', r#"{"typo": 1,"#, 1);
        assert!(RunConfig::from_json(&text).is_err());
    }
}
