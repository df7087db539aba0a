// Copyright 2026 wgqed contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::params::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(ValidationReport),

    #[error("no valid solution: {0}")]
    NoValidSolution(String),

    #[error("singular scattering system (condition number {condition:.3e})")]
    SingularSystem { condition: f64 },

    #[error("quadrature not converged (residual {residual:.3e} > {limit:.1e})")]
    GridNotConverged { residual: f64, limit: f64 },

    #[error("pulse branches overlap: Omega13 = {omega13} < 20 * sigma = {}", 20.0 * sigma)]
    PulseOverlap { omega13: f64, sigma: f64 },

    #[error("atom still entangled with photons after sequence (entropy {entropy:.3e})")]
    AtomNotDisentangled { entropy: f64 },

    #[error("bad input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
