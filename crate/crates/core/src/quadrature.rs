// Copyright 2026 wgqed contributors
// SPDX-License-Identifier: Apache-2.0

//! One-dimensional quadrature rules over a window around a pulse center.
//! Multi-dimensional pulse integrals are tensor products of these.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Trapezoid,
    GaussLegendre,
}

/// Integration window `center +- half_width * sigma` sampled with
/// `points_per_dim` nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureGrid {
    pub half_width: f64,
    pub points_per_dim: usize,
    pub scheme: Scheme,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        QuadratureGrid {
            half_width: 6.0,
            points_per_dim: 301,
            scheme: Scheme::GaussLegendre,
        }
    }
}

impl QuadratureGrid {
    pub fn validate(&self) -> Result<()> {
        if self.points_per_dim < 51 || self.points_per_dim.is_multiple_of(2) {
            return Err(Error::BadInput(format!(
                "points_per_dim must be odd and >= 51, got {}",
                self.points_per_dim
            )));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::BadInput(format!("half_width must be positive, got {}", self.half_width)));
        }
        Ok(())
    }

    /// Same window with roughly twice the nodes (kept odd).
    pub fn refined(&self) -> Self {
        QuadratureGrid {
            points_per_dim: 2 * self.points_per_dim - 1,
            ..*self
        }
    }

    /// Nodes and weights on `[center - half_width sigma, center + half_width sigma]`.
    pub fn rule(&self, center: f64, sigma: f64) -> Rule {
        let half = self.half_width * sigma;
        let (x, w) = match self.scheme {
            Scheme::GaussLegendre => gauss_legendre(self.points_per_dim),
            Scheme::Trapezoid => trapezoid(self.points_per_dim),
        };
        Rule {
            nodes: x.iter().map(|x| center + half * x).collect(),
            weights: w.iter().map(|w| half * w).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// `(P_n(z), P_n'(z))` by the three-term recurrence.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (z * p1 - p0) / (z * z - 1.0))
}

fn trapezoid(n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = 2.0 / (n - 1) as f64;
    let x = (0..n).map(|i| -1.0 + h * i as f64).collect();
    let w = (0..n)
        .map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h })
        .collect();
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [2, 5, 51, 301, 601] {
            let (_, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-12, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_for_low_degree_polynomials() {
        // n points integrate degree 2n-1 exactly
        let (x, w) = gauss_legendre(5);
        let val: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((val - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn nodes_are_symmetric_and_sorted() {
        let (x, _) = gauss_legendre(301);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        for i in 0..x.len() {
            assert!((x[i] + x[x.len() - 1 - i]).abs() < 1e-15);
        }
        assert_eq!(x[150], 0.0);
    }

    #[test]
    fn gaussian_normalization() {
        let sigma = 0.05;
        for scheme in [Scheme::GaussLegendre, Scheme::Trapezoid] {
            let grid = QuadratureGrid { scheme, ..Default::default() };
            let rule = grid.rule(1000.0, sigma);
            let s = rule.integrate(|w| {
                let d = w - 1000.0;
                (-(d * d) / (sigma * sigma)).exp() / (sigma * PI.sqrt())
            });
            assert!((s - 1.0).abs() < 1e-12, "{scheme:?}: {s}");
        }
    }

    #[test]
    fn grid_validation() {
        assert!(QuadratureGrid::default().validate().is_ok());
        let even = QuadratureGrid { points_per_dim: 300, ..Default::default() };
        assert!(even.validate().is_err());
        let small = QuadratureGrid { points_per_dim: 49, ..Default::default() };
        assert!(small.validate().is_err());
        assert_eq!(QuadratureGrid::default().refined().points_per_dim, 601);
    }
}
