use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Settings for circle averages.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Node cap for the doubling sequence (a power of two, at least 64).
    pub nodes: usize,
    /// Bits of precision of the numerical phase. Quadrature runs in f64, so
    /// values above 53 are recorded but do not change the arithmetic.
    pub precision: usize,
    /// Relative distance to the circle below which a zero forces a radius nudge.
    pub singularity_shift: f64,
    /// Relative stopping tolerance between successive doubling estimates.
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { nodes: 1 << 16, precision: 53, singularity_shift: 1e-9, tolerance: 1e-10 }
    }
}

pub const MIN_NODES: usize = 64;

impl QuadratureConfig {
    pub fn new(nodes: usize, precision: usize, singularity_shift: f64) -> Result<Self> {
        let cfg = Self { nodes, precision, singularity_shift, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < MIN_NODES || !self.nodes.is_power_of_two() {
            return Err(Error::InvalidInput(format!("nodes = {} must be a power of two >= {MIN_NODES}", self.nodes)));
        }
        if !(self.singularity_shift > 0.0 && self.singularity_shift <= 1e-6) {
            return Err(Error::InvalidInput(format!(
                "singularity_shift = {} must lie in (0, 1e-6]",
                self.singularity_shift
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleMean {
    pub value: f64,
    pub nodes: usize,
    /// Difference from the estimate with half the nodes.
    pub change: f64,
}

fn node_sum<F: Fn(Complex64) -> f64 + Sync>(g: &F, r: f64, count: usize, stride: usize, offset: usize, total: usize) -> f64 {
    let vals: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|k| {
            let theta = TAU * (offset + k * stride) as f64 / total as f64;
            g(Complex64::from_polar(r, theta))
        })
        .collect();
    vals.iter().sum()
}

/// `(1/2pi) int_0^{2pi} g(r e^{it}) dt` by the periodic trapezoidal rule with
/// node doubling, stopping when two estimates agree to the configured tolerance.
pub fn circle_mean<F: Fn(Complex64) -> f64 + Sync>(g: F, r: f64, cfg: &QuadratureConfig) -> Result<CircleMean> {
    let mut n = MIN_NODES.min(cfg.nodes / 2);
    let mut sum = node_sum(&g, r, n, 1, 0, n);
    let mut est = sum / n as f64;
    while n < cfg.nodes {
        // the new nodes sit halfway between the old ones
        sum += node_sum(&g, r, n, 2, 1, 2 * n);
        n *= 2;
        let next = sum / n as f64;
        let change = (next - est).abs();
        if next.is_finite() && change <= cfg.tolerance * next.abs().max(1.0) {
            return Ok(CircleMean { value: next, nodes: n, change });
        }
        if !next.is_finite() || n >= cfg.nodes {
            return Err(Error::NonConvergence { nodes: n, last: next, previous: est });
        }
        est = next;
    }
    unreachable!("the node cap is at least twice the starting count")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_means() {
        let cfg = QuadratureConfig::default();
        let m = circle_mean(|z| (1.0 + z.norm_sqr()).ln(), 2.0, &cfg).unwrap();
        assert!((m.value - 5f64.ln()).abs() < 1e-12);
        // log|z - a| averages to log max(r, |a|)
        let a = Complex64::new(0.5, 1.2);
        let m = circle_mean(|z| (z - a).norm().ln(), 3.0, &cfg).unwrap();
        assert!((m.value - 3f64.ln()).abs() < 1e-10);
        let m = circle_mean(|z| (z - a).norm().ln(), 0.5, &cfg).unwrap();
        assert!((m.value - a.norm().ln()).abs() < 1e-10);
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(100, 53, 1e-9).is_err());
        assert!(QuadratureConfig::new(32, 53, 1e-9).is_err());
        assert!(QuadratureConfig::new(64, 53, 1e-3).is_err());
        assert!(QuadratureConfig::new(1 << 14, 53, 1e-7).is_ok());
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadratureConfig::new(128, 53, 1e-9).unwrap();
        // a singularity sitting on the circle cannot converge
        let a = Complex64::new(1.0, 1e-9);
        let r = circle_mean(|z| (z - a).norm().ln(), 1.0, &cfg);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}
