//! Discrete source families used by the numerical experiments.
//!
//! The Normal and Rayleigh families evaluate their density at `k = 1..n−1`
//! and let bin `n` absorb the remainder so the vector sums to one.

use std::f64::consts::PI;

use crate::error::{NmimError, Result};
use crate::measure::Distribution;

pub const DEFAULT_ZIPF_EXPONENT: f64 = 1.01;

/// Event probabilities of the compressed-storage experiment.
pub const STORAGE_EXAMPLE_PROBS: [f64; 5] = [0.010, 0.215, 0.037, 0.292, 0.446];

pub fn storage_example() -> Distribution {
    Distribution::new(STORAGE_EXAMPLE_PROBS.to_vec()).expect("constant sums to one")
}

/// `P{X = k} = Z / k^s` for `k = 1..n`.
pub fn zipf(n: usize, exponent: f64) -> Result<Distribution> {
    if n == 0 {
        return Err(NmimError::EmptyDistribution);
    }
    if !(exponent.is_finite() && exponent > 0.0) {
        return Err(NmimError::domain(format!(
            "Zipf exponent {exponent} must be positive"
        )));
    }
    let weights: Vec<f64> = (1..=n).map(|k| (k as f64).powf(-exponent)).collect();
    let z: f64 = weights.iter().sum();
    Distribution::new(weights.into_iter().map(|w| w / z).collect())
}

/// Discrete Normal with `μ = 0.51 n`, `σ² = n`.
pub fn normal_discrete(n: usize) -> Result<Distribution> {
    let mean = 0.51 * n as f64;
    let var = n as f64;
    let norm = (2.0 * PI * var).sqrt();
    with_remainder_bin(n, |k| (-(k - mean).powi(2) / (2.0 * var)).exp() / norm)
}

/// Discrete Rayleigh with scale `b = n / 2.5`.
pub fn rayleigh_discrete(n: usize) -> Result<Distribution> {
    let b2 = (n as f64 / 2.5).powi(2);
    with_remainder_bin(n, |k| k / b2 * (-k * k / (2.0 * b2)).exp())
}

fn with_remainder_bin<F>(n: usize, density: F) -> Result<Distribution>
where
    F: Fn(f64) -> f64,
{
    if n < 2 {
        return Err(NmimError::domain("remainder-bin families need n >= 2"));
    }
    let mut probs: Vec<f64> = (1..n).map(|k| density(k as f64)).collect();
    let head: f64 = probs.iter().sum();
    let rest = 1.0 - head;
    if rest <= 0.0 {
        return Err(NmimError::domain(format!(
            "remainder bin would be {rest}; density mass exceeds one"
        )));
    }
    probs.push(rest);
    Distribution::new(probs)
}
