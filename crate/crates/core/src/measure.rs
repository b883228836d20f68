//! Log-domain evaluation of event importance and NMIM.
//!
//! Natural logarithms throughout. `L(p) = ln M(p) = ln p + (1 − p)/p` is
//! evaluated directly so that `exp(1/p)` is never formed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{NmimError, Result};
use crate::numeric::log_sum_exp;

/// Maximum allowed deviation of `Σ p_i` from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A finite probability vector with strictly positive entries.
///
/// Order is preserved exactly as given; allocation results are index-aligned
/// with it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution", into = "RawDistribution")]
pub struct Distribution {
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawDistribution {
    probs: Vec<f64>,
}

impl TryFrom<RawDistribution> for Distribution {
    type Error = NmimError;

    fn try_from(raw: RawDistribution) -> Result<Self> {
        Distribution::new(raw.probs)
    }
}

impl From<Distribution> for RawDistribution {
    fn from(d: Distribution) -> Self {
        RawDistribution { probs: d.probs }
    }
}

impl Distribution {
    /// Validates and wraps `probs`.
    ///
    /// Every entry must lie in `(0, 1]` and the entries must sum to 1 within
    /// [`NORMALIZATION_TOLERANCE`]. Nothing is renormalized or dropped.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(NmimError::EmptyDistribution);
        }
        if let Some(&bad) = probs.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
            return Err(NmimError::InvalidProbability(bad));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(NmimError::NotNormalized(total));
        }
        Ok(Distribution { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(NmimError::EmptyDistribution);
        }
        Distribution::new(vec![1.0 / n as f64; n])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Per-event `L(p_i)`, index-aligned.
    pub fn log_importances(&self) -> Vec<f64> {
        self.probs
            .iter()
            .map(|&p| log_importance_unchecked(p))
            .collect()
    }

    /// The joint distribution of two independent sources, `p_i · q_j`
    /// in row-major order.
    pub fn product(&self, other: &Distribution) -> Result<Distribution> {
        let joint = self
            .probs
            .iter()
            .flat_map(|&p| other.probs.iter().map(move |&q| p * q))
            .collect();
        Distribution::new(joint)
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }
}

/// Importance in nats: `ln M(p)` for one event or `ln Σ M(p_i)` for a whole
/// distribution.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ImportanceScore(f64);

impl ImportanceScore {
    pub fn from_log(log_value: f64) -> Self {
        ImportanceScore(log_value)
    }

    pub fn log_value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for ImportanceScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} nats", self.0)
    }
}

#[inline]
pub(crate) fn log_importance_unchecked(p: f64) -> f64 {
    p.ln() + (1.0 - p) / p
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(NmimError::InvalidProbability(p))
    }
}

/// `L(p) = ln p + (1 − p)/p`, the log-importance of one event.
pub fn log_event_importance(p: f64) -> Result<ImportanceScore> {
    check_probability(p)?;
    Ok(ImportanceScore(log_importance_unchecked(p)))
}

/// NMIM of `d`: log-sum-exp of the per-event log-importances.
pub fn nmim(d: &Distribution) -> ImportanceScore {
    let terms = d.probs.iter().map(|&p| log_importance_unchecked(p));
    ImportanceScore(log_sum_exp(terms))
}

/// Closed form `n − 1` for the uniform distribution over `n` events.
pub fn nmim_uniform(n: usize) -> Result<ImportanceScore> {
    if n == 0 {
        return Err(NmimError::domain("uniform distribution needs n >= 1"));
    }
    Ok(ImportanceScore((n - 1) as f64))
}

/// Truncated Taylor expansion of `L` around `p`:
///
/// ```text
/// L(p + Δ) ≈ L(p) + Σ_{k=1}^{order} (−1)^k (k − p) / (k p^{k+1}) Δ^k
/// ```
pub fn taylor_log_importance(p: f64, dp: f64, order: usize) -> Result<f64> {
    check_probability(p)?;
    let shifted = p + dp;
    if !(shifted > 0.0 && shifted <= 1.0) {
        return Err(NmimError::domain(format!(
            "p + dp = {shifted} leaves (0, 1]"
        )));
    }
    if order == 0 {
        return Err(NmimError::domain("Taylor order must be >= 1"));
    }
    let mut value = log_importance_unchecked(p);
    let mut dp_pow = 1.0;
    let mut p_pow = p;
    for k in 1..=order {
        dp_pow *= dp;
        p_pow *= p;
        let kf = k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        value += sign * (kf - p) / (kf * p_pow) * dp_pow;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_distributions() {
        assert_eq!(Distribution::new(vec![]), Err(NmimError::EmptyDistribution));
        assert_eq!(
            Distribution::new(vec![0.0, 1.0]),
            Err(NmimError::InvalidProbability(0.0))
        );
        assert!(matches!(
            Distribution::new(vec![-0.1, 1.1]),
            Err(NmimError::InvalidProbability(_))
        ));
        assert!(matches!(
            Distribution::new(vec![0.5, 0.5 + 2e-9]),
            Err(NmimError::NotNormalized(_))
        ));
        assert!(Distribution::new(vec![0.5, 0.5 + 5e-10]).is_ok());
        assert!(matches!(
            Distribution::new(vec![f64::NAN, 1.0]),
            Err(NmimError::InvalidProbability(_))
        ));
    }

    #[test]
    fn order_is_preserved() {
        let d = Distribution::new(vec![0.7, 0.1, 0.2]).unwrap();
        assert_eq!(d.probs(), &[0.7, 0.1, 0.2]);
    }

    #[test]
    fn event_importance_examples() {
        assert_eq!(log_event_importance(1.0).unwrap().log_value(), 0.0);
        let half = log_event_importance(0.5).unwrap().log_value();
        assert!((half - (1.0 - 2f64.ln())).abs() < 1e-15);
        // 50-digit reference: 999985.18448944203572589...
        let tiny = log_event_importance(1e-6).unwrap().log_value();
        assert!(tiny.is_finite());
        assert!((tiny - 999_985.184_489_442).abs() < 1e-8);
    }

    #[test]
    fn event_importance_domain() {
        assert!(log_event_importance(0.0).is_err());
        assert!(log_event_importance(1.000_001).is_err());
        assert!(log_event_importance(-0.5).is_err());
    }

    #[test]
    fn nmim_examples() {
        assert!((nmim(&Distribution::uniform(5).unwrap()).log_value() - 4.0).abs() < 1e-12);
        assert_eq!(
            nmim(&Distribution::new(vec![1.0]).unwrap()).log_value(),
            0.0
        );
        let d = Distribution::new(vec![0.1, 0.9]).unwrap();
        // 50-digit reference: 6.6986553526191117207...
        assert!((nmim(&d).log_value() - 6.698_655_352_619_111).abs() < 1e-12);
    }

    #[test]
    fn uniform_closed_form() {
        assert_eq!(nmim_uniform(1).unwrap().log_value(), 0.0);
        assert_eq!(nmim_uniform(2).unwrap().log_value(), 1.0);
        assert_eq!(nmim_uniform(1_000_000).unwrap().log_value(), 999_999.0);
        assert!(nmim_uniform(0).is_err());
    }

    #[test]
    fn taylor_examples() {
        let l = |p: f64| log_event_importance(p).unwrap().log_value();
        assert_eq!(taylor_log_importance(0.37, 0.0, 3).unwrap(), l(0.37));

        let first = taylor_log_importance(0.1, 0.0008, 1).unwrap();
        assert!((first - (l(0.1) - 0.072)).abs() < 1e-12);
        // exact L(0.1008) = 6.62601799729005182...
        assert!((first - 6.626_017_997_290_052).abs() < 1e-3);

        let second = taylor_log_importance(0.3, 0.004, 2).unwrap();
        assert!((second - l(0.304)).abs() < 1e-5);
    }

    #[test]
    fn taylor_domain() {
        assert!(taylor_log_importance(0.1, -0.2, 1).is_err());
        assert!(taylor_log_importance(0.9, 0.2, 1).is_err());
        assert!(taylor_log_importance(0.5, 0.1, 0).is_err());
    }

    #[test]
    fn product_distribution() {
        let p = Distribution::new(vec![0.25, 0.75]).unwrap();
        let q = Distribution::new(vec![0.5, 0.5]).unwrap();
        let pq = p.product(&q).unwrap();
        assert_eq!(pq.probs(), &[0.125, 0.125, 0.375, 0.375]);
    }
}
