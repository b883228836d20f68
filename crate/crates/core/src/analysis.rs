//! Minimum-probability dominance.
//!
//! When the smallest probability is small enough, or there are many events,
//! the rarest event carries nearly all of the NMIM: `0 ≤ NMIM(p) − L(p_min) ≤ ln 2`.
//! This module measures that gap and the ratio thresholds behind it.

use serde::Serialize;

use crate::error::{NmimError, Result};
use crate::measure::{log_importance_unchecked, nmim, Distribution, ImportanceScore};
use crate::numeric::bisect;

/// Operational thresholds for the two "much less than" hypotheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapConditions {
    /// Condition i holds when `p_min ≤ small_pmin_factor / (1 + ln(n − 1))`.
    pub small_pmin_factor: f64,
    /// Condition ii holds when `n ≥ large_n`.
    pub large_n: usize,
}

impl Default for GapConditions {
    fn default() -> Self {
        GapConditions {
            small_pmin_factor: 0.1,
            large_n: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub nmim_total: ImportanceScore,
    pub l_pmin: ImportanceScore,
    /// `nmim_total − l_pmin`, nats.
    pub gap: f64,
    pub p_min: f64,
    pub p_smin: f64,
    pub condition_i: bool,
    pub condition_ii: bool,
}

impl GapReport {
    /// Whether either hypothesis holds, so that `gap ≤ ln 2` is guaranteed.
    pub fn bound_applies(&self) -> bool {
        self.condition_i || self.condition_ii
    }

    pub fn within_bound(&self) -> bool {
        self.gap >= 0.0 && self.gap <= std::f64::consts::LN_2
    }
}

/// [`min_gap_with`] using [`GapConditions::default`].
pub fn min_gap(d: &Distribution) -> Result<GapReport> {
    min_gap_with(d, &GapConditions::default())
}

/// Gap between the NMIM of `d` and the log-importance of its rarest event.
///
/// Requires at least two events and a strictly unique minimum.
pub fn min_gap_with(d: &Distribution, conditions: &GapConditions) -> Result<GapReport> {
    let n = d.len();
    if n < 2 {
        return Err(NmimError::domain("gap analysis needs at least two events"));
    }
    let (mut p_min, mut p_smin) = (f64::INFINITY, f64::INFINITY);
    for &p in d.probs() {
        if p < p_min {
            p_smin = p_min;
            p_min = p;
        } else if p < p_smin {
            p_smin = p;
        }
    }
    if p_min == p_smin {
        return Err(NmimError::NonUniqueMinimum(p_min));
    }

    let total = nmim(d);
    let l_pmin = log_importance_unchecked(p_min);
    // Mathematically non-negative; clamp the rounding residue of the log-sum-exp.
    let gap = (total.log_value() - l_pmin).max(0.0);
    let ln_nm1 = ((n - 1) as f64).ln();
    Ok(GapReport {
        nmim_total: total,
        l_pmin: ImportanceScore::from_log(l_pmin),
        gap,
        p_min,
        p_smin,
        condition_i: p_min <= conditions.small_pmin_factor / (1.0 + ln_nm1),
        condition_ii: n >= conditions.large_n,
    })
}

/// Which asymptotic hypothesis the thresholds are derived under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DominanceRegime {
    /// Many events: exponent rate `n`.
    LargeN,
    /// Very small `p1`: exponent rate `1/p1`.
    SmallPmin,
}

impl DominanceRegime {
    fn rate(self, n: usize, p1: f64) -> f64 {
        match self {
            DominanceRegime::LargeN => n as f64,
            DominanceRegime::SmallPmin => 1.0 / p1,
        }
    }
}

/// Interval `[x1, x2]` of ratios `x = p1/p2` on which `M(p1)/M(p2) ≥ n − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub x1: f64,
    pub x2: f64,
    pub regime: DominanceRegime,
}

impl ThresholdReport {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.x1 && x <= self.x2
    }
}

fn check_threshold_inputs(n: usize, p1: f64) -> Result<()> {
    if n < 2 {
        return Err(NmimError::domain("dominance thresholds need n >= 2"));
    }
    if !(p1 > 0.0 && p1 < 1.0 / n as f64) {
        return Err(NmimError::domain(format!(
            "p1 = {p1} must lie in (0, 1/n) = (0, {})",
            1.0 / n as f64
        )));
    }
    Ok(())
}

/// Closed-form (asymptotic) dominance interval.
///
/// * [`DominanceRegime::LargeN`]: `x1 = exp(ln(n−1) − n)`, `x2 = 1 − ln(n−1)/(n−1)`.
/// * [`DominanceRegime::SmallPmin`]: `x1 = exp(ln(n−1) − 1/p1)`,
///   `x2 = 1 − p1/(1−p1) · ln(n−1)`.
pub fn dominance_thresholds(n: usize, p1: f64, regime: DominanceRegime) -> Result<ThresholdReport> {
    check_threshold_inputs(n, p1)?;
    let nm1 = (n - 1) as f64;
    let ln_nm1 = nm1.ln();
    let (x1, x2) = match regime {
        DominanceRegime::LargeN => ((ln_nm1 - n as f64).exp(), 1.0 - ln_nm1 / nm1),
        DominanceRegime::SmallPmin => ((ln_nm1 - 1.0 / p1).exp(), 1.0 - p1 / (1.0 - p1) * ln_nm1),
    };
    Ok(ThresholdReport { x1, x2, regime })
}

/// Exact roots of `x · exp(a(1 − x)) = n − 1` with `a` the regime's rate,
/// found by bisection. `None` when the curve never reaches `n − 1`.
///
/// Cross-check for [`dominance_thresholds`], whose closed forms drop
/// higher-order terms.
pub fn exact_dominance_interval(
    n: usize,
    p1: f64,
    regime: DominanceRegime,
) -> Result<Option<ThresholdReport>> {
    check_threshold_inputs(n, p1)?;
    let a = regime.rate(n, p1);
    let target = ((n - 1) as f64).ln();
    // g(x) = ln x + a(1 − x) − ln(n − 1); rises on (0, 1/a), falls on (1/a, 1).
    let peak_u = -a.ln();
    let g_of_u = |u: f64| u + a * (1.0 - u.exp()) - target;
    if g_of_u(peak_u) < 0.0 {
        return Ok(None);
    }
    // Left root in log space: x1 can be far below the smallest normal f64.
    let u_lo = target - a - 10.0;
    let u1 = bisect(g_of_u, u_lo, peak_u, 1e-14);
    let g = |x: f64| x.ln() + a * (1.0 - x) - target;
    let x2 = if g(1.0) >= 0.0 {
        1.0
    } else {
        bisect(g, 1.0 / a, 1.0, 1e-15)
    };
    Ok(Some(ThresholdReport {
        x1: u1.exp(),
        x2,
        regime,
    }))
}

/// Replaces event `index` by two sub-events `fraction·p` and `(1−fraction)·p`,
/// placed at `index` and `index + 1`.
pub fn split_event(d: &Distribution, index: usize, fraction: f64) -> Result<Distribution> {
    let probs = d.probs();
    if index >= probs.len() {
        return Err(NmimError::IndexOutOfRange {
            index,
            len: probs.len(),
        });
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(NmimError::domain(format!(
            "split fraction {fraction} must lie in (0, 1)"
        )));
    }
    let p = probs[index];
    let mut out = Vec::with_capacity(probs.len() + 1);
    out.extend_from_slice(&probs[..index]);
    out.push(fraction * p);
    out.push(p - fraction * p);
    out.extend_from_slice(&probs[index + 1..]);
    Distribution::new(out)
}

/// Merges events `i` and `j` into one event at position `min(i, j)`.
pub fn merge_events(d: &Distribution, i: usize, j: usize) -> Result<Distribution> {
    let len = d.len();
    for index in [i, j] {
        if index >= len {
            return Err(NmimError::IndexOutOfRange { index, len });
        }
    }
    if i == j {
        return Err(NmimError::domain("cannot merge an event with itself"));
    }
    let (keep, drop) = (i.min(j), i.max(j));
    let probs = d.probs();
    let mut out: Vec<f64> = Vec::with_capacity(len - 1);
    for (k, &p) in probs.iter().enumerate() {
        if k == keep {
            out.push(p + probs[drop]);
        } else if k != drop {
            out.push(p);
        }
    }
    Distribution::new(out)
}
