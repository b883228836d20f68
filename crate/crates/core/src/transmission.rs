//! Importance over binary channels.
//!
//! * [`psi`]: NMIM change of a Bernoulli source through a binary symmetric
//!   channel, exactly and by the first-order approximations.
//! * [`rmim`] / [`dmim`]: the NMIM-loss-distortion function under Hamming
//!   distortion and its inverse on the growth branch.
//! * [`plan_max_transmission`]: largest receiver entropy under an importance
//!   loss budget `Δ` and a channel budget `C·t`.
//!
//! NMIM quantities (`ψ`, `R`, `Δ`, `δ`) are in nats. Entropies (`H`, `C·t`,
//! `max_entropy`) are in bits. The two are never mixed in one comparison.

use serde::Serialize;

use crate::error::{NmimError, Result};
use crate::measure::log_importance_unchecked;
use crate::numeric::{bisect, log_add_exp};

/// Binary symmetric channel with crossover probability `ε ∈ [0, 0.5)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BscChannel {
    epsilon: f64,
}

impl BscChannel {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&epsilon) {
            return Err(NmimError::domain(format!(
                "crossover probability {epsilon} must lie in [0, 0.5)"
            )));
        }
        Ok(BscChannel { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `P(Y = 1)` for input `P(X = 1) = p`: `p(1 − ε) + ε(1 − p)`.
    pub fn output_probability(&self, p: f64) -> f64 {
        // p + ε(1 − 2p) is exact at p = 1/2
        p + self.epsilon * (1.0 - 2.0 * p)
    }
}

/// `ln(t e^{1/t} + (1 − t) e^{1/(1 − t)})`, i.e. `NMIM(t, 1 − t) + 1`.
fn binary_log_weight(t: f64) -> f64 {
    log_add_exp(t.ln() + 1.0 / t, (1.0 - t).ln() + 1.0 / (1.0 - t))
}

/// `s(p) = (1 − p)(1 − 2p) / p²`.
pub fn source_sensitivity(p: f64) -> f64 {
    (1.0 - p) * (1.0 - 2.0 * p) / (p * p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiChange {
    pub p: f64,
    pub epsilon: f64,
    /// Output parameter `p′ = p(1 − ε) + ε(1 − p)`.
    pub output_p: f64,
    /// `NMIM(p, 1−p) − NMIM(p′, 1−p′)`, nats.
    pub exact: f64,
    /// `ε · s(p)`.
    pub coarse: f64,
    /// `ε · s(p)` with the cross-term of the complementary event kept.
    pub fine: f64,
    /// `L(p) − L(p′) − ln 2`; `None` when the minima are not unique.
    pub lower_bound: Option<f64>,
    /// `L(p) − L(p′) + ln 2`; `None` when the minima are not unique.
    pub upper_bound: Option<f64>,
    /// Whether `ε < p`, where the approximations are meant to apply.
    pub small_crossover: bool,
}

/// Change of NMIM of a Bernoulli(`p`) source through `channel`, `0 < p ≤ 0.5`.
pub fn psi(p: f64, channel: &BscChannel) -> Result<PsiChange> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(NmimError::domain(format!(
            "source parameter {p} must lie in (0, 0.5]"
        )));
    }
    let eps = channel.epsilon();
    let q = channel.output_probability(p);
    let exact = binary_log_weight(p) - binary_log_weight(q);

    let s = source_sensitivity(p);
    let coarse = eps * s;
    let lp = log_importance_unchecked(p);
    let lq = log_importance_unchecked(1.0 - p);
    // share of the complementary event in M(p) + M(1 − p)
    let share = (lq - log_add_exp(lp, lq)).exp();
    let c = (3.0 * p * p - 3.0 * p + 1.0) / (p * p * (1.0 - p) * (1.0 - p)) * eps * (1.0 - 2.0 * p);
    let fine = coarse - (c.exp_m1() * share).ln_1p();

    let (lower_bound, upper_bound) = if q < 0.5 {
        let centre = lp - log_importance_unchecked(q);
        (
            Some(centre - std::f64::consts::LN_2),
            Some(centre + std::f64::consts::LN_2),
        )
    } else {
        (None, None)
    };

    Ok(PsiChange {
        p,
        epsilon: eps,
        output_p: q,
        exact,
        coarse,
        fine,
        lower_bound,
        upper_bound,
        small_crossover: eps < p,
    })
}

fn check_source(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(NmimError::domain(format!(
            "Bernoulli parameter {p} must lie in (0, 1)"
        )));
    }
    Ok(())
}

/// Plateau value `δ(p) = ln(p e^{1/p} + (1 − p) e^{1/(1 − p)}) − 2`.
pub fn delta(p: f64) -> Result<f64> {
    check_source(p)?;
    if p == 0.5 {
        return Ok(0.0);
    }
    Ok(binary_log_weight(p) - 2.0)
}

/// NMIM-loss-distortion function of a Bernoulli(`p`) source under Hamming
/// distortion `D`.
///
/// Grows while the reconstruction parameter `p ± D` stays on the same side of
/// 1/2 and is flat at `δ(p)` from `D = |1/2 − p|` on.
pub fn rmim(p: f64, distortion: f64) -> Result<f64> {
    check_source(p)?;
    if !(distortion >= 0.0) {
        return Err(NmimError::domain(format!(
            "distortion {distortion} must be >= 0"
        )));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    if p < 0.5 && p + distortion < 0.5 {
        return Ok(binary_log_weight(p) - binary_log_weight(p + distortion));
    }
    if p > 0.5 && p - distortion > 0.5 {
        return Ok(binary_log_weight(p) - binary_log_weight(p - distortion));
    }
    delta(p)
}

/// Grid-search evaluation of the NMIM-loss-distortion function.
///
/// Enumerates joint entries `p01 = i·h`, `p10 = j·h` with `h = D/grid`,
/// `p01 + p10 ≤ D`, `p01 ≤ p`, `p10 ≤ 1 − p`, and minimizes the output weight
/// `t e^{1/t} + (1−t) e^{1/(1−t)}` at `t = p − p01 + p10` evaluated directly
/// (no log-domain shortcuts). Intended for moderate `p`; the direct
/// exponentials overflow below `p ≈ 1/709`.
pub fn rmim_oracle(p: f64, distortion: f64, grid: usize) -> Result<f64> {
    check_source(p)?;
    if grid < 100 {
        return Err(NmimError::Guard(format!("grid {grid} must be >= 100")));
    }
    if !(distortion >= 0.0) {
        return Err(NmimError::domain(format!(
            "distortion {distortion} must be >= 0"
        )));
    }
    let weight = |t: f64| t * (1.0 / t).exp() + (1.0 - t) * (1.0 / (1.0 - t)).exp();
    let source = weight(p);
    if distortion == 0.0 {
        return Ok(0.0);
    }
    let h = distortion / grid as f64;
    let mut best = source;
    for i in 0..=grid {
        let p01 = i as f64 * h;
        if p01 > p {
            break;
        }
        for j in 0..=(grid - i) {
            let p10 = j as f64 * h;
            if p10 > 1.0 - p {
                break;
            }
            let t = p - p01 + p10;
            if t <= 0.0 || t >= 1.0 {
                continue;
            }
            let w = weight(t);
            if w < best {
                best = w;
            }
        }
    }
    Ok(source.ln() - best.ln())
}

/// Inverse of [`rmim`] on its growth branch, `0 < p < 0.5`.
///
/// Bisection on `D ∈ [0, 1/2 − p]`; `δ(p)` maps to the plateau onset.
pub fn dmim(p: f64, loss: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(NmimError::domain(format!(
            "source parameter {p} must lie in (0, 0.5)"
        )));
    }
    let plateau = delta(p)?;
    if !(loss >= 0.0) {
        return Err(NmimError::domain(format!("loss {loss} must be >= 0")));
    }
    if loss > plateau {
        return Err(NmimError::domain(format!(
            "loss {loss} exceeds the plateau δ(p) = {plateau}; the inverse is undefined"
        )));
    }
    if loss == 0.0 {
        return Ok(0.0);
    }
    let onset = 0.5 - p;
    if loss == plateau {
        return Ok(onset);
    }
    let base = binary_log_weight(p);
    Ok(bisect(
        |d| base - binary_log_weight(p + d) - loss,
        0.0,
        onset,
        1e-16,
    ))
}

/// Binary entropy in bits, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(NmimError::domain(format!("probability {p} outside [0, 1]")));
    }
    Ok(entropy_bits(p))
}

fn entropy_bits(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// The root of `H(p) = h` in `[0, 1/2]`.
pub fn inv_binary_entropy(h: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&h) {
        return Err(NmimError::domain(format!(
            "entropy {h} outside [0, 1] bits"
        )));
    }
    if h == 0.0 {
        return Ok(0.0);
    }
    if h == 1.0 {
        return Ok(0.5);
    }
    Ok(bisect(|p| entropy_bits(p) - h, 0.0, 0.5, 1e-15))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanRegime {
    /// `Δ = 0`: the source is received unchanged.
    Exact,
    /// `0 < Δ ≤ δ(p0)`.
    Growth,
    /// `Δ > δ(p0)`: the receiver reaches one full bit.
    Saturation,
}

impl PlanRegime {
    pub fn name(self) -> &'static str {
        match self {
            PlanRegime::Exact => "exact",
            PlanRegime::Growth => "growth",
            PlanRegime::Saturation => "saturation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmissionPlan {
    /// `Δ`, nats.
    pub delta_max: f64,
    /// `C`, bits per use.
    pub capacity: f64,
    /// `t`, channel uses.
    pub time: f64,
    /// `p0 = H⁻¹(C t)`.
    pub p0: f64,
    /// `δ(p0)`, nats: the growth/saturation breakpoint.
    pub delta_p0: f64,
    /// Distortion spent, `D^{(MIM)}(Δ)` on the growth branch.
    pub distortion: f64,
    /// Received parameter `q = p0 + D`.
    pub received_p: f64,
    pub regime: PlanRegime,
    /// Maximum receiver entropy, bits.
    pub max_entropy: f64,
}

/// Maximum receiver entropy for a Bernoulli source under an NMIM-loss budget
/// `delta_max` and cumulative channel budget `capacity · time ∈ (0, 1]` bits.
pub fn plan_max_transmission(delta_max: f64, capacity: f64, time: f64) -> Result<TransmissionPlan> {
    if !(delta_max >= 0.0) {
        return Err(NmimError::domain(format!("Δ = {delta_max} must be >= 0")));
    }
    if !(capacity > 0.0 && time > 0.0) {
        return Err(NmimError::domain("capacity and time must be positive"));
    }
    let service = capacity * time;
    if service > 1.0 {
        return Err(NmimError::domain(format!(
            "C·t = {service} bits exceeds one bit per binary symbol"
        )));
    }
    let p0 = inv_binary_entropy(service)?;
    let delta_p0 = delta(p0)?;
    let (regime, distortion, received_p, max_entropy) = if delta_max == 0.0 {
        (PlanRegime::Exact, 0.0, p0, service)
    } else if delta_max <= delta_p0 {
        let d = dmim(p0, delta_max)?;
        let q = p0 + d;
        (PlanRegime::Growth, d, q, binary_entropy(q.min(0.5))?)
    } else {
        (PlanRegime::Saturation, 0.5 - p0, 0.5, 1.0)
    };
    Ok(TransmissionPlan {
        delta_max,
        capacity,
        time,
        p0,
        delta_p0,
        distortion,
        received_p,
        regime,
        max_entropy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistortionPoint {
    pub distortion: f64,
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionCurve {
    pub p: f64,
    pub points: Vec<DistortionPoint>,
    pub delta_p: f64,
}

/// Samples [`rmim`] at each of `distortions`.
pub fn distortion_curve(p: f64, distortions: &[f64]) -> Result<DistortionCurve> {
    let points = distortions
        .iter()
        .map(|&d| {
            rmim(p, d).map(|loss| DistortionPoint {
                distortion: d,
                loss,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DistortionCurve {
        p,
        points,
        delta_p: delta(p)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bsc(eps: f64) -> BscChannel {
        BscChannel::new(eps).unwrap()
    }

    #[test]
    fn channel_domain() {
        assert!(BscChannel::new(0.5).is_err());
        assert!(BscChannel::new(-0.01).is_err());
        assert!(BscChannel::new(0.0).is_ok());
    }

    #[test]
    fn psi_uniform_source_is_unchanged() {
        for eps in [0.0, 0.01, 0.3] {
            let r = psi(0.5, &bsc(eps)).unwrap();
            assert_eq!(r.exact, 0.0);
            assert_eq!(r.coarse, 0.0);
            assert_eq!(r.fine, 0.0);
            assert!(r.lower_bound.is_none() && r.upper_bound.is_none());
        }
    }

    #[test]
    fn psi_p_tenth() {
        let r = psi(0.1, &bsc(0.01)).unwrap();
        assert!((r.output_p - 0.108).abs() < 1e-15);
        assert!((r.coarse - 0.72).abs() < 1e-12);
        // 50-digit reference: 0.66260996427216190...
        assert!((r.exact - 0.662_609_964_272_161_9).abs() < 1e-10);
        let (lo, hi) = (r.lower_bound.unwrap(), r.upper_bound.unwrap());
        assert!(lo <= r.exact && r.exact <= hi);
    }

    #[test]
    fn psi_fine_at_p_030() {
        let r = psi(0.3, &bsc(0.01)).unwrap();
        // references: exact 0.0219776586925875, fine 0.0223511769063545
        assert!((r.exact - 0.021_977_658_692_587_5).abs() < 1e-12);
        assert!((r.fine - 0.022_351_176_906_354_5).abs() < 1e-12);
        assert!((r.fine - r.exact).abs() / r.exact < 0.02);
    }

    #[test]
    fn psi_domain() {
        assert!(psi(0.0, &bsc(0.01)).is_err());
        assert!(psi(0.6, &bsc(0.01)).is_err());
        assert!(!psi(0.005, &bsc(0.01)).unwrap().small_crossover);
    }

    #[test]
    fn delta_values() {
        // 50-digit reference: 5.69865535261911122...
        assert!((delta(0.1).unwrap() - 5.698_655_352_619_111).abs() < 1e-12);
        assert_eq!(delta(0.5).unwrap(), 0.0);
        assert!(delta(0.0).is_err());
        assert!(delta(1.0).is_err());
    }

    #[test]
    fn rmim_examples() {
        for p in [0.05, 0.1, 0.3, 0.7] {
            assert_eq!(rmim(p, 0.0).unwrap(), 0.0);
        }
        for d in [0.0, 0.2, 0.9] {
            assert_eq!(rmim(0.5, d).unwrap(), 0.0);
        }
        let plateau = delta(0.1).unwrap();
        assert_eq!(rmim(0.1, 0.4).unwrap(), plateau);
        assert_eq!(rmim(0.1, 0.75).unwrap(), plateau);
        assert!(rmim(0.1, 0.399).unwrap() < plateau);
    }

    #[test]
    fn rmim_mirror() {
        for d in [0.0, 0.05, 0.1, 0.19, 0.3, 0.5] {
            let a = rmim(0.3, d).unwrap();
            let b = rmim(0.7, d).unwrap();
            assert!((a - b).abs() < 1e-12, "D = {d}");
        }
    }

    #[test]
    fn rmim_domain() {
        assert!(rmim(0.0, 0.1).is_err());
        assert!(rmim(1.0, 0.1).is_err());
        assert!(rmim(0.2, -0.1).is_err());
        assert!(rmim(0.2, f64::NAN).is_err());
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(rmim_oracle(0.25, 0.0, 1000).unwrap(), 0.0);
        let exact = rmim(0.25, 0.1).unwrap();
        assert!((rmim_oracle(0.25, 0.1, 1000).unwrap() - exact).abs() < 1e-4);
        let plateau = delta(0.25).unwrap();
        assert!((rmim_oracle(0.25, 0.5, 1000).unwrap() - plateau).abs() < 1e-4);
        assert!(matches!(
            rmim_oracle(0.25, 0.1, 99),
            Err(NmimError::Guard(_))
        ));
    }

    #[test]
    fn dmim_examples() {
        assert_eq!(dmim(0.1, 0.0).unwrap(), 0.0);
        let plateau = delta(0.1).unwrap();
        assert_eq!(dmim(0.1, plateau).unwrap(), 0.4);
        let r = rmim(0.1, 0.2).unwrap();
        let d = dmim(0.1, r).unwrap();
        assert!((d - 0.2).abs() < 1e-8);
        assert!((rmim(0.1, d).unwrap() - r).abs() < 1e-10);
    }

    #[test]
    fn dmim_domain() {
        let plateau = delta(0.1).unwrap();
        assert!(dmim(0.1, plateau + 1e-6).is_err());
        assert!(dmim(0.1, -1.0).is_err());
        assert!(dmim(0.5, 0.0).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(inv_binary_entropy(1.0).unwrap(), 0.5);
        assert_eq!(inv_binary_entropy(0.0).unwrap(), 0.0);
        let p = inv_binary_entropy(0.5).unwrap();
        // reference root 0.110027864438359551...
        assert!((p - 0.110_027_864_438_359_55).abs() < 1e-12);
        assert!((binary_entropy(0.11003).unwrap() - 0.5).abs() < 1e-5);
        assert!(binary_entropy(1.1).is_err());
        assert!(inv_binary_entropy(-0.1).is_err());
    }

    #[test]
    fn plan_examples() {
        let exact = plan_max_transmission(0.0, 0.7, 1.0).unwrap();
        assert_eq!(exact.max_entropy, 0.7);
        assert_eq!(exact.regime, PlanRegime::Exact);

        for d in [0.0, 0.5, 3.0] {
            let full = plan_max_transmission(d, 1.0, 1.0).unwrap();
            assert_eq!(full.p0, 0.5);
            assert_eq!(full.delta_p0, 0.0);
            assert_eq!(full.max_entropy, 1.0);
        }

        let sat = plan_max_transmission(10.0, 0.5, 1.0).unwrap();
        assert!((sat.p0 - 0.110_03).abs() < 1e-5);
        // reference δ(p0) = 4.88439139845417...
        assert!((sat.delta_p0 - 4.884_391_398_454_171).abs() < 1e-9);
        assert_eq!(sat.regime, PlanRegime::Saturation);
        assert_eq!(sat.max_entropy, 1.0);

        let grow = plan_max_transmission(2.0, 0.5, 1.0).unwrap();
        assert_eq!(grow.regime, PlanRegime::Growth);
        assert!(grow.max_entropy > 0.5 && grow.max_entropy < 1.0);
        assert!((rmim(grow.p0, grow.distortion).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn plan_domain() {
        assert!(plan_max_transmission(-1.0, 0.5, 1.0).is_err());
        assert!(plan_max_transmission(1.0, 0.8, 2.0).is_err());
        assert!(plan_max_transmission(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn curve_collects_points() {
        let c = distortion_curve(0.2, &[0.0, 0.1, 0.3, 0.5]).unwrap();
        assert_eq!(c.points.len(), 4);
        assert_eq!(c.points[0].loss, 0.0);
        assert_eq!(c.points[2].loss, c.delta_p);
        assert!(distortion_curve(0.2, &[-1.0]).is_err());
    }
}
