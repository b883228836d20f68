//! Importance-weighted code-length allocation.
//!
//! Minimizes `Σ M(p_i) · D_f(l_i)` subject to `Σ l_i = K` where the
//! reconstruction error is either `D_f(l) = 1/l` ([`ErrorModel::Reciprocal`])
//! or `D_f(l) = γ^{−l}` ([`ErrorModel::Exponent`]). Both closed forms come from
//! a Lagrange relaxation over real lengths followed by a ceiling, so the
//! realized total `Σ l_i` may exceed `K`; both numbers are reported.
//!
//! Weights `M(p_i)` overflow for rare events, so shares and objectives are
//! computed from `ln M(p_i)` and objectives are returned as natural logs.

use serde::Serialize;

use crate::error::{NmimError, Result};
use crate::measure::Distribution;
use crate::numeric::{log_sum_exp, snapped_ceil};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorModel {
    /// `D_f(l) = 1/l`
    Reciprocal,
    /// `D_f(l) = γ^{−l}`
    Exponent,
}

impl ErrorModel {
    pub fn name(self) -> &'static str {
        match self {
            ErrorModel::Reciprocal => "reciprocal",
            ErrorModel::Exponent => "exponent",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationProblem {
    pub source: Distribution,
    /// `K`, the total length budget in symbols.
    pub total: usize,
    /// `L`, the initial (uncompressed) per-event length and the per-event cap.
    pub cap: usize,
    /// Code alphabet size; only read by the exponent model.
    pub gamma: u32,
    pub model: ErrorModel,
}

impl AllocationProblem {
    pub fn new(
        source: Distribution,
        total: usize,
        cap: usize,
        gamma: u32,
        model: ErrorModel,
    ) -> Result<Self> {
        if cap == 0 {
            return Err(NmimError::Budget("initial length L must be >= 1".into()));
        }
        check_budget(source.len(), total, model)?;
        check_gamma(model, gamma)?;
        Ok(AllocationProblem {
            source,
            total,
            cap,
            gamma,
            model,
        })
    }
}

fn check_budget(n: usize, total: usize, model: ErrorModel) -> Result<()> {
    match model {
        ErrorModel::Reciprocal if total < n => Err(NmimError::Budget(format!(
            "K = {total} cannot give each of {n} events at least one symbol"
        ))),
        ErrorModel::Exponent if total < 1 => Err(NmimError::Budget("K must be >= 1".into())),
        _ => Ok(()),
    }
}

fn check_gamma(model: ErrorModel, gamma: u32) -> Result<()> {
    if model == ErrorModel::Exponent && gamma < 2 {
        return Err(NmimError::domain(format!(
            "code alphabet size {gamma} must be >= 2"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllocationResult {
    /// Integer lengths, index-aligned with the source.
    pub lengths: Vec<usize>,
    /// Lengths before the ceiling; they sum to `nominal_total`.
    pub real_lengths: Vec<f64>,
    pub nominal_total: usize,
    pub realized_total: usize,
    /// Natural log of the model objective `Σ M(p_i) D_f(l_i)`.
    pub importance_loss: f64,
    /// `Σ p_i l_i`
    pub avg_length: f64,
    /// `Σ p_i l_i / L`
    pub compression_ratio: f64,
    /// Number of events with a positive length.
    pub n_active: usize,
    /// Allocation passes made by [`cap_and_iterate`]; 1 for single-shot solves,
    /// 0 for the oracle.
    pub iterations: usize,
}

struct Finish<'a> {
    source: &'a Distribution,
    model: ErrorModel,
    gamma: u32,
    nominal_total: usize,
    cap: usize,
    iterations: usize,
}

impl Finish<'_> {
    fn build(&self, lengths: Vec<usize>, real_lengths: Vec<f64>) -> AllocationResult {
        let log_m = self.source.log_importances();
        let importance_loss = weighted_log_loss(
            &log_m,
            lengths.iter().map(|&l| l as f64),
            self.model,
            self.gamma,
        );
        let avg_length: f64 = self
            .source
            .probs()
            .iter()
            .zip(&lengths)
            .map(|(&p, &l)| p * l as f64)
            .sum();
        AllocationResult {
            realized_total: lengths.iter().sum(),
            n_active: lengths.iter().filter(|&&l| l > 0).count(),
            compression_ratio: avg_length / self.cap as f64,
            avg_length,
            importance_loss,
            nominal_total: self.nominal_total,
            lengths,
            real_lengths,
            iterations: self.iterations,
        }
    }
}

/// `ln Σ exp(ln M_i) D_f(l_i)`; `+inf` if a reciprocal length is zero.
fn weighted_log_loss<I>(log_m: &[f64], lengths: I, model: ErrorModel, gamma: u32) -> f64
where
    I: IntoIterator<Item = f64>,
{
    let terms: Vec<f64> = match model {
        ErrorModel::Reciprocal => log_m
            .iter()
            .zip(lengths)
            .map(|(&lm, l)| lm - l.ln())
            .collect(),
        ErrorModel::Exponent => {
            let ln_gamma = (gamma as f64).ln();
            log_m
                .iter()
                .zip(lengths)
                .map(|(&lm, l)| lm - l * ln_gamma)
                .collect()
        }
    };
    log_sum_exp(terms.iter().copied())
}

/// Continuous minimizer for the reciprocal model: `x_i ∝ √M(p_i)`.
fn reciprocal_real(log_m: &[f64], total: f64) -> Vec<f64> {
    let half: Vec<f64> = log_m.iter().map(|lm| 0.5 * lm).collect();
    let z = log_sum_exp(half.iter().copied());
    half.iter().map(|h| (h - z).exp() * total).collect()
}

/// Continuous minimizer for the exponent model by water-filling.
///
/// All events start active; while some active event has a non-positive
/// length, the least important active event is dropped (highest index first
/// among equals) and the level recomputed. Active events get
/// `(ln M_i − mean_active ln M)/ln γ + K/Ñ`; inactive ones get 0.
fn exponent_real(log_m: &[f64], total: f64, gamma: u32) -> Vec<f64> {
    let ln_gamma = (gamma as f64).ln();
    let mut order: Vec<usize> = (0..log_m.len()).collect();
    // most important first; deactivation pops from the back
    order.sort_by(|&a, &b| log_m[b].total_cmp(&log_m[a]).then(a.cmp(&b)));
    let mut active = order.len();
    loop {
        let set = &order[..active];
        let mean = set.iter().map(|&i| log_m[i]).sum::<f64>() / active as f64;
        let level = total / active as f64;
        let length = |i: usize| (log_m[i] - mean) / ln_gamma + level;
        if active == 1 || set.iter().all(|&i| length(i) > 0.0) {
            let mut out = vec![0.0; log_m.len()];
            for &i in set {
                out[i] = length(i);
            }
            return out;
        }
        active -= 1;
    }
}

fn solve_real(log_m: &[f64], total: f64, model: ErrorModel, gamma: u32) -> Vec<f64> {
    match model {
        ErrorModel::Reciprocal => reciprocal_real(log_m, total),
        ErrorModel::Exponent => exponent_real(log_m, total, gamma),
    }
}

fn ceil_lengths(real: &[f64], model: ErrorModel) -> Vec<usize> {
    real.iter()
        .map(|&x| {
            let c = snapped_ceil(x.max(0.0)) as usize;
            match model {
                // every share is strictly positive even when it underflows
                ErrorModel::Reciprocal => c.max(1),
                ErrorModel::Exponent => c,
            }
        })
        .collect()
}

fn expect_model(problem: &AllocationProblem, model: ErrorModel) -> Result<()> {
    if problem.model != model {
        return Err(NmimError::domain(format!(
            "problem uses the {} model, expected {}",
            problem.model.name(),
            model.name()
        )));
    }
    Ok(())
}

fn single_shot(problem: &AllocationProblem) -> Result<AllocationResult> {
    check_budget(problem.source.len(), problem.total, problem.model)?;
    check_gamma(problem.model, problem.gamma)?;
    if problem.total > problem.cap {
        return Err(NmimError::Budget(format!(
            "K = {} exceeds L = {}; use cap_and_iterate",
            problem.total, problem.cap
        )));
    }
    let log_m = problem.source.log_importances();
    let real = solve_real(&log_m, problem.total as f64, problem.model, problem.gamma);
    let lengths = ceil_lengths(&real, problem.model);
    Ok(Finish {
        source: &problem.source,
        model: problem.model,
        gamma: problem.gamma,
        nominal_total: problem.total,
        cap: problem.cap,
        iterations: 1,
    }
    .build(lengths, real))
}

/// Reciprocal-model allocation `l_i = ⌈√M(p_i) / Σ_j √M(p_j) · K⌉` for `K ≤ L`.
pub fn allocate_reciprocal(problem: &AllocationProblem) -> Result<AllocationResult> {
    expect_model(problem, ErrorModel::Reciprocal)?;
    single_shot(problem)
}

/// Exponent-model allocation for `K ≤ L`:
/// `l_i = ⌈(ln M(p_i) − Σ_active ln M / Ñ + K ln γ / Ñ) / ln γ⌉⁺`.
pub fn allocate_exponent(problem: &AllocationProblem) -> Result<AllocationResult> {
    expect_model(problem, ErrorModel::Exponent)?;
    single_shot(problem)
}

/// Allocation for any `K ≤ n·L`.
///
/// Solves the closed form; if the largest length exceeds `L` that event is
/// fixed at `L`, removed, and the remaining budget `K − L` is re-solved over
/// the remaining events (their weights are not renormalized). Ties for the
/// largest length clamp the lowest index first. At most `n` passes.
pub fn cap_and_iterate(problem: &AllocationProblem) -> Result<AllocationResult> {
    let n = problem.source.len();
    let (model, cap) = (problem.model, problem.cap);
    check_budget(n, problem.total, model)?;
    check_gamma(model, problem.gamma)?;
    if problem.total > n.saturating_mul(cap) {
        return Err(NmimError::Infeasible(format!(
            "K = {} exceeds n·L = {}",
            problem.total,
            n * cap
        )));
    }

    let log_m = problem.source.log_importances();
    let mut lengths = vec![0usize; n];
    let mut real = vec![0.0f64; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut budget = problem.total;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let sub_log_m: Vec<f64> = remaining.iter().map(|&i| log_m[i]).collect();
        let sub_real = solve_real(&sub_log_m, budget as f64, model, problem.gamma);
        let sub_len = ceil_lengths(&sub_real, model);
        let (pos, &longest) = sub_len
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("at least one event remains");
        if longest > cap {
            let idx = remaining.remove(pos);
            lengths[idx] = cap;
            real[idx] = cap as f64;
            budget -= cap;
            continue;
        }
        for (k, &idx) in remaining.iter().enumerate() {
            lengths[idx] = sub_len[k];
            real[idx] = sub_real[k];
        }
        break;
    }
    Ok(Finish {
        source: &problem.source,
        model,
        gamma: problem.gamma,
        nominal_total: problem.total,
        cap,
        iterations,
    }
    .build(lengths, real))
}

/// Log of `Σ M(p_i)/l_i` or `Σ M(p_i) γ^{−l_i}` for integer lengths.
pub fn importance_loss(
    d: &Distribution,
    lengths: &[usize],
    model: ErrorModel,
    gamma: u32,
) -> Result<f64> {
    if lengths.len() != d.len() {
        return Err(NmimError::domain(format!(
            "{} lengths for {} events",
            lengths.len(),
            d.len()
        )));
    }
    check_gamma(model, gamma)?;
    if model == ErrorModel::Reciprocal {
        if let Some(i) = lengths.iter().position(|&l| l == 0) {
            return Err(NmimError::domain(format!(
                "event {i} has zero length under the reciprocal model"
            )));
        }
    }
    Ok(weighted_log_loss(
        &d.log_importances(),
        lengths.iter().map(|&l| l as f64),
        model,
        gamma,
    ))
}

/// Real-valued Lagrange optimum (before the ceiling); sums to `total`.
///
/// Reciprocal shares scale with `√M(p_i)`, so next to a very rare event the
/// shares of common events can underflow to 0.
pub fn relaxed_lengths(
    d: &Distribution,
    total: f64,
    model: ErrorModel,
    gamma: u32,
) -> Result<Vec<f64>> {
    check_gamma(model, gamma)?;
    if !(total > 0.0) {
        return Err(NmimError::Budget(format!("total {total} must be positive")));
    }
    Ok(solve_real(&d.log_importances(), total, model, gamma))
}

/// Log objective at real-valued lengths, e.g. from [`relaxed_lengths`].
pub fn relaxed_importance_loss(
    d: &Distribution,
    lengths: &[f64],
    model: ErrorModel,
    gamma: u32,
) -> Result<f64> {
    if lengths.len() != d.len() {
        return Err(NmimError::domain(
            "length vector does not match distribution",
        ));
    }
    check_gamma(model, gamma)?;
    Ok(weighted_log_loss(
        &d.log_importances(),
        lengths.iter().copied(),
        model,
        gamma,
    ))
}

/// Code 1: every event gets `⌈K/n⌉`.
pub fn baseline_equal(d: &Distribution, total: usize) -> Result<Vec<usize>> {
    let n = d.len();
    check_budget(n, total, ErrorModel::Reciprocal)?;
    Ok(vec![total.div_ceil(n); n])
}

/// Code 2: more length to less probable events, `l_i = ⌈K (1 − p_i) / Σ_j (1 − p_j)⌉`.
pub fn baseline_proportional(d: &Distribution, total: usize) -> Result<Vec<usize>> {
    let n = d.len();
    check_budget(n, total, ErrorModel::Reciprocal)?;
    if n == 1 {
        return Ok(vec![total]);
    }
    let complement: Vec<f64> = d.probs().iter().map(|p| 1.0 - p).collect();
    let z: f64 = complement.iter().sum();
    Ok(complement
        .iter()
        .map(|c| (snapped_ceil(total as f64 * c / z) as usize).max(1))
        .collect())
}

/// Largest instance [`oracle_allocate`] will enumerate.
pub const ORACLE_MAX_EVENTS: usize = 6;
pub const ORACLE_MAX_TOTAL: usize = 30;

/// Exhaustive search over integer length vectors with `Σ l_i = total`,
/// `l_i ≤ cap` (and `l_i ≥ 1` under the reciprocal model).
///
/// Vectors are visited in lexicographic order and replaced only on a strict
/// improvement, so ties resolve to the lexicographically smallest vector.
pub fn oracle_allocate(
    d: &Distribution,
    total: usize,
    cap: usize,
    model: ErrorModel,
    gamma: u32,
) -> Result<AllocationResult> {
    let n = d.len();
    if n > ORACLE_MAX_EVENTS || total > ORACLE_MAX_TOTAL {
        return Err(NmimError::Guard(format!(
            "oracle supports n <= {ORACLE_MAX_EVENTS} and total <= {ORACLE_MAX_TOTAL}, got n = {n}, total = {total}"
        )));
    }
    check_gamma(model, gamma)?;
    let floor = match model {
        ErrorModel::Reciprocal => 1,
        ErrorModel::Exponent => 0,
    };
    if total < n * floor || total > n.saturating_mul(cap) || cap < floor {
        return Err(NmimError::Infeasible(format!(
            "no length vector with n = {n}, total = {total}, cap = {cap}"
        )));
    }

    let log_m = d.log_importances();
    let mut search = Enumeration {
        log_m: &log_m,
        model,
        gamma,
        floor,
        cap,
        current: Vec::with_capacity(n),
        best: None,
    };
    search.visit(total);
    let (_, best) = search.best.expect("feasible instance has a candidate");
    let real = best.iter().map(|&l| l as f64).collect();
    Ok(Finish {
        source: d,
        model,
        gamma,
        nominal_total: total,
        cap,
        iterations: 0,
    }
    .build(best, real))
}

struct Enumeration<'a> {
    log_m: &'a [f64],
    model: ErrorModel,
    gamma: u32,
    floor: usize,
    cap: usize,
    current: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
}

impl Enumeration<'_> {
    fn visit(&mut self, remaining: usize) {
        let n = self.log_m.len();
        let left_after = n - self.current.len() - 1;
        if left_after == 0 {
            if remaining >= self.floor && remaining <= self.cap {
                self.current.push(remaining);
                let value = weighted_log_loss(
                    self.log_m,
                    self.current.iter().map(|&l| l as f64),
                    self.model,
                    self.gamma,
                );
                let improves = match &self.best {
                    None => true,
                    Some((best, _)) => value < best - 1e-12 * best.abs().max(1.0),
                };
                if improves {
                    self.best = Some((value, self.current.clone()));
                }
                self.current.pop();
            }
            return;
        }
        let hi = self
            .cap
            .min(remaining.saturating_sub(left_after * self.floor));
        for l in self.floor..=hi {
            self.current.push(l);
            self.visit(remaining - l);
            self.current.pop();
        }
    }
}
