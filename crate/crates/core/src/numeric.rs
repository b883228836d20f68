//! Small numerical kernels shared by the other modules.

/// `ln Σ exp(x_i)` with max-subtraction.
///
/// Returns `-inf` for an empty input or when every term is `-inf`.
pub fn log_sum_exp<I>(terms: I) -> f64
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: Clone,
{
    let iter = terms.into_iter();
    let max = iter.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let sum: f64 = iter.map(|x| (x - max).exp()).sum();
    max + sum.ln()
}

/// `ln(exp(a) + exp(b))`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Finds a root of a monotone `f` on `[lo, hi]` by bisection.
///
/// `f(lo)` and `f(hi)` must bracket zero (either sign order). Iterates until
/// the bracket is narrower than `tol` or stops shrinking in floating point.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    let f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    let lo_negative = f_lo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return mid;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Ceiling that treats values within a relative `1e-12` of an integer as that
/// integer, so `2.0000000000000004` from a normalized share stays `2`.
pub(crate) fn snapped_ceil(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-12 * r.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lse_matches_direct_sum() {
        let xs = [0.1, -2.0, 3.5];
        let direct: f64 = xs.iter().map(|x: &f64| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(xs) - direct).abs() < 1e-14);
    }

    #[test]
    fn lse_survives_huge_terms() {
        let v = log_sum_exp([1e6, 1e6]);
        assert!((v - (1e6 + 2f64.ln())).abs() < 1e-9);
        assert_eq!(log_sum_exp(std::iter::empty::<f64>()), f64::NEG_INFINITY);
    }

    #[test]
    fn log_add_exp_is_symmetric() {
        assert_eq!(log_add_exp(1.0, 2.0), log_add_exp(2.0, 1.0));
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 4.0), 4.0);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        // decreasing function
        let r = bisect(|x| 2.0 - x * x, 0.0, 2.0, 1e-14);
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn snapped_ceil_absorbs_rounding_noise() {
        assert_eq!(snapped_ceil(2.000_000_000_000_000_4), 2.0);
        assert_eq!(snapped_ceil(1.999_999_999_999_999_8), 2.0);
        assert_eq!(snapped_ceil(7.653), 8.0);
        assert_eq!(snapped_ceil(0.0), 0.0);
    }
}
