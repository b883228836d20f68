mod common;

use common::{distribution, log_importance};
use nmim::analysis::{merge_events, split_event};
use nmim::{nmim, taylor_log_importance, Distribution};
use proptest::prelude::*;

proptest! {
    #[test]
    fn nmim_is_non_negative(d in distribution(1, 40)) {
        prop_assert!(nmim(&d).log_value() >= 0.0);
    }

    #[test]
    fn nmim_is_at_least_n_minus_one(d in distribution(1, 50)) {
        let n = d.len() as f64;
        let gap = nmim(&d).log_value() - (n - 1.0);
        prop_assert!(gap >= -1e-9);
        if gap <= 1e-9 {
            let lo = d.probs().iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = d.probs().iter().cloned().fold(0.0, f64::max);
            prop_assert!(hi / lo < 1.0 + 1e-3, "near-equality for a non-uniform input");
        }
    }

    #[test]
    fn event_importance_is_decreasing(a in 1e-4f64..1.0, b in 1e-4f64..1.0) {
        prop_assume!(a != b);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(log_importance(lo) > log_importance(hi));
    }

    #[test]
    fn geometric_centre_inequality(d in distribution(1, 40)) {
        let n = d.len() as f64;
        let weighted: f64 = d.probs().iter().map(|&p| p * log_importance(p)).sum();
        let plain: f64 = d.probs().iter().map(|&p| log_importance(p)).sum::<f64>() / n;
        prop_assert!(weighted <= plain + 1e-9 * plain.abs().max(1.0));
    }

    #[test]
    fn splitting_never_decreases(d in distribution(1, 20), idx in 0usize..20, f in 0.01f64..0.99) {
        let idx = idx % d.len();
        let split = split_event(&d, idx, f).unwrap();
        prop_assert!(nmim(&split).log_value() >= nmim(&d).log_value() - 1e-12);
    }

    #[test]
    fn merging_never_increases(d in distribution(2, 20), i in 0usize..20, j in 0usize..20) {
        let (i, j) = (i % d.len(), j % d.len());
        prop_assume!(i != j);
        let merged = merge_events(&d, i, j).unwrap();
        prop_assert!(nmim(&merged).log_value() <= nmim(&d).log_value() + 1e-12);
    }

    #[test]
    fn independent_sources_are_superadditive(p in distribution(1, 8), q in distribution(1, 8)) {
        let joint = p.product(&q).unwrap();
        let lhs = nmim(&p).log_value() + nmim(&q).log_value();
        prop_assert!(lhs <= nmim(&joint).log_value() + 1e-9 * lhs.abs().max(1.0));
    }

    #[test]
    fn log_domain_matches_direct_evaluation(p in 1e-2f64..=1.0) {
        let direct = p * ((1.0 - p) / p).exp();
        let via_log = log_importance(p).exp();
        prop_assert!(((via_log - direct) / direct).abs() < 1e-12);
    }

    #[test]
    fn taylor_error_shrinks_with_order(p in 0.05f64..0.9, order in 1usize..=4) {
        let dp = 0.01 * p;
        let err = |h: f64| (taylor_log_importance(p, h, order).unwrap() - log_importance(p + h)).abs();
        let (e1, e2) = (err(dp), err(dp / 2.0));
        prop_assume!(e1 > 1e-12);
        prop_assert!(e1 / e2 >= 0.9 * 2f64.powi(order as i32), "e1 = {e1}, e2 = {e2}");
    }
}

#[test]
fn extreme_probabilities_stay_finite() {
    let d = Distribution::new(vec![1e-300, 1.0 - 1e-300]).unwrap();
    let v = nmim(&d).log_value();
    assert!(v.is_finite() && v > 1e299);
}

#[test]
fn values_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<Distribution>();
    assert_send_sync::<nmim::ImportanceScore>();

    let d = std::sync::Arc::new(nmim::sources::storage_example());
    let expected = nmim(&d);
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let d = d.clone();
            std::thread::spawn(move || nmim(&d))
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), expected);
    }
}
