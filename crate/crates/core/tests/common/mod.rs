#![allow(dead_code)]

use nmim::Distribution;
use proptest::prelude::*;

/// Random distributions of `min_len..=max_len` events with every probability
/// bounded away from zero.
pub fn distribution(min_len: usize, max_len: usize) -> impl Strategy<Value = Distribution> {
    weighted_distribution(min_len, max_len, 1e-3)
}

/// As [`distribution`] with unnormalized weights drawn from `[floor, 1)`.
pub fn weighted_distribution(
    min_len: usize,
    max_len: usize,
    floor: f64,
) -> impl Strategy<Value = Distribution> {
    prop::collection::vec(floor..1.0, min_len..=max_len).prop_map(|w| {
        let z: f64 = w.iter().sum();
        Distribution::new(w.iter().map(|x| x / z).collect()).unwrap()
    })
}

pub fn log_importance(p: f64) -> f64 {
    nmim::log_event_importance(p).unwrap().log_value()
}
