//! # nmim
//!
//! The non-parametric message importance measure (NMIM) and the procedures
//! built on it.
//!
//! The NMIM of a finite distribution `p` is
//!
//! ```text
//! NMIM(p) = ln Σ p_i · exp((1 − p_i) / p_i)
//! ```
//!
//! and `M(p) = p · exp((1 − p)/p)` is the importance of a single event. Rare
//! events dominate the sum: `exp(1/p)` overflows an `f64` once `p < 1/709`, so
//! every quantity in this crate is carried in the log domain.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`measure`] | [`Distribution`], per-event log-importance, NMIM, Taylor expansion |
//! | [`analysis`] | minimum-probability dominance: gap report, dominance thresholds, split/merge |
//! | [`coding`] | importance-weighted code-length allocation, cap-and-iterate, baselines, brute-force oracle |
//! | [`transmission`] | BSC importance change, NMIM-loss-distortion function and inverse, transmission planner |
//! | [`sources`] | the Zipf / discrete Normal / discrete Rayleigh families used by the experiments |
//!
//! ```rust
//! use nmim::{nmim, Distribution};
//!
//! let d = Distribution::new(vec![0.1, 0.9]).unwrap();
//! let score = nmim(&d);
//! assert!((score.log_value() - 6.698_655_352_619_11).abs() < 1e-9);
//! ```

// Guards are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod coding;
mod error;
pub mod measure;
pub mod numeric;
pub mod sources;
pub mod transmission;

pub use error::{NmimError, Result};
pub use measure::{
    log_event_importance, nmim, nmim_uniform, taylor_log_importance, Distribution, ImportanceScore,
};
