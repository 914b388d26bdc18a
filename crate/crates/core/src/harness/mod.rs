//! Bound evaluators, the Chernoff utility, the exact small-instance oracle
//! and the Monte Carlo trial runner.

mod brute;
mod exchange;
mod sweep;

pub use brute::{brute_longest, LongestMode, BRUTE_LIMIT};
pub use exchange::{check_exchangeability, ExchangeReport};
pub use sweep::{
    run_trials, sample_start_set, write_outputs, CellSummary, ExperimentConfig, Operation, SweepOutcome, TrialRecord,
    CSV_HEADER,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `2 exp(-lambda^2 / (3np))`, clamped into `[0, 1]`, for `0 < lambda <= np`.
pub fn chernoff_bound(n: u64, p: f64, lambda: f64) -> Result<f64> {
    let mean = n as f64 * p;
    if !(0.0..=1.0).contains(&p) || !(lambda > 0.0) || lambda > mean {
        return Err(Error::InvalidParameter(format!(
            "need 0 < lambda <= np, got lambda = {lambda}, np = {mean}"
        )));
    }
    Ok((2.0 * (-lambda * lambda / (3.0 * mean)).exp()).clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundCurve {
    /// `(1 - c e^{-c}) k`.
    PathAlpha,
    /// `(1 - 5 c^{-1/5}) k`.
    CycleBeta,
    /// `(1 - 2 c^{-1/2}) k`.
    Lemma32,
    /// `(2 - 6 c^{-1/2}) k`.
    Lemma31,
}

impl BoundCurve {
    pub const ALL: [BoundCurve; 4] = [
        BoundCurve::PathAlpha,
        BoundCurve::CycleBeta,
        BoundCurve::Lemma32,
        BoundCurve::Lemma31,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundCurve::PathAlpha => "path-alpha",
            BoundCurve::CycleBeta => "cycle-beta",
            BoundCurve::Lemma32 => "lemma32",
            BoundCurve::Lemma31 => "lemma31",
        }
    }
}

/// The curve at `(c, k)`, floored at 0.
pub fn eval_bound(curve: BoundCurve, c: f64, k: usize) -> f64 {
    let k = k as f64;
    let frac = match curve {
        BoundCurve::PathAlpha => 1.0 - c * (-c).exp(),
        BoundCurve::CycleBeta => 1.0 - 5.0 * c.powf(-0.2),
        BoundCurve::Lemma32 => 1.0 - 2.0 * c.powf(-0.5),
        BoundCurve::Lemma31 => 2.0 - 6.0 * c.powf(-0.5),
    };
    (frac * k).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chernoff_examples() {
        let b = chernoff_bound(40, 0.3, 12.0).unwrap();
        assert!((b - 2.0 * (-4.0f64).exp()).abs() < 1e-15);
        assert!((b - 0.0366).abs() < 1e-4);
        let b = chernoff_bound(40, 0.3, 6.0).unwrap();
        assert!((b - 0.7358).abs() < 1e-4);
        assert!(chernoff_bound(40, 0.3, 12.5).is_err());
        assert!(chernoff_bound(40, 0.3, 0.0).is_err());
        assert_eq!(chernoff_bound(10, 0.5, 0.1).unwrap(), 1.0);
    }

    #[test]
    fn bound_examples() {
        assert!((eval_bound(BoundCurve::Lemma32, 100.0, 1000) - 800.0).abs() < 1e-9);
        assert!((eval_bound(BoundCurve::Lemma31, 100.0, 1000) - 1400.0).abs() < 1e-9);
        assert!((eval_bound(BoundCurve::CycleBeta, 1e5, 1_000_000) - 5e5).abs() < 1e-6);
        assert_eq!(eval_bound(BoundCurve::CycleBeta, 32.0, 100), 0.0);
        let pa = eval_bound(BoundCurve::PathAlpha, 6.0, 10_000);
        assert!((pa - (1.0 - 6.0 * (-6.0f64).exp()) * 1e4).abs() < 1e-9);
    }

    #[test]
    fn bounds_stay_in_range_and_grow_with_c() {
        for curve in BoundCurve::ALL {
            let mut last = 0.0;
            for c in [1.5, 2.0, 4.0, 8.0, 32.0, 243.0, 1024.0, 3125.0, 1e5] {
                let v = eval_bound(curve, c, 1000);
                assert!((0.0..=2000.0).contains(&v), "{curve:?} at {c}");
                assert!(v >= last, "{curve:?} decreases at {c}");
                last = v;
            }
        }
    }
}
