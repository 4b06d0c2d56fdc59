use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::campaign::TimingCampaign;
use crate::stats;

/// Attached to every fit in the report.
pub const FINITE_RANGE_NOTE: &str = "This outcome describes only the sizes that were sampled. No finite set of \
measurements can settle whether the underlying growth is polynomial.";

const SLOPE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeFit {
    /// Least-squares slope of ln(time) against ln(size).
    pub degree: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    pub sizes: Vec<u32>,
    pub median_ticks: Vec<f64>,
    /// Slopes between successive sizes.
    pub local_slopes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FitOutcome {
    Fit(DegreeFit),
    /// The local slope at the largest sizes is above `max_degree` and still
    /// growing.
    RejectedFromClass { max_degree: u32, fit: DegreeFit },
    InsufficientData { uncensored_sizes: usize },
}

/// Fit `time ~ c * size^d` to per-size medians of the uncensored samples.
/// Zero tick counts are read as 1 so that logarithms stay finite.
///
/// # Panics
/// If `max_degree == 0`.
pub fn fit_poly_degree(c: &TimingCampaign, max_degree: u32) -> FitOutcome {
    assert!(max_degree >= 1, "max_degree must be at least 1");
    let mut by_size: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for s in &c.samples {
        if let Some(t) = s.ticks {
            by_size.entry(s.size).or_default().push(t.max(1) as f64);
        }
    }
    if by_size.len() < 3 {
        return FitOutcome::InsufficientData { uncensored_sizes: by_size.len() };
    }
    let sizes: Vec<u32> = by_size.keys().copied().collect();
    let medians: Vec<f64> = by_size.values().map(|v| stats::median(v).expect("non-empty group")).collect();
    let xs: Vec<f64> = sizes.iter().map(|&n| libm::log(f64::from(n))).collect();
    let ys: Vec<f64> = medians.iter().map(|&t| libm::log(t)).collect();
    let line = stats::least_squares(&xs, &ys).expect("three distinct sizes");
    let local_slopes: Vec<f64> = xs.windows(2).zip(ys.windows(2)).map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0])).collect();
    let fit = DegreeFit {
        degree: line.slope,
        intercept: line.intercept,
        rms_residual: line.rms_residual,
        sizes,
        median_ticks: medians,
        local_slopes,
    };
    let k = fit.local_slopes.len();
    let (last, prev) = (fit.local_slopes[k - 1], fit.local_slopes[k - 2]);
    if last > f64::from(max_degree) + SLOPE_EPS && last > prev + SLOPE_EPS {
        FitOutcome::RejectedFromClass { max_degree, fit }
    } else {
        FitOutcome::Fit(fit)
    }
}
