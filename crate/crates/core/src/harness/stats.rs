use serde::{Deserialize, Serialize};

use crate::problems::Sense;

/// Summary of the per-run best values of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single run.
    pub sd: f64,
    pub best: f64,
    pub worst: f64,
    /// `100 * |mean - known| / |known|`, or `|mean - known|` when the known
    /// value is 0; absent without a known value.
    pub error_percent: Option<f64>,
}

/// Statistics for a minimization objective. `None` for an empty input.
pub fn aggregate_stats(bests: &[f64], best_known: Option<f64>) -> Option<RunStats> {
    aggregate_stats_with_sense(bests, best_known, Sense::Minimize)
}

/// Statistics where "best" and "worst" follow `sense`.
pub fn aggregate_stats_with_sense(bests: &[f64], best_known: Option<f64>, sense: Sense) -> Option<RunStats> {
    if bests.is_empty() {
        return None;
    }
    let n = bests.len() as f64;
    let mean = bests.iter().sum::<f64>() / n;
    let sd = if bests.len() > 1 {
        (bests.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let min = bests.iter().copied().fold(f64::INFINITY, f64::min);
    let max = bests.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (best, worst) = match sense {
        Sense::Minimize => (min, max),
        Sense::Maximize => (max, min),
    };
    let error_percent = best_known.map(|k| {
        if k == 0.0 {
            (mean - k).abs()
        } else {
            100.0 * (mean - k).abs() / k.abs()
        }
    });
    Some(RunStats {
        mean,
        sd,
        best,
        worst,
        error_percent,
    })
}
