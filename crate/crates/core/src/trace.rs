use serde::{Deserialize, Serialize};

/// One named series of per-iteration values.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceSeries {
    pub name: String,
    pub values: Vec<f64>,
}

/// Per-iteration global-best history of one run.
///
/// `total` holds the scalarized (minimized) objective; `components` carries
/// the per-objective parts of the global best where a problem has them,
/// e.g. travel and waiting time on road networks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub total: Vec<f64>,
    pub components: Vec<TraceSeries>,
}

impl ConvergenceTrace {
    pub fn with_components(names: &[&str]) -> Self {
        Self {
            total: Vec::new(),
            components: names
                .iter()
                .map(|n| TraceSeries {
                    name: (*n).to_string(),
                    values: Vec::new(),
                })
                .collect(),
        }
    }

    pub fn push(&mut self, total: f64, components: &[f64]) {
        self.total.push(total);
        for (series, &v) in self.components.iter_mut().zip(components) {
            series.values.push(v);
        }
    }

    pub fn len(&self) -> usize {
        self.total.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total.is_empty()
    }

    pub fn last(&self) -> Option<f64> {
        self.total.last().copied()
    }

    pub fn is_monotone_non_increasing(&self) -> bool {
        is_non_increasing(&self.total)
    }
}

pub fn is_non_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0])
}

/// Running sum of a series.
pub fn cumulative(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .scan(0.0, |acc, &v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

/// Running mean of a series (cumulative sum divided by the sample count).
pub fn average_cumulative(values: &[f64]) -> Vec<f64> {
    cumulative(values)
        .into_iter()
        .enumerate()
        .map(|(i, c)| c / (i + 1) as f64)
        .collect()
}
