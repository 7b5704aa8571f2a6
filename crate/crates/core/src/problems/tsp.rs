use serde::{Deserialize, Serialize};

use super::ProblemError;
use crate::engine::{DiscreteProblem, RotationScope};
use crate::operators::BaitCase;
use crate::sequence::EventSequence;

/// Edge-weight function of a TSP instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    /// Euclidean distance rounded to the nearest integer.
    Euc2d,
    /// Pseudo-Euclidean distance of the att instances.
    Att,
    /// Great-circle distance on the idealized earth, coordinates in
    /// degrees.minutes.
    Geo,
    /// Distances given as a matrix.
    Explicit,
    /// Unrounded Euclidean distance.
    Euclidean,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Euc2d => "EUC_2D",
            Metric::Att => "ATT",
            Metric::Geo => "GEO",
            Metric::Explicit => "EXPLICIT",
            Metric::Euclidean => "EUCLIDEAN",
        }
    }
}

fn nint(x: f64) -> f64 {
    (x + 0.5).floor()
}

fn geo_radians(v: f64) -> f64 {
    // TSPLIB's truncated value; the reference distances depend on it.
    #[allow(clippy::approx_constant)]
    const PI: f64 = 3.141592;
    let deg = v.trunc();
    let min = v - deg;
    PI * (deg + 5.0 * min / 3.0) / 180.0
}

/// Distance between two points under a coordinate metric.
pub fn point_distance(metric: Metric, a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    match metric {
        Metric::Euc2d => nint((dx * dx + dy * dy).sqrt()),
        Metric::Euclidean | Metric::Explicit => (dx * dx + dy * dy).sqrt(),
        Metric::Att => {
            let r = ((dx * dx + dy * dy) / 10.0).sqrt();
            let t = nint(r);
            if t < r {
                t + 1.0
            } else {
                t
            }
        }
        Metric::Geo => {
            const RRR: f64 = 6378.388;
            let (lat_a, lon_a) = (geo_radians(a[0]), geo_radians(a[1]));
            let (lat_b, lon_b) = (geo_radians(b[0]), geo_radians(b[1]));
            let q1 = (lon_a - lon_b).cos();
            let q2 = (lat_a - lat_b).cos();
            let q3 = (lat_a + lat_b).cos();
            (RRR * (0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)).acos() + 1.0).trunc()
        }
    }
}

/// Symmetric TSP instance with a precomputed distance matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TspInstance {
    pub name: String,
    pub n: usize,
    pub coords: Option<Vec<[f64; 2]>>,
    pub metric: Metric,
    pub best_known: Option<f64>,
    matrix: Vec<f64>,
}

impl TspInstance {
    pub fn from_coords(name: impl Into<String>, coords: Vec<[f64; 2]>, metric: Metric) -> Result<Self, ProblemError> {
        if metric == Metric::Explicit {
            return Err(ProblemError::InvalidInstance(
                "explicit metric needs a distance matrix".into(),
            ));
        }
        let n = coords.len();
        let mut matrix = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = point_distance(metric, coords[i], coords[j]);
                matrix[i * n + j] = d;
                matrix[j * n + i] = d;
            }
        }
        Ok(Self {
            name: name.into(),
            n,
            coords: Some(coords),
            metric,
            best_known: None,
            matrix,
        })
    }

    /// Builds an explicit instance from a row-major `n*n` matrix.
    pub fn from_matrix(name: impl Into<String>, n: usize, matrix: Vec<f64>) -> Result<Self, ProblemError> {
        if matrix.len() != n * n {
            return Err(ProblemError::DimensionMismatch {
                expected: n * n,
                got: matrix.len(),
            });
        }
        for i in 0..n {
            if matrix[i * n + i] != 0.0 {
                return Err(ProblemError::InvalidInstance(format!("d({i},{i}) is not zero")));
            }
            for j in 0..n {
                let d = matrix[i * n + j];
                if !(d >= 0.0) || d != matrix[j * n + i] {
                    return Err(ProblemError::InvalidInstance(format!(
                        "distance ({i},{j}) is negative or asymmetric"
                    )));
                }
            }
        }
        Ok(Self {
            name: name.into(),
            n,
            coords: None,
            metric: Metric::Explicit,
            best_known: None,
            matrix,
        })
    }

    pub fn with_best_known(mut self, value: Option<f64>) -> Self {
        self.best_known = value;
        self
    }

    /// Recomputes the matrix from the coordinates under another metric.
    pub fn with_metric(&self, metric: Metric) -> Result<Self, ProblemError> {
        let coords = self
            .coords
            .clone()
            .ok_or_else(|| ProblemError::InvalidInstance("metric override needs coordinates".into()))?;
        let mut out = Self::from_coords(self.name.clone(), coords, metric)?;
        out.best_known = self.best_known;
        Ok(out)
    }

    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.matrix[a * self.n + b]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    /// Length change from removing the element at `from` and reinserting it
    /// at index `to` of the shortened tour.
    fn relocate_delta(&self, t: &[usize], from: usize, to: usize) -> f64 {
        let n = t.len();
        if n < 4 {
            return 0.0;
        }
        let d = |a: usize, b: usize| self.distance(a, b);
        let b = t[from];
        let prev = t[(from + n - 1) % n];
        let next = t[(from + 1) % n];
        let removal = d(prev, next) - d(prev, b) - d(b, next);
        let m = n - 1;
        let reduced = |r: usize| if r < from { t[r] } else { t[r + 1] };
        let a = reduced((to + m - 1) % m);
        let c = reduced(to % m);
        removal + d(a, b) + d(b, c) - d(a, c)
    }

    /// Length change from swapping the elements at `i` and `j`.
    fn swap_delta(&self, t: &[usize], i: usize, j: usize) -> f64 {
        let n = t.len();
        if i == j || n < 4 {
            return 0.0;
        }
        let at = |k: usize| {
            if k == i {
                t[j]
            } else if k == j {
                t[i]
            } else {
                t[k]
            }
        };
        let mut edges = [(i + n - 1) % n, i, (j + n - 1) % n, j];
        edges.sort_unstable();
        let mut delta = 0.0;
        let mut last = usize::MAX;
        for &e in &edges {
            if e == last {
                continue;
            }
            last = e;
            let f = (e + 1) % n;
            delta += self.distance(at(e), at(f)) - self.distance(t[e], t[f]);
        }
        delta
    }
}

/// Closed tour length: consecutive pairs plus the edge back to the start.
pub fn tsp_tour_length(inst: &TspInstance, tour: &EventSequence) -> Result<f64, ProblemError> {
    if !tour.is_permutation_of(inst.n) {
        return Err(ProblemError::InvalidTour { n: inst.n });
    }
    let t = tour.as_slice();
    let n = t.len();
    Ok((0..n).map(|k| inst.distance(t[k], t[(k + 1) % n])).sum())
}

impl DiscreteProblem for TspInstance {
    fn universe(&self) -> usize {
        self.n
    }

    fn evaluate(&self, seq: &EventSequence, _threshold: usize) -> Result<f64, ProblemError> {
        tsp_tour_length(self, seq)
    }

    fn move_cost(&self, seq: &EventSequence, _threshold: usize, bait: usize, position: usize, case: BaitCase) -> f64 {
        let t = seq.as_slice();
        let Some(held) = seq.position_of(bait) else {
            return f64::INFINITY;
        };
        match case {
            BaitCase::MissCatch => self.relocate_delta(t, held, position),
            BaitCase::Catch => self.swap_delta(t, held, position),
            BaitCase::FalseCatch => self.relocate_delta(t, position, t.len() - 1),
        }
    }

    fn rotation_scope(&self) -> RotationScope {
        RotationScope::SubRange
    }

    fn cyclic(&self) -> bool {
        true
    }
}
