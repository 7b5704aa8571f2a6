use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::ProblemError;

/// Identifier `f1` to `f25` of a benchmark function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BenchmarkId(u8);

impl BenchmarkId {
    pub const COUNT: u8 = 25;

    pub fn new(k: u8) -> Option<Self> {
        (1..=Self::COUNT).contains(&k).then_some(Self(k))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = BenchmarkId> {
        (1..=Self::COUNT).map(BenchmarkId)
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

impl FromStr for BenchmarkId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.strip_prefix(['f', 'F'])
            .and_then(|k| k.parse().ok())
            .and_then(Self::new)
            .ok_or_else(|| format!("unknown benchmark `{s}` (expected f1..f25)"))
    }
}

impl TryFrom<String> for BenchmarkId {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<BenchmarkId> for String {
    fn from(id: BenchmarkId) -> Self {
        id.to_string()
    }
}

/// A benchmark function with its dimension and box bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Benchmark {
    pub id: BenchmarkId,
    pub dim: usize,
    pub bounds: Vec<(f64, f64)>,
}

fn default_dim(k: u8) -> usize {
    match k {
        1..=5 | 9 | 12 => 10,
        11 => 4,
        15..=21 => 1,
        _ => 2,
    }
}

fn scalable(k: u8) -> bool {
    matches!(k, 1..=5 | 9 | 12)
}

fn bounds_of(k: u8, dim: usize) -> Vec<(f64, f64)> {
    let uniform = |lo: f64, hi: f64| vec![(lo, hi); dim];
    match k {
        1..=4 | 9 | 13 => uniform(-20.0, 20.0),
        5 => uniform(-5.12, 5.12),
        6 => uniform(-5.0, 5.0),
        7 => vec![(-5.0, 10.0), (0.0, 15.0)],
        8 => uniform(-2.0, 2.0),
        10 => uniform(-4.5, 4.5),
        11 | 22 | 25 => uniform(-10.0, 10.0),
        12 => uniform(-1.28, 1.28),
        14 => vec![(-1.5, 4.0), (-3.0, 3.0)],
        15 | 16 => uniform(0.0, 20.0),
        17 => uniform(0.0, 30.0),
        18..=21 => uniform(0.0, 1.0),
        // The published lower bound of x1 lacks its sign.
        23 => vec![(-1.9, 1.9), (-1.1, 1.1)],
        24 => uniform(0.0, PI),
        _ => unreachable!("benchmark ids are validated"),
    }
}

fn sin6(x: f64) -> f64 {
    x.sin().powi(6)
}

fn camel(x1: f64, x2: f64) -> f64 {
    4.0 * x1 * x1 - 2.1 * x1.powi(4) + x1.powi(6) / 3.0 + x1 * x2 - 4.0 * x2 * x2 + 4.0 * x2.powi(4)
}

fn two_peak(x: f64) -> f64 {
    if x < 15.0 {
        160.0 / 15.0 * (15.0 - x)
    } else {
        200.0 / 5.0 * (x - 15.0)
    }
}

fn central_two_peak(x: f64) -> f64 {
    if x < 10.0 {
        160.0 / 10.0 * x
    } else if x < 15.0 {
        160.0 / 5.0 * (15.0 - x)
    } else {
        200.0 / 5.0 * (x - 15.0)
    }
}

fn five_uneven_peak(x: f64) -> f64 {
    if x < 2.5 {
        80.0 * (2.5 - x)
    } else if x < 5.0 {
        64.0 * (x - 2.5)
    } else if x <= 7.5 {
        64.0 * (7.5 - x)
    } else if x < 12.5 {
        28.0 * (x - 7.5)
    } else if x < 17.5 {
        28.0 * (17.5 - x)
    } else if x < 22.5 {
        32.0 * (x - 17.5)
    } else if x < 27.5 {
        32.0 * (27.5 - x)
    } else {
        80.0 * (x - 27.5)
    }
}

impl Benchmark {
    /// The function at its tabulated dimension.
    pub fn new(id: BenchmarkId) -> Self {
        let dim = default_dim(id.0);
        Self {
            id,
            dim,
            bounds: bounds_of(id.0, dim),
        }
    }

    /// The function at another dimension; only the dimension-free forms
    /// (f1 to f5, f9, f12) accept one that differs from the table.
    pub fn with_dim(id: BenchmarkId, dim: usize) -> Result<Self, ProblemError> {
        let expected = default_dim(id.0);
        if dim == 0 || (dim != expected && !scalable(id.0)) {
            return Err(ProblemError::DimensionMismatch { expected, got: dim });
        }
        Ok(Self {
            id,
            dim,
            bounds: bounds_of(id.0, dim),
        })
    }

    pub fn name(&self) -> String {
        self.id.to_string()
    }

    /// Tabulated optimum value.
    pub fn optimum(&self) -> f64 {
        match self.id.0 {
            6 | 23 => -1.03163,
            7 => 0.398,
            8 => 3.0,
            13 => -24777.0,
            14 => -1.9133,
            _ => 0.0,
        }
    }

    /// A point where the function attains (or is closest to) its optimum.
    pub fn known_optimizer(&self) -> Vec<f64> {
        let d = self.dim;
        match self.id.0 {
            3 | 11 => vec![1.0; d],
            4 => vec![0.5; d],
            6 | 23 => vec![0.08984201, -0.71265640],
            7 => vec![PI, 2.275],
            8 => vec![0.0, -1.0],
            10 => vec![3.0, 0.5],
            13 => vec![0.0, 14.945_112_794_4],
            14 => vec![-0.54719, -1.54719],
            15 => vec![15.0],
            17 => vec![2.5],
            20 | 21 => vec![0.05f64.powf(4.0 / 3.0)],
            22 => vec![3.0, 2.0],
            _ => vec![0.0; d],
        }
    }

    /// Checks dimension and bounds, then evaluates. `rng` feeds the additive
    /// noise term of f12 and is not touched by the other functions.
    pub fn evaluate(&self, x: &[f64], rng: &mut dyn RngCore) -> Result<f64, ProblemError> {
        if x.len() != self.dim {
            return Err(ProblemError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        for (index, (&value, &(lo, hi))) in x.iter().zip(&self.bounds).enumerate() {
            if !(lo..=hi).contains(&value) {
                return Err(ProblemError::OutOfBounds { index, value, lo, hi });
            }
        }
        Ok(self.value(x, rng))
    }

    /// Closed-form value without bounds checks.
    pub fn value(&self, x: &[f64], rng: &mut dyn RngCore) -> f64 {
        let sq = |v: f64| v * v;
        match self.id.0 {
            1 => x.iter().map(|v| v * v).sum(),
            2 => x.iter().map(|v| v.abs()).sum::<f64>() + x.iter().map(|v| v.abs()).product::<f64>(),
            3 => x
                .windows(2)
                .map(|w| 100.0 * sq(w[1] - w[0] * w[0]) + sq(w[0] - 1.0))
                .sum(),
            4 => x.iter().map(|v| sq(v - 0.5)).sum(),
            5 => x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0).sum(),
            6 | 23 => camel(x[0], x[1]),
            7 => {
                let (x1, x2) = (x[0], x[1]);
                sq(x2 - 5.1 / (4.0 * PI * PI) * x1 * x1 + 5.0 / PI * x1 - 6.0)
                    + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * x1.cos()
                    + 10.0
            }
            8 => {
                let (x1, x2) = (x[0], x[1]);
                let a = 1.0
                    + sq(x1 + x2 + 1.0)
                        * (19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2);
                let b = 30.0
                    + sq(2.0 * x1 - 3.0 * x2)
                        * (18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2);
                a * b
            }
            9 => x
                .iter()
                .scan(0.0, |acc, v| {
                    *acc += v;
                    Some(*acc * *acc)
                })
                .sum(),
            10 => {
                let (x1, x2) = (x[0], x[1]);
                sq(1.5 - x1 * (1.0 - x2)) + sq(2.25 - x1 * (1.0 - x2 * x2)) + sq(2.625 - x1 * (1.0 - x2.powi(3)))
            }
            11 => {
                let (x1, x2, x3, x4) = (x[0], x[1], x[2], x[3]);
                100.0 * sq(x2 - x1 * x1)
                    + sq(1.0 - x1)
                    + 90.0 * sq(x4 - x3 * x3)
                    + sq(1.0 - x3)
                    + 10.1 * (sq(x2 - 1.0) + sq(x4 - 1.0))
                    + 19.8 * (x2 - 1.0) * (x4 - 1.0)
            }
            12 => {
                let s: f64 = x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v.powi(4)).sum();
                s + rng.random::<f64>()
            }
            13 => {
                let r = x[0] * x[0] + x[1] * x[1];
                1e5 * x[0] * x[0] + x[1] * x[1] - r * r + 1e-5 * r.powi(4)
            }
            14 => (x[0] + x[1]).sin() + sq(x[0] - x[1]) - 1.5 * x[0] + 2.5 * x[1] + 1.0,
            15 => two_peak(x[0]),
            16 => central_two_peak(x[0]),
            17 => five_uneven_peak(x[0]),
            18 => sin6(5.0 * PI * x[0]),
            19 => (-2.0 * 2f64.ln() * sq((x[0] - 0.1) / 0.8)).exp() * sin6(5.0 * PI * x[0]),
            20 => sin6(5.0 * PI * (x[0].powf(0.75) - 0.05)),
            21 => (-2.0 * 2f64.ln() * sq((x[0] - 0.08) / 0.854)).exp() * sin6(5.0 * PI * (x[0].powf(0.75) - 0.05)),
            22 => sq(x[0] * x[0] + x[1] - 11.0) + sq(x[0] + x[1] * x[1] - 7.0),
            24 => x[0].sin() * sq((x[0] * x[0] / PI).sin()) + x[1].sin() * sq((2.0 * x[1] * x[1] / PI).sin()),
            25 => 0.26 * (x[0] * x[0] + x[1] * x[1]) - 0.48 * x[0] * x[1],
            _ => unreachable!("benchmark ids are validated"),
        }
    }
}
