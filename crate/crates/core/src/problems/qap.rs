use serde::{Deserialize, Serialize};

use super::ProblemError;
use crate::engine::{DiscreteProblem, RotationScope};
use crate::operators::BaitCase;
use crate::sequence::EventSequence;

/// Quadratic assignment instance. `perm[i]` is the location of facility `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QapInstance {
    pub name: String,
    pub n: usize,
    /// Row-major `n*n` flow matrix.
    pub flow: Vec<i64>,
    /// Row-major `n*n` distance matrix.
    pub dist: Vec<i64>,
    pub best_known: Option<i64>,
}

impl QapInstance {
    pub fn new(name: impl Into<String>, n: usize, flow: Vec<i64>, dist: Vec<i64>) -> Result<Self, ProblemError> {
        for m in [&flow, &dist] {
            if m.len() != n * n {
                return Err(ProblemError::DimensionMismatch {
                    expected: n * n,
                    got: m.len(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            n,
            flow,
            dist,
            best_known: None,
        })
    }

    pub fn with_best_known(mut self, value: Option<i64>) -> Self {
        self.best_known = value;
        self
    }

    #[inline]
    pub fn f(&self, i: usize, j: usize) -> i64 {
        self.flow[i * self.n + j]
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> i64 {
        self.dist[i * self.n + j]
    }

    /// Cost change from exchanging the locations of facilities `r` and `s`.
    pub fn swap_delta(&self, p: &[usize], r: usize, s: usize) -> i64 {
        if r == s {
            return 0;
        }
        let (pr, ps) = (p[r], p[s]);
        let mut delta = self.f(r, r) * (self.d(ps, ps) - self.d(pr, pr))
            + self.f(r, s) * (self.d(ps, pr) - self.d(pr, ps))
            + self.f(s, r) * (self.d(pr, ps) - self.d(ps, pr))
            + self.f(s, s) * (self.d(pr, pr) - self.d(ps, ps));
        for (k, &pk) in p.iter().enumerate() {
            if k == r || k == s {
                continue;
            }
            delta += self.f(k, r) * (self.d(pk, ps) - self.d(pk, pr))
                + self.f(k, s) * (self.d(pk, pr) - self.d(pk, ps))
                + self.f(r, k) * (self.d(ps, pk) - self.d(pr, pk))
                + self.f(s, k) * (self.d(pr, pk) - self.d(ps, pk));
        }
        delta
    }
}

fn cost_unchecked(inst: &QapInstance, p: &[usize]) -> i64 {
    let n = inst.n;
    let mut total = 0;
    for i in 0..n {
        let row = &inst.flow[i * n..(i + 1) * n];
        let drow = &inst.dist[p[i] * n..(p[i] + 1) * n];
        for j in 0..n {
            total += row[j] * drow[p[j]];
        }
    }
    total
}

/// `sum_ij flow[i][j] * dist[perm(i)][perm(j)]`.
pub fn qap_cost(inst: &QapInstance, perm: &EventSequence) -> Result<i64, ProblemError> {
    if !perm.is_permutation_of(inst.n) {
        return Err(ProblemError::InvalidPermutation { n: inst.n });
    }
    Ok(cost_unchecked(inst, perm.as_slice()))
}

impl DiscreteProblem for QapInstance {
    fn universe(&self) -> usize {
        self.n
    }

    fn evaluate(&self, seq: &EventSequence, _threshold: usize) -> Result<f64, ProblemError> {
        qap_cost(self, seq).map(|c| c as f64)
    }

    fn move_cost(&self, seq: &EventSequence, _threshold: usize, bait: usize, position: usize, case: BaitCase) -> f64 {
        let p = seq.as_slice();
        let Some(held) = seq.position_of(bait) else {
            return f64::INFINITY;
        };
        match case {
            BaitCase::Catch => self.swap_delta(p, held, position) as f64,
            BaitCase::MissCatch | BaitCase::FalseCatch => {
                let mut q = p.to_vec();
                if case == BaitCase::MissCatch {
                    let e = q.remove(held);
                    q.insert(position, e);
                } else {
                    let e = q.remove(position);
                    q.push(e);
                }
                cost_unchecked(self, &q) as f64
            }
        }
    }

    fn rotation_scope(&self) -> RotationScope {
        RotationScope::Whole
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> QapInstance {
        QapInstance::new(
            "toy",
            3,
            vec![0, 5, 2, 5, 0, 3, 2, 3, 0],
            vec![0, 8, 15, 8, 0, 13, 15, 13, 0],
        )
        .unwrap()
    }

    #[test]
    fn zero_flow_costs_nothing() {
        let inst = QapInstance::new("z", 3, vec![0; 9], vec![1; 9]).unwrap();
        assert_eq!(qap_cost(&inst, &EventSequence::new(vec![2, 0, 1])).unwrap(), 0);
    }

    #[test]
    fn identity_is_elementwise_product() {
        let inst = toy();
        let direct: i64 = inst.flow.iter().zip(&inst.dist).map(|(a, b)| a * b).sum();
        assert_eq!(qap_cost(&inst, &EventSequence::identity(3)).unwrap(), direct);
    }

    #[test]
    fn permutation_required() {
        assert_eq!(
            qap_cost(&toy(), &EventSequence::new(vec![0, 0, 1])),
            Err(ProblemError::InvalidPermutation { n: 3 })
        );
        assert!(QapInstance::new("x", 2, vec![0; 4], vec![0; 3]).is_err());
    }

    #[test]
    fn swap_delta_matches_recomputation_with_asymmetric_data() {
        let n = 6;
        let flow: Vec<i64> = (0..n * n).map(|k| ((k * 7 + 3) % 11) as i64).collect();
        let dist: Vec<i64> = (0..n * n).map(|k| ((k * 5 + 1) % 13) as i64).collect();
        let inst = QapInstance::new("a", n, flow, dist).unwrap();
        let p = vec![4, 1, 5, 0, 3, 2];
        let base = cost_unchecked(&inst, &p);
        for r in 0..n {
            for s in 0..n {
                let mut q = p.clone();
                q.swap(r, s);
                assert_eq!(cost_unchecked(&inst, &q) - base, inst.swap_delta(&p, r, s));
            }
        }
    }
}
