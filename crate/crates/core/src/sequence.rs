//! Solution strings: ordered lists of discrete events.

use std::fmt;

use serde::{Deserialize, Serialize};

/// How a problem interprets its solution strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceKind {
    /// Every event of the universe appears exactly once (TSP, QAP, knapsack).
    Permutation,
    /// A variable-length node path; events may be absent.
    Path,
}

/// An ordered string of event identifiers.
///
/// Events are stored zero-based. Instance files and reports use one-based
/// ids, so conversion helpers are provided for both directions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventSequence(Vec<usize>);

impl EventSequence {
    pub fn new(events: Vec<usize>) -> Self {
        Self(events)
    }

    /// The identity permutation `0, 1, .., n-1`.
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Builds a sequence from one-based ids. Panics on a zero id.
    pub fn from_one_based(events: &[usize]) -> Self {
        Self(
            events
                .iter()
                .map(|&e| e.checked_sub(1).expect("one-based event ids start at 1"))
                .collect(),
        )
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&e| e + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [usize] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    pub fn position_of(&self, event: usize) -> Option<usize> {
        self.0.iter().position(|&e| e == event)
    }

    /// True when the string holds each of `0..n` exactly once.
    pub fn is_permutation_of(&self, n: usize) -> bool {
        if self.0.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &e in &self.0 {
            if e >= n || seen[e] {
                return false;
            }
            seen[e] = true;
        }
        true
    }

    pub(crate) fn vec_mut(&mut self) -> &mut Vec<usize> {
        &mut self.0
    }
}

impl From<Vec<usize>> for EventSequence {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

impl std::ops::Index<usize> for EventSequence {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl fmt::Display for EventSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", e + 1)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_based_round_trip() {
        let s = EventSequence::from_one_based(&[3, 1, 2]);
        assert_eq!(s.as_slice(), &[2, 0, 1]);
        assert_eq!(s.to_one_based(), vec![3, 1, 2]);
        assert_eq!(s.to_string(), "[3 1 2]");
    }

    #[test]
    fn permutation_check() {
        assert!(EventSequence::identity(4).is_permutation_of(4));
        assert!(!EventSequence::new(vec![0, 0, 1]).is_permutation_of(3));
        assert!(!EventSequence::new(vec![0, 1, 3]).is_permutation_of(3));
        assert!(!EventSequence::new(vec![0, 1]).is_permutation_of(3));
    }
}
