//! The three foraging operators applied to solution strings, plus the
//! partial-solution (secondary) fitness measures.
//!
//! * **Baiting** applies a held event ("bait") at a position with one of
//!   three outcomes: miss catch (insertion), catch (replacement) or false
//!   catch (removal).
//! * **Change of position** scans a window of the string and returns the
//!   position where the bait is cheapest to apply.
//! * **Attracting prey swarms** keeps the bait position fixed and cyclically
//!   rotates a segment underneath it.
//!
//! On permutation strings every operator repairs its output so that each
//! event still appears exactly once.

use std::ops::Range;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sequence::{EventSequence, SequenceKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("position {position} out of range for string of length {len}")]
    InvalidPosition { position: usize, len: usize },
    #[error("event {event} is not part of the event universe")]
    UnknownEvent { event: usize },
    #[error("change-of-position window is empty")]
    EmptyWindow,
    #[error("shift {shift} must lie in [1, {segment_len})")]
    ShiftOutOfRange { shift: usize, segment_len: usize },
    #[error("segment {start}..{end} does not fit a string of length {len}")]
    InvalidSegment { start: usize, end: usize, len: usize },
    #[error("invalid operator configuration: {0}")]
    InvalidConfig(String),
}

/// Outcome of a baiting step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaitCase {
    /// The bait settles in the string; the excess copy is deleted.
    MissCatch,
    /// The bait replaces the element at the position.
    Catch,
    /// The element at the position is taken without using the bait.
    FalseCatch,
}

impl BaitCase {
    pub const ALL: [BaitCase; 3] = [BaitCase::MissCatch, BaitCase::Catch, BaitCase::FalseCatch];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SecondaryMethod {
    /// Mean per-node linkage score in `[0, 2]`, higher is better.
    NodeLinkage,
    /// Number of maximal linked segments, lower is better.
    SegmentCount,
}

/// Bounds the rotation applied by [`attracting_prey_swarms`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ShiftPolicy {
    /// Uniform in `[1, segment_len - 1]`.
    Uniform,
    /// Uniform in `[1, min(max, segment_len - 1)]`.
    AtMost(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorConfig {
    pub p_miss: f64,
    pub p_catch: f64,
    pub p_false: f64,
    /// Fraction of the string scanned by change of position on long strings.
    pub local_window_frac: f64,
    /// Strings up to this length are scanned in full.
    pub full_scan_len: usize,
    pub max_shift_policy: ShiftPolicy,
    /// Per-agent, per-iteration probability of attracting prey swarms.
    pub p_attract: f64,
    pub secondary_method: SecondaryMethod,
}

impl Default for OperatorConfig {
    fn default() -> Self {
        Self {
            p_miss: 1.0 / 3.0,
            p_catch: 1.0 / 3.0,
            p_false: 1.0 / 3.0,
            local_window_frac: 0.25,
            full_scan_len: 20,
            max_shift_policy: ShiftPolicy::Uniform,
            p_attract: 0.2,
            secondary_method: SecondaryMethod::NodeLinkage,
        }
    }
}

impl OperatorConfig {
    pub fn validate(&self) -> Result<(), OperatorError> {
        let probs = [self.p_miss, self.p_catch, self.p_false];
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(OperatorError::InvalidConfig(
                "case probabilities must lie in [0, 1]".into(),
            ));
        }
        if (probs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(OperatorError::InvalidConfig("case probabilities must sum to 1".into()));
        }
        if !(self.local_window_frac > 0.0 && self.local_window_frac <= 1.0) {
            return Err(OperatorError::InvalidConfig(
                "local_window_frac must lie in (0, 1]".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.p_attract) {
            return Err(OperatorError::InvalidConfig("p_attract must lie in [0, 1]".into()));
        }
        if let ShiftPolicy::AtMost(0) = self.max_shift_policy {
            return Err(OperatorError::InvalidConfig("shift bound must be at least 1".into()));
        }
        Ok(())
    }

    pub fn sample_case<R: Rng + ?Sized>(&self, rng: &mut R) -> BaitCase {
        let u: f64 = rng.random();
        if u < self.p_miss {
            BaitCase::MissCatch
        } else if u < self.p_miss + self.p_catch {
            BaitCase::Catch
        } else {
            BaitCase::FalseCatch
        }
    }

    /// Picks the window scanned by change of position for a string of `len`
    /// positions: the whole string when short, otherwise a random contiguous
    /// block of `ceil(local_window_frac * len)` positions.
    pub fn window<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Range<usize> {
        if len <= self.full_scan_len {
            return 0..len;
        }
        let width = ((self.local_window_frac * len as f64).ceil() as usize).clamp(1, len);
        let start = rng.random_range(0..=len - width);
        start..start + width
    }

    pub fn sample_shift<R: Rng + ?Sized>(&self, segment_len: usize, rng: &mut R) -> Option<usize> {
        if segment_len < 2 {
            return None;
        }
        let hi = match self.max_shift_policy {
            ShiftPolicy::Uniform => segment_len - 1,
            ShiftPolicy::AtMost(m) => m.min(segment_len - 1),
        };
        Some(rng.random_range(1..=hi))
    }
}

/// Applies one baiting outcome at `position`.
///
/// For permutation strings (`universe` events, all present):
/// * miss catch moves the bait so that it ends up at `position`,
/// * catch swaps the bait with the element at `position`,
/// * false catch removes the element at `position` and appends it at the end.
///
/// For path strings the outcomes insert, overwrite and delete respectively,
/// so the string length changes by +1, 0 and -1.
pub fn baiting(
    seq: &EventSequence,
    kind: SequenceKind,
    universe: usize,
    bait: usize,
    position: usize,
    case: BaitCase,
) -> Result<EventSequence, OperatorError> {
    let len = seq.len();
    if position >= len {
        return Err(OperatorError::InvalidPosition { position, len });
    }
    if bait >= universe {
        return Err(OperatorError::UnknownEvent { event: bait });
    }
    let mut out = seq.clone();
    let v = out.vec_mut();
    match kind {
        SequenceKind::Permutation => {
            let held = seq
                .position_of(bait)
                .ok_or(OperatorError::UnknownEvent { event: bait })?;
            match case {
                BaitCase::MissCatch => {
                    let e = v.remove(held);
                    v.insert(position, e);
                }
                BaitCase::Catch => v.swap(position, held),
                BaitCase::FalseCatch => {
                    let e = v.remove(position);
                    v.push(e);
                }
            }
        }
        SequenceKind::Path => match case {
            BaitCase::MissCatch => v.insert(position, bait),
            BaitCase::Catch => v[position] = bait,
            BaitCase::FalseCatch => {
                v.remove(position);
            }
        },
    }
    Ok(out)
}

/// Returns the position in `window` with the lowest local cost.
///
/// Ties go to the lowest index; NaN costs never win.
pub fn change_of_position<F>(window: Range<usize>, mut cost: F) -> Result<usize, OperatorError>
where
    F: FnMut(usize) -> f64,
{
    let mut best: Option<(usize, f64)> = None;
    for pos in window {
        let c = cost(pos);
        let c = if c.is_nan() { f64::INFINITY } else { c };
        match best {
            Some((_, b)) if c >= b => {}
            _ => best = Some((pos, c)),
        }
    }
    best.map(|(p, _)| p).ok_or(OperatorError::EmptyWindow)
}

/// Rotates `segment` right by `shift` places so that a different event
/// lands under `bait_position`. Elements outside the segment are untouched.
pub fn attracting_prey_swarms(
    seq: &EventSequence,
    bait_position: usize,
    shift: usize,
    segment: Range<usize>,
) -> Result<EventSequence, OperatorError> {
    let len = seq.len();
    if segment.start > segment.end || segment.end > len {
        return Err(OperatorError::InvalidSegment {
            start: segment.start,
            end: segment.end,
            len,
        });
    }
    if bait_position >= len {
        return Err(OperatorError::InvalidPosition {
            position: bait_position,
            len,
        });
    }
    let segment_len = segment.len();
    if shift == 0 || shift >= segment_len {
        return Err(OperatorError::ShiftOutOfRange { shift, segment_len });
    }
    let mut out = seq.clone();
    out.as_mut_slice()[segment].rotate_right(shift);
    Ok(out)
}

fn node_links<'a, F>(events: &'a [usize], cyclic: bool, linked: &'a F) -> impl Iterator<Item = u8> + 'a
where
    F: Fn(usize, usize) -> bool,
{
    let n = events.len();
    (0..n).map(move |i| {
        let left = if i > 0 {
            Some(events[i - 1])
        } else if cyclic && n > 1 {
            Some(events[n - 1])
        } else {
            None
        };
        let right = if i + 1 < n {
            Some(events[i + 1])
        } else if cyclic && n > 1 {
            Some(events[0])
        } else {
            None
        };
        let l = left.is_some_and(|p| linked(p, events[i])) as u8;
        let r = right.is_some_and(|q| linked(events[i], q)) as u8;
        l + r
    })
}

/// Mean node value, where each node scores 0, 1 or 2 for the number of its
/// sides linked to a neighbour. Returns a value in `[0, 2]`.
pub fn secondary_fitness_linkage<F>(seq: &EventSequence, cyclic: bool, linked: F) -> f64
where
    F: Fn(usize, usize) -> bool,
{
    let n = seq.len();
    if n == 0 {
        return 0.0;
    }
    let total: u32 = node_links(seq.as_slice(), cyclic, &linked).map(u32::from).sum();
    total as f64 / n as f64
}

/// Number of maximal linked segments in the string (1 when fully linked).
pub fn secondary_fitness_segments<F>(seq: &EventSequence, cyclic: bool, linked: F) -> usize
where
    F: Fn(usize, usize) -> bool,
{
    let e = seq.as_slice();
    let n = e.len();
    if n == 0 {
        return 0;
    }
    let open_breaks = e.windows(2).filter(|w| !linked(w[0], w[1])).count();
    if cyclic && n > 1 {
        let breaks = open_breaks + usize::from(!linked(e[n - 1], e[0]));
        breaks.max(1)
    } else {
        open_breaks + 1
    }
}

/// Draws baits, steering away from events that have been drawn most often.
///
/// Two candidates are drawn uniformly and the one drawn fewer times so far
/// wins (lowest id on a tie).
#[derive(Clone, Debug)]
pub struct BaitSelector {
    counts: Vec<u64>,
}

impl BaitSelector {
    pub fn new(universe: usize) -> Self {
        Self {
            counts: vec![0; universe],
        }
    }

    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        let n = self.counts.len();
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        let pick = match self.counts[a].cmp(&self.counts[b]) {
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Equal => a.min(b),
        };
        self.counts[pick] += 1;
        pick
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
}
