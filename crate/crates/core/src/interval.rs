//! Finite unions of closed intervals on the real line.

use serde::{Deserialize, Serialize};

/// A closed interval `[lo, hi]`; `lo == hi` is an isolated point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Self {
        Interval {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Distance from `x` to the interval (zero inside).
    pub fn distance(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }
}

/// Sorted, pairwise disjoint closed intervals with positive gaps between them.
///
/// Construction always normalizes: intervals are sorted and any two that
/// overlap or touch are merged.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Interval>", into = "Vec<Interval>")]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl From<Vec<Interval>> for IntervalUnion {
    fn from(v: Vec<Interval>) -> Self {
        IntervalUnion::new(v)
    }
}

impl From<IntervalUnion> for Vec<Interval> {
    fn from(u: IntervalUnion) -> Self {
        u.intervals
    }
}

impl IntervalUnion {
    pub fn new(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut v: Vec<Interval> = intervals
            .into_iter()
            .filter(|i| i.lo.is_finite() && i.hi.is_finite())
            .map(|i| Interval::new(i.lo, i.hi))
            .collect();
        v.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(v.len());
        for iv in v {
            match out.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => out.push(iv),
            }
        }
        IntervalUnion { intervals: out }
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        Self::new(pairs.iter().map(|&(a, b)| Interval::new(a, b)))
    }

    pub fn empty() -> Self {
        IntervalUnion::default()
    }

    /// Re-runs normalization; a no-op for any value built through [`IntervalUnion::new`].
    pub fn normalize(&self) -> Self {
        IntervalUnion::new(self.intervals.iter().copied())
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn lo(&self) -> Option<f64> {
        self.intervals.first().map(|i| i.lo)
    }

    pub fn hi(&self) -> Option<f64> {
        self.intervals.last().map(|i| i.hi)
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::new(self.intervals.iter().chain(other.intervals.iter()).copied())
    }

    pub fn with_points(&self, points: impl IntoIterator<Item = f64>) -> IntervalUnion {
        IntervalUnion::new(
            self.intervals
                .iter()
                .copied()
                .chain(points.into_iter().map(Interval::point)),
        )
    }

    /// Total length (Lebesgue measure).
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::len).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.distance(x) == 0.0
    }

    /// Distance from `x` to the union; `+inf` when empty.
    pub fn distance(&self, x: f64) -> f64 {
        let iv = &self.intervals;
        if iv.is_empty() {
            return f64::INFINITY;
        }
        // first interval whose hi >= x
        let k = iv.partition_point(|i| i.hi < x);
        let mut d = f64::INFINITY;
        if k < iv.len() {
            d = d.min(iv[k].distance(x));
        }
        if k > 0 {
            d = d.min(iv[k - 1].distance(x));
        }
        d
    }

    /// Every point of `other` lies within `tol` of `self`.
    pub fn covers(&self, other: &IntervalUnion, tol: f64) -> bool {
        other.intervals.iter().all(|o| {
            // `o` must sit inside one interval of `self` widened by tol
            self.intervals
                .iter()
                .any(|s| s.lo - tol <= o.lo && o.hi <= s.hi + tol)
        })
    }

    /// Open gaps between consecutive intervals, as `(left, right)` pairs.
    pub fn gaps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.intervals.windows(2).map(|w| (w[0].hi, w[1].lo))
    }
}
