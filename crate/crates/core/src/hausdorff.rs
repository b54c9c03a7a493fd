//! Hausdorff distance between interval unions and the continuity scan over `t`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::TimeParam;
use crate::interval::IntervalUnion;
use crate::measure::Measure;
use crate::numerics::Numerics;
use crate::support::{snapshot, vanishing_times};

/// Rows whose distance exceeds this multiple of the local median get refined.
pub const REFINE_TRIGGER: f64 = 5.0;

/// Half-width (in rows) of the window used for the local median.
const LOCAL_WINDOW: usize = 5;

/// `sup_{a ∈ A} d(a, B)`.
///
/// `d(·, B)` is piecewise linear with local maxima only at midpoints of the
/// gaps of `B`, so it suffices to look at the endpoints of `A` and the gap
/// midpoints of `B` that fall inside `A`.
pub fn directed(a: &IntervalUnion, b: &IntervalUnion) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut d: f64 = 0.0;
    for iv in a.intervals() {
        d = d.max(b.distance(iv.lo)).max(b.distance(iv.hi));
    }
    for (l, r) in b.gaps() {
        let mid = 0.5 * (l + r);
        if a.contains(mid) {
            d = d.max(0.5 * (r - l));
        }
    }
    Ok(d)
}

/// Hausdorff distance `max(sup_A d(·, B), sup_B d(·, A))`.
pub fn hausdorff(a: &IntervalUnion, b: &IntervalUnion) -> Result<f64> {
    Ok(directed(a, b)?.max(directed(b, a)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub t: f64,
    pub r: f64,
    pub d_h: f64,
    pub refined: bool,
    pub atom_vanishing_nearby: bool,
}

/// Hausdorff distances between supports at neighbouring times.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ContinuityTable {
    pub rows: Vec<ScanRow>,
    /// Median of the rows on the unrefined grid.
    pub base_median: f64,
}

impl ContinuityTable {
    pub fn max_distance(&self) -> f64 {
        self.rows.iter().map(|r| r.d_h).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,r,d_h,flags\n");
        for row in &self.rows {
            let mut flags = Vec::new();
            if row.refined {
                flags.push("refined");
            }
            if row.atom_vanishing_nearby {
                flags.push("atom_vanishing_nearby");
            }
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.t,
                row.r,
                row.d_h,
                flags.join(";")
            ));
        }
        out
    }
}

fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Supports of `μ_t` keyed by `t`, so nested scans reuse snapshots.
#[derive(Debug, Default)]
pub struct SupportCache {
    map: HashMap<u64, IntervalUnion>,
}

impl SupportCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Supports at every `t` in `ts`, computing missing ones in parallel.
    pub fn supports(
        &mut self,
        m: &Measure,
        ts: &[f64],
        num: &Numerics,
    ) -> Result<Vec<IntervalUnion>> {
        let mut missing: Vec<f64> = ts
            .iter()
            .copied()
            .filter(|t| !self.map.contains_key(&t.to_bits()))
            .collect();
        missing.sort_by(f64::total_cmp);
        missing.dedup();
        let computed = missing
            .par_iter()
            .map(|&t| Ok((t, snapshot(m, TimeParam::new(t)?, num)?.support())))
            .collect::<Result<Vec<_>>>()?;
        for (t, s) in computed {
            self.map.insert(t.to_bits(), s);
        }
        Ok(ts.iter().map(|t| self.map[&t.to_bits()].clone()).collect())
    }
}

/// Uniform grid of `steps` times on `[t_lo, t_hi]`.
pub fn time_grid(t_lo: f64, t_hi: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| {
            if i == steps - 1 {
                t_hi
            } else {
                t_lo + (t_hi - t_lo) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

/// Scans `d_H(supp μ_t, supp μ_r)` over adjacent times of a uniform grid,
/// bisecting rows that stand out from their neighbourhood.
pub fn continuity_scan(
    m: &Measure,
    t_lo: f64,
    t_hi: f64,
    steps: usize,
    refine_depth: usize,
    num: &Numerics,
) -> Result<ContinuityTable> {
    continuity_scan_cached(
        m,
        t_lo,
        t_hi,
        steps,
        refine_depth,
        num,
        &mut SupportCache::new(),
    )
}

pub fn continuity_scan_cached(
    m: &Measure,
    t_lo: f64,
    t_hi: f64,
    steps: usize,
    refine_depth: usize,
    num: &Numerics,
    cache: &mut SupportCache,
) -> Result<ContinuityTable> {
    TimeParam::new(t_lo)?;
    if !(t_hi > t_lo) || !t_hi.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "need t_lo < t_hi, got {t_lo} and {t_hi}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    num.validate()?;

    let ts = time_grid(t_lo, t_hi, steps);
    let supports = cache.supports(m, &ts, num)?;
    let base: Vec<f64> = supports
        .windows(2)
        .map(|w| hausdorff(&w[0], &w[1]))
        .collect::<Result<_>>()?;
    let base_median = median(&base);
    let vanish = vanishing_times(m);
    let near_vanishing = |a: f64, b: f64| vanish.iter().any(|&v| a - 1e-12 <= v && v <= b + 1e-12);

    let mut rows = Vec::new();
    for (i, &d) in base.iter().enumerate() {
        let lo = i.saturating_sub(LOCAL_WINDOW);
        let hi = (i + LOCAL_WINDOW + 1).min(base.len());
        let local = median(&base[lo..hi]);
        let threshold = REFINE_TRIGGER * local;
        let (a, b) = (ts[i], ts[i + 1]);
        if refine_depth > 0 && d > threshold {
            refine(
                m,
                (a, b),
                (&supports[i], &supports[i + 1]),
                threshold,
                refine_depth,
                num,
                cache,
                &mut rows,
            )?;
        } else {
            rows.push(ScanRow {
                t: a,
                r: b,
                d_h: d,
                refined: false,
                atom_vanishing_nearby: false,
            });
        }
    }
    for row in &mut rows {
        row.atom_vanishing_nearby = near_vanishing(row.t, row.r);
    }
    rows.sort_by(|x, y| x.t.total_cmp(&y.t));
    Ok(ContinuityTable { rows, base_median })
}

#[allow(clippy::too_many_arguments)]
fn refine(
    m: &Measure,
    (a, b): (f64, f64),
    (sa, sb): (&IntervalUnion, &IntervalUnion),
    threshold: f64,
    depth: usize,
    num: &Numerics,
    cache: &mut SupportCache,
    rows: &mut Vec<ScanRow>,
) -> Result<()> {
    let mid = 0.5 * (a + b);
    let sm = cache.supports(m, &[mid], num)?.remove(0);
    for (lo, hi, s_lo, s_hi) in [(a, mid, sa, &sm), (mid, b, &sm, sb)] {
        let d = hausdorff(s_lo, s_hi)?;
        if depth > 1 && d > threshold {
            refine(
                m,
                (lo, hi),
                (s_lo, s_hi),
                threshold,
                depth - 1,
                num,
                cache,
                rows,
            )?;
        } else {
            rows.push(ScanRow {
                t: lo,
                r: hi,
                d_h: d,
                refined: true,
                atom_vanishing_nearby: false,
            });
        }
    }
    Ok(())
}
