//! The boundary function `f_t` and the open set `V_t+ = {g > 1/(t-1)}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::measure::Measure;
use crate::numerics::Numerics;
use crate::roots::{bisect, illinois};
use crate::transforms::nevanlinna_h;

/// Semigroup time `t > 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct TimeParam(f64);

impl TimeParam {
    pub fn new(t: f64) -> Result<Self> {
        if t.is_finite() && t > 1.0 {
            Ok(TimeParam(t))
        } else {
            Err(Error::InvalidTime(t))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `1/(t-1)`.
    pub fn threshold(self) -> f64 {
        1.0 / (self.0 - 1.0)
    }
}

impl TryFrom<f64> for TimeParam {
    type Error = Error;
    fn try_from(t: f64) -> Result<Self> {
        TimeParam::new(t)
    }
}

impl From<TimeParam> for f64 {
    fn from(t: TimeParam) -> f64 {
        t.0
    }
}

/// Samples of `x ↦ f_t(x)` over one component of `V_t+`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryGraph {
    pub component: Interval,
    /// `(x, f_t(x))` at Chebyshev–Lobatto nodes, `x` increasing.
    pub samples: Vec<(f64, f64)>,
}

/// `V_t+` membership: `h(x, y_floor) > 1/(t-1)`. Since `h` only grows as
/// `y ↓ 0` this never reports a point that is not in `V_t+`.
pub fn in_v_plus(m: &Measure, t: TimeParam, x: f64, num: &Numerics) -> bool {
    nevanlinna_h(m, x, num.y_floor) > t.threshold()
}

/// `f_t(x) = inf{y : h(x, y) <= 1/(t-1)}`; zero off `V_t+`.
pub fn f_t(m: &Measure, t: TimeParam, x: f64, num: &Numerics) -> f64 {
    let tau = t.threshold();
    if nevanlinna_h(m, x, num.y_floor) <= tau {
        return 0.0;
    }
    let mut y_max = m.diameter() + 2.0;
    for _ in 0..200 {
        if nevanlinna_h(m, x, y_max) < tau {
            break;
        }
        y_max *= 2.0;
    }
    // h ≈ c / y² away from the axis, so solve in log y
    let ln_tau = tau.ln();
    let (lo, hi) = illinois(
        num.y_floor.ln(),
        y_max.ln(),
        |s| nevanlinna_h(m, x, s.exp()).max(1e-300).ln() - ln_tau,
        |a, b| b.exp() - a.exp() <= num.root_tol,
    );
    0.5 * (lo.exp() + hi.exp())
}

/// Closed window guaranteed to contain `V_t+`.
///
/// `ρ` lives in the hull of `supp μ` and has total `(1+s²)`-weighted mass
/// equal to the variance `σ²`, so `g(x) <= σ²/d²` at distance `d` from the
/// hull and `V_t+` stays within `σ √(t-1)` of it.
pub fn scan_window(m: &Measure, t: TimeParam) -> (f64, f64) {
    let (lo, hi) = m.hull();
    let reach = m.variance().max(0.0).sqrt() * (t.get() - 1.0).sqrt();
    let margin = (1.0 + (hi - lo)).max(1.0 + 1.01 * reach);
    (lo - margin, hi + margin)
}

/// Components of `V_t+` resolved on a uniform grid of `grid_n` points, as
/// closed intervals. Components narrower than the grid spacing can be missed.
pub fn v_plus(m: &Measure, t: TimeParam, grid_n: usize, num: &Numerics) -> IntervalUnion {
    let (wlo, whi) = scan_window(m, t);
    let n = grid_n.max(2);
    let step = (whi - wlo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| wlo + step * i as f64).collect();
    let inside: Vec<bool> = xs.par_iter().map(|&x| in_v_plus(m, t, x, num)).collect();

    let edge = |a: usize, b: usize| {
        // inside at a, outside at b
        let (x_in, _) = bisect(xs[a], xs[b], num.edge_tol, |x| in_v_plus(m, t, x, num));
        x_in
    };

    let mut runs = Vec::new();
    let mut i = 0;
    while i < n {
        if !inside[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < n && inside[i + 1] {
            i += 1;
        }
        runs.push((start, i));
        i += 1;
    }
    let comps: Vec<Interval> = runs
        .par_iter()
        .map(|&(s, e)| {
            let lo = if s == 0 { xs[0] } else { edge(s, s - 1) };
            let hi = if e == n - 1 {
                xs[n - 1]
            } else {
                edge(e, e + 1)
            };
            Interval::new(lo, hi)
        })
        .collect();
    IntervalUnion::new(comps)
}

/// [`v_plus`] at `grid_n`, plus whether doubling the grid changes the
/// number of components.
pub fn v_plus_checked(
    m: &Measure,
    t: TimeParam,
    grid_n: usize,
    num: &Numerics,
) -> (IntervalUnion, bool) {
    let coarse = v_plus(m, t, grid_n, num);
    let fine = v_plus(m, t, 2 * grid_n, num);
    let changed = coarse.len() != fine.len();
    (coarse, changed)
}

/// Chebyshev–Lobatto nodes on `[lo, hi]`, increasing, endpoints included.
pub fn chebyshev_nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    (0..n)
        .map(|k| {
            if k == 0 {
                lo
            } else if k == n - 1 {
                hi
            } else {
                let theta = std::f64::consts::PI * k as f64 / (n - 1) as f64;
                mid - half * theta.cos()
            }
        })
        .collect()
}

/// `f_t` sampled over a component of `V_t+`; endpoints carry `f = 0`.
pub fn boundary_graph(
    m: &Measure,
    t: TimeParam,
    component: Interval,
    samples_n: usize,
    num: &Numerics,
) -> BoundaryGraph {
    let n = samples_n.max(3);
    let xs = chebyshev_nodes(component.lo, component.hi, n);
    let samples = xs
        .par_iter()
        .enumerate()
        .map(|(k, &x)| {
            let f = if k == 0 || k == n - 1 {
                0.0
            } else {
                f_t(m, t, x, num)
            };
            (x, f)
        })
        .collect();
    BoundaryGraph { component, samples }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{validate, Atom, MeasureSpec};

    fn bernoulli() -> Measure {
        validate(&MeasureSpec {
            atoms: vec![Atom { x: -1.0, m: 0.5 }, Atom { x: 1.0, m: 0.5 }],
            segments: vec![],
        })
        .unwrap()
    }

    #[test]
    fn time_param_rejects_t_at_most_one() {
        assert!(TimeParam::new(1.0).is_err());
        assert!(TimeParam::new(f64::NAN).is_err());
        assert_eq!(TimeParam::new(3.0).unwrap().threshold(), 0.5);
    }

    #[test]
    fn bernoulli_boundary_is_a_circle() {
        // ρ = δ_0, so h(x, y) = 1/(x² + y²) and f_t(x) = √(t-1-x²)
        let m = bernoulli();
        let num = Numerics::default();
        let t = TimeParam::new(1.5).unwrap();
        for &x in &[0.0, 0.3, -0.6] {
            let want = (0.5f64 - x * x).sqrt();
            assert!((f_t(&m, t, x, &num) - want).abs() < 1e-11);
        }
        assert_eq!(f_t(&m, t, 0.8, &num), 0.0);
    }

    #[test]
    fn bernoulli_v_plus_single_component() {
        let m = bernoulli();
        let num = Numerics::default();
        let t = TimeParam::new(1.5).unwrap();
        let v = v_plus(&m, t, 2048, &num);
        assert_eq!(v.len(), 1);
        let c = v.intervals()[0];
        assert!((c.hi - 0.5f64.sqrt()).abs() < 1e-8);
        assert!((c.lo + 0.5f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn chebyshev_nodes_are_increasing() {
        let xs = chebyshev_nodes(-1.0, 3.0, 17);
        assert_eq!(xs[0], -1.0);
        assert_eq!(xs[16], 3.0);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        assert!((xs[8] - 1.0).abs() < 1e-15);
    }
}
