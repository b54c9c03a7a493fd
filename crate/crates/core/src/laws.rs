//! Reference laws with closed-form semigroups, used as ground truth.
//!
//! Nothing in here touches the transforms: the supports and densities of
//! `μ_t` below are textbook formulas.
//!
//! * semicircle of variance `v`: `μ_t` is the semicircle of variance `v t`.
//! * free Poisson of rate `λ`: `μ_t` is free Poisson of rate `λ t`
//!   (Marchenko–Pastur).
//! * symmetric Bernoulli: `μ_t` is the Kesten–McKay law of degree `t`,
//!   with atoms `1 - t/2` at `±t` while `t < 2`.
//! * arcsine on `[-r, r]`: the dilation by `r/2` of Bernoulli at time `2t`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::chebyshev_nodes;
use crate::interval::{Interval, IntervalUnion};
use crate::measure::{validate_renormalized, Atom, Measure, MeasureSpec, Segment};
use crate::support::AtomRecord;

/// Default number of density breakpoints for discretized laws.
pub const DEFAULT_LAW_GRID: usize = 401;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LawSpec {
    Semicircle { variance: f64 },
    Bernoulli,
    FreePoisson { lambda: f64 },
    Arcsine { radius: f64 },
}

impl FromStr for LawSpec {
    type Err = Error;

    /// `semicircle[:variance]`, `bernoulli`, `free_poisson:<lambda>`,
    /// `arcsine[:radius]`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let param = |default: Option<f64>| -> Result<f64> {
            let v = match (arg, default) {
                (Some(a), _) => a
                    .parse::<f64>()
                    .map_err(|_| Error::UnknownLaw(s.to_string()))?,
                (None, Some(d)) => d,
                (None, None) => return Err(Error::UnknownLaw(s.to_string())),
            };
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(Error::UnknownLaw(s.to_string()))
            }
        };
        match name {
            "semicircle" => Ok(LawSpec::Semicircle {
                variance: param(Some(1.0))?,
            }),
            "bernoulli" if arg.is_none() => Ok(LawSpec::Bernoulli),
            "free_poisson" => Ok(LawSpec::FreePoisson {
                lambda: param(None)?,
            }),
            "arcsine" => Ok(LawSpec::Arcsine {
                radius: param(Some(2.0))?,
            }),
            _ => Err(Error::UnknownLaw(s.to_string())),
        }
    }
}

impl fmt::Display for LawSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawSpec::Semicircle { variance } => write!(f, "semicircle:{variance}"),
            LawSpec::Bernoulli => write!(f, "bernoulli"),
            LawSpec::FreePoisson { lambda } => write!(f, "free_poisson:{lambda}"),
            LawSpec::Arcsine { radius } => write!(f, "arcsine:{radius}"),
        }
    }
}

/// Piecewise-linear density on Chebyshev breakpoints. Endpoints where the
/// density blows up like an inverse square root get three times their
/// neighbour, which matches the mass of the first cell under that model.
///
/// Interior values are shifted by `-h_- h_+ p'' / 12` so each cell's
/// trapezoid mass matches the integral to fourth order instead of second.
fn discretize(lo: f64, hi: f64, n: usize, density: impl Fn(f64) -> f64) -> Segment {
    let xs = chebyshev_nodes(lo, hi, n);
    let raw: Vec<f64> = xs.iter().map(|&x| density(x)).collect();
    let mut ys = raw.clone();
    for k in 1..n - 1 {
        let (hm, hp) = (xs[k] - xs[k - 1], xs[k + 1] - xs[k]);
        let (pm, p, pp) = (raw[k - 1], raw[k], raw[k + 1]);
        if pm.is_finite() && pp.is_finite() {
            let second = 2.0 * ((pp - p) / hp - (p - pm) / hm) / (hm + hp);
            ys[k] = (p - hm * hp * second / 12.0).max(0.0);
        }
    }
    if !ys[0].is_finite() {
        ys[0] = 3.0 * ys[1];
    }
    if !ys[n - 1].is_finite() {
        ys[n - 1] = 3.0 * ys[n - 2];
    }
    Segment { xs, ys }
}

/// Discretized measure for `law` with `grid_n` density breakpoints,
/// renormalized to total mass 1.
pub fn law_to_spec(law: LawSpec, grid_n: usize) -> Result<MeasureSpec> {
    if grid_n < 64 {
        return Err(Error::InvalidArgument(format!(
            "law grid must have at least 64 points, got {grid_n}"
        )));
    }
    let spec = match law {
        LawSpec::Semicircle { variance } => {
            let r = 2.0 * variance.sqrt();
            MeasureSpec {
                atoms: vec![],
                segments: vec![discretize(-r, r, grid_n, |x| {
                    (r * r - x * x).max(0.0).sqrt() / (2.0 * PI * variance)
                })],
            }
        }
        LawSpec::Bernoulli => MeasureSpec {
            atoms: vec![Atom { x: -1.0, m: 0.5 }, Atom { x: 1.0, m: 0.5 }],
            segments: vec![],
        },
        LawSpec::FreePoisson { lambda } => {
            let (a, b) = mp_edges(lambda);
            let seg = discretize(a, b, grid_n, |x| {
                ((b - x) * (x - a)).max(0.0).sqrt() / (2.0 * PI * x)
            });
            let atoms = if lambda < 1.0 {
                vec![Atom {
                    x: 0.0,
                    m: 1.0 - lambda,
                }]
            } else {
                vec![]
            };
            MeasureSpec {
                atoms,
                segments: vec![seg],
            }
        }
        LawSpec::Arcsine { radius } => MeasureSpec {
            atoms: vec![],
            segments: vec![discretize(-radius, radius, grid_n, |x| {
                1.0 / (PI * (radius * radius - x * x).sqrt())
            })],
        },
    };
    let m = validate_renormalized(&spec)?;
    Ok(m.to_spec())
}

/// Validated discretization of `law`.
pub fn law_measure(law: LawSpec, grid_n: usize) -> Result<Measure> {
    validate_renormalized(&law_to_spec(law, grid_n)?)
}

fn mp_edges(s: f64) -> (f64, f64) {
    let r = s.sqrt();
    ((1.0 - r).powi(2), (1.0 + r).powi(2))
}

/// Closed-form support of `μ_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSupport {
    pub ac: IntervalUnion,
    pub atoms: Vec<AtomRecord>,
}

impl OracleSupport {
    pub fn support(&self) -> IntervalUnion {
        self.ac.with_points(self.atoms.iter().map(|a| a.position))
    }
}

fn bernoulli_support(t: f64, scale: f64) -> OracleSupport {
    let edge = 2.0 * (t - 1.0).sqrt() * scale;
    let ac = if t > 1.0 {
        IntervalUnion::new([Interval::new(-edge, edge)])
    } else {
        IntervalUnion::empty()
    };
    let atoms = if t < 2.0 {
        let m = 1.0 - t / 2.0;
        vec![
            AtomRecord {
                position: -t * scale,
                mass: m,
            },
            AtomRecord {
                position: t * scale,
                mass: m,
            },
        ]
    } else {
        vec![]
    };
    OracleSupport { ac, atoms }
}

/// Support and atoms of `law` at time `t >= 1`.
pub fn oracle_support(law: LawSpec, t: f64) -> Result<OracleSupport> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(Error::InvalidTime(t));
    }
    Ok(match law {
        LawSpec::Semicircle { variance } => {
            let r = 2.0 * (variance * t).sqrt();
            OracleSupport {
                ac: IntervalUnion::new([Interval::new(-r, r)]),
                atoms: vec![],
            }
        }
        LawSpec::FreePoisson { lambda } => {
            let s = lambda * t;
            let (a, b) = mp_edges(s);
            let atoms = if s < 1.0 {
                vec![AtomRecord {
                    position: 0.0,
                    mass: 1.0 - s,
                }]
            } else {
                vec![]
            };
            OracleSupport {
                ac: IntervalUnion::new([Interval::new(a, b)]),
                atoms,
            }
        }
        LawSpec::Bernoulli => bernoulli_support(t, 1.0),
        LawSpec::Arcsine { radius } => bernoulli_support(2.0 * t, radius / 2.0),
    })
}

fn kesten_mckay(d: f64, u: f64) -> f64 {
    let inner = 4.0 * (d - 1.0) - u * u;
    if inner <= 0.0 {
        return 0.0;
    }
    d * inner.sqrt() / (2.0 * PI * (d * d - u * u))
}

/// Density of the ac part of `μ_t` at `u`.
pub fn oracle_density(law: LawSpec, t: f64, u: f64) -> f64 {
    match law {
        LawSpec::Semicircle { variance } => {
            let v = variance * t;
            (4.0 * v - u * u).max(0.0).sqrt() / (2.0 * PI * v)
        }
        LawSpec::FreePoisson { lambda } => {
            let (a, b) = mp_edges(lambda * t);
            if u <= a || u >= b {
                0.0
            } else {
                ((b - u) * (u - a)).sqrt() / (2.0 * PI * u)
            }
        }
        LawSpec::Bernoulli => kesten_mckay(t, u),
        LawSpec::Arcsine { radius } => {
            let c = radius / 2.0;
            kesten_mckay(2.0 * t, u / c) / c
        }
    }
}
