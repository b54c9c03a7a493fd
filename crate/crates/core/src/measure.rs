//! Input measures: finitely many atoms plus a piecewise-linear density.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a validated measure.
pub const MASS_TOL: f64 = 1e-10;

/// A point mass `m` at `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub m: f64,
}

/// A density given by linear interpolation of `ys` over the breakpoints `xs`,
/// zero outside `[xs[0], xs[last]]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Segment {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl Segment {
    pub fn lo(&self) -> f64 {
        self.xs[0]
    }

    pub fn hi(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    /// Trapezoid integral, exact for the interpolant.
    pub fn mass(&self) -> f64 {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| 0.5 * (y[0] + y[1]) * (x[1] - x[0]))
            .sum()
    }
}

/// Raw, unchecked measure description as it appears in JSON files.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MeasureSpec {
    #[serde(default)]
    pub atoms: Vec<Atom>,
    #[serde(default)]
    pub segments: Vec<Segment>,
}

impl MeasureSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidMeasure(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure spec serializes")
    }
}

/// One linear piece of the density on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Piece {
    pub a: f64,
    pub b: f64,
    pub pa: f64,
    pub pb: f64,
    pub slope: f64,
}

/// A validated probability measure: immutable, compactly supported,
/// not a Dirac mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    atoms: Vec<Atom>,
    segments: Vec<Segment>,
    pieces: Vec<Piece>,
}

/// Checks every invariant of `spec` and returns the validated measure.
pub fn validate(spec: &MeasureSpec) -> Result<Measure> {
    Measure::new(spec.clone(), false)
}

/// Like [`validate`], but first rescales the density so the total mass is exactly 1.
pub fn validate_renormalized(spec: &MeasureSpec) -> Result<Measure> {
    Measure::new(spec.clone(), true)
}

impl Measure {
    pub fn new(mut spec: MeasureSpec, renormalize: bool) -> Result<Self> {
        for a in &spec.atoms {
            if !a.x.is_finite() || !a.m.is_finite() {
                return Err(Error::UnboundedSupport);
            }
            if !(a.m > 0.0 && a.m <= 1.0) {
                return Err(Error::InvalidMeasure(format!(
                    "atom at {} has mass {} outside (0, 1]",
                    a.x, a.m
                )));
            }
        }
        spec.atoms.sort_by(|a, b| a.x.total_cmp(&b.x));
        if let Some(w) = spec.atoms.windows(2).find(|w| w[0].x == w[1].x) {
            return Err(Error::InvalidMeasure(format!(
                "duplicate atom position {}",
                w[0].x
            )));
        }

        for s in &spec.segments {
            if s.xs.len() != s.ys.len() {
                return Err(Error::InvalidMeasure(
                    "segment xs and ys differ in length".into(),
                ));
            }
            if s.xs.len() < 2 {
                return Err(Error::InvalidMeasure(
                    "segment needs at least two breakpoints".into(),
                ));
            }
            if s.xs.iter().chain(&s.ys).any(|v| !v.is_finite()) {
                return Err(Error::UnboundedSupport);
            }
            if s.xs.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidMeasure(
                    "segment breakpoints must be strictly increasing".into(),
                ));
            }
            if s.ys.iter().any(|&y| y < 0.0) {
                return Err(Error::InvalidMeasure("negative density value".into()));
            }
        }
        spec.segments.sort_by(|a, b| a.lo().total_cmp(&b.lo()));
        if let Some(w) = spec.segments.windows(2).find(|w| w[1].lo() < w[0].hi()) {
            return Err(Error::OverlappingSegments(w[1].lo()));
        }
        // segments carrying no mass contribute nothing
        spec.segments.retain(|s| s.ys.iter().any(|&y| y > 0.0));

        let atom_mass: f64 = spec.atoms.iter().map(|a| a.m).sum();
        let mut density_mass: f64 = spec.segments.iter().map(Segment::mass).sum();
        if renormalize && density_mass > 0.0 {
            let target = 1.0 - atom_mass;
            if target <= 0.0 {
                return Err(Error::MassNotOne(atom_mass + density_mass));
            }
            let scale = target / density_mass;
            for s in &mut spec.segments {
                s.ys.iter_mut().for_each(|y| *y *= scale);
            }
            density_mass = spec.segments.iter().map(Segment::mass).sum();
        }
        let total = atom_mass + density_mass;
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::MassNotOne(total));
        }
        if spec.segments.is_empty() && spec.atoms.len() == 1 {
            return Err(Error::DiracMass(spec.atoms[0].x));
        }

        let pieces = spec
            .segments
            .iter()
            .flat_map(|s| {
                s.xs.windows(2).zip(s.ys.windows(2)).map(|(x, y)| Piece {
                    a: x[0],
                    b: x[1],
                    pa: y[0],
                    pb: y[1],
                    slope: (y[1] - y[0]) / (x[1] - x[0]),
                })
            })
            .collect();

        Ok(Measure {
            atoms: spec.atoms,
            segments: spec.segments,
            pieces,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub(crate) fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn to_spec(&self) -> MeasureSpec {
        MeasureSpec {
            atoms: self.atoms.clone(),
            segments: self.segments.clone(),
        }
    }

    /// Density value at `x` (zero off the segments).
    pub fn density(&self, x: f64) -> f64 {
        let k = self.pieces.partition_point(|p| p.b < x);
        match self.pieces.get(k) {
            Some(p) if p.a <= x => p.pa + p.slope * (x - p.a),
            _ => 0.0,
        }
    }

    /// Exact `k`-th moment.
    pub fn moment(&self, k: u32) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.m * a.x.powi(k as i32)).sum();
        let density: f64 = self.pieces.iter().map(|p| piece_moment(p, k)).sum();
        atoms + density
    }

    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        // central second moment, computed around the mean for accuracy
        let atoms: f64 = self.atoms.iter().map(|a| a.m * (a.x - m).powi(2)).sum();
        let density: f64 = self
            .pieces
            .iter()
            .map(|p| {
                let shifted = Piece {
                    a: p.a - m,
                    b: p.b - m,
                    ..*p
                };
                piece_moment(&shifted, 2)
            })
            .sum();
        atoms + density
    }

    /// Smallest closed interval containing the support.
    pub fn hull(&self) -> (f64, f64) {
        let xs = self
            .atoms
            .iter()
            .map(|a| a.x)
            .chain(self.segments.iter().flat_map(|s| [s.lo(), s.hi()]));
        xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        })
    }

    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.hull();
        hi - lo
    }
}

/// `∫_a^b (pa + slope (s - a)) s^k ds`, expanded around `a` binomially.
fn piece_moment(p: &Piece, k: u32) -> f64 {
    let h = p.b - p.a;
    let mut total = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        // C(k, j) a^(k-j) ∫_0^h u^j (pa + slope u) du
        let hj1 = h.powi(j as i32 + 1);
        let int = p.pa * hj1 / (j as f64 + 1.0) + p.slope * hj1 * h / (j as f64 + 2.0);
        total += binom * p.a.powi((k - j) as i32) * int;
        binom = binom * (k - j) as f64 / (j as f64 + 1.0);
    }
    total
}
