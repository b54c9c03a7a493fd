//! From the geometry of `V_t+` to the measure `μ_t` itself.
//!
//! `H_t(z) = t z - (t-1) F_μ(z)` maps the graph `x + i f_t(x)` onto the real
//! line; `ψ_t(x) = H_t(x + i f_t(x))` parametrizes the absolutely continuous
//! support. By subordination `F_{μ_t}(H_t(w)) = F_μ(w)`, so the density of
//! `μ_t` at `ψ_t(x)` is `-Im G_μ(x + i f_t(x)) / π`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{boundary_graph, v_plus_checked, BoundaryGraph, TimeParam};
use crate::interval::{Interval, IntervalUnion};
use crate::measure::Measure;
use crate::numerics::Numerics;
use crate::roots::bisect;
use crate::transforms::{cauchy_at, f_transform, reciprocal, UpperPoint};

/// Distance within which a vanished atom counts as part of the ac support.
pub const VANISHING_CONTAINMENT_TOL: f64 = 1e-3;

/// Mass differences below this make an atom vanish exactly at `t`.
const VANISHING_MASS_TOL: f64 = 1e-12;

/// An atom of `μ_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomRecord {
    #[serde(rename = "x")]
    pub position: f64,
    #[serde(rename = "m")]
    pub mass: f64,
}

/// Atoms of `μ_t` and the positions of atoms whose mass reaches zero at `t`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AtomsAt {
    pub atoms: Vec<AtomRecord>,
    pub vanishing: Vec<f64>,
}

/// `H_t(z) = t z - (t-1) F_μ(z)`.
pub fn h_t_map(m: &Measure, t: TimeParam, z: UpperPoint) -> Result<Complex64> {
    let f = f_transform(m, z)?;
    let t = t.get();
    Ok(t * z.z() - (t - 1.0) * f)
}

fn h_t_at(m: &Measure, t: TimeParam, x: f64, y: f64) -> Complex64 {
    let t = t.get();
    let f = reciprocal(cauchy_at(m, x, y));
    t * Complex64::new(x, y) - (t - 1.0) * f
}

/// `ψ_t(x) = H_t(x + i f_t(x))`.
///
/// Off `V_t+` (where `f_t = 0`) the map is evaluated at height `y_floor`,
/// which extends `ψ_t` continuously to the whole line.
pub fn psi_t(m: &Measure, t: TimeParam, x: f64, num: &Numerics) -> Result<f64> {
    let f = crate::geometry::f_t(m, t, x, num);
    psi_at_height(m, t, x, f, num)
}

fn psi_at_height(m: &Measure, t: TimeParam, x: f64, f: f64, num: &Numerics) -> Result<f64> {
    let w = h_t_at(m, t, x, f.max(num.y_floor));
    if !(w.im.abs() < num.psi_tol) {
        return Err(Error::PsiNotReal { x, residue: w.im });
    }
    Ok(w.re)
}

/// `ψ_t` at an endpoint of `V_t+`, extrapolated to `y = 0` from `y_floor`
/// and `2 y_floor`.
fn psi_endpoint(m: &Measure, t: TimeParam, x: f64, num: &Numerics) -> Result<f64> {
    let a = psi_at_height(m, t, x, num.y_floor, num)?;
    let b = psi_at_height(m, t, x, 2.0 * num.y_floor, num)?;
    Ok(2.0 * a - b)
}

/// Density of `μ_t` at the point `ψ_t(x)`, for `x` in `V_t+`.
pub fn density_at(m: &Measure, t: TimeParam, x: f64, num: &Numerics) -> Result<f64> {
    let f = crate::geometry::f_t(m, t, x, num);
    if f == 0.0 {
        return Err(Error::OutsideVPlus(x));
    }
    density_at_height(m, x, f, num)
}

fn density_at_height(m: &Measure, x: f64, y: f64, num: &Numerics) -> Result<f64> {
    let g = cauchy_at(m, x, y.max(num.y_floor));
    if !(g.norm() * num.zero_f_tol < 1.0) {
        return Err(Error::ZeroF(x));
    }
    Ok((-g.im / PI).max(0.0))
}

/// Atoms of `μ_t`: an atom `α` of `μ` with `μ({α}) > (t-1)/t` moves to
/// `tα` and keeps mass `t μ({α}) - (t-1)`, computed as `1 - t (1 - μ({α}))`
/// so that decimal inputs like `t = 1.2`, `μ({α}) = 0.5` come out exact.
pub fn atoms_at(m: &Measure, t: TimeParam) -> AtomsAt {
    let t = t.get();
    let mut out = AtomsAt::default();
    for a in m.atoms() {
        let mass = 1.0 - t * (1.0 - a.m);
        if mass.abs() <= VANISHING_MASS_TOL {
            out.vanishing.push(t * a.x);
        } else if mass > 0.0 {
            out.atoms.push(AtomRecord {
                position: t * a.x,
                mass,
            });
        }
    }
    out
}

/// Times at which atoms of `μ` lose all their mass: `1 / (1 - μ({α}))`.
pub fn vanishing_times(m: &Measure) -> Vec<f64> {
    m.atoms()
        .iter()
        .filter(|a| a.m < 1.0)
        .map(|a| 1.0 / (1.0 - a.m))
        .collect()
}

/// The density of `μ_t` over one component of `V_t+`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentProfile {
    pub component: Interval,
    /// Chebyshev–Lobatto nodes in `x`.
    pub xs: Vec<f64>,
    pub fs: Vec<f64>,
    /// `ψ_t(x)` at the nodes.
    pub us: Vec<f64>,
    /// Density at `ψ_t(x)`; `None` marks a singularity where `F_{μ_t} = 0`.
    pub ps: Vec<Option<f64>>,
}

impl ComponentProfile {
    pub fn monotone(&self) -> bool {
        self.us.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn image(&self) -> Interval {
        let lo = self.us.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.us.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo, hi)
    }

    /// `∫ φ(u) p(u) du` over this component.
    ///
    /// The nodes are uniform in `θ` with `x = mid - half cos θ`; the
    /// integrand `φ(u) p(u) du/dθ` is smooth and even in `θ` even where
    /// `p` has square-root or inverse-square-root edges, so the trapezoid
    /// rule in `θ` converges fast. `du/dθ` uses fourth-order differences
    /// with even reflection at both ends.
    pub fn integrate<F: Fn(f64) -> f64>(&self, phi: F) -> f64 {
        let n = self.us.len();
        if n < 3 {
            return 0.0;
        }
        let dtheta = PI / (n - 1) as f64;
        let u = |k: isize| -> f64 {
            let last = (n - 1) as isize;
            let k = if k < 0 {
                -k
            } else if k > last {
                2 * last - k
            } else {
                k
            };
            self.us[k as usize]
        };
        let mut q: Vec<Option<f64>> = (0..n)
            .map(|k| {
                let k = k as isize;
                let du = (-u(k + 2) + 8.0 * u(k + 1) - 8.0 * u(k - 1) + u(k - 2)) / (12.0 * dtheta);
                self.ps[k as usize].map(|p| p * du)
            })
            .collect();
        // singular endpoints: q is even in θ, so q(0) ≈ (4 q(θ1) - q(θ2)) / 3
        if q[0].is_none() {
            if let (Some(a), Some(b)) = (q[1], q[2]) {
                q[0] = Some((4.0 * a - b) / 3.0);
            }
        }
        if q[n - 1].is_none() {
            if let (Some(a), Some(b)) = (q[n - 2], q[n - 3]) {
                q[n - 1] = Some((4.0 * a - b) / 3.0);
            }
        }
        // interior markers: linear interpolation of neighbours
        for k in 1..n - 1 {
            if q[k].is_none() {
                if let (Some(a), Some(b)) = (q[k - 1], q[k + 1]) {
                    q[k] = Some(0.5 * (a + b));
                }
            }
        }
        (0..n)
            .map(|k| {
                let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                w * phi(self.us[k]) * q[k].unwrap_or(0.0)
            })
            .sum::<f64>()
            * dtheta
    }
}

/// `(ψ_t(x), density)` pairs over every component of `V_t+`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DensityProfile {
    pub components: Vec<ComponentProfile>,
}

impl DensityProfile {
    /// All finite `(u, p)` samples, `u` increasing within each component.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.components
            .iter()
            .flat_map(|c| {
                c.us.iter()
                    .zip(&c.ps)
                    .filter_map(|(&u, p)| p.map(|p| (u, p)))
            })
            .collect()
    }

    /// Locations of density singularities.
    pub fn singularities(&self) -> Vec<f64> {
        self.components
            .iter()
            .flat_map(|c| {
                c.us.iter()
                    .zip(&c.ps)
                    .filter_map(|(&u, p)| p.is_none().then_some(u))
            })
            .collect()
    }

    pub fn integrate<F: Fn(f64) -> f64 + Copy>(&self, phi: F) -> f64 {
        self.components.iter().map(|c| c.integrate(phi)).sum()
    }
}

/// Density profile over one component of `V_t+`.
pub fn component_profile(
    m: &Measure,
    t: TimeParam,
    graph: &BoundaryGraph,
    num: &Numerics,
) -> Result<ComponentProfile> {
    let n = graph.samples.len();
    let evaluated: Vec<(f64, Option<f64>)> = graph
        .samples
        .par_iter()
        .enumerate()
        .map(|(k, &(x, f))| {
            let endpoint = k == 0 || k == n - 1;
            let u = if endpoint {
                psi_endpoint(m, t, x, num)?
            } else {
                psi_at_height(m, t, x, f, num)?
            };
            let p = match density_at_height(m, x, f, num) {
                Ok(p) => Some(p),
                Err(Error::ZeroF(_)) => None,
                Err(e) => return Err(e),
            };
            Ok((u, p))
        })
        .collect::<Result<_>>()?;
    let (us, ps) = evaluated.into_iter().unzip();
    Ok(ComponentProfile {
        component: graph.component,
        xs: graph.samples.iter().map(|s| s.0).collect(),
        fs: graph.samples.iter().map(|s| s.1).collect(),
        us,
        ps,
    })
}

/// The snapshot's check of a vanishing atom against the ac support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanishingCheck {
    pub position: f64,
    pub distance_to_ac: f64,
}

/// Everything computed about `μ_t` at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSnapshot {
    pub t: f64,
    pub ac_support: IntervalUnion,
    pub atoms: Vec<AtomRecord>,
    pub density: DensityProfile,
    pub vanishing: Vec<VanishingCheck>,
    pub flags: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SnapshotJson {
    t: f64,
    ac: Vec<[f64; 2]>,
    atoms: Vec<AtomRecord>,
    density: Vec<[f64; 2]>,
    flags: Vec<String>,
}

impl SupportSnapshot {
    /// `supp μ_t`: ac support plus atom positions.
    pub fn support(&self) -> IntervalUnion {
        self.ac_support
            .with_points(self.atoms.iter().map(|a| a.position))
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn ac_mass(&self) -> f64 {
        self.density.integrate(|_| 1.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.ac_mass() + self.atom_mass()
    }

    /// `∫ u^k dμ_t(u)` from the profile quadrature and the atoms.
    pub fn moment(&self, k: i32) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.mass * a.position.powi(k)).sum();
        atoms + self.density.integrate(|u| u.powi(k))
    }

    pub fn mean(&self) -> f64 {
        self.moment(1) / self.total_mass()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|a| a.mass * (a.position - mean).powi(2))
            .sum();
        (atoms + self.density.integrate(|u| (u - mean).powi(2))) / self.total_mass()
    }

    /// Density at a location `u` of the ac support, by inverting `ψ_t`
    /// on the component whose image contains `u`.
    pub fn density_at_location(&self, m: &Measure, u: f64, num: &Numerics) -> Result<f64> {
        let t = TimeParam::new(self.t)?;
        let comp = self
            .density
            .components
            .iter()
            .find(|c| c.image().contains(u))
            .ok_or(Error::OutsideVPlus(u))?;
        let k = comp
            .us
            .partition_point(|&v| v < u)
            .clamp(1, comp.us.len() - 1);
        let (xa, xb) = (comp.xs[k - 1], comp.xs[k]);
        let (x_lo, _) = bisect(xa, xb, 1e-13, |x| {
            psi_t(m, t, x, num).map(|v| v <= u).unwrap_or(false)
        });
        density_at(m, t, x_lo, num)
    }

    pub fn to_json(&self) -> String {
        let body = SnapshotJson {
            t: self.t,
            ac: self
                .ac_support
                .intervals()
                .iter()
                .map(|i| [i.lo, i.hi])
                .collect(),
            atoms: self.atoms.clone(),
            density: self
                .density
                .points()
                .into_iter()
                .map(|(u, p)| [u, p])
                .collect(),
            flags: self.flags.clone(),
        };
        serde_json::to_string_pretty(&body).expect("snapshot serializes")
    }
}

/// The support-relevant part of a snapshot file.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSummary {
    pub t: f64,
    pub ac_support: IntervalUnion,
    pub atoms: Vec<AtomRecord>,
}

impl SnapshotSummary {
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: SnapshotJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(SnapshotSummary {
            t: raw.t,
            ac_support: IntervalUnion::new(raw.ac.iter().map(|p| Interval::new(p[0], p[1]))),
            atoms: raw.atoms,
        })
    }

    pub fn support(&self) -> IntervalUnion {
        self.ac_support
            .with_points(self.atoms.iter().map(|a| a.position))
    }
}

fn profiles(m: &Measure, t: TimeParam, num: &Numerics) -> Result<(Vec<ComponentProfile>, bool)> {
    let (v, refinement_changed) = v_plus_checked(m, t, num.grid_n, num);
    let comps = v
        .intervals()
        .iter()
        .filter(|c| c.len() > 2.0 * num.edge_tol)
        .map(|&c| {
            let graph = boundary_graph(m, t, c, num.samples_n, num);
            component_profile(m, t, &graph, num)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((comps, refinement_changed))
}

/// Closure of `ψ_t(V_t+)`, which carries the ac part of `μ_t`.
pub fn ac_support(m: &Measure, t: TimeParam, num: &Numerics) -> Result<IntervalUnion> {
    let (comps, _) = profiles(m, t, num)?;
    Ok(IntervalUnion::new(
        comps.iter().map(ComponentProfile::image),
    ))
}

/// Full description of `μ_t`.
pub fn snapshot(m: &Measure, t: TimeParam, num: &Numerics) -> Result<SupportSnapshot> {
    num.validate()?;
    let (comps, refinement_changed) = profiles(m, t, num)?;
    let ac = IntervalUnion::new(comps.iter().map(ComponentProfile::image));
    let atoms = atoms_at(m, t);

    let mut flags = Vec::new();
    if refinement_changed {
        flags.push("v_plus_refinement_changed".to_string());
    }
    for (i, c) in comps.iter().enumerate() {
        if !c.monotone() {
            flags.push(format!("psi_not_monotone:{i}"));
        }
    }
    let density = DensityProfile { components: comps };
    for u in density.singularities() {
        flags.push(format!("density_singularity:{u}"));
    }
    let vanishing: Vec<VanishingCheck> = atoms
        .vanishing
        .iter()
        .map(|&position| VanishingCheck {
            position,
            distance_to_ac: ac.distance(position),
        })
        .collect();
    for v in &vanishing {
        let status = if v.distance_to_ac <= VANISHING_CONTAINMENT_TOL {
            "in_ac_closure"
        } else {
            "outside_ac"
        };
        flags.push(format!("vanishing_atom:{}:{status}", v.position));
    }

    Ok(SupportSnapshot {
        t: t.get(),
        ac_support: ac,
        atoms: atoms.atoms,
        density,
        vanishing,
        flags,
    })
}
