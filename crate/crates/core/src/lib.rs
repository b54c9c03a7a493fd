//! Free additive convolution semigroups `{μ_t}_{t>1}` of compactly supported
//! measures: the absolutely continuous support, density and atoms of each
//! `μ_t`, and Hausdorff-distance scans of `t ↦ supp μ_t`.
//!
//! The pipeline for one time `t`:
//!
//! 1. [`transforms`] evaluates `G_μ`, `F_μ = 1/G_μ` and
//!    `h(x, y) = Im F_μ(x+iy)/y - 1` in closed form for atoms plus a
//!    piecewise-linear density.
//! 2. [`geometry`] finds `V_t+ = {g > 1/(t-1)}` and the boundary function
//!    `f_t`, where `g(x) = lim_{y↓0} h(x, y)`.
//! 3. [`support`] pushes the graph of `f_t` through `H_t(z) = tz - (t-1)F_μ(z)`
//!    to get the support and density of `μ_t`, and reads the atoms off `μ`.
//! 4. [`hausdorff`] compares supports across `t`.

// `!(a < b)` is how NaN gets rejected throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod hausdorff;
pub mod interval;
pub mod laws;
pub mod measure;
pub mod numerics;
pub mod roots;
pub mod support;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{boundary_graph, f_t, v_plus, BoundaryGraph, TimeParam};
pub use hausdorff::{continuity_scan, hausdorff, ContinuityTable, ScanRow};
pub use interval::{Interval, IntervalUnion};
pub use laws::{law_measure, law_to_spec, oracle_support, LawSpec};
pub use measure::{validate, Atom, Measure, MeasureSpec, Segment};
pub use numerics::Numerics;
pub use support::{
    ac_support, atoms_at, density_at, h_t_map, psi_t, snapshot, AtomRecord, DensityProfile,
    SupportSnapshot,
};
pub use transforms::{cauchy, f_transform, g_value, nevanlinna_h, UpperPoint};
