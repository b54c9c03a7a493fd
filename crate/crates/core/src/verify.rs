//! Randomized property checks of a measure's semigroup, with a
//! machine-readable report.
//!
//! Every sample comes from a ChaCha stream seeded by [`VerifyConfig::seed`],
//! so a report is reproducible bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{f_t, scan_window, v_plus, TimeParam};
use crate::measure::Measure;
use crate::numerics::Numerics;
use crate::support::{h_t_map, snapshot};
use crate::transforms::{f_transform, g_value, nevanlinna_h, UpperPoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub h_triples: usize,
    pub v_pairs: usize,
    pub lipschitz_pairs: usize,
    pub nevanlinna_points: usize,
    pub convexity_points: usize,
    pub root_points: usize,
    pub mass_times: Vec<f64>,
    pub mass_tol: f64,
    pub moment_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0x5eed,
            h_triples: 1000,
            v_pairs: 10,
            lipschitz_pairs: 1000,
            nevanlinna_points: 1000,
            convexity_points: 200,
            root_points: 200,
            mass_times: vec![1.25, 1.5, 2.0, 3.0],
            mass_tol: 1e-4,
            moment_tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub failures: usize,
    /// Worst observed value of the property's own error measure.
    pub worst: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub label: String,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn failed(&self) -> impl Iterator<Item = &PropertyResult> {
        self.properties.iter().filter(|p| !p.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Collects per-sample outcomes of one property.
struct Tally {
    name: &'static str,
    checked: usize,
    failures: usize,
    worst: f64,
    example: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            failures: 0,
            worst: 0.0,
            example: None,
        }
    }

    fn record(&mut self, ok: bool, err: f64, what: impl FnOnce() -> String) {
        self.checked += 1;
        if err.is_nan() || err > self.worst {
            self.worst = err;
        }
        if !ok {
            self.failures += 1;
            if self.example.is_none() {
                self.example = Some(what());
            }
        }
    }

    fn finish(self) -> PropertyResult {
        PropertyResult {
            name: self.name.to_string(),
            passed: self.failures == 0 && self.checked > 0,
            checked: self.checked,
            failures: self.failures,
            worst: self.worst,
            example: self.example,
        }
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Runs every property on `m` and reports each one.
pub fn verify(
    m: &Measure,
    label: &str,
    cfg: &VerifyConfig,
    num: &Numerics,
) -> Result<VerifyReport> {
    num.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let properties = vec![
        h_decreasing(m, cfg, &mut rng),
        nevanlinna_bound(m, cfg, &mut rng),
        g_convex_off_hull(m, cfg, num, &mut rng),
    ]
    .into_iter()
    .chain(v_monotone(m, cfg, num, &mut rng)?)
    .chain([
        f_root_identity(m, cfg, num, &mut rng)?,
        lipschitz(m, cfg, num, &mut rng)?,
    ])
    .chain(mass_and_moments(m, cfg, num)?)
    .collect::<Vec<_>>();
    Ok(VerifyReport {
        label: label.to_string(),
        passed: properties.iter().all(|p| p.passed),
        properties,
    })
}

fn x_window(m: &Measure) -> (f64, f64) {
    let (lo, hi) = m.hull();
    let pad = 1.0 + (hi - lo);
    (lo - pad, hi + pad)
}

fn h_decreasing(m: &Measure, cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> PropertyResult {
    let (wlo, whi) = x_window(m);
    let samples: Vec<(f64, [f64; 3])> = (0..cfg.h_triples)
        .map(|_| {
            let x = rng.gen_range(wlo..whi);
            let mut ys = [0.0; 3];
            // keep the heights apart so the change in h clears rounding
            loop {
                for y in &mut ys {
                    *y = log_uniform(rng, 1e-4, 10.0);
                }
                ys.sort_by(f64::total_cmp);
                if ys[1] > 1.01 * ys[0] && ys[2] > 1.01 * ys[1] {
                    break;
                }
            }
            (x, ys)
        })
        .collect();
    let values: Vec<[f64; 3]> = samples
        .par_iter()
        .map(|(x, ys)| ys.map(|y| nevanlinna_h(m, *x, y)))
        .collect();
    let mut tally = Tally::new("h_strictly_decreasing_in_y");
    for ((x, ys), h) in samples.iter().zip(&values) {
        let ok = h[0] > h[1] && h[1] > h[2];
        tally.record(ok, if ok { 0.0 } else { 1.0 }, || {
            format!("x={x} y={ys:?} h={h:?}")
        });
    }
    tally.finish()
}

fn nevanlinna_bound(m: &Measure, cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> PropertyResult {
    let (wlo, whi) = x_window(m);
    let pts: Vec<(f64, f64)> = (0..cfg.nevanlinna_points)
        .map(|_| (rng.gen_range(wlo..whi), log_uniform(rng, 1e-6, 10.0)))
        .collect();
    let mut tally = Tally::new("im_f_at_least_y");
    for (x, y) in pts {
        let im = UpperPoint::new(x, y)
            .and_then(|z| f_transform(m, z))
            .map(|f| f.im)
            .unwrap_or(f64::NAN);
        let deficit = (y - im) / y;
        tally.record(deficit <= 1e-12, deficit.max(0.0), || {
            format!("x={x} y={y} Im F={im}")
        });
    }
    tally.finish()
}

fn g_convex_off_hull(
    m: &Measure,
    cfg: &VerifyConfig,
    num: &Numerics,
    rng: &mut ChaCha8Rng,
) -> PropertyResult {
    let (lo, hi) = m.hull();
    let delta = 1e-2;
    let pts: Vec<f64> = (0..cfg.convexity_points)
        .map(|_| {
            let d = rng.gen_range(0.1..3.0);
            if rng.gen_bool(0.5) {
                hi + d
            } else {
                lo - d
            }
        })
        .collect();
    let g = |x: f64| g_value(m, x, num.y_floor, num.divergence_cap);
    let mut tally = Tally::new("g_convex_off_hull");
    for x in pts {
        let second = g(x + delta) - 2.0 * g(x) + g(x - delta);
        tally.record(second > 0.0, (-second).max(0.0), || {
            format!("x={x} second difference {second}")
        });
    }
    tally.finish()
}

fn time_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let a: f64 = rng.gen_range(1.05..4.0);
        let b: f64 = rng.gen_range(1.05..4.0);
        if (a - b).abs() > 1e-3 {
            return if a < b { (a, b) } else { (b, a) };
        }
    }
}

fn v_monotone(
    m: &Measure,
    cfg: &VerifyConfig,
    num: &Numerics,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<PropertyResult>> {
    let pairs: Vec<(f64, f64)> = (0..cfg.v_pairs).map(|_| time_pair(rng)).collect();
    let mut sets = Tally::new("v_plus_increasing_in_t");
    let mut heights = Tally::new("f_t_increasing_in_t");
    for (r, t) in pairs {
        let (tr, tt) = (TimeParam::new(r)?, TimeParam::new(t)?);
        let vr = v_plus(m, tr, num.grid_n, num);
        let vt = v_plus(m, tt, num.grid_n, num);
        let ok = vt.covers(&vr, 10.0 * num.edge_tol);
        sets.record(ok, if ok { 0.0 } else { 1.0 }, || {
            format!(
                "V at r={r} is {:?}, at t={t} is {:?}",
                vr.intervals(),
                vt.intervals()
            )
        });
        let (wlo, whi) = scan_window(m, tt);
        for _ in 0..10 {
            let x = rng.gen_range(wlo..whi);
            let (fr, ft) = (f_t(m, tr, x, num), f_t(m, tt, x, num));
            let drop = fr - ft;
            heights.record(drop <= num.root_tol, drop.max(0.0), || {
                format!("x={x}: f at r={r} is {fr}, at t={t} is {ft}")
            });
        }
    }
    Ok(vec![sets.finish(), heights.finish()])
}

fn f_root_identity(
    m: &Measure,
    cfg: &VerifyConfig,
    num: &Numerics,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyResult> {
    let mut tally = Tally::new("f_t_solves_h_equals_threshold");
    let times: Vec<f64> = (0..4).map(|_| rng.gen_range(1.05..4.0)).collect();
    for t in times {
        let t = TimeParam::new(t)?;
        let v = v_plus(m, t, num.grid_n, num);
        if v.is_empty() {
            continue;
        }
        let xs: Vec<f64> = (0..cfg.root_points / 4)
            .map(|_| {
                let c = v.intervals()[rng.gen_range(0..v.len())];
                c.lo + c.len() * rng.gen_range(0.05..0.95)
            })
            .collect();
        let rows: Vec<(f64, f64, f64)> = xs
            .par_iter()
            .map(|&x| {
                let f = f_t(m, t, x, num);
                (x, f, nevanlinna_h(m, x, f))
            })
            .collect();
        let tau = t.threshold();
        for (x, f, h) in rows {
            // only heights well above the floor resolve h to this precision
            if f < 1e-4 {
                continue;
            }
            let rel = (h - tau).abs() / tau;
            tally.record(rel < 1e-6, rel, || {
                format!("t={} x={x} f={f} h={h}", t.get())
            });
        }
    }
    Ok(tally.finish())
}

fn lipschitz(
    m: &Measure,
    cfg: &VerifyConfig,
    num: &Numerics,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyResult> {
    let t = TimeParam::new(rng.gen_range(1.1..3.0))?;
    let (wlo, whi) = scan_window(m, t);
    let xs: Vec<[f64; 2]> = (0..cfg.lipschitz_pairs)
        .map(|_| [rng.gen_range(wlo..whi), rng.gen_range(wlo..whi)])
        .collect();
    let lifts: Vec<[f64; 2]> = (0..cfg.lipschitz_pairs)
        .map(|_| [log_uniform(rng, 1e-3, 3.0), log_uniform(rng, 1e-3, 3.0)])
        .collect();
    let rows: Vec<Result<(UpperPoint, UpperPoint, f64)>> = xs
        .par_iter()
        .zip(&lifts)
        .map(|(x, lift)| {
            let z1 = UpperPoint::new(x[0], f_t(m, t, x[0], num) + lift[0])?;
            let z2 = UpperPoint::new(x[1], f_t(m, t, x[1], num) + lift[1])?;
            let dh = (h_t_map(m, t, z1)? - h_t_map(m, t, z2)?).norm();
            Ok((z1, z2, dh / (z1.z() - z2.z()).norm()))
        })
        .collect();
    let mut tally = Tally::new("h_t_lipschitz_2");
    for row in rows {
        let (z1, z2, ratio) = row?;
        tally.record(ratio <= 2.0 + 1e-9, ratio, || {
            format!("t={} z1={:?} z2={:?} ratio={ratio}", t.get(), z1, z2)
        });
    }
    Ok(tally.finish())
}

fn mass_and_moments(
    m: &Measure,
    cfg: &VerifyConfig,
    num: &Numerics,
) -> Result<Vec<PropertyResult>> {
    let snaps = cfg
        .mass_times
        .iter()
        .map(|&t| snapshot(m, TimeParam::new(t)?, num))
        .collect::<Result<Vec<_>>>()?;
    let (mean, var) = (m.mean(), m.variance());
    let mut mass = Tally::new("mass_conserved");
    let mut mean_t = Tally::new("mean_scales_by_t");
    let mut var_t = Tally::new("variance_scales_by_t");
    for s in &snaps {
        let t = s.t;
        let e = (s.total_mass() - 1.0).abs();
        mass.record(e < cfg.mass_tol, e, || {
            format!("t={t} total mass {}", s.total_mass())
        });
        let e = (s.moment(1) - t * mean).abs() / (t * mean).abs().max(1.0);
        mean_t.record(e < cfg.moment_tol, e, || {
            format!("t={t} mean {} want {}", s.moment(1), t * mean)
        });
        let e = (s.variance() - t * var).abs() / (t * var).max(1.0);
        var_t.record(e < cfg.moment_tol, e, || {
            format!("t={t} variance {} want {}", s.variance(), t * var)
        });
    }
    Ok(vec![mass.finish(), mean_t.finish(), var_t.finish()])
}
