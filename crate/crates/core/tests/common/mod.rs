#![allow(dead_code)]

use std::path::PathBuf;

use boxplus::{law_measure, validate, Interval, IntervalUnion, LawSpec, Measure, MeasureSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

/// The three reference laws and the two mixed atom/density fixtures.
pub fn corpus() -> Vec<(String, Measure)> {
    let mut out: Vec<(String, Measure)> = ["semicircle", "bernoulli", "free_poisson:0.5"]
        .iter()
        .map(|n| {
            let law: LawSpec = n.parse().unwrap();
            (
                n.to_string(),
                law_measure(law, boxplus::laws::DEFAULT_LAW_GRID).unwrap(),
            )
        })
        .collect();
    for f in ["atom_uniform.json", "two_atoms_triangle.json"] {
        let text = std::fs::read_to_string(fixture(f)).unwrap();
        let spec = MeasureSpec::from_json(&text).unwrap();
        out.push((
            f.trim_end_matches(".json").to_string(),
            validate(&spec).unwrap(),
        ));
    }
    out
}

pub fn random_union(rng: &mut ChaCha8Rng) -> IntervalUnion {
    let k = rng.gen_range(1..=4);
    let ivs: Vec<Interval> = (0..k)
        .map(|_| {
            let a = rng.gen_range(-10.0..10.0);
            // one in five is a single point
            let len = if rng.gen_bool(0.2) {
                0.0
            } else {
                rng.gen_range(0.0..4.0)
            };
            Interval::new(a, a + len)
        })
        .collect();
    IntervalUnion::new(ivs)
}

// sample each set on a shared grid of n points, keep its endpoints, and
// take nearest neighbours by binary search
pub fn brute_force(a: &IntervalUnion, b: &IntervalUnion, n: usize) -> (f64, f64) {
    let lo = a.lo().unwrap().min(b.lo().unwrap());
    let hi = a.hi().unwrap().max(b.hi().unwrap());
    let step = (hi - lo) / (n - 1) as f64;
    let sample = |s: &IntervalUnion| {
        let mut pts: Vec<f64> = (0..n)
            .map(|i| lo + step * i as f64)
            .filter(|&x| s.contains(x))
            .collect();
        for iv in s.intervals() {
            pts.extend([iv.lo, iv.hi]);
        }
        pts.sort_by(f64::total_cmp);
        pts
    };
    let (pa, pb) = (sample(a), sample(b));
    let dir = |from: &[f64], to: &[f64]| {
        from.iter()
            .map(|&x| {
                let k = to.partition_point(|&v| v < x);
                let right = to.get(k).map_or(f64::INFINITY, |v| v - x);
                let left = if k > 0 { x - to[k - 1] } else { f64::INFINITY };
                left.min(right)
            })
            .fold(0.0, f64::max)
    };
    (dir(&pa, &pb).max(dir(&pb, &pa)), step)
}
