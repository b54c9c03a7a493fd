use boxplus::{
    cauchy, f_transform, g_value, law_measure, nevanlinna_h, validate, Atom, LawSpec, Measure,
    MeasureSpec, Segment, UpperPoint,
};
use num_complex::Complex64;
use quadrature::double_exponential;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// tanh-sinh on each piece, split at x and geometrically around it so the
// peak of width y always sits at a subinterval end
fn quad_cauchy(spec: &MeasureSpec, x: f64, y: f64) -> Complex64 {
    let mut g = Complex64::new(0.0, 0.0);
    for a in &spec.atoms {
        g += a.m / Complex64::new(x - a.x, y);
    }
    for seg in &spec.segments {
        for w in 0..seg.xs.len() - 1 {
            let (a, b) = (seg.xs[w], seg.xs[w + 1]);
            let (pa, pb) = (seg.ys[w], seg.ys[w + 1]);
            let p = |s: f64| pa + (pb - pa) * (s - a) / (b - a);
            let mut cuts = vec![a, b];
            for k in 0..9 {
                let d = y * 10f64.powi(k);
                cuts.extend([x - d, x, x + d]);
            }
            cuts.retain(|&c| c >= a && c <= b);
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            for c in cuts.windows(2) {
                let re = double_exponential::integrate(
                    |s| p(s) * (x - s) / ((x - s).powi(2) + y * y),
                    c[0],
                    c[1],
                    1e-15,
                );
                let im = double_exponential::integrate(
                    |s| -p(s) * y / ((x - s).powi(2) + y * y),
                    c[0],
                    c[1],
                    1e-15,
                );
                g += Complex64::new(re.integral, im.integral);
            }
        }
    }
    g
}

fn uniform_spec() -> MeasureSpec {
    MeasureSpec {
        atoms: vec![],
        segments: vec![Segment {
            xs: vec![-0.5, 1.5],
            ys: vec![0.5, 0.5],
        }],
    }
}

fn mixed_spec() -> MeasureSpec {
    MeasureSpec {
        atoms: vec![Atom { x: -2.0, m: 0.2 }, Atom { x: 0.3, m: 0.1 }],
        segments: vec![
            Segment {
                xs: vec![-1.0, -0.2, 0.0, 0.7],
                ys: vec![0.0, 0.6, 0.4, 0.0],
            },
            Segment {
                xs: vec![1.0, 2.0],
                ys: vec![0.3, 0.14],
            },
        ],
    }
}

fn compare(spec: &MeasureSpec, seed: u64) {
    let m = validate(spec).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let x = rng.gen_range(-3.0..3.0);
        let y = rng.gen_range(1e-6f64.ln()..10f64.ln()).exp();
        let got = cauchy(&m, UpperPoint::new(x, y).unwrap()).unwrap();
        let want = quad_cauchy(spec, x, y);
        let rel = (got - want).norm() / want.norm();
        worst = worst.max(rel);
        assert!(rel < 1e-8, "z = {x} + {y}i: {got} vs {want}");
        assert!(got.im < 0.0);
    }
    eprintln!("worst relative error {worst:.2e}");
}

#[test]
fn constant_segment_matches_quadrature() {
    compare(&uniform_spec(), 1);
}

#[test]
fn mixed_measure_matches_quadrature() {
    let spec = mixed_spec();
    let total: f64 = spec.atoms.iter().map(|a| a.m).sum::<f64>()
        + spec.segments.iter().map(|s| s.mass()).sum::<f64>();
    assert!((total - 1.0).abs() < 1e-12, "{total}");
    compare(&spec, 2);
}

fn semicircle() -> Measure {
    law_measure(LawSpec::Semicircle { variance: 1.0 }, 401).unwrap()
}

#[test]
fn semicircle_at_i() {
    let m = semicircle();
    let z = UpperPoint::new(0.0, 1.0).unwrap();
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let g = cauchy(&m, z).unwrap();
    assert!((g - Complex64::new(0.0, -golden)).norm() < 1e-6, "{g}");
    let f = f_transform(&m, z).unwrap();
    assert!((f - Complex64::new(0.0, 1.0 + golden)).norm() < 1e-6, "{f}");
    assert!((nevanlinna_h(&m, 0.0, 1.0) - golden).abs() < 1e-6);
}

#[test]
fn semicircle_g_at_three() {
    // outside [-2, 2], F = z - G so g(x) = -G'(x) = (x / √(x² - 4) - 1) / 2
    let m = semicircle();
    let want = (3.0 / 5f64.sqrt() - 1.0) / 2.0;
    let g = g_value(&m, 3.0, 1e-9, 1e12);
    assert!((g - want).abs() < 1e-5, "{g} vs {want}");
    let (a, b) = (nevanlinna_h(&m, 3.0, 1e-6), nevanlinna_h(&m, 3.0, 1e-7));
    assert!((a - b).abs() / b < 1e-5);
    assert!(g_value(&m, 0.0, 1e-9, 1e12).is_infinite());
    assert!(g_value(&m, 2.0 + 1e3, 1e-9, 1e12) < 1e-5);
}

#[test]
fn nevanlinna_lower_bound_on_random_points() {
    let m = validate(&mixed_spec()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let x = rng.gen_range(-5.0..5.0);
        let y = rng.gen_range(1e-6f64.ln()..10f64.ln()).exp();
        let f = f_transform(&m, UpperPoint::new(x, y).unwrap()).unwrap();
        assert!(f.im >= y * (1.0 - 1e-12), "{x} {y} {f}");
        assert!(nevanlinna_h(&m, x, y) >= 0.0);
    }
}

#[test]
fn normalization_at_infinity() {
    for spec in [uniform_spec(), mixed_spec()] {
        let m = validate(&spec).unwrap();
        let g = cauchy(&m, UpperPoint::new(0.0, 1e7).unwrap()).unwrap();
        assert!((Complex64::new(0.0, 1e7) * g - 1.0).norm() < 1e-6);
    }
}
