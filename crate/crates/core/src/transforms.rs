//! Cauchy and F-transforms of a [`Measure`] on the closed upper half-plane.
//!
//! Atoms contribute `m / (z - a)` exactly. Each linear piece of the density is
//! integrated in closed form:
//!
//! ```text
//! ∫_a^b (pa + k (s - a)) / (z - s) ds = pa L + k ((z - a) L - h),
//! L = log((z - a) / (z - b)),  h = b - a
//! ```
//!
//! `L` is evaluated from the real and imaginary parts of the ratio directly
//! (`ln_1p` and `atan2`), which never crosses the branch cut and keeps full
//! relative accuracy when `Im z` is tiny. Far from the piece both `L` and
//! `(z - a) L - h` come from their power series in `h / (z - a)`.
//!
//! The Nevanlinna measure `ρ` of `F_μ` is never built; everything defined
//! through it is read off `Im F_μ(x + iy) / y - 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measure::{Measure, Piece};

/// A point `x + iy` of the closed upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperPoint {
    pub x: f64,
    pub y: f64,
}

impl UpperPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() || y < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "{x} + {y}i is not in the closed upper half-plane"
            )));
        }
        Ok(UpperPoint { x, y })
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

// pieces shorter than this fraction of |z - a| use the series
const FAR_RATIO: f64 = 0.1;

/// `G_μ(z) = ∫ dμ(s) / (z - s)`.
pub fn cauchy(m: &Measure, z: UpperPoint) -> Result<Complex64> {
    if z.y == 0.0 && m.atoms().iter().any(|a| a.x == z.x) {
        return Err(Error::PoleOnAxis(z.x));
    }
    Ok(cauchy_at(m, z.x, z.y))
}

/// `F_μ(z) = 1 / G_μ(z)`.
pub fn f_transform(m: &Measure, z: UpperPoint) -> Result<Complex64> {
    let g = cauchy(m, z)?;
    if g == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroCauchy { re: z.x, im: z.y });
    }
    Ok(reciprocal(g))
}

/// `Im F_μ(x + iy) / y - 1`, i.e. `∫ (1 + s²) / ((x - s)² + y²) dρ(s)`.
pub fn nevanlinna_h(m: &Measure, x: f64, y: f64) -> f64 {
    debug_assert!(y > 0.0);
    let g = cauchy_at(m, x, y);
    let n = g.norm_sqr();
    if n == 0.0 {
        return f64::INFINITY;
    }
    (-g.im / n / y - 1.0).max(0.0)
}

/// Estimate of `g(x) = lim_{y↓0} h(x, y)`.
///
/// Returns `f64::INFINITY` when `h(x, y_floor)` exceeds `cap` or when `h`
/// still grows like `1/y` (or faster) between `2 y_floor` and `y_floor`.
/// Finite values get one Richardson step in `y²`.
pub fn g_value(m: &Measure, x: f64, y_floor: f64, cap: f64) -> f64 {
    let h1 = nevanlinna_h(m, x, y_floor);
    if !(h1 <= cap) {
        return f64::INFINITY;
    }
    let h2 = nevanlinna_h(m, x, 2.0 * y_floor);
    if h1 > 1.5 * h2 && h1 > 1.0 {
        return f64::INFINITY;
    }
    (h1 + (h1 - h2) / 3.0).max(0.0)
}

/// `G_μ(x + iy)` without precondition checks.
pub(crate) fn cauchy_at(m: &Measure, x: f64, y: f64) -> Complex64 {
    let z = Complex64::new(x, y);
    let mut g = Complex64::new(0.0, 0.0);
    for a in m.atoms() {
        g += a.m / (z - a.x);
    }
    for p in m.pieces() {
        g += piece_integral(p, x, y);
    }
    g
}

/// `1/w`, with `1/∞ = 0`.
pub(crate) fn reciprocal(w: Complex64) -> Complex64 {
    if !w.re.is_finite() || !w.im.is_finite() {
        return Complex64::new(0.0, 0.0);
    }
    w.inv()
}

fn scaled(c: f64, l: Complex64) -> Complex64 {
    if c == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        c * l
    }
}

fn piece_integral(p: &Piece, x: f64, y: f64) -> Complex64 {
    let h = p.b - p.a;
    let z = Complex64::new(x, y);
    let wa = z - p.a;
    let wa_abs = wa.norm();

    if h < FAR_RATIO * wa_abs {
        let r = h / wa;
        let mut rk = r;
        let mut log_sum = Complex64::new(0.0, 0.0);
        let mut k_sum = Complex64::new(0.0, 0.0);
        for k in 1..64 {
            let kf = k as f64;
            log_sum += rk / kf;
            k_sum += rk / (kf + 1.0);
            if rk.norm() < 1e-18 {
                break;
            }
            rk *= r;
        }
        return scaled(p.pa, log_sum) + p.slope * h * k_sum;
    }

    let da = x - p.a;
    let db = x - p.b;
    let y2 = y * y;
    let num = da * da + y2;
    let den = db * db + y2;
    let re = if num > 0.5 * den && num < 2.0 * den {
        0.5 * (h * (2.0 * x - p.a - p.b) / den).ln_1p()
    } else {
        0.5 * (num.ln() - den.ln())
    };
    let im = (-y * h).atan2(da * db + y2);
    let l = Complex64::new(re, im);

    let wb = z - p.b;
    if wa_abs <= wb.norm() {
        let k = if wa_abs == 0.0 {
            Complex64::from(-h)
        } else {
            wa * l - h
        };
        scaled(p.pa, l) + scaled(p.slope, k)
    } else {
        let k = if wb.norm() == 0.0 {
            Complex64::from(-h)
        } else {
            wb * l - h
        };
        scaled(p.pb, l) + scaled(p.slope, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{validate, Atom, MeasureSpec, Segment};

    fn bernoulli() -> Measure {
        validate(&MeasureSpec {
            atoms: vec![Atom { x: -1.0, m: 0.5 }, Atom { x: 1.0, m: 0.5 }],
            segments: vec![],
        })
        .unwrap()
    }

    fn uniform() -> Measure {
        validate(&MeasureSpec {
            atoms: vec![],
            segments: vec![Segment {
                xs: vec![-1.0, 0.0, 1.0],
                ys: vec![0.5, 0.5, 0.5],
            }],
        })
        .unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn bernoulli_transforms_at_i() {
        let m = bernoulli();
        let z = UpperPoint::new(0.0, 1.0).unwrap();
        assert!(close(
            cauchy(&m, z).unwrap(),
            Complex64::new(0.0, -0.5),
            1e-15
        ));
        assert!(close(
            f_transform(&m, z).unwrap(),
            Complex64::new(0.0, 2.0),
            1e-14
        ));
        assert!((nevanlinna_h(&m, 0.0, 1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pole_on_axis() {
        let m = bernoulli();
        let z = UpperPoint::new(1.0, 0.0).unwrap();
        assert_eq!(cauchy(&m, z), Err(Error::PoleOnAxis(1.0)));
        assert!(UpperPoint::new(0.0, -1.0).is_err());
    }

    #[test]
    fn zero_cauchy_in_gap() {
        // G of the symmetric Bernoulli law vanishes at 0
        let m = bernoulli();
        let z = UpperPoint::new(0.0, 0.0).unwrap();
        assert!(matches!(f_transform(&m, z), Err(Error::ZeroCauchy { .. })));
    }

    #[test]
    fn uniform_closed_form() {
        // G(z) = ½ log((z+1)/(z-1)) for the uniform law on [-1, 1]
        let m = uniform();
        for &(x, y) in &[
            (0.0, 1.0),
            (0.3, 1e-7),
            (2.5, 0.2),
            (-40.0, 3.0),
            (1.0, 1e-3),
        ] {
            let z = Complex64::new(x, y);
            let exact = 0.5 * ((z + 1.0) / (z - 1.0)).ln();
            let got = cauchy(&m, UpperPoint::new(x, y).unwrap()).unwrap();
            assert!(close(got, exact, 1e-13 * exact.norm().max(1.0)), "{x} {y}");
        }
    }

    #[test]
    fn boundary_value_inside_support() {
        // Im G(x + i0) = -π p(x)
        let m = uniform();
        let g = cauchy(&m, UpperPoint::new(0.25, 0.0).unwrap()).unwrap();
        assert!((g.im + std::f64::consts::PI * 0.5).abs() < 1e-14);
        let gap = cauchy(&m, UpperPoint::new(3.0, 0.0).unwrap()).unwrap();
        assert_eq!(gap.im, 0.0);
        assert!((gap.re - 0.5 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn large_z_normalization() {
        for m in [bernoulli(), uniform()] {
            let z = Complex64::new(0.0, 1e6);
            let g = cauchy(&m, UpperPoint::new(0.0, 1e6).unwrap()).unwrap();
            assert!(close(z * g, Complex64::new(1.0, 0.0), 1e-9));
        }
    }

    #[test]
    fn g_value_decays_and_diverges() {
        let m = uniform();
        assert!(g_value(&m, 0.0, 1e-9, 1e12).is_infinite());
        let far = g_value(&m, 1e3, 1e-9, 1e12);
        assert!(far > 0.0 && far < 1e-6);
        // Bernoulli: ρ = δ_0 so g(x) = 1/x²
        let b = bernoulli();
        assert!((g_value(&b, 0.5, 1e-9, 1e12) - 4.0).abs() < 1e-9);
        assert!(g_value(&b, 0.0, 1e-9, 1e12).is_infinite());
    }
}
