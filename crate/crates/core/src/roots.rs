/// Bisection on a predicate that holds at `lo` and fails at `hi` (in either
/// order along the line). Returns the final bracket `(inside, outside)`
/// with `|inside - outside| <= tol`.
pub fn bisect<P>(mut inside: f64, mut outside: f64, tol: f64, pred: P) -> (f64, f64)
where
    P: Fn(f64) -> bool,
{
    debug_assert!(tol > 0.0);
    for _ in 0..200 {
        if (outside - inside).abs() <= tol {
            break;
        }
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if pred(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    (inside, outside)
}

/// Illinois regula falsi for a decreasing `f` with `f(a) > 0 >= f(b)`.
/// Stops once `done(a, b)` holds and returns the final bracket `(a, b)`.
pub fn illinois<F, D>(mut a: f64, mut b: f64, f: F, done: D) -> (f64, f64)
where
    F: Fn(f64) -> f64,
    D: Fn(f64, f64) -> bool,
{
    let mut fa = f(a);
    let mut fb = f(b);
    debug_assert!(fa > 0.0 && fb <= 0.0);
    let mut side = 0;
    for _ in 0..200 {
        if done(a, b) {
            break;
        }
        let mut s = (a * fb - b * fa) / (fb - fa);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if !(s > lo && s < hi) {
            s = 0.5 * (a + b);
            if s == a || s == b {
                break;
            }
        }
        let fs = f(s);
        if fs > 0.0 {
            a = s;
            fa = fs;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        } else {
            b = s;
            fb = fs;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        }
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let (a, b) = bisect(0.0, 2.0, 1e-13, |x| x * x < 2.0);
        assert!((a - 2f64.sqrt()).abs() < 1e-13);
        assert!(a < b);
    }

    #[test]
    fn reversed_bracket() {
        let (a, b) = bisect(3.0, 0.0, 1e-12, |x| x > 1.0);
        assert!((a - 1.0).abs() <= 1e-12 && a > b);
    }

    #[test]
    fn illinois_finds_cube_root() {
        let (a, b) = illinois(0.0, 5.0, |x| 3.0 - x * x * x, |a, b| (b - a).abs() < 1e-13);
        assert!((a - 3f64.cbrt()).abs() < 1e-12 && (b - 3f64.cbrt()).abs() < 1e-12);
    }
}
