mod common;

use boxplus::hausdorff::directed;
use boxplus::{hausdorff, IntervalUnion};
use common::{brute_force, random_union};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn agrees_with_dense_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let (a, b) = (random_union(&mut rng), random_union(&mut rng));
        let exact = hausdorff(&a, &b).unwrap();
        let (approx, step) = brute_force(&a, &b, 100_000);
        assert!(
            (exact - approx).abs() <= 2.0 * step,
            "{:?} {:?}: {exact} vs {approx}",
            a.intervals(),
            b.intervals()
        );
    }
}

#[test]
fn symmetric_and_triangle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let (a, b, c) = (
            random_union(&mut rng),
            random_union(&mut rng),
            random_union(&mut rng),
        );
        let ab = hausdorff(&a, &b).unwrap();
        assert_eq!(ab, hausdorff(&b, &a).unwrap());
        let bc = hausdorff(&b, &c).unwrap();
        let ac = hausdorff(&a, &c).unwrap();
        assert!(ac <= ab + bc + 1e-12);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
    }
}

#[test]
fn worked_examples() {
    let u = IntervalUnion::from_pairs;
    assert_eq!(
        hausdorff(&u(&[(0.0, 1.0)]), &u(&[(0.0, 1.0)])).unwrap(),
        0.0
    );
    assert_eq!(
        hausdorff(&u(&[(0.0, 1.0)]), &u(&[(2.0, 3.0)])).unwrap(),
        2.0
    );
    let (a, b) = (u(&[(0.0, 4.0)]), u(&[(0.0, 1.0), (3.0, 4.0)]));
    assert_eq!(hausdorff(&a, &b).unwrap(), 1.0);
    assert_eq!(directed(&a, &b).unwrap(), 1.0);
    assert_eq!(directed(&b, &a).unwrap(), 0.0);
    assert!(hausdorff(&IntervalUnion::empty(), &a).is_err());
}
