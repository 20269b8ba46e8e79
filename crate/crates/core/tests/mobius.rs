mod common;

use common::upper_point;
use hypclif_core::calculus::{dirac_hodge, field};
use hypclif_core::formulas::{CovarianceMode, TransformedField};
use hypclif_core::mobius::{cayley_centered, sample_transform, ConformalKind, Generator, Subgroup};
use hypclif_core::{DiffConfig, Multivector, Point, VahlenTransform};
use proptest::prelude::*;

fn half_space_case(n: usize) -> impl Strategy<Value = (VahlenTransform, Point, Point)> {
    (any::<u64>(), upper_point(n), upper_point(n))
        .prop_map(move |(seed, x, y)| (sample_transform(n, seed, Subgroup::UpperHalfSpace).unwrap(), x, y))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reflection_and_cayley_norm_are_invariant((psi, x, y) in (3usize..=5).prop_flat_map(half_space_case)) {
        let (Ok(px), Ok(py), Ok(pyh)) = (psi.apply(&x), psi.apply(&y), psi.apply(&y.hat())) else {
            return Ok(());
        };
        let d = (&pyh - &py.hat()).norm();
        prop_assert!(d <= 1e-10 * py.norm().max(1.0), "{d}");
        let before = cayley_centered(&x, &y).unwrap().norm();
        let after = cayley_centered(&px, &py).unwrap().norm();
        prop_assert!(rel(before, after) <= 1e-10);
    }

    #[test]
    fn distance_ratio_profile_is_invariant((psi, x, y) in (3usize..=5).prop_flat_map(half_space_case)) {
        let profile = |a: &Point, b: &Point| (a.distance(b) / a.distance(&b.hat())).powi(3) / 3.0;
        let (Ok(px), Ok(py)) = (psi.apply(&x), psi.apply(&y)) else { return Ok(()); };
        prop_assert!(rel(profile(&x, &y), profile(&px, &py)) <= 1e-10);
    }

    #[test]
    fn word_and_coefficient_evaluation_agree(
        (psi, x, _) in (3usize..=5).prop_flat_map(half_space_case)
    ) {
        let (Ok(a), Ok(b)) = (psi.apply(&x), psi.apply_word(&x)) else { return Ok(()); };
        prop_assert!((&a - &b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn composition_is_evaluation_in_sequence(
        (s1, s2, x) in (3usize..=5).prop_flat_map(|n| (any::<u64>(), any::<u64>(), upper_point(n)))
    ) {
        let n = x.dim();
        let p1 = sample_transform(n, s1, Subgroup::UpperHalfSpace).unwrap();
        let p2 = sample_transform(n, s2, Subgroup::UpperHalfSpace).unwrap();
        let both = VahlenTransform::compose(&p1, &p2).unwrap();
        let Ok(mid) = p2.apply(&x) else { return Ok(()); };
        let (Ok(a), Ok(b)) = (both.apply(&x), p1.apply(&mid)) else { return Ok(()); };
        prop_assert!((&a - &b).norm() <= 1e-11 * a.norm().max(1.0));
    }

    #[test]
    fn half_space_is_preserved((psi, x, _) in (3usize..=5).prop_flat_map(half_space_case)) {
        prop_assert!(psi.preserves_upper_half_space());
        if let Ok(y) = psi.apply(&x) {
            prop_assert!(y.xn() > 0.0);
        }
    }
}

#[test]
fn seed_zero_word_is_frozen() {
    let psi = sample_transform(3, 0, Subgroup::UpperHalfSpace).unwrap();
    let w = psi.word();
    assert_eq!(w.len(), 5);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-15 * b.abs();
    assert!(matches!(w[0], Generator::Rotation { i: 1, j: 2, angle } if close(angle, 2.032851387392646)));
    assert_eq!(w[1], Generator::Inversion);
    assert!(matches!(w[2], Generator::Dilation(l) if close(l, 1.7439289051266897)));
    match &w[3] {
        Generator::Translation(t) => {
            assert!(close(t[0], 0.7614235447237818) && close(t[1], 0.5411075292706626));
            assert_eq!(t[2], 0.0);
        }
        g => panic!("expected a translation, got {g:?}"),
    }
    assert!(matches!(w[4], Generator::Rotation { i: 1, j: 2, angle } if close(angle, 3.0797545653768976)));
    assert_eq!(sample_transform(3, 0, Subgroup::UpperHalfSpace).unwrap(), psi);
}

/// Under an inversion the denominator `cv + d` is odd; conjugation and
/// reversion differ there and only the conjugated weight intertwines `M`.
#[test]
fn reversed_weight_fails_for_inversions() {
    let n = 3;
    let psi = VahlenTransform::inversion(n).unwrap();
    let f = field(n, |x: &Point| Multivector::e(3, 1).scale(x.xn()));
    let mf = &Multivector::e(3, 3) * &Multivector::e(3, 1);
    let pulled = TransformedField {
        inner: &f,
        psi: &psi,
        mode: CovarianceMode::Weighted,
    };
    let v = Point::from_slice(&[0.3, -0.4, 0.9]);
    let lhs = dirac_hodge(&pulled, &v, &DiffConfig::default()).unwrap();
    let weight = |kind| psi.conformal_factor(kind, &v).unwrap().to_multivector(n);
    let good = (&lhs - &(&weight(ConformalKind::JPrime) * &mf)).norm();
    let bad = (&lhs - &(&weight(ConformalKind::JPrimeReversed) * &mf)).norm();
    assert!(good < 1e-8, "{good}");
    assert!(bad > 1e-2, "{bad}");
}
