mod common;

use common::{dim, multivector, vector};
use hypclif_core::Multivector;
use proptest::prelude::*;

fn rel(a: &Multivector, b: &Multivector, scale: f64) -> f64 {
    (a - b).norm() / scale.max(f64::MIN_POSITIVE)
}

proptest! {
    #[test]
    fn product_is_associative((a, b, c) in dim().prop_flat_map(|n| (multivector(n), multivector(n), multivector(n)))) {
        let lhs = &(&a * &b) * &c;
        let rhs = &a * &(&b * &c);
        prop_assert!(rel(&lhs, &rhs, a.norm() * b.norm() * c.norm()) <= 1e-12);
    }

    #[test]
    fn reverse_and_conjugate_are_anti_automorphisms((a, b) in dim().prop_flat_map(|n| (multivector(n), multivector(n)))) {
        let ab = &a * &b;
        let s = a.norm() * b.norm();
        prop_assert!(rel(&ab.reverse(), &(&b.reverse() * &a.reverse()), s) <= 1e-13);
        prop_assert!(rel(&ab.conjugate(), &(&b.conjugate() * &a.conjugate()), s) <= 1e-13);
    }

    #[test]
    fn hat_is_an_involutive_automorphism((a, b) in dim().prop_flat_map(|n| (multivector(n), multivector(n)))) {
        prop_assert!(rel(&(&a * &b).hat(), &(&a.hat() * &b.hat()), a.norm() * b.norm()) <= 1e-13);
        prop_assert_eq!(a.hat().hat(), a);
    }

    #[test]
    fn split_matches_hat_averages(a in dim().prop_flat_map(multivector)) {
        let n = a.dim();
        let en = Multivector::e(n, n);
        prop_assert_eq!(a.p_part(), (&a + &a.hat()).scale(0.5));
        let q = (&(&a - &a.hat()) * &en).scale(-0.5);
        prop_assert!((&a.q_part() - &q).max_abs() == 0.0);
        prop_assert!(rel(&Multivector::from_pq(&a.p_part(), &a.q_part()), &a, a.norm()) <= 1e-15);
        let qp = -(&(&en * &a.q_part()) * &en);
        prop_assert!((&a.q_prime() - &qp).max_abs() <= 1e-15);
    }

    #[test]
    fn vectors_invert(v in dim().prop_flat_map(vector)) {
        prop_assume!(v.norm() > 1e-3);
        let one = Multivector::one(v.dim());
        let prod = &v.to_multivector() * &v.vector_inverse().unwrap();
        prop_assert!((&prod - &one).norm() <= 1e-14);
    }

    #[test]
    fn versor_norm_is_real_part_of_a_times_conjugate(
        vs in dim().prop_flat_map(|n| prop::collection::vec(vector(n), 1..=4))
    ) {
        let n = vs[0].dim();
        let a = vs.iter().fold(Multivector::one(n), |acc, v| &acc * &v.to_multivector());
        let sq = a.norm_squared();
        prop_assume!(sq > 1e-12);
        prop_assert!(((&a * &a.conjugate()).scalar_part() - sq).abs() <= 1e-12 * sq);
    }
}
