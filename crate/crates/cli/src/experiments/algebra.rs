//! Algebra laws on random multivectors and the exact point-source identities.

use hypclif_core::kernels::{teodorescu_identity_e, teodorescu_identity_f};
use hypclif_core::{Multivector, Point};
use rand::Rng;

use super::{random_multivector, task, uniform_point, Ctx, Task};
use crate::config::Experiment;
use crate::report::Row;

const EXP: Experiment = Experiment::AlgebraIdentities;

pub(super) fn tasks<'a>(ctx: &'a Ctx<'a>, n: usize) -> Vec<Task<'a>> {
    vec![task(move || laws(ctx, n)), task(move || identities(ctx, n))]
}

/// Running maxima, one per check, in report order.
struct Maxima(Vec<(&'static str, f64)>);

impl Maxima {
    fn new(names: &[&'static str]) -> Self {
        Maxima(names.iter().map(|n| (*n, 0.0)).collect())
    }

    fn record(&mut self, name: &str, v: f64) {
        let slot = self.0.iter_mut().find(|(n, _)| *n == name).expect("known check");
        if v.is_nan() || slot.1.is_nan() {
            slot.1 = f64::NAN;
        } else {
            slot.1 = slot.1.max(v);
        }
    }

    fn rows(self, ctx: &Ctx, n: usize, param: &str) -> Vec<Row> {
        self.0
            .into_iter()
            .map(|(name, v)| ctx.row(EXP, name, n, None, param, Ok(v)))
            .collect()
    }
}

fn rel(a: &Multivector, b: &Multivector, scale: f64) -> f64 {
    (a - b).norm() / scale
}

fn laws(ctx: &Ctx, n: usize) -> Vec<Row> {
    let mut rng = ctx.rng(EXP, n, 0);
    let mut m = Maxima::new(&[
        "associativity",
        "reverse_anti_automorphism",
        "conjugate_anti_automorphism",
        "grade_involution_automorphism",
        "hat_automorphism",
        "hat_involution",
        "p_split",
        "q_split",
        "q_prime",
        "pq_reconstruction",
        "vector_inverse",
        "versor_norm",
    ]);
    let en = Multivector::e(n, n);
    let samples = ctx.cfg.probes.algebra;
    for _ in 0..samples {
        let a = random_multivector(&mut rng, n);
        let b = random_multivector(&mut rng, n);
        let c = random_multivector(&mut rng, n);
        let (na, nb) = (a.norm(), b.norm());
        let ab = &a * &b;
        m.record(
            "associativity",
            rel(&(&ab * &c), &(&a * &(&b * &c)), na * nb * c.norm()),
        );
        m.record(
            "reverse_anti_automorphism",
            rel(&ab.reverse(), &(&b.reverse() * &a.reverse()), na * nb),
        );
        m.record(
            "conjugate_anti_automorphism",
            rel(&ab.conjugate(), &(&b.conjugate() * &a.conjugate()), na * nb),
        );
        m.record(
            "grade_involution_automorphism",
            rel(
                &ab.grade_involution(),
                &(&a.grade_involution() * &b.grade_involution()),
                na * nb,
            ),
        );
        m.record("hat_automorphism", rel(&ab.hat(), &(&a.hat() * &b.hat()), na * nb));
        m.record("hat_involution", rel(&a.hat().hat(), &a, na));
        m.record("p_split", rel(&a.p_part(), &(&a + &a.hat()).scale(0.5), na));
        m.record("q_split", rel(&a.q_part(), &(&(&a - &a.hat()) * &en).scale(-0.5), na));
        m.record("q_prime", rel(&a.q_prime(), &-(&(&en * &a.q_part()) * &en), na));
        m.record(
            "pq_reconstruction",
            rel(&Multivector::from_pq(&a.p_part(), &a.q_part()), &a, na),
        );

        let v = Point::new((0..n).map(|_| rng.gen_range(-1.0..1.0)));
        if v.norm() > 1e-3 {
            let inv = v.vector_inverse().expect("nonzero vector");
            m.record(
                "vector_inverse",
                (&(&v.to_multivector() * &inv) - &Multivector::one(n)).norm(),
            );
        }
        let k = rng.gen_range(1..=4);
        let versor = (0..k).fold(Multivector::one(n), |acc, _| {
            let w = Point::new((0..n).map(|_| rng.gen_range(-1.0..1.0)));
            &acc * &w.to_multivector()
        });
        let sq = versor.norm_squared();
        if sq > 1e-12 {
            m.record(
                "versor_norm",
                ((&versor * &versor.conjugate()).scalar_part() - sq).abs() / sq,
            );
        }
    }
    m.rows(ctx, n, &format!("samples={samples}"))
}

fn identities(ctx: &Ctx, n: usize) -> Vec<Row> {
    let mut rng = ctx.rng(EXP, n, 1);
    let mut m = Maxima::new(&["point_source_identity_e", "point_source_identity_f"]);
    let pairs = ctx.cfg.probes.identity_pairs;
    for _ in 0..pairs {
        let x = uniform_point(&mut rng, n, -1.0, 1.0, (0.1, 2.0));
        let y = uniform_point(&mut rng, n, -1.0, 1.0, (0.1, 2.0));
        m.record(
            "point_source_identity_e",
            teodorescu_identity_e(&x, &y).relative_error(),
        );
        m.record(
            "point_source_identity_f",
            teodorescu_identity_f(&x, &y).relative_error(),
        );
    }
    m.rows(ctx, n, &format!("pairs={pairs}"))
}
