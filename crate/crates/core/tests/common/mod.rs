#![allow(dead_code)]

use hypclif_core::{Multivector, Point};
use proptest::prelude::*;

pub fn multivector(n: usize) -> impl Strategy<Value = Multivector> {
    prop::collection::vec(-1.0f64..1.0, 1 << n).prop_map(move |c| Multivector::from_coeffs(n, &c).unwrap())
}

pub fn vector(n: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(-1.0f64..1.0, n).prop_map(|c| Point::from_slice(&c))
}

/// A point with `x_n` in `[0.2, 2]`.
pub fn upper_point(n: usize) -> impl Strategy<Value = Point> {
    (prop::collection::vec(-1.0f64..1.0, n - 1), 0.2f64..2.0).prop_map(|(mut c, h)| {
        c.push(h);
        Point::from_slice(&c)
    })
}

pub fn dim() -> impl Strategy<Value = usize> {
    3usize..=5
}
