//! Shared fixtures for the engine benchmarks.

use std::sync::Arc;

use arr_core::{ArrangementSpec, Polynomial, PrimeField, Ring};

/// Four planes in general position and a smooth quadric through none of
/// their common points.
pub const PLANES_AND_QUADRIC: [&str; 5] = [
    "x0",
    "x1",
    "x2",
    "x0 + x1 + x2 + x3",
    "x0^2 + 3*x1*x2 - x3^2 + 2*x1*x3",
];

/// Three cubics in general position.
pub const THREE_CUBICS: [&str; 3] = [
    "x0^3 + x1^2*x2 - 2*x2^3 + x0*x1*x3 + x3^3",
    "x1^3 - x0*x2^2 + 5*x2*x3^2 + x0^2*x3",
    "x2^3 + x0^2*x1 - x1*x3^2 + 7*x0*x2*x3 - x3^3",
];

pub fn ring() -> Arc<Ring<PrimeField>> {
    Ring::new(PrimeField::default(), 4).unwrap()
}

pub fn forms(ring: &Arc<Ring<PrimeField>>, src: &[&str]) -> Vec<Polynomial<PrimeField>> {
    src.iter()
        .map(|s| Polynomial::parse(ring, s).unwrap())
        .collect()
}

pub fn arrangement(src: &[&str]) -> ArrangementSpec<PrimeField> {
    let r = ring();
    ArrangementSpec::new(&r, forms(&r, src)).unwrap()
}
