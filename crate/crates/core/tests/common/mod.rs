#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use ringwalk_core::field::field_make;
use ringwalk_core::ring::{ring_matrix, ring_product, ring_upper_triangular, ring_zn};
use ringwalk_core::{ClassDistribution, FiniteRing, Rational, RingAnalysis};

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn m2(q: u32) -> FiniteRing {
    ring_matrix(2, &field_make(q).unwrap()).unwrap()
}

pub fn b2(q: u32) -> FiniteRing {
    ring_upper_triangular(&field_make(q).unwrap()).unwrap()
}

pub fn zn(n: u32) -> FiniteRing {
    ring_zn(n).unwrap()
}

/// Every constructed ring with at most 100 elements used by the suites.
pub fn small_rings() -> Vec<FiniteRing> {
    vec![
        zn(1),
        zn(4),
        zn(6),
        zn(12),
        b2(2),
        b2(3),
        m2(2),
        m2(3),
        ring_product(&zn(2), &zn(3)).unwrap(),
        ring_product(&zn(2), &b2(2)).unwrap(),
        ring_product(&zn(3), &zn(3)).unwrap(),
    ]
}

/// Per-element weight proportional to `class id + 1`.
pub fn ramp_q(r: &FiniteRing, an: &RingAnalysis) -> ClassDistribution {
    let z: i64 = an
        .classes
        .classes()
        .iter()
        .enumerate()
        .map(|(i, c)| (i as i64 + 1) * c.size() as i64)
        .sum();
    let w: BTreeMap<usize, Rational> = an
        .classes
        .classes()
        .iter()
        .enumerate()
        .map(|(i, c)| (c.representative, rat(i as i64 + 1, z)))
        .collect();
    ClassDistribution::q_from_weights(r, &an.classes, &w).unwrap()
}

/// Mass 1/2 spread over the unit classes and 1/2 over the rest, uniform
/// within each half.
pub fn split_q(r: &FiniteRing, an: &RingAnalysis) -> ClassDistribution {
    let u = an.units.order() as i64;
    let n = r.size() as i64;
    if u == n {
        return ClassDistribution::q_uniform(r, &an.classes);
    }
    let w: BTreeMap<usize, Rational> = an
        .classes
        .classes()
        .iter()
        .map(|c| (c.representative, if c.invertible { rat(1, 2 * u) } else { rat(1, 2 * (n - u)) }))
        .collect();
    ClassDistribution::q_from_weights(r, &an.classes, &w).unwrap()
}

/// Per-element weight `w[c] / Σ w[c]·|C|` on class `c`; `w` cycles if short.
pub fn q_from_ints(r: &FiniteRing, an: &RingAnalysis, w: &[u32]) -> ClassDistribution {
    let classes = an.classes.classes();
    let wt = |i: usize| w[i % w.len()] as i64;
    let z: i64 = classes.iter().enumerate().map(|(i, c)| wt(i) * c.size() as i64).sum();
    let map: BTreeMap<usize, Rational> =
        classes.iter().enumerate().map(|(i, c)| (c.representative, rat(wt(i), z))).collect();
    ClassDistribution::q_from_weights(r, &an.classes, &map).unwrap()
}
