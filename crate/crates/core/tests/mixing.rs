mod common;

use common::*;
use ringwalk_core::chain::{build_m_side, AlphaParam};
use ringwalk_core::linalg::rational_to_f64;
use ringwalk_core::mixing::*;
use ringwalk_core::stationary::stationary_recursive;
use ringwalk_core::{ClassDistribution, MultSide, Rational, RingAnalysis};

#[test]
fn coupling_bound_on_listed_rings() {
    for r in [zn(6), b2(2), m2(2), m2(3)] {
        let an = RingAnalysis::new(&r);
        let q = ClassDistribution::q_uniform(&r, &an.classes);
        for (n, d) in [(1, 4), (1, 2)] {
            let a = AlphaParam::ratio(n, d).unwrap();
            let c = d_of_t(&r, &an, &q, &a, 20).unwrap();
            assert!(c.is_exact());
            assert!(c.bound_violations().is_empty(), "{} at α = {n}/{d}", r.label());
            assert!(c.is_monotone());
            for eps in [0.25, 0.1] {
                let t = c.t_mix(eps).expect("mixes within 20 steps");
                assert!(t as f64 <= mixing_bound(a.to_f64(), eps).unwrap());
            }
        }
    }
}

#[test]
fn initial_distance_is_one_minus_min_pi() {
    for r in small_rings() {
        let an = RingAnalysis::new(&r);
        let q = ramp_q(&r, &an);
        let a = AlphaParam::ratio(1, 3).unwrap();
        let pi = stationary_recursive(&r, &an, &q, &a).unwrap();
        let c = d_of_t(&r, &an, &q, &a, 3).unwrap();
        let min = pi.iter().min().unwrap().clone();
        assert_eq!(c.points[0].exact, Some(rat(1, 1) - min));
        assert!(c.points.iter().all(|p| (0.0..=1.0).contains(&p.d)));
    }
}

#[test]
fn horizon_is_capped() {
    let r = zn(3);
    let an = RingAnalysis::new(&r);
    let q = ClassDistribution::q_uniform(&r, &an.classes);
    let a = AlphaParam::ratio(1, 2).unwrap();
    assert_eq!(d_of_t(&r, &an, &q, &a, 65), Err(MixingError::HorizonTooLarge(65)));
}

#[test]
fn simulation_reaches_stationarity() {
    let r = m2(2);
    let an = RingAnalysis::new(&r);
    let q = ClassDistribution::q_uniform(&r, &an.classes);
    let a = AlphaParam::ratio(1, 2).unwrap();
    let pi: Vec<f64> = stationary_recursive(&r, &an, &q, &a).unwrap().iter().map(rational_to_f64).collect();
    for side in [MultSide::Left, MultSide::Right] {
        let s = simulate(&r, &q, &a, r.one(), 50, 100_000, 2024, side).unwrap();
        let emp = s.empirical();
        assert!((emp.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(tv_distance(&emp, &pi).unwrap() < 0.02);
        assert_eq!(s, simulate(&r, &q, &a, r.one(), 50, 100_000, 2024, side).unwrap());
    }
}

#[test]
fn one_step_frequencies_follow_the_matching_side() {
    let r = m2(2);
    let an = RingAnalysis::new(&r);
    let q = ramp_q(&r, &an);
    let a = AlphaParam::ratio(1, 3).unwrap();
    for side in [MultSide::Left, MultSide::Right] {
        let m = build_m_side(&r, &q, &a, side);
        for x in r.elements() {
            let s = simulate(&r, &q, &a, x, 1, 1_000_000, 99 + x as u64, side).unwrap();
            let emp = s.empirical();
            for y in r.elements() {
                let want = rational_to_f64(m.get(x, y));
                assert!((emp[y] - want).abs() < 0.005, "{side:?} row {x} col {y}: {} vs {want}", emp[y]);
            }
        }
    }
}

#[test]
fn alpha_one_gives_uniform_after_one_step() {
    let r = m2(2);
    let an = RingAnalysis::new(&r);
    let q = ClassDistribution::q_uniform(&r, &an.classes);
    let a = AlphaParam::with_boundary(rat(1, 1)).unwrap();
    let s = simulate(&r, &q, &a, 5, 1, 1_000_000, 1, MultSide::Left).unwrap();
    assert!(tv_distance(&s.empirical(), &[1.0 / 16.0; 16]).unwrap() < 0.01);
}

#[test]
fn q_samples_respect_class_weights() {
    // with α = 0 one step from 1 is a single draw from Q
    let r = b2(3);
    let an = RingAnalysis::new(&r);
    let q = ramp_q(&r, &an);
    let a = AlphaParam::with_boundary(rat(0, 1)).unwrap();
    let n = 400_000u64;
    let s = simulate(&r, &q, &a, r.one(), 1, n, 5, MultSide::Left).unwrap();
    for (i, c) in an.classes.classes().iter().enumerate() {
        let p = rational_to_f64(&(q.class_weight(i) * Rational::from_integer((c.size() as i64).into())));
        let got: u64 = c.elements.iter().map(|&x| s.counts[x]).sum();
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((got as f64 / n as f64 - p).abs() <= 3.0 * se + 1e-9, "class {i}");
    }
}
