mod common;

use std::collections::BTreeSet;

use common::*;
use ringwalk_core::chain::build_b;
use ringwalk_core::ring::{coset_representatives, lann, r_xy, transitivity_witness};
use ringwalk_core::{ClassDistribution, MultSide, RingAnalysis};

// rows of the hand-computed 16 x 16 multiplicative matrix, in units of 1/16,
// states ordered by the binary word abcd of [[a,b],[c,d]]
const GOLDEN: [[i64; 16]; 16] = [
    [16, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [4, 4, 0, 0, 4, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [4, 0, 4, 0, 0, 0, 0, 0, 4, 0, 4, 0, 0, 0, 0, 0],
    [4, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0, 0, 4],
    [4, 4, 0, 0, 4, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [4, 4, 0, 0, 4, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1; 16],
    [1; 16],
    [4, 0, 4, 0, 0, 0, 0, 0, 4, 0, 4, 0, 0, 0, 0, 0],
    [1; 16],
    [4, 0, 4, 0, 0, 0, 0, 0, 4, 0, 4, 0, 0, 0, 0, 0],
    [1; 16],
    [4, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0, 0, 4],
    [1; 16],
    [1; 16],
    [4, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0, 0, 4],
];

#[test]
fn golden_matrix_m2_f2() {
    let r = m2(2);
    let an = RingAnalysis::new(&r);
    let b = build_b(&r, &ClassDistribution::q_uniform(&r, &an.classes), MultSide::Left);
    let idx = |w: usize| r.matrix_index(&[(w >> 3 & 1) as u32, (w >> 2 & 1) as u32, (w >> 1 & 1) as u32, (w & 1) as u32]).unwrap();
    for (i, row) in GOLDEN.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            assert_eq!(*b.get(idx(i), idx(j)), rat(v, 16), "entry ({i},{j})");
        }
    }
}

#[test]
fn right_multiplication_matrix_is_the_transpose_relabelling() {
    // for M_2 with transpose-invariant uniform Q, B_right(a,b) = B_left(aᵀ,bᵀ),
    // which is not B_left itself
    let r = m2(2);
    let an = RingAnalysis::new(&r);
    let q = ClassDistribution::q_uniform(&r, &an.classes);
    let left = build_b(&r, &q, MultSide::Left);
    let right = build_b(&r, &q, MultSide::Right);
    let tr = |x: usize| {
        let e = r.matrix_entries(x).unwrap();
        r.matrix_index(&[e[0], e[2], e[1], e[3]]).unwrap()
    };
    for a in r.elements() {
        for b in r.elements() {
            assert_eq!(right.get(a, b), left.get(tr(a), tr(b)));
        }
    }
    assert_ne!(left, right);
}

#[test]
fn orbit_stabilizer() {
    for r in small_rings() {
        let an = RingAnalysis::new(&r);
        let u = an.units.order();
        for x in r.elements() {
            let orbit = an.generator_set(x).len();
            assert_eq!(orbit * an.lstab(&r, x).len(), u, "{} at {x}", r.label());
            assert_eq!(coset_representatives(&r, &an.units, x).len(), orbit);
            let centralizer = an.units.elements().iter().filter(|&&g| r.mul(g, x) == r.mul(x, g)).count();
            assert_eq!(an.classes.class(an.classes.class_of(x)).size() * centralizer, u);
        }
    }
}

#[test]
fn generator_sets_partition_the_ring() {
    for r in small_rings() {
        let an = RingAnalysis::new(&r);
        let mut seen = BTreeSet::new();
        for ideal in an.ideals.ideals() {
            for &s in &ideal.generators {
                assert!(seen.insert(s), "{} repeats {s}", r.label());
                assert_eq!(an.ideals.ideal_of(s), an.ideals.ideal_of(ideal.generator));
            }
            // S_a is I_a minus the strictly smaller principal ideals
            let inside: BTreeSet<usize> = ideal
                .strictly_contains
                .iter()
                .flat_map(|&j| an.ideals.ideal(j).elements.iter().copied())
                .collect();
            let rest: Vec<usize> = ideal.elements.iter().copied().filter(|x| !inside.contains(x)).collect();
            assert_eq!(rest, ideal.generators);
        }
        assert_eq!(seen.len(), r.size());
    }
}

#[test]
fn r_xy_sizes_match_annihilators() {
    for r in small_rings() {
        let ann: Vec<usize> = r.elements().map(|y| lann(&r, y).len()).collect();
        for x in r.elements() {
            for y in r.elements() {
                let k = r_xy(&r, x, y).len();
                assert!(k == 0 || k == ann[y], "{}: |R_{{{x},{y}}}| = {k}", r.label());
            }
        }
    }
}

#[test]
fn transitivity_witnesses_exist() {
    for r in small_rings() {
        let an = RingAnalysis::new(&r);
        for ideal in an.ideals.ideals() {
            for &x in &ideal.generators {
                for &y in &ideal.generators {
                    let u = transitivity_witness(&r, &an.units, x, y).unwrap();
                    assert!(an.units.is_unit(u));
                    assert_eq!(r.mul(u, x), y);
                }
            }
        }
    }
}

#[test]
fn generator_sets_are_conjugation_stable() {
    for r in small_rings() {
        let an = RingAnalysis::new(&r);
        for x in r.elements() {
            for &g in an.units.elements() {
                let y = r.mul(r.mul(g, x), an.units.inverse(g).unwrap());
                assert_eq!(an.classes.class_of(x), an.classes.class_of(y));
                assert_eq!(an.ideals.ideal(an.ideals.ideal_of(x)).elements.len(), an.ideals.ideal(an.ideals.ideal_of(y)).elements.len());
            }
        }
    }
}
