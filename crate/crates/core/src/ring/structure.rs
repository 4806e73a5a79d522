//! Units, similarity classes, principal left ideals and the sets built from them.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{FiniteRing, RingError};

#[derive(Debug, Clone)]
pub struct UnitGroup {
    elements: Vec<usize>,
    inverse: Vec<Option<usize>>,
}

impl UnitGroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_unit(&self, x: usize) -> bool {
        self.inverse[x].is_some()
    }

    pub fn inverse(&self, x: usize) -> Option<usize> {
        self.inverse[x]
    }
}

/// Units found by a left-inverse scan. In a finite ring a left inverse is a
/// two-sided inverse; that is asserted for every unit found.
pub fn units(r: &FiniteRing) -> UnitGroup {
    let n = r.size();
    let mut inverse = vec![None; n];
    let mut elements = Vec::new();
    for x in 0..n {
        if let Some(y) = (0..n).find(|&y| r.mul(y, x) == r.one()) {
            assert_eq!(r.mul(x, y), r.one(), "left inverse of {x} is not a right inverse");
            inverse[x] = Some(y);
            elements.push(x);
        }
    }
    UnitGroup { elements, inverse }
}

#[derive(Debug, Clone)]
pub struct SimilarityClass {
    /// Least element index in the class.
    pub representative: usize,
    /// Sorted member indices.
    pub elements: Vec<usize>,
    pub invertible: bool,
}

impl SimilarityClass {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// Conjugation orbits `{u r u⁻¹ : u ∈ U_R}`, ordered by representative.
#[derive(Debug, Clone)]
pub struct SimilarityPartition {
    classes: Vec<SimilarityClass>,
    class_of: Vec<usize>,
}

impl SimilarityPartition {
    pub fn classes(&self) -> &[SimilarityClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn class(&self, id: usize) -> &SimilarityClass {
        &self.classes[id]
    }

    /// Class id whose representative is `x`, if `x` is a representative.
    pub fn class_with_representative(&self, x: usize) -> Option<usize> {
        let id = *self.class_of.get(x)?;
        (self.classes[id].representative == x).then_some(id)
    }

    /// ψ, the list of representatives.
    pub fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes.iter().map(|c| c.representative)
    }

    /// Ids of the classes inside the unit group (ψ^×).
    pub fn unit_classes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.classes.len()).filter(|&i| self.classes[i].invertible)
    }
}

pub fn similarity_classes(r: &FiniteRing, u: &UnitGroup) -> SimilarityPartition {
    let n = r.size();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut elements = Vec::new();
        for &g in u.elements() {
            let y = r.mul(r.mul(g, x), u.inverse(g).unwrap());
            if class_of[y] == usize::MAX {
                class_of[y] = id;
                elements.push(y);
            }
        }
        elements.sort_unstable();
        let invertible = u.is_unit(x);
        debug_assert!(elements.iter().all(|&y| u.is_unit(y) == invertible));
        classes.push(SimilarityClass {
            representative: x,
            elements,
            invertible,
        });
    }
    SimilarityPartition { classes, class_of }
}

#[derive(Debug, Clone)]
pub struct PrincipalIdeal {
    /// Least-index generator (the element of φ for this ideal).
    pub generator: usize,
    /// Sorted elements of `I_a = R·a`.
    pub elements: Vec<usize>,
    /// `S_a`, the elements generating this ideal, sorted.
    pub generators: Vec<usize>,
    /// Ids of the principal left ideals strictly contained in this one.
    pub strictly_contains: Vec<usize>,
    /// Ids of the principal left ideals strictly containing this one.
    pub strictly_contained_in: Vec<usize>,
}

/// The distinct principal left ideals of a ring, ordered by generator index.
/// For generators `a, b ∈ φ`, `a ≤ b` iff `I_b ⊆ I_a`.
#[derive(Debug, Clone)]
pub struct IdealPoset {
    ideals: Vec<PrincipalIdeal>,
    ideal_of: Vec<usize>,
    members: Vec<Vec<bool>>,
}

impl IdealPoset {
    pub fn ideals(&self) -> &[PrincipalIdeal] {
        &self.ideals
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn ideal(&self, id: usize) -> &PrincipalIdeal {
        &self.ideals[id]
    }

    /// Id of `I_x`.
    pub fn ideal_of(&self, x: usize) -> usize {
        self.ideal_of[x]
    }

    /// φ, the canonical generators.
    pub fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.ideals.iter().map(|i| i.generator)
    }

    pub fn contains(&self, id: usize, x: usize) -> bool {
        self.members[id][x]
    }

    /// `I_inner ⊆ I_outer`.
    pub fn is_subideal(&self, inner: usize, outer: usize) -> bool {
        inner == outer || self.ideals[outer].strictly_contains.contains(&inner)
    }

    /// True iff `a ≤ b` in the generator order, i.e. `I_b ⊆ I_a`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.is_subideal(self.ideal_of(b), self.ideal_of(a))
    }

    /// `x ∈ S_a` for the ideal of `a`.
    pub fn in_generator_set(&self, a: usize, x: usize) -> bool {
        self.ideal_of[x] == self.ideal_of[a]
    }

    /// Ideal ids with every ideal listed before all ideals it strictly
    /// contains; ties broken by generator index.
    pub fn top_down_order(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.ideals.len()).collect();
        ids.sort_by_key(|&i| (core::cmp::Reverse(self.ideals[i].elements.len()), self.ideals[i].generator));
        ids
    }
}

pub fn ideal_poset(r: &FiniteRing) -> IdealPoset {
    let n = r.size();
    let mut by_set: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for a in 0..n {
        let mut set: Vec<usize> = (0..n).map(|x| r.mul(x, a)).collect();
        set.sort_unstable();
        set.dedup();
        by_set.entry(set).or_default().push(a);
    }
    let mut raw: Vec<(Vec<usize>, Vec<usize>)> = by_set.into_iter().collect();
    raw.sort_by_key(|(_, gens)| gens[0]);
    let mut ideal_of = vec![0usize; n];
    let mut members = Vec::with_capacity(raw.len());
    for (id, (set, gens)) in raw.iter().enumerate() {
        for &g in gens {
            ideal_of[g] = id;
        }
        let mut m = vec![false; n];
        for &x in set {
            m[x] = true;
        }
        members.push(m);
    }
    let k = raw.len();
    let mut ideals: Vec<PrincipalIdeal> = raw
        .into_iter()
        .map(|(elements, generators)| PrincipalIdeal {
            generator: generators[0],
            elements,
            generators,
            strictly_contains: Vec::new(),
            strictly_contained_in: Vec::new(),
        })
        .collect();
    for i in 0..k {
        for j in 0..k {
            if i != j && ideals[j].elements.iter().all(|&x| members[i][x]) {
                ideals[i].strictly_contains.push(j);
                ideals[j].strictly_contained_in.push(i);
            }
        }
    }
    IdealPoset {
        ideals,
        ideal_of,
        members,
    }
}

/// `LStab(a) = {x ∈ U_R : xa = a}`.
pub fn lstab(r: &FiniteRing, u: &UnitGroup, a: usize) -> Vec<usize> {
    u.elements().iter().copied().filter(|&x| r.mul(x, a) == a).collect()
}

/// `LAnn(a) = {x ∈ R : xa = 0}`.
pub fn lann(r: &FiniteRing, a: usize) -> Vec<usize> {
    r.elements().filter(|&x| r.mul(x, a) == r.zero()).collect()
}

/// `R_{x,y} = {r : ry = x}`.
pub fn r_xy(r: &FiniteRing, x: usize, y: usize) -> Vec<usize> {
    r.elements().filter(|&t| r.mul(t, y) == x).collect()
}

/// A unit `u` with `u·x = y`, found by scanning the unit group.
pub fn transitivity_witness(
    r: &FiniteRing,
    u: &UnitGroup,
    x: usize,
    y: usize,
) -> Result<usize, RingError> {
    u.elements()
        .iter()
        .copied()
        .find(|&g| r.mul(g, x) == y)
        .ok_or(RingError::NoWitness { x, y })
}

/// Left coset representatives of `LStab(x)` in `U_R`, least index per coset.
///
/// Cosets `g·LStab(x)` correspond to the points `g·x` of `S_x`.
pub fn coset_representatives(r: &FiniteRing, u: &UnitGroup, x: usize) -> Vec<usize> {
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for &g in u.elements() {
        seen.entry(r.mul(g, x)).or_insert(g);
    }
    let mut reps: Vec<usize> = seen.into_values().collect();
    reps.sort_unstable();
    reps
}

/// `F_a` as similarity-class ids: classes `C` with `(C·S_a) ∩ S_a ≠ ∅`.
pub fn f_set(
    r: &FiniteRing,
    classes: &SimilarityPartition,
    ideals: &IdealPoset,
    a: usize,
) -> Vec<usize> {
    let target = ideals.ideal_of(a);
    let s_a = &ideals.ideal(target).generators;
    (0..classes.len())
        .filter(|&c| {
            classes.class(c).elements.iter().any(|&t| {
                s_a.iter().any(|&s| ideals.ideal_of(r.mul(t, s)) == target)
            })
        })
        .collect()
}

/// Units, similarity classes and ideal poset of one ring, computed once.
#[derive(Debug, Clone)]
pub struct RingAnalysis {
    pub units: UnitGroup,
    pub classes: SimilarityPartition,
    pub ideals: IdealPoset,
}

impl RingAnalysis {
    pub fn new(r: &FiniteRing) -> RingAnalysis {
        let units = units(r);
        let classes = similarity_classes(r, &units);
        let ideals = ideal_poset(r);
        RingAnalysis {
            units,
            classes,
            ideals,
        }
    }

    pub fn lstab(&self, r: &FiniteRing, a: usize) -> Vec<usize> {
        lstab(r, &self.units, a)
    }

    pub fn f_set(&self, r: &FiniteRing, a: usize) -> Vec<usize> {
        f_set(r, &self.classes, &self.ideals, a)
    }

    /// `S_a` for the ideal generated by `a`.
    pub fn generator_set(&self, a: usize) -> &[usize] {
        &self.ideals.ideal(self.ideals.ideal_of(a)).generators
    }
}
