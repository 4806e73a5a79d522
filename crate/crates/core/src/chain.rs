//! Multiplication laws `Q`, the heads probability `α`, and the transition
//! matrices `B_R` and `M_R = (α/n)·J + (1−α)·B_R`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{lcm_of_denominators, rational_to_f64};
use crate::ring::SimilarityPartition;
use crate::ring::FiniteRing;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("class weights sum to {0}, not 1")]
    NotNormalized(Rational),
    #[error("negative weight for class represented by {0}")]
    NegativeWeight(usize),
    #[error("element {0} is not a class representative")]
    UnknownClass(usize),
    #[error("no weight given for the class represented by {0}")]
    MissingClass(usize),
    #[error("weights differ on elements {0} and {1} of the same similarity class")]
    NotClassConstant(usize, usize),
    #[error("alpha = {0} is outside the allowed range")]
    AlphaOutOfRange(Rational),
    #[error("expected {expected} weights, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// A probability law on the ring that is constant on similarity classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDistribution {
    class_weight: Vec<Rational>,
    element: Vec<Rational>,
}

impl ClassDistribution {
    /// The uniform law `U`.
    pub fn q_uniform(r: &FiniteRing, classes: &SimilarityPartition) -> ClassDistribution {
        let w = Rational::new(BigInt::one(), BigInt::from(r.size()));
        ClassDistribution {
            class_weight: vec![w.clone(); classes.len()],
            element: vec![w; r.size()],
        }
    }

    /// Per-element weight for each class, keyed by the class representative.
    /// Every class must be listed (zero is fine) and `Σ |C|·w` must be 1.
    pub fn q_from_weights(
        r: &FiniteRing,
        classes: &SimilarityPartition,
        weights: &BTreeMap<usize, Rational>,
    ) -> Result<ClassDistribution, ChainError> {
        let mut class_weight = vec![None; classes.len()];
        for (&rep, w) in weights {
            let id = classes
                .class_with_representative(rep)
                .ok_or(ChainError::UnknownClass(rep))?;
            if w.is_negative() {
                return Err(ChainError::NegativeWeight(rep));
            }
            class_weight[id] = Some(w.clone());
        }
        let class_weight: Vec<Rational> = class_weight
            .into_iter()
            .enumerate()
            .map(|(id, w)| w.ok_or(ChainError::MissingClass(classes.class(id).representative)))
            .collect::<Result<_, _>>()?;
        Self::finish(r, classes, class_weight)
    }

    /// Like [`q_from_weights`](Self::q_from_weights) but keyed by element
    /// index; unlisted classes get weight zero.
    pub fn q_sparse(
        r: &FiniteRing,
        classes: &SimilarityPartition,
        weights: &BTreeMap<usize, Rational>,
    ) -> Result<ClassDistribution, ChainError> {
        let mut full: BTreeMap<usize, Rational> =
            classes.representatives().map(|x| (x, Rational::zero())).collect();
        for (&rep, w) in weights {
            if !full.contains_key(&rep) {
                return Err(ChainError::UnknownClass(rep));
            }
            full.insert(rep, w.clone());
        }
        Self::q_from_weights(r, classes, &full)
    }

    /// A law given element by element; rejected unless it is class-constant.
    pub fn q_from_element_weights(
        r: &FiniteRing,
        classes: &SimilarityPartition,
        weights: &[Rational],
    ) -> Result<ClassDistribution, ChainError> {
        if weights.len() != r.size() {
            return Err(ChainError::LengthMismatch { expected: r.size(), got: weights.len() });
        }
        let mut class_weight = Vec::with_capacity(classes.len());
        for c in classes.classes() {
            let w = &weights[c.representative];
            if w.is_negative() {
                return Err(ChainError::NegativeWeight(c.representative));
            }
            if let Some(&bad) = c.elements.iter().find(|&&x| &weights[x] != w) {
                return Err(ChainError::NotClassConstant(c.representative, bad));
            }
            class_weight.push(w.clone());
        }
        Self::finish(r, classes, class_weight)
    }

    fn finish(
        r: &FiniteRing,
        classes: &SimilarityPartition,
        class_weight: Vec<Rational>,
    ) -> Result<ClassDistribution, ChainError> {
        let total: Rational = classes
            .classes()
            .iter()
            .zip(&class_weight)
            .map(|(c, w)| w * Rational::from_integer(BigInt::from(c.size())))
            .sum();
        if !total.is_one() {
            return Err(ChainError::NotNormalized(total));
        }
        let element = r
            .elements()
            .map(|x| class_weight[classes.class_of(x)].clone())
            .collect();
        Ok(ClassDistribution { class_weight, element })
    }

    /// `Q(x)`.
    pub fn prob(&self, x: usize) -> &Rational {
        &self.element[x]
    }

    pub fn probs(&self) -> &[Rational] {
        &self.element
    }

    /// Per-element weight on the class with the given id.
    pub fn class_weight(&self, class_id: usize) -> &Rational {
        &self.class_weight[class_id]
    }

    pub fn class_weights(&self) -> &[Rational] {
        &self.class_weight
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.element
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(x, _)| x)
    }
}

/// The heads probability. Chains need `0 < α < 1`; the boundary values are
/// only admitted through [`AlphaParam::with_boundary`] for limit checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaParam {
    value: Rational,
    boundary: bool,
}

impl AlphaParam {
    pub fn new(value: Rational) -> Result<AlphaParam, ChainError> {
        if value.is_positive() && value < Rational::one() {
            Ok(AlphaParam { value, boundary: false })
        } else {
            Err(ChainError::AlphaOutOfRange(value))
        }
    }

    pub fn with_boundary(value: Rational) -> Result<AlphaParam, ChainError> {
        if !value.is_negative() && value <= Rational::one() {
            Ok(AlphaParam { value, boundary: true })
        } else {
            Err(ChainError::AlphaOutOfRange(value))
        }
    }

    pub fn ratio(num: i64, den: i64) -> Result<AlphaParam, ChainError> {
        Self::new(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    /// `1 − α`.
    pub fn tails(&self) -> Rational {
        Rational::one() - &self.value
    }

    pub fn is_boundary_mode(&self) -> bool {
        self.boundary
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }
}

/// Which side the multiplier acts from.
///
/// `Left` sends `a` to `x·a`, the convention of `B_R`. `Right` sends `a` to
/// `a·x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MultSide {
    #[default]
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Multiplicative,
    Full,
}

/// Dense row-stochastic matrix with exact entries, indexed by ring elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    n: usize,
    entries: Vec<Rational>,
    kind: MatrixKind,
}

impl TransitionMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn rows_sum_to_one(&self) -> bool {
        (0..self.n).all(|i| self.row(i).iter().sum::<Rational>().is_one())
    }

    pub fn min_entry(&self) -> Rational {
        self.entries.iter().min().cloned().unwrap_or_else(Rational::zero)
    }

    /// The least common denominator `D` with `D·M` integral, and `D·M`.
    pub fn integer_scaled(&self) -> (BigInt, Vec<BigInt>) {
        let d = lcm_of_denominators(&self.entries);
        let scaled = self
            .entries
            .iter()
            .map(|x| (x * Rational::from_integer(d.clone())).to_integer())
            .collect();
        (d, scaled)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(rational_to_f64).collect()
    }

    pub fn to_dmatrix(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.n, self.n, &self.to_f64())
    }
}

/// `B_R(a, b) = Σ_{x : x·a = b} Q(x)` (or `a·x = b` for [`MultSide::Right`]).
pub fn build_b(r: &FiniteRing, q: &ClassDistribution, side: MultSide) -> TransitionMatrix {
    let n = r.size();
    let mut entries = vec![Rational::zero(); n * n];
    let support: Vec<usize> = q.support().collect();
    for a in r.elements() {
        for &x in &support {
            let b = match side {
                MultSide::Left => r.mul(x, a),
                MultSide::Right => r.mul(a, x),
            };
            entries[a * n + b] += q.prob(x);
        }
    }
    TransitionMatrix { n, entries, kind: MatrixKind::Multiplicative }
}

/// `M_R = (α/n)·J + (1−α)·B_R` with left multiplication.
pub fn build_m(r: &FiniteRing, q: &ClassDistribution, alpha: &AlphaParam) -> TransitionMatrix {
    build_m_side(r, q, alpha, MultSide::Left)
}

pub fn build_m_side(
    r: &FiniteRing,
    q: &ClassDistribution,
    alpha: &AlphaParam,
    side: MultSide,
) -> TransitionMatrix {
    let b = build_b(r, q, side);
    let n = r.size();
    let add = alpha.value() / Rational::from_integer(BigInt::from(n));
    let tails = alpha.tails();
    let entries = b.entries.iter().map(|x| &add + &tails * x).collect();
    TransitionMatrix { n, entries, kind: MatrixKind::Full }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_make;
    use crate::ring::RingAnalysis;
    use crate::ring::{ring_matrix, ring_zn};

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn uniform_law_and_row_sums() {
        let r = ring_matrix(2, &field_make(2).unwrap()).unwrap();
        let an = RingAnalysis::new(&r);
        let q = ClassDistribution::q_uniform(&r, &an.classes);
        assert!(q.probs().iter().all(|w| *w == rat(1, 16)));
        let b = build_b(&r, &q, MultSide::Left);
        assert!(b.rows_sum_to_one());
        assert!(b.get(0, 0).is_one());
        let m = build_m(&r, &q, &AlphaParam::ratio(1, 2).unwrap());
        assert_eq!(*m.get(0, 0), rat(17, 32));
        assert!(m.rows_sum_to_one());
        assert!(m.min_entry() >= rat(1, 32));
    }

    #[test]
    fn point_masses() {
        let r = ring_matrix(2, &field_make(3).unwrap()).unwrap();
        let an = RingAnalysis::new(&r);
        let one = r.one();
        let mut w = BTreeMap::new();
        w.insert(one, Rational::one());
        let q = ClassDistribution::q_sparse(&r, &an.classes, &w).unwrap();
        let b = build_b(&r, &q, MultSide::Left);
        for i in r.elements() {
            for j in r.elements() {
                assert_eq!(b.get(i, j).is_one(), i == j);
            }
        }
        let mut w = BTreeMap::new();
        w.insert(r.zero(), Rational::one());
        let q = ClassDistribution::q_sparse(&r, &an.classes, &w).unwrap();
        let b = build_b(&r, &q, MultSide::Left);
        assert!(r.elements().all(|i| b.get(i, r.zero()).is_one()));
    }

    #[test]
    fn half_identity_half_a_class() {
        let r = ring_matrix(2, &field_make(3).unwrap()).unwrap();
        let an = RingAnalysis::new(&r);
        let c = an
            .classes
            .classes()
            .iter()
            .find(|c| c.size() > 1)
            .unwrap();
        let mut w = BTreeMap::new();
        w.insert(r.one(), rat(1, 2));
        w.insert(c.representative, rat(1, 2 * c.size() as i64));
        let q = ClassDistribution::q_sparse(&r, &an.classes, &w).unwrap();
        assert!(build_b(&r, &q, MultSide::Left).rows_sum_to_one());
    }

    #[test]
    fn validation_errors() {
        let r = ring_zn(6).unwrap();
        let an = RingAnalysis::new(&r);
        let mut w: BTreeMap<usize, Rational> = (0..6).map(|x| (x, rat(1, 6))).collect();
        assert!(ClassDistribution::q_from_weights(&r, &an.classes, &w).is_ok());
        w.insert(0, rat(1, 3));
        assert!(matches!(
            ClassDistribution::q_from_weights(&r, &an.classes, &w),
            Err(ChainError::NotNormalized(_))
        ));
        w.insert(0, rat(-1, 6));
        w.insert(1, rat(1, 2));
        assert_eq!(
            ClassDistribution::q_from_weights(&r, &an.classes, &w),
            Err(ChainError::NegativeWeight(0))
        );
        w.remove(&0);
        assert_eq!(
            ClassDistribution::q_from_weights(&r, &an.classes, &w),
            Err(ChainError::MissingClass(0))
        );
        w.insert(9, Rational::zero());
        assert_eq!(
            ClassDistribution::q_from_weights(&r, &an.classes, &w),
            Err(ChainError::UnknownClass(9))
        );
    }

    #[test]
    fn element_weights_must_be_class_constant() {
        let r = ring_matrix(2, &field_make(2).unwrap()).unwrap();
        let an = RingAnalysis::new(&r);
        let c = an.classes.classes().iter().find(|c| c.size() > 1).unwrap();
        let mut w = vec![Rational::zero(); 16];
        w[c.elements[0]] = Rational::one();
        assert!(matches!(
            ClassDistribution::q_from_element_weights(&r, &an.classes, &w),
            Err(ChainError::NotClassConstant(..))
        ));
        let mut w = vec![Rational::zero(); 16];
        for &x in &c.elements {
            w[x] = rat(1, c.size() as i64);
        }
        assert!(ClassDistribution::q_from_element_weights(&r, &an.classes, &w).is_ok());
    }

    #[test]
    fn alpha_range() {
        assert!(AlphaParam::ratio(0, 1).is_err());
        assert!(AlphaParam::ratio(1, 1).is_err());
        assert!(AlphaParam::ratio(3, 2).is_err());
        let one = AlphaParam::with_boundary(Rational::one()).unwrap();
        assert!(one.is_boundary_mode());
        let r = ring_zn(5).unwrap();
        let an = RingAnalysis::new(&r);
        let q = ClassDistribution::q_uniform(&r, &an.classes);
        let m = build_m(&r, &q, &one);
        assert!(m.entries().iter().all(|x| *x == rat(1, 5)));
        assert!(AlphaParam::with_boundary(rat(-1, 2)).is_err());
    }

    #[test]
    fn conjugation_invariance() {
        let r = ring_matrix(2, &field_make(2).unwrap()).unwrap();
        let an = RingAnalysis::new(&r);
        let q = ClassDistribution::q_uniform(&r, &an.classes);
        let b = build_b(&r, &q, MultSide::Left);
        for &u in an.units.elements() {
            for c in r.elements() {
                for d in r.elements() {
                    assert_eq!(b.get(r.mul(u, c), r.mul(u, d)), b.get(c, d));
                }
            }
        }
    }
}
