//! Stationary distributions of `M_R`: exact linear solve, the recursion
//! over the ideal poset, and closed forms for uniform `Q`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::chain::{AlphaParam, ClassDistribution, TransitionMatrix};
use crate::linalg::{solve_exact, LinalgError};
use crate::ring::{coset_representatives, lann, r_xy, FiniteRing, RingAnalysis};
use crate::Rational;

/// Largest matrix handed to the exact solver.
pub const SOLVE_MAX: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StationaryError {
    #[error("stationary system is singular")]
    SingularSystem,
    #[error("exact solve limited to {max} states, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("recursion denominator vanishes at element {0}")]
    DenominatorZero(usize),
    #[error("ring is not M_2(F_q)")]
    NotM2,
}

fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Solves `π·M = π`, `Σπ = 1` exactly.
pub fn stationary_solve(m: &TransitionMatrix) -> Result<Vec<Rational>, StationaryError> {
    let n = m.dim();
    if n > SOLVE_MAX {
        return Err(StationaryError::TooLarge { n, max: SOLVE_MAX });
    }
    // rows of (Mᵀ − I), the last one replaced by the normalisation
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = m.get(j, i).clone();
                    if i == j { v - Rational::one() } else { v }
                })
                .collect()
        })
        .collect();
    let mut b = vec![Rational::zero(); n];
    if n > 0 {
        a[n - 1] = vec![Rational::one(); n];
        b[n - 1] = Rational::one();
    }
    solve_exact(&a, &b).map_err(|e| match e {
        LinalgError::Singular | LinalgError::DimensionMismatch => StationaryError::SingularSystem,
    })
}

/// `Σ_{u∈U_y, r∈R_{x,y}} Q(r·u⁻¹)`: the total rate from `S_y` into `x`.
fn inflow(r: &FiniteRing, an: &RingAnalysis, q: &ClassDistribution, x: usize, y: usize) -> Rational {
    let rs = r_xy(r, x, y);
    let mut s = Rational::zero();
    for u in coset_representatives(r, &an.units, y) {
        let ui = an.units.inverse(u).expect("unit");
        for &t in &rs {
            s += q.prob(r.mul(t, ui));
        }
    }
    s
}

fn expand(an: &RingAnalysis, n: usize, on_phi: &[Rational]) -> Vec<Rational> {
    (0..n).map(|x| on_phi[an.ideals.ideal_of(x)].clone()).collect()
}

/// The recursion over principal left ideals, largest first, then spread
/// over each generator set `S_a`.
pub fn stationary_recursive(
    r: &FiniteRing,
    an: &RingAnalysis,
    q: &ClassDistribution,
    alpha: &AlphaParam,
) -> Result<Vec<Rational>, StationaryError> {
    let n = r.size();
    let tails = alpha.tails();
    let add = alpha.value() / int(n);
    let mut on_phi: Vec<Option<Rational>> = vec![None; an.ideals.len()];
    for id in an.ideals.top_down_order() {
        let x = an.ideals.ideal(id).generator;
        let mut num = add.clone();
        for &up in &an.ideals.ideal(id).strictly_contained_in {
            let y = an.ideals.ideal(up).generator;
            let py = on_phi[up].as_ref().expect("larger ideals come first");
            num += &tails * inflow(r, an, q, x, y) * py;
        }
        let den = Rational::one() - &tails * inflow(r, an, q, x, x);
        if den.is_zero() {
            return Err(StationaryError::DenominatorZero(x));
        }
        on_phi[id] = Some(num / den);
    }
    let on_phi: Vec<Rational> = on_phi.into_iter().map(|v| v.expect("all visited")).collect();
    Ok(expand(an, n, &on_phi))
}

/// The closed form for uniform `Q`, with `|U_y| = |U_R|/|LStab(y)|`.
pub fn stationary_uniform(r: &FiniteRing, an: &RingAnalysis, alpha: &AlphaParam) -> Result<Vec<Rational>, StationaryError> {
    let n = r.size();
    let tails = alpha.tails();
    let weight = |y: usize| int(an.units.order() / an.lstab(r, y).len() * lann(r, y).len());
    let mut on_phi: Vec<Option<Rational>> = vec![None; an.ideals.len()];
    for id in an.ideals.top_down_order() {
        let x = an.ideals.ideal(id).generator;
        let mut num = alpha.value().clone();
        for &up in &an.ideals.ideal(id).strictly_contained_in {
            let y = an.ideals.ideal(up).generator;
            num += &tails * weight(y) * on_phi[up].as_ref().expect("larger ideals come first");
        }
        let den = int(n) - &tails * weight(x);
        if den.is_zero() {
            return Err(StationaryError::DenominatorZero(x));
        }
        on_phi[id] = Some(num / den);
    }
    let on_phi: Vec<Rational> = on_phi.into_iter().map(|v| v.expect("all visited")).collect();
    Ok(expand(an, n, &on_phi))
}

/// `α/(n − u + u·α)` with `n = |R|` and `u = |U_R|`.
pub fn stationary_units_formula(n: usize, u: usize, alpha: &Rational) -> Rational {
    alpha / (int(n) - int(u) + int(u) * alpha)
}

/// Stationary values on `M₂(𝔽_q)` under uniform `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gl2Stationary {
    pub unit: Rational,
    pub nonunit: Rational,
    pub zero: Rational,
}

/// With `D = q³+q²−q + (q²−1)(q²−q)α` and `E = 1 + (q²−1)α`: units get
/// `α/D`, nonzero non-units `q²α/(E·D)`, zero `(q³+q²−q − q(q²−1)α)/(E·D)`.
pub fn stationary_gl2(q: u32, alpha: &Rational) -> Gl2Stationary {
    let q = int(q as usize);
    let one = Rational::one();
    let q2 = &q * &q;
    let base = &q2 * &q + &q2 - &q;
    let d = &base + (&q2 - &one) * (&q2 - &q) * alpha;
    let e = &one + (&q2 - &one) * alpha;
    Gl2Stationary {
        unit: alpha / &d,
        nonunit: &q2 * alpha / (&e * &d),
        zero: (&base - &q * (&q2 - &one) * alpha) / (&e * &d),
    }
}

impl Gl2Stationary {
    /// Spread over the elements of `M₂(𝔽_q)`.
    pub fn expand(&self, r: &FiniteRing, an: &RingAnalysis) -> Result<Vec<Rational>, StationaryError> {
        r.m2_field().ok_or(StationaryError::NotM2)?;
        Ok(r
            .elements()
            .map(|x| {
                if x == r.zero() {
                    self.zero.clone()
                } else if an.units.is_unit(x) {
                    self.unit.clone()
                } else {
                    self.nonunit.clone()
                }
            })
            .collect())
    }
}

/// `π·M − π` vanishes exactly.
pub fn is_stationary(m: &TransitionMatrix, pi: &[Rational]) -> bool {
    let n = m.dim();
    (0..n).all(|j| {
        let s: Rational = (0..n).map(|i| &pi[i] * m.get(i, j)).sum();
        s == pi[j]
    })
}
