//! Element-enumerated finite rings with identity.
//!
//! A ring is stored as dense addition and multiplication tables over the
//! indices `0..n`. The enumeration order is part of the public contract:
//!
//! * `ℤ_n`: the residue `r` has index `r`.
//! * `M_k(𝔽_q)`: entries read row-major as base-`q` digits, most significant
//!   first, so `M₂` is ordered lexicographically by `(a₁₁, a₁₂, a₂₁, a₂₂)`.
//! * `𝔹₂(𝔽_q)` (upper triangular): lexicographic in `(a₁₁, a₁₂, a₂₂)`.
//! * `R₁ × R₂`: the pair `(i₁, i₂)` has index `i₁·n₂ + i₂`.

mod structure;

pub use structure::*;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::PrimeField;

/// Largest ring the dense representation accepts.
pub const MAX_RING_SIZE: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring with {0} elements exceeds the {MAX_RING_SIZE}-element cap")]
    TooLarge(usize),
    #[error("matrix size {0} is not supported")]
    UnsupportedSize(u32),
    #[error("the modulus must be at least 1")]
    InvalidModulus,
    #[error("ring axiom `{axiom}` fails at ({a}, {b}, {c})")]
    AxiomViolated {
        axiom: &'static str,
        a: usize,
        b: usize,
        c: usize,
    },
    #[error("element {0} is out of range")]
    OutOfRange(usize),
    #[error("no unit u with u·{x} = {y}; the elements are not in a common generator set")]
    NoWitness { x: usize, y: usize },
}

/// How a ring was constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingLabel {
    Zn(u32),
    Matrix { size: u32, q: u32 },
    UpperTriangular { q: u32 },
    Product(Box<RingLabel>, Box<RingLabel>),
}

impl fmt::Display for RingLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingLabel::Zn(n) => write!(f, "Z_{n}"),
            RingLabel::Matrix { size, q } => write!(f, "M_{size}(F_{q})"),
            RingLabel::UpperTriangular { q } => write!(f, "B_2(F_{q})"),
            RingLabel::Product(a, b) => write!(f, "({a} x {b})"),
        }
    }
}

#[derive(Clone)]
pub struct FiniteRing {
    n: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    zero: usize,
    one: usize,
    label: RingLabel,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("label", &self.label)
            .field("n", &self.n)
            .finish()
    }
}

impl FiniteRing {
    fn from_fns(
        n: usize,
        label: RingLabel,
        zero: usize,
        one: usize,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<FiniteRing, RingError> {
        if n > MAX_RING_SIZE {
            return Err(RingError::TooLarge(n));
        }
        let mut at = vec![0u32; n * n];
        let mut mt = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                at[a * n + b] = add(a, b) as u32;
                mt[a * n + b] = mul(a, b) as u32;
            }
        }
        let mut neg = vec![0u32; n];
        for a in 0..n {
            neg[a] = (0..n)
                .find(|&b| at[a * n + b] as usize == zero)
                .expect("additive inverse") as u32;
        }
        Ok(FiniteRing {
            n,
            add: at,
            mul: mt,
            neg,
            zero,
            one,
            label,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn label(&self) -> &RingLabel {
        &self.label
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn elements(&self) -> core::ops::Range<usize> {
        0..self.n
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// For `M₂(𝔽_q)`, the field order `q`.
    pub fn m2_field(&self) -> Option<u32> {
        match self.label {
            RingLabel::Matrix { size: 2, q } => Some(q),
            _ => None,
        }
    }

    /// Entries of a matrix-ring element in row-major order; for the
    /// upper-triangular ring the full 2×2 matrix with `a₂₁ = 0`.
    pub fn matrix_entries(&self, x: usize) -> Option<Vec<u32>> {
        match self.label {
            RingLabel::Matrix { size, q } => Some(digits(x, q, (size * size) as usize)),
            RingLabel::UpperTriangular { q } => {
                let d = digits(x, q, 3);
                Some(vec![d[0], d[1], 0, d[2]])
            }
            _ => None,
        }
    }

    /// Inverse of [`FiniteRing::matrix_entries`].
    pub fn matrix_index(&self, entries: &[u32]) -> Option<usize> {
        match self.label {
            RingLabel::Matrix { size, q } if entries.len() == (size * size) as usize => {
                Some(from_digits(entries, q))
            }
            RingLabel::UpperTriangular { q } if entries.len() == 4 && entries[2].is_multiple_of(q) => {
                Some(from_digits(&[entries[0], entries[1], entries[3]], q))
            }
            _ => None,
        }
    }

    pub fn describe_element(&self, x: usize) -> String {
        match (&self.label, self.matrix_entries(x)) {
            (_, Some(e)) if e.len() == 4 => format!("[[{},{}],[{},{}]]", e[0], e[1], e[2], e[3]),
            (_, Some(e)) => format!("{e:?}"),
            _ => format!("{x}"),
        }
    }

    /// Checks the ring axioms: exhaustively for `n ≤ 256`, otherwise on
    /// `samples` random triples drawn from a seeded generator.
    pub fn verify_axioms(&self, samples: usize, seed: u64) -> Result<(), RingError> {
        let n = self.n;
        let check = |a: usize, b: usize, c: usize| -> Result<(), RingError> {
            let fail = |axiom| Err(RingError::AxiomViolated { axiom, a, b, c });
            if self.add(a, b) != self.add(b, a) {
                return fail("additive commutativity");
            }
            if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                return fail("additive associativity");
            }
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return fail("multiplicative associativity");
            }
            if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                return fail("left distributivity");
            }
            if self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c)) {
                return fail("right distributivity");
            }
            Ok(())
        };
        for a in 0..n {
            if self.add(a, self.zero) != a || self.add(a, self.neg(a)) != self.zero {
                return Err(RingError::AxiomViolated {
                    axiom: "additive identity/inverse",
                    a,
                    b: 0,
                    c: 0,
                });
            }
            if self.mul(a, self.one) != a || self.mul(self.one, a) != a {
                return Err(RingError::AxiomViolated {
                    axiom: "multiplicative identity",
                    a,
                    b: 0,
                    c: 0,
                });
            }
        }
        if n <= 256 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                check(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n))?;
            }
        }
        Ok(())
    }
}

fn digits(mut x: usize, q: u32, len: usize) -> Vec<u32> {
    let mut d = vec![0u32; len];
    for slot in d.iter_mut().rev() {
        *slot = (x % q as usize) as u32;
        x /= q as usize;
    }
    d
}

fn from_digits(d: &[u32], q: u32) -> usize {
    d.iter().fold(0usize, |acc, &v| acc * q as usize + (v % q) as usize)
}

/// `ℤ_n` with its natural enumeration.
pub fn ring_zn(n: u32) -> Result<FiniteRing, RingError> {
    if n == 0 {
        return Err(RingError::InvalidModulus);
    }
    let m = n as usize;
    FiniteRing::from_fns(
        m,
        RingLabel::Zn(n),
        0,
        1 % m,
        |a, b| (a + b) % m,
        |a, b| (a * b) % m,
    )
}

/// `M_size(𝔽_q)`. Size 2 is the supported case; size 3 is accepted while the
/// ring stays under [`MAX_RING_SIZE`].
pub fn ring_matrix(size: u32, field: &PrimeField) -> Result<FiniteRing, RingError> {
    if !(1..=3).contains(&size) {
        return Err(RingError::UnsupportedSize(size));
    }
    let q = field.p();
    let k = size as usize;
    let n = (q as usize).checked_pow((k * k) as u32).unwrap_or(usize::MAX);
    if n > MAX_RING_SIZE {
        return Err(RingError::TooLarge(n));
    }
    let decode = |x: usize| digits(x, q, k * k);
    let ident: Vec<u32> = (0..k * k).map(|i| u32::from(i % (k + 1) == 0)).collect();
    let one = from_digits(&ident, q);
    let entries: Vec<Vec<u32>> = (0..n).map(decode).collect();
    FiniteRing::from_fns(
        n,
        RingLabel::Matrix { size, q },
        0,
        one,
        |a, b| {
            let (x, y) = (&entries[a], &entries[b]);
            let s: Vec<u32> = x.iter().zip(y).map(|(&u, &v)| field.add(u, v)).collect();
            from_digits(&s, q)
        },
        |a, b| {
            let (x, y) = (&entries[a], &entries[b]);
            let mut s = vec![0u32; k * k];
            for i in 0..k {
                for j in 0..k {
                    let mut acc = 0u32;
                    for l in 0..k {
                        acc = field.add(acc, field.mul(x[i * k + l], y[l * k + j]));
                    }
                    s[i * k + j] = acc;
                }
            }
            from_digits(&s, q)
        },
    )
}

/// The subring `𝔹₂(𝔽_q)` of upper-triangular 2×2 matrices.
pub fn ring_upper_triangular(field: &PrimeField) -> Result<FiniteRing, RingError> {
    let q = field.p();
    let n = (q as usize).pow(3);
    let dec = |x: usize| {
        let d = digits(x, q, 3);
        (d[0], d[1], d[2])
    };
    let one = from_digits(&[1, 0, 1], q);
    FiniteRing::from_fns(
        n,
        RingLabel::UpperTriangular { q },
        0,
        one,
        |a, b| {
            let (x, y) = (dec(a), dec(b));
            from_digits(
                &[field.add(x.0, y.0), field.add(x.1, y.1), field.add(x.2, y.2)],
                q,
            )
        },
        |a, b| {
            let ((a11, a12, a22), (b11, b12, b22)) = (dec(a), dec(b));
            from_digits(
                &[
                    field.mul(a11, b11),
                    field.add(field.mul(a11, b12), field.mul(a12, b22)),
                    field.mul(a22, b22),
                ],
                q,
            )
        },
    )
}

/// `R₁ × R₂` with componentwise operations.
pub fn ring_product(r1: &FiniteRing, r2: &FiniteRing) -> Result<FiniteRing, RingError> {
    let n2 = r2.size();
    let n = r1
        .size()
        .checked_mul(n2)
        .filter(|&n| n <= MAX_RING_SIZE)
        .ok_or(RingError::TooLarge(r1.size().saturating_mul(n2)))?;
    let split = |x: usize| (x / n2, x % n2);
    FiniteRing::from_fns(
        n,
        RingLabel::Product(Box::new(r1.label.clone()), Box::new(r2.label.clone())),
        r1.zero() * n2 + r2.zero(),
        r1.one() * n2 + r2.one(),
        |a, b| {
            let ((a1, a2), (b1, b2)) = (split(a), split(b));
            r1.add(a1, b1) * n2 + r2.add(a2, b2)
        },
        |a, b| {
            let ((a1, a2), (b1, b2)) = (split(a), split(b));
            r1.mul(a1, b1) * n2 + r2.mul(a2, b2)
        },
    )
}
