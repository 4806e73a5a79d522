//! Prime fields, their quadratic extensions, and multiplicative characters.
//!
//! Fields are small (desk scale), so every field caches full exponent and
//! discrete-logarithm tables for its multiplicative group. Character values
//! stay exact as [`Angle`]s until they are materialized as complex numbers.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("element does not belong to this field")]
    ElementFieldMismatch,
    #[error("zero has no norm in the unit group")]
    ZeroElement,
    #[error("character index {k} out of range for group of order {order}")]
    IndexOutOfRange { k: u64, order: u64 },
    #[error("generator does not have full multiplicative order")]
    NotAGenerator,
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A fraction of a full turn, `num/den` in `[0, 1)`, kept in lowest terms.
///
/// `Angle::new(k, m)` denotes the root of unity `exp(2πi·k/m)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle {
    num: u64,
    den: u64,
}

impl Angle {
    pub const ZERO: Angle = Angle { num: 0, den: 1 };

    pub fn new(k: i64, m: u64) -> Angle {
        assert!(m > 0, "angle denominator must be positive");
        let r = k.rem_euclid(m as i64) as u64;
        let g = num_integer::gcd(r, m);
        Angle {
            num: r / g,
            den: m / g,
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn neg(self) -> Angle {
        Angle::new(-(self.num as i64), self.den)
    }

    pub fn to_complex(self) -> Complex64 {
        let theta = 2.0 * core::f64::consts::PI * (self.num as f64) / (self.den as f64);
        Complex64::new(libm::cos(theta), libm::sin(theta))
    }
}

impl core::ops::Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        let l = num_integer::lcm(self.den, rhs.den);
        let a = (self.num as u128 * (l / self.den) as u128 + rhs.num as u128 * (l / rhs.den) as u128)
            % l as u128;
        Angle::new(a as i64, l)
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({}/{})", self.num, self.den)
    }
}

/// An integer combination of roots of unity, e.g. `χ₁(x)χ₂(y) + χ₁(y)χ₂(x)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootSum {
    terms: Vec<(i64, Angle)>,
}

impl RootSum {
    pub fn zero() -> RootSum {
        RootSum { terms: Vec::new() }
    }

    pub fn integer(c: i64) -> RootSum {
        RootSum::term(c, Angle::ZERO)
    }

    pub fn term(c: i64, a: Angle) -> RootSum {
        let mut s = RootSum::zero();
        s.push(c, a);
        s
    }

    pub fn push(&mut self, c: i64, a: Angle) {
        if c == 0 {
            return;
        }
        match self.terms.binary_search_by(|(_, b)| b.cmp(&a)) {
            Ok(i) => {
                self.terms[i].0 += c;
                if self.terms[i].0 == 0 {
                    self.terms.remove(i);
                }
            }
            Err(i) => self.terms.insert(i, (c, a)),
        }
    }

    pub fn add(mut self, other: &RootSum) -> RootSum {
        for &(c, a) in &other.terms {
            self.push(c, a);
        }
        self
    }

    pub fn scale(mut self, c: i64) -> RootSum {
        if c == 0 {
            return RootSum::zero();
        }
        for t in &mut self.terms {
            t.0 *= c;
        }
        self
    }

    pub fn terms(&self) -> &[(i64, Angle)] {
        &self.terms
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|&(c, a)| a.to_complex() * c as f64)
            .fold(Complex64::new(0.0, 0.0), |acc, z| acc + z)
    }
}

/// Tag identifying which field an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct FieldTag {
    p: u32,
    degree: u8,
}

/// An element of 𝔽_p or 𝔽_{p²}; `coords` are polynomial coefficients
/// `c0 + c1·x` reduced modulo p (`c1 = 0` for prime fields).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    tag: FieldTag,
    coords: [u32; 2],
}

impl FieldElement {
    pub fn coords(&self) -> [u32; 2] {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0, 0]
    }

    /// Canonical enumeration index `c0 + p·c1`.
    pub fn index(&self) -> usize {
        self.coords[0] as usize + self.tag.p as usize * self.coords[1] as usize
    }
}

/// Discrete-log tables for a cyclic multiplicative group.
#[derive(Clone, Debug)]
struct CyclicTables {
    /// `exp[j]` is the element index of `g^j`.
    exp: Vec<u32>,
    /// `log[index]` is `j` with `g^j = element`; unused for zero.
    log: Vec<u32>,
}

impl CyclicTables {
    fn build(generator: usize, size: usize, mul: impl Fn(usize, usize) -> usize, one: usize) -> Option<CyclicTables> {
        let order = size - 1;
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![u32::MAX; size];
        let mut x = one;
        for j in 0..order {
            if log[x] != u32::MAX {
                return None;
            }
            log[x] = j as u32;
            exp.push(x as u32);
            x = mul(x, generator);
        }
        (x == one).then_some(CyclicTables { exp, log })
    }
}

#[derive(Clone, Debug)]
pub struct PrimeField {
    p: u32,
    primitive_root: u32,
    tables: CyclicTables,
}

/// Fails with [`FieldError::NotPrime`] unless `p` is prime.
pub fn field_make(p: u32) -> Result<PrimeField, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    let pm = p as usize;
    let mul = |a: usize, b: usize| (a * b) % pm;
    let (g, tables) = (1..pm.max(2))
        .find_map(|g| CyclicTables::build(g, pm, mul, 1 % pm).map(|t| (g, t)))
        .expect("prime field has a primitive root");
    Ok(PrimeField {
        p,
        primitive_root: g as u32,
        tables,
    })
}

impl PrimeField {
    fn tag(&self) -> FieldTag {
        FieldTag { p: self.p, degree: 1 }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn unit_order(&self) -> u64 {
        self.p as u64 - 1
    }

    pub fn primitive_root(&self) -> FieldElement {
        self.elem(self.primitive_root)
    }

    pub fn elem(&self, v: u32) -> FieldElement {
        FieldElement {
            tag: self.tag(),
            coords: [v % self.p, 0],
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.p).map(|v| self.elem(v))
    }

    pub fn units(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.p).map(|v| self.elem(v))
    }

    fn check(&self, a: FieldElement) -> Result<u32, FieldError> {
        if a.tag != self.tag() {
            return Err(FieldError::ElementFieldMismatch);
        }
        Ok(a.coords[0])
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        (self.p - a) % self.p
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        let j = self.tables.log[a as usize] as usize;
        let order = (self.p - 1) as usize;
        Some(self.tables.exp[(order - j) % order])
    }

    /// Exponent `j` with `g^j = a`; `None` for zero.
    pub fn dlog(&self, a: u32) -> Option<u64> {
        let a = a % self.p;
        (a != 0).then(|| self.tables.log[a as usize] as u64)
    }

    pub fn dlog_elem(&self, a: FieldElement) -> Result<Option<u64>, FieldError> {
        Ok(self.dlog(self.check(a)?))
    }

    /// Multiplicative order of a nonzero residue.
    pub fn order_of(&self, a: u32) -> Option<u64> {
        let j = self.dlog(a)?;
        let m = self.unit_order();
        Some(m / num_integer::gcd(j, m))
    }

    pub fn is_square(&self, a: u32) -> bool {
        match self.dlog(a) {
            None => true,
            Some(j) => self.p == 2 || j % 2 == 0,
        }
    }
}

/// 𝔽_{p²} as `𝔽_p[x]/(x² + b·x + c)`.
#[derive(Clone, Debug)]
pub struct QuadraticExtension {
    base: PrimeField,
    b: u32,
    c: u32,
    primitive_root: usize,
    tables: CyclicTables,
}

/// Builds 𝔽_{p²} from the lexicographically least irreducible monic
/// quadratic `x² + bx + c`, ordered by `(b, c)`.
pub fn ext_make(base: &PrimeField) -> QuadraticExtension {
    let p = base.p;
    let (b, c) = (0..p)
        .flat_map(|b| (0..p).map(move |c| (b, c)))
        .find(|&(b, c)| {
            (0..p).all(|x| base.add(base.add(base.mul(x, x), base.mul(b, x)), c) != 0)
        })
        .expect("an irreducible quadratic exists over every prime field");
    let mut ext = QuadraticExtension {
        base: base.clone(),
        b,
        c,
        primitive_root: 0,
        tables: CyclicTables {
            exp: Vec::new(),
            log: Vec::new(),
        },
    };
    let size = (p * p) as usize;
    let one = 1usize;
    let (g, tables) = (1..size)
        .find_map(|g| {
            CyclicTables::build(g, size, |x, y| ext.mul_index(x, y), one).map(|t| (g, t))
        })
        .expect("finite field has a primitive root");
    ext.primitive_root = g;
    ext.tables = tables;
    ext
}

impl QuadraticExtension {
    fn tag(&self) -> FieldTag {
        FieldTag {
            p: self.base.p,
            degree: 2,
        }
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    /// Coefficients `(b, c)` of the modulus `x² + bx + c`.
    pub fn modulus(&self) -> (u32, u32) {
        (self.b, self.c)
    }

    pub fn size(&self) -> usize {
        (self.base.p * self.base.p) as usize
    }

    pub fn unit_order(&self) -> u64 {
        self.size() as u64 - 1
    }

    pub fn elem(&self, c0: u32, c1: u32) -> FieldElement {
        FieldElement {
            tag: self.tag(),
            coords: [c0 % self.base.p, c1 % self.base.p],
        }
    }

    pub fn from_index(&self, i: usize) -> FieldElement {
        let p = self.base.p as usize;
        self.elem((i % p) as u32, (i / p) as u32)
    }

    /// Embeds a base-field residue.
    pub fn embed(&self, a: u32) -> FieldElement {
        self.elem(a, 0)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size()).map(|i| self.from_index(i))
    }

    pub fn primitive_root(&self) -> FieldElement {
        self.from_index(self.primitive_root)
    }

    fn check(&self, a: FieldElement) -> Result<(), FieldError> {
        if a.tag != self.tag() {
            return Err(FieldError::ElementFieldMismatch);
        }
        Ok(())
    }

    fn mul_index(&self, x: usize, y: usize) -> usize {
        let f = &self.base;
        let p = f.p as usize;
        let (a0, a1) = ((x % p) as u32, (x / p) as u32);
        let (b0, b1) = ((y % p) as u32, (y / p) as u32);
        // (a0 + a1 x)(b0 + b1 x) with x² = -b x - c
        let t2 = f.mul(a1, b1);
        let t1 = f.add(f.mul(a0, b1), f.mul(a1, b0));
        let t0 = f.mul(a0, b0);
        let c0 = f.sub(t0, f.mul(t2, self.c));
        let c1 = f.sub(t1, f.mul(t2, self.b));
        c0 as usize + p * c1 as usize
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        let f = &self.base;
        Ok(self.elem(
            f.add(a.coords[0], b.coords[0]),
            f.add(a.coords[1], b.coords[1]),
        ))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.from_index(self.mul_index(a.index(), b.index())))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        let mut acc = 1usize;
        let mut base = a.index();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_index(acc, base);
            }
            base = self.mul_index(base, base);
            e >>= 1;
        }
        Ok(self.from_index(acc))
    }

    /// The Frobenius automorphism `a ↦ a^p`.
    pub fn frobenius(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.pow(a, self.base.p as u64)
    }

    /// `N(a) = a·σ(a)`, returned as a base-field residue.
    pub fn norm(&self, a: FieldElement) -> Result<u32, FieldError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let n = self.mul(a, self.frobenius(a)?)?;
        debug_assert_eq!(n.coords[1], 0);
        Ok(n.coords[0])
    }

    /// `a + σ(a)` as a base-field residue.
    pub fn trace(&self, a: FieldElement) -> Result<u32, FieldError> {
        let t = self.add(a, self.frobenius(a)?)?;
        debug_assert_eq!(t.coords[1], 0);
        Ok(t.coords[0])
    }

    pub fn dlog(&self, a: FieldElement) -> Result<Option<u64>, FieldError> {
        self.check(a)?;
        Ok((!a.is_zero()).then(|| self.tables.log[a.index()] as u64))
    }

    pub fn order_of(&self, a: FieldElement) -> Result<Option<u64>, FieldError> {
        let m = self.unit_order();
        Ok(self.dlog(a)?.map(|j| m / num_integer::gcd(j, m)))
    }

    pub fn in_base(&self, a: FieldElement) -> bool {
        a.coords[1] == 0
    }
}

/// `x ↦ exp(2πi·k·log_g(x)/m)` on a cyclic unit group of order `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MultiplicativeCharacter {
    order: u64,
    k: u64,
    generator: FieldElement,
}

/// Builds the character of index `k` on a unit group of order `group_order`
/// anchored at `generator` (which must be the field's cached primitive root
/// for value lookups to succeed).
pub fn char_make(
    group_order: u64,
    k: u64,
    generator: FieldElement,
) -> Result<MultiplicativeCharacter, FieldError> {
    if k >= group_order {
        return Err(FieldError::IndexOutOfRange {
            k,
            order: group_order,
        });
    }
    Ok(MultiplicativeCharacter {
        order: group_order,
        k,
        generator,
    })
}

impl MultiplicativeCharacter {
    pub fn index(&self) -> u64 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Value at `g^j`.
    pub fn at_power(&self, j: u64) -> Angle {
        Angle::new(((self.k as u128 * j as u128) % self.order as u128) as i64, self.order)
    }

    pub fn value_prime(&self, f: &PrimeField, x: FieldElement) -> Result<Angle, FieldError> {
        self.check_prime(f)?;
        let j = f.dlog_elem(x)?.ok_or(FieldError::ZeroElement)?;
        Ok(self.at_power(j))
    }

    pub fn value_ext(&self, f: &QuadraticExtension, x: FieldElement) -> Result<Angle, FieldError> {
        self.check_ext(f)?;
        let j = f.dlog(x)?.ok_or(FieldError::ZeroElement)?;
        Ok(self.at_power(j))
    }

    fn check_prime(&self, f: &PrimeField) -> Result<(), FieldError> {
        if self.order != f.unit_order() || self.generator.tag != f.tag() {
            return Err(FieldError::ElementFieldMismatch);
        }
        if self.generator != f.primitive_root() {
            return Err(FieldError::NotAGenerator);
        }
        Ok(())
    }

    fn check_ext(&self, f: &QuadraticExtension) -> Result<(), FieldError> {
        if self.order != f.unit_order() || self.generator.tag != f.tag() {
            return Err(FieldError::ElementFieldMismatch);
        }
        if self.generator != f.primitive_root() {
            return Err(FieldError::NotAGenerator);
        }
        Ok(())
    }

    /// `σ(ν) = ν ∘ Frobenius`; on indices this is `k ↦ k·p mod (p²−1)`.
    pub fn frobenius_twist(&self, f: &QuadraticExtension) -> MultiplicativeCharacter {
        MultiplicativeCharacter {
            k: (self.k * f.base.p as u64) % self.order,
            ..*self
        }
    }
}

/// True iff `ν = ν∘σ`. Non-decomposable characters are those returning false.
pub fn is_decomposable(f: &QuadraticExtension, nu: &MultiplicativeCharacter) -> Result<bool, FieldError> {
    nu.check_ext(f)?;
    Ok(nu.frobenius_twist(f).k == nu.k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields() {
        assert_eq!(field_make(2).unwrap().primitive_root().coords()[0], 1);
        let f5 = field_make(5).unwrap();
        assert_eq!(f5.primitive_root().coords()[0], 2);
        // brute-force multiplicative order of 2 mod 5
        let mut x = 1u32;
        let mut ord = 0;
        loop {
            x = x * 2 % 5;
            ord += 1;
            if x == 1 {
                break;
            }
        }
        assert_eq!(ord, 4);
        assert_eq!(field_make(9).unwrap_err(), FieldError::NotPrime(9));
        assert!(field_make(1).is_err());
    }

    #[test]
    fn primitive_roots_have_full_order() {
        for p in [2, 3, 5, 7, 11, 13, 31, 97] {
            let f = field_make(p).unwrap();
            let g = f.primitive_root().coords()[0];
            let mut x = g;
            let mut ord = 1u64;
            while x != 1 % p {
                x = f.mul(x, g);
                ord += 1;
            }
            assert_eq!(ord, f.unit_order(), "p={p}");
            let e = ext_make(&f);
            let gg = e.primitive_root();
            let mut y = gg;
            let mut ord = 1u64;
            while y != e.embed(1) {
                y = e.mul(y, gg).unwrap();
                ord += 1;
            }
            assert_eq!(ord, e.unit_order(), "p^2 with p={p}");
        }
    }

    #[test]
    fn extension_moduli() {
        assert_eq!(ext_make(&field_make(2).unwrap()).modulus(), (1, 1));
        assert_eq!(ext_make(&field_make(3).unwrap()).modulus(), (0, 1));
        let e5 = ext_make(&field_make(5).unwrap());
        assert_eq!(e5.size(), 25);
        let fixed = e5
            .elements()
            .filter(|&a| e5.frobenius(a).unwrap() == a)
            .count();
        assert_eq!(fixed, 5);
    }

    #[test]
    fn frobenius_examples() {
        let f3 = field_make(3).unwrap();
        let e = ext_make(&f3);
        for a in f3.elements() {
            let x = e.embed(a.coords()[0]);
            assert_eq!(e.frobenius(x).unwrap(), x);
        }
        let g = e.primitive_root();
        assert_eq!(e.frobenius(g).unwrap(), e.pow(g, 3).unwrap());
        for a in e.elements() {
            assert_eq!(e.frobenius(e.frobenius(a).unwrap()).unwrap(), a);
        }
        assert_eq!(
            e.frobenius(f3.elem(1)).unwrap_err(),
            FieldError::ElementFieldMismatch
        );
    }

    #[test]
    fn frobenius_is_ring_homomorphism() {
        for p in [2, 3, 5] {
            let e = ext_make(&field_make(p).unwrap());
            for a in e.elements() {
                for b in e.elements() {
                    let s = e.frobenius(e.add(a, b).unwrap()).unwrap();
                    assert_eq!(s, e.add(e.frobenius(a).unwrap(), e.frobenius(b).unwrap()).unwrap());
                    let m = e.frobenius(e.mul(a, b).unwrap()).unwrap();
                    assert_eq!(m, e.mul(e.frobenius(a).unwrap(), e.frobenius(b).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn norm_examples() {
        let f3 = field_make(3).unwrap();
        let e = ext_make(&f3);
        for a in 1..3 {
            assert_eq!(e.norm(e.embed(a)).unwrap(), f3.mul(a, a));
        }
        let fiber = e
            .elements()
            .filter(|a| !a.is_zero() && e.norm(*a).unwrap() == 1)
            .count();
        assert_eq!(fiber, 4);
        let n = e.norm(e.primitive_root()).unwrap();
        assert_eq!(f3.order_of(n), Some(2));
        assert_eq!(e.norm(e.embed(0)).unwrap_err(), FieldError::ZeroElement);
        // surjective with fibers of size q+1
        for p in [2u32, 5, 7] {
            let f = field_make(p).unwrap();
            let e = ext_make(&f);
            let mut counts = vec![0usize; p as usize];
            for a in e.elements().filter(|a| !a.is_zero()) {
                counts[e.norm(a).unwrap() as usize] += 1;
            }
            assert_eq!(counts[0], 0);
            assert!(counts[1..].iter().all(|&c| c == p as usize + 1));
        }
    }

    #[test]
    fn character_examples() {
        let f5 = field_make(5).unwrap();
        let g = f5.primitive_root();
        let triv = char_make(4, 0, g).unwrap();
        assert!(triv.is_trivial());
        for x in f5.units() {
            assert_eq!(triv.value_prime(&f5, x).unwrap(), Angle::ZERO);
        }
        let chi = char_make(4, 2, g).unwrap();
        assert_eq!(chi.value_prime(&f5, f5.elem(2)).unwrap(), Angle::new(1, 2));
        assert!((chi.value_prime(&f5, f5.elem(2)).unwrap().to_complex() + 1.0).norm() < 1e-15);
        let mu = char_make(4, 1, g).unwrap();
        let s = f5
            .units()
            .map(|x| mu.value_prime(&f5, x).unwrap().to_complex())
            .sum::<Complex64>();
        assert!(s.norm() < 1e-12);
        assert!(matches!(
            char_make(4, 4, g),
            Err(FieldError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn character_orthogonality() {
        for p in [2u32, 3, 5, 7] {
            let f = field_make(p).unwrap();
            let e = ext_make(&f);
            let m = f.unit_order();
            let g = f.primitive_root();
            for j in 0..m {
                for k in 0..m {
                    let (cj, ck) = (char_make(m, j, g).unwrap(), char_make(m, k, g).unwrap());
                    let mut s = RootSum::zero();
                    for x in f.units() {
                        s.push(1, cj.value_prime(&f, x).unwrap() + ck.value_prime(&f, x).unwrap().neg());
                    }
                    let v = s.to_complex() / m as f64;
                    let want = if j == k { 1.0 } else { 0.0 };
                    assert!((v - want).norm() < 1e-12);
                }
            }
            let m2 = e.unit_order();
            if m2 <= 48 {
                let g2 = e.primitive_root();
                for j in 0..m2 {
                    for k in 0..m2 {
                        let (cj, ck) = (char_make(m2, j, g2).unwrap(), char_make(m2, k, g2).unwrap());
                        let v: Complex64 = e
                            .elements()
                            .filter(|a| !a.is_zero())
                            .map(|x| {
                                cj.value_ext(&e, x).unwrap().to_complex()
                                    * ck.value_ext(&e, x).unwrap().to_complex().conj()
                            })
                            .sum::<Complex64>()
                            / m2 as f64;
                        let want = if j == k { 1.0 } else { 0.0 };
                        assert!((v - want).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn decomposable_characters() {
        let e = ext_make(&field_make(3).unwrap());
        let g = e.primitive_root();
        let chars: Vec<_> = (0..8).map(|k| char_make(8, k, g).unwrap()).collect();
        assert!(is_decomposable(&e, &chars[0]).unwrap());
        assert!(is_decomposable(&e, &chars[4]).unwrap());
        let nondec = chars.iter().filter(|c| !is_decomposable(&e, c).unwrap()).count();
        assert_eq!(nondec, 6);
        // direct definition: ν(σ(x)) = ν(x) for all x
        for c in &chars {
            let direct = e.elements().filter(|a| !a.is_zero()).all(|x| {
                c.value_ext(&e, e.frobenius(x).unwrap()).unwrap() == c.value_ext(&e, x).unwrap()
            });
            assert_eq!(direct, is_decomposable(&e, c).unwrap());
        }
    }

    #[test]
    fn angle_arithmetic() {
        assert_eq!(Angle::new(3, 4) + Angle::new(1, 4), Angle::ZERO);
        assert_eq!(Angle::new(-1, 3), Angle::new(2, 3));
        assert_eq!(Angle::new(2, 8), Angle::new(1, 4));
        let mut s = RootSum::integer(2);
        s.push(-2, Angle::ZERO);
        assert_eq!(s, RootSum::zero());
    }
}
