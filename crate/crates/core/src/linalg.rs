//! Dense exact and floating-point linear algebra helpers.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("linear system is singular")]
    Singular,
    #[error("dimension mismatch")]
    DimensionMismatch,
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Solves the square system `a·x = b` exactly.
///
/// Each row is scaled to integers and reduced by fraction-free (Bareiss)
/// elimination, so intermediate entries stay integral.
pub fn solve_exact(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(LinalgError::DimensionMismatch);
    }
    // augmented integer matrix
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let l = lcm_of_denominators(row.iter().chain(core::iter::once(rhs)));
            row.iter()
                .chain(core::iter::once(rhs))
                .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let piv = (k..n).find(|&i| !m[i][k].is_zero()).ok_or(LinalgError::Singular)?;
        m.swap(k, piv);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(m[i][i].clone());
    }
    Ok(x)
}

/// Integer matrix product `a·b` for square row-major matrices of side `n`.
pub fn int_matmul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = &a[i * n + k];
            if aik.is_zero() {
                continue;
            }
            let row = &b[k * n..(k + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (d, bkj) in dst.iter_mut().zip(row) {
                if !bkj.is_zero() {
                    *d += aik * bkj;
                }
            }
        }
    }
    out
}

/// A unit-norm vector spanning the (numerical) null space of a square
/// complex matrix whose null space is one-dimensional.
pub fn complex_null_vector(a: &[Vec<Complex64>]) -> Option<Vec<Complex64>> {
    let n = a.len();
    let mut m: Vec<Vec<Complex64>> = a.to_vec();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let mut rank = 0;
    for k in 0..n {
        // full pivoting
        let mut best = (k, k, 0.0f64);
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, z) in row.iter().enumerate().skip(k) {
                if z.norm() > best.2 {
                    best = (i, j, z.norm());
                }
            }
        }
        if best.2 <= 1e-9 * scale {
            break;
        }
        m.swap(k, best.0);
        for row in m.iter_mut() {
            row.swap(k, best.1);
        }
        col_perm.swap(k, best.1);
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                let t = m[k][j];
                m[i][j] -= f * t;
            }
        }
        rank += 1;
    }
    if rank != n - 1 {
        return None;
    }
    // free variable is the last permuted column
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    y[n - 1] = Complex64::new(1.0, 0.0);
    for i in (0..n - 1).rev() {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in i + 1..n {
            acc += m[i][j] * y[j];
        }
        y[i] = -acc / m[i][i];
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for (k, &c) in col_perm.iter().enumerate() {
        v[c] = y[k];
    }
    let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
    Some(v.into_iter().map(|z| z / norm).collect())
}
