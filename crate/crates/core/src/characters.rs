//! Complex character tables of unit groups `U_R`.
//!
//! Columns are the invertible similarity classes of the ring, which are the
//! conjugacy classes of `U_R`. For `M₂(𝔽_q)` with `q` odd the closed-form
//! `GL₂` table is used; every other unit group gets a numeric table from
//! Burnside's class-algebra method (simultaneous eigenvectors of the class
//! multiplication matrices).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gl2::{gl2_make, Gl2, Irrep};
use crate::linalg::complex_null_vector;
use crate::ring::{FiniteRing, RingAnalysis};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("could not separate the class-algebra eigenvalues")]
    Degenerate,
    #[error("numeric character table failed its orthogonality check")]
    NumericFailure,
    #[error("eigenvalue solver did not converge")]
    ConvergenceFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSource {
    ClosedFormGl2,
    Numeric,
}

#[derive(Debug, Clone)]
pub struct CharacterRow {
    pub label: String,
    pub dim: usize,
    /// One value per column.
    pub values: Vec<Complex64>,
    pub gl2: Option<Irrep>,
}

#[derive(Debug, Clone)]
pub struct UnitCharacterTable {
    order: usize,
    /// Similarity-class id of each column.
    columns: Vec<usize>,
    sizes: Vec<usize>,
    column_of: Vec<Option<usize>>,
    rows: Vec<CharacterRow>,
    source: TableSource,
}

impl UnitCharacterTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> &[CharacterRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn column_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn source(&self) -> TableSource {
        self.source
    }

    /// Column index of a unit, `None` for non-units.
    pub fn column_of(&self, x: usize) -> Option<usize> {
        self.column_of[x]
    }

    /// `χ_ρ(u)` for a unit `u`.
    pub fn value(&self, row: usize, u: usize) -> Complex64 {
        self.rows[row].values[self.column_of[u].expect("not a unit")]
    }

    /// `(1/|G|) Σ_C |C|·a(C)·conj(b(C))` for column-indexed class functions.
    pub fn inner_product(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let s: Complex64 = self
            .sizes
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&n, (x, y))| x * y.conj() * n as f64)
            .sum();
        s / self.order as f64
    }

    /// Largest deviation from row and column orthonormality.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows.len() {
            for j in 0..self.rows.len() {
                let ip = self.inner_product(&self.rows[i].values, &self.rows[j].values);
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - Complex64::new(want, 0.0)).norm());
            }
        }
        for a in 0..self.columns.len() {
            for b in 0..self.columns.len() {
                let s: Complex64 = self.rows.iter().map(|r| r.values[a] * r.values[b].conj()).sum();
                let want = if a == b { self.order as f64 / self.sizes[a] as f64 } else { 0.0 };
                worst = worst.max((s - Complex64::new(want, 0.0)).norm() / (self.order as f64));
            }
        }
        worst
    }
}

/// The character table of `U_R`, closed form for `M₂(𝔽_q)` with `q` odd.
pub fn unit_character_table(r: &FiniteRing, an: &RingAnalysis) -> Result<UnitCharacterTable, CharacterError> {
    if let Some(q) = r.m2_field() {
        if let Ok(g) = gl2_make(q) {
            return Ok(gl2_table(r, an, &g));
        }
    }
    numeric_character_table(r, an)
}

fn skeleton(r: &FiniteRing, an: &RingAnalysis) -> (Vec<usize>, Vec<usize>, Vec<Option<usize>>) {
    // identity column first
    let one_class = an.classes.class_of(r.one());
    let mut columns: Vec<usize> = vec![one_class];
    columns.extend(an.classes.unit_classes().filter(|&c| c != one_class));
    let sizes = columns.iter().map(|&c| an.classes.class(c).size()).collect();
    let mut column_of = vec![None; r.size()];
    for (j, &c) in columns.iter().enumerate() {
        for &x in &an.classes.class(c).elements {
            column_of[x] = Some(j);
        }
    }
    (columns, sizes, column_of)
}

/// The closed-form table of `GL₂(𝔽_q)` laid out on the ring's columns.
pub fn gl2_table(r: &FiniteRing, an: &RingAnalysis, g: &Gl2) -> UnitCharacterTable {
    let (columns, sizes, column_of) = skeleton(r, an);
    let col_cls: Vec<usize> = columns
        .iter()
        .map(|&c| {
            let e = r.matrix_entries(an.classes.class(c).representative).expect("matrix ring");
            g.classify([e[0], e[1], e[2], e[3]]).expect("unit")
        })
        .collect();
    let rows = g
        .irreps()
        .iter()
        .map(|rep| CharacterRow {
            label: rep.label(),
            dim: rep.dim(g.q()) as usize,
            values: col_cls
                .iter()
                .map(|&k| g.char_value_complex(rep, &g.conj_classes()[k]))
                .collect(),
            gl2: Some(*rep),
        })
        .collect();
    UnitCharacterTable {
        order: an.units.order(),
        columns,
        sizes,
        column_of,
        rows,
        source: TableSource::ClosedFormGl2,
    }
}

/// Numeric table by Burnside's method; works for any unit group.
pub fn numeric_character_table(r: &FiniteRing, an: &RingAnalysis) -> Result<UnitCharacterTable, CharacterError> {
    let (columns, sizes, column_of) = skeleton(r, an);
    let k = columns.len();
    let order = an.units.order();
    // c[i][j][l]: number of (x, y) ∈ C_i × C_j with x·y equal to a fixed z ∈ C_l
    let mut c = vec![vec![vec![0f64; k]; k]; k];
    for i in 0..k {
        for j in 0..k {
            let mut counts = vec![0usize; k];
            for &x in &an.classes.class(columns[i]).elements {
                for &y in &an.classes.class(columns[j]).elements {
                    counts[column_of[r.mul(x, y)].expect("units are closed")] += 1;
                }
            }
            for l in 0..k {
                c[i][j][l] = counts[l] as f64 / sizes[l] as f64;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _attempt in 0..16 {
        let coeffs: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a = DMatrix::<f64>::from_fn(k, k, |i, l| (0..k).map(|j| coeffs[j] * c[j][i][l]).sum());
        let schur = nalgebra::linalg::Schur::try_new(a.clone(), 1e-14, 10_000).ok_or(CharacterError::ConvergenceFailure)?;
        let eig: Vec<Complex64> = schur
            .complex_eigenvalues()
            .iter()
            .map(|z| Complex64::new(z.re, z.im))
            .collect();
        let sep = (0..k)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| (eig[i] - eig[j]).norm())
            .fold(f64::INFINITY, f64::min);
        if sep < 1e-6 {
            continue;
        }
        let mut rows = Vec::with_capacity(k);
        for mu in &eig {
            let m: Vec<Vec<Complex64>> = (0..k)
                .map(|i| (0..k).map(|l| Complex64::new(a[(i, l)], 0.0) - if i == l { *mu } else { Complex64::new(0.0, 0.0) }).collect())
                .collect();
            let v = complex_null_vector(&m).ok_or(CharacterError::Degenerate)?;
            let omega: Vec<Complex64> = v.iter().map(|z| z / v[0]).collect();
            let s: f64 = omega.iter().zip(&sizes).map(|(w, &n)| w.norm_sqr() / n as f64).sum();
            let dim_f = libm::sqrt(order as f64 / s);
            let dim = libm::round(dim_f) as usize;
            if (dim_f - dim as f64).abs() > 1e-6 || dim == 0 {
                return Err(CharacterError::NumericFailure);
            }
            let values: Vec<Complex64> = omega
                .iter()
                .zip(&sizes)
                .map(|(w, &n)| w * dim as f64 / n as f64)
                .collect();
            rows.push((dim, values));
        }
        rows.sort_by(|x, y| {
            let key = |r: &(usize, Vec<Complex64>)| {
                let trivial = r.1.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-6);
                (!trivial, r.0)
            };
            key(x).cmp(&key(y)).then_with(|| {
                for (a, b) in x.1.iter().zip(&y.1) {
                    let o = a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap());
                    if (a - b).norm() > 1e-6 {
                        return o;
                    }
                }
                core::cmp::Ordering::Equal
            })
        });
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, (dim, values))| CharacterRow { label: format!("irr{i}[d{dim}]"), dim, values, gl2: None })
            .collect();
        let table = UnitCharacterTable { order, columns, sizes, column_of, rows, source: TableSource::Numeric };
        if table.orthogonality_defect() > 1e-8 {
            return Err(CharacterError::NumericFailure);
        }
        return Ok(table);
    }
    Err(CharacterError::Degenerate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_make;
    use crate::ring::{ring_matrix, ring_product, ring_upper_triangular, ring_zn};

    fn check(r: &FiniteRing) -> UnitCharacterTable {
        let an = RingAnalysis::new(r);
        let t = numeric_character_table(r, &an).unwrap();
        assert_eq!(t.len(), t.columns().len());
        assert_eq!(t.rows().iter().map(|x| x.dim * x.dim).sum::<usize>(), an.units.order());
        assert!(t.orthogonality_defect() < 1e-10);
        t
    }

    #[test]
    fn abelian_groups() {
        for n in [1u32, 2, 6, 8, 15, 24] {
            let t = check(&ring_zn(n).unwrap());
            assert!(t.rows().iter().all(|r| r.dim == 1));
        }
        let r = ring_product(&ring_zn(4).unwrap(), &ring_zn(6).unwrap()).unwrap();
        check(&r);
    }

    #[test]
    fn nonabelian_groups() {
        let b3 = ring_upper_triangular(&field_make(3).unwrap()).unwrap();
        let t = check(&b3);
        let mut dims: Vec<usize> = t.rows().iter().map(|r| r.dim).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 1, 1, 2, 2]);
        let m2 = ring_matrix(2, &field_make(2).unwrap()).unwrap();
        let t = check(&m2);
        let mut dims: Vec<usize> = t.rows().iter().map(|r| r.dim).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 2]);
    }

    #[test]
    fn numeric_agrees_with_closed_form() {
        let r = ring_matrix(2, &field_make(3).unwrap()).unwrap();
        let an = RingAnalysis::new(&r);
        let closed = unit_character_table(&r, &an).unwrap();
        assert_eq!(closed.source(), TableSource::ClosedFormGl2);
        assert!(closed.orthogonality_defect() < 1e-10);
        let num = numeric_character_table(&r, &an).unwrap();
        for row in closed.rows() {
            let hit = num
                .rows()
                .iter()
                .filter(|o| o.values.iter().zip(&row.values).all(|(a, b)| (a - b).norm() < 1e-8))
                .count();
            assert_eq!(hit, 1, "{}", row.label);
        }
    }
}
