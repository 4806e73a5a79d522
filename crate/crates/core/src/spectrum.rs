//! Spectra of `B_R`: a dense numeric solve, the block-triangular
//! decomposition over principal left ideals, character-theoretic
//! predictions, and the closed form on `M₂(𝔽_q)`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::chain::{AlphaParam, ClassDistribution, TransitionMatrix};
use crate::characters::{unit_character_table, CharacterError, UnitCharacterTable};
use crate::gl2::{gl2_make, GeneratorKind, Gl2, Gl2Error, Irrep, Mat2};
use crate::linalg::rational_to_f64;
use crate::ring::{FiniteRing, RingAnalysis};

/// Default merge tolerance.
pub const MERGE_TOL: f64 = 1e-8;
/// Default tolerance when matching spectra from different routes.
pub const MATCH_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("eigenvalue iteration did not converge")]
    ConvergenceFailure,
    #[error("element {0} does not generate a listed principal left ideal")]
    NotAGenerator(usize),
    #[error("element {0} is a unit")]
    IsUnit(usize),
    #[error("no character table: {0}")]
    CharacterUnavailable(CharacterError),
    #[error("closed form needs M_2(F_q) with q odd")]
    NotM2,
    #[error(transparent)]
    Gl2(#[from] Gl2Error),
}

/// Complex eigenvalues with multiplicities. Values closer than the merge
/// tolerance (single linkage) are merged and reported by their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueMultiset {
    entries: Vec<(Complex64, usize)>,
    raw: Vec<Complex64>,
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> core::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

impl EigenvalueMultiset {
    pub fn from_values(values: Vec<Complex64>, tau: f64) -> EigenvalueMultiset {
        let mut raw = values;
        raw.sort_by(cmp_complex);
        let n = raw.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for i in 0..n {
            for j in i + 1..n {
                if raw[j].re - raw[i].re > tau {
                    break;
                }
                if (raw[j] - raw[i]).norm() <= tau {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[b.max(a)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, (Complex64, usize)> = BTreeMap::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            let e = groups.entry(root).or_insert((Complex64::new(0.0, 0.0), 0));
            e.0 += raw[i];
            e.1 += 1;
        }
        let mut entries: Vec<(Complex64, usize)> =
            groups.into_values().map(|(s, m)| (s / m as f64, m)).collect();
        entries.sort_by(|a, b| cmp_complex(&a.0, &b.0));
        EigenvalueMultiset { entries, raw }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Complex64, usize)>, tau: f64) -> EigenvalueMultiset {
        let values = pairs
            .into_iter()
            .flat_map(|(z, m)| core::iter::repeat_n(z, m))
            .collect();
        Self::from_values(values, tau)
    }

    pub fn entries(&self) -> &[(Complex64, usize)] {
        &self.entries
    }

    /// All values, one per multiplicity, sorted.
    pub fn values(&self) -> &[Complex64] {
        &self.raw
    }

    pub fn total(&self) -> usize {
        self.raw.len()
    }

    /// Number of values (counted with multiplicity) within `tol` of `z`.
    pub fn count_near(&self, z: Complex64, tol: f64) -> usize {
        self.raw.iter().filter(|w| (*w - z).norm() <= tol).count()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.raw.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Greedy one-to-one pairing of values within `tol`.
    pub fn compare(&self, other: &EigenvalueMultiset, tol: f64) -> MatchReport {
        let mut used = vec![false; other.raw.len()];
        let mut unmatched_left = Vec::new();
        let mut worst: f64 = 0.0;
        for z in &self.raw {
            let mut best: Option<(usize, f64)> = None;
            for (j, w) in other.raw.iter().enumerate() {
                if used[j] {
                    continue;
                }
                let d = (z - w).norm();
                if d <= tol && best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
            match best {
                Some((j, d)) => {
                    used[j] = true;
                    worst = worst.max(d);
                }
                None => unmatched_left.push(*z),
            }
        }
        let unmatched_right = other
            .raw
            .iter()
            .zip(&used)
            .filter(|(_, u)| !**u)
            .map(|(z, _)| *z)
            .collect();
        MatchReport { unmatched_left, unmatched_right, max_deviation: worst }
    }

    pub fn matches(&self, other: &EigenvalueMultiset, tol: f64) -> bool {
        self.total() == other.total() && self.compare(other, tol).is_match()
    }

    /// `B_R ↦ M_R`: keep one copy of 1, send every other `λ` to `(1−α)λ`.
    pub fn shift_to_full(&self, alpha: &AlphaParam, tol: f64) -> EigenvalueMultiset {
        let t = 1.0 - alpha.to_f64();
        let one = Complex64::new(1.0, 0.0);
        let pin = self
            .raw
            .iter()
            .enumerate()
            .filter(|(_, z)| (*z - one).norm() <= tol)
            .min_by(|a, b| (a.1 - one).norm().total_cmp(&(b.1 - one).norm()))
            .map(|(i, _)| i);
        let values = self
            .raw
            .iter()
            .enumerate()
            .map(|(i, z)| if Some(i) == pin { one } else { z * t })
            .collect();
        Self::from_values(values, MERGE_TOL)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    pub unmatched_left: Vec<Complex64>,
    pub unmatched_right: Vec<Complex64>,
    pub max_deviation: f64,
}

impl MatchReport {
    pub fn is_match(&self) -> bool {
        self.unmatched_left.is_empty() && self.unmatched_right.is_empty()
    }
}

/// Eigenvalues of a dense real matrix through a real Schur form.
pub fn eig_dense(m: DMatrix<f64>) -> Result<EigenvalueMultiset, SpectrumError> {
    if m.nrows() == 0 {
        return Ok(EigenvalueMultiset::from_values(Vec::new(), MERGE_TOL));
    }
    let schur = nalgebra::linalg::Schur::try_new(m, 1e-14, 100_000)
        .ok_or(SpectrumError::ConvergenceFailure)?;
    let values = schur
        .complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect();
    Ok(EigenvalueMultiset::from_values(values, MERGE_TOL))
}

/// Numeric spectrum of a transition matrix.
pub fn eig_numeric(m: &TransitionMatrix) -> Result<EigenvalueMultiset, SpectrumError> {
    eig_dense(m.to_dmatrix())
}

/// The diagonal block of `B_R` on `C[S_a]`: row `s`, column `t` holds
/// `Σ_{x : x·s = t} Q(x)` for `s, t ∈ S_a`. Products that fall into a
/// strictly smaller ideal are dropped.
#[derive(Debug, Clone)]
pub struct ProjectedOperator {
    pub generator: usize,
    pub basis: Vec<usize>,
    pub matrix: DMatrix<f64>,
}

fn check_generator(an: &RingAnalysis, a: usize) -> Result<usize, SpectrumError> {
    let id = an.ideals.ideal_of(a);
    if an.ideals.ideal(id).generator != a {
        return Err(SpectrumError::NotAGenerator(a));
    }
    Ok(id)
}

fn project(r: &FiniteRing, an: &RingAnalysis, a: usize, weights: &[(usize, f64)]) -> Result<ProjectedOperator, SpectrumError> {
    let id = check_generator(an, a)?;
    let basis = an.ideals.ideal(id).generators.clone();
    let pos: BTreeMap<usize, usize> = basis.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let k = basis.len();
    let mut m = DMatrix::<f64>::zeros(k, k);
    for (i, &s) in basis.iter().enumerate() {
        for &(x, w) in weights {
            if let Some(&j) = pos.get(&r.mul(x, s)) {
                m[(i, j)] += w;
            }
        }
    }
    Ok(ProjectedOperator { generator: a, basis, matrix: m })
}

pub fn projected_operator(
    r: &FiniteRing,
    an: &RingAnalysis,
    a: usize,
    q: &ClassDistribution,
) -> Result<ProjectedOperator, SpectrumError> {
    let weights: Vec<(usize, f64)> = q.support().map(|x| (x, rational_to_f64(q.prob(x)))).collect();
    project(r, an, a, &weights)
}

/// The projected action of the plain class sum `Σ_{v∈C} v`.
pub fn projected_class_sum(
    r: &FiniteRing,
    an: &RingAnalysis,
    a: usize,
    class_id: usize,
) -> Result<ProjectedOperator, SpectrumError> {
    let weights: Vec<(usize, f64)> = an.classes.class(class_id).elements.iter().map(|&x| (x, 1.0)).collect();
    project(r, an, a, &weights)
}

/// Action `e_s ↦ Σ_g c_g e_{g·s}` of a group-algebra element given by
/// matrix coefficients, on `C[S_a]` of a matrix ring.
pub fn group_algebra_action(
    r: &FiniteRing,
    an: &RingAnalysis,
    a: usize,
    coeffs: &BTreeMap<Mat2, i64>,
) -> Result<ProjectedOperator, SpectrumError> {
    let weights: Vec<(usize, f64)> = coeffs
        .iter()
        .map(|(m, &c)| (r.matrix_index(m).expect("matrix ring"), c as f64))
        .collect();
    project(r, an, a, &weights)
}

/// Spectrum of every diagonal block, keyed by the block's generator.
#[derive(Debug, Clone)]
pub struct BlockSpectrum {
    pub blocks: Vec<(usize, EigenvalueMultiset)>,
    pub combined: EigenvalueMultiset,
}

pub fn block_spectrum(r: &FiniteRing, an: &RingAnalysis, q: &ClassDistribution) -> Result<BlockSpectrum, SpectrumError> {
    let mut blocks = Vec::new();
    let mut all = Vec::with_capacity(r.size());
    for a in an.ideals.representatives() {
        let p = projected_operator(r, an, a, q)?;
        let e = eig_dense(p.matrix)?;
        all.extend_from_slice(e.values());
        blocks.push((a, e));
    }
    Ok(BlockSpectrum { blocks, combined: EigenvalueMultiset::from_values(all, MERGE_TOL) })
}

/// Permutation character of `U_R` on `S_a`, one value per table column.
pub fn perm_character(r: &FiniteRing, an: &RingAnalysis, table: &UnitCharacterTable, a: usize) -> Vec<Complex64> {
    let s_a = an.generator_set(a);
    table
        .columns()
        .iter()
        .map(|&c| {
            let u = an.classes.class(c).representative;
            let fix = s_a.iter().filter(|&&s| r.mul(u, s) == s).count();
            Complex64::new(fix as f64, 0.0)
        })
        .collect()
}

/// Multiplicity of the irreducible in row `row` inside `C[S_a]`.
pub fn perm_char_multiplicity(
    r: &FiniteRing,
    an: &RingAnalysis,
    table: &UnitCharacterTable,
    a: usize,
    row: usize,
) -> i64 {
    let pi = perm_character(r, an, table, a);
    libm::round(table.inner_product(&pi, &table.rows()[row].values).re) as i64
}

/// Orbitals of `U_R` on `S_a × S_a` and whether their adjacency matrices
/// commute. Also returns `Σ_u fix(u)²/|U_R|`, which must equal the orbital
/// count.
pub fn orbital_algebra(r: &FiniteRing, an: &RingAnalysis, a: usize) -> (usize, f64, bool) {
    let s_a = an.generator_set(a);
    let k = s_a.len();
    let pos: BTreeMap<usize, usize> = s_a.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut orbit = vec![usize::MAX; k * k];
    let mut count = 0;
    for i in 0..k {
        for j in 0..k {
            if orbit[i * k + j] != usize::MAX {
                continue;
            }
            for &u in an.units.elements() {
                let (ui, uj) = (pos[&r.mul(u, s_a[i])], pos[&r.mul(u, s_a[j])]);
                orbit[ui * k + uj] = count;
            }
            count += 1;
        }
    }
    let fix2: f64 = an
        .units
        .elements()
        .iter()
        .map(|&u| {
            let f = s_a.iter().filter(|&&s| r.mul(u, s) == s).count() as f64;
            f * f
        })
        .sum::<f64>()
        / an.units.order() as f64;
    let mats: Vec<DMatrix<f64>> = (0..count)
        .map(|o| DMatrix::from_fn(k, k, |i, j| (orbit[i * k + j] == o) as u8 as f64))
        .collect();
    let mut commutative = true;
    'outer: for x in 0..count {
        for y in x + 1..count {
            if &mats[x] * &mats[y] != &mats[y] * &mats[x] {
                commutative = false;
                break 'outer;
            }
        }
    }
    (count, fix2, commutative)
}

/// Whether `C[S_a]` is multiplicity-free as a `U_R`-representation.
///
/// Uses the character table when one can be built and otherwise the
/// commutativity of the orbital algebra, which is equivalent.
pub fn is_multiplicity_free_nonunit(r: &FiniteRing, an: &RingAnalysis, a: usize) -> Result<bool, SpectrumError> {
    if an.units.is_unit(a) {
        return Err(SpectrumError::IsUnit(a));
    }
    match unit_character_table(r, an) {
        Ok(t) => Ok((0..t.len()).all(|row| perm_char_multiplicity(r, an, &t, a, row) <= 1)),
        Err(_) => Ok(orbital_algebra(r, an, a).2),
    }
}

/// One predicted eigenvalue: block generator, character-table row, value,
/// the multiplicity `m_ρ` of `ρ` in `C[S_a]`, and `dim ρ`.
#[derive(Debug, Clone)]
pub struct Prediction {
    pub generator: usize,
    pub row: usize,
    pub label: String,
    pub value: Complex64,
    pub constituent_multiplicity: usize,
    pub dim: usize,
    pub unit_block: bool,
}

impl Prediction {
    /// Dimension of the `ρ`-isotypic part of the block, on which the block
    /// acts by the scalar `value`.
    pub fn isotypic_dim(&self) -> usize {
        self.constituent_multiplicity * self.dim
    }
}

/// Eigenvalue predictions on the unit block and on every multiplicity-free
/// non-unit block.
///
/// On such a block the projected operator commutes with `U_R` and acts by a
/// scalar on each isotypic part, so
/// `λ = Tr(P·E_ρ)/(m_ρ·dim ρ) = (1/(m_ρ|U_R|)) Σ_u conj χ_ρ(u) Tr(P·u)`.
pub fn multiplicity_predictions(
    r: &FiniteRing,
    an: &RingAnalysis,
    q: &ClassDistribution,
    table: &UnitCharacterTable,
) -> Result<Vec<Prediction>, SpectrumError> {
    let mut out = Vec::new();
    for a in an.ideals.representatives() {
        let unit_block = an.units.is_unit(a);
        if !unit_block && !is_multiplicity_free_nonunit(r, an, a)? {
            continue;
        }
        let p = projected_operator(r, an, a, q)?;
        let pos: BTreeMap<usize, usize> = p.basis.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        // Tr(P·u) = Σ_s P[u·s][s], constant on conjugacy classes
        let traces: Vec<f64> = table
            .columns()
            .iter()
            .map(|&c| {
                let u = an.classes.class(c).representative;
                p.basis.iter().enumerate().map(|(j, &s)| p.matrix[(pos[&r.mul(u, s)], j)]).sum()
            })
            .collect();
        let pi = perm_character(r, an, table, a);
        for (row, ch) in table.rows().iter().enumerate() {
            let m = libm::round(table.inner_product(&pi, &ch.values).re) as usize;
            if m == 0 {
                continue;
            }
            let tr: Complex64 = traces
                .iter()
                .zip(&ch.values)
                .map(|(t, v)| v.conj() * *t)
                .zip(table.column_sizes())
                .map(|(z, &n)| z * n as f64)
                .sum();
            out.push(Prediction {
                generator: a,
                row,
                label: ch.label.clone(),
                value: tr / (m * table.order()) as f64,
                constituent_multiplicity: m,
                dim: ch.dim,
                unit_block,
            });
        }
    }
    Ok(out)
}

/// One failed multiplicity lower bound.
#[derive(Debug, Clone)]
pub struct BoundViolation {
    pub value: Complex64,
    pub required: usize,
    pub found: usize,
}

/// Checks the multiplicity lower bounds against a numeric spectrum.
///
/// Each unit-block prediction needs `dim(ρ)²` copies. Each non-unit
/// prediction needs `Σ dim(ρ)` over the multiplicity-free blocks giving
/// the same `ρ` the same value. The aggregate bound, summing isotypic
/// dimensions of every prediction with that value, is checked too.
pub fn check_multiplicity_bounds(
    predictions: &[Prediction],
    spectrum: &EigenvalueMultiset,
    tol: f64,
) -> Vec<BoundViolation> {
    let mut out = Vec::new();
    for p in predictions {
        let required = if p.unit_block {
            p.dim * p.dim
        } else {
            predictions
                .iter()
                .filter(|o| !o.unit_block && o.row == p.row && (o.value - p.value).norm() <= tol)
                .map(|o| o.dim)
                .sum()
        };
        let aggregate: usize = predictions
            .iter()
            .filter(|o| (o.value - p.value).norm() <= tol)
            .map(|o| o.isotypic_dim())
            .sum();
        let found = spectrum.count_near(p.value, tol);
        let need = required.max(aggregate);
        if found < need {
            out.push(BoundViolation { value: p.value, required: need, found });
        }
    }
    out
}

/// How the unit-block closed form is normalised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gl2Normalization {
    /// `Σ Q(X)|C_X|χ_ρ(X) / dim ρ`.
    DivideByDim,
    /// `Σ Q(X)|C_X|χ_ρ(X)`.
    Literal,
}

#[derive(Debug, Clone)]
pub struct Gl2Eigenvalue {
    pub block: GeneratorKind,
    pub irrep: Irrep,
    pub value: Complex64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub struct Gl2SpectrumReport {
    pub q: u32,
    pub normalization: Gl2Normalization,
    pub entries: Vec<Gl2Eigenvalue>,
}

impl Gl2SpectrumReport {
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn multiset(&self) -> EigenvalueMultiset {
        EigenvalueMultiset::from_pairs(self.entries.iter().map(|e| (e.value, e.multiplicity)), MERGE_TOL)
    }
}

/// `Q` at the given matrix.
fn q_at(r: &FiniteRing, q: &ClassDistribution, m: Mat2) -> f64 {
    rational_to_f64(q.prob(r.matrix_index(&m).expect("matrix ring")))
}

/// Closed-form spectrum of `B_R` on `M₂(𝔽_q)`, `q` an odd prime.
pub fn gl2_spectrum(
    r: &FiniteRing,
    an: &RingAnalysis,
    q_dist: &ClassDistribution,
    normalization: Gl2Normalization,
) -> Result<Gl2SpectrumReport, SpectrumError> {
    let q = r.m2_field().ok_or(SpectrumError::NotM2)?;
    let g = gl2_make(q)?;
    Ok(gl2_spectrum_with(r, an, q_dist, &g, normalization))
}

pub fn gl2_spectrum_with(
    r: &FiniteRing,
    an: &RingAnalysis,
    q_dist: &ClassDistribution,
    g: &Gl2,
    normalization: Gl2Normalization,
) -> Gl2SpectrumReport {
    let q = g.q();
    let qf = q as f64;
    let classes = g.conj_classes();
    // Σ_{X∈ψ^×} Q(X)|C_X| χ_ρ(X), with Q read off any member of each class
    let unit_sum = |rep: &Irrep| -> Complex64 {
        classes
            .iter()
            .map(|c| g.char_value_complex(rep, c) * (q_at(r, q_dist, c.representative) * c.size as f64))
            .sum()
    };
    let chi_at = |rep: &Irrep, m: Mat2| g.char_value_complex(rep, &classes[g.classify(m).unwrap()]);
    let mut entries = Vec::new();
    for rep in g.irreps() {
        let d = rep.dim(q) as f64;
        let s = unit_sum(rep);
        let value = match normalization {
            Gl2Normalization::DivideByDim => s / d,
            Gl2Normalization::Literal => s,
        };
        entries.push(Gl2Eigenvalue {
            block: GeneratorKind::Identity,
            irrep: *rep,
            value,
            multiplicity: (rep.dim(q) * rep.dim(q)) as usize,
        });
    }
    let y0 = q_at(r, q_dist, [0, 0, 1, 0]);
    for rep in g.sigma_a(GeneratorKind::RankOne) {
        let d = rep.dim(q) as f64;
        let mut s = unit_sum(&rep);
        s += (chi_at(&rep, [1, 1, 0, 1]) * (qf * qf - 1.0) - chi_at(&rep, [1, 0, 0, 1]) * (qf - 1.0)) * y0;
        for t in 1..q {
            let yt = q_at(r, q_dist, [t, 0, 0, 0]);
            s += (chi_at(&rep, [t, 1, 0, t]) * (qf * qf - 1.0) + chi_at(&rep, [t, 0, 0, t])) * yt;
        }
        entries.push(Gl2Eigenvalue {
            block: GeneratorKind::RankOne,
            irrep: rep,
            value: s / d,
            multiplicity: ((q as u64 + 1) * rep.dim(q)) as usize,
        });
    }
    let total: f64 = an
        .classes
        .classes()
        .iter()
        .map(|c| rational_to_f64(q_dist.prob(c.representative)) * c.size() as f64)
        .sum();
    entries.push(Gl2Eigenvalue {
        block: GeneratorKind::Zero,
        irrep: Irrep::Det { chi: 0 },
        value: Complex64::new(total, 0.0),
        multiplicity: 1,
    });
    Gl2SpectrumReport { q, normalization, entries }
}

/// Outcome of testing both unit-block normalisations against a numeric
/// spectrum.
#[derive(Debug, Clone)]
pub struct NormalizationCheck {
    pub divide_by_dim: bool,
    pub literal: bool,
}

impl NormalizationCheck {
    pub fn adopted(&self) -> Option<Gl2Normalization> {
        if self.divide_by_dim {
            Some(Gl2Normalization::DivideByDim)
        } else if self.literal {
            Some(Gl2Normalization::Literal)
        } else {
            None
        }
    }
}

pub fn resolve_gl2_normalization(
    r: &FiniteRing,
    an: &RingAnalysis,
    q_dist: &ClassDistribution,
    numeric: &EigenvalueMultiset,
    tol: f64,
) -> Result<NormalizationCheck, SpectrumError> {
    let a = gl2_spectrum(r, an, q_dist, Gl2Normalization::DivideByDim)?.multiset();
    let b = gl2_spectrum(r, an, q_dist, Gl2Normalization::Literal)?.multiset();
    Ok(NormalizationCheck { divide_by_dim: a.matches(numeric, tol), literal: b.matches(numeric, tol) })
}
