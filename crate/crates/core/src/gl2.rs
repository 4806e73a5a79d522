//! Conjugacy classes and the complex character table of `GL₂(𝔽_q)` for an
//! odd prime `q`.
//!
//! Matrices are written row-major as `[a11, a12, a21, a22]`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use thiserror::Error;

use crate::field::{ext_make, field_make, Angle, FieldElement, PrimeField, QuadraticExtension, RootSum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gl2Error {
    #[error("closed-form GL2 tables need an odd prime q, got {0}")]
    UnsupportedQ(u32),
    #[error("matrix is not a recognised principal-ideal generator")]
    UnknownGenerator,
    #[error("no explicit class function for this case")]
    UnknownCase,
}

pub type Mat2 = [u32; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConjClassKind {
    Central,
    Unipotent,
    Split,
    Anisotropic,
}

/// One conjugacy class. `x`, `y` are base-field residues; for anisotropic
/// classes `alpha` is the extension-field index of the eigenvalue with the
/// smaller index of the Frobenius pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClass {
    pub kind: ConjClassKind,
    pub x: u32,
    pub y: u32,
    pub alpha: usize,
    pub size: u64,
    pub representative: Mat2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Irrep {
    /// `χ∘det`.
    Det { chi: u64 },
    /// The `q`-dimensional complement of `det_χ` in `Ind_B(χ⊗χ)`.
    Steinberg { chi: u64 },
    /// `Ind_B(χ₁⊗χ₂)`, `χ₁ < χ₂`.
    PrincipalSeries { chi1: u64, chi2: u64 },
    /// Cuspidal, indexed by the smaller index of `{ν, ν^q}`.
    Cuspidal { nu: u64 },
}

impl Irrep {
    pub fn dim(&self, q: u32) -> u64 {
        let q = q as u64;
        match self {
            Irrep::Det { .. } => 1,
            Irrep::Steinberg { .. } => q,
            Irrep::PrincipalSeries { .. } => q + 1,
            Irrep::Cuspidal { .. } => q - 1,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Irrep::Det { chi } => format!("det[{chi}]"),
            Irrep::Steinberg { chi } => format!("st[{chi}]"),
            Irrep::PrincipalSeries { chi1, chi2 } => format!("ps[{chi1},{chi2}]"),
            Irrep::Cuspidal { nu } => format!("cusp[{nu}]"),
        }
    }
}

/// Which kind of principal left ideal generator `A` of `M₂(𝔽_q)` is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Identity,
    RankOne,
    Zero,
}

/// The two rank-one cases with explicit class functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankOneCase {
    /// `Y₀ = [[0,0],[1,0]]`.
    Nilpotent,
    /// `Y_t = [[t,0],[0,0]]`.
    Idempotent(u32),
}

#[derive(Debug, Clone)]
pub struct Gl2 {
    q: u32,
    field: PrimeField,
    ext: QuadraticExtension,
    classes: Vec<ConjClass>,
    irreps: Vec<Irrep>,
    by_trace_det: BTreeMap<(u32, u32), usize>,
}

pub fn gl2_make(q: u32) -> Result<Gl2, Gl2Error> {
    if q == 2 {
        return Err(Gl2Error::UnsupportedQ(q));
    }
    let field = field_make(q).map_err(|_| Gl2Error::UnsupportedQ(q))?;
    let ext = ext_make(&field);
    let classes = build_classes(&field, &ext);
    let irreps = build_irreps(&field, &ext);
    let mut by_trace_det = BTreeMap::new();
    for (i, c) in classes.iter().enumerate() {
        if c.kind != ConjClassKind::Central {
            let [a, _, _, d] = c.representative;
            let det = det2(&field, c.representative);
            by_trace_det.insert((field.add(a, d), det), i);
        }
    }
    Ok(Gl2 { q, field, ext, classes, irreps, by_trace_det })
}

fn det2(f: &PrimeField, m: Mat2) -> u32 {
    f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]))
}

fn build_classes(f: &PrimeField, ext: &QuadraticExtension) -> Vec<ConjClass> {
    let q = f.p();
    let qq = q as u64;
    let mut out = Vec::new();
    for x in 1..q {
        out.push(ConjClass {
            kind: ConjClassKind::Central,
            x,
            y: x,
            alpha: 0,
            size: 1,
            representative: [x, 0, 0, x],
        });
    }
    for x in 1..q {
        out.push(ConjClass {
            kind: ConjClassKind::Unipotent,
            x,
            y: x,
            alpha: 0,
            size: qq * qq - 1,
            representative: [x, 1, 0, x],
        });
    }
    for x in 1..q {
        for y in x + 1..q {
            out.push(ConjClass {
                kind: ConjClassKind::Split,
                x,
                y,
                alpha: 0,
                size: qq * qq + qq,
                representative: [x, 0, 0, y],
            });
        }
    }
    for i in 0..ext.size() {
        let a = ext.from_index(i);
        if ext.in_base(a) {
            continue;
        }
        let conj = ext.frobenius(a).expect("own element");
        if conj.index() < i {
            continue;
        }
        let t = ext.trace(a).expect("own element");
        let n = ext.norm(a).expect("nonzero");
        out.push(ConjClass {
            kind: ConjClassKind::Anisotropic,
            x: t,
            y: n,
            alpha: i,
            size: qq * qq - qq,
            representative: [0, f.neg(n), 1, t],
        });
    }
    out
}

fn build_irreps(f: &PrimeField, ext: &QuadraticExtension) -> Vec<Irrep> {
    let m = f.unit_order();
    let mut out = Vec::new();
    out.extend((0..m).map(|chi| Irrep::Det { chi }));
    out.extend((0..m).map(|chi| Irrep::Steinberg { chi }));
    for chi1 in 0..m {
        for chi2 in chi1 + 1..m {
            out.push(Irrep::PrincipalSeries { chi1, chi2 });
        }
    }
    let big = ext.unit_order();
    let p = f.p() as u64;
    for nu in 0..big {
        let tw = nu * p % big;
        if tw > nu {
            out.push(Irrep::Cuspidal { nu });
        }
    }
    out
}

impl Gl2 {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn extension(&self) -> &QuadraticExtension {
        &self.ext
    }

    pub fn order(&self) -> u64 {
        let q = self.q as u64;
        (q * q - 1) * (q * q - q)
    }

    pub fn conj_classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn class_of_kind(&self, kind: ConjClassKind, x: u32, y: u32) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.kind == kind && c.x == x && c.y == y)
    }

    /// Class index of an invertible matrix, `None` if singular.
    pub fn classify(&self, m: Mat2) -> Option<usize> {
        let f = &self.field;
        let det = det2(f, m);
        if det == 0 {
            return None;
        }
        if m[1] == 0 && m[2] == 0 && m[0] == m[3] {
            return Some((m[0] - 1) as usize);
        }
        self.by_trace_det.get(&(f.add(m[0], m[3]), det)).copied()
    }

    /// Exact character value as a sum of roots of unity.
    pub fn char_value(&self, rep: &Irrep, cls: &ConjClass) -> RootSum {
        let f = &self.field;
        let m = f.unit_order();
        let q = self.q as i64;
        let lg = |v: u32| f.dlog(v).expect("unit") as i64;
        let chi = |k: u64, v: u32| Angle::new(k as i64 * lg(v), m);
        match (*rep, cls.kind) {
            (Irrep::Det { chi: k }, ConjClassKind::Central | ConjClassKind::Unipotent) => {
                RootSum::term(1, chi(k, cls.x) + chi(k, cls.x))
            }
            (Irrep::Det { chi: k }, ConjClassKind::Split) => RootSum::term(1, chi(k, cls.x) + chi(k, cls.y)),
            (Irrep::Det { chi: k }, ConjClassKind::Anisotropic) => RootSum::term(1, chi(k, cls.y)),
            (Irrep::Steinberg { chi: k }, ConjClassKind::Central) => RootSum::term(q, chi(k, cls.x) + chi(k, cls.x)),
            (Irrep::Steinberg { .. }, ConjClassKind::Unipotent) => RootSum::zero(),
            (Irrep::Steinberg { chi: k }, ConjClassKind::Split) => RootSum::term(1, chi(k, cls.x) + chi(k, cls.y)),
            (Irrep::Steinberg { chi: k }, ConjClassKind::Anisotropic) => RootSum::term(-1, chi(k, cls.y)),
            (Irrep::PrincipalSeries { chi1, chi2 }, ConjClassKind::Central) => {
                RootSum::term(q + 1, chi(chi1, cls.x) + chi(chi2, cls.x))
            }
            (Irrep::PrincipalSeries { chi1, chi2 }, ConjClassKind::Unipotent) => {
                RootSum::term(1, chi(chi1, cls.x) + chi(chi2, cls.x))
            }
            (Irrep::PrincipalSeries { chi1, chi2 }, ConjClassKind::Split) => {
                RootSum::term(1, chi(chi1, cls.x) + chi(chi2, cls.y))
                    .add(&RootSum::term(1, chi(chi1, cls.y) + chi(chi2, cls.x)))
            }
            (Irrep::PrincipalSeries { .. }, ConjClassKind::Anisotropic) => RootSum::zero(),
            (Irrep::Cuspidal { nu }, ConjClassKind::Central) => RootSum::term(q - 1, self.nu_base(nu, cls.x)),
            // the unipotent value carries a minus sign; without it the
            // cuspidal rows fail to be orthogonal to the linear characters
            (Irrep::Cuspidal { nu }, ConjClassKind::Unipotent) => RootSum::term(-1, self.nu_base(nu, cls.x)),
            (Irrep::Cuspidal { .. }, ConjClassKind::Split) => RootSum::zero(),
            (Irrep::Cuspidal { nu }, ConjClassKind::Anisotropic) => {
                let a = self.ext.from_index(cls.alpha);
                let abar = self.ext.frobenius(a).expect("own element");
                RootSum::term(-1, self.nu_ext(nu, a)).add(&RootSum::term(-1, self.nu_ext(nu, abar)))
            }
        }
    }

    fn nu_ext(&self, nu: u64, a: FieldElement) -> Angle {
        let j = self.ext.dlog(a).expect("own element").expect("nonzero");
        Angle::new(((nu as u128 * j as u128) % self.ext.unit_order() as u128) as i64, self.ext.unit_order())
    }

    fn nu_base(&self, nu: u64, x: u32) -> Angle {
        self.nu_ext(nu, self.ext.embed(x))
    }

    pub fn char_value_complex(&self, rep: &Irrep, cls: &ConjClass) -> Complex64 {
        self.char_value(rep, cls).to_complex()
    }

    /// Rows indexed like [`irreps`](Self::irreps), columns like
    /// [`conj_classes`](Self::conj_classes).
    pub fn table(&self) -> Vec<Vec<Complex64>> {
        self.irreps
            .iter()
            .map(|r| self.classes.iter().map(|c| self.char_value_complex(r, c)).collect())
            .collect()
    }

    /// `(1/|G|) Σ_C |C|·a(C)·conj(b(C))`.
    pub fn inner_product(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let s: Complex64 = self
            .classes
            .iter()
            .zip(a.iter().zip(b))
            .map(|(c, (x, y))| x * y.conj() * c.size as f64)
            .sum();
        s / self.order() as f64
    }

    /// Multiplicity of each irreducible in `Ind_P^G 𝟙`, `P = {[[1,y],[0,w]]}`,
    /// via Frobenius reciprocity: `(1/|P|) Σ_{x∈P} χ(x)`.
    pub fn induced_from_p_decomposition(&self) -> Vec<(Irrep, i64)> {
        let q = self.q;
        let mut out = Vec::new();
        for rep in &self.irreps {
            let mut s = self.char_value_complex(rep, &self.classes[0]);
            let unip = &self.classes[self.class_of_kind(ConjClassKind::Unipotent, 1, 1).unwrap()];
            s += self.char_value_complex(rep, unip) * (q - 1) as f64;
            for w in 2..q {
                let c = &self.classes[self.class_of_kind(ConjClassKind::Split, 1, w).unwrap()];
                s += self.char_value_complex(rep, c) * q as f64;
            }
            let m = s / ((q * (q - 1)) as f64);
            out.push((*rep, libm::round(m.re) as i64));
        }
        out
    }

    /// The irreducibles occurring in `Ind_{LStab(A)}^G 𝟙` for a generator of
    /// the given kind.
    pub fn sigma_a(&self, kind: GeneratorKind) -> Vec<Irrep> {
        match kind {
            GeneratorKind::Identity => self.irreps.clone(),
            GeneratorKind::Zero => alloc::vec![Irrep::Det { chi: 0 }],
            GeneratorKind::RankOne => {
                let mut v = alloc::vec![Irrep::Det { chi: 0 }, Irrep::Steinberg { chi: 0 }];
                v.extend((1..self.field.unit_order()).map(|chi2| Irrep::PrincipalSeries { chi1: 0, chi2 }));
                v
            }
        }
    }

    /// Kind of a generator of a principal left ideal by rank.
    pub fn generator_kind(&self, a: Mat2) -> GeneratorKind {
        if a.iter().all(|&v| v == 0) {
            GeneratorKind::Zero
        } else if det2(&self.field, a) != 0 {
            GeneratorKind::Identity
        } else {
            GeneratorKind::RankOne
        }
    }

    pub fn sigma_of(&self, a: Mat2) -> Vec<Irrep> {
        self.sigma_a(self.generator_kind(a))
    }

    pub fn elements(&self) -> impl Iterator<Item = Mat2> + '_ {
        let q = self.q;
        (0..q.pow(4))
            .map(move |i| [i / (q * q * q), (i / (q * q)) % q, (i / q) % q, i % q])
            .filter(move |m| det2(&self.field, *m) != 0)
    }

    /// Group-algebra coefficients of the explicit class function attached
    /// to a rank-one generator:
    /// `Y_t ↦ Σ_{v ∼ [[t,1],[0,t]]} v + [[t,0],[0,t]]` and
    /// `Y₀ ↦ Σ_{v ∼ [[1,1],[0,1]]} v − (q−1)·I`.
    pub fn class_function_f(&self, case: RankOneCase) -> Result<BTreeMap<Mat2, i64>, Gl2Error> {
        let (t, extra) = match case {
            RankOneCase::Nilpotent => (1, -((self.q - 1) as i64)),
            RankOneCase::Idempotent(t) if (1..self.q).contains(&t) => (t, 1),
            RankOneCase::Idempotent(_) => return Err(Gl2Error::UnknownCase),
        };
        let cls = self.class_of_kind(ConjClassKind::Unipotent, t, t).expect("class exists");
        let mut out: BTreeMap<Mat2, i64> = self
            .elements()
            .filter(|m| self.classify(*m) == Some(cls))
            .map(|m| (m, 1))
            .collect();
        *out.entry([t, 0, 0, t]).or_insert(0) += extra;
        Ok(out)
    }
}
