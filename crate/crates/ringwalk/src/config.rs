//! Run configuration: a TOML file, command-line flags on top, and the
//! compact ring grammar shared by both.

use std::collections::BTreeMap;
use std::str::FromStr;

use ringwalk_core::chain::{AlphaParam, ClassDistribution, MultSide};
use ringwalk_core::field::field_make;
use ringwalk_core::ring::{ring_matrix, ring_product, ring_upper_triangular, ring_zn};
use ringwalk_core::{FiniteRing, Rational, RingAnalysis};
use serde::Deserialize;
use toml::Spanned;

use crate::CliError;

/// A ring to construct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingDescriptor {
    Zn(u32),
    Matrix { n: u32, q: u32 },
    UpperTriangular { q: u32 },
    Product(Vec<RingDescriptor>),
}

impl RingDescriptor {
    pub fn build(&self) -> Result<FiniteRing, CliError> {
        let field = |q: u32| field_make(q).map_err(|e| CliError::Ring(e.to_string()));
        let ring = match self {
            RingDescriptor::Zn(n) => ring_zn(*n),
            RingDescriptor::Matrix { n, q } => ring_matrix(*n, &field(*q)?),
            RingDescriptor::UpperTriangular { q } => ring_upper_triangular(&field(*q)?),
            RingDescriptor::Product(fs) => {
                let mut it = fs.iter();
                let first = it.next().ok_or_else(|| CliError::Ring("product needs at least one factor".into()))?;
                let mut acc = first.build()?;
                for f in it {
                    acc = ring_product(&acc, &f.build()?).map_err(|e| CliError::Ring(e.to_string()))?;
                }
                return Ok(acc);
            }
        };
        ring.map_err(|e| CliError::Ring(e.to_string()))
    }
}

impl std::fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingDescriptor::Zn(n) => write!(f, "zn({n})"),
            RingDescriptor::Matrix { n: 2, q } => write!(f, "matrix(q={q})"),
            RingDescriptor::Matrix { n, q } => write!(f, "matrix(n={n},q={q})"),
            RingDescriptor::UpperTriangular { q } => write!(f, "upper_triangular(q={q})"),
            RingDescriptor::Product(fs) => {
                write!(f, "product(")?;
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Parses `zn(6)`, `matrix(q=3)`, `matrix(n=2,q=3)`, `upper_triangular(3)`,
/// `product(zn(2),zn(3))`. Whitespace is ignored.
impl FromStr for RingDescriptor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = GrammarParser { s: compact.as_bytes(), pos: 0 };
        let d = p.ring()?;
        if p.pos != p.s.len() {
            return Err(format!("unexpected `{}` at offset {}", &compact[p.pos..], p.pos));
        }
        Ok(d)
    }
}

struct GrammarParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl GrammarParser<'_> {
    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn expect(&mut self, c: u8) -> Result<(), String> {
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!("expected `{}` at offset {}", c as char, self.pos))
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        let hit = self.s.get(self.pos) == Some(&c);
        if hit {
            self.pos += 1;
        }
        hit
    }

    /// `value` or `key=value`, values being unsigned integers.
    fn args(&mut self) -> Result<Vec<(Option<String>, u32)>, String> {
        let mut out = Vec::new();
        loop {
            let word = self.ident();
            let (key, val) = if self.eat(b'=') { (Some(word), self.ident()) } else { (None, word) };
            let v = val.parse::<u32>().map_err(|_| format!("`{val}` is not a non-negative integer"))?;
            out.push((key, v));
            if !self.eat(b',') {
                return Ok(out);
            }
        }
    }

    fn ring(&mut self) -> Result<RingDescriptor, String> {
        let kind = self.ident();
        self.expect(b'(')?;
        let d = if kind == "product" {
            let mut fs = vec![self.ring()?];
            while self.eat(b',') {
                fs.push(self.ring()?);
            }
            RingDescriptor::Product(fs)
        } else {
            let args = self.args()?;
            let get = |name: &str, pos: usize| -> Option<u32> {
                args.iter()
                    .find(|(k, _)| k.as_deref() == Some(name))
                    .or_else(|| args.get(pos).filter(|(k, _)| k.is_none()))
                    .map(|(_, v)| *v)
            };
            for (k, _) in &args {
                if let Some(k) = k {
                    if !["n", "q"].contains(&k.as_str()) {
                        return Err(format!("unknown parameter `{k}` for {kind}"));
                    }
                }
            }
            match kind.as_str() {
                "zn" => RingDescriptor::Zn(get("n", 0).ok_or("zn needs n")?),
                "matrix" => {
                    if args.len() == 1 {
                        RingDescriptor::Matrix { n: 2, q: get("q", 0).ok_or("matrix needs q")? }
                    } else {
                        RingDescriptor::Matrix { n: get("n", 0).ok_or("matrix needs n")?, q: get("q", 1).ok_or("matrix needs q")? }
                    }
                }
                "upper_triangular" => RingDescriptor::UpperTriangular { q: get("q", 0).ok_or("upper_triangular needs q")? },
                other => return Err(format!("unknown ring kind `{other}`")),
            }
        };
        self.expect(b')')?;
        Ok(d)
    }
}

/// The table form of a ring in the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RingTable {
    kind: String,
    n: Option<u32>,
    q: Option<u32>,
    #[serde(default)]
    factors: Vec<RingEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RingEntry {
    Compact(String),
    Table(RingTable),
}

impl RingEntry {
    fn resolve(&self) -> Result<RingDescriptor, String> {
        match self {
            RingEntry::Compact(s) => s.parse(),
            RingEntry::Table(t) => {
                let need = |v: Option<u32>, name: &str| v.ok_or_else(|| format!("{} needs `{name}`", t.kind));
                match t.kind.as_str() {
                    "zn" => Ok(RingDescriptor::Zn(need(t.n, "n")?)),
                    "matrix" => Ok(RingDescriptor::Matrix { n: t.n.unwrap_or(2), q: need(t.q, "q")? }),
                    "upper_triangular" => Ok(RingDescriptor::UpperTriangular { q: need(t.q, "q")? }),
                    "product" if !t.factors.is_empty() => {
                        Ok(RingDescriptor::Product(t.factors.iter().map(RingEntry::resolve).collect::<Result<_, _>>()?))
                    }
                    "product" => Err("product needs `factors`".into()),
                    other => Err(format!("unknown ring kind `{other}`")),
                }
            }
        }
    }
}

/// The multiplication law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QDescriptor {
    Uniform,
    /// Total mass of each listed class, keyed by its representative index.
    /// Unlisted classes get zero.
    ClassMass { weights: BTreeMap<usize, Rational>, normalize: bool },
}

impl QDescriptor {
    pub fn build(&self, r: &FiniteRing, an: &RingAnalysis) -> Result<ClassDistribution, CliError> {
        let bad = |m: String| CliError::invalid("q", m);
        match self {
            QDescriptor::Uniform => Ok(ClassDistribution::q_uniform(r, &an.classes)),
            QDescriptor::ClassMass { weights, normalize } => {
                let total: Rational = weights.values().sum();
                if weights.values().any(|w| *w < Rational::from_integer(0.into())) {
                    return Err(bad("weights must be non-negative".into()));
                }
                if total == Rational::from_integer(0.into()) {
                    return Err(bad("weights sum to zero".into()));
                }
                let scale = if *normalize { total } else { Rational::from_integer(1.into()) };
                let mut per_element = BTreeMap::new();
                for (&rep, w) in weights {
                    let id = an.classes.class_with_representative(rep).ok_or_else(|| {
                        bad(format!("{rep} is not a class representative; representatives are {:?}", an.classes.representatives().collect::<Vec<_>>()))
                    })?;
                    let size = Rational::from_integer((an.classes.class(id).size() as i64).into());
                    per_element.insert(rep, w / &scale / size);
                }
                ClassDistribution::q_sparse(r, &an.classes, &per_element).map_err(|e| bad(e.to_string()))
            }
        }
    }
}

impl FromStr for QDescriptor {
    type Err = String;

    /// `uniform`, or `rep=weight,...` with optional trailing `;normalize`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "uniform" {
            return Ok(QDescriptor::Uniform);
        }
        let (body, normalize) = match s.strip_suffix(";normalize") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let mut weights = BTreeMap::new();
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| format!("`{part}` is not rep=weight"))?;
            let rep = k.trim().parse::<usize>().map_err(|_| format!("`{k}` is not an element index"))?;
            weights.insert(rep, parse_rational(v.trim())?);
        }
        if weights.is_empty() {
            return Err("no weights given".into());
        }
        Ok(QDescriptor::ClassMass { weights, normalize })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct QTable {
    weights: BTreeMap<String, String>,
    #[serde(default)]
    normalize: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum QEntry {
    Compact(String),
    Table(QTable),
}

impl QEntry {
    fn resolve(&self) -> Result<QDescriptor, String> {
        match self {
            QEntry::Compact(s) => s.parse(),
            QEntry::Table(t) => {
                let mut weights = BTreeMap::new();
                for (k, v) in &t.weights {
                    let rep = k.parse::<usize>().map_err(|_| format!("`{k}` is not an element index"))?;
                    weights.insert(rep, parse_rational(v)?);
                }
                Ok(QDescriptor::ClassMass { weights, normalize: t.normalize })
            }
        }
    }
}

/// `p/q` or an integer, exactly.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    Rational::from_str(s.trim()).map_err(|_| format!("`{s}` is not an exact rational p/q"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (text or json)")),
        }
    }
}

pub fn parse_side(s: &str) -> Result<MultSide, String> {
    match s {
        "left" => Ok(MultSide::Left),
        "right" => Ok(MultSide::Right),
        _ => Err(format!("unknown side `{s}` (left or right)")),
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumSection {
    tolerance: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct MixSection {
    t: Option<usize>,
    epsilon: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateSection {
    t: Option<usize>,
    samples: Option<u64>,
    seed: Option<u64>,
    start: Option<usize>,
    side: Option<Spanned<String>>,
    threads: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    format: Option<Format>,
    path: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    ring: Option<Spanned<RingEntry>>,
    alpha: Option<Spanned<String>>,
    boundary: Option<bool>,
    q: Option<Spanned<QEntry>>,
    #[serde(default)]
    spectrum: SpectrumSection,
    #[serde(default)]
    mix: MixSection,
    #[serde(default)]
    simulate: SimulateSection,
    #[serde(default)]
    output: OutputSection,
}

/// Flag values; `None` leaves the file (or default) in place.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub ring: Option<String>,
    pub alpha: Option<String>,
    pub boundary: bool,
    pub q: Option<String>,
    pub tolerance: Option<f64>,
    pub t: Option<usize>,
    pub epsilon: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub start: Option<usize>,
    pub side: Option<String>,
    pub threads: Option<usize>,
    pub format: Option<String>,
    pub output: Option<String>,
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub ring: RingDescriptor,
    /// Kept as written so reports can echo it.
    pub alpha: Option<Rational>,
    pub boundary: bool,
    pub q: QDescriptor,
    pub tolerance: f64,
    pub t: Option<usize>,
    pub epsilon: f64,
    pub samples: u64,
    pub seed: Option<u64>,
    pub start: Option<usize>,
    pub side: MultSide,
    pub threads: Option<usize>,
    pub format: Format,
    pub output: Option<String>,
}

fn line_of(src: &str, span: std::ops::Range<usize>) -> usize {
    src[..span.start.min(src.len())].matches('\n').count() + 1
}

impl RunConfig {
    /// Merges a config file's text (if any) with flag overrides.
    pub fn resolve(file: Option<&str>, o: &Overrides) -> Result<RunConfig, CliError> {
        let src = file.unwrap_or("");
        let fc: FileConfig = toml::from_str(src).map_err(|e| CliError::Config(e.to_string()))?;
        let at = |field: &str, span: std::ops::Range<usize>, msg: String| CliError::ConfigField {
            line: line_of(src, span),
            field: field.into(),
            msg,
        };

        let ring = match (&o.ring, &fc.ring) {
            (Some(s), _) => s.parse().map_err(|m| CliError::invalid("--ring", m))?,
            (None, Some(sp)) => sp.get_ref().resolve().map_err(|m| at("ring", sp.span(), m))?,
            (None, None) => return Err(CliError::invalid("ring", "no ring given (config `ring` or --ring)".into())),
        };
        let alpha = match (&o.alpha, &fc.alpha) {
            (Some(s), _) => Some(parse_rational(s).map_err(|m| CliError::invalid("--alpha", m))?),
            (None, Some(sp)) => Some(parse_rational(sp.get_ref()).map_err(|m| at("alpha", sp.span(), m))?),
            (None, None) => None,
        };
        let q = match (&o.q, &fc.q) {
            (Some(s), _) => s.parse().map_err(|m| CliError::invalid("--q", m))?,
            (None, Some(sp)) => sp.get_ref().resolve().map_err(|m| at("q", sp.span(), m))?,
            (None, None) => QDescriptor::Uniform,
        };
        let side = match (&o.side, &fc.simulate.side) {
            (Some(s), _) => parse_side(s).map_err(|m| CliError::invalid("--side", m))?,
            (None, Some(sp)) => parse_side(sp.get_ref()).map_err(|m| at("simulate.side", sp.span(), m))?,
            (None, None) => MultSide::Left,
        };
        let format = match &o.format {
            Some(s) => s.parse().map_err(|m| CliError::invalid("--format", m))?,
            None => fc.output.format.unwrap_or_default(),
        };
        let cfg = RunConfig {
            ring,
            alpha,
            boundary: o.boundary || fc.boundary.unwrap_or(false),
            q,
            tolerance: o.tolerance.or(fc.spectrum.tolerance).unwrap_or(ringwalk_core::spectrum::MATCH_TOL),
            t: o.t.or(fc.mix.t).or(fc.simulate.t),
            epsilon: o.epsilon.or(fc.mix.epsilon).unwrap_or(0.25),
            samples: o.samples.or(fc.simulate.samples).unwrap_or(100_000),
            seed: o.seed.or(fc.simulate.seed),
            start: o.start.or(fc.simulate.start),
            side,
            threads: o.threads.or(fc.simulate.threads),
            format,
            output: o.output.clone().or(fc.output.path),
        };
        if !(cfg.tolerance > 0.0) {
            return Err(CliError::invalid("tolerance", "must be positive".into()));
        }
        if let Some(a) = &cfg.alpha {
            cfg.alpha_param_of(a)?;
        }
        Ok(cfg)
    }

    fn alpha_param_of(&self, a: &Rational) -> Result<AlphaParam, CliError> {
        let p = if self.boundary { AlphaParam::with_boundary(a.clone()) } else { AlphaParam::new(a.clone()) };
        p.map_err(|_| {
            let range = if self.boundary { "[0,1]" } else { "(0,1); use boundary = true for 0 or 1" };
            CliError::invalid("alpha", format!("{a} is outside {range}"))
        })
    }

    pub fn alpha_param(&self) -> Result<AlphaParam, CliError> {
        let a = self.alpha.as_ref().ok_or_else(|| CliError::invalid("alpha", "this command needs alpha (p/q)".into()))?;
        self.alpha_param_of(a)
    }
}
