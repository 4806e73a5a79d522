//! The six subcommands. Each builds a [`Report`]; a failed check marks the
//! report failed, an error aborts it.

use std::fmt::Display;

use num_complex::Complex64;
use ringwalk_core::chain::{build_b, build_m, AlphaParam, ClassDistribution, MultSide};
use ringwalk_core::characters::{unit_character_table, UnitCharacterTable};
use ringwalk_core::linalg::rational_to_f64;
use ringwalk_core::mixing::{d_of_t, mixing_bound, tv_distance, SimulationResult, Simulator, MAX_HORIZON};
use ringwalk_core::ring::{coset_representatives, lann, r_xy, transitivity_witness};
use ringwalk_core::spectrum::{
    block_spectrum, check_multiplicity_bounds, eig_numeric, gl2_spectrum, is_multiplicity_free_nonunit,
    orbital_algebra, perm_char_multiplicity, resolve_gl2_normalization, multiplicity_predictions, Gl2Normalization,
    Prediction,
};
use ringwalk_core::stationary::{
    is_stationary, stationary_gl2, stationary_recursive, stationary_solve, stationary_uniform, stationary_units_formula,
    SOLVE_MAX,
};
use ringwalk_core::{FiniteRing, Rational, RingAnalysis};

use crate::config::{QDescriptor, RunConfig};
use crate::report::Report;
use crate::CliError;

/// Largest ring handed to the dense eigen-solver.
pub const DENSE_MAX: usize = 2500;
/// Largest ring for the cubic structural scans in `verify`.
pub const STRUCTURE_MAX: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Describe,
    Spectrum,
    Stationary,
    Mix,
    Simulate,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Describe => "describe",
            Command::Spectrum => "spectrum",
            Command::Stationary => "stationary",
            Command::Mix => "mix",
            Command::Simulate => "simulate",
            Command::Verify => "verify",
        }
    }
}

fn compute<E: Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

/// Always `num/den`, including integers.
pub fn frac(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Shortest round-trip decimal; `|x| < 1e-12` prints as zero.
pub fn dec(x: f64) -> String {
    let x = if x.abs() < 1e-12 { 0.0 } else { x };
    format!("{x:?}")
}

fn yes(b: bool) -> &'static str {
    if b { "yes" } else { "no" }
}

struct Context<'a> {
    cfg: &'a RunConfig,
    ring: FiniteRing,
    an: RingAnalysis,
    q: ClassDistribution,
}

impl<'a> Context<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Context<'a>, CliError> {
        let ring = cfg.ring.build()?;
        let an = RingAnalysis::new(&ring);
        let q = cfg.q.build(&ring, &an)?;
        Ok(Context { cfg, ring, an, q })
    }

    fn header(&self, report: &mut Report) {
        report
            .meta("ring", self.cfg.ring.to_string())
            .meta("ring_label", self.ring.label())
            .meta("n", self.ring.size());
        let q = match &self.cfg.q {
            QDescriptor::Uniform => "uniform".to_string(),
            QDescriptor::ClassMass { weights, normalize } => {
                let w: Vec<String> = weights.iter().map(|(k, v)| format!("{k}={}", frac(v))).collect();
                format!("{}{}", w.join(","), if *normalize { ";normalize" } else { "" })
            }
        };
        report.meta("q", q);
        if let Some(a) = &self.cfg.alpha {
            report.meta("alpha", frac(a));
        }
    }

    fn q_is_uniform(&self) -> bool {
        self.q == ClassDistribution::q_uniform(&self.ring, &self.an.classes)
    }

    fn table(&self) -> Option<UnitCharacterTable> {
        unit_character_table(&self.ring, &self.an).ok()
    }

    /// Multiplicity-free status of a non-unit, via the character table when
    /// there is one and the orbital algebra otherwise.
    fn multiplicity_free(&self, table: Option<&UnitCharacterTable>, a: usize) -> bool {
        match table {
            Some(t) => (0..t.len()).all(|row| perm_char_multiplicity(&self.ring, &self.an, t, a, row) <= 1),
            None => orbital_algebra(&self.ring, &self.an, a).2,
        }
    }
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Report, CliError> {
    let ctx = Context::new(cfg)?;
    let mut report = Report::new(cmd.name());
    ctx.header(&mut report);
    match cmd {
        Command::Describe => describe(&ctx, &mut report),
        Command::Spectrum => spectrum(&ctx, &mut report, true)?,
        Command::Stationary => stationary(&ctx, &mut report, true)?,
        Command::Mix => mix(&ctx, &mut report, true)?,
        Command::Simulate => simulate(&ctx, &mut report)?,
        Command::Verify => verify(&ctx, &mut report)?,
    }
    Ok(report)
}

fn describe(ctx: &Context, report: &mut Report) {
    let (r, an) = (&ctx.ring, &ctx.an);
    report
        .meta("units", an.units.order())
        .meta("commutative", yes(r.is_commutative()))
        .meta("similarity_classes", an.classes.len())
        .meta("principal_left_ideals", an.ideals.len());
    let t = report.table("classes", &["representative", "element", "size", "invertible"]);
    for c in an.classes.classes() {
        t.rows.push(vec![c.representative.to_string(), r.describe_element(c.representative), c.size().to_string(), yes(c.invertible).into()]);
    }
    let table = ctx.table();
    let rows: Vec<Vec<String>> = an
        .ideals
        .ideals()
        .iter()
        .map(|ideal| {
            let a = ideal.generator;
            let f: Vec<String> = an.f_set(r, a).iter().map(|&c| an.classes.class(c).representative.to_string()).collect();
            let mf = if an.units.is_unit(a) { "unit" } else { yes(ctx.multiplicity_free(table.as_ref(), a)) };
            vec![
                a.to_string(),
                r.describe_element(a),
                ideal.elements.len().to_string(),
                ideal.generators.len().to_string(),
                an.lstab(r, a).len().to_string(),
                f.join(";"),
                mf.into(),
            ]
        })
        .collect();
    report
        .table("generators", &["generator", "element", "ideal_size", "generator_set_size", "lstab_size", "f_set", "multiplicity_free"])
        .rows = rows;
    if table.is_none() {
        report.notice("no character table for the unit group; multiplicity-free flags use the orbital algebra");
    }
    structure_checks(ctx, report, false);
}

fn structure_checks(ctx: &Context, report: &mut Report, exhaustive: bool) {
    let (r, an) = (&ctx.ring, &ctx.an);
    let axioms = r.verify_axioms(2000, 0);
    report.check("ring_axioms", axioms.is_ok(), axioms.err().map(|e| e.to_string()).unwrap_or_default());
    let mut seen = vec![0usize; r.size()];
    let mut orbit_ok = true;
    for ideal in an.ideals.ideals() {
        for &x in &ideal.generators {
            seen[x] += 1;
        }
        let a = ideal.generator;
        orbit_ok &= ideal.generators.len() * an.lstab(r, a).len() == an.units.order();
        orbit_ok &= coset_representatives(r, &an.units, a).len() == ideal.generators.len();
    }
    report.check("generator_sets_partition", seen.iter().all(|&c| c == 1), "");
    report.check("orbit_stabilizer", orbit_ok, "");
    if !exhaustive {
        return;
    }
    if r.size() > STRUCTURE_MAX {
        report.notice(format!("annihilator and witness scans skipped above {STRUCTURE_MAX} elements"));
        return;
    }
    let ann: Vec<usize> = r.elements().map(|y| lann(r, y).len()).collect();
    let rxy_ok = r.elements().all(|x| r.elements().all(|y| {
        let k = r_xy(r, x, y).len();
        k == 0 || k == ann[y]
    }));
    report.check("r_xy_sizes", rxy_ok, "");
    let witness_ok = an.ideals.ideals().iter().all(|ideal| {
        ideal.generators.iter().all(|&x| {
            ideal.generators.iter().all(|&y| transitivity_witness(r, &an.units, x, y).is_ok_and(|u| r.mul(u, x) == y))
        })
    });
    report.check("transitivity_witnesses", witness_ok, "");
}

fn labels_near(preds: &[Prediction], z: Complex64, tol: f64) -> Vec<String> {
    let mut out: Vec<String> = preds.iter().filter(|p| (p.value - z).norm() <= tol).map(|p| p.label.clone()).collect();
    out.sort();
    out.dedup();
    out
}

fn spectrum(ctx: &Context, report: &mut Report, tables: bool) -> Result<(), CliError> {
    let (r, an, q) = (&ctx.ring, &ctx.an, &ctx.q);
    let tol = ctx.cfg.tolerance;
    if r.size() > DENSE_MAX {
        return Err(CliError::Compute(format!("dense spectrum limited to {DENSE_MAX} elements")));
    }
    let dense = eig_numeric(&build_b(r, q, MultSide::Left)).map_err(compute)?;
    let blocks = block_spectrum(r, an, q).map_err(compute)?;
    let rep = dense.compare(&blocks.combined, tol);
    report.check("dense_vs_blocks", rep.is_match(), format!("max deviation {}", dec(rep.max_deviation)));
    report.check("total_multiplicity", dense.total() == r.size(), format!("{} eigenvalues", dense.total()));
    report.meta("total_multiplicity", dense.total());
    report.meta("tolerance", dec(tol));

    let closed = match r.m2_field() {
        Some(p) if p % 2 == 1 => {
            let c = gl2_spectrum(r, an, q, Gl2Normalization::DivideByDim).map_err(compute)?;
            let norm = resolve_gl2_normalization(r, an, q, &dense, tol).map_err(compute)?;
            report.meta("normalization_divide_by_dim", yes(norm.divide_by_dim));
            report.meta("normalization_literal", yes(norm.literal));
            let m = c.multiset();
            let rep = dense.compare(&m, tol);
            report.check("dense_vs_gl2", rep.is_match(), format!("max deviation {}", dec(rep.max_deviation)));
            report.check("gl2_total", c.total() == r.size(), format!("{}", c.total()));
            Some((c, m))
        }
        _ => {
            report.notice("gl2 layer skipped: ring is not M_2(F_q) with q odd");
            None
        }
    };

    let preds = match ctx.table() {
        Some(t) => {
            let p = multiplicity_predictions(r, an, q, &t).map_err(compute)?;
            let bad = check_multiplicity_bounds(&p, &dense, tol);
            report.check("multiplicity_bounds", bad.is_empty(), format!("{} predictions, {} violations", p.len(), bad.len()));
            p
        }
        None => {
            report.notice("no character table for the unit group; predictions skipped");
            vec![]
        }
    };

    if tables {
        let mut rows = Vec::new();
        for &(z, m) in dense.entries() {
            let in_blocks: Vec<String> = blocks
                .blocks
                .iter()
                .filter(|(_, e)| e.count_near(z, tol) > 0)
                .map(|(a, _)| a.to_string())
                .collect();
            let mut labels = match &closed {
                Some((c, _)) => {
                    let mut l: Vec<String> =
                        c.entries.iter().filter(|e| (e.value - z).norm() <= tol).map(|e| e.irrep.label()).collect();
                    l.sort();
                    l.dedup();
                    l
                }
                None => vec![],
            };
            if labels.is_empty() {
                labels = labels_near(&preds, z, tol);
            }
            let matched = blocks.combined.count_near(z, tol) == dense.count_near(z, tol)
                && closed.as_ref().is_none_or(|(_, cm)| cm.count_near(z, tol) == dense.count_near(z, tol));
            rows.push(vec![
                dec(z.re),
                dec(z.im),
                m.to_string(),
                if in_blocks.is_empty() { "-".into() } else { in_blocks.join(";") },
                if labels.is_empty() { "-".into() } else { labels.join(";") },
                yes(matched).into(),
            ]);
        }
        let all = rows.iter().all(|r| r[5] == "yes");
        report.meta("status_line", if all { "all matched" } else { "mismatches present" });
        report.table("eigenvalues", &["re", "im", "multiplicity", "block", "label", "matched"]).rows = rows;
    }
    Ok(())
}

fn stationary(ctx: &Context, report: &mut Report, tables: bool) -> Result<(), CliError> {
    let (r, an, q) = (&ctx.ring, &ctx.an, &ctx.q);
    let alpha = ctx.cfg.alpha_param()?;
    let pi = stationary_recursive(r, an, q, &alpha).map_err(compute)?;
    let one = Rational::from_integer(1.into());
    report.check("sums_to_one", pi.iter().sum::<Rational>() == one, "");
    if r.size() <= SOLVE_MAX {
        let m = build_m(r, q, &alpha);
        let exact = stationary_solve(&m).map_err(compute)?;
        report.check("solve_vs_recursive", exact == pi, "exact");
        report.check("stationary_equation", is_stationary(&m, &pi), "pi M = pi exactly");
    } else {
        report.notice(format!("exact linear solve skipped above {SOLVE_MAX} elements"));
    }
    if ctx.q_is_uniform() {
        let u = stationary_uniform(r, an, &alpha).map_err(compute)?;
        report.check("uniform_closed_form", u == pi, "exact");
        let units = stationary_units_formula(r.size(), an.units.order(), alpha.value());
        report.check("units_formula", units == pi[r.one()], frac(&units));
        if let Some(p) = r.m2_field() {
            let g = stationary_gl2(p, alpha.value());
            let e = g.expand(r, an).map_err(compute)?;
            report.check("gl2_closed_form", e == pi, format!("unit {}, nonunit {}, zero {}", frac(&g.unit), frac(&g.nonunit), frac(&g.zero)));
        }
    }
    if tables {
        let rows = an
            .ideals
            .ideals()
            .iter()
            .map(|ideal| {
                let a = ideal.generator;
                let kind = if a == r.zero() { "zero" } else if an.units.is_unit(a) { "unit" } else { "nonunit" };
                vec![
                    a.to_string(),
                    r.describe_element(a),
                    kind.into(),
                    ideal.generators.len().to_string(),
                    frac(&pi[a]),
                    dec(rational_to_f64(&pi[a])),
                ]
            })
            .collect();
        report.table("stationary", &["generator", "element", "kind", "generator_set_size", "pi", "pi_decimal"]).rows = rows;
    }
    Ok(())
}

fn horizon(ctx: &Context) -> Result<usize, CliError> {
    let t = ctx.cfg.t.unwrap_or(20);
    if t > MAX_HORIZON {
        return Err(CliError::invalid("t", format!("{t} exceeds the horizon cap {MAX_HORIZON}")));
    }
    Ok(t)
}

fn mix(ctx: &Context, report: &mut Report, tables: bool) -> Result<(), CliError> {
    let (r, an, q) = (&ctx.ring, &ctx.an, &ctx.q);
    let alpha = ctx.cfg.alpha_param()?;
    let t_max = horizon(ctx)?;
    let curve = d_of_t(r, an, q, &alpha, t_max).map_err(compute)?;
    report.meta("exact", yes(curve.is_exact()));
    let bad = curve.bound_violations();
    report.check("geometric_bound", bad.is_empty(), format!("d(t) <= (1-alpha)^t for t <= {t_max}; violations {bad:?}"));
    report.check("monotone", curve.is_monotone(), "");
    let eps_list: Vec<f64> = if tables { vec![ctx.cfg.epsilon] } else { vec![0.25, 0.1] };
    let mut tmix_rows = Vec::new();
    for eps in eps_list {
        let bound = mixing_bound(alpha.to_f64(), eps).map_err(|e| CliError::invalid("epsilon", e.to_string()))?;
        let seen = curve.t_mix(eps);
        let ok = match seen {
            Some(t) => t as f64 <= bound,
            None => (t_max as f64) < bound,
        };
        if seen.is_none() && ok {
            report.notice(format!("horizon {t_max} ends before d(t) <= {eps}"));
        }
        report.check(&format!("tmix_bound_eps_{eps}"), ok, format!("observed {}, bound {}", seen.map_or("none".into(), |t| t.to_string()), dec(bound)));
        tmix_rows.push(vec![dec(eps), seen.map_or("none".into(), |t| t.to_string()), dec(bound)]);
        if tables {
            report.meta("epsilon", dec(eps)).meta("tmix", seen.map_or("none".into(), |t| t.to_string())).meta("tmix_bound", dec(bound));
        }
    }
    if tables {
        let rows = curve
            .points
            .iter()
            .map(|p| {
                let g = curve.geometric_bound(p.t);
                vec![
                    p.t.to_string(),
                    dec(p.d),
                    p.exact.as_ref().map_or("-".into(), frac),
                    dec(rational_to_f64(&g)),
                    frac(&g),
                    yes(!bad.contains(&p.t)).into(),
                ]
            })
            .collect();
        report.table("curve", &["t", "d", "d_exact", "geometric", "geometric_exact", "within"]).rows = rows;
        report.table("tmix", &["epsilon", "observed", "bound"]).rows = tmix_rows;
    }
    Ok(())
}

fn run_simulation(ctx: &Context, alpha: &AlphaParam, seed: u64, start: usize, t: usize, samples: u64) -> Result<SimulationResult, CliError> {
    let sim = Simulator::new(&ctx.ring, &ctx.q, alpha, ctx.cfg.side);
    let threads = ctx
        .cfg
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .clamp(1, 64) as u64;
    let chunk = samples.div_ceil(threads).max(1);
    let blocks: Vec<std::ops::Range<u64>> =
        (0..threads).map(|i| (i * chunk).min(samples)..((i + 1) * chunk).min(samples)).filter(|b| !b.is_empty()).collect();
    let parts: Vec<Result<SimulationResult, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = blocks
            .iter()
            .map(|b| {
                let sim = &sim;
                let b = b.clone();
                s.spawn(move || sim.run_block(start, t, seed, b).map_err(compute))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("simulation thread")).collect()
    });
    let mut total = sim.run_block(start, t, seed, 0..0).map_err(compute)?;
    for p in parts {
        total.merge(&p?);
    }
    Ok(total)
}

fn simulate(ctx: &Context, report: &mut Report) -> Result<(), CliError> {
    let r = &ctx.ring;
    let alpha = ctx.cfg.alpha_param()?;
    let seed = ctx.cfg.seed.ok_or_else(|| CliError::invalid("seed", "simulate needs an explicit seed".into()))?;
    let start = ctx.cfg.start.unwrap_or(r.zero());
    let t = ctx.cfg.t.unwrap_or(50);
    let res = run_simulation(ctx, &alpha, seed, start, t, ctx.cfg.samples)?;
    let side = match ctx.cfg.side {
        MultSide::Left => "left",
        MultSide::Right => "right",
    };
    report.meta("seed", seed).meta("samples", res.samples).meta("steps", t).meta("start", start).meta("side", side);
    let emp = res.empirical();
    let pi: Vec<f64> = stationary_recursive(r, &ctx.an, &ctx.q, &alpha).map_err(compute)?.iter().map(rational_to_f64).collect();
    report.meta("tv_to_stationary", dec(tv_distance(&emp, &pi).map_err(compute)?));
    report.check("counts_total", res.counts.iter().sum::<u64>() == res.samples, "");
    let rows = r
        .elements()
        .map(|x| vec![x.to_string(), r.describe_element(x), res.counts[x].to_string(), dec(emp[x])])
        .collect();
    report.table("empirical", &["element", "label", "count", "frequency"]).rows = rows;
    Ok(())
}

fn verify(ctx: &Context, report: &mut Report) -> Result<(), CliError> {
    let (r, an) = (&ctx.ring, &ctx.an);
    structure_checks(ctx, report, true);
    let table = ctx.table();
    match &table {
        Some(t) => {
            let defect = t.orthogonality_defect();
            report.check("character_orthogonality", defect < 1e-8, format!("defect {}", dec(defect)));
            let dims: usize = t.rows().iter().map(|row| row.dim * row.dim).sum();
            report.check("character_degrees", dims == an.units.order(), format!("sum of squares {dims}"));
        }
        None => report.notice("no character table for the unit group"),
    }
    let mut agree = true;
    for a in an.ideals.representatives().filter(|&a| !an.units.is_unit(a)) {
        let via_orbitals = orbital_algebra(r, an, a).2;
        agree &= is_multiplicity_free_nonunit(r, an, a).map_err(compute)? == via_orbitals;
        agree &= ctx.multiplicity_free(table.as_ref(), a) == via_orbitals;
    }
    report.check("multiplicity_free_routes_agree", agree, "character table vs orbital algebra");
    if r.size() <= DENSE_MAX {
        spectrum(ctx, report, false)?;
    } else {
        report.notice(format!("spectrum checks skipped above {DENSE_MAX} elements"));
    }
    stationary(ctx, report, false)?;
    mix(ctx, report, false)?;
    if let Some(seed) = ctx.cfg.seed {
        let alpha = ctx.cfg.alpha_param()?;
        let a = run_simulation(ctx, &alpha, seed, r.zero(), 10, 1000)?;
        let b = run_simulation(ctx, &alpha, seed, r.zero(), 10, 1000)?;
        report.check("simulation_deterministic", a == b, "two runs with the same seed");
    } else {
        report.notice("simulation determinism skipped: no seed");
    }
    Ok(())
}
