use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use ncqm::coadjoint::{coadjoint_act, coadjoint_matrix_check, invariants, numeric_rank, orbit_jacobian, DualVector};
use ncqm::coherent::{
    canonical_distance, coordinate_symbol, operator_forms, pov_measure, quantized_commutators, resolution_check,
    symbol, theta_limit_fit, Fiducial, PhaseBox, PhaseGrid, Quantizer, Region, Q_SIGN_PLUS,
};
use ncqm::generators::{
    bracket_table_check, double_ext_ops, double_table, galilei_table, generator_convergence, ncqm_ops, ncqm_table,
    probes, triple_ext_ops, triple_table, BracketReport, LinearOp, Picture,
};
use ncqm::grid::{
    apply_double, apply_galilei_config, apply_galilei_momentum, apply_triple, fourier, GridFunction, GridSpec,
    RepParams,
};
use ncqm::group::{
    antisymmetry_witness, check_exponent_axioms, compose_galilei, compose_trans, inverse_galilei, inverse_trans,
    sample_trans, Arity, Extension, GalileiElement, GalileiParams, LocalExponent, TransElement,
};
use ncqm::matrix::{expected_brackets, master_closed_form, master_factorize, mat7_of, mat8_of, structure_constants};
use ncqm::wigner::{
    equivalence_check, isometry_defect, standard_probes, FockOperator, HsOp, HsOps, WignerEngine, DEFAULT_OVERSAMPLE,
};
use ncqm::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::report::{Record, Report};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Group,
    Matrix,
    Coadjoint,
    Rep,
    Generators,
    Resolution,
    Quantize,
    Pov,
    Wigner,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::Group,
        Suite::Matrix,
        Suite::Coadjoint,
        Suite::Rep,
        Suite::Generators,
        Suite::Resolution,
        Suite::Quantize,
        Suite::Pov,
        Suite::Wigner,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Group => "group",
            Suite::Matrix => "matrix",
            Suite::Coadjoint => "coadjoint",
            Suite::Rep => "rep",
            Suite::Generators => "generators",
            Suite::Resolution => "resolution",
            Suite::Quantize => "quantize",
            Suite::Pov => "pov",
            Suite::Wigner => "wigner",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Suite::EACH
            .iter()
            .chain(&[Suite::All])
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| CliError::Config(format!("unknown suite '{s}'")))
    }
}

/// Suite-specific checks on top of [`RunConfig::validate`].
pub fn validate_for(suite: Suite, cfg: &RunConfig) -> Result<(), CliError> {
    let needs_theta = matches!(suite, Suite::Wigner | Suite::All);
    if needs_theta && cfg.lambda == 0.0 {
        return Err(CliError::Config("the wigner suite needs a nonzero lambda".into()));
    }
    Ok(())
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Report, CliError> {
    let mut records = Vec::new();
    let list: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for s in list {
        records.extend(match s {
            Suite::Group => group(cfg)?,
            Suite::Matrix => matrix(cfg)?,
            Suite::Coadjoint => coadjoint(cfg)?,
            Suite::Rep => rep(cfg)?,
            Suite::Generators => generators(cfg)?,
            Suite::Resolution => resolution(cfg)?,
            Suite::Quantize => quantize(cfg)?,
            Suite::Pov => pov(cfg)?,
            Suite::Wigner => wigner(cfg)?,
            Suite::All => unreachable!(),
        });
    }
    Ok(Report::new(suite.name(), cfg, records))
}

fn dump(cfg: &RunConfig, name: &str, f: &GridFunction) -> Result<(), CliError> {
    if let Some(dir) = &cfg.dump_states {
        std::fs::create_dir_all(dir)?;
        let file = std::fs::File::create(Path::new(dir).join(format!("{name}.bin")))?;
        f.write_to(std::io::BufWriter::new(file))?;
    }
    Ok(())
}

fn galilei(cfg: &RunConfig) -> Result<GalileiParams, CliError> {
    Ok(GalileiParams::new(cfg.m, cfg.lambda)?)
}

fn spec(cfg: &RunConfig) -> Result<GridSpec, CliError> {
    Ok(GridSpec::new(cfg.grid_n, cfg.grid_l)?)
}

fn double(cfg: &RunConfig) -> Extension {
    Extension::double(cfg.alpha, cfg.beta)
}

fn triple(cfg: &RunConfig) -> Extension {
    Extension::triple(cfg.alpha, cfg.beta, cfg.gamma)
}

fn galilei_sample(rng: &mut ChaCha8Rng) -> GalileiElement {
    GalileiElement {
        theta: rng.random_range(-2.0..2.0),
        phi: rng.random_range(-2.0..2.0),
        angle: rng.random_range(-3.0..3.0),
        b: rng.random_range(-2.0..2.0),
        v: [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)],
        a: [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)],
    }
}

fn group(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let params = galilei(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    let (mut assoc, mut ident, mut inv) = (0.0f64, 0.0f64, 0.0f64);
    let e = GalileiElement::identity();
    for _ in 0..1000 {
        let (g, h, k) = (galilei_sample(&mut rng), galilei_sample(&mut rng), galilei_sample(&mut rng));
        let l = compose_galilei(&compose_galilei(&g, &h, &params), &k, &params);
        assoc = assoc.max(l.distance(&compose_galilei(&g, &compose_galilei(&h, &k, &params), &params)));
        ident = ident
            .max(compose_galilei(&g, &e, &params).distance(&g))
            .max(compose_galilei(&e, &g, &params).distance(&g));
        let gi = inverse_galilei(&g, &params);
        inv = inv
            .max(compose_galilei(&g, &gi, &params).distance(&e))
            .max(compose_galilei(&gi, &g, &params).distance(&e));
    }
    out.push(Record::at_most("group.galilei.associativity", "group law", assoc, 1e-12));
    out.push(Record::at_most("group.galilei.identity", "group law", ident, 1e-12));
    out.push(Record::at_most("group.galilei.inverse", "group law", inv, 1e-12));
    for (name, ext) in [("double", double(cfg)), ("triple", triple(cfg))] {
        let (mut assoc, mut ident, mut inv) = (0.0f64, 0.0f64, 0.0f64);
        let e = TransElement::identity(ext);
        for _ in 0..1000 {
            let (g, h, k) = (sample_trans(&mut rng, ext), sample_trans(&mut rng, ext), sample_trans(&mut rng, ext));
            let l = compose_trans(&compose_trans(&g, &h)?, &k)?;
            assoc = assoc.max(l.distance(&compose_trans(&g, &compose_trans(&h, &k)?)?));
            ident = ident.max(compose_trans(&g, &e)?.distance(&g)).max(compose_trans(&e, &g)?.distance(&g));
            let gi = inverse_trans(&g);
            inv = inv.max(compose_trans(&g, &gi)?.distance(&e)).max(compose_trans(&gi, &g)?.distance(&e));
        }
        out.push(Record::at_most(format!("group.{name}.associativity"), "group law", assoc, 1e-12));
        out.push(Record::at_most(format!("group.{name}.identity"), "group law", ident, 1e-12));
        out.push(Record::at_most(format!("group.{name}.inverse"), "group law", inv, 1e-12));
    }
    let exps = [
        ("mass", LocalExponent::GalileiMass(cfg.m)),
        ("plane", LocalExponent::GalileiPlane(cfg.lambda)),
        ("xi", LocalExponent::Xi),
        ("xi_prime", LocalExponent::XiPrime),
        ("xi_double_prime", LocalExponent::XiDoublePrime),
    ];
    for (name, x) in &exps {
        let r = check_exponent_axioms(x, 1000, cfg.seed)?;
        out.push(Record::at_most(format!("group.exponent.{name}.axioms"), "cocycle identity", r.max(), 1e-10));
    }
    let planar = &exps[2..];
    for i in 0..3 {
        for j in i + 1..3 {
            let w = antisymmetry_witness(&planar[i].1, &planar[j].1, 500)?;
            let id = format!("group.difference.{}.{}", planar[i].0, planar[j].0);
            out.push(Record::at_most(format!("{id}.antisymmetry"), "inequivalence of exponents", w.antisymmetry, 1e-12));
            let witness = if w.degenerate { 0.0 } else { w.witness };
            out.push(Record::at_least(format!("{id}.witness"), "inequivalence of exponents", witness, 1e-6));
        }
    }
    Ok(out)
}

fn matrix(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (d, t) = (double(cfg), triple(cfg));
    let (mut hom7, mut hom8) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let (g, h) = (sample_trans(&mut rng, d), sample_trans(&mut rng, d));
        hom7 = hom7.max((mat7_of(&g)? * mat7_of(&h)?).max_abs_diff(&mat7_of(&compose_trans(&g, &h)?)?));
        let (g, h) = (sample_trans(&mut rng, t), sample_trans(&mut rng, t));
        hom8 = hom8.max((mat8_of(&g)? * mat8_of(&h)?).max_abs_diff(&mat8_of(&compose_trans(&g, &h)?)?));
    }
    let mut out = vec![
        Record::at_most("matrix.double.homomorphism", "matrix representation", hom7, 1e-12),
        Record::at_most("matrix.triple.homomorphism", "matrix representation", hom8, 1e-12),
        Record::holds("matrix.double.structure_constants", "lie algebra brackets", structure_constants(&d)? == expected_brackets(&d)),
        Record::holds("matrix.triple.structure_constants", "lie algebra brackets", structure_constants(&t)? == expected_brackets(&t)),
    ];
    for (name, ext) in [("double", d), ("triple", t)] {
        let mut worst = 0.0f64;
        for _ in 0..500 {
            let g = sample_trans(&mut rng, ext);
            let s = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
            let (a, b) = (master_closed_form(s, &g)?, master_factorize(s, &g)?);
            worst = a.h.iter().zip(&b.h).map(|(x, y)| (x - y).abs()).fold(worst, f64::max);
            worst = worst.max((a.s_out[0] - b.s_out[0]).abs()).max((a.s_out[1] - b.s_out[1]).abs());
        }
        out.push(Record::at_most(format!("matrix.{name}.master_equation"), "master equation", worst, 1e-12));
    }
    Ok(out)
}

fn coadjoint(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for (name, ext, len) in [("double", double(cfg), 6), ("triple", triple(cfg), 7)] {
        let (mut worst, mut exact, mut rank4) = (0.0f64, true, 0usize);
        for _ in 0..100 {
            let x: Vec<f64> = (0..len).map(|_| rng.random_range(-2.0..2.0)).collect();
            let f = DualVector::new(&x)?;
            let g = sample_trans(&mut rng, ext);
            worst = worst.max(coadjoint_matrix_check(&g, &f)?);
            exact &= invariants(&coadjoint_act(&g, &f)?) == invariants(&f);
            rank4 += (numeric_rank(&orbit_jacobian(&f, &ext)?, 1e-10) == 4) as usize;
        }
        out.push(Record::at_most(format!("coadjoint.{name}.closed_form"), "coadjoint action", worst, 1e-12));
        out.push(Record::holds(format!("coadjoint.{name}.invariants"), "orbit invariants", exact));
        out.push(Record::abs(format!("coadjoint.{name}.rank4"), "generic orbit dimension", rank4 as f64, 100.0, 0.0));
    }
    Ok(out)
}

fn bump(spec: GridSpec, c: [f64; 2], w: f64, k: [f64; 2]) -> GridFunction {
    GridFunction::gaussian(spec, c, w).mul_fn(|x, y| C64::from_polar(1.0, k[0] * x + k[1] * y))
}

fn rep(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let spec = spec(cfg)?;
    let params = galilei(cfg)?;
    let f = bump(spec, [0.2, -0.3], 1.0, [0.2, 0.1]);
    dump(cfg, "rep_probe", &f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    let h = spec.h();
    for (name, ext) in [("double", double(cfg)), ("triple", triple(cfg))] {
        let apply = |g: &TransElement, f: &GridFunction| {
            if ext.arity == Arity::Double {
                apply_double(g, f)
            } else {
                apply_triple(g, f)
            }
        };
        let (mut law, mut unitary) = (0.0f64, 0.0f64);
        for _ in 0..100 {
            let mut el = || {
                let mut k = || rng.random_range(-8i32..=8) as f64 * h;
                let (q, p) = ([k(), k()], [k(), k()]);
                let mut phases = [0.0; 3];
                for ph in phases.iter_mut().take(ext.phase_count()) {
                    *ph = rng.random_range(-1.0..1.0);
                }
                TransElement { phases, q, p, ext }
            };
            let (g, g2) = (el(), el());
            let lhs = apply(&g, &apply(&g2, &f)?)?;
            law = law.max(lhs.rel_diff(&apply(&compose_trans(&g, &g2)?, &f)?, &f));
            unitary = unitary.max((apply(&g, &f)?.norm() - f.norm()).abs());
        }
        out.push(Record::at_most(format!("rep.{name}.law"), "representation law", law, 1e-10));
        out.push(Record::at_most(format!("rep.{name}.unitarity"), "unitarity", unitary, 1e-10));
    }
    let fh = fourier(&f);
    let (mut law, mut unitary, mut intertwine) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..50 {
        let mut el = |full: bool| GalileiElement {
            theta: rng.random_range(-1.0..1.0),
            phi: rng.random_range(-1.0..1.0),
            angle: if full { rng.random_range(0..4) as f64 * std::f64::consts::FRAC_PI_2 } else { 0.0 },
            b: if full { rng.random_range(-0.5..0.5) } else { 0.0 },
            v: [rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8)],
            a: [rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8)],
        };
        let (g, g2) = (el(false), el(false));
        let lhs = apply_galilei_config(&g, &apply_galilei_config(&g2, &f, &params)?, &params)?;
        law = law.max(lhs.rel_diff(&apply_galilei_config(&compose_galilei(&g, &g2, &params), &f, &params)?, &f));
        let g = el(true);
        let u = apply_galilei_config(&g, &f, &params)?;
        let uh = apply_galilei_momentum(&g, &fh, &params)?;
        unitary = unitary.max((u.norm() - f.norm()).abs()).max((uh.norm() - fh.norm()).abs());
        intertwine = intertwine.max(fourier(&u).rel_diff(&uh, &fh));
        if i == 0 {
            dump(cfg, "rep_galilei_config", &u)?;
            dump(cfg, "rep_galilei_momentum", &uh)?;
        }
    }
    out.push(Record::at_most("rep.galilei.law", "representation law", law, 1e-6));
    out.push(Record::at_most("rep.galilei.unitarity", "unitarity", unitary, 1e-10));
    out.push(Record::at_most("rep.galilei.intertwining", "momentum and configuration pictures", intertwine, 1e-6));
    Ok(out)
}

fn bracket_records(out: &mut Vec<Record>, prefix: &str, tag: &str, report: &BracketReport, tol: f64) {
    for r in &report.results {
        out.push(Record::at_most(format!("{prefix}.{}", r.bracket), tag, r.residual, tol));
    }
}

fn generators(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let spec = spec(cfg)?;
    let p = probes(spec, cfg.seed);
    let (m, lambda, theta) = (cfg.m, cfg.lambda, cfg.theta());
    let (al, be, ga) = (cfg.alpha, cfg.beta, cfg.gamma);
    let mut out = Vec::new();
    let ops = ncqm_ops(m, theta);
    let r = bracket_table_check(&ops, &galilei_table(m, lambda), &p);
    bracket_records(&mut out, "generators.galilei", "extended galilei algebra", &r, 1e-6);
    let r = bracket_table_check(&ops, &ncqm_table(theta), &p);
    bracket_records(&mut out, "generators.plane", "noncommutative plane", &r, 1e-6);
    for (pic, pname) in [(Picture::Induced, "induced"), (Picture::Transformed, "transformed")] {
        let r = bracket_table_check(&double_ext_ops(al, be, pic), &double_table(al, be), &p);
        bracket_records(&mut out, &format!("generators.double.{pname}"), "double extension algebra", &r, 1e-8);
        let r = bracket_table_check(&triple_ext_ops(al, be, ga, pic, false), &triple_table(al, be, ga), &p);
        bracket_records(&mut out, &format!("generators.triple.{pname}"), "triple extension algebra", &r, 1e-8);
    }
    let f = &p[0];
    let order = |out: &mut Vec<Record>, id: String, rep: &RepParams, dir: usize, op: &LinearOp| {
        let c = generator_convergence(rep, dir, op, f, 0.1)?;
        out.push(Record::at_least(id, "finite-difference generators", c.order, 1.9));
        Ok::<_, CliError>(())
    };
    let rep = RepParams::Double(double(cfg));
    let dops = double_ext_ops(al, be, Picture::Induced);
    for (dir, label) in [(2, "P1"), (3, "P2"), (4, "Q1"), (5, "Q2")] {
        order(&mut out, format!("generators.order.double.{label}"), &rep, dir, dops.get(label).expect("label"))?;
    }
    let rep = RepParams::Triple(triple(cfg));
    let tops = triple_ext_ops(al, be, ga, Picture::Transformed, false);
    for (dir, label) in [(3, "P1"), (4, "P2"), (5, "Q1"), (6, "Q2")] {
        order(&mut out, format!("generators.order.triple.{label}"), &rep, dir, tops.get(label).expect("label"))?;
    }
    let rep = RepParams::GalileiConfig(galilei(cfg)?);
    let k = lambda / (2.0 * m);
    let i = C64::new(0.0, 1.0);
    let (x, y) = (LinearOp::coordinate(0), LinearOp::coordinate(1));
    let (dx, dy) = (LinearOp::partial(0), LinearOp::partial(1));
    let cases = [
        ("time", 3, ops.get("H").expect("H").clone()),
        ("boost1", 4, LinearOp::combination("v1", vec![(C64::new(-m, 0.0), x), (i * k, dy.clone())])),
        ("boost2", 5, LinearOp::combination("v2", vec![(C64::new(-m, 0.0), y), (-i * k, dx.clone())])),
        ("shift1", 6, dx.scaled(i)),
        ("shift2", 7, dy.scaled(i)),
    ];
    for (name, dir, op) in &cases {
        order(&mut out, format!("generators.order.galilei.{name}"), &rep, *dir, op)?;
    }
    Ok(out)
}

fn quantizer(cfg: &RunConfig, fast: bool) -> Result<Arc<Quantizer>, CliError> {
    let fid = Fiducial::gaussian(spec(cfg)?, 1.0);
    let pg = PhaseGrid::uniform(cfg.phase_n, cfg.phase_l)?;
    let params = galilei(cfg)?;
    Ok(Arc::new(if fast { Quantizer::new_fast(fid, pg, params) } else { Quantizer::new(fid, pg, params) }))
}

fn resolution(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let q = quantizer(cfg, false)?;
    let p = probes(q.spec(), cfg.seed);
    let pairs = [(0, 0), (0, 1), (1, 3), (2, 3), (4, 4)];
    let mut out = Vec::new();
    let mut ratios = Vec::new();
    for &(a, b) in &pairs {
        let r = resolution_check(&q, &p[a], &p[b])?;
        ratios.push(r.ratio);
        out.push(Record::rel(format!("resolution.pair{a}{b}.full_constant"), "resolution of identity", r.ratio_vs_full, 1.0, 0.01));
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    out.push(Record::at_most("resolution.ratio_spread", "resolution of identity", hi / lo - 1.0, 0.01));
    // the single-factor normalization is off by exactly 2π
    let r = resolution_check(&q, &p[0], &p[1])?;
    out.push(Record::rel("resolution.single_constant", "normalization constant", r.ratio_vs_single, std::f64::consts::TAU, 0.01));
    let doubled = Quantizer::new(q.fid.clone(), q.pg.doubled(), q.params);
    let rd = resolution_check(&doubled, &p[0], &p[1])?;
    out.push(Record::at_most("resolution.doubling", "quadrature stability", (rd.ratio / r.ratio - 1.0).abs(), 2e-3));
    Ok(out)
}

const BASELINE: &str = include_str!("../baselines/quantize_direct.json");

/// Fields of the configuration a stored baseline depends on.
fn same_physics(a: &RunConfig, b: &RunConfig) -> bool {
    (a.m, a.lambda, a.grid_n, a.grid_l, a.phase_n, a.phase_l, a.seed)
        == (b.m, b.lambda, b.grid_n, b.grid_l, b.phase_n, b.phase_l, b.seed)
}

fn quantize(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let q = quantizer(cfg, cfg.fast)?;
    let p = probes(q.spec(), cfg.seed);
    let mut out = Vec::new();
    let forms = operator_forms(&q, &p[0], 0.3 * cfg.grid_l)?;
    out.push(Record::at_most("quantize.form.p1", "quantization rule", forms.p1, 0.01));
    out.push(Record::at_most("quantize.form.p2", "quantization rule", forms.p2, 0.01));
    let best = |e: [f64; 2]| e[0].max(e[1]);
    out.push(Record::at_most("quantize.form.q", "quantization rule", best(forms.q_plus).min(best(forms.q_minus)), 0.01));
    out.push(Record::abs("quantize.form.sign", "quantization rule", forms.sign, Q_SIGN_PLUS, 0.0));
    let theta = cfg.theta();
    let sy = [coordinate_symbol("q1")?, coordinate_symbol("q2")?];
    for (i, s) in sy.iter().enumerate() {
        dump(cfg, &format!("quantize_q{}_probe0", i + 1), &q.apply(&[Arc::clone(s)], &p[0]).remove(0))?;
    }
    for e in quantized_commutators(&q, &p[..2])? {
        let id = format!("quantize.commutator.{}.probe{}", e.symbol, e.probe_id);
        let tag = "quantized commutation relations";
        let c = C64::new(e.coefficient_re, e.coefficient_im);
        out.push(match e.symbol.as_str() {
            "[q1,q2]" if theta != 0.0 => Record::rel(id, tag, e.coefficient_re, theta, 0.02),
            "[q1,q2]" => Record::abs(id, tag, c.norm(), 0.0, 1e-3),
            "[q1,p1]" | "[q2,p2]" => Record::rel(id, tag, e.coefficient_re, 1.0, 0.02),
            "[p1,p2]" => Record::at_most(id, tag, c.norm(), 1e-3),
            _ => Record::abs(id, tag, c.norm(), 0.0, 0.02),
        });
    }
    if cfg.fast {
        let base = crate::Report::from_json_lines(BASELINE)?;
        if same_physics(&base.header.config, cfg) {
            let fresh: Vec<Record> = out.clone();
            for b in base.records.iter().filter(|r| r.id.starts_with("quantize.commutator.")) {
                if let Some(r) = fresh.iter().find(|r| r.id == b.id) {
                    let tol = 1e-3 * b.measured.abs().max(1.0);
                    out.push(Record::abs(format!("baseline.{}", b.id), "direct quadrature baseline", r.measured, b.measured, tol));
                }
            }
        } else {
            log::warn!("stored baseline was computed for a different configuration; skipping comparison");
        }
    }
    // the limit θ → 0
    let lambdas: Vec<f64> = [0.4, 0.2, 0.1].iter().map(|l| l * cfg.m * cfg.m).collect();
    let fit = theta_limit_fit(&q.fid, q.pg, cfg.m, &lambdas, &p[0])?;
    out.push(Record::rel("quantize.limit.slope", "commutative limit", fit.slope, fit.expected_slope, 0.05));
    let d = canonical_distance(&q.fid, [0.5, -0.5], [1.0, 0.7], cfg.m, &lambdas)?;
    out.push(Record::holds("quantize.limit.states_converge", "commutative limit", d.windows(2).all(|w| w[1] < w[0])));
    Ok(out)
}

fn pov(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let q = quantizer(cfg, cfg.fast)?;
    let pg = q.pg;
    let l = pg.lq;
    let region = |lo: f64, hi: f64| Region {
        boxes: vec![PhaseBox { q_lo: [lo, -l], q_hi: [hi, l], p_lo: [-pg.lp; 2], p_hi: [pg.lp; 2] }],
    };
    let (left, right) = (region(-l, 0.0), region(0.0, l));
    let (a_left, a_right) = (pov_measure(&q, left.clone()), pov_measure(&q, right.clone()));
    let a_union = pov_measure(&q, left.union(&right));
    let full = pov_measure(&q, Region { boxes: vec![PhaseBox::full(&pg)] });
    let one = q.quantize("1", symbol(|_, _| C64::new(1.0, 0.0)));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut min_expect, mut additivity, mut full_diff) = (f64::INFINITY, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let c = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let k = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let f = bump(q.spec(), c, rng.random_range(0.6..1.4), k);
        let (al, ar) = (a_left.apply(&f), a_right.apply(&f));
        min_expect = min_expect.min(f.inner(&al)?.re).min(f.inner(&ar)?.re);
        additivity = additivity.max(a_union.apply(&f).sub(&al.add(&ar)).norm() / f.norm());
        full_diff = full_diff.max(full.apply(&f).max_abs_diff(&one.apply(&f)));
    }
    Ok(vec![
        Record::at_least("pov.positivity", "positive operator valued measure", min_expect, 0.0),
        Record::at_most("pov.additivity", "positive operator valued measure", additivity, 1e-10),
        Record::at_most("pov.full_domain", "positive operator valued measure", full_diff, 1e-12),
    ])
}

fn wigner(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let theta = cfg.theta();
    let i = C64::new(0.0, 1.0);
    let hs = HsOps::new(theta, 32)?;
    let x = FockOperator::random_full(32, cfg.seed);
    let mut out = Vec::new();
    for (n, &a) in HsOp::ALL.iter().enumerate() {
        for &b in &HsOp::ALL[n + 1..] {
            let expect = match (a, b) {
                (HsOp::Q1, HsOp::Q2) => i * theta,
                (HsOp::Q1, HsOp::P1) | (HsOp::Q2, HsOp::P2) => i,
                _ => C64::new(0.0, 0.0),
            };
            let d = hs.commutator(a, b, &x).safe_block_diff(&x.scale(expect));
            let id = format!("wigner.commutator.[{},{}]", a.label(), b.label());
            out.push(Record::at_most(id, "hilbert-schmidt realization", d, 1e-10));
        }
    }
    let spec = spec(cfg)?;
    let engine = WignerEngine::new(32, DEFAULT_OVERSAMPLE)?;
    let iso = isometry_defect(&engine, spec, &standard_probes(32, cfg.seed));
    out.push(Record::at_most("wigner.isometry", "wigner map isometry", iso, 1e-4));
    let probes = standard_probes(16, cfg.seed);
    let mut errs = Vec::new();
    for dim in [16, 32, 64] {
        let r = equivalence_check(theta, dim, spec, &probes)?;
        errs.push(r.max_composite());
        if dim == 64 {
            out.push(Record::at_most("wigner.intertwining.dim64", "wigner intertwining", r.max_composite(), 1e-3));
        }
    }
    // decreasing until the residual reaches a dim-independent floor, either
    // roundoff or what the spatial grid resolves
    let saturated = |a: f64, b: f64| a.max(b) < 1e-10 || (a - b).abs() <= 1e-5 * a.max(b);
    let monotone = errs.windows(2).all(|w| w[1] < w[0] || saturated(w[0], w[1]));
    out.push(Record::holds("wigner.intertwining.monotone", "wigner intertwining", monotone));
    Ok(out)
}
