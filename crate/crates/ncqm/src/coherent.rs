//! Coherent states of the extended Galilei group, the resolution of the
//! identity, coherent-state quantization of phase-space symbols and the
//! associated positive-operator-valued measure.
//!
//! States are labelled so that `η_{q,p}` is centred at position
//! `q - (λ/2m²) J p` and momentum `p`:
//! `η_{q,p}(x) = e^{i(x - q/2)·p} η(x - q + (λ/2m²) J p)`.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use crate::generators::LinearOp;
use crate::grid::{dft, derivative, rotate_quarter, translate, GridFunction, GridSpec};
use crate::group::{GalileiElement, GalileiParams};
use crate::{Error, Result, C64};

/// Sign of the derivative term in the quantized position operator
/// `x1 ± i(λ/2m²)∂2`. The quadrature measures `+`.
pub const Q_SIGN_PLUS: f64 = 1.0;
/// The other candidate, kept so tests can show it fails.
pub const Q_SIGN_MINUS: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FiducialKind {
    /// Normalized Gaussian of the given width; enables the separable path.
    Gaussian { width: f64 },
    Radial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fiducial {
    pub eta: GridFunction,
    pub kind: FiducialKind,
    /// `‖η‖²` as sampled on the grid.
    pub norm_sq: f64,
}

impl Fiducial {
    pub fn gaussian(spec: GridSpec, width: f64) -> Self {
        let eta = GridFunction::gaussian(spec, [0.0, 0.0], width);
        let norm_sq = eta.norm().powi(2);
        Self { eta, kind: FiducialKind::Gaussian { width }, norm_sq }
    }

    /// Unit-norm fiducial from a radial profile.
    pub fn radial(spec: GridSpec, profile: impl Fn(f64) -> f64) -> Result<Self> {
        let eta = GridFunction::from_fn(spec, |x, y| C64::new(profile(x.hypot(y)), 0.0));
        let n = eta.norm();
        if !(n > 0.0) {
            return Err(Error::Invalid("fiducial profile vanishes on the grid".into()));
        }
        Ok(Self { eta: eta.scale(C64::new(1.0 / n, 0.0)), kind: FiducialKind::Radial, norm_sq: 1.0 })
    }

    /// Largest deviation from invariance under the exact grid symmetries
    /// (quarter turns and the diagonal reflection).
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.eta.n();
        let mut worst = (1..4).map(|t| rotate_quarter(&self.eta, t).max_abs_diff(&self.eta)).fold(0.0, f64::max);
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.eta.at(i, j) - self.eta.at(j, i)).norm());
            }
        }
        worst
    }

    /// The constant `(2π)² ‖η‖²`.
    pub fn full_constant(&self) -> f64 {
        TAU * TAU * self.norm_sq
    }

    /// The constant `2π ‖η‖²`.
    pub fn single_constant(&self) -> f64 {
        TAU * self.norm_sq
    }
}

/// Section of the phase-space bundle: a pure boost by `p/m` combined with a
/// translation by `-q`.
pub fn section_beta(q: [f64; 2], p: [f64; 2], m: f64) -> GalileiElement {
    GalileiElement { v: [p[0] / m, p[1] / m], a: [-q[0], -q[1]], ..GalileiElement::identity() }
}

fn kappa(params: &GalileiParams) -> f64 {
    params.lambda / (2.0 * params.m * params.m)
}

/// Position centre of `η_{q,p}`.
pub fn state_centre(q: [f64; 2], p: [f64; 2], params: &GalileiParams) -> [f64; 2] {
    let k = kappa(params);
    [q[0] + k * p[1], q[1] - k * p[0]]
}

/// `η_{q,p}` from the explicit formula (Fourier shift plus modulation).
pub fn coherent_state(fid: &Fiducial, q: [f64; 2], p: [f64; 2], params: &GalileiParams) -> GridFunction {
    let c = state_centre(q, p, params);
    translate(&fid.eta, [-c[0], -c[1]])
        .mul_fn(|x1, x2| C64::from_polar(1.0, (x1 - 0.5 * q[0]) * p[0] + (x2 - 0.5 * q[1]) * p[1]))
}

/// Midpoint-rule grid over `[-lq, lq)² x [-lp, lp)²`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PhaseGrid {
    pub nq: usize,
    pub np: usize,
    pub lq: f64,
    pub lp: f64,
}

impl Default for PhaseGrid {
    fn default() -> Self {
        Self { nq: 24, np: 24, lq: 6.0, lp: 6.0 }
    }
}

impl PhaseGrid {
    pub fn new(nq: usize, np: usize, lq: f64, lp: f64) -> Result<Self> {
        if nq == 0 || np == 0 || !(lq > 0.0) || !(lp > 0.0) {
            return Err(Error::Invalid("phase grid needs positive counts and extents".into()));
        }
        Ok(Self { nq, np, lq, lp })
    }

    pub fn uniform(n: usize, l: f64) -> Result<Self> {
        Self::new(n, n, l, l)
    }

    /// Same extents, twice the points per axis.
    pub fn doubled(&self) -> Self {
        Self { nq: 2 * self.nq, np: 2 * self.np, ..*self }
    }

    fn nodes(n: usize, l: f64) -> Vec<f64> {
        let d = 2.0 * l / n as f64;
        (0..n).map(|i| -l + (i as f64 + 0.5) * d).collect()
    }

    pub fn q_nodes(&self) -> Vec<f64> {
        Self::nodes(self.nq, self.lq)
    }

    pub fn p_nodes(&self) -> Vec<f64> {
        Self::nodes(self.np, self.lp)
    }

    pub fn weight(&self) -> f64 {
        (2.0 * self.lq / self.nq as f64).powi(2) * (2.0 * self.lp / self.np as f64).powi(2)
    }

    pub fn len(&self) -> usize {
        self.nq.pow(2) * self.np.pow(2)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn volume(&self) -> f64 {
        (2.0 * self.lq).powi(2) * (2.0 * self.lp).powi(2)
    }
}

/// A phase-space symbol `f(q, p)`.
pub type Symbol = dyn Fn([f64; 2], [f64; 2]) -> C64 + Send + Sync;

pub fn symbol(f: impl Fn([f64; 2], [f64; 2]) -> C64 + Send + Sync + 'static) -> Arc<Symbol> {
    Arc::new(f)
}

/// `q_i` or `p_i` as a symbol; `which` is one of `q1 q2 p1 p2`.
pub fn coordinate_symbol(which: &str) -> Result<Arc<Symbol>> {
    Ok(match which {
        "q1" => symbol(|q, _| C64::new(q[0], 0.0)),
        "q2" => symbol(|q, _| C64::new(q[1], 0.0)),
        "p1" => symbol(|_, p| C64::new(p[0], 0.0)),
        "p2" => symbol(|_, p| C64::new(p[1], 0.0)),
        _ => return Err(Error::Invalid(format!("unknown coordinate symbol {which}"))),
    })
}

/// One-dimensional Gaussian factor `e^{ikx} g(x - c)` restricted to the
/// nodes where it is not negligible.
struct Row {
    lo: usize,
    vals: Vec<C64>,
}

fn gaussian_row(xs: &[f64], width: f64, c: f64, k: f64) -> Row {
    let norm = (width * PI.sqrt()).sqrt().recip();
    let reach = 9.0 * width;
    let lo = xs.partition_point(|&x| x < c - reach);
    let hi = xs.partition_point(|&x| x <= c + reach);
    let vals = xs[lo..hi]
        .iter()
        .map(|&x| C64::from_polar(norm * (-(x - c).powi(2) / (2.0 * width * width)).exp(), k * x))
        .collect();
    Row { lo, vals }
}

/// Evaluates `Σ w f(q,p) ⟨η_{q,p}|g⟩ η_{q,p}` (divided by the measured
/// constant) for several symbols at once.
#[derive(Debug, Clone)]
pub struct Quantizer {
    pub fid: Fiducial,
    pub pg: PhaseGrid,
    pub params: GalileiParams,
    /// Measured value of the unnormalized `quantize(1)` on a reference probe.
    pub constant: f64,
    fast: bool,
}

impl Quantizer {
    pub fn new(fid: Fiducial, pg: PhaseGrid, params: GalileiParams) -> Self {
        Self::build(fid, pg, params, false)
    }

    /// Variant using FFT correlations over a phase grid whose positions are
    /// the grid nodes inside `[-lq, lq)²`.
    pub fn new_fast(fid: Fiducial, pg: PhaseGrid, params: GalileiParams) -> Self {
        Self::build(fid, pg, params, true)
    }

    fn build(fid: Fiducial, pg: PhaseGrid, params: GalileiParams, fast: bool) -> Self {
        let mut q = Self { fid, pg, params, constant: 1.0, fast };
        let probe = GridFunction::gaussian(q.fid.eta.spec, [0.0, 0.0], 1.0);
        let one = symbol(|_, _| C64::new(1.0, 0.0));
        let out = q.apply_raw(&[one], &probe).remove(0);
        q.constant = probe.inner_unchecked(&out).re / probe.norm().powi(2);
        q
    }

    pub fn is_fast(&self) -> bool {
        self.fast
    }

    pub fn spec(&self) -> GridSpec {
        self.fid.eta.spec
    }

    /// Normalized action of every symbol on `g`.
    pub fn apply(&self, symbols: &[Arc<Symbol>], g: &GridFunction) -> Vec<GridFunction> {
        let k = C64::new(1.0 / self.constant, 0.0);
        self.apply_raw(symbols, g).into_iter().map(|f| f.scale(k)).collect()
    }

    /// Unnormalized sums.
    pub fn apply_raw(&self, symbols: &[Arc<Symbol>], g: &GridFunction) -> Vec<GridFunction> {
        if self.fast {
            return self.fast_apply(symbols, g);
        }
        match self.fid.kind {
            FiducialKind::Gaussian { width } => self.separable_apply(width, symbols, g),
            FiducialKind::Radial => self.direct_apply(symbols, g),
        }
    }

    /// `⟨η_{q,p}|g⟩` on the phase grid, ordered `(p1, p2, q1, q2)` row-major.
    pub fn overlaps(&self, g: &GridFunction) -> Vec<C64> {
        match self.fid.kind {
            FiducialKind::Gaussian { width } if !self.fast => self.separable_overlaps(width, g),
            _ => self.direct_overlaps(g),
        }
    }

    fn for_each_node(&self, mut f: impl FnMut(usize, [f64; 2], [f64; 2])) {
        let (qs, ps) = (self.pg.q_nodes(), self.pg.p_nodes());
        let mut idx = 0;
        for &p1 in &ps {
            for &p2 in &ps {
                for &q1 in &qs {
                    for &q2 in &qs {
                        f(idx, [q1, q2], [p1, p2]);
                        idx += 1;
                    }
                }
            }
        }
    }

    fn direct_overlaps(&self, g: &GridFunction) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.pg.len()];
        self.for_each_node(|i, q, p| {
            out[i] = coherent_state(&self.fid, q, p, &self.params).inner_unchecked(g);
        });
        out
    }

    /// Plain sum over nodes, building every state explicitly.
    fn direct_apply(&self, symbols: &[Arc<Symbol>], g: &GridFunction) -> Vec<GridFunction> {
        let w = self.pg.weight();
        let mut outs = vec![GridFunction::zeros(g.spec); symbols.len()];
        self.for_each_node(|_, q, p| {
            let state = coherent_state(&self.fid, q, p, &self.params);
            let ov = state.inner_unchecked(g);
            for (s, out) in symbols.iter().zip(outs.iter_mut()) {
                let c = s(q, p) * ov * w;
                if c != C64::new(0.0, 0.0) {
                    *out = out.axpy(c, &state);
                }
            }
        });
        outs
    }

    /// Rows `A(q1; x1)` for fixed `(p1, p2)`, then rows `B(q2; x2)`.
    fn factor_rows(&self, width: f64, p: [f64; 2]) -> (Vec<Row>, Vec<Row>) {
        let xs = self.spec().coords();
        let k = kappa(&self.params);
        let qs = self.pg.q_nodes();
        let a = qs.iter().map(|&q1| gaussian_row(&xs, width, q1 + k * p[1], p[0])).collect();
        let b = qs.iter().map(|&q2| gaussian_row(&xs, width, q2 - k * p[0], p[1])).collect();
        (a, b)
    }

    fn separable_overlaps(&self, width: f64, g: &GridFunction) -> Vec<C64> {
        let n = g.n();
        let nq = self.pg.nq;
        let h2 = g.spec.h().powi(2);
        let (qs, ps) = (self.pg.q_nodes(), self.pg.p_nodes());
        let mut out = Vec::with_capacity(self.pg.len());
        let mut t = vec![C64::new(0.0, 0.0); n];
        for &p1 in &ps {
            for &p2 in &ps {
                let (ra, rb) = self.factor_rows(width, [p1, p2]);
                for (i, a) in ra.iter().enumerate() {
                    t.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
                    for (o, av) in a.vals.iter().enumerate() {
                        let ac = av.conj();
                        let row = &g.values[(a.lo + o) * n..(a.lo + o + 1) * n];
                        for (tv, gv) in t.iter_mut().zip(row) {
                            *tv += ac * gv;
                        }
                    }
                    for (j, b) in rb.iter().enumerate() {
                        let s: C64 = b.vals.iter().zip(&t[b.lo..]).map(|(bv, tv)| bv.conj() * tv).sum();
                        let ph = 0.5 * (qs[i] * p1 + qs[j] * p2);
                        out.push(s * C64::from_polar(h2, ph));
                    }
                }
                debug_assert_eq!(out.len() % (nq * nq), 0);
            }
        }
        out
    }

    fn separable_apply(&self, width: f64, symbols: &[Arc<Symbol>], g: &GridFunction) -> Vec<GridFunction> {
        let ov = self.separable_overlaps(width, g);
        let n = g.n();
        let nq = self.pg.nq;
        let w = self.pg.weight();
        let (qs, ps) = (self.pg.q_nodes(), self.pg.p_nodes());
        let mut outs: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); n * n]; symbols.len()];
        let mut v = vec![C64::new(0.0, 0.0); n];
        let mut base = 0;
        for &p1 in &ps {
            for &p2 in &ps {
                let (ra, rb) = self.factor_rows(width, [p1, p2]);
                for (i, a) in ra.iter().enumerate() {
                    for (s, out) in symbols.iter().zip(outs.iter_mut()) {
                        v.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
                        let mut any = false;
                        for (j, b) in rb.iter().enumerate() {
                            let (q, p) = ([qs[i], qs[j]], [p1, p2]);
                            let c = s(q, p);
                            if c == C64::new(0.0, 0.0) {
                                continue;
                            }
                            any = true;
                            let ph = -0.5 * (q[0] * p[0] + q[1] * p[1]);
                            let coef = c * ov[base + i * nq + j] * C64::from_polar(w, ph);
                            for (vv, bv) in v[b.lo..].iter_mut().zip(&b.vals) {
                                *vv += coef * bv;
                            }
                        }
                        if !any {
                            continue;
                        }
                        for (o, av) in a.vals.iter().enumerate() {
                            let row = &mut out[(a.lo + o) * n..(a.lo + o + 1) * n];
                            for (r, vv) in row.iter_mut().zip(&v) {
                                *r += av * vv;
                            }
                        }
                    }
                }
                base += nq * nq;
            }
        }
        outs.into_iter().map(|values| GridFunction { spec: g.spec, values }).collect()
    }

    /// FFT path: for every momentum node, correlate and convolve with the
    /// fiducial over all grid positions inside the position window.
    fn fast_apply(&self, symbols: &[Arc<Symbol>], g: &GridFunction) -> Vec<GridFunction> {
        let spec = g.spec;
        let n = spec.n;
        let h = spec.h();
        let xs = spec.coords();
        let k = kappa(&self.params);
        let ps = self.pg.p_nodes();
        let dp2 = (2.0 * self.pg.lp / self.pg.np as f64).powi(2);
        let w = h * h * dp2;
        let inside: Vec<bool> = xs.iter().map(|&x| x >= -self.pg.lq && x < self.pg.lq).collect();
        let nn = (n * n) as f64;
        let mut outs = vec![GridFunction::zeros(spec); symbols.len()];
        for &p1 in &ps {
            for &p2 in &ps {
                let p = [p1, p2];
                // E[d] = η(d h + κ J p), d taken modulo n around zero
                let shifted = translate(&self.fid.eta, [-k * p2, k * p1]);
                let mut e_hat = vec![C64::new(0.0, 0.0); n * n];
                for i in 0..n {
                    for j in 0..n {
                        e_hat[((i + n / 2) % n) * n + (j + n / 2) % n] = shifted.values[i * n + j];
                    }
                }
                dft(&mut e_hat, n, false, true, true);
                let mut corr = g.mul_fn(|x1, x2| C64::from_polar(1.0, -(p1 * x1 + p2 * x2))).values;
                dft(&mut corr, n, false, true, true);
                for (c, e) in corr.iter_mut().zip(&e_hat) {
                    *c *= e.conj();
                }
                dft(&mut corr, n, true, true, true);
                for (s, out) in symbols.iter().zip(outs.iter_mut()) {
                    let mut u = vec![C64::new(0.0, 0.0); n * n];
                    for i in 0..n {
                        if !inside[i] {
                            continue;
                        }
                        for j in 0..n {
                            if !inside[j] {
                                continue;
                            }
                            let q = [xs[i], xs[j]];
                            let c = s(q, p);
                            if c == C64::new(0.0, 0.0) {
                                continue;
                            }
                            // overlap h² e^{iq·p/2} corr, then the e^{-iq·p/2} of the state
                            u[i * n + j] = c * corr[i * n + j] * (w * h * h / nn);
                        }
                    }
                    dft(&mut u, n, false, true, true);
                    for (a, e) in u.iter_mut().zip(&e_hat) {
                        *a *= e;
                    }
                    dft(&mut u, n, true, true, true);
                    let mut conv = GridFunction { spec, values: u };
                    conv = conv.mul_fn(|x1, x2| C64::from_polar(1.0 / nn, p1 * x1 + p2 * x2));
                    *out = out.add(&conv);
                }
            }
        }
        outs
    }

    /// `quantize(f)` as an operator.
    pub fn quantize(self: &Arc<Self>, label: impl Into<String>, f: Arc<Symbol>) -> LinearOp {
        let q = Arc::clone(self);
        LinearOp::new(label, move |g| q.apply(&[Arc::clone(&f)], g).remove(0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ResolutionReport {
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub inner_re: f64,
    pub inner_im: f64,
    /// `|lhs / ⟨f|g⟩|`, or `NaN` when `⟨f|g⟩` vanishes.
    pub ratio: f64,
    /// `ratio / ((2π)² ‖η‖²)`.
    pub ratio_vs_full: f64,
    /// `ratio / (2π ‖η‖²)`.
    pub ratio_vs_single: f64,
}

impl ResolutionReport {
    pub fn lhs(&self) -> C64 {
        C64::new(self.lhs_re, self.lhs_im)
    }
}

/// `Σ w ⟨f|η_{q,p}⟩⟨η_{q,p}|g⟩` against `⟨f|g⟩`.
pub fn resolution_check(q: &Quantizer, f: &GridFunction, g: &GridFunction) -> Result<ResolutionReport> {
    let inner = f.inner(g)?;
    let (of, og) = (q.overlaps(f), q.overlaps(g));
    let w = q.pg.weight();
    let lhs: C64 = of.iter().zip(&og).map(|(a, b)| a.conj() * b).sum::<C64>() * w;
    let ratio = if inner.norm() > 1e-12 * f.norm() * g.norm() { (lhs / inner).norm() } else { f64::NAN };
    Ok(ResolutionReport {
        lhs_re: lhs.re,
        lhs_im: lhs.im,
        inner_re: inner.re,
        inner_im: inner.im,
        ratio,
        ratio_vs_full: ratio / q.fid.full_constant(),
        ratio_vs_single: ratio / q.fid.single_constant(),
    })
}

/// Measured commutator `[Ô_a, Ô_b] g ≈ i c g`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CommutatorEntry {
    pub symbol: String,
    pub probe_id: usize,
    pub coefficient_re: f64,
    pub coefficient_im: f64,
    pub residual: f64,
}

const COORDS: [&str; 4] = ["q1", "q2", "p1", "p2"];

/// All brackets among the quantized coordinates on each probe.
pub fn quantized_commutators(q: &Quantizer, probes: &[GridFunction]) -> Result<Vec<CommutatorEntry>> {
    let syms: Vec<Arc<Symbol>> = COORDS.iter().map(|s| coordinate_symbol(s)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (pid, g) in probes.iter().enumerate() {
        let first = q.apply(&syms, g);
        // second[b][a] = Ô_a Ô_b g
        let second: Vec<Vec<GridFunction>> = first.iter().map(|f| q.apply(&syms, f)).collect();
        let gg = g.norm().powi(2);
        for a in 0..4 {
            for b in a + 1..4 {
                let c = second[b][a].sub(&second[a][b]);
                let coef = g.inner_unchecked(&c) / (C64::new(0.0, 1.0) * gg);
                let residual = c.sub(&g.scale(C64::new(0.0, 1.0) * coef)).norm() / g.norm();
                out.push(CommutatorEntry {
                    symbol: format!("[{},{}]", COORDS[a], COORDS[b]),
                    probe_id: pid,
                    coefficient_re: coef.re,
                    coefficient_im: coef.im,
                    residual,
                });
            }
        }
    }
    Ok(out)
}

/// `‖(a - b)·mask‖ / ‖b·mask‖` over nodes with `|x_i| ≤ r`.
pub fn interior_rel_diff(a: &GridFunction, b: &GridFunction, r: f64) -> f64 {
    let mask = |f: &GridFunction| f.mul_fn(|x, y| C64::new(if x.abs() <= r && y.abs() <= r { 1.0 } else { 0.0 }, 0.0));
    mask(&a.sub(b)).norm() / mask(b).norm()
}

/// Comparison of `Ô_{q1}`, `Ô_{q2}`, `Ô_{p1}`, `Ô_{p2}` with differential
/// operators on one probe.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct OperatorForms {
    pub p1: f64,
    pub p2: f64,
    /// errors of `x1 + s i κ ∂2` and `x2 - s i κ ∂1` for `s = +1`
    pub q_plus: [f64; 2],
    /// the same for `s = -1`
    pub q_minus: [f64; 2],
    /// sign with the smaller error
    pub sign: f64,
}

pub fn operator_forms(q: &Quantizer, g: &GridFunction, interior: f64) -> Result<OperatorForms> {
    let syms: Vec<Arc<Symbol>> = COORDS.iter().map(|s| coordinate_symbol(s)).collect::<Result<_>>()?;
    let out = q.apply(&syms, g);
    let k = kappa(&q.params);
    let i = C64::new(0.0, 1.0);
    let (d1, d2) = (derivative(g, 0), derivative(g, 1));
    let x1g = g.mul_fn(|x, _| C64::new(x, 0.0));
    let x2g = g.mul_fn(|_, y| C64::new(y, 0.0));
    let q_err = |s: f64| {
        [
            interior_rel_diff(&out[0], &x1g.axpy(i * (s * k), &d2), interior),
            interior_rel_diff(&out[1], &x2g.axpy(-i * (s * k), &d1), interior),
        ]
    };
    let (plus, minus) = (q_err(Q_SIGN_PLUS), q_err(Q_SIGN_MINUS));
    Ok(OperatorForms {
        p1: interior_rel_diff(&out[2], &d1.scale(-i), interior),
        p2: interior_rel_diff(&out[3], &d2.scale(-i), interior),
        q_plus: plus,
        q_minus: minus,
        sign: if plus[0].max(plus[1]) <= minus[0].max(minus[1]) { Q_SIGN_PLUS } else { Q_SIGN_MINUS },
    })
}

/// Coefficient `c` in `(Ô_{q1} - x1) g ≈ c i ∂2 g`.
pub fn derivative_coefficient(q: &Quantizer, g: &GridFunction) -> Result<f64> {
    let out = q.apply(&[coordinate_symbol("q1")?], g).remove(0);
    let rest = out.sub(&g.mul_fn(|x, _| C64::new(x, 0.0)));
    let basis = derivative(g, 1).scale(C64::new(0.0, 1.0));
    Ok((basis.inner_unchecked(&rest) / basis.norm().powi(2)).re)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SlopeFit {
    pub lambdas: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub expected_slope: f64,
    pub rel_error: f64,
}

/// Least-squares line through the derivative coefficients measured at each
/// `λ`, compared with the slope `1/2m²`.
pub fn theta_limit_fit(
    fid: &Fiducial,
    pg: PhaseGrid,
    m: f64,
    lambdas: &[f64],
    g: &GridFunction,
) -> Result<SlopeFit> {
    let coefficients = lambdas
        .iter()
        .map(|&l| derivative_coefficient(&Quantizer::new(fid.clone(), pg, GalileiParams::new(m, l)?), g))
        .collect::<Result<Vec<_>>>()?;
    let n = lambdas.len() as f64;
    let mx = lambdas.iter().sum::<f64>() / n;
    let my = coefficients.iter().sum::<f64>() / n;
    let sxy: f64 = lambdas.iter().zip(&coefficients).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lambdas.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let expected_slope = 1.0 / (2.0 * m * m);
    Ok(SlopeFit {
        lambdas: lambdas.to_vec(),
        coefficients,
        slope,
        intercept: my - slope * mx,
        expected_slope,
        rel_error: (slope - expected_slope).abs() / expected_slope,
    })
}

/// `‖η^λ_{q,p} - η^0_{q,p}‖` for each `λ`.
pub fn canonical_distance(fid: &Fiducial, q: [f64; 2], p: [f64; 2], m: f64, lambdas: &[f64]) -> Result<Vec<f64>> {
    let canon = coherent_state(fid, q, p, &GalileiParams::new(m, 0.0)?);
    lambdas
        .iter()
        .map(|&l| Ok(coherent_state(fid, q, p, &GalileiParams::new(m, l)?).sub(&canon).norm()))
        .collect()
}

/// Axis-aligned box in phase space, `[lo, hi)` per coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseBox {
    pub q_lo: [f64; 2],
    pub q_hi: [f64; 2],
    pub p_lo: [f64; 2],
    pub p_hi: [f64; 2],
}

impl PhaseBox {
    pub fn contains(&self, q: [f64; 2], p: [f64; 2]) -> bool {
        (0..2).all(|i| q[i] >= self.q_lo[i] && q[i] < self.q_hi[i] && p[i] >= self.p_lo[i] && p[i] < self.p_hi[i])
    }

    /// Box covering the whole phase grid.
    pub fn full(pg: &PhaseGrid) -> Self {
        Self { q_lo: [-pg.lq; 2], q_hi: [pg.lq; 2], p_lo: [-pg.lp; 2], p_hi: [pg.lp; 2] }
    }
}

/// Union of boxes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Region {
    pub boxes: Vec<PhaseBox>,
}

impl Region {
    pub fn contains(&self, q: [f64; 2], p: [f64; 2]) -> bool {
        self.boxes.iter().any(|b| b.contains(q, p))
    }

    pub fn union(&self, other: &Region) -> Region {
        Region { boxes: self.boxes.iter().chain(&other.boxes).copied().collect() }
    }
}

/// `a(Δ) = Σ_{(q,p) ∈ Δ} w |η_{q,p}⟩⟨η_{q,p}|`, normalized like `quantize`.
pub fn pov_measure(q: &Arc<Quantizer>, region: Region) -> LinearOp {
    if region.boxes.is_empty() {
        return LinearOp::zero();
    }
    q.quantize("pov", symbol(move |qq, pp| C64::new(if region.contains(qq, pp) { 1.0 } else { 0.0 }, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn section_values() {
        let g = section_beta([0.0, 0.0], [0.0, 0.0], 1.0);
        assert_eq!(g, GalileiElement::identity());
        let g = section_beta([1.0, 0.0], [2.0, 0.0], 2.0);
        assert_eq!(g.v, [1.0, 0.0]);
    }

    #[test]
    fn phase_grid_weights() {
        let pg = PhaseGrid::default();
        assert!((pg.weight() * pg.len() as f64 - pg.volume()).abs() < 1e-9 * pg.volume());
        assert_eq!(pg.q_nodes()[0], -5.75);
    }
}
