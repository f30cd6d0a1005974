//! Discretized L²(R²): complex samples on a periodic `n x n` grid over
//! `[-L, L)²`, a unitary FFT, and the unitary representation operators of the
//! extended groups acting on such functions.
//!
//! Values are row-major with the first index running along `x1`. The Fourier
//! transform `f̂(k) = (1/2π) ∫ f(x) e^{-ik·x} dx` maps a function on a spec
//! `(n, L)` to one on the dual spec `(n, nπ/(2L))`, whose nodes are the
//! momenta `(m - n/2) π/L`; both sides use the plain `h²` cell measure, so
//! Parseval holds with the same inner product.

use std::f64::consts::{PI, TAU};
use std::io::{Read, Write};
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::{Fft, FftPlanner};

use crate::group::{dot, rotate, wedge, Arity, GalileiElement, GalileiParams, TransElement};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    pub l: f64,
}

impl GridSpec {
    pub fn new(n: usize, l: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n = {n} must be a power of two and at least 8")));
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidGrid(format!("L = {l} must be positive")));
        }
        Ok(Self { n, l })
    }

    pub fn h(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.l + i as f64 * self.h()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }

    /// Grid of the Fourier variable.
    pub fn dual(&self) -> Self {
        Self { n: self.n, l: PI * self.n as f64 / (2.0 * self.l) }
    }

    /// The half-extent for which `dual() == self`.
    pub fn self_dual(n: usize) -> Result<Self> {
        Self::new(n, (PI * n as f64 / 2.0).sqrt())
    }

    pub fn is_self_dual(&self) -> bool {
        (self.dual().l - self.l).abs() <= 1e-12 * self.l
    }

    fn same(&self, other: &Self) -> bool {
        self.n == other.n && (self.l - other.l).abs() <= 1e-12 * self.l
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { n: 128, l: 10.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub spec: GridSpec,
    pub values: Vec<C64>,
}

impl GridFunction {
    pub fn zeros(spec: GridSpec) -> Self {
        Self { spec, values: vec![C64::new(0.0, 0.0); spec.n * spec.n] }
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn(f64, f64) -> C64) -> Self {
        let xs = spec.coords();
        let mut values = Vec::with_capacity(spec.n * spec.n);
        for &x1 in &xs {
            for &x2 in &xs {
                values.push(f(x1, x2));
            }
        }
        Self { spec, values }
    }

    /// Normalized Gaussian of width `w` centred at `c`.
    pub fn gaussian(spec: GridSpec, c: [f64; 2], w: f64) -> Self {
        let k = 1.0 / (w * PI.sqrt());
        Self::from_fn(spec, |x, y| {
            let r2 = (x - c[0]).powi(2) + (y - c[1]).powi(2);
            C64::new(k * (-r2 / (2.0 * w * w)).exp(), 0.0)
        })
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.values[i * self.spec.n + j]
    }

    pub fn inner(&self, other: &Self) -> Result<C64> {
        if !self.spec.same(&other.spec) {
            return Err(Error::SpecMismatch);
        }
        Ok(self.inner_unchecked(other))
    }

    pub(crate) fn inner_unchecked(&self, other: &Self) -> C64 {
        let h2 = self.spec.h().powi(2);
        let s: C64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        s * h2
    }

    pub fn norm(&self) -> f64 {
        let h2 = self.spec.h().powi(2);
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * h2).sqrt()
    }

    pub fn scale(&self, k: C64) -> Self {
        self.map(|v| v * k)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self { spec: self.spec, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Pointwise product with a function of the node coordinates.
    pub fn mul_fn(&self, f: impl Fn(f64, f64) -> C64) -> Self {
        let xs = self.spec.coords();
        let n = self.spec.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.values[i * n + j] *= f(xs[i], xs[j]);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    /// `self + k·other`
    pub fn axpy(&self, k: C64, other: &Self) -> Self {
        self.zip(other, |a, b| a + k * b)
    }

    fn zip(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert!(self.spec.same(&other.spec), "grid spec mismatch");
        Self {
            spec: self.spec,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// `‖self - other‖ / ‖reference‖`
    pub fn rel_diff(&self, other: &Self, reference: &Self) -> f64 {
        self.sub(other).norm() / reference.norm()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Fraction of the squared norm in the outer band `|x_i| ≥ 7L/8`.
    pub fn edge_fraction(&self) -> f64 {
        let n = self.spec.n as isize;
        let band = 7 * n / 16;
        let mut edge = 0.0;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                let w = self.values[(i * n + j) as usize].norm_sqr();
                total += w;
                if (i - n / 2).abs() >= band || (j - n / 2).abs() >= band {
                    edge += w;
                }
            }
        }
        if total == 0.0 {
            0.0
        } else {
            edge / total
        }
    }

    fn warn_if_edge(self, what: &str) -> Self {
        let frac = self.edge_fraction();
        if frac > 1e-12 {
            log::warn!("{what}: {frac:.2e} of the norm sits near the grid boundary");
        }
        self
    }

    /// Header `n` (u64 LE) and `L` (f64 LE), then row-major `(re, im)` pairs.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 16 * self.values.len());
        out.extend_from_slice(&(self.spec.n as u64).to_le_bytes());
        out.extend_from_slice(&self.spec.l.to_le_bytes());
        for v in &self.values {
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let word = |k: usize| -> Result<[u8; 8]> {
            bytes
                .get(8 * k..8 * k + 8)
                .and_then(|s| s.try_into().ok())
                .ok_or_else(|| Error::Invalid("truncated grid function".into()))
        };
        let n = u64::from_le_bytes(word(0)?) as usize;
        let spec = GridSpec::new(n, f64::from_le_bytes(word(1)?))?;
        if bytes.len() != 16 + 16 * n * n {
            return Err(Error::Invalid("grid function length does not match header".into()));
        }
        let values = (0..n * n)
            .map(|k| {
                Ok(C64::new(
                    f64::from_le_bytes(word(2 + 2 * k)?),
                    f64::from_le_bytes(word(3 + 2 * k)?),
                ))
            })
            .collect::<Result<_>>()?;
        Ok(Self { spec, values })
    }

    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        w.write_all(&self.to_bytes())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf).map_err(|e| Error::Invalid(e.to_string()))?;
        Self::from_bytes(&buf)
    }
}

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut p = planner().lock().expect("fft planner poisoned");
    if inverse {
        p.plan_fft_inverse(n)
    } else {
        p.plan_fft_forward(n)
    }
}

fn transpose(v: &mut [C64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            v.swap(i * n + j, j * n + i);
        }
    }
}

/// Unnormalized DFT along the selected axes.
pub(crate) fn dft(v: &mut [C64], n: usize, inverse: bool, axis0: bool, axis1: bool) {
    let fft = plan(n, inverse);
    if axis1 {
        fft.process(v);
    }
    if axis0 {
        transpose(v, n);
        fft.process(v);
        transpose(v, n);
    }
}

fn checkerboard(v: &mut [C64], n: usize, axis0: bool, axis1: bool) {
    for i in 0..n {
        for j in 0..n {
            let odd = (axis0 && i % 2 == 1) ^ (axis1 && j % 2 == 1);
            if odd {
                v[i * n + j] = -v[i * n + j];
            }
        }
    }
}

/// Unitary transform onto the dual grid.
pub fn fourier(f: &GridFunction) -> GridFunction {
    let n = f.spec.n;
    let mut v = f.values.clone();
    checkerboard(&mut v, n, true, true);
    dft(&mut v, n, false, true, true);
    checkerboard(&mut v, n, true, true);
    let k = f.spec.h().powi(2) / TAU;
    v.iter_mut().for_each(|x| *x *= k);
    GridFunction { spec: f.spec.dual(), values: v }
}

/// Inverse of [`fourier`]; maps a function on the dual grid back.
pub fn inv_fourier(fhat: &GridFunction) -> GridFunction {
    let n = fhat.spec.n;
    let mut v = fhat.values.clone();
    checkerboard(&mut v, n, true, true);
    dft(&mut v, n, true, true, true);
    checkerboard(&mut v, n, true, true);
    let k = fhat.spec.h().powi(2) / TAU;
    v.iter_mut().for_each(|x| *x *= k);
    GridFunction { spec: fhat.spec.dual(), values: v }
}

/// One-dimensional unitary transform along `x1` only. Requires a self-dual
/// spec so that the mixed variables share one grid.
pub fn fourier_axis0(f: &GridFunction, inverse: bool) -> Result<GridFunction> {
    if !f.spec.is_self_dual() {
        return Err(Error::InvalidGrid("partial transform needs a self-dual grid".into()));
    }
    let n = f.spec.n;
    let mut v = f.values.clone();
    checkerboard(&mut v, n, true, false);
    dft(&mut v, n, inverse, true, false);
    checkerboard(&mut v, n, true, false);
    let k = f.spec.h() / TAU.sqrt();
    v.iter_mut().for_each(|x| *x *= k);
    Ok(GridFunction { spec: f.spec, values: v })
}

/// Apply a Fourier multiplier `m(k1, k2)`.
pub fn fourier_multiplier(f: &GridFunction, m: impl Fn(f64, f64) -> C64) -> GridFunction {
    inv_fourier(&fourier(f).mul_fn(m))
}

/// Spectral partial derivative along `axis` (0 or 1). The Nyquist mode is
/// dropped so the operator stays skew-adjoint.
pub fn derivative(f: &GridFunction, axis: usize) -> GridFunction {
    let kmin = -f.spec.dual().l;
    fourier_multiplier(f, |k1, k2| {
        let k = if axis == 0 { k1 } else { k2 };
        if k == kmin {
            C64::new(0.0, 0.0)
        } else {
            C64::new(0.0, k)
        }
    })
}

pub fn laplacian(f: &GridFunction) -> GridFunction {
    fourier_multiplier(f, |k1, k2| C64::new(-(k1 * k1 + k2 * k2), 0.0))
}

/// `f(x + d)`: an exact roll when `d` is a multiple of the spacing, otherwise a
/// Fourier phase shift (exact for band-limited functions).
pub fn translate(f: &GridFunction, d: [f64; 2]) -> GridFunction {
    let h = f.spec.h();
    let steps = d.map(|x| x / h);
    let aligned = steps.iter().all(|s| (s - s.round()).abs() < 1e-9);
    if aligned {
        let n = f.spec.n as i64;
        let (di, dj) = (steps[0].round() as i64, steps[1].round() as i64);
        let mut out = GridFunction::zeros(f.spec);
        for i in 0..n {
            let si = (i + di).rem_euclid(n);
            for j in 0..n {
                let sj = (j + dj).rem_euclid(n);
                out.values[(i * n + j) as usize] = f.values[(si * n + sj) as usize];
            }
        }
        out
    } else {
        fourier_multiplier(f, |k1, k2| C64::from_polar(1.0, k1 * d[0] + k2 * d[1]))
    }
}

fn quarter_turns(angle: f64) -> Result<usize> {
    let t = angle / (PI / 2.0);
    if (t - t.round()).abs() > 1e-12 {
        return Err(Error::Rotation(angle));
    }
    Ok((t.round() as i64).rem_euclid(4) as usize)
}

/// `f(R⁻¹x)` for a rotation by `turns` quarter turns; an exact permutation of
/// grid nodes since negation maps index `i` to `n - i (mod n)`.
pub fn rotate_quarter(f: &GridFunction, turns: usize) -> GridFunction {
    let n = f.spec.n;
    let neg = |i: usize| (n - i) % n;
    let mut cur = f.clone();
    for _ in 0..turns % 4 {
        let mut out = GridFunction::zeros(f.spec);
        for i in 0..n {
            for j in 0..n {
                // R⁻¹(x1, x2) = (x2, -x1)
                out.values[i * n + j] = cur.values[j * n + neg(i)];
            }
        }
        cur = out;
    }
    cur
}

fn cubic_weight(t: f64) -> f64 {
    // Keys kernel, a = -1/2
    let t = t.abs();
    if t < 1.0 {
        1.5 * t.powi(3) - 2.5 * t * t + 1.0
    } else if t < 2.0 {
        -0.5 * t.powi(3) + 2.5 * t * t - 4.0 * t + 2.0
    } else {
        0.0
    }
}

/// `f(R⁻¹x)` for an arbitrary angle by periodic bicubic interpolation.
pub fn rotate_bicubic(f: &GridFunction, angle: f64) -> GridFunction {
    let spec = f.spec;
    let n = spec.n as i64;
    let h = spec.h();
    GridFunction::from_fn(spec, |x1, x2| {
        let [y1, y2] = rotate(-angle, [x1, x2]);
        let (u, v) = ((y1 + spec.l) / h, (y2 + spec.l) / h);
        let (i0, j0) = (u.floor() as i64, v.floor() as i64);
        let mut acc = C64::new(0.0, 0.0);
        for di in -1..=2 {
            let wi = cubic_weight(u - (i0 + di) as f64);
            let ii = (i0 + di).rem_euclid(n);
            for dj in -1..=2 {
                let wj = cubic_weight(v - (j0 + dj) as f64);
                let jj = (j0 + dj).rem_euclid(n);
                acc += f.values[(ii * n + jj) as usize] * (wi * wj);
            }
        }
        acc
    })
}

/// Free evolution over time `b`: multiplier `e^{-i(b/2m)|k|²}`.
pub fn free_evolution(f: &GridFunction, b: f64, m: f64) -> GridFunction {
    fourier_multiplier(f, |k1, k2| C64::from_polar(1.0, -b / (2.0 * m) * (k1 * k1 + k2 * k2)))
}

fn config_after_rotation(g: &GalileiElement, rotated: &GridFunction, p: &GalileiParams) -> GridFunction {
    let m = p.m;
    let boosted = rotated.mul_fn(|x1, x2| C64::from_polar(1.0, m * (g.v[0] * x1 + g.v[1] * x2)));
    // shift by a + (λ/2m) J v, J v = (-v2, v1)
    let c = p.lambda / (2.0 * m);
    let d = [g.a[0] - c * g.v[1], g.a[1] + c * g.v[0]];
    let kb = -g.b / (2.0 * m);
    let moved = fourier_multiplier(&boosted, |k1, k2| {
        C64::from_polar(1.0, kb * (k1 * k1 + k2 * k2) + d[0] * k1 + d[1] * k2)
    });
    let global = g.theta + g.phi - 0.5 * m * dot(g.a, g.v);
    moved.scale(C64::from_polar(1.0, global))
}

/// Configuration-space representation of the extended Galilei group, the
/// Fourier conjugate of [`apply_galilei_momentum`]. For `b = 0`:
/// `e^{i(θ+φ)} e^{im(x+a/2)·v} f(R⁻¹(x + a + (λ/2m) J v))`. Rotations must be
/// quarter turns.
pub fn apply_galilei_config(
    g: &GalileiElement,
    f: &GridFunction,
    params: &GalileiParams,
) -> Result<GridFunction> {
    let turns = quarter_turns(g.angle)?;
    Ok(config_after_rotation(g, &rotate_quarter(f, turns), params).warn_if_edge("galilei rep"))
}

/// As [`apply_galilei_config`] for any angle, rotating by bicubic resampling.
pub fn apply_galilei_config_resampled(
    g: &GalileiElement,
    f: &GridFunction,
    params: &GalileiParams,
) -> GridFunction {
    let rotated = match quarter_turns(g.angle) {
        Ok(t) => rotate_quarter(f, t),
        Err(_) => rotate_bicubic(f, g.angle),
    };
    config_after_rotation(g, &rotated, params)
}

/// Momentum-space representation:
/// `e^{i(θ+φ)} e^{i[a·(k - mv/2) - (b/2m)|k|² + (λ/2m) v∧k]} f̂(R⁻¹(k - mv))`.
pub fn apply_galilei_momentum(
    g: &GalileiElement,
    fhat: &GridFunction,
    params: &GalileiParams,
) -> Result<GridFunction> {
    let m = params.m;
    let turns = quarter_turns(g.angle)?;
    let shifted = translate(&rotate_quarter(fhat, turns), [-m * g.v[0], -m * g.v[1]]);
    let c = params.lambda / (2.0 * m);
    Ok(shifted.mul_fn(|k1, k2| {
        let k = [k1, k2];
        let ph = g.theta + g.phi + dot(g.a, [k1 - 0.5 * m * g.v[0], k2 - 0.5 * m * g.v[1]])
            - g.b / (2.0 * m) * dot(k, k)
            + c * wedge(g.v, k);
        C64::from_polar(1.0, ph)
    }))
}

/// `(U f)(s) = e^{i(θ + φ - α⟨q, s + p/2⟩ - (β/2) p∧s)} f(s + p)`
pub fn apply_double(g: &TransElement, f: &GridFunction) -> Result<GridFunction> {
    g.require(Arity::Double)?;
    let (al, be) = (g.ext.alpha, g.ext.beta);
    let (q, p) = (g.q, g.p);
    let shifted = translate(f, p);
    Ok(shifted
        .mul_fn(|s1, s2| {
            let ph = g.theta() + g.phi() - al * dot(q, [s1 + 0.5 * p[0], s2 + 0.5 * p[1]])
                - 0.5 * be * wedge(p, [s1, s2]);
            C64::from_polar(1.0, ph)
        })
        .warn_if_edge("double rep"))
}

/// Representation of the triple extension on functions of `(r1, s2)`.
pub fn apply_triple(g: &TransElement, f: &GridFunction) -> Result<GridFunction> {
    g.require(Arity::Triple)?;
    let (al, be, ga) = (g.ext.alpha, g.ext.beta, g.ext.gamma);
    let ([q1, q2], [p1, p2]) = (g.q, g.p);
    let shifted = translate(f, [q1, p2]);
    Ok(shifted
        .mul_fn(|r1, s2| {
            let c = g.theta() - al * q2 * s2 + al * p1 * r1 + 0.5 * al * q1 * p1 - 0.5 * al * q2 * p2;
            let d = g.phi() - be * p1 * s2 - 0.5 * be * p1 * p2;
            let e = g.psi() + ga * q2 * r1 + 0.5 * ga * q2 * q1;
            C64::from_polar(1.0, c + d + e)
        })
        .warn_if_edge("triple rep"))
}

/// Which representation a group element is applied through.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RepParams {
    GalileiConfig(GalileiParams),
    GalileiMomentum(GalileiParams),
    Double(crate::group::Extension),
    Triple(crate::group::Extension),
}

impl RepParams {
    /// Number of one-parameter directions: `(θ, φ, angle, b, v1, v2, a1, a2)`
    /// for Galilei, `(θ, φ[, ψ], q1, q2, p1, p2)` for the translation groups.
    pub fn directions(&self) -> usize {
        match self {
            Self::GalileiConfig(_) | Self::GalileiMomentum(_) => 8,
            Self::Double(_) => 6,
            Self::Triple(_) => 7,
        }
    }

    /// Apply the one-parameter element `exp(t e_dir)`.
    pub fn apply_direction(&self, dir: usize, t: f64, f: &GridFunction) -> Result<GridFunction> {
        if dir >= self.directions() {
            return Err(Error::Invalid(format!("direction {dir} out of range")));
        }
        match self {
            Self::GalileiConfig(p) | Self::GalileiMomentum(p) => {
                let mut g = GalileiElement::identity();
                match dir {
                    0 => g.theta = t,
                    1 => g.phi = t,
                    2 => g.angle = t,
                    3 => g.b = t,
                    4 => g.v[0] = t,
                    5 => g.v[1] = t,
                    6 => g.a[0] = t,
                    _ => g.a[1] = t,
                }
                if matches!(self, Self::GalileiConfig(_)) {
                    Ok(apply_galilei_config_resampled(&g, f, p))
                } else {
                    apply_galilei_momentum(&g, f, p)
                }
            }
            Self::Double(e) | Self::Triple(e) => {
                let mut g = TransElement::identity(*e);
                let nph = e.phase_count();
                if dir < nph {
                    g.phases[dir] = t;
                } else {
                    match dir - nph {
                        0 => g.q[0] = t,
                        1 => g.q[1] = t,
                        2 => g.p[0] = t,
                        _ => g.p[1] = t,
                    }
                }
                if e.arity == Arity::Double {
                    apply_double(&g, f)
                } else {
                    apply_triple(&g, f)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(GridSpec::new(100, 1.0).is_err());
        assert!(GridSpec::new(4, 1.0).is_err());
        assert!(GridSpec::new(8, 0.0).is_err());
        let s = GridSpec::new(64, 5.0).unwrap();
        assert!((s.dual().dual().l - 5.0).abs() < 1e-12);
        assert!(GridSpec::self_dual(64).unwrap().is_self_dual());
    }

    #[test]
    fn quarter_turn_detection() {
        assert_eq!(quarter_turns(PI).unwrap(), 2);
        assert_eq!(quarter_turns(-PI / 2.0).unwrap(), 3);
        assert!(quarter_turns(0.3).is_err());
    }

    #[test]
    fn bytes_roundtrip() {
        let s = GridSpec::new(8, 2.0).unwrap();
        let f = GridFunction::from_fn(s, C64::new);
        assert_eq!(GridFunction::from_bytes(&f.to_bytes()).unwrap(), f);
        assert!(GridFunction::from_bytes(&f.to_bytes()[..20]).is_err());
    }
}
