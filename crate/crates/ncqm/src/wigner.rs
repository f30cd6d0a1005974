//! Hilbert–Schmidt realization of the noncommutative plane on a truncated
//! oscillator basis, and the Wigner map onto functions on the grid.
//!
//! The map is `(𝒲X)(x, y) = (2π)^{-1/2} Tr[e^{-i(xQ+yP)} X]`. Writing
//! `xQ + yP = r(cos φ Q + sin φ P) = r e^{iφN} Q e^{-iφN}` reduces every
//! exponential to `e^{-irQ}`, which is diagonalized once.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::generators::ncqm_ops;
use crate::grid::{inv_fourier, GridFunction, GridSpec};
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub dim: usize,
    pub matrix: DMatrix<C64>,
}

impl FockOperator {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, matrix: DMatrix::zeros(dim, dim) }
    }

    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Invalid("operator matrix must be square".into()));
        }
        Ok(Self { dim: matrix.nrows(), matrix })
    }

    /// `|n⟩⟨m|`
    pub fn unit(dim: usize, n: usize, m: usize) -> Self {
        let mut x = Self::zeros(dim);
        x.matrix[(n, m)] = C64::new(1.0, 0.0);
        x
    }

    /// Random operator supported on levels `< levels`, unit HS norm.
    pub fn random_low(dim: usize, levels: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = Self::zeros(dim);
        for n in 0..levels.min(dim) {
            for m in 0..levels.min(dim) {
                x.matrix[(n, m)] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        let s = x.hs_norm();
        x.scale(C64::new(1.0 / s, 0.0))
    }

    /// Random operator filling the whole truncation.
    pub fn random_full(dim: usize, seed: u64) -> Self {
        Self::random_low(dim, dim, seed)
    }

    pub fn scale(&self, k: C64) -> Self {
        Self { dim: self.dim, matrix: &self.matrix * k }
    }

    /// `Tr(X† Y)`
    pub fn hs_inner(&self, other: &Self) -> C64 {
        self.matrix.iter().zip(other.matrix.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn hs_norm(&self) -> f64 {
        self.matrix.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the entries with an index at or above `level`,
    /// relative to the full norm.
    pub fn tail_fraction(&self, level: usize) -> f64 {
        let mut t = 0.0;
        for n in 0..self.dim {
            for m in 0..self.dim {
                if n >= level || m >= level {
                    t += self.matrix[(n, m)].norm_sqr();
                }
            }
        }
        (t.sqrt() / self.hs_norm()).min(1.0)
    }

    /// Max abs difference restricted to the block with both indices `< dim/2`.
    pub fn safe_block_diff(&self, other: &Self) -> f64 {
        let k = self.dim / 2;
        let mut worst = 0.0f64;
        for n in 0..k {
            for m in 0..k {
                worst = worst.max((self.matrix[(n, m)] - other.matrix[(n, m)]).norm());
            }
        }
        worst
    }

    /// Copy into a larger (zero-padded) or smaller (cut) truncation.
    pub fn resized(&self, dim: usize) -> Self {
        let mut x = Self::zeros(dim);
        let k = dim.min(self.dim);
        x.matrix.view_mut((0, 0), (k, k)).copy_from(&self.matrix.view((0, 0), (k, k)));
        x
    }
}

fn annihilation(dim: usize) -> DMatrix<C64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// `Q = (a + a†)/√2`, `P = i(a† - a)/√2` truncated to `dim` levels.
pub fn base_qp(dim: usize) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    if dim < 4 {
        return Err(Error::Invalid(format!("oscillator truncation {dim} below 4")));
    }
    let a = annihilation(dim);
    let ad = a.adjoint();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let q = (&a + &ad) * C64::new(s, 0.0);
    let p = (&ad - &a) * C64::new(0.0, s);
    Ok((q, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsOp {
    Q1,
    Q2,
    P1,
    P2,
}

impl HsOp {
    pub const ALL: [HsOp; 4] = [HsOp::Q1, HsOp::Q2, HsOp::P1, HsOp::P2];

    pub fn label(&self) -> &'static str {
        match self {
            HsOp::Q1 => "Q1",
            HsOp::Q2 => "Q2",
            HsOp::P1 => "P1",
            HsOp::P2 => "P2",
        }
    }
}

/// `Q1 X = QX`, `Q2 X = θPX`, `P1 X = [P,X]`, `P2 X = -[Q,X]/θ`.
#[derive(Debug, Clone)]
pub struct HsOps {
    pub theta: f64,
    q: DMatrix<C64>,
    p: DMatrix<C64>,
}

impl HsOps {
    pub fn new(theta: f64, dim: usize) -> Result<Self> {
        if theta == 0.0 {
            return Err(Error::ZeroTheta);
        }
        let (q, p) = base_qp(dim)?;
        Ok(Self { theta, q, p })
    }

    pub fn apply(&self, op: HsOp, x: &FockOperator) -> FockOperator {
        let m = &x.matrix;
        let out = match op {
            HsOp::Q1 => &self.q * m,
            HsOp::Q2 => &self.p * m * C64::new(self.theta, 0.0),
            HsOp::P1 => &self.p * m - m * &self.p,
            HsOp::P2 => (&self.q * m - m * &self.q) * C64::new(-1.0 / self.theta, 0.0),
        };
        FockOperator { dim: x.dim, matrix: out }
    }

    pub fn commutator(&self, a: HsOp, b: HsOp, x: &FockOperator) -> FockOperator {
        let ab = self.apply(a, &self.apply(b, x));
        let ba = self.apply(b, &self.apply(a, x));
        FockOperator { dim: x.dim, matrix: ab.matrix - ba.matrix }
    }
}

/// Precomputed spectral data of `Q` in a working truncation `work ≥ dim`.
#[derive(Debug, Clone)]
pub struct WignerEngine {
    pub dim: usize,
    pub work: usize,
    eigenvalues: Vec<f64>,
    /// rows `0..dim` of the eigenvector matrix
    vectors: DMatrix<f64>,
}

pub const DEFAULT_OVERSAMPLE: usize = 8;

impl WignerEngine {
    pub fn new(dim: usize, oversample: usize) -> Result<Self> {
        let work = dim * oversample.max(1);
        let (q, _) = base_qp(work)?;
        let eig = SymmetricEigen::new(q.map(|v| v.re));
        Ok(Self {
            dim,
            work,
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors.rows(0, dim).into_owned(),
        })
    }

    /// `Σ_{n-m=ℓ} V_nk V_mk X_mn` for the harmonics `ℓ` that occur in `X`.
    fn harmonics(&self, x: &FockOperator) -> Vec<(i64, Vec<C64>)> {
        let d = self.dim.min(x.dim);
        let mut out = Vec::new();
        for l in -(d as i64 - 1)..d as i64 {
            let pairs: Vec<(usize, usize)> = (0..d)
                .filter_map(|n| {
                    let m = n as i64 - l;
                    (m >= 0 && (m as usize) < d).then_some((n, m as usize))
                })
                .filter(|&(n, m)| x.matrix[(m, n)] != ZERO)
                .collect();
            if pairs.is_empty() {
                continue;
            }
            let coeffs = (0..self.work)
                .map(|k| {
                    pairs
                        .iter()
                        .map(|&(n, m)| x.matrix[(m, n)] * (self.vectors[(n, k)] * self.vectors[(m, k)]))
                        .sum()
                })
                .collect();
            out.push((l, coeffs));
        }
        out
    }

    fn trace_at(&self, harm: &[(i64, Vec<C64>)], x: f64, y: f64, z: &mut [C64]) -> C64 {
        let r = x.hypot(y);
        let phi = y.atan2(x);
        for (zk, lam) in z.iter_mut().zip(&self.eigenvalues) {
            *zk = C64::from_polar(1.0, -r * lam);
        }
        harm.iter()
            .map(|(l, c)| {
                let s: C64 = c.iter().zip(z.iter()).map(|(a, b)| a * b).sum();
                s * C64::from_polar(1.0, phi * *l as f64)
            })
            .sum()
    }

    /// `(2π)^{-1/2} Tr[e^{-i(xQ+yP)} X]` at one point.
    pub fn eval_at(&self, x: &FockOperator, px: f64, py: f64) -> C64 {
        let harm = self.harmonics(x);
        let mut z = vec![ZERO; self.work];
        self.trace_at(&harm, px, py, &mut z) / TAU.sqrt()
    }

    /// Evaluate `g(a, b) = k·𝒲X(a, s·b)` on every node of `spec`.
    fn eval_scaled(&self, x: &FockOperator, spec: GridSpec, s: f64, k: f64) -> GridFunction {
        let frac = x.tail_fraction(self.dim / 2);
        if frac > 1e-8 {
            log::warn!("wigner map: {frac:.2e} of the operator sits in the upper half of the truncation");
        }
        let harm = self.harmonics(x);
        let mut z = vec![ZERO; self.work];
        let c = k / TAU.sqrt();
        let xs = spec.coords();
        let mut values = Vec::with_capacity(spec.n * spec.n);
        for &a in &xs {
            for &b in &xs {
                values.push(self.trace_at(&harm, a, s * b, &mut z) * c);
            }
        }
        GridFunction { spec, values }
    }

    /// The map evaluated on the grid nodes, `x` and `y` taken as the two axes.
    pub fn wigner_map(&self, x: &FockOperator, spec: GridSpec) -> GridFunction {
        self.eval_scaled(x, spec, 1.0, 1.0)
    }

    /// The map followed by the dilation `b ↦ θb` (weight `√|θ|`) and the
    /// Fourier transform with kernel `e^{+i(au + bw)}`; the result lives on
    /// `spec` and intertwines the superoperators with [`ncqm_ops`].
    pub fn intertwining_map(&self, x: &FockOperator, spec: GridSpec, theta: f64) -> Result<GridFunction> {
        if theta == 0.0 {
            return Err(Error::ZeroTheta);
        }
        let g = self.eval_scaled(x, spec.dual(), theta, theta.abs().sqrt());
        Ok(inv_fourier(&g))
    }
}

/// `e^{-i(xQ+yP)}` on the `dim`-level truncation by scaling and squaring a
/// Taylor series.
pub fn expm_displacement(dim: usize, x: f64, y: f64) -> Result<DMatrix<C64>> {
    let (q, p) = base_qp(dim)?;
    let a = (q * C64::new(x, 0.0) + p * C64::new(y, 0.0)) * C64::new(0.0, -1.0);
    Ok(expm(&a))
}

/// Dense matrix exponential (scaling and squaring, degree-20 Taylor).
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let norm = a.iter().map(|v| v.norm()).fold(0.0, f64::max) * a.nrows() as f64;
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let b = a * C64::new(0.5f64.powi(s), 0.0);
    let n = a.nrows();
    let mut term = DMatrix::<C64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=20 {
        term = &term * &b * C64::new(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Generalized Laguerre polynomial `L_n^{(k)}(t)` by recurrence.
fn laguerre(n: usize, k: f64, t: f64) -> f64 {
    let (mut l0, mut l1) = (1.0, 1.0 + k - t);
    if n == 0 {
        return l0;
    }
    for j in 1..n {
        let j = j as f64;
        let l2 = ((2.0 * j + 1.0 + k - t) * l1 - (j + k) * l0) / (j + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

/// `⟨n| e^{-i(xQ+yP)} |m⟩` from the closed form of the displacement operator
/// with `α = (y - ix)/√2`.
pub fn displacement_element(n: usize, m: usize, x: f64, y: f64) -> C64 {
    let alpha = C64::new(y, -x) * std::f64::consts::FRAC_1_SQRT_2;
    let t = alpha.norm_sqr();
    let (hi, lo, a) = if n >= m { (n, m, alpha) } else { (m, n, -alpha.conj()) };
    let mut ratio = 1.0;
    for j in lo + 1..=hi {
        ratio /= j as f64;
    }
    a.powu((hi - lo) as u32) * (ratio.sqrt() * (-t / 2.0).exp() * laguerre(lo, (hi - lo) as f64, t))
}

/// Per-pair relative residuals of the intertwining relations for one probe.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EquivalenceEntry {
    pub probe_id: usize,
    pub pair: String,
    /// the plain map, expected to fail
    pub literal: f64,
    /// the map composed with dilation and Fourier transform
    pub composite: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EquivalenceReport {
    pub dim: usize,
    pub entries: Vec<EquivalenceEntry>,
}

impl EquivalenceReport {
    pub fn max_composite(&self) -> f64 {
        self.entries.iter().map(|e| e.composite).fold(0.0, f64::max)
    }

    pub fn max_literal(&self) -> f64 {
        self.entries.iter().map(|e| e.literal).fold(0.0, f64::max)
    }
}

/// Standard low-level probes: `|0⟩⟨0|`, `|1⟩⟨0|`, `|0⟩⟨2|` and a seeded
/// random operator on levels `< 3`.
pub fn standard_probes(dim: usize, seed: u64) -> Vec<FockOperator> {
    vec![
        FockOperator::unit(dim, 0, 0),
        FockOperator::unit(dim, 1, 0),
        FockOperator::unit(dim, 0, 2),
        FockOperator::random_low(dim, 3, seed),
    ]
}

/// Compare `𝒲(Ô X)` with `Õ(𝒲X)` for each superoperator and probe.
pub fn equivalence_check(
    theta: f64,
    dim: usize,
    spec: GridSpec,
    probes: &[FockOperator],
) -> Result<EquivalenceReport> {
    let engine = WignerEngine::new(dim, DEFAULT_OVERSAMPLE)?;
    let hs = HsOps::new(theta, dim)?;
    let grid_ops = ncqm_ops(1.0, theta);
    let mut entries = Vec::new();
    for (pid, x) in probes.iter().enumerate() {
        let x = x.resized(dim);
        let base = engine.intertwining_map(&x, spec, theta)?;
        let lit = engine.wigner_map(&x, spec);
        for op in HsOp::ALL {
            let ox = hs.apply(op, &x);
            let grid_op = grid_ops.get(op.label()).expect("grid operator present");
            let lhs = engine.intertwining_map(&ox, spec, theta)?;
            let composite = lhs.sub(&grid_op.apply(&base)).norm() / base.norm();
            let lhs_lit = engine.wigner_map(&ox, spec);
            let literal = lhs_lit.sub(&grid_op.apply(&lit)).norm() / lit.norm();
            entries.push(EquivalenceEntry { probe_id: pid, pair: op.label().into(), literal, composite });
        }
    }
    Ok(EquivalenceReport { dim, entries })
}

/// Gram-matrix isometry defect `max |⟨𝒲X,𝒲Y⟩ - Tr(X†Y)|` over probe pairs.
pub fn isometry_defect(engine: &WignerEngine, spec: GridSpec, probes: &[FockOperator]) -> f64 {
    let maps: Vec<GridFunction> = probes.iter().map(|x| engine.wigner_map(&x.resized(engine.dim), spec)).collect();
    let mut worst = 0.0f64;
    for (i, x) in probes.iter().enumerate() {
        for (j, y) in probes.iter().enumerate() {
            let d = maps[i].inner_unchecked(&maps[j]) - x.hs_inner(y);
            worst = worst.max(d.norm());
        }
    }
    worst
}

/// `𝒲(|0⟩⟨0|)(x, y) = (2π)^{-1/2} e^{-(x²+y²)/4}`.
pub fn vacuum_profile(x: f64, y: f64) -> f64 {
    (-(x * x + y * y) / 4.0).exp() / (2.0 * PI).sqrt()
}
