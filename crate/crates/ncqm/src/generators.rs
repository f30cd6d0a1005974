//! Differential-operator realizations of the algebra generators, numerical
//! generators of one-parameter subgroups, and bracket-table verification.
//!
//! All derivatives are spectral.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{derivative, fourier_axis0, laplacian, GridFunction, GridSpec, RepParams};
use crate::{Result, C64};

type Action = dyn Fn(&GridFunction) -> GridFunction + Send + Sync;

#[derive(Clone)]
pub struct LinearOp {
    pub label: String,
    action: Arc<Action>,
}

impl fmt::Debug for LinearOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearOp({})", self.label)
    }
}

const I: C64 = C64::new(0.0, 1.0);

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

impl LinearOp {
    pub fn new(label: impl Into<String>, f: impl Fn(&GridFunction) -> GridFunction + Send + Sync + 'static) -> Self {
        Self { label: label.into(), action: Arc::new(f) }
    }

    pub fn apply(&self, f: &GridFunction) -> GridFunction {
        (self.action)(f)
    }

    pub fn identity() -> Self {
        Self::new("I", GridFunction::clone)
    }

    pub fn zero() -> Self {
        Self::new("0", |f| GridFunction::zeros(f.spec))
    }

    /// Multiplication by the coordinate along `axis`.
    pub fn coordinate(axis: usize) -> Self {
        Self::new(if axis == 0 { "x1" } else { "x2" }, move |f| {
            f.mul_fn(|x1, x2| re(if axis == 0 { x1 } else { x2 }))
        })
    }

    pub fn partial(axis: usize) -> Self {
        Self::new(if axis == 0 { "d1" } else { "d2" }, move |f| derivative(f, axis))
    }

    pub fn laplacian() -> Self {
        Self::new("lap", laplacian)
    }

    /// `Σ cₖ Aₖ`
    pub fn combination(label: impl Into<String>, terms: Vec<(C64, LinearOp)>) -> Self {
        Self::new(label, move |f| {
            let mut out = GridFunction::zeros(f.spec);
            for (c, op) in &terms {
                out = out.axpy(*c, &op.apply(f));
            }
            out
        })
    }

    pub fn scaled(&self, c: C64) -> Self {
        let op = self.clone();
        Self::new(format!("{c}*{}", self.label), move |f| op.apply(f).scale(c))
    }

    pub fn then(&self, after: &LinearOp) -> Self {
        let (a, b) = (self.clone(), after.clone());
        Self::new(format!("{}*{}", b.label, a.label), move |f| b.apply(&a.apply(f)))
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// A labelled family of operators.
#[derive(Debug, Clone, Default)]
pub struct OpSet {
    pub ops: Vec<LinearOp>,
}

impl OpSet {
    pub fn get(&self, label: &str) -> Option<&LinearOp> {
        self.ops.iter().find(|o| o.label == label)
    }

    fn op(&self, label: &str) -> LinearOp {
        if label == "I" {
            return LinearOp::identity();
        }
        self.get(label).unwrap_or_else(|| panic!("no operator {label}")).clone()
    }

    /// Replace the operator `label` by its negative (used as a negative control).
    pub fn with_flipped_sign(&self, label: &str) -> Self {
        let ops = self
            .ops
            .iter()
            .map(|o| if o.label == label { o.scaled(re(-1.0)).relabel(label) } else { o.clone() })
            .collect();
        Self { ops }
    }
}

pub fn commutator(a: &LinearOp, b: &LinearOp, f: &GridFunction) -> GridFunction {
    a.apply(&b.apply(f)).sub(&b.apply(&a.apply(f)))
}

/// `Q̃1 = x + (iθ/2)∂2`, `Q̃2 = y - (iθ/2)∂1`, `P̃ = -i∂`, `H̃ = -∇²/2m`,
/// `M̃ = -i(x∂2 - y∂1)`, `Ñ = mQ̃`. Labels `Q1 Q2 P1 P2 H M N1 N2`.
pub fn ncqm_ops(m: f64, theta: f64) -> OpSet {
    let (x, y) = (LinearOp::coordinate(0), LinearOp::coordinate(1));
    let (dx, dy) = (LinearOp::partial(0), LinearOp::partial(1));
    let q1 = LinearOp::combination("Q1", vec![(re(1.0), x.clone()), (I * (theta / 2.0), dy.clone())]);
    let q2 = LinearOp::combination("Q2", vec![(re(1.0), y.clone()), (-I * (theta / 2.0), dx.clone())]);
    let p1 = dx.scaled(-I).relabel("P1");
    let p2 = dy.scaled(-I).relabel("P2");
    let h = LinearOp::laplacian().scaled(re(-0.5 / m)).relabel("H");
    let ang = LinearOp::combination("M", vec![(-I, dy.then(&x)), (I, dx.then(&y))]);
    let n1 = q1.scaled(re(m)).relabel("N1");
    let n2 = q2.scaled(re(m)).relabel("N2");
    OpSet { ops: vec![q1, q2, p1, p2, h, ang, n1, n2] }
}

/// `Q̂1 = Q1 - (θ/2)P2`, `Q̂2 = Q2 + (θ/2)P1` from canonical position and
/// momentum. Labels `Q1 Q2 P1 P2`.
pub fn noncanonical_transform(theta: f64) -> OpSet {
    let x = LinearOp::coordinate(0);
    let y = LinearOp::coordinate(1);
    let p1 = LinearOp::partial(0).scaled(-I).relabel("P1");
    let p2 = LinearOp::partial(1).scaled(-I).relabel("P2");
    let q1 = LinearOp::combination("Q1", vec![(re(1.0), x), (re(-theta / 2.0), p2.clone())]);
    let q2 = LinearOp::combination("Q2", vec![(re(1.0), y), (re(theta / 2.0), p1.clone())]);
    OpSet { ops: vec![q1, q2, p1, p2] }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Picture {
    /// Variables of the induced representation (`s`).
    Induced,
    /// After the Fourier transform in every variable (double) or in the
    /// first one (triple, variables `(r1, s2)`).
    Transformed,
}

/// Generators of the double extension. Labels `Q1 Q2 P1 P2`.
pub fn double_ext_ops(alpha: f64, beta: f64, picture: Picture) -> OpSet {
    let (x, y) = (LinearOp::coordinate(0), LinearOp::coordinate(1));
    let (dx, dy) = (LinearOp::partial(0), LinearOp::partial(1));
    match picture {
        Picture::Induced => OpSet {
            ops: vec![
                LinearOp::combination("Q1", vec![(re(beta / 2.0), y.clone()), (I, dx.clone())]),
                LinearOp::combination("Q2", vec![(re(-beta / 2.0), x.clone()), (I, dy.clone())]),
                x.scaled(re(alpha)).relabel("P1"),
                y.scaled(re(alpha)).relabel("P2"),
            ],
        },
        Picture::Transformed => OpSet {
            ops: vec![
                LinearOp::combination("Q1", vec![(re(1.0), x), (-I * (beta / 2.0), dy.clone())]),
                LinearOp::combination("Q2", vec![(re(1.0), y), (I * (beta / 2.0), dx.clone())]),
                dx.scaled(-I * alpha).relabel("P1"),
                dy.scaled(-I * alpha).relabel("P2"),
            ],
        },
    }
}

/// Generators of the triple extension. `P̂1 = -s1`, or `-αs1` when
/// `alpha_in_p1` is set. The transformed picture is the `(r1, s2)` form in
/// which the representation acts by shifts.
pub fn triple_ext_ops(alpha: f64, beta: f64, gamma: f64, picture: Picture, alpha_in_p1: bool) -> OpSet {
    let (x, y) = (LinearOp::coordinate(0), LinearOp::coordinate(1));
    let (dx, dy) = (LinearOp::partial(0), LinearOp::partial(1));
    let k = if alpha_in_p1 { alpha } else { 1.0 };
    match picture {
        Picture::Induced => OpSet {
            ops: vec![
                LinearOp::combination("Q1", vec![(re(beta), y.clone()), (-I * alpha, dx.clone())]),
                dy.scaled(I).relabel("Q2"),
                x.scaled(re(-k)).relabel("P1"),
                LinearOp::combination("P2", vec![(re(alpha), y.clone()), (-I * gamma, dx.clone())]),
            ],
        },
        Picture::Transformed => OpSet {
            ops: vec![
                LinearOp::combination("Q1", vec![(re(beta), y.clone()), (re(-alpha), x.clone())]),
                dy.scaled(I).relabel("Q2"),
                dx.scaled(I * k).relabel("P1"),
                LinearOp::combination("P2", vec![(re(alpha), y), (re(-gamma), x)]),
            ],
        },
    }
}

/// Conjugate an operator by the partial transform in the first variable,
/// mapping the induced triple picture onto the `(r1, s2)` picture.
pub fn to_r_picture(op: &LinearOp) -> LinearOp {
    let op = op.clone();
    LinearOp::new(format!("{}~r", op.label), move |f| {
        let fhat = fourier_axis0(f, false).expect("self-dual grid");
        fourier_axis0(&op.apply(&fhat), true).expect("self-dual grid")
    })
}

/// `i [U(ε) - U(-ε)] f / 2ε` along one basis direction, optionally with one
/// Richardson step `(4 D(ε/2) - D(ε)) / 3`.
pub fn generator_from_rep(
    rep: &RepParams,
    direction: usize,
    eps: f64,
    f: &GridFunction,
    richardson: bool,
) -> Result<GridFunction> {
    let central = |e: f64| -> Result<GridFunction> {
        let plus = rep.apply_direction(direction, e, f)?;
        let minus = rep.apply_direction(direction, -e, f)?;
        Ok(plus.sub(&minus).scale(I / (2.0 * e)))
    };
    let d = central(eps)?;
    if !richardson {
        return Ok(d);
    }
    let d2 = central(eps / 2.0)?;
    Ok(d2.scale(re(4.0 / 3.0)).axpy(re(-1.0 / 3.0), &d))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Convergence {
    pub err_eps: f64,
    pub err_half: f64,
    pub order: f64,
}

/// Errors of the central difference against `analytic` at `eps` and `eps/2`
/// and the observed order.
pub fn generator_convergence(
    rep: &RepParams,
    direction: usize,
    analytic: &LinearOp,
    f: &GridFunction,
    eps: f64,
) -> Result<Convergence> {
    let exact = analytic.apply(f);
    let err = |e| -> Result<f64> { Ok(generator_from_rep(rep, direction, e, f, false)?.sub(&exact).norm() / f.norm()) };
    let (a, b) = (err(eps)?, err(eps / 2.0)?);
    Ok(Convergence { err_eps: a, err_half: b, order: (a / b).log2() })
}

/// Fixed probe set: Gaussians centred at `0` and `(1, 0.5)` with widths `1`
/// and `0.7`, each given a small seeded momentum kick, plus one
/// Hermite-modulated Gaussian.
pub fn probes(spec: GridSpec, seed: u64) -> Vec<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for c in [[0.0, 0.0], [1.0, 0.5]] {
        for w in [1.0, 0.7] {
            let k = [rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)];
            let g = GridFunction::gaussian(spec, c, w).mul_fn(|x, y| C64::from_polar(1.0, k[0] * x + k[1] * y));
            out.push(g);
        }
    }
    let herm = GridFunction::from_fn(spec, |x, y| {
        let r2 = (x - 0.3).powi(2) + (y + 0.2).powi(2);
        C64::new((4.0 * x * x - 2.0) * 2.0 * y * (-r2 / 2.0).exp(), 0.0)
    });
    let n = herm.norm();
    out.push(herm.scale(re(1.0 / n)));
    out
}

/// One expected bracket `[a, b] = Σ cₖ opₖ`; `"I"` names the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketSpec {
    pub a: String,
    pub b: String,
    pub rhs: Vec<(C64, String)>,
}

impl BracketSpec {
    pub fn new(a: &str, b: &str, rhs: &[(C64, &str)]) -> Self {
        Self { a: a.into(), b: b.into(), rhs: rhs.iter().map(|(c, s)| (*c, s.to_string())).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BracketResult {
    pub bracket: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BracketReport {
    pub results: Vec<BracketResult>,
}

impl BracketReport {
    pub fn max(&self) -> f64 {
        self.results.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn failing(&self, tol: f64) -> Vec<&str> {
        self.results.iter().filter(|r| !(r.residual < tol)).map(|r| r.bracket.as_str()).collect()
    }
}

/// Max over probes of `‖[a,b]f - rhs f‖ / ‖f‖`, per bracket.
pub fn bracket_table_check(ops: &OpSet, expected: &[BracketSpec], probes: &[GridFunction]) -> BracketReport {
    let results = expected
        .iter()
        .map(|e| {
            let (a, b) = (ops.op(&e.a), ops.op(&e.b));
            let residual = probes
                .iter()
                .map(|f| {
                    let mut rhs = GridFunction::zeros(f.spec);
                    for (c, name) in &e.rhs {
                        rhs = rhs.axpy(*c, &ops.op(name).apply(f));
                    }
                    commutator(&a, &b, f).sub(&rhs).norm() / f.norm()
                })
                .fold(0.0, f64::max);
            BracketResult { bracket: format!("[{},{}]", e.a, e.b), residual }
        })
        .collect();
    BracketReport { results }
}

/// Brackets of the extended Galilei algebra realized by [`ncqm_ops`] with
/// `λ = m²θ`.
pub fn galilei_table(m: f64, lambda: f64) -> Vec<BracketSpec> {
    let z: [(C64, &str); 0] = [];
    vec![
        BracketSpec::new("M", "N1", &[(I, "N2")]),
        BracketSpec::new("M", "N2", &[(-I, "N1")]),
        BracketSpec::new("M", "P1", &[(I, "P2")]),
        BracketSpec::new("M", "P2", &[(-I, "P1")]),
        BracketSpec::new("H", "P1", &z),
        BracketSpec::new("H", "P2", &z),
        BracketSpec::new("M", "H", &z),
        BracketSpec::new("N1", "N2", &[(I * lambda, "I")]),
        BracketSpec::new("P1", "P2", &z),
        BracketSpec::new("N1", "P1", &[(I * m, "I")]),
        BracketSpec::new("N2", "P2", &[(I * m, "I")]),
        BracketSpec::new("N1", "P2", &z),
        BracketSpec::new("N2", "P1", &z),
        BracketSpec::new("N1", "H", &[(I, "P1")]),
        BracketSpec::new("N2", "H", &[(I, "P2")]),
    ]
}

/// `[Q1,Q2] = iθ`, `[Qi,Pj] = iδij`, `[P1,P2] = 0`.
pub fn ncqm_table(theta: f64) -> Vec<BracketSpec> {
    heisenberg_table(theta, 1.0, 0.0)
}

/// `[Q1,Q2] = -iβ`, `[Qi,Pj] = iαδij`, `[P1,P2] = 0`.
pub fn double_table(alpha: f64, beta: f64) -> Vec<BracketSpec> {
    heisenberg_table(-beta, alpha, 0.0)
}

/// `[Q1,Q2] = -iβ`, `[Qi,Pj] = iαδij`, `[P1,P2] = -iγ`.
pub fn triple_table(alpha: f64, beta: f64, gamma: f64) -> Vec<BracketSpec> {
    heisenberg_table(-beta, alpha, -gamma)
}

fn heisenberg_table(qq: f64, qp: f64, pp: f64) -> Vec<BracketSpec> {
    let z: [(C64, &str); 0] = [];
    let c = |x: f64| [(I * x, "I")];
    vec![
        BracketSpec::new("Q1", "Q2", &c(qq)),
        BracketSpec::new("P1", "P2", &c(pp)),
        BracketSpec::new("Q1", "P1", &c(qp)),
        BracketSpec::new("Q2", "P2", &c(qp)),
        BracketSpec::new("Q1", "P2", &z),
        BracketSpec::new("Q2", "P1", &z),
    ]
}

/// Max relative difference of two operators over probes.
pub fn probe_distance(a: &LinearOp, b: &LinearOp, probes: &[GridFunction]) -> f64 {
    probes.iter().map(|f| a.apply(f).sub(&b.apply(f)).norm() / f.norm()).fold(0.0, f64::max)
}

/// `|⟨f|Ag⟩ - ⟨Af|g⟩|` relative to `‖f‖‖g‖`, max over probe pairs.
pub fn adjoint_defect(a: &LinearOp, probes: &[GridFunction]) -> f64 {
    let mut worst = 0.0f64;
    for f in probes {
        for g in probes {
            let d = f.inner_unchecked(&a.apply(g)) - a.apply(f).inner_unchecked(g);
            worst = worst.max(d.norm() / (f.norm() * g.norm()));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_pair() {
        let spec = GridSpec::default();
        let f = GridFunction::gaussian(spec, [0.2, -0.1], 1.0);
        let x = LinearOp::coordinate(0);
        let p = LinearOp::partial(0).scaled(-I);
        let r = commutator(&x, &p, &f).sub(&f.scale(I)).norm();
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn flipped_sign_changes_op() {
        let ops = ncqm_ops(1.0, 0.5).with_flipped_sign("P1");
        let f = GridFunction::gaussian(GridSpec::default(), [0.0, 0.0], 1.0);
        let a = ops.op("P1").apply(&f);
        let b = ncqm_ops(1.0, 0.5).op("P1").apply(&f);
        assert!(a.add(&b).norm() < 1e-14);
    }
}
