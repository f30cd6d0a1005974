//! Composition laws of the extended Galilei group and of the centrally
//! extended translation groups of R^4, plus local exponents (2-cocycles)
//! and numerical checks of the cocycle axioms.
//!
//! Translation-group elements use the coordinate order `(q1, q2, p1, p2)`
//! whenever they are flattened to a 4-vector.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub(crate) fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// `a ∧ b = a1 b2 - a2 b1`
pub(crate) fn wedge(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn rotate(angle: f64, v: [f64; 2]) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn scale(k: f64, a: [f64; 2]) -> [f64; 2] {
    [k * a[0], k * a[1]]
}

/// Mass and second extension constant of the Galilei group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GalileiParams {
    pub m: f64,
    pub lambda: f64,
}

impl GalileiParams {
    pub fn new(m: f64, lambda: f64) -> Result<Self> {
        if !(m > 0.0) {
            return Err(Error::NonPositiveMass);
        }
        Ok(Self { m, lambda })
    }

    /// Build from the noncommutativity parameter, `lambda = m^2 theta`.
    pub fn from_theta(m: f64, theta: f64) -> Result<Self> {
        Self::new(m, m * m * theta)
    }

    pub fn theta(&self) -> f64 {
        self.lambda / (self.m * self.m)
    }
}

/// Element `(theta, phi, R, b, v, a)` of the doubly extended Galilei group.
/// The rotation is stored as an angle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GalileiElement {
    pub theta: f64,
    pub phi: f64,
    pub angle: f64,
    pub b: f64,
    pub v: [f64; 2],
    pub a: [f64; 2],
}

impl GalileiElement {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn translation(a: [f64; 2]) -> Self {
        Self { a, ..Self::default() }
    }

    pub fn boost(v: [f64; 2]) -> Self {
        Self { v, ..Self::default() }
    }

    pub fn rotation_matrix(&self) -> [[f64; 2]; 2] {
        let (s, c) = self.angle.sin_cos();
        [[c, -s], [s, c]]
    }

    /// Componentwise distance, with the angle compared modulo 2π.
    pub fn distance(&self, other: &Self) -> f64 {
        let d_angle = (self.angle - other.angle).rem_euclid(std::f64::consts::TAU);
        let d_angle = d_angle.min(std::f64::consts::TAU - d_angle);
        [
            self.theta - other.theta,
            self.phi - other.phi,
            d_angle,
            self.b - other.b,
            self.v[0] - other.v[0],
            self.v[1] - other.v[1],
            self.a[0] - other.a[0],
            self.a[1] - other.a[1],
        ]
        .iter()
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
    }
}

/// Mass cocycle `(m/2)(a·Rv' - v·Ra' + b' v·Rv')`.
pub fn galilei_cocycle1(r: &GalileiElement, r2: &GalileiElement, m: f64) -> f64 {
    let rv2 = rotate(r.angle, r2.v);
    let ra2 = rotate(r.angle, r2.a);
    0.5 * m * (dot(r.a, rv2) - dot(r.v, ra2) + r2.b * dot(r.v, rv2))
}

/// Second cocycle `(λ/2) v ∧ Rv'`.
pub fn galilei_cocycle2(r: &GalileiElement, r2: &GalileiElement, lambda: f64) -> f64 {
    0.5 * lambda * wedge(r.v, rotate(r.angle, r2.v))
}

/// Product of the underlying (unextended) Galilei elements; phases are summed
/// without cocycle corrections.
fn compose_plain(g: &GalileiElement, g2: &GalileiElement) -> GalileiElement {
    GalileiElement {
        theta: g.theta + g2.theta,
        phi: g.phi + g2.phi,
        angle: g.angle + g2.angle,
        b: g.b + g2.b,
        v: add(g.v, rotate(g.angle, g2.v)),
        a: add(add(g.a, rotate(g.angle, g2.a)), scale(g2.b, g.v)),
    }
}

pub fn compose_galilei(
    g: &GalileiElement,
    g2: &GalileiElement,
    params: &GalileiParams,
) -> GalileiElement {
    let mut out = compose_plain(g, g2);
    out.theta += galilei_cocycle1(g, g2, params.m);
    out.phi += galilei_cocycle2(g, g2, params.lambda);
    out
}

/// Inverse obtained by solving `g ∘ x = e` component by component: first the
/// rotation, time, velocity and position parts, then the two phases.
pub fn inverse_galilei(g: &GalileiElement, params: &GalileiParams) -> GalileiElement {
    let angle = -g.angle;
    let b = -g.b;
    // v + R v' = 0
    let v = scale(-1.0, rotate(angle, g.v));
    // a + R a' + v b' = 0
    let a = rotate(angle, scale(-1.0, add(g.a, scale(b, g.v))));
    let mut x = GalileiElement { theta: 0.0, phi: 0.0, angle, b, v, a };
    x.theta = -g.theta - galilei_cocycle1(g, &x, params.m);
    x.phi = -g.phi - galilei_cocycle2(g, &x, params.lambda);
    x
}

/// Number of central phases carried by a translation-group extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Single = 1,
    Double = 2,
    Triple = 3,
}

/// Extension constants; unused constants are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extension {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub arity: Arity,
}

impl Extension {
    pub fn single(alpha: f64) -> Self {
        Self { alpha, beta: 0.0, gamma: 0.0, arity: Arity::Single }
    }

    pub fn double(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta, gamma: 0.0, arity: Arity::Double }
    }

    pub fn triple(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma, arity: Arity::Triple }
    }

    pub fn phase_count(&self) -> usize {
        self.arity as usize
    }
}

/// Element `(θ[, φ[, ψ]], q, p)` of a centrally extended translation group.
/// Phases beyond the arity stay zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransElement {
    pub phases: [f64; 3],
    pub q: [f64; 2],
    pub p: [f64; 2],
    pub ext: Extension,
}

impl TransElement {
    pub fn identity(ext: Extension) -> Self {
        Self { phases: [0.0; 3], q: [0.0; 2], p: [0.0; 2], ext }
    }

    pub fn new(ext: Extension, phases: &[f64], q: [f64; 2], p: [f64; 2]) -> Result<Self> {
        if phases.len() != ext.phase_count() {
            return Err(Error::Arity { expected: ext.phase_count(), got: phases.len() });
        }
        let mut ph = [0.0; 3];
        ph[..phases.len()].copy_from_slice(phases);
        Ok(Self { phases: ph, q, p, ext })
    }

    pub fn double(alpha: f64, beta: f64, theta: f64, phi: f64, q: [f64; 2], p: [f64; 2]) -> Self {
        Self { phases: [theta, phi, 0.0], q, p, ext: Extension::double(alpha, beta) }
    }

    pub fn triple(
        ext: [f64; 3],
        phases: [f64; 3],
        q: [f64; 2],
        p: [f64; 2],
    ) -> Self {
        Self { phases, q, p, ext: Extension::triple(ext[0], ext[1], ext[2]) }
    }

    pub fn theta(&self) -> f64 {
        self.phases[0]
    }

    pub fn phi(&self) -> f64 {
        self.phases[1]
    }

    pub fn psi(&self) -> f64 {
        self.phases[2]
    }

    /// `(q1, q2, p1, p2)`
    pub fn coords(&self) -> [f64; 4] {
        [self.q[0], self.q[1], self.p[0], self.p[1]]
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.phases
            .iter()
            .zip(other.phases.iter())
            .map(|(a, b)| a - b)
            .chain(self.coords().iter().zip(other.coords().iter()).map(|(a, b)| a - b))
            .fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    pub(crate) fn require(&self, arity: Arity) -> Result<()> {
        if self.ext.arity != arity {
            return Err(Error::Arity { expected: arity as usize, got: self.ext.phase_count() });
        }
        Ok(())
    }
}

/// Composition for any arity. Phases pick up `α ξ`, `β ξ'`, `γ ξ''`.
pub fn compose_trans(g: &TransElement, g2: &TransElement) -> Result<TransElement> {
    if g.ext.arity != g2.ext.arity {
        return Err(Error::Arity { expected: g.ext.phase_count(), got: g2.ext.phase_count() });
    }
    if g.ext != g2.ext {
        return Err(Error::ExtensionMismatch);
    }
    let (a, b) = (g.coords(), g2.coords());
    let e = g.ext;
    let mut phases = [0.0; 3];
    phases[0] = g.phases[0] + g2.phases[0] + e.alpha * xi(&a, &b);
    if e.phase_count() >= 2 {
        phases[1] = g.phases[1] + g2.phases[1] + e.beta * xi_prime(&a, &b);
    }
    if e.phase_count() == 3 {
        phases[2] = g.phases[2] + g2.phases[2] + e.gamma * xi_double_prime(&a, &b);
    }
    Ok(TransElement { phases, q: add(g.q, g2.q), p: add(g.p, g2.p), ext: e })
}

pub fn compose_double(g: &TransElement, g2: &TransElement) -> Result<TransElement> {
    g.require(Arity::Double)?;
    g2.require(Arity::Double)?;
    compose_trans(g, g2)
}

pub fn compose_triple(g: &TransElement, g2: &TransElement) -> Result<TransElement> {
    g.require(Arity::Triple)?;
    g2.require(Arity::Triple)?;
    compose_trans(g, g2)
}

/// All three exponents vanish on `(g, -g)`, so the inverse just negates.
pub fn inverse_trans(g: &TransElement) -> TransElement {
    TransElement {
        phases: g.phases.map(|x| -x),
        q: g.q.map(|x| -x),
        p: g.p.map(|x| -x),
        ext: g.ext,
    }
}

fn xi(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    0.5 * (a[0] * b[2] + a[1] * b[3] - a[2] * b[0] - a[3] * b[1])
}

fn xi_prime(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    0.5 * (a[2] * b[3] - a[3] * b[2])
}

fn xi_double_prime(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    0.5 * (a[0] * b[1] - a[1] * b[0])
}

/// A local exponent on one of the groups.
#[derive(Debug, Clone)]
pub enum LocalExponent {
    /// `½(⟨q,p'⟩ - ⟨p,q'⟩)`
    Xi,
    /// `½ p ∧ p'`
    XiPrime,
    /// `½ q ∧ q'`
    XiDoublePrime,
    /// `xᵀ M x'` on flattened `(q1, q2, p1, p2)`.
    Bilinear([[f64; 4]; 4]),
    /// Arbitrary function of the flattened coordinates.
    Custom(fn(&[f64; 4], &[f64; 4]) -> f64),
    /// Galilei mass cocycle with the given `m`.
    GalileiMass(f64),
    /// Galilei second cocycle with the given `λ`.
    GalileiPlane(f64),
    Combination(Vec<(f64, LocalExponent)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Domain {
    Translation,
    Galilei,
}

impl LocalExponent {
    fn domain(&self) -> Result<Domain> {
        match self {
            Self::GalileiMass(_) | Self::GalileiPlane(_) => Ok(Domain::Galilei),
            Self::Combination(terms) => {
                let mut found = None;
                for (_, t) in terms {
                    let d = t.domain()?;
                    if found.is_some_and(|f| f != d) {
                        return Err(Error::Invalid(
                            "combination mixes Galilei and translation exponents".into(),
                        ));
                    }
                    found = Some(d);
                }
                Ok(found.unwrap_or(Domain::Translation))
            }
            _ => Ok(Domain::Translation),
        }
    }

    fn eval_trans(&self, a: &[f64; 4], b: &[f64; 4]) -> Result<f64> {
        Ok(match self {
            Self::Xi => xi(a, b),
            Self::XiPrime => xi_prime(a, b),
            Self::XiDoublePrime => xi_double_prime(a, b),
            Self::Bilinear(m) => {
                let mut s = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        s += a[i] * m[i][j] * b[j];
                    }
                }
                s
            }
            Self::Custom(f) => f(a, b),
            Self::Combination(terms) => {
                let mut s = 0.0;
                for (c, t) in terms {
                    s += c * t.eval_trans(a, b)?;
                }
                s
            }
            Self::GalileiMass(_) | Self::GalileiPlane(_) => {
                return Err(Error::Invalid("Galilei exponent evaluated on translation elements".into()))
            }
        })
    }

    fn eval_galilei(&self, r: &GalileiElement, r2: &GalileiElement) -> Result<f64> {
        Ok(match self {
            Self::GalileiMass(m) => galilei_cocycle1(r, r2, *m),
            Self::GalileiPlane(l) => galilei_cocycle2(r, r2, *l),
            Self::Combination(terms) => {
                let mut s = 0.0;
                for (c, t) in terms {
                    s += c * t.eval_galilei(r, r2)?;
                }
                s
            }
            _ => {
                return Err(Error::Invalid("translation exponent evaluated on Galilei elements".into()))
            }
        })
    }
}

/// Evaluate a translation-group exponent; only `q` and `p` are read.
pub fn evaluate_exponent(xi: &LocalExponent, g: &TransElement, g2: &TransElement) -> Result<f64> {
    xi.eval_trans(&g.coords(), &g2.coords())
}

pub fn evaluate_galilei_exponent(
    xi: &LocalExponent,
    r: &GalileiElement,
    r2: &GalileiElement,
) -> Result<f64> {
    xi.eval_galilei(r, r2)
}

/// Exact evaluation for the bilinear translation exponents. `Custom` terms
/// are rejected; float coefficients are converted exactly.
pub fn evaluate_exponent_exact(
    xi: &LocalExponent,
    a: &[BigRational; 4],
    b: &[BigRational; 4],
) -> Result<BigRational> {
    let half = BigRational::new(1.into(), 2.into());
    let exact = |x: f64| {
        BigRational::from_float(x).ok_or_else(|| Error::Invalid(format!("non-finite coefficient {x}")))
    };
    Ok(match xi {
        LocalExponent::Xi => {
            half * (&a[0] * &b[2] + &a[1] * &b[3] - &a[2] * &b[0] - &a[3] * &b[1])
        }
        LocalExponent::XiPrime => half * (&a[2] * &b[3] - &a[3] * &b[2]),
        LocalExponent::XiDoublePrime => half * (&a[0] * &b[1] - &a[1] * &b[0]),
        LocalExponent::Bilinear(m) => {
            let mut s = BigRational::from_integer(0.into());
            for i in 0..4 {
                for j in 0..4 {
                    s += &a[i] * exact(m[i][j])? * &b[j];
                }
            }
            s
        }
        LocalExponent::Combination(terms) => {
            let mut s = BigRational::from_integer(0.into());
            for (c, t) in terms {
                s += exact(*c)? * evaluate_exponent_exact(t, a, b)?;
            }
            s
        }
        _ => return Err(Error::Invalid("no exact path for this exponent".into())),
    })
}

/// Largest absolute residuals of the local-exponent axioms.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AxiomReport {
    /// `ξ(g'',g') + ξ(g''g',g) - ξ(g'',g'g) - ξ(g',g)`
    pub cocycle: f64,
    /// `ξ(g,e)` and `ξ(e,g)`
    pub identity: f64,
    /// `ξ(g,g⁻¹) - ξ(g⁻¹,g)`
    pub inverse: f64,
}

impl AxiomReport {
    pub fn max(&self) -> f64 {
        self.cocycle.max(self.identity).max(self.inverse)
    }
}

fn sample4(rng: &mut ChaCha8Rng) -> [f64; 4] {
    std::array::from_fn(|_| rng.random_range(-2.0..2.0))
}

pub(crate) fn sample_galilei(rng: &mut ChaCha8Rng) -> GalileiElement {
    GalileiElement {
        theta: rng.random_range(-2.0..2.0),
        phi: rng.random_range(-2.0..2.0),
        angle: rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
        b: rng.random_range(-2.0..2.0),
        v: [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)],
        a: [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)],
    }
}

/// Random element of a translation group; components uniform in [-2, 2).
pub fn sample_trans(rng: &mut ChaCha8Rng, ext: Extension) -> TransElement {
    let x = sample4(rng);
    let mut phases = [0.0; 3];
    for ph in phases.iter_mut().take(ext.phase_count()) {
        *ph = rng.random_range(-2.0..2.0);
    }
    TransElement { phases, q: [x[0], x[1]], p: [x[2], x[3]], ext }
}

/// Evaluate the cocycle axioms on `samples` random triples drawn from the
/// underlying group (R^4 under addition, or the unextended Galilei group).
pub fn check_exponent_axioms(xi: &LocalExponent, samples: usize, seed: u64) -> Result<AxiomReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = AxiomReport { cocycle: 0.0, identity: 0.0, inverse: 0.0 };
    match xi.domain()? {
        Domain::Translation => {
            let e = [0.0; 4];
            let sum = |a: &[f64; 4], b: &[f64; 4]| -> [f64; 4] { std::array::from_fn(|i| a[i] + b[i]) };
            for _ in 0..samples {
                let (g, g1, g2) = (sample4(&mut rng), sample4(&mut rng), sample4(&mut rng));
                let lhs = xi.eval_trans(&g2, &g1)? + xi.eval_trans(&sum(&g2, &g1), &g)?;
                let rhs = xi.eval_trans(&g2, &sum(&g1, &g))? + xi.eval_trans(&g1, &g)?;
                rep.cocycle = rep.cocycle.max((lhs - rhs).abs());
                rep.identity = rep
                    .identity
                    .max(xi.eval_trans(&g, &e)?.abs())
                    .max(xi.eval_trans(&e, &g)?.abs());
                let gi = g.map(|x| -x);
                rep.inverse = rep.inverse.max((xi.eval_trans(&g, &gi)? - xi.eval_trans(&gi, &g)?).abs());
            }
        }
        Domain::Galilei => {
            // phases do not enter the cocycles; the plain product suffices
            let e = GalileiElement::identity();
            let none = GalileiParams { m: 1.0, lambda: 0.0 };
            for _ in 0..samples {
                let (g, g1, g2) =
                    (sample_galilei(&mut rng), sample_galilei(&mut rng), sample_galilei(&mut rng));
                let lhs = xi.eval_galilei(&g2, &g1)? + xi.eval_galilei(&compose_plain(&g2, &g1), &g)?;
                let rhs = xi.eval_galilei(&g2, &compose_plain(&g1, &g))? + xi.eval_galilei(&g1, &g)?;
                rep.cocycle = rep.cocycle.max((lhs - rhs).abs());
                rep.identity = rep
                    .identity
                    .max(xi.eval_galilei(&g, &e)?.abs())
                    .max(xi.eval_galilei(&e, &g)?.abs());
                let gi = inverse_galilei(&g, &none);
                rep.inverse =
                    rep.inverse.max((xi.eval_galilei(&g, &gi)? - xi.eval_galilei(&gi, &g)?).abs());
            }
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct WitnessReport {
    /// `max |d(g,g') + d(g',g)|` for `d = ξ_a - ξ_b`
    pub antisymmetry: f64,
    /// `max |d(g,g')|`
    pub witness: f64,
    /// `d` vanished on every sample
    pub degenerate: bool,
}

/// Seed of the fixed sample set used by [`antisymmetry_witness`].
pub const WITNESS_SEED: u64 = 0x5eed_0003;

/// For an abelian group a nonzero antisymmetric difference of two exponents
/// cannot be a coboundary (coboundaries are symmetric), so the exponents are
/// inequivalent.
pub fn antisymmetry_witness(
    xi_a: &LocalExponent,
    xi_b: &LocalExponent,
    samples: usize,
) -> Result<WitnessReport> {
    let diff = LocalExponent::Combination(vec![(1.0, xi_a.clone()), (-1.0, xi_b.clone())]);
    if diff.domain()? != Domain::Translation {
        return Err(Error::Invalid("witness defined for translation exponents".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED);
    let mut rep = WitnessReport { antisymmetry: 0.0, witness: 0.0, degenerate: false };
    for _ in 0..samples {
        let (g, g1) = (sample4(&mut rng), sample4(&mut rng));
        let d = diff.eval_trans(&g, &g1)?;
        rep.antisymmetry = rep.antisymmetry.max((d + diff.eval_trans(&g1, &g)?).abs());
        rep.witness = rep.witness.max(d.abs());
    }
    rep.degenerate = rep.witness == 0.0;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_from_lambda() {
        let p = GalileiParams::from_theta(2.0, 0.3).unwrap();
        assert!((p.lambda - 1.2).abs() < 1e-15);
        assert!((p.theta() * 4.0 - p.lambda).abs() < 1e-15);
        assert_eq!(GalileiParams::new(0.0, 1.0), Err(Error::NonPositiveMass));
    }

    #[test]
    fn rotation_helpers() {
        let v = rotate(std::f64::consts::FRAC_PI_2, [1.0, 0.0]);
        assert!(v[0].abs() < 1e-16 && (v[1] - 1.0).abs() < 1e-16);
        assert_eq!(wedge([1.0, 0.0], [0.0, 1.0]), 1.0);
    }

    #[test]
    fn combination_domain_mismatch() {
        let mixed = LocalExponent::Combination(vec![(1.0, LocalExponent::Xi), (1.0, LocalExponent::GalileiMass(1.0))]);
        assert!(check_exponent_axioms(&mixed, 1, 0).is_err());
    }
}
