//! Coadjoint action of the extended translation groups on dual coordinates
//! `(X1..X6)` or `(X1..X7)`, its invariants and orbit representatives.
//!
//! Group parameters enter through `a1..a4 = p1, p2, q1, q2`.

use nalgebra::{DMatrix, DVector};

use crate::group::{Arity, Extension, TransElement};
use crate::matrix::{mat7_of, mat8_of, Mat7, Mat8};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DualVector {
    pub x: Vec<f64>,
}

impl DualVector {
    pub fn new(x: &[f64]) -> Result<Self> {
        if x.len() != 6 && x.len() != 7 {
            return Err(Error::Invalid(format!("dual vector of length {}", x.len())));
        }
        Ok(Self { x: x.to_vec() })
    }

    pub fn arity(&self) -> Arity {
        if self.x.len() == 6 {
            Arity::Double
        } else {
            Arity::Triple
        }
    }

    fn check(&self, ext: &Extension) -> Result<()> {
        if self.arity() != ext.arity {
            return Err(Error::Arity { expected: ext.phase_count(), got: self.x.len() - 4 });
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.x.iter().zip(&other.x).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Orbit label: the values of the central coordinates.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct OrbitLabel {
    pub rho: f64,
    pub sigma: f64,
    pub tau: Option<f64>,
}

pub fn invariants(f: &DualVector) -> OrbitLabel {
    OrbitLabel { rho: f.x[4], sigma: f.x[5], tau: f.x.get(6).copied() }
}

fn a_params(g: &TransElement) -> [f64; 4] {
    [g.p[0], g.p[1], g.q[0], g.q[1]]
}

/// Closed-form action. The central coordinates are copied unchanged.
pub fn coadjoint_act(g: &TransElement, f: &DualVector) -> Result<DualVector> {
    f.check(&g.ext)?;
    let [a1, a2, a3, a4] = a_params(g);
    let (ha, hb, hc) = (0.5 * g.ext.alpha, 0.5 * g.ext.beta, 0.5 * g.ext.gamma);
    let x = &f.x;
    let mut y = x.clone();
    match g.ext.arity {
        Arity::Double => {
            y[0] = x[0] - ha * a3 * x[4] + hb * a2 * x[5];
            y[1] = x[1] - ha * a4 * x[4] - hb * a1 * x[5];
            y[2] = x[2] + ha * a1 * x[4];
            y[3] = x[3] + ha * a2 * x[4];
        }
        Arity::Triple => {
            y[0] = x[0] - ha * a3 * x[4];
            y[1] = x[1] - ha * a4 * x[4];
            y[2] = x[2] + ha * a1 * x[4] + hc * a4 * x[6];
            y[3] = x[3] + ha * a2 * x[4] - hc * a3 * x[6];
        }
        Arity::Single => unreachable!("dual vectors have arity 2 or 3"),
    }
    Ok(DualVector { x: y })
}

/// Lower-triangular matrix form of a dual vector (double extension).
pub fn dual_matrix7(f: &DualVector) -> Mat7 {
    let x = &f.x;
    let mut m = Mat7::zeros();
    m.0[6][..6].copy_from_slice(&[x[4], x[5], x[2], x[3], x[0], x[1]]);
    m
}

/// Lower-triangular matrix form of a dual vector (triple extension); the
/// first two coordinates sit in column 0 scaled by `-2/α`.
pub fn dual_matrix8(f: &DualVector, ext: &Extension) -> Mat8 {
    let x = &f.x;
    let mut m = Mat8::zeros();
    m.0[3][0] = -2.0 / ext.alpha * x[0];
    m.0[4][0] = -2.0 / ext.alpha * x[1];
    m.0[7][..5].copy_from_slice(&[x[4], x[5], x[6], x[2], x[3]]);
    m
}

/// Read the coordinates back out of a conjugated dual matrix.
fn extract7(m: &Mat7) -> DualVector {
    let r = &m.0[6];
    DualVector { x: vec![r[4], r[5], r[2], r[3], r[0], r[1]] }
}

fn extract8(m: &Mat8, ext: &Extension) -> DualVector {
    let r = &m.0[7];
    let k = -0.5 * ext.alpha;
    DualVector { x: vec![k * m.0[3][0], k * m.0[4][0], r[3], r[4], r[0], r[1], r[2]] }
}

/// Conjugate the matrix form by `M(g)`, read off the designated entries and
/// compare with [`coadjoint_act`].
pub fn coadjoint_matrix_check(g: &TransElement, f: &DualVector) -> Result<f64> {
    let closed = coadjoint_act(g, f)?;
    let inv = crate::group::inverse_trans(g);
    let conj = match g.ext.arity {
        Arity::Double => extract7(&(mat7_of(g)? * dual_matrix7(f) * mat7_of(&inv)?)),
        Arity::Triple => {
            extract8(&(mat8_of(g)? * dual_matrix8(f, &g.ext) * mat8_of(&inv)?), &g.ext)
        }
        Arity::Single => return Err(Error::Arity { expected: 2, got: 1 }),
    };
    Ok(conj.max_abs_diff(&closed))
}

/// Jacobian of `a ↦ (X1', .., X4')` with respect to `(a1..a4)`. The map is
/// affine in `a`, so unit probes give it exactly.
pub fn orbit_jacobian(f: &DualVector, ext: &Extension) -> Result<DMatrix<f64>> {
    f.check(ext)?;
    let at = |a: [f64; 4]| -> Result<Vec<f64>> {
        let g = TransElement { phases: [0.0; 3], q: [a[2], a[3]], p: [a[0], a[1]], ext: *ext };
        Ok(coadjoint_act(&g, f)?.x[..4].to_vec())
    };
    let base = at([0.0; 4])?;
    let mut j = DMatrix::zeros(4, 4);
    for k in 0..4 {
        let mut a = [0.0; 4];
        a[k] = 1.0;
        let col = at(a)?;
        for i in 0..4 {
            j[(i, k)] = col[i] - base[i];
        }
    }
    Ok(j)
}

/// Numerical rank from singular values, relative threshold `rel_tol`.
pub fn numeric_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0f64, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Group element moving `f` to `(0, 0, 0, 0, ρ, σ[, τ])`.
pub fn orbit_zero_section(f: &DualVector, ext: &Extension) -> Result<TransElement> {
    f.check(ext)?;
    let label = invariants(f);
    if label.rho == 0.0 {
        return Err(Error::DegenerateOrbit("rho"));
    }
    if label.sigma == 0.0 {
        return Err(Error::DegenerateOrbit("sigma"));
    }
    if label.tau == Some(0.0) {
        return Err(Error::DegenerateOrbit("tau"));
    }
    let j = orbit_jacobian(f, ext)?;
    let rhs = DVector::from_iterator(4, f.x[..4].iter().map(|x| -x));
    let a = j.lu().solve(&rhs).ok_or(Error::Singular)?;
    Ok(TransElement { phases: [0.0; 3], q: [a[2], a[3]], p: [a[0], a[1]], ext: *ext })
}
