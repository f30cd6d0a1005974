//! Unipotent 7x7 / 8x8 representations of the doubly and triply extended
//! translation groups, their nilpotent Lie algebras, and the factorization
//! `δ(s) M(g) = h δ(s')` through the abelian subgroup and the coset section
//! used to induce representations.
//!
//! Algebra coefficients use the basis order `x1..x4 = p1, p2, q1, q2` followed
//! by the central directions `θ, φ[, ψ]`.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;

use crate::group::{Arity, Extension, TransElement};
use crate::{Error, Result};

/// Dense row-major square matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqMat<const N: usize>(pub [[f64; N]; N]);

pub type Mat7 = SqMat<7>;
pub type Mat8 = SqMat<8>;

impl<const N: usize> SqMat<N> {
    pub fn zeros() -> Self {
        Self([[0.0; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = 1.0;
        }
        m
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self(self.0.map(|r| r.map(|x| k * x)))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..N {
            for j in 0..N {
                d = d.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        d
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_diff(&Self::zeros())
    }

    pub fn is_unit_upper_triangular(&self) -> bool {
        (0..N).all(|i| self.0[i][i] == 1.0 && (0..i).all(|j| self.0[i][j] == 0.0))
    }

    pub fn is_strictly_upper_triangular(&self) -> bool {
        (0..N).all(|i| (0..=i).all(|j| self.0[i][j] == 0.0))
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::identity(), |acc, _| acc * *self)
    }

    /// Exponential of a nilpotent matrix; the series stops at order `N - 1`.
    pub fn exp_nilpotent(&self) -> Self {
        let mut out = Self::identity();
        let mut term = Self::identity();
        for k in 1..N {
            term = (term * *self).scaled(1.0 / k as f64);
            out = out + term;
        }
        out
    }

    /// Logarithm of a unipotent matrix via the terminating series in `M - I`.
    pub fn log_unipotent(&self) -> Self {
        let x = *self - Self::identity();
        let mut out = Self::zeros();
        let mut term = Self::identity();
        for k in 1..N {
            term = term * x;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            out = out + term.scaled(sign / k as f64);
        }
        out
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(N, N, |i, j| self.0[i][j])
    }

    pub fn from_dmatrix(m: &DMatrix<f64>) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)])))
    }

    /// Inverse by LU solve against the identity.
    pub fn inverse_lu(&self) -> Result<Self> {
        let lu = self.to_dmatrix().lu();
        let inv = lu.solve(&DMatrix::identity(N, N)).ok_or(Error::Singular)?;
        Ok(Self::from_dmatrix(&inv))
    }
}

impl<const N: usize> Mul for SqMat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl<const N: usize> Add for SqMat<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])))
    }
}

impl<const N: usize> Sub for SqMat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])))
    }
}

impl<const N: usize> std::fmt::Display for SqMat<N> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for row in &self.0 {
            let line: Vec<String> = row.iter().map(|x| format!("{x:e}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Parse a whitespace-separated matrix, one row per line.
pub fn parse_matrix<const N: usize>(text: &str) -> Result<SqMat<N>> {
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| Error::Invalid(format!("{t}: {e}"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.len() != N || rows.iter().any(|r| r.len() != N) {
        return Err(Error::Invalid(format!("expected a {N}x{N} matrix")));
    }
    Ok(SqMat(std::array::from_fn(|i| std::array::from_fn(|j| rows[i][j]))))
}

fn double_entries(m: &mut Mat7, e: &Extension, x: &[f64; 6]) {
    let (a, b) = (0.5 * e.alpha, 0.5 * e.beta);
    let [p1, p2, q1, q2, th, ph] = *x;
    m.0[0][2] = -a * p1;
    m.0[0][3] = -a * p2;
    m.0[0][4] = a * q1;
    m.0[0][5] = a * q2;
    m.0[0][6] = th;
    m.0[1][4] = -b * p2;
    m.0[1][5] = b * p1;
    m.0[1][6] = ph;
    m.0[2][6] = q1;
    m.0[3][6] = q2;
    m.0[4][6] = p1;
    m.0[5][6] = p2;
}

fn triple_entries(m: &mut Mat8, e: &Extension, x: &[f64; 7]) {
    let (a, b, c) = (0.5 * e.alpha, 0.5 * e.beta, 0.5 * e.gamma);
    let [p1, p2, q1, q2, th, ph, ps] = *x;
    m.0[0][3] = -a * p1;
    m.0[0][4] = -a * p2;
    m.0[0][5] = a * q1;
    m.0[0][6] = a * q2;
    m.0[0][7] = th;
    m.0[1][5] = -b * p2;
    m.0[1][6] = b * p1;
    m.0[1][7] = ph;
    m.0[2][3] = -c * q2;
    m.0[2][4] = c * q1;
    m.0[2][7] = ps;
    m.0[3][7] = q1;
    m.0[4][7] = q2;
    m.0[5][7] = p1;
    m.0[6][7] = p2;
}

pub fn mat7_of(g: &TransElement) -> Result<Mat7> {
    g.require(Arity::Double)?;
    let mut m = Mat7::identity();
    double_entries(&mut m, &g.ext, &[g.p[0], g.p[1], g.q[0], g.q[1], g.theta(), g.phi()]);
    Ok(m)
}

pub fn mat8_of(g: &TransElement) -> Result<Mat8> {
    g.require(Arity::Triple)?;
    let mut m = Mat8::identity();
    triple_entries(&mut m, &g.ext, &[g.p[0], g.p[1], g.q[0], g.q[1], g.theta(), g.phi(), g.psi()]);
    Ok(m)
}

/// Algebra element `Σ xᵏ Xₖ` of the doubly extended algebra.
pub fn algebra_mat7(x: &[f64; 6], ext: &Extension) -> Mat7 {
    let mut m = Mat7::zeros();
    double_entries(&mut m, ext, x);
    m
}

/// Algebra element `Σ xᵏ Xₖ` of the triply extended algebra.
pub fn algebra_mat8(x: &[f64; 7], ext: &Extension) -> Mat8 {
    let mut m = Mat8::zeros();
    triple_entries(&mut m, ext, x);
    m
}

/// Coordinates `(p1, p2, q1, q2, θ, φ)` of a group element, matching the
/// algebra basis order.
pub fn algebra_coords7(g: &TransElement) -> [f64; 6] {
    [g.p[0], g.p[1], g.q[0], g.q[1], g.theta(), g.phi()]
}

pub fn algebra_coords8(g: &TransElement) -> [f64; 7] {
    [g.p[0], g.p[1], g.q[0], g.q[1], g.theta(), g.phi(), g.psi()]
}

/// Names of the basis elements in coefficient order.
pub const BASIS_NAMES: [&str; 7] = ["Q1", "Q2", "P1", "P2", "Theta", "Phi", "Psi"];

fn read_coeffs7(m: &Mat7) -> [f64; 6] {
    [m.0[4][6], m.0[5][6], m.0[2][6], m.0[3][6], m.0[0][6], m.0[1][6]]
}

fn read_coeffs8(m: &Mat8) -> [f64; 7] {
    [m.0[5][7], m.0[6][7], m.0[3][7], m.0[4][7], m.0[0][7], m.0[1][7], m.0[2][7]]
}

/// One entry `[X_i, X_j] = Σ c_k X_k` (zero-based indices, `i < j`).
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<f64>,
}

/// Commutators of all basis pairs, re-expressed in the basis. A commutator
/// that does not rebuild exactly from its read-off coefficients is an error.
#[allow(clippy::needless_range_loop)]
pub fn structure_constants(ext: &Extension) -> Result<Vec<Bracket>> {
    let dim = ext.phase_count() + 4;
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let coeffs = match ext.arity {
                Arity::Double => {
                    let basis = |k: usize| algebra_mat7(&std::array::from_fn(|l| (l == k) as u8 as f64), ext);
                    let c = basis(i).commutator(&basis(j));
                    let x = read_coeffs7(&c);
                    if algebra_mat7(&x, ext).max_abs_diff(&c) != 0.0 {
                        return Err(Error::BasisReexpression(format!("[{},{}]", BASIS_NAMES[i], BASIS_NAMES[j])));
                    }
                    x.to_vec()
                }
                Arity::Triple => {
                    let basis = |k: usize| algebra_mat8(&std::array::from_fn(|l| (l == k) as u8 as f64), ext);
                    let c = basis(i).commutator(&basis(j));
                    let x = read_coeffs8(&c);
                    if algebra_mat8(&x, ext).max_abs_diff(&c) != 0.0 {
                        return Err(Error::BasisReexpression(format!("[{},{}]", BASIS_NAMES[i], BASIS_NAMES[j])));
                    }
                    x.to_vec()
                }
                Arity::Single => return Err(Error::Arity { expected: 2, got: 1 }),
            };
            out.push(Bracket { i, j, coeffs });
        }
    }
    Ok(out)
}

/// The nonzero brackets of the extended algebras, in the same form as
/// [`structure_constants`]: `[P_i, Q_i] = α Θ`, `[Q1, Q2] = β Φ` and, for the
/// triple extension, `[P1, P2] = γ Ψ`.
pub fn expected_brackets(ext: &Extension) -> Vec<Bracket> {
    let dim = ext.phase_count() + 4;
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let mut c = vec![0.0; dim];
            match (i, j) {
                // [Q1,P1] = -[P1,Q1]
                (0, 2) | (1, 3) => c[4] = -ext.alpha,
                (0, 1) => c[5] = ext.beta,
                (2, 3) if ext.arity == Arity::Triple => c[6] = ext.gamma,
                _ => {}
            }
            out.push(Bracket { i, j, coeffs: c });
        }
    }
    out
}

/// Abelian subgroup element: `h(θ, φ, q1, q2)` for the double extension.
pub fn subgroup_mat7(h: &[f64; 4], ext: &Extension) -> Mat7 {
    let [th, ph, q1, q2] = *h;
    let mut m = Mat7::identity();
    m.0[0][4] = 0.5 * ext.alpha * q1;
    m.0[0][5] = 0.5 * ext.alpha * q2;
    m.0[0][6] = th;
    m.0[1][6] = ph;
    m.0[2][6] = q1;
    m.0[3][6] = q2;
    m
}

/// Abelian subgroup element `h(θ, φ, ψ, p1, q2)` for the triple extension.
pub fn subgroup_mat8(h: &[f64; 5], ext: &Extension) -> Mat8 {
    let [th, ph, ps, p1, q2] = *h;
    let mut m = Mat8::identity();
    m.0[0][3] = -0.5 * ext.alpha * p1;
    m.0[0][6] = 0.5 * ext.alpha * q2;
    m.0[0][7] = th;
    m.0[1][6] = 0.5 * ext.beta * p1;
    m.0[1][7] = ph;
    m.0[2][3] = -0.5 * ext.gamma * q2;
    m.0[2][7] = ps;
    m.0[4][7] = q2;
    m.0[5][7] = p1;
    m
}

/// Section `δ(s1, s2)` for the double extension.
pub fn section_mat7(s: [f64; 2], ext: &Extension) -> Mat7 {
    let mut m = Mat7::identity();
    m.0[0][2] = -0.5 * ext.alpha * s[0];
    m.0[0][3] = -0.5 * ext.alpha * s[1];
    m.0[1][4] = -0.5 * ext.beta * s[1];
    m.0[1][5] = 0.5 * ext.beta * s[0];
    m.0[4][6] = s[0];
    m.0[5][6] = s[1];
    m
}

/// Section `δ(r1, s2)` for the triple extension.
pub fn section_mat8(s: [f64; 2], ext: &Extension) -> Mat8 {
    let [r1, s2] = s;
    let mut m = Mat8::identity();
    m.0[0][4] = -0.5 * ext.alpha * s2;
    m.0[0][5] = 0.5 * ext.alpha * r1;
    m.0[1][5] = -0.5 * ext.beta * s2;
    m.0[2][4] = 0.5 * ext.gamma * r1;
    m.0[3][7] = r1;
    m.0[6][7] = s2;
    m
}

/// Solution of `δ(s) M(g) = h δ(s_out)`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Factorization {
    /// `(θ, φ, q1, q2)` for the double extension, `(θ, φ, ψ, p1, q2)` for the triple.
    pub h: Vec<f64>,
    pub s_out: [f64; 2],
    /// Largest entry of `δ(s) M(g) - h δ(s_out)`.
    pub residual: f64,
}

/// Closed-form solution of the factorization.
pub fn master_closed_form(s: [f64; 2], g: &TransElement) -> Result<Factorization> {
    let e = g.ext;
    let ([q1, q2], [p1, p2]) = (g.q, g.p);
    match e.arity {
        Arity::Double => {
            let [s1, s2] = s;
            let c = g.theta() - e.alpha * (q1 * (s1 + 0.5 * p1) + q2 * (s2 + 0.5 * p2));
            let d = g.phi() - 0.5 * e.beta * (p1 * s2 - p2 * s1);
            let h = vec![c, d, q1, q2];
            let s_out = [p1 + s1, p2 + s2];
            let lhs = section_mat7(s, &e) * mat7_of(g)?;
            let rhs = subgroup_mat7(&[c, d, q1, q2], &e) * section_mat7(s_out, &e);
            Ok(Factorization { h, s_out, residual: lhs.max_abs_diff(&rhs) })
        }
        Arity::Triple => {
            let [r1, s2] = s;
            let (al, be, ga) = (e.alpha, e.beta, e.gamma);
            let c = g.theta() - al * q2 * s2 + al * p1 * r1 + 0.5 * al * q1 * p1 - 0.5 * al * q2 * p2;
            let d = g.phi() - be * p1 * s2 - 0.5 * be * p1 * p2;
            let ee = g.psi() + ga * q2 * r1 + 0.5 * ga * q1 * q2;
            let h = [c, d, ee, p1, q2];
            let s_out = [r1 + q1, s2 + p2];
            let lhs = section_mat8(s, &e) * mat8_of(g)?;
            let rhs = subgroup_mat8(&h, &e) * section_mat8(s_out, &e);
            Ok(Factorization { h: h.to_vec(), s_out, residual: lhs.max_abs_diff(&rhs) })
        }
        Arity::Single => Err(Error::Arity { expected: 2, got: 1 }),
    }
}

/// Generic route: read `s_out` from the coordinate column of `δ(s) M(g)`, strip
/// the section by an LU solve, and read the subgroup parameters off the rest.
pub fn master_factorize(s: [f64; 2], g: &TransElement) -> Result<Factorization> {
    let e = g.ext;
    let out = match e.arity {
        Arity::Double => {
            let prod = section_mat7(s, &e) * mat7_of(g)?;
            let s_out = [prod.0[4][6], prod.0[5][6]];
            let h_mat = right_divide(&prod, &section_mat7(s_out, &e))?;
            let h = [h_mat.0[0][6], h_mat.0[1][6], h_mat.0[2][6], h_mat.0[3][6]];
            let rebuilt = subgroup_mat7(&h, &e);
            let residual = rebuilt.max_abs_diff(&h_mat).max(
                (rebuilt * section_mat7(s_out, &e)).max_abs_diff(&prod),
            );
            Factorization { h: h.to_vec(), s_out, residual }
        }
        Arity::Triple => {
            let prod = section_mat8(s, &e) * mat8_of(g)?;
            let s_out = [prod.0[3][7], prod.0[6][7]];
            let h_mat = right_divide(&prod, &section_mat8(s_out, &e))?;
            let h = [h_mat.0[0][7], h_mat.0[1][7], h_mat.0[2][7], h_mat.0[5][7], h_mat.0[4][7]];
            let rebuilt = subgroup_mat8(&h, &e);
            let residual = rebuilt.max_abs_diff(&h_mat).max(
                (rebuilt * section_mat8(s_out, &e)).max_abs_diff(&prod),
            );
            Factorization { h: h.to_vec(), s_out, residual }
        }
        Arity::Single => return Err(Error::Arity { expected: 2, got: 1 }),
    };
    if out.residual > 1e-10 {
        return Err(Error::Factorization(out.residual));
    }
    Ok(out)
}

/// `A B⁻¹`, via the transposed system `Bᵀ Xᵀ = Aᵀ`.
fn right_divide<const N: usize>(a: &SqMat<N>, b: &SqMat<N>) -> Result<SqMat<N>> {
    let bt = b.to_dmatrix().transpose();
    let xt = bt.lu().solve(&a.to_dmatrix().transpose()).ok_or(Error::Singular)?;
    Ok(SqMat::from_dmatrix(&xt.transpose()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nilpotent_exp_log_roundtrip() {
        let e = Extension::double(1.3, -0.7);
        let x = algebra_mat7(&[0.3, -1.0, 2.0, 0.5, 1.1, -0.4], &e);
        assert!(x.is_strictly_upper_triangular());
        assert_eq!(x.pow(7).max_abs(), 0.0);
        let g = x.exp_nilpotent();
        assert!(g.is_unit_upper_triangular());
        assert!(g.log_unipotent().max_abs_diff(&x) < 1e-15);
    }

    #[test]
    fn parse_rejects_ragged() {
        assert!(parse_matrix::<2>("1 0\n0").is_err());
        let m = parse_matrix::<2>("# c\n1 2\n3 4\n").unwrap();
        assert_eq!(m.0[1][0], 3.0);
    }
}
