//! Numerical check of the steerability constraint
//! `P((g⁻¹)ᵀx) = ρ_out(g) P(x) ρ_in(g)⁻¹`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, Rep};
use crate::poly::{monomials_up_to, MultiIndex, PolyMatrix};

/// Matrix of `p ↦ p(Ax)` on coefficient vectors over
/// [`monomials_up_to`]`(max_degree)`.
pub fn monomial_action(a: &[[f64; 2]; 2], max_degree: u32) -> DMatrix<f64> {
    let monos = monomials_up_to(max_degree);
    let index = |m: MultiIndex| {
        let n = m.order() as usize;
        n * (n + 1) / 2 + m.a2 as usize
    };
    let size = monos.len();
    let mut out = DMatrix::zeros(size, size);
    // homogeneous polynomials of degree n stored by the power of x₂
    let times_linear = |p: &[f64], c1: f64, c2: f64| {
        let mut q = vec![0.0; p.len() + 1];
        for (i, v) in p.iter().enumerate() {
            q[i] += v * c1;
            q[i + 1] += v * c2;
        }
        q
    };
    for &alpha in &monos {
        let mut p = vec![1.0];
        for _ in 0..alpha.a1 {
            p = times_linear(&p, a[0][0], a[0][1]);
        }
        for _ in 0..alpha.a2 {
            p = times_linear(&p, a[1][0], a[1][1]);
        }
        let n = alpha.order();
        for (a2, v) in p.iter().enumerate() {
            if *v != 0.0 {
                out[(index(MultiIndex::new(n - a2 as u32, a2 as u32)), index(alpha))] = *v;
            }
        }
    }
    out
}

/// Coefficients of every entry as columns of a `monomials × (rows·cols)` matrix.
fn coefficient_columns(p: &PolyMatrix, max_degree: u32) -> DMatrix<f64> {
    let monos = monomials_up_to(max_degree);
    let cols: Vec<Vec<f64>> = p.entries().iter().map(|e| e.coeff_vector(&monos)).collect();
    DMatrix::from_fn(monos.len(), cols.len(), |i, j| cols[j][i])
}

/// `max_g ‖P((g⁻¹)ᵀ·) − ρ_out(g) P ρ_in(g)⁻¹‖` over polynomial
/// coefficients (max-abs), for the given group elements.
pub fn residual_over(
    p: &PolyMatrix,
    rep_in: &Rep,
    rep_out: &Rep,
    elements: &[GroupElement],
) -> Result<f64> {
    if p.rows() != rep_out.dim() || p.cols() != rep_in.dim() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial matrix is {}x{}, reps need {}x{}",
            p.rows(),
            p.cols(),
            rep_out.dim(),
            rep_in.dim()
        )));
    }
    let deg = p.degree().max(0) as u32;
    let coeffs = coefficient_columns(p, deg);
    let (rows, cols) = (p.rows(), p.cols());
    let mut worst: f64 = 0.0;
    for g in elements {
        let m = g.matrix();
        // (g⁻¹)ᵀ, which equals g for the orthogonal groups in scope
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let inv_t = [[m[1][1] / det, -m[1][0] / det], [-m[0][1] / det, m[0][0] / det]];
        let lhs = monomial_action(&inv_t, deg) * &coeffs;
        let r_out = rep_out.matrix(g)?;
        let r_in_inv = rep_in.matrix(&g.inverse())?;
        for i in 0..rows {
            for j in 0..cols {
                let mut diff = lhs.column(i * cols + j).into_owned();
                for k in 0..rows {
                    for l in 0..cols {
                        let w = r_out[(i, k)] * r_in_inv[(l, j)];
                        if w != 0.0 {
                            diff -= coeffs.column(k * cols + l) * w;
                        }
                    }
                }
                worst = worst.max(diff.amax());
            }
        }
    }
    Ok(worst)
}

/// Steerability residual over all elements of a finite group, or over the
/// `sample_count` equispaced samples of SO(2)/O(2).
pub fn steerability_residual(p: &PolyMatrix, rep_in: &Rep, rep_out: &Rep, group: &GroupSpec) -> Result<f64> {
    residual_over(p, rep_in, rep_out, &group.elements())
}
