//! Brute-force solution of the steerability constraint as a linear system
//! over monomial coefficients; an independent check on the tables.

use nalgebra::DMatrix;

use crate::basis::monomial_action;
use crate::error::{Error, Result};
use crate::group::{GroupSpec, Rep};
use crate::linalg::{max_principal_angle, null_space};
use crate::poly::{monomials_up_to, rational_from_f64, Poly, PolyMatrix};

/// Largest order accepted by the brute-force oracle.
pub const ORACLE_MAX_ORDER: u32 = 4;

/// Orthonormal null-space basis (columns) of the constraint system, in the
/// coefficient layout of [`PolyMatrix::coeff_vector`] over
/// `monomials_up_to(max_order)`.
pub fn brute_force_span(group: &GroupSpec, rep_in: &Rep, rep_out: &Rep, max_order: u32) -> Result<DMatrix<f64>> {
    if max_order > ORACLE_MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "brute-force oracle supports order ≤ {ORACLE_MAX_ORDER}, got {max_order}"
        )));
    }
    let m = monomials_up_to(max_order).len();
    let (c_out, c_in) = (rep_out.dim(), rep_in.dim());
    let n = c_out * c_in * m;
    let elems = group.elements();
    let mut system = DMatrix::zeros(elems.len() * n, n);
    for (gi, g) in elems.iter().enumerate() {
        let a = g.matrix();
        // orthogonal group: (g⁻¹)ᵀ = g
        let action = monomial_action(&a, max_order);
        let r_out = rep_out.matrix(g)?;
        let r_in_inv = rep_in.matrix(&g.inverse())?;
        let base = gi * n;
        for i in 0..c_out {
            for j in 0..c_in {
                let row0 = base + (i * c_in + j) * m;
                let col0 = (i * c_in + j) * m;
                let mut block = system.view_mut((row0, col0), (m, m));
                block += &action;
                for k in 0..c_out {
                    for l in 0..c_in {
                        let w = r_out[(i, k)] * r_in_inv[(l, j)];
                        if w == 0.0 {
                            continue;
                        }
                        let c0 = (k * c_in + l) * m;
                        for d in 0..m {
                            system[(row0 + d, c0 + d)] -= w;
                        }
                    }
                }
            }
        }
    }
    Ok(null_space(&system, 1e-9))
}

/// The null space of the constraint system as polynomial matrices (with
/// the doubles converted exactly to rationals).
pub fn brute_force_basis(group: &GroupSpec, rep_in: &Rep, rep_out: &Rep, max_order: u32) -> Result<Vec<PolyMatrix>> {
    let span = brute_force_span(group, rep_in, rep_out, max_order)?;
    let monos = monomials_up_to(max_order);
    let m = monos.len();
    let (c_out, c_in) = (rep_out.dim(), rep_in.dim());
    Ok(span
        .column_iter()
        .map(|v| {
            PolyMatrix::from_fn(c_out, c_in, |i, j| {
                let mut p = Poly::zero();
                for (d, alpha) in monos.iter().enumerate() {
                    let x = v[(i * c_in + j) * m + d];
                    if x.abs() > 1e-12 {
                        p.add_term(*alpha, rational_from_f64(x));
                    }
                }
                p
            })
        })
        .collect())
}

/// Comparison of a basis against the brute-force solution space.
#[derive(Clone, Debug)]
pub struct SpanComparison {
    pub basis_dim: usize,
    pub oracle_dim: usize,
    /// Largest principal angle, `None` when the dimensions differ.
    pub max_angle: Option<f64>,
}

impl SpanComparison {
    pub fn agrees(&self, tol: f64) -> bool {
        self.basis_dim == self.oracle_dim && self.max_angle.is_some_and(|a| a <= tol)
    }
}

/// Compares the span of `basis` with the span of `oracle`, both as orthonormalized
/// coefficient vectors over monomials of degree `≤ max_order`.
pub fn compare_spans(basis: &[PolyMatrix], oracle: &DMatrix<f64>, max_order: u32) -> SpanComparison {
    if basis.is_empty() {
        let empty = oracle.ncols() == 0;
        return SpanComparison { basis_dim: 0, oracle_dim: oracle.ncols(), max_angle: empty.then_some(0.0) };
    }
    let span = crate::basis::coefficient_span(basis, max_order);
    SpanComparison {
        basis_dim: basis.len(),
        oracle_dim: oracle.ncols(),
        max_angle: if span.ncols() == basis.len() { max_principal_angle(&span, oracle) } else { None },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let so2 = GroupSpec::so2();
        let t = Rep::trivial(so2);
        assert_eq!(brute_force_basis(&so2, &t, &t, 2).unwrap().len(), 2);
        assert_eq!(brute_force_basis(&so2, &Rep::vector(so2), &t, 1).unwrap().len(), 2);
        let c2 = GroupSpec::cyclic(2);
        let t2 = Rep::trivial(c2);
        let b = brute_force_basis(&c2, &t2, &t2, 1).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].degree(), 0);
    }
}
