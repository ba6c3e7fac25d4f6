//! RBF-FD weights with polyharmonic splines `φ(r) = r^p` and polynomial
//! augmentation.

use nalgebra::{DMatrix, DVector};

use super::Stencil;
use crate::error::{Error, Result};
use crate::poly::{monomials_up_to, MultiIndex};

/// `c · u₁^i u₂^j s^{e/2}` with `s = u₁² + u₂²`.
#[derive(Clone, Copy, Debug)]
struct Term {
    c: f64,
    i: u32,
    j: u32,
    e: i32,
}

fn diff(terms: &[Term], axis: usize) -> Vec<Term> {
    let mut out = Vec::new();
    for t in terms {
        let (pow, other) = if axis == 0 { (t.i, t.j) } else { (t.j, t.i) };
        if pow > 0 {
            let (i, j) = if axis == 0 { (pow - 1, other) } else { (other, pow - 1) };
            out.push(Term { c: t.c * pow as f64, i, j, e: t.e });
        }
        if t.e != 0 {
            // d/du s^{e/2} = e · u · s^{(e-2)/2}
            let (i, j) = if axis == 0 { (t.i + 1, t.j) } else { (t.i, t.j + 1) };
            out.push(Term { c: t.c * t.e as f64, i, j, e: t.e - 2 });
        }
    }
    out
}

/// `∂^α r^p` evaluated at `u`.
///
/// At `u = 0` the derivative is homogeneous of degree `p − |α|`: it vanishes
/// when that degree is positive, is taken as `0` when the degree is zero and
/// the derivative is odd, and is an error otherwise.
fn radial_derivative(p: u32, alpha: MultiIndex, u: (f64, f64)) -> Result<f64> {
    let mut terms = vec![Term { c: 1.0, i: 0, j: 0, e: p as i32 }];
    for _ in 0..alpha.a1 {
        terms = diff(&terms, 0);
    }
    for _ in 0..alpha.a2 {
        terms = diff(&terms, 1);
    }
    let s = u.0 * u.0 + u.1 * u.1;
    if s == 0.0 {
        let degree = p as i64 - alpha.order() as i64;
        return if degree > 0 || (degree == 0 && alpha.order() % 2 == 1) {
            Ok(0.0)
        } else {
            Err(Error::OrderTooHigh(format!(
                "∂^({},{}) r^{p} is singular at the stencil center",
                alpha.a1, alpha.a2
            )))
        };
    }
    Ok(terms
        .iter()
        .map(|t| t.c * u.0.powi(t.i as i32) * u.1.powi(t.j as i32) * s.powf(t.e as f64 / 2.0))
        .sum())
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// RBF-FD weights for `∂^α` at the origin from the given nodes.
///
/// The weights make the approximation exact on `r^p` centered at every node
/// and on all monomials of degree `≤ poly_degree`.
pub fn rbf_fd_weights(nodes: &[(f64, f64)], alpha: MultiIndex, exponent: u32, poly_degree: u32) -> Result<Vec<f64>> {
    let n = nodes.len();
    let monos = monomials_up_to(poly_degree);
    let m = monos.len();
    let phi = |a: (f64, f64), b: (f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt().powi(exponent as i32);
    let mut a = DMatrix::zeros(n + m, n + m);
    let mut rhs = DVector::zeros(n + m);
    for (r, &xr) in nodes.iter().enumerate() {
        for (c, &xc) in nodes.iter().enumerate() {
            a[(r, c)] = phi(xr, xc);
        }
        for (k, mono) in monos.iter().enumerate() {
            let v = xr.0.powi(mono.a1 as i32) * xr.1.powi(mono.a2 as i32);
            a[(r, n + k)] = v;
            a[(n + k, r)] = v;
        }
        // ∂^α_x φ(‖x − x_r‖) at x = 0
        rhs[r] = radial_derivative(exponent, alpha, (-xr.0, -xr.1))?;
    }
    for (k, mono) in monos.iter().enumerate() {
        if *mono == alpha {
            rhs[n + k] = factorial(alpha.a1) * factorial(alpha.a2);
        }
    }
    let sol = a
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SingularSystem("RBF-FD saddle system is singular".into()))?;
    let resid = (&a * &sol - &rhs).amax();
    let scale = sol.amax().max(rhs.amax()).max(1.0);
    if !resid.is_finite() || resid > 1e-8 * scale {
        return Err(Error::SingularSystem(format!("RBF-FD solve residual {resid:.2e}")));
    }
    Ok(sol.rows(0, n).iter().copied().collect())
}

/// RBF-FD stencil on the regular `size × size` grid.
pub fn rbf_fd_stencil(alpha: MultiIndex, size: usize, exponent: u32, poly_degree: u32) -> Result<Stencil> {
    Stencil::check_size(size)?;
    let nodes: Vec<(f64, f64)> =
        (0..size * size).map(|n| Stencil::offset(size, n / size, n % size)).collect();
    let w = rbf_fd_weights(&nodes, alpha, exponent, poly_degree)?;
    Ok(Stencil { size, weights: w })
}
