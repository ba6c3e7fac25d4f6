//! Finite-difference weights from exact Vandermonde moment systems.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{OrderCap, Stencil};
use crate::error::{Error, Result};
use crate::poly::{rational, rational_from_f64, rational_to_f64, MultiIndex};

/// Weights `w` with `Σ w_n x_n^j = m!·[j = m]` for `j < N`, solved exactly.
pub fn fd_coefficients_exact(points: &[BigRational], m: usize) -> Result<Vec<BigRational>> {
    let n = points.len();
    if n == 0 || m >= n {
        return Err(Error::OrderTooHigh(format!("derivative order {m} needs at least {} points, got {n}", m + 1)));
    }
    // augmented system, rows j = 0..n
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = points.iter().map(|x| num_traits::pow(x.clone(), j)).collect();
            let rhs = if j == m { factorial(m) } else { BigRational::zero() };
            row.push(rhs);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::SingularSystem("finite-difference points must be distinct".into()))?;
        a.swap(col, pivot);
        let inv = BigRational::one() / a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, p) in a[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &f * p;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n].clone()).collect())
}

fn factorial(m: usize) -> BigRational {
    (1..=m as i64).fold(BigRational::one(), |acc, k| acc * rational(k, 1))
}

/// Finite-difference weights for the `m`-th derivative at 0 from samples at
/// `points` (grid spacing 1).
pub fn fd_coefficients(points: &[f64], m: usize) -> Result<Vec<f64>> {
    let exact: Vec<BigRational> = points.iter().map(|&p| rational_from_f64(p)).collect();
    Ok(fd_coefficients_exact(&exact, m)?.iter().map(rational_to_f64).collect())
}

/// Centered integer offsets `-(k-1)/2 ..= (k-1)/2`.
pub fn centered_points(size: usize) -> Vec<f64> {
    let c = (size / 2) as i64;
    (-c..=c).map(|v| v as f64).collect()
}

/// Outer product of centered 1-D finite differences along each axis.
pub fn fd_stencil_2d(alpha: MultiIndex, size: usize, cap: OrderCap) -> Result<Stencil> {
    Stencil::check_size(size)?;
    let too_high = match cap {
        OrderCap::PerAxis => alpha.a1 as usize >= size || alpha.a2 as usize >= size,
        OrderCap::Total(max) => alpha.order() > max || alpha.a1 as usize >= size || alpha.a2 as usize >= size,
    };
    if too_high {
        return Err(Error::OrderTooHigh(format!(
            "∂^({},{}) cannot be discretized on a {size}x{size} stencil with {cap:?}",
            alpha.a1, alpha.a2
        )));
    }
    let pts = centered_points(size);
    let w1 = fd_coefficients(&pts, alpha.a1 as usize)?;
    let w2 = fd_coefficients(&pts, alpha.a2 as usize)?;
    let c = size / 2;
    // row i sits at x₂ = c - i, i.e. point index (size - 1 - i) in `pts`
    Ok(Stencil::from_fn(size, |i, j| w1[j] * w2[2 * c - i]))
}
