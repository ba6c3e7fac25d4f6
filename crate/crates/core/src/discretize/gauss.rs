//! Sampled derivatives of a Gaussian kernel.

use std::f64::consts::PI;

use super::Stencil;
use crate::error::{Error, Result};
use crate::poly::MultiIndex;

/// Probabilists' Hermite polynomial `He_n(x)`.
fn hermite(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `dⁿ/dxⁿ exp(−x²/2σ²) = (−1/σ)ⁿ Heₙ(x/σ) exp(−x²/2σ²)`.
fn gaussian_1d_derivative(n: u32, x: f64, sigma: f64) -> f64 {
    (-1.0 / sigma).powi(n as i32) * hermite(n, x / sigma) * (-x * x / (2.0 * sigma * sigma)).exp()
}

/// `∂^α G(x; σ)` with `G = exp(−|x|²/2σ²) / (2πσ²)`.
pub fn gaussian_derivative(alpha: MultiIndex, x1: f64, x2: f64, sigma: f64) -> f64 {
    gaussian_1d_derivative(alpha.a1, x1, sigma) * gaussian_1d_derivative(alpha.a2, x2, sigma)
        / (2.0 * PI * sigma * sigma)
}

/// `∂^α G` sampled on the stencil grid, without renormalization.
pub fn gauss_stencil(alpha: MultiIndex, size: usize, sigma: f64) -> Result<Stencil> {
    Stencil::check_size(size)?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
    }
    Ok(Stencil::from_fn(size, |i, j| {
        let (x1, x2) = Stencil::offset(size, i, j);
        gaussian_derivative(alpha, x1, x2, sigma)
    }))
}
