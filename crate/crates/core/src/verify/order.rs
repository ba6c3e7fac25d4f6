//! Empirical convergence order of 1-D finite-difference weights.

use crate::error::{Error, Result};

/// Step sizes `2⁻³ … 2⁻⁷` used for the fit.
pub const ORDER_STEPS: [f64; 5] = [0.125, 0.0625, 0.03125, 0.015625, 0.0078125];

/// Least-squares slope of `log(error)` against `log(h)` for the `m`-th
/// derivative at 0 of `exp`, from weights placed at `h · points`.
pub fn fd_order_estimate(weights: &[f64], points: &[f64], m: u32) -> Result<f64> {
    fd_order_estimate_with(weights, points, m, f64::exp, 1.0)
}

/// As [`fd_order_estimate`] for a test function `f` whose `m`-th derivative at
/// 0 is `exact`.
pub fn fd_order_estimate_with(weights: &[f64], points: &[f64], m: u32, f: impl Fn(f64) -> f64, exact: f64) -> Result<f64> {
    if weights.len() != points.len() || weights.is_empty() {
        return Err(Error::DimensionMismatch(format!("{} weights for {} points", weights.len(), points.len())));
    }
    let mut logs = Vec::with_capacity(ORDER_STEPS.len());
    for &h in &ORDER_STEPS {
        let approx: f64 = weights.iter().zip(points).map(|(w, x)| w * f(h * x)).sum::<f64>() / h.powi(m as i32);
        let err = (approx - exact).abs();
        if !(err > 0.0 && err.is_finite()) {
            return Err(Error::DegenerateFit(format!("error {err:e} at h = {h}")));
        }
        logs.push((h.ln(), err.ln()));
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::fd_coefficients;

    #[test]
    fn classical_orders() {
        let central = fd_order_estimate(&[1.0, -2.0, 1.0], &[-1.0, 0.0, 1.0], 2).unwrap();
        assert!((1.8..=2.2).contains(&central), "{central}");
        let forward = fd_order_estimate(&[-1.0, 1.0], &[0.0, 1.0], 1).unwrap();
        assert!((forward - 1.0).abs() < 0.1, "{forward}");
        let pts = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let five = fd_order_estimate(&fd_coefficients(&pts, 1).unwrap(), &pts, 1).unwrap();
        assert!((five - 4.0).abs() < 0.2, "{five}");
    }

    #[test]
    fn exact_rule_is_degenerate() {
        // the central difference is exact on quadratics
        let r = fd_order_estimate_with(&[1.0, -2.0, 1.0], &[-1.0, 0.0, 1.0], 2, |x| x * x, 2.0);
        assert!(matches!(r, Err(Error::DegenerateFit(_))));
    }
}
