//! Homogeneous harmonic polynomials `T̃_n = Re (x₁ + i x₂)^n` and
//! `Ũ_n = Im (x₁ + i x₂)^n`, i.e. `r^n cos(nφ)` and `r^n sin(nφ)`.

use super::Poly;

fn pair(n: u32) -> (Poly, Poly) {
    let (x1, x2) = (Poly::x1(), Poly::x2());
    let (mut t, mut u) = (Poly::one(), Poly::zero());
    for _ in 0..n {
        let next_t = &(&x1 * &t) - &(&x2 * &u);
        let next_u = &(&x2 * &t) + &(&x1 * &u);
        t = next_t;
        u = next_u;
    }
    (t, u)
}

/// `T̃_n`; even in `n`.
pub fn tcheb(n: i64) -> Poly {
    pair(n.unsigned_abs() as u32).0
}

/// `Ũ_n`; odd in `n`.
pub fn ucheb(n: i64) -> Poly {
    let u = pair(n.unsigned_abs() as u32).1;
    if n < 0 {
        -u
    } else {
        u
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MultiIndex;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn binomial(n: u32, k: u32) -> BigInt {
        (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
    }

    /// Σ over even (odd) i of (−1)^{⌊i/2⌋} C(n, i) x₁^{n−i} x₂^i.
    fn binomial_sum(n: u32, odd: bool) -> Poly {
        let mut p = Poly::zero();
        for i in (0..=n).filter(|i| (i % 2 == 1) == odd) {
            let sign = if (i / 2) % 2 == 0 { 1 } else { -1 };
            p.add_term(MultiIndex::new(n - i, i), BigRational::from_integer(binomial(n, i) * sign));
        }
        p
    }

    #[test]
    fn low_orders() {
        assert_eq!(tcheb(0), Poly::one());
        assert!(ucheb(0).is_zero());
        assert_eq!(tcheb(1), Poly::x1());
        assert_eq!(ucheb(1), Poly::x2());
        assert_eq!(tcheb(2), Poly::from_int_terms(&[(2, 0, 1), (0, 2, -1)]));
        assert_eq!(ucheb(2), Poly::from_int_terms(&[(1, 1, 2)]));
    }

    #[test]
    fn negative_index_parity() {
        for n in 0..8 {
            assert_eq!(tcheb(-n), tcheb(n));
            assert_eq!(ucheb(-n), -ucheb(n));
        }
    }

    #[test]
    fn matches_binomial_formula_and_is_harmonic() {
        for n in 1..=16u32 {
            let (t, u) = (tcheb(n as i64), ucheb(n as i64));
            assert_eq!(t, binomial_sum(n, false));
            assert_eq!(u, binomial_sum(n, true));
            assert!(t.laplacian().is_zero() && u.laplacian().is_zero());
            assert_eq!(t.homogeneous_degree(), Some(n));
            assert_eq!(u.homogeneous_degree(), Some(n));
            assert!(t.div_r2().is_none() && u.div_r2().is_none());
        }
    }

    #[test]
    fn rotation_identity() {
        // T̃_n(Rᵀx) = cos(nθ) T̃_n + sin(nθ) Ũ_n, compared in polar form
        for n in 1..=8i64 {
            for k in 0..32 {
                let th = 0.2 + k as f64 * 0.19;
                let (c, s) = (th.cos(), th.sin());
                let rotated = tcheb(n).compose_linear(&[[c, s], [-s, c]]);
                for (x1, x2) in [(0.3f64, -0.8f64), (1.1, 0.4), (-0.6, -0.2)] {
                    let (r, phi) = ((x1 * x1 + x2 * x2).sqrt(), f64::atan2(x2, x1));
                    let polar = r.powi(n as i32) * (n as f64 * (phi - th)).cos();
                    let combo = (n as f64 * th).cos() * tcheb(n).eval(x1, x2)
                        + (n as f64 * th).sin() * ucheb(n).eval(x1, x2);
                    assert!((rotated.eval(x1, x2) - polar).abs() < 1e-12);
                    assert!((rotated.eval(x1, x2) - combo).abs() < 1e-12);
                }
            }
        }
    }
}
