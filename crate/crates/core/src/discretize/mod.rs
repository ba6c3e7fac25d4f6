//! Discretization of polynomial PDOs into stencils on the unit grid.
//!
//! Weight `[i][j]` of a `k × k` stencil sits at the offset
//! `(x₁, x₂) = (j − c, c − i)` with `c = (k − 1)/2`: columns run along `x₁`,
//! rows run downward along `−x₂`. Stencils are applied by cross-correlation.

mod fd;
mod gauss;
mod rbf;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{rational_to_f64, MultiIndex, PolyMatrix};

pub use fd::{centered_points, fd_coefficients, fd_coefficients_exact, fd_stencil_2d};
pub use gauss::{gauss_stencil, gaussian_derivative};
pub use rbf::{rbf_fd_stencil, rbf_fd_weights};

/// A single `size × size` stencil, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Stencil {
    pub size: usize,
    pub weights: Vec<f64>,
}

impl Stencil {
    pub fn from_fn<F: FnMut(usize, usize) -> f64>(size: usize, mut f: F) -> Self {
        let mut weights = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                weights.push(f(i, j));
            }
        }
        Stencil { size, weights }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.size + j]
    }

    /// The `(x₁, x₂)` offset of cell `(i, j)`.
    pub fn offset(size: usize, i: usize, j: usize) -> (f64, f64) {
        let c = (size / 2) as f64;
        (j as f64 - c, c - i as f64)
    }

    pub(crate) fn check_size(size: usize) -> Result<()> {
        if size.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("stencil size must be odd, got {size}")));
        }
        Ok(())
    }
}

/// Limit on the derivative orders the finite-difference method accepts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OrderCap {
    /// Each of `a1`, `a2` at most `size − 1`.
    PerAxis,
    /// Additionally `a1 + a2` at most the given order.
    Total(u32),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    Fd { cap: OrderCap },
    Rbf { exponent: u32, poly_degree: u32 },
    Gauss { sigma: f64 },
}

impl Method {
    pub fn fd() -> Self {
        Method::Fd { cap: OrderCap::PerAxis }
    }

    /// `φ(r) = r³` with quadratic augmentation.
    pub fn rbf() -> Self {
        Method::Rbf { exponent: 3, poly_degree: 2 }
    }

    pub fn gauss(sigma: f64) -> Self {
        Method::Gauss { sigma }
    }

    /// `σ = 1` for 3×3 stencils and `σ = 1.3` for larger ones.
    pub fn gauss_for_size(size: usize) -> Self {
        Method::Gauss { sigma: if size <= 3 { 1.0 } else { 1.3 } }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Method::Fd { .. } => "fd",
            Method::Rbf { .. } => "rbf",
            Method::Gauss { .. } => "gauss",
        }
    }

    pub fn params_json(&self) -> Value {
        match *self {
            Method::Fd { cap: OrderCap::PerAxis } => json!({ "order_cap": "per-axis" }),
            Method::Fd { cap: OrderCap::Total(m) } => json!({ "order_cap": "total", "max_order": m }),
            Method::Rbf { exponent, poly_degree } => json!({ "exponent": exponent, "poly_degree": poly_degree }),
            Method::Gauss { sigma } => json!({ "sigma": sigma }),
        }
    }

    pub fn from_json(tag: &str, params: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("bad {tag} parameter '{what}'"));
        let uint = |key: &str, default: u32| -> Result<u32> {
            match params.get(key) {
                None => Ok(default),
                Some(v) => v.as_u64().map(|v| v as u32).ok_or_else(|| bad(key)),
            }
        };
        match tag {
            "fd" => match params.get("order_cap").and_then(Value::as_str) {
                None | Some("per-axis") => Ok(Method::fd()),
                Some("total") => Ok(Method::Fd { cap: OrderCap::Total(uint("max_order", 2)?) }),
                Some(_) => Err(bad("order_cap")),
            },
            "rbf" => Ok(Method::Rbf { exponent: uint("exponent", 3)?, poly_degree: uint("poly_degree", 2)? }),
            "gauss" => {
                let sigma = params.get("sigma").and_then(Value::as_f64).ok_or_else(|| bad("sigma"))?;
                Ok(Method::Gauss { sigma })
            }
            other => Err(Error::Parse(format!("unknown discretization method '{other}'"))),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Method::Gauss { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
                Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")))
            }
            Method::Rbf { exponent, .. } if exponent % 2 == 0 => {
                Err(Error::InvalidArgument(format!("RBF exponent must be odd, got {exponent}")))
            }
            _ => Ok(()),
        }
    }
}

/// Stencil for the single derivative `∂^α`.
pub fn stencil_for(alpha: MultiIndex, size: usize, method: &Method) -> Result<Stencil> {
    match *method {
        Method::Fd { cap } => fd_stencil_2d(alpha, size, cap),
        Method::Rbf { exponent, poly_degree } => rbf_fd_stencil(alpha, size, exponent, poly_degree),
        Method::Gauss { sigma } => gauss_stencil(alpha, size, sigma),
    }
}

/// `c_out × c_in` stencils, stored as `[o][c][i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StencilBank {
    pub c_out: usize,
    pub c_in: usize,
    pub size: usize,
    pub weights: Vec<f64>,
    pub method: Method,
}

impl StencilBank {
    pub fn zeros(c_out: usize, c_in: usize, size: usize, method: Method) -> Self {
        StencilBank { c_out, c_in, size, weights: vec![0.0; c_out * c_in * size * size], method }
    }

    fn index(&self, o: usize, c: usize, i: usize, j: usize) -> usize {
        ((o * self.c_in + c) * self.size + i) * self.size + j
    }

    pub fn get(&self, o: usize, c: usize, i: usize, j: usize) -> f64 {
        self.weights[self.index(o, c, i, j)]
    }

    pub fn set(&mut self, o: usize, c: usize, i: usize, j: usize, v: f64) {
        let k = self.index(o, c, i, j);
        self.weights[k] = v;
    }

    /// `Σ_b coeffs[b] · banks[b]`.
    pub fn combine(banks: &[StencilBank], coeffs: &[f64]) -> Result<StencilBank> {
        let first = banks.first().ok_or_else(|| Error::InvalidArgument("no stencil banks to combine".into()))?;
        if banks.len() != coeffs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} banks but {} coefficients",
                banks.len(),
                coeffs.len()
            )));
        }
        let mut out = StencilBank::zeros(first.c_out, first.c_in, first.size, first.method);
        for (b, c) in banks.iter().zip(coeffs) {
            if (b.c_out, b.c_in, b.size) != (first.c_out, first.c_in, first.size) {
                return Err(Error::DimensionMismatch("stencil banks differ in shape".into()));
            }
            for (w, v) in out.weights.iter_mut().zip(&b.weights) {
                *w += c * v;
            }
        }
        Ok(out)
    }
}

fn assemble(p: &PolyMatrix, size: usize, method: &Method, stencils: &BTreeMap<MultiIndex, Stencil>) -> StencilBank {
    let mut bank = StencilBank::zeros(p.rows(), p.cols(), size, *method);
    let kk = size * size;
    for o in 0..p.rows() {
        for c in 0..p.cols() {
            let start = (o * p.cols() + c) * kk;
            let cell = &mut bank.weights[start..start + kk];
            for (alpha, coeff) in p.get(o, c).terms() {
                let s = &stencils[alpha];
                let v = rational_to_f64(coeff);
                for (w, sv) in cell.iter_mut().zip(&s.weights) {
                    *w += v * sv;
                }
            }
        }
    }
    bank
}

/// One stencil bank per polynomial matrix: each entry `Σ c_α x^α` becomes
/// `Σ c_α · stencil(∂^α)`.
pub fn discretize_basis(elements: &[PolyMatrix], method: &Method, size: usize) -> Result<Vec<StencilBank>> {
    Stencil::check_size(size)?;
    method.validate()?;
    let alphas: Vec<MultiIndex> = {
        let mut set = std::collections::BTreeSet::new();
        for p in elements {
            for e in p.entries() {
                set.extend(e.terms().map(|(a, _)| *a));
            }
        }
        set.into_iter().collect()
    };
    let stencils: BTreeMap<MultiIndex, Stencil> = alphas
        .par_iter()
        .map(|a| stencil_for(*a, size, method).map(|s| (*a, s)))
        .collect::<Result<_>>()?;
    Ok(elements.iter().map(|p| assemble(p, size, method, &stencils)).collect())
}

/// Stencil file entry.
#[derive(Serialize, Deserialize)]
struct BankJson {
    method: String,
    params: Value,
    size: usize,
    c_out: usize,
    c_in: usize,
    weights: Vec<Vec<Vec<Vec<f64>>>>,
}

impl Serialize for StencilBank {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let weights = (0..self.c_out)
            .map(|o| {
                (0..self.c_in)
                    .map(|c| (0..self.size).map(|i| (0..self.size).map(|j| self.get(o, c, i, j)).collect()).collect())
                    .collect()
            })
            .collect();
        BankJson {
            method: self.method.tag().to_string(),
            params: self.method.params_json(),
            size: self.size,
            c_out: self.c_out,
            c_in: self.c_in,
            weights,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StencilBank {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = BankJson::deserialize(d)?;
        let method = Method::from_json(&j.method, &j.params).map_err(D::Error::custom)?;
        let mut bank = StencilBank::zeros(j.c_out, j.c_in, j.size, method);
        let shape_ok = j.weights.len() == j.c_out
            && j.weights.iter().all(|o| {
                o.len() == j.c_in && o.iter().all(|c| c.len() == j.size && c.iter().all(|r| r.len() == j.size))
            });
        if !shape_ok {
            return Err(D::Error::custom("stencil weights do not match c_out × c_in × size × size"));
        }
        for (o, wo) in j.weights.iter().enumerate() {
            for (c, wc) in wo.iter().enumerate() {
                for (i, wr) in wc.iter().enumerate() {
                    for (jj, v) in wr.iter().enumerate() {
                        bank.set(o, c, i, jj, *v);
                    }
                }
            }
        }
        Ok(bank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rational, Poly};

    #[test]
    fn div_bank() {
        let div = PolyMatrix::row(vec![Poly::x1(), Poly::x2()]);
        let bank = &discretize_basis(&[div], &Method::fd(), 3).unwrap()[0];
        assert_eq!((bank.c_out, bank.c_in), (1, 2));
        let dx = fd_stencil_2d(MultiIndex::new(1, 0), 3, OrderCap::PerAxis).unwrap();
        let dy = fd_stencil_2d(MultiIndex::new(0, 1), 3, OrderCap::PerAxis).unwrap();
        assert_eq!(&bank.weights[..9], dx.weights.as_slice());
        assert_eq!(&bank.weights[9..], dy.weights.as_slice());
    }

    #[test]
    fn identity_bank() {
        let id = PolyMatrix::row(vec![Poly::one()]);
        for m in [Method::fd(), Method::rbf()] {
            let b = &discretize_basis(std::slice::from_ref(&id), &m, 3).unwrap()[0];
            for (n, w) in b.weights.iter().enumerate() {
                assert!((w - if n == 4 { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        let g = &discretize_basis(&[id], &Method::gauss(1.0), 3).unwrap()[0];
        assert_eq!(g.weights, gauss_stencil(MultiIndex::new(0, 0), 3, 1.0).unwrap().weights);
    }

    #[test]
    fn linearity() {
        let p = PolyMatrix::row(vec![Poly::from_int_terms(&[(2, 0, 3), (1, 1, -1), (0, 0, 2)])]);
        for m in [Method::fd(), Method::rbf(), Method::gauss(1.3)] {
            let base = &discretize_basis(std::slice::from_ref(&p), &m, 5).unwrap()[0];
            let scaled = &discretize_basis(&[p.scale(&rational(4, 1))], &m, 5).unwrap()[0];
            for (a, b) in base.weights.iter().zip(&scaled.weights) {
                assert_eq!(4.0 * a, *b);
            }
            let third = &discretize_basis(&[p.scale(&rational(-3, 7))], &m, 5).unwrap()[0];
            for (a, b) in base.weights.iter().zip(&third.weights) {
                assert!((a * (-3.0 / 7.0) - b).abs() <= 1e-14 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn json_round_trip_is_bitwise() {
        let p = PolyMatrix::row(vec![Poly::r2(), Poly::x1()]);
        for m in [Method::fd(), Method::Fd { cap: OrderCap::Total(2) }, Method::rbf(), Method::gauss(1.3)] {
            let banks = discretize_basis(std::slice::from_ref(&p), &m, 3).unwrap();
            let s = serde_json::to_string(&banks).unwrap();
            let back: Vec<StencilBank> = serde_json::from_str(&s).unwrap();
            assert_eq!(back, banks);
        }
    }

    #[test]
    fn fd_too_high_is_an_error() {
        let p = PolyMatrix::row(vec![Poly::from_int_terms(&[(3, 0, 1)])]);
        assert!(matches!(discretize_basis(&[p], &Method::fd(), 3), Err(Error::OrderTooHigh(_))));
    }
}
