//! Exact bivariate polynomials with rational coefficients.
//!
//! A polynomial `Σ c_α x^α` doubles as the constant-coefficient differential
//! operator `Σ c_α ∂^α`.

mod chebyshev;
mod matrix;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use chebyshev::{tcheb, ucheb};
pub use matrix::{divisible_by_r2, homogeneous_degree, pdo_apply_symbolic, PolyMatrix};

/// Exponents of `x₁^a1 x₂^a2`, equivalently the derivative `∂₁^a1 ∂₂^a2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    pub a1: u32,
    pub a2: u32,
}

impl MultiIndex {
    pub const fn new(a1: u32, a2: u32) -> Self {
        MultiIndex { a1, a2 }
    }

    pub fn order(&self) -> u32 {
        self.a1 + self.a2
    }
}

/// Monomials of total degree `≤ max_degree`, by degree and then by
/// decreasing power of `x₁`.
pub fn monomials_up_to(max_degree: u32) -> Vec<MultiIndex> {
    (0..=max_degree)
        .flat_map(|n| (0..=n).map(move |a2| MultiIndex::new(n - a2, a2)))
        .collect()
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite coefficient")
}

pub fn rational_to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<MultiIndex, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::monomial(MultiIndex::new(0, 0), c)
    }

    pub fn monomial(alpha: MultiIndex, c: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term(alpha, c);
        p
    }

    pub fn x1() -> Self {
        Poly::monomial(MultiIndex::new(1, 0), BigRational::one())
    }

    pub fn x2() -> Self {
        Poly::monomial(MultiIndex::new(0, 1), BigRational::one())
    }

    /// `x₁² + x₂²`.
    pub fn r2() -> Self {
        Poly::x1() * Poly::x1() + Poly::x2() * Poly::x2()
    }

    /// Builds a polynomial from `(a1, a2, coefficient)` triples; repeated
    /// monomials are summed.
    pub fn from_terms<I: IntoIterator<Item = (u32, u32, BigRational)>>(terms: I) -> Self {
        let mut p = Poly::zero();
        for (a1, a2, c) in terms {
            p.add_term(MultiIndex::new(a1, a2), c);
        }
        p
    }

    /// Integer-coefficient shorthand for [`from_terms`](Self::from_terms).
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        Poly::from_terms(terms.iter().map(|&(a1, a2, c)| (a1, a2, rational(c, 1))))
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(alpha).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&alpha);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: MultiIndex) -> BigRational {
        self.terms.get(&alpha).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest total degree, `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|a| a.order() as i64).max().unwrap_or(-1)
    }

    /// Common degree of all terms, `None` for the zero polynomial or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(MultiIndex::order);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(a, v)| (*a, v * c)).collect() }
    }

    pub fn scale_int(&self, c: i64) -> Poly {
        self.scale(&rational(c, 1))
    }

    /// Formal partial derivative `∂^α p`.
    pub fn derivative(&self, alpha: MultiIndex) -> Poly {
        let mut out = Poly::zero();
        for (b, c) in &self.terms {
            if b.a1 < alpha.a1 || b.a2 < alpha.a2 {
                continue;
            }
            let factor = falling(b.a1, alpha.a1) * falling(b.a2, alpha.a2);
            out.add_term(MultiIndex::new(b.a1 - alpha.a1, b.a2 - alpha.a2), c * BigRational::from_integer(factor));
        }
        out
    }

    /// `∂₁²p + ∂₂²p`.
    pub fn laplacian(&self) -> Poly {
        self.derivative(MultiIndex::new(2, 0)) + self.derivative(MultiIndex::new(0, 2))
    }

    /// `(x₁² + x₂²)·p`.
    pub fn mul_r2(&self) -> Poly {
        self * &Poly::r2()
    }

    /// Exact quotient `p / (x₁² + x₂²)`, or `None` if the division leaves a
    /// remainder. Works by repeatedly cancelling the lexicographically
    /// leading term.
    pub fn div_r2(&self) -> Option<Poly> {
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((lead, c)) = rem.terms.iter().next_back().map(|(a, c)| (*a, c.clone())) {
            if lead.a1 < 2 {
                return None;
            }
            let q = Poly::monomial(MultiIndex::new(lead.a1 - 2, lead.a2), c);
            rem = rem - q.mul_r2();
            quot = quot + q;
        }
        Some(quot)
    }

    /// The polynomial `x ↦ p(Ax)` for an exact 2×2 matrix `A`.
    pub fn compose_linear_exact(&self, a: &[[BigRational; 2]; 2]) -> Poly {
        let max_deg = self.degree().max(0) as usize;
        let l1 = Poly::from_terms([(1, 0, a[0][0].clone()), (0, 1, a[0][1].clone())]);
        let l2 = Poly::from_terms([(1, 0, a[1][0].clone()), (0, 1, a[1][1].clone())]);
        let powers = |l: &Poly| {
            let mut v = vec![Poly::one()];
            for k in 1..=max_deg {
                let next = &v[k - 1] * l;
                v.push(next);
            }
            v
        };
        let (p1, p2) = (powers(&l1), powers(&l2));
        let mut out = Poly::zero();
        for (alpha, c) in &self.terms {
            let term = (&p1[alpha.a1 as usize] * &p2[alpha.a2 as usize]).scale(c);
            out = out + term;
        }
        out
    }

    /// `x ↦ p(Ax)` with `A` converted exactly from its binary representation.
    pub fn compose_linear(&self, a: &[[f64; 2]; 2]) -> Poly {
        let exact = [
            [rational_from_f64(a[0][0]), rational_from_f64(a[0][1])],
            [rational_from_f64(a[1][0]), rational_from_f64(a[1][1])],
        ];
        self.compose_linear_exact(&exact)
    }

    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        self.terms
            .iter()
            .map(|(a, c)| rational_to_f64(c) * x1.powi(a.a1 as i32) * x2.powi(a.a2 as i32))
            .sum()
    }

    pub fn eval_exact(&self, x1: &BigRational, x2: &BigRational) -> BigRational {
        let mut s = BigRational::zero();
        for (a, c) in &self.terms {
            s += c * num_traits::pow(x1.clone(), a.a1 as usize) * num_traits::pow(x2.clone(), a.a2 as usize);
        }
        s
    }

    /// Coefficients as doubles along the given monomial list.
    pub fn coeff_vector(&self, monomials: &[MultiIndex]) -> Vec<f64> {
        monomials.iter().map(|a| rational_to_f64(&self.coeff(*a))).collect()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| rational_to_f64(c).abs()).fold(0.0, f64::max)
    }
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (a, c) in rhs.terms {
            self.add_term(a, c);
        }
        self
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.clone() + rhs.clone()
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.into_iter().map(|(a, c)| (a, -c)).collect() }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -self.clone()
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.clone() - rhs.clone()
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term(MultiIndex::new(a.a1 + b.a1, a.a2 + b.a2), c * d);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !mag.is_one() || a.order() == 0 {
                factors.push(mag.to_string());
            }
            for (var, e) in [("x1", a.a1), ("x2", a.a2)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// JSON integer: a plain number when it fits in `i64`, else a decimal string.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl JsonInt {
    fn from_big(v: &BigInt) -> Self {
        v.to_i64().map(JsonInt::Small).unwrap_or_else(|| JsonInt::Big(v.to_string()))
    }

    fn to_big(&self) -> Result<BigInt, String> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(*v)),
            JsonInt::Big(s) => s.parse().map_err(|_| format!("bad integer '{s}'")),
        }
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<(u32, u32, JsonInt, JsonInt)> = self
            .terms
            .iter()
            .map(|(a, c)| (a.a1, a.a2, JsonInt::from_big(c.numer()), JsonInt::from_big(c.denom())))
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows: Vec<(u32, u32, JsonInt, JsonInt)> = Vec::deserialize(d)?;
        let mut p = Poly::zero();
        for (a1, a2, n, m) in rows {
            let den = m.to_big().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            let num = n.to_big().map_err(D::Error::custom)?;
            p.add_term(MultiIndex::new(a1, a2), BigRational::new(num, den));
        }
        Ok(p)
    }
}
