use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{MultiIndex, Poly};
use crate::error::{Error, Result};

/// Dense `rows × cols` matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![Poly::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged polynomial matrix".into()));
        }
        Ok(PolyMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    /// A single-column matrix.
    pub fn column(entries: Vec<Poly>) -> Self {
        PolyMatrix { rows: entries.len(), cols: 1, entries }
    }

    /// A single-row matrix.
    pub fn row(entries: Vec<Poly>) -> Self {
        PolyMatrix { rows: 1, cols: entries.len(), entries }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Poly>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn map<F: FnMut(&Poly) -> Poly>(&self, f: F) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> PolyMatrix {
        self.map(|p| p.scale(c))
    }

    pub fn mul_r2(&self) -> PolyMatrix {
        self.map(Poly::mul_r2)
    }

    /// Entrywise `x ↦ P(Ax)`.
    pub fn compose_linear(&self, a: &[[f64; 2]; 2]) -> PolyMatrix {
        self.map(|p| p.compose_linear(a))
    }

    /// Largest total degree over all entries, `-1` if all are zero.
    pub fn degree(&self) -> i64 {
        self.entries.iter().map(Poly::degree).max().unwrap_or(-1)
    }

    /// Flattened coefficients (entry-major, then monomial) as doubles.
    pub fn coeff_vector(&self, monomials: &[MultiIndex]) -> Vec<f64> {
        self.entries.iter().flat_map(|p| p.coeff_vector(monomials)).collect()
    }

    /// Copies `block` into `self` at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &PolyMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row + i, col + j, block.get(i, j).clone());
            }
        }
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl Serialize for PolyMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[Poly]> = self.entries.chunks(self.cols.max(1)).take(self.rows).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<Poly>> = Vec::deserialize(d)?;
        PolyMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Applies the differential operator `D(P)` to the vector field `f`:
/// component `i` is `Σ_j D(P_ij) f_j`.
pub fn pdo_apply_symbolic(p: &PolyMatrix, f: &[Poly]) -> Result<Vec<Poly>> {
    if f.len() != p.cols {
        return Err(Error::DimensionMismatch(format!(
            "operator has {} input channels, field has {}",
            p.cols,
            f.len()
        )));
    }
    Ok((0..p.rows)
        .map(|i| {
            let mut acc = Poly::zero();
            for (j, fj) in f.iter().enumerate() {
                for (alpha, c) in p.get(i, j).terms() {
                    acc = acc + fj.derivative(*alpha).scale(c);
                }
            }
            acc
        })
        .collect())
}

/// Whether every entry is `(x₁² + x₂²)·q` for a polynomial `q`.
pub fn divisible_by_r2(p: &PolyMatrix) -> bool {
    p.entries.iter().all(|e| e.div_r2().is_some())
}

/// The common degree of all nonzero entries if they are homogeneous of the
/// same degree.
pub fn homogeneous_degree(p: &PolyMatrix) -> Option<u32> {
    let mut degree = None;
    for e in p.entries.iter().filter(|e| !e.is_zero()) {
        let d = e.homogeneous_degree()?;
        match degree {
            None => degree = Some(d),
            Some(prev) if prev != d => return None,
            _ => {}
        }
    }
    degree
}
