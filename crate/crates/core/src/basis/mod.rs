//! Bases of steerable PDOs between feature fields.

mod econv;
mod residual;
mod tables;

use log::warn;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupSpec, Irrep, Rep};
use crate::linalg::rank;
use crate::poly::{monomials_up_to, rational_from_f64, MultiIndex, Poly, PolyMatrix};

pub use econv::{pdo_econv_hidden, pdo_econv_lift};
pub use residual::{monomial_action, residual_over, steerability_residual};

/// Largest supported PDO order.
pub const MAX_ORDER: u32 = 8;

/// Tolerance every emitted basis element must meet.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// One steerable PDO `r^{2k} · χ`, with `χ` a harmonic table entry.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub polymatrix: PolyMatrix,
    /// Signed frequency `j` of the `T̃_j`/`Ũ_j` entries.
    pub angular_freq: i64,
    /// The power `k` of the `r^{2k}` (i.e. `Δ^k`) factor.
    pub laplacian_power: u32,
    pub order: u32,
    /// `(input irrep index, output irrep index)` in the decomposed reps.
    pub irrep_block: (usize, usize),
}

#[derive(Clone, Debug)]
pub struct BasisRequest {
    pub group: GroupSpec,
    pub rep_in: Rep,
    pub rep_out: Rep,
    pub max_order: u32,
}

fn check_order(max_order: u32) -> Result<()> {
    if max_order > MAX_ORDER {
        return Err(Error::InvalidArgument(format!("max order {max_order} exceeds the cap of {MAX_ORDER}")));
    }
    Ok(())
}

/// Drops elements whose coefficients are linearly dependent on earlier ones.
fn drop_dependent(elements: Vec<BasisElement>, context: &str) -> Vec<BasisElement> {
    let Some(max_deg) = elements.iter().map(|e| e.order).max() else {
        return elements;
    };
    let monos = monomials_up_to(max_deg);
    let mut kept: Vec<BasisElement> = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for e in elements {
        let v = e.polymatrix.coeff_vector(&monos);
        columns.push(v);
        let m = DMatrix::from_fn(columns[0].len(), columns.len(), |i, j| columns[j][i]);
        if rank(&m, 1e-10) == columns.len() {
            kept.push(e);
        } else {
            warn!("{context}: dropping linearly dependent element {}", e.polymatrix);
            columns.pop();
        }
    }
    kept
}

/// Every table solution for `psi_in → psi_out` of total order
/// `≤ max_order`, multiplied by all admissible powers of `r²`.
pub fn irrep_pair_basis(group: &GroupSpec, psi_in: &Irrep, psi_out: &Irrep, max_order: u32) -> Result<Vec<BasisElement>> {
    group.check_irrep(psi_in)?;
    group.check_irrep(psi_out)?;
    check_order(max_order)?;
    let mut out = Vec::new();
    for entry in tables::angular_solutions(group, psi_in, psi_out, max_order) {
        let base = entry.freq.unsigned_abs() as u32;
        let mut matrix = entry.matrix;
        let mut k = 0;
        while base + 2 * k <= max_order {
            out.push(BasisElement {
                polymatrix: matrix.clone(),
                angular_freq: entry.freq,
                laplacian_power: k,
                order: base + 2 * k,
                irrep_block: (0, 0),
            });
            matrix = matrix.mul_r2();
            k += 1;
        }
    }
    out.sort_by_key(|e| e.order);
    Ok(drop_dependent(out, &format!("{group} {psi_in} -> {psi_out}")))
}

/// `Q_out⁻¹ · κ · Q_in` on polynomial matrices, via doubles.
fn change_basis(kappa: &PolyMatrix, q_out_inv: &DMatrix<f64>, q_in: &DMatrix<f64>) -> PolyMatrix {
    let deg = kappa.degree().max(0) as u32;
    let monos = monomials_up_to(deg);
    let (rows, cols) = (kappa.rows(), kappa.cols());
    let coeffs: Vec<Vec<f64>> = kappa.entries().iter().map(|p| p.coeff_vector(&monos)).collect();
    let scale = coeffs.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    PolyMatrix::from_fn(rows, cols, |i, j| {
        let mut p = Poly::zero();
        for (m, alpha) in monos.iter().enumerate() {
            let mut v = 0.0;
            for k in 0..rows {
                for l in 0..cols {
                    let c = coeffs[k * cols + l][m];
                    if c != 0.0 {
                        v += q_out_inv[(i, k)] * c * q_in[(l, j)];
                    }
                }
            }
            if v.abs() > 1e-13 * scale {
                p.add_term(*alpha, rational_from_f64(v));
            }
        }
        p
    })
}

/// The steerable PDO basis between two arbitrary representations, built
/// block-wise from the irrep decompositions.
pub fn full_basis(req: &BasisRequest) -> Result<Vec<BasisElement>> {
    check_order(req.max_order)?;
    for rep in [&req.rep_in, &req.rep_out] {
        if rep.group() != &req.group {
            return Err(Error::InvalidArgument(format!(
                "representation of {} used with group {}",
                rep.group(),
                req.group
            )));
        }
    }
    let (irreps_in, irreps_out) = (req.rep_in.irreps(), req.rep_out.irreps());
    let offsets = |irreps: &[Irrep]| {
        irreps
            .iter()
            .scan(0, |acc, p| {
                let start = *acc;
                *acc += p.dim();
                Some(start)
            })
            .collect::<Vec<_>>()
    };
    let (off_in, off_out) = (offsets(irreps_in), offsets(irreps_out));
    let (c_in, c_out) = (req.rep_in.dim(), req.rep_out.dim());
    let identity = req.rep_in.q_is_identity() && req.rep_out.q_is_identity();

    let mut out = Vec::new();
    for (o, psi_out) in irreps_out.iter().enumerate() {
        for (i, psi_in) in irreps_in.iter().enumerate() {
            for e in irrep_pair_basis(&req.group, psi_in, psi_out, req.max_order)? {
                let mut kappa = PolyMatrix::zeros(c_out, c_in);
                kappa.set_block(off_out[o], off_in[i], &e.polymatrix);
                let polymatrix = if identity {
                    kappa
                } else {
                    change_basis(&kappa, req.rep_out.q_inv(), req.rep_in.q())
                };
                out.push(BasisElement { polymatrix, irrep_block: (i, o), ..e });
            }
        }
    }
    out.sort_by_key(|e| e.order);
    Ok(drop_dependent(out, "full basis"))
}

/// Basis file contents.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisFile {
    pub group: GroupSpec,
    pub rep_in: Rep,
    pub rep_out: Rep,
    pub max_order: u32,
    pub elements: Vec<BasisFileElement>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisFileElement {
    pub freq: i64,
    pub k: u32,
    pub order: u32,
    pub polymatrix: PolyMatrix,
}

impl BasisFile {
    pub fn new(req: &BasisRequest, elements: &[BasisElement]) -> Self {
        BasisFile {
            group: req.group,
            rep_in: req.rep_in.clone(),
            rep_out: req.rep_out.clone(),
            max_order: req.max_order,
            elements: elements
                .iter()
                .map(|e| BasisFileElement {
                    freq: e.angular_freq,
                    k: e.laplacian_power,
                    order: e.order,
                    polymatrix: e.polymatrix.clone(),
                })
                .collect(),
        }
    }

    pub fn polymatrices(&self) -> Vec<PolyMatrix> {
        self.elements.iter().map(|e| e.polymatrix.clone()).collect()
    }
}

/// Orthonormal basis (columns) of the span of the coefficient vectors of
/// `mats` over all monomials of degree `≤ max_degree`.
pub fn coefficient_span(mats: &[PolyMatrix], max_degree: u32) -> DMatrix<f64> {
    let monos: Vec<MultiIndex> = monomials_up_to(max_degree);
    let cols: Vec<Vec<f64>> = mats.iter().map(|m| m.coeff_vector(&monos)).collect();
    let rows = cols.first().map_or(0, Vec::len);
    let a = DMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i]);
    crate::linalg::column_space(&a, 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::regular_rep;
    use crate::poly::{tcheb, ucheb};

    fn row(v: Vec<Poly>) -> PolyMatrix {
        PolyMatrix::row(v)
    }

    #[test]
    fn so2_div_curl() {
        let b = irrep_pair_basis(&GroupSpec::so2(), &Irrep::Freq(1), &Irrep::Trivial, 1).unwrap();
        let mats: Vec<_> = b.iter().map(|e| e.polymatrix.clone()).collect();
        assert_eq!(mats, vec![row(vec![Poly::x1(), Poly::x2()]), row(vec![-Poly::x2(), Poly::x1()])]);
    }

    #[test]
    fn so2_laplacian_powers() {
        let b = irrep_pair_basis(&GroupSpec::so2(), &Irrep::Trivial, &Irrep::Trivial, 4).unwrap();
        let mats: Vec<_> = b.iter().map(|e| e.polymatrix.entries()[0].clone()).collect();
        assert_eq!(mats, vec![Poly::one(), Poly::r2(), Poly::r2().mul_r2()]);
        assert_eq!(b.iter().map(|e| e.laplacian_power).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn c4_invariants() {
        let b = irrep_pair_basis(&GroupSpec::cyclic(4), &Irrep::Trivial, &Irrep::Trivial, 4).unwrap();
        let mut got: Vec<Poly> = b.iter().map(|e| e.polymatrix.entries()[0].clone()).collect();
        let mut want = vec![Poly::one(), Poly::r2(), Poly::r2().mul_r2(), tcheb(4), ucheb(4)];
        let key = |p: &Poly| p.to_string();
        got.sort_by_key(key);
        want.sort_by_key(key);
        assert_eq!(got, want);
    }

    #[test]
    fn incompatible_irrep() {
        let r = irrep_pair_basis(&GroupSpec::cyclic(4), &Irrep::FlipFreq(1), &Irrep::Trivial, 2);
        assert!(matches!(r, Err(Error::IncompatibleIrrep { .. })));
    }

    #[test]
    fn full_basis_examples() {
        let so2 = GroupSpec::so2();
        let req = |rin: Rep, rout: Rep, max_order| BasisRequest { group: so2, rep_in: rin, rep_out: rout, max_order };
        let b = full_basis(&req(Rep::trivial(so2), Rep::trivial(so2), 2)).unwrap();
        assert_eq!(b.len(), 2);
        let b = full_basis(&req(Rep::vector(so2), Rep::trivial(so2), 3)).unwrap();
        assert_eq!(b.len(), 4);
        assert!(b.iter().all(|e| e.order <= 3));

        let c4 = GroupSpec::cyclic(4);
        let reg = regular_rep(&c4).unwrap();
        let b = full_basis(&BasisRequest { group: c4, rep_in: reg.clone(), rep_out: reg.clone(), max_order: 0 }).unwrap();
        assert_eq!(b.len(), 4);
        for e in &b {
            assert!(steerability_residual(&e.polymatrix, &reg, &reg, &c4).unwrap() <= RESIDUAL_TOL);
        }
    }

    #[test]
    fn order_cap() {
        let r = irrep_pair_basis(&GroupSpec::so2(), &Irrep::Trivial, &Irrep::Trivial, 9);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }
}
