//! Numerical decomposition of a representation into irreps.

use nalgebra::DMatrix;

use super::element::GroupElement;
use super::irrep::Irrep;
use super::spec::GroupSpec;
use crate::error::{Error, Result};
use crate::linalg::{block_diag, orthonormal_column_basis};

/// Tolerance on `‖Q ρ(g) Q⁻¹ − ⊕ψᵢ(g)‖_∞`.
pub const DECOMPOSITION_TOL: f64 = 1e-10;

/// Result of a decomposition: `Q ρ(g) Q⁻¹ = ⊕ψᵢ(g)`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub irreps: Vec<Irrep>,
    pub q: DMatrix<f64>,
    pub q_inv: DMatrix<f64>,
}

/// Decomposes the representation `rho` of `group` (evaluated on all
/// enumerated or sampled elements).
pub fn decompose_action<F>(group: &GroupSpec, dim: usize, rho: F) -> Result<Decomposition>
where
    F: Fn(&GroupElement) -> DMatrix<f64>,
{
    let elems = group.elements();
    let mats: Vec<DMatrix<f64>> = elems.iter().map(&rho).collect();
    for m in &mats {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "representation matrix is {}x{}, expected {dim}x{dim}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    let count = mats.len() as f64;

    // Make the action orthogonal: with M = avg ρᵀρ = LLᵀ, Lᵀ ρ L⁻ᵀ is orthogonal.
    let gram = mats.iter().fold(DMatrix::zeros(dim, dim), |acc, m| acc + m.transpose() * m) / count;
    let w = if (&gram - DMatrix::identity(dim, dim)).amax() < 1e-14 {
        DMatrix::identity(dim, dim)
    } else {
        let chol = gram
            .clone()
            .cholesky()
            .ok_or(Error::DecompositionFailed { residual: f64::INFINITY })?;
        chol.l().transpose()
    };
    let w_inv = w.clone().try_inverse().ok_or(Error::DecompositionFailed { residual: f64::INFINITY })?;
    let ortho: Vec<DMatrix<f64>> = mats.iter().map(|m| &w * m * &w_inv).collect();

    let generator = group.rotation_generator();
    let gen_idx = elems.iter().position(|e| *e == generator);
    let flip_idx = elems.iter().position(|e| *e == GroupElement::reflection());

    let mut irreps = Vec::new();
    let mut rows: Vec<nalgebra::DVector<f64>> = Vec::new();
    for psi in group.irreps() {
        if rows.len() == dim {
            break;
        }
        let chars: Vec<f64> = elems.iter().map(|g| psi.character(g)).collect::<Result<_>>()?;
        let norm = chars.iter().map(|c| c * c).sum::<f64>() / count;
        let scale = psi.dim() as f64 / (count * norm);
        let proj = chars
            .iter()
            .zip(&ortho)
            .fold(DMatrix::zeros(dim, dim), |acc, (c, m)| acc + m * *c)
            * scale;
        let proj = (&proj + proj.transpose()) * 0.5;
        let mut space = orthonormal_column_basis(&proj, 1e-6);
        if space.ncols() == 0 {
            continue;
        }
        if psi.dim() == 1 {
            for c in space.column_iter() {
                irreps.push(psi);
                rows.push(c.into_owned());
            }
            continue;
        }
        let k = psi.frequency() as i64;
        let gi = gen_idx.ok_or(Error::DecompositionFailed { residual: f64::INFINITY })?;
        let (c0, s0) = elems[gi].rotation.times(k).cos_sin();
        while space.ncols() >= 2 {
            // u1 must be fixed by the flip for the S·R(kθ) real form.
            let cand = match flip_idx {
                Some(fi) => (&ortho[fi] * &space + &space) * 0.5,
                None => space.clone(),
            };
            let best = (0..cand.ncols())
                .max_by(|&a, &b| cand.column(a).norm().total_cmp(&cand.column(b).norm()))
                .unwrap();
            let u1 = cand.column(best).normalize();
            let u2 = (&ortho[gi] * &u1 - &u1 * c0) / s0;
            irreps.push(psi);
            rows.push(u1.clone());
            rows.push(u2.clone());
            let complement = DMatrix::identity(dim, dim) - &u1 * u1.transpose() - &u2 * u2.transpose();
            let rest = complement * &space;
            space = orthonormal_column_basis(&(&rest * rest.transpose()), 1e-6);
        }
    }

    if rows.len() != dim {
        return Err(Error::DecompositionFailed { residual: f64::INFINITY });
    }
    let u = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
    let q = &u * &w;
    let q_inv = &w_inv * u.transpose();

    let mut residual: f64 = 0.0;
    for (g, m) in elems.iter().zip(&mats) {
        let blocks = block_diag(&irreps.iter().map(|p| p.matrix(g)).collect::<Result<Vec<_>>>()?);
        residual = residual.max((&q * m * &q_inv - blocks).amax());
    }
    if residual > DECOMPOSITION_TOL {
        return Err(Error::DecompositionFailed { residual });
    }
    Ok(Decomposition { irreps, q, q_inv })
}
