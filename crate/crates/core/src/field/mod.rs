//! Feature fields on regular grids, the group action on them, and
//! application of stencil banks.
//!
//! Pixel `(row y, column x)` sits at the point
//! `(x₁, x₂) = (x − (W−1)/2, (H−1)/2 − y)`, matching the stencil convention.

mod io;

use ndarray::{Array3, Axis};
use rayon::prelude::*;

use crate::discretize::StencilBank;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, Irrep, Rep};

pub use io::{read_csv, read_fld, write_fld};

/// Upsampling factor of the interpolating rotation path.
pub const UPSAMPLE: usize = 3;

/// `c` copies of the trivial representation of the trivial group.
pub fn untyped_rep(c: usize) -> Rep {
    Rep::from_irreps(GroupSpec::cyclic(1), vec![Irrep::Trivial; c], nalgebra::DMatrix::identity(c, c))
        .expect("trivial irreps of C1")
}

/// `H × W × C` samples with the representation acting on each fiber.
#[derive(Clone, Debug)]
pub struct FeatureField {
    pub data: Array3<f64>,
    pub rep: Rep,
}

impl FeatureField {
    pub fn new(data: Array3<f64>, rep: Rep) -> Result<Self> {
        if data.dim().2 != rep.dim() {
            return Err(Error::DimensionMismatch(format!(
                "field has {} channels but the representation has dimension {}",
                data.dim().2,
                rep.dim()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("field contains non-finite values".into()));
        }
        Ok(FeatureField { data, rep })
    }

    /// A field whose channels carry no group action.
    pub fn untyped(data: Array3<f64>) -> Result<Self> {
        let rep = untyped_rep(data.dim().2);
        FeatureField::new(data, rep)
    }

    pub fn height(&self) -> usize {
        self.data.dim().0
    }

    pub fn width(&self) -> usize {
        self.data.dim().1
    }

    pub fn channels(&self) -> usize {
        self.data.dim().2
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Boundary handling for [`correlate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Padding {
    /// Only positions where the stencil fits: output shrinks by `k − 1`.
    Valid,
    /// Zero padding by `(k − 1)/2`: output keeps the input size.
    Zero,
}

/// Cross-correlation `out[y][x][o] = Σ_{i,j,c} w[o][c][i][j] · f[y+i][x+j][c]`.
pub fn correlate(field: &FeatureField, bank: &StencilBank, out_rep: &Rep, padding: Padding) -> Result<FeatureField> {
    let (h, w, c) = field.data.dim();
    if bank.c_in != c {
        return Err(Error::DimensionMismatch(format!("stencils expect {} input channels, field has {c}", bank.c_in)));
    }
    if out_rep.dim() != bank.c_out {
        return Err(Error::DimensionMismatch(format!(
            "stencils produce {} channels, output representation has dimension {}",
            bank.c_out,
            out_rep.dim()
        )));
    }
    let k = bank.size;
    let pad = match padding {
        Padding::Valid => 0,
        Padding::Zero => k / 2,
    };
    if h + 2 * pad < k || w + 2 * pad < k {
        return Err(Error::FieldTooSmall { height: h, width: w, size: k });
    }
    let (oh, ow) = (h + 2 * pad - k + 1, w + 2 * pad - k + 1);
    let c_out = bank.c_out;
    let rows: Vec<Vec<f64>> = (0..oh)
        .into_par_iter()
        .map(|y| {
            let mut row = vec![0.0; ow * c_out];
            for x in 0..ow {
                for o in 0..c_out {
                    let mut acc = 0.0;
                    for i in 0..k {
                        let sy = (y + i) as isize - pad as isize;
                        if sy < 0 || sy >= h as isize {
                            continue;
                        }
                        for j in 0..k {
                            let sx = (x + j) as isize - pad as isize;
                            if sx < 0 || sx >= w as isize {
                                continue;
                            }
                            for ch in 0..c {
                                acc += bank.get(o, ch, i, j) * field.data[[sy as usize, sx as usize, ch]];
                            }
                        }
                    }
                    row[x * c_out + o] = acc;
                }
            }
            row
        })
        .collect();
    let data = Array3::from_shape_vec((oh, ow, c_out), rows.concat()).expect("consistent shape");
    FeatureField::new(data, out_rep.clone())
}

/// Multiplies every fiber by `ρ(g)`.
fn act_on_fibers(data: &mut Array3<f64>, rho: &nalgebra::DMatrix<f64>) {
    let c = rho.nrows();
    let mut buf = vec![0.0; c];
    for mut fiber in data.lanes_mut(Axis(2)) {
        for (o, b) in buf.iter_mut().enumerate() {
            *b = (0..c).map(|i| rho[(o, i)] * fiber[i]).sum();
        }
        for (f, b) in fiber.iter_mut().zip(&buf) {
            *f = *b;
        }
    }
}

/// Exact pixel permutation for rotations by multiples of π/2 and flips.
fn permute_exact(data: &Array3<f64>, g: &GroupElement) -> Array3<f64> {
    let (h, w, c) = data.dim();
    let m = g.inverse().matrix();
    let to_i = |v: f64| v as i64;
    let a = [[to_i(m[0][0]), to_i(m[0][1])], [to_i(m[1][0]), to_i(m[1][1])]];
    let mut out = Array3::zeros((h, w, c));
    for y in 0..h {
        for x in 0..w {
            // doubled centered coordinates stay integral
            let p1 = 2 * x as i64 - (w as i64 - 1);
            let p2 = (h as i64 - 1) - 2 * y as i64;
            let q1 = a[0][0] * p1 + a[0][1] * p2;
            let q2 = a[1][0] * p1 + a[1][1] * p2;
            let sx = ((q1 + w as i64 - 1) / 2) as usize;
            let sy = ((h as i64 - 1 - q2) / 2) as usize;
            for ch in 0..c {
                out[[y, x, ch]] = data[[sy, sx, ch]];
            }
        }
    }
    out
}

/// Adds the bilinear sample of a `(h, w, c)` row-major buffer at fractional
/// pixel coordinates into `out`; points outside the grid contribute zero.
fn bilinear_into(src: &[f64], (h, w, c): (usize, usize, usize), y: f64, x: f64, out: &mut [f64]) {
    let eps = 1e-9;
    if y < -eps || x < -eps || y > (h - 1) as f64 + eps || x > (w - 1) as f64 + eps {
        return;
    }
    let y = y.clamp(0.0, (h - 1) as f64);
    let x = x.clamp(0.0, (w - 1) as f64);
    let (y0, x0) = (y.floor() as usize, x.floor() as usize);
    let (y1, x1) = ((y0 + 1).min(h - 1), (x0 + 1).min(w - 1));
    let (fy, fx) = (y - y0 as f64, x - x0 as f64);
    let taps = [
        ((y0 * w + x0) * c, (1.0 - fy) * (1.0 - fx)),
        ((y0 * w + x1) * c, (1.0 - fy) * fx),
        ((y1 * w + x0) * c, fy * (1.0 - fx)),
        ((y1 * w + x1) * c, fy * fx),
    ];
    for (base, wt) in taps {
        if wt != 0.0 {
            for (o, s) in out.iter_mut().zip(&src[base..base + c]) {
                *o += wt * s;
            }
        }
    }
}

/// Upsample by `u` (bilinear, pixel-center aligned), rotate about the center
/// by bilinear resampling, and average `u × u` blocks back down.
fn rotate_interpolated(data: &Array3<f64>, g: &GroupElement, u: usize) -> Array3<f64> {
    let (h, w, c) = data.dim();
    let src = data.as_standard_layout();
    let src = src.as_slice().expect("standard layout");
    let (hh, hw) = (h * u, w * u);
    let uf = u as f64;
    let mut hi = vec![0.0; hh * hw * c];
    hi.par_chunks_mut(hw * c).enumerate().for_each(|(yy, row)| {
        let y = ((yy as f64 + 0.5) / uf - 0.5).clamp(0.0, (h - 1) as f64);
        for (xx, px) in row.chunks_mut(c).enumerate() {
            let x = ((xx as f64 + 0.5) / uf - 0.5).clamp(0.0, (w - 1) as f64);
            bilinear_into(src, (h, w, c), y, x, px);
        }
    });
    let m = g.inverse().matrix();
    let (cy, cx) = ((hh as f64 - 1.0) / 2.0, (hw as f64 - 1.0) / 2.0);
    let norm = 1.0 / (uf * uf);
    let mut out = vec![0.0; h * w * c];
    out.par_chunks_mut(w * c).enumerate().for_each(|(y, row)| {
        let mut acc = vec![0.0; c];
        for (x, px) in row.chunks_mut(c).enumerate() {
            acc.iter_mut().for_each(|v| *v = 0.0);
            for yy in y * u..(y + 1) * u {
                for xx in x * u..(x + 1) * u {
                    let (p1, p2) = (xx as f64 - cx, cy - yy as f64);
                    let q1 = m[0][0] * p1 + m[0][1] * p2;
                    let q2 = m[1][0] * p1 + m[1][1] * p2;
                    bilinear_into(&hi, (hh, hw, c), cy - q2, q1 + cx, &mut acc);
                }
            }
            for (p, a) in px.iter_mut().zip(&acc) {
                *p = a * norm;
            }
        }
    });
    Array3::from_shape_vec((h, w, c), out).expect("consistent shape")
}

/// The group action `(g·f)(x) = ρ(g) f(g⁻¹x)` about the grid center.
///
/// Quarter turns and flips permute pixels exactly; other angles go through
/// the interpolating path with upsampling factor [`UPSAMPLE`].
pub fn transform_field(field: &FeatureField, g: &GroupElement) -> Result<FeatureField> {
    transform_field_with(field, g, UPSAMPLE)
}

/// [`transform_field`] with an explicit upsampling factor.
pub fn transform_field_with(field: &FeatureField, g: &GroupElement, upsample: usize) -> Result<FeatureField> {
    let (h, w, _) = field.data.dim();
    if h != w && !g.rotation.is_zero() {
        return Err(Error::NonSquareField { height: h, width: w });
    }
    let rho = field.rep.matrix(g)?;
    let mut data = if g.is_identity() {
        field.data.clone()
    } else if g.rotation.quarter_turns().is_some() {
        permute_exact(&field.data, g)
    } else {
        rotate_interpolated(&field.data, g, upsample.max(1))
    };
    if rho != nalgebra::DMatrix::identity(rho.nrows(), rho.ncols()) {
        act_on_fibers(&mut data, &rho);
    }
    FeatureField::new(data, field.rep.clone())
}

/// `‖a − b‖₂ / max(‖b‖₂, 1e-30)`.
pub fn relative_error(a: &FeatureField, b: &FeatureField) -> Result<f64> {
    relative_error_arrays(&a.data, &b.data)
}

pub fn relative_error_arrays(a: &Array3<f64>, b: &Array3<f64>) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("fields of shape {:?} and {:?}", a.dim(), b.dim())));
    }
    let diff: f64 = a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let norm: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(diff / norm.max(1e-30))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::{discretize_basis, Method};
    use crate::group::regular_rep;
    use crate::poly::{Poly, PolyMatrix};

    fn scalar_field(h: usize, w: usize, f: impl Fn(f64, f64) -> f64) -> FeatureField {
        let g = GroupSpec::cyclic(4);
        let data = Array3::from_shape_fn((h, w, 1), |(y, x, _)| {
            f(x as f64 - (w as f64 - 1.0) / 2.0, (h as f64 - 1.0) / 2.0 - y as f64)
        });
        FeatureField::new(data, Rep::trivial(g)).unwrap()
    }

    fn bank(p: PolyMatrix) -> StencilBank {
        discretize_basis(&[p], &Method::fd(), 3).unwrap().remove(0)
    }

    #[test]
    fn delta_bank_crops() {
        let f = scalar_field(6, 5, |x, y| x * 3.0 + y * y);
        let out = correlate(&f, &bank(PolyMatrix::row(vec![Poly::one()])), &f.rep, Padding::Valid).unwrap();
        assert_eq!(out.data.dim(), (4, 3, 1));
        for y in 0..4 {
            for x in 0..3 {
                assert_eq!(out.data[[y, x, 0]], f.data[[y + 1, x + 1, 0]]);
            }
        }
        let same = correlate(&f, &bank(PolyMatrix::row(vec![Poly::one()])), &f.rep, Padding::Zero).unwrap();
        assert_eq!(same.data, f.data);
    }

    #[test]
    fn fd_examples_on_polynomials() {
        let f = scalar_field(7, 7, |x, _| x);
        let out = correlate(&f, &bank(PolyMatrix::row(vec![Poly::x1()])), &f.rep, Padding::Valid).unwrap();
        assert!(out.data.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let f = scalar_field(7, 7, |x, y| x * x + y * y);
        let out = correlate(&f, &bank(PolyMatrix::row(vec![Poly::r2()])), &f.rep, Padding::Valid).unwrap();
        assert!(out.data.iter().all(|v| (v - 4.0).abs() < 1e-12));
    }

    #[test]
    fn correlate_errors() {
        let f = scalar_field(2, 2, |x, _| x);
        let b = bank(PolyMatrix::row(vec![Poly::one()]));
        assert!(matches!(correlate(&f, &b, &f.rep, Padding::Valid), Err(Error::FieldTooSmall { .. })));
        let v = Rep::vector(GroupSpec::cyclic(4));
        assert!(matches!(correlate(&f, &b, &v, Padding::Zero), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn quarter_turn_moves_pixels() {
        let f = scalar_field(5, 5, |x, y| 10.0 * x + y);
        let r = GroupElement::rotation_turns(1, 4);
        let t = transform_field(&f, &r).unwrap();
        // (g·f)(p) = f(g⁻¹p); g⁻¹(x, y) = (y, −x)
        let expect = scalar_field(5, 5, |x, y| 10.0 * y - x);
        assert_eq!(t.data, expect.data);
        let twice = transform_field(&t, &r).unwrap();
        let half = transform_field(&f, &GroupElement::rotation_turns(1, 2)).unwrap();
        assert_eq!(twice.data, half.data);
        assert!(matches!(
            transform_field(&scalar_field(4, 5, |x, _| x), &r),
            Err(Error::NonSquareField { .. })
        ));
    }

    #[test]
    fn exact_path_group_action_and_norm() {
        let c4 = GroupSpec::cyclic(4);
        let reg = regular_rep(&c4).unwrap();
        let data = Array3::from_shape_fn((6, 6, 4), |(y, x, c)| ((y * 7 + x * 3 + c * 11) % 13) as f64 - 6.0);
        let f = FeatureField::new(data, reg).unwrap();
        for g in c4.elements() {
            for h in c4.elements() {
                let lhs = transform_field(&transform_field(&f, &g).unwrap(), &h).unwrap();
                let rhs = transform_field(&f, &h.compose(&g)).unwrap();
                assert_eq!(lhs.data, rhs.data);
            }
            assert!((transform_field(&f, &g).unwrap().norm() - f.norm()).abs() <= 1e-12 * f.norm());
        }
    }

    #[test]
    fn interpolated_rotation_of_smooth_field() {
        let f = scalar_field(33, 33, |x, y| (0.15 * x + 0.1 * y).cos());
        let g = GroupElement::rotation_turns(1, 16);
        let t = transform_field(&f, &g).unwrap();
        let th = std::f64::consts::TAU / 16.0;
        let (c, s) = (th.cos(), th.sin());
        // compare inside the inscribed disc, away from the zero-filled corners
        let mut worst: f64 = 0.0;
        for y in 0..33 {
            for x in 0..33 {
                let (p1, p2) = (x as f64 - 16.0, 16.0 - y as f64);
                if p1.hypot(p2) > 14.0 {
                    continue;
                }
                let (q1, q2) = (c * p1 + s * p2, -s * p1 + c * p2);
                let want = (0.15 * q1 + 0.1 * q2).cos();
                worst = worst.max((t.data[[y, x, 0]] - want).abs());
            }
        }
        assert!(worst < 0.01, "interpolation error {worst}");
    }

    #[test]
    fn relative_error_examples() {
        let b = scalar_field(3, 3, |x, y| x + 2.0 * y + 5.0);
        assert_eq!(relative_error(&b, &b).unwrap(), 0.0);
        let mut a = b.clone();
        a.data.mapv_inplace(|v| 2.0 * v);
        assert!((relative_error(&a, &b).unwrap() - 1.0).abs() < 1e-15);
        let scale = 10.0 / b.norm();
        let mut b10 = b.clone();
        b10.data.mapv_inplace(|v| v * scale);
        let mut noisy = b10.clone();
        noisy.data[[0, 0, 0]] += 1.0;
        assert!((relative_error(&noisy, &b10).unwrap() - 0.1).abs() < 1e-12);
    }
}
