//! Equivariance error of stencil banks under the group action on fields.

use std::fmt::Write as _;

use ndarray::Array3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::image::standard_test_image;
use crate::basis::{full_basis, BasisRequest};
use crate::discretize::{discretize_basis, Method, StencilBank};
use crate::error::{Error, Result};
use crate::field::{correlate, relative_error_arrays, transform_field, FeatureField, Padding};
use crate::group::{GroupElement, GroupSpec, Rep};

/// Seed of the coefficient draws in [`equivariance_report`].
pub const REPORT_SEED: u64 = 0x5EED;

/// Whether `g` is handled by the exact pixel-permutation path.
fn is_exact(g: &GroupElement) -> bool {
    g.rotation.quarter_turns().is_some()
}

/// Zeroes everything outside the disc of the given radius about the center.
fn masked(data: &Array3<f64>, radius: f64) -> Array3<f64> {
    let (h, w, _) = data.dim();
    let (cy, cx) = ((h as f64 - 1.0) / 2.0, (w as f64 - 1.0) / 2.0);
    let mut out = data.clone();
    for ((y, x, _), v) in out.indexed_iter_mut() {
        if (x as f64 - cx).hypot(cy - y as f64) > radius {
            *v = 0.0;
        }
    }
    out
}

/// Radius of the comparison disc for a `size`-pixel input and a `k × k`
/// stencil: the stencil footprint of every compared output pixel stays
/// inside the inscribed circle of the input, with a one-pixel margin for
/// interpolation.
pub fn comparison_radius(size: usize, k: usize) -> f64 {
    (size as f64 - 1.0) / 2.0 - (k / 2) as f64 * std::f64::consts::SQRT_2 - 1.0
}

/// `relative_error(correlate(g·f), g·correlate(f))`.
///
/// On the exact path the whole valid output is compared; otherwise only the
/// central disc of radius [`comparison_radius`], outside of which rotated
/// corners are zero-filled.
pub fn equivariance_error(
    bank: &StencilBank,
    rep_in: &Rep,
    rep_out: &Rep,
    g: &GroupElement,
    test: &FeatureField,
) -> Result<f64> {
    let test = FeatureField::new(test.data.clone(), rep_in.clone())?;
    let moved = transform_field(&test, g)?;
    error_with_moved(bank, rep_out, g, &test, &moved)
}

fn error_with_moved(
    bank: &StencilBank,
    rep_out: &Rep,
    g: &GroupElement,
    test: &FeatureField,
    moved: &FeatureField,
) -> Result<f64> {
    let a = correlate(moved, bank, rep_out, Padding::Valid)?;
    let b = transform_field(&correlate(test, bank, rep_out, Padding::Valid)?, g)?;
    if is_exact(g) {
        return relative_error_arrays(&a.data, &b.data);
    }
    let r = comparison_radius(test.height(), bank.size);
    if r <= 0.0 {
        return Err(Error::FieldTooSmall { height: test.height(), width: test.width(), size: bank.size });
    }
    relative_error_arrays(&masked(&a.data, r), &masked(&b.data, r))
}

/// Layers compared in a report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReportMethod {
    Steerable(Method),
    /// i.i.d. uniform[−1, 1] stencil weights.
    Random,
}

impl ReportMethod {
    /// `fd`, `rbf`, `gauss` (with the default σ for `size`) or `random`.
    pub fn parse(s: &str, size: usize) -> Result<Self> {
        match s {
            "fd" => Ok(ReportMethod::Steerable(Method::fd())),
            "rbf" => Ok(ReportMethod::Steerable(Method::rbf())),
            "gauss" => Ok(ReportMethod::Steerable(Method::gauss_for_size(size))),
            "random" => Ok(ReportMethod::Random),
            other => Err(Error::Parse(format!("unknown method '{other}'"))),
        }
    }

    pub fn tag(&self) -> String {
        match self {
            ReportMethod::Steerable(Method::Gauss { sigma }) => format!("gauss(σ={sigma})"),
            ReportMethod::Steerable(m) => m.tag().to_string(),
            ReportMethod::Random => "random".to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReportConfig {
    pub group: GroupSpec,
    pub rep_in: Rep,
    pub rep_out: Rep,
    pub size: usize,
    pub max_order: u32,
    pub methods: Vec<ReportMethod>,
    pub draws: usize,
    pub seed: u64,
}

impl ReportConfig {
    /// Trivial → regular layers (trivial → trivial for continuous groups),
    /// total order 2 for 3×3 stencils and 3 for larger ones, 10 draws.
    pub fn new(group: GroupSpec, size: usize, methods: Vec<ReportMethod>) -> Result<Self> {
        let rep_out = if group.is_finite() { crate::group::regular_rep(&group)? } else { Rep::trivial(group) };
        Ok(ReportConfig {
            group,
            rep_in: Rep::trivial(group),
            rep_out,
            size,
            max_order: if size <= 3 { 2 } else { 3 },
            methods,
            draws: 10,
            seed: REPORT_SEED,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AngleError {
    pub element: String,
    pub theta: f64,
    pub flip: bool,
    /// Mean over draws.
    pub error: f64,
}

/// Equivariance errors of one discretization method.
#[derive(Clone, Debug, Serialize)]
pub struct EquivarianceReport {
    pub group: String,
    pub method: String,
    pub size: usize,
    pub rep_in: String,
    pub rep_out: String,
    pub draws: usize,
    pub angles: Vec<AngleError>,
    /// Mean over draws of the angle-averaged error.
    pub mean: f64,
    /// Standard deviation over draws of the angle-averaged error.
    pub std: f64,
}

impl EquivarianceReport {
    pub fn error_at(&self, g: &GroupElement) -> Option<f64> {
        let name = g.to_string();
        self.angles.iter().find(|a| a.element == name).map(|a| a.error)
    }
}

fn random_bank(c_out: usize, c_in: usize, size: usize, rng: &mut ChaCha8Rng) -> StencilBank {
    let mut bank = StencilBank::zeros(c_out, c_in, size, Method::fd());
    bank.weights.iter_mut().for_each(|w| *w = rng.random_range(-1.0..=1.0));
    bank
}

/// Draws the layers of one method: random combinations of the discretized
/// basis, or random stencils.
fn layers(cfg: &ReportConfig, method: &ReportMethod) -> Result<Vec<StencilBank>> {
    let (c_out, c_in) = (cfg.rep_out.dim(), cfg.rep_in.dim());
    match method {
        ReportMethod::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(1);
            Ok((0..cfg.draws).map(|_| random_bank(c_out, c_in, cfg.size, &mut rng)).collect())
        }
        ReportMethod::Steerable(m) => {
            let req = BasisRequest {
                group: cfg.group,
                rep_in: cfg.rep_in.clone(),
                rep_out: cfg.rep_out.clone(),
                max_order: cfg.max_order,
            };
            let mats: Vec<_> = full_basis(&req)?.into_iter().map(|e| e.polymatrix).collect();
            if mats.is_empty() {
                return Err(Error::InvalidArgument("the steerable basis is empty".into()));
            }
            let banks = discretize_basis(&mats, m, cfg.size)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..cfg.draws)
                .map(|_| {
                    let coeffs: Vec<f64> = (0..banks.len()).map(|_| rng.random_range(-1.0..=1.0)).collect();
                    StencilBank::combine(&banks, &coeffs)
                })
                .collect()
        }
    }
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

/// Equivariance errors on the standard test image for every non-identity
/// element of the group (the sampled elements for continuous groups).
pub fn equivariance_report(cfg: &ReportConfig) -> Result<Vec<EquivarianceReport>> {
    let test = FeatureField::new(standard_test_image(cfg.rep_in.dim()), cfg.rep_in.clone())?;
    equivariance_report_on(cfg, &test)
}

pub fn equivariance_report_on(cfg: &ReportConfig, test: &FeatureField) -> Result<Vec<EquivarianceReport>> {
    if cfg.draws == 0 {
        return Err(Error::InvalidArgument("at least one draw is needed".into()));
    }
    let elements: Vec<GroupElement> = cfg.group.elements().into_iter().filter(|g| !g.is_identity()).collect();
    let moved: Vec<FeatureField> =
        elements.par_iter().map(|g| transform_field(test, g)).collect::<Result<_>>()?;
    cfg.methods
        .iter()
        .map(|method| {
            let banks = layers(cfg, method)?;
            // errors[d][a]
            let errors: Vec<Vec<f64>> = banks
                .par_iter()
                .map(|bank| {
                    elements
                        .iter()
                        .zip(&moved)
                        .map(|(g, m)| error_with_moved(bank, &cfg.rep_out, g, test, m))
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<_>>()?;
            let per_draw: Vec<f64> = errors.iter().map(|e| mean_std(e).0).collect();
            let (mean, std) = mean_std(&per_draw);
            let angles = elements
                .iter()
                .enumerate()
                .map(|(a, g)| AngleError {
                    element: g.to_string(),
                    theta: g.theta(),
                    flip: g.flip,
                    error: errors.iter().map(|e| e[a]).sum::<f64>() / errors.len() as f64,
                })
                .collect();
            Ok(EquivarianceReport {
                group: cfg.group.to_string(),
                method: method.tag(),
                size: cfg.size,
                rep_in: cfg.rep_in.name().to_string(),
                rep_out: cfg.rep_out.name().to_string(),
                draws: cfg.draws,
                angles,
                mean,
                std,
            })
        })
        .collect()
}

/// Aligned text table: one summary row per method, then per-element errors.
pub fn report_text(reports: &[EquivarianceReport]) -> String {
    let mut s = String::new();
    let Some(first) = reports.first() else { return s };
    let _ = writeln!(
        s,
        "group {}  {} -> {}  {}x{}  {} draws",
        first.group, first.rep_in, first.rep_out, first.size, first.size, first.draws
    );
    let _ = writeln!(s, "{:<14} {:>12} {:>12}", "method", "mean", "std");
    for r in reports {
        let _ = writeln!(s, "{:<14} {:>12.4e} {:>12.4e}", r.method, r.mean, r.std);
    }
    let _ = writeln!(s);
    let _ = write!(s, "{:<14}", "element");
    for r in reports {
        let _ = write!(s, " {:>14}", r.method);
    }
    let _ = writeln!(s);
    for (a, angle) in first.angles.iter().enumerate() {
        let _ = write!(s, "{:<14}", angle.element);
        for r in reports {
            let _ = write!(s, " {:>14.4e}", r.angles[a].error);
        }
        let _ = writeln!(s);
    }
    s
}
