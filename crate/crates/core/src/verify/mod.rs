//! Verification harness: equivariance errors, convergence orders and
//! completeness oracles.

mod equivariance;
mod image;
mod oracle;
mod order;

pub use equivariance::{
    comparison_radius, equivariance_error, equivariance_report, equivariance_report_on, report_text, AngleError,
    EquivarianceReport, ReportConfig, ReportMethod, REPORT_SEED,
};
pub use image::{band_limited_noise, standard_test_image, TEST_IMAGE_BAND, TEST_IMAGE_SEED, TEST_IMAGE_SIZE};
pub use oracle::{brute_force_basis, brute_force_span, compare_spans, SpanComparison, ORACLE_MAX_ORDER};
pub use order::{fd_order_estimate, fd_order_estimate_with, ORDER_STEPS};
