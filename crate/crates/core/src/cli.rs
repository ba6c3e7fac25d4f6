//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for invalid input (flags, files, formats),
//! 2 for numerical failures.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::basis::{full_basis, steerability_residual, BasisFile, BasisRequest, MAX_ORDER, RESIDUAL_TOL};
use crate::discretize::{discretize_basis, Method, OrderCap, StencilBank};
use crate::error::{Error, Result};
use crate::field::{correlate, read_csv, read_fld, untyped_rep, write_fld, FeatureField, Padding};
use crate::group::{parse_rep, GroupSpec, DEFAULT_SAMPLE_COUNT};
use crate::verify::{equivariance_report, report_text, ReportConfig, ReportMethod};

#[derive(Parser, Debug)]
#[command(name = "steerpdo", version, about = "Steerable PDO bases, stencils and equivariance checks")]
pub struct Cli {
    /// Suppress status messages.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate the steerable PDO basis between two representations.
    GenBasis(GenBasisArgs),
    /// Turn a basis file into stencil banks.
    Discretize(DiscretizeArgs),
    /// Correlate a field with stencil banks.
    Apply(ApplyArgs),
    /// Print the largest steerability residual of a basis file.
    Check(CheckArgs),
    /// Equivariance errors of random steerable layers on the test image.
    EquivarianceReport(ReportArgs),
}

#[derive(Args, Debug)]
pub struct GenBasisArgs {
    /// C2, C4, C8, C16, D2, D4, D8, D16, SO2, O2 or FLIP (any CN / DN works).
    #[arg(long)]
    pub group: String,
    /// trivial, vector, regular, quotient:N/M, irrep:k or irrep:j,k.
    #[arg(long)]
    pub in_rep: String,
    /// Same grammar as --in-rep.
    #[arg(long)]
    pub out_rep: String,
    /// Largest total derivative order.
    #[arg(long, allow_negative_numbers = true)]
    pub max_order: i64,
    /// Sampled elements for continuous groups.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_COUNT)]
    pub samples: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Fd,
    Rbf,
    Gauss,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderCapArg {
    /// Each partial order below the stencil size.
    PerAxis,
    /// Also cap the total order at --max-total-order.
    Total,
}

#[derive(Args, Debug)]
pub struct DiscretizeArgs {
    #[arg(long)]
    pub basis: PathBuf,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Stencil size (odd).
    #[arg(long, default_value_t = 3)]
    pub size: usize,
    /// Gaussian standard deviation (default 1 for 3x3, 1.3 otherwise).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Degree of the polynomial augmentation for rbf.
    #[arg(long, default_value_t = 2)]
    pub rbf_degree: u32,
    /// Odd exponent p of the polyharmonic spline r^p for rbf.
    #[arg(long, default_value_t = 3)]
    pub rbf_exponent: u32,
    /// Derivative order limit for fd.
    #[arg(long, value_enum, default_value_t = OrderCapArg::PerAxis)]
    pub order_cap: OrderCapArg,
    /// Total order limit used with --order-cap total.
    #[arg(long, default_value_t = 2)]
    pub max_total_order: u32,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PadArg {
    Valid,
    Zero,
}

#[derive(Args, Debug)]
pub struct ApplyArgs {
    /// Stencil file written by `discretize`.
    #[arg(long)]
    pub stencils: PathBuf,
    /// Input field (.fld, or .csv with one grid row per line).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = PadArg::Valid)]
    pub pad: PadArg,
    /// Comma-separated weights of the banks (default: all ones).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub basis: PathBuf,
    /// Sampled elements for continuous groups.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_COUNT)]
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long)]
    pub group: String,
    /// Comma-separated subset of fd, rbf, gauss, random.
    #[arg(long, value_delimiter = ',', default_value = "fd,rbf,gauss,random")]
    pub methods: Vec<String>,
    #[arg(long, default_value_t = 3)]
    pub size: usize,
    /// Input representation (default trivial).
    #[arg(long)]
    pub in_rep: Option<String>,
    /// Output representation (default regular, trivial for continuous groups).
    #[arg(long)]
    pub out_rep: Option<String>,
    /// Random coefficient draws per method.
    #[arg(long, default_value_t = 10)]
    pub draws: usize,
    /// Sampled elements for continuous groups.
    #[arg(long, default_value_t = 16)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code. Messages go to standard output and error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli.command, cli.quiet) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// 2 for numerical failures, 1 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DecompositionFailed { .. } | Error::NotSteerable { .. } | Error::SingularSystem(_) | Error::DegenerateFit(_) => 2,
        _ => 1,
    }
}

fn flag(name: &str, e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("--{name}: {m}")),
        Error::InvalidArgument(m) => Error::InvalidArgument(format!("--{name}: {m}")),
        Error::IncompatibleIrrep { irrep, context } => {
            Error::IncompatibleIrrep { irrep: format!("{irrep} (--{name})"), context }
        }
        other => other,
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, name: &str) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("--{name}: cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("--{name}: {}: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn parse_group(s: &str, samples: usize) -> Result<GroupSpec> {
    if samples == 0 {
        return Err(Error::InvalidArgument("--samples must be positive".into()));
    }
    Ok(s.parse::<GroupSpec>().map_err(|e| flag("group", e))?.with_samples(samples))
}

pub fn execute(cmd: &Command, quiet: bool) -> Result<()> {
    match cmd {
        Command::GenBasis(a) => gen_basis(a, quiet),
        Command::Discretize(a) => discretize(a, quiet),
        Command::Apply(a) => apply(a, quiet),
        Command::Check(a) => check(a),
        Command::EquivarianceReport(a) => report(a),
    }
}

fn gen_basis(a: &GenBasisArgs, quiet: bool) -> Result<()> {
    if a.max_order < 0 {
        return Err(Error::InvalidArgument("max-order must be ≥ 0".into()));
    }
    if a.max_order > MAX_ORDER as i64 {
        return Err(Error::InvalidArgument(format!("max-order must be ≤ {MAX_ORDER}")));
    }
    let group = parse_group(&a.group, a.samples)?;
    let rep_in = parse_rep(&group, &a.in_rep).map_err(|e| flag("in-rep", e))?;
    let rep_out = parse_rep(&group, &a.out_rep).map_err(|e| flag("out-rep", e))?;
    let req = BasisRequest { group, rep_in, rep_out, max_order: a.max_order as u32 };
    let elements = full_basis(&req)?;
    write_json(&a.out, &BasisFile::new(&req, &elements))?;
    if !quiet {
        println!("wrote {} basis elements to {}", elements.len(), a.out.display());
    }
    Ok(())
}

fn method_of(a: &DiscretizeArgs) -> Result<Method> {
    if a.sigma.is_some() && a.method != MethodArg::Gauss {
        return Err(Error::InvalidArgument("--sigma only applies to --method gauss".into()));
    }
    Ok(match a.method {
        MethodArg::Fd => Method::Fd {
            cap: match a.order_cap {
                OrderCapArg::PerAxis => OrderCap::PerAxis,
                OrderCapArg::Total => OrderCap::Total(a.max_total_order),
            },
        },
        MethodArg::Rbf => Method::Rbf { exponent: a.rbf_exponent, poly_degree: a.rbf_degree },
        MethodArg::Gauss => match a.sigma {
            Some(sigma) => Method::gauss(sigma),
            None => Method::gauss_for_size(a.size),
        },
    })
}

fn discretize(a: &DiscretizeArgs, quiet: bool) -> Result<()> {
    if a.size.is_multiple_of(2) || a.size == 0 {
        return Err(Error::InvalidArgument(format!("--size must be odd, got {}", a.size)));
    }
    let method = method_of(a)?;
    let basis: BasisFile = read_json(&a.basis, "basis")?;
    let banks = discretize_basis(&basis.polymatrices(), &method, a.size)?;
    write_json(&a.out, &banks)?;
    if !quiet {
        println!("wrote {} stencil banks to {}", banks.len(), a.out.display());
    }
    Ok(())
}

/// The combined bank `Σ coeffs[b] · banks[b]` (all ones by default).
pub fn combined_bank(banks: &[StencilBank], coeffs: Option<&[f64]>) -> Result<StencilBank> {
    let ones = vec![1.0; banks.len()];
    let coeffs = coeffs.unwrap_or(&ones);
    if coeffs.len() != banks.len() {
        return Err(Error::InvalidArgument(format!(
            "--coeffs has {} values for {} stencil banks",
            coeffs.len(),
            banks.len()
        )));
    }
    StencilBank::combine(banks, coeffs).map_err(|e| flag("stencils", e))
}

fn apply(a: &ApplyArgs, quiet: bool) -> Result<()> {
    let banks: Vec<StencilBank> = read_json(&a.stencils, "stencils")?;
    let bank = combined_bank(&banks, a.coeffs.as_deref())?;
    let is_csv = a.input.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let data = if is_csv { read_csv(&a.input, bank.c_in) } else { read_fld(&a.input) }
        .map_err(|e| flag("input", e))?;
    let field = FeatureField::untyped(data)?;
    let out_rep = untyped_rep(bank.c_out);
    let pad = match a.pad {
        PadArg::Valid => Padding::Valid,
        PadArg::Zero => Padding::Zero,
    };
    let out = correlate(&field, &bank, &out_rep, pad)?;
    write_fld(&a.out, &out.data)?;
    let (h, w, c) = out.data.dim();
    if !quiet {
        println!("wrote {h}x{w}x{c} field to {}", a.out.display());
    }
    Ok(())
}

fn check(a: &CheckArgs) -> Result<()> {
    let basis: BasisFile = read_json(&a.basis, "basis")?;
    if a.samples == 0 {
        return Err(Error::InvalidArgument("--samples must be positive".into()));
    }
    let group = basis.group.with_samples(a.samples);
    let mut worst: f64 = 0.0;
    for e in &basis.elements {
        worst = worst.max(steerability_residual(&e.polymatrix, &basis.rep_in, &basis.rep_out, &group)?);
    }
    println!("max steerability residual: {worst:.3e} over {} elements", basis.elements.len());
    if worst > RESIDUAL_TOL {
        return Err(Error::NotSteerable { residual: worst, tol: RESIDUAL_TOL });
    }
    Ok(())
}

fn report(a: &ReportArgs) -> Result<()> {
    if a.size.is_multiple_of(2) || a.size == 0 {
        return Err(Error::InvalidArgument(format!("--size must be odd, got {}", a.size)));
    }
    let group = parse_group(&a.group, a.samples)?;
    let methods =
        a.methods.iter().map(|m| ReportMethod::parse(m.trim(), a.size)).collect::<Result<Vec<_>>>().map_err(|e| flag("methods", e))?;
    let mut cfg = ReportConfig::new(group, a.size, methods)?;
    if let Some(r) = &a.in_rep {
        cfg.rep_in = parse_rep(&group, r).map_err(|e| flag("in-rep", e))?;
    }
    if let Some(r) = &a.out_rep {
        cfg.rep_out = parse_rep(&group, r).map_err(|e| flag("out-rep", e))?;
    }
    if a.draws == 0 {
        return Err(Error::InvalidArgument("--draws must be positive".into()));
    }
    cfg.draws = a.draws;
    let reports = equivariance_report(&cfg)?;
    let text = match a.format {
        FormatArg::Json => serde_json::to_string_pretty(&reports)? + "\n",
        FormatArg::Text => report_text(&reports),
    };
    match &a.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
