//! The `hahn` command line: series arithmetic, evaluation, Fredholm inversion and
//! Bessel resolvent reports as JSON and CSV.

pub mod commands;
pub mod parse;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hahn::bessel::Order;
use hahn::LogPoint;
use num_rational::BigRational;

use parse::{Arc, Ray};

#[derive(Debug, Parser)]
#[command(name = "hahn", version, about = "Generalized power series on the logarithmic cover")]
#[command(after_help = "Environment:\n  HAHN_GENERATOR_DIGITS  digits for `pi` orders and generators that do not give their own [default: 15]")]
pub struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Seed for randomly drawn sample points.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Product of two series.
    Mul(MulArgs),
    /// Neumann inverse of a series with invertible constant term.
    Invert(InvertArgs),
    /// Entire power series composed with a series.
    Compose(ComposeArgs),
    /// Quotient of two scalar series in the form e_pivot * unit.
    Divide(DivideArgs),
    /// Evaluate a series (or quotient) at points of the cover; CSV out.
    Eval(EvalArgs),
    /// Majorant sum |a| sup|e| over a sector disc.
    Majorant(MajorantArgs),
    /// Recover a coefficient by averaging over an L-fold circle.
    Extract(ExtractArgs),
    /// Invert Id - F for a matrix series by determinant and adjugate.
    Fredholm(FredholmArgs),
    /// Series expansion of the Bessel resolvent kernel in lambda.
    Bessel(BesselArgs),
    /// Mode-by-mode cone kernel and its combined support.
    Cone(ConeArgs),
    /// kappa-suitability of an order family.
    Suitability(SuitabilityArgs),
    /// Weighted Hilbert-Schmidt bound for a kernel coefficient.
    Hsbound(HsboundArgs),
}

#[derive(Debug, Args)]
pub struct MulArgs {
    /// A factor (series JSON; `-` reads standard input). Give it twice, left factor first.
    #[arg(long = "in", value_name = "PATH", required = true)]
    pub inputs: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Truncate to this validity order first; required for exact inputs.
    #[arg(long, value_name = "EXP")]
    pub order: Option<String>,
    /// Iteration cap for the Neumann sum.
    #[arg(long, default_value_t = 4096)]
    pub cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Named {
    /// 1/k!
    Exp,
    /// all ones
    Geometric,
    /// (-1)^k / (2k)! at z^{2k}
    Cos,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Power series coefficients a_0,a_1,... as rationals.
    #[arg(long, value_parser = parse::rational, value_delimiter = ',', conflicts_with = "named", required_unless_present = "named")]
    pub coeffs: Option<Vec<BigRational>>,
    /// A named power series.
    #[arg(long, value_enum)]
    pub named: Option<Named>,
    /// Number of coefficients of a named series.
    #[arg(long, default_value_t = 32)]
    pub kmax: usize,
    /// Truncate to this validity order first.
    #[arg(long, value_name = "EXP")]
    pub order: Option<String>,
    #[arg(long, default_value_t = 4096)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct DivideArgs {
    /// Numerator.
    #[arg(long, value_name = "PATH")]
    pub num: PathBuf,
    /// Denominator.
    #[arg(long, value_name = "PATH")]
    pub den: PathBuf,
    /// Truncate both to this validity order first.
    #[arg(long, value_name = "EXP")]
    pub order: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    /// A point `r,phi`; `phi` may be written with pi, e.g. `0.1,pi/6`.
    #[arg(long = "point", value_parser = parse::point, value_name = "R,PHI")]
    pub points: Vec<LogPoint>,
    /// Geometric radii `r_min,r_max,n,phi`.
    #[arg(long, value_parser = parse::ray, value_name = "RMIN,RMAX,N,PHI")]
    pub ray: Vec<Ray>,
    /// Equally spaced angles `r,phi_min,phi_max,n`.
    #[arg(long, value_parser = parse::arc, value_name = "R,PHIMIN,PHIMAX,N")]
    pub arc: Vec<Arc>,
}

impl PointArgs {
    pub fn collect(&self) -> Vec<LogPoint> {
        let mut v = self.points.clone();
        v.extend(self.ray.iter().flat_map(Ray::points));
        v.extend(self.arc.iter().flat_map(Arc::points));
        v
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Series or quotient document (a quotient has `pivot` and `unit`).
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    #[command(flatten)]
    pub at: PointArgs,
    /// Geometric tail model `first,ratio` for the residual bound.
    #[arg(long, value_name = "FIRST,RATIO")]
    pub tail_geometric: Option<String>,
}

#[derive(Debug, Args)]
pub struct MajorantArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Disc radius.
    #[arg(long, value_parser = parse::real)]
    pub radius: f64,
    /// Sector half-angle; omitted means the whole cover.
    #[arg(long, value_parser = parse::real)]
    pub sigma: Option<f64>,
    /// Boundary samples for log-bearing terms.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Exponent whose coefficient is wanted, e.g. `1/2` or `pi`.
    #[arg(long, value_name = "EXP")]
    pub alpha: String,
    /// Circle radius R.
    #[arg(long, value_parser = parse::real, default_value = "0.5")]
    pub radius: f64,
    /// Number of turns L; the report also gives 2L.
    #[arg(long, default_value_t = 256)]
    pub turns: usize,
    /// Trapezoid nodes per turn.
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
}

#[derive(Debug, Args)]
pub struct FredholmArgs {
    /// Matrix series document `{"dim": n, "entries": [[series, ...], ...]}`.
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Check points; if none are given, `--samples` points are drawn with `--seed`.
    #[arg(long = "point", value_parser = parse::point, value_name = "R,PHI")]
    pub points: Vec<LogPoint>,
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
    /// Radius of the disc the random points are drawn from.
    #[arg(long, value_parser = parse::real, default_value = "0.05")]
    pub sample_radius: f64,
    /// Half-angle of the sector the random points are drawn from.
    #[arg(long, value_parser = parse::real, default_value = "pi")]
    pub sigma: f64,
    /// Largest dimension accepted.
    #[arg(long, default_value_t = 6)]
    pub cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    /// The inequalities as usually stated.
    Displayed,
    /// With every factor the estimates produce.
    Proof,
}

#[derive(Debug, Args)]
pub struct BesselArgs {
    /// Order: `1/2`, `2`, `2.5`, `pi` or `pi:DIGITS`.
    #[arg(long, value_parser = parse::order)]
    pub nu: Order,
    #[arg(long, value_parser = parse::real)]
    pub x: f64,
    #[arg(long, value_parser = parse::real)]
    pub y: f64,
    /// Number of even powers kept, K.
    #[arg(long, default_value_t = 25)]
    pub terms: usize,
    /// Spectral parameter `r,phi`; repeatable.
    #[arg(long = "lambda", value_parser = parse::point, value_name = "R,PHI")]
    pub lambdas: Vec<LogPoint>,
    /// Geometric sweep of |lambda|: `r_min,r_max,n,phi`.
    #[arg(long, value_parser = parse::ray, value_name = "RMIN,RMAX,N,PHI")]
    pub ray: Vec<Ray>,
    /// Compare each evaluation with the closed Bessel/Hankel product.
    #[arg(long)]
    pub check_direct: bool,
    /// Emit the CSV sweep `lambda_r,lambda_phi,re,im,abs_diff` instead of JSON.
    #[arg(long)]
    pub csv: bool,
    /// Include the coefficient bound sweep.
    #[arg(long)]
    pub bounds: bool,
    /// Largest k in the bound sweep.
    #[arg(long, default_value_t = 20)]
    pub kmax: usize,
    #[arg(long, value_parser = parse::positive, value_delimiter = ',', default_value = "0.5,1,2")]
    pub radii: Vec<f64>,
    /// Lower end c of the x range (non-integer orders).
    #[arg(long, value_parser = parse::real, default_value = "1")]
    pub c: f64,
    /// Smallest radius r0 (non-integer orders).
    #[arg(long, value_parser = parse::real, default_value = "0.5")]
    pub r0: f64,
    #[arg(long, value_enum, default_value_t = Form::Displayed)]
    pub form: Form,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    /// sqrt(q) for q = 0..=qmax
    SqrtIntegers,
    /// Laplacian spectrum of the round n-sphere
    Sphere,
    /// explicit `--orders`
    List,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    #[arg(long, default_value_t = 1000)]
    pub qmax: u64,
    /// Sphere dimension.
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Largest sphere mode.
    #[arg(long = "modes", default_value_t = 8)]
    pub k_max: u32,
    /// `nu:m,...` for the list family.
    #[arg(long, value_parser = parse::order_item, value_delimiter = ',', required_if_eq("family", "list"))]
    pub orders: Option<Vec<(Order, u64)>>,
}

#[derive(Debug, Args)]
pub struct ConeArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_parser = parse::real, default_value = "1")]
    pub x: f64,
    #[arg(long, value_parser = parse::real, default_value = "2")]
    pub y: f64,
    #[arg(long, default_value_t = 8)]
    pub terms: usize,
    /// Leave the per-mode expansions out of the report.
    #[arg(long)]
    pub summary: bool,
}

#[derive(Debug, Args)]
pub struct SuitabilityArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_parser = parse::real, default_value = "1")]
    pub kappa: f64,
    /// Required bound on the suitability quantity.
    #[arg(long, value_parser = parse::real, default_value = "1")]
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightKind {
    /// e^{-kappa x}
    Exponential,
    /// e^{-kappa x^2}
    Gaussian,
}

#[derive(Debug, Args)]
pub struct HsboundArgs {
    #[arg(long, value_parser = parse::order)]
    pub nu: Order,
    /// Coefficient index k (power lambda^{2k}).
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Part 1 or 2; both when omitted.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub part: Option<u8>,
    #[arg(long, value_parser = parse::real, default_value = "3")]
    pub kappa: f64,
    #[arg(long, value_parser = parse::real, default_value = "1")]
    pub c: f64,
    #[arg(long, value_enum, default_value_t = WeightKind::Exponential)]
    pub weight: WeightKind,
    /// Radius R; defaults to kappa/3 (exponential) or c kappa/8 (gaussian).
    #[arg(long, value_parser = parse::real)]
    pub radius: Option<f64>,
    /// Upper end of the quadrature box; defaults to c + 60.
    #[arg(long, value_parser = parse::real)]
    pub cut: Option<f64>,
    #[arg(long)]
    pub panels_per_unit: Option<usize>,
    /// Gauss-Legendre nodes per panel.
    #[arg(long)]
    pub nodes: Option<usize>,
}

/// Failure of a run, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2.
    Usage(String),
    /// Exit 1, reported as a JSON document.
    Domain(hahn::Error),
    /// Exit 1.
    Io(String),
}

impl From<hahn::Error> for CliError {
    fn from(e: hahn::Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Domain(e) => hahn::json::error_to_json(e),
            CliError::Io(m) => serde_json::json!({"error": "IoError", "message": m}),
            CliError::Usage(m) => serde_json::json!({"error": "UsageError", "message": m}),
        }
    }
}

/// Runs one command and returns the text to write.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    commands::dispatch(cli)
}
