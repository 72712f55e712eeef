use thiserror::Error;

/// Errors raised by series arithmetic, evaluation and the Bessel layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot order exponents: generator enclosure straddles {threshold}; supply a tighter enclosure")]
    UndecidableComparison { threshold: String },

    #[error("exponent groups differ")]
    GroupMismatch,

    #[error("exponent {0} does not belong to the declared group")]
    NotInGroup(String),

    #[error("support is not admissible: {0}")]
    NotAdmissible(String),

    #[error("constant coefficient is missing or not invertible")]
    NotInvertibleConstant,

    #[error("iteration cap {cap} reached before the validity order")]
    IterationCapExceeded { cap: usize },

    #[error("series has no validity bound; truncate it before expanding an infinite sum")]
    UnboundedValidity,

    #[error("division by a series that vanishes to its validity order")]
    DivisionByZeroSeries,

    #[error("power series composition needs f - f(0) to have positive valuation")]
    NonPositiveValuation,

    #[error("log factor evaluated off the principal branch (r = {r}, phi = {phi})")]
    BranchCutHit { r: f64, phi: f64 },

    #[error("coefficient extraction is only defined for pure power groups")]
    UnsupportedGroup,

    #[error("matrix dimension {dim} exceeds cap {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },

    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("validity order of the family must be positive")]
    NonPositiveValidity,

    #[error("|z| = {modulus} exceeds the series radius {radius}")]
    RadiusExceeded { modulus: f64, radius: f64 },

    #[error("order {nu} is within {guard:e} of an integer; use the integer branch")]
    NearIntegerOrder { nu: f64, guard: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature budget exceeded: {0}")]
    QuadratureBudgetExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag used by the CLI error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UndecidableComparison { .. } => "UndecidableComparison",
            Error::GroupMismatch => "GroupMismatch",
            Error::NotInGroup(_) => "NotInGroup",
            Error::NotAdmissible(_) => "NotAdmissible",
            Error::NotInvertibleConstant => "NotInvertibleConstant",
            Error::IterationCapExceeded { .. } => "IterationCapExceeded",
            Error::UnboundedValidity => "UnboundedValidity",
            Error::DivisionByZeroSeries => "DivisionByZeroSeries",
            Error::NonPositiveValuation => "NonPositiveValuation",
            Error::BranchCutHit { .. } => "BranchCutHit",
            Error::UnsupportedGroup => "UnsupportedGroup",
            Error::DimensionCapExceeded { .. } => "DimensionCapExceeded",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NonPositiveValidity => "NonPositiveValidity",
            Error::RadiusExceeded { .. } => "RadiusExceeded",
            Error::NearIntegerOrder { .. } => "NearIntegerOrder",
            Error::Domain(_) => "DomainError",
            Error::QuadratureBudgetExceeded(_) => "QuadratureBudgetExceeded",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
