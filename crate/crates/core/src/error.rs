use thiserror::Error;

/// Errors raised by the symbolic and numerical engines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at substitution: denominator `{0}` vanishes")]
    PoleAtSubstitution(String),
    #[error("pole at kappa = 0 in `{0}`")]
    PoleAtKappaZero(String),
    #[error("`rt` cannot be bound directly; bind hbar and kappa instead")]
    BindsDerivedRoot,
    #[error("square root of `{0}` is not representable after substitution")]
    UnrepresentableRoot(String),
    #[error("degree overflow: result would have degree {0} > 4")]
    DegreeOverflow(usize),
    #[error("element is not in the span of the basis; residual `{residual}`")]
    NotInSpan { residual: String },
    #[error("basis elements are linearly dependent (element `{0}`)")]
    LinearlyDependent(String),
    #[error("closure failure: [{left}, {right}] leaves the span; residual `{residual}`")]
    ClosureFailure {
        left: String,
        right: String,
        residual: String,
    },
    #[error("change-of-basis matrix is singular")]
    SingularChangeOfBasis,
    #[error("operator `{0}` is not at most quadratic")]
    NotQuadratic(String),
    #[error("adjoint matrix does not split into commuting diagonal and nilpotent parts")]
    UnsupportedAdjoint,
    #[error("derivative-of-exponential series does not terminate for `{0}`")]
    NonTerminatingDuhamel(String),
    #[error("symplectic defect {0:e} exceeds tolerance")]
    SymplecticDefect(f64),
    #[error("unbound symbol `{0}` in numeric evaluation")]
    UnboundSymbol(String),
    #[error("non-real value {0} where a real number was expected")]
    NotReal(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("input exceeds 64 KiB")]
    InputTooLarge,
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake-case name of the variant, for machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::PoleAtSubstitution(_) => "pole_at_substitution",
            Error::PoleAtKappaZero(_) => "pole_at_kappa_zero",
            Error::BindsDerivedRoot => "binds_derived_root",
            Error::UnrepresentableRoot(_) => "unrepresentable_root",
            Error::DegreeOverflow(_) => "degree_overflow",
            Error::NotInSpan { .. } => "not_in_span",
            Error::LinearlyDependent(_) => "linearly_dependent",
            Error::ClosureFailure { .. } => "closure_failure",
            Error::SingularChangeOfBasis => "singular_change_of_basis",
            Error::NotQuadratic(_) => "not_quadratic",
            Error::UnsupportedAdjoint => "unsupported_adjoint",
            Error::NonTerminatingDuhamel(_) => "non_terminating_duhamel",
            Error::SymplecticDefect(_) => "symplectic_defect",
            Error::UnboundSymbol(_) => "unbound_symbol",
            Error::NotReal(_) => "not_real",
            Error::Syntax { .. } => "syntax_error",
            Error::InputTooLarge => "input_too_large",
            Error::InvalidWord(_) => "invalid_word",
            Error::UnknownAlgebra(_) => "unknown_algebra",
            Error::Invalid(_) => "invalid",
        }
    }
}
