use thiserror::Error;

/// Errors raised by the analysis operations.
///
/// Every variant maps to a stable machine-readable code and to one of the
/// command line exit classes (see [`GkzError::exit_code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GkzError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix does not have full rank over the rationals")]
    RankDeficient,
    #[error("cone is not full-dimensional")]
    NotFullDimensional,
    #[error("cone has a nonzero lineality space")]
    NotPointed,
    #[error("matrix is not homogeneous: no integral h with h(a_i) = 1 for all columns")]
    NotHomogeneous,
    #[error("parameter is strongly resonant")]
    ParameterResonant,
    #[error("columns do not span the integer lattice")]
    LatticeNotSpanned,
    #[error("column {0} is out of range")]
    InvalidColumn(usize),
    #[error("column {0} is zero")]
    ZeroColumn(usize),
    #[error("face enumeration supports at most {max} columns, got {got}")]
    TooManyColumns { max: usize, got: usize },
    #[error("toric filtration search exceeded its bound of {0} candidates")]
    FiltrationBoundExceeded(usize),
    #[error("search exceeded its bound: {0}")]
    SearchBoundExceeded(String),
    #[error("no section representative passed the non-membership test within radius {0}")]
    SectionSearchFailed(usize),
    #[error("operands have different variable counts ({0} vs {1})")]
    VariableMismatch(usize, usize),
    #[error("first row of the dehomogenized matrix is not all ones")]
    FirstRowNotOnes,
    #[error("diagrams are only available in dimension 1 or 2, got {0}")]
    DimensionUnsupported(usize),
}

impl GkzError {
    pub fn code(&self) -> &'static str {
        match self {
            GkzError::Parse(_) => "parse_error",
            GkzError::DimensionMismatch(_) => "dimension_mismatch",
            GkzError::RankDeficient => "rank_deficient",
            GkzError::NotFullDimensional => "not_full_dimensional",
            GkzError::NotPointed => "not_pointed",
            GkzError::NotHomogeneous => "not_homogeneous",
            GkzError::ParameterResonant => "parameter_resonant",
            GkzError::LatticeNotSpanned => "lattice_not_spanned",
            GkzError::InvalidColumn(_) => "invalid_column",
            GkzError::ZeroColumn(_) => "zero_column",
            GkzError::TooManyColumns { .. } => "too_many_columns",
            GkzError::FiltrationBoundExceeded(_) => "filtration_bound_exceeded",
            GkzError::SearchBoundExceeded(_) => "search_bound_exceeded",
            GkzError::SectionSearchFailed(_) => "section_search_failed",
            GkzError::VariableMismatch(..) => "variable_mismatch",
            GkzError::FirstRowNotOnes => "first_row_not_ones",
            GkzError::DimensionUnsupported(_) => "dimension_unsupported",
        }
    }

    /// 2 for malformed input, 4 when a search cap was exhausted, 3 for any
    /// other violated precondition.
    pub fn exit_code(&self) -> i32 {
        match self {
            GkzError::Parse(_) => 2,
            GkzError::FiltrationBoundExceeded(_)
            | GkzError::SearchBoundExceeded(_)
            | GkzError::SectionSearchFailed(_) => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, GkzError>;
