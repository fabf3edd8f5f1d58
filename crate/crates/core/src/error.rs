use thiserror::Error;

use crate::poly::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error: {0}")]
    Parse(ParseError),
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("polynomial has degree {degree} in variable {var}, need at least {required}")]
    DegreeTooLow {
        var: usize,
        degree: i64,
        required: i64,
    },
    #[error("expected a univariate polynomial")]
    NotUnivariate,
    #[error("zero polynomial")]
    ZeroPolynomial,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("isolating intervals overlap")]
    OverlappingIntervals,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CadError {
    #[error("variable {0} does not occur in the set")]
    VariableAbsent(usize),
    #[error("empty input set")]
    EmptyInput,
    #[error("not a permutation of {0} variables")]
    InvalidOrdering(usize),
    #[error("polynomial involves variable {0}, which has no coordinate")]
    MissingCoordinate(usize),
    #[error("polynomial vanishes identically over the point")]
    Nullified,
    #[error("root index {index} out of range ({count} roots)")]
    NoSuchRoot { index: usize, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("empty basis")]
    EmptyBasis,
    #[error("empty generating set")]
    EmptyInput,
    #[error("monomial order ranks {got} variables, expected {expected}")]
    OrderMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeuristicError {
    #[error("no admissible orderings")]
    NoAdmissible,
    #[error("projection failed under every admissible ordering")]
    AllFailed,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureError {
    #[error("expected {expected} variables, got {got}")]
    WrongVariableCount { expected: usize, got: usize },
    #[error("no polynomials")]
    NoPolynomials,
    #[error("basis is not the reduced Groebner basis of the equalities")]
    InconsistentBasis,
    #[error("need at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("expected {expected} columns, got {got}")]
    SchemaMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SvmError {
    #[error("no training rows")]
    Empty,
    #[error("{rows} rows but {labels} labels")]
    LabelCount { rows: usize, labels: usize },
    #[error("labels must be +1 or -1")]
    BadLabel,
    #[error("row length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite feature value")]
    NonFinite,
    #[error("parameters must be positive")]
    BadParameter,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectionError {
    #[error("no evaluated samples")]
    EmptyCounts,
    #[error("need k >= 2 folds, got {0}")]
    TooFewFolds(usize),
    #[error("class {label} has {count} members, fewer than {k} folds")]
    ClassTooSmall { label: i8, count: usize, k: usize },
    #[error("empty parameter grid")]
    EmptyGrid,
    #[error("lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("no features")]
    NoFeatures,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt file: {0}")]
    Corrupt(String),
    #[error("unsupported format_version {found}, expected {expected}")]
    VersionMismatch { found: u64, expected: u64 },
    #[error("model file has no standardization statistics")]
    MissingStats,
    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),
    #[error("degenerate split: {0}")]
    DegenerateSplit(String),
    #[error("invalid problem {id}: {reason}")]
    InvalidProblem { id: String, reason: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Svm(#[from] SvmError),
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
