use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error(
        "eigensolver did not converge after {iterations} iterations (off-diagonal norm {off_diagonal:e})"
    )]
    NoConvergence { iterations: usize, off_diagonal: f64 },

    #[error("mass matrix not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("Hausdorff undefined for empty set")]
    EmptySet,

    #[error("basis {argument} is rank deficient")]
    RankDeficient { argument: &'static str },

    #[error("invalid interval [{a}, {b}]: need finite a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("shift {shift} exceeds the minimal Galerkin eigenvalue {minimum}")]
    ShiftTooLarge { shift: f64, minimum: f64 },

    #[error("reference basis degenerate")]
    DegenerateReference,

    #[error("window smaller than requested dimension ({window} < {requested})")]
    WindowTooSmall { window: usize, requested: usize },

    #[error("empty filtered subspace")]
    EmptySelection,

    #[error("invalid selection policy: {0}")]
    InvalidPolicy(String),

    #[error("invalid refinement: {0}")]
    InvalidRefinement(String),

    #[error("refinement {coarse} does not nest into {fine}")]
    NotNested { coarse: String, fine: String },

    #[error("reference dimension must be positive, got {0}")]
    InvalidReferenceDimension(i64),
}
