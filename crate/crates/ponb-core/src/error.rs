use thiserror::Error;

use crate::spaces::DenseVector;

/// Failure modes across the crate. Every precondition listed on a public
/// operation maps to one of these variants rather than a panic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Exponent outside the open interval (1, inf). The endpoint geometries
    /// have a different isometry group and are deliberately unsupported.
    #[error("exponent {0} must lie strictly between 1 and infinity")]
    ExponentOutOfRange(f64),
    /// Vector norms need p >= 1; smaller exponents are not norms.
    #[error("norm exponent {0} must be at least 1")]
    NormExponentOutOfRange(f64),
    #[error("vector must have at least one entry")]
    EmptyVector,
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("entry count {entries} does not fill a {rows}x{cols} matrix")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        entries: usize,
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("index {index} is outside the universe of size {universe}")]
    IndexOutOfRange { index: usize, universe: usize },
    /// The two sides of a pairwise operation disagree on dimension, exponent
    /// or scalar field.
    #[error("basis pairs are incompatible: {0}")]
    PairMismatch(&'static str),
    /// A map claimed to be an l^p isometry distorts some tested vector.
    #[error("map distorts the p-norm of a tested vector by {distortion:.3e}")]
    NotAnIsometry {
        distortion: f64,
        witness: DenseVector,
    },
    /// The Fourier synthesis matrix is an isometry only at p = 2.
    #[error("the discrete Fourier basis is an l^p isometry only at p = 2, got p = {0}")]
    FourierNeedsPTwo(f64),
    #[error("operation requires p = 2, got p = {0}")]
    RequiresPTwo(f64),
    #[error("basis pair is not unitary at p = 2")]
    NotUnitary,
    /// A vector handed to the tail bound has mass on a coefficient outside
    /// the declared support set.
    #[error("coefficient {index} lies outside the declared support, |coefficient| = {magnitude:.3e}")]
    UnsupportedCoefficient { index: usize, magnitude: f64 },
    /// The certified operator bound is >= 1; the tail inequality is vacuous.
    #[error("operator bound {0} is not strictly below 1")]
    BoundNotContractive(f64),
    /// A certificate or search was requested on a subset pair whose
    /// admissibility product reaches 1.
    #[error("subset pair is inadmissible for this basis pair")]
    Inadmissible,
    #[error("invalid search configuration: {0}")]
    BadConfig(&'static str),
    #[error("iteration and restart budgets must be positive")]
    BadBudget,
    #[error("input collection is empty")]
    EmptyInput,
}

pub type Result<T> = core::result::Result<T, Error>;
