//! Centralized numeric tolerances. Every comparison threshold used by the
//! library lives here so reports stay comparable across modules and the
//! values are auditable in one place.

/// Deviation of a product from the identity (biorthogonality, unitarity).
pub const IDENTITY_DEFECT: f64 = 1e-10;

/// Deviation of a basis vector or functional norm from 1.
pub const UNIT_NORM_DEFECT: f64 = 1e-10;

/// Empirical synthesis-isometry defect |norm(Ta) - norm(a)| on test vectors,
/// and the structural generalized-permutation defect.
pub const ISOMETRY_DEFECT: f64 = 1e-10;

/// Singular values at or below this are treated as zero in rank decisions.
pub const RANK_GAP: f64 = 1e-8;

/// Certificates may undershoot zero slack by at most this much before they
/// count as violations (pure rounding allowance).
pub const SLACK_FLOOR: f64 = -1e-9;

/// Largest coefficient magnitude tolerated outside a declared support set,
/// relative to the vector norm.
pub const SUPPORT_LEAK: f64 = 1e-10;

/// Two independent evaluation routes of the same quantity must agree to
/// this absolute tolerance at p = 2.
pub const DUAL_ROUTE: f64 = 1e-12;

/// Relative convergence threshold for iterative norm estimation.
pub const POWER_ITERATION_REL: f64 = 1e-10;
