//! Certified numerics for p-orthonormal basis pairs on finite-dimensional
//! `l^p` spaces.
//!
//! A p-orthonormal basis is a basis whose synthesis map is an `l^p` isometry
//! and whose coordinate functionals all have unit norm in the conjugate
//! exponent. Two such bases overlap in a cross-Gram matrix, and the size of
//! its largest entry (the mutual coherence) controls how strongly a vector
//! can concentrate on small index sets in both expansions at once.
//!
//! The crate builds and validates such basis pairs ([`bases`]), measures
//! their coherence ([`grams`]), bounds restricted composition operators in
//! the induced p-to-p norm ([`operators`]), and turns the coherence data into
//! per-vector uncertainty certificates with explicit slack ([`uncertainty`]).
//! [`search`] enumerates admissible index-set pairs and hill-climbs for
//! near-extremal vectors.
//!
//! Everything is `no_std` + `alloc`; all randomness is seeded and
//! reproducible across platforms ([`rng`]).

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod bases;
pub mod digest;
mod error;
pub mod grams;
mod linalg;
pub mod operators;
pub mod rng;
pub mod search;
pub mod spaces;
pub mod tolerances;
pub mod uncertainty;

pub use bases::{BasisPair, Clause, ValidationReport};
pub use error::{Error, Result};
pub use grams::{AdmissibilityReport, CrossGram, SubsetPair};
pub use operators::{EstimateMethod, NormEstimate};
pub use search::{AdmissibleEntry, ExtremalResult, SearchConfig, SharpnessRow, StepSchedule};
pub use spaces::{DenseMatrix, DenseVector, Exponent, Field};
pub use uncertainty::{AnnihilationReport, Certificate, ReductionCheck, TailBoundReport, Variant, VerifyContext};
