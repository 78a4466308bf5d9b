//! Cross-Gram matrices between two basis pairs, mutual coherence, index-set
//! pairs and the admissibility arithmetic shared by every certificate.
//!
//! The cross-Gram G of pairs (f, tau) and (g, omega) has G[k][j] = g_k(tau_j).
//! Its largest entry magnitude (the mutual coherence mu) combines with the
//! subset sizes into the product mu * |M|^(1/q) * |N|^(1/p); a subset pair is
//! admissible when that product is strictly below 1, and the certificate
//! constant 1 + 1/(1 - product) is finite exactly in that case.


// Inherent float math lives in std; the trait supplies it under no_std.
// Graphs that link std anywhere (tests do) shadow it, idling the import.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use crate::bases::BasisPair;
use crate::error::{Error, Result};
use crate::spaces::{conjugate_exponent, DenseMatrix};

/// Cross-Gram matrix with digests of the two source pairs, so downstream
/// reports can name their inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossGram {
    matrix: DenseMatrix,
    n: usize,
    source_f: u64,
    source_g: u64,
}

impl CrossGram {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Digest of the pair contributing the basis vectors (columns).
    pub fn source_f(&self) -> u64 {
        self.source_f
    }

    /// Digest of the pair contributing the functionals (rows).
    pub fn source_g(&self) -> u64 {
        self.source_g
    }

    /// Entry (k, j): functional k of the second pair applied to basis
    /// vector j of the first.
    pub fn entry(&self, k: usize, j: usize) -> num_complex::Complex64 {
        self.matrix.get(k, j)
    }
}

/// G[k][j] = g_k(tau_j): rows apply the second pair's functionals to the
/// first pair's basis vectors.
pub fn cross_gram(pair_f: &BasisPair, pair_g: &BasisPair) -> Result<CrossGram> {
    if pair_f.dim() != pair_g.dim() {
        return Err(Error::PairMismatch("dimensions differ"));
    }
    if pair_f.p() != pair_g.p() {
        return Err(Error::PairMismatch("exponents differ"));
    }
    let matrix = pair_g.analysis().mul(pair_f.synthesis())?;
    Ok(CrossGram {
        matrix,
        n: pair_f.dim(),
        source_f: pair_f.content_digest(),
        source_g: pair_g.content_digest(),
    })
}

/// Mutual coherence: the largest entry magnitude of the cross-Gram.
pub fn mu_global(gram: &CrossGram) -> f64 {
    gram.matrix.max_abs_entry()
}

/// A pair of index sets (M, N) inside {0, .., universe-1}, stored sorted
/// and deduplicated. Serialized forms are 1-based; everything in memory is
/// 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetPair {
    m: Vec<usize>,
    n: Vec<usize>,
    universe: usize,
}

fn normalize_indices(raw: &[usize], universe: usize) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = Vec::with_capacity(raw.len());
    for &i in raw {
        if i >= universe {
            return Err(Error::IndexOutOfRange { index: i, universe });
        }
        out.push(i);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

impl SubsetPair {
    pub fn new(m: &[usize], n: &[usize], universe: usize) -> Result<SubsetPair> {
        if universe == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(SubsetPair {
            m: normalize_indices(m, universe)?,
            n: normalize_indices(n, universe)?,
            universe,
        })
    }

    /// Accepts indices in 1..=universe, as used in files and on the wire.
    pub fn from_one_based(m: &[usize], n: &[usize], universe: usize) -> Result<SubsetPair> {
        let shift = |raw: &[usize]| -> Result<Vec<usize>> {
            raw.iter()
                .map(|&i| {
                    if i == 0 || i > universe {
                        Err(Error::IndexOutOfRange { index: i, universe })
                    } else {
                        Ok(i - 1)
                    }
                })
                .collect()
        };
        SubsetPair::new(&shift(m)?, &shift(n)?, universe)
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    pub fn n(&self) -> &[usize] {
        &self.n
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn m_one_based(&self) -> Vec<usize> {
        self.m.iter().map(|&i| i + 1).collect()
    }

    pub fn n_one_based(&self) -> Vec<usize> {
        self.n.iter().map(|&i| i + 1).collect()
    }

    pub fn m_complement(&self) -> Vec<usize> {
        complement(&self.m, self.universe)
    }

    pub fn n_complement(&self) -> Vec<usize> {
        complement(&self.n, self.universe)
    }

    /// The pair with the roles of M and N exchanged.
    pub fn exchanged(&self) -> SubsetPair {
        SubsetPair {
            m: self.n.clone(),
            n: self.m.clone(),
            universe: self.universe,
        }
    }
}

/// Sorted complement of a sorted index set.
pub fn complement(sorted: &[usize], universe: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(universe - sorted.len());
    let mut it = sorted.iter().peekable();
    for i in 0..universe {
        if it.peek() == Some(&&i) {
            it.next();
        } else {
            out.push(i);
        }
    }
    out
}

/// Coherence restricted to rows in N and columns in M; zero when either
/// set is empty (no entries to take a maximum over).
pub fn mu_local(gram: &CrossGram, subsets: &SubsetPair) -> Result<f64> {
    if subsets.universe() != gram.n {
        return Err(Error::DimensionMismatch {
            expected: gram.n,
            got: subsets.universe(),
        });
    }
    let mut mu: f64 = 0.0;
    for &k in subsets.n() {
        for &j in subsets.m() {
            mu = mu.max(gram.matrix.get(k, j).norm());
        }
    }
    Ok(mu)
}

/// The subset-size factor |M|^(1/q) * |N|^(1/p). Empty sets contribute a
/// factor of zero, making every pair with an empty side admissible.
pub fn subset_bound(subsets: &SubsetPair, p: f64) -> Result<f64> {
    let q = conjugate_exponent(p)?;
    let m_len = subsets.m().len() as f64;
    let n_len = subsets.n().len() as f64;
    Ok(m_len.powf(1.0 / q) * n_len.powf(1.0 / p))
}

/// Admissibility verdict for one coherence value and subset pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityReport {
    /// Coherence used (global or localized, forward or exchanged order).
    pub mu: f64,
    /// Subset-size factor |M|^(1/q) * |N|^(1/p).
    pub bound: f64,
    /// Strict inequality mu * bound < 1.
    pub admissible: bool,
    /// 1 + 1/(1 - mu * bound); present exactly when admissible. Always at
    /// least 2, and exactly 2 when either subset is empty.
    pub constant: Option<f64>,
}

/// Core admissibility arithmetic from an explicit coherence value.
pub fn admissibility_with_mu(mu: f64, subsets: &SubsetPair, p: f64) -> Result<AdmissibilityReport> {
    let bound = subset_bound(subsets, p)?;
    let product = mu * bound;
    let admissible = product < 1.0;
    let constant = if admissible {
        Some(1.0 + 1.0 / (1.0 - product))
    } else {
        None
    };
    Ok(AdmissibilityReport {
        mu,
        bound,
        admissible,
        constant,
    })
}

/// Admissibility using the global coherence of the given cross-Gram.
pub fn admissibility(gram: &CrossGram, subsets: &SubsetPair, p: f64) -> Result<AdmissibilityReport> {
    if subsets.universe() != gram.n {
        return Err(Error::DimensionMismatch {
            expected: gram.n,
            got: subsets.universe(),
        });
    }
    admissibility_with_mu(mu_global(gram), subsets, p)
}

/// Admissibility for the exchanged-role inequality. Numerically this is the
/// same arithmetic applied to the reversed cross-Gram, whose global
/// coherence equals the forward one whenever both pairs are valid (the
/// reversed Gram is the inverse of an isometry, hence its adjoint).
pub fn admissibility_swapped(
    gram_reversed: &CrossGram,
    subsets: &SubsetPair,
    p: f64,
) -> Result<AdmissibilityReport> {
    admissibility(gram_reversed, subsets, p)
}
