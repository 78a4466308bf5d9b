//! Per-vector uncertainty certificates.
//!
//! For two basis pairs with cross-Gram coherence mu and an admissible subset
//! pair (M, N), every vector satisfies
//!
//!   norm(x) <= C * [ tail over M-complement + tail over N-complement ]
//!
//! with C = 1 + 1/(1 - mu * |M|^(1/q) * |N|^(1/p)). A [`Certificate`] records
//! both sides and their slack. Four variants share this shape and differ only
//! in which cross-Gram supplies mu (forward or reversed order, global or
//! restricted to the N x M block) and which expansion each tail reads:
//!
//!   - global:         mu over all of G,            f-tail on M^c, g-tail on N^c
//!   - swapped:        mu over all of G reversed,   g-tail on M^c, f-tail on N^c
//!   - local:          mu over G[N, M],             f-tail on M^c, g-tail on N^c
//!   - swapped local:  mu over reversed G[N, M],    g-tail on M^c, f-tail on N^c
//!
//! The module also certifies the supporting tail inequality behind that
//! bound (vectors supported on M keep most of their mass on N^c in the
//! other expansion), decides whether the two support classes intersect
//! ([`annihilation_test`]), and cross-checks the p = 2 case against the
//! classical inner-product formulation ([`hilbert_reduction_check`]).

// Inherent float math lives in std; the trait supplies it under no_std.
// Graphs that link std anywhere (tests do) shadow it, idling the import.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::bases::BasisPair;
use crate::digest::Digest64;
use crate::error::{Error, Result};
use crate::grams::{
    admissibility_with_mu, cross_gram, mu_global, mu_local, AdmissibilityReport, CrossGram,
    SubsetPair,
};
use crate::linalg;
use crate::operators::coherence_bound;
use crate::spaces::{abs_pow, p_norm, root, DenseMatrix, DenseVector};
use crate::tolerances;

/// The four certificate variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Global,
    Swapped,
    Local,
    SwappedLocal,
}

impl Variant {
    /// Stable tokens used in serialized certificates and on the CLI.
    pub fn wire_name(&self) -> &'static str {
        match self {
            Variant::Global => "fgj",
            Variant::Swapped => "fgj_swapped",
            Variant::Local => "fgj_local",
            Variant::SwappedLocal => "fgj_swapped_local",
        }
    }

    pub fn from_wire(name: &str) -> Option<Variant> {
        match name {
            "fgj" => Some(Variant::Global),
            "fgj_swapped" => Some(Variant::Swapped),
            "fgj_local" => Some(Variant::Local),
            "fgj_swapped_local" => Some(Variant::SwappedLocal),
            _ => None,
        }
    }

    pub const ALL: [Variant; 4] = [
        Variant::Global,
        Variant::Swapped,
        Variant::Local,
        Variant::SwappedLocal,
    ];

    fn uses_reversed_gram(&self) -> bool {
        matches!(self, Variant::Swapped | Variant::SwappedLocal)
    }

    fn is_localized(&self) -> bool {
        matches!(self, Variant::Local | Variant::SwappedLocal)
    }
}

/// One evaluated inequality instance. `rhs` and `slack` are present exactly
/// when the subset pair is admissible for the variant's coherence.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub variant: Variant,
    pub subsets: SubsetPair,
    /// norm(x) in the ambient space.
    pub lhs: f64,
    /// Tail of the f-expansion (over M^c for the forward variants, N^c for
    /// the swapped ones).
    pub tail_f: f64,
    /// Tail of the g-expansion (the complementary role).
    pub tail_g: f64,
    pub admissibility: AdmissibilityReport,
    pub constant: Option<f64>,
    pub rhs: Option<f64>,
    /// rhs - lhs; nonnegative up to rounding whenever the inequality holds.
    pub slack: Option<f64>,
    /// Digest of (variant, both pairs, subsets, x).
    pub input_digest: u64,
}

/// Precomputed per-vector expansion data, so sweeping many subset pairs
/// over the same vector costs O(|M| + |N|) per pair instead of O(n^2).
#[derive(Debug, Clone)]
pub struct ExpansionCache {
    pow_f: Vec<f64>,
    pow_g: Vec<f64>,
    sum_f: f64,
    sum_g: f64,
    lhs: f64,
    digest_x: u64,
}

impl ExpansionCache {
    pub fn lhs(&self) -> f64 {
        self.lhs
    }
}

/// Tail values and slack computed from a cache; the float operations here
/// are the single evaluation path shared by [`VerifyContext::certify`] and
/// the batch sweeps, so both produce bit-identical numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CachedEvaluation {
    pub lhs: f64,
    /// Tail over the complement of M.
    pub tail_first: f64,
    /// Tail over the complement of N.
    pub tail_second: f64,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
}

/// Shared state for evaluating many certificates against one ordered pair
/// of bases: both cross-Grams and their global coherences.
#[derive(Debug, Clone)]
pub struct VerifyContext {
    pair_f: BasisPair,
    pair_g: BasisPair,
    gram_forward: CrossGram,
    gram_reversed: CrossGram,
    mu_forward: f64,
    mu_reversed: f64,
    p: f64,
    n: usize,
}

impl VerifyContext {
    pub fn new(pair_f: &BasisPair, pair_g: &BasisPair) -> Result<VerifyContext> {
        let gram_forward = cross_gram(pair_f, pair_g)?;
        let gram_reversed = cross_gram(pair_g, pair_f)?;
        let mu_forward = mu_global(&gram_forward);
        let mu_reversed = mu_global(&gram_reversed);
        Ok(VerifyContext {
            pair_f: pair_f.clone(),
            pair_g: pair_g.clone(),
            gram_forward,
            gram_reversed,
            mu_forward,
            mu_reversed,
            p: pair_f.p(),
            n: pair_f.dim(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn pair_f(&self) -> &BasisPair {
        &self.pair_f
    }

    pub fn pair_g(&self) -> &BasisPair {
        &self.pair_g
    }

    /// G[k][j] = g_k(tau_j).
    pub fn gram_forward(&self) -> &CrossGram {
        &self.gram_forward
    }

    /// Reversed order: entry (j, k) = f_j(omega_k).
    pub fn gram_reversed(&self) -> &CrossGram {
        &self.gram_reversed
    }

    /// The coherence a variant reads, per the table in the module docs.
    pub fn mu_for(&self, variant: Variant, subsets: &SubsetPair) -> Result<f64> {
        let gram = if variant.uses_reversed_gram() {
            &self.gram_reversed
        } else {
            &self.gram_forward
        };
        if variant.is_localized() {
            mu_local(gram, subsets)
        } else {
            if subsets.universe() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: subsets.universe(),
                });
            }
            Ok(if variant.uses_reversed_gram() {
                self.mu_reversed
            } else {
                self.mu_forward
            })
        }
    }

    pub fn admissibility_for(
        &self,
        variant: Variant,
        subsets: &SubsetPair,
    ) -> Result<AdmissibilityReport> {
        let mu = self.mu_for(variant, subsets)?;
        admissibility_with_mu(mu, subsets, self.p)
    }

    /// Expands `x` in both pairs once: coefficient powers |c_j|^p, their
    /// totals, the ambient norm and a digest of the vector.
    pub fn expansion(&self, x: &DenseVector) -> Result<ExpansionCache> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.dim(),
            });
        }
        let coeff_f = self.pair_f.analyze(x)?;
        let coeff_g = self.pair_g.analyze(x)?;
        let pow_f: Vec<f64> = coeff_f
            .entries()
            .iter()
            .map(|&z| abs_pow(z, self.p))
            .collect();
        let pow_g: Vec<f64> = coeff_g
            .entries()
            .iter()
            .map(|&z| abs_pow(z, self.p))
            .collect();
        let sum_f = pow_f.iter().sum();
        let sum_g = pow_g.iter().sum();
        let lhs = p_norm(x, self.p)?;
        let mut d = Digest64::new();
        for z in x.entries() {
            d.update_f64(z.re);
            d.update_f64(z.im);
        }
        Ok(ExpansionCache {
            pow_f,
            pow_g,
            sum_f,
            sum_g,
            lhs,
            digest_x: d.finish(),
        })
    }

    /// Complement tails for one variant: mass kept inside the subset is
    /// subtracted from the total, clamped at zero against rounding.
    fn tails_for(
        &self,
        variant: Variant,
        subsets: &SubsetPair,
        cache: &ExpansionCache,
    ) -> (f64, f64) {
        let mass = |pow: &[f64], idx: &[usize]| -> f64 { idx.iter().map(|&i| pow[i]).sum() };
        let tail = |sum: f64, kept: f64| -> f64 { root((sum - kept).max(0.0), self.p) };
        match variant {
            Variant::Global | Variant::Local => (
                tail(cache.sum_f, mass(&cache.pow_f, subsets.m())),
                tail(cache.sum_g, mass(&cache.pow_g, subsets.n())),
            ),
            Variant::Swapped | Variant::SwappedLocal => (
                tail(cache.sum_g, mass(&cache.pow_g, subsets.m())),
                tail(cache.sum_f, mass(&cache.pow_f, subsets.n())),
            ),
        }
    }

    /// Cheap evaluation from a cache. The admissibility report must be the
    /// one for this variant and subset pair.
    pub fn evaluate_cached(
        &self,
        variant: Variant,
        subsets: &SubsetPair,
        cache: &ExpansionCache,
        admissibility: &AdmissibilityReport,
    ) -> CachedEvaluation {
        debug_assert_eq!(subsets.universe(), self.n);
        debug_assert_eq!(cache.pow_f.len(), self.n);
        let (tail_first, tail_second) = self.tails_for(variant, subsets, cache);
        let (rhs, slack) = match admissibility.constant {
            Some(c) => {
                let rhs = c * (tail_first + tail_second);
                (Some(rhs), Some(rhs - cache.lhs))
            }
            None => (None, None),
        };
        CachedEvaluation {
            lhs: cache.lhs,
            tail_first,
            tail_second,
            rhs,
            slack,
        }
    }

    /// Full certificate from a cache, sharing the evaluation path with
    /// [`Self::evaluate_cached`].
    pub fn certify_cached(
        &self,
        variant: Variant,
        subsets: &SubsetPair,
        cache: &ExpansionCache,
        admissibility: AdmissibilityReport,
    ) -> Certificate {
        let eval = self.evaluate_cached(variant, subsets, cache, &admissibility);
        let (tail_f, tail_g) = match variant {
            Variant::Global | Variant::Local => (eval.tail_first, eval.tail_second),
            Variant::Swapped | Variant::SwappedLocal => (eval.tail_second, eval.tail_first),
        };
        let mut d = Digest64::new();
        d.update_bytes(variant.wire_name().as_bytes());
        d.update_u64(self.gram_forward.source_f());
        d.update_u64(self.gram_forward.source_g());
        d.update_usize(subsets.universe());
        d.update_usize(subsets.m().len());
        for &i in subsets.m() {
            d.update_usize(i);
        }
        d.update_usize(subsets.n().len());
        for &i in subsets.n() {
            d.update_usize(i);
        }
        d.update_u64(cache.digest_x);
        Certificate {
            variant,
            subsets: subsets.clone(),
            lhs: eval.lhs,
            tail_f,
            tail_g,
            admissibility,
            constant: admissibility.constant,
            rhs: eval.rhs,
            slack: eval.slack,
            input_digest: d.finish(),
        }
    }

    pub fn certify(
        &self,
        variant: Variant,
        subsets: &SubsetPair,
        x: &DenseVector,
    ) -> Result<Certificate> {
        let cache = self.expansion(x)?;
        let admissibility = self.admissibility_for(variant, subsets)?;
        Ok(self.certify_cached(variant, subsets, &cache, admissibility))
    }
}

/// One-call verification of the forward global inequality.
pub fn verify_global(
    pair_f: &BasisPair,
    pair_g: &BasisPair,
    subsets: &SubsetPair,
    x: &DenseVector,
) -> Result<Certificate> {
    VerifyContext::new(pair_f, pair_g)?.certify(Variant::Global, subsets, x)
}

/// One-call verification with the basis roles exchanged.
pub fn verify_swapped(
    pair_f: &BasisPair,
    pair_g: &BasisPair,
    subsets: &SubsetPair,
    x: &DenseVector,
) -> Result<Certificate> {
    VerifyContext::new(pair_f, pair_g)?.certify(Variant::Swapped, subsets, x)
}

/// One-call verification with coherence restricted to the N x M block.
pub fn verify_local(
    pair_f: &BasisPair,
    pair_g: &BasisPair,
    subsets: &SubsetPair,
    x: &DenseVector,
) -> Result<Certificate> {
    VerifyContext::new(pair_f, pair_g)?.certify(Variant::Local, subsets, x)
}

/// One-call verification of the exchanged, localized inequality.
pub fn verify_swapped_local(
    pair_f: &BasisPair,
    pair_g: &BasisPair,
    subsets: &SubsetPair,
    x: &DenseVector,
) -> Result<Certificate> {
    VerifyContext::new(pair_f, pair_g)?.certify(Variant::SwappedLocal, subsets, x)
}

/// Certified instance of the supporting tail inequality: a vector whose
/// f-expansion lives on M keeps at least (1 - b) of its norm in the
/// g-expansion tail over N^c, where b is the coherence bound on the
/// composite operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBoundReport {
    /// g-expansion tail of y over the complement of N.
    pub lhs_tail: f64,
    /// Certified upper bound on the composite operator norm.
    pub operator_bound: f64,
    /// (1 - operator_bound) * norm(y).
    pub rhs_bound: f64,
    /// lhs_tail - rhs_bound.
    pub slack: f64,
    pub holds: bool,
}

/// Checks the tail inequality for a vector supported on M in the
/// f-expansion. Support leakage above [`tolerances::SUPPORT_LEAK`] relative
/// to the vector norm is an input error naming the worst index; an operator
/// bound at or above 1 makes the inequality vacuous and is also rejected.
pub fn verify_inp(
    pair_f: &BasisPair,
    pair_g: &BasisPair,
    subsets: &SubsetPair,
    y: &DenseVector,
) -> Result<TailBoundReport> {
    let ctx = VerifyContext::new(pair_f, pair_g)?;
    if subsets.universe() != ctx.n {
        return Err(Error::DimensionMismatch {
            expected: ctx.n,
            got: subsets.universe(),
        });
    }
    let norm_y = p_norm(y, ctx.p)?;
    let coeff_f = pair_f.analyze(y)?;
    let mut worst: Option<(usize, f64)> = None;
    for &j in &subsets.m_complement() {
        let magnitude = coeff_f.get(j).norm();
        if magnitude > tolerances::SUPPORT_LEAK * norm_y.max(1.0) {
            match worst {
                Some((_, w)) if w >= magnitude => {}
                _ => worst = Some((j, magnitude)),
            }
        }
    }
    if let Some((index, magnitude)) = worst {
        return Err(Error::UnsupportedCoefficient { index, magnitude });
    }

    let operator_bound = coherence_bound(ctx.mu_forward, subsets, ctx.p)?;
    if operator_bound >= 1.0 {
        return Err(Error::BoundNotContractive(operator_bound));
    }

    let coeff_g = pair_g.analyze(y)?;
    let mut tail_sum = 0.0;
    for &k in &subsets.n_complement() {
        tail_sum += abs_pow(coeff_g.get(k), ctx.p);
    }
    let lhs_tail = root(tail_sum, ctx.p);
    let rhs_bound = (1.0 - operator_bound) * norm_y;
    let slack = lhs_tail - rhs_bound;
    Ok(TailBoundReport {
        lhs_tail,
        operator_bound,
        rhs_bound,
        slack,
        holds: slack >= tolerances::SLACK_FLOOR,
    })
}

/// Result of probing whether any nonzero vector is supported on M in the
/// f-expansion and on N in the g-expansion simultaneously.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnihilationReport {
    /// Dimension of the doubly-supported subspace.
    pub intersection_dim: usize,
    /// Smallest singular value of the constraint block; `None` when M is
    /// empty and there is no block to decompose.
    pub smallest_gap: Option<f64>,
    /// Unit-norm doubly-supported vector, when the dimension is positive.
    pub witness: Option<DenseVector>,
}

/// Decides double support by exact reduction: a candidate x = sum over M of
/// a_j tau_j is g-supported on N iff the block G[N^c, M] annihilates its
/// coefficients, so the intersection dimension is that block's nullity.
/// Singular values at or below [`tolerances::RANK_GAP`] count as zero.
pub fn annihilation_test(
    pair_f: &BasisPair,
    pair_g: &BasisPair,
    subsets: &SubsetPair,
) -> Result<AnnihilationReport> {
    VerifyContext::new(pair_f, pair_g)?.annihilation(subsets)
}

impl VerifyContext {
    /// See [`annihilation_test`]; the context form reuses the cross-Grams
    /// across many subset pairs.
    pub fn annihilation(&self, subsets: &SubsetPair) -> Result<AnnihilationReport> {
        if subsets.universe() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: subsets.universe(),
            });
        }
        let m_set = subsets.m();
        if m_set.is_empty() {
            return Ok(AnnihilationReport {
                intersection_dim: 0,
                smallest_gap: None,
                witness: None,
            });
        }
        let rows = subsets.n_complement();
        if rows.is_empty() {
            // No constraints: every vector built on M qualifies.
            let witness = normalize_to_unit(self.pair_f.vector(m_set[0]), self.p);
            return Ok(AnnihilationReport {
                intersection_dim: m_set.len(),
                smallest_gap: Some(0.0),
                witness,
            });
        }

        let gram = self.gram_forward.matrix();
        let mut block = DenseMatrix::zeros(rows.len(), m_set.len(), gram.field());
        for (r, &k) in rows.iter().enumerate() {
            for (c, &j) in m_set.iter().enumerate() {
                block.set(r, c, gram.get(k, j));
            }
        }
        let svd = linalg::jacobi_svd(&block);
        let dim = svd
            .singular_values
            .iter()
            .filter(|&&s| s <= tolerances::RANK_GAP)
            .count();
        let smallest = *svd
            .singular_values
            .last()
            .expect("block has at least one column");

        let witness = if dim > 0 {
            // Coefficients of the flattest direction, synthesized back on M.
            let coeffs = svd.right_vectors.column(m_set.len() - 1);
            let mut x = DenseVector::zeros(self.n, self.pair_f.field().join(coeffs.field()));
            for (c, &j) in m_set.iter().enumerate() {
                let tau = self.pair_f.vector(j);
                for r in 0..self.n {
                    let updated = x.get(r) + coeffs.get(c) * tau.get(r);
                    x.set(r, updated);
                }
            }
            normalize_to_unit(x, self.p)
        } else {
            None
        };

        Ok(AnnihilationReport {
            intersection_dim: dim,
            smallest_gap: Some(smallest),
            witness,
        })
    }
}

fn normalize_to_unit(x: DenseVector, p: f64) -> Option<DenseVector> {
    let norm = p_norm(&x, p).ok()?;
    if norm <= 0.0 {
        return None;
    }
    Some(x.scaled(Complex64::new(1.0 / norm, 0.0)))
}

/// Agreement report between the functional certificate and the classical
/// inner-product formulation at p = 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionCheck {
    pub rhs_functional: f64,
    pub rhs_inner: f64,
    pub difference: f64,
    /// Whether the two routes agree within [`tolerances::DUAL_ROUTE`].
    pub within_tolerance: bool,
    pub mu_functional: f64,
    pub mu_inner: f64,
}

/// At p = 2 with adjoint-analysis pairs, coefficients are inner products
/// and the certificate must reduce to the classical Hilbert-space bound.
/// This evaluates the right-hand side twice: through the functional
/// machinery and directly from inner products against basis columns, and
/// reports how closely they agree. Requires an admissible subset pair.
pub fn hilbert_reduction_check(
    pair_f: &BasisPair,
    pair_g: &BasisPair,
    subsets: &SubsetPair,
    x: &DenseVector,
) -> Result<ReductionCheck> {
    if pair_f.p() != 2.0 {
        return Err(Error::RequiresPTwo(pair_f.p()));
    }
    for pair in [pair_f, pair_g] {
        let adjoint_gap = pair
            .analysis()
            .max_abs_diff(&pair.synthesis().adjoint())?;
        if adjoint_gap > tolerances::IDENTITY_DEFECT
            || linalg::unitary_defect(pair.synthesis()) > tolerances::IDENTITY_DEFECT
        {
            return Err(Error::NotUnitary);
        }
    }

    let ctx = VerifyContext::new(pair_f, pair_g)?;
    let cert = ctx.certify(Variant::Global, subsets, x)?;
    let rhs_functional = cert.rhs.ok_or(Error::Inadmissible)?;

    // Independent route: everything below reads only synthesis columns.
    let n = ctx.n;
    let t_f = pair_f.synthesis();
    let t_g = pair_g.synthesis();
    let mut mu_inner: f64 = 0.0;
    for k in 0..n {
        let omega = t_g.column(k);
        for j in 0..n {
            let tau = t_f.column(j);
            mu_inner = mu_inner.max(omega.dot_conj(&tau).norm());
        }
    }
    let m_len = subsets.m().len() as f64;
    let n_len = subsets.n().len() as f64;
    let product = (m_len * n_len).sqrt() * mu_inner;
    if product >= 1.0 {
        return Err(Error::Inadmissible);
    }
    let constant_inner = 1.0 + 1.0 / (1.0 - product);

    let mut tail_f_sq = 0.0;
    for &j in &subsets.m_complement() {
        let tau = t_f.column(j);
        tail_f_sq += tau.dot_conj(x).norm_sqr();
    }
    let mut tail_g_sq = 0.0;
    for &k in &subsets.n_complement() {
        let omega = t_g.column(k);
        tail_g_sq += omega.dot_conj(x).norm_sqr();
    }
    let rhs_inner = constant_inner * (tail_f_sq.sqrt() + tail_g_sq.sqrt());

    let difference = (rhs_functional - rhs_inner).abs();
    Ok(ReductionCheck {
        rhs_functional,
        rhs_inner,
        difference,
        within_tolerance: difference <= tolerances::DUAL_ROUTE,
        mu_functional: ctx.mu_forward,
        mu_inner,
    })
}
