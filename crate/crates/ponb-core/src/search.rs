//! Admissible-region enumeration and extremal-vector search.
//!
//! Enumeration answers "which subset pairs does the inequality cover": for
//! the global variants admissibility depends only on subset sizes, so one
//! representative per size pair is stored together with how many pairs it
//! stands for; the localized variants get a depth-first walk that prunes a
//! branch as soon as its coherence product reaches 1, which is sound
//! because the product only grows when a subset grows.
//!
//! The extremal search hunts for unit vectors that make the certificate as
//! tight as possible: restarted greedy coordinate perturbation maximizing
//! lhs / rhs. Results are deterministic for a given seed.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grams::{AdmissibilityReport, SubsetPair};
use crate::rng::SeededRng;
use crate::spaces::{p_norm, DenseVector, Field};
use crate::uncertainty::{Certificate, ExpansionCache, VerifyContext, Variant};

/// Geometric step-size decay for the greedy search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSchedule {
    pub initial: f64,
    pub decay: f64,
    /// Steps between decay applications.
    pub interval: usize,
}

impl Default for StepSchedule {
    fn default() -> StepSchedule {
        StepSchedule {
            initial: 0.5,
            decay: 0.95,
            interval: 50,
        }
    }
}

/// Knobs shared by enumeration and extremal search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub variant: Variant,
    /// Enumeration cap on |M| and |N|.
    pub max_subset_size: usize,
    pub restarts: usize,
    pub steps: usize,
    pub seed: u64,
    pub schedule: StepSchedule,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            variant: Variant::Global,
            max_subset_size: 2,
            restarts: 32,
            steps: 2000,
            seed: 0x5eed,
            schedule: StepSchedule::default(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::BadConfig("restarts must be positive"));
        }
        if self.steps == 0 {
            return Err(Error::BadConfig("steps must be positive"));
        }
        if !(self.schedule.initial > 0.0 && self.schedule.initial.is_finite()) {
            return Err(Error::BadConfig("step size must be positive and finite"));
        }
        if !(self.schedule.decay > 0.0 && self.schedule.decay <= 1.0) {
            return Err(Error::BadConfig("decay must lie in (0, 1]"));
        }
        if self.schedule.interval == 0 {
            return Err(Error::BadConfig("decay interval must be positive"));
        }
        Ok(())
    }
}

/// One admissible subset pair; `count` is how many pairs the entry stands
/// for (more than 1 only for global variants, where any pair of the same
/// sizes behaves identically).
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleEntry {
    pub subsets: SubsetPair,
    pub report: AdmissibilityReport,
    pub count: u64,
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (n - k + i) as u128 / i as u128;
    }
    acc as u64
}

/// Lists the admissible subset pairs with both sizes at most
/// `config.max_subset_size` (clamped to the dimension). Ordering is
/// deterministic: size-lexicographic for global variants, depth-first over
/// index sequences for localized ones.
pub fn enumerate_admissible(
    ctx: &VerifyContext,
    config: &SearchConfig,
) -> Result<Vec<AdmissibleEntry>> {
    config.validate()?;
    let n = ctx.dim();
    let cap = config.max_subset_size.min(n);
    let variant = config.variant;
    let mut out = Vec::new();

    match variant {
        Variant::Global | Variant::Swapped => {
            for a in 0..=cap {
                for b in 0..=cap {
                    let m: Vec<usize> = (0..a).collect();
                    let nn: Vec<usize> = (0..b).collect();
                    let subsets = SubsetPair::new(&m, &nn, n)?;
                    let report = ctx.admissibility_for(variant, &subsets)?;
                    if report.admissible {
                        out.push(AdmissibleEntry {
                            subsets,
                            report,
                            count: binomial(n, a) * binomial(n, b),
                        });
                    }
                }
            }
        }
        Variant::Local | Variant::SwappedLocal => {
            let mut m_stack: Vec<usize> = Vec::new();
            enumerate_m(ctx, variant, n, cap, 0, &mut m_stack, &mut out)?;
        }
    }
    Ok(out)
}

fn enumerate_m(
    ctx: &VerifyContext,
    variant: Variant,
    n: usize,
    cap: usize,
    next: usize,
    m_stack: &mut Vec<usize>,
    out: &mut Vec<AdmissibleEntry>,
) -> Result<()> {
    let mut n_stack: Vec<usize> = Vec::new();
    enumerate_n(ctx, variant, n, cap, 0, m_stack, &mut n_stack, out)?;
    if m_stack.len() < cap {
        for i in next..n {
            m_stack.push(i);
            enumerate_m(ctx, variant, n, cap, i + 1, m_stack, out)?;
            m_stack.pop();
        }
    }
    Ok(())
}

fn enumerate_n(
    ctx: &VerifyContext,
    variant: Variant,
    n: usize,
    cap: usize,
    next: usize,
    m_stack: &[usize],
    n_stack: &mut Vec<usize>,
    out: &mut Vec<AdmissibleEntry>,
) -> Result<()> {
    let subsets = SubsetPair::new(m_stack, n_stack, n)?;
    let report = ctx.admissibility_for(variant, &subsets)?;
    if report.admissible {
        out.push(AdmissibleEntry {
            subsets,
            report,
            count: 1,
        });
    } else {
        // Coherence and size both grow with N, so no extension recovers.
        return Ok(());
    }
    if n_stack.len() < cap {
        for k in next..n {
            n_stack.push(k);
            enumerate_n(ctx, variant, n, cap, k + 1, m_stack, n_stack, out)?;
            n_stack.pop();
        }
    }
    Ok(())
}

/// Outcome of the extremal ratio search: the tightest vector found, the
/// ratio lhs / rhs it achieves, the subsets it was run on, its full
/// certificate, and the best ratio each restart reached.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalResult {
    pub best_ratio: f64,
    pub best_x: DenseVector,
    pub subsets: SubsetPair,
    pub certificate: Certificate,
    pub trace: Vec<f64>,
}

fn ratio_of(ctx: &VerifyContext, variant: Variant, subsets: &SubsetPair, cache: &ExpansionCache, adm: &AdmissibilityReport) -> f64 {
    let eval = ctx.evaluate_cached(variant, subsets, cache, adm);
    match eval.rhs {
        Some(rhs) if rhs > 0.0 => eval.lhs / rhs,
        // A vanishing right side on a nonzero vector would refute the
        // inequality; surface it as an infinite ratio.
        Some(_) => f64::INFINITY,
        None => f64::NAN,
    }
}

/// Maximizes lhs / rhs over unit vectors by restarted greedy coordinate
/// perturbation. Each restart draws its own random substream, so the result
/// depends only on the seed, not on scheduling. Requires an admissible
/// subset pair for the chosen variant.
pub fn extremal_ratio_search(
    ctx: &VerifyContext,
    subsets: &SubsetPair,
    config: &SearchConfig,
) -> Result<ExtremalResult> {
    config.validate()?;
    let variant = config.variant;
    let adm = ctx.admissibility_for(variant, subsets)?;
    if !adm.admissible {
        return Err(Error::Inadmissible);
    }
    let n = ctx.dim();
    let p = ctx.p();
    let field = ctx.pair_f().field().join(ctx.pair_g().field());

    let mut best: Option<(f64, DenseVector)> = None;
    let mut trace = Vec::with_capacity(config.restarts);
    for restart in 0..config.restarts {
        let mut rng = SeededRng::with_stream(config.seed, restart as u64);
        let mut x = rng.unit_vector(n, p, field);
        let mut current = {
            let cache = ctx.expansion(&x)?;
            ratio_of(ctx, variant, subsets, &cache, &adm)
        };
        let mut step = config.schedule.initial;
        for it in 1..=config.steps {
            let j = rng.index(n);
            let imaginary = field == Field::Complex && rng.next_u64() & 1 == 1;
            let sign = if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
            let delta = if imaginary {
                Complex64::new(0.0, sign * step)
            } else {
                Complex64::new(sign * step, 0.0)
            };
            let mut candidate = x.clone();
            candidate.set(j, candidate.get(j) + delta);
            let norm = p_norm(&candidate, p)?;
            if norm > 1e-12 {
                let candidate = candidate.scaled(Complex64::new(1.0 / norm, 0.0));
                let cache = ctx.expansion(&candidate)?;
                let ratio = ratio_of(ctx, variant, subsets, &cache, &adm);
                if ratio > current {
                    current = ratio;
                    x = candidate;
                }
            }
            if it % config.schedule.interval == 0 {
                step *= config.schedule.decay;
            }
        }
        trace.push(current);
        // Strict improvement keeps the earliest restart on ties.
        let replace = match &best {
            Some((ratio, _)) => current > *ratio,
            None => true,
        };
        if replace {
            best = Some((current, x));
        }
    }

    let (best_ratio, best_x) = best.expect("restarts is positive");
    let certificate = ctx.certify(variant, subsets, &best_x)?;
    Ok(ExtremalResult {
        best_ratio,
        best_x,
        subsets: subsets.clone(),
        certificate,
        trace,
    })
}

/// One line of a sharpness table: how close the search got to saturating
/// the inequality on a given subset pair. `gap` is 1 - best_ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessRow {
    pub subsets: SubsetPair,
    pub constant: f64,
    pub best_ratio: f64,
    pub gap: f64,
}

/// Runs the extremal search over each admissible pair in `subset_pairs` and
/// ranks the outcomes, tightest first. Inadmissible pairs are skipped; an
/// empty input is an error.
pub fn sharpness_report(
    ctx: &VerifyContext,
    subset_pairs: &[SubsetPair],
    config: &SearchConfig,
) -> Result<Vec<SharpnessRow>> {
    if subset_pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    config.validate()?;
    let mut rows = Vec::new();
    for subsets in subset_pairs {
        let adm = ctx.admissibility_for(config.variant, subsets)?;
        if !adm.admissible {
            continue;
        }
        let result = extremal_ratio_search(ctx, subsets, config)?;
        rows.push(SharpnessRow {
            subsets: subsets.clone(),
            constant: adm.constant.expect("admissible report carries a constant"),
            best_ratio: result.best_ratio,
            gap: 1.0 - result.best_ratio,
        });
    }
    rows.sort_by(|a, b| {
        a.gap
            .total_cmp(&b.gap)
            .then_with(|| a.subsets.m().cmp(b.subsets.m()))
            .then_with(|| a.subsets.n().cmp(b.subsets.n()))
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;

    use crate::bases::{canonical_basis, dft_basis, random_basis};
    use crate::grams::{admissibility_with_mu, mu_global, mu_local};

    fn fourier_ctx(n: usize) -> VerifyContext {
        let can = canonical_basis(n, 2.0).unwrap();
        let dft = dft_basis(n, 2.0).unwrap();
        VerifyContext::new(&can, &dft).unwrap()
    }

    fn quick_config(variant: Variant) -> SearchConfig {
        SearchConfig {
            variant,
            max_subset_size: 2,
            restarts: 4,
            steps: 300,
            seed: 99,
            schedule: StepSchedule::default(),
        }
    }

    #[test]
    fn binomial_matches_known_values() {
        assert_eq!(binomial(16, 8), 12870);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(5, 5), 1);
        assert_eq!(binomial(4, 7), 0);
        assert_eq!(binomial(52, 5), 2_598_960);
    }

    #[test]
    fn global_enumeration_counts_match_brute_force() {
        let n = 5;
        let ctx = fourier_ctx(n);
        let config = SearchConfig {
            variant: Variant::Global,
            max_subset_size: n,
            ..SearchConfig::default()
        };
        let entries = enumerate_admissible(&ctx, &config).unwrap();
        let total: u64 = entries.iter().map(|e| e.count).sum();

        let mu = mu_global(ctx.gram_forward());
        let mut brute = 0u64;
        for m_bits in 0..(1u32 << n) {
            for n_bits in 0..(1u32 << n) {
                let m: Vec<usize> = (0..n).filter(|&i| m_bits >> i & 1 == 1).collect();
                let nn: Vec<usize> = (0..n).filter(|&i| n_bits >> i & 1 == 1).collect();
                let subsets = SubsetPair::new(&m, &nn, n).unwrap();
                let report = admissibility_with_mu(mu, &subsets, 2.0).unwrap();
                if report.admissible {
                    brute += 1;
                }
            }
        }
        assert_eq!(total, brute);
    }

    #[test]
    fn localized_enumeration_matches_brute_force() {
        use alloc::collections::BTreeSet;
        let n = 6;
        let can = canonical_basis(n, 2.0).unwrap();
        let pair = random_basis(n, 2.0, 41, Field::Complex).unwrap();
        let ctx = VerifyContext::new(&can, &pair).unwrap();
        let config = SearchConfig {
            variant: Variant::Local,
            max_subset_size: n,
            ..SearchConfig::default()
        };
        let entries = enumerate_admissible(&ctx, &config).unwrap();
        let pruned: BTreeSet<(Vec<usize>, Vec<usize>)> = entries
            .iter()
            .map(|e| (e.subsets.m().to_vec(), e.subsets.n().to_vec()))
            .collect();
        assert_eq!(pruned.len(), entries.len());

        let mut brute: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
        for m_bits in 0..(1u32 << n) {
            for n_bits in 0..(1u32 << n) {
                let m: Vec<usize> = (0..n).filter(|&i| m_bits >> i & 1 == 1).collect();
                let nn: Vec<usize> = (0..n).filter(|&i| n_bits >> i & 1 == 1).collect();
                let subsets = SubsetPair::new(&m, &nn, n).unwrap();
                let mu = mu_local(ctx.gram_forward(), &subsets).unwrap();
                let report = admissibility_with_mu(mu, &subsets, 2.0).unwrap();
                if report.admissible {
                    brute.insert((m, nn));
                }
            }
        }
        assert_eq!(pruned, brute);
    }

    #[test]
    fn enumeration_respects_the_size_cap() {
        let ctx = fourier_ctx(8);
        let config = SearchConfig {
            variant: Variant::Local,
            max_subset_size: 2,
            ..SearchConfig::default()
        };
        for entry in enumerate_admissible(&ctx, &config).unwrap() {
            assert!(entry.subsets.m().len() <= 2);
            assert!(entry.subsets.n().len() <= 2);
        }
    }

    #[test]
    fn every_m_with_empty_n_is_admissible() {
        let ctx = fourier_ctx(6);
        let config = SearchConfig {
            variant: Variant::Local,
            max_subset_size: 3,
            ..SearchConfig::default()
        };
        let entries = enumerate_admissible(&ctx, &config).unwrap();
        let with_empty_n = entries
            .iter()
            .filter(|e| e.subsets.n().is_empty())
            .count();
        // Subsets of {0..5} with at most 3 elements: 1 + 6 + 15 + 20.
        assert_eq!(with_empty_n, 42);
    }

    #[test]
    fn empty_subsets_pin_the_ratio_at_one_quarter() {
        let ctx = fourier_ctx(4);
        let subsets = SubsetPair::new(&[], &[], 4).unwrap();
        let result = extremal_ratio_search(&ctx, &subsets, &quick_config(Variant::Global)).unwrap();
        assert!((result.best_ratio - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn search_ratio_stays_below_one_and_improves_on_random_draws() {
        let ctx = fourier_ctx(4);
        let subsets = SubsetPair::new(&[0], &[0], 4).unwrap();
        let result = extremal_ratio_search(&ctx, &subsets, &quick_config(Variant::Global)).unwrap();
        assert!(result.best_ratio <= 1.0 + 1e-12);
        assert!(result.best_ratio > 0.3);
        // The certificate is recomputed from the returned vector and agrees
        // with the reported ratio on the same evaluation path.
        let cert = &result.certificate;
        let recomputed = cert.lhs / cert.rhs.unwrap();
        assert_eq!(recomputed.to_bits(), result.best_ratio.to_bits());
        assert!((p_norm(&result.best_x, 2.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(result.subsets, subsets);
        assert_eq!(result.trace.len(), quick_config(Variant::Global).restarts);
        let trace_max = result.trace.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(trace_max.to_bits(), result.best_ratio.to_bits());
    }

    #[test]
    fn search_is_deterministic() {
        let ctx = fourier_ctx(5);
        let subsets = SubsetPair::new(&[0, 1], &[2], 5).unwrap();
        let config = quick_config(Variant::Local);
        let a = extremal_ratio_search(&ctx, &subsets, &config).unwrap();
        let b = extremal_ratio_search(&ctx, &subsets, &config).unwrap();
        assert_eq!(a.best_ratio.to_bits(), b.best_ratio.to_bits());
        for (za, zb) in a.best_x.entries().iter().zip(b.best_x.entries()) {
            assert_eq!(za.re.to_bits(), zb.re.to_bits());
            assert_eq!(za.im.to_bits(), zb.im.to_bits());
        }
    }

    #[test]
    fn search_rejects_inadmissible_subsets() {
        let can = canonical_basis(4, 2.0).unwrap();
        let ctx = VerifyContext::new(&can, &can).unwrap();
        let subsets = SubsetPair::new(&[0], &[0], 4).unwrap();
        assert!(matches!(
            extremal_ratio_search(&ctx, &subsets, &quick_config(Variant::Global)),
            Err(Error::Inadmissible)
        ));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad_restarts = SearchConfig {
            restarts: 0,
            ..SearchConfig::default()
        };
        assert!(matches!(
            bad_restarts.validate(),
            Err(Error::BadConfig(_))
        ));
        let bad_decay = SearchConfig {
            schedule: StepSchedule {
                initial: 0.5,
                decay: 1.5,
                interval: 50,
            },
            ..SearchConfig::default()
        };
        assert!(bad_decay.validate().is_err());
        let bad_interval = SearchConfig {
            schedule: StepSchedule {
                initial: 0.5,
                decay: 0.9,
                interval: 0,
            },
            ..SearchConfig::default()
        };
        assert!(bad_interval.validate().is_err());
    }

    #[test]
    fn sharpness_rows_sort_by_gap() {
        let ctx = fourier_ctx(4);
        let pairs = [
            SubsetPair::new(&[], &[], 4).unwrap(),
            SubsetPair::new(&[0], &[0], 4).unwrap(),
            SubsetPair::new(&[0], &[1], 4).unwrap(),
        ];
        let rows = sharpness_report(&ctx, &pairs, &quick_config(Variant::Global)).unwrap();
        assert_eq!(rows.len(), 3);
        for w in rows.windows(2) {
            assert!(w[0].gap <= w[1].gap);
        }
        for row in &rows {
            assert!((row.gap - (1.0 - row.best_ratio)).abs() < 1e-15);
        }
    }

    #[test]
    fn sharpness_skips_inadmissible_and_rejects_empty_input() {
        let can = canonical_basis(4, 2.0).unwrap();
        let dft = dft_basis(4, 2.0).unwrap();
        let ctx = VerifyContext::new(&can, &dft).unwrap();
        let ctx_bad = VerifyContext::new(&can, &can).unwrap();
        let pairs = [SubsetPair::new(&[0], &[0], 4).unwrap()];
        let rows = sharpness_report(&ctx_bad, &pairs, &quick_config(Variant::Global)).unwrap();
        assert!(rows.is_empty());
        assert!(matches!(
            sharpness_report(&ctx, &[], &quick_config(Variant::Global)),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn representative_counts_use_binomials() {
        let ctx = fourier_ctx(4);
        let config = SearchConfig {
            variant: Variant::Global,
            max_subset_size: 1,
            ..SearchConfig::default()
        };
        let entries = enumerate_admissible(&ctx, &config).unwrap();
        let mut by_sizes: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for e in &entries {
            by_sizes.insert((e.subsets.m().len(), e.subsets.n().len()), e.count);
        }
        assert_eq!(by_sizes.get(&(0, 0)), Some(&1));
        assert_eq!(by_sizes.get(&(1, 0)), Some(&4));
        assert_eq!(by_sizes.get(&(1, 1)), Some(&16));
    }
}
