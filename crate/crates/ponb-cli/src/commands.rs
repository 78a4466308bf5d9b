//! Subcommand implementations. Every function returns the process exit
//! code; anyhow errors bubble to main and become exit 2.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use ponb_core::bases::{canonical_basis, dft_basis, random_basis, random_genperm_basis};
use ponb_core::digest::{to_hex, Digest64};
use ponb_core::grams::{cross_gram, mu_global, SubsetPair};
use ponb_core::operators::opnorm_p;
use ponb_core::rng::SeededRng;
use ponb_core::search::{
    enumerate_admissible, extremal_ratio_search, sharpness_report, SearchConfig,
};
use ponb_core::spaces::{DenseMatrix, DenseVector, Exponent, Field};
use ponb_core::uncertainty::{Certificate, Variant, VerifyContext};
use serde::Serialize;
use serde_json::json;

use crate::manifest::RunManifest;
use crate::parallel;
use crate::schema;

/// Numerical floor below which an admissible certificate counts as a
/// violation of the inequality.
const SLACK_FLOOR: f64 = -1e-9;

#[derive(Subcommand)]
pub enum Command {
    /// Write a seeded basis pair as JSON.
    Gen(GenArgs),
    /// Certify the uncertainty inequality over subsets and test vectors.
    Verify(VerifyArgs),
    /// Decide whether some nonzero vector is supported in both M and N.
    Annihilate(AnnihilateArgs),
    /// Cross-Gram matrix and mutual coherence of two basis pairs.
    Gram(GramArgs),
    /// Certified operator p-norm interval of a matrix.
    Opnorm(OpnormArgs),
    /// Search for the vector coming closest to saturating the bound.
    Search(SearchArgs),
}

pub fn run(command: Command) -> Result<i32> {
    match command {
        Command::Gen(args) => gen(&args),
        Command::Verify(args) => verify(&args),
        Command::Annihilate(args) => annihilate(&args),
        Command::Gram(args) => gram(&args),
        Command::Opnorm(args) => opnorm(&args),
        Command::Search(args) => search(&args),
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
}

impl FieldArg {
    fn to_field(self) -> Field {
        match self {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
pub enum VariantArg {
    Fgj,
    Swapped,
    Local,
    SwappedLocal,
}

impl VariantArg {
    fn to_variant(self) -> Variant {
        match self {
            VariantArg::Fgj => Variant::Global,
            VariantArg::Swapped => Variant::Swapped,
            VariantArg::Local => Variant::Local,
            VariantArg::SwappedLocal => Variant::SwappedLocal,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
pub enum GenKind {
    Canonical,
    Dft,
    RandomUnitary,
    RandomGenperm,
}

impl GenKind {
    fn as_str(self) -> &'static str {
        match self {
            GenKind::Canonical => "canonical",
            GenKind::Dft => "dft",
            GenKind::RandomUnitary => "random-unitary",
            GenKind::RandomGenperm => "random-genperm",
        }
    }
}

#[derive(Args)]
pub struct GenArgs {
    /// Construction to draw from.
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// Ambient dimension.
    #[arg(long)]
    pub n: usize,
    /// Exponent of the l^p space, strictly between 1 and infinity.
    #[arg(long)]
    pub p: f64,
    /// RNG seed for the random kinds.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scalar field for the random kinds.
    #[arg(long, value_enum, default_value_t = FieldArg::Complex)]
    pub field: FieldArg,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn gen(args: &GenArgs) -> Result<i32> {
    let pair = match args.kind {
        GenKind::Canonical => canonical_basis(args.n, args.p)?,
        GenKind::Dft => dft_basis(args.n, args.p)?,
        GenKind::RandomUnitary => {
            if !Exponent::new(args.p)?.is_two() {
                bail!("random-unitary is an l^p isometry only at p = 2, got p = {}", args.p);
            }
            random_basis(args.n, args.p, args.seed, args.field.to_field())?
        }
        GenKind::RandomGenperm => {
            random_genperm_basis(args.n, args.p, args.seed, args.field.to_field())?
        }
    };
    let manifest = RunManifest::new(
        "gen",
        json!({
            "kind": args.kind.as_str(),
            "n": args.n,
            "p": args.p,
            "seed": args.seed,
            "field": schema::field_name(args.field.to_field()),
        }),
        vec![args.seed],
        vec![],
        false,
    );
    let file = schema::basis_to_file(&pair, Some(manifest));
    schema::emit(args.out.as_deref(), &pretty(&file)?)?;
    Ok(0)
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Basis pair supplying the analysis functionals (the f side).
    #[arg(long)]
    pub basis_f: PathBuf,
    /// Basis pair supplying the synthesis vectors (the g side).
    #[arg(long)]
    pub basis_g: PathBuf,
    /// Explicit 1-based subsets: --subsets M=1,3 N=2. "M=" is the empty set.
    #[arg(long, num_args = 1..=2, conflicts_with = "enumerate")]
    pub subsets: Option<Vec<String>>,
    /// Sweep every subset pair with both sizes at most --max-size.
    #[arg(long)]
    pub enumerate: bool,
    /// Size cap for --enumerate.
    #[arg(long, default_value_t = 2)]
    pub max_size: usize,
    /// Number of seeded random unit test vectors.
    #[arg(long, conflicts_with = "file")]
    pub random: Option<usize>,
    /// Seed for --random.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON file of explicit coefficient vectors to test instead.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Inequality variant to certify.
    #[arg(long, value_enum, default_value_t = VariantArg::Fgj)]
    pub variant: VariantArg,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// json streams one certificate per line; csv writes the size-class summary.
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub format: OutFormat,
}

struct PairOutcome {
    m_size: usize,
    n_size: usize,
    mu: f64,
    constant: Option<f64>,
    min_slack: Option<f64>,
    worst: Option<(f64, usize, String)>,
    lines: Vec<String>,
}

fn verify(args: &VerifyArgs) -> Result<i32> {
    let pair_f = schema::load_basis(&args.basis_f)?;
    let pair_g = schema::load_basis(&args.basis_g)?;
    let ctx = VerifyContext::new(&pair_f, &pair_g)?;
    let n = ctx.dim();
    let variant = args.variant.to_variant();

    let subset_pairs = match (&args.subsets, args.enumerate) {
        (Some(tokens), false) => vec![parse_subsets(tokens, n)?],
        (None, true) => all_subset_pairs(n, args.max_size.min(n))?,
        (None, false) => bail!("pass --subsets or --enumerate"),
        (Some(_), true) => unreachable!("clap rejects the combination"),
    };

    let mut seeds = Vec::new();
    let mut input_digests = vec![
        to_hex(pair_f.content_digest()),
        to_hex(pair_g.content_digest()),
    ];
    let vectors = match (&args.random, &args.file) {
        (Some(count), None) => {
            seeds.push(args.seed);
            let field = pair_f.field().join(pair_g.field());
            let mut rng = SeededRng::new(args.seed);
            (0..*count).map(|_| rng.unit_vector(n, ctx.p(), field)).collect()
        }
        (None, Some(path)) => {
            let file: schema::VectorsFile = schema::read_json(path)?;
            let vectors = schema::vectors_from_file(&file, n)?;
            input_digests.push(to_hex(vectors_digest(&vectors)));
            vectors
        }
        (None, None) => bail!("pass --random or --file"),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    if vectors.is_empty() {
        bail!("no test vectors given");
    }

    let caches = vectors
        .iter()
        .map(|x| ctx.expansion(x))
        .collect::<ponb_core::Result<Vec<_>>>()?;

    let digest_f = to_hex(pair_f.content_digest());
    let digest_g = to_hex(pair_g.content_digest());
    let want_lines = args.format == OutFormat::Json;
    let threads = parallel::thread_budget()?;

    let outcomes = parallel::map_indexed(&subset_pairs, threads, |_, subsets| {
        let adm = ctx.admissibility_for(variant, subsets)?;
        let mut outcome = PairOutcome {
            m_size: subsets.m().len(),
            n_size: subsets.n().len(),
            mu: adm.mu,
            constant: adm.constant,
            min_slack: None,
            worst: None,
            lines: Vec::new(),
        };
        for (vector_index, cache) in caches.iter().enumerate() {
            let cert = ctx.certify_cached(variant, subsets, cache, adm);
            if let Some(slack) = cert.slack {
                let tighter = outcome.min_slack.map_or(true, |s| slack < s);
                if tighter {
                    outcome.min_slack = Some(slack);
                }
                if slack < SLACK_FLOOR && tighter {
                    let line = certificate_line(&cert, &digest_f, &digest_g, Some(vector_index))?;
                    outcome.worst = Some((slack, vector_index, line));
                }
            }
            if want_lines {
                outcome.lines.push(certificate_line(
                    &cert,
                    &digest_f,
                    &digest_g,
                    Some(vector_index),
                )?);
            }
        }
        Ok(outcome)
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<PairOutcome>>>()?;

    let manifest = RunManifest::new(
        "verify",
        json!({
            "basis_f": args.basis_f.display().to_string(),
            "basis_g": args.basis_g.display().to_string(),
            "subsets": args.subsets,
            "enumerate": args.enumerate,
            "max_size": args.max_size,
            "random": args.random,
            "seed": args.seed,
            "file": args.file.as_ref().map(|p| p.display().to_string()),
            "variant": variant.wire_name(),
        }),
        seeds,
        input_digests,
        true,
    );

    let text = match args.format {
        OutFormat::Json => {
            let mut lines = vec![serde_json::to_string(&json!({ "manifest": manifest }))?];
            for outcome in &outcomes {
                lines.extend_from_slice(&outcome.lines);
            }
            lines.join("\n") + "\n"
        }
        OutFormat::Csv => summary_csv(&manifest, variant, n, ctx.p(), &outcomes)?,
    };
    schema::emit(args.out.as_deref(), &text)?;

    let violation = outcomes
        .iter()
        .filter_map(|o| o.worst.as_ref())
        .min_by(|a, b| a.0.total_cmp(&b.0));
    if let Some((slack, vector_index, line)) = violation {
        eprintln!("inequality violated: slack {slack:e} on vector {vector_index}");
        eprintln!("failing certificate: {line}");
        eprintln!(
            "reproduce with: {}",
            serde_json::to_string(&json!({ "manifest": manifest }))?
        );
        return Ok(1);
    }
    Ok(0)
}

/// One CSV row per subset size class: the worst (largest) coherence and
/// constant in the class and the smallest slack seen over all its pairs.
fn summary_csv(
    manifest: &RunManifest,
    variant: Variant,
    n: usize,
    p: f64,
    outcomes: &[PairOutcome],
) -> Result<String> {
    let mut groups: BTreeMap<(usize, usize), (f64, Option<f64>, Option<f64>)> = BTreeMap::new();
    for outcome in outcomes {
        let entry = groups
            .entry((outcome.m_size, outcome.n_size))
            .or_insert((0.0, None, None));
        entry.0 = entry.0.max(outcome.mu);
        if let Some(c) = outcome.constant {
            entry.1 = Some(entry.1.map_or(c, |prev: f64| prev.max(c)));
        }
        if let Some(s) = outcome.min_slack {
            entry.2 = Some(entry.2.map_or(s, |prev: f64| prev.min(s)));
        }
    }
    let mut text = format!("# manifest: {}\n", serde_json::to_string(manifest)?);
    text.push_str("variant,n,p,m_size,n_size,mu,constant,min_slack\n");
    for ((m_size, n_size), (mu, constant, min_slack)) in groups {
        let constant = constant.map(|c| c.to_string()).unwrap_or_default();
        let min_slack = min_slack.map(|s| s.to_string()).unwrap_or_default();
        text.push_str(&format!(
            "{},{n},{p},{m_size},{n_size},{mu},{constant},{min_slack}\n",
            variant.wire_name()
        ));
    }
    Ok(text)
}

#[derive(Args)]
pub struct AnnihilateArgs {
    /// Basis pair supplying the analysis functionals (the f side).
    #[arg(long)]
    pub basis_f: PathBuf,
    /// Basis pair supplying the synthesis vectors (the g side).
    #[arg(long)]
    pub basis_g: PathBuf,
    /// 1-based subsets: --subsets M=1,3 N=2. "M=" is the empty set.
    #[arg(long, num_args = 1..=2, required = true)]
    pub subsets: Vec<String>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn annihilate(args: &AnnihilateArgs) -> Result<i32> {
    let pair_f = schema::load_basis(&args.basis_f)?;
    let pair_g = schema::load_basis(&args.basis_g)?;
    let ctx = VerifyContext::new(&pair_f, &pair_g)?;
    let subsets = parse_subsets(&args.subsets, ctx.dim())?;
    let report = ctx.annihilation(&subsets)?;

    let manifest = RunManifest::new(
        "annihilate",
        json!({
            "basis_f": args.basis_f.display().to_string(),
            "basis_g": args.basis_g.display().to_string(),
            "subsets": args.subsets,
        }),
        vec![],
        vec![
            to_hex(pair_f.content_digest()),
            to_hex(pair_g.content_digest()),
        ],
        true,
    );
    let out = json!({
        "manifest": manifest,
        "n": ctx.dim(),
        "p": ctx.p(),
        "M": subsets.m_one_based(),
        "N": subsets.n_one_based(),
        "intersection_dim": report.intersection_dim,
        "smallest_gap": report.smallest_gap,
        "witness": report.witness.as_ref().map(schema::encode_vector),
    });
    schema::emit(args.out.as_deref(), &pretty(&out)?)?;
    Ok(if report.intersection_dim > 0 { 3 } else { 0 })
}

#[derive(Args)]
pub struct GramArgs {
    /// Basis pair supplying the analysis functionals (the f side).
    #[arg(long)]
    pub basis_f: PathBuf,
    /// Basis pair supplying the synthesis vectors (the g side).
    #[arg(long)]
    pub basis_g: PathBuf,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// json nests the matrix; csv writes one row,col,re,im line per entry.
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub format: OutFormat,
}

fn gram(args: &GramArgs) -> Result<i32> {
    let pair_f = schema::load_basis(&args.basis_f)?;
    let pair_g = schema::load_basis(&args.basis_g)?;
    let gram = cross_gram(&pair_f, &pair_g)?;
    let manifest = RunManifest::new(
        "gram",
        json!({
            "basis_f": args.basis_f.display().to_string(),
            "basis_g": args.basis_g.display().to_string(),
        }),
        vec![],
        vec![to_hex(gram.source_f()), to_hex(gram.source_g())],
        true,
    );
    let text = match args.format {
        OutFormat::Json => pretty(&json!({
            "manifest": manifest,
            "n": pair_f.dim(),
            "mu": mu_global(&gram),
            "source_f": to_hex(gram.source_f()),
            "source_g": to_hex(gram.source_g()),
            "matrix": schema::matrix_to_file(gram.matrix()),
        }))?,
        OutFormat::Csv => {
            let m = gram.matrix();
            let mut text = format!("# manifest: {}\n", serde_json::to_string(&manifest)?);
            text.push_str("row,col,re,im\n");
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    let z = m.get(r, c);
                    text.push_str(&format!("{r},{c},{},{}\n", z.re, z.im));
                }
            }
            text
        }
    };
    schema::emit(args.out.as_deref(), &text)?;
    Ok(0)
}

#[derive(Args)]
pub struct OpnormArgs {
    /// Matrix JSON file; gram output is accepted and its matrix extracted.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Exponent of the operator norm.
    #[arg(long)]
    pub p: f64,
    /// Iteration budget for the lower-bound ascent.
    #[arg(long, default_value_t = 200)]
    pub budget: usize,
    /// Seed for the ascent starting points.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn opnorm(args: &OpnormArgs) -> Result<i32> {
    let value: serde_json::Value = schema::read_json(&args.matrix)?;
    let nested = value.get("matrix").cloned().unwrap_or(value);
    let file: schema::MatrixFile = serde_json::from_value(nested)
        .with_context(|| format!("matrix schema in {}", args.matrix.display()))?;
    let matrix = schema::matrix_from_file(&file)?;
    let estimate = opnorm_p(&matrix, args.p, args.budget, args.seed)?;

    let manifest = RunManifest::new(
        "opnorm",
        json!({
            "matrix": args.matrix.display().to_string(),
            "p": args.p,
            "budget": args.budget,
            "seed": args.seed,
        }),
        vec![args.seed],
        vec![to_hex(matrix_digest(&matrix))],
        true,
    );
    let out = json!({
        "manifest": manifest,
        "p": args.p,
        "rows": matrix.rows(),
        "cols": matrix.cols(),
        "lower": estimate.lower,
        "upper": estimate.upper,
        "method": estimate.method.wire_name(),
        "converged": estimate.converged,
        "witness": schema::encode_vector(&estimate.witness),
    });
    schema::emit(args.out.as_deref(), &pretty(&out)?)?;
    Ok(0)
}

#[derive(Args)]
pub struct SearchArgs {
    /// Basis pair supplying the analysis functionals (the f side).
    #[arg(long)]
    pub basis_f: PathBuf,
    /// Basis pair supplying the synthesis vectors (the g side).
    #[arg(long)]
    pub basis_g: PathBuf,
    /// 1-based subsets to search on: --subsets M=1,3 N=2.
    #[arg(long, num_args = 1..=2, conflicts_with = "enumerate")]
    pub subsets: Option<Vec<String>>,
    /// Tabulate sharpness over admissible subset pairs instead: one
    /// representative per size class for the global variants, every pair
    /// for the localized ones.
    #[arg(long)]
    pub enumerate: bool,
    /// Subset size cap for --enumerate.
    #[arg(long, default_value_t = 2)]
    pub max_size: usize,
    /// Inequality variant to search against.
    #[arg(long, value_enum, default_value_t = VariantArg::Fgj)]
    pub variant: VariantArg,
    /// Independent restarts of the greedy ascent.
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    /// Perturbation steps per restart.
    #[arg(long, default_value_t = 2000)]
    pub steps: usize,
    /// Base seed; restart k draws from substream k.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv writes the sharpness table instead of JSON.
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub format: OutFormat,
}

fn search(args: &SearchArgs) -> Result<i32> {
    let pair_f = schema::load_basis(&args.basis_f)?;
    let pair_g = schema::load_basis(&args.basis_g)?;
    let ctx = VerifyContext::new(&pair_f, &pair_g)?;
    let variant = args.variant.to_variant();
    let config = SearchConfig {
        variant,
        max_subset_size: args.max_size,
        restarts: args.restarts,
        steps: args.steps,
        seed: args.seed,
        ..SearchConfig::default()
    };
    let digest_f = to_hex(pair_f.content_digest());
    let digest_g = to_hex(pair_g.content_digest());
    let manifest = RunManifest::new(
        "search",
        json!({
            "basis_f": args.basis_f.display().to_string(),
            "basis_g": args.basis_g.display().to_string(),
            "subsets": args.subsets,
            "enumerate": args.enumerate,
            "max_size": args.max_size,
            "variant": variant.wire_name(),
            "restarts": args.restarts,
            "steps": args.steps,
            "seed": args.seed,
        }),
        vec![args.seed],
        vec![digest_f.clone(), digest_g.clone()],
        true,
    );

    let text = match (&args.subsets, args.enumerate) {
        (Some(tokens), false) => {
            let subsets = parse_subsets(tokens, ctx.dim())?;
            let result = extremal_ratio_search(&ctx, &subsets, &config)?;
            let certificate =
                schema::certificate_json(&result.certificate, &digest_f, &digest_g, None);
            match args.format {
                OutFormat::Json => pretty(&json!({
                    "manifest": manifest,
                    "variant": variant.wire_name(),
                    "M": subsets.m_one_based(),
                    "N": subsets.n_one_based(),
                    "best_ratio": result.best_ratio,
                    "best_x": schema::encode_vector(&result.best_x),
                    "trace": result.trace,
                    "certificate": certificate,
                }))?,
                OutFormat::Csv => {
                    let constant = result
                        .certificate
                        .constant
                        .map(|c| c.to_string())
                        .unwrap_or_default();
                    let mut text = format!("# manifest: {}\n", serde_json::to_string(&manifest)?);
                    text.push_str("m,n,constant,best_ratio,gap\n");
                    text.push_str(&sharpness_row(
                        &subsets,
                        &constant,
                        result.best_ratio,
                        1.0 - result.best_ratio,
                    ));
                    text
                }
            }
        }
        (None, true) => {
            let entries = enumerate_admissible(&ctx, &config)?;
            let pairs: Vec<SubsetPair> = entries.into_iter().map(|e| e.subsets).collect();
            let rows = if pairs.is_empty() {
                Vec::new()
            } else {
                sharpness_report(&ctx, &pairs, &config)?
            };
            match args.format {
                OutFormat::Json => {
                    let rows: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|row| {
                            json!({
                                "M": row.subsets.m_one_based(),
                                "N": row.subsets.n_one_based(),
                                "constant": row.constant,
                                "best_ratio": row.best_ratio,
                                "gap": row.gap,
                            })
                        })
                        .collect();
                    pretty(&json!({
                        "manifest": manifest,
                        "variant": variant.wire_name(),
                        "rows": rows,
                    }))?
                }
                OutFormat::Csv => {
                    let mut text = format!("# manifest: {}\n", serde_json::to_string(&manifest)?);
                    text.push_str("m,n,constant,best_ratio,gap\n");
                    for row in &rows {
                        text.push_str(&sharpness_row(
                            &row.subsets,
                            &row.constant.to_string(),
                            row.best_ratio,
                            row.gap,
                        ));
                    }
                    text
                }
            }
        }
        (None, false) => bail!("pass --subsets or --enumerate"),
        (Some(_), true) => unreachable!("clap rejects the combination"),
    };
    schema::emit(args.out.as_deref(), &text)?;
    Ok(0)
}

fn sharpness_row(subsets: &SubsetPair, constant: &str, best_ratio: f64, gap: f64) -> String {
    format!(
        "{},{},{constant},{best_ratio},{gap}\n",
        join_indices(&subsets.m_one_based()),
        join_indices(&subsets.n_one_based()),
    )
}

/// Space-separated 1-based indices, so subset cells need no CSV quoting.
fn join_indices(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn certificate_line(
    cert: &Certificate,
    digest_f: &str,
    digest_g: &str,
    vector_index: Option<usize>,
) -> Result<String> {
    let json = schema::certificate_json(cert, digest_f, digest_g, vector_index);
    Ok(serde_json::to_string(&json)?)
}

/// Parses `M=1,3 N=2` style tokens, in one argument or several.
fn parse_subsets(tokens: &[String], universe: usize) -> Result<SubsetPair> {
    let mut m: Option<Vec<usize>> = None;
    let mut n: Option<Vec<usize>> = None;
    for token in tokens.iter().flat_map(|t| t.split_whitespace()) {
        let (key, rest) = token
            .split_once('=')
            .with_context(|| format!("subset token {token:?} is not M=... or N=..."))?;
        let indices = parse_index_list(rest)
            .with_context(|| format!("subset token {token:?}"))?;
        let slot = match key {
            "M" => &mut m,
            "N" => &mut n,
            other => bail!("subset name must be M or N, got {other:?}"),
        };
        if slot.replace(indices).is_some() {
            bail!("subset {key} given twice");
        }
    }
    let m = m.context("missing M=... in --subsets")?;
    let n = n.context("missing N=... in --subsets")?;
    Ok(SubsetPair::from_one_based(&m, &n, universe)?)
}

fn parse_index_list(raw: &str) -> Result<Vec<usize>> {
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .with_context(|| format!("index {part:?} is not a positive integer"))
        })
        .collect()
}

/// Every (M, N) with both sizes at most `cap`, in size-lexicographic order.
fn all_subset_pairs(n: usize, cap: usize) -> Result<Vec<SubsetPair>> {
    let mut subsets: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..cap {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&j| j + 1);
            for j in start..n {
                let mut t = s.clone();
                t.push(j);
                next.push(t);
            }
        }
        subsets.extend(next.iter().cloned());
        frontier = next;
    }
    let mut pairs = Vec::with_capacity(subsets.len() * subsets.len());
    for m in &subsets {
        for s in &subsets {
            pairs.push(SubsetPair::new(m, s, n)?);
        }
    }
    Ok(pairs)
}

fn vectors_digest(vectors: &[DenseVector]) -> u64 {
    let mut digest = Digest64::new();
    digest.update_usize(vectors.len());
    for x in vectors {
        digest.update_usize(x.dim());
        for z in x.entries() {
            digest.update_f64(z.re);
            digest.update_f64(z.im);
        }
    }
    digest.finish()
}

fn matrix_digest(matrix: &DenseMatrix) -> u64 {
    let mut digest = Digest64::new();
    digest.update_usize(matrix.rows());
    digest.update_usize(matrix.cols());
    for z in matrix.entries() {
        digest.update_f64(z.re);
        digest.update_f64(z.im);
    }
    digest.finish()
}
