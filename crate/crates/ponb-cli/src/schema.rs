//! On-disk JSON formats and their conversions to in-memory types.
//!
//! Scalars are one- or two-element arrays: `[re]` for real data, `[re, im]`
//! for complex. serde_json emits the shortest decimal that parses back to
//! the same f64, so every write-read cycle is bit-exact.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use ponb_core::bases::{validate, BasisPair};
use ponb_core::digest;
use ponb_core::spaces::{Complex64, DenseMatrix, DenseVector, Field};
use ponb_core::uncertainty::Certificate;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::manifest::RunManifest;

/// Row-major scalar grid: outer index rows, inner index columns.
pub type Scalars = Vec<Vec<Vec<f64>>>;

/// A basis pair on l^p: synthesis matrix T (columns are the basis vectors)
/// and analysis matrix F (rows are the coefficient functionals).
#[derive(Debug, Serialize, Deserialize)]
pub struct BasisFile {
    pub n: usize,
    pub p: f64,
    pub field: String,
    #[serde(rename = "T")]
    pub t: Scalars,
    #[serde(rename = "F")]
    pub f: Scalars,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
}

/// A bare matrix, also nested inside gram output.
#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub field: String,
    pub entries: Scalars,
}

/// A batch of coefficient vectors for `verify --file`.
#[derive(Debug, Serialize, Deserialize)]
pub struct VectorsFile {
    pub n: usize,
    pub field: String,
    pub vectors: Scalars,
}

pub fn field_name(field: Field) -> &'static str {
    match field {
        Field::Real => "real",
        Field::Complex => "complex",
    }
}

pub fn parse_field(name: &str) -> Result<Field> {
    match name {
        "real" => Ok(Field::Real),
        "complex" => Ok(Field::Complex),
        other => bail!("field must be \"real\" or \"complex\", got {other:?}"),
    }
}

pub fn encode_entry(z: Complex64, field: Field) -> Vec<f64> {
    match field {
        // Adjoints of real matrices hold -0.0 imaginary parts; keep any
        // nonzero bit pattern so content digests survive a write-read cycle.
        Field::Real if z.im.to_bits() == 0 => vec![z.re],
        _ => vec![z.re, z.im],
    }
}

fn decode_entry(raw: &[f64], field: Field) -> Result<Complex64> {
    let z = match raw {
        [re] => Complex64::new(*re, 0.0),
        [re, im] => Complex64::new(*re, *im),
        _ => bail!("scalar entries need one or two components, got {}", raw.len()),
    };
    if field == Field::Real && z.im != 0.0 {
        bail!("real field cannot hold imaginary component {}", z.im);
    }
    Ok(z)
}

pub fn encode_matrix(m: &DenseMatrix) -> Scalars {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| encode_entry(m.get(r, c), m.field())).collect())
        .collect()
}

fn decode_matrix(raw: &Scalars, rows: usize, cols: usize, field: Field) -> Result<DenseMatrix> {
    if raw.len() != rows {
        bail!("expected {rows} rows, got {}", raw.len());
    }
    let mut m = DenseMatrix::zeros(rows, cols, field);
    for (r, row) in raw.iter().enumerate() {
        if row.len() != cols {
            bail!("row {r} has {} entries, expected {cols}", row.len());
        }
        for (c, entry) in row.iter().enumerate() {
            m.set(r, c, decode_entry(entry, field)?);
        }
    }
    Ok(m)
}

pub fn encode_vector(x: &DenseVector) -> Vec<Vec<f64>> {
    x.entries().iter().map(|&z| encode_entry(z, x.field())).collect()
}

pub fn decode_vector(raw: &[Vec<f64>], field: Field) -> Result<DenseVector> {
    let entries = raw
        .iter()
        .map(|e| decode_entry(e, field))
        .collect::<Result<Vec<_>>>()?;
    if entries.is_empty() {
        bail!("vector must have at least one entry");
    }
    Ok(DenseVector::new(entries, field))
}

pub fn basis_to_file(pair: &BasisPair, manifest: Option<RunManifest>) -> BasisFile {
    BasisFile {
        n: pair.dim(),
        p: pair.p(),
        field: field_name(pair.field()).to_string(),
        t: encode_matrix(pair.synthesis()),
        f: encode_matrix(pair.analysis()),
        manifest,
    }
}

/// Rebuilds and checks the pair: shapes, the biorthogonality and unit-norm
/// axioms, and a short isometry battery. Anything off is an input error.
pub fn basis_from_file(file: &BasisFile) -> Result<BasisPair> {
    let field = parse_field(&file.field)?;
    let t = decode_matrix(&file.t, file.n, file.n, field).context("synthesis matrix T")?;
    let f = decode_matrix(&file.f, file.n, file.n, field).context("analysis matrix F")?;
    let pair = BasisPair::from_matrices(t, f, file.p)?;
    let report = validate(&pair, 8, 0xF11E);
    if !report.valid {
        bail!(
            "not a valid basis pair: {:?} (defect {:.3e})",
            report.violated_clause,
            report.witness_defect
        );
    }
    Ok(pair)
}

pub fn matrix_to_file(m: &DenseMatrix) -> MatrixFile {
    MatrixFile {
        rows: m.rows(),
        cols: m.cols(),
        field: field_name(m.field()).to_string(),
        entries: encode_matrix(m),
    }
}

pub fn matrix_from_file(file: &MatrixFile) -> Result<DenseMatrix> {
    let field = parse_field(&file.field)?;
    decode_matrix(&file.entries, file.rows, file.cols, field)
}

pub fn vectors_from_file(file: &VectorsFile, expected_dim: usize) -> Result<Vec<DenseVector>> {
    let field = parse_field(&file.field)?;
    if file.n != expected_dim {
        bail!("vectors have dimension {}, bases have {expected_dim}", file.n);
    }
    file.vectors
        .iter()
        .enumerate()
        .map(|(i, raw)| {
            let x = decode_vector(raw, field).with_context(|| format!("vector {i}"))?;
            if x.dim() != expected_dim {
                bail!("vector {i} has {} entries, expected {expected_dim}", x.dim());
            }
            Ok(x)
        })
        .collect()
}

/// Wire form of a certificate: every numeric field, the 1-based subsets,
/// digests of both pairs, and the tool version. Inadmissible certificates
/// carry explicit nulls for constant, rhs and slack.
#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub variant: String,
    pub n: usize,
    #[serde(rename = "M")]
    pub m: Vec<usize>,
    #[serde(rename = "N")]
    pub n_set: Vec<usize>,
    pub lhs: f64,
    pub tail_f: f64,
    pub tail_g: f64,
    pub mu: f64,
    pub bound: f64,
    pub admissible: bool,
    pub constant: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
    pub input_digest: String,
    pub digest_f: String,
    pub digest_g: String,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector_index: Option<usize>,
}

pub fn certificate_json(
    cert: &Certificate,
    digest_f: &str,
    digest_g: &str,
    vector_index: Option<usize>,
) -> CertificateJson {
    CertificateJson {
        variant: cert.variant.wire_name().to_string(),
        n: cert.subsets.universe(),
        m: cert.subsets.m_one_based(),
        n_set: cert.subsets.n_one_based(),
        lhs: cert.lhs,
        tail_f: cert.tail_f,
        tail_g: cert.tail_g,
        mu: cert.admissibility.mu,
        bound: cert.admissibility.bound,
        admissible: cert.admissibility.admissible,
        constant: cert.constant,
        rhs: cert.rhs,
        slack: cert.slack,
        input_digest: digest::to_hex(cert.input_digest),
        digest_f: digest_f.to_string(),
        digest_g: digest_g.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        vector_index,
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_basis(path: &Path) -> Result<BasisPair> {
    let file: BasisFile = read_json(path)?;
    basis_from_file(&file).with_context(|| format!("loading {}", path.display()))
}

/// Writes to the path when given, stdout otherwise.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ponb_core::bases::{dft_basis, random_genperm_basis};

    #[test]
    fn basis_files_round_trip_bit_exactly() {
        let pair = dft_basis(5, 2.0).unwrap();
        let file = basis_to_file(&pair, None);
        let text = serde_json::to_string(&file).unwrap();
        let parsed: BasisFile = serde_json::from_str(&text).unwrap();
        let back = basis_from_file(&parsed).unwrap();
        assert_eq!(back.dim(), pair.dim());
        for r in 0..5 {
            for c in 0..5 {
                let a = pair.synthesis().get(r, c);
                let b = back.synthesis().get(r, c);
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
        assert_eq!(back.content_digest(), pair.content_digest());
    }

    #[test]
    fn real_pairs_use_single_component_entries() {
        let pair = random_genperm_basis(4, 1.5, 3, Field::Real).unwrap();
        let file = basis_to_file(&pair, None);
        assert_eq!(file.field, "real");
        assert!(file.t.iter().flatten().all(|e| e.len() == 1));
        let back = basis_from_file(&file).unwrap();
        assert_eq!(back.content_digest(), pair.content_digest());
    }

    #[test]
    fn real_field_rejects_imaginary_parts() {
        let err = decode_entry(&[1.0, 0.5], Field::Real).unwrap_err();
        assert!(err.to_string().contains("imaginary"));
        assert!(decode_entry(&[1.0, 0.0], Field::Real).is_ok());
        assert!(decode_entry(&[], Field::Real).is_err());
    }

    #[test]
    fn corrupted_pairs_fail_to_load() {
        let pair = dft_basis(4, 2.0).unwrap();
        let mut file = basis_to_file(&pair, None);
        file.f[0][0][0] += 0.25;
        assert!(basis_from_file(&file).is_err());
        let mut wrong_shape = basis_to_file(&pair, None);
        wrong_shape.t[0].pop();
        assert!(basis_from_file(&wrong_shape).is_err());
    }

    #[test]
    fn matrices_and_vectors_round_trip() {
        let mut m = DenseMatrix::zeros(2, 3, Field::Complex);
        m.set(0, 1, Complex64::new(0.1 + 0.2, -7.0));
        m.set(1, 2, Complex64::new(f64::MIN_POSITIVE, 1e300));
        let text = serde_json::to_string(&matrix_to_file(&m)).unwrap();
        let parsed: MatrixFile = serde_json::from_str(&text).unwrap();
        let back = matrix_from_file(&parsed).unwrap();
        for r in 0..2 {
            for c in 0..3 {
                assert_eq!(m.get(r, c).re.to_bits(), back.get(r, c).re.to_bits());
                assert_eq!(m.get(r, c).im.to_bits(), back.get(r, c).im.to_bits());
            }
        }

        let x = DenseVector::new(vec![Complex64::new(0.3, -0.4); 3], Field::Complex);
        let raw = encode_vector(&x);
        let y = decode_vector(&raw, Field::Complex).unwrap();
        assert_eq!(x.entries(), y.entries());
    }
}
