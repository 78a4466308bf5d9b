//! Internal dense linear algebra: modified Gram-Schmidt, a one-sided Jacobi
//! SVD, induced endpoint norms and structural matrix checks.
//!
//! The one-sided Jacobi form works directly on columns, so singular values
//! come out with small absolute error instead of the sqrt-of-eigenvalue
//! error floor a normal-equations route would have. That accuracy is what
//! lets rank decisions use a 1e-8 gap threshold safely.

// Inherent float math lives in std; the trait supplies it under no_std.
// Graphs that link std anywhere (tests do) shadow it, idling the import.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::spaces::{DenseMatrix, DenseVector};

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_PAIR_TOL: f64 = 1e-15;
const JACOBI_CONVERGED: f64 = 1e-14;

pub(crate) struct Svd {
    /// Descending; one value per column of the input.
    pub singular_values: Vec<f64>,
    /// Columns are the right singular vectors, in the same order.
    pub right_vectors: DenseMatrix,
}

/// One-sided Jacobi SVD. Columns of `a` are rotated until mutually
/// orthogonal; their norms are the singular values and the accumulated
/// rotations form the right singular vectors.
pub(crate) fn jacobi_svd(a: &DenseMatrix) -> Svd {
    let m = a.rows();
    let n = a.cols();
    let mut w: Vec<DenseVector> = (0..n).map(|c| a.column(c)).collect();
    let mut v: Vec<DenseVector> = (0..n)
        .map(|c| DenseVector::canonical(n, c, a.field()))
        .collect();

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let aa = w[i].dot_conj(&w[i]).re;
                let bb = w[j].dot_conj(&w[j]).re;
                let c = w[i].dot_conj(&w[j]);
                let c_abs = c.norm();
                let denom = (aa * bb).sqrt();
                if denom == 0.0 || c_abs <= JACOBI_PAIR_TOL * denom {
                    continue;
                }
                worst = worst.max(c_abs / denom);

                // Phase-rotate column j so the pair inner product is real,
                // then apply the real Jacobi rotation annihilating it.
                // dot_conj conjugates the left argument, so the phase that
                // makes <w_i, alpha w_j> real positive is conj(c) / |c|.
                let alpha = c.conj() / c_abs;
                let tau = (bb - aa) / (2.0 * c_abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;

                rotate_pair(&mut w, i, j, m, alpha, cs, sn);
                rotate_pair(&mut v, i, j, n, alpha, cs, sn);
            }
        }
        if worst < JACOBI_CONVERGED {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = w.iter().map(|col| col.dot_conj(col).re.sqrt()).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap());

    let singular_values: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let mut right = DenseMatrix::zeros(n, n, a.field());
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            right.set(r, dst, v[src].get(r));
        }
    }
    Svd {
        singular_values,
        right_vectors: right,
    }
}

fn rotate_pair(
    cols: &mut [DenseVector],
    i: usize,
    j: usize,
    len: usize,
    alpha: Complex64,
    cs: f64,
    sn: f64,
) {
    for r in 0..len {
        let ui = cols[i].get(r);
        let uj = alpha * cols[j].get(r);
        cols[i].set(r, ui * cs - uj * sn);
        cols[j].set(r, ui * sn + uj * cs);
    }
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Returns `None`
/// if a column collapses (numerically dependent input). The result's columns
/// are phase-fixed so the first significant entry is real and nonnegative,
/// making the output a deterministic function of the input.
pub(crate) fn orthonormalize_columns(a: &DenseMatrix) -> Option<DenseMatrix> {
    let m = a.rows();
    let n = a.cols();
    let mut cols: Vec<DenseVector> = (0..n).map(|c| a.column(c)).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for i in 0..j {
                let proj = cols[i].dot_conj(&cols[j]);
                for r in 0..m {
                    let updated = cols[j].get(r) - proj * cols[i].get(r);
                    cols[j].set(r, updated);
                }
            }
        }
        let norm = cols[j].dot_conj(&cols[j]).re.sqrt();
        if norm < 1e-10 {
            return None;
        }
        let inv = Complex64::new(1.0 / norm, 0.0);
        for r in 0..m {
            let scaled = cols[j].get(r) * inv;
            cols[j].set(r, scaled);
        }
    }

    let mut out = DenseMatrix::zeros(m, n, a.field());
    for (j, col) in cols.iter().enumerate() {
        let lead = (0..m).find(|&r| col.get(r).norm() > 1e-8);
        let phase = match lead {
            Some(r) => {
                let z = col.get(r);
                (z / z.norm()).conj()
            }
            None => Complex64::new(1.0, 0.0),
        };
        for r in 0..m {
            out.set(r, j, col.get(r) * phase);
        }
    }
    Some(out)
}

/// Largest deviation of m^H m from the identity; zero for exact unitaries.
pub(crate) fn unitary_defect(m: &DenseMatrix) -> f64 {
    match m.adjoint().mul(m) {
        Ok(gram) => gram.max_abs_diff_identity(),
        Err(_) => f64::INFINITY,
    }
}

/// Distance of a square matrix from the set of generalized permutations
/// (exactly one unit-modulus entry per column, rows hit bijectively).
/// A row collision is reported as a defect of at least 1, since no small
/// perturbation repairs it.
pub(crate) fn generalized_permutation_defect(m: &DenseMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.rows();
    let mut defect: f64 = 0.0;
    let mut used = alloc::vec![false; n];
    for c in 0..n {
        let mut lead_row = 0;
        let mut lead_abs = -1.0;
        for r in 0..n {
            let a = m.get(r, c).norm();
            if a > lead_abs {
                lead_abs = a;
                lead_row = r;
            }
        }
        defect = defect.max((lead_abs - 1.0).abs());
        for r in 0..n {
            if r != lead_row {
                defect = defect.max(m.get(r, c).norm());
            }
        }
        if used[lead_row] {
            defect = defect.max(1.0);
        }
        used[lead_row] = true;
    }
    defect
}

/// Induced operator norm l^1 -> l^1: largest column absolute sum.
pub(crate) fn induced_norm_one(a: &DenseMatrix) -> f64 {
    let mut best: f64 = 0.0;
    for c in 0..a.cols() {
        let sum: f64 = (0..a.rows()).map(|r| a.get(r, c).norm()).sum();
        best = best.max(sum);
    }
    best
}

/// Induced operator norm l^inf -> l^inf: largest row absolute sum.
pub(crate) fn induced_norm_inf(a: &DenseMatrix) -> f64 {
    let mut best: f64 = 0.0;
    for r in 0..a.rows() {
        let sum: f64 = a.row(r).iter().map(|z| z.norm()).sum();
        best = best.max(sum);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;
    use crate::spaces::Field;

    fn random_matrix(rows: usize, cols: usize, field: Field, seed: u64) -> DenseMatrix {
        let mut rng = SeededRng::new(seed);
        let mut m = DenseMatrix::zeros(rows, cols, field);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, rng.scalar(field));
            }
        }
        m
    }

    #[test]
    fn svd_of_diagonal_matrix() {
        let mut a = DenseMatrix::zeros(3, 3, Field::Real);
        a.set(0, 0, Complex64::new(3.0, 0.0));
        a.set(1, 1, Complex64::new(-1.0, 0.0));
        a.set(2, 2, Complex64::new(2.0, 0.0));
        let svd = jacobi_svd(&a);
        assert!((svd.singular_values[0] - 3.0).abs() < 1e-14);
        assert!((svd.singular_values[1] - 2.0).abs() < 1e-14);
        assert!((svd.singular_values[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn svd_right_vectors_diagonalize() {
        let a = random_matrix(7, 5, Field::Complex, 42);
        let svd = jacobi_svd(&a);
        // Right vectors are orthonormal.
        assert!(unitary_defect(&svd.right_vectors) < 1e-12);
        // Each right vector maps to a column of norm sigma_i.
        for k in 0..5 {
            let v = svd.right_vectors.column(k);
            let av = a.mul_vec(&v).unwrap();
            let norm = av.dot_conj(&av).re.sqrt();
            assert!(
                (norm - svd.singular_values[k]).abs() < 1e-12,
                "k = {k}: {norm} vs {}",
                svd.singular_values[k]
            );
        }
        // Images of distinct right vectors are orthogonal.
        let av0 = a.mul_vec(&svd.right_vectors.column(0)).unwrap();
        let av1 = a.mul_vec(&svd.right_vectors.column(1)).unwrap();
        assert!(av0.dot_conj(&av1).norm() < 1e-10);
    }

    #[test]
    fn svd_total_energy_matches_frobenius() {
        let a = random_matrix(6, 6, Field::Complex, 7);
        let svd = jacobi_svd(&a);
        let frob_sq: f64 = a.entries().iter().map(|z| z.norm_sqr()).sum();
        let sigma_sq: f64 = svd.singular_values.iter().map(|s| s * s).sum();
        assert!((frob_sq - sigma_sq).abs() < 1e-10 * frob_sq);
    }

    #[test]
    fn svd_detects_exact_rank_deficiency() {
        // Two identical columns: singular values (sqrt(2)*norm, 0).
        let mut a = DenseMatrix::zeros(3, 2, Field::Real);
        for r in 0..3 {
            let v = Complex64::new(r as f64 + 1.0, 0.0);
            a.set(r, 0, v);
            a.set(r, 1, v);
        }
        let svd = jacobi_svd(&a);
        let col_norm = (1.0_f64 + 4.0 + 9.0).sqrt();
        assert!((svd.singular_values[0] - 2.0_f64.sqrt() * col_norm).abs() < 1e-12);
        assert!(svd.singular_values[1].abs() < 1e-12);
    }

    #[test]
    fn svd_handles_wide_matrices() {
        // 2x3 of rank <= 2: third singular value must vanish.
        let a = random_matrix(2, 3, Field::Complex, 19);
        let svd = jacobi_svd(&a);
        assert_eq!(svd.singular_values.len(), 3);
        assert!(svd.singular_values[2].abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_produces_unitary_with_fixed_phases() {
        let a = random_matrix(6, 6, Field::Complex, 3);
        let q = orthonormalize_columns(&a).unwrap();
        assert!(unitary_defect(&q) < 1e-12);
        for c in 0..6 {
            let lead = q.get(0, c);
            assert!(lead.im.abs() < 1e-12, "column {c} lead not real");
            assert!(lead.re > -1e-12, "column {c} lead negative");
        }
    }

    #[test]
    fn gram_schmidt_rejects_dependent_columns() {
        let mut a = DenseMatrix::zeros(3, 2, Field::Real);
        for r in 0..3 {
            a.set(r, 0, Complex64::new(1.0, 0.0));
            a.set(r, 1, Complex64::new(2.0, 0.0));
        }
        assert!(orthonormalize_columns(&a).is_none());
    }

    #[test]
    fn permutation_defect_distinguishes_structures() {
        // A signed permutation has zero defect.
        let mut p = DenseMatrix::zeros(3, 3, Field::Real);
        p.set(1, 0, Complex64::new(-1.0, 0.0));
        p.set(2, 1, Complex64::new(1.0, 0.0));
        p.set(0, 2, Complex64::new(1.0, 0.0));
        assert_eq!(generalized_permutation_defect(&p), 0.0);

        // Sharing a row is unrepairable.
        let mut bad = DenseMatrix::zeros(2, 2, Field::Real);
        bad.set(0, 0, Complex64::new(1.0, 0.0));
        bad.set(0, 1, Complex64::new(1.0, 0.0));
        assert!(generalized_permutation_defect(&bad) >= 1.0);

        // A flat unitary is far from any permutation: both columns lead on
        // the same row, so the collision clause pushes the defect to 1.
        let mut flat = DenseMatrix::zeros(2, 2, Field::Real);
        let h = 1.0 / 2.0_f64.sqrt();
        flat.set(0, 0, Complex64::new(h, 0.0));
        flat.set(0, 1, Complex64::new(h, 0.0));
        flat.set(1, 0, Complex64::new(h, 0.0));
        flat.set(1, 1, Complex64::new(-h, 0.0));
        let defect = generalized_permutation_defect(&flat);
        assert!(defect >= 1.0 - h);
        assert_eq!(defect, 1.0);
    }

    #[test]
    fn induced_endpoint_norms() {
        let mut a = DenseMatrix::zeros(2, 2, Field::Real);
        a.set(0, 0, Complex64::new(1.0, 0.0));
        a.set(0, 1, Complex64::new(-2.0, 0.0));
        a.set(1, 0, Complex64::new(3.0, 0.0));
        a.set(1, 1, Complex64::new(0.5, 0.0));
        assert_eq!(induced_norm_one(&a), 4.0);
        assert_eq!(induced_norm_inf(&a), 3.5);
    }
}
