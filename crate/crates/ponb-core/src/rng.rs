//! Seeded, platform-independent randomness.
//!
//! ChaCha8 supplies the bit stream; the float transforms on top are written
//! out explicitly (open uniform, Box-Muller) so that every consumer sees the
//! same sequence for the same seed on every target, independent of any
//! distribution crate's internals.

// Inherent float math lives in std; the trait supplies it under no_std.
// Graphs that link std anywhere (tests do) shadow it, idling the import.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::spaces::{p_norm, DenseVector, Field};

#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent substream of the same seed. Restart r of a search uses
    /// stream r + 1, leaving stream 0 for the driver.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on [0, 1) with 53 random mantissa bits.
    pub fn uniform(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.inner.next_u64() >> 11) as f64 * SCALE
    }

    /// Standard normal via Box-Muller; the sine half is discarded to keep
    /// the stream position independent of call parity.
    pub fn gaussian(&mut self) -> f64 {
        loop {
            let u1 = self.uniform();
            if u1 > 0.0 {
                let u2 = self.uniform();
                return (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos();
            }
        }
    }

    /// Gaussian scalar in the given field; real draws one normal, complex
    /// draws an independent normal per component.
    pub fn scalar(&mut self, field: Field) -> Complex64 {
        match field {
            Field::Real => Complex64::new(self.gaussian(), 0.0),
            Field::Complex => Complex64::new(self.gaussian(), self.gaussian()),
        }
    }

    /// Uniform index below `bound` by rejection, so every index has exactly
    /// equal probability.
    pub fn index(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        let bound = bound as u64;
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let raw = self.inner.next_u64();
            if raw < zone {
                return (raw % bound) as usize;
            }
        }
    }

    /// Fisher-Yates shuffle of 0..n.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.index(i + 1);
            perm.swap(i, j);
        }
        perm
    }

    /// Unit-modulus scalar: a random sign over the reals, a random phase
    /// over the complex field.
    pub fn unimodular(&mut self, field: Field) -> Complex64 {
        match field {
            Field::Real => {
                if self.inner.next_u64() & 1 == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(-1.0, 0.0)
                }
            }
            Field::Complex => {
                let theta = TAU * self.uniform();
                Complex64::new(theta.cos(), theta.sin())
            }
        }
    }

    /// Unit-modulus scalar that is exactly representable: a sign over the
    /// reals, a fourth root of unity over the complex field. Products of
    /// these round nowhere, so matrices built from them keep modulus
    /// exactly 1 where a generic phase would drift by an ulp.
    pub fn exact_unimodular(&mut self, field: Field) -> Complex64 {
        match field {
            Field::Real => self.unimodular(field),
            Field::Complex => match self.inner.next_u64() & 3 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            },
        }
    }

    /// Gaussian vector, unnormalized.
    pub fn vector(&mut self, n: usize, field: Field) -> DenseVector {
        let entries = (0..n).map(|_| self.scalar(field)).collect();
        DenseVector::new(entries, field)
    }

    /// Gaussian direction scaled to unit p-norm. Redraws in the measure-zero
    /// event that the raw draw is numerically null.
    pub fn unit_vector(&mut self, n: usize, p: f64, field: Field) -> DenseVector {
        loop {
            let v = self.vector(n, field);
            let norm = p_norm(&v, p).expect("gaussian vector is nonempty and p >= 1");
            if norm > 1e-12 {
                return v.scaled(Complex64::new(1.0 / norm, 0.0));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = SeededRng::new(7);
        let mut b = SeededRng::new(7);
        for _ in 0..64 {
            assert_eq!(a.next_u64(), b.next_u64());
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
    }

    #[test]
    fn substreams_differ_from_base_and_each_other() {
        let mut base = SeededRng::new(3);
        let mut s1 = SeededRng::with_stream(3, 1);
        let mut s2 = SeededRng::with_stream(3, 2);
        let (a, b, c) = (base.next_u64(), s1.next_u64(), s2.next_u64());
        assert_ne!(a, b);
        assert_ne!(b, c);
        assert_ne!(a, c);
    }

    #[test]
    fn uniform_is_in_unit_interval() {
        let mut rng = SeededRng::new(11);
        for _ in 0..10_000 {
            let u = rng.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn gaussian_moments_are_plausible() {
        let mut rng = SeededRng::new(5);
        let n = 40_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let g = rng.gaussian();
            sum += g;
            sum_sq += g * g;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn permutation_is_a_bijection() {
        let mut rng = SeededRng::new(9);
        let perm = rng.permutation(17);
        let mut seen = [false; 17];
        for &i in &perm {
            assert!(!seen[i]);
            seen[i] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn unit_vector_has_unit_p_norm() {
        let mut rng = SeededRng::new(13);
        for &p in &[1.5, 2.0, 3.0] {
            let v = rng.unit_vector(8, p, Field::Complex);
            let norm = p_norm(&v, p).unwrap();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn index_rejection_stays_in_range() {
        let mut rng = SeededRng::new(21);
        for _ in 0..1000 {
            assert!(rng.index(7) < 7);
        }
    }
}
