use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OkumuraCheck {
    /// `Σ λᵢ³`.
    pub lhs: f64,
    /// `−(n−2)/√(n(n−1)) (Σ λᵢ²)^{3/2}`.
    pub rhs: f64,
    pub passed: bool,
}

/// Okumura's inequality for one trace-free tuple.
pub fn okumura_check(eigenvalues: &[f64]) -> Result<OkumuraCheck> {
    let n = eigenvalues.len();
    if n < 2 {
        return Err(Error::param("eigenvalues", "need at least two eigenvalues"));
    }
    let scale = eigenvalues.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let sum: f64 = eigenvalues.iter().sum();
    if sum.abs() > 1e-10 * scale {
        return Err(Error::NotTraceFree { sum });
    }
    let nf = n as f64;
    let lhs: f64 = eigenvalues.iter().map(|x| x.powi(3)).sum();
    let norm2: f64 = eigenvalues.iter().map(|x| x * x).sum();
    let rhs = -(nf - 2.0) / (nf * (nf - 1.0)).sqrt() * norm2.powf(1.5);
    // absolute slack 1e-12 for unit-sized tuples, relative to |T|³ beyond
    let passed = lhs >= rhs - 1e-12 * norm2.powf(1.5).max(1.0);
    Ok(OkumuraCheck { lhs, rhs, passed })
}

/// Summary of randomized checks for one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OkumuraSample {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub failures: usize,
    /// Smallest `(lhs − rhs)/|T|³` seen; zero means equality.
    pub min_normalized_margin: f64,
}

/// Draws `count` random trace-free tuples of length `n` with a seeded
/// generator and checks each.
pub fn okumura_sample(n: usize, count: usize, seed: u64) -> Result<OkumuraSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut failures = 0;
    let mut min_margin = f64::INFINITY;
    for _ in 0..count {
        let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
        let mut v: Vec<f64> = (0..n).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
        let mean = v.iter().sum::<f64>() / n as f64;
        v.iter_mut().for_each(|x| *x -= mean);
        let c = okumura_check(&v)?;
        if !c.passed {
            failures += 1;
        }
        let norm3 = v.iter().map(|x| x * x).sum::<f64>().powf(1.5);
        if norm3 > 0.0 {
            min_margin = min_margin.min((c.lhs - c.rhs) / norm3);
        }
    }
    Ok(OkumuraSample {
        n,
        count,
        seed,
        failures,
        min_normalized_margin: min_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_and_strict_examples() {
        let c = okumura_check(&[-2.0, 1.0, 1.0]).unwrap();
        assert!((c.lhs + 6.0).abs() < 1e-14 && (c.rhs + 6.0).abs() < 1e-12);
        assert!(c.passed);
        let c = okumura_check(&[2.0, -1.0, -1.0]).unwrap();
        assert_eq!(c.lhs, 6.0);
        assert!(c.passed && (c.rhs + 6.0).abs() < 1e-12);
        let c = okumura_check(&[0.0; 5]).unwrap();
        assert_eq!((c.lhs, c.rhs, c.passed), (0.0, 0.0, true));
    }

    #[test]
    fn rejects_trace() {
        assert!(matches!(
            okumura_check(&[1.0, 1.0, 1.0]),
            Err(Error::NotTraceFree { .. })
        ));
    }

    #[test]
    fn sampling_is_seeded() {
        let a = okumura_sample(4, 500, 42).unwrap();
        let b = okumura_sample(4, 500, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.failures, 0);
        assert!(a.min_normalized_margin >= 0.0);
    }
}
