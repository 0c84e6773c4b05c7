//! Zipf file-request popularity.

use alloc::vec::Vec;
use rand_core::RngCore;

use crate::{Error, Result};

/// Popularity pmf over an n-file library, with a precomputed cdf for
/// inverse-transform sampling. Immutable after construction.
#[derive(Debug, Clone)]
pub struct PopularityDist {
    probs: Vec<f64>,
    cdf: Vec<f64>,
}

impl PopularityDist {
    /// Zipf popularity: p_j proportional to j^{-alpha}, j = 1..n.
    /// alpha = 0 is uniform. The normalizer is computed by direct summation.
    pub fn zipf(n: usize, alpha: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("library size n must be >= 1"));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter("zipf exponent alpha must be >= 0 and finite"));
        }
        let mut probs: Vec<f64> = (1..=n)
            .map(|j| libm::pow(j as f64, -alpha))
            .collect();
        let norm: f64 = probs.iter().sum();
        for p in probs.iter_mut() {
            *p /= norm;
        }
        let mut cdf = Vec::with_capacity(n);
        let mut acc = 0.0;
        for &p in &probs {
            acc += p;
            cdf.push(acc);
        }
        cdf[n - 1] = 1.0;
        Ok(PopularityDist { probs, cdf })
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    /// p_j, indexed from 0 (file j = index + 1).
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Draw a file index (0-based) by inverse-cdf sampling.
    pub fn sample_file<R: RngCore>(&self, rng: &mut R) -> usize {
        let u = uniform_f64(rng);
        self.cdf.partition_point(|&c| c <= u).min(self.probs.len() - 1)
    }
}

/// Uniform f64 in [0, 1) with 53 bits of precision.
pub(crate) fn uniform_f64<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
