//! Compression-length calculator and corruption-probability bound.
//!
//! All logarithms are base 2.

use crate::bcs::BucketMap;
use crate::error::{Result, SketchError};
use crate::vector::{check_dims, SparseBinaryVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionParams {
    psi: u64,
    n: u64,
    epsilon: f64,
    r: u64,
    epsilon_tilde: f64,
}

/// Which case of the length rule applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthBranch {
    /// `ε·r > 3·log n`: `N = 16ψ²`.
    Quadratic,
    /// `ε·r ≤ 3·log n`: `N = 144ψ²·log²n`.
    QuadraticLogSquared,
}

impl LengthBranch {
    pub fn describe(&self) -> &'static str {
        match self {
            LengthBranch::Quadratic => "eps*r > 3 log2 n: N = 16 psi^2",
            LengthBranch::QuadraticLogSquared => "eps*r <= 3 log2 n: N = 144 psi^2 log2^2 n",
        }
    }
}

impl CompressionParams {
    /// `epsilon_tilde` defaults to the smallest admissible value,
    /// `max(ε, 2ε/(1−ε))`.
    pub fn new(psi: u64, n: u64, epsilon: f64, r: u64) -> Result<Self> {
        if psi == 0 {
            return Err(SketchError::ZeroParameter { what: "psi" });
        }
        if n == 0 {
            return Err(SketchError::ZeroParameter { what: "n" });
        }
        if r == 0 {
            return Err(SketchError::ZeroParameter { what: "r" });
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(SketchError::invalid(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        Ok(CompressionParams {
            psi,
            n,
            epsilon,
            r,
            epsilon_tilde: min_epsilon_tilde(epsilon),
        })
    }

    pub fn with_epsilon_tilde(mut self, epsilon_tilde: f64) -> Result<Self> {
        let lo = min_epsilon_tilde(self.epsilon);
        if epsilon_tilde.is_nan() || epsilon_tilde < lo {
            return Err(SketchError::invalid(format!(
                "epsilon_tilde must be >= {lo}, got {epsilon_tilde}"
            )));
        }
        self.epsilon_tilde = epsilon_tilde;
        Ok(self)
    }

    pub fn psi(&self) -> u64 {
        self.psi
    }
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn r(&self) -> u64 {
        self.r
    }
    pub fn epsilon_tilde(&self) -> f64 {
        self.epsilon_tilde
    }

    pub fn branch(&self) -> LengthBranch {
        let log_n = (self.n as f64).log2();
        if self.epsilon * self.r as f64 > 3.0 * log_n {
            LengthBranch::Quadratic
        } else {
            LengthBranch::QuadraticLogSquared
        }
    }
}

pub fn min_epsilon_tilde(epsilon: f64) -> f64 {
    epsilon.max(2.0 * epsilon / (1.0 - epsilon))
}

/// Compression length `N` sufficient for every pair to share at most `ε·r`
/// corrupted buckets with probability at least `1 − 1/n`.
pub fn required_length(p: &CompressionParams) -> u64 {
    let psi_sq = (p.psi as f64).powi(2);
    match p.branch() {
        LengthBranch::Quadratic => 16 * p.psi * p.psi,
        LengthBranch::QuadraticLogSquared => {
            (144.0 * psi_sq * (p.n as f64).log2().powi(2)).ceil() as u64
        }
    }
}

/// `min(1, (2ψ/√N)^{ε·r})`: bound on the probability that two compressed
/// vectors share more than `ε·r` corrupted buckets.
pub fn corruption_bound(psi: u64, num_buckets: u64, epsilon: f64, r: u64) -> f64 {
    let base = 2.0 * psi as f64 / (num_buckets as f64).sqrt();
    base.powf(epsilon * r as f64).min(1.0)
}

/// Number of buckets receiving two or more active positions of the pair
/// (positions where either vector has a one).
pub fn corrupted_buckets(
    u: &SparseBinaryVector,
    v: &SparseBinaryVector,
    map: &BucketMap,
) -> Result<usize> {
    check_dims(u, v)?;
    if u.dim() != map.dim() {
        return Err(SketchError::DimensionMismatch {
            left: u.dim(),
            right: map.dim(),
        });
    }
    let mut buckets: Vec<u32> = active_positions(u.indices(), v.indices())
        .map(|i| map.bucket_unchecked(i))
        .collect();
    buckets.sort_unstable();
    let mut corrupted = 0;
    let mut k = 0;
    while k < buckets.len() {
        let mut run = 1;
        while k + run < buckets.len() && buckets[k + run] == buckets[k] {
            run += 1;
        }
        if run >= 2 {
            corrupted += 1;
        }
        k += run;
    }
    Ok(corrupted)
}

fn active_positions<'a>(a: &'a [u32], b: &'a [u32]) -> impl Iterator<Item = u32> + 'a {
    let mut merged: Vec<u32> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    merged.dedup();
    merged.into_iter()
}

/// Order-of-magnitude random-bit budgets (`d·⌈log N⌉` for a bucket map,
/// `N·d·⌈log d⌉` for `N` permutations).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomnessBudget {
    pub bcs_bits: u128,
    pub minhash_bits: u128,
}

pub fn randomness_budget(dim: u64, length: u64) -> RandomnessBudget {
    let clog2 = |x: u64| -> u128 { (x.max(2) as f64).log2().ceil() as u128 };
    RandomnessBudget {
        bcs_bits: dim as u128 * clog2(length),
        minhash_bits: length as u128 * dim as u128 * clog2(dim),
    }
}
