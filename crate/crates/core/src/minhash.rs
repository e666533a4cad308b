//! MinHash over genuine random permutations of `{1..dim}`.
//!
//! A family stores only `(dim, num_perms, seed)`. Permutation `k` is produced
//! by a Fisher-Yates shuffle driven by a ChaCha stream seeded from
//! `(seed, k)`, and is materialized into a reusable buffer when needed.

use rand::seq::SliceRandom;

use crate::error::{Result, SketchError};
use crate::prf;
use crate::vector::SparseBinaryVector;

/// Sentinel stored for the minhash of an empty set. Positions are 1-based,
/// so 0 never collides with a real arg-min.
pub const EMPTY: u32 = 0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationFamily {
    dim: usize,
    num_perms: usize,
    seed: u64,
}

impl PermutationFamily {
    pub fn new(dim: usize, num_perms: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(SketchError::ZeroParameter { what: "dim" });
        }
        if num_perms == 0 {
            return Err(SketchError::ZeroParameter { what: "num_perms" });
        }
        if dim > u32::MAX as usize {
            return Err(SketchError::invalid("dim exceeds u32 range"));
        }
        Ok(PermutationFamily {
            dim,
            num_perms,
            seed,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_perms(&self) -> usize {
        self.num_perms
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Writes permutation `k` into `ranks`, so that `ranks[i - 1] = π_k(i)`.
    pub fn fill_permutation(&self, k: usize, ranks: &mut Vec<u32>) {
        ranks.clear();
        ranks.extend(1..=self.dim as u32);
        let mut rng = prf::rng_for(prf::derive_seed(self.seed, k as u64));
        ranks.shuffle(&mut rng);
    }

    /// Permutation `k` as a rank table (`[i - 1] = π_k(i)`).
    pub fn permutation(&self, k: usize) -> Result<Vec<u32>> {
        if k >= self.num_perms {
            return Err(SketchError::invalid(format!(
                "permutation index {k} >= {}",
                self.num_perms
            )));
        }
        let mut ranks = Vec::with_capacity(self.dim);
        self.fill_permutation(k, &mut ranks);
        Ok(ranks)
    }

    pub fn compress(&self, v: &SparseBinaryVector) -> Result<MinHashSketch> {
        Ok(self
            .compress_all(std::slice::from_ref(v))?
            .pop()
            .expect("one sketch per input"))
    }

    /// Compresses a batch, generating each permutation once for all vectors.
    pub fn compress_all(&self, vectors: &[SparseBinaryVector]) -> Result<Vec<MinHashSketch>> {
        for v in vectors {
            if v.dim() != self.dim {
                return Err(SketchError::DimensionMismatch {
                    left: v.dim(),
                    right: self.dim,
                });
            }
        }
        let mut out: Vec<MinHashSketch> = vectors
            .iter()
            .map(|_| MinHashSketch {
                values: Vec::with_capacity(self.num_perms),
            })
            .collect();
        let mut ranks = Vec::with_capacity(self.dim);
        for k in 0..self.num_perms {
            self.fill_permutation(k, &mut ranks);
            for (v, sketch) in vectors.iter().zip(out.iter_mut()) {
                sketch.values.push(arg_min_rank(v.indices(), &ranks));
            }
        }
        Ok(out)
    }
}

/// `argmin_{i ∈ set} ranks[i - 1]`, or [`EMPTY`] for the empty set.
#[inline]
pub fn arg_min_rank(set: &[u32], ranks: &[u32]) -> u32 {
    let mut best = EMPTY;
    let mut best_rank = u32::MAX;
    for &i in set {
        let r = ranks[i as usize - 1];
        if r < best_rank {
            best_rank = r;
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinHashSketch {
    values: Vec<u32>,
}

impl MinHashSketch {
    /// Wraps raw entries; `EMPTY` (0) marks the minhash of an empty set.
    pub fn from_values(values: Vec<u32>) -> Result<Self> {
        if values.is_empty() {
            return Err(SketchError::ZeroParameter { what: "num_perms" });
        }
        Ok(MinHashSketch { values })
    }

    pub fn num_perms(&self) -> usize {
        self.values.len()
    }

    /// Raw entries with `EMPTY` as 0.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn get(&self, k: usize) -> Option<u32> {
        self.values.get(k).copied().filter(|&x| x != EMPTY)
    }
}

pub fn make_permutation_family(
    dim: usize,
    num_perms: usize,
    seed: u64,
) -> Result<PermutationFamily> {
    PermutationFamily::new(dim, num_perms, seed)
}

pub fn minhash_compress(v: &SparseBinaryVector, fam: &PermutationFamily) -> Result<MinHashSketch> {
    fam.compress(v)
}
