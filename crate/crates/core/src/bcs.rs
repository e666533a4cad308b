//! Parity-bucket compression (BCS).
//!
//! Every position `i` of `{1..d}` is assigned a bucket `b(i)` in `{1..N}`;
//! bit `j` of the sketch is the parity of the input ones that land in bucket
//! `j`. The map is linear over GF(2), so sketches can be built in one pass,
//! updated one position at a time, and XOR-ed.

use crate::error::{Result, SketchError};
use crate::prf;
use crate::vector::SparseBinaryVector;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Assignment {
    /// `b(i)` computed on demand from a keyed hash of the position.
    Hashed { key: u64 },
    /// Explicit `b(i)` for `i = 1..=dim`, stored at index `i - 1`.
    Table(Vec<u32>),
}

/// Random assignment of positions `{1..dim}` to buckets `{1..num_buckets}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BucketMap {
    dim: usize,
    num_buckets: usize,
    seed: u64,
    assignment: Assignment,
}

impl BucketMap {
    /// Seeded map whose buckets are i.i.d. uniform over `{1..num_buckets}`.
    ///
    /// Holds no per-position state: `bucket(i)` is a keyed hash of `(seed, i)`.
    pub fn new(dim: usize, num_buckets: usize, seed: u64) -> Result<Self> {
        check_sizes(dim, num_buckets)?;
        Ok(BucketMap {
            dim,
            num_buckets,
            seed,
            assignment: Assignment::Hashed {
                key: prf::mix64(seed),
            },
        })
    }

    /// Map with an explicit table; `table[i - 1]` is the bucket of position `i`.
    pub fn from_table(num_buckets: usize, table: Vec<u32>) -> Result<Self> {
        check_sizes(table.len(), num_buckets)?;
        if let Some(&bad) = table.iter().find(|&&b| b == 0 || b as usize > num_buckets) {
            return Err(SketchError::BucketOutOfRange {
                bucket: bad,
                num_buckets,
            });
        }
        Ok(BucketMap {
            dim: table.len(),
            num_buckets,
            seed: 0,
            assignment: Assignment::Table(table),
        })
    }

    /// The collision-free map `b(i) = i`, which needs `num_buckets >= dim`.
    /// BCS under this map is lossless.
    pub fn injective(dim: usize, num_buckets: usize) -> Result<Self> {
        if num_buckets < dim {
            return Err(SketchError::invalid(format!(
                "injective map needs num_buckets >= dim ({num_buckets} < {dim})"
            )));
        }
        Self::from_table(num_buckets, (1..=dim as u32).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_buckets(&self) -> usize {
        self.num_buckets
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Bucket of `position` (both 1-based).
    pub fn bucket(&self, position: u32) -> Result<u32> {
        if position == 0 || position as usize > self.dim {
            return Err(SketchError::PositionOutOfRange {
                position: position as u64,
                dim: self.dim,
            });
        }
        Ok(self.bucket_unchecked(position))
    }

    #[inline]
    pub(crate) fn bucket_unchecked(&self, position: u32) -> u32 {
        match &self.assignment {
            Assignment::Hashed { key } => {
                1 + prf::reduce(prf::keyed(*key, position as u64), self.num_buckets as u64) as u32
            }
            Assignment::Table(t) => t[position as usize - 1],
        }
    }

    /// Compresses `v` in one pass over its ones.
    pub fn compress(&self, v: &SparseBinaryVector) -> Result<BcsSketch> {
        if v.dim() != self.dim {
            return Err(SketchError::DimensionMismatch {
                left: v.dim(),
                right: self.dim,
            });
        }
        let mut sketch = BcsSketch::zeros(self.num_buckets)?;
        for &i in v.indices() {
            sketch.flip(self.bucket_unchecked(i));
        }
        Ok(sketch)
    }
}

fn check_sizes(dim: usize, num_buckets: usize) -> Result<()> {
    if dim == 0 {
        return Err(SketchError::ZeroParameter { what: "dim" });
    }
    if num_buckets == 0 {
        return Err(SketchError::ZeroParameter {
            what: "num_buckets",
        });
    }
    if num_buckets > u32::MAX as usize {
        return Err(SketchError::invalid("num_buckets exceeds u32 range"));
    }
    Ok(())
}

/// Packed bit array of length `num_buckets`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BcsSketch {
    num_buckets: usize,
    words: Vec<u64>,
}

impl BcsSketch {
    pub fn zeros(num_buckets: usize) -> Result<Self> {
        if num_buckets == 0 {
            return Err(SketchError::ZeroParameter {
                what: "num_buckets",
            });
        }
        Ok(BcsSketch {
            num_buckets,
            words: vec![0; num_buckets.div_ceil(64)],
        })
    }

    /// Builds a sketch from explicit bits (any nonzero byte is a one).
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut s = Self::zeros(bits.len())?;
        for (j, &b) in bits.iter().enumerate() {
            if b != 0 {
                s.words[j / 64] |= 1 << (j % 64);
            }
        }
        Ok(s)
    }

    pub fn num_buckets(&self) -> usize {
        self.num_buckets
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Bit of 1-based `bucket`.
    pub fn bit(&self, bucket: u32) -> bool {
        let j = bucket as usize - 1;
        self.words[j / 64] >> (j % 64) & 1 == 1
    }

    /// Bits as 0/1 bytes, bucket 1 first.
    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.num_buckets)
            .map(|j| (self.words[j / 64] >> (j % 64) & 1) as u8)
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    fn flip(&mut self, bucket: u32) {
        let j = bucket as usize - 1;
        self.words[j / 64] ^= 1 << (j % 64);
    }

    /// Streaming update: toggles the bucket of `position`.
    pub fn update(&mut self, position: u32, map: &BucketMap) -> Result<()> {
        if map.num_buckets() != self.num_buckets {
            return Err(SketchError::LengthMismatch {
                left: self.num_buckets,
                right: map.num_buckets(),
            });
        }
        let bucket = map.bucket(position)?;
        self.flip(bucket);
        Ok(())
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        check_lengths(self, other)?;
        Ok(BcsSketch {
            num_buckets: self.num_buckets,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// Hamming distance between two sketches.
    pub fn hamming(&self, other: &Self) -> Result<usize> {
        check_lengths(self, other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    /// Inner product (number of shared ones) between two sketches.
    pub fn inner(&self, other: &Self) -> Result<usize> {
        check_lengths(self, other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum())
    }
}

pub(crate) fn check_lengths(a: &BcsSketch, b: &BcsSketch) -> Result<()> {
    if a.num_buckets != b.num_buckets {
        return Err(SketchError::LengthMismatch {
            left: a.num_buckets,
            right: b.num_buckets,
        });
    }
    Ok(())
}

pub fn make_bucket_map(dim: usize, num_buckets: usize, seed: u64) -> Result<BucketMap> {
    BucketMap::new(dim, num_buckets, seed)
}

pub fn bcs_compress(v: &SparseBinaryVector, map: &BucketMap) -> Result<BcsSketch> {
    map.compress(v)
}

/// Returns `s` with the bucket of `position` toggled.
pub fn bcs_update(mut s: BcsSketch, position: u32, map: &BucketMap) -> Result<BcsSketch> {
    s.update(position, map)?;
    Ok(s)
}
