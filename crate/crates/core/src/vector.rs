//! Sparse binary vectors: a subset of `{1..dim}` kept as sorted 1-based indices.

use crate::error::{Result, SketchError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseBinaryVector {
    dim: usize,
    indices: Vec<u32>,
}

impl SparseBinaryVector {
    /// Builds a vector from strictly increasing 1-based indices.
    pub fn new(dim: usize, indices: Vec<u32>) -> Result<Self> {
        if dim == 0 {
            return Err(SketchError::ZeroParameter { what: "dim" });
        }
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(SketchError::UnsortedIndices {
                    prev: w[0],
                    next: w[1],
                });
            }
        }
        if let (Some(&first), Some(&last)) = (indices.first(), indices.last()) {
            for p in [first, last] {
                if p == 0 || p as usize > dim {
                    return Err(SketchError::PositionOutOfRange {
                        position: p as u64,
                        dim,
                    });
                }
            }
        }
        Ok(SparseBinaryVector { dim, indices })
    }

    /// Builds a vector from positions in any order; duplicates collapse.
    pub fn from_positions<I>(dim: usize, positions: I) -> Result<Self>
    where
        I: IntoIterator<Item = u32>,
    {
        let mut indices: Vec<u32> = positions.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        Self::new(dim, indices)
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    /// Hamming weight (number of ones).
    pub fn weight(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, position: u32) -> bool {
        self.indices.binary_search(&position).is_ok()
    }

    /// Coordinate-wise XOR (symmetric difference).
    pub fn xor(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        let (a, b) = (&self.indices, &other.indices);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(SparseBinaryVector {
            dim: self.dim,
            indices: out,
        })
    }
}

pub(crate) fn check_dims(a: &SparseBinaryVector, b: &SparseBinaryVector) -> Result<()> {
    if a.dim != b.dim {
        return Err(SketchError::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(())
}
