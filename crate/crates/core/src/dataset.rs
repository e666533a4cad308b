use crate::error::{Result, SketchError};
use crate::vector::SparseBinaryVector;

/// A corpus of sparse vectors sharing one dimension. `sparsity` is always the
/// maximum weight actually present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseDataset {
    dim: usize,
    vectors: Vec<SparseBinaryVector>,
    sparsity: usize,
}

impl SparseDataset {
    pub fn new(dim: usize, vectors: Vec<SparseBinaryVector>) -> Result<Self> {
        if dim == 0 {
            return Err(SketchError::ZeroParameter { what: "dim" });
        }
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(SketchError::DimensionMismatch {
                left: v.dim(),
                right: dim,
            });
        }
        let sparsity = vectors.iter().map(|v| v.weight()).max().unwrap_or(0);
        Ok(SparseDataset {
            dim,
            vectors,
            sparsity,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[SparseBinaryVector] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<SparseBinaryVector> {
        self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Maximum weight over the vectors (ψ).
    pub fn sparsity(&self) -> usize {
        self.sparsity
    }

    /// The subset at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let vectors = indices
            .iter()
            .map(|&i| {
                self.vectors.get(i).cloned().ok_or_else(|| {
                    SketchError::invalid(format!("index {i} out of {} vectors", self.len()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.dim, vectors)
    }
}
