//! Synthetic generators: planted similar pairs for all-pairs search and a
//! planted neighbourhood around a query for k-NN search.
//!
//! A planted pair shares `s ~ U[1, ψ]` positions; each side then receives
//! `s' ~ U[1, ψ − s]` extra positions outside the shared ones (`s' = 0` when
//! `s = ψ`). The pair's Jaccard similarity is at least `s / (s + s'_a + s'_b)`.

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::SparseDataset;
use crate::error::{Result, SketchError};
use crate::prf;
use crate::vector::SparseBinaryVector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedPair {
    pub first: SparseBinaryVector,
    pub second: SparseBinaryVector,
    /// Number of shared positions `s`.
    pub shared: usize,
    /// Extra positions added to each side (`s'` for first, second).
    pub extras: (usize, usize),
}

impl PlantedPair {
    /// Guaranteed lower bound on the pair's Jaccard similarity.
    pub fn similarity_floor(&self) -> f64 {
        self.shared as f64 / (self.shared + self.extras.0 + self.extras.1) as f64
    }
}

fn check_psi(dim: usize, psi: usize) -> Result<()> {
    if dim == 0 {
        return Err(SketchError::ZeroParameter { what: "dim" });
    }
    if psi == 0 {
        return Err(SketchError::ZeroParameter { what: "psi" });
    }
    if psi > dim {
        return Err(SketchError::invalid(format!("psi {psi} exceeds dim {dim}")));
    }
    if dim > u32::MAX as usize {
        return Err(SketchError::invalid("dim exceeds u32 range"));
    }
    Ok(())
}

/// `count` distinct 0-based positions from `0..dim`.
fn sample_positions(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> Vec<u32> {
    index::sample(rng, dim, count)
        .into_iter()
        .map(|i| i as u32)
        .collect()
}

/// `count` distinct 0-based positions from `0..dim` avoiding the sorted
/// 0-based set `taken`.
fn sample_outside(rng: &mut ChaCha8Rng, dim: usize, taken: &[u32], count: usize) -> Vec<u32> {
    let mut ranks = sample_positions(rng, dim - taken.len(), count);
    ranks.sort_unstable();
    // the q-th free position: shift past every taken position at or below it
    let mut out = Vec::with_capacity(count);
    let mut t = 0;
    for q in ranks {
        let mut p = q + t as u32;
        while t < taken.len() && taken[t] <= p {
            t += 1;
            p = q + t as u32;
        }
        out.push(p);
    }
    out
}

fn to_vector(dim: usize, zero_based: impl IntoIterator<Item = u32>) -> SparseBinaryVector {
    SparseBinaryVector::from_positions(dim, zero_based.into_iter().map(|p| p + 1))
        .expect("generated positions lie in range")
}

fn extra_count(rng: &mut ChaCha8Rng, psi: usize, used: usize) -> usize {
    if used >= psi {
        0
    } else {
        rng.random_range(1..=psi - used)
    }
}

/// Plants extras around a shared core; `core` is sorted and 0-based.
fn plant_around(
    rng: &mut ChaCha8Rng,
    dim: usize,
    psi: usize,
    core: &[u32],
    used: usize,
) -> (SparseBinaryVector, usize) {
    let extra = extra_count(rng, psi, used);
    let added = sample_outside(rng, dim, core, extra);
    (to_vector(dim, core.iter().copied().chain(added)), extra)
}

fn similar_pair(rng: &mut ChaCha8Rng, dim: usize, psi: usize) -> PlantedPair {
    let shared = rng.random_range(1..=psi);
    let mut core = sample_positions(rng, dim, shared);
    core.sort_unstable();
    let (first, ea) = plant_around(rng, dim, psi, &core, shared);
    let (second, eb) = plant_around(rng, dim, psi, &core, shared);
    PlantedPair {
        first,
        second,
        shared,
        extras: (ea, eb),
    }
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize, psi: usize) -> SparseBinaryVector {
    let weight = rng.random_range(1..=psi);
    to_vector(dim, sample_positions(rng, dim, weight))
}

pub fn gen_similar_pair(dim: usize, psi: usize, seed: u64) -> Result<PlantedPair> {
    check_psi(dim, psi)?;
    Ok(similar_pair(&mut prf::rng_for(seed), dim, psi))
}

/// `n` vectors; the first `2 * num_similar_pairs` are planted pairs stored
/// adjacently (`2k`, `2k + 1`), the rest have uniform weight in `[1, ψ]`.
pub fn gen_allpairs_dataset(
    n: usize,
    dim: usize,
    psi: usize,
    num_similar_pairs: usize,
    seed: u64,
) -> Result<SparseDataset> {
    check_psi(dim, psi)?;
    if 2 * num_similar_pairs > n {
        return Err(SketchError::invalid(format!(
            "{num_similar_pairs} pairs need {} vectors, only {n} requested",
            2 * num_similar_pairs
        )));
    }
    let mut rng = prf::rng_for(seed);
    let mut vectors = Vec::with_capacity(n);
    for _ in 0..num_similar_pairs {
        let pair = similar_pair(&mut rng, dim, psi);
        vectors.push(pair.first);
        vectors.push(pair.second);
    }
    while vectors.len() < n {
        vectors.push(random_vector(&mut rng, dim, psi));
    }
    SparseDataset::new(dim, vectors)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnnDataset {
    pub query: SparseBinaryVector,
    /// Planted neighbours first, then background vectors.
    pub items: SparseDataset,
    pub num_neighbors: usize,
}

/// A query plus `n − 1` items: `num_neighbors` planted around the query and
/// `n − 1 − num_neighbors` random background vectors. `n` counts the query.
pub fn gen_knn_dataset(
    n: usize,
    dim: usize,
    psi: usize,
    num_neighbors: usize,
    seed: u64,
) -> Result<KnnDataset> {
    check_psi(dim, psi)?;
    if num_neighbors >= n {
        return Err(SketchError::invalid(format!(
            "num_neighbors {num_neighbors} must be below n {n}"
        )));
    }
    let mut rng = prf::rng_for(seed);
    let query = random_vector(&mut rng, dim, psi);
    let query_pos: Vec<u32> = query.indices().iter().map(|&i| i - 1).collect();

    let mut vectors = Vec::with_capacity(n - 1);
    for _ in 0..num_neighbors {
        let shared = rng.random_range(1..=query_pos.len());
        let mut core: Vec<u32> = index::sample(&mut rng, query_pos.len(), shared)
            .into_iter()
            .map(|k| query_pos[k])
            .collect();
        core.sort_unstable();
        // extras avoid every query position so overlap is exactly `shared`
        let extra = extra_count(&mut rng, psi, shared);
        let added = sample_outside(&mut rng, dim, &query_pos, extra.min(dim - query_pos.len()));
        vectors.push(to_vector(dim, core.into_iter().chain(added)));
    }
    while vectors.len() < n - 1 {
        vectors.push(random_vector(&mut rng, dim, psi));
    }
    Ok(KnnDataset {
        query,
        items: SparseDataset::new(dim, vectors)?,
        num_neighbors,
    })
}
