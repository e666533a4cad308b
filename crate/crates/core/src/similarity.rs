//! Exact similarity oracles on sparse vectors and the estimators evaluated
//! on sketches. Jaccard of two empty sets (or two all-zero sketches) is 1.

use crate::bcs::{check_lengths, BcsSketch};
use crate::error::{Result, SketchError};
use crate::minhash::MinHashSketch;
use crate::vector::{check_dims, SparseBinaryVector};

/// Intersection and union sizes of two index sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overlap {
    pub intersection: usize,
    pub union: usize,
}

impl Overlap {
    pub fn hamming(&self) -> usize {
        self.union - self.intersection
    }

    pub fn jaccard(&self) -> f64 {
        ratio(self.intersection, self.union)
    }
}

#[inline]
fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

pub fn overlap(u: &SparseBinaryVector, v: &SparseBinaryVector) -> Result<Overlap> {
    check_dims(u, v)?;
    let intersection = intersection_size(u.indices(), v.indices());
    Ok(Overlap {
        intersection,
        union: u.weight() + v.weight() - intersection,
    })
}

#[inline]
fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

pub fn jaccard_exact(u: &SparseBinaryVector, v: &SparseBinaryVector) -> Result<f64> {
    Ok(overlap(u, v)?.jaccard())
}

pub fn hamming_exact(u: &SparseBinaryVector, v: &SparseBinaryVector) -> Result<usize> {
    Ok(overlap(u, v)?.hamming())
}

pub fn inner_exact(u: &SparseBinaryVector, v: &SparseBinaryVector) -> Result<usize> {
    Ok(overlap(u, v)?.intersection)
}

/// `popcount(a & b) / popcount(a | b)` over packed words.
pub fn jaccard_bcs(a: &BcsSketch, b: &BcsSketch) -> Result<f64> {
    check_lengths(a, b)?;
    Ok(jaccard_words(a.words(), b.words()))
}

#[inline]
pub(crate) fn jaccard_words(a: &[u64], b: &[u64]) -> f64 {
    let (mut inter, mut union) = (0u32, 0u32);
    for (x, y) in a.iter().zip(b) {
        inter += (x & y).count_ones();
        union += (x | y).count_ones();
    }
    ratio(inter as usize, union as usize)
}

/// Fraction of coordinates on which the two sketches agree.
pub fn jaccard_minhash(a: &MinHashSketch, b: &MinHashSketch) -> Result<f64> {
    if a.num_perms() != b.num_perms() {
        return Err(SketchError::LengthMismatch {
            left: a.num_perms(),
            right: b.num_perms(),
        });
    }
    Ok(jaccard_values(a.values(), b.values()))
}

#[inline]
pub(crate) fn jaccard_values(a: &[u32], b: &[u32]) -> f64 {
    let matches = a.iter().zip(b).filter(|(x, y)| x == y).count();
    matches as f64 / a.len() as f64
}
