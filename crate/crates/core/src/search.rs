//! Brute-force threshold search and the set-overlap accuracy metric.
//!
//! The same quadratic (all-pairs) or linear (query) scan runs on raw vectors
//! for ground truth and on sketches for the compressed answer; only the
//! similarity function changes. A pair or item qualifies when its
//! similarity is `>= threshold`.

use crate::error::{Result, SketchError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    AllPairs,
    Query,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    threshold: f64,
    mode: SearchMode,
}

impl SearchConfig {
    pub fn new(threshold: f64, mode: SearchMode) -> Result<Self> {
        check_threshold(threshold)?;
        Ok(SearchConfig { threshold, mode })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn mode(&self) -> SearchMode {
        self.mode
    }
}

pub fn check_threshold(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(SketchError::invalid(format!(
            "threshold {t} outside [0, 1]"
        )))
    }
}

/// Answer of a search: sorted, duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResultSet {
    /// Index pairs `(i, j)` with `i < j`.
    Pairs(Vec<(u32, u32)>),
    Items(Vec<u32>),
}

impl ResultSet {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut v: Vec<(u32, u32)> = pairs
            .into_iter()
            .map(|(i, j)| if i <= j { (i, j) } else { (j, i) })
            .collect();
        v.sort_unstable();
        v.dedup();
        ResultSet::Pairs(v)
    }

    pub fn from_items(items: impl IntoIterator<Item = u32>) -> Self {
        let mut v: Vec<u32> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        ResultSet::Items(v)
    }

    pub fn mode(&self) -> SearchMode {
        match self {
            ResultSet::Pairs(_) => SearchMode::AllPairs,
            ResultSet::Items(_) => SearchMode::Query,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ResultSet::Pairs(v) => v.len(),
            ResultSet::Items(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        match (self, other) {
            (ResultSet::Pairs(a), ResultSet::Pairs(b)) => sorted_intersection(a, b) == a.len(),
            (ResultSet::Items(a), ResultSet::Items(b)) => sorted_intersection(a, b) == a.len(),
            _ => false,
        }
    }
}

fn sorted_intersection<T: Ord>(a: &[T], b: &[T]) -> usize {
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

/// All `(i, j)`, `i < j < item_count`, with `similarity(i, j) >= threshold`.
pub fn allpairs_above<F>(similarity: F, item_count: usize, threshold: f64) -> ResultSet
where
    F: Fn(usize, usize) -> f64,
{
    let mut out = Vec::new();
    for i in 0..item_count {
        for j in i + 1..item_count {
            if similarity(i, j) >= threshold {
                out.push((i as u32, j as u32));
            }
        }
    }
    ResultSet::Pairs(out)
}

/// All `j < item_count` with `similarity(j) >= threshold`, where
/// `similarity` compares item `j` against a fixed query.
pub fn query_above<F>(similarity: F, item_count: usize, threshold: f64) -> ResultSet
where
    F: Fn(usize) -> f64,
{
    ResultSet::Items(
        (0..item_count)
            .filter(|&j| similarity(j) >= threshold)
            .map(|j| j as u32)
            .collect(),
    )
}

/// Jaccard ratio `|O ∩ O'| / |O ∪ O'|` of two answers (1 when both empty).
pub fn result_accuracy(ground: &ResultSet, got: &ResultSet) -> Result<f64> {
    let (inter, a, b) = match (ground, got) {
        (ResultSet::Pairs(a), ResultSet::Pairs(b)) => (sorted_intersection(a, b), a.len(), b.len()),
        (ResultSet::Items(a), ResultSet::Items(b)) => (sorted_intersection(a, b), a.len(), b.len()),
        _ => return Err(SketchError::ModeMismatch),
    };
    let union = a + b - inter;
    Ok(if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    })
}
