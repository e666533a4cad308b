//! Accuracy / compression-time / search-time sweeps.
//!
//! For each `(method, N)` and each repeat, a fresh seed
//! `derive_seed(master, repeat)` drives compression of every vector; the
//! sketches are then searched at every threshold and compared with ground
//! truth computed once on the raw vectors. Reported values are means over
//! repeats (and, in query mode, over query vectors).

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::bcs::{BcsSketch, BucketMap};
use crate::dataset::SparseDataset;
use crate::error::{Result, SketchError};
use crate::minhash::{MinHashSketch, PermutationFamily};
use crate::prf;
use crate::search::{allpairs_above, check_threshold, query_above, result_accuracy, ResultSet};
use crate::similarity::{jaccard_exact, jaccard_values, jaccard_words};
use crate::vector::SparseBinaryVector;

/// A sketching scheme the benchmark can drive.
pub trait Compressor {
    type Sketch;

    fn name(&self) -> String;

    /// Compresses `vectors` to length `length` with randomness from `seed`.
    /// Calls with the same `(dim, length, seed)` must use the same
    /// randomness so that separately compressed batches are comparable.
    fn compress(
        &self,
        vectors: &[SparseBinaryVector],
        dim: usize,
        length: usize,
        seed: u64,
    ) -> Result<Vec<Self::Sketch>>;

    fn similarity(a: &Self::Sketch, b: &Self::Sketch) -> f64;
}

/// BCS under a seeded random bucket map.
#[derive(Debug, Clone, Copy, Default)]
pub struct BcsCompressor;

impl Compressor for BcsCompressor {
    type Sketch = BcsSketch;

    fn name(&self) -> String {
        Method::Bcs.to_string()
    }

    fn compress(
        &self,
        vectors: &[SparseBinaryVector],
        dim: usize,
        length: usize,
        seed: u64,
    ) -> Result<Vec<BcsSketch>> {
        let map = BucketMap::new(dim, length, seed)?;
        vectors.iter().map(|v| map.compress(v)).collect()
    }

    #[inline]
    fn similarity(a: &BcsSketch, b: &BcsSketch) -> f64 {
        jaccard_words(a.words(), b.words())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MinHashCompressor;

impl Compressor for MinHashCompressor {
    type Sketch = MinHashSketch;

    fn name(&self) -> String {
        Method::MinHash.to_string()
    }

    fn compress(
        &self,
        vectors: &[SparseBinaryVector],
        dim: usize,
        length: usize,
        seed: u64,
    ) -> Result<Vec<MinHashSketch>> {
        PermutationFamily::new(dim, length, seed)?.compress_all(vectors)
    }

    #[inline]
    fn similarity(a: &MinHashSketch, b: &MinHashSketch) -> f64 {
        jaccard_values(a.values(), b.values())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Bcs,
    MinHash,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Bcs => "bcs",
            Method::MinHash => "minhash",
        })
    }
}

impl FromStr for Method {
    type Err = SketchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bcs" => Ok(Method::Bcs),
            "minhash" => Ok(Method::MinHash),
            other => Err(SketchError::invalid(format!("unknown method {other:?}"))),
        }
    }
}

/// What is searched: pairs within one dataset, or each query against a
/// training partition.
#[derive(Debug, Clone, Copy)]
pub enum BenchTarget<'a> {
    AllPairs(&'a SparseDataset),
    Query {
        train: &'a SparseDataset,
        queries: &'a SparseDataset,
    },
}

impl BenchTarget<'_> {
    fn dim(&self) -> usize {
        match self {
            BenchTarget::AllPairs(ds) => ds.dim(),
            BenchTarget::Query { train, .. } => train.dim(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub method: String,
    #[serde(rename = "N")]
    pub length: usize,
    pub threshold: f64,
    pub accuracy: f64,
    /// Mean wall time to compress every vector once.
    #[serde(rename = "compress_time_s")]
    pub compress_time: f64,
    /// Mean wall time of one scan over the sketches (per query vector in
    /// query mode).
    #[serde(rename = "search_time_s")]
    pub search_time: f64,
    pub repeats: usize,
}

/// Cross-threshold means for one `(method, N)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub method: String,
    #[serde(rename = "N")]
    pub length: usize,
    pub mean_accuracy: f64,
    #[serde(rename = "compress_time_s")]
    pub compress_time: f64,
    #[serde(rename = "search_time_s")]
    pub search_time: f64,
    /// MinHash time divided by this method's time at the same N, if MinHash ran.
    pub compress_speedup_vs_minhash: Option<f64>,
    pub search_speedup_vs_minhash: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_rows(&self.rows, out)
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(create(path.as_ref())?)
    }

    pub fn summary(&self) -> Vec<SummaryRow> {
        let mut keys: Vec<(String, usize)> = Vec::new();
        for r in &self.rows {
            let k = (r.method.clone(), r.length);
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
        let mut out: Vec<SummaryRow> = keys
            .into_iter()
            .map(|(method, length)| {
                let cell: Vec<&BenchRow> = self
                    .rows
                    .iter()
                    .filter(|r| r.method == method && r.length == length)
                    .collect();
                let mean = |f: fn(&BenchRow) -> f64| {
                    cell.iter().map(|r| f(r)).sum::<f64>() / cell.len() as f64
                };
                SummaryRow {
                    method,
                    length,
                    mean_accuracy: mean(|r| r.accuracy),
                    compress_time: mean(|r| r.compress_time),
                    search_time: mean(|r| r.search_time),
                    compress_speedup_vs_minhash: None,
                    search_speedup_vs_minhash: None,
                }
            })
            .collect();
        let baseline: Vec<(usize, f64, f64)> = out
            .iter()
            .filter(|s| s.method == Method::MinHash.to_string())
            .map(|s| (s.length, s.compress_time, s.search_time))
            .collect();
        for s in &mut out {
            if let Some(&(_, c, q)) = baseline.iter().find(|b| b.0 == s.length) {
                s.compress_speedup_vs_minhash = Some(c / s.compress_time.max(f64::MIN_POSITIVE));
                s.search_speedup_vs_minhash = Some(q / s.search_time.max(f64::MIN_POSITIVE));
            }
        }
        out
    }

    pub fn save_summary_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_rows(&self.summary(), create(path.as_ref())?)
    }
}

fn create(path: &Path) -> Result<std::fs::File> {
    std::fs::File::create(path).map_err(|source| SketchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_rows<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Exact similarities computed once and reused for every threshold.
enum GroundTruth {
    /// Row-major upper triangle of the all-pairs similarity matrix.
    AllPairs { n: usize, sims: Vec<f64> },
    /// `sims[q][j]` = similarity of query `q` to train item `j`.
    Query { sims: Vec<Vec<f64>> },
}

impl GroundTruth {
    fn compute(target: &BenchTarget<'_>) -> Result<Self> {
        Ok(match target {
            BenchTarget::AllPairs(ds) => {
                let v = ds.vectors();
                let mut sims = Vec::with_capacity(v.len() * v.len().saturating_sub(1) / 2);
                for i in 0..v.len() {
                    for j in i + 1..v.len() {
                        sims.push(jaccard_exact(&v[i], &v[j])?);
                    }
                }
                GroundTruth::AllPairs { n: v.len(), sims }
            }
            BenchTarget::Query { train, queries } => GroundTruth::Query {
                sims: queries
                    .vectors()
                    .iter()
                    .map(|q| {
                        train
                            .vectors()
                            .iter()
                            .map(|t| jaccard_exact(q, t))
                            .collect()
                    })
                    .collect::<Result<_>>()?,
            },
        })
    }

    fn all_pairs(&self, threshold: f64) -> ResultSet {
        let GroundTruth::AllPairs { n, sims } = self else {
            unreachable!("all-pairs truth requested for a query target")
        };
        let n = *n;
        allpairs_above(|i, j| sims[tri_index(n, i, j)], n, threshold)
    }

    fn query(&self, q: usize, threshold: f64) -> ResultSet {
        let GroundTruth::Query { sims } = self else {
            unreachable!("query truth requested for an all-pairs target")
        };
        query_above(|j| sims[q][j], sims[q].len(), threshold)
    }
}

#[inline]
fn tri_index(n: usize, i: usize, j: usize) -> usize {
    // offset of row i in the strict upper triangle, then column j
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

fn validate(
    target: &BenchTarget<'_>,
    lengths: &[usize],
    thresholds: &[f64],
    repeats: usize,
) -> Result<()> {
    if lengths.is_empty() {
        return Err(SketchError::invalid("no compression lengths given"));
    }
    if thresholds.is_empty() {
        return Err(SketchError::invalid("no thresholds given"));
    }
    if repeats == 0 {
        return Err(SketchError::ZeroParameter { what: "repeats" });
    }
    if lengths.contains(&0) {
        return Err(SketchError::ZeroParameter {
            what: "compression length",
        });
    }
    for &t in thresholds {
        check_threshold(t)?;
    }
    match target {
        BenchTarget::AllPairs(ds) if ds.len() < 2 => Err(SketchError::invalid(
            "all-pairs benchmark needs at least two vectors",
        )),
        BenchTarget::Query { train, queries } if train.is_empty() || queries.is_empty() => Err(
            SketchError::invalid("query benchmark needs nonempty train and query sets"),
        ),
        BenchTarget::Query { train, queries } if train.dim() != queries.dim() => {
            Err(SketchError::DimensionMismatch {
                left: train.dim(),
                right: queries.dim(),
            })
        }
        _ => Ok(()),
    }
}

/// Runs the sweep for the built-in methods.
pub fn run_benchmark(
    target: BenchTarget<'_>,
    methods: &[Method],
    lengths: &[usize],
    thresholds: &[f64],
    repeats: usize,
    seed: u64,
) -> Result<BenchReport> {
    if methods.is_empty() {
        return Err(SketchError::invalid("no methods given"));
    }
    validate(&target, lengths, thresholds, repeats)?;
    let truth = GroundTruth::compute(&target)?;
    let mut rows = Vec::new();
    for m in methods {
        let r = match m {
            Method::Bcs => sweep(
                &target,
                &truth,
                &BcsCompressor,
                lengths,
                thresholds,
                repeats,
                seed,
            )?,
            Method::MinHash => sweep(
                &target,
                &truth,
                &MinHashCompressor,
                lengths,
                thresholds,
                repeats,
                seed,
            )?,
        };
        rows.extend(r);
    }
    Ok(BenchReport { rows })
}

/// Runs the sweep for any [`Compressor`].
pub fn run_compressor<C: Compressor>(
    target: BenchTarget<'_>,
    compressor: &C,
    lengths: &[usize],
    thresholds: &[f64],
    repeats: usize,
    seed: u64,
) -> Result<BenchReport> {
    validate(&target, lengths, thresholds, repeats)?;
    let truth = GroundTruth::compute(&target)?;
    Ok(BenchReport {
        rows: sweep(
            &target, &truth, compressor, lengths, thresholds, repeats, seed,
        )?,
    })
}

#[derive(Default, Clone, Copy)]
struct Accum {
    accuracy: f64,
    compress: f64,
    search: f64,
}

fn sweep<C: Compressor>(
    target: &BenchTarget<'_>,
    truth: &GroundTruth,
    compressor: &C,
    lengths: &[usize],
    thresholds: &[f64],
    repeats: usize,
    seed: u64,
) -> Result<Vec<BenchRow>> {
    let dim = target.dim();
    let mut rows = Vec::with_capacity(lengths.len() * thresholds.len());
    for &length in lengths {
        let mut acc = vec![Accum::default(); thresholds.len()];
        for rep in 0..repeats {
            let rep_seed = prf::derive_seed(seed, rep as u64);
            match target {
                BenchTarget::AllPairs(ds) => {
                    let start = Instant::now();
                    let sketches = compressor.compress(ds.vectors(), dim, length, rep_seed)?;
                    let compress = start.elapsed().as_secs_f64();
                    for (t, a) in thresholds.iter().zip(acc.iter_mut()) {
                        let start = Instant::now();
                        let got = allpairs_above(
                            |i, j| C::similarity(&sketches[i], &sketches[j]),
                            sketches.len(),
                            *t,
                        );
                        a.search += start.elapsed().as_secs_f64();
                        a.compress += compress;
                        a.accuracy += result_accuracy(&truth.all_pairs(*t), &got)?;
                    }
                }
                BenchTarget::Query { train, queries } => {
                    let start = Instant::now();
                    let train_sk = compressor.compress(train.vectors(), dim, length, rep_seed)?;
                    let query_sk = compressor.compress(queries.vectors(), dim, length, rep_seed)?;
                    let compress = start.elapsed().as_secs_f64();
                    let nq = query_sk.len() as f64;
                    for (t, a) in thresholds.iter().zip(acc.iter_mut()) {
                        let (mut search, mut accuracy) = (0.0, 0.0);
                        for (q, qs) in query_sk.iter().enumerate() {
                            let start = Instant::now();
                            let got = query_above(
                                |j| C::similarity(qs, &train_sk[j]),
                                train_sk.len(),
                                *t,
                            );
                            search += start.elapsed().as_secs_f64();
                            accuracy += result_accuracy(&truth.query(q, *t), &got)?;
                        }
                        a.search += search / nq;
                        a.accuracy += accuracy / nq;
                        a.compress += compress;
                    }
                }
            }
        }
        let r = repeats as f64;
        for (t, a) in thresholds.iter().zip(&acc) {
            rows.push(BenchRow {
                method: compressor.name(),
                length,
                threshold: *t,
                accuracy: a.accuracy / r,
                compress_time: a.compress / r,
                search_time: a.search / r,
                repeats,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::gen_allpairs_dataset;
    use crate::ingest::split_train_query;

    struct Lossless;

    impl Compressor for Lossless {
        type Sketch = BcsSketch;
        fn name(&self) -> String {
            "bcs-injective".into()
        }
        fn compress(
            &self,
            v: &[SparseBinaryVector],
            dim: usize,
            len: usize,
            _: u64,
        ) -> Result<Vec<BcsSketch>> {
            let map = BucketMap::injective(dim, len)?;
            v.iter().map(|x| map.compress(x)).collect()
        }
        fn similarity(a: &BcsSketch, b: &BcsSketch) -> f64 {
            BcsCompressor::similarity(a, b)
        }
    }

    #[test]
    fn tri_index_is_dense() {
        let n = 7;
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(tri_index(n, i, j), k);
                k += 1;
            }
        }
    }

    #[test]
    fn row_count_and_repeats() {
        let ds = gen_allpairs_dataset(20, 500, 10, 5, 1).unwrap();
        let rep = run_benchmark(
            BenchTarget::AllPairs(&ds),
            &[Method::Bcs, Method::MinHash],
            &[50, 5000],
            &[0.5],
            2,
            7,
        )
        .unwrap();
        assert_eq!(rep.rows.len(), 4);
        assert!(rep.rows.iter().all(|r| r.repeats == 2));
        assert!(rep.rows.iter().all(|r| (0.0..=1.0).contains(&r.accuracy)));
        assert!(rep
            .rows
            .iter()
            .all(|r| r.compress_time >= 0.0 && r.search_time >= 0.0));
    }

    #[test]
    fn lossless_map_is_exact() {
        let ds = gen_allpairs_dataset(30, 300, 20, 10, 2).unwrap();
        let ts: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
        let rep = run_compressor(
            BenchTarget::AllPairs(&ds),
            &Lossless,
            &[300, 320],
            &ts,
            2,
            0,
        )
        .unwrap();
        assert!(rep.rows.iter().all(|r| r.accuracy == 1.0));

        let (train, queries) = split_train_query(&ds, 0.2, 1).unwrap();
        let target = BenchTarget::Query {
            train: &train,
            queries: &queries,
        };
        let rep = run_compressor(target, &Lossless, &[300], &ts, 1, 0).unwrap();
        assert!(rep.rows.iter().all(|r| r.accuracy == 1.0));
    }

    #[test]
    fn accuracy_is_reproducible() {
        let ds = gen_allpairs_dataset(30, 2000, 20, 10, 3).unwrap();
        let run = || {
            run_benchmark(
                BenchTarget::AllPairs(&ds),
                &[Method::Bcs, Method::MinHash],
                &[64],
                &[0.2, 0.6],
                3,
                11,
            )
            .unwrap()
            .rows
            .into_iter()
            .map(|r| r.accuracy)
            .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn rejects_bad_configs() {
        let ds = gen_allpairs_dataset(10, 100, 5, 2, 0).unwrap();
        let t = BenchTarget::AllPairs(&ds);
        assert!(run_benchmark(t, &[Method::Bcs], &[], &[0.5], 1, 0).is_err());
        assert!(run_benchmark(t, &[Method::Bcs], &[10], &[], 1, 0).is_err());
        assert!(run_benchmark(t, &[Method::Bcs], &[0], &[0.5], 1, 0).is_err());
        assert!(run_benchmark(t, &[Method::Bcs], &[10], &[0.5], 0, 0).is_err());
        assert!(run_benchmark(t, &[Method::Bcs], &[10], &[1.5], 1, 0).is_err());
        assert!(run_benchmark(t, &[], &[10], &[0.5], 1, 0).is_err());
        let empty = SparseDataset::new(100, vec![]).unwrap();
        assert!(run_benchmark(
            BenchTarget::AllPairs(&empty),
            &[Method::Bcs],
            &[10],
            &[0.5],
            1,
            0
        )
        .is_err());
    }

    #[test]
    fn summary_and_csv() {
        let ds = gen_allpairs_dataset(16, 400, 8, 4, 5).unwrap();
        let rep = run_benchmark(
            BenchTarget::AllPairs(&ds),
            &[Method::Bcs, Method::MinHash],
            &[100],
            &[0.3, 0.7],
            1,
            0,
        )
        .unwrap();
        let s = rep.summary();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|r| r.compress_speedup_vs_minhash.is_some()));
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "method,N,threshold,accuracy,compress_time_s,search_time_s,repeats"
        );
        assert_eq!(lines.count(), 4);
    }

    #[test]
    fn method_parsing() {
        assert_eq!("BCS".parse::<Method>().unwrap(), Method::Bcs);
        assert_eq!("minhash".parse::<Method>().unwrap(), Method::MinHash);
        assert!("simhash".parse::<Method>().is_err());
    }
}
