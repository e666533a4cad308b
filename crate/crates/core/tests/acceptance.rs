//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]`/`[SKIP]` line
//! (visible with `--nocapture`) and asserts the criterion at its stated
//! tolerance. Criteria run one at a time so wall-clock measurements do not
//! interfere.

use std::collections::BTreeSet;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use bcs_core::bench::{run_compressor, BcsCompressor, Compressor};
use bcs_core::params::corrupted_buckets;
use bcs_core::prf::rng_for;
use bcs_core::{
    corruption_bound, gen_allpairs_dataset, hamming_exact, inner_exact, jaccard_bcs, jaccard_exact,
    jaccard_minhash, load_docword, minhash::arg_min_rank, run_benchmark, split_train_query,
    BcsSketch, BenchReport, BenchTarget, BucketMap, Method, PermutationFamily, SparseBinaryVector,
};
use itertools::Itertools;
use rand::seq::index;
use rand::Rng;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn verdict(id: u32, pass: bool, detail: String) {
    println!(
        "criterion {id} [{}] {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {detail}");
}

fn thresholds() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

fn random_vector(rng: &mut impl Rng, dim: usize, max_weight: usize) -> SparseBinaryVector {
    let w = rng.random_range(0..=max_weight.min(dim));
    SparseBinaryVector::from_positions(
        dim,
        index::sample(rng, dim, w).into_iter().map(|i| i as u32 + 1),
    )
    .unwrap()
}

#[test]
fn criterion_1_exactness_suite() {
    let _g = serial();
    let start = Instant::now();
    let mut rng = rng_for(1);
    let instances = 10_000;
    let mut failures = [0usize; 4];
    for _ in 0..instances {
        let dim = rng.random_range(1..=2000);
        let n = rng.random_range(1..=512);
        let u = random_vector(&mut rng, dim, 64);
        let v = random_vector(&mut rng, dim, 64);
        let map = BucketMap::new(dim, n, rng.random()).unwrap();
        let (a, b) = (map.compress(&u).unwrap(), map.compress(&v).unwrap());

        let xor = map.compress(&u.xor(&v).unwrap()).unwrap();
        failures[0] += (xor != a.xor(&b).unwrap()) as usize;
        failures[1] += (a.hamming(&b).unwrap() > hamming_exact(&u, &v).unwrap()) as usize;
        failures[2] += (a.weight() > u.weight() || b.weight() > v.weight()) as usize;
        if !(u.is_empty() && v.is_empty()) {
            // |u∩v| / |u∪v| == ip / (ip + hd), cross-multiplied, with the set
            // sizes taken from BTreeSet operations
            let su: BTreeSet<u32> = u.indices().iter().copied().collect();
            let sv: BTreeSet<u32> = v.indices().iter().copied().collect();
            let inter = su.intersection(&sv).count();
            let union = su.union(&sv).count();
            let ip = inner_exact(&u, &v).unwrap();
            let hd = hamming_exact(&u, &v).unwrap();
            failures[3] += (inter * (ip + hd) != ip * union) as usize;
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.iter().all(|&f| f == 0) && elapsed < Duration::from_secs(10);
    verdict(
        1,
        pass,
        format!(
            "{instances} instances; failures linearity={} hamming={} weight={} identity={}; {:.2}s (< 10s)",
            failures[0],
            failures[1],
            failures[2],
            failures[3],
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_2_minhash_exact_unbiasedness() {
    let _g = serial();
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    for d in 1..=6usize {
        // every permutation of {1..d} as a rank table
        let perms: Vec<Vec<u32>> = (1..=d as u32).permutations(d).collect();
        let subsets: Vec<Vec<u32>> = (0u32..1 << d)
            .map(|mask| {
                (1..=d as u32)
                    .filter(|i| mask >> (i - 1) & 1 == 1)
                    .collect()
            })
            .collect();
        for u in &subsets {
            for v in &subsets {
                let matches = perms
                    .iter()
                    .filter(|p| arg_min_rank(u, p) == arg_min_rank(v, p))
                    .count();
                let uu = SparseBinaryVector::new(d, u.clone()).unwrap();
                let vv = SparseBinaryVector::new(d, v.clone()).unwrap();
                let inter = inner_exact(&uu, &vv).unwrap();
                let union = uu.weight() + vv.weight() - inter;
                // matches / d! == inter / union (empty/empty counts as 1/1)
                let (num, den) = if union == 0 { (1, 1) } else { (inter, union) };
                if matches * den != num * perms.len() {
                    mismatches += 1;
                }
                checked += 1;
            }
        }
    }
    verdict(
        2,
        mismatches == 0,
        format!("{checked} vector pairs over d <= 6, {mismatches} inexact match frequencies"),
    );
}

#[test]
fn criterion_3_minhash_concentration() {
    let _g = serial();
    let dim = 100;
    let set =
        |r: std::ops::RangeInclusive<u32>| SparseBinaryVector::from_positions(dim, r).unwrap();
    // (u, v) with |∩|/|∪| = 1/4, 1/3, 1/2
    let cases = [
        (set(1..=10), set(6..=20), 0.25),
        (set(1..=20), set(11..=30), 1.0 / 3.0),
        (set(1..=30), set(11..=40), 0.5),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (u, v, js) in &cases {
        assert!((jaccard_exact(u, v).unwrap() - js).abs() < 1e-12);
        let within = (0..100u64)
            .filter(|&seed| {
                let fam = PermutationFamily::new(dim, 3000, 1000 + seed).unwrap();
                let s = fam.compress_all(&[u.clone(), v.clone()]).unwrap();
                (jaccard_minhash(&s[0], &s[1]).unwrap() - js).abs() <= 0.04
            })
            .count();
        pass &= within >= 99;
        detail.push(format!("JS={js:.3}: {within}/100"));
    }
    verdict(3, pass, format!("N=3000, +-0.04: {}", detail.join(", ")));
}

#[test]
fn criterion_4_bcs_estimator_fidelity() {
    let _g = serial();
    let start = Instant::now();
    let (n, dim, psi, num_buckets) = (100, 100_000, 50, 40_000);
    assert!(num_buckets >= 16 * psi * psi);
    let ds = gen_allpairs_dataset(n, dim, psi, n / 2, 2024).unwrap();
    let v = ds.vectors();
    let pairs: Vec<(usize, f64)> = (0..n / 2)
        .map(|k| (2 * k, jaccard_exact(&v[2 * k], &v[2 * k + 1]).unwrap()))
        .filter(|&(_, js)| js >= 0.3)
        .collect();
    let (mut ok, mut total) = (0usize, 0usize);
    for seed in 0..20u64 {
        let map = BucketMap::new(dim, num_buckets, seed).unwrap();
        let sk: Vec<BcsSketch> = v.iter().map(|x| map.compress(x).unwrap()).collect();
        for &(i, js) in &pairs {
            let est = jaccard_bcs(&sk[i], &sk[i + 1]).unwrap();
            ok += ((est - js).abs() <= 0.15 * js) as usize;
            total += 1;
        }
    }
    let frac = ok as f64 / total as f64;
    let elapsed = start.elapsed();
    verdict(
        4,
        frac >= 0.95 && elapsed < Duration::from_secs(60) && !pairs.is_empty(),
        format!(
            "{} planted pairs with JS >= 0.3 x 20 seeds: {:.4} within 15% relative (>= 0.95); {:.2}s",
            pairs.len(),
            frac,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_5_corruption_bound() {
    let _g = serial();
    let start = Instant::now();
    let (psi, num_buckets, dim) = (10usize, 6400usize, 100_000usize);
    let bound = corruption_bound(psi as u64, num_buckets as u64, 1.0, 2);
    let mut rng = rng_for(5);
    let trials = 10_000;
    let mut hits = 0usize;
    for seed in 0..trials as u64 {
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            SparseBinaryVector::from_positions(
                dim,
                index::sample(rng, dim, psi)
                    .into_iter()
                    .map(|i| i as u32 + 1),
            )
            .unwrap()
        };
        let (u, v) = (draw(&mut rng), draw(&mut rng));
        let map = BucketMap::new(dim, num_buckets, seed).unwrap();
        hits += (corrupted_buckets(&u, &v, &map).unwrap() >= 2) as usize;
    }
    let freq = hits as f64 / trials as f64;
    let elapsed = start.elapsed();
    verdict(
        5,
        freq <= bound && elapsed < Duration::from_secs(60),
        format!(
            "psi=10 N=6400: P(>=2 corrupted buckets) = {freq:.5} <= bound {bound}; {:.2}s",
            elapsed.as_secs_f64()
        ),
    );
}

fn synthetic_report() -> BenchReport {
    let ds = gen_allpairs_dataset(200, 20_000, 50, 40, 6).unwrap();
    run_benchmark(
        BenchTarget::AllPairs(&ds),
        &[Method::Bcs, Method::MinHash],
        &[100, 500, 5000],
        &thresholds(),
        5,
        6,
    )
    .unwrap()
}

fn mean_accuracy(report: &BenchReport, method: Method, n: usize) -> f64 {
    report
        .summary()
        .into_iter()
        .find(|s| s.method == method.to_string() && s.length == n)
        .unwrap()
        .mean_accuracy
}

#[test]
fn criterion_6_synthetic_accuracy() {
    let _g = serial();
    let report = synthetic_report();
    let acc: Vec<f64> = [100, 500, 5000]
        .iter()
        .map(|&n| mean_accuracy(&report, Method::Bcs, n))
        .collect();
    let rising = acc[0] <= acc[1] + 0.05 && acc[1] <= acc[2] + 0.05;
    verdict(
        6,
        acc[2] >= 0.85 && rising,
        format!(
            "BCS mean accuracy over t=0.1..0.9: N=100 {:.3}, N=500 {:.3}, N=5000 {:.3} (>= 0.85, rising within 0.05)",
            acc[0], acc[1], acc[2]
        ),
    );
}

struct Injective;

impl Compressor for Injective {
    type Sketch = BcsSketch;

    fn name(&self) -> String {
        "bcs-injective".into()
    }

    fn compress(
        &self,
        vectors: &[SparseBinaryVector],
        dim: usize,
        length: usize,
        _seed: u64,
    ) -> bcs_core::Result<Vec<BcsSketch>> {
        let map = BucketMap::injective(dim, length)?;
        vectors.iter().map(|v| map.compress(v)).collect()
    }

    fn similarity(a: &BcsSketch, b: &BcsSketch) -> f64 {
        BcsCompressor::similarity(a, b)
    }
}

#[test]
fn criterion_7_lossless_limit() {
    let _g = serial();
    let ds = gen_allpairs_dataset(120, 3000, 40, 30, 7).unwrap();
    let ts: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let report = run_compressor(
        BenchTarget::AllPairs(&ds),
        &Injective,
        &[3000, 4096],
        &ts,
        3,
        7,
    )
    .unwrap();
    let (train, queries) = split_train_query(&ds, 0.1, 7).unwrap();
    let q = run_compressor(
        BenchTarget::Query {
            train: &train,
            queries: &queries,
        },
        &Injective,
        &[3000],
        &ts,
        1,
        7,
    )
    .unwrap();
    let worst = report
        .rows
        .iter()
        .chain(&q.rows)
        .map(|r| r.accuracy)
        .fold(1.0, f64::min);
    verdict(
        7,
        worst == 1.0,
        format!(
            "injective map, {} cells: minimum accuracy {worst}",
            report.rows.len() + q.rows.len()
        ),
    );
}

#[test]
fn criterion_8_kos_smoke() {
    let _g = serial();
    let path = std::env::var_os("BCS_KOS_DOCWORD")
        .map(std::path::PathBuf::from)
        .or_else(|| bcs_core::ingest::locate_corpus("docword.kos.txt"));
    let Some(path) = path.filter(|p| p.is_file()) else {
        println!("criterion 8 [SKIP] KOS corpus not found (set BCS_KOS_DOCWORD or BCS_DATA_DIR)");
        return;
    };
    let ds = load_docword(&path).unwrap();
    let shape_ok = (ds.len(), ds.dim(), ds.sparsity()) == (3430, 6906, 457);
    let (train, queries) = split_train_query(&ds, 0.1, 8).unwrap();
    let report = run_benchmark(
        BenchTarget::Query {
            train: &train,
            queries: &queries,
        },
        &[Method::Bcs],
        &[2000],
        &thresholds(),
        1,
        8,
    )
    .unwrap();
    let acc = mean_accuracy(&report, Method::Bcs, 2000);
    verdict(
        8,
        shape_ok && acc >= 0.8,
        format!(
            "KOS n={} d={} psi={} (3430/6906/457); BCS N=2000 mean query accuracy {acc:.3} (>= 0.8)",
            ds.len(),
            ds.dim(),
            ds.sparsity()
        ),
    );
}

#[test]
fn criterion_9_relative_performance() {
    let _g = serial();
    let ds = gen_allpairs_dataset(200, 20_000, 50, 40, 6).unwrap();
    let report = run_benchmark(
        BenchTarget::AllPairs(&ds),
        &[Method::Bcs, Method::MinHash],
        &[5000],
        &thresholds(),
        3,
        9,
    )
    .unwrap();
    let summary = report.summary();
    let bcs = summary.iter().find(|s| s.method == "bcs").unwrap();
    let mh = summary.iter().find(|s| s.method == "minhash").unwrap();
    verdict(
        9,
        bcs.compress_time < mh.compress_time && bcs.search_time < mh.search_time,
        format!(
            "N=5000: compress bcs {:.4}s vs minhash {:.4}s ({:.1}x); search bcs {:.4}s vs minhash {:.4}s ({:.1}x)",
            bcs.compress_time,
            mh.compress_time,
            bcs.compress_speedup_vs_minhash.unwrap(),
            bcs.search_time,
            mh.search_time,
            bcs.search_speedup_vs_minhash.unwrap()
        ),
    );
}
