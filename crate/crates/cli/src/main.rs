mod manifest;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bcs_core::params::{randomness_budget, CompressionParams};
use bcs_core::sketchfile::{compress_dataset, write_sketches};
use bcs_core::{
    corruption_bound, gen_allpairs_dataset, gen_knn_dataset, load_docword, load_native,
    required_length, run_benchmark, sample_dataset, save_native, split_train_query, BenchReport,
    BenchTarget, Method, SparseDataset,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use manifest::{sibling, Manifest};

const DEFAULT_SEED: u64 = 20_170_901;

#[derive(Parser)]
#[command(name = "bcs", version, about = "Sparse-set sketching: BCS and MinHash")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset.
    Synth(SynthArgs),
    /// Binarize a UCI docword corpus, optionally sampling it.
    Ingest(IngestArgs),
    /// Sweep methods, lengths and thresholds; write a CSV report.
    Bench(BenchArgs),
    /// Print the theoretical compression length and corruption bound.
    Params(ParamsArgs),
    /// Compress a dataset into a sketch file.
    Compress(CompressArgs),
}

#[derive(Args)]
struct SeedArgs {
    /// Master seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Draw the master seed from OS entropy (recorded in the manifest).
    #[arg(long, conflicts_with = "seed")]
    random_seed: bool,
}

impl SeedArgs {
    fn resolve(&self) -> u64 {
        if self.random_seed {
            rand::random()
        } else {
            self.seed
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthKind {
    Allpairs,
    Knn,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    kind: SynthKind,
    /// Number of vectors (for knn this counts the query).
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    dim: usize,
    #[arg(long, default_value_t = 200)]
    psi: usize,
    /// Planted similar pairs (allpairs).
    #[arg(long, default_value_t = 200)]
    pairs: usize,
    /// Planted neighbours of the query (knn).
    #[arg(long, default_value_t = 249)]
    neighbors: usize,
    #[command(flatten)]
    seed: SeedArgs,
    /// Output dataset (native sparse format).
    #[arg(long)]
    out: PathBuf,
    /// Query output for knn; defaults to `<out>.query`.
    #[arg(long)]
    query_out: Option<PathBuf>,
}

#[derive(Args)]
struct IngestArgs {
    /// UCI docword file.
    #[arg(long)]
    input: PathBuf,
    /// Keep a uniform sample of this many documents.
    #[arg(long)]
    sample: Option<usize>,
    #[command(flatten)]
    seed: SeedArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Allpairs,
    Query,
}

#[derive(Args)]
struct BenchArgs {
    /// Dataset in native sparse format.
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "bcs,minhash")]
    methods: Vec<String>,
    /// Compression lengths, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    lengths: Vec<usize>,
    /// Support thresholds in [0, 1], comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    thresholds: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long, value_enum, default_value = "allpairs")]
    mode: Mode,
    /// Query vectors (query mode); when absent the dataset is split.
    #[arg(long)]
    queries: Option<PathBuf>,
    /// Fraction held out as queries when splitting.
    #[arg(long, default_value_t = 0.1)]
    query_fraction: f64,
    #[command(flatten)]
    seed: SeedArgs,
    /// CSV report; cross-threshold means go to `<csv>.summary.csv`.
    #[arg(long)]
    csv: PathBuf,
}

#[derive(Args)]
struct ParamsArgs {
    #[arg(long)]
    psi: u64,
    /// Number of vectors.
    #[arg(long)]
    n: u64,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    r: u64,
    /// Evaluate the corruption bound at this N instead of the required one.
    #[arg(long)]
    num_buckets: Option<u64>,
    /// Data dimension, for the random-bit budget.
    #[arg(long)]
    dim: Option<u64>,
}

#[derive(Args)]
struct CompressArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value = "bcs")]
    method: String,
    /// Compression length N.
    #[arg(long)]
    length: usize,
    #[command(flatten)]
    seed: SeedArgs,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Synth(a) => synth(a),
        Command::Ingest(a) => ingest(a),
        Command::Bench(a) => bench(a),
        Command::Params(a) => params(a),
        Command::Compress(a) => compress(a),
    }
}

fn describe(m: &mut Manifest, prefix: &str, ds: &SparseDataset) {
    m.set(&format!("{prefix}n"), ds.len())
        .set(&format!("{prefix}d"), ds.dim())
        .set(&format!("{prefix}psi"), ds.sparsity());
}

fn save(ds: &SparseDataset, path: &Path) -> Result<()> {
    save_native(ds, path).with_context(|| format!("writing {}", path.display()))
}

fn synth(a: SynthArgs) -> Result<()> {
    let seed = a.seed.resolve();
    let mut m = Manifest::new("synth", seed);
    m.set("dim", a.dim)
        .set("psi_bound", a.psi)
        .set("output", a.out.display());
    match a.kind {
        SynthKind::Allpairs => {
            let ds = gen_allpairs_dataset(a.n, a.dim, a.psi, a.pairs, seed)?;
            save(&ds, &a.out)?;
            m.set("kind", "allpairs").set("pairs", a.pairs);
            describe(&mut m, "", &ds);
        }
        SynthKind::Knn => {
            let k = gen_knn_dataset(a.n, a.dim, a.psi, a.neighbors, seed)?;
            let query_out = a.query_out.unwrap_or_else(|| sibling(&a.out, "query"));
            save(&k.items, &a.out)?;
            save(&SparseDataset::new(a.dim, vec![k.query])?, &query_out)?;
            m.set("kind", "knn")
                .set("n_total", a.n)
                .set("neighbors", a.neighbors)
                .set("query_output", query_out.display());
            describe(&mut m, "", &k.items);
        }
    }
    m.write_for(&a.out)?;
    Ok(())
}

fn ingest(a: IngestArgs) -> Result<()> {
    let seed = a.seed.resolve();
    let mut ds = load_docword(&a.input)?;
    let mut m = Manifest::new("ingest", seed);
    m.set("input", a.input.display())
        .set("output", a.out.display());
    m.set("corpus_n", ds.len());
    if let Some(size) = a.sample {
        ds = sample_dataset(&ds, size, seed)?;
        m.set("sample", size);
    }
    save(&ds, &a.out)?;
    describe(&mut m, "", &ds);
    m.write_for(&a.out)?;
    eprintln!("n={} d={} psi={}", ds.len(), ds.dim(), ds.sparsity());
    Ok(())
}

fn bench(a: BenchArgs) -> Result<()> {
    if a.thresholds.is_empty() {
        bail!("--thresholds must list at least one value");
    }
    if a.lengths.is_empty() {
        bail!("--lengths must list at least one value");
    }
    let methods = a
        .methods
        .iter()
        .map(|s| s.parse::<Method>())
        .collect::<bcs_core::Result<Vec<_>>>()?;
    let seed = a.seed.resolve();
    let ds = load_native(&a.dataset)?;
    let mut m = Manifest::new("bench", seed);
    m.set("dataset", a.dataset.display())
        .set("methods", a.methods.join(","))
        .set("lengths", join(&a.lengths))
        .set("thresholds", join(&a.thresholds))
        .set("repeats", a.repeats)
        .set("output", a.csv.display());

    let report = match a.mode {
        Mode::Allpairs => {
            m.set("mode", "allpairs");
            describe(&mut m, "", &ds);
            run_benchmark(
                BenchTarget::AllPairs(&ds),
                &methods,
                &a.lengths,
                &a.thresholds,
                a.repeats,
                seed,
            )?
        }
        Mode::Query => {
            m.set("mode", "query");
            let (train, queries) = match &a.queries {
                Some(q) => {
                    m.set("queries", q.display());
                    (ds, load_native(q)?)
                }
                None => {
                    m.set("query_fraction", a.query_fraction);
                    split_train_query(&ds, a.query_fraction, seed)?
                }
            };
            describe(&mut m, "train_", &train);
            m.set("query_n", queries.len());
            let target = BenchTarget::Query {
                train: &train,
                queries: &queries,
            };
            run_benchmark(target, &methods, &a.lengths, &a.thresholds, a.repeats, seed)?
        }
    };

    report.save_csv(&a.csv)?;
    let summary_path = sibling(&a.csv, "summary.csv");
    report.save_summary_csv(&summary_path)?;
    m.set("summary_output", summary_path.display());
    m.write_for(&a.csv)?;
    print_summary(&report);
    Ok(())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn print_summary(report: &BenchReport) {
    println!(
        "{:<8} {:>7} {:>9} {:>12} {:>12} {:>9} {:>9}",
        "method", "N", "mean_acc", "compress_s", "search_s", "c_ratio", "s_ratio"
    );
    let ratio = |x: Option<f64>| x.map_or("-".to_string(), |r| format!("{r:.1}"));
    for s in report.summary() {
        println!(
            "{:<8} {:>7} {:>9.4} {:>12.6} {:>12.6} {:>9} {:>9}",
            s.method,
            s.length,
            s.mean_accuracy,
            s.compress_time,
            s.search_time,
            ratio(s.compress_speedup_vs_minhash),
            ratio(s.search_speedup_vs_minhash)
        );
    }
}

fn params(a: ParamsArgs) -> Result<()> {
    let p = CompressionParams::new(a.psi, a.n, a.epsilon, a.r)?;
    let length = required_length(&p);
    let at = a.num_buckets.unwrap_or(length);
    println!("N={length}");
    println!("branch={}", p.branch().describe());
    println!("epsilon_tilde_min={}", p.epsilon_tilde());
    println!(
        "corruption_bound(N={at})={}",
        corruption_bound(a.psi, at, a.epsilon, a.r)
    );
    println!("log_base=2");
    if let Some(dim) = a.dim {
        let b = randomness_budget(dim, length);
        println!("random_bits_bcs~{}", b.bcs_bits);
        println!("random_bits_minhash~{}", b.minhash_bits);
    }
    Ok(())
}

fn compress(a: CompressArgs) -> Result<()> {
    let method: Method = a.method.parse()?;
    let seed = a.seed.resolve();
    let ds = load_native(&a.dataset)?;
    let sketches = compress_dataset(&ds, method, a.length, seed)?;
    let file = File::create(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    write_sketches(&sketches, BufWriter::new(file))
        .with_context(|| format!("writing {}", a.out.display()))?;
    let mut m = Manifest::new("compress", seed);
    m.set("dataset", a.dataset.display())
        .set("method", method)
        .set("length", a.length)
        .set("output", a.out.display());
    describe(&mut m, "", &ds);
    m.write_for(&a.out)?;
    Ok(())
}
