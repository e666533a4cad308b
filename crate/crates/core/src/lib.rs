//! Similarity-preserving compression of sparse binary sets.
//!
//! Two sketches are provided: BCS, which hashes each position into one of
//! `N` buckets and keeps the parity of every bucket, and classical MinHash
//! over explicit random permutations. Both estimate Jaccard similarity; BCS
//! needs a single pass per vector and yields a packed bit array.
//!
//! ```
//! use bcs_core::{BucketMap, SparseBinaryVector, jaccard_bcs, jaccard_exact};
//!
//! let u = SparseBinaryVector::new(1000, vec![3, 17, 256, 900]).unwrap();
//! let v = SparseBinaryVector::new(1000, vec![3, 17, 256, 901]).unwrap();
//! let map = BucketMap::new(1000, 4096, 42).unwrap();
//! let (a, b) = (map.compress(&u).unwrap(), map.compress(&v).unwrap());
//! assert_eq!(jaccard_exact(&u, &v).unwrap(), 0.6);
//! assert!(jaccard_bcs(&a, &b).unwrap() <= 1.0);
//! ```

pub mod bcs;
pub mod bench;
pub mod datagen;
pub mod dataset;
pub mod error;
pub mod ingest;
pub mod minhash;
pub mod params;
pub mod prf;
pub mod search;
pub mod similarity;
pub mod sketchfile;
pub mod vector;

pub use bcs::{bcs_compress, bcs_update, make_bucket_map, BcsSketch, BucketMap};
pub use bench::{
    run_benchmark, run_compressor, BenchReport, BenchRow, BenchTarget, Compressor, Method,
};
pub use datagen::{
    gen_allpairs_dataset, gen_knn_dataset, gen_similar_pair, KnnDataset, PlantedPair,
};
pub use dataset::SparseDataset;
pub use error::{Result, SketchError};
pub use ingest::{
    load_docword, load_native, sample_dataset, save_native, split_train_query, BowHeader,
};
pub use minhash::{
    make_permutation_family, minhash_compress, MinHashSketch, PermutationFamily, EMPTY,
};
pub use params::{corruption_bound, required_length, CompressionParams, LengthBranch};
pub use search::{
    allpairs_above, query_above, result_accuracy, ResultSet, SearchConfig, SearchMode,
};
pub use similarity::{hamming_exact, inner_exact, jaccard_bcs, jaccard_exact, jaccard_minhash};
pub use vector::SparseBinaryVector;
