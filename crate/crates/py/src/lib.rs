//! Python bindings for `bcs_core`.
//!
//!     import bcs_sketch as bs
//!     u = bs.SparseVector(1000, [3, 17, 256])
//!     m = bs.BucketMap(1000, 4096, seed=7)
//!     bs.jaccard_bcs(m.compress(u), m.compress(u))

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use bcs_core as core;
use bcs_core::SketchError;

fn to_py(e: SketchError) -> PyErr {
    match e {
        SketchError::Io { .. } => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait IntoPyResult<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPyResult<T> for core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// A subset of {1..dim} as a sparse binary vector (1-based indices).
#[pyclass(name = "SparseVector", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySparseVector(core::SparseBinaryVector);

#[pymethods]
impl PySparseVector {
    /// Indices may be in any order; duplicates collapse.
    #[new]
    fn new(dim: usize, indices: Vec<u32>) -> PyResult<Self> {
        core::SparseBinaryVector::from_positions(dim, indices)
            .py()
            .map(Self)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn indices(&self) -> Vec<u32> {
        self.0.indices().to_vec()
    }

    fn weight(&self) -> usize {
        self.0.weight()
    }

    fn __len__(&self) -> usize {
        self.0.weight()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!(
            "SparseVector(dim={}, weight={})",
            self.0.dim(),
            self.0.weight()
        )
    }
}

#[pyclass(name = "BcsSketch", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBcsSketch(core::BcsSketch);

#[pymethods]
impl PyBcsSketch {
    #[staticmethod]
    fn zeros(num_buckets: usize) -> PyResult<Self> {
        core::BcsSketch::zeros(num_buckets).py().map(Self)
    }

    #[getter]
    fn num_buckets(&self) -> usize {
        self.0.num_buckets()
    }

    /// Bits as a list of 0/1, bucket 1 first.
    fn bits(&self) -> Vec<u8> {
        self.0.to_bits()
    }

    fn weight(&self) -> usize {
        self.0.weight()
    }

    /// Copy with the bucket of `position` toggled (streaming update).
    fn update(&self, position: u32, map: &PyBucketMap) -> PyResult<Self> {
        core::bcs_update(self.0.clone(), position, &map.0)
            .py()
            .map(Self)
    }

    fn __xor__(&self, other: &Self) -> PyResult<Self> {
        self.0.xor(&other.0).py().map(Self)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!(
            "BcsSketch(num_buckets={}, weight={})",
            self.0.num_buckets(),
            self.0.weight()
        )
    }
}

#[pyclass(name = "BucketMap", frozen)]
struct PyBucketMap(core::BucketMap);

#[pymethods]
impl PyBucketMap {
    #[new]
    #[pyo3(signature = (dim, num_buckets, seed=0))]
    fn new(dim: usize, num_buckets: usize, seed: u64) -> PyResult<Self> {
        core::BucketMap::new(dim, num_buckets, seed).py().map(Self)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn num_buckets(&self) -> usize {
        self.0.num_buckets()
    }

    fn bucket(&self, position: u32) -> PyResult<u32> {
        self.0.bucket(position).py()
    }

    fn compress(&self, v: &PySparseVector) -> PyResult<PyBcsSketch> {
        self.0.compress(&v.0).py().map(PyBcsSketch)
    }

    fn compress_many(&self, vectors: Vec<PyRef<'_, PySparseVector>>) -> PyResult<Vec<PyBcsSketch>> {
        vectors.iter().map(|v| self.compress(v)).collect()
    }
}

#[pyclass(name = "MinHashSketch", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMinHashSketch(core::MinHashSketch);

#[pymethods]
impl PyMinHashSketch {
    #[getter]
    fn num_perms(&self) -> usize {
        self.0.num_perms()
    }

    /// Arg-min positions; `None` marks the sketch of an empty set.
    fn values(&self) -> Vec<Option<u32>> {
        (0..self.0.num_perms()).map(|k| self.0.get(k)).collect()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

#[pyclass(name = "PermutationFamily", frozen)]
struct PyPermutationFamily(core::PermutationFamily);

#[pymethods]
impl PyPermutationFamily {
    #[new]
    #[pyo3(signature = (dim, num_perms, seed=0))]
    fn new(dim: usize, num_perms: usize, seed: u64) -> PyResult<Self> {
        core::PermutationFamily::new(dim, num_perms, seed)
            .py()
            .map(Self)
    }

    /// Permutation `k` as ranks: element `i - 1` is the image of position `i`.
    fn permutation(&self, k: usize) -> PyResult<Vec<u32>> {
        self.0.permutation(k).py()
    }

    fn compress(&self, v: &PySparseVector) -> PyResult<PyMinHashSketch> {
        self.0.compress(&v.0).py().map(PyMinHashSketch)
    }

    fn compress_many(
        &self,
        vectors: Vec<PyRef<'_, PySparseVector>>,
    ) -> PyResult<Vec<PyMinHashSketch>> {
        let owned: Vec<core::SparseBinaryVector> = vectors.iter().map(|v| v.0.clone()).collect();
        Ok(self
            .0
            .compress_all(&owned)
            .py()?
            .into_iter()
            .map(PyMinHashSketch)
            .collect())
    }
}

#[pyclass(name = "Dataset", frozen)]
struct PyDataset(core::SparseDataset);

#[pymethods]
impl PyDataset {
    #[new]
    fn new(dim: usize, vectors: Vec<PyRef<'_, PySparseVector>>) -> PyResult<Self> {
        core::SparseDataset::new(dim, vectors.iter().map(|v| v.0.clone()).collect())
            .py()
            .map(Self)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        core::load_native(path).py().map(Self)
    }

    #[staticmethod]
    fn load_docword(path: std::path::PathBuf) -> PyResult<Self> {
        core::load_docword(path).py().map(Self)
    }

    fn save(&self, path: std::path::PathBuf) -> PyResult<()> {
        core::save_native(&self.0, path).py()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn sparsity(&self) -> usize {
        self.0.sparsity()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn vectors(&self) -> Vec<PySparseVector> {
        self.0
            .vectors()
            .iter()
            .cloned()
            .map(PySparseVector)
            .collect()
    }

    fn sample(&self, m: usize, seed: u64) -> PyResult<Self> {
        core::sample_dataset(&self.0, m, seed).py().map(Self)
    }

    /// Returns `(train, query)`.
    fn split(&self, query_fraction: f64, seed: u64) -> PyResult<(Self, Self)> {
        let (t, q) = core::split_train_query(&self.0, query_fraction, seed).py()?;
        Ok((Self(t), Self(q)))
    }

    /// Runs the all-pairs benchmark; returns one dict per report row.
    #[pyo3(signature = (methods, lengths, thresholds, repeats=1, seed=0))]
    fn bench_allpairs(
        &self,
        py: Python<'_>,
        methods: Vec<String>,
        lengths: Vec<usize>,
        thresholds: Vec<f64>,
        repeats: usize,
        seed: u64,
    ) -> PyResult<Vec<Py<PyAny>>> {
        let methods = methods
            .iter()
            .map(|m| m.parse::<core::Method>())
            .collect::<core::Result<Vec<_>>>()
            .py()?;
        let report = core::run_benchmark(
            core::BenchTarget::AllPairs(&self.0),
            &methods,
            &lengths,
            &thresholds,
            repeats,
            seed,
        )
        .py()?;
        report
            .rows
            .into_iter()
            .map(|r| {
                let d = pyo3::types::PyDict::new(py);
                d.set_item("method", r.method)?;
                d.set_item("N", r.length)?;
                d.set_item("threshold", r.threshold)?;
                d.set_item("accuracy", r.accuracy)?;
                d.set_item("compress_time_s", r.compress_time)?;
                d.set_item("search_time_s", r.search_time)?;
                d.set_item("repeats", r.repeats)?;
                Ok(d.into_any().unbind())
            })
            .collect()
    }
}

#[pyfunction]
fn jaccard_exact(u: &PySparseVector, v: &PySparseVector) -> PyResult<f64> {
    core::jaccard_exact(&u.0, &v.0).py()
}

#[pyfunction]
fn hamming_exact(u: &PySparseVector, v: &PySparseVector) -> PyResult<usize> {
    core::hamming_exact(&u.0, &v.0).py()
}

#[pyfunction]
fn inner_exact(u: &PySparseVector, v: &PySparseVector) -> PyResult<usize> {
    core::inner_exact(&u.0, &v.0).py()
}

#[pyfunction]
fn jaccard_bcs(a: &PyBcsSketch, b: &PyBcsSketch) -> PyResult<f64> {
    core::jaccard_bcs(&a.0, &b.0).py()
}

#[pyfunction]
fn jaccard_minhash(a: &PyMinHashSketch, b: &PyMinHashSketch) -> PyResult<f64> {
    core::jaccard_minhash(&a.0, &b.0).py()
}

/// Returns `(N, branch description)`.
#[pyfunction]
fn required_length(psi: u64, n: u64, epsilon: f64, r: u64) -> PyResult<(u64, &'static str)> {
    let p = core::CompressionParams::new(psi, n, epsilon, r).py()?;
    Ok((core::required_length(&p), p.branch().describe()))
}

#[pyfunction]
fn corruption_bound(psi: u64, num_buckets: u64, epsilon: f64, r: u64) -> f64 {
    core::corruption_bound(psi, num_buckets, epsilon, r)
}

#[pyfunction]
fn gen_similar_pair(
    dim: usize,
    psi: usize,
    seed: u64,
) -> PyResult<(PySparseVector, PySparseVector)> {
    let p = core::gen_similar_pair(dim, psi, seed).py()?;
    Ok((PySparseVector(p.first), PySparseVector(p.second)))
}

#[pyfunction]
fn gen_allpairs_dataset(
    n: usize,
    dim: usize,
    psi: usize,
    num_similar_pairs: usize,
    seed: u64,
) -> PyResult<PyDataset> {
    core::gen_allpairs_dataset(n, dim, psi, num_similar_pairs, seed)
        .py()
        .map(PyDataset)
}

/// Returns `(query, items)`.
#[pyfunction]
fn gen_knn_dataset(
    n: usize,
    dim: usize,
    psi: usize,
    num_neighbors: usize,
    seed: u64,
) -> PyResult<(PySparseVector, PyDataset)> {
    let k = core::gen_knn_dataset(n, dim, psi, num_neighbors, seed).py()?;
    Ok((PySparseVector(k.query), PyDataset(k.items)))
}

#[pymodule]
fn bcs_sketch(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySparseVector>()?;
    m.add_class::<PyBcsSketch>()?;
    m.add_class::<PyBucketMap>()?;
    m.add_class::<PyMinHashSketch>()?;
    m.add_class::<PyPermutationFamily>()?;
    m.add_class::<PyDataset>()?;
    m.add_function(wrap_pyfunction!(jaccard_exact, m)?)?;
    m.add_function(wrap_pyfunction!(hamming_exact, m)?)?;
    m.add_function(wrap_pyfunction!(inner_exact, m)?)?;
    m.add_function(wrap_pyfunction!(jaccard_bcs, m)?)?;
    m.add_function(wrap_pyfunction!(jaccard_minhash, m)?)?;
    m.add_function(wrap_pyfunction!(required_length, m)?)?;
    m.add_function(wrap_pyfunction!(corruption_bound, m)?)?;
    m.add_function(wrap_pyfunction!(gen_similar_pair, m)?)?;
    m.add_function(wrap_pyfunction!(gen_allpairs_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(gen_knn_dataset, m)?)?;
    Ok(())
}
