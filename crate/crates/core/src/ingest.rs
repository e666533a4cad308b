//! Corpus I/O: the UCI bag-of-words `docword` format (read-only) and the
//! native sparse text format (read/write), plus sampling and splitting.
//!
//! Native format, UTF-8 with LF endings:
//!
//! ```text
//! n d
//! i_1 i_2 ... i_k      <- one line per vector, ascending 1-based indices
//!                      <- an empty line is an empty vector
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rand::seq::{index, SliceRandom};

use crate::dataset::SparseDataset;
use crate::error::{Result, SketchError};
use crate::prf;
use crate::vector::SparseBinaryVector;

/// Header of a docword file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BowHeader {
    pub num_docs: usize,
    pub vocab_size: usize,
    pub nnz: usize,
}

fn io_err(path: &Path, source: std::io::Error) -> SketchError {
    SketchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> SketchError {
    SketchError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_int(path: &Path, line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| {
        parse_err(
            path,
            line,
            format!("{what}: expected a non-negative integer, got {tok:?}"),
        )
    })
}

/// Reads a UCI docword file into binary vectors, one per document.
pub fn load_docword(path: impl AsRef<Path>) -> Result<SparseDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    parse_docword(BufReader::new(file), path)
}

/// Parses docword content; `label` is used in diagnostics only.
pub fn parse_docword<R: BufRead>(reader: R, label: &Path) -> Result<SparseDataset> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut header = [0usize; 3];
    for (slot, what) in header.iter_mut().zip(["D", "W", "NNZ"]) {
        let (no, line) = lines
            .next()
            .ok_or_else(|| parse_err(label, 0, format!("missing header line {what}")))?;
        let line = line.map_err(|e| io_err(label, e))?;
        let tok = line.trim();
        *slot = parse_int(label, no, tok, what)?;
    }
    let header = BowHeader {
        num_docs: header[0],
        vocab_size: header[1],
        nnz: header[2],
    };
    if header.num_docs == 0 || header.vocab_size == 0 {
        return Err(parse_err(label, 1, "D and W must be positive"));
    }
    if header.nnz as u128 > header.num_docs as u128 * header.vocab_size as u128 {
        return Err(parse_err(label, 3, "NNZ exceeds D * W"));
    }
    if header.vocab_size > u32::MAX as usize {
        return Err(parse_err(label, 2, "W exceeds u32 range"));
    }

    let mut docs: Vec<Vec<u32>> = vec![Vec::new(); header.num_docs];
    let mut seen = 0usize;
    for (no, line) in lines {
        let line = line.map_err(|e| io_err(label, e))?;
        let mut toks = line.split_whitespace();
        let Some(first) = toks.next() else { continue };
        let (Some(second), Some(third), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(parse_err(label, no, "expected \"docID wordID count\""));
        };
        let doc = parse_int(label, no, first, "docID")?;
        let word = parse_int(label, no, second, "wordID")?;
        let count = parse_int(label, no, third, "count")?;
        if doc == 0 || doc > header.num_docs {
            return Err(parse_err(
                label,
                no,
                format!("docID {doc} outside [1, {}]", header.num_docs),
            ));
        }
        if word == 0 || word > header.vocab_size {
            return Err(parse_err(
                label,
                no,
                format!("wordID {word} outside [1, {}]", header.vocab_size),
            ));
        }
        seen += 1;
        if count >= 1 {
            docs[doc - 1].push(word as u32);
        }
    }
    if seen != header.nnz {
        return Err(parse_err(
            label,
            3,
            format!(
                "header declares NNZ = {} but {seen} entries follow",
                header.nnz
            ),
        ));
    }
    let vectors = docs
        .into_iter()
        .map(|words| SparseBinaryVector::from_positions(header.vocab_size, words))
        .collect::<Result<Vec<_>>>()?;
    SparseDataset::new(header.vocab_size, vectors)
}

pub fn write_native<W: Write>(ds: &SparseDataset, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {}", ds.len(), ds.dim())?;
    for v in ds.vectors() {
        let mut first = true;
        for i in v.indices() {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{i}")?;
            first = false;
        }
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn save_native(ds: &SparseDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    write_native(ds, BufWriter::new(file)).map_err(|e| io_err(path, e))
}

pub fn load_native(path: impl AsRef<Path>) -> Result<SparseDataset> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| io_err(path, e))?;
    parse_native(&text, path)
}

pub fn parse_native(text: &str, label: &Path) -> Result<SparseDataset> {
    let mut lines = text.split('\n');
    let head = lines.next().unwrap_or("");
    let toks: Vec<&str> = head.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(parse_err(label, 1, "expected header \"n d\""));
    }
    let n = parse_int(label, 1, toks[0], "n")?;
    let dim = parse_int(label, 1, toks[1], "d")?;
    if dim == 0 || dim > u32::MAX as usize {
        return Err(parse_err(label, 1, "d must lie in [1, 2^32)"));
    }
    let mut vectors = Vec::with_capacity(n);
    for k in 0..n {
        let no = k + 2;
        let line = lines
            .next()
            .ok_or_else(|| parse_err(label, no, format!("expected {n} vector lines, found {k}")))?;
        let idx = line
            .split_whitespace()
            .map(|t| parse_int(label, no, t, "index").map(|x| x as u64))
            .collect::<Result<Vec<u64>>>()?;
        if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > dim as u64) {
            return Err(parse_err(
                label,
                no,
                format!("index {bad} outside [1, {dim}]"),
            ));
        }
        let v = SparseBinaryVector::new(dim, idx.into_iter().map(|i| i as u32).collect())
            .map_err(|e| parse_err(label, no, e.to_string()))?;
        vectors.push(v);
    }
    // every line, the last included, ends with '\n'
    let rest: Vec<&str> = lines.collect();
    if rest != [""] {
        let msg = if rest.is_empty() {
            format!("expected {n} newline-terminated vector lines")
        } else {
            "trailing content after the declared vectors".to_string()
        };
        return Err(parse_err(label, n + 1, msg));
    }
    SparseDataset::new(dim, vectors)
}

/// `m` vectors drawn uniformly without replacement, in draw order.
pub fn sample_dataset(ds: &SparseDataset, m: usize, seed: u64) -> Result<SparseDataset> {
    if m == 0 {
        return Err(SketchError::ZeroParameter {
            what: "sample size",
        });
    }
    if m > ds.len() {
        return Err(SketchError::invalid(format!(
            "sample size {m} exceeds dataset size {}",
            ds.len()
        )));
    }
    let mut rng = prf::rng_for(seed);
    let picked = index::sample(&mut rng, ds.len(), m).into_vec();
    ds.select(&picked)
}

/// Seeded disjoint split into (train, query) with
/// `|query| = round(query_fraction * n)`. Each side keeps corpus order.
pub fn split_train_query(
    ds: &SparseDataset,
    query_fraction: f64,
    seed: u64,
) -> Result<(SparseDataset, SparseDataset)> {
    let (train, query) = split_indices(ds.len(), query_fraction, seed)?;
    Ok((ds.select(&train)?, ds.select(&query)?))
}

/// Index form of [`split_train_query`].
pub fn split_indices(n: usize, query_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(query_fraction > 0.0 && query_fraction < 1.0) {
        return Err(SketchError::invalid(format!(
            "query fraction must lie in (0, 1), got {query_fraction}"
        )));
    }
    let q = (query_fraction * n as f64).round() as usize;
    if q == 0 || q >= n {
        return Err(SketchError::invalid(format!(
            "split of {n} vectors at fraction {query_fraction} leaves an empty partition"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut prf::rng_for(seed));
    let mut query = order[..q].to_vec();
    let mut train = order[q..].to_vec();
    query.sort_unstable();
    train.sort_unstable();
    Ok((train, query))
}

/// Looks for a corpus file in the usual places: an explicit path, or
/// `$BCS_DATA_DIR/<name>`.
pub fn locate_corpus(name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os("BCS_DATA_DIR").map(PathBuf::from)?;
    let p = dir.join(name);
    p.is_file().then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(text: &str) -> Result<SparseDataset> {
        parse_docword(Cursor::new(text), Path::new("test.txt"))
    }

    #[test]
    fn minimal_docword() {
        let ds = parse("1\n5\n1\n1 3 7\n").unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.dim(), 5);
        assert_eq!(ds.vectors()[0].indices(), &[3]);
    }

    #[test]
    fn docword_dedups_and_binarizes() {
        let ds = parse("2\n6\n4\n1 4 2\n1 2 1\n1 4 9\n2 6 1\n").unwrap();
        assert_eq!(ds.vectors()[0].indices(), &[2, 4]);
        assert_eq!(ds.vectors()[1].indices(), &[6]);
        assert_eq!(ds.sparsity(), 2);
    }

    #[test]
    fn docword_errors_carry_line_numbers() {
        let cases = [
            ("x\n5\n1\n1 3 7\n", 1),
            ("1\n5\n1\n1 6 7\n", 4),
            ("1\n5\n1\n2 3 7\n", 4),
            ("1\n5\n2\n1 3 7\n1 2 a\n", 5),
            ("1\n5\n1\n1 3\n", 4),
            ("1\n5\n2\n1 3 7\n", 3),
            ("1\n5\n9\n", 3),
        ];
        for (text, want) in cases {
            match parse(text) {
                Err(SketchError::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn native_format_layout() {
        let ds = SparseDataset::new(
            7,
            vec![
                SparseBinaryVector::new(7, vec![1, 4]).unwrap(),
                SparseBinaryVector::new(7, vec![]).unwrap(),
                SparseBinaryVector::new(7, vec![7]).unwrap(),
            ],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_native(&ds, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "3 7\n1 4\n\n7\n");
        assert_eq!(
            parse_native(std::str::from_utf8(&buf).unwrap(), Path::new("x")).unwrap(),
            ds
        );
    }

    #[test]
    fn native_rejects_bad_input() {
        for text in ["2 5\n1\n", "1 5\n6\n", "1 5\n3 2\n", "1 5\n1\n2\n", "1\n"] {
            assert!(parse_native(text, Path::new("x")).is_err(), "{text:?}");
        }
    }

    fn toy(n: usize) -> SparseDataset {
        let vs = (0..n)
            .map(|i| SparseBinaryVector::new(n + 1, vec![i as u32 + 1]).unwrap())
            .collect();
        SparseDataset::new(n + 1, vs).unwrap()
    }

    #[test]
    fn sample_full_is_a_permutation() {
        let ds = toy(30);
        let s = sample_dataset(&ds, 30, 4).unwrap();
        let mut a: Vec<_> = s.vectors().to_vec();
        a.sort_by(|x, y| x.indices().cmp(y.indices()));
        assert_eq!(a, ds.vectors());
        assert_eq!(sample_dataset(&ds, 1, 4).unwrap().len(), 1);
        assert!(sample_dataset(&ds, 31, 4).is_err());
        assert_eq!(
            sample_dataset(&ds, 10, 4).unwrap(),
            sample_dataset(&ds, 10, 4).unwrap()
        );
    }

    #[test]
    fn split_partitions() {
        let ds = toy(100);
        let (train, query) = split_train_query(&ds, 0.1, 9).unwrap();
        assert_eq!((train.len(), query.len()), (90, 10));
        let mut all: Vec<_> = train
            .vectors()
            .iter()
            .chain(query.vectors())
            .cloned()
            .collect();
        all.sort_by(|x, y| x.indices().cmp(y.indices()));
        assert_eq!(all, ds.vectors());
        assert_eq!(split_train_query(&ds, 0.1, 9).unwrap(), (train, query));
        assert!(split_train_query(&ds, 0.0, 9).is_err());
        assert!(split_train_query(&ds, 1.0, 9).is_err());
        assert!(split_train_query(&toy(3), 0.1, 9).is_err());
    }
}
