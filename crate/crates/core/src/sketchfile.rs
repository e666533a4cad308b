//! Text format for a compressed dataset.
//!
//! ```text
//! n N method seed
//! 0110...           <- bcs: N characters '0'/'1', bucket 1 first
//! 17 4 0 ...        <- minhash: N arg-min positions, 0 = empty set
//! ```

use std::io::Write;
use std::path::Path;

use crate::bcs::{BcsSketch, BucketMap};
use crate::bench::Method;
use crate::dataset::SparseDataset;
use crate::error::{Result, SketchError};
use crate::minhash::{MinHashSketch, PermutationFamily};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SketchSet {
    Bcs(Vec<BcsSketch>),
    MinHash(Vec<MinHashSketch>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SketchFile {
    pub length: usize,
    pub seed: u64,
    pub sketches: SketchSet,
}

impl SketchFile {
    pub fn method(&self) -> Method {
        match self.sketches {
            SketchSet::Bcs(_) => Method::Bcs,
            SketchSet::MinHash(_) => Method::MinHash,
        }
    }

    pub fn len(&self) -> usize {
        match &self.sketches {
            SketchSet::Bcs(v) => v.len(),
            SketchSet::MinHash(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn compress_dataset(
    ds: &SparseDataset,
    method: Method,
    length: usize,
    seed: u64,
) -> Result<SketchFile> {
    let sketches = match method {
        Method::Bcs => {
            let map = BucketMap::new(ds.dim(), length, seed)?;
            SketchSet::Bcs(
                ds.vectors()
                    .iter()
                    .map(|v| map.compress(v))
                    .collect::<Result<_>>()?,
            )
        }
        Method::MinHash => SketchSet::MinHash(
            PermutationFamily::new(ds.dim(), length, seed)?.compress_all(ds.vectors())?,
        ),
    };
    Ok(SketchFile {
        length,
        seed,
        sketches,
    })
}

pub fn write_sketches<W: Write>(f: &SketchFile, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {} {} {}", f.len(), f.length, f.method(), f.seed)?;
    match &f.sketches {
        SketchSet::Bcs(v) => {
            let mut line = Vec::with_capacity(f.length + 1);
            for s in v {
                line.clear();
                line.extend(s.to_bits().into_iter().map(|b| b'0' + b));
                line.push(b'\n');
                out.write_all(&line)?;
            }
        }
        SketchSet::MinHash(v) => {
            for s in v {
                let row: Vec<String> = s.values().iter().map(u32::to_string).collect();
                writeln!(out, "{}", row.join(" "))?;
            }
        }
    }
    out.flush()
}

fn bad(label: &Path, line: usize, message: impl Into<String>) -> SketchError {
    SketchError::Parse {
        path: label.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub fn parse_sketches(text: &str, label: &Path) -> Result<SketchFile> {
    let mut lines = text.lines();
    let head: Vec<&str> = lines.next().unwrap_or("").split_whitespace().collect();
    if head.len() != 4 {
        return Err(bad(label, 1, "expected header \"n N method seed\""));
    }
    let num = |t: &str| {
        t.parse::<u64>()
            .map_err(|_| bad(label, 1, format!("bad header field {t:?}")))
    };
    let (n, length, seed) = (
        num(head[0])? as usize,
        num(head[1])? as usize,
        num(head[3])?,
    );
    let method: Method = head[2]
        .parse()
        .map_err(|e: SketchError| bad(label, 1, e.to_string()))?;
    let rows: Vec<&str> = lines.collect();
    if rows.len() != n {
        return Err(bad(
            label,
            1,
            format!("header declares {n} rows, found {}", rows.len()),
        ));
    }
    let sketches = match method {
        Method::Bcs => SketchSet::Bcs(
            rows.iter()
                .enumerate()
                .map(|(k, row)| {
                    let bits: Vec<u8> = row
                        .bytes()
                        .map(|c| match c {
                            b'0' => Ok(0),
                            b'1' => Ok(1),
                            _ => Err(bad(label, k + 2, "expected only '0' and '1'")),
                        })
                        .collect::<Result<_>>()?;
                    if bits.len() != length {
                        return Err(bad(
                            label,
                            k + 2,
                            format!("expected {length} bits, found {}", bits.len()),
                        ));
                    }
                    BcsSketch::from_bits(&bits)
                })
                .collect::<Result<_>>()?,
        ),
        Method::MinHash => SketchSet::MinHash(
            rows.iter()
                .enumerate()
                .map(|(k, row)| {
                    let vals: Vec<u32> = row
                        .split_whitespace()
                        .map(|t| {
                            t.parse()
                                .map_err(|_| bad(label, k + 2, format!("bad value {t:?}")))
                        })
                        .collect::<Result<_>>()?;
                    if vals.len() != length {
                        return Err(bad(
                            label,
                            k + 2,
                            format!("expected {length} values, found {}", vals.len()),
                        ));
                    }
                    MinHashSketch::from_values(vals)
                })
                .collect::<Result<_>>()?,
        ),
    };
    Ok(SketchFile {
        length,
        seed,
        sketches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::gen_allpairs_dataset;

    #[test]
    fn round_trip_both_methods() {
        let ds = gen_allpairs_dataset(12, 300, 15, 3, 9).unwrap();
        for method in [Method::Bcs, Method::MinHash] {
            let f = compress_dataset(&ds, method, 70, 5).unwrap();
            let mut buf = Vec::new();
            write_sketches(&f, &mut buf).unwrap();
            let text = String::from_utf8(buf).unwrap();
            assert!(text.starts_with(&format!("12 70 {method} 5\n")));
            assert_eq!(parse_sketches(&text, Path::new("x")).unwrap(), f);
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_sketches("1 3 bcs 0\n012\n", Path::new("x")).is_err());
        assert!(parse_sketches("1 3 bcs 0\n01\n", Path::new("x")).is_err());
        assert!(parse_sketches("2 3 bcs 0\n011\n", Path::new("x")).is_err());
        assert!(parse_sketches("1 2 minhash 0\n1 x\n", Path::new("x")).is_err());
        assert!(parse_sketches("1 2 lsh 0\n1 1\n", Path::new("x")).is_err());
    }
}
