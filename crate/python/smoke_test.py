"""Smoke test for the bcs_sketch extension module.

Build and install first:
    maturin develop -m crates/py/Cargo.toml --release
"""

import os
import tempfile

import bcs_sketch as bs


def main():
    u = bs.SparseVector(1000, [5, 1, 3, 3])
    v = bs.SparseVector(1000, [3, 5, 7, 9])
    assert u.indices == [1, 3, 5]
    assert abs(bs.jaccard_exact(u, v) - 2 / 5) < 1e-12
    assert bs.hamming_exact(u, v) == 3
    assert bs.inner_exact(u, v) == 2

    m = bs.BucketMap(1000, 64, seed=11)
    su, sv = m.compress(u), m.compress(v)
    assert su.num_buckets == 64
    assert su ^ sv == m.compress(bs.SparseVector(1000, [1, 7, 9]))
    assert abs(bs.jaccard_bcs(su, su) - 1.0) < 1e-12

    streamed = bs.BcsSketch.zeros(64)
    for i in u.indices:
        streamed = streamed.update(i, m)
    assert streamed == su

    fam = bs.PermutationFamily(1000, 200, seed=3)
    assert sorted(fam.permutation(0)) == list(range(1, 1001))
    mu, mv = fam.compress(u), fam.compress(v)
    assert 0.0 <= bs.jaccard_minhash(mu, mv) <= 1.0
    assert fam.compress(bs.SparseVector(1000, [])).values()[0] is None

    a, b = bs.gen_similar_pair(20000, 50, 1)
    big = bs.BucketMap(20000, 20000, seed=2)
    est = bs.jaccard_bcs(big.compress(a), big.compress(b))
    assert abs(est - bs.jaccard_exact(a, b)) < 0.1, est

    n, branch = bs.required_length(50, 1000, 0.5, 50)
    assert n > 0 and branch
    assert 0.0 <= bs.corruption_bound(50, 4096, 0.5, 50) <= 1.0

    ds = bs.gen_allpairs_dataset(60, 5000, 30, 10, 7)
    assert len(ds) == 60 and ds.dim == 5000
    query, items = bs.gen_knn_dataset(100, 5000, 30, 10, 7)
    assert len(items) == 99 and query.dim == 5000

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "ds.txt")
        ds.save(path)
        back = bs.Dataset.load(path)
        assert [x.indices for x in back.vectors()] == [x.indices for x in ds.vectors()]

    rows = ds.bench_allpairs(["bcs", "minhash"], [2000], [0.3, 0.5], repeats=1, seed=5)
    assert len(rows) == 4
    for r in rows:
        print(r)
        assert 0.0 <= r["accuracy"] <= 1.0

    try:
        bs.SparseVector(10, [11])
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range index accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
