"""Time the numba kernels against the pure-numpy fallback.

Synthetic L2-normalized TF-IDF-like data at Fake.Br scale (5040 train,
2160 test rows, Zipf-distributed terms) is pushed through SVM training,
k-NN prediction and tree growth with each backend; predictions are
checked for agreement.

    python benchmarks/bench_kernels.py                  # full scale
    python benchmarks/bench_kernels.py --scale 0.1      # quick look
"""

import argparse
import time

import numpy as np

from veritas.classify import train_decision_tree, train_knn, train_linear_svm
from veritas.sparse import FeatureMatrix


def synthetic(n_rows, dim, mean_nnz, rng):
    # skewed term popularity plus a label-dependent shift so the problem is learnable
    p = 1.0 / np.arange(1, dim + 1) ** 1.05
    p /= p.sum()
    labels = rng.choice(np.array([-1, 1], dtype=np.int8), size=n_rows)
    indptr = [0]
    indices, data = [], []
    for y in labels:
        n = max(1, int(rng.poisson(mean_nnz)))
        terms = rng.choice(dim, size=n, p=p)
        if y > 0:
            terms = np.concatenate([terms, rng.integers(0, 50, size=n // 10)])
        cols, counts = np.unique(terms, return_counts=True)
        vals = counts * (1.0 + np.log1p(cols))
        vals /= np.linalg.norm(vals)
        indices.append(cols)
        data.append(vals)
        indptr.append(indptr[-1] + cols.size)
    return FeatureMatrix(
        np.array(indptr, dtype=np.int64),
        np.concatenate(indices).astype(np.int64),
        np.concatenate(data),
        labels,
        dim,
    )


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scale", type=float, default=1.0, help="fraction of the Fake.Br row counts")
    ap.add_argument("--dim", type=int, default=5000)
    ap.add_argument("--nnz", type=int, default=150, help="mean distinct terms per document")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-numpy-svm", action="store_true", help="the pure-python SVM loop is slow at full scale")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    n_train, n_test = max(10, int(5040 * args.scale)), max(5, int(2160 * args.scale))
    train = synthetic(n_train, args.dim, args.nnz, rng)
    test = synthetic(n_test, args.dim, args.nnz, rng)
    print(f"train {n_train} x {args.dim}, test {n_test}, nnz/row ~{train.data.size / n_train:.0f}")

    # compile outside the timed region
    small = synthetic(20, 30, 5, np.random.default_rng(1))
    train_linear_svm(small, backend="numba")
    train_knn(small).predict_batch(small, backend="numba")
    train_decision_tree(small, backend="numba")

    tasks = {
        "svm train": lambda b: train_linear_svm(train, backend=b).predict_batch(test),
        "knn predict": lambda b: train_knn(train).predict_batch(test, backend=b),
        "tree (3 leaves)": lambda b: train_decision_tree(train, max_leaves=3, backend=b).predict_batch(test),
    }
    print(f"{'task':<16} {'numba s':>9} {'numpy s':>9} {'speed-up':>9}  agree")
    for name, fn in tasks.items():
        pred_a, ta = timed(lambda: fn("numba"))
        if name == "svm train" and args.skip_numpy_svm:
            print(f"{name:<16} {ta:>9.3f} {'-':>9} {'-':>9}  -")
            continue
        pred_b, tb = timed(lambda: fn("numpy"))
        print(f"{name:<16} {ta:>9.3f} {tb:>9.3f} {tb / ta:>8.1f}x  {bool(np.array_equal(pred_a, pred_b))}")


if __name__ == "__main__":
    main()
