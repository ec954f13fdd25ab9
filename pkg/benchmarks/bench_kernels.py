"""Time each kernel under every importable backend.

    python3 benchmarks/bench_kernels.py [--docs 8000] [--repeat 5]

Inputs are synthetic but sized like the 11-language task: ~3400 training
sentences per language, 50-gram profiles, tens of thousands of features.
"""

from __future__ import annotations

import argparse
import random
import timeit

import numpy as np

from salid.kernels import available_backends

SYLLABLES = [c + v for c in "bdgklmnprstvwyz" for v in "aeiou"]


def make_texts(n: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    words = ["".join(rng.choices(SYLLABLES, k=rng.randint(1, 4))) for _ in range(3000)]
    return [" ".join(rng.choices(words, k=rng.randint(3, 30))).replace(" ", "_") for _ in range(n)]


def make_csr(rng: np.random.Generator, n_docs: int, n_features: int, per_doc: int):
    nnz = rng.integers(1, per_doc, size=n_docs)
    indptr = np.concatenate([[0], np.cumsum(nnz)]).astype(np.int64)
    indices = np.concatenate([np.sort(rng.choice(n_features, size=m, replace=False)) for m in nnz]).astype(np.int64)
    return indptr, indices, rng.random(indptr[-1])


def cases(n_docs: int):
    rng = np.random.default_rng(0)
    texts = make_texts(n_docs, 0)
    orders = (2, 3, 4)
    index = {g: i for i, g in enumerate(sorted({t[i : i + 3] for t in texts[:500] for i in range(len(t) - 2)}))}

    k, n_lang, n_cols = 50, 11, 2000
    table = np.full((n_lang, n_cols), -1, dtype=np.int32)
    for lang in range(n_lang):
        table[lang, rng.choice(n_cols, size=k, replace=False)] = np.arange(k)
    doc_ptr = np.arange(0, (n_docs + 1) * k, k, dtype=np.int64)
    ids = rng.integers(-1, n_cols, size=n_docs * k).astype(np.int64)

    n_features = 40_000
    indptr, indices, data = make_csr(rng, n_docs, n_features, 120)
    ll = np.log(rng.dirichlet(np.ones(n_features), size=n_lang))
    prior = np.log(np.full(n_lang, 1 / n_lang))
    labels = rng.integers(0, n_lang, size=n_docs)

    return {
        "count_grams": lambda m: [m.count_grams(t, orders) for t in texts],
        "encode_counts": lambda m: [m.encode_counts(t, (3,), index) for t in texts],
        "oop_distances": lambda m: m.oop_distances(doc_ptr, ids, table, k),
        "joint_scores": lambda m: m.joint_scores(indptr, indices, data, ll, prior),
        "class_sums": lambda m: m.class_sums(indptr, indices, data, labels, n_lang, n_features),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--docs", type=int, default=8000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = available_backends()
    names = sorted(backends)
    if "cython" not in backends:
        print("compiled extension not built; timing the pure-Python backend only")
    print(f"{args.docs} documents, best of {args.repeat}\n")
    header = f"{'kernel':<15}" + "".join(f"{n:>12}" for n in names)
    if len(names) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for kernel, fn in cases(args.docs).items():
        times = {}
        for name in names:
            mod = backends[name]
            times[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        row = f"{kernel:<15}" + "".join(f"{times[n] * 1e3:>10.1f}ms" for n in names)
        if len(names) > 1:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
