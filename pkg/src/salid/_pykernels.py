"""Pure-Python implementations of the hot kernels.

These are the reference semantics; ``_ckernels.pyx`` must agree with them
exactly (integers) or to rounding (reals). Array arguments follow a CSR
layout: row ``i`` owns ``indices[indptr[i]:indptr[i + 1]]``.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"

BOUNDARY = "_"


def count_grams(text: str, orders: tuple[int, ...]) -> dict[str, int]:
    """Count every contiguous character window of each length in ``orders``.

    Single spaces become the boundary marker before windowing; no padding is
    added at the ends.
    """
    marked = text.replace(" ", BOUNDARY)
    counts: dict[str, int] = {}
    get = counts.get
    size = len(marked)
    for n in orders:
        for i in range(size - n + 1):
            gram = marked[i : i + n]
            counts[gram] = get(gram, 0) + 1
    return counts


def encode_counts(
    text: str, orders: tuple[int, ...], index: dict[str, int]
) -> tuple[list[int], list[int]]:
    """Column ids and counts of the in-vocabulary grams of ``text``.

    Ids come out in ascending order; out-of-vocabulary grams are dropped.
    """
    found: dict[int, int] = {}
    for gram, c in count_grams(text, orders).items():
        col = index.get(gram)
        if col is not None:
            found[col] = c
    cols = sorted(found)
    return cols, [found[c] for c in cols]


def oop_distances(
    indptr: np.ndarray, ids: np.ndarray, rank_table: np.ndarray, k: int
) -> np.ndarray:
    """Out-of-place distance of every document against every profile.

    ``ids`` holds, per document and in document rank order, the column of
    each gram in ``rank_table`` (-1 when no profile contains it).
    ``rank_table[l, col]`` is the gram's rank in profile ``l`` or -1.
    """
    n_docs = len(indptr) - 1
    n_lang = rank_table.shape[0]
    out = np.zeros((n_docs, n_lang), dtype=np.int64)
    for d in range(n_docs):
        start, stop = int(indptr[d]), int(indptr[d + 1])
        for lang in range(n_lang):
            row = rank_table[lang]
            total = 0
            for pos in range(start, stop):
                col = ids[pos]
                r = row[col] if col >= 0 else -1
                if r < 0:
                    total += k
                else:
                    total += abs((pos - start) - int(r))
            out[d, lang] = total
    return out


def _row_ids(indptr: np.ndarray) -> np.ndarray:
    return np.repeat(np.arange(len(indptr) - 1), np.diff(indptr))


def joint_scores(
    indptr: np.ndarray,
    indices: np.ndarray,
    data: np.ndarray,
    log_likelihood: np.ndarray,
    log_prior: np.ndarray,
) -> np.ndarray:
    """``log_prior[c] + sum_t x[t] * log_likelihood[c, t]`` for each CSR row."""
    n_docs = len(indptr) - 1
    rows = _row_ids(indptr)
    out = np.empty((n_docs, log_likelihood.shape[0]), dtype=np.float64)
    for c, row in enumerate(log_likelihood):
        out[:, c] = np.bincount(rows, weights=data * row[indices], minlength=n_docs)
    out += log_prior
    return out


def class_sums(
    indptr: np.ndarray,
    indices: np.ndarray,
    data: np.ndarray,
    labels: np.ndarray,
    n_class: int,
    n_features: int,
) -> np.ndarray:
    """Per-class aggregate feature values."""
    owner = np.asarray(labels)[_row_ids(indptr)]
    out = np.empty((n_class, n_features), dtype=np.float64)
    for c in range(n_class):
        mask = owner == c
        out[c] = np.bincount(indices[mask], weights=data[mask], minlength=n_features)
    return out
