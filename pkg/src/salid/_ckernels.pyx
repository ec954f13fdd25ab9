# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Semantics mirror ``salid._pykernels`` exactly."""

cimport cython
from cpython.dict cimport PyDict_GetItem, PyDict_SetItem
from cpython.ref cimport PyObject

import numpy as np

BACKEND = "cython"


def count_grams(str text, tuple orders):
    cdef str marked = text.replace(" ", "_")
    cdef dict counts = {}
    cdef Py_ssize_t size = len(marked)
    cdef Py_ssize_t i, n
    cdef str gram
    cdef PyObject *prev
    for o in orders:
        n = o
        for i in range(size - n + 1):
            gram = marked[i:i + n]
            prev = PyDict_GetItem(counts, gram)
            if prev is NULL:
                PyDict_SetItem(counts, gram, 1)
            else:
                PyDict_SetItem(counts, gram, <object>prev + 1)
    return counts


def encode_counts(str text, tuple orders, dict index):
    cdef dict found = {}
    cdef PyObject *col
    cdef str marked = text.replace(" ", "_")
    cdef Py_ssize_t size = len(marked)
    cdef Py_ssize_t i, n
    cdef PyObject *prev
    for o in orders:
        n = o
        for i in range(size - n + 1):
            col = PyDict_GetItem(index, marked[i:i + n])
            if col is NULL:
                continue
            prev = PyDict_GetItem(found, <object>col)
            if prev is NULL:
                PyDict_SetItem(found, <object>col, 1)
            else:
                PyDict_SetItem(found, <object>col, <object>prev + 1)
    cols = sorted(found)
    return cols, [found[c] for c in cols]


def oop_distances(indptr, ids, rank_table, long k):
    cdef const long long[::1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const long long[::1] gid = np.ascontiguousarray(ids, dtype=np.int64)
    cdef const int[:, ::1] ranks = np.ascontiguousarray(rank_table, dtype=np.int32)
    cdef Py_ssize_t n_docs = ptr.shape[0] - 1
    cdef Py_ssize_t n_lang = ranks.shape[0]
    out_arr = np.zeros((n_docs, n_lang), dtype=np.int64)
    cdef long long[:, ::1] out = out_arr
    cdef Py_ssize_t d, lang, pos, start, stop
    cdef long long total, col, r, diff
    for d in range(n_docs):
        start = ptr[d]
        stop = ptr[d + 1]
        for lang in range(n_lang):
            total = 0
            for pos in range(start, stop):
                col = gid[pos]
                r = ranks[lang, col] if col >= 0 else -1
                if r < 0:
                    total += k
                else:
                    diff = (pos - start) - r
                    total += diff if diff >= 0 else -diff
            out[d, lang] = total
    return out_arr


def joint_scores(indptr, indices, data, log_likelihood, log_prior):
    cdef const long long[::1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const long long[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const double[::1] val = np.ascontiguousarray(data, dtype=np.float64)
    cdef const double[:, ::1] ll = np.ascontiguousarray(log_likelihood, dtype=np.float64)
    cdef const double[::1] prior = np.ascontiguousarray(log_prior, dtype=np.float64)
    cdef Py_ssize_t n_docs = ptr.shape[0] - 1
    cdef Py_ssize_t n_class = ll.shape[0]
    out_arr = np.empty((n_docs, n_class), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t d, c, pos
    cdef double acc
    with nogil:
        for d in range(n_docs):
            for c in range(n_class):
                acc = 0.0
                for pos in range(ptr[d], ptr[d + 1]):
                    acc = acc + val[pos] * ll[c, idx[pos]]
                out[d, c] = acc + prior[c]
    return out_arr


def class_sums(indptr, indices, data, labels, Py_ssize_t n_class, Py_ssize_t n_features):
    cdef const long long[::1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const long long[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const double[::1] val = np.ascontiguousarray(data, dtype=np.float64)
    cdef const long long[::1] lab = np.ascontiguousarray(labels, dtype=np.int64)
    out_arr = np.zeros((n_class, n_features), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t d, pos, c
    with nogil:
        for d in range(ptr.shape[0] - 1):
            c = lab[d]
            for pos in range(ptr[d], ptr[d + 1]):
                out[c, idx[pos]] += val[pos]
    return out_arr
