"""Featurisation (char TF-IDF, word counts) and multinomial Naive Bayes."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import jsonio, kernels
from .corpus import LabeledSentence
from .errors import EmptyCorpus, ModelSchemaError, NonPositiveAlpha, SingleClass
from .profile import gram_orders
from .rank import ScoreVector

FAMILY = "nb"
CHAR_TFIDF = "char-tfidf"
WORD_COUNT = "word-count"
MODES = (CHAR_TFIDF, WORD_COUNT)


@dataclass(frozen=True)
class VectorizerSpec:
    mode: str = CHAR_TFIDF
    orders: tuple[int, ...] = (2, 3, 4)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown vectorizer mode {self.mode!r}; expected one of {MODES}")
        if self.mode == CHAR_TFIDF:
            object.__setattr__(self, "orders", gram_orders(self.orders))
        else:
            object.__setattr__(self, "orders", ())

    def to_dict(self) -> dict:
        return {"mode": self.mode, "orders": list(self.orders)}

    @classmethod
    def from_dict(cls, obj: Mapping) -> "VectorizerSpec":
        return cls(str(obj["mode"]), tuple(obj.get("orders", ())))


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        terms = tuple(self.terms)
        if list(terms) != sorted(set(terms)):
            raise ValueError("vocabulary terms must be unique and sorted")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "index", {t: i for i, t in enumerate(terms)})

    def __len__(self) -> int:
        return len(self.terms)


def _term_counts(text: str, spec: VectorizerSpec) -> Mapping[str, int]:
    if spec.mode == WORD_COUNT:
        return Counter(text.split())
    return kernels.count_grams(text, spec.orders)


def fit_vocabulary(texts: Iterable[str], spec: VectorizerSpec) -> Vocabulary:
    terms: set[str] = set()
    for text in texts:
        terms.update(_term_counts(text, spec))
    if not terms:
        raise EmptyCorpus("no features found in training texts")
    return Vocabulary(tuple(sorted(terms)))


def idf(document_frequencies: np.ndarray | Sequence[int], n_docs: int) -> np.ndarray:
    """Smoothed inverse document frequency ``ln((1 + n) / (1 + df)) + 1``."""
    df = np.asarray(document_frequencies, dtype=np.float64)
    if n_docs < 1 or np.any(df < 1):
        raise ValueError("idf needs n_docs >= 1 and every df >= 1")
    return np.log((1.0 + n_docs) / (1.0 + df)) + 1.0


@dataclass
class SparseRows:
    """CSR-style batch of feature vectors."""

    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    n_features: int

    def __len__(self) -> int:
        return len(self.indptr) - 1

    def row(self, i: int) -> dict[int, float]:
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return dict(zip(self.indices[lo:hi].tolist(), self.data[lo:hi].tolist()))


def count_rows(texts: Iterable[str], vocab: Vocabulary, spec: VectorizerSpec) -> SparseRows:
    """Raw in-vocabulary term counts; column ids ascending within a row."""
    indptr = [0]
    indices: list[int] = []
    data: list[int] = []
    index = vocab.index
    for text in texts:
        if spec.mode == CHAR_TFIDF:
            cols, counts = kernels.encode_counts(text, spec.orders, index)
        else:
            found = {index[t]: c for t, c in Counter(text.split()).items() if t in index}
            cols = sorted(found)
            counts = [found[c] for c in cols]
        indices.extend(cols)
        data.extend(counts)
        indptr.append(len(indices))
    return SparseRows(
        np.asarray(indptr, dtype=np.int64),
        np.asarray(indices, dtype=np.int64),
        np.asarray(data, dtype=np.float64),
        len(vocab),
    )


def _tfidf_inplace(rows: SparseRows, idf_table: np.ndarray) -> None:
    rows.data *= idf_table[rows.indices]
    owner = np.repeat(np.arange(len(rows)), np.diff(rows.indptr))
    norms = np.sqrt(np.bincount(owner, weights=rows.data**2, minlength=len(rows)))
    nz = norms[owner] > 0
    rows.data[nz] /= norms[owner][nz]


def transform(
    texts: Iterable[str], vocab: Vocabulary, spec: VectorizerSpec, idf_table: np.ndarray | None
) -> SparseRows:
    rows = count_rows(texts, vocab, spec)
    if spec.mode == CHAR_TFIDF:
        if idf_table is None:
            raise ValueError("char-tfidf vectorisation needs an idf table")
        _tfidf_inplace(rows, np.asarray(idf_table, dtype=np.float64))
    return rows


def vectorize(
    text: str, vocab: Vocabulary, spec: VectorizerSpec, idf_table: np.ndarray | None = None
) -> dict[int, float]:
    """Sparse feature vector of one text (column id -> value, no zeros)."""
    return transform([text], vocab, spec, idf_table).row(0)


@dataclass(frozen=True)
class NaiveBayesModel:
    classes: tuple[str, ...]
    log_prior: np.ndarray
    log_likelihood: np.ndarray
    alpha: float
    vocab: Vocabulary
    vectorizer: VectorizerSpec
    idf: np.ndarray | None = None

    def __post_init__(self):
        if list(self.classes) != sorted(set(self.classes)):
            raise ValueError("classes must be unique and sorted")
        if self.log_likelihood.shape != (len(self.classes), len(self.vocab)):
            raise ValueError("log_likelihood shape does not match classes x vocabulary")
        if self.log_prior.shape != (len(self.classes),):
            raise ValueError("log_prior shape does not match classes")
        if (self.vectorizer.mode == CHAR_TFIDF) != (self.idf is not None):
            raise ValueError("idf table is required for char-tfidf and only for it")
        if self.idf is not None and self.idf.shape != (len(self.vocab),):
            raise ValueError("idf length does not match vocabulary")

    def check_normalised(self, tol: float = 1e-9) -> None:
        """Raise unless priors and every class likelihood sum to one."""
        prior_sum = float(np.exp(self.log_prior).sum())
        if abs(prior_sum - 1.0) > tol:
            raise ModelSchemaError(f"class priors sum to {prior_sum!r}")
        sums = np.exp(self.log_likelihood).sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
        if bad.size:
            raise ModelSchemaError(
                f"likelihoods of {self.classes[bad[0]]!r} sum to {sums[bad[0]]!r}"
            )

    def features(self, texts: Iterable[str]) -> SparseRows:
        return transform(texts, self.vocab, self.vectorizer, self.idf)

    def joint_log_scores(self, texts: Iterable[str]) -> np.ndarray:
        rows = self.features(texts)
        return kernels.joint_scores(
            rows.indptr, rows.indices, rows.data, self.log_likelihood, self.log_prior
        )

    def classify_many(self, texts: Iterable[str]) -> list[ScoreVector]:
        joint = self.joint_log_scores(texts)
        out = []
        for row in joint:
            post = np.exp(row - row.max())
            post /= post.sum()
            # np.argmax takes the first maximum, i.e. the smallest class label
            out.append(ScoreVector(dict(zip(self.classes, post.tolist())), self.classes[int(np.argmax(row))]))
        return out

    def classify(self, text: str) -> ScoreVector:
        return self.classify_many([text])[0]

    def predict(self, texts: Iterable[str]) -> list[str]:
        joint = self.joint_log_scores(texts)
        return [self.classes[i] for i in np.argmax(joint, axis=1)] if len(joint) else []

    # -- persistence ------------------------------------------------------

    def to_dict(self) -> dict:
        obj = {
            "family": FAMILY,
            "vectorizer": self.vectorizer.to_dict(),
            "alpha": float(self.alpha),
            "classes": list(self.classes),
            "log_prior": self.log_prior,
            "vocab": list(self.vocab.terms),
            "log_likelihood": self.log_likelihood,
        }
        if self.idf is not None:
            obj["idf"] = self.idf
        return obj

    @classmethod
    def from_dict(cls, obj: Mapping) -> "NaiveBayesModel":
        try:
            if obj.get("family", FAMILY) != FAMILY:
                raise ModelSchemaError(f"not a {FAMILY} model: {obj.get('family')!r}")
            idf_table = obj.get("idf")
            model = cls(
                classes=tuple(obj["classes"]),
                log_prior=np.asarray(obj["log_prior"], dtype=np.float64),
                log_likelihood=np.asarray(obj["log_likelihood"], dtype=np.float64).reshape(
                    len(obj["classes"]), len(obj["vocab"])
                ),
                alpha=float(obj["alpha"]),
                vocab=Vocabulary(tuple(obj["vocab"])),
                vectorizer=VectorizerSpec.from_dict(obj["vectorizer"]),
                idf=None if idf_table is None else np.asarray(idf_table, dtype=np.float64),
            )
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ModelSchemaError(f"invalid naive bayes model: {exc}") from exc
        model.check_normalised()
        return model

    def dumps(self) -> str:
        return jsonio.dumps(self.to_dict())

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")


def nb_train(
    train: Iterable[LabeledSentence], spec: VectorizerSpec, alpha: float = 1.0
) -> NaiveBayesModel:
    """Fit class priors and Lidstone-smoothed multinomial likelihoods.

    With TF-IDF features the class totals are sums of real-valued weights;
    the smoothing formula is applied to them unchanged.
    """
    if not alpha > 0 or not math.isfinite(alpha):
        raise NonPositiveAlpha(f"alpha must be positive, got {alpha!r}")
    train = list(train)
    if not train:
        raise EmptyCorpus("no training sentences")
    classes = tuple(sorted({s.language for s in train}))
    if len(classes) < 2:
        raise SingleClass(f"need at least two classes, got {list(classes)}")
    texts = [s.text for s in train]
    vocab = fit_vocabulary(texts, spec)
    rows = count_rows(texts, vocab, spec)
    idf_table = None
    if spec.mode == CHAR_TFIDF:
        df = np.bincount(rows.indices, minlength=len(vocab))
        idf_table = idf(df, len(train))
        _tfidf_inplace(rows, idf_table)
    class_of = {c: i for i, c in enumerate(classes)}
    labels = np.asarray([class_of[s.language] for s in train], dtype=np.int64)
    totals = kernels.class_sums(
        rows.indptr, rows.indices, rows.data, labels, len(classes), len(vocab)
    )
    smoothed = totals + alpha
    log_likelihood = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
    n_c = np.bincount(labels, minlength=len(classes)).astype(np.float64)
    log_prior = np.log(n_c / n_c.sum())
    return NaiveBayesModel(
        classes, log_prior, log_likelihood, float(alpha), vocab, spec, idf_table
    )


def nb_predict(text: str, model: NaiveBayesModel) -> ScoreVector:
    return model.classify(text)


def top_features(model: NaiveBayesModel, per_class: int) -> dict[str, list[tuple[str, float]]]:
    """Highest-likelihood terms per class; ties go to the smaller term."""
    if per_class < 1:
        raise ValueError("per_class must be >= 1")
    cols = np.arange(len(model.vocab))
    out = {}
    for c, row in zip(model.classes, model.log_likelihood):
        order = np.lexsort((cols, -row))[:per_class]
        out[c] = [(model.vocab.terms[i], float(row[i])) for i in order]
    return out
