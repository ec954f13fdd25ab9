"""Rank-order (out-of-place) classification against n-gram profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import jsonio, kernels
from .corpus import LabeledSentence
from .errors import EmptyCorpus, EmptyDocument, ModelSchemaError, SingleClass
from .profile import DEFAULT_K, NgramProfile, build_profile, gram_orders, ranked_grams

FAMILY = "ngram-rank"


@dataclass(frozen=True)
class ScoreVector:
    scores: dict[str, float]
    predicted: str

    @property
    def confidence(self) -> float:
        return self.scores[self.predicted]


@dataclass(frozen=True)
class RankingModel:
    profiles: Mapping[str, NgramProfile]
    orders: tuple[int, ...]
    k: int = DEFAULT_K
    _columns: dict[str, int] = field(init=False, repr=False, compare=False)
    _rank_table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        orders = gram_orders(self.orders)
        object.__setattr__(self, "orders", orders)
        profiles = dict(sorted(self.profiles.items()))
        if len(profiles) < 2:
            raise ValueError("a ranking model needs at least two languages")
        for lang, p in profiles.items():
            if p.language != lang:
                raise ValueError(f"profile for {p.language!r} filed under {lang!r}")
            if p.orders != orders or p.k != self.k:
                raise ValueError(f"profile {lang!r} disagrees with model orders/k")
        object.__setattr__(self, "profiles", profiles)
        # one column per gram known to any profile; -1 marks "absent"
        columns: dict[str, int] = {}
        for p in profiles.values():
            for g in p.grams:
                columns.setdefault(g, len(columns))
        table = np.full((len(profiles), max(len(columns), 1)), -1, dtype=np.int32)
        for row, p in enumerate(profiles.values()):
            for rank, g in enumerate(p.grams):
                table[row, columns[g]] = rank
        object.__setattr__(self, "_columns", columns)
        object.__setattr__(self, "_rank_table", table)

    @property
    def languages(self) -> list[str]:
        return list(self.profiles)

    # -- classification ---------------------------------------------------

    def _encode(self, docs: Sequence[Sequence[str]]) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(len(docs) + 1, dtype=np.int64)
        ids = []
        for i, doc in enumerate(docs):
            ids.extend(self._columns.get(g, -1) for g in doc)
            indptr[i + 1] = len(ids)
        return indptr, np.asarray(ids, dtype=np.int64)

    def distances(self, docs: Sequence[Sequence[str]]) -> np.ndarray:
        """Out-of-place distances, shape ``(len(docs), len(languages))``."""
        indptr, ids = self._encode(docs)
        return kernels.oop_distances(indptr, ids, self._rank_table, self.k)

    def classify(self, text: str) -> ScoreVector:
        return self.classify_many([text])[0]

    def classify_many(self, texts: Iterable[str]) -> list[ScoreVector]:
        docs = [document_profile(t, self) for t in texts]
        if not docs:
            return []
        dist = self.distances(docs)
        sim = 1.0 / (1.0 + dist.astype(np.float64))
        scores = sim / sim.sum(axis=1, keepdims=True)
        langs = self.languages
        out = []
        for row in scores:
            # ties between languages resolve to the first in sorted order
            best = int(np.argmax(row))
            out.append(ScoreVector(dict(zip(langs, row.tolist())), langs[best]))
        return out

    def predict(self, texts: Iterable[str]) -> list[str]:
        return [sv.predicted for sv in self.classify_many(texts)]

    # -- persistence ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "family": FAMILY,
            "orders": list(self.orders),
            "k": self.k,
            "profiles": {lang: p.to_dict() for lang, p in self.profiles.items()},
        }

    @classmethod
    def from_dict(cls, obj: Mapping) -> "RankingModel":
        try:
            if obj.get("family", FAMILY) != FAMILY:
                raise ModelSchemaError(f"not a {FAMILY} model: {obj.get('family')!r}")
            profiles = {
                lang: NgramProfile.from_dict(p) for lang, p in obj["profiles"].items()
            }
            return cls(profiles, tuple(obj["orders"]), int(obj["k"]))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ModelSchemaError(f"invalid ranking model: {exc}") from exc

    def dumps(self) -> str:
        return jsonio.dumps(self.to_dict())

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")


def train_ranking_model(
    sentences: Iterable[LabeledSentence], orders: Iterable[int], k: int = DEFAULT_K
) -> RankingModel:
    by_lang: dict[str, list[LabeledSentence]] = {}
    for s in sentences:
        by_lang.setdefault(s.language, []).append(s)
    if not by_lang:
        raise EmptyCorpus("no training sentences")
    if len(by_lang) < 2:
        raise SingleClass(f"need at least two languages, got {sorted(by_lang)}")
    orders = gram_orders(orders)
    profiles = {lang: build_profile(ss, orders, k) for lang, ss in sorted(by_lang.items())}
    return RankingModel(profiles, orders, k)


def document_profile(text: str, model: RankingModel) -> list[str]:
    """The document's grams in rank order, at most ``model.k`` of them."""
    counts = kernels.count_grams(text, model.orders)
    if not counts:
        raise EmptyDocument(f"no {model.orders}-grams in {text!r}")
    return ranked_grams(counts, model.k)


def out_of_place_distance(doc: Sequence[str], profile: NgramProfile) -> int:
    """Sum of rank displacements; a gram missing from the profile costs ``k``."""
    total = 0
    for r_doc, gram in enumerate(doc):
        r_prof = profile.rank(gram)
        total += profile.k if r_prof is None else abs(r_doc - r_prof)
    return total


def classify(text: str, model: RankingModel) -> ScoreVector:
    return model.classify(text)


@dataclass(frozen=True)
class ScoreMatrix:
    """Mean score per (true language, scored language) cell.

    Rows with no sentences after filtering are NaN and listed in
    ``empty_rows``.
    """

    true_languages: list[str]
    model_languages: list[str]
    values: np.ndarray
    counts: list[int]
    empty_rows: list[str]

    def to_csv(self) -> str:
        lines = ["true," + ",".join(self.model_languages)]
        for lang, row in zip(self.true_languages, self.values):
            cells = ["nan" if math.isnan(v) else f"{v:.6f}" for v in row]
            lines.append(f"{lang}," + ",".join(cells))
        return "\n".join(lines) + "\n"


def score_matrix(
    test: Iterable[LabeledSentence],
    model: RankingModel,
    keep: Callable[[LabeledSentence, ScoreVector], bool] | None = None,
    scored: Sequence[tuple[LabeledSentence, ScoreVector]] | None = None,
) -> ScoreMatrix:
    """Average score vectors per true language.

    ``keep`` selects which (sentence, scores) pairs contribute, e.g.
    ``lambda s, sv: sv.predicted == s.language`` for correctly classified
    sentences only. Pass precomputed ``scored`` pairs to avoid
    reclassifying when building several variants.
    """
    test = list(test)
    if scored is None:
        scored = list(zip(test, model.classify_many(s.text for s in test)))
    true_langs = sorted({s.language for s in test})
    missing = set(true_langs) - set(model.languages)
    if missing:
        raise ValueError(f"model has no profile for {sorted(missing)}")
    cols = model.languages
    sums = np.zeros((len(true_langs), len(cols)))
    counts = np.zeros(len(true_langs), dtype=np.int64)
    row_of = {lang: i for i, lang in enumerate(true_langs)}
    for sent, sv in scored:
        if keep is not None and not keep(sent, sv):
            continue
        i = row_of[sent.language]
        sums[i] += [sv.scores[c] for c in cols]
        counts[i] += 1
    with np.errstate(invalid="ignore", divide="ignore"):
        values = sums / counts[:, None]
    values[counts == 0] = np.nan
    empty = [lang for lang, n in zip(true_langs, counts) if n == 0]
    return ScoreMatrix(true_langs, cols, values, counts.tolist(), empty)
