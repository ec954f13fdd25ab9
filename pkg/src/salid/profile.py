"""Character n-gram extraction and per-language log-frequency profiles."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from . import jsonio, kernels
from .corpus import LabeledSentence
from .errors import EmptyCorpus, ModelSchemaError

VALID_ORDERS = frozenset({2, 3, 4})
DEFAULT_K = 50


def gram_orders(orders: Iterable[int]) -> tuple[int, ...]:
    """Validate and canonicalise a set of gram lengths."""
    out = tuple(sorted(set(int(n) for n in orders)))
    if not out:
        raise ValueError("at least one gram order is required")
    bad = [n for n in out if n not in VALID_ORDERS]
    if bad:
        raise ValueError(f"unsupported gram orders {bad}; choose from 2, 3, 4")
    return out


@dataclass(frozen=True)
class GramCounts:
    counts: Mapping[str, int]
    total: int


def extract_grams(text: str, orders: Iterable[int]) -> GramCounts:
    """Count the character n-grams of one preprocessed sentence.

    Spaces become ``_`` and windows never cross the sentence ends, so
    ``"ke ya"`` yields ``ke, e_, _y, ya`` for bigrams.
    """
    counts = kernels.count_grams(text, gram_orders(orders))
    return GramCounts(counts, sum(counts.values()))


def rank_key(item: tuple[str, float]) -> tuple[float, str]:
    # frequency descending, then gram ascending
    return (-item[1], item[0])


def aggregate_counts(texts: Iterable[str], orders: Iterable[int]) -> Counter:
    orders = gram_orders(orders)
    total: Counter = Counter()
    for text in texts:
        total.update(kernels.count_grams(text, orders))
    return total


def log_distribution(counts: Mapping[str, int]) -> dict[str, float]:
    """``ln(count / total)`` for every gram, before any truncation."""
    total = sum(counts.values())
    if total <= 0:
        raise EmptyCorpus("no n-grams to build a distribution from")
    return {g: math.log(c / total) for g, c in counts.items()}


def ranked_grams(counts: Mapping[str, int], k: int) -> list[str]:
    """Top ``k`` grams by count, ties in lexicographic order."""
    return [g for g, _ in sorted(counts.items(), key=rank_key)[:k]]


@dataclass(frozen=True)
class NgramProfile:
    language: str
    orders: tuple[int, ...]
    entries: tuple[tuple[str, float], ...]
    k: int = DEFAULT_K
    _ranks: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "orders", gram_orders(self.orders))
        object.__setattr__(self, "entries", tuple((g, float(lf)) for g, lf in self.entries))
        if self.k < 1:
            raise ValueError("k must be positive")
        if len(self.entries) > self.k:
            raise ValueError(f"{len(self.entries)} entries exceed k={self.k}")
        if any(lf > 0 for _, lf in self.entries):
            raise ValueError("log-frequencies must be <= 0")
        if list(self.entries) != sorted(self.entries, key=rank_key):
            raise ValueError("entries are not in canonical rank order")
        object.__setattr__(self, "_ranks", {g: i for i, (g, _) in enumerate(self.entries)})

    @property
    def grams(self) -> list[str]:
        return [g for g, _ in self.entries]

    def rank(self, gram: str) -> int | None:
        """0-based rank of ``gram``, or None when it is not in the profile."""
        return self._ranks.get(gram)

    def to_dict(self) -> dict:
        return {
            "language": self.language,
            "orders": list(self.orders),
            "k": self.k,
            "entries": [[g, lf] for g, lf in self.entries],
        }

    @classmethod
    def from_dict(cls, obj: Mapping) -> "NgramProfile":
        try:
            return cls(
                language=str(obj["language"]),
                orders=tuple(obj["orders"]),
                k=int(obj["k"]),
                entries=tuple((str(g), float(lf)) for g, lf in obj["entries"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelSchemaError(f"invalid profile: {exc}") from exc

    def dumps(self) -> str:
        return jsonio.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "NgramProfile":
        try:
            obj = jsonio.loads(text)
        except ValueError as exc:
            raise ModelSchemaError(f"profile is not valid JSON: {exc}") from exc
        return cls.from_dict(obj)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "NgramProfile":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


def profile_rank(profile: NgramProfile, gram: str) -> int | None:
    return profile.rank(gram)


def profile_from_counts(
    language: str, counts: Mapping[str, int], orders: Iterable[int], k: int = DEFAULT_K
) -> NgramProfile:
    dist = log_distribution(counts)
    entries = sorted(dist.items(), key=rank_key)[:k]
    return NgramProfile(language, gram_orders(orders), tuple(entries), k)


def build_profile(
    sentences: Iterable[LabeledSentence], orders: Iterable[int], k: int = DEFAULT_K
) -> NgramProfile:
    """Top-``k`` log relative frequency profile of one language's sentences.

    Counts are pooled over sentences; grams never span two sentences.
    """
    sentences = list(sentences)
    languages = {s.language for s in sentences}
    if len(languages) > 1:
        raise ValueError(f"sentences span several languages: {sorted(languages)}")
    if not sentences:
        raise EmptyCorpus("no sentences supplied")
    counts = aggregate_counts((s.text for s in sentences), orders)
    if not counts:
        raise EmptyCorpus(f"no n-grams extracted for {languages.pop()!r}")
    return profile_from_counts(languages.pop(), counts, orders, k)
