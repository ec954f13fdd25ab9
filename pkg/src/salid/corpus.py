"""Corpus ingestion, cleaning, length filtering and balanced splits."""

from __future__ import annotations

import functools
import logging
import random
import re
import string
import sys
import unicodedata
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DataError, InsufficientData

logger = logging.getLogger(__name__)

MIN_TOKENS = 3
MAX_TOKENS = 50

# Official-language codes used by the Vuk'uzenzele and NCHLT releases.
SA_LANGUAGES = ("af", "eng", "nbl", "nso", "sot", "ssw", "tsn", "tso", "ven", "xho", "zul")

_URL = re.compile(r"(?:https?://|www\.)\S*", re.IGNORECASE)
_SPACE = re.compile(r"\s+")


@functools.lru_cache(maxsize=1)
def _deletion_table() -> dict[int, None]:
    """Translate table deleting decimal digits and punctuation."""
    table = {ord(ch): None for ch in string.punctuation}
    for cp in range(sys.maxunicode + 1):
        cat = unicodedata.category(chr(cp))
        if cat == "Nd" or cat[0] == "P":
            table[cp] = None
    return table


@functools.lru_cache(maxsize=4096)
def _fold_char(ch: str) -> str:
    folded = ch.casefold()
    if len(folded) == 1:
        return folded
    lowered = ch.lower()
    return lowered if len(lowered) == 1 else ch


def simple_fold(text: str) -> str:
    """Per-character case folding that never changes the string length."""
    folded = text.casefold()
    if len(folded) == len(text):
        return folded
    return "".join(_fold_char(ch) for ch in text)


def preprocess(raw: str) -> str:
    """Strip URLs, digits and punctuation, lowercase, and normalise spacing.

    Letters outside ASCII (``š``, ``ṱ``) are kept.

    >>> preprocess("Visit https://www.gov.za now! 2024")
    'visit now'
    """
    text = _URL.sub(" ", raw)
    text = text.translate(_deletion_table())
    text = simple_fold(text)
    return _SPACE.sub(" ", text).strip()


def token_count(text: str) -> int:
    return len(text.split())


@dataclass(frozen=True)
class RawDocument:
    language: str
    lines: tuple[str, ...]
    source: str = ""

    def __post_init__(self):
        if not self.language or any(ch.isspace() for ch in self.language):
            raise ValueError(f"invalid language label {self.language!r}")
        object.__setattr__(self, "lines", tuple(self.lines))


@dataclass(frozen=True)
class LabeledSentence:
    text: str
    language: str
    token_count: int

    @classmethod
    def from_text(cls, text: str, language: str) -> "LabeledSentence":
        return cls(text, language, token_count(text))


@dataclass(frozen=True)
class SplitSpec:
    train_per_language: int
    test_per_language: int
    seed: int = 0

    def __post_init__(self):
        if self.train_per_language < 1 or self.test_per_language < 1:
            raise ValueError("train and test sizes must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    @property
    def required(self) -> int:
        return self.train_per_language + self.test_per_language


@dataclass(frozen=True)
class Dataset:
    train: tuple[LabeledSentence, ...]
    test: tuple[LabeledSentence, ...]
    languages: tuple[str, ...]
    name: str = "dataset"
    split: SplitSpec | None = field(default=None, compare=False)

    def sentences(self) -> Iterator[LabeledSentence]:
        yield from self.train
        yield from self.test


def clean_lines(lines: Iterable[str]) -> list[str]:
    """Preprocess lines and keep those with 3 to 50 tokens."""
    kept = []
    for line in lines:
        text = preprocess(line)
        if MIN_TOKENS <= token_count(text) <= MAX_TOKENS:
            kept.append(text)
    return kept


def _language_rng(seed: int, language: str) -> random.Random:
    # str seeds hash through sha512, so this is stable across processes
    return random.Random(f"{seed}:{language}")


def sentence_pool(docs: Iterable[RawDocument]) -> dict[str, list[str]]:
    """Deduplicated, sorted usable sentences per language."""
    pools: dict[str, set[str]] = defaultdict(set)
    for doc in docs:
        pools[doc.language].update(clean_lines(doc.lines))
    return {lang: sorted(pool) for lang, pool in sorted(pools.items())}


def build_dataset(
    docs: Iterable[RawDocument], spec: SplitSpec, name: str = "dataset"
) -> Dataset:
    """Balanced train/test split, identical for identical inputs and seed.

    Per language the usable sentences are deduplicated, sorted, shuffled with
    a generator seeded from ``(spec.seed, language)``; the first
    ``train_per_language`` go to train and the next ``test_per_language``
    to test.
    """
    pools = sentence_pool(docs)
    if not pools:
        raise DataError("no documents supplied")
    train: list[LabeledSentence] = []
    test: list[LabeledSentence] = []
    for lang, pool in pools.items():
        if len(pool) < spec.required:
            raise InsufficientData(lang, len(pool), spec.required)
        _language_rng(spec.seed, lang).shuffle(pool)
        train.extend(LabeledSentence.from_text(t, lang) for t in pool[: spec.train_per_language])
        test.extend(
            LabeledSentence.from_text(t, lang)
            for t in pool[spec.train_per_language : spec.required]
        )
        logger.debug("%s: %d usable sentences", lang, len(pool))
    return Dataset(tuple(train), tuple(test), tuple(pools), name=name, split=spec)


def length_histogram(
    data: Dataset | Iterable[LabeledSentence],
) -> dict[str, dict[int, int]]:
    sentences = data.sentences() if isinstance(data, Dataset) else data
    hist: dict[str, Counter] = defaultdict(Counter)
    for s in sentences:
        hist[s.language][s.token_count] += 1
    return {lang: dict(sorted(c.items())) for lang, c in sorted(hist.items())}


def vocabulary_stats(sentences: Iterable[LabeledSentence]) -> dict[str, int]:
    """Sentence, token and unique-token counts (whitespace tokens)."""
    n_sent = n_tok = 0
    unique: set[str] = set()
    for s in sentences:
        tokens = s.text.split()
        n_sent += 1
        n_tok += len(tokens)
        unique.update(tokens)
    return {"sentences": n_sent, "tokens": n_tok, "unique_tokens": len(unique)}


# -- file formats -----------------------------------------------------------


def read_corpus_dir(
    root: str | Path, languages: Iterable[str] | None = None, source: str = ""
) -> list[RawDocument]:
    """Read ``<root>/<lang>/*.txt`` (UTF-8, one sentence per line)."""
    root = Path(root)
    if not root.is_dir():
        raise DataError(f"corpus root {root} is not a directory")
    if languages is None:
        lang_dirs = sorted(p for p in root.iterdir() if p.is_dir())
    else:
        lang_dirs = []
        for lang in languages:
            path = root / lang
            if not path.is_dir():
                raise DataError(f"missing directory for language {lang!r}: {path}")
            lang_dirs.append(path)
    docs = []
    for lang_dir in lang_dirs:
        for path in sorted(lang_dir.glob("*.txt")):
            lines = path.read_text(encoding="utf-8").splitlines()
            docs.append(RawDocument(lang_dir.name, tuple(lines), source or root.name))
    return docs


def _iter_tsv(path: Path) -> Iterator[tuple[int, str, str]]:
    with open(path, encoding="utf-8-sig", newline="") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            lang, sep, text = line.partition("\t")
            if not sep or not lang:
                raise DataError(f"{path}:{lineno}: expected 'lang<TAB>text'")
            yield lineno, lang, text


def read_corpus_tsv(
    path: str | Path, languages: Iterable[str] | None = None, source: str = ""
) -> list[RawDocument]:
    """Read a raw ``lang<TAB>text`` file, one document per language."""
    path = Path(path)
    lines: dict[str, list[str]] = defaultdict(list)
    for _, lang, text in _iter_tsv(path):
        lines[lang].append(text)
    if languages is not None:
        missing = [lang for lang in languages if lang not in lines]
        if missing:
            raise DataError(f"languages missing from {path}: {', '.join(missing)}")
        lines = {lang: lines[lang] for lang in languages}
    return [
        RawDocument(lang, tuple(ls), source or path.stem) for lang, ls in sorted(lines.items())
    ]


def read_corpus(
    root: str | Path, languages: Iterable[str] | None = None, source: str = ""
) -> list[RawDocument]:
    path = Path(root)
    if path.is_file():
        return read_corpus_tsv(path, languages, source)
    return read_corpus_dir(path, languages, source)


def write_sentences(path: str | Path, sentences: Iterable[LabeledSentence]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for s in sentences:
            fh.write(f"{s.language}\t{s.text}\n")


def read_sentences(path: str | Path) -> list[LabeledSentence]:
    """Load a prepared ``lang<TAB>text`` split written by ``write_sentences``."""
    return [LabeledSentence.from_text(text, lang) for _, lang, text in _iter_tsv(Path(path))]


def save_dataset(dataset: Dataset, out_dir: str | Path) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    train_path, test_path = out_dir / "train.tsv", out_dir / "test.tsv"
    write_sentences(train_path, dataset.train)
    write_sentences(test_path, dataset.test)
    return train_path, test_path


def load_dataset(out_dir: str | Path, name: str = "dataset") -> Dataset:
    out_dir = Path(out_dir)
    train = tuple(read_sentences(out_dir / "train.tsv"))
    test = tuple(read_sentences(out_dir / "test.tsv"))
    languages = tuple(sorted({s.language for s in train} | {s.language for s in test}))
    return Dataset(train, test, languages, name=name)
