"""Metrics, confusion matrices, length analysis, ablations and cross-domain runs."""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .corpus import Dataset, LabeledSentence
from .errors import DataError, EmptyPredictions
from .pipeline import Classifier, ModelConfig, train_model

logger = logging.getLogger(__name__)

DEFAULT_FRACTIONS = (0.1, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class ConfusionMatrix:
    languages: tuple[str, ...]
    cells: np.ndarray  # rows: true label, columns: predicted label

    @property
    def total(self) -> int:
        return int(self.cells.sum())

    def to_csv(self) -> str:
        lines = ["true\\predicted," + ",".join(self.languages)]
        for lang, row in zip(self.languages, self.cells):
            lines.append(f"{lang}," + ",".join(str(int(v)) for v in row))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    per_language_accuracy: dict[str, float]
    per_class: dict[str, dict[str, float]]
    confusion: ConfusionMatrix
    model_id: str = ""
    dataset_id: str = ""
    # classes never predicted; their precision is reported as 0
    zero_prediction_classes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "dataset_id": self.dataset_id,
            "n": self.confusion.total,
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "averaging": "macro",
            "per_language_accuracy": self.per_language_accuracy,
            "per_class": self.per_class,
            "zero_prediction_classes": list(self.zero_prediction_classes),
            "confusion": {
                "languages": list(self.confusion.languages),
                "cells": self.confusion.cells.tolist(),
            },
        }


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def confusion_matrix(
    predictions: Iterable[tuple[str, str]], languages: Sequence[str]
) -> ConfusionMatrix:
    langs = tuple(languages)
    pos = {lang: i for i, lang in enumerate(langs)}
    cells = np.zeros((len(langs), len(langs)), dtype=np.int64)
    for true, pred in predictions:
        try:
            cells[pos[true], pos[pred]] += 1
        except KeyError as exc:
            raise ValueError(f"label {exc.args[0]!r} is not among {list(langs)}") from None
    return ConfusionMatrix(langs, cells)


def report_from_confusion(
    confusion: ConfusionMatrix, model_id: str = "", dataset_id: str = ""
) -> EvalReport:
    cells = confusion.cells
    total = int(cells.sum())
    if total == 0:
        raise EmptyPredictions("no predictions to evaluate")
    tp = np.diag(cells).astype(np.float64)
    predicted = cells.sum(axis=0)
    actual = cells.sum(axis=1)
    per_class = {}
    zero_pred = []
    for i, lang in enumerate(confusion.languages):
        if predicted[i] == 0:
            zero_pred.append(lang)
        p = _safe_div(tp[i], predicted[i])
        r = _safe_div(tp[i], actual[i])
        per_class[lang] = {
            "precision": p,
            "recall": r,
            "f1": _safe_div(2 * p * r, p + r),
            "support": int(actual[i]),
        }
    if zero_pred:
        logger.warning("no predictions for %s; precision taken as 0", ", ".join(zero_pred))
    n_cls = len(per_class)
    per_lang_acc = {
        lang: float(tp[i] / actual[i])
        for i, lang in enumerate(confusion.languages)
        if actual[i] > 0
    }
    return EvalReport(
        accuracy=float(tp.sum() / total),
        precision=sum(c["precision"] for c in per_class.values()) / n_cls,
        recall=sum(c["recall"] for c in per_class.values()) / n_cls,
        f1=sum(c["f1"] for c in per_class.values()) / n_cls,
        per_language_accuracy=per_lang_acc,
        per_class=per_class,
        confusion=confusion,
        model_id=model_id,
        dataset_id=dataset_id,
        zero_prediction_classes=tuple(zero_pred),
    )


def evaluate(
    predictions: Iterable[tuple[str, str]],
    languages: Sequence[str],
    model_id: str = "",
    dataset_id: str = "",
) -> EvalReport:
    """Accuracy plus macro-averaged precision, recall and F1.

    ``predictions`` holds ``(true, predicted)`` pairs. Averages run over all
    of ``languages``, including ones absent from the test labels.
    """
    return report_from_confusion(confusion_matrix(predictions, languages), model_id, dataset_id)


def per_language_accuracy(
    predictions: Iterable[tuple[str, str]], languages: Sequence[str] | None = None
) -> dict[str, float]:
    hits: dict[str, int] = {}
    seen: dict[str, int] = {}
    for true, pred in predictions:
        if languages is not None and true not in languages:
            raise ValueError(f"label {true!r} is not among {list(languages)}")
        seen[true] = seen.get(true, 0) + 1
        hits[true] = hits.get(true, 0) + (true == pred)
    return {lang: hits[lang] / seen[lang] for lang in sorted(seen)}


def evaluate_model(
    model: Classifier,
    test: Sequence[LabeledSentence],
    languages: Sequence[str] | None = None,
    model_id: str = "",
    dataset_id: str = "",
) -> tuple[EvalReport, list[str]]:
    predicted = model.predict([s.text for s in test])
    if languages is None:
        languages = sorted({s.language for s in test} | set(predicted))
    pairs = [(s.language, p) for s, p in zip(test, predicted)]
    return evaluate(pairs, languages, model_id, dataset_id), predicted


# -- sentence length --------------------------------------------------------


def summary_stats(values: Sequence[int]) -> dict[str, float] | None:
    if not values:
        return None
    arr = np.asarray(values, dtype=np.float64)
    q1, median, q3 = np.percentile(arr, [25, 50, 75])
    return {
        "n": int(arr.size),
        "min": float(arr.min()),
        "q1": float(q1),
        "median": float(median),
        "q3": float(q3),
        "max": float(arr.max()),
        "mean": float(arr.mean()),
    }


@dataclass(frozen=True)
class LengthAnalysis:
    correct: list[int]
    incorrect: list[int]

    @property
    def correct_stats(self) -> dict[str, float] | None:
        return summary_stats(self.correct)

    @property
    def incorrect_stats(self) -> dict[str, float] | None:
        return summary_stats(self.incorrect)

    def to_dict(self) -> dict:
        return {"correct": self.correct_stats, "incorrect": self.incorrect_stats}


def length_error_analysis(
    test: Sequence[LabeledSentence], predictions: Sequence[str]
) -> LengthAnalysis:
    """Token counts of correctly and incorrectly classified sentences."""
    if len(test) != len(predictions):
        raise ValueError("test and predictions differ in length")
    correct, incorrect = [], []
    for sent, pred in zip(test, predictions):
        (correct if pred == sent.language else incorrect).append(sent.token_count)
    return LengthAnalysis(correct, incorrect)


# -- data-size ablation -----------------------------------------------------


def subsample_train(
    train: Sequence[LabeledSentence], fraction: float, seed: int
) -> list[LabeledSentence]:
    """Seeded balanced subsample keeping ``floor(fraction * n_lang)`` per language.

    Subsets for increasing fractions are nested, and the original order is
    preserved so fraction 1.0 returns ``train`` unchanged.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction {fraction} outside (0, 1]")
    positions: dict[str, list[int]] = {}
    for i, s in enumerate(train):
        positions.setdefault(s.language, []).append(i)
    keep: list[int] = []
    for lang, idx in sorted(positions.items()):
        n = math.floor(fraction * len(idx) + 1e-9)
        if n < 1:
            raise DataError(f"fraction {fraction} leaves no training sentence for {lang!r}")
        order = list(idx)
        random.Random(f"{seed}:{lang}:subsample").shuffle(order)
        keep.extend(order[:n])
    return [train[i] for i in sorted(keep)]


@dataclass
class AblationCurve:
    # rows of (fraction, train sentences per language, variant label, report)
    points: list[tuple[float, int, str, EvalReport]] = field(default_factory=list)

    def accuracy(self, variant: str | None = None) -> dict[float, float]:
        return {
            frac: rep.accuracy for frac, _, label, rep in self.points if variant in (None, label)
        }

    def to_csv(self) -> str:
        lines = ["fraction,train_per_language,variant,accuracy,precision,recall,f1"]
        for frac, n, label, rep in self.points:
            lines.append(
                f"{frac:g},{n},{label},{rep.accuracy:.6f},{rep.precision:.6f},"
                f"{rep.recall:.6f},{rep.f1:.6f}"
            )
        return "\n".join(lines) + "\n"


def data_size_ablation(
    dataset: Dataset,
    configs: ModelConfig | Sequence[ModelConfig],
    fractions: Iterable[float] = DEFAULT_FRACTIONS,
    seed: int = 0,
) -> AblationCurve:
    """Retrain each model variant on growing training subsets; test set fixed."""
    if isinstance(configs, ModelConfig):
        configs = [configs]
    curve = AblationCurve()
    for frac in sorted(set(float(f) for f in fractions)):
        subset = subsample_train(dataset.train, frac, seed)
        per_lang = len(subset) // max(len({s.language for s in subset}), 1)
        for config in configs:
            model = train_model(config, subset)
            report, _ = evaluate_model(
                model, dataset.test, dataset.languages, config.label, dataset.name
            )
            logger.info("%s @ %g: acc %.4f", config.label, frac, report.accuracy)
            curve.points.append((frac, per_lang, config.label, report))
    return curve


def cross_domain(train_dataset: Dataset, test_dataset: Dataset, config: ModelConfig) -> EvalReport:
    """Train on one corpus's train split, evaluate on another corpus's test split."""
    if set(train_dataset.languages) != set(test_dataset.languages):
        raise DataError(
            "language sets differ: "
            f"{sorted(train_dataset.languages)} vs {sorted(test_dataset.languages)}"
        )
    model = train_model(config, train_dataset.train)
    report, _ = evaluate_model(
        model,
        test_dataset.test,
        sorted(train_dataset.languages),
        model_id=f"{config.label}@{train_dataset.name}",
        dataset_id=test_dataset.name,
    )
    return report
