"""Model-family configuration shared by evaluation and the CLI."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Protocol, Union

from . import jsonio
from .corpus import LabeledSentence
from .errors import ModelSchemaError
from .nb import CHAR_TFIDF, NaiveBayesModel, VectorizerSpec, nb_train
from .profile import DEFAULT_K, gram_orders
from .rank import RankingModel, ScoreVector, train_ranking_model

FAMILIES = ("ngram-rank", "nb")

Model = Union[RankingModel, NaiveBayesModel]


class Classifier(Protocol):
    def classify_many(self, texts: Iterable[str]) -> list[ScoreVector]: ...

    def predict(self, texts: Iterable[str]) -> list[str]: ...


@dataclass(frozen=True)
class ModelConfig:
    family: str = "ngram-rank"
    orders: tuple[int, ...] = (4,)
    k: int = DEFAULT_K
    alpha: float = 1.0
    vectorizer: str = CHAR_TFIDF

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown model family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "ngram-rank" or self.vectorizer == CHAR_TFIDF:
            object.__setattr__(self, "orders", gram_orders(self.orders))
        if self.k < 1:
            raise ValueError("k must be positive")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")

    @property
    def label(self) -> str:
        if self.family == "ngram-rank":
            return f"ngram-rank{'+'.join(map(str, self.orders))}-k{self.k}"
        if self.vectorizer == CHAR_TFIDF:
            return f"nb-char{'+'.join(map(str, self.orders))}-a{self.alpha:g}"
        return f"nb-word-a{self.alpha:g}"


def train_model(config: ModelConfig, train: Iterable[LabeledSentence]) -> Model:
    if config.family == "ngram-rank":
        return train_ranking_model(train, config.orders, config.k)
    spec = VectorizerSpec(config.vectorizer, config.orders)
    return nb_train(train, spec, config.alpha)


def model_from_dict(obj: Mapping) -> Model:
    if not isinstance(obj, Mapping):
        raise ModelSchemaError("model file must hold a JSON object")
    family = obj.get("family")
    if family == "ngram-rank":
        return RankingModel.from_dict(obj)
    if family == "nb":
        return NaiveBayesModel.from_dict(obj)
    raise ModelSchemaError(f"unknown or missing model family {family!r}")


def load_model(path: str | Path) -> Model:
    try:
        obj = jsonio.loads(Path(path).read_text(encoding="utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise ModelSchemaError(f"{path}: not a valid JSON model ({exc})") from exc
    return model_from_dict(obj)
