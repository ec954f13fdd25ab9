"""Command-line interface: prepare, train, predict, evaluate, ablate, crossdomain.

Settings come from a TOML run configuration, overridden by flags::

    corpus_root = "data/vuk"        # <root>/<lang>/*.txt or a lang<TAB>text file
    output_dir = "runs/vuk"
    dataset_id = "vuk"
    seed = 1
    languages = ["af", "eng", ...]  # optional, defaults to every language found

    [split]
    train_per_language = 3395
    test_per_language = 728

    [model]
    family = "ngram-rank"           # or "nb"
    orders = [4]
    k = 50
    alpha = 1.0
    vectorizer = "char-tfidf"       # or "word-count" (nb only)
"""

from __future__ import annotations

import argparse
import datetime as dt
import hashlib
import logging
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import jsonio
from .corpus import (
    Dataset,
    SplitSpec,
    build_dataset,
    length_histogram,
    load_dataset,
    read_corpus,
    read_sentences,
    save_dataset,
    vocabulary_stats,
    preprocess,
)
from .errors import ConfigError, DataError, EmptyDocument, ModelSchemaError
from .evaluation import (
    DEFAULT_FRACTIONS,
    cross_domain,
    data_size_ablation,
    evaluate_model,
    length_error_analysis,
)
from .nb import NaiveBayesModel, top_features
from .pipeline import ModelConfig, load_model, train_model
from .rank import RankingModel, score_matrix

logger = logging.getLogger("salid")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_MODEL = 4


@dataclass(frozen=True)
class RunConfig:
    corpus_root: Path | None = None
    languages: tuple[str, ...] | None = None
    split: SplitSpec | None = None
    model: ModelConfig = field(default_factory=ModelConfig)
    output_dir: Path = Path(".")
    seed: int = 0
    dataset_id: str = "dataset"

    def require_corpus(self) -> Path:
        if self.corpus_root is None:
            raise ConfigError("corpus_root is not set")
        if not self.corpus_root.exists():
            raise ConfigError(f"corpus_root {self.corpus_root} does not exist")
        return self.corpus_root

    def require_split(self) -> SplitSpec:
        if self.split is None:
            raise ConfigError("[split] train_per_language / test_per_language are not set")
        return self.split


def _parse_orders(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.replace("-", ",").split(",") if p.strip())
    except ValueError:
        raise ConfigError(f"invalid --orders {text!r}") from None


def _parse_fractions(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"invalid --fractions {text!r}") from None


def load_config(path: str | Path | None, args: argparse.Namespace | None = None) -> RunConfig:
    """Merge defaults, the TOML file at ``path`` and command-line overrides."""
    raw: dict[str, Any] = {}
    base = Path(".")
    if path is not None:
        path = Path(path)
        try:
            raw = tomllib.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file {path} not found") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        base = path.parent
    try:
        seed = int(raw.get("seed", 0))
        split_raw = raw.get("split")
        model_raw = dict(raw.get("model", {}))
        if args is not None:
            if getattr(args, "seed", None) is not None:
                seed = args.seed
            for key in ("family", "k", "alpha", "vectorizer"):
                value = getattr(args, key, None)
                if value is not None:
                    model_raw[key] = value
            if getattr(args, "orders", None) is not None:
                model_raw["orders"] = _parse_orders(args.orders)
        unknown = set(model_raw) - {"family", "orders", "k", "alpha", "vectorizer"}
        if unknown:
            raise ConfigError(f"unknown [model] keys: {sorted(unknown)}")
        if "orders" in model_raw:
            model_raw["orders"] = tuple(model_raw["orders"])
        model = ModelConfig(**model_raw)
        split = None
        if split_raw is not None:
            split = SplitSpec(
                int(split_raw["train_per_language"]), int(split_raw["test_per_language"]), seed
            )
        corpus_root = raw.get("corpus_root")
        languages = raw.get("languages")
        return RunConfig(
            corpus_root=None if corpus_root is None else (base / corpus_root),
            languages=None if languages is None else tuple(str(x) for x in languages),
            split=split,
            model=model,
            output_dir=base / raw.get("output_dir", "."),
            seed=seed,
            dataset_id=str(raw.get("dataset_id", "dataset")),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def dataset_from_config(config: RunConfig) -> Dataset:
    docs = read_corpus(config.require_corpus(), config.languages, source=config.dataset_id)
    if config.languages is not None:
        found = {d.language for d in docs}
        missing = [lang for lang in config.languages if lang not in found]
        if missing:
            raise DataError(f"no text files for language(s): {', '.join(missing)}")
    return build_dataset(docs, config.require_split(), name=config.dataset_id)


def _write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")
    return path


# -- commands ---------------------------------------------------------------


def cmd_prepare(config: RunConfig) -> Path:
    dataset = dataset_from_config(config)
    train_path, test_path = save_dataset(dataset, config.output_dir)
    split = dataset.split
    counts = {
        lang: {"train": sum(1 for s in dataset.train if s.language == lang),
               "test": sum(1 for s in dataset.test if s.language == lang)}
        for lang in dataset.languages
    }
    manifest = {
        "dataset_id": dataset.name,
        "created": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        "seed": split.seed,
        "train_per_language": split.train_per_language,
        "test_per_language": split.test_per_language,
        "languages": list(dataset.languages),
        "counts": counts,
        "vocabulary": vocabulary_stats(dataset.sentences()),
        "length_histogram": {
            lang: {str(n): c for n, c in hist.items()}
            for lang, hist in length_histogram(dataset).items()
        },
        "files": {
            "train.tsv": _sha256(train_path),
            "test.tsv": _sha256(test_path),
        },
    }
    out = _write(config.output_dir / "manifest.json", jsonio.dumps(manifest))
    print(f"prepared {len(dataset.languages)} languages: "
          f"{split.train_per_language} train / {split.test_per_language} test each -> {config.output_dir}")
    return out


def cmd_train(config: RunConfig, train_path: Path, model_path: Path) -> Path:
    train = read_sentences(train_path)
    model = train_model(config.model, train)
    model.save(model_path)
    if isinstance(model, RankingModel):
        sizes = ", ".join(f"{lang}:{len(p.entries)}" for lang, p in model.profiles.items())
        print(f"trained {config.model.label} on {len(train)} sentences; profile sizes {sizes}")
    else:
        print(f"trained {config.model.label} on {len(train)} sentences; "
              f"{len(model.classes)} classes, vocabulary {len(model.vocab)}")
    print(f"model written to {model_path}")
    return model_path


def cmd_predict(model_path: Path, texts: Sequence[str], out=None) -> int:
    out = out or sys.stdout
    model = load_model(model_path)
    skipped = 0
    for raw in texts:
        text = preprocess(raw)
        if not text:
            continue
        try:
            sv = model.classify(text)
        except EmptyDocument:
            skipped += 1
            logger.warning("skipping %r: too short for the model's n-gram orders", text)
            continue
        out.write(f"{text}\t{sv.predicted}\t{sv.confidence:.6f}\n")
    return skipped


def cmd_evaluate(model_path: Path, test_path: Path, out_dir: Path, dataset_id: str = "") -> dict:
    model = load_model(model_path)
    test = read_sentences(test_path)
    if not test:
        raise DataError(f"{test_path} holds no sentences")
    languages = model.languages if isinstance(model, RankingModel) else list(model.classes)
    report, predicted = evaluate_model(
        model, test, sorted(set(languages) | {s.language for s in test}),
        model_id=model_path.stem, dataset_id=dataset_id or test_path.stem,
    )
    payload = report.to_dict()
    payload["sentence_length"] = length_error_analysis(test, predicted).to_dict()
    _write(out_dir / "confusion.csv", report.confusion.to_csv())
    if isinstance(model, RankingModel):
        scored = list(zip(test, model.classify_many(s.text for s in test)))
        variants = {
            "all": None,
            "correct": lambda s, sv: sv.predicted == s.language,
            "incorrect": lambda s, sv: sv.predicted != s.language,
        }
        for name, keep in variants.items():
            matrix = score_matrix(test, model, keep, scored=scored)
            _write(out_dir / f"scores_{name}.csv", matrix.to_csv())
    elif isinstance(model, NaiveBayesModel):
        payload["top_features"] = {
            c: [[t, v] for t, v in feats] for c, feats in top_features(model, 5).items()
        }
    _write(out_dir / "report.json", jsonio.dumps(payload))
    print(f"accuracy {report.accuracy:.4f}  precision {report.precision:.4f}  "
          f"recall {report.recall:.4f}  f1 {report.f1:.4f}  (n={report.confusion.total})")
    return payload


def cmd_ablate(config: RunConfig, fractions: Sequence[float]) -> Path:
    dataset = dataset_from_config(config)
    curve = data_size_ablation(dataset, config.model, fractions, config.seed)
    out = _write(config.output_dir / "ablation.csv", curve.to_csv())
    sys.stdout.write(curve.to_csv())
    return out


def cmd_crossdomain(train_config: RunConfig, test_config: RunConfig) -> dict:
    train_ds = dataset_from_config(train_config)
    test_ds = dataset_from_config(test_config)
    report = cross_domain(train_ds, test_ds, train_config.model)
    payload = report.to_dict()
    _write(train_config.output_dir / f"crossdomain_{train_ds.name}_to_{test_ds.name}.json",
           jsonio.dumps(payload))
    print(f"{report.model_id} on {report.dataset_id}: accuracy {report.accuracy:.4f} f1 {report.f1:.4f}")
    return payload


# -- argument parsing -------------------------------------------------------


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["ngram-rank", "nb"])
    p.add_argument("--orders", help="gram lengths, e.g. 4 or 2,3,4")
    p.add_argument("--k", type=int, help="profile size (ngram-rank)")
    p.add_argument("--alpha", type=float, help="smoothing (nb)")
    p.add_argument("--vectorizer", choices=["char-tfidf", "word-count"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="salid", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="clean a corpus and write balanced train/test TSVs")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("train", help="train a model from a train TSV")
    p.add_argument("--config")
    p.add_argument("--input", help="train TSV (default: <output_dir>/train.tsv)")
    p.add_argument("--model", help="output model path (default: <output_dir>/model.json)")
    p.add_argument("--seed", type=int)
    _add_model_flags(p)

    p = sub.add_parser("predict", help="classify raw sentences")
    p.add_argument("--model", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text")
    group.add_argument("--input", help="file with one sentence per line")

    p = sub.add_parser("evaluate", help="score a model on a test TSV")
    p.add_argument("--config")
    p.add_argument("--model", help="model path (default: <output_dir>/model.json)")
    p.add_argument("--input", help="test TSV (default: <output_dir>/test.tsv)")
    p.add_argument("--output", help="report directory (default: <output_dir>)")

    p = sub.add_parser("ablate", help="accuracy against training-set size")
    p.add_argument("--config", required=True)
    p.add_argument("--fractions", default=",".join(f"{f:g}" for f in DEFAULT_FRACTIONS))
    p.add_argument("--seed", type=int)
    _add_model_flags(p)

    p = sub.add_parser("crossdomain", help="train on one corpus, test on another")
    p.add_argument("--config", required=True, help="training corpus config (also sets the model)")
    p.add_argument("--test-config", required=True, help="test corpus config")
    p.add_argument("--seed", type=int)
    _add_model_flags(p)
    return parser


def _run(args: argparse.Namespace) -> int:
    if args.command == "predict":
        if args.text is not None:
            texts = [args.text]
        else:
            try:
                texts = Path(args.input).read_text(encoding="utf-8").splitlines()
            except OSError as exc:
                raise DataError(f"cannot read {args.input}: {exc}") from None
        cmd_predict(Path(args.model), texts)
        return EXIT_OK

    config = load_config(getattr(args, "config", None), args)
    if args.command == "prepare":
        cmd_prepare(config)
    elif args.command == "train":
        train_path = Path(args.input) if args.input else config.output_dir / "train.tsv"
        if not train_path.exists():
            raise ConfigError(f"train file {train_path} does not exist")
        model_path = Path(args.model) if args.model else config.output_dir / "model.json"
        model_path.parent.mkdir(parents=True, exist_ok=True)
        cmd_train(config, train_path, model_path)
    elif args.command == "evaluate":
        model_path = Path(args.model) if args.model else config.output_dir / "model.json"
        test_path = Path(args.input) if args.input else config.output_dir / "test.tsv"
        for path in (model_path, test_path):
            if not path.exists():
                raise ConfigError(f"{path} does not exist")
        out_dir = Path(args.output) if args.output else config.output_dir
        cmd_evaluate(model_path, test_path, out_dir, config.dataset_id if args.config else "")
    elif args.command == "ablate":
        cmd_ablate(config, _parse_fractions(args.fractions))
    elif args.command == "crossdomain":
        test_config = load_config(args.test_config)
        cmd_crossdomain(config, replace(test_config, model=config.model))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ModelSchemaError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
