"""Acceptance criteria, one test per criterion.

Each test appends a PASS/FAIL/NOT RUN line to the terminal summary. The
corpus-backed criteria (1-3, 8, 9) need the Vuk'uzenzele sentence corpus on
disk: point ``SALID_VUK_ROOT`` at either a ``<lang>/*.txt`` directory tree or
a ``lang<TAB>text`` file. ``SALID_SPLIT_SEED`` picks the split seed (default 0).
"""

import functools
import math
import os
import random
import statistics
import time

import numpy as np
import pytest

from salid.corpus import SA_LANGUAGES, SplitSpec, build_dataset, read_corpus
from salid.evaluation import data_size_ablation, evaluate, evaluate_model, length_error_analysis
from salid.nb import WORD_COUNT, VectorizerSpec, nb_predict, nb_train
from salid.pipeline import ModelConfig, train_model
from salid.profile import NgramProfile, aggregate_counts, build_profile, log_distribution, profile_from_counts
from salid.rank import RankingModel

from conftest import ACCEPTANCE_RESULTS
from toydata import brute_posterior, sent

VUK_SPLIT = (3395, 728)

RANK_TABLE = {"Bi-gram": ((2,), 72.7), "Tri-gram": ((3,), 87.9), "Quad-gram": ((4,), 88.4), "N-gram (Comb)": ((2, 3, 4), 87.8)}
NB_TABLE = {
    "NBC(2)": (ModelConfig("nb", (2,)), 90.2),
    "NBC(3)": (ModelConfig("nb", (3,)), 93.4),
    "NBC(4)": (ModelConfig("nb", (4,)), 94.4),
    "NBC(Comb)": (ModelConfig("nb", (2, 3, 4)), 94.0),
}
NB_WORD = (ModelConfig("nb", vectorizer=WORD_COUNT), 94.5, 94.6)


def record(number, desc, ok, detail=""):
    ACCEPTANCE_RESULTS.append((number, desc, "PASS" if ok else "FAIL", detail))


def check(number, desc, ok, detail=""):
    record(number, desc, ok, detail)
    assert ok, detail


@functools.lru_cache(maxsize=None)
def _vuk():
    root = os.environ.get("SALID_VUK_ROOT")
    if not root:
        return None
    seed = int(os.environ.get("SALID_SPLIT_SEED", "0"))
    docs = read_corpus(root, SA_LANGUAGES, source="vuk")
    return build_dataset(docs, SplitSpec(*VUK_SPLIT, seed=seed), name="vuk")


def vuk_or_skip(number, desc):
    dataset = _vuk()
    if dataset is None:
        ACCEPTANCE_RESULTS.append((number, desc, "NOT RUN", "SALID_VUK_ROOT not set; corpus unavailable"))
        pytest.skip("Vuk'uzenzele corpus not available (set SALID_VUK_ROOT)")
    return dataset


@functools.lru_cache(maxsize=None)
def _vuk_eval(config):
    dataset = _vuk()
    start = time.perf_counter()
    model = train_model(config, dataset.train)
    report, predicted = evaluate_model(model, dataset.test, dataset.languages, config.label, dataset.name)
    return report, predicted, time.perf_counter() - start


def _points(x):
    return 100 * x


# -- corpus-backed --------------------------------------------------------


@pytest.mark.corpus
def test_criterion_1_ranking_table():
    desc = "ranking accuracies within 2.0 points of the reported table, under 5 min"
    vuk_or_skip(1, desc)
    parts, ok, elapsed = [], True, 0.0
    for name, (orders, want) in RANK_TABLE.items():
        report, _, secs = _vuk_eval(ModelConfig("ngram-rank", orders, 50))
        got = _points(report.accuracy)
        elapsed += secs
        ok &= abs(got - want) <= 2.0
        parts.append(f"{name} {got:.1f} vs {want}")
    ok &= elapsed < 300
    check(1, desc, ok, "; ".join(parts) + f"; {elapsed:.0f}s")


@pytest.mark.corpus
def test_criterion_2_naive_bayes_table():
    desc = "NB accuracies (and word-level F1) within 2.0 points, under 10 min"
    vuk_or_skip(2, desc)
    parts, ok, elapsed = [], True, 0.0
    config, want_acc, want_f1 = NB_WORD
    report, _, secs = _vuk_eval(config)
    elapsed += secs
    acc, f1 = _points(report.accuracy), _points(report.f1)
    ok &= abs(acc - want_acc) <= 2.0 and abs(f1 - want_f1) <= 2.0
    parts.append(f"word {acc:.1f}/{f1:.1f} vs {want_acc}/{want_f1}")
    for name, (config, want) in NB_TABLE.items():
        report, _, secs = _vuk_eval(config)
        elapsed += secs
        got = _points(report.accuracy)
        ok &= abs(got - want) <= 2.0
        parts.append(f"{name} {got:.1f} vs {want}")
    ok &= elapsed < 600
    check(2, desc, ok, "; ".join(parts) + f"; {elapsed:.0f}s")


@pytest.mark.corpus
def test_criterion_3_wider_char_spans_help():
    desc = "NBC(2) < NBC(3) < NBC(4) accuracy, strict"
    vuk_or_skip(3, desc)
    acc = [_vuk_eval(NB_TABLE[name][0])[0].accuracy for name in ("NBC(2)", "NBC(3)", "NBC(4)")]
    check(3, desc, acc[0] < acc[1] < acc[2], " < ".join(f"{_points(a):.2f}" for a in acc))


@pytest.mark.corpus
def test_criterion_8_short_sentences_are_harder():
    desc = "bigram ranking: median length of correct >= misclassified"
    dataset = vuk_or_skip(8, desc)
    _, predicted, _ = _vuk_eval(ModelConfig("ngram-rank", (2,), 50))
    res = length_error_analysis(dataset.test, predicted)
    if not res.incorrect:
        check(8, desc, True, "no misclassified sentences")
        return
    mc, mi = statistics.median(res.correct), statistics.median(res.incorrect)
    check(8, desc, mc >= mi, f"median correct {mc} vs incorrect {mi}")


@pytest.mark.corpus
def test_criterion_9_quad_gram_ceiling():
    desc = "quad-gram ablation: acc(1.0) - acc(0.5) <= 3 points"
    dataset = vuk_or_skip(9, desc)
    curve = data_size_ablation(dataset, ModelConfig("ngram-rank", (4,), 50), [0.5, 1.0], seed=0)
    acc = curve.accuracy()
    gain = _points(acc[1.0] - acc[0.5])
    check(9, desc, gain <= 3.0, f"{_points(acc[0.5]):.1f} -> {_points(acc[1.0]):.1f} ({gain:+.2f})")


# -- self-contained -------------------------------------------------------


def test_criterion_4_nb_matches_enumeration():
    desc = "NB posteriors equal brute-force Bayes on 200 toy corpora (1e-9)"
    rng = random.Random(2024)
    words = ["v0", "v1", "v2", "v3", "v4"]
    worst = 0.0
    for _ in range(200):
        n_cls = rng.randint(2, 3)
        n_docs = rng.randint(n_cls, 6)
        labels = [f"c{i}" for i in range(n_cls)] + [f"c{rng.randrange(n_cls)}" for _ in range(n_docs - n_cls)]
        vocab = rng.sample(words, rng.randint(1, 5))
        train = [sent(" ".join(rng.choices(vocab, k=rng.randint(1, 6))), lab) for lab in labels]
        alpha = rng.choice([1.0, 0.5, 0.25, 0.0001])
        model = nb_train(train, VectorizerSpec(WORD_COUNT), alpha)
        query = " ".join(rng.choices(words + ["oov"], k=rng.randint(0, 8)))
        got = nb_predict(query, model).scores
        want = brute_posterior(train, query, alpha)
        worst = max(worst, max(abs(got[c] - want[c]) for c in want))
    check(4, desc, worst <= 1e-9, f"max abs error {worst:.2e}")


def _random_profile(rng, lang, k, alphabet):
    counts = {}
    for _ in range(rng.randint(1, 3 * k)):
        counts[rng.choice(alphabet) + rng.choice(alphabet)] = rng.randint(1, 20)
    return profile_from_counts(lang, counts, (2,), k)


def test_criterion_5_ranking_invariants():
    desc = "out-of-place distance invariants on 1000 random profile/document pairs"
    rng = random.Random(5)
    alphabet = "abcdefgh_"
    failures = []
    for trial in range(1000):
        k = rng.randint(1, 50)
        profiles = {lang: _random_profile(rng, lang, k, alphabet) for lang in ("l0", "l1", "l2")}
        model = RankingModel(profiles, (2,), k)
        own = profiles["l0"].grams
        doc = list(dict.fromkeys(rng.choice(alphabet) + rng.choice(alphabet) for _ in range(rng.randint(1, k))))
        absent = [f"#{i}" for i in range(rng.randint(1, k))]
        d_self, d_doc, d_absent = (model.distances([x])[0] for x in (own, doc, absent))
        if d_self[0] != 0:
            failures.append(f"{trial}: self-distance {d_self[0]}")
        if not ((d_doc >= 0).all() and (d_doc <= k * len(doc)).all()):
            failures.append(f"{trial}: distance out of bounds {d_doc}")
        if not (d_absent == k * len(absent)).all():
            failures.append(f"{trial}: absent penalty {d_absent}")
        if not np.array_equal(model.distances([doc])[0], d_doc):
            failures.append(f"{trial}: nondeterministic distance")
        text = " ".join(rng.choice(["ab", "cde", "fgh", "ba", "hh"]) for _ in range(rng.randint(1, 6)))
        first, second = model.classify(text), model.classify(text)
        if first != second:
            failures.append(f"{trial}: nondeterministic scores")
        if abs(math.fsum(first.scores.values()) - 1.0) > 1e-9:
            failures.append(f"{trial}: scores sum {math.fsum(first.scores.values())}")
    check(5, desc, not failures, failures[0] if failures else "1000 pairs")


def test_criterion_6_profile_normalisation_and_round_trip():
    desc = "untruncated distribution sums to 1 (1e-12); profile JSON round-trips byte-identically"
    rng = random.Random(6)
    alphabet = "aeiou bdgklmnprst ŝḽṱ"
    worst, mismatches = 0.0, 0
    for _ in range(100):
        texts = ["".join(rng.choice(alphabet) for _ in range(rng.randint(4, 60))) for _ in range(rng.randint(1, 12))]
        orders = sorted(rng.sample([2, 3, 4], rng.randint(1, 3)))
        counts = aggregate_counts(texts, orders)
        if not counts:
            continue
        worst = max(worst, abs(math.fsum(math.exp(v) for v in log_distribution(counts).values()) - 1.0))
        profile = build_profile([sent(t, "xx") for t in texts if t.strip()], orders, rng.randint(1, 60))
        text = profile.dumps()
        mismatches += NgramProfile.loads(text).dumps() != text or NgramProfile.loads(text) != profile
    check(6, desc, worst <= 1e-12 and mismatches == 0, f"max |sum-1| {worst:.1e}, {mismatches} round-trip mismatches")


def test_criterion_7_metric_fixtures():
    desc = "hand-computed 2-class metrics and balanced micro = mean per-language accuracy"
    rep = evaluate([("L0", "L0"), ("L0", "L1"), ("L1", "L1"), ("L1", "L1")], ["L0", "L1"])
    exact_f1 = (2 / 3 + 0.8) / 2
    ok = rep.accuracy == 0.75 and abs(rep.f1 - exact_f1) <= 1e-9 and abs(rep.f1 - 0.7333) <= 1e-4
    rng = random.Random(7)
    langs = [f"l{i}" for i in range(11)]
    gap = 0.0
    for _ in range(20):
        per = rng.randint(1, 40)
        preds = [(t, rng.choice(langs)) for t in langs for _ in range(per)]
        r = evaluate(preds, langs)
        gap = max(gap, abs(r.accuracy - math.fsum(r.per_language_accuracy.values()) / len(langs)))
    ok &= gap <= 1e-12
    check(7, desc, ok, f"acc {rep.accuracy}, macro-F1 {rep.f1:.12f}, identity gap {gap:.1e}")
