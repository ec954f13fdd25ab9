import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from salid.errors import EmptyCorpus, EmptyDocument, ModelSchemaError, SingleClass
from salid.pipeline import load_model
from salid.profile import NgramProfile, profile_from_counts
from salid.rank import (
    RankingModel,
    document_profile,
    out_of_place_distance,
    score_matrix,
    train_ranking_model,
)

from toydata import sent


def toy_model(k=50, orders=(2,)):
    train = [sent("ab ab ab", "aaa"), sent("ba ab", "aaa"), sent("xy xy xy", "bbb"), sent("yx xy", "bbb")]
    return train_ranking_model(train, orders, k)


def brute_distance(doc, profile):
    grams = [g for g, _ in profile.entries]
    return sum(abs(r - grams.index(g)) if g in grams else profile.k for r, g in enumerate(doc))


def test_document_profile_examples():
    model = toy_model()
    assert document_profile("aaa", model) == ["aa"]
    assert document_profile("abab", model) == ["ab", "ba"]
    with pytest.raises(EmptyDocument):
        document_profile("a", model)


def test_document_profile_truncated_to_k():
    letters = [chr(0x100 + i) for i in range(71)]
    text = "".join(letters)  # 70 distinct bigrams
    assert len(document_profile(text, toy_model())) == 50


def _profile(grams, k=50):
    # distinct descending counts so the order is exactly ``grams``
    counts = {g: len(grams) - i for i, g in enumerate(grams)}
    return profile_from_counts("zz", counts, (2,), k)


def test_out_of_place_distance_examples():
    p = _profile(["xx", "yy"])
    assert out_of_place_distance(["xx", "yy"], p) == 0
    assert out_of_place_distance(["yy", "xx"], p) == 2
    assert out_of_place_distance(["zz"], p) == 50


def test_classify_disjoint_alphabets():
    model = toy_model()
    sv = model.classify("ab")
    assert sv.predicted == "aaa"
    # d_aaa = 0, d_bbb = 50 -> scores 1 : 1/51
    assert sv.scores["aaa"] == pytest.approx(51 / 52, abs=1e-12)
    assert sv.scores["bbb"] == pytest.approx(1 / 52, abs=1e-12)
    assert sum(sv.scores.values()) == pytest.approx(1.0, abs=1e-12)


def test_classify_ties_go_to_first_language():
    model = toy_model()
    sv = model.classify("qq")  # absent everywhere: equal distances
    assert sv.scores["aaa"] == sv.scores["bbb"] == 0.5
    assert sv.predicted == "aaa"


def test_model_distances_match_brute_force():
    rng = random.Random(1)
    alphabet = "abcde_"
    for trial in range(50):
        k = rng.randint(1, 12)
        profiles = {}
        for lang in ("l0", "l1", "l2"):
            counts = {rng.choice(alphabet) + rng.choice(alphabet): rng.randint(1, 9) for _ in range(15)}
            profiles[lang] = NgramProfile(lang, (2,), profile_from_counts(lang, counts, (2,), k).entries, k)
        model = RankingModel(profiles, (2,), k)
        docs = []
        for _ in range(5):
            text = "".join(rng.choice("abcde ") for _ in range(rng.randint(2, 25)))
            try:
                docs.append(document_profile(text, model))
            except EmptyDocument:
                continue
        dist = model.distances(docs)
        for i, doc in enumerate(docs):
            for j, lang in enumerate(model.languages):
                assert dist[i, j] == brute_distance(doc, profiles[lang]) == out_of_place_distance(doc, profiles[lang])


def test_model_requires_consistent_profiles():
    a = _profile(["ab"])
    with pytest.raises(ValueError):
        RankingModel({"zz": a}, (2,), 50)
    b = profile_from_counts("yy", {"ab": 1}, (2,), 10)
    with pytest.raises(ValueError):
        RankingModel({"zz": a, "yy": b}, (2,), 50)
    with pytest.raises(SingleClass):
        train_ranking_model([sent("ab", "x")], (2,))
    with pytest.raises(EmptyCorpus):
        train_ranking_model([], (2,))


def test_score_matrix_diagonal_dominates():
    model = toy_model()
    test = [sent("ab ba", "aaa"), sent("ab", "aaa"), sent("xy yx", "bbb")]
    m = score_matrix(test, model)
    assert m.true_languages == ["aaa", "bbb"]
    for i in range(2):
        assert m.values[i, i] > m.values[i, 1 - i]
        assert m.values[i].sum() == pytest.approx(1.0)
    assert m.counts == [2, 1]
    assert m.empty_rows == []


def test_score_matrix_empty_filter_flagged():
    model = toy_model()
    test = [sent("ab", "aaa"), sent("xy", "bbb")]
    m = score_matrix(test, model, keep=lambda s, sv: sv.predicted != s.language)
    assert m.empty_rows == ["aaa", "bbb"]
    assert np.isnan(m.values).all()
    assert "nan" in m.to_csv()


def test_score_matrix_single_sentence():
    m = score_matrix([sent("ab", "aaa")], toy_model())
    assert m.values.shape == (1, 2)
    assert m.values[0].sum() == pytest.approx(1.0)


def test_model_round_trip(tmp_path):
    model = toy_model(k=3, orders=(2, 3))
    path = tmp_path / "m.json"
    model.save(path)
    loaded = load_model(path)
    assert isinstance(loaded, RankingModel)
    assert loaded.dumps() == model.dumps()
    texts = ["ab ab", "xy", "abxy yx"]
    assert loaded.classify_many(texts) == model.classify_many(texts)
    with pytest.raises(ModelSchemaError):
        RankingModel.from_dict({"family": "ngram-rank", "orders": [2]})


@st.composite
def two_profiles_and_doc(draw):
    k = draw(st.integers(1, 8))
    grams = st.text(alphabet="abcd", min_size=2, max_size=2)
    a = draw(st.lists(grams, min_size=1, max_size=k, unique=True))
    b = draw(st.lists(grams.filter(lambda g: g != a[0]), min_size=1, max_size=k, unique=True))
    doc = draw(st.lists(grams, min_size=1, max_size=k - 1, unique=True)) if k > 1 else []
    doc = [g for g in doc if g != a[0]]
    return k, a, b, doc


def _model(k, a, b):
    pa = profile_from_counts("A", {g: len(a) - i for i, g in enumerate(a)}, (2,), k)
    pb = profile_from_counts("B", {g: len(b) - i for i, g in enumerate(b)}, (2,), k)
    return RankingModel({"A": pa, "B": pb}, (2,), k)


@given(two_profiles_and_doc())
@settings(max_examples=300, deadline=None)
def test_appending_top_gram_of_a_favours_a(case):
    """Appending a gram ranked first in A and absent from B widens the
    distance margin in A's favour and never flips a prediction away from A."""
    k, a, b, doc = case
    model = _model(k, a, b)
    before = model.distances([doc])[0] if doc else np.zeros(2, dtype=int)
    after = model.distances([doc + [a[0]]])[0]
    assert (after[1] - after[0]) - (before[1] - before[0]) == k - len(doc)
    assert after[1] - after[0] >= before[1] - before[0]
    if doc and before[0] <= before[1]:
        assert after[0] <= after[1]


def test_normalised_score_gap_is_not_monotone():
    # The distance margin widens, but the normalised score gap can shrink:
    # d goes (2, 100) -> (4, 150), gap 98/104 -> 146/156.
    model = _model(50, ["aa", "bb", "cc"], ["dd"])
    before = model.distances([["bb", "cc"]])[0]
    after = model.distances([["bb", "cc", "aa"]])[0]
    assert list(before) == [2, 100] and list(after) == [4, 150]

    def gap(d):
        sa, sb = 1 / (1 + d[0]), 1 / (1 + d[1])
        return (sa - sb) / (sa + sb)

    assert gap(before) == pytest.approx(98 / 104)
    assert gap(after) == pytest.approx(146 / 156)
    assert gap(after) < gap(before)


def test_similarity_scaling_keeps_argmax():
    model = toy_model()
    d = model.distances([document_profile("ab xy ab", model)])[0].astype(float)
    sim = 1 / (1 + d)
    for c in (0.001, 1.0, 37.0):
        assert np.argmax(sim * c) == np.argmax(sim)
    assert model.languages[int(np.argmax(sim))] == model.classify("ab xy ab").predicted
