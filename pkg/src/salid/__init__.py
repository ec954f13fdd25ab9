"""Character n-gram and Naive Bayes language identification.

Two classical pipelines for sentence-level language identification:
rank-order comparison against per-language n-gram profiles, and
multinomial Naive Bayes over character TF-IDF or word-count features.
"""

from .corpus import (
    Dataset,
    LabeledSentence,
    RawDocument,
    SplitSpec,
    build_dataset,
    length_histogram,
    preprocess,
    read_corpus,
    token_count,
)
from .evaluation import (
    EvalReport,
    cross_domain,
    data_size_ablation,
    evaluate,
    evaluate_model,
    length_error_analysis,
    per_language_accuracy,
)
from .kernels import BACKEND
from .nb import NaiveBayesModel, VectorizerSpec, nb_predict, nb_train, top_features
from .pipeline import ModelConfig, load_model, train_model
from .profile import NgramProfile, build_profile, extract_grams, profile_rank
from .rank import (
    RankingModel,
    ScoreVector,
    classify,
    document_profile,
    out_of_place_distance,
    score_matrix,
    train_ranking_model,
)

__version__ = "0.1.0"
