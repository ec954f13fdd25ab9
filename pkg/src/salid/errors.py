"""Exception hierarchy.

``DataError`` and ``ModelSchemaError`` map onto distinct CLI exit codes, so
every failure raised from library code derives from one of them or from
``ConfigError``.
"""

from __future__ import annotations


class SalidError(Exception):
    """Base class for all library errors."""


class ConfigError(SalidError):
    """Invalid or incomplete run configuration."""


class DataError(SalidError):
    """Input data cannot support the requested operation."""


class InsufficientData(DataError):
    def __init__(self, language: str, available: int, required: int):
        self.language = language
        self.available = available
        self.required = required
        super().__init__(
            f"language {language!r}: {available} usable sentences, {required} required"
        )


class EmptyCorpus(DataError):
    """No features could be extracted from a training corpus."""


class EmptyDocument(DataError):
    """A document yields no n-grams for the model's orders."""


class EmptyPredictions(DataError):
    """Evaluation was requested over zero predictions."""


class SingleClass(DataError):
    """Training data covers fewer than two classes."""


class NonPositiveAlpha(ValueError, SalidError):
    """Smoothing parameter must be strictly positive."""


class ModelSchemaError(SalidError):
    """A model file is malformed or fails its consistency checks."""
