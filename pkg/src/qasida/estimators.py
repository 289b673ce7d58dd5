"""scikit-learn style facade over the rule engine.

These wrappers let the classifier and scanner slot into sklearn
pipelines and model-selection tooling. They hold no learned state: "fit"
only binds the pattern database, and predictions delegate to the exact
rule-based engine. X rows are poems given either as a list of hemistich
strings or as one '#'-separated string.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import classify, meterdb
from .errors import QasidaError
from .scansion import MIN_COVERAGE, scan_hemistich


def _as_hemistiches(row) -> list:
    if isinstance(row, str):
        return [part for part in row.replace("#", "\n").split("\n") if part.strip()]
    return list(row)


class MeterClassifier(ClassifierMixin, BaseEstimator):
    """Rule-based meter classifier with the sklearn estimator protocol.

    Parameters
    ----------
    db : PatternDB or None
        Meter database; the bundled seed database when None.
    min_coverage : float
        Per-hemistich diacritic coverage below which scansion refuses.
    """

    def __init__(self, db=None, min_coverage: float = MIN_COVERAGE):
        self.db = db
        self.min_coverage = min_coverage

    def fit(self, X=None, y=None):
        """Bind the database (no learning happens); returns self."""
        self.db_ = self.db if self.db is not None else meterdb.load()
        self.classes_ = np.arange(meterdb.METER_COUNT)
        return self

    def _check_fitted(self):
        if not hasattr(self, "db_"):
            raise NotFittedError(
                "This MeterClassifier instance is not fitted yet; call fit() first."
            )

    def predict(self, X) -> np.ndarray:
        """Majority-vote meter index per poem."""
        self._check_fitted()
        out = [
            classify.classify_poem(
                _as_hemistiches(row), self.db_, min_coverage=self.min_coverage
            )[0]
            for row in X
        ]
        return np.asarray(out, dtype=int)

    def predict_proba(self, X) -> np.ndarray:
        """Vote-share distribution over the 16 meters per poem."""
        self._check_fitted()
        rows = []
        for row in X:
            _, analyses = classify.classify_poem(
                _as_hemistiches(row), self.db_, min_coverage=self.min_coverage
            )
            votes = np.zeros(meterdb.METER_COUNT)
            for a in analyses:
                if not a.error and a.ranking:
                    votes[a.ranking[0][0]] += 1
            # classify_poem guarantees at least one scanned hemistich
            rows.append(votes / votes.sum())
        return np.vstack(rows)

    def score_details(self, X) -> list:
        """Per-poem (meter, analyses) pairs, for inspection."""
        self._check_fitted()
        return [
            classify.classify_poem(
                _as_hemistiches(row), self.db_, min_coverage=self.min_coverage
            )
            for row in X
        ]


class ArudiScanner(TransformerMixin, BaseEstimator):
    """Transformer mapping hemistich strings to binary Arudi patterns.

    Unscannable rows become ``on_error`` (default empty string) so that
    batch pipelines keep row alignment.
    """

    def __init__(
        self,
        min_coverage: float = MIN_COVERAGE,
        final_lengthening: bool = True,
        on_error: str = "",
    ):
        self.min_coverage = min_coverage
        self.final_lengthening = final_lengthening
        self.on_error = on_error

    def fit(self, X=None, y=None):
        self.fitted_ = True
        return self

    def transform(self, X) -> list:
        if not hasattr(self, "fitted_"):
            raise NotFittedError(
                "This ArudiScanner instance is not fitted yet; call fit() first."
            )
        out = []
        for row in X:
            try:
                pattern, _ = scan_hemistich(
                    row,
                    min_coverage=self.min_coverage,
                    final_lengthening=self.final_lengthening,
                )
                out.append(pattern)
            except QasidaError:
                out.append(self.on_error)
        return out
