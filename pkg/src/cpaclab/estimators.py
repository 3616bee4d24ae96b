"""scikit-learn estimators wrapping the learners.

Features are single naturals (a 1-D array or one column); labels are 0/1.
The fitted hypothesis is exposed as ``hypothesis_`` and its support as
``support_``.

>>> from cpaclab.estimators import ERMClassifier
>>> clf = ERMClassifier().fit([3, 3, 5], [1, 1, 0])
>>> clf.predict([3, 5, 7]).tolist()
[1, 0, 0]
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_natural, check_points, check_sample
from .classes import EnumeratedClass, class_from_spec, class_hfin
from .learners import erm_enumerated, erm_hfin, srm, t_of

__all__ = ["ERMClassifier", "SRMClassifier", "NonuniformClassifier"]


def _resolve(spec) -> EnumeratedClass:
    if spec is None:
        return class_hfin()
    if isinstance(spec, EnumeratedClass):
        return spec
    return class_from_spec(spec)


class _HypothesisClassifier(ClassifierMixin, BaseEstimator):
    def _store(self, h):
        self.hypothesis_ = h
        self.support_ = np.array(h.support, dtype=object)
        self.classes_ = np.array([0, 1])
        return self

    def predict(self, X):
        check_is_fitted(self, "hypothesis_")
        return np.array([self.hypothesis_(x) for x in check_points(X)], dtype=int)

    def decision_function(self, X):
        return self.predict(X).astype(float)


class ERMClassifier(_HypothesisClassifier):
    """Empirical risk minimizer over an enumerated class (default H_fin)."""

    def __init__(self, hypothesis_class=None):
        self.hypothesis_class = hypothesis_class

    def fit(self, X, y):
        S = check_sample(X, y)
        if self.hypothesis_class is None or self.hypothesis_class == {"kind": "hfin"}:
            return self._store(erm_hfin(S))
        return self._store(erm_enumerated(_resolve(self.hypothesis_class), S))


class SRMClassifier(_HypothesisClassifier):
    """Structural risk minimizer at confidence parameter ``b``."""

    def __init__(self, hypothesis_class=None, b=1):
        self.hypothesis_class = hypothesis_class
        self.b = b

    def fit(self, X, y):
        S = check_sample(X, y)
        b = check_natural(self.b, "b", minimum=1)
        h, self.certificate_ = srm(_resolve(self.hypothesis_class), b, S)
        return self._store(h)


class NonuniformClassifier(_HypothesisClassifier):
    """SRM with ``b = t(m)`` chosen from the sample size."""

    def __init__(self, hypothesis_class=None):
        self.hypothesis_class = hypothesis_class

    def fit(self, X, y):
        S = check_sample(X, y)
        self.b_ = t_of(len(S))
        h, self.certificate_ = srm(_resolve(self.hypothesis_class), self.b_, S)
        return self._store(h)
