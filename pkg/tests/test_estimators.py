import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from cpaclab.estimators import ERMClassifier, NonuniformClassifier, SRMClassifier
from cpaclab.hypothesis import Hypothesis


def test_erm_fit_predict():
    clf = ERMClassifier().fit(np.array([[3], [3], [5]]), [1, 1, 0])
    assert clf.hypothesis_ == Hypothesis((3,))
    assert clf.predict([3, 5, 7]).tolist() == [1, 0, 0]
    assert clf.support_.tolist() == [3]
    assert clf.score([3, 5], [1, 0]) == 1.0


def test_erm_with_class_spec():
    clf = ERMClassifier(hypothesis_class={"kind": "support_at_most", "k": 1}).fit([2, 7], [1, 1])
    assert clf.hypothesis_ == Hypothesis((2,))


def test_srm_certificate():
    clf = SRMClassifier(b=1).fit([0] * 9, [1] * 9)
    assert clf.certificate_.N_bound == 4
    assert clf.predict([0, 1]).tolist() == [1, 0]


def test_nonuniform_sets_b():
    clf = NonuniformClassifier().fit([0] * 128, [1] * 128)
    assert clf.b_ == 2


def test_params_and_clone():
    clf = SRMClassifier(hypothesis_class={"kind": "hfin"}, b=3)
    assert clf.get_params() == {"hypothesis_class": {"kind": "hfin"}, "b": 3}
    assert clone(clf).get_params() == clf.get_params()


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ERMClassifier().predict([1])


@pytest.mark.parametrize(
    "X, y",
    [([1.5], [1]), ([-1], [0]), ([1, 2], [1]), ([1], [2]), ([], []), ([[1, 2]], [1])],
)
def test_input_validation(X, y):
    with pytest.raises(ValueError):
        ERMClassifier().fit(X, y)


def test_bad_b():
    with pytest.raises(ValueError):
        SRMClassifier(b=0).fit([1], [1])


def test_integral_floats_accepted():
    assert ERMClassifier().fit([2.0, 2.0], [1, 1]).predict([2]).tolist() == [1]
