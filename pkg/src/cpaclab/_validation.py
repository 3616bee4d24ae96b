"""Input checks shared by the estimators and the CLI."""
from __future__ import annotations

from numbers import Integral

import numpy as np

from .hypothesis import LabeledSample


def check_points(X) -> tuple[int, ...]:
    """Flatten ``X`` (a sequence, 1-D array or one-column 2-D array) into naturals."""
    arr = np.asarray(X, dtype=object)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(f"expected a single feature column, got shape {arr.shape}")
        arr = arr[:, 0]
    elif arr.ndim != 1:
        raise ValueError(f"expected 1-D or (n, 1) input, got {arr.ndim}-D")
    out = []
    for v in arr:
        if isinstance(v, (bool, np.bool_)) or not isinstance(v, Integral):
            if isinstance(v, (float, np.floating)) and float(v).is_integer():
                v = int(v)
            else:
                raise ValueError(f"points must be naturals, got {v!r}")
        if v < 0:
            raise ValueError(f"points must be naturals, got {v}")
        out.append(int(v))
    return tuple(out)


def check_labels(y, n: int) -> tuple[int, ...]:
    ys = check_points(y)
    if len(ys) != n:
        raise ValueError(f"X has {n} rows but y has {len(ys)}")
    if any(v > 1 for v in ys):
        raise ValueError("labels must be 0 or 1")
    return ys


def check_sample(X, y) -> LabeledSample:
    xs = check_points(X)
    if not xs:
        raise ValueError("need at least one labeled point")
    return LabeledSample(tuple(zip(xs, check_labels(y, len(xs)))))


def check_natural(value, name: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)
