"""Integer codings of tuples, pairs and labeled samples.

All codes are Python ints, so nothing overflows.  ``godel_decode`` returns
``None`` for naturals that are not Gödel codes.
"""
from __future__ import annotations

from math import isqrt
from typing import Iterator, Optional, Sequence

__all__ = [
    "primes",
    "nth_prime",
    "godel_encode",
    "godel_decode",
    "pair",
    "unpair",
    "sample_encode",
    "sample_decode",
]

_PRIMES: list[int] = [2]


def _extend_primes(count: int) -> None:
    candidate = _PRIMES[-1] + 1
    while len(_PRIMES) < count:
        limit = isqrt(candidate)
        if all(candidate % p for p in _PRIMES if p <= limit):
            _PRIMES.append(candidate)
        candidate += 1


def nth_prime(i: int) -> int:
    """The ``i``-th prime, counting from ``nth_prime(1) == 2``."""
    if i < 1:
        raise ValueError("prime index starts at 1")
    _extend_primes(i)
    return _PRIMES[i - 1]


def primes() -> Iterator[int]:
    i = 1
    while True:
        yield nth_prime(i)
        i += 1


def godel_encode(t: Sequence[int]) -> int:
    """Encode ``(x_1, ..., x_m)`` as ``prod p_i ** (x_i + 1)``."""
    if len(t) == 0:
        raise ValueError("cannot Gödel-encode the empty tuple")
    code = 1
    for p, x in zip(primes(), t):
        if x < 0:
            raise ValueError(f"tuple entries must be naturals, got {x}")
        code *= p ** (x + 1)
    return code


def godel_decode(n: int) -> Optional[tuple[int, ...]]:
    """Inverse of :func:`godel_encode`; ``None`` if ``n`` is not a code."""
    if n < 2:
        return None
    out = []
    for p in primes():
        if n == 1:
            return tuple(out)
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e == 0:
            # a prime is skipped: either a gap or a foreign factor
            return None
        out.append(e - 1)


def pair(a: int, b: int) -> int:
    """Cantor pairing ``(a + b)(a + b + 1)/2 + b``."""
    if a < 0 or b < 0:
        raise ValueError("pair is defined on naturals only")
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(n: int) -> tuple[int, int]:
    if n < 0:
        raise ValueError("unpair is defined on naturals only")
    s = (isqrt(8 * n + 1) - 1) // 2
    b = n - s * (s + 1) // 2
    return s - b, b


def sample_encode(pairs: Sequence[tuple[int, int]]) -> int:
    """Gödel code of the tuple ``(2x + y for (x, y) in pairs)``.

    Accepts a ``LabeledSample`` or any sequence of ``(x, y)`` pairs.
    """
    pairs = getattr(pairs, "pairs", pairs)
    if len(pairs) == 0:
        raise ValueError("cannot encode an empty sample")
    for x, y in pairs:
        if y not in (0, 1) or x < 0:
            raise ValueError(f"bad labeled pair {(x, y)!r}")
    return godel_encode([2 * x + y for x, y in pairs])


def sample_decode(n: int) -> Optional[tuple[tuple[int, int], ...]]:
    t = godel_decode(n)
    if t is None:
        return None
    return tuple((c >> 1, c & 1) for c in t)
