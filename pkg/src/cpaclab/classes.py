"""Recursively enumerable hypothesis classes given by explicit enumerations.

An :class:`EnumeratedClass` bundles a total enumeration with the optional
exact procedures the rest of the package needs: a membership decider, a
consistency oracle for samples (which also produces a realizing
hypothesis), the least enumeration index of a member, and a search bound
for empirical risk minimization.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from math import comb
from typing import Callable, Iterable, Optional

from .codec import pair, unpair
from .hypothesis import ZERO, Hypothesis, LabeledSample, hfin_index, hfin_list

__all__ = [
    "EnumeratedClass",
    "MissingOracle",
    "class_hfin",
    "class_support_at_most",
    "class_cube",
    "class_singleton",
    "class_finite",
    "relabel_points",
    "direct_sum",
    "image_class",
    "members_within",
    "class_from_spec",
]

log = logging.getLogger(__name__)


class MissingOracle(RuntimeError):
    """The class lacks the procedure an operation needs."""


@dataclass(frozen=True)
class EnumeratedClass:
    name: str
    enumerate: Callable[[int], Hypothesis]
    member: Optional[Callable[[Hypothesis], bool]] = None
    find_consistent: Optional[Callable[[LabeledSample], Optional[Hypothesis]]] = None
    index_of: Optional[Callable[[Hypothesis], int]] = None
    search_bound: Optional[Callable[[LabeledSample], int]] = None
    size: Optional[int] = None
    meta: dict = field(default_factory=dict, compare=False)

    def __getitem__(self, n: int) -> Hypothesis:
        return self.enumerate(n)

    def __contains__(self, h: Hypothesis) -> bool:
        if self.member is None:
            raise MissingOracle(f"{self.name} has no membership decider")
        return self.member(h)

    def realizes(self, S: LabeledSample) -> bool:
        """Whether some member has zero empirical loss on ``S``."""
        if self.find_consistent is None:
            raise MissingOracle(f"{self.name} has no sample oracle")
        return self.find_consistent(S) is not None

    def hypotheses(self, limit: int) -> list[Hypothesis]:
        return [self.enumerate(n) for n in range(limit)]


def _labels(S: LabeledSample) -> Optional[dict[int, int]]:
    seen: dict[int, int] = {}
    for x, y in S.pairs:
        if seen.setdefault(x, y) != y:
            return None
    return seen


def _ones(S: LabeledSample) -> Optional[list[int]]:
    lab = _labels(S)
    if lab is None:
        return None
    return sorted(x for x, y in lab.items() if y == 1)


def _max_point_bound(S: LabeledSample) -> int:
    return (1 << (max(S.points) + 1)) - 1


def class_hfin() -> EnumeratedClass:
    def consistent(S):
        ones = _ones(S)
        return None if ones is None else Hypothesis(tuple(ones))

    return EnumeratedClass(
        name="hfin",
        enumerate=hfin_list,
        member=lambda h: True,
        find_consistent=consistent,
        index_of=hfin_index,
        search_bound=_max_point_bound,
        meta={"kind": "hfin"},
    )


def _count_popcount_le(n: int, k: int) -> int:
    """How many naturals ``< n`` have at most ``k`` set bits."""
    total = 0
    used = 0
    for i in reversed(range(n.bit_length())):
        if n >> i & 1:
            # set this bit to 0, the lower i bits are free
            room = k - used
            if room >= 0:
                total += sum(comb(i, j) for j in range(min(room, i) + 1))
            used += 1
    return total


def class_support_at_most(k: int) -> EnumeratedClass:
    """All hypotheses with at most ``k`` points in their support, in H_fin order."""
    if k < 0:
        raise ValueError("k must be a natural")

    def enum(n):
        if k == 0:
            return ZERO
        # least code c with exactly n smaller admissible codes and popcount(c) <= k
        lo, hi = 0, 1
        while _count_popcount_le(hi, k) <= n:
            hi *= 2
        while lo < hi:
            mid = (lo + hi) // 2
            if _count_popcount_le(mid + 1, k) > n:
                hi = mid
            else:
                lo = mid + 1
        return hfin_list(lo)

    def index_of(h):
        if len(h) > k:
            raise ValueError(f"{h} is not in the class")
        return _count_popcount_le(hfin_index(h), k)

    def consistent(S):
        ones = _ones(S)
        if ones is None or len(ones) > k:
            return None
        return Hypothesis(tuple(ones))

    def bound(S):
        best = sorted(set(S.points), reverse=True)[:k]
        return index_of(Hypothesis(tuple(best))) if k else 0

    return EnumeratedClass(
        name=f"support_at_most({k})",
        enumerate=enum,
        member=lambda h: len(h) <= k,
        find_consistent=consistent,
        index_of=index_of,
        search_bound=bound,
        size=1 if k == 0 else None,
        meta={"kind": "support_at_most", "k": k},
    )


def class_cube(k: int) -> EnumeratedClass:
    """All hypotheses with support inside ``{1, ..., k-1}``."""
    if k < 1:
        raise ValueError("cube needs k >= 1")
    size = 1 << (k - 1)

    def enum(n):
        n %= size
        return Hypothesis(tuple(i + 1 for i in range(k - 1) if n >> i & 1))

    def member(h):
        return all(1 <= x <= k - 1 for x in h.support)

    def index_of(h):
        if not member(h):
            raise ValueError(f"{h} is not in the class")
        return sum(1 << (x - 1) for x in h.support)

    def consistent(S):
        ones = _ones(S)
        if ones is None or not all(1 <= x <= k - 1 for x in ones):
            return None
        return Hypothesis(tuple(ones))

    return EnumeratedClass(
        name=f"cube({k})",
        enumerate=enum,
        member=member,
        find_consistent=consistent,
        index_of=index_of,
        search_bound=lambda S: size - 1,
        size=size,
        meta={"kind": "cube", "k": k},
    )


def class_finite(members: Iterable[Hypothesis], name: str = "finite") -> EnumeratedClass:
    """A finite class listed in the given order (duplicates dropped)."""
    items = list(dict.fromkeys(members))
    if not items:
        raise ValueError("a hypothesis class is nonempty")
    index = {h: i for i, h in enumerate(items)}

    def consistent(S):
        lab = _labels(S)
        if lab is None:
            return None
        for h in items:
            if all(h(x) == y for x, y in lab.items()):
                return h
        return None

    def index_of(h):
        if h not in index:
            raise ValueError(f"{h} is not in the class")
        return index[h]

    return EnumeratedClass(
        name=name,
        enumerate=lambda n: items[n % len(items)],
        member=lambda h: h in index,
        find_consistent=consistent,
        index_of=index_of,
        search_bound=lambda S: len(items) - 1,
        size=len(items),
    )


def class_singleton(h: Hypothesis) -> EnumeratedClass:
    c = class_finite([h], name=f"singleton({set(h.support) or '{}'})")
    return replace(c, meta={"kind": "singleton", "support": list(h.support)})


def relabel_points(
    base: EnumeratedClass,
    forward: Callable[[int], int],
    backward: Callable[[int], Optional[int]],
    name: Optional[str] = None,
) -> EnumeratedClass:
    """Image of ``base`` under an injective point map.

    ``forward`` sends base points to new points; ``backward`` inverts it and
    returns ``None`` off the image.
    """

    def push(h):
        return Hypothesis(tuple(forward(x) for x in h.support))

    def pull(h):
        pts = [backward(x) for x in h.support]
        return None if any(p is None for p in pts) else Hypothesis(tuple(pts))

    def pull_sample(S):
        # points off the image can only carry label 0
        kept = []
        for x, y in S.pairs:
            b = backward(x)
            if b is None:
                if y == 1:
                    return None
            else:
                kept.append((b, y))
        return kept

    def member(h):
        g = pull(h)
        return g is not None and base.member(g)

    def consistent(S):
        if _labels(S) is None:
            return None
        kept = pull_sample(S)
        if kept is None:
            return None
        if not kept:
            # every member vanishes off the image
            return push(base.enumerate(0))
        g = base.find_consistent(LabeledSample(tuple(kept)))
        return None if g is None else push(g)

    def index_of(h):
        g = pull(h)
        if g is None:
            raise ValueError(f"{h} is not in the class")
        return base.index_of(g)

    def bound(S):
        kept = pull_sample(S)
        if not kept:
            return 0
        return base.search_bound(LabeledSample(tuple(kept)))

    return EnumeratedClass(
        name=name or f"relabel({base.name})",
        enumerate=lambda n: push(base.enumerate(n)),
        member=member if base.member else None,
        find_consistent=consistent if base.find_consistent else None,
        index_of=index_of if base.index_of else None,
        search_bound=bound if base.search_bound else None,
        size=base.size,
        meta={"kind": "relabel", "base": base.meta},
    )


def direct_sum(G: EnumeratedClass, H: EnumeratedClass, separator: Callable[[int], bool], name: Optional[str] = None) -> EnumeratedClass:
    """``{g + h}`` for ``g`` in ``G`` (supports where ``separator`` holds) and
    ``h`` in ``H`` (supports where it fails).

    Both classes must contain the zero hypothesis.  Index ``n`` enumerates
    ``G[i] + H[j]`` with ``(i, j) = unpair(n)``; a member violating the side
    condition raises ``ValueError`` when it is reached.
    """

    def check(g, h):
        if not all(separator(x) for x in g.support):
            raise ValueError(f"{g} from {G.name} leaves the separator side")
        if any(separator(x) for x in h.support):
            raise ValueError(f"{h} from {H.name} enters the separator side")

    def enum(n):
        i, j = unpair(n)
        g, h = G.enumerate(i), H.enumerate(j)
        check(g, h)
        return g + h

    def split(h):
        left = Hypothesis(tuple(x for x in h.support if separator(x)))
        right = Hypothesis(tuple(x for x in h.support if not separator(x)))
        return left, right

    def member(h):
        g, r = split(h)
        return G.member(g) and H.member(r)

    def split_sample(S):
        left = tuple(p for p in S.pairs if separator(p[0]))
        right = tuple(p for p in S.pairs if not separator(p[0]))
        return left, right

    def consistent(S):
        left, right = split_sample(S)
        g = G.find_consistent(LabeledSample(left)) if left else ZERO
        if g is None:
            return None
        h = H.find_consistent(LabeledSample(right)) if right else ZERO
        if h is None:
            return None
        check(g, h)
        return g + h

    def index_of(h):
        g, r = split(h)
        return pair(G.index_of(g), H.index_of(r))

    def bound(S):
        left, right = split_sample(S)
        bg = G.search_bound(LabeledSample(left)) if left else 0
        bh = H.search_bound(LabeledSample(right)) if right else 0
        return pair(bg, bh)

    both = lambda a, b: a is not None and b is not None  # noqa: E731
    return EnumeratedClass(
        name=name or f"{G.name} (+) {H.name}",
        enumerate=enum,
        member=member if both(G.member, H.member) else None,
        find_consistent=consistent if both(G.find_consistent, H.find_consistent) else None,
        index_of=index_of if both(G.index_of, H.index_of) else None,
        search_bound=bound if both(G.search_bound, H.search_bound) else None,
        size=G.size * H.size if both(G.size, H.size) else None,
        meta={"kind": "direct_sum", "left": G.meta, "right": H.meta},
    )


def image_class(
    learner: Callable[[LabeledSample], Optional[Hypothesis]],
    samples: Iterable[LabeledSample],
    budget: int,
    domain: Optional[Callable[[LabeledSample], bool]] = None,
) -> EnumeratedClass:
    """The learner's outputs on the first ``budget`` samples, first-seen order."""
    outputs = []
    for S in itertools.islice(samples, budget):
        if domain is not None and not domain(S):
            continue
        try:
            h = learner(S)
        except Exception as exc:  # the learner is undefined here
            log.info("learner undefined on %s: %s", S.pairs, exc)
            continue
        if h is None:
            log.info("learner undefined on %s", S.pairs)
            continue
        outputs.append(h)
    return class_finite(outputs, name="image")


def members_within(cls: EnumeratedClass, D: int) -> list[Hypothesis]:
    """Members with support inside ``[0, D]``, via the membership decider."""
    if cls.member is None:
        raise MissingOracle(f"{cls.name} has no membership decider")
    out = []
    for code in range(1 << (D + 1)):
        h = hfin_list(code)
        if cls.member(h):
            out.append(h)
    return out


def _separator_from_spec(spec) -> Callable[[int], bool]:
    kind = spec.get("kind")
    if kind == "below":
        bound = int(spec["bound"])
        return lambda x: x < bound
    if kind == "even":
        return lambda x: x % 2 == 0
    if kind == "odd":
        return lambda x: x % 2 == 1
    raise ValueError(f"unknown separator kind {kind!r}")


def class_from_spec(spec) -> EnumeratedClass:
    """Build a class from its JSON description (a dict)."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("class spec must be an object with a 'kind'")
    kind = spec["kind"]
    if kind == "hfin":
        return class_hfin()
    if kind == "support_at_most":
        return class_support_at_most(int(spec["k"]))
    if kind == "cube":
        return class_cube(int(spec["k"]))
    if kind == "singleton":
        return class_singleton(Hypothesis(tuple(spec.get("support", []))))
    if kind == "hkl":
        from .hkl import hkl_build

        ell = spec.get("l")
        return hkl_build(int(spec["k"]), float("inf") if ell in (None, "inf") else int(ell),
                         marker=spec.get("marker", "cantor")).as_class()
    if kind == "affine":
        base = class_from_spec(spec["base"])
        a, b = int(spec.get("scale", 1)), int(spec.get("offset", 0))
        if a < 1 or b < 0:
            raise ValueError("affine map needs scale >= 1 and offset >= 0")
        return relabel_points(
            base,
            lambda x: a * x + b,
            lambda x: (x - b) // a if x >= b and (x - b) % a == 0 else None,
            name=f"{a}*{base.name}+{b}",
        )
    if kind == "direct_sum":
        return direct_sum(
            class_from_spec(spec["left"]),
            class_from_spec(spec["right"]),
            _separator_from_spec(spec["separator"]),
        )
    raise ValueError(f"unknown class kind {kind!r}")
