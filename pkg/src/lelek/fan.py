"""Points of the Mahavier product ``M_{r,rho}`` and the shift on it.

A point is a base value ``x`` together with the word of slopes that carries
each coordinate to the next: ``(x, a1 x, a1 a2 x, ...)``.  With ``x == 0`` the
point is the vertex regardless of the word.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DepthOverflow
from .relation import SearchConstraint, SlopePair, _search, as_fraction, fraction_str
from .words import (
    DEPTH_CAP,
    ClimbToOne,
    ConstP,
    ConstR,
    Periodic,
    Word,
    product,
    running_products,
)


@dataclass(frozen=True)
class FanPoint:
    pair: SlopePair
    x: Fraction
    word: Word = Word()

    def __post_init__(self):
        object.__setattr__(self, "x", as_fraction(self.x))

    @property
    def is_vertex(self) -> bool:
        return self.x == 0

    def letters(self, count: int):
        return self.word.letters(count, self.pair, self.x)

    def coordinates(self, depth: int) -> list:
        """Exact coordinates ``1..depth``."""
        if depth > DEPTH_CAP:
            raise DepthOverflow(f"depth {depth} exceeds cap {DEPTH_CAP}")
        if self.is_vertex:
            return [Fraction(0)] * depth
        out = [self.x]
        for letter in self.letters(max(depth - 1, 0)):
            out.append(out[-1] * letter.slope(self.pair))
        return out[:depth]

    def to_json(self) -> dict:
        return {"x": fraction_str(self.x), "word": self.word.to_json()}

    @classmethod
    def from_json(cls, data: dict, pair: SlopePair) -> "FanPoint":
        return cls(pair, as_fraction(data["x"]), Word.from_json(data.get("word", {})))


def vertex(pair: SlopePair) -> FanPoint:
    return FanPoint(pair, Fraction(0))


def coordinate(p: FanPoint, i: int) -> Fraction:
    """The ``i``-th coordinate (1-based), ``x`` times the first ``i-1`` slopes."""
    if i < 1:
        raise ValueError("coordinates are indexed from 1")
    if i > DEPTH_CAP:
        raise DepthOverflow(f"index {i} exceeds cap {DEPTH_CAP}")
    if p.is_vertex:
        return Fraction(0)
    return p.x * product(p.pair, p.letters(i - 1))


def validate_point(p: FanPoint, depth: int) -> Optional[int]:
    """None when coordinates ``1..depth`` lie in [0,1], else the first bad index."""
    if p.is_vertex:
        return None
    for i, v in enumerate(p.coordinates(depth), start=1):
        if not 0 <= v <= 1:
            return i
    return None


def shift(p: FanPoint) -> FanPoint:
    if p.is_vertex:
        return p
    first = p.word.first(p.pair, p.x)
    return FanPoint(p.pair, p.x * first.slope(p.pair), p.word.drop_first(p.pair, p.x))


# ---------------------------------------------------------------------------
# endpoints


class EndpointKind(enum.Enum):
    ENDPOINT = "endpoint"
    NOT_ENDPOINT = "not-endpoint"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EndpointClass:
    kind: EndpointKind
    checked_depth: Optional[int] = None

    def to_json(self) -> dict:
        out = {"class": self.kind.value}
        if self.checked_depth is not None:
            out["checked_depth"] = self.checked_depth
        return out


ENDPOINT = EndpointClass(EndpointKind.ENDPOINT)
NOT_ENDPOINT = EndpointClass(EndpointKind.NOT_ENDPOINT)


def forward_sup(pair: SlopePair, x: Fraction, word: Word, depth: int):
    """Analyse ``sup_n x * (a1...an)`` (including ``x`` itself).

    Returns ``("one", None)`` when the sup is 1, ``("below", s)`` with the exact
    sup ``s < 1`` when the tail bounds it, or ``("open", m)`` with the max
    ``m`` over the first ``depth`` values when nothing can be concluded.
    Only the first ``depth`` values are ever examined.
    """
    tail = word.tail
    if isinstance(tail, ConstP):
        needed = None
    elif isinstance(tail, ConstR):
        needed = len(word.prefix) + 1
    elif isinstance(tail, Periodic):
        start = x * product(pair, word.prefix)
        if product(pair, tail.word) < 1 and start > 0:
            needed = len(word.prefix) + len(tail.word) + 1
        else:
            needed = None
    else:
        needed = len(word.prefix) + 1
    horizon = depth if needed is None else min(depth, needed)
    values = running_products(word, pair, x, horizon)
    best = max(x * v for v in values)
    if best == 1:
        return "one", None
    if needed is None or needed > depth:
        return "open", best
    if isinstance(tail, ClimbToOne):
        # the climb ends every stage inside (1 - 2^-j, 1)
        return ("one", None) if x > 0 else ("below", Fraction(0))
    return "below", best


def classify_endpoint(p: FanPoint, depth: int, tol: Fraction = Fraction(1, 10**6)) -> EndpointClass:
    """Three-valued endpoint test via ``sup_n pi_n(p) == 1``.

    Only tails whose supremum can be decided from finitely many values
    (constant R, contracting periodic, climb) ever return a definite answer;
    ``tol`` is reported for tails without an analytic bound and never turns
    a guess into a verdict.
    """
    if p.is_vertex:
        return NOT_ENDPOINT
    status, value = forward_sup(p.pair, p.x, p.word, depth)
    if status == "one":
        return ENDPOINT
    if status == "below":
        return NOT_ENDPOINT
    return EndpointClass(EndpointKind.UNKNOWN, depth)


def make_endpoint(pair: SlopePair, seed: SearchConstraint, budget: int = 512) -> FanPoint:
    """An endpoint with a lattice base value in ``seed``'s target and a climb tail."""
    hi = min(seed.hi, Fraction(1))
    if not seed.lo < hi:
        raise ValueError("endpoint seed target does not meet (0,1)")
    m, n = _search(pair, seed.k_floor, seed.l_floor, seed.lo, hi, budget)
    return FanPoint(pair, pair.value(m, n), Word((), ClimbToOne()))


# ---------------------------------------------------------------------------
# metric and arcs


@dataclass(frozen=True)
class ProductMetricValue:
    value: Fraction
    tail_bound: Fraction


def metric_d(p: FanPoint, q: FanPoint, depth: int) -> ProductMetricValue:
    """``sup_{i<=depth} 2^-i |p_i - q_i|`` with the bound ``2^-depth`` on the rest."""
    best = Fraction(0)
    for i, (a, b) in enumerate(zip(p.coordinates(depth), q.coordinates(depth)), start=1):
        d = abs(a - b) / 2**i
        if d > best:
            best = d
    return ProductMetricValue(best, Fraction(1, 2**depth))


def depth_for(eps: Fraction) -> int:
    """Smallest ``n >= 0`` with ``2**n * eps >= 1``."""
    n = 0
    while 2**n * eps < 1:
        n += 1
    return n


def arc_sample(pair: SlopePair, word: Word, depth: int, samples: int):
    """Sample the segment ``{(t, a1 t, a1 a2 t, ...)}`` inside ``M_{r,rho}``.

    ``t`` runs over an even grid of ``[0, t_max]``, where ``t_max`` is one over
    the largest running product in the first ``depth`` coordinates.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    if isinstance(word.tail, ClimbToOne) and word.tail.anchor is None:
        raise ValueError("a climb tail needs an explicit anchor to be sampled as an arc")
    prods = running_products(word, pair, Fraction(1), depth)
    t_max = 1 / max(prods)
    out = []
    for j in range(samples):
        t = t_max * Fraction(j, samples - 1)
        out.append(tuple(t * v for v in prods))
    return t_max, out

