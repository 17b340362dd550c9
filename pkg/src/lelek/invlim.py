"""The inverse limit ``M`` of the shift on ``M_{r,rho}`` in ``(x, a, c)`` coordinates.

A non-vertex point of ``M`` is a base value ``x``, a forward word ``a`` and a
backward word ``c``.  Its ``k``-th level is the fan point

    (x/(c_{k-1}...c_1), ..., x/c_1, x, a_1 x, a_2 a_1 x, ...)

and the shift ``sigma`` moves every level down by one:
``(x, a, c) -> (x/c_1, (c_1) + a, c_2 c_3 ...)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .errors import HorizonExceeded, InconsistentConstraints, InvalidEps, LelekError
from .fan import (
    ENDPOINT,
    NOT_ENDPOINT,
    EndpointClass,
    EndpointKind,
    FanPoint,
    depth_for,
    forward_sup,
)
from .relation import CONSTRUCTION_BUDGET, DEFAULT_BUDGET, SlopePair, _search, as_fraction, fraction_str
from .words import (
    DEPTH_CAP,
    ClimbToOne,
    ConstP,
    ConstR,
    Letter,
    P,
    Periodic,
    R,
    Word,
    letters_from,
    normalize,
    product,
)


@dataclass(frozen=True)
class InvLimPoint:
    """A point of ``M``; ``x == 0`` is the vertex ``O`` and ignores the words."""

    pair: SlopePair
    x: Fraction
    a: Word = Word()
    c: Word = Word((), ConstP())

    def __post_init__(self):
        object.__setattr__(self, "x", as_fraction(self.x))

    @property
    def is_vertex(self) -> bool:
        return self.x == 0

    def forward_letters(self, count: int):
        return self.a.letters(count, self.pair, self.x)

    def backward_letters(self, count: int):
        # a climb makes no sense backwards; its anchor is taken as x
        return self.c.letters(count, self.pair, self.x)

    def level(self, k: int) -> FanPoint:
        """The ``k``-th level as a fan point (depth unlimited)."""
        if self.is_vertex:
            return FanPoint(self.pair, Fraction(0))
        back = self.backward_letters(k - 1)
        x = self.x / product(self.pair, back)
        word = self.a
        for letter in back:
            word = word.prepend(letter)
        return FanPoint(self.pair, x, word)

    def normalized(self) -> "InvLimPoint":
        if self.is_vertex:
            return vertex(self.pair)
        return InvLimPoint(
            self.pair,
            self.x,
            normalize(self.a, self.pair, self.x),
            normalize(self.c, self.pair, self.x),
        )

    def to_json(self) -> dict:
        if self.is_vertex:
            return {"kind": "vertex"}
        return {
            "kind": "regular",
            "x": fraction_str(self.x),
            "a": self.a.to_json(),
            "c": self.c.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict, pair: SlopePair) -> "InvLimPoint":
        if data.get("kind") == "vertex":
            return vertex(pair)
        return cls(pair, as_fraction(data["x"]), Word.from_json(data["a"]), Word.from_json(data["c"]))


def vertex(pair: SlopePair) -> InvLimPoint:
    return InvLimPoint(pair, Fraction(0))


def k_coordinate(p: InvLimPoint, k: int, depth: int) -> Tuple[Fraction, ...]:
    """First ``depth`` coordinates of the ``k``-th level of ``p``."""
    if k < 1 or depth < 0:
        raise ValueError("levels start at 1")
    if k > DEPTH_CAP or depth > DEPTH_CAP:
        raise HorizonExceeded(f"level {k} / depth {depth} beyond the cap {DEPTH_CAP}")
    if p.is_vertex:
        return (Fraction(0),) * depth
    back = [p.x]
    for letter in p.backward_letters(k - 1):
        back.append(back[-1] / letter.slope(p.pair))
    out = back[::-1][:depth]
    if len(out) < depth:
        v = p.x
        for letter in p.forward_letters(depth - len(out)):
            v = v * letter.slope(p.pair)
            out.append(v)
    return tuple(out)


# ---------------------------------------------------------------------------
# validity of (x, a, c)


class PairStatus(enum.Enum):
    VALID = "valid"
    INVALID = "invalid"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class UsefulPairTag:
    horizon: int
    status: PairStatus
    witness: Optional[Tuple[str, int]] = None

    def to_json(self) -> dict:
        out = {"status": self.status.value, "horizon": self.horizon}
        if self.witness is not None:
            out["witness"] = {"side": self.witness[0], "index": self.witness[1]}
        return out


def _first_excess(values_iter, limit):
    for i, v in enumerate(values_iter, start=1):
        if i > limit:
            return None
        if v > 1:
            return i
    return None


def _forward_values(p: InvLimPoint):
    v = p.x
    i = 0
    while True:
        yield v
        letter = p.forward_letters(i + 1)[i]
        v = v * letter.slope(p.pair)
        i += 1


def _backward_values(p: InvLimPoint):
    v = p.x
    i = 0
    while True:
        letter = p.backward_letters(i + 1)[i]
        v = v / letter.slope(p.pair)
        yield v
        i += 1


def backward_sup(pair: SlopePair, x: Fraction, c: Word, horizon: int):
    """Analyse ``sup_k x/(c_k...c_1)`` like :func:`forward_sup` does forwards.

    Returns ``("below_or_equal", s)`` with the exact sup when the tail
    shrinks the values (constant P, or a period whose product exceeds 1),
    ``("grows", None)`` when it blows up, ``("open", None)`` otherwise.
    """
    tail = c.tail
    if isinstance(tail, ConstP):
        needed = len(c.prefix) + 1
    elif isinstance(tail, Periodic) and product(pair, tail.word) > 1:
        needed = len(c.prefix) + len(tail.word)
    elif isinstance(tail, ConstR) or isinstance(tail, Periodic):
        return "grows", None
    else:
        return "open", None
    if needed > horizon:
        return "open", None
    v, best = x, Fraction(0)
    for letter in c.letters(needed, pair, x):
        v = v / letter.slope(pair)
        best = max(best, v)
    return "bounded", best


def validate_invlim(p: InvLimPoint, horizon: int = 64) -> UsefulPairTag:
    """Decide whether ``(x, a, c)`` describes a point of ``M``.

    Every coordinate must lie in [0,1].  Tail rules decide the infinite part:
    a backward constant-P or expanding periodic tail keeps shrinking, a
    backward constant-R tail (or contracting period) eventually exceeds 1 and
    is rejected with the first offending level.
    """
    if p.is_vertex:
        return UsefulPairTag(horizon, PairStatus.VALID)
    if not 0 < p.x <= 1:
        return UsefulPairTag(horizon, PairStatus.INVALID, ("base", 0))
    unknown = False

    status, best = forward_sup(p.pair, p.x, p.a, horizon)
    if status == "open":
        bad = _first_excess(_forward_values(p), horizon)
        if bad is not None:
            return UsefulPairTag(horizon, PairStatus.INVALID, ("forward", bad))
        unknown = True
    elif status == "below" and best > 1:
        bad = _first_excess(_forward_values(p), horizon)
        return UsefulPairTag(horizon, PairStatus.INVALID, ("forward", bad))
    elif status == "one":
        # the sup is 1; make sure no earlier value overshoots
        prefix_len = len(p.a.prefix) + 1
        bad = _first_excess(_forward_values(p), min(prefix_len, horizon))
        if bad is not None:
            return UsefulPairTag(horizon, PairStatus.INVALID, ("forward", bad))

    status, best = backward_sup(p.pair, p.x, p.c, horizon)
    if status == "bounded":
        if best > 1:
            bad = _first_excess(_backward_values(p), horizon)
            return UsefulPairTag(horizon, PairStatus.INVALID, ("backward", bad))
    elif status == "grows":
        bad = _first_excess(_backward_values(p), DEPTH_CAP)
        return UsefulPairTag(horizon, PairStatus.INVALID, ("backward", bad))
    else:
        bad = _first_excess(_backward_values(p), horizon)
        if bad is not None:
            return UsefulPairTag(horizon, PairStatus.INVALID, ("backward", bad))
        unknown = True
    return UsefulPairTag(horizon, PairStatus.UNKNOWN if unknown else PairStatus.VALID)


# ---------------------------------------------------------------------------
# the shift homeomorphism


def shift_forward(p: InvLimPoint) -> InvLimPoint:
    if p.is_vertex:
        return p
    c1 = p.c.first(p.pair, p.x)
    x = p.x / c1.slope(p.pair)
    return InvLimPoint(p.pair, x, p.a.prepend(c1), p.c.drop_first(p.pair, p.x)).normalized()


def shift_backward(p: InvLimPoint) -> InvLimPoint:
    if p.is_vertex:
        return p
    a1 = p.a.first(p.pair, p.x)
    x = p.x * a1.slope(p.pair)
    return InvLimPoint(p.pair, x, p.a.drop_first(p.pair, p.x), p.c.prepend(a1)).normalized()


# ---------------------------------------------------------------------------
# endpoints and the metric


def classify_endpoint_invlim(p: InvLimPoint, horizon: int = 64, tol: Fraction = Fraction(1, 10**6)) -> EndpointClass:
    """Endpoint of ``M`` iff the sup over all levels' coordinates is 1."""
    if p.is_vertex:
        return NOT_ENDPOINT
    f_status, f_best = forward_sup(p.pair, p.x, p.a, horizon)
    if f_status == "one":
        return ENDPOINT
    b_status, b_best = backward_sup(p.pair, p.x, p.c, horizon)
    if b_status == "bounded" and b_best == 1:
        return ENDPOINT
    if f_status == "below" and b_status == "bounded":
        return NOT_ENDPOINT
    if b_status != "bounded":
        # look for an exact 1 among the examined backward values
        for i, v in enumerate(_backward_values(p), start=1):
            if i > horizon or v > 1:
                break
            if v == 1:
                return ENDPOINT
    return EndpointClass(EndpointKind.UNKNOWN, horizon)


@dataclass(frozen=True)
class MetricD:
    value: Fraction
    tail_bound: Fraction


def metric_D(p: InvLimPoint, q: InvLimPoint, horizon: int = 24) -> MetricD:
    """``max_n d(p_n, q_n) / 2^n`` over ``n <= horizon``, truncated at ``horizon``.

    Levels beyond the horizon and coordinates beyond it inside each level
    together change the value by at most ``2^-horizon``.
    """
    best = Fraction(0)
    for n in range(1, horizon + 1):
        a = k_coordinate(p, n, horizon)
        b = k_coordinate(q, n, horizon)
        d = max((abs(u - v) / 2**i for i, (u, v) in enumerate(zip(a, b), start=1)), default=Fraction(0))
        d = d / 2**n
        if d > best:
            best = d
    return MetricD(best, Fraction(1, 2**horizon))


def backward_inf(pair: SlopePair, c: Word) -> Fraction:
    """``inf_n c_n ... c_1`` for tails that shrink backward values."""
    tail = c.tail
    if isinstance(tail, ConstP):
        n = len(c.prefix) + 1
    elif isinstance(tail, Periodic) and product(pair, tail.word) > 1:
        n = len(c.prefix) + len(tail.word)
    else:
        raise ValueError("backward tail has no positive infimum")
    prods, v = [], Fraction(1)
    for letter in c.letters(n, pair, Fraction(1)):
        v = v * letter.slope(pair)
        prods.append(v)
    return min(prods)


def _check_endpoint_near(t, out, eps, horizon):
    if classify_endpoint_invlim(out, horizon).kind is not EndpointKind.ENDPOINT:
        return False
    d = metric_D(t, out, horizon)
    return d.value + d.tail_bound < eps


def endpoint_near(t: InvLimPoint, eps, budget: int = DEFAULT_BUDGET, horizon: int = 24) -> InvLimPoint:
    """An endpoint of ``M`` within ``D``-distance ``eps`` of ``t``.

    For the vertex the endpoint is pushed back along constant-P backward
    letters until it is close to ``O``.  Otherwise its base value is a lattice
    point just below ``t``'s, it follows ``t``'s forward word long enough to be
    metrically close, then climbs to 1; it keeps ``t``'s backward word.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise InvalidEps(f"eps must be positive, got {eps}")
    eps = min(eps, Fraction(1, 2))
    if eps * 2**horizon <= 2:
        raise InvalidEps(f"eps={eps} is below what horizon {horizon} can certify")
    pair = t.pair
    if not t.is_vertex and classify_endpoint_invlim(t, horizon).kind is EndpointKind.ENDPOINT:
        return t

    if t.is_vertex:
        # e_1 in (1/(2 rho), 1/rho), then n backward P steps
        m, n = _search(pair, 0, 0, 1 / (2 * pair.rho), 1 / pair.rho, budget)
        e1 = pair.value(m, n)
        for steps in range(1, horizon + 2):
            x = e1 / pair.rho**steps
            out = InvLimPoint(pair, x, Word((P,) * steps, ClimbToOne()), Word((), ConstP()))
            if _check_endpoint_near(t, out, eps, horizon):
                return out
        raise LelekError("no vertex approximation certified within the horizon")

    inf_c = backward_inf(pair, t.c)
    depth = depth_for(eps) + 3
    bound = min(inf_c * eps / 2, t.x * eps / 4)
    for _ in range(64):
        lo = max(t.x - bound, Fraction(0))
        m, n = _search(pair, 0, 0, lo, t.x, max(budget, 4 * depth))
        e1 = pair.value(m, n)
        prefix = t.forward_letters(depth)
        out = InvLimPoint(pair, e1, Word(prefix, ClimbToOne()), t.c).normalized()
        if _check_endpoint_near(t, out, eps, horizon):
            return out
        bound /= 2
        depth += 2
    raise LelekError("endpoint approximation did not certify")


# ---------------------------------------------------------------------------
# transitivity witnesses on M


@dataclass(frozen=True)
class InvLimCylinder:
    """Points with base in ``(lo, hi)`` whose words start with the given prefixes."""

    lo: Fraction
    hi: Fraction
    forward: Tuple[Letter, ...] = ()
    backward: Tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        object.__setattr__(self, "forward", letters_from(self.forward))
        object.__setattr__(self, "backward", letters_from(self.backward))

    def effective(self, pair: SlopePair):
        """The sub-interval of bases for which both prefixes stay in [0,1]."""
        hi = min(self.hi, Fraction(1))
        v = Fraction(1)
        for letter in self.forward:
            v = v * letter.slope(pair)
            hi = min(hi, 1 / v)
        v = Fraction(1)
        for letter in self.backward:
            v = v * letter.slope(pair)
            hi = min(hi, v)
        lo = max(self.lo, Fraction(0))
        if not lo < hi:
            raise InconsistentConstraints(f"no admissible base in ({self.lo}, {self.hi}) for these prefixes")
        return lo, hi

    def contains(self, p: InvLimPoint) -> bool:
        if p.is_vertex:
            return False
        n_f, n_b = len(self.forward), len(self.backward)
        return (
            self.lo < p.x < self.hi
            and p.forward_letters(n_f) == self.forward
            and p.backward_letters(n_b) == self.backward
        )


def shift_forward_n(p: InvLimPoint, n: int) -> InvLimPoint:
    for _ in range(n):
        p = shift_forward(p)
    return p


def witness_transitivity_invlim(pair: SlopePair, u: InvLimCylinder, v: InvLimCylinder, budget: int = CONSTRUCTION_BUDGET):
    """``(n, p)`` with ``p`` in ``u`` and ``sigma^n(p)`` in ``v``.

    The backward word of ``p`` is ``u.backward + F + reversed(v.forward) +
    v.backward`` followed by constant P, so that ``n`` shifts bring ``v``'s
    forward prefix to the front.  The free block ``F`` (P letters first,
    then R) is a lattice monomial that puts the base ratio ``x / x'`` in
    ``(lo_u/hi_v, hi_u/lo_v)``.
    """
    ulo, uhi = u.effective(pair)
    vlo, vhi = v.effective(pair)
    fixed = product(pair, u.backward) * product(pair, v.forward)
    m, n = _search(pair, 0, 0, ulo / (vhi * fixed), uhi / (vlo * fixed), budget)
    free = (P,) * n + (R,) * m
    ratio = fixed * pair.value(m, n)
    lo, hi = max(ulo, ratio * vlo), min(uhi, ratio * vhi)
    x = (lo + hi) / 2
    back = u.backward + free + tuple(reversed(v.forward)) + v.backward
    p = InvLimPoint(pair, x, Word(u.forward, ConstR()), Word(back, ConstP()))
    steps = len(u.backward) + len(free) + len(v.forward)
    later = shift_forward_n(p, steps)
    if validate_invlim(p).status is not PairStatus.VALID:
        raise LelekError("spliced witness left M")
    if not (u.contains(p) and v.contains(later)):
        raise LelekError("spliced witness misses a cylinder")
    return steps, p
