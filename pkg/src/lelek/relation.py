"""Slope pairs, the two-segment relation on [0,1] and the monomial lattice search.

All values are :class:`fractions.Fraction`.  Floating point only appears in
:class:`LogScalar`, which prunes the lattice search; every candidate that
survives pruning is confirmed in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    NCViolation,
    NonPositiveInput,
    OrderViolation,
    OutOfUnitInterval,
    SearchExhausted,
)

DEFAULT_BUDGET = 512
# constructions chain many searches into narrow windows; pruned scans stay cheap
CONSTRUCTION_BUDGET = 2**15

Rational = Union[Fraction, int, str]


def as_fraction(value: Rational) -> Fraction:
    """Parse ``"p/q"`` strings, ints and Fractions into a Fraction.

    Floats are refused so that nothing inexact sneaks into a certificate.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational")
        return Fraction(text)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def fraction_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)


# ---------------------------------------------------------------------------
# log-domain bounds


@dataclass(frozen=True)
class LogScalar:
    """A float approximation of a natural log with an absolute error bound."""

    log_value: float
    err: float

    @classmethod
    def of(cls, value: Fraction) -> "LogScalar":
        if value <= 0:
            raise ValueError("log of a non-positive value")
        ln = math.log(value.numerator)
        ld = math.log(value.denominator)
        # math.log is faithfully rounded; 8 ulps per term is generous.
        err = 8 * 2.0**-52 * (abs(ln) + abs(ld)) + 1e-300
        return cls(ln - ld, err)

    def __add__(self, other: "LogScalar") -> "LogScalar":
        v = self.log_value + other.log_value
        return LogScalar(v, self.err + other.err + 2.0**-52 * abs(v))

    def scale(self, k: int) -> "LogScalar":
        v = k * self.log_value
        return LogScalar(v, abs(k) * self.err + 2.0**-52 * abs(v))

    @property
    def lo(self) -> float:
        return self.log_value - self.err

    @property
    def hi(self) -> float:
        return self.log_value + self.err


# ---------------------------------------------------------------------------
# slope pairs and the NC condition


def _coprime_base(numbers):
    """Refine integers > 1 into a pairwise coprime base using only gcds."""
    base = sorted({n for n in numbers if n > 1})
    changed = True
    while changed:
        changed = False
        for i in range(len(base)):
            for j in range(i + 1, len(base)):
                a, b = base[i], base[j]
                g = math.gcd(a, b)
                if g > 1:
                    rest = [x for t, x in enumerate(base) if t not in (i, j)]
                    base = sorted({x for x in rest + [a // g, b // g, g] if x > 1})
                    changed = True
                    break
            if changed:
                break
    return base


def _exponent(n: int, q: int) -> int:
    e = 0
    while n % q == 0:
        n //= q
        e += 1
    return e


def _log_vector(value: Fraction, base) -> list:
    return [_exponent(value.numerator, q) - _exponent(value.denominator, q) for q in base]


def nc_witness(r: Fraction, rho: Fraction) -> Optional[tuple]:
    """Return ``(k, l) != (0, 0)`` with ``r**k == rho**l`` or None if none exists.

    Works on exponent vectors over a coprime base of the numerators and
    denominators; dependence of the two vectors is exactly a nontrivial
    solution.  The returned witness has ``k > 0``.
    """
    base = _coprime_base([r.numerator, r.denominator, rho.numerator, rho.denominator])
    e = _log_vector(r, base)
    f = _log_vector(rho, base)
    if not any(e):
        return (1, 0)
    if not any(f):
        return (0, 1)
    # rank one iff every 2x2 minor vanishes
    for i in range(len(base)):
        for j in range(i + 1, len(base)):
            if e[i] * f[j] != e[j] * f[i]:
                return None
    p = next(i for i, v in enumerate(e) if v)
    k, l = f[p], e[p]
    g = math.gcd(k, l)
    k, l = k // g, l // g
    if k < 0:
        k, l = -k, -l
    return (k, l)


@dataclass(frozen=True)
class SlopePair:
    """Validated slopes ``0 < r < 1 < rho`` that never connect.

    Build instances through :func:`validate_nc`; the constructor does not
    re-check the NC condition.
    """

    r: Fraction
    rho: Fraction

    def value(self, m: int, n: int) -> Fraction:
        r, p = self.r, self.rho
        return Fraction(
            r.numerator**m * p.numerator**n,
            r.denominator**m * p.denominator**n,
        )

    @property
    def log_r(self) -> LogScalar:
        return LogScalar.of(self.r)

    @property
    def log_rho(self) -> LogScalar:
        return LogScalar.of(self.rho)

    def to_json(self) -> dict:
        return {"r": fraction_str(self.r), "rho": fraction_str(self.rho)}

    @classmethod
    def from_json(cls, data: dict) -> "SlopePair":
        return validate_nc(data["r"], data["rho"])


def validate_nc(r: Rational, rho: Rational) -> SlopePair:
    r, rho = as_fraction(r), as_fraction(rho)
    if r <= 0 or rho <= 0:
        raise NonPositiveInput(f"slopes must be positive, got r={r}, rho={rho}")
    if not (r < 1 < rho):
        raise OrderViolation(f"need r < 1 < rho, got r={r}, rho={rho}")
    witness = nc_witness(r, rho)
    if witness is not None:
        raise NCViolation(witness)
    return SlopePair(r, rho)


DEFAULT_PAIR = SlopePair(Fraction(1, 2), Fraction(3))


def relation_contains(pair: SlopePair, x: Rational, y: Rational) -> bool:
    """Is ``(x, y)`` on one of the two segments ``y = r x`` or ``y = rho x``?"""
    x, y = as_fraction(x), as_fraction(y)
    for v in (x, y):
        if not 0 <= v <= 1:
            raise OutOfUnitInterval(f"{v} is outside [0,1]")
    return y == pair.r * x or y == pair.rho * x


# ---------------------------------------------------------------------------
# monomial lattice search


@dataclass(frozen=True)
class Monomial:
    m: int
    n: int

    def value(self, pair: SlopePair) -> Fraction:
        return pair.value(self.m, self.n)


@dataclass(frozen=True)
class SearchConstraint:
    k_floor: int
    l_floor: int
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.k_floor < 0 or self.l_floor < 0:
            raise ValueError("exponent floors must be nonnegative")
        if not 0 < self.lo < self.hi:
            raise ValueError(f"target must satisfy 0 < lo < hi, got ({self.lo}, {self.hi})")


def _search(pair, k_floor, l_floor, lo, hi, budget, prune=True):
    """Smallest ``m + n`` (then smallest ``n``) with ``lo < r^m rho^n < hi``.

    ``lo`` may be 0 here (open at zero); the public entry point requires
    ``lo > 0``.  Along a diagonal ``m + n = s`` the log-value is affine and
    increasing in ``n``, so the admissible ``n`` form one window; pruning
    computes that window from log bounds widened by their error terms.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    A, B = pair.log_r, pair.log_rho
    slope = B.log_value - A.log_value
    log_lo = LogScalar.of(lo) if lo > 0 else None
    log_hi = LogScalar.of(hi)
    start = k_floor + l_floor
    top = 2 * budget
    for s in range(start, top + 1):
        n_min = max(l_floor, s - budget)
        n_max = min(budget, s - k_floor)
        if n_min > n_max:
            continue
        if prune:
            base = A.scale(s)
            slack = base.err + log_hi.err + (log_lo.err if log_lo else 0.0)
            slack += 1e-9 * (1.0 + abs(base.log_value) + abs(log_hi.log_value))
            slack += s * (A.err + B.err)
            if log_lo is not None:
                n_min = max(n_min, math.ceil((log_lo.log_value - base.log_value - slack) / slope))
            n_max = min(n_max, math.floor((log_hi.log_value - base.log_value + slack) / slope))
        for n in range(n_min, n_max + 1):
            v = pair.value(s - n, n)
            if lo < v < hi:
                return s - n, n
    raise SearchExhausted(budget, top)


def find_monomial(
    pair: SlopePair,
    constraint: SearchConstraint,
    budget: int = DEFAULT_BUDGET,
    prune: bool = True,
) -> Monomial:
    """Deterministic lattice witness inside an open target interval.

    Returns the monomial ``r^m rho^n`` with ``m >= k_floor``, ``n >= l_floor``,
    ``max(m, n) <= budget`` minimising ``m + n`` and then ``n``.
    """
    c = constraint
    m, n = _search(pair, c.k_floor, c.l_floor, c.lo, c.hi, budget, prune)
    return Monomial(m, n)


def find_monomial_above(pair, k_from, l_from, lo, hi, budget=DEFAULT_BUDGET):
    """Strictly larger exponents than ``(k_from, l_from)`` landing in ``(lo, hi)``.

    The budget bounds the increments, not the absolute exponents, so long
    constructions that keep raising their floors do not run out of room.
    Minimality in ``(m + n, n)`` is the same as a floored search.
    """
    base = pair.value(k_from + 1, l_from + 1)
    dm, dn = _search(pair, 0, 0, lo / base, hi / base, budget)
    return Monomial(k_from + 1 + dm, l_from + 1 + dn)


@dataclass(frozen=True)
class BinWitness:
    lo: Fraction
    hi: Fraction
    monomial: Optional[Monomial]
    value: Optional[Fraction]

    @property
    def filled(self) -> bool:
        return self.monomial is not None


def density_profile(pair: SlopePair, bins: int, floors=(0, 0), budget: int = DEFAULT_BUDGET):
    """One lattice witness per sub-interval ``((i-1)/bins, i/bins)`` of (0,1)."""
    if bins < 1:
        raise ValueError("bins must be positive")
    k, l = floors
    out = []
    for i in range(1, bins + 1):
        lo, hi = Fraction(i - 1, bins), Fraction(i, bins)
        try:
            m, n = _search(pair, k, l, lo, hi, budget)
        except SearchExhausted:
            out.append(BinWitness(lo, hi, None, None))
        else:
            out.append(BinWitness(lo, hi, Monomial(m, n), pair.value(m, n)))
    return out
