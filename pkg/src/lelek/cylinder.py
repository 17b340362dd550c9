"""Coherent cylinders ``U_1 x ... x U_n x [0,1]^inf`` with ``U_{i+1} = a_i U_i``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .errors import BoundaryCoordinate, EpsilonTooSmall, InvalidCylinder
from .fan import FanPoint, depth_for
from .relation import CONSTRUCTION_BUDGET, SlopePair, _search, as_fraction, fraction_str
from .words import DEPTH_CAP, ConstR, Letter, Word, letters_from, letters_str

Interval = Tuple[Fraction, Fraction]
MEETS_BUDGET = CONSTRUCTION_BUDGET


@dataclass(frozen=True)
class Cylinder:
    """An open cylinder whose intervals are images of ``u1`` under ``word``.

    Besides ``U_i ⊆ (0,1)`` the constructor insists on ``hi/lo <= rho/r`` for
    ``u1`` when the cylinder has letters.  That ratio makes the two choices of
    slope land in disjoint intervals, so every fan point inside follows
    ``word``.
    """

    pair: SlopePair
    depth: int
    u1: Interval
    word: Tuple[Letter, ...]

    def __post_init__(self):
        lo, hi = (as_fraction(v) for v in self.u1)
        object.__setattr__(self, "u1", (lo, hi))
        object.__setattr__(self, "word", letters_from(self.word))
        if self.depth < 1:
            raise InvalidCylinder("depth must be positive")
        if len(self.word) != self.depth - 1:
            raise InvalidCylinder(f"depth {self.depth} needs {self.depth - 1} letters, got {len(self.word)}")
        if not 0 < lo < hi < 1:
            raise InvalidCylinder(f"u1 must satisfy 0 < lo < hi < 1, got ({lo}, {hi})")
        for i in range(2, self.depth + 1):
            a, b = self.interval_at(i)
            if b > 1:
                raise InvalidCylinder(f"U_{i} = ({a}, {b}) leaves (0,1)")
        if self.word and hi * self.pair.r > lo * self.pair.rho:
            raise InvalidCylinder("u1 too wide to force the word (hi/lo > rho/r)")

    def interval_at(self, i: int) -> Interval:
        if not 1 <= i <= self.depth:
            raise IndexError(f"interval index {i} outside 1..{self.depth}")
        lo, hi = self.u1
        for letter in self.word[: i - 1]:
            s = letter.slope(self.pair)
            lo, hi = lo * s, hi * s
        return lo, hi

    def intervals(self) -> list:
        out = [self.u1]
        for letter in self.word:
            s = letter.slope(self.pair)
            out.append((out[-1][0] * s, out[-1][1] * s))
        return out

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "u1": [fraction_str(self.u1[0]), fraction_str(self.u1[1])],
            "word": letters_str(self.word),
        }

    @classmethod
    def from_json(cls, data: dict, pair: SlopePair) -> "Cylinder":
        return cls(pair, int(data["depth"]), tuple(data["u1"]), letters_from(data["word"]))


def contains(c: Cylinder, p: FanPoint) -> bool:
    values = p.coordinates(c.depth)
    inside = all(lo < v < hi for v, (lo, hi) in zip(values, c.intervals()))
    if inside:
        assert p.letters(c.depth - 1) == c.word, "cylinder membership must force the word"
    return inside


def build_cylinder(z: FanPoint, eps, min_depth: int = 1) -> Cylinder:
    """A cylinder around ``z`` of metric diameter below ``eps``.

    Depth is ``max(min_depth, ceil(log2(1/eps)))`` so the free tail is
    metrically negligible.  Around each ``z_i`` we take the window ``O'_i`` of
    half-width ``h``; intersecting the pulled-back windows gives ``W_1`` and the
    cylinder is ``U_1 = W_1``, ``U_{i+1} = a_i U_i``.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    pair = z.pair
    n = max(min_depth, depth_for(eps))
    if n > DEPTH_CAP:
        raise EpsilonTooSmall(f"eps={eps} needs depth {n} beyond the cap")
    zs = z.coordinates(n)
    for i, v in enumerate(zs, start=1):
        if v <= 0 or v >= 1:
            raise BoundaryCoordinate(i, v)
    word = z.letters(n - 1)
    r, rho = pair.r, pair.rho

    candidates = [min(v, 1 - v) / 4 for v in zs]
    candidates += [eps * 2**i / 2 for i in range(1, n + 1)]
    if n > 1:
        delta = min(min(1, rho * v) - r * v for v in zs[:-1])
        candidates.append(delta / 2)
        # keeps hi/lo <= rho/r on U_1
        candidates.append(zs[0] * (rho - r) / (rho + r))
    h = min(candidates) / 2

    # W_n = O'_n, W_i = O'_i ∩ (1/a_i) W_{i+1}
    lo, hi = zs[-1] - h, zs[-1] + h
    for i in range(n - 2, -1, -1):
        s = word[i].slope(pair)
        lo = max(zs[i] - h, lo / s)
        hi = min(zs[i] + h, hi / s)
    return Cylinder(pair, n, (lo, hi), word)


def metric_diameter(c: Cylinder) -> Fraction:
    """Diameter of the cylinder under ``sup_i 2^-i |x_i - y_i|`` (a supremum)."""
    widths = [(b - a) / 2**i for i, (a, b) in enumerate(c.intervals(), start=1)]
    return max(widths + [Fraction(1, 2 ** (c.depth + 1))])


def meets_fan(c: Cylinder, budget: int = MEETS_BUDGET) -> FanPoint:
    """A fan point inside ``c``: a lattice base value in ``u1`` then ``c.word``.

    Windows hugging 1 need large exponents ((0.999, 0.9995) first meets the
    lattice at ``r^1539 rho^971`` for (1/2, 3)), hence the roomier default.
    """
    m, n = _search(c.pair, 0, 0, c.u1[0], c.u1[1], budget)
    p = FanPoint(c.pair, c.pair.value(m, n), Word(c.word, ConstR()))
    if not contains(c, p):
        raise InvalidCylinder("lattice witness fell outside the cylinder")
    return p
