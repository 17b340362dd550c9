"""Finite presentations of infinite words over the two slopes.

A :class:`Word` is a finite prefix followed by a tail rule.  Tails are
constant, periodic, or a *climb*: the word that repeatedly pushes the running
value into ``(1 - 2**-j, 1)`` for ``j = 1, 2, 3, ...``.  A climb depends on the
running value where it starts (its anchor), so letter expansion takes the
value at the start of the word as an argument.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple, Union

from .errors import DepthOverflow
from .relation import SlopePair, _search, as_fraction, fraction_str

DEPTH_CAP = 2**16


class Letter(enum.IntEnum):
    """Multiplication by ``r`` (R) or by ``rho`` (P); R sorts before P."""

    R = 0
    P = 1

    def slope(self, pair: SlopePair) -> Fraction:
        return pair.r if self is Letter.R else pair.rho

    def flip(self) -> "Letter":
        return Letter.P if self is Letter.R else Letter.R


R, P = Letter.R, Letter.P


def letters_from(seq) -> Tuple[Letter, ...]:
    out = []
    for ch in seq:
        if isinstance(ch, Letter):
            out.append(ch)
        elif ch in ("R", "r"):
            out.append(R)
        elif ch in ("P", "p", "rho"):
            out.append(P)
        else:
            raise ValueError(f"unknown letter {ch!r}")
    return tuple(out)


def letters_str(seq) -> list:
    return [letter.name for letter in seq]


def product(pair: SlopePair, seq) -> Fraction:
    a = sum(1 for x in seq if x is R)
    b = len(seq) - a
    return pair.value(a, b)


# ---------------------------------------------------------------------------
# tail rules


@dataclass(frozen=True)
class ConstR:
    kind = "const-r"


@dataclass(frozen=True)
class ConstP:
    kind = "const-p"


@dataclass(frozen=True)
class Periodic:
    word: Tuple[Letter, ...]
    kind = "periodic"

    def __post_init__(self):
        object.__setattr__(self, "word", letters_from(self.word))
        if not self.word:
            raise ValueError("periodic tail needs a nonempty word")


@dataclass(frozen=True)
class ClimbToOne:
    """Climb toward 1 through the targets ``(1 - 2**-j, 1)``.

    ``anchor`` is the running value where the climb expansion starts; None
    means "the value reached at the end of the prefix".  ``skip`` letters of
    the expansion have already been consumed (by shifting).
    """

    anchor: Optional[Fraction] = None
    skip: int = 0
    kind = "climb"


TailRule = Union[ConstR, ConstP, Periodic, ClimbToOne]


class _Climb:
    """Lazily generated climb letters from a fixed anchor value."""

    def __init__(self, pair: SlopePair, anchor: Fraction):
        self.pair = pair
        self.anchor = anchor
        self.letters: list = []
        self.level = 1
        self.m = 0
        self.n = 0

    def extend(self, count: int):
        if self.anchor == 0:
            self.letters.extend([R] * (count - len(self.letters)))
            return
        while len(self.letters) < count:
            scale = 2**self.level
            lo = Fraction(scale - 1, scale) / self.anchor
            hi = 1 / self.anchor
            m, n = _search(self.pair, self.m + 1, self.n + 1, lo, hi, DEPTH_CAP)
            self.letters.extend([R] * (m - self.m))
            self.letters.extend([P] * (n - self.n))
            self.m, self.n = m, n
            self.level += 1

    def get(self, start: int, count: int):
        self.extend(start + count)
        return self.letters[start : start + count]


@lru_cache(maxsize=4096)
def _climb(pair: SlopePair, anchor: Fraction) -> _Climb:
    return _Climb(pair, anchor)


def climb_levels(pair: SlopePair, anchor: Fraction, count: int):
    """Exponent pairs reached at the end of each climb stage (for checks)."""
    c = _climb(pair, anchor)
    c.extend(count)
    return c.m, c.n, c.level - 1


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class Word:
    prefix: Tuple[Letter, ...] = ()
    tail: TailRule = field(default_factory=ConstR)

    def __post_init__(self):
        object.__setattr__(self, "prefix", letters_from(self.prefix))

    def letters(self, count: int, pair: SlopePair, start: Fraction) -> Tuple[Letter, ...]:
        """The first ``count`` letters; ``start`` is the value the word acts on."""
        if count > DEPTH_CAP:
            raise DepthOverflow(f"{count} letters exceeds the depth cap {DEPTH_CAP}")
        head = self.prefix[:count]
        rest = count - len(head)
        if rest <= 0:
            return head
        t = self.tail
        if isinstance(t, ConstR):
            return head + (R,) * rest
        if isinstance(t, ConstP):
            return head + (P,) * rest
        if isinstance(t, Periodic):
            w = t.word
            reps = rest // len(w) + 1
            return head + (w * reps)[:rest]
        anchor = self.climb_anchor(pair, start)
        return head + tuple(_climb(pair, anchor).get(t.skip, rest))

    def climb_anchor(self, pair: SlopePair, start: Fraction) -> Fraction:
        t = self.tail
        if t.anchor is not None:
            return t.anchor
        return start * product(pair, self.prefix)

    def prepend(self, letter: Letter) -> "Word":
        return Word((letter,) + self.prefix, self.tail)

    def drop_first(self, pair: SlopePair, start: Fraction) -> "Word":
        """The word without its first letter (the word seen one step later)."""
        if self.prefix:
            return Word(self.prefix[1:], self.tail)
        t = self.tail
        if isinstance(t, Periodic):
            return Word((), Periodic(t.word[1:] + t.word[:1]))
        if isinstance(t, ClimbToOne):
            anchor = self.climb_anchor(pair, start)
            return Word((), ClimbToOne(anchor, t.skip + 1))
        return self

    def first(self, pair: SlopePair, start: Fraction) -> Letter:
        return self.letters(1, pair, start)[0]

    def to_json(self) -> dict:
        t = self.tail
        if isinstance(t, Periodic):
            data = letters_str(t.word)
        elif isinstance(t, ClimbToOne):
            data = {
                "anchor": None if t.anchor is None else fraction_str(t.anchor),
                "skip": t.skip,
            }
        else:
            data = None
        return {"prefix": letters_str(self.prefix), "tail": {"kind": t.kind, "data": data}}

    @classmethod
    def from_json(cls, data: dict) -> "Word":
        tail = data.get("tail") or {"kind": "const-r"}
        kind = tail["kind"]
        payload = tail.get("data")
        if kind == "const-r":
            rule = ConstR()
        elif kind == "const-p":
            rule = ConstP()
        elif kind == "periodic":
            rule = Periodic(letters_from(payload))
        elif kind == "climb":
            payload = payload or {}
            anchor = payload.get("anchor")
            rule = ClimbToOne(
                None if anchor is None else as_fraction(anchor),
                int(payload.get("skip", 0)),
            )
        else:
            raise ValueError(f"unknown tail kind {kind!r}")
        return cls(letters_from(data.get("prefix", [])), rule)


def _primitive_root(w):
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d]
    return w


def normalize(word: Word, pair: SlopePair, start: Fraction) -> Word:
    """Canonical presentation: absorb prefix letters that the tail repeats.

    Two presentations of the same infinite word normalize to the same value,
    e.g. ``(P) + ConstP`` and ``ConstP``.
    """
    prefix = list(word.prefix)
    tail = word.tail
    if isinstance(tail, Periodic):
        root = _primitive_root(tail.word)
        if all(x is R for x in root):
            tail = ConstR()
        elif all(x is P for x in root):
            tail = ConstP()
        else:
            tail = Periodic(root)
    while prefix:
        last = prefix[-1]
        if isinstance(tail, ConstR) and last is R:
            prefix.pop()
        elif isinstance(tail, ConstP) and last is P:
            prefix.pop()
        elif isinstance(tail, Periodic) and last is tail.word[-1]:
            prefix.pop()
            tail = Periodic(tail.word[-1:] + tail.word[:-1])
        elif (
            isinstance(tail, ClimbToOne)
            and tail.skip > 0
            and _climb(pair, tail.anchor).get(tail.skip - 1, 1)[0] is last
        ):
            prefix.pop()
            tail = ClimbToOne(tail.anchor, tail.skip - 1)
        else:
            break
    if isinstance(tail, ClimbToOne) and tail.anchor is not None and tail.skip == 0:
        if tail.anchor == start * product(pair, prefix):
            tail = ClimbToOne()
    return Word(tuple(prefix), tail)


def running_products(word: Word, pair: SlopePair, start: Fraction, depth: int):
    """Products of the first ``0, 1, ..., depth-1`` letters (the first is 1)."""
    out = [Fraction(1)]
    for letter in word.letters(max(depth - 1, 0), pair, start):
        out.append(out[-1] * letter.slope(pair))
    return out[:depth]
