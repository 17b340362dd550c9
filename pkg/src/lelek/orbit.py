"""Dense-orbit synthesis for the shift on ``M_{r,rho}``.

The orbit point is assembled from blocks.  A bridge is a run of R letters
followed by a run of P letters that carries the running lattice value
``r^k rho^l`` into the first interval of the next cylinder with strictly
larger exponents; a traverse then follows that cylinder's word.  The point
starts from the value ``r`` (exponents ``(1, 0)``), so the first bridge is
taken from the virtual value 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple, Union

from .cylinder import Cylinder, contains
from .errors import InvalidCylinder, LelekError
from .fan import FanPoint
from .relation import CONSTRUCTION_BUDGET, SlopePair, _search, find_monomial_above, fraction_str
from .words import ConstR, P, R, Word, product


@dataclass(frozen=True)
class Bridge:
    dk: int
    dl: int

    def letters(self):
        return (R,) * self.dk + (P,) * self.dl


@dataclass(frozen=True)
class Traverse:
    cyl_index: int


Block = Union[Bridge, Traverse]


@dataclass
class OrbitProgram:
    pair: SlopePair
    blocks: List[Block] = field(default_factory=list)
    trace: List[Tuple[int, int]] = field(default_factory=list)
    visits: List[Tuple[int, int]] = field(default_factory=list)

    def letter_stream(self, cyls) -> list:
        """Every letter applied from the virtual start value 1."""
        out = []
        for block in self.blocks:
            if isinstance(block, Bridge):
                out.extend(block.letters())
            else:
                out.extend(cyls[block.cyl_index].word)
        return out

    def to_json(self) -> dict:
        blocks = []
        for b in self.blocks:
            if isinstance(b, Bridge):
                blocks.append({"bridge": {"dk": b.dk, "dl": b.dl}})
            else:
                blocks.append({"traverse": b.cyl_index})
        return {
            "blocks": blocks,
            "visits": [list(v) for v in self.visits],
            "trace": [list(t) for t in self.trace],
        }

    @classmethod
    def from_json(cls, data: dict, pair: SlopePair) -> "OrbitProgram":
        blocks = []
        for b in data["blocks"]:
            if "bridge" in b:
                blocks.append(Bridge(int(b["bridge"]["dk"]), int(b["bridge"]["dl"])))
            else:
                blocks.append(Traverse(int(b["traverse"])))
        return cls(
            pair,
            blocks,
            [tuple(t) for t in data.get("trace", [])],
            [tuple(v) for v in data.get("visits", [])],
        )


def synthesize(pair: SlopePair, cyls, budget: int = CONSTRUCTION_BUDGET) -> OrbitProgram:
    """Visit every cylinder in order; ``budget`` bounds each bridge's exponent jump."""
    if not cyls:
        raise InvalidCylinder("need at least one cylinder")
    for c in cyls:
        if c.pair != pair:
            raise InvalidCylinder("cylinder built for a different slope pair")
    prog = OrbitProgram(pair)
    k, l = 0, 0
    position = 0  # letters applied so far
    for index, c in enumerate(cyls):
        lo, hi = c.u1
        if index == 0:
            # the first entry lies in B_{1,1}
            m, n = _search(pair, 1, 1, lo, hi, budget)
        else:
            mono = find_monomial_above(pair, k, l, lo, hi, budget)
            m, n = mono.m, mono.n
        bridge = Bridge(m - k, n - l)
        prog.blocks.append(bridge)
        position += bridge.dk + bridge.dl
        k, l = m, n
        prog.trace.append((k, l))
        prog.visits.append((index, position - 1))
        prog.blocks.append(Traverse(index))
        a = sum(1 for x in c.word if x is R)
        k, l = k + a, l + len(c.word) - a
        position += len(c.word)
        prog.trace.append((k, l))
    return prog


def realized_length(prog: OrbitProgram, cyls) -> int:
    return len(prog.letter_stream(cyls))


def realize(prog: OrbitProgram, cyls, length: int):
    """The first ``length`` coordinates of the orbit point and its letters.

    Returns ``(letters, values)`` where ``letters[i]`` carries ``values[i]`` to
    ``values[i + 1]``, so there are ``length - 1`` letters.
    """
    stream = prog.letter_stream(cyls)
    if length > len(stream):
        raise IndexError(f"program realizes {len(stream)} coordinates, asked for {length}")
    values = []
    v = Fraction(1)
    for letter in stream[:length]:
        v = v * letter.slope(prog.pair)
        values.append(v)
    return list(stream[1:length]), values


def orbit_point(prog: OrbitProgram, cyls) -> FanPoint:
    """The realized orbit point, padded with a constant-R tail."""
    stream = prog.letter_stream(cyls)
    return FanPoint(prog.pair, stream[0].slope(prog.pair), Word(tuple(stream[1:]), ConstR()))


@dataclass(frozen=True)
class VisitCertificate:
    cyl_index: int
    offset: int
    values: Tuple[Fraction, ...]
    passed: bool

    def to_json(self) -> dict:
        return {
            "cylinder": self.cyl_index,
            "offset": self.offset,
            "values": [fraction_str(v) for v in self.values],
            "pass": self.passed,
        }


def verify(prog: OrbitProgram, cyls) -> List[VisitCertificate]:
    """Recompute the orbit from its blocks and check each recorded visit.

    Only the block list and the visit offsets are read; the exponent trace
    is ignored.
    """
    letters = []
    for block in prog.blocks:
        if isinstance(block, Bridge):
            letters += [R] * block.dk + [P] * block.dl
        elif 0 <= block.cyl_index < len(cyls):
            letters += list(cyls[block.cyl_index].word)
        else:
            return [VisitCertificate(i, off, (), False) for i, off in prog.visits]
    values = []
    v = Fraction(1)
    r, rho = prog.pair.r, prog.pair.rho
    for letter in letters:
        v = v * (r if letter is R else rho)
        values.append(v)

    certs = []
    for index, offset in prog.visits:
        if not 0 <= index < len(cyls):
            certs.append(VisitCertificate(index, offset, (), False))
            continue
        c = cyls[index]
        window = tuple(values[offset : offset + c.depth])
        ok = len(window) == c.depth and offset >= 0
        if ok:
            lo, hi = c.u1
            for j, value in enumerate(window):
                if not lo < value < hi:
                    ok = False
                    break
                if j < c.depth - 1:
                    s = r if c.word[j] is R else rho
                    lo, hi = lo * s, hi * s
        certs.append(VisitCertificate(index, offset, window, ok))
    return certs


def _later(p: FanPoint, n: int) -> FanPoint:
    # sigma^n for a point whose prefix covers the first n letters
    word = p.word
    assert n <= len(word.prefix)
    return FanPoint(p.pair, p.x * product(p.pair, word.prefix[:n]), Word(word.prefix[n:], word.tail))


def witness_transitivity(u: Cylinder, v: Cylinder, budget: int = CONSTRUCTION_BUDGET):
    """``(n, p)`` with ``p`` in ``u`` and ``sigma^n(p)`` in ``v``, both checked exactly."""
    pair = u.pair
    gain = product(pair, u.word)
    exit_lo, exit_hi = u.u1[0] * gain, u.u1[1] * gain
    lo, hi = max(exit_lo, v.u1[0]), min(exit_hi, v.u1[1])
    if lo < hi:
        # u's exit interval overlaps v's base: no bridge needed
        m, n = _search(pair, 0, 0, lo / gain, hi / gain, budget)
        p = FanPoint(pair, pair.value(m, n), Word(u.word + v.word, ConstR()))
        steps = len(u.word)
    else:
        m0, n0 = _search(pair, 0, 0, u.u1[0], u.u1[1], budget)
        a = sum(1 for x in u.word if x is R)
        k, l = m0 + a, n0 + len(u.word) - a
        mono = find_monomial_above(pair, k, l, v.u1[0], v.u1[1], budget)
        bridge = Bridge(mono.m - k, mono.n - l)
        p = FanPoint(pair, pair.value(m0, n0), Word(u.word + bridge.letters() + v.word, ConstR()))
        steps = len(u.word) + bridge.dk + bridge.dl
    if not (contains(u, p) and contains(v, _later(p, steps))):
        raise LelekError("transitivity witness failed its exact re-check")
    return steps, p


def non_injectivity_witness(pair: SlopePair):
    """Two distinct fan points with the same shift image.

    With ``t = 1/(2 rho)``, the points ``(r t, P...)`` and ``(rho t, R...)``
    both shift to ``(r rho t, ...)``.
    """
    t = 1 / (2 * pair.rho)
    tail = Word((), ConstR())
    q = FanPoint(pair, pair.r * pair.rho * t, tail)
    p1 = FanPoint(pair, pair.r * t, tail.prepend(P))
    p2 = FanPoint(pair, pair.rho * t, tail.prepend(R))
    return p1, p2, q
