"""Deterministic SVG pictures of the fan and of orbit visits."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict
from xml.sax.saxutils import quoteattr

from .errors import BudgetExceeded
from .orbit import OrbitProgram, realize, realized_length
from .relation import SlopePair
from .words import DEPTH_CAP, P, R

MAX_SEGMENTS = 2**16
SECTOR_DEGREES = 60

DEFAULT_STYLE = {
    "stroke": "#1f3a5f",
    "stroke_width": "0.6",
    "point": "#b03a2e",
    "band": "#e8b04b",
    "band_opacity": "0.35",
    "background": "#ffffff",
}


@dataclass(frozen=True)
class RenderSpec:
    depth: int = 9
    word_budget: int = 512
    width: int = 800
    height: int = 600
    style: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be positive")
        if self.word_budget < 1:
            raise ValueError("word_budget must be at least 1")
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"dimensions must be positive, got {self.width}x{self.height}")

    def stroke(self, key: str) -> str:
        return self.style.get(key, DEFAULT_STYLE[key])


def _num(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _header(spec: RenderSpec, title: str) -> list:
    return [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">',
        f"<title>{title}</title>",
        f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill={quoteattr(spec.stroke("background"))}/>',
    ]


def fan_segments(pair: SlopePair, spec: RenderSpec):
    """``(word, angle_fraction, t_max)`` for each drawn word, in drawing order."""
    if spec.word_budget > MAX_SEGMENTS or spec.depth > DEPTH_CAP:
        raise BudgetExceeded(f"at most {MAX_SEGMENTS} segments can be rendered")
    count = spec.word_budget if spec.depth >= 17 else min(2**spec.depth, spec.word_budget)
    out = []
    for word in itertools.islice(itertools.product((R, P), repeat=spec.depth), count):
        angle = sum(Fraction(int(b), 2**i) for i, b in enumerate(word, start=1))
        v, best = Fraction(1), Fraction(1)
        for letter in word:
            v *= letter.slope(pair)
            best = max(best, v)
        out.append((word, angle, 1 / best))
    return out


def render_fan(pair: SlopePair, spec: RenderSpec) -> str:
    """One segment per word from the top, direction from the word's bits, length ``t_max``."""
    segs = fan_segments(pair, spec)
    margin = 0.05 * min(spec.width, spec.height)
    ox, oy = spec.width / 2, spec.height - margin
    scale = min(spec.height - 2 * margin, (spec.width / 2 - margin) / math.sin(math.radians(SECTOR_DEGREES / 2)))
    lines = _header(spec, f"fan r={pair.r} rho={pair.rho} depth={spec.depth}")
    lines.append(
        f'<g class="segments" stroke={quoteattr(spec.stroke("stroke"))} '
        f'stroke-width={quoteattr(spec.stroke("stroke_width"))} fill="none">'
    )
    for word, angle, t_max in segs:
        theta = math.radians(90 - SECTOR_DEGREES / 2 + SECTOR_DEGREES * float(angle))
        length = scale * float(t_max)
        x2 = ox - length * math.cos(theta)
        y2 = oy - length * math.sin(theta)
        label = "".join(letter.name for letter in word)
        lines.append(
            f'<line data-word="{label}" x1="{_num(ox)}" y1="{_num(oy)}" x2="{_num(x2)}" y2="{_num(y2)}"/>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_orbit(prog: OrbitProgram, cyls, spec: RenderSpec) -> str:
    """Step plot of the realized orbit values with each visited cylinder drawn as a band."""
    length = realized_length(prog, cyls)
    _, values = realize(prog, cyls, length)
    margin = 0.05 * min(spec.width, spec.height)
    plot_w = spec.width - 2 * margin
    plot_h = spec.height - 2 * margin
    step = plot_w / max(len(values), 1)

    def px(i):
        return margin + i * step

    def py(v):
        return spec.height - margin - plot_h * float(v)

    lines = _header(spec, f"orbit of {len(values)} values, {len(prog.visits)} visits")
    for index, offset in prog.visits:
        c = cyls[index]
        lines.append(f'<g class="band" data-cylinder="{index}" data-offset="{offset}">')
        for j, (lo, hi) in enumerate(c.intervals()):
            lines.append(
                f'<rect x="{_num(px(offset + j))}" y="{_num(py(hi))}" width="{_num(step)}" '
                f'height="{_num(py(lo) - py(hi))}" fill={quoteattr(spec.stroke("band"))} '
                f'fill-opacity={quoteattr(spec.stroke("band_opacity"))}/>'
            )
        lines.append("</g>")
    path = []
    for i, v in enumerate(values):
        cmd = "M" if i == 0 else "L"
        path.append(f"{cmd}{_num(px(i))},{_num(py(v))} H{_num(px(i + 1))}")
    lines.append(
        f'<path class="steps" d="{" ".join(path)}" fill="none" stroke={quoteattr(spec.stroke("stroke"))} '
        f'stroke-width={quoteattr(spec.stroke("stroke_width"))}/>'
    )
    lines.append(f'<g class="values" fill={quoteattr(spec.stroke("point"))}>')
    for i, v in enumerate(values):
        lines.append(f'<circle cx="{_num(px(i) + step / 2)}" cy="{_num(py(v))}" r="2"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
