import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import DEFAULT, random_fan_point
from lelek.cylinder import Cylinder, build_cylinder, contains, meets_fan, metric_diameter
from lelek.errors import BoundaryCoordinate, InvalidCylinder
from lelek.fan import FanPoint, vertex
from lelek.words import ClimbToOne, ConstR, P, R, Word

F = Fraction
C3 = Cylinder(DEFAULT, 3, (F(2, 5), F(11, 25)), (R, P))


def test_intervals():
    assert C3.interval_at(1) == (F(2, 5), F(11, 25))
    assert C3.interval_at(2) == (F(1, 5), F(11, 50))
    assert C3.interval_at(3) == (F(3, 5), F(33, 50))
    with pytest.raises(IndexError):
        C3.interval_at(4)


def test_contains():
    assert contains(C3, FanPoint(DEFAULT, F(27, 64), Word((R, P), ConstR())))
    assert not contains(C3, FanPoint(DEFAULT, F(27, 64), Word((P,), ConstR())))
    assert not contains(C3, vertex(DEFAULT))


def test_meets_fan():
    p = meets_fan(C3)
    assert p.x == F(27, 64)
    c = Cylinder(DEFAULT, 1, (F(999, 1000), F(9995, 10**4)), ())
    w = meets_fan(c)
    # frozen from a direct scan
    assert w.x == DEFAULT.value(1539, 971)
    assert contains(c, w)


def test_rejects_bad_cylinders():
    with pytest.raises(InvalidCylinder):
        Cylinder(DEFAULT, 2, (F(2, 5), F(1, 2)), (P,))
    with pytest.raises(InvalidCylinder):
        Cylinder(DEFAULT, 3, (F(2, 5), F(11, 25)), (R,))
    with pytest.raises(InvalidCylinder):
        Cylinder(DEFAULT, 2, (F(1, 100), F(1, 2)), (R,))


def test_build_example():
    z = FanPoint(DEFAULT, F(27, 64), Word((R, P), ClimbToOne()))
    c = build_cylinder(z, F(1, 8))
    assert c.depth == 3 and c.word == (R, P)
    lo, hi = c.u1
    assert lo < F(27, 64) < hi
    delta = min(1 - F(27, 128), F(81, 128) - F(27, 256))
    for a, b in c.intervals():
        assert b - a < delta
    assert metric_diameter(c) < F(1, 8)


def test_boundary_and_large_eps():
    with pytest.raises(BoundaryCoordinate):
        build_cylinder(FanPoint(DEFAULT, F(1), Word()), F(1, 8))
    c = build_cylinder(FanPoint(DEFAULT, F(1, 3), Word()), F(2))
    assert c.depth == 1 and c.word == ()


def test_json_round_trip():
    assert C3.to_json() == {"depth": 3, "u1": ["2/5", "11/25"], "word": ["R", "P"]}
    assert Cylinder.from_json(C3.to_json(), DEFAULT) == C3


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([F(1, 8), F(1, 32), F(1, 128)]))
def test_built_cylinder_properties(seed, eps):
    rng = random.Random(seed)
    z = random_fan_point(rng)
    c = build_cylinder(z, eps)
    assert contains(c, z)
    assert metric_diameter(c) < eps
    ivs = c.intervals()
    for i, letter in enumerate(c.word):
        s = letter.slope(DEFAULT)
        assert ivs[i + 1] == (ivs[i][0] * s, ivs[i][1] * s)
    assert all(0 < a < b < 1 for a, b in ivs)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_membership_forces_the_word(seed):
    rng = random.Random(seed)
    c = build_cylinder(random_fan_point(rng), F(1, 32))
    lo, hi = c.u1
    for _ in range(20):
        x = lo + (hi - lo) * F(rng.randint(1, 999), 1000)
        letters = list(c.word)
        if letters and rng.random() < 0.5:
            j = rng.randrange(len(letters))
            letters[j] = letters[j].flip()
        p = FanPoint(DEFAULT, x, Word(tuple(letters), ConstR()))
        # contains() itself asserts the forced word; flipped words must fall outside
        if contains(c, p):
            assert p.letters(c.depth - 1) == c.word
