import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import DEFAULT, random_decidable_fan_point, random_fan_point
from lelek.errors import DepthOverflow, SearchExhausted
from lelek.fan import (
    EndpointKind,
    FanPoint,
    arc_sample,
    classify_endpoint,
    coordinate,
    depth_for,
    make_endpoint,
    metric_d,
    shift,
    validate_point,
    vertex,
)
from lelek.relation import SearchConstraint
from lelek.words import (
    DEPTH_CAP,
    ClimbToOne,
    ConstP,
    ConstR,
    P,
    Periodic,
    R,
    Word,
    climb_levels,
    letters_from,
    normalize,
    running_products,
)

F = Fraction
RPR = Word((R, P, R), ConstR())


def test_coordinates():
    p = FanPoint(DEFAULT, F(27, 64), RPR)
    assert coordinate(p, 1) == F(27, 64)
    assert coordinate(p, 2) == F(27, 128)
    assert coordinate(p, 3) == F(81, 128)
    assert p.coordinates(4) == [F(27, 64), F(27, 128), F(81, 128), F(81, 256)]
    with pytest.raises(ValueError):
        coordinate(p, 0)
    with pytest.raises(DepthOverflow):
        coordinate(p, DEPTH_CAP + 1)


def test_validate_point():
    assert validate_point(FanPoint(DEFAULT, F(27, 64), RPR), 4) is None
    assert validate_point(FanPoint(DEFAULT, F(27, 64), Word((P,), ConstR())), 2) == 2
    assert validate_point(FanPoint(DEFAULT, F(0), Word((), ConstP())), 50) is None


def test_shift_examples():
    p = FanPoint(DEFAULT, F(27, 64), RPR)
    q = shift(p)
    assert q == FanPoint(DEFAULT, F(27, 128), Word((P, R), ConstR()))
    assert shift(vertex(DEFAULT)).is_vertex
    bad = shift(FanPoint(DEFAULT, F(1, 2), Word((P,), ConstR())))
    assert bad.x == F(3, 2)
    assert validate_point(bad, 1) == 1


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_shift_matches_coordinates(seed):
    rng = random.Random(seed)
    p = random_decidable_fan_point(rng)
    depth = 24
    q = shift(p)
    assert q.coordinates(depth - 1) == p.coordinates(depth)[1:]
    if validate_point(p, depth) is None:
        assert validate_point(q, depth - 1) is None


def test_periodic_and_climb_letters():
    w = Word((P,), Periodic((R, R, P)))
    assert w.letters(7, DEFAULT, F(1, 4)) == letters_from("PRRPRRP")
    e = make_endpoint(DEFAULT, SearchConstraint(0, 0, F(2, 5), F(1, 2)))
    assert e.x == F(27, 64)
    values = e.coordinates(400)
    assert all(0 < v < 1 for v in values)
    assert max(values) > 1 - F(1, 2**6)


def test_climb_stages_enter_their_targets():
    anchor = F(27, 64)
    m, n, level = climb_levels(DEFAULT, anchor, 300)
    assert level >= 4
    v = anchor * DEFAULT.value(m, n)
    assert 1 - F(1, 2**level) < v < 1


def test_endpoint_near_one():
    seed = SearchConstraint(0, 0, F(99, 100), F(1))
    e = make_endpoint(DEFAULT, seed)
    assert e.x == DEFAULT.value(149, 94)
    assert classify_endpoint(e, 64).kind is EndpointKind.ENDPOINT
    assert all(v < 1 for v in e.coordinates(300))


def test_endpoint_within_a_millionth_of_one_needs_huge_exponents():
    # a float scan of 3^n / 2^m from below puts the first hit at n = 190537
    assert 1 - F(1, 10**6) < DEFAULT.value(301994, 190537) < 1
    with pytest.raises(SearchExhausted):
        make_endpoint(DEFAULT, SearchConstraint(0, 0, 1 - F(1, 10**6), F(1)))
    with pytest.raises(ValueError):
        make_endpoint(DEFAULT, SearchConstraint(0, 0, F(1), F(2)))


def test_drop_first_then_prepend_is_identity():
    w = Word((R, P), ClimbToOne())
    start = F(27, 64)
    later = w.drop_first(DEFAULT, start).drop_first(DEFAULT, start)
    assert later == Word((), ClimbToOne())
    deeper = later.drop_first(DEFAULT, start * DEFAULT.value(1, 1))
    assert deeper.tail.skip == 1
    back = normalize(deeper.prepend(w.letters(3, DEFAULT, start)[2]), DEFAULT, start * DEFAULT.value(1, 1))
    assert back == later


def test_normalize_examples():
    assert normalize(Word((P,), ConstP()), DEFAULT, F(1)) == Word((), ConstP())
    assert normalize(Word((R, P), Periodic((R, P))), DEFAULT, F(1)) == Word((), Periodic((R, P)))
    assert normalize(Word((), Periodic((R, R))), DEFAULT, F(1)) == Word((), ConstR())
    assert normalize(Word((P,), Periodic((R, P, R, P))), DEFAULT, F(1)) == Word((), Periodic((P, R)))


def test_word_json_round_trip():
    for w in (
        RPR,
        Word((), ConstP()),
        Word((P,), Periodic((R, P))),
        Word((R,), ClimbToOne(F(1, 3), 4)),
        Word((), ClimbToOne()),
    ):
        assert Word.from_json(w.to_json()) == w
    p = FanPoint(DEFAULT, F(27, 64), RPR)
    assert p.to_json() == {"x": "27/64", "word": {"prefix": ["R", "P", "R"], "tail": {"kind": "const-r", "data": None}}}
    assert FanPoint.from_json(p.to_json(), DEFAULT) == p


def test_classify_examples():
    assert classify_endpoint(FanPoint(DEFAULT, F(1), Word()), 8).kind is EndpointKind.ENDPOINT
    assert classify_endpoint(vertex(DEFAULT), 8).kind is EndpointKind.NOT_ENDPOINT
    p = FanPoint(DEFAULT, F(27, 64), RPR)
    assert classify_endpoint(p, 8).kind is EndpointKind.NOT_ENDPOINT
    # an expanding tail has no analytic bound
    q = FanPoint(DEFAULT, F(1, 10**6), Word((), ConstP()))
    assert classify_endpoint(q, 8).kind is EndpointKind.UNKNOWN
    # a contracting period whose start sits exactly at 1
    z = FanPoint(DEFAULT, F(1, 3), Word((P,), Periodic((R, R, P))))
    assert classify_endpoint(z, 8).kind is EndpointKind.ENDPOINT


def test_classify_is_monotone_in_depth():
    rng = random.Random(3)
    for _ in range(60):
        p = random_decidable_fan_point(rng)
        verdicts = [classify_endpoint(p, d).kind for d in (1, 2, 4, 16, 64)]
        decided = [v for v in verdicts if v is not EndpointKind.UNKNOWN]
        assert len(set(decided)) <= 1
        if decided:
            first = verdicts.index(decided[0])
            assert all(v is decided[0] for v in verdicts[first:])


def test_metric_examples():
    p = FanPoint(DEFAULT, F(27, 64), RPR)
    assert metric_d(p, p, 10).value == 0
    one = FanPoint(DEFAULT, F(1), Word())
    m = metric_d(vertex(DEFAULT), one, 1)
    assert m.value == F(1, 2) and m.tail_bound == F(1, 2)
    rng = random.Random(9)
    for _ in range(30):
        a, b = random_fan_point(rng), random_fan_point(rng)
        d = metric_d(a, b, 16)
        assert d.value == metric_d(b, a, 16).value
        assert d.value <= F(1, 2)


def test_depth_for():
    assert [depth_for(F(1, k)) for k in (1, 2, 3, 8, 9, 128)] == [0, 1, 2, 3, 4, 7]


def test_arc_sample():
    t_max, pts = arc_sample(DEFAULT, Word(), 3, 2)
    assert t_max == 1
    assert pts == [(0, 0, 0), (1, F(1, 2), F(1, 4))]
    t_max, _ = arc_sample(DEFAULT, Word((), ConstP()), 3, 2)
    assert t_max == F(1, 9)
    t_max, pts = arc_sample(DEFAULT, Word((P,), ConstR()), 5, 3)
    assert t_max == F(1, 3)
    assert max(pts[-1]) == 1
    with pytest.raises(ValueError):
        arc_sample(DEFAULT, Word((), ClimbToOne()), 5, 3)


def test_monomial_coordinates_never_hit_one():
    for m in range(31):
        for n in range(31):
            if (m, n) != (0, 0):
                assert DEFAULT.value(m, n) != 1


def test_running_products_start_at_one():
    assert running_products(RPR, DEFAULT, F(1), 4) == [1, F(1, 2), F(3, 2), F(3, 4)]
