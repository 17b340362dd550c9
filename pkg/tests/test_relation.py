import random
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import DEFAULT, monomial_oracle, nc_brute
from lelek.errors import NCViolation, NonPositiveInput, OrderViolation, SearchExhausted
from lelek.relation import (
    LogScalar,
    SearchConstraint,
    SlopePair,
    _search,
    as_fraction,
    density_profile,
    find_monomial,
    fraction_str,
    nc_witness,
    relation_contains,
    validate_nc,
)

F = Fraction


def test_accepts_half_three():
    pair = validate_nc(F(1, 2), 3)
    assert pair == SlopePair(F(1, 2), F(3))


@pytest.mark.parametrize(
    "r, rho, witness",
    [
        (F(1, 2), F(2), (1, -1)),
        (F(1, 4), F(2), (1, -2)),
        (F(4, 9), F(3, 2), (1, -2)),
        (F(1, 8), F(4), (2, -3)),
    ],
)
def test_rejects_dependent_slopes(r, rho, witness):
    with pytest.raises(NCViolation) as info:
        validate_nc(r, rho)
    assert info.value.witness == witness
    k, l = witness
    assert r**k == rho**l


def test_rejection_order():
    with pytest.raises(NonPositiveInput):
        validate_nc(0, 3)
    with pytest.raises(OrderViolation):
        validate_nc(F(3, 2), 3)
    with pytest.raises(OrderViolation):
        validate_nc(F(1, 2), 1)


def test_floats_are_refused():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    assert as_fraction("27/64") == F(27, 64)
    assert fraction_str(F(6, 2)) == "3"
    assert fraction_str(F(27, 64)) == "27/64"


fractions_in = st.fractions(min_value=F(1, 60), max_value=F(60), max_denominator=60)


@settings(max_examples=150, deadline=None)
@given(fractions_in, fractions_in)
def test_nc_matches_brute_force(a, b):
    r, rho = min(a, b), max(a, b)
    if not r < 1 < rho:
        return
    found = nc_witness(r, rho)
    brute = nc_brute(r, rho, 12)
    if brute is not None:
        assert found is not None
    if found is not None:
        k, l = found
        assert k > 0 and r**k == rho**l


def test_relation_contains():
    pair = DEFAULT
    assert relation_contains(pair, F(1, 2), F(1, 4))
    assert relation_contains(pair, F(1, 4), F(3, 4))
    assert not relation_contains(pair, F(1, 2), F(1, 3))
    assert relation_contains(pair, 0, 0)


def test_lattice_is_injective_up_to_30():
    seen = {}
    for m in range(31):
        for n in range(31):
            v = DEFAULT.value(m, n)
            assert v not in seen, (m, n, seen.get(v))
            seen[v] = (m, n)


def test_log_scalar_encloses_value():
    import math

    for v in (F(1, 3), F(27, 64), F(10**40 + 1, 10**40), F(3) ** 200):
        ls = LogScalar.of(v)
        exact = math.log(v.numerator) - math.log(v.denominator)
        assert ls.lo <= exact <= ls.hi


def test_find_monomial_examples():
    c = SearchConstraint(1, 1, F(2, 5), F(1, 2))
    mono = find_monomial(DEFAULT, c)
    assert (mono.m, mono.n) == (6, 3)
    assert mono.value(DEFAULT) == F(27, 64)
    eps = F(1, 10**9)
    mono = find_monomial(DEFAULT, SearchConstraint(0, 0, F(1, 2) - eps, F(1, 2) + eps))
    assert (mono.m, mono.n) == (1, 0)


def test_find_monomial_high_floors():
    c = SearchConstraint(10, 10, F(9, 10), F(1))
    mono = find_monomial(DEFAULT, c)
    # frozen from the exhaustive oracle over m, n <= 64
    assert (mono.m, mono.n) == (16, 10) == monomial_oracle(DEFAULT, 10, 10, F(9, 10), F(1))
    assert F(9, 10) < mono.value(DEFAULT) < 1


def test_constraint_validation():
    with pytest.raises(ValueError):
        SearchConstraint(0, 0, F(1, 2), F(1, 2))
    with pytest.raises(ValueError):
        SearchConstraint(0, 0, F(0), F(1, 2))
    with pytest.raises(ValueError):
        SearchConstraint(-1, 0, F(1, 4), F(1, 2))


def test_exhaustion_reports_budget():
    eps = F(1, 10**12)
    with pytest.raises(SearchExhausted) as info:
        find_monomial(DEFAULT, SearchConstraint(0, 0, F(3, 5), F(3, 5) + eps), budget=8)
    assert info.value.budget == 8
    assert info.value.frontier == 16


@settings(max_examples=60, deadline=None)
@given(
    st.integers(0, 6),
    st.integers(0, 6),
    st.fractions(min_value=F(1, 1000), max_value=F(3), max_denominator=1000),
    st.fractions(min_value=F(1, 100), max_value=F(1, 2), max_denominator=100),
)
def test_pruning_never_changes_the_answer(k, l, lo, width):
    hi = lo + width
    try:
        fast = _search(DEFAULT, k, l, lo, hi, 40)
    except SearchExhausted:
        fast = None
    try:
        slow = _search(DEFAULT, k, l, lo, hi, 40, prune=False)
    except SearchExhausted:
        slow = None
    assert fast == slow


def test_agrees_with_oracle_on_seeded_targets():
    rng = random.Random(11)
    for _ in range(40):
        lo = F(rng.randint(1, 4000), 4000)
        hi = lo + F(rng.randint(4, 400), 4000)
        k, l = rng.randint(0, 8), rng.randint(0, 8)
        expect = monomial_oracle(DEFAULT, k, l, lo, hi)
        c = SearchConstraint(k, l, lo, hi)
        if expect is None:
            with pytest.raises(SearchExhausted):
                find_monomial(DEFAULT, c, budget=64)
        else:
            got = find_monomial(DEFAULT, c, budget=64)
            assert (got.m, got.n) == expect


def test_density_four_bins():
    witnesses = density_profile(DEFAULT, 4)
    got = [(w.monomial.m, w.monomial.n) for w in witnesses]
    # the first bin is open at 1/4, so (2, 0) = 1/4 does not qualify
    assert got == [(3, 0), (3, 1), (4, 2), (5, 3)]
    for w in witnesses:
        assert w.lo < w.value < w.hi


def test_density_single_bin():
    (w,) = density_profile(DEFAULT, 1)
    assert (w.monomial.m, w.monomial.n) == (1, 0)


def test_density_hundred_bins_with_floors():
    start = time.perf_counter()
    witnesses = density_profile(DEFAULT, 100, floors=(10, 10))
    assert time.perf_counter() - start < 5
    assert all(w.filled for w in witnesses)
    for w in witnesses:
        assert w.monomial.m >= 10 and w.monomial.n >= 10
        assert w.lo < DEFAULT.value(w.monomial.m, w.monomial.n) < w.hi


def test_pair_json_round_trip():
    assert SlopePair.from_json(DEFAULT.to_json()) == DEFAULT
