from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from riglab.bounds import (BoundQuery, Regime, bound_report, kashin_razborov_constant,
                           nayak_bound, theta_regime, thm1_submatrix_bound, thm2_rigidity_bound,
                           thm3_relaxed_bound, thm3_relaxed_bound_float, valiant_floor)


def test_valiant_floor():
    assert valiant_floor(BoundQuery(8, 2)) == 6
    assert valiant_floor(BoundQuery(4, 4)) == 0
    assert valiant_floor(BoundQuery(16, 1)) == 15


def test_thm1():
    assert thm1_submatrix_bound(2, 3, 4) == 2
    assert thm1_submatrix_bound(8, 8, 8) == 8
    assert thm1_submatrix_bound(1, 1, 4) == 1


def test_thm2():
    assert thm2_rigidity_bound(BoundQuery(8, 2)) == 8
    assert thm2_rigidity_bound(BoundQuery(4, 1)) == 4
    assert thm2_rigidity_bound(BoundQuery(4, 3)) is None
    # no integer ceiling
    assert thm2_rigidity_bound(BoundQuery(6, 3)) == Fraction(3)
    assert thm2_rigidity_bound(BoundQuery(10, 3)) == Fraction(25, 3)


def test_thm3_examples():
    assert thm3_relaxed_bound(BoundQuery(4, 2, 1)) == Fraction(32, 14) == Fraction(16, 7)
    assert thm3_relaxed_bound(BoundQuery(8, 8, 3)) == 0
    assert thm3_relaxed_bound(BoundQuery(8, 2, 2)) == 8
    assert thm3_relaxed_bound(BoundQuery(4, 2, 2)) == 1
    with pytest.raises(ValueError):
        thm3_relaxed_bound(BoundQuery(4, 2))


def test_theta_regime():
    assert theta_regime(BoundQuery(8, 2, 4)) is Regime.KASHIN_RAZBOROV
    assert theta_regime(BoundQuery(8, 2, 1)) is Regime.LOKAM
    assert theta_regime(BoundQuery(8, 2, Fraction(8, 2))) is Regime.KASHIN_RAZBOROV
    assert theta_regime(BoundQuery(8, 2, 3.999)) is Regime.LOKAM


def test_nayak_bound():
    assert nayak_bound(8, 2) == Fraction(1, 4)
    assert nayak_bound(4, 4) == 1
    assert nayak_bound(4, 8) == 1


def test_query_validation():
    for bad in [(0, 1, None), (4, 0, None), (4, 5, None), (4, 1, -1.0), (4, 1, float('inf'))]:
        with pytest.raises(ValueError):
            BoundQuery(*bad)
    with pytest.raises(ValueError):
        thm3_relaxed_bound(BoundQuery(4, 1, 0))


def test_report_json():
    rep = bound_report(BoundQuery(8, 4, 1))
    js = rep.to_json()
    names = [b["name"] for b in js["bounds"]]
    assert "thm3_relaxed" in names and "valiant_floor" in names
    t3 = rep.get("thm3_relaxed")
    assert t3.applicable and Fraction(t3.value) == thm3_relaxed_bound(BoundQuery(8, 4, 1))
    assert not bound_report(BoundQuery(4, 3)).get("thm2_rigidity").applicable


thetas = st.fractions(min_value=Fraction(1, 16), max_value=16, max_denominator=16)


@given(st.integers(2, 64), st.data(), thetas, thetas)
def test_thm3_monotone(n, data, t1, t2):
    r1 = data.draw(st.integers(1, n))
    r2 = data.draw(st.integers(r1, n))
    lo, hi = sorted((t1, t2))
    assert thm3_relaxed_bound(BoundQuery(n, r1, lo)) >= thm3_relaxed_bound(BoundQuery(n, r1, hi))
    assert thm3_relaxed_bound(BoundQuery(n, r1, lo)) >= thm3_relaxed_bound(BoundQuery(n, r2, lo))


@given(st.integers(2, 256), st.data(), st.floats(1e-3, 1e3))
def test_thm3_float_matches_rational(n, data, theta):
    r = data.draw(st.integers(1, n - 1))
    exact = float(thm3_relaxed_bound(BoundQuery(n, r, theta)))
    assert thm3_relaxed_bound_float(n, r, theta) == pytest.approx(exact, rel=1e-12)


def test_kr_constant():
    assert kashin_razborov_constant(BoundQuery(16, 1)) == 1
    assert kashin_razborov_constant(BoundQuery(8, 2)) == Fraction(1, 8)


def test_float_theta_is_decimal():
    assert BoundQuery(4, 2, 0.1).theta == Fraction(1, 10)
