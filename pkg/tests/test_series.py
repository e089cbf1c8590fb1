from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from cglab.errors import InsufficientData, RangeError
from cglab.growth import ball_counts, count_growth
from cglab.series import (band_check, dominant_root, exponent_fit, find_recurrence, growth_rate,
                          hankel_rank)


def test_geometric_series():
    rep = find_recurrence([3 ** n for n in range(12)], 4)
    assert rep.found and rep.order == 1 and rep.coeffs == (3,) and rep.offset == 0
    assert rep.predict([1], 5) == [1, 3, 9, 27, 81]
    assert hankel_rank([3 ** n for n in range(12)], 5) == 1


def test_fibonacci():
    fib = [0, 1]
    while len(fib) < 30:
        fib.append(fib[-1] + fib[-2])
    rep = find_recurrence(fib, 8)
    assert (rep.order, rep.coeffs) == (2, (1, 1))
    assert dominant_root(rep) == pytest.approx((1 + 5 ** 0.5) / 2)


def test_eventual_recurrence_uses_offset():
    seq = [7, 0, 5] + [2 ** n for n in range(20)]
    rep = find_recurrence(seq, 4)
    assert rep.found and rep.order == 1 and rep.offset == 3
    assert rep.window == (3, 4)


def test_infinite_dihedral_conj_series(dinf):
    coeffs = count_growth(dinf, "conj", 29, mode="strict", enum_cap=29).coeffs
    rep = find_recurrence(coeffs, 4)
    assert rep.found and rep.order <= 3
    assert rep.coeffs == (0, 1) and rep.offset == 2
    assert rep.verified_through == 29
    assert rep.to_dict()["coeffs"] == ["0", "1"]


def test_no_recurrence_for_free_group(f2):
    coeffs = count_growth(f2, "conj", 23, "formula", mode="strict").coeffs
    rep = find_recurrence(coeffs, 8)
    assert not rep.found and rep.n_terms == 24


def test_insufficient_data():
    with pytest.raises(InsufficientData):
        find_recurrence([1, 2, 3], 2)
    with pytest.raises(ValueError):
        find_recurrence([1] * 10, 0)


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3),
       st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_planted_recurrence_is_recovered(coeffs, init):
    assume(coeffs[-1] != 0)
    d = len(coeffs)
    seq = list(init[:d])
    while len(seq) < 30:
        seq.append(sum(c * seq[-1 - i] for i, c in enumerate(coeffs)))
    rep = find_recurrence(seq, 4)
    assert rep.found and rep.order <= d
    assert rep.predict(seq[:rep.offset + rep.order], 30) == seq


def test_growth_rates(f2, f3):
    assert growth_rate(ball_counts(f2, 20)) == Fraction(3)
    assert growth_rate(ball_counts(f3, 20)) == Fraction(5)
    assert growth_rate([4] * 20) == 1
    conj = count_growth(f2, "conj", 30, "formula").coeffs
    assert growth_rate(conj) == pytest.approx(3, rel=0.01)


def test_band_check(f2):
    t = count_growth(f2, "conj", 16, "formula")
    rep = band_check(t, 3, range(8, 17))
    assert 0 < rep.min <= rep.max and rep.ratio == pytest.approx(rep.max / rep.min)
    assert band_check(t, 3, [10]).ratio == 1
    assert band_check(t, 3.0, range(8, 17)).ratio == pytest.approx(rep.ratio)
    with pytest.raises(RangeError):
        band_check(t, 3, range(10, 20))
    with pytest.raises(RangeError):
        band_check(t, 3, [0])


def test_exponent_fit_on_synthetic_series():
    shaped = [1] + [round(3 ** n / n) for n in range(1, 31)]
    fit = exponent_fit(shaped, 3, (10, 30))
    assert -1.05 <= fit.p <= -0.95
    flat = exponent_fit([3 ** n for n in range(31)], 3)
    assert -0.05 <= flat.p <= 0.05 and flat.residual < 1e-9
    assert flat.n_range == (15, 30)


def test_exponent_fit_on_conjugacy_counts(f2):
    coeffs = count_growth(f2, "conj", 18, "formula", mode="strict").coeffs
    fit = exponent_fit(coeffs, 3, (10, 18))
    assert -1.3 <= fit.p <= -0.7 and fit.residual < 0.05


def test_exponent_fit_handles_huge_integers():
    # 3**n overflows floats from n ~ 650 on
    fit = exponent_fit([3 ** n * n * n for n in range(1000)], 3, (900, 999))
    assert fit.p == pytest.approx(2, abs=1e-6)


def test_exponent_fit_errors():
    with pytest.raises(ValueError):
        exponent_fit([1] * 20, 1)
    with pytest.raises(InsufficientData):
        exponent_fit([3 ** n for n in range(20)], 3, (10, 14))
    with pytest.raises(RangeError):
        exponent_fit([3 ** n for n in range(20)], 3, (0, 19))


def test_reports_serialize_deterministically(f2):
    t = count_growth(f2, "conj", 16, "formula")
    a = band_check(t, 3, range(8, 17)).to_dict()
    assert a == band_check(t, 3, range(8, 17)).to_dict()
    assert all(isinstance(v, str) for v in a["values"])
    assert len(a["min"].replace(".", "").lstrip("0")) <= 12
