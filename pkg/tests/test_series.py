from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moontrace.errors import NonIntegralGrid, ZeroLeadingCoefficient
from moontrace.series import QExpansion, U_operator, V_operator, format_series, invert, mul, pow_int, q_derivative

# prod (1 - q^n): signs at generalized pentagonal numbers 0, 1, 2, 5, 7, 12, 15, 22, 26
EULER = {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1, 15: -1, 22: 1, 26: 1}
# 1 / prod (1 - q^n): partition numbers
PARTITIONS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135]


def euler(n=30):
    return QExpansion.from_dict(EULER, n)


def test_inverse_of_euler_product_is_partitions():
    p = invert(euler(15))
    assert [p.coeff(k) for k in range(15)] == PARTITIONS


def test_product_with_inverse_is_one():
    e = euler(30)
    assert mul(e, invert(e)) == QExpansion.one(30)


def test_truncation_of_product():
    a = QExpansion.from_dict({-1: 1, 0: 3}, 5)
    b = QExpansion.from_dict({2: 1}, 4)
    # known below min(5 + 2, 4 - 1)
    assert mul(a, b).trunc == 3


def test_invert_truncation_and_pole():
    a = QExpansion.from_dict({-1: 1, 1: 5}, 6)
    inv = invert(a)
    assert inv.offset == 1
    assert inv.trunc == 8
    assert mul(a, inv).agrees_with(QExpansion.one(10))


def test_invert_zero_leading():
    with pytest.raises(ZeroLeadingCoefficient):
        invert(QExpansion.zero(5))


def test_fractional_grid():
    eta_like = QExpansion.from_dict({Fraction(1, 24): 1, Fraction(25, 24): -1}, 3)
    sq = eta_like * eta_like
    assert sq.coeff(Fraction(1, 12)) == 1
    assert sq.coeff(Fraction(13, 12)) == -2
    assert not sq.is_integral_grid()


def test_u_and_v():
    s = QExpansion.from_dict({-1: 1, 0: 2, 1: 3, 2: 4, 3: 5, 4: 6}, 5)
    u = U_operator(s, 2)
    assert dict(u.items()) == {0: 2, 1: 4, 2: 6}
    assert u.trunc == 3
    v = V_operator(s, 3)
    assert v.coeff(-3) == 1 and v.coeff(3) == 3 and v.coeff(1) == 0
    assert U_operator(v, 3) == s


def test_u_refuses_fractional_grid():
    with pytest.raises(NonIntegralGrid):
        U_operator(QExpansion.from_dict({Fraction(1, 2): 1}, 2, Fraction(1, 2)), 2)


def test_q_derivative():
    s = QExpansion.from_dict({-1: 1, 0: 744, 1: 196884}, 2)
    d = q_derivative(s)
    assert dict(d.items()) == {-1: -1, 1: 196884}


def test_pow_int():
    s = QExpansion.from_dict({0: 1, 1: 1}, 10)
    p5 = pow_int(s, 5)
    assert [p5.coeff(k) for k in range(7)] == [1, 5, 10, 10, 5, 1, 0]
    assert pow_int(s, -2) * pow_int(s, 2) == QExpansion.one(10)
    assert pow_int(s, 0) == QExpansion.one(10)


def test_json_round_trip():
    s = QExpansion.from_dict({Fraction(-1, 8): Fraction(3, 7), Fraction(7, 8): -2}, Fraction(17, 8), Fraction(1, 8))
    obj = s.to_json_obj()
    assert obj["den"] % 24 == 0
    assert QExpansion.from_json(s.to_json()) == s


def test_format():
    s = QExpansion.from_dict({-1: 1, 0: 744, 1: 196884}, 2)
    assert format_series(s) == "q^-1 + 744 + 196884*q + O(q^2)"


def test_immutable():
    s = QExpansion.one(3)
    with pytest.raises(AttributeError):
        s.trunc = 5


def test_coeff_beyond_trunc():
    with pytest.raises(IndexError):
        QExpansion.one(3).coeff(3)


small = st.integers(-50, 50)


def series(draw_off=True):
    return st.builds(
        lambda off, cs: QExpansion(off, 1, cs, off + 12),
        st.integers(-2, 2) if draw_off else st.just(0),
        st.lists(small, min_size=12, max_size=12),
    )


@settings(max_examples=60, deadline=None)
@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert mul(a, b) == mul(b, a)
    assert mul(mul(a, b), c).agrees_with(mul(a, mul(b, c)))
    assert mul(a, b + c).agrees_with(mul(a, b) + mul(a, c))


@settings(max_examples=60, deadline=None)
@given(series())
def test_inverse_property(a):
    if a.is_zero():
        return
    assert mul(a, invert(a)).agrees_with(QExpansion.one(100))


@settings(max_examples=40, deadline=None)
@given(series(False), st.integers(1, 4))
def test_u_v_inverse(a, t):
    assert U_operator(V_operator(a, t), t) == a
