from fractions import Fraction

import pytest

from moontrace.errors import UnsupportedLevel
from moontrace.identities import (
    eisenstein_residual,
    sigma_correction,
    verify_eisenstein,
    verify_kaneko,
    verify_theorem1_part1,
    verify_theorem1_part2,
    verify_u_relations,
)

LEVELS = (2, 3, 5, 6, 7, 10, 13)


def test_sigma_correction_at_zero():
    # constant terms with sigma1^(N)(0) = (N - 1)/24
    assert sigma_correction(2, 0) == 24 * Fraction(1, 24)
    assert sigma_correction(3, 0) == 36 * Fraction(2, 24)
    assert sigma_correction(6, 0) == 7 * Fraction(5, 24) + 26 * Fraction(2, 24) - 3 * Fraction(1, 24)


def test_kaneko_small():
    rep = verify_kaneko(4)
    assert rep.passed
    r = {x.n: x for x in rep.records}
    assert r[-1].lhs == -2 and r[0].rhs == 0
    assert r[1].lhs == 2 * 196884


@pytest.mark.parametrize("N", LEVELS)
def test_part1_small(N):
    rep = verify_theorem1_part1(N, 4)
    assert rep.passed, rep.failures()


def test_part1_n1_level2():
    r = {x.n: x for x in verify_theorem1_part1(2, 1).records}
    assert r[1].lhs == 552


@pytest.mark.parametrize("N", LEVELS)
def test_part2_small(N):
    rep = verify_theorem1_part2(N, 2)
    assert rep.passed, rep.failures()


def test_part2_level2_n1():
    r = {x.n: x for x in verify_theorem1_part2(2, 1).records}
    assert r[1].lhs == 8744 == r[1].rhs


def test_residual_level6():
    fit = eisenstein_residual(6, 12)
    assert [fit.residual.coeff(n) for n in range(3)] == [Fraction(7, 2), 7, 47]
    assert fit.coefficients == [Fraction(7, 24), Fraction(13, 12), Fraction(-1, 8)]
    assert fit.remainder.is_zero()


def test_residual_level10():
    fit = eisenstein_residual(10, 12)
    assert [fit.residual.coeff(n) for n in range(3)] == [Fraction(7, 2), 4, 24]
    assert fit.coefficients == [Fraction(1, 6), Fraction(1, 2), 0]


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
def test_residual_prime(p):
    rep = verify_eisenstein(p, 12)
    assert rep.passed


def test_residual_constant_level2():
    assert eisenstein_residual(2, 12).residual.coeff(0) == 1


@pytest.mark.parametrize("N", LEVELS)
def test_u_relations(N):
    assert verify_u_relations(N, 20).passed


def test_unsupported():
    with pytest.raises(UnsupportedLevel):
        verify_theorem1_part1(1, 2)


def test_report_dict():
    d = verify_u_relations(2, 5).as_dict()
    assert d["pass"] and d["records"][0] == {"n": -1, "lhs": "1", "rhs": "1", "pass": True}
