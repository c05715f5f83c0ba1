import json
from fractions import Fraction

import pytest

from moontrace.cmnum import PrecisionContext
from moontrace.errors import InsufficientTable
from moontrace.quadforms import mu, valid_residues
from moontrace.traces import (
    G2_series,
    admissible_discriminants,
    boundary_traces,
    split_identity_sides,
    starred_by_fricke_orbits,
    tables_to_json,
    theta_decomposition,
    trace_starred,
    trace_table,
    trace_unstarred,
    zagier_g_series,
)

LEVELS = (1, 2, 3, 5, 6, 7, 10, 13)


@pytest.fixture(scope="module")
def tables():
    return {N: trace_table(N, 2, 43) for N in LEVELS}


def test_known_spot_values():
    assert trace_starred(6, 2, 8) == -29
    assert trace_starred(10, 2, 4) == -7
    assert trace_unstarred(6, 2, 8, 8) == -58


def test_level_one_values():
    # phi_2(0) / 3 and phi_2(1728) / 2
    assert trace_unstarred(1, 2, 3, 1) == 53256
    assert trace_unstarred(1, 2, 4, 0) == 287244


@pytest.mark.parametrize("N", [6, 10])
def test_small_starred_traces_vanish(N):
    special = {6: 8, 10: 4}[N]
    for d in admissible_discriminants(N, 8):
        assert trace_starred(N, 2, d) == (-29 if N == 6 else -7) * (d == special)


@pytest.mark.parametrize(
    "N,t0,tm1,tm4",
    [(1, 6, -1, -2), (2, 5, -1, -2), (3, 3, -1, -2), (5, 3, -1, -2), (6, Fraction(5, 2), -1, -2),
     (7, 3, -1, -2), (10, Fraction(5, 2), -1, -2), (13, 3, -1, -2)],
)
def test_starred_boundary(N, t0, tm1, tm4):
    st = boundary_traces(N, {2: 1}).starred
    assert (st[0], st[-1], st[-4]) == (t0, tm1, tm4)


@pytest.mark.parametrize("N", LEVELS)
def test_unstarred_boundary(N):
    un = boundary_traces(N, {2: 1}).unstarred
    even = N % 2 == 0
    assert un[0] == (10 if even else 6)
    assert un[-1] == -1
    assert un[-4] == (-4 if even else -2)


@pytest.mark.parametrize("N", LEVELS)
def test_h_independence(N, tables):
    for d in admissible_discriminants(N, 43):
        vals = {trace_unstarred(N, 2, d, h) for h in valid_residues(d, N)}
        assert vals == {tables[N].unstarred[d]}


@pytest.mark.parametrize("N", LEVELS)
def test_scalar_relation(N, tables):
    un, st = tables[N]
    for d, v in un.entries.items():
        k = mu(N, abs(d))
        assert st[d] * 2**k == v


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
def test_fricke_orbit_merge(p, tables):
    for d in admissible_discriminants(p, 43):
        if d % p == 0:
            assert starred_by_fricke_orbits(p, 2, d) == tables[p].starred[d]


@pytest.mark.parametrize("N", LEVELS)
def test_split_identity(N, tables):
    lhs, rhs = split_identity_sides(tables[N].unstarred, tables[N].starred, N, 10)
    assert lhs.trunc == rhs.trunc == 11
    assert lhs == rhs


@pytest.mark.parametrize("N", LEVELS)
def test_theta_components(N, tables):
    tc = theta_decomposition(tables[N].unstarred, N, 40)
    M = 4 * N
    for mu_ in range(2 * N):
        assert tc.h_mu[mu_] == tc.h_mu[(2 * N - mu_) % (2 * N)]
        for e, _ in tc.h_mu[mu_].items():
            assert (e * M + mu_ * mu_) % M == 0
    if N >= 3:
        assert tc.h_mu[0].valuation == 0


def test_G2_series():
    st = trace_table(2, 2, 12).starred
    g = G2_series(st, 3)
    assert g.coeff(-1) == -2
    assert g.coeff(0) == 5 - 2 - 4
    with pytest.raises(InsufficientTable):
        G2_series(st, 4)


def test_G2_first_coefficient_level6(tables):
    st = tables[6].starred
    assert G2_series(st, 1).coeff(1) == st[4] + 2 * st[3] + 2 * st[0]


def test_zagier_g2():
    un = trace_table(1, 2, 8).unstarred
    g = zagier_g_series(un)
    assert g.coeff(-4) == -2 and g.coeff(-1) == -1 and g.coeff(0) == 6
    assert g.coeff(3) == 53256


def test_cache_round_trip(tmp_path):
    a = trace_table(5, 2, 24, cache_dir=tmp_path)
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    first = files[0].read_bytes()
    b = trace_table(5, 2, 24, cache_dir=tmp_path)
    assert tables_to_json(a) == tables_to_json(b)
    assert files[0].read_bytes() == first
    fresh = trace_table(5, 2, 24)
    assert tables_to_json(fresh).encode() == first


def test_cache_key_depends_on_precision(tmp_path):
    trace_table(3, 2, 8, cache_dir=tmp_path)
    trace_table(3, 2, 8, PrecisionContext(bits=320), cache_dir=tmp_path)
    assert len(list(tmp_path.glob("*.json"))) == 2


@pytest.mark.parametrize("N", LEVELS)
def test_precision_doubling_stable(N, tables):
    again = trace_table(N, 2, 43, PrecisionContext(bits=512, guard_bits=128))
    assert again.unstarred.entries == tables[N].unstarred.entries


def test_table_json_shape(tables):
    obj = json.loads(tables_to_json(tables[6]))
    assert obj["starred"]["entries"]["8"] == "-29"
    assert obj["starred"]["provenance"]["0"] == "boundary-formula"
