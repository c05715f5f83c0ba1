import random
from fractions import Fraction

import pytest

from moontrace.errors import BadDiscriminant, BadResidue, NotDivisible
from moontrace.quadforms import (
    BQF,
    IDENTITY,
    Mat,
    act,
    atkin_lehner_prime,
    canonical_label,
    classes_gamma0,
    classes_sl2,
    coset_reps,
    gamma0_index,
    heegner_point,
    is_reduced,
    minimize_in_gamma0,
    mu,
    reduced_forms,
    scan_gamma0_labels,
    sl2_reduce,
    valid_residues,
)

# Hurwitz class numbers H(d): weighted count of SL2(Z)-classes, 1/2 and 1/3 for [a,0,a], [a,a,a]
HURWITZ = {3: Fraction(1, 3), 4: Fraction(1, 2), 7: 1, 8: 1, 11: 1, 12: Fraction(4, 3), 15: 2, 16: Fraction(3, 2),
           19: 1, 20: 2, 23: 3, 24: 2, 27: Fraction(4, 3), 28: 2, 31: 3, 32: 3, 35: 2, 36: Fraction(5, 2)}
# class numbers of primitive forms
CLASS_NUMBERS = {23: 3, 47: 5, 71: 7, 163: 1, 39: 4, 56: 4}
LEVELS = (1, 2, 3, 5, 6, 7, 10, 13)


@pytest.mark.parametrize("d,H", sorted(HURWITZ.items()))
def test_hurwitz(d, H):
    assert sum(Fraction(1, c.stabilizer_order) for c in classes_sl2(d)) == H


@pytest.mark.parametrize("d,h", sorted(CLASS_NUMBERS.items()))
def test_primitive_class_numbers(d, h):
    import math

    assert sum(1 for R in reduced_forms(d) if math.gcd(math.gcd(*R[:2]), R[2]) == 1) == h


def test_action_example():
    assert act(BQF(6, -4, 1), Mat(1, 1, 0, 1)) == BQF(6, 8, 3)


def test_action_is_right_action():
    rng = random.Random(1)
    Q = BQF(6, -4, 1)
    for _ in range(50):
        g, h = random_sl2(rng), random_sl2(rng)
        assert act(act(Q, g), h) == act(Q, g @ h)


def test_bad_discriminant():
    with pytest.raises(BadDiscriminant):
        reduced_forms(6)


def test_reduce():
    Q = BQF(6, -4, 1)
    R, g = sl2_reduce(Q)
    assert is_reduced(R) and act(Q, g) == R and g.det() == 1
    assert R == BQF(1, 0, 2)


@pytest.mark.parametrize("N", LEVELS)
def test_coset_count(N):
    reps = coset_reps(N)
    assert len(reps) == gamma0_index(N)
    assert reps[0] == IDENTITY


def random_sl2(rng, steps=8):
    g = IDENTITY
    for _ in range(steps):
        k = rng.randint(-3, 3)
        g = g @ (Mat(1, k, 0, 1) if rng.random() < 0.5 else Mat(1, 0, k, 1))
    return g


def random_gamma0(rng, N, steps=8):
    g = IDENTITY
    for _ in range(steps):
        k = rng.randint(-3, 3)
        g = g @ (Mat(1, k, 0, 1) if rng.random() < 0.5 else Mat(1, 0, N * k, 1))
    return g


@pytest.mark.parametrize("N", LEVELS)
def test_label_invariance(N):
    rng = random.Random(N)
    d = 4 * N * 3 - 1 if valid_residues(4 * N * 3 - 1, N) else 20 * N + 4
    d = next(x for x in range(d, d + 200) if (-x) % 4 in (0, 1) and valid_residues(x, N))
    h = valid_residues(d, N)[0]
    reps = classes_gamma0(d, N, h)
    for i in range(120):
        fc = reps[i % len(reps)]
        g = random_gamma0(rng, N)
        assert g.in_gamma0(N) and g.det() == 1
        assert canonical_label(act(fc.rep, g), N) == fc.label


@pytest.mark.parametrize("N", LEVELS[1:])
def test_labels_separate_classes(N):
    for d in range(3, 80):
        for h in valid_residues(d, N) if (-d) % 4 in (0, 1) else []:
            labels = [c.label for c in classes_gamma0(d, N, h)]
            assert len(labels) == len(set(labels))


@pytest.mark.parametrize("N", LEVELS[1:])
def test_enumeration_agrees_with_wide_scan(N):
    for d in range(3, 120, 1):
        if (-d) % 4 not in (0, 1):
            continue
        for h in valid_residues(d, N):
            assert {c.label for c in classes_gamma0(d, N, h)} == scan_gamma0_labels(d, N, h, widen=4)


def test_narrow_scan_can_miss_classes():
    # a class whose smallest leading coefficient (60) lies beyond N(ceil(sqrt(d/3)) + 2) = 50
    labels = {c.label for c in classes_gamma0(39, 10, 9)}
    assert scan_gamma0_labels(39, 10, 9) < labels


def test_representatives_are_in_Q_dNh():
    for N in LEVELS:
        for d in (3, 4, 7, 8, 15, 20, 23, 24, 39, 40):
            for h in valid_residues(d, N):
                for c in classes_gamma0(d, N, h):
                    a, b, _ = c.rep
                    assert c.rep.disc == -d and a % N == 0 and (b - h) % (2 * N) == 0


def test_minimize_keeps_orbit():
    Q = BQF(60, -51, 11)
    Q2, M = minimize_in_gamma0(act(Q, Mat(1, 0, 10, 1) @ Mat(1, 2, 0, 1)), 10)
    assert M.in_gamma0(10)
    assert Q2.a == 60 and canonical_label(Q2, 10) == canonical_label(Q, 10)


def test_known_small_classes():
    [c] = classes_gamma0(8, 6, 8)
    assert canonical_label(BQF(6, -4, 1), 6) == c.label
    assert c.stabilizer_order == 1
    [c] = classes_gamma0(4, 10, 14)
    assert canonical_label(BQF(10, -6, 1), 10) == c.label


def test_bad_residue():
    with pytest.raises(BadResidue):
        classes_gamma0(8, 6, 1)


def test_atkin_lehner():
    assert atkin_lehner_prime(BQF(6, -4, 1), 2) == BQF(2, 4, 3)
    with pytest.raises(NotDivisible):
        atkin_lehner_prime(BQF(1, 1, 1), 2)


def test_heegner_point():
    p = heegner_point(BQF(6, -4, 1))
    assert (p.minus_b, p.d, p.two_a) == (4, 8, 12)


def test_mu():
    assert mu(6, 8) == 1
    assert mu(6, 0) == 2
    assert mu(10, 4) == 1
    assert mu(13, 4) == 0
    assert mu(6, 12) == 2
