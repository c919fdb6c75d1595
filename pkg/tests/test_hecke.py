import random
from fractions import Fraction

import pytest

from sl3whittaker.context import InsufficientSupportError
from sl3whittaker.hecke import (
    QExpansion,
    hecke_apply,
    hecke_brute_oracle,
    hecke_combo,
)

q = QExpansion.monomial


def test_identity_operator():
    f = QExpansion({-3: Fraction(2, 7), 0: 5, 2: -1})
    assert hecke_apply(1, f) == f


def test_single_monomials():
    assert hecke_apply(2, q(-1)) == q(-2)
    assert hecke_apply(4, q(-2)) == QExpansion({-8: 1, -2: 2})
    # coprime index multiplies the growth exponent
    assert hecke_apply(6, q(-5)) == q(-30)
    # positive powers mirror the polar formula
    assert hecke_apply(4, q(2)) == QExpansion({8: 1, 2: 2})
    # constant term picks up the divisor sum
    assert hecke_apply(6, q(0, 3)) == q(0, 36)


def test_brute_oracle_examples():
    assert hecke_brute_oracle(2, 1) == q(-2)
    assert hecke_brute_oracle(3, 3) == QExpansion({-9: 1, -1: 3})


def test_oracle_agreement_exhaustive():
    for n in range(1, 51):
        for m in range(1, 51):
            assert hecke_apply(n, q(-m)) == hecke_brute_oracle(n, m), (n, m)


def test_commutativity_on_generator():
    for n in range(1, 31):
        for m in range(1, 31):
            a = hecke_apply(n, hecke_apply(m, q(-1)))
            b = hecke_apply(m, hecke_apply(n, q(-1)))
            assert a == b, (n, m)


def test_combo_on_simple_polar():
    cn = {1: 1, 2: 3, 5: Fraction(1, 2)}
    f = hecke_combo(cn, q(-1), 10)
    assert f == QExpansion({-1: 1, -2: 3, -5: Fraction(1, 2)})
    # trivial schedule returns the polar part
    polar = QExpansion({-1: 2, -4: Fraction(1, 3)})
    assert hecke_combo({1: 1}, polar, 10) == polar


def test_combo_swap_symmetry():
    rng = random.Random(5)
    for _ in range(10):
        cn = {rng.randint(1, 12): Fraction(rng.randint(1, 9), rng.randint(1, 9))
              for _ in range(4)}
        em = {rng.randint(1, 12): Fraction(rng.randint(1, 9), rng.randint(1, 9))
              for _ in range(4)}
        a = hecke_combo(cn, QExpansion({-m: v for m, v in em.items()}), 80)
        b = hecke_combo(em, QExpansion({-n: v for n, v in cn.items()}), 80)
        assert a == b


def test_combo_matches_operator_expansion():
    # f_k computed by the divisor formula equals literally applying the
    # operators and collecting coefficients
    cn = {2: Fraction(1, 3), 3: 2, 6: 1}
    polar = QExpansion({-1: 1, -2: Fraction(5, 7), -6: 2})
    direct = QExpansion({})
    for n, c in cn.items():
        direct = direct + c * hecke_apply(n, polar)
    combo = hecke_combo(cn, polar, 100)
    assert combo == QExpansion({e: v for e, v in direct.coeffs.items() if e < 0})


def test_insufficient_support():
    with pytest.raises(InsufficientSupportError):
        hecke_combo({4: 1}, q(-2), 8, polar_complete=False)
    # complete support: missing terms simply vanish
    hecke_combo({4: 1}, q(-2), 8, polar_complete=True)


def test_exactness_no_floats():
    out = hecke_combo({3: Fraction(1, 3)}, QExpansion({-3: Fraction(1, 7)}), 30)
    for v in out.coeffs.values():
        assert isinstance(v, Fraction)


def test_validation():
    with pytest.raises(ValueError):
        hecke_apply(0, q(-1))
    with pytest.raises(ValueError):
        hecke_combo({1: 1}, QExpansion({2: 1}), 5)
    with pytest.raises(ValueError):
        hecke_combo({-2: 1}, q(-1), 5)


def test_parse_and_str():
    assert QExpansion.parse("q^-2") == q(-2)
    assert QExpansion.parse("3*q^-1 + q^2") == QExpansion({-1: 3, 2: 1})
    e = QExpansion({-8: 1, -2: 2, 0: Fraction(-1, 2), 4: 3})
    assert QExpansion.parse(str(e)) == e
    assert str(QExpansion({})) == "0"
