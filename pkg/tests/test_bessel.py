import math
from fractions import Fraction

import mpmath
import pytest

from sl3whittaker import _backend as xp
from sl3whittaker.bessel import (
    BesselOrder,
    bessel_asymptotic_leading,
    bessel_i,
    bessel_k,
    half_integer_i,
    half_integer_k,
    order_monotonicity_check,
    product_identity_residual,
)
from sl3whittaker.context import NonConvergenceError, PrecisionContext

CTX = PrecisionContext(bits=128)


def test_i_at_zero():
    assert xp.to_complex(bessel_i(0.0, 0.0, CTX)) == 1
    assert xp.to_complex(bessel_i(2.5, 0.0, CTX)) == 0
    with pytest.raises(ValueError):
        bessel_i(-0.5, 0.0, CTX)


def test_i_half_integer_closed_form():
    for x in (0.1, 1.0, 2.0, 10.0, 50.0):
        got = bessel_i(0.5, x, CTX)
        want = half_integer_i(Fraction(1, 2), x, 160)
        assert xp.to_float(abs(got - want) / abs(want)) < 1e-30
    got = bessel_i(0.5, 2.0, CTX)
    assert abs(xp.to_float(xp.re_part(got)) - 2.046236863089057) < 1e-12


def test_i_integer_order_symmetry():
    a = bessel_i(3.0, 1.7, CTX)
    b = bessel_i(-3.0, 1.7, CTX)
    assert xp.to_float(abs(a - b) / abs(a)) < 1e-30


def test_i_against_mpmath_complex_order():
    for nu, x in [(complex(0.45, 0.0), 6.28), (complex(-1.3, 0.4), 7.0),
                  (complex(0.15, -0.85), 0.3), (complex(2.2, 1.1), 40.0)]:
        got = bessel_i(nu, x, CTX)
        with mpmath.workprec(220):
            ref = mpmath.besseli(mpmath.mpc(nu.real, nu.imag), x)
            rel = abs(xp.to_mpmath(got) - ref) / abs(ref)
        assert rel < mpmath.mpf(2) ** -110, (nu, x, rel)


def test_k_half_integer_closed_form():
    for x in (0.1, 1.0, 2.0, 10.0, 50.0):
        got = bessel_k(0.5, x, CTX)
        want = half_integer_k(x, 160)
        assert xp.to_float(abs(got - want) / abs(want)) < 1e-30
    got = bessel_k(0.5, 2.0, CTX)
    assert abs(xp.to_float(xp.re_part(got)) - 0.11993777196806145) < 1e-15


def test_k_order_symmetry():
    nu = complex(0.37, 0.2)
    a = bessel_k(nu, 2.0, CTX)
    b = bessel_k(complex(-nu.real, -nu.imag), 2.0, CTX)
    assert xp.to_float(abs(a - b)) <= 2.0 ** -(CTX.bits - 12) * xp.to_float(abs(a))


def test_k_near_integer_and_integer():
    for nu in (1.0, 1.001, 0.0, 2.04):
        got = bessel_k(nu, 3.0, CTX)
        with mpmath.workprec(220):
            ref = mpmath.besselk(mpmath.mpf(nu), 3)
            rel = abs(xp.to_mpmath(got) - ref) / abs(ref)
        assert rel < 1e-25, (nu, rel)


def test_k_exponential_decay_matches_leading():
    # K_{1/3}(30) e^{30} sqrt(2*30/pi) -> 1 within O(1/30)
    got = bessel_k(Fraction(1, 3), 30.0, CTX)
    with xp.workprec(160):
        scaled = got * xp.exp(xp.real(30)) * xp.sqrt(2 * xp.real(30) / xp.pi())
    assert abs(xp.to_float(xp.re_part(scaled)) - 1.0) < 1.0 / 30.0


def test_asymptotic_leading_shapes():
    u = 30.0
    k_lead = bessel_asymptotic_leading("K", u)
    with xp.workprec(120):
        want = xp.sqrt(xp.pi() / 60) * xp.exp(xp.real(-30))
        assert xp.to_float(abs(k_lead - want) / want) < 1e-15
    # series route approaches the leading term as u grows, error decreasing
    errs = []
    for u in (10.0, 20.0, 40.0):
        kv = bessel_k(0.3, u, CTX)
        lead = bessel_asymptotic_leading("K", u)
        errs.append(abs(xp.to_float(xp.re_part(kv)) / xp.to_float(lead) - 1.0))
    assert errs[0] > errs[1] > errs[2]
    iv = bessel_i(0.3, 25.0, CTX)
    lead = bessel_asymptotic_leading("I", 25.0)
    assert abs(xp.to_float(xp.re_part(iv)) / xp.to_float(lead) - 1.0) < 0.05


def test_precision_scaling():
    # values recomputed at double the bits agree to 2^-110
    hi = PrecisionContext(bits=256)
    pts = [(complex(0.45, 0.1), x) for x in (0.1, 0.7, 3.0, 11.0, 29.0)] + \
        [(complex(-0.8, 0.33), x) for x in (0.2, 1.9, 8.0, 17.0, 50.0)]
    for nu, x in pts:
        for fn in (bessel_i, bessel_k):
            a = fn(nu, x, CTX)
            b = fn(nu, x, hi)
            with xp.workprec(300):
                rel = abs(a - b) / abs(b)
            assert xp.to_float(rel) < 2.0 ** -110, (fn.__name__, nu, x)


def test_wronskian_style_consistency():
    # K is the sine-weighted I-difference: rebuild it from I values
    from sl3whittaker.bessel import k_at_bits
    for nu in (complex(0.37, 0.2), complex(0.45, 0.0), complex(-0.3, 1.0)):
        for x in (0.1, 1.0, 7.0, 30.0):
            wb = 128 + int(math.ceil(2 * x * 1.4427)) + 48
            with xp.workprec(wb):
                ip = bessel_i(nu, x, PrecisionContext(bits=wb - 24))
                im = bessel_i(complex(-nu.real, -nu.imag), x,
                              PrecisionContext(bits=wb - 24))
                kv = k_at_bits(nu, x, 128, CTX.max_terms)
                lhs = kv / (im - ip)
                rhs = xp.pi() / (2 * xp.sin(xp.pi() * xp.cplx(nu)))
                rel = xp.to_float(abs(lhs - rhs) / abs(rhs))
            assert rel < 2.0 ** -100, (nu, x, rel)


def test_product_identity_examples():
    r = product_identity_residual(0.5, 0.5, 1.0, CTX)
    assert xp.to_float(r) <= 1e-10
    assert xp.to_float(r) <= 10 * CTX.quad_tol
    r = product_identity_residual(complex(0.4, 0.7), complex(0.4, -0.7), 2.0, CTX)
    assert xp.to_float(r) <= 1e-10
    r = product_identity_residual(0.0, 0.0, 0.5, CTX)
    assert xp.to_float(r) <= 1e-12
    with pytest.raises(ValueError):
        product_identity_residual(-0.7, -0.7, 1.0, CTX)


def test_product_identity_conjugate_pair_real():
    # both sides real and positive for conjugate orders
    mu = complex(0.4, 0.7)
    a = bessel_i(mu, 2.0, CTX)
    b = bessel_i(mu.conjugate(), 2.0, CTX)
    prod = a * b
    assert xp.to_float(xp.re_part(prod)) > 0
    assert abs(xp.to_float(xp.im_part(prod))) < 1e-30


def test_order_monotonicity_cases():
    assert order_monotonicity_check([0.2, 0.5, 1.0], [0.0], [3.0])
    assert order_monotonicity_check([0.5], [0.0, 0.5, 1.0], [3.0])
    assert order_monotonicity_check([0.7], [0.1], [2.0])  # single point: vacuous
    with pytest.raises(ValueError):
        order_monotonicity_check([-0.1, 0.5], [0.0], [1.0])


def test_series_cap_raises():
    tiny = PrecisionContext(bits=128, max_terms=64)
    with pytest.raises(NonConvergenceError):
        bessel_i(0.5, 400.0, tiny)


def test_order_wrapper():
    o = BesselOrder(complex(1.98, 0.0))
    assert abs(o.int_distance - 0.02) < 1e-12
