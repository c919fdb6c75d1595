import math
from fractions import Fraction

import mpmath
import pytest

from sl3whittaker import _backend as xp
from sl3whittaker.context import PoleError, PrecisionContext
from sl3whittaker.gammafn import bernoulli, log_gamma, log_gamma_raw

CTX = PrecisionContext(bits=128)


def test_bernoulli_table():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(3) == 0
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(6) == Fraction(1, 42)
    assert bernoulli(8) == Fraction(-1, 30)
    assert bernoulli(10) == Fraction(5, 66)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert bernoulli(30) == Fraction(8615841276005, 14322)


def test_classical_values():
    assert xp.to_float(abs(log_gamma(1.0, CTX))) < 1e-35
    with xp.workprec(160):
        half_err = abs(log_gamma(0.5, CTX) - xp.log(xp.sqrt(xp.pi())))
        five_err = abs(log_gamma(5.0, CTX) - xp.log(xp.real(24)))
    assert xp.to_float(half_err) < 1e-35
    assert xp.to_float(five_err) < 1e-33


def test_recurrence():
    z = complex(0.7, 1.3)
    a = log_gamma(z, CTX)
    b = log_gamma(complex(1.7, 1.3), CTX)
    with xp.workprec(160):
        diff = b - a - xp.log(xp.cplx(z))
    assert xp.to_float(abs(diff)) < 1e-35


def test_against_mpmath():
    pts = [complex(3.7, 2.1), complex(0.1, -0.4), complex(-2.3, 0.8),
           complex(10.0, -15.0), complex(-6.5, 0.01)]
    for z in pts:
        mine = log_gamma(z, CTX)
        with mpmath.workprec(200):
            ref = mpmath.loggamma(mpmath.mpc(z.real, z.imag))
            diff = abs(xp.to_mpmath(mine) - ref)
        assert diff < mpmath.mpf(2) ** -118, (z, diff)


def test_elevated_precision_self_consistency():
    # self-consistency oracle: the same scheme at four times the bits
    z = complex(3.7, 2.1)
    base = log_gamma_raw(z, 128)
    oracle = log_gamma_raw(z, 512)
    with xp.workprec(560):
        rel = abs(base - oracle) / abs(oracle)
    assert xp.to_float(rel) < 2.0 ** -118


def test_pole_rejection():
    with pytest.raises(PoleError):
        log_gamma(0.0, CTX)
    with pytest.raises(PoleError):
        log_gamma(-3.0, CTX)
    # nearby but not within the pole window is fine
    log_gamma(-3.0 + 1e-6, CTX)
