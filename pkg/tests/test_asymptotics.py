import math

import pytest

from sl3whittaker import _backend as xp
from sl3whittaker.algebra import SatakeParameter, TorusPoint
from sl3whittaker.asymptotics import (
    C0,
    decay_rate_on_diagonal,
    envelope_check,
    label_difference,
    nilpotent_triples,
    phi_asym_specialized,
    phi_log_asym,
    sigma,
    sigma_derivative,
)
from sl3whittaker.context import PrecisionContext

LAM = SatakeParameter(0.4, 0.1, -0.5)


def _char_residual(t, y1, y2):
    e1 = t.p1 + t.p2 + t.p3
    e2 = t.p1 * t.p2 + t.p1 * t.p3 + t.p2 * t.p3 + y1 * y1 + y2 * y2
    e3 = t.p1 * t.p2 * t.p3 + t.p1 * y2 * y2 + t.p3 * y1 * y1
    return max(abs(e1), abs(e2), abs(e3))


def _mat_cube_norm(m):
    def mul(a, b):
        return [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)]
                for i in range(3)]
    c = mul(m, mul(m, m))
    return max(abs(complex(v)) for row in c for v in row)


def test_six_solutions_and_residuals():
    for y1, y2 in [(1.0, 1.0), (4.0, 1.0), (0.7, 2.3), (2.0, 5.0), (1.3, 1.3)]:
        triples = nilpotent_triples(y1, y2)
        assert len(triples) == 6
        assert [t.label for t in triples] == [1, 2, 3, 4, 5, 6]
        keys = set()
        for t in triples:
            assert _char_residual(t, y1, y2) < 1e-10
            keys.add((round(t.p1.real, 8), round(t.p1.imag, 8),
                      round(t.p3.real, 8), round(t.p3.imag, 8)))
        assert len(keys) == 6


def test_matrix_cube_vanishes():
    for y1, y2 in [(1.0, 1.0), (3.0, 0.5)]:
        for t in nilpotent_triples(y1, y2):
            m = t.matrix(y1, y2)
            norm = max(abs(complex(v)) for row in m for v in row)
            assert _mat_cube_norm(m) <= 1e-6 * norm ** 3


def test_labels_match_formulas_as_multiset():
    for y1, y2 in [(1.0, 1.0), (4.0, 1.0), (0.33, 1.7)]:
        got = sorted((round(t.difference().real, 9), round(t.difference().imag, 9))
                     for t in nilpotent_triples(y1, y2))
        want = []
        for m in range(1, 7):
            d = complex(xp.to_complex(label_difference(m, y1, y2)))
            want.append((round(d.real, 9), round(d.imag, 9)))
        assert got == sorted(want)


def test_real_pair_at_unit_point():
    diffs = [t.difference() for t in nilpotent_triples(1.0, 1.0)]
    reals = sorted(d.real for d in diffs if abs(d.imag) < 1e-12)
    assert len(reals) == 2
    assert abs(reals[0] + 2 ** 1.5) < 1e-10
    assert abs(reals[1] - 2 ** 1.5) < 1e-10


def test_label_example_four_one():
    d = complex(xp.to_complex(label_difference(1, 4.0, 1.0)))
    assert abs(d - (4.0 ** (2 / 3) + 1.0) ** 1.5) < 1e-12


def test_phi_log_asym_signs_and_values():
    t = 3.7
    m6 = complex(xp.to_complex(phi_log_asym(6, t, t)))
    assert abs(m6 - (-2 * math.pi * 2 ** 1.5 * t)) < 1e-10
    m1 = complex(xp.to_complex(phi_log_asym(1, t, t)))
    assert abs(m1 + m6) < 1e-10


def test_phi_log_asym_matches_measured_decay():
    rate = decay_rate_on_diagonal(LAM, [3.0, 4.5, 6.0], PrecisionContext(bits=80))
    target = -complex(xp.to_complex(phi_log_asym(6, 1.0, 1.0))).real
    # phase exponent at (t,t) is linear in t with slope 2 pi 2^{3/2}
    assert abs(rate - target) / target < 0.05


def test_phi_positive_real_part_witnesses():
    # each non-decaying label shows positive real part somewhere
    grid = [(a, b) for a in (1.0, 2.0, 4.0, 8.0, 16.0)
            for b in (1.0, 2.0, 4.0, 8.0, 16.0)]
    for m in range(1, 6):
        assert any(complex(xp.to_complex(phi_log_asym(m, y1, y2))).real > 0
                   for y1, y2 in grid), m


def test_phi_specialized_values_and_consistency():
    got = phi_asym_specialized(1, 1, 1, 0, 1, 2.0)
    want = 2 * math.pi * 8 + 2 * math.pi * 2 * 1.5
    assert abs(got - want) < 1e-10
    # approaches the full phase exponent as t grows
    for m in (1, 2, 3):
        errs = []
        for t in (10.0, 40.0):
            a = phi_asym_specialized(m, 1, 1, 0, 1, t)
            b = complex(xp.to_complex(phi_log_asym(m, 1.0, t ** 3)))
            errs.append(abs(a / b - 1.0))
        assert errs[1] < errs[0]
        assert errs[1] < 1e-3
    vals = {phi_asym_specialized(m, 2, 3, 1, 2, 2.0) for m in (1, 2, 3)}
    assert len(vals) == 3
    with pytest.raises(ValueError):
        phi_asym_specialized(4, 1, 1, 0, 1, 2.0)
    with pytest.raises(ValueError):
        phi_asym_specialized(1, 0, 1, 0, 1, 2.0)


def test_sigma_properties():
    s1 = xp.to_float(sigma(1.0))
    assert abs(s1 - (math.sqrt(3) + math.sqrt(1.5))) < 1e-15
    assert abs(s1 - C0 / (2 * math.pi)) < 1e-12
    for r in (0.1, 1.0, 10.0, 100.0):
        assert xp.to_float(sigma_derivative(r)) < 0
    assert abs(xp.to_float(sigma(1e6)) - 1.0) < 1e-3
    with pytest.raises(ValueError):
        sigma(0.0)


def test_sigma_derivative_matches_finite_difference():
    for r in (0.3, 1.0, 7.0):
        h = 1e-6 * r
        fd = (xp.to_float(sigma(r + h)) - xp.to_float(sigma(r - h))) / (2 * h)
        assert abs(fd - xp.to_float(sigma_derivative(r))) < 1e-6 * abs(fd)


def test_envelope_report():
    grid = [TorusPoint(t, t) for t in (2.0, 2.75, 3.5, 4.25, 5.0)] + \
        [TorusPoint(2.0, 4.0), TorusPoint(4.0, 2.0), TorusPoint(3.0, 5.0)]
    rep = envelope_check(LAM, grid, PrecisionContext(bits=80))
    assert rep.corridor[0] <= rep.rate <= rep.corridor[1]
    assert abs(rep.rate - rep.rate_target) / rep.rate_target < 0.05
    assert rep.upper_margin >= 1.0
    assert rep.lower_margin >= 1.0
    assert math.isfinite(rep.log_c_upper) and math.isfinite(rep.log_c_lower)
    assert len(rep.rows) == 5
    with pytest.raises(ValueError):
        envelope_check(SatakeParameter(complex(0, 0.3), complex(0, -0.3)), grid)
