"""Acceptance gate: one test per release criterion, each printing its
pass/fail line at the stated tolerance. Run with -s (or on failure) to see
the lines; the same checks back the CLI `verify` subcommand.
"""

from sl3whittaker import verify


def _run(check):
    result = check()
    print(result.line())
    assert result.passed, result.detail


def test_criterion_01_bessel_closed_forms():
    _run(verify.check_bessel_closed_forms)


def test_criterion_02_product_identity():
    _run(verify.check_product_identity)


def test_criterion_03_order_monotonicity():
    _run(verify.check_order_monotonicity)


def test_criterion_04_degenerate_two_route():
    _run(verify.check_degenerate_two_route)


def test_criterion_05_weylsum_vs_integral():
    _run(verify.check_weylsum_vs_integral)


def test_criterion_06_real_parameter_bound():
    _run(verify.check_real_bound)


def test_criterion_07_nilpotency_system():
    _run(verify.check_nilpotency)


def test_criterion_08_decay_rate():
    _run(verify.check_decay_rate)


def test_criterion_09_m_growth_rate():
    _run(verify.check_m_growth)


def test_criterion_10_projection_roundtrip():
    _run(verify.check_projection_roundtrip)


def test_criterion_11_majorant_certification():
    _run(verify.check_majorants)


def test_criterion_12_amplification_brackets():
    _run(verify.check_gamma_select)


def test_criterion_13_hecke_exactness():
    _run(verify.check_hecke)


def test_criterion_14_cosine_nonvanishing():
    _run(verify.check_cos_nonvanishing)
