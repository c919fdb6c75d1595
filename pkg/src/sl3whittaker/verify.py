"""Acceptance checks: every release criterion as a callable returning a
CheckResult, grouped into named suites. The pytest acceptance module and the
command-line `verify` subcommand both run exactly these functions.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from . import _backend as xp
from .algebra import SatakeParameter, TorusPoint, in_general_position
from .asymptotics import (
    C0,
    decay_rate_on_diagonal,
    label_difference,
    nilpotent_triples,
)
from .bessel import (
    bessel_i,
    bessel_k,
    half_integer_i,
    half_integer_k,
    order_monotonicity_check,
    product_identity_residual,
)
from .context import CancellationAlarm, PrecisionContext
from .cosets import cos_nonvanishing_check, coset_enumerate
from .fourier import (
    CoefficientModel,
    SynthesizedField,
    Truncation,
    gamma_select,
    majorant_sums,
    pk0l_value,
    project_k0l,
)
from .hecke import QExpansion, hecke_apply, hecke_brute_oracle, hecke_combo
from .whittaker import (
    m_whittaker,
    w_degen_a1,
    w_degen_a2,
    w_real_bound_check,
    w_vt,
    w_weylsum,
)

from fractions import Fraction


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


_LAM = SatakeParameter(0.4, 0.1, -0.5)
_LAMC = SatakeParameter(complex(0.3, 0.2), complex(0.1, -0.2), complex(-0.4, 0.0))


def check_bessel_closed_forms() -> CheckResult:
    """Half-integer I and K against closed forms, 1e-12 relative at 128 bits."""
    ctx = PrecisionContext(bits=128)
    worst = 0.0
    for x in (0.1, 1.0, 2.0, 10.0, 50.0):
        ki = bessel_k(0.5, x, ctx)
        kc = half_integer_k(x, 160)
        worst = max(worst, xp.to_float(abs(ki - kc) / abs(kc)))
        ii = bessel_i(0.5, x, ctx)
        ic = half_integer_i(Fraction(1, 2), x, 160)
        worst = max(worst, xp.to_float(abs(ii - ic) / abs(ic)))
    return CheckResult("bessel-closed-forms", worst <= 1e-12,
                       f"max relative error {worst:.3e} (tolerance 1e-12)")


def check_product_identity() -> CheckResult:
    """Product-integral identity residual <= 1e-10 on the 27-point lattice."""
    ctx = PrecisionContext(bits=128)
    worst = 0.0
    for sig in (0.5, 1.0, 1.5):
        for t in (0.0, 0.35, 0.7):
            for x in (0.5, 1.0, 2.0):
                r = product_identity_residual(complex(sig, t), complex(sig, -t),
                                              x, ctx)
                worst = max(worst, xp.to_float(r))
    return CheckResult("product-identity", worst <= 1e-10,
                       f"max residual {worst:.3e} on 27 points (tolerance 1e-10)")


def check_order_monotonicity() -> CheckResult:
    """|I| strictly decreasing in Re(order), nondecreasing in Im, 5x5x3 grid."""
    ok = order_monotonicity_check(
        [0.2, 0.4, 0.6, 0.8, 1.0], [0.0, 0.25, 0.5, 0.75, 1.0],
        [1.0, 3.0, 10.0])
    return CheckResult("order-monotonicity", ok,
                       "zero violations on 5x5x3 grid" if ok else "violations found")


def check_degenerate_two_route() -> CheckResult:
    """Combination vs closed-form degenerate kernels, 1e-9 at 128 bits."""
    ctx = PrecisionContext(bits=128)
    pts = [(0.6, 1.4), (1.0, 1.0), (1.5, 0.7), (0.8, 2.0), (1.9, 1.1)]
    worst = 0.0
    for lam in (_LAM, _LAMC):
        for y1, y2 in pts:
            p = TorusPoint(y1, y2)
            for fn in (w_degen_a1, w_degen_a2):
                a = fn(lam, p, ctx, route="combination")
                b = fn(lam, p, ctx, route="closed_form")
                worst = max(worst, xp.to_float(abs(a - b) / abs(b)))
    return CheckResult("degenerate-two-route", worst <= 1e-9,
                       f"max relative difference {worst:.3e} over 10 points x2 "
                       "kernels (tolerance 1e-9)")


def check_weylsum_vs_integral() -> CheckResult:
    """Six-term sum vs double-K integral on the 3x3 grid, both parameters."""
    ctx = PrecisionContext(bits=128)
    worst = 0.0
    alarms = 0
    for lam in (_LAM, _LAMC):
        for y1 in (0.5, 1.0, 2.0):
            for y2 in (0.5, 1.0, 2.0):
                p = TorusPoint(y1, y2)
                try:
                    a = w_weylsum(lam, p, ctx)
                except CancellationAlarm:
                    alarms += 1
                    continue
                b = w_vt(lam, p, ctx)
                worst = max(worst, xp.to_float(abs(a - b) / abs(b)))
    passed = worst <= 1e-6 and alarms == 0
    return CheckResult("weylsum-vs-integral", passed,
                       f"max relative difference {worst:.3e} over 18 points, "
                       f"{alarms} cancellation alarms (tolerance 1e-6, 0 alarms)")


def check_real_bound() -> CheckResult:
    """|W(lam)| <= W(Re lam)(1+1e-6) at 20 random samples; positivity."""
    rng = random.Random(20240501)
    ctx = PrecisionContext(bits=96)
    fails = 0
    tried = 0
    while tried < 20:
        l1 = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.8, 0.8))
        l2 = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.8, 0.8))
        lam = SatakeParameter(l1, l2)
        if not (in_general_position(lam, 0.1)
                and in_general_position(lam.real_part(), 0.1)):
            continue
        tried += 1
        p = TorusPoint(rng.uniform(0.6, 2.0), rng.uniform(0.6, 2.0))
        wr = w_vt(lam.real_part(), p, ctx)
        if xp.to_float(xp.re_part(wr)) <= 0:
            fails += 1
            continue
        if not w_real_bound_check(lam, p, ctx):
            fails += 1
    return CheckResult("real-parameter-bound", fails == 0,
                       f"{20 - fails}/20 samples satisfied the bound with "
                       "positive real-parameter values")


def check_nilpotency() -> CheckResult:
    """Six labeled solutions at five samples; residuals and label matching."""
    samples = [(1.0, 1.0), (4.0, 1.0), (0.7, 2.3), (2.0, 5.0), (1.3, 0.4)]
    worst_res = 0.0
    worst_label = 0.0
    for y1, y2 in samples:
        triples = nilpotent_triples(y1, y2)
        if len(triples) != 6:
            return CheckResult("nilpotency-system", False,
                               f"expected 6 solutions at {(y1, y2)}")
        got = [t.difference() for t in triples]
        want = [complex(xp.to_complex(label_difference(m, y1, y2)))
                for m in range(1, 7)]
        # multiset distance by greedy nearest matching
        pool = list(got)
        for w in want:
            best = min(pool, key=lambda g: abs(g - w))
            worst_label = max(worst_label, abs(best - w))
            pool.remove(best)
        for t in triples:
            p1, p2, p3 = t.p1, t.p2, t.p3
            e1 = p1 + p2 + p3
            e2 = p1 * p2 + p1 * p3 + p2 * p3 + y1 * y1 + y2 * y2
            e3 = p1 * p2 * p3 + p1 * y2 * y2 + p3 * y1 * y1
            worst_res = max(worst_res, abs(e1), abs(e2), abs(e3))
    reals = sorted(t.difference().real for t in nilpotent_triples(1.0, 1.0)
                   if abs(t.difference().imag) < 1e-12)
    pair_err = max(abs(reals[0] + 2 ** 1.5), abs(reals[-1] - 2 ** 1.5))
    passed = worst_res <= 1e-8 and worst_label <= 1e-8 and pair_err <= 1e-10
    return CheckResult(
        "nilpotency-system", passed,
        f"residual {worst_res:.2e} (<=1e-8), label multiset {worst_label:.2e} "
        f"(<=1e-8), (1,1) real pair error {pair_err:.2e} (<=1e-10)")


def check_decay_rate() -> CheckResult:
    """Diagonal decay rate within 5% of 2^{3/2}*2pi and inside the corridor."""
    rate = decay_rate_on_diagonal(_LAM, [3.0, 3.75, 4.5, 5.25, 6.0],
                                  PrecisionContext(bits=80))
    target = 2 ** 1.5 * 2 * math.pi
    rel = abs(rate - target) / target
    in_corr = 4 * math.pi <= rate <= 2 * C0
    return CheckResult(
        "decay-rate", rel <= 0.05 and in_corr,
        f"measured {rate:.4f} vs {target:.4f} ({100 * rel:.2f}%, "
        f"corridor [{4 * math.pi:.2f}, {2 * C0:.2f}] {'hit' if in_corr else 'missed'})")


def check_m_growth() -> CheckResult:
    """Growth slope of log|M| along a_{t^-2, l t} within 5% of 2 pi l."""
    ctx = PrecisionContext(bits=80)
    worst = 0.0
    for l in (1, 2):
        ts = [5.0, 10.0, 15.0, 20.0]
        vals = []
        for t in ts:
            m = m_whittaker(_LAM, TorusPoint(1.0 / (t * t), l * t), ctx)
            vals.append(xp.to_float(xp.log(abs(m))))
        n = len(ts)
        sx, sy = sum(ts), sum(vals)
        sxx = sum(t * t for t in ts)
        sxy = sum(t * v for t, v in zip(ts, vals))
        slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
        worst = max(worst, abs(slope - 2 * math.pi * l) / (2 * math.pi * l))
    return CheckResult("m-growth-rate", worst <= 0.05,
                       f"max slope deviation {100 * worst:.2f}% (tolerance 5%)")


def check_projection_roundtrip() -> CheckResult:
    """Projection recovers the single mode at three torus points; leakage."""
    ctx = PrecisionContext(bits=96)
    model = CoefficientModel(
        _LAM, ckl={(1, 1): complex(0.8, 0.3)},
        truncation=Truncation(k_max=2, l_max=2, coset_bound=8.0))
    worst = 0.0
    worst_leak = 0.0
    for y1, y2 in ((1.0, 1.0), (1.1, 0.85), (0.9, 1.2)):
        p = TorusPoint(y1, y2)
        field = SynthesizedField(model, p, ctx)
        target = pk0l_value(model, 1, 1, p, ctx)
        rec = project_k0l(field, 1, 1, quad_order=(4, 16, 16), bits=ctx.bits)
        worst = max(worst, xp.to_float(abs(rec - target) / abs(target)))
        leak = project_k0l(field, 5, 7, quad_order=(4, 16, 16), bits=ctx.bits)
        worst_leak = max(worst_leak, xp.to_float(abs(leak) / abs(target)))
    passed = worst <= 1e-6 and worst_leak <= 1e-6
    return CheckResult(
        "projection-roundtrip", passed,
        f"recovery error {worst:.3e}, cross-mode leakage {worst_leak:.3e} "
        "(tolerance 1e-6 relative)")


def check_majorants() -> CheckResult:
    """S1/S2/S3 finite, stable, and envelope-certified at both sample points."""
    ok = True
    details = []
    for x, y1, y2 in ((0.0, 1.0, 1.0),
                      (0.0, math.sqrt(3) / 2, math.sqrt(3) / 2)):
        r = majorant_sums(x, y1, y2)
        stable = max(r.s1_last_decade, r.s2_last_decade, r.s3_last_decade) < 1e-8
        ok = ok and r.all_ok() and stable
        details.append(
            f"({y1:.3f},{y2:.3f}): S1<=env {r.s1_ok}, S2<=env {r.s2_ok}, "
            f"S3<=env {r.s3_ok}, decade {max(r.s1_last_decade, r.s2_last_decade, r.s3_last_decade):.1e}")
    return CheckResult("majorant-certification", ok, "; ".join(details))


def check_gamma_select() -> CheckResult:
    """Both amplification brackets hold for 100 random (k, l, y1, y2)."""
    rng = random.Random(77)
    violations = 0
    for _ in range(100):
        l = rng.randint(1, 40)
        k = rng.randint(l, 5000)
        if rng.random() < 0.5:
            k = -k
        if rng.random() < 0.5:
            l = -l
        y1 = rng.uniform(0.05, 0.95)
        y2 = rng.uniform(0.1, 3.0)
        rep = gamma_select(k, l, y1)
        dl = math.hypot(rep.c * y1, rep.d)
        kk, ll = abs(k), abs(l)
        amp = kk ** (1 / 3) * ll ** (2 / 3)
        v1 = kk * y1 / (dl * dl)
        v2 = ll * y2 * dl
        if not (0.25 * amp * y1 < v1 < 4 * amp * y1
                and 0.5 * amp * y2 < v2 < 2 * amp * y2):
            violations += 1
    return CheckResult("amplification-brackets", violations == 0,
                       f"{violations} violations in 100 random samples")


def check_hecke() -> CheckResult:
    """Divisor formula vs character-sum oracle, swap symmetry, commutativity."""
    mono = QExpansion.monomial
    mismatch = 0
    for n in range(1, 51):
        for m in range(1, 51):
            if hecke_apply(n, mono(-m)) != hecke_brute_oracle(n, m):
                mismatch += 1
    rng = random.Random(13)
    swap_bad = 0
    for _ in range(10):
        cn = {rng.randint(1, 12): Fraction(rng.randint(1, 9), rng.randint(1, 9))
              for _ in range(4)}
        em = {rng.randint(1, 12): Fraction(rng.randint(1, 9), rng.randint(1, 9))
              for _ in range(4)}
        a = hecke_combo(cn, QExpansion({-m: v for m, v in em.items()}), 60)
        b = hecke_combo(em, QExpansion({-n: v for n, v in cn.items()}), 60)
        if a != b:
            swap_bad += 1
    comm_bad = 0
    for n in range(1, 31):
        for m in range(1, 31):
            if hecke_apply(n, hecke_apply(m, mono(-1))) != \
                    hecke_apply(m, hecke_apply(n, mono(-1))):
                comm_bad += 1
    passed = mismatch == 0 and swap_bad == 0 and comm_bad == 0
    return CheckResult(
        "hecke-exactness", passed,
        f"{2500 - mismatch}/2500 oracle equalities, swap symmetry "
        f"{10 - swap_bad}/10, commutativity {900 - comm_bad}/900")


def check_cos_nonvanishing() -> CheckResult:
    """|2 cos(2 pi k theta)| > 1e-12 for all |k| <= 50, c^2+d^2 <= 1e4."""
    reps = coset_enumerate(100.0)
    for k in range(1, 51):
        if not (cos_nonvanishing_check(k, reps)
                and cos_nonvanishing_check(-k, reps)):
            return CheckResult("cosine-nonvanishing", False,
                               f"vanishing witness at k={k}")
    return CheckResult("cosine-nonvanishing", True,
                       f"all |k|<=50 over {len(reps)} classes clear 1e-12")


SUITES = {
    "bessel": [check_bessel_closed_forms, check_product_identity,
               check_order_monotonicity],
    "whittaker": [check_degenerate_two_route, check_weylsum_vs_integral,
                  check_real_bound],
    "asymptotics": [check_nilpotency, check_decay_rate, check_m_growth],
    "fourier": [check_projection_roundtrip, check_majorants,
                check_gamma_select],
    "hecke": [check_hecke],
    "algebra": [check_cos_nonvanishing],
}

CRITERIA = [
    check_bessel_closed_forms,
    check_product_identity,
    check_order_monotonicity,
    check_degenerate_two_route,
    check_weylsum_vs_integral,
    check_real_bound,
    check_nilpotency,
    check_decay_rate,
    check_m_growth,
    check_projection_roundtrip,
    check_majorants,
    check_gamma_select,
    check_hecke,
    check_cos_nonvanishing,
]


def run_suite(name: str = "all", echo=print) -> list[CheckResult]:
    if name == "all":
        checks = CRITERIA
    else:
        try:
            checks = SUITES[name]
        except KeyError:
            raise ValueError(
                f"unknown suite {name!r}; choose from "
                f"{['all'] + sorted(SUITES)}") from None
    results = []
    for fn in checks:
        res = fn()
        results.append(res)
        if echo:
            echo(res.line())
    return results
