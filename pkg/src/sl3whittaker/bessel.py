"""Modified Bessel functions I_nu, K_nu of complex order and positive argument.

I is the ascending series; K is the sine-weighted I-difference evaluated at
internally elevated precision (the difference cancels to e^{-2x} of its
terms, so 2x*log2(e) extra bits are budgeted automatically). No asymptotic
switchover: the series is the single evaluation route, asymptotics appear
only as test-side leading-order shapes.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import _backend as xp
from .context import NonConvergenceError, PrecisionContext
from .gammafn import log_gamma_raw
from .quadrature import gl_graded

_LOG2E = 1.4426950408889634


def _as_order(nu):
    return nu.nu if isinstance(nu, BesselOrder) else nu


class BesselOrder:
    """Complex order with its distance to the nearest integer recorded."""

    __slots__ = ("nu", "int_distance")

    def __init__(self, nu):
        self.nu = complex(nu)
        self.int_distance = abs(self.nu - round(self.nu.real))

    def __repr__(self):
        return f"BesselOrder({self.nu!r}, int_distance={self.int_distance:.3g})"


def _i_series(nu, x, wbits: int, tol_log2: int, max_terms: int):
    """Ascending series for I_nu(x); call inside workprec(wbits).

    nu: backend complex, x: backend real >= 0; stops after three consecutive
    terms below 2^tol_log2 of the partial sum. Negative integer orders start
    the sum at n = -nu where 1/Gamma stops vanishing.
    """
    nur = xp.to_float(xp.re_part(nu))
    nui = xp.to_float(xp.im_part(nu))
    n0 = 0
    if nui == 0.0 and nur < 0 and nur == round(nur):
        n0 = int(-nur)
    if xp.to_float(x) == 0.0:
        if nur == 0 and nui == 0:
            return xp.cplx(1)
        return xp.cplx(0)
    xh = x / 2
    lgx = xp.log(xh)
    term = xp.exp((nu + 2 * n0) * lgx - log_gamma_raw(nu + n0 + 1, wbits))
    term = term / math.factorial(n0)
    s = term
    xh2 = xh * xh
    tol_b = xp.pow2(int(tol_log2))
    small = 0
    n = n0
    while n - n0 < max_terms:
        term = term * xh2 / ((n + 1) * (nu + n + 1))
        s = s + term
        n += 1
        if abs(term) < tol_b * abs(s):
            small += 1
            if small >= 3:
                return s
        else:
            small = 0
    raise NonConvergenceError(
        f"I-series needed more than {max_terms} terms (x={xp.to_float(x)})")


def _tol_log2(tol: float) -> int:
    return int(math.floor(math.log2(tol)))


def bessel_i(nu, x, ctx: PrecisionContext):
    """I_nu(x) for x >= 0 (x=0 only for Re nu >= 0)."""
    nu = complex(_as_order(nu))
    xf = float(x)
    if xf < 0:
        raise ValueError("argument must be nonnegative")
    if xf == 0 and nu.real < 0:
        raise ValueError("x=0 requires Re nu >= 0")
    if xf == 0 and nu.real == 0 and nu.imag != 0:
        raise ValueError("x=0 with purely imaginary order is undefined")
    wb = ctx.bits + 24
    with xp.workprec(wb):
        val = _i_series(xp.cplx(nu), xp.real(x), wb, _tol_log2(ctx.series_tol),
                        ctx.max_terms)
    return xp.round_to(val, ctx.bits)


def _k_raw(nu, x, wbits: int, max_terms: int):
    """(pi/2)(I_{-nu} - I_nu)/sin(pi nu) at wbits; nu away from integers.

    The I values are summed to 2^-(wbits+8) relative so the difference
    survives the e^{2x} cancellation the caller budgeted wbits for.
    """
    ip = _i_series(nu, x, wbits, -(wbits + 8), max_terms)
    im = _i_series(-nu, x, wbits, -(wbits + 8), max_terms)
    return (xp.pi() / 2) * (im - ip) / xp.sin(xp.pi() * nu)


def k_at_bits(nu, x, rel_bits: int, max_terms: int):
    """K_nu(x) accurate to ~2^-rel_bits relative; handles its own elevation.

    The I-difference cancels down to e^{-2x} of its terms and the near-integer
    removable singularity is crossed by eps-averaging with one Richardson step.
    nu may be a backend value (kept at full precision) or a Python number.
    """
    xf = float(x)
    if xf <= 0:
        raise ValueError("argument must be positive")
    nu_approx = xp.to_complex(xp.cplx(nu))
    dist = abs(nu_approx - round(nu_approx.real))
    cancel = int(math.ceil(2 * xf * _LOG2E)) + 48
    if dist >= 0.05:
        wb = rel_bits + cancel
        with xp.workprec(wb):
            return _k_raw(xp.cplx(nu), xp.real(x), wb, max_terms)
    eps = 0.01 * 2.0 ** (-rel_bits / 8.0)
    extra = 2 * int(math.ceil(-math.log2(eps))) + 32
    wb = rel_bits + cancel + extra
    with xp.workprec(wb):
        nuv = xp.cplx(nu)
        xv = xp.real(x)

        def avg(e):
            ev = xp.real(e)
            a = _k_raw(nuv + ev, xv, wb, max_terms)
            b = _k_raw(nuv - ev, xv, wb, max_terms)
            return (a + b) / 2

        return (4 * avg(eps / 2) - avg(eps)) / 3


def bessel_k(nu, x, ctx: PrecisionContext):
    """K_nu(x) for x > 0; K_nu = K_{-nu} to 2^-(bits-12) by construction."""
    val = k_at_bits(complex(_as_order(nu)), x, ctx.bits + 8, ctx.max_terms)
    return xp.round_to(val, ctx.bits)


def bessel_asymptotic_leading(kind: str, u):
    """Leading large-argument term: sqrt(1/(2 pi u)) e^u for I, sqrt(pi/(2u)) e^-u for K."""
    uf = float(u)
    if uf <= 0:
        raise ValueError("u must be positive")
    bits = max(80, int(uf * _LOG2E) + 64)
    with xp.workprec(bits):
        uu = xp.real(u)
        if kind == "I":
            return xp.sqrt(1 / (2 * xp.pi() * uu)) * xp.exp(uu)
        if kind == "K":
            return xp.sqrt(xp.pi() / (2 * uu)) * xp.exp(-uu)
    raise ValueError("kind must be 'I' or 'K'")


def product_identity_residual(mu, nu, x, ctx: PrecisionContext):
    """Residual of I_mu(x) I_nu(x) = (2/pi) int_0^{pi/2} I_{mu+nu}(2x cos t) cos((mu-nu)t) dt.

    The integrand carries cos(t)^(mu+nu) at the right endpoint, so panels are
    graded geometrically toward pi/2; refinement repeats with more depth and
    order until two passes agree within ctx.quad_tol.
    """
    mu = complex(_as_order(mu))
    nu = complex(_as_order(nu))
    s = mu + nu
    if s.real <= -1:
        raise ValueError("requires Re(mu+nu) > -1")
    wb = ctx.bits + 32
    tol_bits = -math.log2(ctx.quad_tol)
    with xp.workprec(wb):
        xv = xp.real(x)
        tl = _tol_log2(ctx.series_tol)
        lhs = _i_series(xp.cplx(mu), xv, wb, tl, ctx.max_terms) * \
            _i_series(xp.cplx(nu), xv, wb, tl, ctx.max_terms)
        sv = xp.cplx(s)
        dv = xp.cplx(mu - nu)
        two_x = 2 * xv

        def f(theta):
            arg = two_x * xp.cos(theta)
            if xp.to_float(arg) <= 0:
                iv = xp.cplx(1) if s == 0 else xp.cplx(0)
            else:
                iv = _i_series(sv, arg, wb, tl, ctx.max_terms)
            return iv * xp.cos(dv * theta)

        depth = int(math.ceil((tol_bits + 16) / (max(0.0, s.real) + 1.0))) + 8
        order = 32
        prev = None
        b = xp.pi() / 2
        for _ in range(4):
            cur = gl_graded(f, xp.real(0), b, depth, order, wb)
            if prev is not None:
                scale = max(xp.to_float(abs(cur)), xp.to_float(abs(lhs)))
                if xp.to_float(abs(cur - prev)) <= ctx.quad_tol * scale:
                    break
            prev = cur
            depth += 10
            order += 12
        else:
            from .context import QuadratureError
            raise QuadratureError("product-identity quadrature did not stabilize")
        rhs = (2 / xp.pi()) * cur
        return xp.round_to(abs(lhs - rhs), ctx.bits)


def order_monotonicity_check(sigma_grid, t_grid, x_grid,
                             ctx: PrecisionContext | None = None) -> bool:
    """True iff |I_{sigma+it}(x)| decreases along sigma and does not decrease along t.

    Checked on the sampled grid for every x in x_grid; sigma values must be
    positive.
    """
    ctx = ctx or PrecisionContext(bits=96)
    sig = sorted(float(s) for s in sigma_grid)
    ts = sorted(float(t) for t in t_grid)
    if any(s <= 0 for s in sig):
        raise ValueError("sigma grid must be positive")
    slack = 2.0 ** (-ctx.bits // 2)
    for x in x_grid:
        mags = {}
        for s in sig:
            for t in ts:
                v = bessel_i(complex(s, t), x, ctx)
                mags[(s, t)] = xp.to_float(abs(v))
        for t in ts:
            for i in range(len(sig) - 1):
                if not mags[(sig[i], t)] > mags[(sig[i + 1], t)]:
                    return False
        for s in sig:
            for j in range(len(ts) - 1):
                if mags[(s, ts[j + 1])] < mags[(s, ts[j])] * (1 - slack):
                    return False
    return True


def half_integer_i(n_plus_half: Fraction, x, bits: int = 128):
    """Closed forms for I_{1/2}, I_{-1/2} used as test oracles."""
    with xp.workprec(bits + 8):
        xv = xp.real(x)
        pref = xp.sqrt(2 / (xp.pi() * xv))
        if n_plus_half == Fraction(1, 2):
            return pref * (xp.exp(xv) - xp.exp(-xv)) / 2
        if n_plus_half == Fraction(-1, 2):
            return pref * (xp.exp(xv) + xp.exp(-xv)) / 2
    raise ValueError("only +-1/2 provided")


def half_integer_k(x, bits: int = 128):
    """K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}, the half-integer closed form."""
    with xp.workprec(bits + 8):
        xv = xp.real(x)
        return xp.sqrt(xp.pi() / (2 * xv)) * xp.exp(-xv)
