"""Rank-two Whittaker kernels: the non-decaying double Bessel series, the
degenerate one-variable kernels, and the decaying function by two independent
routes (six-term alternating sum at elevated precision, and the
double-K integral evaluated with double-exponential quadrature).

All evaluators take positive torus coordinates; sign symmetry of the
character indices is realized by feeding |y| through everywhere.
"""

from __future__ import annotations

import math

from . import _backend as xp
from .algebra import (
    SatakeParameter,
    TorusPoint,
    WEYL_GROUP,
    WeylElement,
    require_general_position,
    weyl_apply,
)
from .bessel import _tol_log2, k_at_bits
from .context import (
    CancellationAlarm,
    NonConvergenceError,
    PrecisionContext,
    QuadratureError,
)
from .gammafn import log_gamma_raw
from .quadrature import ts_nodes, ts_step

_LOG2E = 1.4426950408889634
_LN2 = math.log(2.0)
_W12 = WeylElement((2, 1, 3))
_W23 = WeylElement((1, 3, 2))


def growth_exponent(y1: float, y2: float) -> float:
    """(y1^{2/3} + y2^{2/3})^{3/2}: the decay/growth rate unit at (y1, y2)."""
    return (y1 ** (2.0 / 3.0) + y2 ** (2.0 / 3.0)) ** 1.5


def weylsum_budget_bits(bits: int, y1: float, y2: float) -> int:
    """Working bits for the six-term sum: caller bits + cancellation + guard.

    The sum cancels from a peak term of size ~e^{+2 pi Phi} down to
    ~e^{-2 pi Phi} with Phi the growth exponent, so the dominating rate is
    4 pi Phi; the coordinate-sum rate covers strongly unbalanced points.
    """
    nats = max(
        2 * math.pi * (y1 + y2) + 2 * math.pi * 2 ** 1.5 * max(y1, y2),
        4 * math.pi * growth_exponent(y1, y2),
    )
    return bits + int(math.ceil(nats * _LOG2E)) + 64


def _inner_i(t0, nu, xh, tol_log2: int, cap: int):
    """I_nu(2*xh) summed from its leading term t0 = xh^nu / Gamma(nu+1)."""
    s = t0
    term = t0
    xh2 = xh * xh
    tol_b = xp.pow2(int(tol_log2))
    small = 0
    n = 0
    while n < cap:
        term = term * xh2 / ((n + 1) * (nu + n + 1))
        s = s + term
        n += 1
        if abs(term) < tol_b * abs(s):
            small += 1
            if small >= 3:
                return s
        else:
            small = 0
    raise NonConvergenceError(f"inner Bessel series exceeded {cap} terms")


def m_whittaker(lam: SatakeParameter, p: TorusPoint, ctx: PrecisionContext,
                work_bits: int | None = None):
    """Non-decaying kernel: sine prefactor times |y1 y2| times the m-series
    of coefficient/Bessel-ladder products, truncated by the three-small-terms
    rule."""
    require_general_position(lam)
    wb = work_bits if work_bits is not None else ctx.bits + 32
    tol = _tol_log2(ctx.series_tol) if work_bits is None else -(wb + 8)
    cap = ctx.max_terms
    with xp.workprec(wb):
        l1, l2, l3 = (xp.cplx(v) for v in lam.as_tuple())
        y1 = abs(xp.real(p.y1))
        y2 = abs(xp.real(p.y2))
        pi = xp.pi()
        a = (l1 - l2) / 2
        b = (l2 - l3) / 2
        c = (l1 - l3) / 2
        xh1 = pi * y1  # half of the Bessel argument 2*pi*y1
        xh2 = pi * y2
        pref = pi ** 3 / (
            xp.sin(pi / 2 * (l1 - l2))
            * xp.sin(pi / 2 * (l2 - l3))
            * xp.sin(pi / 2 * (l3 - l1))
        )
        pw = xp.exp(-(l3 / 2) * xp.log(xh1) + (l1 / 2) * xp.log(xh2))
        # ladder starts: xh^(a+m)/Gamma(a+m+1), advanced by *xh/(a+m+1)
        t1 = xp.exp(a * xp.log(xh1) - log_gamma_raw(a + 1, wb))
        t2 = xp.exp(b * xp.log(xh2) - log_gamma_raw(b + 1, wb))
        coef = xp.exp(-log_gamma_raw(c + 1, wb))  # 1/(m! Gamma(m+c+1)) at m=0
        mul = xh1 * xh2
        s = xp.cplx(0)
        tol_b = xp.pow2(tol)
        small = 0
        m = 0
        while m < cap:
            term = coef * _inner_i(t1, a + m, xh1, tol, cap) \
                * _inner_i(t2, b + m, xh2, tol, cap)
            s = s + term
            if abs(term) < tol_b * abs(s):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
            t1 = t1 * xh1 / (a + m + 1)
            t2 = t2 * xh2 / (b + m + 1)
            coef = coef * mul / ((m + 1) * (c + m + 1))
            m += 1
        else:
            raise NonConvergenceError(f"m-series exceeded {cap} terms")
        val = pref * y1 * y2 * pw * s
    return val if work_bits is not None else xp.round_to(val, ctx.bits)


def _degen_core(lam, p, which: str, kernel: str, bits: int, tol_log2: int,
                cap: int):
    """Shared power-times-Bessel shape of the two degenerate kernels."""
    with xp.workprec(bits):
        l1, l2, l3 = (xp.cplx(v) for v in lam.as_tuple())
        y1 = abs(xp.real(p.y1))
        y2 = abs(xp.real(p.y2))
        if which == "a1":
            order = (l1 - l2) / 2
            arg = 2 * xp.pi() * y1
            powers = xp.exp((1 - l3 / 2) * xp.log(y1) + (1 - l3) * xp.log(y2))
        else:
            order = (l2 - l3) / 2
            arg = 2 * xp.pi() * y2
            powers = xp.exp((1 + l1) * xp.log(y1) + (1 + l1 / 2) * xp.log(y2))
        if kernel == "I":
            t0 = xp.exp(order * xp.log(arg / 2) - log_gamma_raw(order + 1, bits))
            bes = _inner_i(t0, order, arg / 2, tol_log2, cap)
        else:
            bes = k_at_bits(order, arg, bits, cap)
        return powers * bes


def m_degen_a1(lam, p, ctx: PrecisionContext, work_bits: int | None = None):
    """|y1|^{1-l3/2} |y2|^{1-l3} I_{(l1-l2)/2}(2 pi |y1|)."""
    wb = work_bits if work_bits is not None else ctx.bits + 24
    val = _degen_core(lam, p, "a1", "I", wb, -(wb + 8), ctx.max_terms)
    return val if work_bits is not None else xp.round_to(val, ctx.bits)


def m_degen_a2(lam, p, ctx: PrecisionContext, work_bits: int | None = None):
    """|y1|^{1+l1} |y2|^{1+l1/2} I_{(l2-l3)/2}(2 pi |y2|)."""
    wb = work_bits if work_bits is not None else ctx.bits + 24
    val = _degen_core(lam, p, "a2", "I", wb, -(wb + 8), ctx.max_terms)
    return val if work_bits is not None else xp.round_to(val, ctx.bits)


def _w_degen(lam, p, ctx, which: str, route: str):
    if route == "closed_form":
        val = _degen_core(lam, p, which, "K", ctx.bits + 16, 0,
                          ctx.max_terms)
        return xp.round_to(val, ctx.bits)
    if route != "combination":
        raise ValueError(f"unknown route {route!r}")
    require_general_position(lam)
    y = p.y1 if which == "a1" else p.y2
    wb = ctx.bits + int(math.ceil(4 * math.pi * y * _LOG2E)) + 48
    swap = _W12 if which == "a1" else _W23
    fn = m_degen_a1 if which == "a1" else m_degen_a2
    with xp.workprec(wb):
        l1, l2, l3 = (xp.cplx(v) for v in lam.as_tuple())
        first = fn(lam, p, ctx, work_bits=wb)
        second = fn(weyl_apply(swap, lam), p, ctx, work_bits=wb)
        num = first - second
        lost = max(xp.mag2(first), xp.mag2(second)) - xp.mag2(num)
        if lost > ctx.bits / 2:
            raise CancellationAlarm(
                f"degenerate combination lost {lost:.0f} bits (> bits/2)")
        sine = xp.sin(xp.pi() / 2 * ((l2 - l1) if which == "a1" else (l3 - l2)))
        val = (xp.pi() / 2) * num / sine
    return xp.round_to(val, ctx.bits)


def w_degen_a1(lam, p, ctx: PrecisionContext, route: str = "closed_form"):
    """Decaying degenerate kernel in the first slot; both routes agree."""
    return _w_degen(lam, p, ctx, "a1", route)


def w_degen_a2(lam, p, ctx: PrecisionContext, route: str = "closed_form"):
    """Decaying degenerate kernel in the second slot."""
    return _w_degen(lam, p, ctx, "a2", route)


def _vt_piece(nu, qv, a_coord: float, b_coord: float, wb: int,
              ctx: PrecisionContext, lnat: float):
    """integral over (0,1) of K(2piA sqrt(1+u)) K(2piB sqrt(1+1/u)) u^{q-1}.

    Nodes whose magnitude falls below the result scale e^{lnat} by more than
    the precision budget are skipped; each kernel runs at the relative
    precision its contribution can use.
    """
    two_pi_a = 2 * math.pi * a_coord
    two_pi_b = 2 * math.pi * b_coord
    req = xp.to_float(xp.re_part(qv))
    drop_log = lnat - (ctx.bits + 30) * _LN2
    tol_log2 = math.log2(ctx.quad_tol)

    def node(u, lu):
        if lu < -1380:
            return None
        ef = math.exp(lu) if lu > -700 else 0.0
        a1f = two_pi_a * math.sqrt(1 + ef)
        a2f = two_pi_b * math.sqrt(1 + math.exp(-lu)) if lu > -700 \
            else two_pi_b * math.exp(-lu / 2)
        node_log = -(a1f + a2f) + (req - 1) * lu
        if node_log < drop_log:
            return None
        rel = int(ctx.bits + 12 + max(0.0, (node_log - lnat)) * _LOG2E)
        p1 = rel + int(math.ceil(2 * a1f * _LOG2E)) + 48
        p2 = rel + int(math.ceil(2 * a2f * _LOG2E)) + 48
        with xp.workprec(p1):
            arg1 = 2 * xp.pi() * xp.real(a_coord) * xp.sqrt(1 + u)
        with xp.workprec(p2):
            arg2 = 2 * xp.pi() * xp.real(b_coord) * xp.sqrt(1 + 1 / u)
        k1 = k_at_bits(nu, arg1, rel, ctx.max_terms)
        k2 = k_at_bits(nu, arg2, rel, ctx.max_terms)
        return k1 * k2 * xp.exp((qv - 1) * xp.log(u))

    with xp.workprec(wb):
        total = None
        prev = None
        for level in range(0, 9):
            part = xp.cplx(0)
            for u, w, lu in ts_nodes(wb, level):
                v = node(u, lu)
                if v is not None:
                    part = part + v * w
            h = xp.real(ts_step(level))
            total = part * h if total is None else total / 2 + part * h
            if level >= 3 and prev is not None:
                diff = xp.mag2(total - prev)
                scale = max(xp.mag2(total), lnat * _LOG2E + 4)
                if diff <= scale + tol_log2 or diff == float("-inf"):
                    return total
            prev = total
        raise QuadratureError("double-K integral did not stabilize")


def w_vt(lam: SatakeParameter, p: TorusPoint, ctx: PrecisionContext):
    """Decaying kernel by the double-K integral route."""
    y1, y2 = p.y1, p.y2
    lnat = -2 * math.pi * growth_exponent(y1, y2)
    wb = ctx.bits + 48
    with xp.workprec(wb):
        l1, l2, l3 = (xp.cplx(v) for v in lam.as_tuple())
        nu = (l1 - l3) / 2
        q = -3 * l2 / 4
        p_a = _vt_piece(nu, q, y1, y2, wb, ctx, lnat)
        p_b = _vt_piece(nu, -q, y2, y1, wb, ctx, lnat)
        powers = xp.exp((1 - l2 / 2) * xp.log(xp.real(y1))
                        + (1 + l2 / 2) * xp.log(xp.real(y2)))
        val = 4 * powers * (p_a + p_b)
    return xp.round_to(val, ctx.bits)


def w_weylsum(lam: SatakeParameter, p: TorusPoint, ctx: PrecisionContext):
    """Decaying kernel as the sum of the six permuted non-decaying kernels,
    evaluated above the cancellation floor and rounded back down."""
    require_general_position(lam)
    wb = weylsum_budget_bits(ctx.bits, p.y1, p.y2)
    with xp.workprec(wb):
        terms = [m_whittaker(weyl_apply(w, lam), p, ctx, work_bits=wb)
                 for w in WEYL_GROUP]
        total = xp.cplx(0)
        for t in terms:
            total = total + t
        peak = max(xp.mag2(t) for t in terms)
        lost = peak - xp.mag2(total)
        if wb - lost < ctx.bits / 2:
            raise CancellationAlarm(
                f"six-term sum kept only {wb - lost:.0f} significant bits "
                f"(< bits/2 = {ctx.bits / 2:.0f}) after {lost:.0f} bits of "
                "cancellation")
    return xp.round_to(total, ctx.bits)


def w_real_bound_check(lam: SatakeParameter, p: TorusPoint,
                       ctx: PrecisionContext | None = None) -> bool:
    """|W(lam)| <= W(Re lam) * (1 + 1e-6), with the right side real positive."""
    ctx = ctx or PrecisionContext(bits=96)
    wc = w_vt(lam, p, ctx)
    wr = w_vt(lam.real_part(), p, ctx)
    wr_re = xp.to_float(xp.re_part(wr))
    if wr_re <= 0:
        return False
    return xp.to_float(abs(wc)) <= wr_re * (1 + 1e-6)


def m_leading_asym(lam: SatakeParameter, k: int, l: int, t: float):
    """Shape value t^{-3(l1+1)/2} e^{2 pi |l| t} for ratio tests only."""
    if k == 0 or l == 0:
        raise ValueError("character indices must be nonzero")
    if t < 1:
        raise ValueError("t must be >= 1")
    bits = 96 + int(math.ceil(2 * math.pi * abs(l) * t * _LOG2E))
    with xp.workprec(bits):
        l1 = xp.cplx(lam.l1)
        tv = xp.real(t)
        return xp.exp(-(3 * (l1 + 1) / 2) * xp.log(tv)
                      + 2 * xp.pi() * abs(l) * tv)


def apply_transformation_law(value, k: int, l: int, x: float, y: float):
    """Multiply a torus value by the unipotent character e^{2 pi i(kx + ly)}."""
    with xp.workprec(192):
        phase = xp.exp(xp.cplx(0, 1) * 2 * xp.pi() * (k * xp.real(x) + l * xp.real(y)))
        return xp.cplx(value) * phase


class WhittakerEvalRequest:
    """A kernel evaluation bound to a parameter, torus point, character pair
    and precision context.

    Values at general group points n(x,y,z)*a*s reduce to the torus value
    through the unipotent character: value = e^{2 pi i(kx + ly)} * torus
    value, independent of z and of the rotation part.
    """

    __slots__ = ("lam", "point", "nchar", "ctx")

    def __init__(self, lam: SatakeParameter, point: TorusPoint,
                 nchar: tuple[int, int], ctx: PrecisionContext):
        self.lam = lam
        self.point = point
        self.nchar = (int(nchar[0]), int(nchar[1]))
        self.ctx = ctx

    def torus_value(self, which: str):
        return eval_whittaker(which, self.lam, self.point, self.ctx)

    def at_group_point(self, which: str, x: float = 0.0, y: float = 0.0,
                       z: float = 0.0):
        del z  # the value is structurally independent of the center parameter
        k, l = self.nchar
        return apply_transformation_law(self.torus_value(which), k, l, x, y)


_EVAL_DISPATCH = {
    "M": m_whittaker,
    "Mdegen1": m_degen_a1,
    "Mdegen2": m_degen_a2,
    "Wdegen1": w_degen_a1,
    "Wdegen2": w_degen_a2,
    "W-vt": w_vt,
    "W-weylsum": w_weylsum,
}


def eval_whittaker(which: str, lam: SatakeParameter, p: TorusPoint,
                   ctx: PrecisionContext):
    try:
        fn = _EVAL_DISPATCH[which]
    except KeyError:
        raise ValueError(f"unknown kernel {which!r}; "
                         f"choose from {sorted(_EVAL_DISPATCH)}") from None
    return fn(lam, p, ctx)
