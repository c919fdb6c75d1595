"""The nilpotency system behind the six growth phases, its labeled solutions,
the specialized large-t phase exponents, the envelope-rate function sigma,
and a harness that measures the decaying kernel against its two-sided
envelope on a grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import _backend as xp
from .algebra import SatakeParameter, TorusPoint
from .context import NonConvergenceError, PrecisionContext
from .whittaker import growth_exponent, w_vt

_LOG2E = 1.4426950408889634

# label -> (sign, omega code): difference = sign*(y1^(2/3) + omega*y2^(2/3))^(3/2)
# with omega = 1 for code 0 and e^{code * 2 pi i/3} otherwise
_LABELS = {
    1: (1, 0),
    2: (-1, -1),
    3: (-1, +1),
    4: (1, -1),
    5: (1, +1),
    6: (-1, 0),
}


def _omega(code, bits):
    if code == 0:
        return xp.cplx(1)
    with xp.workprec(bits):
        ang = 2 * xp.pi() / 3
        return xp.cplx(xp.cos(ang), code * xp.sin(ang))


def label_difference(m: int, y1: float, y2: float, bits: int = 128):
    """Labeled value of p3 - p1 (principal branch of the 3/2 power)."""
    sign, code = _LABELS[m]
    with xp.workprec(bits + 16):
        u = xp.cpow(xp.real(y1), xp.real(2) / 3)
        v = xp.cpow(xp.real(y2), xp.real(2) / 3)
        w = xp.cplx(u) + _omega(code, bits + 16) * v
        return xp.round_to(sign * xp.cpow(w, xp.real(3) / 2), bits)


@dataclass
class NilpotentTriple:
    p1: complex
    p2: complex
    p3: complex
    label: int
    residual: float = field(default=0.0)

    def difference(self) -> complex:
        return self.p3 - self.p1

    def matrix(self, y1: float, y2: float):
        return [
            [self.p1, y1 * y1, 0.0],
            [-1.0, self.p2, y2 * y2],
            [0.0, -1.0, self.p3],
        ]


def _char_residuals(p1, p2, p3, y1, y2):
    e1 = p1 + p2 + p3
    e2 = p1 * p2 + p1 * p3 + p2 * p3 + y1 * y1 + y2 * y2
    e3 = p1 * p2 * p3 + p1 * y2 * y2 + p3 * y1 * y1
    return e1, e2, e3


def _solve3(a, rhs):
    """Gaussian elimination with partial pivoting on a 3x3 backend system."""
    m = [row[:] + [r] for row, r in zip(a, rhs)]
    for col in range(3):
        piv = max(range(col, 3), key=lambda r: xp.to_float(abs(m[r][col])))
        m[col], m[piv] = m[piv], m[col]
        for r in range(col + 1, 3):
            f = m[r][col] / m[col][col]
            for c in range(col, 4):
                m[r][c] = m[r][c] - f * m[col][c]
    out = [None, None, None]
    for r in (2, 1, 0):
        acc = m[r][3]
        for c in range(r + 1, 3):
            acc = acc - m[r][c] * out[c]
        out[r] = acc / m[r][r]
    return out


def _seed_from_difference(d, y1, y2, bits):
    """Closed-form seed(s) (p1, p2, p3) for a given labeled difference.

    The sum s = p1 + p3 satisfies s^2 = (4Y - d^2)/3 from the quadratic
    condition; the cubic condition fixes its sign except on the degenerate
    locus Y + 2 d^2 = 0 (the diagonal, for the complex labels), where both
    signs solve the system and the caller disambiguates by continuity.
    """
    with xp.workprec(bits):
        yy = xp.real(y1) ** 2 + xp.real(y2) ** 2
        dl = xp.real(y1) ** 2 - xp.real(y2) ** 2
        s2 = (4 * yy - d * d) / 3
        s0 = xp.cpow(s2, xp.real(1) / 2) if xp.to_float(abs(s2)) else xp.cplx(0)
        denom = yy + 2 * d * d
        cands = []
        for s in (s0, -s0):
            p1 = (s - d) / 2
            p3 = (s + d) / 2
            p2 = -s
            _, _, e3 = _char_residuals(p1, p2, p3, xp.real(y1), xp.real(y2))
            cands.append(((p1, p2, p3), xp.to_float(abs(e3))))
        degenerate = xp.to_float(abs(denom)) < 1e-8 * max(1.0, xp.to_float(abs(yy)))
        return cands, degenerate


def _newton_polish(p, y1, y2, bits, cap=60):
    with xp.workprec(bits):
        p1, p2, p3 = (xp.cplx(v) for v in p)
        yv1, yv2 = xp.real(y1), xp.real(y2)
        scale = max(1.0, y1 * y1 + y2 * y2)
        for _ in range(cap):
            e1, e2, e3 = _char_residuals(p1, p2, p3, yv1, yv2)
            res = max(xp.to_float(abs(e1)), xp.to_float(abs(e2)),
                      xp.to_float(abs(e3)))
            if res < 2.0 ** (-(bits - 12)) * scale:
                return (p1, p2, p3), res
            jac = [
                [xp.cplx(1), xp.cplx(1), xp.cplx(1)],
                [p2 + p3, p1 + p3, p1 + p2],
                [p2 * p3 + yv2 * yv2, p1 * p3, p1 * p2 + yv1 * yv1],
            ]
            d1, d2, d3 = _solve3(jac, [-e1, -e2, -e3])
            p1, p2, p3 = p1 + d1, p2 + d2, p3 + d3
    raise NonConvergenceError("nilpotency Newton iteration did not converge")


def nilpotent_triples(y1: float, y2: float, bits: int = 128) -> list[NilpotentTriple]:
    """The six labeled solutions of the nilpotency system at (y1, y2).

    Seeds come from the labeled differences; Newton polishes each to working
    precision; labels are confirmed by matching p3 - p1 back against the
    labeled formulas (continuity from a perturbed point breaks the diagonal
    ties of the complex labels).
    """
    if not (y1 > 0 and y2 > 0):
        raise ValueError("coordinates must be positive")
    out = []
    wb = bits + 24
    for m in range(1, 7):
        d = label_difference(m, y1, y2, wb)
        cands, degenerate = _seed_from_difference(d, y1, y2, wb)
        if degenerate:
            yp = y1 * (1 + 2.0 ** -16)
            dp = label_difference(m, yp, y2, wb)
            pcands, _ = _seed_from_difference(dp, yp, y2, wb)
            want = min(pcands, key=lambda c: c[1])[0][1]  # perturbed p2 = -s
            seed = min(cands, key=lambda c: xp.to_float(abs(c[0][1] - want)))[0]
        else:
            seed = min(cands, key=lambda c: c[1])[0]
        (p1, p2, p3), res = _newton_polish(seed, y1, y2, wb)
        diff_err = xp.to_float(abs((p3 - p1) - d))
        if diff_err > 1e-8 * max(1.0, xp.to_float(abs(d))):
            raise NonConvergenceError(
                f"label {m}: polished difference drifted by {diff_err:.2e}")
        out.append(NilpotentTriple(
            xp.to_complex(p1), xp.to_complex(p2), xp.to_complex(p3), m, res))
    return out


def phi_log_asym(m: int, y1: float, y2: float, bits: int = 128):
    """Leading log-growth exponent 2 pi (p3 - p1) for phase label m."""
    with xp.workprec(bits + 8):
        return xp.round_to(2 * xp.pi() * label_difference(m, y1, y2, bits + 8),
                           bits)


_SPECIAL_COEF = {
    1: complex(1.5, 0.0),
    2: complex(-0.75, 0.75 * math.sqrt(3.0)),
    3: complex(-0.75, -0.75 * math.sqrt(3.0)),
}


def phi_asym_specialized(m: int, k: int, l: int, c: int, d: int, t: float):
    """Large-t exponent of phase m in {1,2,3} along the amplified ray:
    2 pi t^3 |l| sqrt(c^2+d^2) + 2 pi t coef_m |l|^{1/3} |k|^{2/3} / sqrt(c^2+d^2).
    """
    if m not in _SPECIAL_COEF:
        raise ValueError("specialized asymptotics cover labels 1..3")
    if k == 0 or l == 0:
        raise ValueError("character indices must be nonzero")
    if (c, d) == (0, 0):
        raise ValueError("(c, d) must be nonzero")
    if t < 1:
        raise ValueError("t must be >= 1")
    q = math.sqrt(c * c + d * d)
    lead = 2 * math.pi * t ** 3 * abs(l) * q
    sub = 2 * math.pi * t * abs(l) ** (1 / 3) * abs(k) ** (2 / 3) / q
    return lead + _SPECIAL_COEF[m] * sub


def sigma(r: float):
    """sqrt(r^{2/3}+2)/r + sqrt((r^{2/3}+2)/(r^{2/3}+1)); decreasing, -> 1."""
    if r <= 0:
        raise ValueError("r must be positive")
    with xp.workprec(96):
        rv = xp.real(r)
        r23 = xp.cpow(rv, xp.real(2) / 3)
        return xp.sqrt(r23 + 2) / rv + xp.sqrt((r23 + 2) / (r23 + 1))


def sigma_derivative(r: float):
    """Closed-form derivative: negative for every positive r."""
    if r <= 0:
        raise ValueError("r must be positive")
    with xp.workprec(96):
        rv = xp.real(r)
        r23 = xp.cpow(rv, xp.real(2) / 3)
        r53 = xp.cpow(rv, xp.real(5) / 3)
        num = r53 * xp.cpow(r23 + 1, xp.real(-3) / 2) + 2 * r23 + 6
        return -num / (3 * rv * rv * xp.sqrt(r23 + 2))


C0 = 2 * math.pi * (math.sqrt(3.0) + math.sqrt(1.5))  # envelope rate constant


@dataclass
class EnvelopeReport:
    rate: float                  # measured -d log|W(a_{t,t})|/dt
    rate_target: float           # 2^{3/2} * 2 pi
    corridor: tuple[float, float]  # [4 pi, 2 c0]
    rate_in_corridor: bool
    n_exponent: float            # fitted N of the (y1 y2)^-N envelopes
    log_c_upper: float           # log C with >= 1 margin at every grid point
    log_c_lower: float
    upper_margin: float
    lower_margin: float
    rows: list[tuple[float, float, float]]  # (t, log|W|, fitted rate)


def _least_squares(xs, ys):
    n = len(xs)
    sx = sum(xs)
    sy = sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
    intercept = (sy - slope * sx) / n
    return slope, intercept


def envelope_check(lam: SatakeParameter, grid: list[TorusPoint],
                   ctx: PrecisionContext | None = None) -> EnvelopeReport:
    """Fit and verify the two-sided envelope
    (y1 y2)^-N e^{-c0(y1+y2)} << |W| << (y1 y2)^-N e^{-pi(y1+y2)}
    on the grid and measure the diagonal decay rate."""
    if any(abs(l.imag) > 1e-12 for l in lam.as_tuple()):
        raise ValueError("envelope harness expects a real parameter")
    ctx = ctx or PrecisionContext(bits=80)
    logw = {}
    for p in grid:
        w = w_vt(lam, p, ctx)
        logw[(p.y1, p.y2)] = xp.to_float(xp.log(abs(w)))
    diag = sorted((y1, v) for (y1, y2), v in logw.items() if y1 == y2)
    if len(diag) < 3:
        raise ValueError("grid needs at least three diagonal points")
    slope, _ = _least_squares([t for t, _ in diag], [v for _, v in diag])
    rate = -slope
    corridor = (4 * math.pi, 2 * C0)
    # upper: log|W| + pi(y1+y2) <= log C - N log(y1 y2)
    us = [(math.log(y1 * y2), v + math.pi * (y1 + y2))
          for (y1, y2), v in logw.items()]
    n_fit, b_fit = _least_squares([u for u, _ in us], [v for _, v in us])
    n_exp = max(0.0, -n_fit)
    log_c_up = max(v + n_exp * u for u, v in us) + 1.0
    up_margin = min(log_c_up - n_exp * u - v for u, v in us)
    # lower: log|W| + c0(y1+y2) >= log c - N log(y1 y2)
    ls = [(math.log(y1 * y2), v + C0 * (y1 + y2)) for (y1, y2), v in logw.items()]
    log_c_lo = min(v + n_exp * u for u, v in ls) - 1.0
    lo_margin = min(v + n_exp * u - log_c_lo for u, v in ls)
    rows = [(t, v, rate) for t, v in diag]
    return EnvelopeReport(
        rate=rate,
        rate_target=2 ** 1.5 * 2 * math.pi,
        corridor=corridor,
        rate_in_corridor=corridor[0] <= rate <= corridor[1],
        n_exponent=n_exp,
        log_c_upper=log_c_up,
        log_c_lower=log_c_lo,
        upper_margin=up_margin,
        lower_margin=lo_margin,
        rows=rows,
    )


def decay_rate_on_diagonal(lam: SatakeParameter, ts: list[float],
                           ctx: PrecisionContext | None = None) -> float:
    """-d log|W(a_{t,t})|/dt by least squares over the sampled ts."""
    ctx = ctx or PrecisionContext(bits=80)
    vals = []
    for t in ts:
        w = w_vt(lam, TorusPoint(t, t), ctx)
        vals.append(xp.to_float(xp.log(abs(w))))
    slope, _ = _least_squares(list(ts), vals)
    return -slope


def growth_exponent_alias(y1: float, y2: float) -> float:
    return growth_exponent(y1, y2)
