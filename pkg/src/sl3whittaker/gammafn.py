"""Complex log-gamma at adjustable precision.

Stirling's expansion with upward recurrence: shift z until |z+n| is large
enough for the asymptotic series at the working precision, evaluate the
series there, then subtract the logs of the shift factors. Bernoulli numbers
come from the exact tangent-number recurrence, so every coefficient is a
rational computed once and cached.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from . import _backend as xp
from .context import PoleError, PrecisionContext

_TANGENT: list[int] = []  # [T_1, T_3, ..., T_{2n-1}] (Brent-Harvey Algorithm 1)


def _extend_tangent(n: int) -> None:
    if n <= len(_TANGENT):
        return
    n = max(n, 2 * len(_TANGENT), 32)
    t = [1] * n
    for k in range(1, n):
        t[k] = k * t[k - 1]
    for k in range(1, n):
        for j in range(k, n):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    _TANGENT[:] = t


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """Exact Bernoulli number B_m (even m >= 2; B_0, B_1 handled too)."""
    if m == 0:
        return Fraction(1)
    if m == 1:
        return Fraction(-1, 2)
    if m % 2:
        return Fraction(0)
    k = m // 2
    _extend_tangent(k)
    sign = 1 if k % 2 else -1
    return Fraction(sign * m * _TANGENT[k - 1], (4**k) * (4**k - 1))


@lru_cache(maxsize=None)
def _stirling_coeff(j: int) -> Fraction:
    # B_{2j} / (2j (2j-1))
    return bernoulli(2 * j) / (2 * j * (2 * j - 1))


_LN2 = math.log(2.0)


def log_gamma_raw(z, bits: int, series_tol: float = 0.0):
    """Principal-branch log Gamma(z) at `bits` working precision.

    z may be any backend/complex/float value away from the poles
    {0, -1, -2, ...}; raises PoleError within 10*series_tol of one.
    """
    wb = int(bits) + 24
    with xp.workprec(wb):
        zz = xp.cplx(z)
        zr = xp.to_float(xp.re_part(zz))
        zi = xp.to_float(xp.im_part(zz))
        if zr < 0.5:
            n0 = round(zr)
            if n0 <= 0 and abs(complex(zr - n0, zi)) < max(10 * series_tol, 1e-300):
                raise PoleError(f"log_gamma pole at z near {n0}")
        # shift until |w| is large enough for Stirling at wb bits
        target = max(20.0, 0.40 * wb)
        n = max(0, int(math.ceil(target - zr)) + 1)
        w = zz + n
        half = xp.real(Fraction(1, 2))
        logw = xp.log(w)
        acc = (w - half) * logw - w + half * xp.log(2 * xp.pi())
        winv2 = 1 / (w * w)
        pw = 1 / w
        floor = 2.0 ** (-(wb + 8))
        j = 1
        while True:
            term = xp.real(_stirling_coeff(j)) * pw
            acc = acc + term
            if xp.to_float(abs(term)) < floor * max(1.0, xp.to_float(abs(acc))):
                break
            j += 1
            if j > 4 * wb:  # unreachable with the shift target above
                raise PoleError("stirling series failed to terminate")
            pw = pw * winv2
        for k in range(n):
            acc = acc - xp.log(zz + k)
        return xp.round_to(acc, bits)


def log_gamma(z, ctx: PrecisionContext):
    """log Gamma(z), relative error within 2^-(ctx.bits-10)."""
    return log_gamma_raw(z, ctx.bits + 10, ctx.series_tol)
