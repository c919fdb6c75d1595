"""Quadrature primitives: tanh-sinh on (0,1) and graded composite Gauss-Legendre.

Node tables are computed once per (precision bucket, refinement level) and
cached; everything runs on the active arithmetic backend so the same code
serves both the compiled and the pure-Python numeric cores.
"""

from __future__ import annotations

import math
from functools import lru_cache

from . import _backend as xp
from .context import QuadratureError

_H0 = 0.5  # base tanh-sinh step


def _bucket(bits: int) -> int:
    return ((int(bits) + 63) // 64) * 64


@lru_cache(maxsize=None)
def _ts_level(bucket: int, level: int):
    """New tanh-sinh nodes introduced at `level` (step h = _H0/2^level).

    Returns a tuple of (u, weight, log_u) triples for t > 0 and t < 0 merged;
    level 0 carries every multiple of _H0 including t=0, later levels only the
    odd multiples of their step. Weights exclude the step factor h.
    """
    pb = bucket + 32
    with xp.workprec(pb):
        h = xp.real(_H0) / (1 << level)
        tmax = math.asinh((2.0 / math.pi) * ((bucket + 24) * math.log(2.0)))
        jmax = int(math.ceil(tmax / (_H0 / (1 << level))))
        half_pi = xp.pi() / 2
        out = []
        js: list[int]
        if level == 0:
            js = list(range(-jmax, jmax + 1))
        else:
            js = [j for j in range(-jmax, jmax + 1) if j % 2]
        for j in js:
            t = h * j
            sh = (xp.exp(t) - xp.exp(-t)) / 2
            ch = (xp.exp(t) + xp.exp(-t)) / 2
            q = xp.exp(-2 * half_pi * sh)  # = e^{-pi*sinh t}
            u = 1 / (1 + q)  # = (1+tanh((pi/2) sinh t))/2
            w = half_pi * ch * 2 * q / ((1 + q) * (1 + q))  # du/dt
            lu = xp.to_float(xp.log(u))
            out.append((u, w, lu))
        return tuple(out)


def ts_nodes(bits: int, level: int):
    """Tanh-sinh nodes new at `level` for ~bits precision (u, w, log u)."""
    return _ts_level(_bucket(bits), level)


def ts_step(level: int) -> float:
    return _H0 / (1 << level)


def ts_integrate(f, bits: int, rel_tol: float, min_level: int = 2,
                 max_level: int = 8, scale_floor=None):
    """Integrate f over (0,1) by tanh-sinh refinement.

    Stops when two successive levels agree within rel_tol relative to
    max(|S|, scale_floor). f receives (u, log_u) and may return None to skip
    a node (treated as zero).
    """
    with xp.workprec(bits + 16):
        total = None
        prev = None
        for level in range(0, max_level + 1):
            part = xp.cplx(0)
            for u, w, lu in ts_nodes(bits, level):
                v = f(u, lu)
                if v is not None:
                    part = part + v * w
            h = xp.real(ts_step(level))
            total = part * h if total is None else total / 2 + part * h
            if level >= min_level and prev is not None:
                scale = xp.to_float(abs(total))
                if scale_floor is not None:
                    scale = max(scale, scale_floor)
                if xp.to_float(abs(total - prev)) <= rel_tol * scale:
                    return total
            prev = total
        raise QuadratureError(
            f"tanh-sinh did not stabilize within {max_level} levels")


@lru_cache(maxsize=None)
def _gl_rule(order: int, bucket: int):
    """Gauss-Legendre nodes/weights on [-1,1] at ~bucket bits."""
    pb = bucket + 32
    with xp.workprec(pb):
        nodes = []
        iters = max(6, int(math.log2(pb / 40.0)) + 4)
        for i in range(1, order + 1):
            x = xp.real(math.cos(math.pi * (i - 0.25) / (order + 0.5)))
            for _ in range(iters):
                p0, p1 = xp.real(1), x
                for n in range(2, order + 1):
                    p0, p1 = p1, ((2 * n - 1) * x * p1 - (n - 1) * p0) / n
                dp = order * (x * p1 - p0) / (x * x - 1)
                x = x - p1 / dp
            p0, p1 = xp.real(1), x
            for n in range(2, order + 1):
                p0, p1 = p1, ((2 * n - 1) * x * p1 - (n - 1) * p0) / n
            dp = order * (x * p1 - p0) / (x * x - 1)
            w = 2 / ((1 - x * x) * dp * dp)
            nodes.append((x, w))
        return tuple(nodes)


def gl_nodes(order: int, bits: int):
    return _gl_rule(order, _bucket(bits))


def gl_panel(f, a, b, order: int, bits: int):
    """Gauss-Legendre approximation of the integral of f over [a, b]."""
    mid = (a + b) / 2
    rad = (b - a) / 2
    acc = xp.cplx(0)
    for x, w in gl_nodes(order, bits):
        acc = acc + f(mid + rad * x) * w
    return acc * rad


def gl_graded(f, a, b, depth: int, order: int, bits: int):
    """Composite GL over [a,b] with panels graded geometrically toward b.

    Panel edges b - (b-a)*2^-j, j = 0..depth; resolves an algebraic
    singularity of the integrand at the endpoint b.
    """
    with xp.workprec(bits + 16):
        width = b - a
        acc = xp.cplx(0)
        lo = a
        for j in range(1, depth + 1):
            hi = b - width / (1 << j)
            acc = acc + gl_panel(f, lo, hi, order, bits)
            lo = hi
        acc = acc + gl_panel(f, lo, b, order, bits)
        return acc
