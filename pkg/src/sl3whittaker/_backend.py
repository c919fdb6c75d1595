"""Arbitrary-precision arithmetic backend.

All kernels are written against the tiny operation set exported here. Two
interchangeable implementations provide it:

* ``gmpy2`` -- MPFR/MPC through the compiled GMP/MPFR/MPC libraries.
  Selected by default when importable (roughly 3x faster than mpmath on the
  series and quadrature loops that dominate the runtime).
* ``mpmath`` -- the pure-Python fallback, always available.

Set ``SL3WHITTAKER_BACKEND=gmpy2|mpmath`` before import to force a choice.
Precision is a per-operation property of the active context; use
``workprec(bits)`` around any block of arithmetic.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from fractions import Fraction

import mpmath as _mpmath

_LOG2E = 1.4426950408889634

__all__ = [
    "BACKEND",
    "workprec",
    "real",
    "cplx",
    "re_part",
    "im_part",
    "to_float",
    "to_complex",
    "to_mpmath",
    "exp",
    "log",
    "sqrt",
    "sin",
    "cos",
    "atan2",
    "pi",
    "cpow",
    "round_to",
    "mag2",
    "nstr",
]


def _choose_backend() -> str:
    forced = os.environ.get("SL3WHITTAKER_BACKEND", "").strip().lower()
    if forced in ("gmpy2", "mpmath"):
        if forced == "gmpy2":
            import gmpy2  # noqa: F401  (fail loudly if forced but absent)
        return forced
    if forced:
        raise RuntimeError(f"unknown SL3WHITTAKER_BACKEND={forced!r}")
    try:
        import gmpy2  # noqa: F401
        return "gmpy2"
    except ImportError:
        return "mpmath"


BACKEND = _choose_backend()


if BACKEND == "gmpy2":
    import gmpy2 as _g

    @contextmanager
    def workprec(bits):
        ctx = _g.get_context()
        old = ctx.precision
        ctx.precision = int(bits)
        try:
            yield
        finally:
            ctx.precision = old

    def real(x):
        if isinstance(x, Fraction):
            return _g.mpfr(_g.mpq(x.numerator, x.denominator))
        if isinstance(x, _mpmath.mpf):
            return _from_mpf(x)
        return _g.mpfr(x)

    def _from_mpf(x):
        sign, man, e, _ = x._mpf_
        if man == 0 and e == 0:
            return _g.mpfr(0)
        m = _g.mpfr(-man if sign else man)
        return _g.mul_2exp(m, e) if e >= 0 else _g.div_2exp(m, -e)

    def cplx(x, y=0):
        if isinstance(x, complex):
            return _g.mpc(real(x.real), real(x.imag) + real(y))
        if isinstance(x, (_mpmath.mpc, _mpmath.mpf)):
            return _g.mpc(real(_mpmath.re(x)), real(_mpmath.im(x)) + real(y))
        if isinstance(x, _g.mpc):
            return x if _is_zero(y) else _g.mpc(x.real, x.imag + real(y))
        return _g.mpc(real(x), real(y))

    def _is_zero(y):
        return isinstance(y, int) and y == 0

    def re_part(x):
        return x.real if isinstance(x, _g.mpc) else _g.mpfr(x)

    def im_part(x):
        return x.imag if isinstance(x, _g.mpc) else _g.mpfr(0)

    def to_float(x):
        return float(x)

    def to_complex(x):
        if isinstance(x, _g.mpc):
            return complex(float(x.real), float(x.imag))
        return complex(float(x), 0.0)

    def to_mpmath(x):
        if isinstance(x, _g.mpc):
            return _mpmath.mpc(to_mpmath(x.real), to_mpmath(x.imag))
        m, e = x.as_mantissa_exp()
        with _mpmath.workprec(max(x.precision + 8, 53)):
            return _mpmath.ldexp(_mpmath.mpf(int(m)), int(e))

    exp = _g.exp
    log = _g.log
    sqrt = _g.sqrt
    sin = _g.sin
    cos = _g.cos
    atan2 = _g.atan2

    def pi():
        return _g.const_pi()

else:
    _mp = _mpmath.mp

    @contextmanager
    def workprec(bits):
        old = _mp.prec
        _mp.prec = int(bits)
        try:
            yield
        finally:
            _mp.prec = old

    def real(x):
        if isinstance(x, Fraction):
            return _mpmath.mpf(x.numerator) / x.denominator
        return _mpmath.mpf(x)

    def cplx(x, y=0):
        if isinstance(x, (complex, _mpmath.mpc)):
            return _mpmath.mpc(x) + _mpmath.mpc(0, 1) * real(y)
        return _mpmath.mpc(real(x), real(y))

    def re_part(x):
        return _mpmath.re(x)

    def im_part(x):
        return _mpmath.im(x)

    def to_float(x):
        return float(_mpmath.re(x)) if isinstance(x, _mpmath.mpc) else float(x)

    def to_complex(x):
        return complex(x)

    def to_mpmath(x):
        return x

    exp = _mpmath.exp
    log = _mpmath.log
    sqrt = _mpmath.sqrt
    sin = _mpmath.sin
    cos = _mpmath.cos
    atan2 = _mpmath.atan2

    def pi():
        return +_mpmath.pi


def pow2(k: int):
    """Exact backend real 2^k for integer k."""
    if BACKEND == "gmpy2":
        import gmpy2 as _gg
        return _gg.exp2(int(k))
    return _mpmath.ldexp(_mpmath.mpf(1), int(k))


def cpow(base, expo):
    """Principal-branch power exp(expo*log(base))."""
    return exp(expo * log(base))


def round_to(x, bits):
    """Round x to a value carrying `bits` of precision."""
    with workprec(int(bits)):
        return x + 0


def mag2(x):
    """log2(|x|) as a float; -inf for zero. Safe for huge/tiny exponents."""
    a = abs(x)
    if a == 0:
        return float("-inf")
    with workprec(53):
        return to_float(log(a)) * _LOG2E


def nstr(x, dps):
    """Decimal string with dps significant digits (real backend values)."""
    return _mpmath.nstr(to_mpmath(x), int(dps), strip_zeros=False)


def backend_name() -> str:
    return BACKEND


def bits_for_float(x: float) -> int:
    """Bits needed so exp(x) fits comfortably; always fine for MPFR/mpmath."""
    return max(64, int(abs(x) * _LOG2E) + 64)


def ceil_bits(nats: float) -> int:
    """Convert a natural-log magnitude to a (ceiled) bit count."""
    return int(math.ceil(max(0.0, nats) * _LOG2E))
