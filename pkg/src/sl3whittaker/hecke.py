"""Exact Hecke action on formal q-expansions with polar parts.

Coefficients are exact rationals by default (complex values are allowed for
exploratory schedules); the action on a monomial is the divisor sum
q^{-m} -> sum_{d | gcd(m,n)} d q^{-mn/d^2}, and formal combinations
O = sum c_n H_n act coefficientwise through finite divisor sums.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from . import _backend as xp
from .context import InsufficientSupportError

_Q_TERM = re.compile(
    r"^\s*([+-]?[\d/.]*)\s*\*?\s*q\s*(?:\^|\*\*)\s*\(?\s*([+-]?\d+)\s*\)?\s*$")


def _coerce(v):
    if isinstance(v, (Fraction, int)):
        return Fraction(v)
    if isinstance(v, float) and v == int(v):
        return Fraction(int(v))
    return complex(v)


class QExpansion:
    """Finite-support formal sum of integer powers of q (negative = polar)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        for e, v in (coeffs or {}).items():
            v = _coerce(v)
            if v != 0:
                self.coeffs[int(e)] = v

    @classmethod
    def monomial(cls, exponent: int, coeff=1) -> "QExpansion":
        return cls({exponent: coeff})

    @classmethod
    def parse(cls, text: str) -> "QExpansion":
        """Parse forms like 'q^-2', '3*q^-1 + q^2 - 5', '1/2 q^-3'."""
        out: dict[int, Fraction] = {}
        # normalize binary +- into separators
        chunks = re.split(r"(?<=[^eE^*])\s*(?=[+-])", text.replace("--", "+"))
        for chunk in chunks:
            chunk = re.sub(r"\s+", "", chunk)
            if not chunk:
                continue
            m = _Q_TERM.match(chunk)
            if m:
                c_text, e_text = m.group(1), m.group(2)
                if c_text in ("", "+"):
                    c = Fraction(1)
                elif c_text == "-":
                    c = Fraction(-1)
                else:
                    c = Fraction(c_text)
                e = int(e_text)
            elif re.fullmatch(r"[+-]?[\d/.]+", chunk):
                c = Fraction(chunk)
                e = 0
            elif re.fullmatch(r"[+-]?\s*q", chunk):
                c = Fraction(-1 if chunk.lstrip().startswith("-") else 1)
                e = 1
            else:
                raise ValueError(f"cannot parse q-expansion term {chunk!r}")
            out[e] = out.get(e, Fraction(0)) + c
        return cls(out)

    def polar_part(self) -> "QExpansion":
        return QExpansion({e: v for e, v in self.coeffs.items() if e < 0})

    def __eq__(self, other):
        return isinstance(other, QExpansion) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, v in other.coeffs.items():
            out[e] = out.get(e, 0) + v
        return QExpansion(out)

    def __rmul__(self, scalar):
        return QExpansion({e: scalar * v for e, v in self.coeffs.items()})

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            v = self.coeffs[e]
            if e == 0:
                parts.append(f"{v}")
            else:
                c = "" if v == 1 else ("-" if v == -1 else f"{v}*")
                parts.append(f"{c}q^{e}")
        joined = " + ".join(parts)
        return joined.replace("+ -", "- ")

    __repr__ = __str__


def hecke_apply(n: int, f: QExpansion) -> QExpansion:
    """H_n on each monomial: q^e -> sum_{d | gcd(|e|, n)} d q^{e n / d^2},
    with the constant term scaled by sigma_1(n)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    out: dict[int, object] = {}

    def add(e, v):
        out[e] = out.get(e, 0) + v

    for e, v in sorted(f.coeffs.items()):
        if e == 0:
            add(0, v * sum(d for d in range(1, n + 1) if n % d == 0))
            continue
        m = abs(e)
        sign = -1 if e < 0 else 1
        g = math.gcd(m, n)
        for d in range(1, g + 1):
            if g % d == 0:
                add(sign * (m * n) // (d * d), d * v)
    return QExpansion(out)


def hecke_brute_oracle(n: int, m: int, bits: int = 192) -> QExpansion:
    """H_n on q^{-m} by literally summing e^{-2 pi i m (a z + b)/d} over
    a d = n, b mod d: the b-sum of roots of unity is evaluated numerically at
    high precision and rounded to its (asserted-integral) value."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    out: dict[int, Fraction] = {}
    with xp.workprec(bits):
        two_pi = 2 * xp.pi()
        for a in range(1, n + 1):
            if n % a:
                continue
            d = n // a
            acc_re = xp.real(0)
            acc_im = xp.real(0)
            for b in range(d):
                ang = -two_pi * m * b / d
                acc_re = acc_re + xp.cos(ang)
                acc_im = acc_im + xp.sin(ang)
            re_f = xp.to_float(acc_re)
            if abs(xp.to_float(acc_im)) > 1e-30 * d:
                raise AssertionError("root-of-unity sum not real")
            rounded = round(re_f)
            if abs(re_f - rounded) > 1e-30 * max(1, d):
                raise AssertionError("root-of-unity sum not integral")
            if rounded:
                # e^{-2 pi i m a z/d} = q^{-m a/d}; the sum forces d | m
                expo = -(m * a) // d
                out[expo] = out.get(expo, Fraction(0)) + Fraction(rounded)
    return QExpansion(out)


def hecke_combo(cn: dict[int, object], polar: QExpansion, k_max: int,
                polar_complete: bool = True) -> QExpansion:
    """Coefficients f_k, k <= k_max, of (sum_n c_n H_n) applied to a polar
    part: f_k = sum over m n = k d^2 with d | m, d | n of c_n e_m d.

    When polar_complete is false, the polar support is a truncation of an
    infinite series; the exact dependency set {k d^2 / n} is computed and an
    InsufficientSupportError raised if it reaches past the support.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    sched = {int(n): _coerce(c) for n, c in cn.items() if _coerce(c) != 0}
    if any(n < 1 for n in sched):
        raise ValueError("Hecke indices must be positive")
    e_coeffs = {}
    for e, v in polar.coeffs.items():
        if e >= 0:
            raise ValueError("polar part must have negative exponents only")
        e_coeffs[-e] = v
    max_m = max(e_coeffs) if e_coeffs else 0
    out: dict[int, object] = {}
    for k in range(1, k_max + 1):
        acc = Fraction(0)
        for n, c in sorted(sched.items()):
            # m n = k d^2, d | n, d | m: with n = d n', m = d m', m' n' = k
            for d in range(1, n + 1):
                if n % d:
                    continue
                npr = n // d
                if k % npr:
                    continue
                m = d * (k // npr)
                if m > max_m:
                    if not polar_complete:
                        raise InsufficientSupportError(
                            f"f_{k} needs e_{m} beyond the supplied support {max_m}")
                    continue
                em = e_coeffs.get(m)
                if em is not None:
                    acc = acc + c * em * d
        if acc != 0:
            out[-k] = acc
    return QExpansion(out)
