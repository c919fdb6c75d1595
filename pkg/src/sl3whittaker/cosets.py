"""Unipotent-coset machinery for the degree-2 block: enumeration of coprime
bottom rows, the |c tau + d| factor, the induced torus translate, and the
rotation angle entering the amplification argument.

A coset is represented by its bottom row (c, d); one representative is kept
per +-(c, d) class, normalized to c > 0 or (c, d) = (0, 1), and completed to
determinant one with the extended Euclid algorithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import TorusPoint


@dataclass(frozen=True)
class CosetRep:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant must be 1: {self}")

    def as_matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    @classmethod
    def from_cd(cls, c: int, d: int) -> "CosetRep":
        """Complete a coprime bottom row to a determinant-1 representative."""
        if math.gcd(c, d) != 1:
            raise ValueError(f"({c}, {d}) is not coprime")
        a, b = _complete(c, d)
        return cls(a, b, c, d)


def _complete(c: int, d: int) -> tuple[int, int]:
    # a*d - b*c = 1 via extended gcd of (c, d)
    old_r, r = c, d
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    # old_s*c + old_t*d = old_r = +-1
    if old_r == 1:
        return old_t, -old_s
    return -old_t, old_s


def normalize_pair(c: int, d: int) -> tuple[int, int]:
    """Canonical representative of the +-(c, d) class."""
    if c > 0 or (c == 0 and d > 0):
        return c, d
    return -c, -d


def coset_enumerate(norm_bound: float) -> list[CosetRep]:
    """One representative per coprime class with c^2 + d^2 <= norm_bound^2.

    Deterministic order: by c^2 + d^2, then c, then d.
    """
    if norm_bound < 1:
        raise ValueError("norm_bound must be >= 1")
    b2 = norm_bound * norm_bound
    pairs = []
    cmax = int(math.floor(norm_bound))
    for c in range(0, cmax + 1):
        dmax = int(math.floor(math.sqrt(max(0.0, b2 - c * c))))
        for d in range(-dmax, dmax + 1):
            if (c, d) != normalize_pair(c, d):
                continue
            if math.gcd(c, d) != 1:
                continue
            pairs.append((c * c + d * d, c, d))
    pairs.sort()
    return [CosetRep.from_cd(c, d) for _, c, d in pairs]


def delta(rep: CosetRep, tau: complex) -> float:
    """|c tau + d| for Im(tau) > 0."""
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    return abs(rep.c * tau + rep.d)


def iwasawa_translate(rep: CosetRep, x: float, p: TorusPoint) -> TorusPoint:
    """Torus part of the block-embedded rep applied at n-parameter x."""
    dl = delta(rep, complex(x, p.y1))
    return TorusPoint(p.y1 / (dl * dl), p.y2 * dl)


def mobius_real(rep: CosetRep, tau: complex) -> float:
    """Re((a tau + b)/(c tau + d)): the new first n-parameter."""
    tau = complex(tau)
    return ((rep.a * tau + rep.b) / (rep.c * tau + rep.d)).real


def nz_translate(rep: CosetRep, y: float, z: float) -> tuple[float, float]:
    """New (y, z) n-parameters under the block-embedded rep: (cz+dy, az+by)."""
    return rep.c * z + rep.d * y, rep.a * z + rep.b * y


def theta_gamma(rep: CosetRep) -> Fraction:
    """(ac + bd)/(c^2 + d^2), exact; cross-checked on the Gram identity."""
    a, b, c, d = rep.a, rep.b, rep.c, rep.d
    q = c * c + d * d
    num = a * c + b * d
    # gamma gamma^t = [[a^2+b^2, ac+bd], [ac+bd, c^2+d^2]] and the unipotent
    # factorization force (a^2+b^2) q = 1 + num^2
    if (a * a + b * b) * q != 1 + num * num:
        raise AssertionError(f"Gram identity violated for {rep}")
    return Fraction(num, q)


def cos_nonvanishing_check(k: int, reps: list[CosetRep],
                           threshold: float = 1e-12) -> bool:
    """True iff |2 cos(2 pi k theta)| > threshold for every rep."""
    if k == 0:
        raise ValueError("k must be nonzero")
    for rep in reps:
        th = theta_gamma(rep)
        frac = (k * th.numerator) % th.denominator
        v = 2.0 * math.cos(2.0 * math.pi * frac / th.denominator)
        if abs(v) <= threshold:
            return False
    return True
