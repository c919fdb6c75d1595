"""Spectral parameters, the order-6 permutation group acting on them, and
torus points with their characters.

Conventions pinned here and used everywhere else:
* a permutation w is stored by its images (w(1), w(2), w(3));
* the action on a parameter triple is (w.lam)_i = lam_{w^{-1}(i)} (left action);
* torus points name the positive diagonal matrix
  diag(y1^{2/3} y2^{1/3}, y1^{-1/3} y2^{1/3}, y1^{-1/3} y2^{-2/3}).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import _backend as xp
from .context import GeneralPositionError, PrecisionContext

RHO = (1.0, 0.0, -1.0)


class WeylElement:
    """Permutation of {1,2,3} acting on parameter triples by index."""

    __slots__ = ("perm",)

    _NAMES = {
        (1, 2, 3): "e",
        (2, 1, 3): "(12)",
        (3, 2, 1): "(13)",
        (1, 3, 2): "(23)",
        (2, 3, 1): "(123)",
        (3, 1, 2): "(321)",
    }

    def __init__(self, perm):
        perm = tuple(int(i) for i in perm)
        if sorted(perm) != [1, 2, 3]:
            raise ValueError(f"not a permutation of (1,2,3): {perm}")
        self.perm = perm

    @classmethod
    def from_name(cls, name: str) -> "WeylElement":
        name = name.strip()
        for perm, nm in cls._NAMES.items():
            if nm == name or nm.strip("()") == name.strip("()"):
                return cls(perm)
        raise ValueError(f"unknown Weyl element name {name!r}")

    @property
    def name(self) -> str:
        return self._NAMES[self.perm]

    def __call__(self, i: int) -> int:
        return self.perm[i - 1]

    def inverse(self) -> "WeylElement":
        inv = [0, 0, 0]
        for i in (1, 2, 3):
            inv[self.perm[i - 1] - 1] = i
        return WeylElement(inv)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        # (self*other)(i) = self(other(i))
        return WeylElement(tuple(self(other(i)) for i in (1, 2, 3)))

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return f"WeylElement{self.perm}"


WEYL_GROUP = tuple(WeylElement(p) for p in sorted(WeylElement._NAMES))
WEYL_IDENTITY = WeylElement((1, 2, 3))


@dataclass(frozen=True)
class SatakeParameter:
    """Triple (l1, l2, l3) with l1+l2+l3 = 0 within construction tolerance."""

    l1: complex
    l2: complex
    l3: complex

    def __init__(self, l1, l2, l3=None, bits: int = 53):
        l1 = complex(l1)
        l2 = complex(l2)
        if l3 is None:
            l3 = -l1 - l2
        else:
            l3 = complex(l3)
            if abs(l1 + l2 + l3) > 2.0 ** -(bits - 8):
                raise ValueError(
                    f"l1+l2+l3 = {l1 + l2 + l3} exceeds tolerance 2^-{bits - 8}")
        object.__setattr__(self, "l1", l1)
        object.__setattr__(self, "l2", l2)
        object.__setattr__(self, "l3", l3)

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.l1, self.l2, self.l3)

    def real_part(self) -> "SatakeParameter":
        return SatakeParameter(self.l1.real, self.l2.real, self.l3.real)

    def contragredient(self) -> "SatakeParameter":
        return SatakeParameter(-self.l3, -self.l2, -self.l1)

    def __iter__(self):
        return iter(self.as_tuple())


def weyl_apply(w: WeylElement, lam: SatakeParameter) -> SatakeParameter:
    """(w.lam)_i = lam_{w^{-1}(i)}; preserves the zero-sum exactly."""
    t = lam.as_tuple()
    winv = w.inverse()
    return SatakeParameter(t[winv(1) - 1], t[winv(2) - 1], t[winv(3) - 1])


def in_general_position(lam: SatakeParameter, tol: float = 1e-9) -> bool:
    """True iff no difference l_i - l_j lies within tol of an even integer."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    t = lam.as_tuple()
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            d = t[i] - t[j]
            n = round(d.real / 2.0)
            if abs(d - 2 * n) < tol:
                return False
    return True


def require_general_position(lam: SatakeParameter, tol: float = 1e-9) -> None:
    if not in_general_position(lam, tol):
        raise GeneralPositionError(
            f"parameter differences too close to 2Z: {lam.as_tuple()}")


@dataclass(frozen=True)
class TorusPoint:
    """Positive pair (y1, y2) naming a diagonal torus element."""

    y1: float
    y2: float

    def __post_init__(self):
        if not (self.y1 > 0 and self.y2 > 0):
            raise ValueError(f"torus coordinates must be positive: {self}")

    def diag(self) -> tuple[float, float, float]:
        y1, y2 = self.y1, self.y2
        return (
            y1 ** (2 / 3) * y2 ** (1 / 3),
            y1 ** (-1 / 3) * y2 ** (1 / 3),
            y1 ** (-1 / 3) * y2 ** (-2 / 3),
        )


def contragredient_torus(p: TorusPoint) -> TorusPoint:
    """Image of the torus point under g -> w (g^t)^{-1} w^{-1}: swaps y1, y2."""
    return TorusPoint(p.y2, p.y1)


def torus_character(p: TorusPoint, lam: SatakeParameter, shift_by_rho: bool,
                    ctx: PrecisionContext | None = None):
    """a^mu with mu = lam (+rho when flagged), a the diagonal of p.

    Returns a Python complex without a context, a backend value with one.
    """
    mu = list(lam.as_tuple())
    if shift_by_rho:
        mu = [m + r for m, r in zip(mu, RHO)]
    if ctx is None:
        la1 = (2 * math.log(p.y1) + math.log(p.y2)) / 3
        la2 = (-math.log(p.y1) + math.log(p.y2)) / 3
        la3 = (-math.log(p.y1) - 2 * math.log(p.y2)) / 3
        return cmath.exp(mu[0] * la1 + mu[1] * la2 + mu[2] * la3)
    with xp.workprec(ctx.bits + 16):
        ly1 = xp.log(xp.real(p.y1))
        ly2 = xp.log(xp.real(p.y2))
        la = ((2 * ly1 + ly2) / 3, (-ly1 + ly2) / 3, (-ly1 - 2 * ly2) / 3)
        acc = xp.cplx(0)
        for m, l in zip(mu, la):
            acc = acc + xp.cplx(m) * l
        return xp.round_to(xp.exp(acc), ctx.bits)


def parse_lambda(text: str) -> SatakeParameter:
    """CLI form: three comma-separated complex literals, third may be 'auto'."""
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != 3:
        raise ValueError("lambda needs three comma-separated components")

    def one(s: str) -> complex:
        s = s.replace("i", "j")
        try:
            return complex(s)
        except ValueError as exc:
            raise ValueError(f"bad complex literal {s!r}") from exc

    l1, l2 = one(parts[0]), one(parts[1])
    l3 = None if parts[2].lower() == "auto" else one(parts[2])
    return SatakeParameter(l1, l2, l3)
