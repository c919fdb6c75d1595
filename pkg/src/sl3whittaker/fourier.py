"""Synthetic Fourier-expansion laboratory.

A coefficient model carries finitely many constant-term, degenerate, decaying
and (optionally) non-decaying mode coefficients. `SynthesizedField` sums the
coset-translated expansion at group points given by unipotent parameters
(x, y, z) over a torus point; `project_mn` / `project_k0l` integrate any
callable field against unipotent characters on the periodic cube; and the
majorant sums certify the three absolute-value partial sums against their
closed-form envelopes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import _backend as xp
from .algebra import (
    SatakeParameter,
    TorusPoint,
    WeylElement,
    torus_character,
    weyl_apply,
)
from .context import BracketViolation, PrecisionContext
from .cosets import CosetRep, coset_enumerate, mobius_real
from .whittaker import (
    growth_exponent,
    m_whittaker,
    w_degen_a1,
    w_degen_a2,
    w_weylsum,
)

_LOG2E = 1.4426950408889634
_TWO_PI = 2.0 * math.pi

# (Pk000degen)-style degenerate combinations use these three permutations
_DEGEN_WEYL = {
    1: WeylElement((1, 2, 3)),
    2: WeylElement.from_name("(123)"),
    3: WeylElement.from_name("(321)"),
}


@dataclass(frozen=True)
class Truncation:
    k_max: int = 8
    l_max: int = 8
    coset_bound: float = 30.0

    def __post_init__(self):
        if self.k_max < 1 or self.l_max < 1 or self.coset_bound < 1:
            raise ValueError(f"degenerate truncation: {self}")


def _canon_sym(mapping, canon_key, what):
    """Collapse sign-symmetric keys to canonical form, rejecting conflicts."""
    out = {}
    for key, val in mapping.items():
        val = complex(val)
        if val == 0:
            continue
        ck = canon_key(key)
        if ck in out and abs(out[ck] - val) > 1e-15 * max(1.0, abs(val)):
            raise ValueError(f"conflicting sign-symmetric {what} entries at {ck}")
        out[ck] = val
    return out


class CoefficientModel:
    """Finite synthetic Fourier data driving the expansion.

    ckl / mklw keys are stored at (|k|, |l|): the expansion itself runs k over
    both signs and l over positive integers, so sign symmetry of the
    coefficients is enforced at construction.
    """

    def __init__(self, lam: SatakeParameter, c00=None, dk0=None, d0l=None,
                 ckl=None, mklw=None, truncation: Truncation | None = None):
        self.lam = lam
        self.truncation = truncation or Truncation()
        self.c00 = {}
        for w, v in (c00 or {}).items():
            name = w.name if isinstance(w, WeylElement) else str(w)
            WeylElement.from_name(name)
            if complex(v) != 0:
                self.c00[name] = complex(v)
        self.dk0 = _canon_sym(dk0 or {}, self._canon_kj, "dk0")
        self.d0l = _canon_sym(d0l or {}, self._canon_lj, "d0l")
        self.ckl = _canon_sym(ckl or {}, self._canon_kl, "ckl")
        self.mklw = _canon_sym(mklw or {}, self._canon_klw, "mklw")
        t = self.truncation
        if any(k > t.k_max for k, _ in self.dk0):
            raise ValueError("dk0 index beyond k_max")
        if any(l > t.l_max for l, _ in self.d0l):
            raise ValueError("d0l index beyond l_max")
        if any(k > t.k_max or l > t.l_max for k, l in self.ckl):
            raise ValueError("ckl index beyond truncation")
        if any(k > t.k_max or l > t.l_max for k, l, _ in self.mklw):
            raise ValueError("mklw index beyond truncation")

    @staticmethod
    def _canon_kj(key):
        k, j = key
        k, j = int(k), int(j)
        if k == 0 or j not in (1, 2, 3):
            raise ValueError(f"bad dk0 key {key}")
        return (abs(k), j)

    @staticmethod
    def _canon_lj(key):
        l, j = key
        l, j = int(l), int(j)
        if l == 0 or j not in (1, 2, 3):
            raise ValueError(f"bad d0l key {key}")
        return (abs(l), j)

    @staticmethod
    def _canon_kl(key):
        k, l = (int(v) for v in key)
        if k == 0 or l == 0:
            raise ValueError(f"bad ckl key {key}")
        return (abs(k), abs(l))

    @staticmethod
    def _canon_klw(key):
        k, l, w = key
        name = w.name if isinstance(w, WeylElement) else str(w)
        WeylElement.from_name(name)
        k, l = int(k), int(l)
        if k == 0 or l == 0:
            raise ValueError(f"bad mklw key {key}")
        return (abs(k), abs(l), name)

    def l_values(self) -> list[int]:
        ls = {l for _, l in self.ckl}
        ls.update(l for l, _ in self.d0l)
        ls.update(l for _, l, _ in self.mklw)
        return sorted(ls)

    def is_empty(self) -> bool:
        return not (self.c00 or self.dk0 or self.d0l or self.ckl or self.mklw)

    def to_json(self) -> dict:
        lam = self.lam.as_tuple()
        return {
            "lambda": [[v.real, v.imag] for v in lam],
            "c00": [[w, v.real, v.imag] for w, v in sorted(self.c00.items())],
            "dk0": [[k, j, v.real, v.imag]
                    for (k, j), v in sorted(self.dk0.items())],
            "d0l": [[l, j, v.real, v.imag]
                    for (l, j), v in sorted(self.d0l.items())],
            "ckl": [[k, l, v.real, v.imag]
                    for (k, l), v in sorted(self.ckl.items())],
            "mklw": [[k, l, w, v.real, v.imag]
                     for (k, l, w), v in sorted(self.mklw.items())],
            "truncation": {
                "k_max": self.truncation.k_max,
                "l_max": self.truncation.l_max,
                "coset_bound": self.truncation.coset_bound,
            },
        }

    @classmethod
    def from_json(cls, doc) -> "CoefficientModel":
        if isinstance(doc, str):
            doc = json.loads(doc)

        def cx(re, im=0.0):
            return complex(float(re), float(im))

        lam_raw = doc["lambda"]
        comps = []
        for item in lam_raw:
            if isinstance(item, (list, tuple)):
                comps.append(cx(*item))
            else:
                comps.append(complex(item))
        lam = SatakeParameter(*comps)
        tr = doc.get("truncation", {})
        trunc = Truncation(
            k_max=int(tr.get("k_max", 8)),
            l_max=int(tr.get("l_max", 8)),
            coset_bound=float(tr.get("coset_bound", 30.0)),
        )
        return cls(
            lam,
            c00={w: cx(re, im) for w, re, im in doc.get("c00", [])},
            dk0={(int(k), int(j)): cx(re, im)
                 for k, j, re, im in doc.get("dk0", [])},
            d0l={(int(l), int(j)): cx(re, im)
                 for l, j, re, im in doc.get("d0l", [])},
            ckl={(int(k), int(l)): cx(re, im)
                 for k, l, re, im in doc.get("ckl", [])},
            mklw={(int(k), int(l), w): cx(re, im)
                   for k, l, w, re, im in doc.get("mklw", [])},
            truncation=trunc,
        )


def pk0l_value(model: CoefficientModel, k: int, l: int, p: TorusPoint,
               ctx: PrecisionContext):
    """The (k, 0, l) Fourier-coefficient function at a torus point, k, l != 0:
    c(k,l) times the decaying kernel plus any non-decaying basis modes."""
    if k == 0 or l == 0:
        raise ValueError("use the degenerate evaluators for k*l = 0")
    pt = TorusPoint(abs(k) * p.y1, abs(l) * p.y2)
    acc = xp.cplx(0)
    c = model.ckl.get((abs(k), abs(l)))
    if c is not None:
        acc = acc + xp.cplx(c) * w_weylsum(model.lam, pt, ctx)
    for (mk, ml, wname), mv in sorted(model.mklw.items()):
        if (mk, ml) == (abs(k), abs(l)):
            wl = weyl_apply(WeylElement.from_name(wname), model.lam)
            acc = acc + xp.cplx(mv) * m_whittaker(wl, pt, ctx)
    return acc


def pk00_value(model: CoefficientModel, k: int, p: TorusPoint,
               ctx: PrecisionContext):
    """Degenerate (k, 0, 0) coefficient function, k != 0."""
    if k == 0:
        raise ValueError("k must be nonzero")
    pt = TorusPoint(abs(k) * p.y1, p.y2)
    acc = xp.cplx(0)
    for j in (1, 2, 3):
        d = model.dk0.get((abs(k), j))
        if d is not None:
            wl = weyl_apply(_DEGEN_WEYL[j], model.lam)
            acc = acc + xp.cplx(d) * w_degen_a1(wl, pt, ctx)
    return acc


def p00l_value(model: CoefficientModel, l: int, p: TorusPoint,
               ctx: PrecisionContext):
    """Degenerate (0, 0, l) coefficient function, l != 0."""
    if l == 0:
        raise ValueError("l must be nonzero")
    pt = TorusPoint(p.y1, abs(l) * p.y2)
    acc = xp.cplx(0)
    for j in (1, 2, 3):
        d = model.d0l.get((abs(l), j))
        if d is not None:
            wl = weyl_apply(_DEGEN_WEYL[j], model.lam)
            acc = acc + xp.cplx(d) * w_degen_a2(wl, pt, ctx)
    return acc


def p000_value(model: CoefficientModel, p: TorusPoint, ctx: PrecisionContext):
    """Constant term: weighted sum of shifted torus characters."""
    acc = xp.cplx(0)
    for wname, c in sorted(model.c00.items()):
        wl = weyl_apply(WeylElement.from_name(wname), model.lam)
        acc = acc + xp.cplx(c) * torus_character(p, wl, True, ctx)
    return acc


class SynthesizedField:
    """Evaluates the coset-summed expansion of a model at group points
    n(x, y, z) a_{y1, y2}.

    Per fixed x, every coset's kernel data is independent of (y, z): each
    coset contributes coeff * e^{2 pi i l(cz + dy)}, so slices are cached and
    grid evaluations reuse them. Terms are pruned, and kernels run at graded
    precision, relative to the largest identity-translate mode scale; a
    pruned/truncated coset tail estimate is available per slice.
    """

    def __init__(self, model: CoefficientModel, p: TorusPoint,
                 ctx: PrecisionContext):
        self.model = model
        self.p = p
        self.ctx = ctx
        self.cosets = coset_enumerate(model.truncation.coset_bound)
        self._slices: dict[float, tuple] = {}
        self._ref_log2 = self._reference_scale_log2()

    def _reference_scale_log2(self) -> float:
        """log2 of the largest identity-coset mode magnitude (decaying part)."""
        y1, y2 = self.p.y1, self.p.y2
        best = float("-inf")
        for (k, l), c in self.model.ckl.items():
            est = math.log2(abs(c)) - _TWO_PI * growth_exponent(k * y1, l * y2) * _LOG2E
            best = max(best, est)
        for (l, _), d in self.model.d0l.items():
            best = max(best, math.log2(abs(d)) - _TWO_PI * l * y2 * _LOG2E)
        for (k, _), d in self.model.dk0.items():
            best = max(best, math.log2(abs(d)) - _TWO_PI * k * y1 * _LOG2E)
        for c in self.model.c00.values():
            best = max(best, math.log2(abs(c)))
        for (k, l, _w), mv in self.model.mklw.items():
            est = math.log2(abs(mv)) + _TWO_PI * (k * y1 + l * y2) * _LOG2E
            best = max(best, est)
        return best if best > float("-inf") else 0.0

    def _graded_ctx(self, size_log2: float) -> PrecisionContext | None:
        """Precision for a term of estimated size 2^size_log2, or None to prune."""
        bits = self.ctx.bits
        deficit = self._ref_log2 - size_log2
        if deficit > bits / 2 + 16:
            return None
        rb = int(max(56, min(bits + 8, bits + 8 - deficit + 40)))
        return self.ctx.with_bits(min(rb, 960))

    def _slice(self, x: float):
        got = self._slices.get(x)
        if got is not None:
            return got
        ctx = self.ctx
        y1, y2 = self.p.y1, self.p.y2
        with xp.workprec(ctx.bits + 16):
            base = p000_value(self.model, self.p, ctx)
            seen = set()
            for (k, _j) in sorted(self.model.dk0):
                if k in seen:
                    continue
                seen.add(k)
                val = pk00_value(self.model, k, self.p, ctx)
                phase = 2 * xp.cos(2 * xp.pi() * k * xp.real(x))
                base = base + phase * val
            records = []
            tail = 0.0
            lvals = self.model.l_values()
            for rep in self.cosets:
                tau = complex(x, y1)
                dl = abs(rep.c * tau + rep.d)
                u1 = y1 / (dl * dl)
                xpp = mobius_real(rep, tau)
                for l in lvals:
                    coeff, skipped = self._coset_mode_coeff(rep, l, u1, y2 * dl,
                                                            xpp)
                    tail += skipped
                    if coeff is not None:
                        records.append((coeff, rep.c, rep.d, l))
            out = (base, tuple(records), tail)
        self._slices[x] = out
        return out

    def _coset_mode_coeff(self, rep: CosetRep, l: int, u1: float, u2: float,
                          xpp: float):
        """Total coefficient of e^{2 pi i l(cz+dy)} for one coset and one l."""
        ctx = self.ctx
        model = self.model
        acc = None
        skipped = 0.0
        for (k, kl), c in sorted(model.ckl.items()):
            if kl != l:
                continue
            size = math.log2(abs(c)) - _TWO_PI * growth_exponent(k * u1, l * u2) * _LOG2E
            gctx = self._graded_ctx(size)
            if gctx is None:
                skipped += 2.0 ** (size - self._ref_log2)
                continue
            pt = TorusPoint(k * u1, l * u2)
            val = w_weylsum(model.lam, pt, gctx)
            with xp.workprec(ctx.bits + 16):
                phase = 2 * xp.cos(2 * xp.pi() * k * xp.real(xpp))
                term = xp.cplx(c) * phase * val
                acc = term if acc is None else acc + term
        for j in (1, 2, 3):
            d = model.d0l.get((l, j))
            if d is None:
                continue
            size = math.log2(abs(d)) - _TWO_PI * l * u2 * _LOG2E
            gctx = self._graded_ctx(size)
            if gctx is None:
                skipped += 2.0 ** (size - self._ref_log2)
                continue
            wl = weyl_apply(_DEGEN_WEYL[j], model.lam)
            val = w_degen_a2(wl, TorusPoint(u1, l * u2), gctx)
            with xp.workprec(ctx.bits + 16):
                term = xp.cplx(d) * val
                acc = term if acc is None else acc + term
        for (k, kl, wname), mv in sorted(model.mklw.items()):
            if kl != l:
                continue
            wl = weyl_apply(WeylElement.from_name(wname), model.lam)
            val = m_whittaker(wl, TorusPoint(k * u1, l * u2), ctx)
            with xp.workprec(ctx.bits + 16):
                phase = 2 * xp.cos(2 * xp.pi() * k * xp.real(xpp))
                term = xp.cplx(mv) * phase * val
                acc = term if acc is None else acc + term
        return acc, skipped

    def _beyond_bound_tail(self, x: float, rate: float) -> float:
        """Ring-summed bound on every coset beyond the norm-bound truncation,
        with exponential rate `rate` per unit of l*y2*delta, relative to the
        reference mode scale."""
        model = self.model
        y1, y2 = self.p.y1, self.p.y2
        b = model.truncation.coset_bound
        q = y1 * y1 + x * x
        lam_min = (q + 1 - math.sqrt((q - 1) ** 2 + 4 * x * x)) / 2
        root = math.sqrt(max(lam_min, 1e-30))
        total = 0.0
        modes = [(abs(c), l) for (_k, l), c in model.ckl.items()]
        modes += [(abs(d), l) for (l, _j), d in model.d0l.items()]
        j = int(b) + 1
        while j < int(b) + 4000:
            dmin = root * j
            count = math.pi * (2 * j + 3)
            ring = sum(a * math.exp(-rate * l * y2 * dmin) for a, l in modes)
            inc = count * ring
            total += inc
            if inc < 1e-6 * max(total, 1e-300):
                break
            j += 1
        return total / 2.0 ** self._ref_log2 if total else 0.0

    def tail_bound(self, x: float = 0.0) -> float:
        """Quarter-exponent certificate for pruned plus truncated coset terms,
        relative to the mode scale (conservative by design)."""
        _, _, tail = self._slice(float(x))
        return tail + self._beyond_bound_tail(float(x), 0.25)

    def tail_estimate(self, x: float = 0.0) -> float:
        """Sharper truncation estimate using the kernels' actual pi-rate
        decay; this is the figure that justifies coset-bound choices."""
        _, _, tail = self._slice(float(x))
        return tail + self._beyond_bound_tail(float(x), math.pi)

    def __call__(self, x: float, y: float, z: float):
        base, records, _ = self._slice(float(x))
        with xp.workprec(self.ctx.bits + 16):
            acc = xp.cplx(base)
            two_pi_i = xp.cplx(0, 1) * 2 * xp.pi()
            for coeff, c, d, l in records:
                acc = acc + coeff * xp.exp(two_pi_i * (l * (c * xp.real(z)
                                                            + d * xp.real(y))))
            return acc


def synthesize(model: CoefficientModel, x: float, y: float, z: float,
               p: TorusPoint, ctx: PrecisionContext):
    """One-shot evaluation; build a SynthesizedField directly for grids."""
    return SynthesizedField(model, p, ctx)(x, y, z)


def _axis_orders(quad_order) -> tuple[int, int, int]:
    if isinstance(quad_order, int):
        return quad_order, quad_order, quad_order
    qx, qy, qz = (int(v) for v in quad_order)
    return qx, qy, qz


def project_mn(F, m: int, n: int, offsets=(0.0, 0.0, 0.0), quad_order=64,
               bits: int = 128):
    """Double periodic quadrature of F(x0, y+y0, z+z0) e^{-2 pi i(mz + ny)}.

    F is any callable of the three unipotent parameters; offsets carry the
    base point's own parameters.
    """
    x0, y0, z0 = offsets
    _, qy, qz = _axis_orders(quad_order)
    with xp.workprec(bits + 16):
        two_pi_i = xp.cplx(0, 1) * 2 * xp.pi()
        acc = xp.cplx(0)
        for iy in range(qy):
            y = iy / qy
            py = xp.exp(-two_pi_i * n * xp.real(y))
            for iz in range(qz):
                z = iz / qz
                pz = xp.exp(-two_pi_i * m * xp.real(z))
                acc = acc + F(x0, y + y0, z + z0) * py * pz
        return xp.round_to(acc / (qy * qz), bits)


def project_k0l(F, k: int, l: int, offsets=(0.0, 0.0, 0.0), quad_order=64,
                bits: int = 128):
    """Triple periodic quadrature of F against e^{-2 pi i(kx + ly)}.

    The z-shift follows the unipotent group law: left-multiplying the base
    point by n(x, y, z) lands at parameters (x+x0, y+y0, z+z0+x*y0).
    """
    x0, y0, z0 = offsets
    qx, qy, qz = _axis_orders(quad_order)
    with xp.workprec(bits + 16):
        two_pi_i = xp.cplx(0, 1) * 2 * xp.pi()
        acc = xp.cplx(0)
        for ix in range(qx):
            x = ix / qx
            px = xp.exp(-two_pi_i * k * xp.real(x))
            for iy in range(qy):
                y = iy / qy
                py = xp.exp(-two_pi_i * l * xp.real(y))
                for iz in range(qz):
                    z = iz / qz
                    acc = acc + F(x + x0, y + y0, z + z0 + x * y0) * px * py
        return xp.round_to(acc / (qx * qy * qz), bits)


def gamma_select(k: int, l: int, y1: float) -> CosetRep:
    """Representative with (1/2)|k/l|^{1/3} < |c i y1 + d| < 2 |k/l|^{1/3}:
    the identity below ratio 8, else bottom row (1, ceil(|k/l|^{1/3}))."""
    if k == 0 or l == 0:
        raise ValueError("k and l must be nonzero")
    if abs(k) < abs(l):
        raise ValueError("requires |k| >= |l|")
    if not (0 < y1 < 1):
        raise ValueError("requires 0 < y1 < 1")
    r = abs(k) / abs(l)
    third = r ** (1.0 / 3.0)
    if r < 8:
        rep = CosetRep(1, 0, 0, 1)
    else:
        d = int(math.ceil(third))
        rep = CosetRep(1, d - 1, 1, d)
    dl = math.hypot(rep.c * y1, rep.d)
    if not (0.5 * third < dl < 2.0 * third):
        raise BracketViolation(
            f"delta={dl} outside ({0.5 * third}, {2 * third}) for k={k} l={l}")
    return rep


@dataclass
class MajorantReport:
    s1: float
    s2: float
    s3: float
    env_s1: float
    env_s2_counted: float
    env_s2_closed: float
    env_s3: float
    s1_ok: bool
    s2_ok: bool
    s3_ok: bool
    s1_last_decade: float
    s2_last_decade: float
    s3_last_decade: float
    s3_exponent_ok: bool
    k_max: int
    l_max: int
    coset_bound: float

    def all_ok(self) -> bool:
        finite = all(math.isfinite(v) for v in (self.s1, self.s2, self.s3))
        return finite and self.s1_ok and self.s2_ok and self.s3_ok \
            and self.s3_exponent_ok


def _coprime_pairs(bound: float):
    """Normalized coprime bottom rows with c^2+d^2 <= bound^2, (0,1) excluded."""
    b2 = bound * bound
    out = []
    for c in range(0, int(bound) + 1):
        dmax = int(math.floor(math.sqrt(max(0.0, b2 - c * c))))
        for d in range(-dmax, dmax + 1):
            if c == 0 and d != 1:
                continue
            if c == 0 and d == 1:
                continue  # the unipotent class itself
            if c < 0 or (c == 0 and d < 0):
                continue
            if math.gcd(c, d) != 1:
                continue
            out.append((c, d))
    out.sort(key=lambda cd: (cd[0] * cd[0] + cd[1] * cd[1], cd))
    return out


def majorant_sums(x: float, y1: float, y2: float,
                  k_max: int = 300, l_max: int = 300,
                  coset_bound: float = 2.0) -> MajorantReport:
    """Truncated absolute-value sums S1 (l <= k <= 27 y2^3 delta^3),
    S2 (l <= k above that threshold), S3 (l > k), with their envelopes.

    S1 is certified against the sixth-power exponential lattice envelope, S2
    against the counted form k N(z, k^{1/3}/(3 y2)) e^{-(9/8) k^{1/3} y1 y2^2},
    S3 against the geometric l e^{l/8 - l y2 delta/4} closed form.

    The default coset bound keeps only classes whose k-decay rate
    y1/(4 delta^2) closes the k sum within the default caps, so the reported
    sums are converged-in-(k,l) partial sums of the coset-truncated series;
    larger-delta classes flatten in k and would need k_max ~ delta^3 to
    stabilize. Every certified inequality is per-coset, so truncation
    preserves it.
    """
    if abs(x) > 0.5:
        raise ValueError("requires |x| <= 1/2")
    if y1 < math.sqrt(3) / 2 - 1e-12 or y2 < math.sqrt(3) / 2 - 1e-12:
        raise ValueError("requires y1, y2 >= sqrt(3)/2")
    pairs = _coprime_pairs(coset_bound)
    deltas = [math.hypot(c * x + d, c * y1) for c, d in pairs]

    s1 = s2 = s3 = 0.0
    s1_tail = s2_tail = s3_tail = 0.0
    k_decade = int(0.9 * k_max)
    l_decade = int(0.9 * l_max)

    for (c, d), dl in zip(pairs, deltas):
        a_k = 0.25 * y1 / (dl * dl)
        a_l = 0.25 * y2 * dl
        k_thresh = 27.0 * (y2 * dl) ** 3
        # largest possible S1/S2 term of this coset (l = 1, optimal k)
        best = math.exp(0.125 - a_k - a_l)
        kopt = (dl * dl / (6 * y1)) ** 1.5
        if kopt > 1:
            best = max(best, math.exp(0.125 * kopt ** (1 / 3) - a_k * kopt - a_l))
        if not (best < 1e-18 * max(s1 + s2, 1e-30) and dl > 3):
            for k in range(1, k_max + 1):
                lcap = min(k, l_max)
                kpart = 0.125 * k ** (1 / 3)
                kdamp = a_k * k
                row = 0.0
                for l in range(1, lcap + 1):
                    t = math.exp(kpart * l ** (2 / 3) - kdamp - a_l * l)
                    row += t
                    if t < 1e-18 * max(row, 1e-30):
                        break
                if k <= k_thresh:
                    s1 += row
                    if k > k_decade:
                        s1_tail += row
                else:
                    s2 += row
                    if k > k_decade:
                        s2_tail += row
                if row < 1e-18 * max(s1 + s2, 1e-30) and k > kopt:
                    break
        # S3 (l > k): per-coset geometric bound breaks the l loop early
        for l in range(2, l_max + 1):
            block_env = l * math.exp(l * (0.125 - a_l))
            if block_env < 1e-18 * max(s3, 1e-30):
                break
            lpart = 0.125 * l ** (1 / 3)
            row = 0.0
            for k in range(1, l):
                row += math.exp(lpart * k ** (2 / 3) - a_k * k - a_l * l)
            s3 += row
            if l > l_decade:
                s3_tail += row

    env_s1 = _envelope_s1(x, y1, y2)
    env_s2_counted, env_s2_closed = _envelope_s2(x, y1, y2, k_max)
    env_s3 = 0.0
    for (c, d), dl in zip(pairs, deltas):
        r = math.exp(0.125 - 0.25 * y2 * dl)
        env_s3 += r / (1 - r) ** 2
    # sampled per-term exponent check in the l > k regime
    s3_exp_ok = True
    for (c, d), dl in list(zip(pairs, deltas))[:5]:
        for l in (2, 5, 10):
            for k in (1, l - 1):
                lg = 0.125 * k ** (2 / 3) * l ** (1 / 3) \
                    - 0.25 * k * y1 / (dl * dl) - 0.25 * l * y2 * dl
                if l * dl >= 1 and lg > -(l / 16.0) * y2 * dl:
                    s3_exp_ok = False

    return MajorantReport(
        s1=s1, s2=s2, s3=s3,
        env_s1=env_s1, env_s2_counted=env_s2_counted,
        env_s2_closed=env_s2_closed, env_s3=env_s3,
        s1_ok=s1 <= env_s1, s2_ok=s2 <= env_s2_counted, s3_ok=s3 <= env_s3,
        s1_last_decade=s1_tail / s1 if s1 else 0.0,
        s2_last_decade=s2_tail / s2 if s2 else 0.0,
        s3_last_decade=s3_tail / s3 if s3 else 0.0,
        s3_exponent_ok=s3_exp_ok,
        k_max=k_max, l_max=l_max, coset_bound=coset_bound,
    )


def _envelope_s1(x: float, y1: float, y2: float) -> float:
    """(3 y2)^6 sum over nonzero integer pairs of |cz+d|^6 e^{-|cz+d|/12}."""
    # truncating the lattice sum low only tightens the certified bound
    total = 0.0
    radius = 300.0
    cmax = int(radius / y1) + 2
    for c in range(-cmax, cmax + 1):
        row = 0.0
        base = c * y1
        dmax = int(radius) + abs(int(c * x)) + 2
        for d in range(-dmax, dmax + 1):
            if c == 0 and d == 0:
                continue
            v = math.hypot(c * x + d, base)
            if v > radius:
                continue
            row += v ** 6 * math.exp(-v / 12.0)
        total += row
    return (3 * y2) ** 6 * total


def _envelope_s2(x: float, y1: float, y2: float, k_max: int):
    """Counted majorant sum_k k N(z, k^{1/3}/(3 y2)) e^{-(9/8)k^{1/3} y1 y2^2}
    and the closed-form k^{5/3} y2^-2 e^{-(27/64) sqrt(3) k^{1/3}} report."""
    tmax = k_max ** (1 / 3) / (3 * y2)
    norms = []
    cmax = int(tmax / y1) + 1
    for c in range(-cmax, cmax + 1):
        dmax = int(tmax + abs(c * x)) + 1
        for d in range(-dmax, dmax + 1):
            if (c, d) == (0, 0):
                continue
            v = math.hypot(c * x + d, c * y1)
            if v < tmax:
                norms.append(v)
    norms.sort()
    import bisect
    counted = 0.0
    closed = 0.0
    for k in range(1, k_max + 1):
        t = k ** (1 / 3) / (3 * y2)
        n_lt = bisect.bisect_left(norms, t)
        counted += k * n_lt * math.exp(-1.125 * k ** (1 / 3) * y1 * y2 * y2)
        closed += k ** (5 / 3) / (y2 * y2) * math.exp(
            -27.0 / 64.0 * math.sqrt(3.0) * k ** (1 / 3))
    return counted, closed
