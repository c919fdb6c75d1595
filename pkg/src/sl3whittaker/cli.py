"""Command-line front end.

Subcommands: eval-whittaker, nilpotent, envelope, fourier-synth, project,
majorants, hecke, hecke-combo, verify. Numeric output is JSON (schema "1")
with numbers rendered as decimal strings at full working precision, or CSV
where a grid is emitted; see docs/formats.md for the file formats.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import _backend as xp
from .algebra import TorusPoint, parse_lambda
from .asymptotics import envelope_check, nilpotent_triples
from .context import (
    CancellationAlarm,
    NonConvergenceError,
    PrecisionContext,
    QuadratureError,
)
from .fourier import (
    CoefficientModel,
    SynthesizedField,
    majorant_sums,
    project_k0l,
)
from .hecke import QExpansion, hecke_apply, hecke_combo
from .verify import run_suite
from .whittaker import eval_whittaker

_ENV_BITS = "SL3WHITTAKER_PRECISION_BITS"


def _default_bits() -> int:
    try:
        return int(os.environ.get(_ENV_BITS, "128"))
    except ValueError:
        return 128


def _numstr(value, bits: int) -> str:
    digits = int(math.ceil(bits * 0.30103)) + 3
    return xp.nstr(value, digits)


def _emit(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _emit_lines(lines: list[str], path: str | None) -> None:
    text = "\n".join(lines)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sl3w",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_bits(p):
        p.add_argument("--precision-bits", type=int, default=_default_bits(),
                       help=f"working mantissa bits (env {_ENV_BITS}, default 128)")

    def add_out(p):
        p.add_argument("--output", default=None, help="write to file instead of stdout")

    p = sub.add_parser("eval-whittaker", help="evaluate one kernel at a torus point")
    p.add_argument("--which", required=True,
                   choices=["M", "Mdegen1", "Mdegen2", "Wdegen1", "Wdegen2",
                            "W-vt", "W-weylsum"])
    p.add_argument("--lambda", dest="lam", required=True,
                   help="three comma-separated complex literals, third may be 'auto'")
    p.add_argument("--y1", type=float, required=True)
    p.add_argument("--y2", type=float, required=True)
    add_bits(p)
    add_out(p)

    p = sub.add_parser("nilpotent", help="the six labeled nilpotency solutions")
    p.add_argument("--y1", type=float, required=True)
    p.add_argument("--y2", type=float, required=True)
    add_bits(p)
    add_out(p)

    p = sub.add_parser("envelope",
                       help="CSV of t, log|W(a_t,t)|, fitted decay rate")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--tmin", type=float, required=True)
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--steps", type=int, default=7)
    add_bits(p)
    add_out(p)

    p = sub.add_parser("fourier-synth",
                       help="CSV x,y,z,y1,y2,re,im,tail_bound over a point list")
    p.add_argument("--model", required=True, help="coefficient model JSON file")
    p.add_argument("--grid", required=True,
                   help="semicolon-separated points 'x,y,z,y1,y2;...'")
    add_bits(p)
    add_out(p)

    p = sub.add_parser("project", help="project a synthesized model onto (k,0,l)")
    p.add_argument("--model", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--y1", type=float, required=True)
    p.add_argument("--y2", type=float, required=True)
    p.add_argument("--order", default="4,16,16",
                   help="quadrature points per axis 'Qx,Qy,Qz' (default 4,16,16)")
    add_bits(p)
    add_out(p)

    p = sub.add_parser("majorants", help="absolute-value sums S1,S2,S3 + envelopes")
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--y1", type=float, required=True)
    p.add_argument("--y2", type=float, required=True)
    p.add_argument("--k-max", type=int, default=300)
    p.add_argument("--l-max", type=int, default=300)
    p.add_argument("--coset-bound", type=float, default=2.0)
    add_out(p)

    p = sub.add_parser("hecke", help="apply H_n to a q-expansion")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--input", required=True, help="e.g. \"q^-2\" or \"3*q^-1 + q^2\"")

    p = sub.add_parser("hecke-combo",
                       help="coefficients of (sum c_n H_n) on a polar part")
    p.add_argument("--cn", required=True, help="JSON file {n: coefficient}")
    p.add_argument("--polar", required=True, help="JSON file {exponent: coefficient}")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--truncated-polar", action="store_true",
                   help="polar support is a truncation; error if terms are missing")
    add_out(p)

    p = sub.add_parser("verify", help="run acceptance checks")
    p.add_argument("--suite", default="all",
                   help="all, bessel, whittaker, asymptotics, fourier, hecke, algebra")

    return ap


def _cx_doc(value, bits: int) -> dict:
    return {"re": _numstr(xp.re_part(value), bits),
            "im": _numstr(xp.im_part(value), bits)}


def _cmd_eval_whittaker(args) -> int:
    ctx = PrecisionContext(bits=args.precision_bits)
    lam = parse_lambda(args.lam)
    val = eval_whittaker(args.which, lam, TorusPoint(args.y1, args.y2), ctx)
    doc = {"schema": "1", "which": args.which,
           "lambda": [[c.real, c.imag] for c in lam.as_tuple()],
           "y1": args.y1, "y2": args.y2}
    doc.update(_cx_doc(val, ctx.bits))
    doc["est_error_bits"] = ctx.bits - 8
    _emit(doc, args.output)
    return 0


def _cmd_nilpotent(args) -> int:
    triples = nilpotent_triples(args.y1, args.y2, bits=args.precision_bits)
    doc = {"schema": "1", "y1": args.y1, "y2": args.y2, "triples": [
        {"label": t.label,
         "p1": [t.p1.real, t.p1.imag],
         "p2": [t.p2.real, t.p2.imag],
         "p3": [t.p3.real, t.p3.imag],
         "residual": t.residual} for t in triples]}
    _emit(doc, args.output)
    return 0


def _cmd_envelope(args) -> int:
    lam = parse_lambda(args.lam)
    if args.steps < 3 or args.tmax <= args.tmin:
        raise ValueError("need tmax > tmin and at least 3 steps")
    ts = [args.tmin + i * (args.tmax - args.tmin) / (args.steps - 1)
          for i in range(args.steps)]
    grid = [TorusPoint(t, t) for t in ts]
    rep = envelope_check(lam, grid, PrecisionContext(bits=args.precision_bits))
    lines = ["t,log_abs_w,fitted_rate"]
    for t, logw, rate in rep.rows:
        lines.append(f"{t!r},{logw!r},{rate!r}")
    _emit_lines(lines, args.output)
    return 0


def _load_model(path: str) -> CoefficientModel:
    with open(path) as fh:
        return CoefficientModel.from_json(json.load(fh))


def _cmd_fourier_synth(args) -> int:
    model = _load_model(args.model)
    ctx = PrecisionContext(bits=args.precision_bits)
    lines = ["x,y,z,y1,y2,re,im,tail_bound"]
    fields = {}
    for chunk in args.grid.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        vals = [float(v) for v in chunk.split(",")]
        if len(vals) != 5:
            raise ValueError(f"grid point needs 5 numbers, got {chunk!r}")
        x, y, z, y1, y2 = vals
        key = (y1, y2)
        if key not in fields:
            fields[key] = SynthesizedField(model, TorusPoint(y1, y2), ctx)
        fld = fields[key]
        v = fld(x, y, z)
        lines.append(",".join([
            repr(x), repr(y), repr(z), repr(y1), repr(y2),
            _numstr(xp.re_part(v), ctx.bits), _numstr(xp.im_part(v), ctx.bits),
            repr(fld.tail_bound(x)),
        ]))
    _emit_lines(lines, args.output)
    return 0


def _cmd_project(args) -> int:
    model = _load_model(args.model)
    ctx = PrecisionContext(bits=args.precision_bits)
    orders = tuple(int(v) for v in args.order.split(","))
    if len(orders) == 1:
        orders = orders[0]
    field = SynthesizedField(model, TorusPoint(args.y1, args.y2), ctx)
    val = project_k0l(field, args.k, args.l, quad_order=orders, bits=ctx.bits)
    doc = {"schema": "1", "k": args.k, "l": args.l,
           "y1": args.y1, "y2": args.y2}
    doc.update(_cx_doc(val, ctx.bits))
    _emit(doc, args.output)
    return 0


def _cmd_majorants(args) -> int:
    r = majorant_sums(args.x, args.y1, args.y2, k_max=args.k_max,
                      l_max=args.l_max, coset_bound=args.coset_bound)
    doc = {"schema": "1", "x": args.x, "y1": args.y1, "y2": args.y2,
           "s1": r.s1, "s2": r.s2, "s3": r.s3,
           "env_s1": r.env_s1, "env_s2_counted": r.env_s2_counted,
           "env_s2_closed": r.env_s2_closed, "env_s3": r.env_s3,
           "s1_ok": r.s1_ok, "s2_ok": r.s2_ok, "s3_ok": r.s3_ok,
           "s1_last_decade": r.s1_last_decade,
           "s2_last_decade": r.s2_last_decade,
           "s3_last_decade": r.s3_last_decade,
           "s3_exponent_ok": r.s3_exponent_ok,
           "k_max": r.k_max, "l_max": r.l_max, "coset_bound": r.coset_bound,
           "all_ok": r.all_ok()}
    _emit(doc, args.output)
    return 0


def _cmd_hecke(args) -> int:
    print(hecke_apply(args.n, QExpansion.parse(args.input)))
    return 0


def _load_coeff_map(path: str) -> dict:
    with open(path) as fh:
        raw = json.load(fh)
    from fractions import Fraction
    return {int(k): Fraction(str(v)) for k, v in raw.items()}


def _cmd_hecke_combo(args) -> int:
    cn = _load_coeff_map(args.cn)
    polar_map = _load_coeff_map(args.polar)
    polar = QExpansion(polar_map)
    out = hecke_combo(cn, polar, args.kmax,
                      polar_complete=not args.truncated_polar)
    doc = {"schema": "1", "k_max": args.kmax,
           "f": {str(-e): str(v) for e, v in sorted(out.coeffs.items(),
                                                    reverse=True)}}
    _emit(doc, args.output)
    return 0


def _cmd_verify(args) -> int:
    results = run_suite(args.suite, echo=print)
    return 0 if all(r.passed for r in results) else 1


_DISPATCH = {
    "eval-whittaker": _cmd_eval_whittaker,
    "nilpotent": _cmd_nilpotent,
    "envelope": _cmd_envelope,
    "fourier-synth": _cmd_fourier_synth,
    "project": _cmd_project,
    "majorants": _cmd_majorants,
    "hecke": _cmd_hecke,
    "hecke-combo": _cmd_hecke_combo,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except (NonConvergenceError, QuadratureError, CancellationAlarm) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
