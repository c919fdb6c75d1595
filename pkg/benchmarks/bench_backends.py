#!/usr/bin/env python3
"""Compare the compiled (gmpy2/MPFR) and pure-Python (mpmath) numeric
backends on the kernels that dominate runtime.

Each backend runs in its own subprocess because the choice is fixed at
import; results print as one table. Usage: python benchmarks/bench_backends.py
"""

import json
import os
import subprocess
import sys

_WORKER = r"""
import json, time, sys
import sl3whittaker as s3
from sl3whittaker import _backend as xp
from sl3whittaker.algebra import SatakeParameter, TorusPoint
from sl3whittaker.context import PrecisionContext

ctx = PrecisionContext(bits=128)
lam = SatakeParameter(0.4, 0.1, -0.5)
out = {"backend": s3.backend_name}

def bench(name, fn, reps):
    fn()  # warm caches (nodes, bernoulli)
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    out[name] = (time.perf_counter() - t0) / reps

bench("log_gamma(3.7+2.1i)", lambda: s3.log_gamma(complex(3.7, 2.1), ctx), 50)
bench("bessel_i(nu=0.45, x=40)", lambda: s3.bessel_i(0.45, 40.0, ctx), 50)
bench("bessel_k(nu=0.45, x=40)", lambda: s3.bessel_k(0.45, 40.0, ctx), 20)
bench("m_whittaker(a_{1,1})",
      lambda: s3.m_whittaker(lam, TorusPoint(1, 1), ctx), 10)
bench("w_weylsum(a_{2,2})",
      lambda: s3.w_weylsum(lam, TorusPoint(2, 2), ctx), 5)
bench("w_vt(a_{1,1})", lambda: s3.w_vt(lam, TorusPoint(1, 1), ctx), 2)
print(json.dumps(out))
"""


def run_backend(name: str) -> dict:
    env = dict(os.environ, SL3WHITTAKER_BACKEND=name)
    proc = subprocess.run([sys.executable, "-c", _WORKER], env=env,
                          capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"{name} worker failed:\n{proc.stderr}")
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> int:
    rows = []
    for backend in ("gmpy2", "mpmath"):
        try:
            rows.append(run_backend(backend))
        except RuntimeError as exc:
            print(f"skipping {backend}: {exc}", file=sys.stderr)
    if not rows:
        return 1
    keys = [k for k in rows[0] if k != "backend"]
    width = max(len(k) for k in keys) + 2
    header = "kernel".ljust(width) + "".join(
        f"{r['backend']:>14}" for r in rows)
    if len(rows) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for k in keys:
        line = k.ljust(width) + "".join(f"{r[k] * 1e3:>12.2f}ms" for r in rows)
        if len(rows) == 2:
            line += f"{rows[1][k] / rows[0][k]:>9.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
