"""Compare the compiled and pure-Python kernels.

The backend is fixed at import time, so each measurement runs in a fresh
interpreter with ``TAMEFORGE_PURE_PYTHON`` set or unset.

    python3 benchmarks/bench_kernels.py [--repeat N] [--cells 3,1 5,1]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from tameforge import kernels
from tameforge.family import build_family, corollary_automorphism

repeat, cells = int(sys.argv[1]), [tuple(map(int, c.split(","))) for c in sys.argv[2:]]

def best(fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)

out = {"backend": kernels.BACKEND, "rows": []}
for p, q in cells:
    h2 = build_family(p, q).H[1]
    out["rows"].append([f"h2*h2 (p={p}, q={q}, {len(h2.terms)} terms)", best(lambda: h2 * h2)])
    out["rows"].append([f"full corollary (p={p}, q={q})", best(lambda: corollary_automorphism(p, q))])
print(json.dumps(out))
"""


def measure(pure: bool, repeat: int, cells: list) -> dict:
    env = dict(os.environ)
    env.pop("TAMEFORGE_PURE_PYTHON", None)
    if pure:
        env["TAMEFORGE_PURE_PYTHON"] = "1"
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat), *cells],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--cells", nargs="+", default=["3,1", "5,1"])
    args = ap.parse_args(argv)

    fast = measure(False, args.repeat, args.cells)
    slow = measure(True, args.repeat, args.cells)
    if fast["backend"] != "cython":
        print("compiled extension not available; both columns use the Python kernel", file=sys.stderr)

    width = max(len(r[0]) for r in fast["rows"])
    print(f"{'benchmark':<{width}}  {fast['backend']:>9}  {'python':>9}  speedup")
    for (name, tf), (_, ts) in zip(fast["rows"], slow["rows"]):
        print(f"{name:<{width}}  {tf:>8.3f}s  {ts:>8.3f}s  {ts / tf:6.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
