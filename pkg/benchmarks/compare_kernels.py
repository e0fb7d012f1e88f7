"""Time the compiled and pure-Python reduction kernels on the same work.

Each measurement runs in a fresh interpreter, so the kernel is chosen at
import exactly as in normal use and no Groebner basis is reused from a
cache.  Prints CSV: document, method, kernel, seconds, hash.

    python benchmarks/compare_kernels.py [--repeat 3] [DOC ...]
"""

from __future__ import annotations

import argparse
import csv
import os
import statistics
import subprocess
import sys

DEFAULT_DOCS = ["cycle4", "verma", "dag4_minus_14", "staged_7c", "lyapunov_m31_zero", "rcon_display"]

CHILD = """
import hashlib, sys, time
from ambikit.documents import load_document
from ambikit.groebner import BACKEND
from ambikit.implicitize import vanishing_ideal, vanishing_ideal_by_elimination
m = load_document(sys.argv[1]).build()
t = time.perf_counter()
I = (vanishing_ideal if sys.argv[2] == "saturation" else vanishing_ideal_by_elimination)(m)
secs = time.perf_counter() - t
print(BACKEND, f"{secs:.4f}", hashlib.sha256(str(I).encode()).hexdigest()[:12])
"""


def measure(doc: str, method: str, pure: bool) -> tuple[str, float, str]:
    env = dict(os.environ, AMBIKIT_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", CHILD, doc, method], env=env,
                         capture_output=True, text=True, check=True).stdout.split()
    return out[0], float(out[1]), out[2]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("docs", nargs="*", default=DEFAULT_DOCS)
    ap.add_argument("--method", choices=["saturation", "elimination"], default="saturation")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["document", "method", "kernel", "seconds", "hash"])
    for doc in args.docs:
        results = {}
        for pure in (False, True):
            runs = [measure(doc, args.method, pure) for _ in range(args.repeat)]
            kernel = runs[0][0]
            secs = statistics.median(r[1] for r in runs)
            results[kernel] = runs[0][2]
            w.writerow([doc, args.method, kernel, f"{secs:.4f}", runs[0][2]])
            sys.stdout.flush()
        if len(set(results.values())) != 1:
            print(f"# {doc}: kernels disagree", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
