"""Compare the compiled elimination kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each workload is a real differential from the package.  Both backends must
return identical invariants; the script exits 1 if they disagree.
"""

from __future__ import annotations

import argparse
import sys
import time

from planarloops.exactlin import ZZ, prime_field, rank_over_field, smith_normal_form
from planarloops.exactlin.elim import BACKEND
from planarloops.loops import build_loops_complex
from planarloops.model import build_model_complex
from planarloops.torext import tor_word_complex


def _largest_blocks(cx, q, count=3):
    mats = [m for (qq, _), m in cx.differentials.items() if qq == q and not m.is_zero()]
    return sorted(mats, key=lambda m: m.nnz, reverse=True)[:count]


def workloads(quick: bool):
    loops = build_loops_complex(2, ZZ, 3 if quick else 4)
    yield "L(4) d_3 blocks, SNF", _largest_blocks(loops, 3), "snf"
    if not quick:
        yield "L(4) d_4 blocks, SNF", _largest_blocks(loops, 4, 2), "snf"
    model = build_model_complex(2, ZZ, 14, weights=False)
    yield "M(4) d_12..15, SNF", [model.differential(q) for q in range(12, 16)], "snf"
    tor = tor_word_complex(2, prime_field(2)).to_complex(4 if quick else 5)
    top = 4 if quick else 5
    yield f"Bar(TL_4) d_{top} blocks, rank mod 2", _largest_blocks(tor, top, 4), "rank"


def run(mats, kind, backend):
    if kind == "snf":
        return [tuple(smith_normal_form(m, backend=backend)) for m in mats]
    return [rank_over_field(m, backend=backend) for m in mats]


def best_of(repeat, fn):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller matrices, for smoke runs")
    args = ap.parse_args(argv)
    if BACKEND != "cython":
        print("compiled extension not available; build it with pip install -e .", file=sys.stderr)
        return 2
    print(f"{'workload':<34} {'shape/nnz':>22} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    ok = True
    for name, mats, kind in workloads(args.quick):
        t_c, out_c = best_of(args.repeat, lambda: run(mats, kind, "cython"))
        t_p, out_p = best_of(args.repeat, lambda: run(mats, kind, "python"))
        if out_c != out_p:
            ok = False
            print(f"MISMATCH in {name}: {out_c} != {out_p}")
        size = f"{max(m.cols for m in mats)}c/{sum(m.nnz for m in mats)}nz"
        print(f"{name:<34} {size:>22} {t_c:>10.4f} {t_p:>10.4f} {t_p / max(t_c, 1e-9):>7.1f}x")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
