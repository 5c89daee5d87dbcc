"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--cutoff C]

Two measurements:
  * micro: apply_terms over every basis state of a Fock space, both backends
    called directly in the same process;
  * end to end: check_brackets + check_weitzenbock on one space, each backend
    in its own interpreter (GENUSLAB_PURE_PYTHON selects the fallback).
"""

import argparse
import os
import subprocess
import sys
import timeit

from genuslab import _kernels_py
from genuslab.fock import ModeSpec, assemble_global, build_space

try:
    from genuslab import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

END_TO_END = """
import time
from genuslab import kernels
from genuslab.fock import ModeSpec, build_space
from genuslab.fock.checks import check_brackets, check_weitzenbock
sp = build_space(ModeSpec(((1, 1), (2, 1), (3, 1)), 1, {cutoff}))
t = time.perf_counter()
assert check_brackets(sp) == [] and check_weitzenbock(sp) == []
print(kernels.BACKEND, len(sp), time.perf_counter() - t)
"""


def micro(cutoff: int, repeat: int) -> None:
    sp = build_space(ModeSpec(((1, 1), (2, 1), (3, 1)), 1, cutoff))
    op = assemble_global(sp, "Q_flat")
    words, re, im, _ = op._pack()
    states = sp.basis

    def sweep(mod):
        for s in states:
            mod.apply_terms(words, re, im, s)

    print(f"apply_terms: {len(words)} words x {len(states)} states")
    backends = [("python", _kernels_py)] + ([("cython", _kernels_c)] if _kernels_c else [])
    times = {}
    for name, mod in backends:
        times[name] = min(timeit.repeat(lambda: sweep(mod), number=1, repeat=repeat))
        print(f"  {name:7s} {times[name] * 1e3:9.1f} ms")
    if len(times) == 2:
        print(f"  speedup {times['python'] / times['cython']:.1f}x")


def end_to_end(cutoff: int) -> None:
    print("check_brackets + check_weitzenbock:")
    for pure in ("0", "1"):
        env = dict(os.environ, GENUSLAB_PURE_PYTHON=pure)
        out = subprocess.run(
            [sys.executable, "-c", END_TO_END.format(cutoff=cutoff)],
            env=env, capture_output=True, text=True, check=True,
        ).stdout.split()
        print(f"  {out[0]:7s} {out[1]} states {float(out[2]):8.2f} s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--cutoff", type=int, default=9)
    args = ap.parse_args()
    if _kernels_c is None:
        print("compiled kernels not built; only the fallback is timed")
    micro(args.cutoff, args.repeat)
    end_to_end(args.cutoff)


if __name__ == "__main__":
    main()
