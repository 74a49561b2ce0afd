"""Batch expression evaluation: compiled stack machine vs numpy fallback vs the recursive scalar evaluator.

Run with ``python3 benchmarks/bench_eval.py [--sizes 64 1024 65536] [--repeat 5]``.
The expression is a Levi-Civita style coefficient with a kink, a typical
inner-loop workload for the identity checks.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from dglue import _kernels_py, expr as E

try:
    from dglue import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

EXPR = E.parse("(2 * x + 3 * x^2) / (2 * (1 + x^2 + x^3 * sin(x))) * exp(-abs(x - 0.5)) + cos(x)^3")


def best_time(fn, repeat: int) -> float:
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 1024, 65536])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    prog = E.compile_program(EXPR)
    print(f"expression: {E.to_text(EXPR)}  ({len(prog.ops)} ops)")
    print(f"{'n':>8} {'compiled':>12} {'numpy':>12} {'scalar':>12} {'numpy/compiled':>15}")
    for n in args.sizes:
        xs = np.linspace(-0.9, 0.9, n)
        py = lambda: _kernels_py.eval_program(prog.ops, prog.consts, prog.iargs, prog.depth, xs)  # noqa: E731
        ref = py()
        t_py = best_time(py, args.repeat)
        if compiled is not None:
            cy = lambda: compiled.eval_program(prog.ops, prog.consts, prog.iargs, prog.depth, xs)  # noqa: E731
            assert np.allclose(cy(), ref, rtol=1e-13, atol=1e-13)
            t_cy = best_time(cy, args.repeat)
        else:
            t_cy = float("nan")
        scalar_xs = xs if n <= 4096 else xs[:4096]
        t_sc = best_time(lambda: [E.evaluate(EXPR, float(x)) for x in scalar_xs], args.repeat) * n / len(scalar_xs)
        print(f"{n:>8} {t_cy * 1e6:>10.1f}us {t_py * 1e6:>10.1f}us {t_sc * 1e6:>10.1f}us {t_py / t_cy:>15.2f}")


if __name__ == "__main__":
    main()
