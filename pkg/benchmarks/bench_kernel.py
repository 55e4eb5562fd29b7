"""Benchmark the compiled reduction kernel against the pure-Python twin.

Runs identical workloads through both backends, checks they agree, and
reports wall time plus speedup.  Workloads:

  arithmetic  eq/add/scc reductions on Church numerals
  random      applications of random closed normal forms
  soup        a short soup run (uses whichever backend the package chose)

Usage: python benchmarks/bench_kernel.py [--count N] [--seed S]
"""

from __future__ import annotations

import argparse
import time

from numpy.random import PCG64, Generator

from lambdasoup import KERNEL_BACKEND, combinator
from lambdasoup.kernel import _pure
from lambdasoup.soup import Molecules, RandomExprParams, init_soup, random_expression
from lambdasoup.stdlib import church
from lambdasoup.terms import App, encode

try:
    from lambdasoup.kernel import _ckernel
except ImportError:
    _ckernel = None


def _arithmetic_workload() -> list[bytes]:
    eq, add, scc = combinator("EQ"), combinator("ADD"), combinator("SCC")
    codes = []
    for n in range(9):
        for m in range(9):
            expr = App(App(eq, App(App(add, church(n)), church(m))), church(n + m))
            codes.append(encode(expr)[0])
        codes.append(encode(App(scc, church(n)))[0])
    return codes


def _random_workload(seed: int, count: int) -> list[bytes]:
    rng = Generator(PCG64(seed))
    params = RandomExprParams(min_size=10, max_size=60)
    pool = [random_expression(params, rng) for _ in range(40)]
    codes = []
    for _ in range(count):
        a, b = rng.integers(0, len(pool), 2)
        codes.append(encode(App(pool[a], pool[b]))[0])
    return codes


def _time_backend(module, codes: list[bytes], repeats: int) -> tuple[float, list]:
    out = []
    start = time.perf_counter()
    for _ in range(repeats):
        out = [module.reduce_code(code, 8000, 1000) for code in codes]
    return time.perf_counter() - start, out


def _bench(name: str, codes: list[bytes], repeats: int) -> None:
    pure_t, pure_out = _time_backend(_pure, codes, repeats)
    line = f"{name:<12} {len(codes) * repeats:>6} reductions  pure {pure_t:8.3f}s"
    if _ckernel is not None:
        comp_t, comp_out = _time_backend(_ckernel, codes, repeats)
        assert comp_out == pure_out, f"backend mismatch on {name} workload"
        line += f"  compiled {comp_t:8.3f}s  speedup {pure_t / comp_t:6.1f}x"
    print(line)


def _bench_soup(seed: int, collisions: int) -> None:
    s, k, i = combinator("S"), combinator("K"), combinator("I")
    soup = init_soup(
        [Molecules(s, fraction=1 / 3), Molecules(k, fraction=1 / 3),
         Molecules(i, fraction=1 / 3)],
        1000, seed=seed)
    start = time.perf_counter()
    for _ in range(collisions):
        soup.collide()
    dt = time.perf_counter() - start
    print(f"{'soup':<12} {collisions:>6} collisions  {KERNEL_BACKEND} "
          f"{dt:8.3f}s  ({collisions / dt:,.0f}/s)")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=300, help="random applications")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--collisions", type=int, default=100_000)
    args = parser.parse_args()

    print(f"selected backend: {KERNEL_BACKEND}"
          + ("" if _ckernel else "  (compiled kernel unavailable)"))
    _bench("arithmetic", _arithmetic_workload(), args.repeats)
    _bench("random", _random_workload(args.seed, args.count), args.repeats)
    _bench_soup(args.seed, args.collisions)


if __name__ == "__main__":
    main()
