#!/usr/bin/env python3
"""Benchmark the compiled scan kernels against the pure-Python twins.

Runs each hot kernel on a realistic workload and prints per-backend
timings with the speedup.  The workloads mirror the heaviest acceptance
paths: the full associativity scan of H(F_5), homomorphism pair checks
over H(F_3), extension pair checks at carrier size 81, an unfiltered
witness search over H(F_5), and the quadratic-identity scan over F_25.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time
from array import array

from heisenlab import _kernels_py
from heisenlab.automorphisms import aut_enumerate_bruteforce
from heisenlab.central_ext import Cocycle, TriangularMap, ext_build, psi_from
from heisenlab.fields import field_make
from heisenlab.heisenberg import hgroup

try:
    from heisenlab import _speedups
except ImportError:
    _speedups = None


def _as_array(seq):
    return seq if isinstance(seq, array) else array("i", seq)


def bench(label, fn_py, fn_c, repeat):
    t0 = time.perf_counter()
    for _ in range(repeat):
        ref = fn_py()
    t_py = (time.perf_counter() - t0) / repeat
    if fn_c is None:
        print(f"{label:<44} python {t_py * 1e3:9.2f} ms   (no compiled backend)")
        return
    t0 = time.perf_counter()
    for _ in range(repeat):
        got = fn_c()
    t_c = (time.perf_counter() - t0) / repeat
    assert got == ref, f"{label}: backends disagree ({got} vs {ref})"
    print(
        f"{label:<44} python {t_py * 1e3:9.2f} ms   "
        f"compiled {t_c * 1e3:8.2f} ms   speedup {t_py / t_c:7.1f}x"
    )


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args()

    print(f"compiled backend available: {_speedups is not None}")

    F5 = field_make("prime", 5)
    G5 = hgroup(F5)
    q5, add5, mul5, neg5 = G5.field_tables()
    a5, m5, n5 = _as_array(add5), _as_array(mul5), _as_array(neg5)

    bench(
        "associativity scan H(F5), 125^3 triples",
        lambda: _kernels_py.heis_assoc_failure(q5, add5, mul5),
        (lambda: _speedups.heis_assoc_failure(q5, a5, m5)) if _speedups else None,
        args.repeat,
    )

    F3 = field_make("prime", 3)
    G3 = hgroup(F3)
    q3, add3, mul3, _ = G3.field_tables()
    a3, m3 = _as_array(add3), _as_array(mul3)
    tables = [array("i", t.values) for t in aut_enumerate_bruteforce(G3)[:100]]

    def hom_checks_py():
        last = -1
        for t in tables:
            last = _kernels_py.heis_hom_failure(t, q3, add3, mul3, q3, add3, mul3)
        return last

    def hom_checks_c():
        last = -1
        for t in tables:
            last = _speedups.heis_hom_failure(t, q3, a3, m3, q3, a3, m3)
        return last

    bench(
        "100 automorphism pair checks on H(F3)",
        hom_checks_py,
        hom_checks_c if _speedups else None,
        args.repeat,
    )

    c = Cocycle.heisenberg(F3)
    E = ext_build(c.A, c.B, c)
    na, nb, add_a, add_b, coc = E.tables()
    aa, ab, ac = _as_array(add_a), _as_array(add_b), _as_array(coc)
    # the identity passes, so every check scans all 81*81 pairs
    psis = [array("i", psi_from(E, TriangularMap.identity(E)).values)] * 50

    def ext_checks_py():
        acc = 0
        for p in psis:
            acc ^= _kernels_py.ext_hom_failure(p, na, nb, add_a, add_b, coc)
        return acc

    def ext_checks_c():
        acc = 0
        for p in psis:
            acc ^= _speedups.ext_hom_failure(p, na, nb, aa, ab, ac)
        return acc

    bench(
        "50 extension pair checks, carrier size 81",
        ext_checks_py,
        ext_checks_c if _speedups else None,
        args.repeat,
    )

    full = list(range(G5.size))
    fulla = _as_array(full)
    neg_a5 = _as_array(neg5)
    u5, v5 = G5.enc(G5.u), G5.enc(G5.v)

    def witness_py():
        # an unsatisfiable triple forces the full unfiltered scan
        return _kernels_py.otimes_witness(
            q5, add5, mul5, neg5, u5, v5, 1, 1, 2, full, full
        )

    def witness_c():
        return _speedups.otimes_witness(
            q5, a5, m5, neg_a5, u5, v5, 1, 1, 2, fulla, fulla
        )
    bench(
        "unfiltered witness scan H(F5), 125^2 pairs",
        witness_py,
        witness_c if _speedups else None,
        args.repeat,
    )

    F25 = field_make("extension", 5, 2)
    q25 = F25.order
    add25, mul25, _, _ = F25.tables()
    a25, m25 = _as_array(add25), _as_array(mul25)
    half = F25.one / F25.element(2)
    table25 = [F25.mul_idx(half.key, F25.mul_idx(x, x)) for x in range(25)]
    t25 = array("i", table25)

    def quad_py():
        return _kernels_py.quad_identity_failure(table25, F25.one.key, q25, add25, mul25)

    def quad_c():
        return _speedups.quad_identity_failure(t25, F25.one.key, q25, a25, m25)

    bench(
        "quadratic identity scan F25, 625 pairs",
        quad_py,
        quad_c if _speedups else None,
        args.repeat,
    )


if __name__ == "__main__":
    main()
