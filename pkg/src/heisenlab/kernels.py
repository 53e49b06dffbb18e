"""Backend selection for the exhaustive-scan kernels.

Prefers the compiled extension (heisenlab._speedups) and falls back to
the pure-Python twins in _kernels_py.  Set HEISENLAB_PURE=1 to force the
pure backend; BACKEND names the one in use.  Inputs are plain sequences
of ints; this wrapper normalizes them to int32 arrays once per call, so
callers should pass prebuilt tables rather than rebuilding them in loops.
"""

from __future__ import annotations

import os
from array import array

from . import _kernels_py

_impl = _kernels_py
BACKEND = "python"

if os.environ.get("HEISENLAB_PURE") != "1":
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        pass


def _arr(seq):
    if isinstance(seq, array) and seq.typecode == "i":
        return seq
    return array("i", seq)


def _pack(*seqs):
    if BACKEND == "compiled":
        return tuple(_arr(s) for s in seqs)
    return seqs


def assoc_failure(mul, n):
    (mul,) = _pack(mul)
    return _impl.assoc_failure(mul, n)


def hom_failure(fmap, mul_s, n_s, mul_t, n_t):
    fmap, mul_s, mul_t = _pack(fmap, mul_s, mul_t)
    return _impl.hom_failure(fmap, mul_s, n_s, mul_t, n_t)


def heis_mul(g, h, q, add, mul):
    add, mul = _pack(add, mul)
    return _impl.heis_mul(g, h, q, add, mul)


def heis_inv(g, q, add, mul, neg):
    add, mul, neg = _pack(add, mul, neg)
    return _impl.heis_inv(g, q, add, mul, neg)


def heis_comm(g, h, q, add, mul, neg):
    add, mul, neg = _pack(add, mul, neg)
    return _impl.heis_comm(g, h, q, add, mul, neg)


def heis_assoc_failure(q, add, mul):
    add, mul = _pack(add, mul)
    return _impl.heis_assoc_failure(q, add, mul)


def heis_hom_failure(fmap, qs, add_s, mul_s, qt, add_t, mul_t):
    fmap, add_s, mul_s, add_t, mul_t = _pack(fmap, add_s, mul_s, add_t, mul_t)
    return _impl.heis_hom_failure(fmap, qs, add_s, mul_s, qt, add_t, mul_t)


def ext_cocycle_failure(na, nb, add_a, add_b, coc):
    add_a, add_b, coc = _pack(add_a, add_b, coc)
    return _impl.ext_cocycle_failure(na, nb, add_a, add_b, coc)


def ext_mul(g, h, na, nb, add_a, add_b, coc):
    add_a, add_b, coc = _pack(add_a, add_b, coc)
    return _impl.ext_mul(g, h, na, nb, add_a, add_b, coc)


def ext_hom_failure(psi, na, nb, add_a, add_b, coc):
    psi, add_a, add_b, coc = _pack(psi, add_a, add_b, coc)
    return _impl.ext_hom_failure(psi, na, nb, add_a, add_b, coc)


def homcond_failure(na, nb, add_a, add_b, coc, alpha, beta, gamma):
    add_a, add_b, coc, alpha, beta, gamma = _pack(
        add_a, add_b, coc, alpha, beta, gamma
    )
    return _impl.homcond_failure(na, nb, add_a, add_b, coc, alpha, beta, gamma)


def otimes_witness(q, add, mul, neg, u, v, xc, yc, zc, xs, ys):
    add, mul, neg, xs, ys = _pack(add, mul, neg, xs, ys)
    return _impl.otimes_witness(q, add, mul, neg, u, v, xc, yc, zc, xs, ys)


def quad_identity_failure(table, e, q, add, mul):
    table, add, mul = _pack(table, add, mul)
    return _impl.quad_identity_failure(table, e, q, add, mul)
