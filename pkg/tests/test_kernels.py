"""Backend equivalence: the compiled kernels must mirror the pure ones."""

import random

import pytest

from heisenlab import _kernels_py, kernels
from heisenlab.fields import field_make
from heisenlab.heisenberg import hgroup

compiled = pytest.importorskip(
    "heisenlab._speedups", reason="compiled backend not built"
)


def field_tables(spec):
    F = field_make(*spec)
    add, mul, neg, _ = F.tables()
    return F.order, add, mul, neg


BOTH = (compiled, _kernels_py)


def as_lists(*seqs):
    return [list(s) for s in seqs]


def norm(backend, seq):
    if backend is compiled:
        from array import array

        return array("i", seq)
    return list(seq)


@pytest.mark.parametrize("spec", [("prime", 2), ("prime", 3), ("extension", 2, 2)])
def test_heis_ops_agree(spec):
    q, add, mul, neg = field_tables(spec)
    rng = random.Random(0)
    n = q**3
    for _ in range(300):
        g, h = rng.randrange(n), rng.randrange(n)
        vals = {
            backend.heis_mul(g, h, q, norm(backend, add), norm(backend, mul))
            for backend in BOTH
        }
        assert len(vals) == 1
        vals = {
            backend.heis_inv(g, q, norm(backend, add), norm(backend, mul), norm(backend, neg))
            for backend in BOTH
        }
        assert len(vals) == 1
        vals = {
            backend.heis_comm(g, h, q, norm(backend, add), norm(backend, mul), norm(backend, neg))
            for backend in BOTH
        }
        assert len(vals) == 1


@pytest.mark.parametrize("spec", [("prime", 2), ("prime", 3)])
def test_assoc_kernels_agree(spec):
    q, add, mul, _ = field_tables(spec)
    for backend in BOTH:
        assert backend.heis_assoc_failure(q, norm(backend, add), norm(backend, mul)) == -1


def test_assoc_failure_reports_first_triple():
    # a planted non-associative table: x*y = x except 1*1 = 2
    n = 3
    table = [i for i in range(n) for _ in range(n)]
    table[1 * n + 1] = 2
    got = {b.assoc_failure(norm(b, table), n) for b in BOTH}
    assert len(got) == 1
    packed = got.pop()
    assert packed != -1
    # confirm it is the first failure in lexicographic scan order
    def mul(i, j):
        return table[i * n + j]

    for i in range(n):
        for j in range(n):
            for k in range(n):
                if mul(mul(i, j), k) != mul(i, mul(j, k)):
                    assert packed == (i * n + j) * n + k
                    return


def test_hom_failure_agree_on_random_maps(F3):
    G = hgroup(F3)
    cay = list(G.cayley())
    n = G.size
    rng = random.Random(1)
    for _ in range(20):
        fmap = [rng.randrange(n) for _ in range(n)]
        got = {b.hom_failure(norm(b, fmap), norm(b, cay), n, norm(b, cay), n) for b in BOTH}
        assert len(got) == 1


def test_heis_hom_failure_agree(F2):
    q, add, mul, neg = field_tables(("prime", 2))
    n = q**3
    rng = random.Random(2)
    ident = list(range(n))
    for backend in BOTH:
        assert backend.heis_hom_failure(
            norm(backend, ident), q, norm(backend, add), norm(backend, mul),
            q, norm(backend, add), norm(backend, mul),
        ) == -1
    for _ in range(20):
        fmap = [rng.randrange(n) for _ in range(n)]
        got = {
            b.heis_hom_failure(
                norm(b, fmap), q, norm(b, add), norm(b, mul),
                q, norm(b, add), norm(b, mul),
            )
            for b in BOTH
        }
        assert len(got) == 1


def test_ext_kernels_agree(F3):
    from heisenlab.central_ext import Cocycle, ext_build

    c = Cocycle.heisenberg(F3)
    E = ext_build(c.A, c.B, c)
    na, nb, add_a, add_b, coc = E.tables()
    rng = random.Random(3)
    for backend in BOTH:
        assert backend.ext_cocycle_failure(
            na, nb, norm(backend, add_a), norm(backend, add_b), norm(backend, coc)
        ) == -1
    for _ in range(10):
        psi = list(range(E.size))
        rng.shuffle(psi)
        got = {
            b.ext_hom_failure(
                norm(b, psi), na, nb, norm(b, add_a), norm(b, add_b), norm(b, coc)
            )
            for b in BOTH
        }
        assert len(got) == 1
        alpha = [rng.randrange(na) for _ in range(na)]
        beta = [rng.randrange(nb) for _ in range(nb)]
        gamma = [rng.randrange(nb) for _ in range(na)]
        got = {
            b.homcond_failure(
                na, nb, norm(b, add_a), norm(b, add_b), norm(b, coc),
                norm(b, alpha), norm(b, beta), norm(b, gamma),
            )
            for b in BOTH
        }
        assert len(got) == 1


def test_otimes_kernels_agree(F3):
    q, add, mul, neg = field_tables(("prime", 3))
    G = hgroup(F3)
    n = q**3
    full = list(range(n))
    u, v = G.enc(G.u), G.enc(G.v)
    for xc in range(q):
        for yc in range(q):
            for zc in range(q):
                got = {
                    b.otimes_witness(
                        q, norm(b, add), norm(b, mul), norm(b, neg),
                        u, v, xc, yc, zc, norm(b, full), norm(b, full),
                    )
                    for b in BOTH
                }
                assert len(got) == 1


def test_quad_identity_kernels_agree(F9):
    q, add, mul, neg = field_tables(("extension", 3, 2))
    rng = random.Random(4)
    for _ in range(30):
        table = [0] + [rng.randrange(q) for _ in range(q - 1)]
        e = rng.randrange(q)
        got = {
            b.quad_identity_failure(norm(b, table), e, q, norm(b, add), norm(b, mul))
            for b in BOTH
        }
        assert len(got) == 1


def test_backend_name_exported():
    assert kernels.BACKEND in ("compiled", "python")
