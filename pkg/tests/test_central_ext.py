import random

import pytest

from heisenlab.central_ext import (
    AbGroup,
    Cocycle,
    TriangularMap,
    ext_build,
    homcond_check,
    is_additive,
    psi_from,
    psi_preserves_products,
)
from heisenlab.errors import NotACocycle, NotAdditive, ShapeMismatch
from heisenlab.heisenberg import h_mul, hgroup
from heisenlab.jsonio import cocycle_from_json, cocycle_to_json
from heisenlab.tables import FnTable


def cocycle_identity_holds(c):
    """Test oracle: scan the identity literally over all triples."""
    A, B = c.A, c.B
    for a1 in range(A.size):
        for a2 in range(A.size):
            for a3 in range(A.size):
                lhs = B.add_idx(c.value_idx(a1, a2), c.value_idx(A.add_idx(a1, a2), a3))
                rhs = B.add_idx(c.value_idx(a2, a3), c.value_idx(a1, A.add_idx(a2, a3)))
                if lhs != rhs:
                    return False
    return True


def test_heisenberg_cocycle_matches_group(F3):
    c = Cocycle.heisenberg(F3)
    E = ext_build(c.A, c.B, c)
    assert E.size == 27
    G = hgroup(F3)
    # identification ((x,y), z) -> (x, y, z) carries products to products
    def to_group(idx):
        ia, ib = divmod(idx, E.B.size)
        x, y = E.A.split(ia)
        return G.element(F3.element_at(x), F3.element_at(y), F3.element_at(ib))

    for g in range(E.size):
        for h in range(E.size):
            assert to_group(E.mul_idx(g, h)) == h_mul(to_group(g), to_group(h))


@pytest.mark.parametrize("q_spec", [("prime", 2), ("extension", 2, 2)])
def test_heisenberg_cocycle_identification_other_fields(q_spec):
    from heisenlab.fields import field_make

    K = field_make(*q_spec)
    c = Cocycle.heisenberg(K)
    E = ext_build(c.A, c.B, c)
    G = hgroup(K)

    def to_group(idx):
        ia, ib = divmod(idx, E.B.size)
        x, y = E.A.split(ia)
        return G.element(K.element_at(x), K.element_at(y), K.element_at(ib))

    for g in range(E.size):
        for h in range(E.size):
            assert to_group(E.mul_idx(g, h)) == h_mul(to_group(g), to_group(h))


def test_zero_cocycle_gives_direct_product(F3):
    A = AbGroup.product(F3, F3)
    B = AbGroup.of_field(F3)
    E = ext_build(A, B, Cocycle.zero(A, B))
    # all elements of the form (a, 0) commute with everything
    for ia in range(A.size):
        g = ia * B.size
        for h in range(E.size):
            assert E.mul_idx(g, h) == E.mul_idx(h, g)


def test_symmetric_bilinear_is_cocycle_and_gives_cyclic_group(F2):
    A = AbGroup.of_field(F2)
    B = AbGroup.of_field(F2)
    c = Cocycle.from_func(A, B, lambda a, b: (a[0] * b[0],))
    assert cocycle_identity_holds(c)  # oracle over all 8 triples
    E = ext_build(A, B, c)
    assert E.size == 4
    # (1, 0) has order 4, so the extension is cyclic, not Klein
    g = A.index_of((F2.one,)) * B.size
    x = g
    order = 1
    while x != E.identity_idx:
        x = E.mul_idx(x, g)
        order += 1
    assert order == 4


def test_not_a_cocycle_reports_first_triple(F2):
    A = AbGroup.of_field(F2)
    B = AbGroup.of_field(F2)
    bad = Cocycle.from_func(A, B, lambda a, b: (a[0],))  # c(a,a') = a
    assert not cocycle_identity_holds(bad)
    with pytest.raises(NotACocycle) as exc_info:
        ext_build(A, B, bad)
    witness = exc_info.value.witness
    # first failing triple in enumeration order: scan the oracle to confirm
    for a1 in range(2):
        for a2 in range(2):
            for a3 in range(2):
                lhs = B.add_idx(bad.value_idx(a1, a2), bad.value_idx(A.add_idx(a1, a2), a3))
                rhs = B.add_idx(bad.value_idx(a2, a3), bad.value_idx(a1, A.add_idx(a2, a3)))
                if lhs != rhs:
                    assert witness == (A.element_at(a1), A.element_at(a2), A.element_at(a3))
                    return
    raise AssertionError("oracle found no failing triple")


def test_central_fiber_is_central(F3):
    c = Cocycle.heisenberg(F3)
    E = ext_build(c.A, c.B, c)
    assert E.central_fiber_is_central()


def test_psi_from_identity_map(F2):
    c = Cocycle.heisenberg(F2)
    E = ext_build(c.A, c.B, c)
    t = TriangularMap.identity(E)
    assert psi_from(E, t).values == tuple(range(E.size))
    assert homcond_check(E, t)


def test_psi_from_is_bijection_for_random_maps(F2):
    c = Cocycle.heisenberg(F2)
    E = ext_build(c.A, c.B, c)
    rng = random.Random(3)
    for _ in range(25):
        t = TriangularMap.random(E, rng)
        assert psi_from(E, t).is_bijection()


def test_nonadditive_gamma_over_zero_cocycle_is_not_hom(F3):
    A = AbGroup.of_field(F3)
    B = AbGroup.of_field(F3)
    E = ext_build(A, B, Cocycle.zero(A, B))
    gamma = FnTable(A, B, [0, 0, 1])  # gamma(1)+gamma(1) != gamma(2)
    t = TriangularMap(FnTable.identity(A), FnTable.identity(B), gamma)
    psi = psi_from(E, t)
    assert psi.is_bijection()
    assert not psi_preserves_products(E, psi)
    assert not homcond_check(E, t)


def test_zero_cocycle_homcond_iff_gamma_additive(F3):
    A = AbGroup.of_field(F3)
    B = AbGroup.of_field(F3)
    E = ext_build(A, B, Cocycle.zero(A, B))
    rng = random.Random(4)
    for _ in range(50):
        gamma_vals = [0] + [rng.randrange(3) for _ in range(2)]
        gamma = FnTable(A, B, gamma_vals)
        t = TriangularMap(FnTable.identity(A), FnTable.identity(B), gamma)
        additive = is_additive(A, gamma)
        assert homcond_check(E, t) == additive


@pytest.mark.parametrize("spec", [("prime", 2), ("prime", 3)])
def test_homcond_matches_bruteforce(spec):
    from heisenlab.fields import field_make

    K = field_make(*spec)
    c = Cocycle.heisenberg(K)
    E = ext_build(c.A, c.B, c)
    rng = random.Random(5)
    trues = falses = 0
    for i in range(60):
        t = (
            TriangularMap.identity(E)
            if i == 0
            else TriangularMap.random(E, rng, additive_gamma=rng.random() < 0.5)
        )
        fast = homcond_check(E, t)
        slow = psi_preserves_products(E, psi_from(E, t))
        assert fast == slow
        trues += fast
        falses += not fast
    assert trues and falses  # both branches exercised


def test_triangular_map_validation(F3):
    A = AbGroup.of_field(F3)
    B = AbGroup.of_field(F3)
    with pytest.raises(NotAdditive):
        TriangularMap(FnTable(A, A, [0, 2, 2]), FnTable.identity(B), FnTable(A, B, [0, 0, 0]))
    with pytest.raises(NotAdditive):
        TriangularMap(FnTable.identity(A), FnTable(B, B, [0, 0, 1]), FnTable(A, B, [0, 0, 0]))


def test_shape_mismatch_detected(F2, F3):
    c2 = Cocycle.heisenberg(F2)
    E2 = ext_build(c2.A, c2.B, c2)
    c3 = Cocycle.heisenberg(F3)
    E3 = ext_build(c3.A, c3.B, c3)
    t = TriangularMap.identity(E3)
    with pytest.raises(ShapeMismatch):
        psi_from(E2, t)
    with pytest.raises(ShapeMismatch):
        homcond_check(E2, t)


def test_mixed_characteristic_carrier_allowed_but_not_automorphisms(F2, F3):
    mixed = AbGroup.product(F2, F3)
    assert mixed.size == 6
    assert mixed.add_idx(mixed.size - 1, mixed.size - 1) is not None
    with pytest.raises(ShapeMismatch):
        mixed.uniform_char()


def test_cocycle_json_round_trip(F2):
    c = Cocycle.heisenberg(F2)
    data = cocycle_to_json(c)
    back = cocycle_from_json(data)
    assert back.values == c.values
    assert back.A == c.A and back.B == c.B
