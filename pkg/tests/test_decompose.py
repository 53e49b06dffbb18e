import random

import pytest

from heisenlab.automorphisms import AutParams, gl2_matrices, solve_quadratic_additive
from heisenlab.decompose import (
    GroupHomTable,
    compose,
    decompose,
    extract_coordinate_maps,
    h_functor,
)
from heisenlab.errors import (
    CenterNotPreserved,
    DegenerateD,
    InvalidHomomorphism,
)
from heisenlab.fields import FieldHom, canonical_embedding, frobenius
from heisenlab.heisenberg import hgroup
from heisenlab.jsonio import group_hom_from_json, group_hom_to_json


def identity_hom(F):
    return FieldHom.from_func(F, F, lambda x: x)


def random_params(F, rng):
    mats = gl2_matrices(F)
    while True:
        a, b, c, d = mats[rng.randrange(len(mats))]
        s1 = solve_quadratic_additive(F, a * c)
        s2 = solve_quadratic_additive(F, b * d)
        if s1 and s2:
            return AutParams(
                F, a, b, c, d, s1[rng.randrange(len(s1))], s2[rng.randrange(len(s2))]
            )


def test_h_functor_identity(F3):
    table = h_functor(identity_hom(F3))
    assert table.images == tuple(range(27))


def test_h_functor_frobenius_squares_coordinates(F4):
    G = hgroup(F4)
    fr = frobenius(F4)
    table = h_functor(fr)
    for g in G.elements():
        img = table(g)
        assert img.a == fr(g.a) and img.b == fr(g.b) and img.c == fr(g.c)


def test_h_functor_canonical_injective(F3, F9):
    table = h_functor(canonical_embedding(F3, F9))
    assert len(set(table.images)) == 27
    assert table.is_injective


def test_extract_identity_maps(F3):
    coords = extract_coordinate_maps(h_functor(identity_hom(F3)))
    ident = tuple(range(3))
    zero = (0, 0, 0)
    assert coords.f1.values == ident and coords.g2.values == ident
    assert coords.i.values == ident
    assert coords.g1.values == zero and coords.f2.values == zero
    assert coords.i1.values == zero and coords.i2.values == zero
    # identity (1) at work: i(xy) = f1(x) g2(y)
    for x in range(3):
        for y in range(3):
            assert coords.i.values[F3.mul_idx(x, y)] == F3.mul_idx(
                coords.f1.values[x], coords.g2.values[y]
            )


def test_extract_frobenius_maps(F4):
    fr = frobenius(F4)
    coords = extract_coordinate_maps(h_functor(fr))
    assert coords.i.values == fr.table.values
    assert coords.f1.values == fr.table.values
    assert coords.g2.values == fr.table.values
    assert set(coords.g1.values) == {0} and set(coords.f2.values) == {0}


def test_decompose_identity(F3):
    dec = decompose(h_functor(identity_hom(F3)))
    assert dec.theta.is_identity()
    assert dec.d == F3.one
    a, b = dec.params.matrix[0]
    c, d = dec.params.matrix[1]
    assert (a, b, c, d) == (F3.one, F3.zero, F3.zero, F3.one)
    assert set(dec.psi1.values_list()) == {0}
    assert set(dec.psi2.values_list()) == {0}


def test_decompose_functor_of_frobenius(F4):
    dec = decompose(h_functor(frobenius(F4)))
    assert dec.theta == frobenius(F4)
    assert dec.d == F4.one
    a, b = dec.params.matrix[0]
    c, d = dec.params.matrix[1]
    assert (a, b, c, d) == (F4.one, F4.zero, F4.zero, F4.one)


@pytest.mark.parametrize(
    "theta_name",
    ["identity_f3", "canonical_f3_f9", "frobenius_f4", "canonical_f2_f4"],
)
def test_round_trip_random_params(theta_name, F2, F3, F4, F9):
    theta = {
        "identity_f3": lambda: identity_hom(F3),
        "canonical_f3_f9": lambda: canonical_embedding(F3, F9),
        "frobenius_f4": lambda: frobenius(F4),
        "canonical_f2_f4": lambda: canonical_embedding(F2, F4),
    }[theta_name]()
    rng = random.Random(theta_name)
    for _ in range(25):
        phi = random_params(theta.target, rng)
        f = compose(phi, theta)
        dec = decompose(f)
        assert dec.theta == theta
        assert compose(dec.params, theta).images == f.images
        assert dec.params.det == dec.d and not dec.d.is_zero()


def test_decomposition_of_same_table_is_stable(F3, F9):
    rng = random.Random(99)
    theta = canonical_embedding(F3, F9)
    phi = random_params(F9, rng)
    f = compose(phi, theta)
    dec1 = decompose(f)
    dec2 = decompose(f)
    assert dec1.theta == dec2.theta
    assert dec1.params.matrix == dec2.params.matrix
    # psi maps agree on the embedded image (they may differ off it)
    image = set(theta.table.values)
    for k in image:
        assert dec1.psi1.value_idx(k) == dec2.psi1.value_idx(k)
        assert dec1.psi2.value_idx(k) == dec2.psi2.value_idx(k)


def test_recovered_matrix_matches_input_params(F9, F3):
    # A is read off the generators, so compose/decompose returns it exactly
    rng = random.Random(7)
    theta = canonical_embedding(F3, F9)
    phi = random_params(F9, rng)
    dec = decompose(compose(phi, theta))
    assert dec.params.matrix == phi.matrix


def test_compose_identity(F3):
    table = compose(AutParams.identity(F3), identity_hom(F3))
    assert table.images == tuple(range(27))


def test_compose_into_larger_group(F2, F4):
    theta = canonical_embedding(F2, F4)
    rng = random.Random(11)
    table = compose(random_params(F4, rng), theta)
    assert len(table.images) == 8
    assert len(set(table.images)) == 8


def test_center_preserved_by_every_hom(F3, F9, F4):
    for f in (
        h_functor(canonical_embedding(F3, F9)),
        h_functor(frobenius(F4)),
    ):
        for z in f.source.center():
            assert f(z).is_central()


def test_trivial_map_degenerates(F3):
    G = hgroup(F3)
    images = [0] * G.size  # constant map to the identity is a homomorphism
    f = GroupHomTable(G, G, images)
    with pytest.raises(DegenerateD):
        decompose(f)


def test_corrupted_table_detected(F3):
    G = hgroup(F3)
    images = list(range(G.size))
    images[1], images[2] = images[2], images[1]  # swap two central images
    with pytest.raises(InvalidHomomorphism):
        GroupHomTable(G, G, images)


def test_center_escape_detected(F3):
    G = hgroup(F3)
    images = list(range(G.size))
    images[1] = G.enc(G.element(1, 0, 0))  # send (0,0,1) off the center
    f = GroupHomTable(G, G, images, check=False)
    with pytest.raises(CenterNotPreserved):
        extract_coordinate_maps(f)


def test_hom_json_round_trip(F3, F9):
    f = h_functor(canonical_embedding(F3, F9))
    data = group_hom_to_json(f)
    back = group_hom_from_json(data)
    assert back.images == f.images
    assert back.source == f.source and back.target == f.target


def test_generator_image_construction(F3, F9):
    theta = canonical_embedding(F3, F9)
    functor = h_functor(theta)
    GK, GM = functor.source, functor.target
    rebuilt = GroupHomTable.from_generator_images(
        GK, GM, functor(GK.u), functor(GK.v)
    )
    assert rebuilt.images == functor.images


def test_generator_image_extends_degenerate_pairs(F3):
    # commuting images extend to a (non-injective) homomorphism: H(F_p)
    # for odd p is relatively free of exponent p and class 2
    G = hgroup(F3)
    table = GroupHomTable.from_generator_images(G, G, G.identity, G.v)
    assert not table.is_injective
    for g in G.elements():
        assert table(g) == G.element(G.field.zero, g.b, G.field.zero)


def test_generator_image_rejects_bad_images(F2, F4):
    from heisenlab.errors import NotPrimeField

    G = hgroup(F2)
    # an order-4 image of u breaks the relation u*u = identity
    with pytest.raises(InvalidHomomorphism):
        GroupHomTable.from_generator_images(G, G, G.element(1, 1, 0), G.v)
    with pytest.raises(NotPrimeField):
        GroupHomTable.from_generator_images(hgroup(F4), hgroup(F4), hgroup(F4).u, hgroup(F4).v)


def test_decompose_every_automorphism_of_small_groups(F2, F3):
    """Each brute-force automorphism splits with theta = identity."""
    from heisenlab.automorphisms import aut_enumerate_bruteforce

    for F in (F2, F3):
        G = hgroup(F)
        ident = FieldHom.from_func(F, F, lambda x: x)
        for table in aut_enumerate_bruteforce(G):
            f = GroupHomTable(G, G, table.values, check=False)
            dec = decompose(f)
            assert dec.theta == ident
            assert compose(dec.params, ident).images == f.images


def test_decompose_table_level_composite(F3, F9):
    """A monomorphism assembled outside the compose pipeline still splits."""
    from heisenlab.automorphisms import aut_make

    rng = random.Random(13)
    theta = canonical_embedding(F3, F9)
    base = compose(random_params(F9, rng), theta)
    post = aut_make(hgroup(F9), random_params(F9, rng))
    images = [post.values[v] for v in base.images]
    f = GroupHomTable(base.source, base.target, images)
    assert f.is_injective
    dec = decompose(f)
    assert dec.theta == theta
    assert compose(dec.params, theta).images == f.images


def test_decompose_after_frobenius_twist(F3, F9):
    """Pre-twisting the embedding by a field automorphism changes theta."""
    tw = frobenius(F9).compose(canonical_embedding(F3, F9))
    dec = decompose(h_functor(tw))
    assert dec.theta == tw
    assert dec.d == F9.one
