import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from heisenlab.errors import (
    CharacteristicMismatch,
    InfiniteField,
    NotAHomomorphism,
    NotInjective,
    NotPrime,
    ReducibleModulus,
    UnsupportedSize,
)
from heisenlab.fields import (
    FieldHom,
    canonical_embedding,
    complement_basis,
    default_modulus,
    field_make,
    frobenius,
    poly_is_irreducible,
    retraction_for,
)
from heisenlab.tables import FnTable


def poly_reduce(poly, modulus, p):
    """Independent dense polynomial reduction used as a test oracle."""
    poly = list(poly)
    deg_m = len(modulus) - 1
    while len(poly) >= len(modulus):
        lead = poly[-1] % p
        shift = len(poly) - len(modulus)
        for i, c in enumerate(modulus):
            poly[shift + i] = (poly[shift + i] - lead * c) % p
        while poly and poly[-1] % p == 0:
            poly.pop()
    out = [c % p for c in poly]
    return out + [0] * (deg_m - len(out))


def test_prime_field_elements():
    F5 = field_make("prime", 5)
    assert [x.key for x in F5.elements()] == [0, 1, 2, 3, 4]
    assert F5.order == 5 and F5.characteristic == 5


def test_f4_default_modulus_is_unique_irreducible():
    # the only monic irreducible quadratic over F_2
    assert field_make("extension", 2, 2).modulus == (1, 1, 1)
    candidates = [
        (c0, c1, 1) for c0 in range(2) for c1 in range(2)
        if poly_is_irreducible((c0, c1, 1), 2)
    ]
    assert candidates == [(1, 1, 1)]


def test_f9_modulus_has_no_root():
    F9 = field_make("extension", 3, 2)
    assert F9.modulus == (1, 0, 1)
    assert all((x * x + 1) % 3 != 0 for x in range(3))


def test_default_moduli_are_lex_smallest_irreducible():
    for p, n in ((2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2), (7, 2)):
        got = default_modulus(p, n)
        for lower in itertools.product(range(p), repeat=n):
            cand = tuple(lower) + (1,)
            if poly_is_irreducible(cand, p):
                assert cand == got
                break


def test_constructor_errors():
    with pytest.raises(NotPrime):
        field_make("prime", 6)
    with pytest.raises(ReducibleModulus):
        field_make("extension", 2, 2, (1, 0, 1))  # t^2+1 = (t+1)^2 over F_2
    with pytest.raises(ReducibleModulus):
        field_make("extension", 3, 2, (1, 0, 0, 1))  # degree mismatch
    with pytest.raises(UnsupportedSize):
        field_make("extension", 2, 17)  # 2^17 beyond the enumeration cap
    with pytest.raises(UnsupportedSize):
        field_make("extension", 2, 1)


@pytest.mark.parametrize("spec", [(2,), (3,), (5,), (2, 2), (3, 2), (2, 3), (2, 4), (5, 2)])
def test_field_axioms_exhaustive_small(spec):
    F = field_make("prime", spec[0]) if len(spec) == 1 else field_make("extension", *spec)
    if F.order > 25:
        pytest.skip("covered by the sampled variant")
    els = list(F.elements())
    zero, one = F.zero, F.one
    for a in els:
        assert a + zero == a and a * one == a
        assert a + (-a) == zero
        if not a.is_zero():
            assert a * a.inverse() == one
        for b in els:
            assert a + b == b + a and a * b == b * a
            for c in els:
                assert (a + b) + c == a + (b + c)
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("p,n", [(3, 3), (7, 2)])
def test_field_axioms_sampled_larger(p, n):
    F = field_make("extension", p, n)
    rng = random.Random(0)
    els = list(F.elements())
    for _ in range(1000):
        a, b, c = (rng.choice(els) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        if not a.is_zero():
            assert a * a.inverse() == F.one


def test_enumeration_is_deterministic_and_complete():
    F = field_make("extension", 2, 3)
    seen = [x.key for x in F.elements()]
    assert seen == list(range(8)) and len(set(seen)) == 8
    again = field_make("extension", 2, 3)
    assert [x.coeffs() for x in F.elements()] == [x.coeffs() for x in again.elements()]


def test_frobenius_f4_squares_generator():
    F4 = field_make("extension", 2, 2)
    t = F4.from_coeffs((0, 1))
    # oracle: square t symbolically and reduce mod the modulus
    want = poly_reduce([0, 0, 1], list(F4.modulus), 2)
    assert frobenius(F4)(t).coeffs() == tuple(want)
    assert frobenius(F4)(t) == F4.from_coeffs((1, 1))


def test_frobenius_prime_field_is_identity():
    F5 = field_make("prime", 5)
    assert frobenius(F5).is_identity()


def test_frobenius_f9_cubes_generator():
    F9 = field_make("extension", 3, 2)
    t = F9.from_coeffs((0, 1))
    want = poly_reduce([0, 0, 0, 1], list(F9.modulus), 3)  # t^3 mod t^2+1
    assert frobenius(F9)(t).coeffs() == tuple(want) == (0, 2)


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (5, 2)])
def test_frobenius_iterates_to_identity(p, n):
    F = field_make("extension", p, n)
    fr = frobenius(F)
    power = fr
    for _ in range(n - 1):
        power = fr.compose(power)
    assert power.is_identity()
    for k in range(1, n):
        power = fr
        for _ in range(k - 1):
            power = fr.compose(power)
        assert not power.is_identity()


def test_frobenius_infinite_field_rejected(Q):
    with pytest.raises(InfiniteField):
        frobenius(Q)


def test_canonical_embedding_constants(F3, F9, F2, F4):
    emb = canonical_embedding(F3, F9)
    assert emb(F3.element(2)).coeffs() == (2, 0)
    emb2 = canonical_embedding(F2, F4)
    assert emb2(F2.one) == F4.one
    with pytest.raises(CharacteristicMismatch):
        canonical_embedding(F2, F9)
    with pytest.raises(CharacteristicMismatch):
        canonical_embedding(F4, F9)


def test_twisted_embedding_equals_canonical(F3, F9):
    # the prime field is fixed by Frobenius
    emb = canonical_embedding(F3, F9)
    assert frobenius(F9).compose(emb) == emb


def test_hom_verification_catches_bad_tables(F3):
    with pytest.raises(NotAHomomorphism):
        FieldHom.from_values(F3, F3, [0, 1, 1])
    with pytest.raises(NotAHomomorphism):
        FieldHom.from_values(F3, F3, [0, 2, 1])  # fixes 0; swaps 1,2; breaks mul? add
    with pytest.raises(NotAHomomorphism):
        FieldHom.from_func(F3, F3, lambda x: x * x)  # x^2 not additive in char 3


def test_all_homs_injective_exhaustively(F2, F3, F4, F9):
    for hom in (frobenius(F4), frobenius(F9), canonical_embedding(F3, F9),
                canonical_embedding(F2, F4)):
        assert len(set(hom.table.values)) == hom.source.order


def test_retraction_identity_case(F5):
    theta = FieldHom.from_func(F5, F5, lambda x: x)
    eta = retraction_for(theta)
    assert all(eta(x) == x for x in F5.elements())
    assert complement_basis(theta) == []


def test_retraction_canonical_f3_f9(F3, F9):
    theta = canonical_embedding(F3, F9)
    assert [b.coeffs() for b in complement_basis(theta)] == [(0, 1)]
    eta = retraction_for(theta)
    for a in range(3):
        for b in range(3):
            assert eta(F9.from_coeffs((a, b))) == F3.element(a)
    # section property on every element of the prime field
    for x in F3.elements():
        assert eta(theta(x)) == x


def test_retraction_of_bijection_is_inverse(F4):
    fr = frobenius(F4)
    assert complement_basis(fr) == []
    eta = retraction_for(fr)
    for x in F4.elements():
        assert eta(fr(x)) == x and fr(eta(x)) == x


def test_complement_dimension_f2_f16(F2):
    F16 = field_make("extension", 2, 4)
    theta = canonical_embedding(F2, F16)
    assert len(complement_basis(theta)) == 3


def test_retraction_rejects_collisions(F3):
    bad = FieldHom.from_func(F3, F3, lambda x: x)
    bad.table = FnTable(F3, F3, [0, 1, 1])  # corrupt after validation
    with pytest.raises(NotInjective):
        retraction_for(bad)


def test_json_descriptor_round_trip(F9, Q):
    from heisenlab.fields import field_from_descriptor

    assert field_from_descriptor(F9.descriptor()) == F9
    assert field_from_descriptor(Q.descriptor()) == Q
    assert F9.descriptor()["modulus"] == [1, 0, 1]


def test_element_json_round_trip(F9, Q):
    x = F9.from_coeffs((2, 1))
    assert F9.element_from_json(F9.element_to_json(x)) == x
    r = Q.element(Fraction(-6, 4))
    data = Q.element_to_json(r)
    assert data == {"num": "-3", "den": "2"}
    assert Q.element_from_json(data) == r


@given(
    st.fractions(max_denominator=10**6),
    st.fractions(max_denominator=10**6),
    st.fractions(max_denominator=10**6),
)
def test_rational_axioms_sampled(a, b, c):
    Q = field_make("rationals")
    x, y, z = Q.element(a), Q.element(b), Q.element(c)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    if not x.is_zero():
        assert x * x.inverse() == Q.one


def test_rationals_reject_enumeration(Q):
    with pytest.raises(InfiniteField):
        list(Q.elements())
    with pytest.raises(InfiniteField):
        Q.size
