"""Splitting a monomorphism H(K) -> H(M) as automorphism-after-functor.

Every injective homomorphism table f factors as Phi o H(theta) where
theta: K -> M is a field homomorphism and Phi an automorphism of H(M).
The pipeline reads everything off f's values on the coordinate
one-parameter families:

    f(x,0,0) = (f1(x), g1(x), i1(x))
    f(0,y,0) = (f2(y), g2(y), i2(y))
    f(0,0,z) = (0, 0, i(z))          (the center lands in the center)

then d = i(1) must be nonzero, theta = d^-1 * i is a verified field
homomorphism, the four coordinate maps are proportional to theta, and
psi1 = i1 o eta, psi2 = i2 o eta satisfy the quadratic-additive identity
on theta(K) with coefficients f1(1)g1(1) and f2(1)g2(1).  Extending them
to M and assembling the matrix ((f1(1), f2(1)), (g1(1), g2(1))) yields
Phi with det = d, and the recomposition is checked element by element.

Center preservation is validated directly: the center is the derived
subgroup, so homomorphisms cannot move it out of the center, and a
failure signals a corrupted table rather than a mathematical event.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .automorphisms import AutParams, aut_make
from .errors import (
    CenterNotPreserved,
    DegenerateD,
    FieldMismatch,
    InvalidHomomorphism,
    NotAHomomorphism,
    NotInjective,
    ProportionalityFailure,
    RecompositionMismatch,
    ThetaNotHom,
    TooLarge,
)
from .fields import FieldElement, FieldHom, LinearRetraction, complement_basis, retraction_for
from .heisenberg import HGroup, hgroup
from .psi_extend import QuadAdditiveMap, extend_psi
from .tables import FnTable

_HOM_TABLE_LIMIT = 1 << 12


class GroupHomTable:
    """A verified homomorphism table between finite Heisenberg groups."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source: HGroup, target: HGroup, images, check=True):
        self.source = source
        self.target = target
        self.images = tuple(images)
        if len(self.images) != source.size:
            raise InvalidHomomorphism(
                f"expected {source.size} images, got {len(self.images)}"
            )
        if check:
            self._verify()

    @classmethod
    def from_func(cls, source: HGroup, target: HGroup, fn, check=True):
        images = [target.enc(fn(g)) for g in source.elements()]
        return cls(source, target, images, check=check)

    @classmethod
    def from_generator_images(cls, source: HGroup, target: HGroup, img_u, img_v):
        """Extend a choice of images for u and v along their word table.

        Only prime-field sources qualify: there u and v generate, so the
        images determine the whole table, which is then fully verified.
        """
        from .errors import NotPrimeField

        if source.field.kind != "prime":
            raise NotPrimeField("u and v only generate H(K) for prime K")
        parent = source.uv_word_table()
        images = {source.enc(source.identity): target.enc(target.identity)}
        gens = (target.enc(img_u), target.enc(img_v))
        for g in list(parent)[1:]:
            pg, gi = parent[g]
            images[g] = target.mul_idx(images[pg], gens[gi])
        return cls(source, target, [images[i] for i in range(source.size)])

    def _verify(self):
        if self.source.size > _HOM_TABLE_LIMIT:
            raise TooLarge("homomorphism tables are capped at 4096 source elements")
        qs, add_s, mul_s, _ = self.source.field_tables()
        qt, add_t, mul_t, _ = self.target.field_tables()
        bad = kernels.heis_hom_failure(
            self.images, qs, add_s, mul_s, qt, add_t, mul_t
        )
        if bad != -1:
            i, j = divmod(bad, self.source.size)
            raise InvalidHomomorphism(
                "pair check failed",
                witness=(self.source.element_at(i), self.source.element_at(j)),
            )

    @property
    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def __call__(self, g):
        return self.target.element_at(self.images[self.source.enc(g)])

    def apply_idx(self, i: int) -> int:
        return self.images[i]

    def as_fn_table(self) -> FnTable:
        return FnTable(self.source, self.target, self.images)

    def __eq__(self, other):
        return (
            isinstance(other, GroupHomTable)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.source.carrier_key(), self.target.carrier_key(), self.images))


def h_functor(theta: FieldHom) -> GroupHomTable:
    """Coordinatewise application: (a, b, c) -> (theta a, theta b, theta c)."""
    K, M = theta.source, theta.target
    GK, GM = hgroup(K), hgroup(M)
    qt = M.order
    th = theta.table.values
    images = []
    for i in range(GK.size):
        ab, ic = divmod(i, K.order)
        ia, ib = divmod(ab, K.order)
        images.append((th[ia] * qt + th[ib]) * qt + th[ic])
    return GroupHomTable(GK, GM, images)


@dataclass(frozen=True)
class CoordinateMaps:
    """The seven tables read off a homomorphism's coordinate families."""

    f1: FnTable
    g1: FnTable
    i1: FnTable
    f2: FnTable
    g2: FnTable
    i2: FnTable
    i: FnTable


def extract_coordinate_maps(f: GroupHomTable) -> CoordinateMaps:
    """Read off the coordinate maps and verify the commutator identities.

    Identity (1): i(xy) = f1(x)g2(y) - f2(y)g1(x) for all x, y.
    Identity (2): f1(x)g1(y) = f1(y)g1(x).
    Identity (3): f2(x)g2(y) = f2(y)g2(x).
    """
    K, M = f.source.field, f.target.field
    GK, GM = f.source, f.target
    qK, qM = K.order, M.order
    f1 = [0] * qK
    g1 = [0] * qK
    i1 = [0] * qK
    f2 = [0] * qK
    g2 = [0] * qK
    i2 = [0] * qK
    iz = [0] * qK
    for x in range(qK):
        t = f.images[(x * qK + 0) * qK + 0]
        ab, i1[x] = divmod(t, qM)
        f1[x], g1[x] = divmod(ab, qM)
        t = f.images[(0 * qK + x) * qK + 0]
        ab, i2[x] = divmod(t, qM)
        f2[x], g2[x] = divmod(ab, qM)
        t = f.images[x]  # packed (0, 0, x)
        ab, iz[x] = divmod(t, qM)
        if ab != 0:
            raise CenterNotPreserved(
                "a central element left the center; the table is corrupted",
                witness=(GK.element_at(x), GM.element_at(t)),
            )
    mul, sub = M.mul_idx, M.sub_idx
    for x in range(qK):
        for y in range(qK):
            if iz[K.mul_idx(x, y)] != sub(mul(f1[x], g2[y]), mul(f2[y], g1[x])):
                raise InvalidHomomorphism(
                    "commutator identity (1) fails; the table is corrupted",
                    witness=(K.element_at(x), K.element_at(y)),
                )
            if mul(f1[x], g1[y]) != mul(f1[y], g1[x]):
                raise InvalidHomomorphism(
                    "proportionality identity (2) fails",
                    witness=(K.element_at(x), K.element_at(y)),
                )
            if mul(f2[x], g2[y]) != mul(f2[y], g2[x]):
                raise InvalidHomomorphism(
                    "proportionality identity (3) fails",
                    witness=(K.element_at(x), K.element_at(y)),
                )
    mk = lambda vals: FnTable(K, M, vals)
    return CoordinateMaps(mk(f1), mk(g1), mk(i1), mk(f2), mk(g2), mk(i2), mk(iz))


@dataclass(frozen=True)
class Decomposition:
    """theta, the matrix data, and the extended psi maps, all verified."""

    theta: FieldHom
    eta: LinearRetraction
    params: AutParams
    d: FieldElement
    psi1: QuadAdditiveMap
    psi2: QuadAdditiveMap
    coords: CoordinateMaps
    phi_table: FnTable
    verified: bool = True

    @property
    def matrix(self):
        return self.params.matrix


def decompose(f: GroupHomTable) -> Decomposition:
    """Run the full splitting pipeline on an injective homomorphism table."""
    K, M = f.source.field, f.target.field
    GM = f.target
    one_K = K.one.key

    coords = extract_coordinate_maps(f)
    d_idx = coords.i.values[one_K]
    if d_idx == 0:
        raise DegenerateD("i(1) = 0; the table is not injective on the center")
    d = M.element_at(d_idx)
    d_inv = d.inverse().key

    theta_vals = [M.mul_idx(d_inv, v) for v in coords.i.values]
    if theta_vals[one_K] != M.one.key:
        raise ThetaNotHom("theta(1) != 1")
    try:
        theta = FieldHom.from_values(K, M, theta_vals)
    except (NotAHomomorphism, NotInjective) as exc:
        raise ThetaNotHom(str(exc), witness=exc.witness) from exc

    # proportionality: each coordinate map is its value at 1 times theta
    for name, table in (
        ("f1", coords.f1), ("g1", coords.g1), ("f2", coords.f2), ("g2", coords.g2)
    ):
        scale = table.values[one_K]
        for x in range(K.order):
            if table.values[x] != M.mul_idx(scale, theta_vals[x]):
                raise ProportionalityFailure(
                    f"{name} is not {name}(1) * theta",
                    witness=(K.element_at(x),),
                )

    a = M.element_at(coords.f1.values[one_K])
    b = M.element_at(coords.f2.values[one_K])
    c = M.element_at(coords.g1.values[one_K])
    dd = M.element_at(coords.g2.values[one_K])

    eta = retraction_for(theta)
    basis = complement_basis(theta)

    image = [theta_vals[x] for x in range(K.order)]
    psi1_vals = {theta_vals[x]: coords.i1.values[x] for x in range(K.order)}
    psi2_vals = {theta_vals[x]: coords.i2.values[x] for x in range(K.order)}
    psi1_small = QuadAdditiveMap(M, a * c, image, psi1_vals)
    psi2_small = QuadAdditiveMap(M, b * dd, image, psi2_vals)
    psi1 = extend_psi(psi1_small, basis)
    psi2 = extend_psi(psi2_small, basis)

    params = AutParams(
        M, a, b, c, dd,
        FnTable(M, M, psi1.values_list()),
        FnTable(M, M, psi2.values_list()),
    )
    assert params.det == d, "det(A) must equal d"
    phi_table = aut_make(GM, params)

    functor = h_functor(theta)
    for i in range(f.source.size):
        if phi_table.values[functor.images[i]] != f.images[i]:
            raise RecompositionMismatch(
                "Phi o H(theta) disagrees with the input",
                witness=(f.source.element_at(i),),
            )
    return Decomposition(
        theta=theta, eta=eta, params=params, d=d,
        psi1=psi1, psi2=psi2, coords=coords, phi_table=phi_table,
    )


def compose(phi: AutParams, theta: FieldHom) -> GroupHomTable:
    """Table of Phi o H(theta); the verified oracle for decompose."""
    if phi.field != theta.target:
        raise FieldMismatch("automorphism parameters must live over the target")
    GM = hgroup(theta.target)
    phi_table = aut_make(GM, phi)
    functor = h_functor(theta)
    images = [phi_table.values[v] for v in functor.images]
    out = GroupHomTable(functor.source, GM, images)
    if not out.is_injective:
        raise NotInjective("composite table is not injective")
    return out
