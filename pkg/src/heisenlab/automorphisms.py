"""Automorphisms of H(K): parametrized family, solvers, and brute force.

A parameter set is an invertible 2x2 matrix A = ((a, b), (c, d)) over K
together with maps psi1, psi2: K -> K satisfying

    psi1(x+x') = psi1(x) + psi1(x') + a*c*x*x'
    psi2(y+y') = psi2(y) + psi2(y') + b*d*y*y'.

The induced automorphism is

    (x, y, z) -> (a*x + b*y, c*x + d*y,
                  det(A)*z + psi1(x) + psi2(y) + b*c*x*y).

The antidiagonal cross term b*c*x*y is forced: expanding the cocycle
compatibility condition for the column action (x,y) -> (ax+by, cx+dy)
leaves the defect a*c*x*x' + b*d*y*y' + b*c*(x*y' + x'*y), and only the
first two summands can be absorbed by psi1 and psi2.  Without the cross
term the family misses automorphisms (e.g. the coordinate flip) and
cannot match the brute-force enumeration.

Central automorphisms are the A = identity members: (x,y,z) ->
(x, y, z + lam(x) + mu(y)) with lam, mu additive; they act trivially
modulo the center.
"""

from __future__ import annotations

import functools
import itertools

from . import kernels
from .errors import (
    InvalidParams,
    NotAdditive,
    NotPrimeField,
    TooLarge,
)
from .fields import Field, FieldElement
from .heisenberg import HGroup
from .tables import FnTable

_AUT_VERIFY_FIELD_LIMIT = 5      # exhaustive automorphism check up to |K| = 5
_CENTRAL_VERIFY_FIELD_LIMIT = 9  # central maps are cheap enough to re-check
_SOLVE_ORDER_LIMIT = 128
_SOLVE_COUNT_LIMIT = 1 << 16    # refuse to materialize more additive maps


def additive_map_from_matrix(F: Field, mat) -> FnTable:
    """The additive map on F whose F_p-coordinate matrix is mat."""
    p, n = F.p, F.n
    vals = []
    for i in range(F.order):
        v = F.coeffs_at(i)
        w = tuple(sum(mat[r][k] * v[k] for k in range(n)) % p for r in range(n))
        vals.append(F.index_of_coeffs(w))
    return FnTable(F, F, vals)


@functools.lru_cache(maxsize=None)
def additive_maps(F: Field):
    """All p^(n^2) additive maps F -> F, enumerated as F_p matrices.

    Additive maps of F_{p^n} are exactly the F_p-linear maps on the
    coefficient space, so dense tables make the enumeration uniform.
    """
    p, n = F.p, F.n
    count = p ** (n * n)
    if count > _SOLVE_COUNT_LIMIT:
        raise TooLarge(f"{count} additive maps is beyond the enumeration cap")
    out = []
    for flat in itertools.product(range(p), repeat=n * n):
        mat = [flat[r * n:(r + 1) * n] for r in range(n)]
        out.append(additive_map_from_matrix(F, mat))
    return tuple(out)


def is_additive_table(F: Field, table: FnTable) -> bool:
    vals = table.values
    q = F.order
    for i in range(q):
        for j in range(q):
            if vals[F.add_idx(i, j)] != F.add_idx(vals[i], vals[j]):
                return False
    return True


def satisfies_quadratic_additive(F: Field, table, e: FieldElement) -> bool:
    """Does the table satisfy psi(x+y) = psi(x) + psi(y) + e*x*y everywhere?"""
    vals = table.values if isinstance(table, FnTable) else table
    add, mul, _, _ = F.tables()
    return kernels.quad_identity_failure(vals, e.key, F.order, add, mul) == -1


def solve_quadratic_additive(F: Field, e: FieldElement):
    """All psi: F -> F with psi(x+x') = psi(x) + psi(x') + e*x*x'.

    In odd characteristic the solutions are (e/2)*x^2 plus an arbitrary
    additive map.  In characteristic 2 a nonzero e admits none, because
    0 = psi(1+1) = 2*psi(1) + e; with e = 0 every additive map works.
    Results are sorted by value table for determinism.
    """
    if not F.is_finite:
        raise TooLarge("solution sets are only enumerated over finite fields")
    if F.order > _SOLVE_ORDER_LIMIT:
        raise TooLarge(f"field order {F.order} exceeds the solver cap")
    return list(_solve_cached(F, F.element(e)))


@functools.lru_cache(maxsize=None)
def _solve_cached(F: Field, e: FieldElement):
    if F.characteristic == 2:
        if not e.is_zero():
            return ()
        return tuple(sorted(additive_maps(F), key=lambda t: t.values))
    half_e = e / F.element(2)
    base = [(half_e * x * x).key for x in F.elements()]
    out = []
    for lam in additive_maps(F):
        vals = [F.add_idx(b, l) for b, l in zip(base, lam.values)]
        out.append(FnTable(F, F, vals))
    out.sort(key=lambda t: t.values)
    for t in out:
        assert satisfies_quadratic_additive(F, t, e)
    return tuple(out)


class AutParams:
    """Matrix entries (a, b, c, d) plus verified psi1, psi2 tables."""

    __slots__ = ("field", "a", "b", "c", "d", "psi1", "psi2")

    def __init__(self, field: Field, a, b, c, d, psi1: FnTable, psi2: FnTable):
        self.field = field
        self.a = field.element(a)
        self.b = field.element(b)
        self.c = field.element(c)
        self.d = field.element(d)
        self.psi1 = psi1
        self.psi2 = psi2
        if self.det.is_zero():
            raise InvalidParams("matrix is singular")
        add, mul, _, _ = field.tables()
        q = field.order
        for name, table, coeff in (
            ("psi1", psi1, self.a * self.c),
            ("psi2", psi2, self.b * self.d),
        ):
            bad = kernels.quad_identity_failure(table.values, coeff.key, q, add, mul)
            if bad != -1:
                x, y = divmod(bad, q)
                raise InvalidParams(
                    f"{name} fails its functional equation",
                    witness=(field.element_at(x), field.element_at(y)),
                )

    @property
    def det(self) -> FieldElement:
        return self.a * self.d - self.b * self.c

    @property
    def cross(self) -> FieldElement:
        return self.b * self.c

    @property
    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    @classmethod
    def identity(cls, field: Field) -> "AutParams":
        zero = FnTable(field, field, [0] * field.order)
        return cls(field, 1, 0, 0, 1, zero, zero)

    def key(self):
        return (
            self.field.carrier_key(),
            self.a.key, self.b.key, self.c.key, self.d.key,
            self.psi1.values, self.psi2.values,
        )

    def __eq__(self, other):
        return isinstance(other, AutParams) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_json(self):
        f = self.field
        return {
            "A": [
                [f.element_to_json(self.a), f.element_to_json(self.b)],
                [f.element_to_json(self.c), f.element_to_json(self.d)],
            ],
            "psi1": [f.element_to_json(f.element_at(v)) for v in self.psi1.values],
            "psi2": [f.element_to_json(f.element_at(v)) for v in self.psi2.values],
        }


class CentralAutParams:
    """Two additive maps lam, mu defining a center-trivial automorphism."""

    __slots__ = ("field", "lam", "mu")

    def __init__(self, field: Field, lam: FnTable, mu: FnTable):
        self.field = field
        for name, table in (("lam", lam), ("mu", mu)):
            if not is_additive_table(field, table):
                raise NotAdditive(f"{name} is not additive")
        self.lam = lam
        self.mu = mu


def _aut_table(G: HGroup, a, b, c, d, det, cross, psi1_vals, psi2_vals):
    F = G.field
    q = F.order
    vals = [0] * G.size
    add, mul = F.add_idx, F.mul_idx
    ak, bk, ck, dk, detk, crossk = a.key, b.key, c.key, d.key, det.key, cross.key
    for x in range(q):
        ax, cx = mul(ak, x), mul(ck, x)
        p1 = psi1_vals[x]
        for y in range(q):
            nx = add(ax, mul(bk, y))
            ny = add(cx, mul(dk, y))
            base = add(add(p1, psi2_vals[y]), mul(crossk, mul(x, y)))
            row = (x * q + y) * q
            nrow = (nx * q + ny) * q
            for z in range(q):
                vals[row + z] = nrow + add(mul(detk, z), base)
    return vals


def _verify_automorphism(G: HGroup, vals, limit=_AUT_VERIFY_FIELD_LIMIT):
    """Exhaustive pair check; bug guard, not a math event."""
    if not G.field.is_finite or G.field.order > limit:
        return
    q, add, mul, _ = G.field_tables()
    assert len(set(vals)) == G.size, "automorphism table is not a bijection"
    bad = kernels.heis_hom_failure(vals, q, add, mul, q, add, mul)
    assert bad == -1, f"constructed map fails the pair check at {bad}"


def aut_make(G: HGroup, params: AutParams) -> FnTable:
    """Element table of the automorphism attached to the parameters."""
    if params.field != G.field:
        raise InvalidParams("parameters over a different field")
    vals = _aut_table(
        G,
        params.a, params.b, params.c, params.d,
        params.det, params.cross,
        params.psi1.values, params.psi2.values,
    )
    _verify_automorphism(G, vals)
    return FnTable(G, G, vals)


def central_aut_make(G: HGroup, params: CentralAutParams) -> FnTable:
    """(x, y, z) -> (x, y, z + lam(x) + mu(y)); identity modulo the center."""
    if params.field != G.field:
        raise NotAdditive("parameters over a different field")
    F = G.field
    q = F.order
    lam, mu = params.lam.values, params.mu.values
    vals = [0] * G.size
    for x in range(q):
        for y in range(q):
            row = (x * q + y) * q
            shift = F.add_idx(lam[x], mu[y])
            for z in range(q):
                vals[row + z] = row + F.add_idx(z, shift)
    _verify_automorphism(G, vals, limit=_CENTRAL_VERIFY_FIELD_LIMIT)
    table = FnTable(G, G, vals)
    for g in G.center():
        assert table(g) == g, "central automorphism moved a central element"
    return table


def gl2_matrices(F: Field):
    """All invertible 2x2 matrices, lexicographic in (a, b, c, d) indices."""
    q = F.order
    out = []
    for ia, ib, ic, id_ in itertools.product(range(q), repeat=4):
        a, b = F.element_at(ia), F.element_at(ib)
        c, d = F.element_at(ic), F.element_at(id_)
        if not (a * d - b * c).is_zero():
            out.append((a, b, c, d))
    return out


def aut_enumerate_parametrized(G: HGroup):
    """Every automorphism reachable from valid parameters, deduplicated."""
    F = G.field
    if not F.is_finite or F.order > 4:
        raise TooLarge("parametrized enumeration is capped at |K| = 4")
    seen = {}
    for a, b, c, d in gl2_matrices(F):
        for psi1 in solve_quadratic_additive(F, a * c):
            for psi2 in solve_quadratic_additive(F, b * d):
                params = AutParams(F, a, b, c, d, psi1, psi2)
                table = aut_make(G, params)
                seen.setdefault(table.values, table)
    return [seen[k] for k in sorted(seen)]


def aut_enumerate_bruteforce(G: HGroup):
    """Oracle enumeration: try all generator images and filter.

    Only prime fields are accepted, where u and v generate the group and
    a candidate map is determined by the BFS word of each element.
    """
    F = G.field
    if F.kind != "prime":
        raise NotPrimeField("u and v only generate H(K) for prime K")
    if F.p > 3:
        raise TooLarge("brute-force enumeration is capped at p = 3")
    n = G.size
    assert G.generated_by_uv()
    parent = G.uv_word_table()
    bfs = list(parent)  # insertion order is BFS order, identity first
    q, add, mul, _ = G.field_tables()
    hm = kernels.heis_mul
    results = {}
    for iu in range(n):
        for iv in range(n):
            images = (iu, iv)
            fmap = [0] * n
            for g in bfs[1:]:
                pg, gi = parent[g]
                fmap[g] = hm(fmap[pg], images[gi], q, add, mul)
            if len(set(fmap)) != n:
                continue
            if kernels.heis_hom_failure(fmap, q, add, mul, q, add, mul) != -1:
                continue
            results.setdefault(tuple(fmap), FnTable(G, G, fmap))
    return [results[k] for k in sorted(results)]
