"""Reconstructing the field inside H(K) from the group operation alone.

With the designated constants u = (1,0,0) and v = (0,1,0), the center
carries a copy of K: addition is plain group multiplication, and the
multiplication graph is cut out by the witness formula

    exists x', y':  [x',u] = I  and  [y',v] = I  and
                    [x',v] = x  and  [u,y'] = y  and  [x',y'] = z.

The witness search runs in enumeration order, so reported witnesses are
deterministic.  The two centralizer equations force the witness shapes
(a, 0, c) and (0, b, c); pre-filtering candidates by them is a pure
optimization whose equivalence with the unfiltered search is itself
property-tested at small sizes.
"""

from __future__ import annotations

from .errors import InfiniteField, InterpretationFailure, NotCentral, TooLarge
from .heisenberg import HElement, HGroup

OTIMES_FORMULA_TEXT = (
    "exists x' y' . [x',u] = I & [y',v] = I & [x',v] = X & [u,y'] = Y & [x',y'] = Z"
)

_RECONSTRUCT_LIMIT = 8


class InterpContext:
    """An H(K) with its constants and the center as interpretation domain."""

    __slots__ = ("G", "u", "v", "domain")

    def __init__(self, G: HGroup):
        if not G.field.is_finite:
            raise InfiniteField("witness searches need a finite group")
        self.G = G
        self.u = G.u
        self.v = G.v
        self.domain = G.center()

    def require_central(self, *xs: HElement):
        for x in xs:
            if not x.is_central():
                raise NotCentral(f"{x!r} is not central")

    def coordinate(self, x: HElement) -> int:
        """Field index of the center coordinate; inverse of x -> (0,0,x)."""
        self.require_central(x)
        return x.c.key

    def _candidates(self, prefilter: bool):
        G = self.G
        n = G.size
        if not prefilter:
            full = list(range(n))
            return full, full
        q = G.field.order
        # [x',u] = I forces the middle coordinate of x' to vanish,
        # [y',v] = I forces the first coordinate of y' to vanish
        xs = [(a * q + 0) * q + c for a in range(q) for c in range(q)]
        ys = [(0 * q + b) * q + c for b in range(q) for c in range(q)]
        return xs, ys


def oplus(ctx: InterpContext, x: HElement, y: HElement) -> HElement:
    """Interpreted addition: just the group product of central elements."""
    ctx.require_central(x, y)
    return x * y


def otimes_witness(ctx, x, y, z, prefilter=True):
    """First witness pair for the multiplication graph, or None.

    The pre-filter cannot change the first witness: pairs it skips fail
    the centralizer equations and are never witnesses.
    """
    from . import kernels

    G = ctx.G
    xc = ctx.coordinate(x)
    yc = ctx.coordinate(y)
    zc = ctx.coordinate(z)
    q, add, mul, neg = G.field_tables()
    xs, ys = ctx._candidates(prefilter)
    pos = kernels.otimes_witness(
        q, add, mul, neg, G.enc(G.u), G.enc(G.v), xc, yc, zc, xs, ys
    )
    if pos == -1:
        return None
    pi, pj = divmod(pos, len(ys))
    return G.element_at(xs[pi]), G.element_at(ys[pj])


def otimes_holds(ctx, x, y, z, prefilter=True) -> bool:
    """Does the witness formula hold for central x, y, z?

    Contract (tested): true exactly when the field satisfies
    coordinate(x) * coordinate(y) = coordinate(z).
    """
    return otimes_witness(ctx, x, y, z, prefilter=prefilter) is not None


class ReconstructedField:
    """Addition and multiplication tables rebuilt from the group."""

    __slots__ = ("field", "add_rows", "mul_rows")

    def __init__(self, field, add_rows, mul_rows):
        self.field = field
        self.add_rows = add_rows
        self.mul_rows = mul_rows

    def matches_source_field(self) -> bool:
        F = self.field
        q = F.order
        return all(
            self.add_rows[i][j] == F.add_idx(i, j)
            and self.mul_rows[i][j] == F.mul_idx(i, j)
            for i in range(q)
            for j in range(q)
        )

    def distributes(self) -> bool:
        q = self.field.order
        add, mul = self.add_rows, self.mul_rows
        return all(
            mul[x][add[y][z]] == add[mul[x][y]][mul[x][z]]
            for x in range(q)
            for y in range(q)
            for z in range(q)
        )


def reconstruct_field(ctx: InterpContext) -> ReconstructedField:
    """Rebuild (K, +, *) on the center and insist it matches table-for-table.

    Addition comes from the group product; each multiplication entry is
    the unique central z whose witness search succeeds.  Zero or two
    candidates would break the interpretation and raise.
    """
    F = ctx.G.field
    q = F.order
    if q > _RECONSTRUCT_LIMIT:
        raise TooLarge(f"reconstruction is capped at |K| = {_RECONSTRUCT_LIMIT}")
    center = ctx.domain
    add_rows = [
        [ctx.coordinate(oplus(ctx, center[i], center[j])) for j in range(q)]
        for i in range(q)
    ]
    mul_rows = []
    for i in range(q):
        row = []
        for j in range(q):
            hits = [
                k
                for k in range(q)
                if otimes_holds(ctx, center[i], center[j], center[k])
            ]
            if len(hits) != 1:
                raise InterpretationFailure(
                    "multiplication graph is not functional",
                    witness=(center[i], center[j], tuple(center[k] for k in hits)),
                )
            row.append(hits[0])
        mul_rows.append(row)
    out = ReconstructedField(F, add_rows, mul_rows)
    if not out.matches_source_field():
        raise InterpretationFailure("reconstructed tables differ from the field")
    return out
