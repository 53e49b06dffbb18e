"""Central extensions of a finite abelian group by another via a 2-cocycle.

An extension carries the product (a,b) * (a',b') = (a+a', b+b'+c(a,a')).
Validation goes through the cocycle identity

    c(a,a') + c(a+a', a'') = c(a',a'') + c(a, a'+a'')

which is equivalent to associativity of the product and cheaper to scan;
failures report the first offending triple in enumeration order.  A
triangular map (alpha, beta, gamma) induces the bijection
Psi(a,b) = (alpha(a), beta(b) + gamma(a)); homcond_check decides whether
that bijection is an automorphism without building the product table.
"""

from __future__ import annotations

from array import array

from . import kernels
from .errors import (
    InfiniteField,
    NotACocycle,
    NotAdditive,
    ShapeMismatch,
    TooLarge,
)
from .fields import Field
from .tables import FnTable

_AB_DENSE_LIMIT = 256
_AB_COMMUTATIVITY_SCAN = 81


class AbGroup:
    """A finite product of fields viewed additively."""

    __slots__ = ("factors", "size", "_sizes", "_add", "_neg")

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise ShapeMismatch("a product of zero fields has no carrier")
        for f in factors:
            if not f.is_finite:
                raise InfiniteField("abelian carriers must be finite")
        self.factors = factors
        self._sizes = tuple(f.order for f in factors)
        size = 1
        for s in self._sizes:
            size *= s
        self.size = size
        self._add = None
        self._neg = None
        if size <= _AB_COMMUTATIVITY_SCAN:
            for i in range(size):
                for j in range(size):
                    assert self.add_idx(i, j) == self.add_idx(j, i)

    @classmethod
    def of_field(cls, F: Field) -> "AbGroup":
        return cls((F,))

    @classmethod
    def product(cls, *fields: Field) -> "AbGroup":
        return cls(fields)

    def carrier_key(self):
        return ("ab",) + tuple(f.carrier_key() for f in self.factors)

    def __eq__(self, other):
        return isinstance(other, AbGroup) and self.carrier_key() == other.carrier_key()

    def __hash__(self):
        return hash(self.carrier_key())

    def __repr__(self):
        return "AbGroup(%s)" % " x ".join(f.short_name() for f in self.factors)

    # -- indexing (mixed radix, first factor most significant) --------------

    def split(self, idx: int):
        out = []
        for s in reversed(self._sizes):
            idx, r = divmod(idx, s)
            out.append(r)
        out.reverse()
        return tuple(out)

    def join(self, parts) -> int:
        idx = 0
        for s, part in zip(self._sizes, parts):
            idx = idx * s + part
        return idx

    def element_at(self, idx: int):
        return tuple(f.element_at(i) for f, i in zip(self.factors, self.split(idx)))

    def index_of(self, elt) -> int:
        if len(elt) != len(self.factors):
            raise ShapeMismatch("wrong number of components")
        return self.join(tuple(f.index_of(x) for f, x in zip(self.factors, elt)))

    def elements(self):
        for i in range(self.size):
            yield self.element_at(i)

    @property
    def zero_idx(self) -> int:
        return 0

    def add_idx(self, i: int, j: int) -> int:
        if self._add is not None:
            return self._add[i * self.size + j]
        a, b = self.split(i), self.split(j)
        return self.join(
            tuple(f.add_idx(x, y) for f, x, y in zip(self.factors, a, b))
        )

    def neg_idx(self, i: int) -> int:
        if self._neg is not None:
            return self._neg[i]
        return self.join(
            tuple(f.neg_idx(x) for f, x in zip(self.factors, self.split(i)))
        )

    def add_table(self):
        if self._add is None:
            if self.size > _AB_DENSE_LIMIT:
                raise TooLarge(f"dense tables limited to {_AB_DENSE_LIMIT}")
            n = self.size
            self._add = array(
                "i", (self.add_idx(i, j) for i in range(n) for j in range(n))
            )
            self._neg = array("i", (self.neg_idx(i) for i in range(n)))
        return self._add

    # -- F_p structure for automorphism generation ---------------------------

    def uniform_char(self) -> int:
        chars = {f.characteristic for f in self.factors}
        if len(chars) != 1:
            raise ShapeMismatch("mixed characteristics have no common F_p space")
        return chars.pop()

    @property
    def fp_dim(self) -> int:
        self.uniform_char()  # validates homogeneity
        return sum(f.n for f in self.factors)

    def fp_coords(self, idx: int):
        coords = []
        for f, i in zip(self.factors, self.split(idx)):
            coords.extend(f.coeffs_at(i))
        return tuple(coords)

    def from_fp_coords(self, coords) -> int:
        parts = []
        pos = 0
        for f in self.factors:
            parts.append(f.index_of_coeffs(coords[pos:pos + f.n]))
            pos += f.n
        return self.join(parts)

    def automorphism_from_matrix(self, mat) -> FnTable:
        """Additive automorphism given by an invertible F_p matrix on coords."""
        p = self.uniform_char()
        dim = self.fp_dim
        vals = []
        for i in range(self.size):
            v = self.fp_coords(i)
            w = tuple(
                sum(mat[r][k] * v[k] for k in range(dim)) % p for r in range(dim)
            )
            vals.append(self.from_fp_coords(w))
        table = FnTable(self, self, vals)
        if not table.is_bijection():
            raise NotAdditive("matrix is singular over F_p")
        return table

    def random_automorphism(self, rng) -> FnTable:
        p = self.uniform_char()
        dim = self.fp_dim
        while True:
            mat = [[rng.randrange(p) for _ in range(dim)] for _ in range(dim)]
            if _fp_matrix_invertible(mat, p):
                return self.automorphism_from_matrix(mat)


def _fp_matrix_invertible(mat, p) -> bool:
    m = [row[:] for row in mat]
    dim = len(m)
    for col in range(dim):
        piv = next((r for r in range(col, dim) if m[r][col] % p), None)
        if piv is None:
            return False
        m[col], m[piv] = m[piv], m[col]
        inv = pow(m[col][col], p - 2, p)
        m[col] = [(c * inv) % p for c in m[col]]
        for r in range(dim):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[col])]
    return True


def is_additive(group: AbGroup, table: FnTable) -> bool:
    if table.domain.carrier_key() != group.carrier_key():
        raise ShapeMismatch("table is not over the given group")
    n = group.size
    vals = table.values
    cod = table.codomain
    for i in range(n):
        for j in range(n):
            if vals[group.add_idx(i, j)] != cod.add_idx(vals[i], vals[j]):
                return False
    return True


class Cocycle:
    """Dense table A x A -> B; stored whole so identity checks can scan it."""

    __slots__ = ("A", "B", "values")

    def __init__(self, A: AbGroup, B: AbGroup, values):
        values = tuple(values)
        if len(values) != A.size * A.size:
            raise ShapeMismatch("cocycle table must cover all of A x A")
        self.A = A
        self.B = B
        self.values = values

    @classmethod
    def from_func(cls, A, B, fn):
        vals = [
            B.index_of(fn(A.element_at(i), A.element_at(j)))
            for i in range(A.size)
            for j in range(A.size)
        ]
        return cls(A, B, vals)

    @classmethod
    def zero(cls, A, B):
        return cls(A, B, [0] * (A.size * A.size))

    @classmethod
    def heisenberg(cls, K: Field) -> "Cocycle":
        """c((x,y),(x',y')) = x*y' on A = K^2, B = K."""
        A = AbGroup.product(K, K)
        B = AbGroup.of_field(K)
        vals = []
        for i in range(A.size):
            x, _ = A.split(i)
            for j in range(A.size):
                _, y2 = A.split(j)
                vals.append(K.mul_idx(x, y2))
        return cls(A, B, vals)

    @classmethod
    def bilinear(cls, A: AbGroup, B: AbGroup, coeffs) -> "Cocycle":
        """Bilinear map on F_p coordinates; bilinearity makes it a cocycle.

        coeffs[k][i][j] is the contribution of x_i * y_j to output coord k.
        """
        p = A.uniform_char()
        if B.uniform_char() != p:
            raise ShapeMismatch("bilinear cocycles need one characteristic")
        da, db = A.fp_dim, B.fp_dim
        vals = []
        for i in range(A.size):
            x = A.fp_coords(i)
            for j in range(A.size):
                y = A.fp_coords(j)
                out = tuple(
                    sum(
                        coeffs[k][r][s] * x[r] * y[s]
                        for r in range(da)
                        for s in range(da)
                    )
                    % p
                    for k in range(db)
                )
                vals.append(B.from_fp_coords(out))
        return cls(A, B, vals)

    @classmethod
    def coboundary(cls, A: AbGroup, B: AbGroup, f_table) -> "Cocycle":
        """c(a,a') = f(a) + f(a') - f(a+a') for an arbitrary f: A -> B."""
        vals = []
        for i in range(A.size):
            for j in range(A.size):
                s = A.add_idx(i, j)
                vals.append(
                    B.add_idx(
                        B.add_idx(f_table[i], f_table[j]), B.neg_idx(f_table[s])
                    )
                )
        return cls(A, B, vals)

    def shifted_by(self, other: "Cocycle") -> "Cocycle":
        if (self.A, self.B) != (other.A, other.B):
            raise ShapeMismatch("cocycles over different groups")
        B = self.B
        return Cocycle(
            self.A, B, [B.add_idx(x, y) for x, y in zip(self.values, other.values)]
        )

    def value_idx(self, i: int, j: int) -> int:
        return self.values[i * self.A.size + j]

    def key(self):
        return (self.A.carrier_key(), self.B.carrier_key(), self.values)


class ExtGroup:
    """Validated central extension; also a carrier for FnTable."""

    __slots__ = ("A", "B", "cocycle", "size", "identity_idx", "_cayley", "_coc_arr")

    def __init__(self, A: AbGroup, B: AbGroup, cocycle: Cocycle):
        self.A = A
        self.B = B
        self.cocycle = cocycle
        self.size = A.size * B.size
        # identity is (0, -c(0,0)); the cocycle need not be normalized
        self.identity_idx = B.neg_idx(cocycle.value_idx(0, 0))
        self._cayley = None
        self._coc_arr = array("i", cocycle.values)

    def carrier_key(self):
        return ("ext", self.cocycle.key())

    def __eq__(self, other):
        return isinstance(other, ExtGroup) and self.carrier_key() == other.carrier_key()

    def __hash__(self):
        return hash(self.carrier_key())

    def __repr__(self):
        return f"ExtGroup({self.A!r} by {self.B!r}, {self.size} elements)"

    def element_at(self, idx: int):
        ia, ib = divmod(idx, self.B.size)
        return (self.A.element_at(ia), self.B.element_at(ib))

    def index_of(self, pair) -> int:
        a, b = pair
        return self.A.index_of(a) * self.B.size + self.B.index_of(b)

    def elements(self):
        for i in range(self.size):
            yield self.element_at(i)

    def mul_idx(self, g: int, h: int) -> int:
        A, B = self.A, self.B
        ga, gb = divmod(g, B.size)
        ha, hb = divmod(h, B.size)
        return A.add_idx(ga, ha) * B.size + B.add_idx(
            B.add_idx(gb, hb), self.cocycle.value_idx(ga, ha)
        )

    def inv_idx(self, g: int) -> int:
        A, B = self.A, self.B
        ga, gb = divmod(g, B.size)
        na = A.neg_idx(ga)
        _, eb = divmod(self.identity_idx, B.size)
        nb = B.add_idx(eb, B.neg_idx(B.add_idx(gb, self.cocycle.value_idx(ga, na))))
        return na * B.size + nb

    def tables(self):
        """(na, nb, add_a, add_b, coc) flat tables for the scan kernels."""
        A, B = self.A, self.B
        return A.size, B.size, A.add_table(), B.add_table(), self._coc_arr

    def cayley(self):
        if self._cayley is None:
            n = self.size
            self._cayley = tuple(
                self.mul_idx(i, j) for i in range(n) for j in range(n)
            )
        return self._cayley

    def central_fiber_is_central(self) -> bool:
        """Do all (0, b) commute with everything?  True for valid cocycles."""
        B = self.B
        for ib in range(B.size):
            g = ib  # index of (0, b)
            for h in range(self.size):
                if self.mul_idx(g, h) != self.mul_idx(h, g):
                    return False
        return True


def ext_build(A: AbGroup, B: AbGroup, c: Cocycle) -> ExtGroup:
    """Validate the cocycle identity and wrap the extension.

    A failing triple is reported through NotACocycle in enumeration order;
    the identity is checked instead of raw associativity because the two
    are equivalent and the scan is |A|^3 rather than |A x B|^3.
    """
    if c.A != A or c.B != B:
        raise ShapeMismatch("cocycle is not over the given groups")
    na, nb, add_a, add_b, coc = A.size, B.size, A.add_table(), B.add_table(), c.values
    bad = kernels.ext_cocycle_failure(na, nb, add_a, add_b, coc)
    if bad != -1:
        ij, a3 = divmod(bad, na)
        a1, a2 = divmod(ij, na)
        raise NotACocycle(
            "cocycle identity fails",
            witness=(A.element_at(a1), A.element_at(a2), A.element_at(a3)),
        )
    E = ExtGroup(A, B, c)
    assert E.central_fiber_is_central(), "kernel fiber is not central"
    return E


class TriangularMap:
    """(alpha, beta, gamma) with alpha, beta additive bijections."""

    __slots__ = ("alpha", "beta", "gamma")

    def __init__(self, alpha: FnTable, beta: FnTable, gamma: FnTable, check=True):
        self.alpha = alpha
        self.beta = beta
        self.gamma = gamma
        if check:
            if not (alpha.is_bijection() and beta.is_bijection()):
                raise NotAdditive("alpha and beta must be bijections")
            if not is_additive(alpha.domain, alpha):
                raise NotAdditive("alpha is not additive")
            if not is_additive(beta.domain, beta):
                raise NotAdditive("beta is not additive")

    @classmethod
    def identity(cls, E: ExtGroup) -> "TriangularMap":
        zero_gamma = FnTable(E.A, E.B, [E.B.zero_idx] * E.A.size)
        return cls(FnTable.identity(E.A), FnTable.identity(E.B), zero_gamma, check=False)

    @classmethod
    def random(cls, E: ExtGroup, rng, additive_gamma=False) -> "TriangularMap":
        alpha = E.A.random_automorphism(rng)
        beta = E.B.random_automorphism(rng)
        if additive_gamma:
            p = E.A.uniform_char()
            da, db = E.A.fp_dim, E.B.fp_dim
            mat = [[rng.randrange(p) for _ in range(da)] for _ in range(db)]
            vals = [
                E.B.from_fp_coords(
                    tuple(
                        sum(mat[r][k] * c for k, c in enumerate(E.A.fp_coords(i))) % p
                        for r in range(db)
                    )
                )
                for i in range(E.A.size)
            ]
        else:
            vals = [rng.randrange(E.B.size) for _ in range(E.A.size)]
        gamma = FnTable(E.A, E.B, vals)
        return cls(alpha, beta, gamma, check=False)

    def _check_shapes(self, E: ExtGroup):
        if (
            self.alpha.domain.carrier_key() != E.A.carrier_key()
            or self.beta.domain.carrier_key() != E.B.carrier_key()
            or self.gamma.domain.carrier_key() != E.A.carrier_key()
            or self.gamma.codomain.carrier_key() != E.B.carrier_key()
        ):
            raise ShapeMismatch("triangular map does not fit the extension")


def psi_from(E: ExtGroup, t: TriangularMap) -> FnTable:
    """The bijection (a,b) -> (alpha(a), beta(b) + gamma(a)) on E."""
    t._check_shapes(E)
    B = E.B
    nb = B.size
    vals = []
    for g in range(E.size):
        ia, ib = divmod(g, nb)
        vals.append(
            t.alpha.values[ia] * nb + B.add_idx(t.beta.values[ib], t.gamma.values[ia])
        )
    table = FnTable(E, E, vals)
    assert table.is_bijection(), "triangular maps are bijections by construction"
    return table


def homcond_check(E: ExtGroup, t: TriangularMap) -> bool:
    """Decide the automorphism condition by scanning base pairs only.

    Contract (tested): equals the brute-force check that psi_from(E, t)
    preserves every product.
    """
    t._check_shapes(E)
    na, nb, add_a, add_b, coc = E.tables()
    return (
        kernels.homcond_failure(
            na, nb, add_a, add_b, coc,
            t.alpha.values, t.beta.values, t.gamma.values,
        )
        == -1
    )


def psi_preserves_products(E: ExtGroup, psi: FnTable) -> bool:
    """Brute-force oracle: check psi(gh) = psi(g)psi(h) on every pair."""
    na, nb, add_a, add_b, coc = E.tables()
    return kernels.ext_hom_failure(psi.values, na, nb, add_a, add_b, coc) == -1
