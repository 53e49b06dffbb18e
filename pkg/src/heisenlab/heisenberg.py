"""The group H(K) of upper unitriangular 3x3 matrices over a field K.

Elements are coordinate triples (a, b, c) standing for the matrix with
first row (1, a, c), second row (0, 1, b).  The group law, inverse and
commutator are the closed formulas

    (a,b,c) * (a',b',c') = (a+a', b+b', c+c'+a*b')
    (a,b,c)^-1           = (-a, -b, -c+a*b)
    [(a,b,c),(a',b',c')] = (0, 0, a*b' - b*a')

with the commutator convention [g,h] = g^-1 h^-1 g h.  Finite groups
enumerate deterministically: the packed index of (a,b,c) is
(ia*q + ib)*q + ic over the field's own enumeration order.
"""

from __future__ import annotations

import functools

from . import kernels
from .errors import FieldMismatch, InfiniteField, TooLarge
from .fields import Field, FieldElement

MAX_GROUP_ORDER = 1 << 16
_DENSE_CAYLEY_LIMIT = 2048  # cache n*n multiplication tables below this order
_CENTER_FULL_SCAN_LIMIT = 1024


class HElement:
    """Immutable triple (a, b, c) over a shared field."""

    __slots__ = ("a", "b", "c")

    def __init__(self, a: FieldElement, b: FieldElement, c: FieldElement):
        if a.field != b.field or a.field != c.field:
            raise FieldMismatch("coordinates from different fields")
        self.a = a
        self.b = b
        self.c = c

    @property
    def field(self) -> Field:
        return self.a.field

    def __mul__(self, other: "HElement") -> "HElement":
        return h_mul(self, other)

    def inverse(self) -> "HElement":
        return h_inv(self)

    def __eq__(self, other):
        return (
            isinstance(other, HElement)
            and self.a == other.a
            and self.b == other.b
            and self.c == other.c
        )

    def __hash__(self):
        return hash((self.a, self.b, self.c))

    def is_central(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def __repr__(self):
        return f"({self.a},{self.b},{self.c})"

    def to_json(self):
        f = self.field
        return {
            "a": f.element_to_json(self.a),
            "b": f.element_to_json(self.b),
            "c": f.element_to_json(self.c),
        }


def h_mul(g: HElement, h: HElement) -> HElement:
    if g.field != h.field:
        raise FieldMismatch("product of elements over different fields")
    return HElement(g.a + h.a, g.b + h.b, g.c + h.c + g.a * h.b)


def h_inv(g: HElement) -> HElement:
    return HElement(-g.a, -g.b, -g.c + g.a * g.b)


def h_comm(g: HElement, h: HElement) -> HElement:
    if g.field != h.field:
        raise FieldMismatch("commutator of elements over different fields")
    zero = g.field.zero
    return HElement(zero, zero, g.a * h.b - g.b * h.a)


def h_comm_definitional(g: HElement, h: HElement) -> HElement:
    """g^-1 h^-1 g h computed through h_mul/h_inv; test oracle for h_comm."""
    return h_mul(h_mul(h_inv(g), h_inv(h)), h_mul(g, h))


class HGroup:
    """H(K) with its designated generators u = (1,0,0) and v = (0,1,0)."""

    __slots__ = ("field", "identity", "u", "v", "_cayley", "_center")

    def __init__(self, field: Field):
        self.field = field
        zero, one = field.zero, field.one
        self.identity = HElement(zero, zero, zero)
        self.u = HElement(one, zero, zero)
        self.v = HElement(zero, one, zero)
        self._cayley = None
        self._center = None

    # -- carrier protocol -------------------------------------------------

    @property
    def size(self) -> int:
        if not self.field.is_finite:
            raise InfiniteField("H(Q) is not enumerable")
        return self.field.order**3

    @property
    def order(self):
        return self.size if self.field.is_finite else None

    def carrier_key(self):
        return ("heis", self.field.carrier_key())

    def __eq__(self, other):
        return isinstance(other, HGroup) and self.field == other.field

    def __hash__(self):
        return hash(self.carrier_key())

    def __repr__(self):
        return f"HGroup({self.field.short_name()})"

    def element(self, a, b, c) -> HElement:
        f = self.field
        return HElement(f.element(a), f.element(b), f.element(c))

    def enc(self, g: HElement) -> int:
        q = self.field.order
        return (g.a.key * q + g.b.key) * q + g.c.key

    def element_at(self, idx: int) -> HElement:
        q = self.field.order
        ab, ic = divmod(idx, q)
        ia, ib = divmod(ab, q)
        f = self.field
        return HElement(f.element_at(ia), f.element_at(ib), f.element_at(ic))

    def index_of(self, g: HElement) -> int:
        if g.field != self.field:
            raise FieldMismatch("element of a different group")
        return self.enc(g)

    def elements(self):
        """All |K|^3 elements in the fixed enumeration order."""
        if not self.field.is_finite:
            raise InfiniteField("H(Q) is not enumerable")
        if self.size > MAX_GROUP_ORDER:
            raise TooLarge(f"enumeration limited to {MAX_GROUP_ORDER} elements")
        for i in range(self.size):
            yield self.element_at(i)

    # -- packed-index operations -------------------------------------------

    def field_tables(self):
        add, mul, neg, _ = self.field.tables()
        return self.field.order, add, mul, neg

    def mul_idx(self, i: int, j: int) -> int:
        table = self.cayley()
        if table is not None:
            return table[i * self.size + j]
        q, add, mul, _ = self.field_tables()
        return kernels.heis_mul(i, j, q, add, mul)

    def inv_idx(self, i: int) -> int:
        q, add, mul, neg = self.field_tables()
        return kernels.heis_inv(i, q, add, mul, neg)

    def comm_idx(self, i: int, j: int) -> int:
        q, add, mul, neg = self.field_tables()
        return kernels.heis_comm(i, j, q, add, mul, neg)

    def cayley(self):
        """Dense n*n multiplication table, or None when the group is too big."""
        if self._cayley is not None:
            return self._cayley
        n = self.size
        if n > _DENSE_CAYLEY_LIMIT:
            return None
        q, add, mul, _ = self.field_tables()
        table = [0] * (n * n)
        hm = kernels.heis_mul
        for i in range(n):
            row = i * n
            for j in range(n):
                table[row + j] = hm(i, j, q, add, mul)
        from array import array

        self._cayley = array("i", table)
        return self._cayley

    # -- structure -----------------------------------------------------------

    def center(self):
        """The elements (0, 0, c), verified central by exhaustive search."""
        if not self.field.is_finite:
            raise InfiniteField("center enumeration needs a finite field")
        if self._center is not None:
            return self._center
        f = self.field
        zero = f.zero
        claimed = tuple(
            HElement(zero, zero, f.element_at(i)) for i in range(f.order)
        )
        n = self.size
        q, add, mul, neg = self.field_tables()
        comm = kernels.heis_comm
        if n <= _CENTER_FULL_SCAN_LIMIT:
            found = []
            for i in range(n):
                if all(comm(i, j, q, add, mul, neg) == 0 for j in range(n)):
                    found.append(i)
            assert found == [self.enc(g) for g in claimed], "center scan mismatch"
            # the center must also be exactly the set of commutator values
            values = {comm(i, j, q, add, mul, neg) for i in range(n) for j in range(n)}
            assert values == set(range(f.order)), "commutator values miss the center"
        else:
            # [g,u] and [g,v] pin down both off-center coordinates, so two
            # checks per element are an exhaustive centrality test
            ue, ve = self.enc(self.u), self.enc(self.v)
            for i in range(n):
                central = comm(i, ue, q, add, mul, neg) == 0 and (
                    comm(i, ve, q, add, mul, neg) == 0
                )
                assert central == (self.element_at(i).is_central()), i
        self._center = claimed
        return claimed

    def generated_by_uv(self) -> bool:
        """Does the closure of {u, v} under products reach the whole group?"""
        closure = self.uv_word_table()
        return len(closure) == self.size

    def uv_word_table(self):
        """BFS parents: element index -> (parent index, generator index).

        Generator index 0 is u, 1 is v; the identity maps to None.  Lets a
        candidate map on {u, v} extend multiplicatively to the closure.
        """
        e = self.enc(self.identity)
        gens = (self.enc(self.u), self.enc(self.v))
        parent = {e: None}
        queue = [e]
        pos = 0
        while pos < len(queue):
            g = queue[pos]
            pos += 1
            for gi, gen in enumerate(gens):
                h = self.mul_idx(g, gen)
                if h not in parent:
                    parent[h] = (g, gi)
                    queue.append(h)
        return parent

    def element_order(self, g: HElement) -> int:
        if not self.field.is_finite:
            raise InfiniteField("element orders need a finite field")
        n = 1
        x = g
        while x != self.identity:
            x = h_mul(x, g)
            n += 1
        return n


@functools.lru_cache(maxsize=None)
def hgroup(field: Field) -> HGroup:
    """Shared HGroup instance per field, so caches are reused."""
    return HGroup(field)


def center(G: HGroup):
    return G.center()


def enumerate_group(G: HGroup):
    return G.elements()
