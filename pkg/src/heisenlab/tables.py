"""Dense value tables for maps between finite enumerated carriers.

A carrier is anything with a fixed deterministic enumeration: a finite
field, a Heisenberg group, an abelian group, or a cocycle extension.  The
carrier protocol is ``size``, ``element_at(i)``, ``index_of(x)`` and
``carrier_key()``; an FnTable stores one codomain index per domain index.
"""

from __future__ import annotations

from .errors import ShapeMismatch


class FnTable:
    """Exhaustive value table for a map between two finite carriers."""

    __slots__ = ("domain", "codomain", "values")

    def __init__(self, domain, codomain, values):
        values = tuple(values)
        if len(values) != domain.size:
            raise ShapeMismatch(
                f"table has {len(values)} entries for a domain of size {domain.size}"
            )
        n = codomain.size
        for i, v in enumerate(values):
            if not 0 <= v < n:
                raise ShapeMismatch(f"entry {i} maps outside the codomain: {v}")
        self.domain = domain
        self.codomain = codomain
        self.values = values

    @classmethod
    def from_func(cls, domain, codomain, fn):
        vals = [codomain.index_of(fn(domain.element_at(i))) for i in range(domain.size)]
        return cls(domain, codomain, vals)

    @classmethod
    def identity(cls, carrier):
        return cls(carrier, carrier, range(carrier.size))

    def __call__(self, x):
        return self.codomain.element_at(self.values[self.domain.index_of(x)])

    def apply_idx(self, i: int) -> int:
        return self.values[i]

    def compose(self, inner: "FnTable") -> "FnTable":
        """self after inner: (self.compose(g))(x) = self(g(x))."""
        if inner.codomain.carrier_key() != self.domain.carrier_key():
            raise ShapeMismatch("composition carriers do not line up")
        return FnTable(inner.domain, self.codomain, [self.values[v] for v in inner.values])

    def is_bijection(self) -> bool:
        return (
            self.domain.size == self.codomain.size
            and len(set(self.values)) == self.domain.size
        )

    def is_injective(self) -> bool:
        return len(set(self.values)) == self.domain.size

    def inverse(self) -> "FnTable":
        if not self.is_bijection():
            raise ShapeMismatch("only bijections invert")
        inv = [0] * self.domain.size
        for i, v in enumerate(self.values):
            inv[v] = i
        return FnTable(self.codomain, self.domain, inv)

    def key(self):
        return (self.domain.carrier_key(), self.codomain.carrier_key(), self.values)

    def __eq__(self, other):
        return isinstance(other, FnTable) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FnTable({self.domain!r} -> {self.codomain!r}, {len(self.values)} entries)"


def pointwise_table_add(t1: FnTable, t2: FnTable, add_idx) -> FnTable:
    """Pointwise sum of two tables into a common additive codomain."""
    if t1.domain.carrier_key() != t2.domain.carrier_key():
        raise ShapeMismatch("tables have different domains")
    if t1.codomain.carrier_key() != t2.codomain.carrier_key():
        raise ShapeMismatch("tables have different codomains")
    vals = [add_idx(a, b) for a, b in zip(t1.values, t2.values)]
    return FnTable(t1.domain, t1.codomain, vals)
