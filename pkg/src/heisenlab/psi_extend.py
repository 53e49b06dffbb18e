"""Extending quadratic-additive maps from a subfield to the whole field.

A quadratic-additive map with coefficient e satisfies

    psi(x + y) = psi(x) + psi(y) + e*x*y

on its domain.  Given such a map on an embedded subfield S of M and a
basis of an S-linear complement L, the extension is

    Psi(k + l) = psi(k) + (e/2)*l^2 + e*k*l      (odd characteristic)
    Psi(k + l) = psi(k)                          (characteristic 2, e = 0)

for k in S and l in span(L).  In characteristic 2 a nonzero e is
rejected outright: 0 = psi(1+1) = 2*psi(1) + e forces e = 0 whenever the
identity holds on S, so no extension problem with e != 0 exists.

The complement is an input rather than an internal choice, because the
extension genuinely depends on it and callers must be able to document
which complement produced their tables.
"""

from __future__ import annotations

from . import kernels
from .errors import BadComplement, Char2NonzeroCoeff
from .fields import Field, FieldElement


class QuadAdditiveMap:
    """A value table on a +-closed subset of M satisfying the identity."""

    __slots__ = ("field", "coeff", "domain", "_values")

    def __init__(self, field: Field, coeff: FieldElement, domain, values, check=True):
        self.field = field
        self.coeff = field.element(coeff)
        self.domain = tuple(sorted(domain))
        if isinstance(values, dict):
            self._values = {int(k): int(v) for k, v in values.items()}
        else:
            self._values = dict(zip(self.domain, values))
        if set(self._values) != set(self.domain):
            raise ValueError("values must cover exactly the domain")
        if check:
            self._verify()

    @classmethod
    def on_field(cls, field: Field, coeff, fn, check=True):
        coeff = field.element(coeff)
        vals = {i: field.index_of(fn(field.element_at(i))) for i in range(field.order)}
        return cls(field, coeff, range(field.order), vals, check=check)

    @classmethod
    def from_fn_values(cls, field, coeff, values, check=True):
        return cls(field, coeff, range(field.order), values, check=check)

    @property
    def is_total(self) -> bool:
        return len(self.domain) == self.field.order

    def value_idx(self, i: int) -> int:
        return self._values[i]

    def __call__(self, x: FieldElement) -> FieldElement:
        return self.field.element_at(self._values[self.field.index_of(x)])

    def values_list(self):
        """Values in domain order (full enumeration order when total)."""
        return [self._values[i] for i in self.domain]

    def _verify(self):
        F = self.field
        if 0 not in self._values or self._values[0] != 0:
            raise ValueError("the map must vanish at zero")
        if self.is_total and F.order <= 256:
            add, mul, _, _ = F.tables()
            vals = [self._values[i] for i in range(F.order)]
            bad = kernels.quad_identity_failure(vals, self.coeff.key, F.order, add, mul)
            if bad != -1:
                x, y = divmod(bad, F.order)
                raise ValueError(
                    f"identity fails at ({F.element_at(x)}, {F.element_at(y)})"
                )
            return
        ek = self.coeff.key
        for x in self.domain:
            for y in self.domain:
                s = F.add_idx(x, y)
                if s not in self._values:
                    raise ValueError("domain is not closed under addition")
                rhs = F.add_idx(
                    F.add_idx(self._values[x], self._values[y]),
                    F.mul_idx(F.mul_idx(x, y), ek),
                )
                if self._values[s] != rhs:
                    raise ValueError(
                        f"identity fails at ({F.element_at(x)}, {F.element_at(y)})"
                    )

    def restricted_to(self, indices):
        sub = tuple(sorted(indices))
        return QuadAdditiveMap(
            self.field, self.coeff, sub, {i: self._values[i] for i in sub}, check=False
        )

    def agrees_with(self, other: "QuadAdditiveMap") -> bool:
        common = set(self.domain) & set(other.domain)
        return all(self._values[i] == other._values[i] for i in common)


def span_of(field: Field, scalars, basis):
    """All sums of scalar multiples of the basis; scalars given by index."""
    span = {0}
    for b in basis:
        bk = field.index_of(b)
        span = {
            field.add_idx(s, field.mul_idx(sc, bk)) for s in span for sc in scalars
        }
    return span


def extend_psi(psi: QuadAdditiveMap, basis) -> QuadAdditiveMap:
    """Extend psi from its +-closed domain S to all of M along a complement.

    S must be the embedded image of a field (so it is multiplicatively
    closed and contains 1), and span(basis) an S-complement of S in M.
    The output satisfies the identity on every pair of M and restricts to
    psi on S exactly.
    """
    M = psi.field
    coeff = psi.coeff
    if M.characteristic == 2 and not coeff.is_zero():
        raise Char2NonzeroCoeff(
            "no extension problem exists: the identity on S forces e = 0"
        )
    S = psi.domain
    sset = set(S)
    span = span_of(M, S, basis)
    if len(span) != len(S) ** len(basis):
        raise BadComplement("basis is linearly dependent over S")
    meet = span & sset
    if meet != {0}:
        raise BadComplement(
            "span(basis) meets S beyond zero",
            witness=tuple(M.element_at(i) for i in sorted(meet) if i != 0),
        )
    if len(S) * len(span) != M.order:
        raise BadComplement("S plus the span does not fill the field")

    values = {}
    if M.characteristic != 2:
        half = M.one / M.element(2)
        he = (coeff * half).key
        ck = coeff.key
        for k in S:
            pk = psi.value_idx(k)
            for l in span:
                m = M.add_idx(k, l)
                val = M.add_idx(
                    M.add_idx(pk, M.mul_idx(he, M.mul_idx(l, l))),
                    M.mul_idx(ck, M.mul_idx(k, l)),
                )
                if m in values:
                    raise BadComplement("decomposition k + l is not unique")
                values[m] = val
    else:
        for k in S:
            pk = psi.value_idx(k)
            for l in span:
                m = M.add_idx(k, l)
                if m in values:
                    raise BadComplement("decomposition k + l is not unique")
                values[m] = pk
    out = QuadAdditiveMap(M, coeff, range(M.order), values, check=True)
    assert out.agrees_with(psi), "extension must restrict to the input"
    return out
