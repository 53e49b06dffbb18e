"""Exact field arithmetic: prime fields F_p, extensions F_{p^n}, and Q.

Finite fields are represented by coefficient vectors over F_p modulo a
monic irreducible polynomial.  Enumeration order is part of the public
contract: elements are listed lexicographically by coefficient vector
(c0, ..., c_{n-1}), constant term first and most significant, so the
index of a vector is sum(c_i * p^(n-1-i)).  All dense tables index by
this order.  Rationals use Fraction, so no overflow can fake a
counterexample in sampled checks.
"""

from __future__ import annotations

import functools
import itertools
from array import array
from fractions import Fraction

from .errors import (
    CharacteristicMismatch,
    InfiniteField,
    NotAHomomorphism,
    NotInjective,
    NotPrime,
    ReducibleModulus,
    UnsupportedSize,
)
from .tables import FnTable

MAX_FINITE_ORDER = 1 << 16
DENSE_TABLE_LIMIT = 256  # build q*q lookup tables only below this order
DEFAULT_MODULUS_MAX_ORDER = 49  # built-in moduli cover p^n up to here


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# polynomial arithmetic over F_p (dense coefficient lists, c0 first)
# ---------------------------------------------------------------------------

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_add(a, b, p):
    m = max(len(a), len(b))
    out = [0] * m
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _poly_trim(out)


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _poly_trim(out)


def _poly_divmod(a, b, p):
    """Quotient and remainder of dense polynomials over F_p; b monic-izable."""
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    if db < 0:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = pow(b[-1], p - 2, p) if b[-1] != 1 else 1
    q = [0] * max(da - db + 1, 0)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        coef = (a[-1] * lead_inv) % p
        q[shift] = coef
        for i, cb in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * cb) % p
        _poly_trim(a)
    return _poly_trim(q), a


def _poly_mod(a, m, p):
    return _poly_divmod(a, m, p)[1]


def _poly_xgcd(a, b, p):
    """Extended gcd over F_p[t]: returns (g, s, t) with s*a + t*b = g."""
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_add(s0, [(-c) % p for c in _poly_mul(q, s1, p)], p)
        t0, t1 = t1, _poly_add(t0, [(-c) % p for c in _poly_mul(q, t1, p)], p)
    return r0, s0, t0


def poly_is_irreducible(m, p) -> bool:
    """Trial division by every monic polynomial of degree <= deg(m)/2."""
    m = _poly_trim(list(m))
    deg = len(m) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for lower in itertools.product(range(p), repeat=d):
            cand = list(lower) + [1]
            if not _poly_mod(m, cand, p):
                return False
    return True


@functools.lru_cache(maxsize=None)
def default_modulus(p: int, n: int):
    """Smallest (lexicographic on (c0..cn)) monic irreducible of degree n.

    Deterministic by construction, so element encodings reproduce across
    runs.  Only provided while p^n stays within the built-in range.
    """
    if p**n > DEFAULT_MODULUS_MAX_ORDER:
        raise UnsupportedSize(
            f"no built-in modulus for p^n = {p**n}; supply one explicitly"
        )
    for lower in itertools.product(range(p), repeat=n):
        cand = list(lower) + [1]
        if poly_is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found; unreachable")


# ---------------------------------------------------------------------------
# fields and elements
# ---------------------------------------------------------------------------

class FieldElement:
    """Immutable element of a Field.

    Finite case: ``key`` is the enumeration index.  Rational case: ``key``
    is a Fraction (lowest terms, positive denominator).
    """

    __slots__ = ("field", "key")

    def __init__(self, field, key):
        self.field = field
        self.key = key

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise CharacteristicMismatch("elements of different fields")
            return other
        return self.field.element(other)

    def __add__(self, other):
        other = self._coerce(other)
        f = self.field
        if f.is_finite:
            return FieldElement(f, f.add_idx(self.key, other.key))
        return FieldElement(f, self.key + other.key)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        if f.is_finite:
            return FieldElement(f, f.neg_idx(self.key))
        return FieldElement(f, -self.key)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        f = self.field
        if f.is_finite:
            return FieldElement(f, f.mul_idx(self.key, other.key))
        return FieldElement(f, self.key * other.key)

    __rmul__ = __mul__

    def inverse(self):
        f = self.field
        if f.is_finite:
            return FieldElement(f, f.inv_idx(self.key))
        if self.key == 0:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(f, 1 / self.key)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return self == self.field.zero

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.field == other.field
            and self.key == other.key
        )

    def __hash__(self):
        return hash((self.field.carrier_key(), self.key))

    def coeffs(self):
        return self.field.coeffs_of(self)

    def __str__(self):
        f = self.field
        if not f.is_finite:
            return str(self.key)
        if f.n == 1:
            return str(self.key)
        terms = []
        for i, c in enumerate(self.coeffs()):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                t = "t" if i == 1 else f"t^{i}"
                terms.append(t if c == 1 else f"{c}{t}")
        return "+".join(terms) if terms else "0"

    def __repr__(self):
        return f"{self.field.short_name()}({self})"


class Field:
    """A prime field F_p, an extension F_p[t]/(m), or the rationals."""

    __slots__ = (
        "kind", "p", "n", "modulus", "order", "characteristic",
        "_add", "_mul", "_neg", "_inv", "_zero", "_one",
    )

    def __init__(self, kind, p=None, n=None, modulus=None):
        if kind == "rationals":
            self.kind, self.p, self.n, self.modulus = kind, None, None, None
            self.order = None
            self.characteristic = 0
        elif kind == "prime":
            if not is_prime(p):
                raise NotPrime(f"{p} is not prime")
            if p > MAX_FINITE_ORDER:
                raise UnsupportedSize(
                    f"finite enumeration limited to order {MAX_FINITE_ORDER}"
                )
            self.kind, self.p, self.n, self.modulus = kind, p, 1, None
            self.order = p
            self.characteristic = p
        elif kind == "extension":
            if not is_prime(p):
                raise NotPrime(f"{p} is not prime")
            if n is None or n < 2:
                raise UnsupportedSize("extension degree must be at least 2")
            if p**n > MAX_FINITE_ORDER:
                raise UnsupportedSize(
                    f"finite enumeration limited to order {MAX_FINITE_ORDER}"
                )
            if modulus is None:
                modulus = default_modulus(p, n)
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise ReducibleModulus(
                    f"modulus must be monic of degree {n}: got {list(modulus)}"
                )
            if not poly_is_irreducible(modulus, p):
                raise ReducibleModulus(f"{list(modulus)} is reducible over F_{p}")
            self.kind, self.p, self.n, self.modulus = kind, p, n, modulus
            self.order = p**n
            self.characteristic = p
        else:
            raise ValueError(f"unknown field kind {kind!r}")
        self._add = self._mul = self._neg = self._inv = None
        self._zero = FieldElement(self, 0 if self.is_finite else Fraction(0))
        self._one = FieldElement(self, self.index_of_coeffs((1,) + (0,) * (self.n - 1))
                                 if self.is_finite else Fraction(1))

    # -- constructors ---------------------------------------------------

    @staticmethod
    def prime(p: int) -> "Field":
        return Field("prime", p)

    @staticmethod
    def extension(p: int, n: int, modulus=None) -> "Field":
        return Field("extension", p, n, modulus)

    @staticmethod
    def rationals() -> "Field":
        return Field("rationals")

    # -- identity ---------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind != "rationals"

    def carrier_key(self):
        return ("field", self.kind, self.p, self.n, self.modulus)

    def __eq__(self, other):
        return isinstance(other, Field) and self.carrier_key() == other.carrier_key()

    def __hash__(self):
        return hash(self.carrier_key())

    def short_name(self) -> str:
        if self.kind == "rationals":
            return "Q"
        return f"F{self.order}"

    def __repr__(self):
        if self.kind == "extension":
            return f"Field(F_{self.order}, modulus={list(self.modulus)})"
        return f"Field({self.short_name()})"

    # -- element encoding --------------------------------------------------

    @property
    def zero(self) -> FieldElement:
        return self._zero

    @property
    def one(self) -> FieldElement:
        return self._one

    def index_of_coeffs(self, coeffs) -> int:
        idx = 0
        for c in coeffs:
            idx = idx * self.p + (c % self.p)
        return idx

    def coeffs_at(self, idx: int):
        out = []
        for _ in range(self.n):
            out.append(idx % self.p)
            idx //= self.p
        out.reverse()
        # stored big-endian (c0 most significant); undo to (c0, ..., c_{n-1})
        return tuple(out)

    def coeffs_of(self, x: FieldElement):
        if not self.is_finite:
            raise InfiniteField("rationals have no coefficient vector")
        return self.coeffs_at(x.key)

    def element(self, value) -> FieldElement:
        """Coerce an int (multiple of 1), coefficient list, or Fraction."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise CharacteristicMismatch("element of a different field")
            return value
        if not self.is_finite:
            return FieldElement(self, Fraction(value))
        if isinstance(value, int):
            return self.from_coeffs((value % self.p,) + (0,) * (self.n - 1))
        return self.from_coeffs(value)

    def from_coeffs(self, coeffs) -> FieldElement:
        coeffs = tuple(c % self.p for c in coeffs)
        if len(coeffs) != self.n:
            raise ValueError(f"expected {self.n} coefficients, got {len(coeffs)}")
        return FieldElement(self, self.index_of_coeffs(coeffs))

    # -- carrier protocol ---------------------------------------------------

    @property
    def size(self) -> int:
        if not self.is_finite:
            raise InfiniteField("the rationals are not enumerable")
        return self.order

    def element_at(self, idx: int) -> FieldElement:
        if not 0 <= idx < self.size:
            raise IndexError(idx)
        return FieldElement(self, idx)

    def index_of(self, x: FieldElement) -> int:
        if not self.is_finite:
            raise InfiniteField("the rationals are not enumerable")
        if x.field != self:
            raise CharacteristicMismatch("element of a different field")
        return x.key

    def elements(self):
        """All elements in the fixed lexicographic enumeration order."""
        for i in range(self.size):
            yield FieldElement(self, i)

    # -- index arithmetic ----------------------------------------------------

    def _ensure_tables(self):
        if self._add is not None:
            return True
        if self.order > DENSE_TABLE_LIMIT:
            return False
        q, p, n = self.order, self.p, self.n
        if self.kind == "prime":
            self._add = array("i", ((i + j) % p for i in range(q) for j in range(q)))
            self._mul = array("i", ((i * j) % p for i in range(q) for j in range(q)))
            self._neg = array("i", ((-i) % p for i in range(q)))
            inv = [0] * q
            for i in range(1, q):
                inv[i] = pow(i, p - 2, p)
            self._inv = array("i", inv)
            return True
        vecs = [self.coeffs_at(i) for i in range(q)]
        add = []
        for a in vecs:
            row_base = [0] * q
            for j, b in enumerate(vecs):
                row_base[j] = self.index_of_coeffs(
                    tuple((x + y) % p for x, y in zip(a, b))
                )
            add.extend(row_base)
        self._add = array("i", add)
        mul = []
        mod = list(self.modulus)
        for a in vecs:
            pa = _poly_trim(list(a))
            for b in vecs:
                prod = _poly_mod(_poly_mul(pa, _poly_trim(list(b)), p), mod, p)
                prod = tuple(prod) + (0,) * (n - len(prod))
                mul.append(self.index_of_coeffs(prod))
        self._mul = array("i", mul)
        self._neg = array(
            "i", (self.index_of_coeffs(tuple((-c) % p for c in v)) for v in vecs)
        )
        inv = [0] * q
        for i in range(1, q):
            inv[i] = self._inv_by_xgcd(i)
        self._inv = array("i", inv)
        return True

    def _inv_by_xgcd(self, idx: int) -> int:
        p = self.p
        a = _poly_trim(list(self.coeffs_at(idx)))
        g, s, _ = _poly_xgcd(a, list(self.modulus), p)
        if len(g) != 1:
            raise ZeroDivisionError("inverse of zero")
        ginv = pow(g[0], p - 2, p)
        s = _poly_mod([c * ginv % p for c in s], list(self.modulus), p)
        s = tuple(s) + (0,) * (self.n - len(s))
        return self.index_of_coeffs(s)

    def add_idx(self, i: int, j: int) -> int:
        if self._ensure_tables():
            return self._add[i * self.order + j]
        p = self.p
        a, b = self.coeffs_at(i), self.coeffs_at(j)
        return self.index_of_coeffs(tuple((x + y) % p for x, y in zip(a, b)))

    def neg_idx(self, i: int) -> int:
        if self._ensure_tables():
            return self._neg[i]
        return self.index_of_coeffs(tuple((-c) % self.p for c in self.coeffs_at(i)))

    def sub_idx(self, i: int, j: int) -> int:
        return self.add_idx(i, self.neg_idx(j))

    def mul_idx(self, i: int, j: int) -> int:
        if self._ensure_tables():
            return self._mul[i * self.order + j]
        p = self.p
        if self.kind == "prime":
            return (i * j) % p
        prod = _poly_mod(
            _poly_mul(_poly_trim(list(self.coeffs_at(i))),
                      _poly_trim(list(self.coeffs_at(j))), p),
            list(self.modulus),
            p,
        )
        prod = tuple(prod) + (0,) * (self.n - len(prod))
        return self.index_of_coeffs(prod)

    def inv_idx(self, i: int) -> int:
        if i == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._ensure_tables():
            return self._inv[i]
        if self.kind == "prime":
            return pow(i, self.p - 2, self.p)
        return self._inv_by_xgcd(i)

    def tables(self):
        """(add, mul, neg, inv) flat index tables for the scan kernels."""
        if not self.is_finite:
            raise InfiniteField("no dense tables over the rationals")
        if self.order > DENSE_TABLE_LIMIT:
            raise UnsupportedSize(
                f"dense tables limited to order {DENSE_TABLE_LIMIT}"
            )
        self._ensure_tables()
        return self._add, self._mul, self._neg, self._inv

    # -- serialization ---------------------------------------------------------

    def descriptor(self) -> dict:
        if self.kind == "rationals":
            return {"kind": "rationals"}
        if self.kind == "prime":
            return {"kind": "prime", "p": self.p, "n": 1}
        return {
            "kind": "extension",
            "p": self.p,
            "n": self.n,
            "modulus": list(self.modulus),
        }

    def element_to_json(self, x: FieldElement):
        if self.is_finite:
            return list(self.coeffs_of(x))
        fr = x.key
        return {"num": str(fr.numerator), "den": str(fr.denominator)}

    def element_from_json(self, data) -> FieldElement:
        if self.is_finite:
            return self.from_coeffs(data)
        return FieldElement(self, Fraction(int(data["num"]), int(data["den"])))


@functools.lru_cache(maxsize=None)
def _field_cache(kind, p, n, modulus):
    return Field(kind, p, n, modulus)


def field_make(kind: str, p: int = None, n: int = None, modulus=None) -> Field:
    """Build and validate a field; results are cached by description."""
    if kind == "rationals":
        return _field_cache("rationals", None, None, None)
    if kind == "prime":
        return _field_cache("prime", p, None, None)
    if kind == "extension":
        if modulus is None:
            modulus = default_modulus(p, n)
        return _field_cache("extension", p, n, tuple(c % p for c in modulus))
    raise ValueError(f"unknown field kind {kind!r}")


def field_from_descriptor(desc: dict) -> Field:
    kind = desc["kind"]
    if kind == "rationals":
        return field_make("rationals")
    if kind == "prime":
        return field_make("prime", desc["p"])
    return field_make("extension", desc["p"], desc["n"], tuple(desc["modulus"]))


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------

_EXHAUSTIVE_HOM_LIMIT = 512  # above this source order, pair checks are sampled


class FieldHom:
    """A verified ring homomorphism between finite fields, as a table."""

    __slots__ = ("source", "target", "table")

    def __init__(self, source: Field, target: Field, table: FnTable, check=True):
        if not (source.is_finite and target.is_finite):
            raise InfiniteField("homomorphism tables need finite fields")
        self.source = source
        self.target = target
        self.table = table
        if check:
            self._verify()

    @classmethod
    def from_func(cls, source, target, fn, check=True):
        return cls(source, target, FnTable.from_func(source, target, fn), check=check)

    @classmethod
    def from_values(cls, source, target, values, check=True):
        return cls(source, target, FnTable(source, target, values), check=check)

    def _verify(self):
        s, t, vals = self.source, self.target, self.table.values
        if vals[0] != 0:
            raise NotAHomomorphism("zero is not preserved", witness=(s.zero,))
        if vals[s.one.key] != t.one.key:
            raise NotAHomomorphism("one is not preserved", witness=(s.one,))
        q = s.order
        if q <= _EXHAUSTIVE_HOM_LIMIT:
            pairs = ((i, j) for i in range(q) for j in range(q))
        else:
            import random

            rng = random.Random(0)
            pairs = ((rng.randrange(q), rng.randrange(q)) for _ in range(10000))
        for i, j in pairs:
            if vals[s.add_idx(i, j)] != t.add_idx(vals[i], vals[j]):
                raise NotAHomomorphism(
                    "addition not preserved",
                    witness=(s.element_at(i), s.element_at(j)),
                )
            if vals[s.mul_idx(i, j)] != t.mul_idx(vals[i], vals[j]):
                raise NotAHomomorphism(
                    "multiplication not preserved",
                    witness=(s.element_at(i), s.element_at(j)),
                )
        if not self.table.is_injective():
            # fields have no proper ideals, so this only fires on bad tables
            raise NotInjective("field homomorphism table has a collision")

    def __call__(self, x: FieldElement) -> FieldElement:
        return self.table(x)

    def apply_idx(self, i: int) -> int:
        return self.table.values[i]

    def compose(self, inner: "FieldHom") -> "FieldHom":
        """self after inner."""
        return FieldHom(
            inner.source, self.target, self.table.compose(inner.table), check=False
        )

    def image_indices(self):
        return sorted(set(self.table.values))

    def is_identity(self) -> bool:
        return self.source == self.target and all(
            v == i for i, v in enumerate(self.table.values)
        )

    def key(self):
        return self.table.key()

    def __eq__(self, other):
        return isinstance(other, FieldHom) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FieldHom({self.source.short_name()} -> {self.target.short_name()})"


def frobenius(F: Field) -> FieldHom:
    """x -> x^p, verified as a homomorphism (identity on prime fields)."""
    if not F.is_finite:
        raise InfiniteField("Frobenius needs positive characteristic")
    p = F.p
    return FieldHom.from_func(F, F, lambda x: x**p)


def canonical_embedding(Fp: Field, Fq: Field) -> FieldHom:
    """Constant-coefficient embedding of a prime field into an extension."""
    if not (Fp.is_finite and Fq.is_finite):
        raise InfiniteField("embedding tables need finite fields")
    if Fp.characteristic != Fq.characteristic:
        raise CharacteristicMismatch(
            f"char {Fp.characteristic} vs char {Fq.characteristic}"
        )
    if Fp.kind != "prime":
        raise CharacteristicMismatch("source of the canonical embedding is F_p")
    if Fq.kind != "extension":
        raise CharacteristicMismatch("target of the canonical embedding is F_{p^n}")
    return FieldHom.from_func(
        Fp, Fq, lambda x: Fq.from_coeffs((x.key,) + (0,) * (Fq.n - 1))
    )


# ---------------------------------------------------------------------------
# F_p linear algebra: complements and retractions along an embedding
# ---------------------------------------------------------------------------

def _fp_reduce(rows, pivots, vec, p):
    """Reduce vec against echelon rows; returns the residual vector."""
    vec = list(vec)
    for row, piv in zip(rows, pivots):
        c = vec[piv]
        if c:
            inv = pow(row[piv], p - 2, p)
            factor = (c * inv) % p
            for k in range(len(vec)):
                vec[k] = (vec[k] - factor * row[k]) % p
    return vec


def _fp_insert(rows, pivots, vec, p) -> bool:
    res = _fp_reduce(rows, pivots, vec, p)
    for k, c in enumerate(res):
        if c:
            rows.append(res)
            pivots.append(k)
            return True
    return False


def _fp_solve(columns, target, p):
    """Solve sum_j x_j * columns[j] = target over F_p (unique solution)."""
    m = len(target)
    k = len(columns)
    aug = [[columns[j][i] for j in range(k)] + [target[i]] for i in range(m)]
    row = 0
    where = [-1] * k
    for col in range(k):
        piv = next((r for r in range(row, m) if aug[r][col]), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = pow(aug[row][col], p - 2, p)
        aug[row] = [(c * inv) % p for c in aug[row]]
        for r in range(m):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(a - f * b) % p for a, b in zip(aug[r], aug[row])]
        where[col] = row
        row += 1
    sol = [0] * k
    for col in range(k):
        if where[col] >= 0:
            sol[col] = aug[where[col]][k]
    return sol


class LinearRetraction:
    """A left inverse eta of a field embedding theta, linear over the source.

    eta is additive, satisfies eta(theta(k) * m) = k * eta(m) for every
    source element k and target element m, and eta(theta(k)) = k.
    """

    __slots__ = ("hom", "table", "complement")

    def __init__(self, hom: FieldHom, table: FnTable, complement, check=True):
        self.hom = hom
        self.table = table
        self.complement = tuple(complement)
        if check:
            self._verify()

    def _verify(self):
        K, M = self.hom.source, self.hom.target
        eta = self.table.values
        theta = self.hom.table.values
        for k in range(K.order):
            if eta[theta[k]] != k:
                raise NotInjective(
                    "retraction does not invert the embedding",
                    witness=(K.element_at(k),),
                )
        for i in range(M.order):
            for j in range(M.order):
                if eta[M.add_idx(i, j)] != K.add_idx(eta[i], eta[j]):
                    raise NotAHomomorphism(
                        "retraction is not additive",
                        witness=(M.element_at(i), M.element_at(j)),
                    )
        for k in range(K.order):
            tk = theta[k]
            for m in range(M.order):
                if eta[M.mul_idx(tk, m)] != K.mul_idx(k, eta[m]):
                    raise NotAHomomorphism(
                        "retraction is not linear over the source",
                        witness=(K.element_at(k), M.element_at(m)),
                    )

    def __call__(self, m: FieldElement) -> FieldElement:
        return self.table(m)

    def apply_idx(self, i: int) -> int:
        return self.table.values[i]


@functools.lru_cache(maxsize=None)
def _complement_and_retraction(theta: FieldHom):
    """Shared worker: extend the embedded basis, then read off coordinates.

    The target M is an F_p space of dimension n.  The span of the embedded
    copy of K is generated (over F_p) by theta(e_j) * b for each F_p-basis
    element e_j of K and each chosen K-basis vector b of M.  Basis vectors
    are taken greedily in enumeration order, which makes the complement
    deterministic.
    """
    if not theta.table.is_injective():
        raise NotInjective("embedding table has a collision")
    K, M = theta.source, theta.target
    p = M.p
    k_basis = [K.from_coeffs(tuple(1 if j == i else 0 for j in range(K.n)))
               for i in range(K.n)]
    rows, pivots = [], []
    basis_M = [M.one]  # the embedded copy of K is spanned by 1 over K
    columns = []
    for e in k_basis:
        col = list(M.coeffs_of(theta(e)))
        columns.append(col)
        _fp_insert(rows, pivots, col, p)
    complement = []
    for idx in range(M.order):
        if len(rows) == M.n:
            break
        vec = list(M.coeffs_at(idx))
        if _fp_reduce(rows, pivots, vec, p).count(0) == M.n:
            continue
        m = M.element_at(idx)
        complement.append(m)
        basis_M.append(m)
        for e in k_basis:
            col = list(M.coeffs_of(theta(e) * m))
            columns.append(col)
            _fp_insert(rows, pivots, col, p)
    if len(rows) != M.n:
        raise NotInjective("embedded basis did not extend to a full basis")
    # coordinates: m = sum_{i,j} lam[i,j] * theta(e_j) * b_i; eta(m) is the
    # K-coordinate on b_0 = 1, i.e. sum_j lam[0,j] * e_j
    eta_vals = []
    for idx in range(M.order):
        lam = _fp_solve(columns, list(M.coeffs_at(idx)), p)
        acc = K.zero
        for j, e in enumerate(k_basis):
            if lam[j]:
                acc = acc + K.element(lam[j]) * e
        eta_vals.append(acc.key)
    eta = FnTable(M, K, eta_vals)
    return tuple(complement), eta


def complement_basis(theta: FieldHom):
    """Basis of a K-linear complement of the embedded field inside M."""
    comp, _ = _complement_and_retraction(theta)
    return list(comp)


def retraction_for(theta: FieldHom) -> LinearRetraction:
    """The linear left inverse of theta induced by the complement choice."""
    comp, eta = _complement_and_retraction(theta)
    return LinearRetraction(theta, eta, comp)
