"""JSON encodings for the wire formats.

Field descriptor: {"kind","p","n","modulus":[c0..cn]}, elements as
coefficient arrays [c0..c_{n-1}] (finite) or {"num","den"} decimal
strings (rational).  Abelian carriers are products of fields:
{"factors":[descriptor...]}, elements as lists of coefficient arrays.
Serialization is canonical: sorted keys, compact separators, so equal
reports are byte-identical.
"""

from __future__ import annotations

import json

from .central_ext import AbGroup, Cocycle
from .fields import Field, FieldHom, field_from_descriptor
from .heisenberg import HGroup, hgroup
from .tables import FnTable


def canon_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# -- field-to-field tables ----------------------------------------------------

def fn_table_to_json(table: FnTable) -> dict:
    dom: Field = table.domain
    cod: Field = table.codomain
    return {
        "domain": dom.descriptor(),
        "codomain": cod.descriptor(),
        "values": [list(cod.coeffs_at(v)) for v in table.values],
    }


def fn_table_from_json(data: dict) -> FnTable:
    dom = field_from_descriptor(data["domain"])
    cod = field_from_descriptor(data["codomain"])
    values = [cod.index_of_coeffs(v) for v in data["values"]]
    return FnTable(dom, cod, values)


def field_hom_to_json(hom: FieldHom) -> dict:
    return fn_table_to_json(hom.table)


def field_hom_from_json(data: dict) -> FieldHom:
    table = fn_table_from_json(data)
    return FieldHom(table.domain, table.codomain, table)


# -- abelian groups and cocycles -------------------------------------------------

def abgroup_descriptor(A: AbGroup) -> dict:
    return {"factors": [f.descriptor() for f in A.factors]}


def abgroup_from_descriptor(data: dict) -> AbGroup:
    return AbGroup(tuple(field_from_descriptor(d) for d in data["factors"]))


def ab_element_to_json(A: AbGroup, idx: int):
    return [list(f.coeffs_at(i)) for f, i in zip(A.factors, A.split(idx))]


def ab_element_from_json(A: AbGroup, data) -> int:
    if len(data) != len(A.factors):
        raise ValueError("wrong number of components")
    return A.join(tuple(f.index_of_coeffs(c) for f, c in zip(A.factors, data)))


def cocycle_to_json(c: Cocycle) -> dict:
    A, B = c.A, c.B
    rows = []
    for i in range(A.size):
        for j in range(A.size):
            rows.append(
                [
                    ab_element_to_json(A, i),
                    ab_element_to_json(A, j),
                    ab_element_to_json(B, c.value_idx(i, j)),
                ]
            )
    return {
        "domain": abgroup_descriptor(A),
        "codomain": abgroup_descriptor(B),
        "table": rows,
    }


def cocycle_from_json(data: dict) -> Cocycle:
    A = abgroup_from_descriptor(data["domain"])
    B = abgroup_from_descriptor(data["codomain"])
    values = [0] * (A.size * A.size)
    seen = set()
    for a1, a2, b in data["table"]:
        i = ab_element_from_json(A, a1)
        j = ab_element_from_json(A, a2)
        values[i * A.size + j] = ab_element_from_json(B, b)
        seen.add((i, j))
    if len(seen) != A.size * A.size:
        raise ValueError("cocycle table does not cover all of A x A")
    return Cocycle(A, B, values)


# -- group homomorphism tables -----------------------------------------------------

def h_element_to_json(G: HGroup, idx: int) -> dict:
    g = G.element_at(idx)
    return g.to_json()


def h_element_from_json(G: HGroup, data: dict) -> int:
    f = G.field
    return G.enc(
        G.element(
            f.element_from_json(data["a"]),
            f.element_from_json(data["b"]),
            f.element_from_json(data["c"]),
        )
    )


def group_hom_to_json(f) -> dict:
    return {
        "source": f.source.field.descriptor(),
        "target": f.target.field.descriptor(),
        "images": [h_element_to_json(f.target, v) for v in f.images],
    }


def group_hom_from_json(data: dict, check=True):
    from .decompose import GroupHomTable

    source = hgroup(field_from_descriptor(data["source"]))
    target = hgroup(field_from_descriptor(data["target"]))
    images = [h_element_from_json(target, d) for d in data["images"]]
    return GroupHomTable(source, target, images, check=check)


# -- automorphism parameters ----------------------------------------------------------

def aut_params_to_json(params) -> dict:
    return params.to_json()


def aut_params_from_json(F: Field, data: dict):
    from .automorphisms import AutParams

    (a, b), (c, d) = data["A"]
    psi1 = FnTable(F, F, [F.index_of_coeffs(v) for v in data["psi1"]])
    psi2 = FnTable(F, F, [F.index_of_coeffs(v) for v in data["psi2"]])
    return AutParams(
        F,
        F.element_from_json(a),
        F.element_from_json(b),
        F.element_from_json(c),
        F.element_from_json(d),
        psi1,
        psi2,
    )


def decomposition_to_json(dec) -> dict:
    M = dec.theta.target
    mat = dec.params.matrix
    return {
        "theta": field_hom_to_json(dec.theta),
        "A": [[M.element_to_json(e) for e in row] for row in mat],
        "d": M.element_to_json(dec.d),
        "psi1": fn_table_to_json(
            FnTable(M, M, dec.psi1.values_list())
        ),
        "psi2": fn_table_to_json(
            FnTable(M, M, dec.psi2.values_list())
        ),
        "verified": dec.verified,
    }
