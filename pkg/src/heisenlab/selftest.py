"""The acceptance suite: one function per criterion, deterministic reports.

Each criterion function returns a dict with at least {"id", "name",
"pass", "details"}; run_all assembles them into a canonical report whose
JSON serialization is byte-identical across runs with the same seed.
Wall-clock times are reported separately and never enter the JSON.

All randomness flows from per-criterion Random instances seeded from the
run seed, so report content cannot depend on ordering accidents.
"""

from __future__ import annotations

import random
import time

from . import kernels
from .automorphisms import (
    AutParams,
    CentralAutParams,
    additive_maps,
    aut_enumerate_bruteforce,
    aut_enumerate_parametrized,
    central_aut_make,
    gl2_matrices,
    solve_quadratic_additive,
)
from .central_ext import (
    AbGroup,
    Cocycle,
    TriangularMap,
    ext_build,
    homcond_check,
    psi_from,
    psi_preserves_products,
)
from .decompose import compose, decompose
from .errors import Char2NonzeroCoeff
from .fields import FieldHom, canonical_embedding, field_make, frobenius
from .fologic import eval_formula, parse
from .heisenberg import hgroup
from .interp import OTIMES_FORMULA_TEXT, InterpContext, otimes_holds, reconstruct_field
from .psi_extend import QuadAdditiveMap, extend_psi
from .tables import FnTable


def _rng(seed, tag):
    return random.Random(f"{seed}:{tag}")


# -- criterion 1: group law corpus against the matrix oracle -------------------

def _mat_of(triple, p):
    a, b, c = triple
    return ((1, a, c), (0, 1, b), (0, 0, 1))


def _mat_mul(m1, m2, p):
    return tuple(
        tuple(sum(m1[i][k] * m2[k][j] for k in range(3)) % p for j in range(3))
        for i in range(3)
    )


def _triple_of(mat):
    return (mat[0][1], mat[1][2], mat[0][2])


def criterion_1(seed=0):
    checks = 0
    ok = True
    witness = None
    for p in (2, 3):
        F = field_make("prime", p)
        G = hgroup(F)
        n = G.size
        q, add, mul, neg = G.field_tables()
        triples = [(a, b, c) for a in range(p) for b in range(p) for c in range(p)]
        mats = {t: _mat_of(t, p) for t in triples}
        ident = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        # products agree with literal matrix multiplication
        for g in triples:
            for h in triples:
                got = G.element_at(
                    kernels.heis_mul(G.enc(G.element(*g)), G.enc(G.element(*h)), q, add, mul)
                )
                want = _triple_of(_mat_mul(mats[g], mats[h], p))
                checks += 1
                if (got.a.key, got.b.key, got.c.key) != want:
                    ok, witness = False, ("mul", g, h)
        # closed-formula associativity, exhaustively
        checks += n**3
        if kernels.heis_assoc_failure(q, add, mul) != -1:
            ok, witness = False, ("assoc", p)
        # inverse formula against brute-force matrix search
        mat_inv = {}
        for g in triples:
            found = [
                h
                for h in triples
                if _mat_mul(mats[g], mats[h], p) == ident
                and _mat_mul(mats[h], mats[g], p) == ident
            ]
            got = kernels.heis_inv(G.enc(G.element(*g)), q, add, mul, neg)
            checks += 1
            if len(found) != 1 or G.enc(G.element(*found[0])) != got:
                ok, witness = False, ("inv", g)
            else:
                mat_inv[g] = mats[found[0]]
        # commutator formula against definitional matrix computation
        for g in triples:
            for h in triples:
                definitional = _mat_mul(
                    _mat_mul(mat_inv[g], mat_inv[h], p),
                    _mat_mul(mats[g], mats[h], p),
                    p,
                )
                got = kernels.heis_comm(
                    G.enc(G.element(*g)), G.enc(G.element(*h)), q, add, mul, neg
                )
                checks += 1
                if G.enc(G.element(*_triple_of(definitional))) != got:
                    ok, witness = False, ("comm", g, h)
    return {
        "id": 1,
        "name": "group law corpus vs matrix oracle (F2, F3)",
        "pass": ok,
        "details": {"checks": checks, "witness": repr(witness) if witness else None},
    }


# -- criterion 2: triangular-map condition vs brute force ------------------------

def _ext_family():
    F2 = field_make("prime", 2)
    F3 = field_make("prime", 3)
    F4 = field_make("extension", 2, 2)
    fam = []
    fam.append(("heis F2", ext_build(*_heis_parts(F2))))
    fam.append(("heis F3", ext_build(*_heis_parts(F3))))
    A = AbGroup.product(F3, F3)
    B = AbGroup.of_field(F3)
    fam.append(("zero F3^2 by F3", ext_build(A, B, Cocycle.zero(A, B))))
    A2 = AbGroup.of_field(F2)
    B2 = AbGroup.of_field(F2)
    fam.append(
        ("bilinear xx' on F2", ext_build(A2, B2, Cocycle.from_func(
            A2, B2, lambda a, b: (a[0] * b[0],)
        )))
    )
    A4 = AbGroup.of_field(F4)
    B4 = AbGroup.of_field(F2)
    rng = random.Random("ext-family-coboundary")
    f_table = [rng.randrange(B4.size) for _ in range(A4.size)]
    f_table[0] = 0
    fam.append(
        ("coboundary F4 by F2", ext_build(A4, B4, Cocycle.coboundary(A4, B4, f_table)))
    )
    heis2 = _heis_parts(F2)
    g_table = [rng.randrange(heis2[1].size) for _ in range(heis2[0].size)]
    shifted = heis2[2].shifted_by(Cocycle.coboundary(heis2[0], heis2[1], g_table))
    fam.append(("heis F2 + coboundary", ext_build(heis2[0], heis2[1], shifted)))
    return fam


def _heis_parts(K):
    c = Cocycle.heisenberg(K)
    return c.A, c.B, c


def _mixed_triangular_maps(E, rng, count):
    maps = [TriangularMap.identity(E)]
    maps.append(
        TriangularMap(
            FnTable.identity(E.A),
            FnTable.identity(E.B),
            TriangularMap.random(E, rng, additive_gamma=True).gamma,
            check=False,
        )
    )
    while len(maps) < count:
        additive = rng.random() < 0.3
        maps.append(TriangularMap.random(E, rng, additive_gamma=additive))
    return maps[:count]


def criterion_2(seed=0, maps_per_group=200):
    rng = _rng(seed, "crit2")
    agreements = 0
    true_cases = 0
    discrepancies = []
    for name, E in _ext_family():
        for t in _mixed_triangular_maps(E, rng, maps_per_group):
            fast = homcond_check(E, t)
            slow = psi_preserves_products(E, psi_from(E, t))
            if fast != slow:
                discrepancies.append((name, fast, slow))
            else:
                agreements += 1
                true_cases += fast
    return {
        "id": 2,
        "name": "triangular-map condition iff product preservation",
        "pass": not discrepancies,
        "details": {
            "agreements": agreements,
            "true_cases": true_cases,
            "discrepancies": len(discrepancies),
        },
    }


# -- criterion 3: parametrized enumeration equals brute force ----------------------

def criterion_3(seed=0):
    details = {}
    ok = True
    for p, expected in ((2, 8), (3, 432)):
        G = hgroup(field_make("prime", p))
        brute = [t.values for t in aut_enumerate_bruteforce(G)]
        param = [t.values for t in aut_enumerate_parametrized(G)]
        same = brute == param
        details[f"F{p}"] = {
            "bruteforce": len(brute),
            "parametrized": len(param),
            "sets_equal": same,
        }
        # counts derive from the oracle; record rather than assert the folklore
        ok = ok and same and len(brute) == expected
    return {
        "id": 3,
        "name": "parametrized automorphisms equal brute force (F2, F3)",
        "pass": ok,
        "details": details,
    }


# -- criterion 4: extension identity on the whole field ------------------------------

def criterion_4(seed=0):
    ok = True
    details = {}
    for p, n in ((3, 2), (5, 2)):
        K = field_make("prime", p)
        M = field_make("extension", p, n)
        theta = canonical_embedding(K, M)
        from .fields import complement_basis

        basis = complement_basis(theta)
        image = sorted(theta.table.values)
        add, mul, _, _ = M.tables()
        for cval in (0, 1, 2):
            c = M.element(cval)
            half = M.one / M.element(2)
            vals = {}
            for k in image:
                vals[k] = M.mul_idx((c * half).key, M.mul_idx(k, k))
            psi = QuadAdditiveMap(M, c, image, vals)
            big = extend_psi(psi, basis)
            bad = kernels.quad_identity_failure(
                big.values_list(), c.key, M.order, add, mul
            )
            restricts = big.agrees_with(psi)
            details[f"F{p**n} c={cval}"] = {
                "identity_pairs": M.order**2,
                "holds": bad == -1,
                "restricts": restricts,
            }
            ok = ok and bad == -1 and restricts
    # characteristic-2 branch must reject a nonzero coefficient
    K2 = field_make("prime", 2)
    M4 = field_make("extension", 2, 2)
    theta2 = canonical_embedding(K2, M4)
    from .fields import complement_basis as _cb

    basis2 = _cb(theta2)
    image2 = sorted(theta2.table.values)
    psi_bad = QuadAdditiveMap(
        M4, M4.one, image2, {i: 0 for i in image2}, check=False
    )
    try:
        extend_psi(psi_bad, basis2)
        rejected = False
    except Char2NonzeroCoeff:
        rejected = True
    details["F4 c=1 rejected"] = rejected
    ok = ok and rejected
    return {
        "id": 4,
        "name": "quadratic-additive extension identity on all pairs",
        "pass": ok,
        "details": details,
    }


# -- criterion 5: decomposition round trip ---------------------------------------------

def _random_params(F, rng):
    mats = gl2_matrices(F)
    while True:
        a, b, c, d = mats[rng.randrange(len(mats))]
        sols1 = solve_quadratic_additive(F, a * c)
        if not sols1:
            continue
        sols2 = solve_quadratic_additive(F, b * d)
        if not sols2:
            continue
        return AutParams(
            F, a, b, c, d,
            sols1[rng.randrange(len(sols1))],
            sols2[rng.randrange(len(sols2))],
        )


def criterion_5(seed=0, rounds=100):
    F2 = field_make("prime", 2)
    F3 = field_make("prime", 3)
    F4 = field_make("extension", 2, 2)
    F9 = field_make("extension", 3, 2)
    configs = [
        ("identity on F3", FieldHom.from_func(F3, F3, lambda x: x)),
        ("canonical F3 to F9", canonical_embedding(F3, F9)),
        ("frobenius on F4", frobenius(F4)),
        ("canonical F2 to F4", canonical_embedding(F2, F4)),
    ]
    ok = True
    details = {}
    rng = _rng(seed, "crit5")
    for name, theta in configs:
        passed = 0
        for _ in range(rounds):
            phi = _random_params(theta.target, rng)
            f = compose(phi, theta)
            dec = decompose(f)  # raises on any broken intermediate identity
            if dec.theta != theta:
                ok = False
                break
            if dec.d.is_zero() or dec.params.det != dec.d:
                ok = False
                break
            back = compose(dec.params, theta)
            if back.images != f.images:
                ok = False
                break
            passed += 1
        details[name] = passed
        ok = ok and passed == rounds
    return {
        "id": 5,
        "name": "decompose(compose(phi, theta)) round trip",
        "pass": ok,
        "details": details,
    }


# -- criterion 6: multiplication graph matches the field --------------------------------

def criterion_6(seed=0):
    ok = True
    details = {}
    for q, F in (
        (2, field_make("prime", 2)),
        (3, field_make("prime", 3)),
        (4, field_make("extension", 2, 2)),
        (5, field_make("prime", 5)),
    ):
        G = hgroup(F)
        ctx = InterpContext(G)
        c = G.center()
        bad = 0
        for i in range(q):
            for j in range(q):
                expect = F.mul_idx(i, j)
                for k in range(q):
                    if otimes_holds(ctx, c[i], c[j], c[k]) != (k == expect):
                        bad += 1
        rec = reconstruct_field(ctx)
        details[f"q={q}"] = {
            "triples": q**3,
            "mismatches": bad,
            "tables_match": rec.matches_source_field(),
            "distributive": rec.distributes(),
        }
        ok = ok and bad == 0 and rec.matches_source_field()
    return {
        "id": 6,
        "name": "witness formula defines field multiplication (q = 2,3,4,5)",
        "pass": ok,
        "details": details,
    }


# -- criterion 7: text formula agrees with the built-in evaluator --------------------------

GROUP_AXIOMS = (
    "forall x y z . (x * y) * z = x * (y * z)",
    "forall x . x * I = x & I * x = x",
    "forall x . x * x^-1 = I & x^-1 * x = I",
)


def _random_formula(rng, depth, vars_in_scope):
    roll = rng.random()
    if depth == 0 or roll < 0.35:
        pool = [*vars_in_scope, "u", "v", "I"]

        def term(d=2):
            r = rng.random()
            if d == 0 or r < 0.45:
                return rng.choice(pool)
            if r < 0.65:
                return f"({term(d - 1)} * {term(d - 1)})"
            if r < 0.8:
                return f"{rng.choice(pool)}^-1"
            return f"[{term(d - 1)},{term(d - 1)}]"

        return f"{term()} = {term()}"
    if roll < 0.5:
        return f"~({_random_formula(rng, depth - 1, vars_in_scope)})"
    if roll < 0.7:
        new = f"w{len(vars_in_scope)}"
        word = rng.choice(("exists", "forall"))
        return f"{word} {new} . ({_random_formula(rng, depth - 1, vars_in_scope + [new])})"
    op = rng.choice(("&", "|", "->"))
    left = _random_formula(rng, depth - 1, vars_in_scope)
    right = _random_formula(rng, depth - 1, vars_in_scope)
    return f"({left}) {op} ({right})"


def criterion_7(seed=0, duality_rounds=100):
    ok = True
    details = {}
    otimes = parse(OTIMES_FORMULA_TEXT)
    for q, F in (
        (2, field_make("prime", 2)),
        (3, field_make("prime", 3)),
        (4, field_make("extension", 2, 2)),
    ):
        G = hgroup(F)
        ctx = InterpContext(G)
        c = G.center()
        bad = 0
        for i in range(q):
            for j in range(q):
                for k in range(q):
                    asg = {"X": c[i], "Y": c[j], "Z": c[k]}
                    if eval_formula(G, asg, otimes) != otimes_holds(ctx, c[i], c[j], c[k]):
                        bad += 1
        details[f"otimes q={q}"] = bad
        ok = ok and bad == 0
    for q, F in (
        (2, field_make("prime", 2)),
        (3, field_make("prime", 3)),
        (4, field_make("extension", 2, 2)),
    ):
        G = hgroup(F)
        axioms_ok = all(eval_formula(G, {}, parse(s)) for s in GROUP_AXIOMS)
        details[f"axioms q={q}"] = axioms_ok
        ok = ok and axioms_ok
    rng = _rng(seed, "crit7")
    G2 = hgroup(field_make("prime", 2))
    dual_ok = 0
    for _ in range(duality_rounds):
        body = _random_formula(rng, 2, ["x"])
        left = parse(f"~(exists x . ({body}))")
        right = parse(f"forall x . ~({body})")
        if eval_formula(G2, {}, left) == eval_formula(G2, {}, right):
            dual_ok += 1
    details["duality"] = dual_ok
    ok = ok and dual_ok == duality_rounds
    return {
        "id": 7,
        "name": "text evaluator: witness-formula oracle, axioms, duality",
        "pass": ok,
        "details": details,
    }


# -- criterion 8: central automorphism fixing an embedded subgroup ---------------------------

def criterion_8(seed=0):
    F3 = field_make("prime", 3)
    F9 = field_make("extension", 3, 2)
    theta = canonical_embedding(F3, F9)
    G9 = hgroup(F9)
    lam = None
    t_idx = F9.from_coeffs((0, 1)).key
    for m in additive_maps(F9):
        kills_subfield = all(m.values[v] == 0 for v in theta.table.values)
        if kills_subfield and m.values[t_idx] != 0:
            lam = m
            break
    mu = FnTable(F9, F9, [0] * F9.order)
    table = central_aut_make(G9, CentralAutParams(F9, lam, mu))
    th = theta.table.values
    embedded = [
        (th[a] * F9.order + th[b]) * F9.order + th[c]
        for a in range(3)
        for b in range(3)
        for c in range(3)
    ]
    fixed = sum(1 for e in embedded if table.values[e] == e)
    moved = sum(1 for i, v in enumerate(table.values) if v != i)
    ok = fixed == 27 and moved > 0
    return {
        "id": 8,
        "name": "central automorphism: nonidentity on H(F9), fixes H(F3)",
        "pass": ok,
        "details": {"embedded_fixed": fixed, "moved_elements": moved},
    }


CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
)


def run_all(seed=0):
    """Run criteria 1..8; returns (report_dict, per-criterion wall times)."""
    results = []
    timings = []
    for fn in CRITERIA:
        t0 = time.perf_counter()
        results.append(fn(seed=seed))
        timings.append(time.perf_counter() - t0)
    passes = sum(1 for r in results if r["pass"])
    report = {
        "command": "selftest",
        "parameters": {"seed": seed, "backend": kernels.BACKEND},
        "criteria": results,
        "passes": passes,
        "failures": len(results) - passes,
        "all_pass": passes == len(results),
    }
    return report, timings
