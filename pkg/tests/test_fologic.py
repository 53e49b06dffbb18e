import random

import pytest

from heisenlab.errors import BudgetExceeded, FormulaSyntaxError, UnboundVariable
from heisenlab.fields import field_make
from heisenlab.fologic import (
    And,
    Comm,
    Const,
    Eq,
    Exists,
    Implies,
    Mul,
    Not,
    Or,
    Var,
    eval_formula,
    free_variables,
    parse,
    quantifier_depth,
    to_text,
)
from heisenlab.heisenberg import hgroup
from heisenlab.interp import OTIMES_FORMULA_TEXT, InterpContext, otimes_holds


def test_parse_commutator_equality():
    assert parse("[x,u] = I") == Eq(Comm(Var("x"), Const("u")), Const("I"))


def test_parse_witness_formula_shape():
    f = parse(OTIMES_FORMULA_TEXT)
    assert isinstance(f, Exists) and isinstance(f.body, Exists)
    assert free_variables(f) == {"X", "Y", "Z"}
    assert quantifier_depth(f) == 2
    body = f.body.body
    clauses = []
    while isinstance(body, And):
        clauses.append(body.right)
        body = body.left
    clauses.append(body)
    assert len(clauses) == 5


def test_parse_errors_have_positions():
    with pytest.raises(FormulaSyntaxError) as e:
        parse("forall x . x = ")
    assert e.value.line == 1 and e.value.col == 16
    with pytest.raises(FormulaSyntaxError):
        parse("x == y")
    with pytest.raises(FormulaSyntaxError):
        parse("exists . x = x")
    with pytest.raises(FormulaSyntaxError):
        parse("exists u . u = u")  # constants cannot be bound
    with pytest.raises(FormulaSyntaxError):
        parse("x = y & ")
    with pytest.raises(FormulaSyntaxError):
        parse("")


def test_precedence():
    f = parse("~ x = y & z = w")
    assert f == And(Not(Eq(Var("x"), Var("y"))), Eq(Var("z"), Var("w")))
    f = parse("a = b -> c = d | e = f")
    assert f == Implies(Eq(Var("a"), Var("b")), Or(Eq(Var("c"), Var("d")), Eq(Var("e"), Var("f"))))
    # implication is right associative
    f = parse("a = a -> b = b -> c = c")
    assert isinstance(f, Implies) and isinstance(f.right, Implies)
    # quantifiers take the longest possible body
    f = parse("exists x . x = u & x = v")
    assert isinstance(f, Exists) and isinstance(f.body, And)


def test_term_syntax():
    f = parse("x * y * z = I")
    assert f.left == Mul(Mul(Var("x"), Var("y")), Var("z"))  # * associates left
    f = parse("x^-1^-1 = x")
    assert f.left.term.term == Var("x")
    f = parse("(x * y)^-1 = y^-1 * x^-1")
    assert eval_formula(hgroup(field_make("prime", 3)), {}, parse("forall x y . (x * y)^-1 = y^-1 * x^-1"))


def test_parenthesized_formula_vs_term():
    assert parse("(x = y)") == Eq(Var("x"), Var("y"))
    assert parse("(x * y) = z") == Eq(Mul(Var("x"), Var("y")), Var("z"))
    assert parse("((x = y))") == Eq(Var("x"), Var("y"))
    assert parse("(x) = y") == Eq(Var("x"), Var("y"))


def test_identifiers_with_primes():
    f = parse("exists x' . x' = u")
    assert isinstance(f, Exists) and f.var == "x'"


def test_print_parse_round_trip_on_examples():
    for text in (
        OTIMES_FORMULA_TEXT,
        "[x,u] = I",
        "~ x = y & z = w",
        "a = b -> c = d | e = f",
        "forall x . x * I = x",
        "forall x y . ~([x,y] = I) -> exists z . [x,z] = y",
        "x^-1 * (y * z)^-1 = I",
    ):
        ast = parse(text)
        assert parse(to_text(ast)) == ast


def test_eval_examples(F2, F3):
    G2 = hgroup(F2)
    assert eval_formula(G2, {}, parse("exists x y . ~([x,y] = I)"))
    G3 = hgroup(F3)
    assert eval_formula(G3, {}, parse("forall x . x * I = x"))
    assert not eval_formula(G3, {}, parse("forall x y . [x,y] = I"))


def test_eval_constants(F3):
    G = hgroup(F3)
    assert eval_formula(G, {}, parse("[u,v] = I")) is False
    assert eval_formula(G, {"w": G.element(0, 0, 1)}, parse("[u,v] = w"))


def test_eval_matches_interp_oracle(F3):
    G = hgroup(F3)
    ctx = InterpContext(G)
    c = G.center()
    f = parse(OTIMES_FORMULA_TEXT)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                asg = {"X": c[i], "Y": c[j], "Z": c[k]}
                assert eval_formula(G, asg, f) == otimes_holds(ctx, c[i], c[j], c[k])


def test_unbound_variable(F2):
    with pytest.raises(UnboundVariable):
        eval_formula(hgroup(F2), {}, parse("x = u"))


def test_budget_guards(F2):
    G = hgroup(F2)
    with pytest.raises(BudgetExceeded):
        eval_formula(G, {}, parse("exists x y . x * y = u"), budget=7)
    deep = "exists a b c d e f g . a*b*c*d*e*f*g = u"
    with pytest.raises(BudgetExceeded):
        eval_formula(G, {}, parse(deep))
    big = hgroup(field_make("prime", 17))  # 4913 elements > the size cap
    with pytest.raises(BudgetExceeded):
        eval_formula(big, {}, parse("exists x . x = u"))


def test_env_budget_override(F2, monkeypatch):
    G = hgroup(F2)
    monkeypatch.setenv("HEISENLAB_BUDGET", "7")
    with pytest.raises(BudgetExceeded):
        eval_formula(G, {}, parse("exists x y . x * y = u"))
    monkeypatch.setenv("HEISENLAB_BUDGET", "1000000")
    assert eval_formula(G, {}, parse("exists x y . x * y = u"))


def test_quantifier_duality_random(F2):
    from heisenlab.selftest import _random_formula

    G = hgroup(F2)
    rng = random.Random(42)
    for _ in range(25):
        body = _random_formula(rng, 2, ["x"])
        left = parse(f"~(exists x . ({body}))")
        right = parse(f"forall x . ~({body})")
        assert eval_formula(G, {}, left) == eval_formula(G, {}, right)


def test_assignment_scoping(F3):
    G = hgroup(F3)
    # a bound variable shadows the assignment and is restored afterwards
    f = parse("exists x . x = u & y = v")
    assert eval_formula(G, {"x": G.identity, "y": G.v}, f)
    f2 = parse("(exists x . x = u) & x = I")
    assert eval_formula(G, {"x": G.identity}, f2)


def test_negation_scopes_over_quantifier(F2):
    G = hgroup(F2)
    f = parse("~ exists x . ~(x = x)")
    assert isinstance(f, Not) and isinstance(f.body, Exists)
    assert eval_formula(G, {}, f)


def test_whitespace_and_newlines():
    assert parse("forall x .\n  x * I = x") == parse("forall x . x * I = x")
    assert parse("  [ x , u ] = I  ") == parse("[x,u]=I")


def test_multi_variable_quantifier_desugars():
    f = parse("exists a b . a = b")
    assert isinstance(f, Exists) and isinstance(f.body, Exists)
    assert f.var == "a" and f.body.var == "b"
