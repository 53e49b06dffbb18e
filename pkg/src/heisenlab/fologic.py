"""First-order formulas over a Heisenberg group: parser and evaluator.

Grammar (ASCII):
    identifiers  [A-Za-z][A-Za-z0-9']*   (u, v, I are reserved constants)
    terms        products with *, postfix inverse ^-1, commutator [s,t]
    atoms        term = term
    connectives  ~  &  |  ->   with precedence ~ > & > | > ->
    quantifiers  exists/forall, one or more variables, then '.', binding
                 as far to the right as possible
    parentheses  allowed around terms and formulas

Evaluation is brute force over the whole group with short-circuiting;
no quantifier-elimination fast path exists for these groups, so none is
attempted.  A cost estimate |G|^depth guards evaluation up front; the
default ceiling is 10^8 atomic steps, overridable by the
HEISENLAB_BUDGET environment variable or the budget argument.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

from .errors import BudgetExceeded, FormulaSyntaxError, UnboundVariable
from .heisenberg import HElement, HGroup

DEFAULT_BUDGET = 10**8
MAX_GROUP_SIZE = 1 << 12
MAX_QUANT_DEPTH = 6

CONSTANT_NAMES = frozenset({"u", "v", "I"})
KEYWORDS = frozenset({"exists", "forall"})


# -- terms -------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str  # "u", "v" or "I"


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Inv:
    term: object


@dataclass(frozen=True)
class Comm:
    left: object
    right: object


# -- formulas ------------------------------------------------------------------

@dataclass(frozen=True)
class Eq:
    left: object
    right: object


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


CONST_U = Const("u")
CONST_V = Const("v")
CONST_I = Const("I")


# -- lexer ---------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<WS>\s+)
  | (?P<ARROW>->)
  | (?P<INV>\^-1)
  | (?P<IDENT>[A-Za-z][A-Za-z0-9']*)
  | (?P<STAR>\*)
  | (?P<EQ>=)
  | (?P<TILDE>~)
  | (?P<AMP>&)
  | (?P<PIPE>\|)
  | (?P<LPAR>\()
  | (?P<RPAR>\))
  | (?P<LBRACK>\[)
  | (?P<RBRACK>\])
  | (?P<COMMA>,)
  | (?P<DOT>\.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str):
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "WS":
            tokens.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("EOF", "", line, col))
    return tokens


# -- parser ----------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind, expected_desc):
        tok = self.peek()
        if tok.kind != kind:
            raise FormulaSyntaxError(
                f"expected {expected_desc}, found {tok.text or 'end of input'!r}",
                tok.line,
                tok.col,
                expected={expected_desc},
            )
        return self.advance()

    # terms

    def parse_term(self):
        t = self.parse_factor()
        while self.peek().kind == "STAR":
            self.advance()
            t = Mul(t, self.parse_factor())
        return t

    def parse_factor(self):
        t = self.parse_atom_term()
        while self.peek().kind == "INV":
            self.advance()
            t = Inv(t)
        return t

    def parse_atom_term(self):
        tok = self.peek()
        if tok.kind == "IDENT":
            if tok.text in KEYWORDS:
                raise FormulaSyntaxError(
                    f"{tok.text!r} cannot start a term", tok.line, tok.col,
                    expected={"identifier", "u", "v", "I", "(", "["},
                )
            self.advance()
            if tok.text in CONSTANT_NAMES:
                return Const(tok.text)
            return Var(tok.text)
        if tok.kind == "LPAR":
            self.advance()
            t = self.parse_term()
            self.expect("RPAR", ")")
            return t
        if tok.kind == "LBRACK":
            self.advance()
            left = self.parse_term()
            self.expect("COMMA", ",")
            right = self.parse_term()
            self.expect("RBRACK", "]")
            return Comm(left, right)
        raise FormulaSyntaxError(
            f"expected a term, found {tok.text or 'end of input'!r}",
            tok.line,
            tok.col,
            expected={"identifier", "u", "v", "I", "(", "["},
        )

    # formulas

    def parse_formula(self):
        return self.parse_implies()

    def parse_implies(self):
        left = self.parse_or()
        if self.peek().kind == "ARROW":
            self.advance()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self):
        f = self.parse_and()
        while self.peek().kind == "PIPE":
            self.advance()
            f = Or(f, self.parse_and())
        return f

    def parse_and(self):
        f = self.parse_unary()
        while self.peek().kind == "AMP":
            self.advance()
            f = And(f, self.parse_unary())
        return f

    def parse_unary(self):
        tok = self.peek()
        if tok.kind == "TILDE":
            self.advance()
            return Not(self.parse_unary())
        if tok.kind == "IDENT" and tok.text in KEYWORDS:
            self.advance()
            names = []
            while self.peek().kind == "IDENT" and self.peek().text not in KEYWORDS:
                name_tok = self.advance()
                if name_tok.text in CONSTANT_NAMES:
                    raise FormulaSyntaxError(
                        f"{name_tok.text!r} is a constant and cannot be bound",
                        name_tok.line,
                        name_tok.col,
                        expected={"variable"},
                    )
                names.append(name_tok.text)
            if not names:
                bad = self.peek()
                raise FormulaSyntaxError(
                    "quantifier needs at least one variable",
                    bad.line,
                    bad.col,
                    expected={"variable"},
                )
            self.expect("DOT", ".")
            body = self.parse_formula()
            wrap = Exists if tok.text == "exists" else Forall
            for name in reversed(names):
                body = wrap(name, body)
            return body
        return self.parse_atom_formula()

    def parse_atom_formula(self):
        tok = self.peek()
        if tok.kind == "LPAR":
            # try a parenthesized formula; fall back to a term equality
            save = self.pos
            self.advance()
            try:
                f = self.parse_formula()
                self.expect("RPAR", ")")
                return f
            except FormulaSyntaxError:
                self.pos = save
        left = self.parse_term()
        self.expect("EQ", "=")
        right = self.parse_term()
        return Eq(left, right)


def parse(text: str):
    """Parse a formula; raises FormulaSyntaxError with position on failure."""
    parser = _Parser(tokenize(text))
    formula = parser.parse_formula()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise FormulaSyntaxError(
            f"trailing input {tok.text!r}", tok.line, tok.col, expected={"end of input"}
        )
    return formula


# -- pretty printer ----------------------------------------------------------------

def _print_term(t) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Mul):
        left = _print_term(t.left)
        right = _print_term(t.right)
        if isinstance(t.right, Mul):  # product is left associative
            right = f"({right})"
        return f"{left} * {right}"
    if isinstance(t, Inv):
        inner = _print_term(t.term)
        if isinstance(t.term, Mul):
            inner = f"({inner})"
        return f"{inner}^-1"
    if isinstance(t, Comm):
        return f"[{_print_term(t.left)},{_print_term(t.right)}]"
    raise TypeError(f"not a term: {t!r}")


_PREC = {Implies: 1, Or: 2, And: 3, Not: 4, Exists: 0, Forall: 0, Eq: 5}


def _print_formula(f, parent_prec=0) -> str:
    if isinstance(f, Eq):
        out = f"{_print_term(f.left)} = {_print_term(f.right)}"
        prec = 5
    elif isinstance(f, Not):
        out = f"~{_print_formula(f.body, 4)}"
        prec = 4
    elif isinstance(f, And):
        out = f"{_print_formula(f.left, 3)} & {_print_formula(f.right, 4)}"
        prec = 3
    elif isinstance(f, Or):
        out = f"{_print_formula(f.left, 2)} | {_print_formula(f.right, 3)}"
        prec = 2
    elif isinstance(f, Implies):
        out = f"{_print_formula(f.left, 2)} -> {_print_formula(f.right, 1)}"
        prec = 1
    elif isinstance(f, (Exists, Forall)):
        word = "exists" if isinstance(f, Exists) else "forall"
        out = f"{word} {f.var} . {_print_formula(f.body, 0)}"
        prec = 0
    else:
        raise TypeError(f"not a formula: {f!r}")
    if prec < parent_prec:
        return f"({out})"
    return out


def to_text(formula) -> str:
    return _print_formula(formula)


# -- evaluation ------------------------------------------------------------------------

def quantifier_depth(f) -> int:
    if isinstance(f, (Exists, Forall)):
        return 1 + quantifier_depth(f.body)
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, (And, Or, Implies)):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 0


def free_variables(f, bound=frozenset()):
    if isinstance(f, Var):
        return set() if f.name in bound else {f.name}
    if isinstance(f, Const):
        return set()
    if isinstance(f, (Mul, Comm, And, Or, Implies, Eq)):
        return free_variables(f.left, bound) | free_variables(f.right, bound)
    if isinstance(f, Inv):
        return free_variables(f.term, bound)
    if isinstance(f, Not):
        return free_variables(f.body, bound)
    if isinstance(f, (Exists, Forall)):
        return free_variables(f.body, bound | {f.var})
    raise TypeError(f"not a term or formula: {f!r}")


def eval_formula(G: HGroup, assignment, formula, budget=None) -> bool:
    """Decide satisfaction in the finite group under the assignment.

    assignment maps variable names to HElements of G.  Quantifiers range
    over all of G by exhaustive search with short-circuiting.
    """
    n = G.size
    if n > MAX_GROUP_SIZE:
        raise BudgetExceeded(f"group of {n} elements exceeds the evaluation cap")
    depth = quantifier_depth(formula)
    if depth > MAX_QUANT_DEPTH:
        raise BudgetExceeded(f"quantifier depth {depth} exceeds {MAX_QUANT_DEPTH}")
    if budget is None:
        budget = int(os.environ.get("HEISENLAB_BUDGET", DEFAULT_BUDGET))
    if n**depth > budget:
        raise BudgetExceeded(
            f"estimated cost {n}^{depth} exceeds the budget {budget}"
        )

    env = {}
    for name, value in assignment.items():
        if not isinstance(value, HElement) or value.field != G.field:
            raise UnboundVariable(f"assignment for {name!r} is not in the group")
        env[name] = G.enc(value)

    u_enc, v_enc, i_enc = G.enc(G.u), G.enc(G.v), G.enc(G.identity)
    mul, inv = G.mul_idx, G.inv_idx

    def term(t):
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise UnboundVariable(f"variable {t.name!r} has no value") from None
        if isinstance(t, Const):
            return u_enc if t.name == "u" else v_enc if t.name == "v" else i_enc
        if isinstance(t, Mul):
            return mul(term(t.left), term(t.right))
        if isinstance(t, Inv):
            return inv(term(t.term))
        if isinstance(t, Comm):
            g = term(t.left)
            h = term(t.right)
            return mul(mul(inv(g), inv(h)), mul(g, h))
        raise TypeError(f"not a term: {t!r}")

    def sat(f) -> bool:
        if isinstance(f, Eq):
            return term(f.left) == term(f.right)
        if isinstance(f, Not):
            return not sat(f.body)
        if isinstance(f, And):
            return sat(f.left) and sat(f.right)
        if isinstance(f, Or):
            return sat(f.left) or sat(f.right)
        if isinstance(f, Implies):
            return (not sat(f.left)) or sat(f.right)
        if isinstance(f, Exists):
            shadow = env.get(f.var)
            try:
                for g in range(n):
                    env[f.var] = g
                    if sat(f.body):
                        return True
                return False
            finally:
                if shadow is None:
                    env.pop(f.var, None)
                else:
                    env[f.var] = shadow
        if isinstance(f, Forall):
            shadow = env.get(f.var)
            try:
                for g in range(n):
                    env[f.var] = g
                    if not sat(f.body):
                        return False
                return True
            finally:
                if shadow is None:
                    env.pop(f.var, None)
                else:
                    env[f.var] = shadow
        raise TypeError(f"not a formula: {f!r}")

    return sat(formula)
