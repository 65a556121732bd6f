"""Partial recursive function expressions: syntax tree, text grammar, arity.

Grammar (``.rf`` files, ``#`` comments to end of line)::

    file    := { def } ;
    def     := "def" IDENT "=" expr ;
    expr    := "zero" | "succ" | "const" "(" NAT [ "," NAT ] ")"
             | "proj" "(" NAT "," NAT ")"
             | "comp" "(" expr { "," expr } ")"
             | "primrec" "(" expr "," expr ")"
             | "mu" "(" expr [ "," "bound" "=" NAT ] ")"
             | IDENT ;

Conventions:

* ``proj(n, i)`` is 1-based: ``proj(3, 1)(a, b, c) == a``.
* ``const(k)`` is unary; ``const(k, n)`` is the n-ary constant (n may be 0,
  which is what a unary ``primrec`` needs as its base case).
* ``primrec(base, step)`` recurses on its *last* argument::

      f(xs, 0)     = base(xs)
      f(xs, t + 1) = step(xs, t, f(xs, t))

* ``mu(body)`` searches the last argument of ``body``:
  ``f(xs) = least z with body(xs, z) == 0``. With ``bound=b`` only
  ``z = 0 .. b`` are tried.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union


class RFError(Exception):
    """Base class for errors raised while reading or checking definitions."""


class RFSyntaxError(RFError):
    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.col = col
        self.expected = expected
        where = f"{line}:{col}"
        if expected:
            message = f"{message} (expected {', '.join(expected)})"
        super().__init__(f"{where}: {message}")


class ArityError(RFError):
    def __init__(self, message: str, expr: "RFExpr | None" = None):
        self.expr = expr
        if expr is not None:
            message = f"{message} in {format_expr(expr)}"
        super().__init__(message)


class UnknownNameError(RFError):
    pass


class DuplicateNameError(RFError):
    pass


# ----------------------------------------------------------------------------
# Syntax tree


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Const:
    value: int
    arity: int = 1


@dataclass(frozen=True)
class Succ:
    pass


@dataclass(frozen=True)
class Proj:
    n: int
    i: int


@dataclass(frozen=True)
class Compose:
    f: "RFExpr"
    gs: tuple["RFExpr", ...]


@dataclass(frozen=True)
class PrimRec:
    base: "RFExpr"
    step: "RFExpr"


@dataclass(frozen=True)
class Mu:
    body: "RFExpr"
    bound: int | None = None


@dataclass(frozen=True)
class Call:
    name: str


RFExpr = Union[Zero, Const, Succ, Proj, Compose, PrimRec, Mu, Call]


def children(expr: RFExpr) -> tuple[RFExpr, ...]:
    """Direct subexpressions, in the order used for path naming."""
    if isinstance(expr, Compose):
        return (expr.f, *expr.gs)
    if isinstance(expr, PrimRec):
        return (expr.base, expr.step)
    if isinstance(expr, Mu):
        return (expr.body,)
    return ()


def walk(expr: RFExpr) -> Iterator[RFExpr]:
    """Preorder traversal (does not follow calls)."""
    stack = [expr]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


# ----------------------------------------------------------------------------
# Definition environments


class DefEnv:
    """Ordered, acyclic set of named definitions.

    Insertion order is the enumeration order: ``env.index("plus")`` is the
    position of ``plus`` in the list of defined functions. Every ``Call``
    must name a definition made earlier, so name references can never form
    a cycle.
    """

    def __init__(self, defs: dict[str, RFExpr] | None = None):
        self._defs: dict[str, RFExpr] = {}
        self._arity: dict[str, int] = {}
        for name, expr in (defs or {}).items():
            self.add(name, expr)

    def add(self, name: str, expr: RFExpr) -> None:
        if name in self._defs:
            raise DuplicateNameError(f"duplicate definition of {name!r}")
        self._arity[name] = _arity(expr, self._arity)
        self._defs[name] = expr

    def extend(self, name: str, expr: RFExpr) -> "DefEnv":
        """A copy of this environment with one more definition appended."""
        env = DefEnv()
        env._defs = dict(self._defs)
        env._arity = dict(self._arity)
        env.add(name, expr)
        return env

    def merged(self, other: "DefEnv") -> "DefEnv":
        env = DefEnv()
        env._defs = dict(self._defs)
        env._arity = dict(self._arity)
        for name, expr in other.items():
            if name in env._defs:
                if env._defs[name] != expr:
                    raise DuplicateNameError(f"conflicting definitions of {name!r}")
                continue
            env.add(name, expr)
        return env

    def __getitem__(self, name: str) -> RFExpr:
        try:
            return self._defs[name]
        except KeyError:
            raise UnknownNameError(f"unknown function {name!r}") from None

    def __contains__(self, name: object) -> bool:
        return name in self._defs

    def __iter__(self):
        return iter(self._defs)

    def __len__(self) -> int:
        return len(self._defs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DefEnv) and list(self._defs.items()) == list(other._defs.items())

    def __repr__(self) -> str:
        return f"DefEnv({list(self._defs)})"

    def items(self):
        return self._defs.items()

    @property
    def names(self) -> list[str]:
        return list(self._defs)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def arity_of(self, name: str) -> int:
        if name not in self._arity:
            raise UnknownNameError(f"unknown function {name!r}")
        return self._arity[name]

    def resolve(self, expr: RFExpr) -> RFExpr:
        """Follow ``Call`` nodes until reaching a structural node."""
        while isinstance(expr, Call):
            expr = self[expr.name]
        return expr


# ----------------------------------------------------------------------------
# Arity


def _arity(expr: RFExpr, known: dict[str, int]) -> int:
    if isinstance(expr, (Zero, Succ)):
        return 1
    if isinstance(expr, Const):
        if expr.value < 0 or expr.arity < 0:
            raise ArityError("constants and arities are natural numbers", expr)
        return expr.arity
    if isinstance(expr, Proj):
        if not 1 <= expr.i <= expr.n:
            raise ArityError(f"projection index {expr.i} outside 1..{expr.n}", expr)
        return expr.n
    if isinstance(expr, Call):
        if expr.name not in known:
            raise UnknownNameError(f"unknown function {expr.name!r}")
        return known[expr.name]
    if isinstance(expr, Compose):
        head = _arity(expr.f, known)
        if head != len(expr.gs):
            raise ArityError(
                f"head has arity {head} but {len(expr.gs)} argument(s) supplied", expr
            )
        arities = {_arity(g, known) for g in expr.gs}
        if len(arities) > 1:
            raise ArityError(f"arguments disagree on arity {sorted(arities)}", expr)
        if not arities:
            raise ArityError("composition needs at least one argument", expr)
        return arities.pop()
    if isinstance(expr, PrimRec):
        n = _arity(expr.base, known)
        if _arity(expr.step, known) != n + 2:
            raise ArityError(
                f"step must have arity {n + 2} for a base of arity {n}", expr
            )
        return n + 1
    if isinstance(expr, Mu):
        body = _arity(expr.body, known)
        if body < 1:
            raise ArityError("minimisation needs a body of arity >= 1", expr)
        if expr.bound is not None and expr.bound < 0:
            raise ArityError("bound must be a natural number", expr)
        return body - 1
    raise TypeError(f"not an RFExpr: {expr!r}")


def arity(expr: RFExpr, env: DefEnv | None = None) -> int:
    """Number of arguments taken by ``expr``; raises ArityError if ill-formed."""
    known = dict(env._arity) if env is not None else {}
    return _arity(expr, known)


def is_primitive_recursive(expr: RFExpr, env: DefEnv | None = None) -> bool:
    """True iff no unbounded ``mu`` is reachable from ``expr``.

    Bounded minimisation counts as primitive recursive.
    """
    seen: set[str] = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Mu) and node.bound is None:
            return False
        if isinstance(node, Call):
            if node.name in seen:
                continue
            seen.add(node.name)
            if env is None:
                raise UnknownNameError(f"unknown function {node.name!r}")
            stack.append(env[node.name])
        stack.extend(children(node))
    return True


# ----------------------------------------------------------------------------
# Printing


def format_expr(expr: RFExpr) -> str:
    if isinstance(expr, Zero):
        return "zero"
    if isinstance(expr, Succ):
        return "succ"
    if isinstance(expr, Const):
        if expr.arity == 1:
            return f"const({expr.value})"
        return f"const({expr.value}, {expr.arity})"
    if isinstance(expr, Proj):
        return f"proj({expr.n}, {expr.i})"
    if isinstance(expr, Compose):
        return "comp(" + ", ".join(format_expr(e) for e in (expr.f, *expr.gs)) + ")"
    if isinstance(expr, PrimRec):
        return f"primrec({format_expr(expr.base)}, {format_expr(expr.step)})"
    if isinstance(expr, Mu):
        if expr.bound is None:
            return f"mu({format_expr(expr.body)})"
        return f"mu({format_expr(expr.body)}, bound={expr.bound})"
    if isinstance(expr, Call):
        return expr.name
    raise TypeError(f"not an RFExpr: {expr!r}")


def format_env(env: DefEnv) -> str:
    return "".join(f"def {name} = {format_expr(expr)}\n" for name, expr in env.items())


# ----------------------------------------------------------------------------
# Parsing

KEYWORDS = {"def", "zero", "succ", "const", "proj", "comp", "primrec", "mu", "bound"}

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<nat>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[(),=])"
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise RFSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            word = m.group()
            if (kind == "ident" and word in KEYWORDS) or kind == "punct":
                kind = word
            toks.append(_Tok(kind, word, line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def fail(self, expected: tuple[str, ...]):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise RFSyntaxError(f"unexpected {found}", t.line, t.col, expected)

    def expect(self, kind: str, shown: str | None = None) -> _Tok:
        if self.tok.kind != kind:
            self.fail((shown or repr(kind),))
        t = self.tok
        self.pos += 1
        return t

    def nat(self) -> int:
        return int(self.expect("nat", "NAT").text)

    def definitions(self) -> Iterator[tuple[str, RFExpr, _Tok]]:
        while self.tok.kind != "eof":
            start = self.expect("def", "'def'")
            name = self.expect("ident", "IDENT").text
            self.expect("=", "'='")
            yield name, self.expr(), start

    def expr(self) -> RFExpr:
        t = self.tok
        self.pos += 1
        if t.kind == "zero":
            return Zero()
        if t.kind == "succ":
            return Succ()
        if t.kind == "ident":
            return Call(t.text)
        if t.kind == "const":
            self.expect("(", "'('")
            k = self.nat()
            n = 1
            if self.tok.kind == ",":
                self.pos += 1
                n = self.nat()
            self.expect(")", "')'")
            return Const(k, n)
        if t.kind == "proj":
            self.expect("(", "'('")
            n = self.nat()
            self.expect(",", "','")
            i = self.nat()
            self.expect(")", "')'")
            return Proj(n, i)
        if t.kind == "comp":
            self.expect("(", "'('")
            parts = [self.expr()]
            while self.tok.kind == ",":
                self.pos += 1
                parts.append(self.expr())
            self.expect(")", "')'")
            return Compose(parts[0], tuple(parts[1:]))
        if t.kind == "primrec":
            self.expect("(", "'('")
            base = self.expr()
            self.expect(",", "','")
            step = self.expr()
            self.expect(")", "')'")
            return PrimRec(base, step)
        if t.kind == "mu":
            self.expect("(", "'('")
            body = self.expr()
            bound = None
            if self.tok.kind == ",":
                self.pos += 1
                self.expect("bound", "'bound'")
                self.expect("=", "'='")
                bound = self.nat()
            self.expect(")", "')'")
            return Mu(body, bound)
        self.pos -= 1
        self.fail(("zero", "succ", "const", "proj", "comp", "primrec", "mu", "IDENT"))


def parse_rf(text: str, prelude: DefEnv | None = None) -> DefEnv:
    """Parse a ``.rf`` source into a checked DefEnv.

    ``prelude`` definitions are visible to calls but are not part of the
    returned environment.
    """
    parser = _Parser(text)
    env = DefEnv()
    known = dict(prelude._arity) if prelude is not None else {}
    for name, expr, tok in parser.definitions():
        if name in env or name in known:
            raise DuplicateNameError(f"{tok.line}:{tok.col}: duplicate definition of {name!r}")
        try:
            known[name] = _arity(expr, known)
        except RFError as exc:
            raise type(exc)(f"{tok.line}:{tok.col}: in {name}: {exc}") from None
        env._defs[name] = expr
        env._arity[name] = known[name]
    return env


def parse_expr(text: str, env: DefEnv | None = None) -> RFExpr:
    """Parse a single expression and check its arity against ``env``."""
    parser = _Parser(text)
    expr = parser.expr()
    if parser.tok.kind != "eof":
        parser.fail(("end of input",))
    arity(expr, env)
    return expr


def with_prelude(prelude: DefEnv, env: DefEnv) -> DefEnv:
    """``prelude`` followed by ``env``: the environment ``env``'s calls see."""
    return prelude.merged(env)
