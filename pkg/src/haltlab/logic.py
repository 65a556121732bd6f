"""A small equational arithmetic: terms, formulas, proofs and the proof checker.

Function symbols name nodes of the definitions in a :class:`~haltlab.rf.DefEnv`.
A definition's root is named by the definition itself (``plus``); its
subexpressions are named by child paths (``plus.1`` is the step of the
``primrec``, ``plus.1.0`` the head of that step's composition). A subexpression
that is a call is named by the callee, so ``times.1.0`` never occurs; the
symbol ``plus`` is used instead.

Each symbol has defining equations, instantiated at numerals:

=============  ==========================================================
node           equation
=============  ==========================================================
zero           ``f(a) = 0``
const(k)       ``f(a..) = S^k(0)``
succ           ``f(a) = S(a)``
proj(n, i)     ``f(a1..an) = ai``
call g         ``f(a..) = g(a..)``
comp(h, gs)    ``f(a..) = h(g1(a..), .., gm(a..))``
primrec        ``f(a.., 0) = base(a..)`` and
               ``f(a.., S(t)) = step(a.., t, f(a.., t))``
mu             ``f(a..) = S^z(0)`` given premises ``body(a.., j) = S^c(0)``
               with ``c > 0`` for ``j < z`` and ``c = 0`` for ``j = z``
=============  ==========================================================

Proofs are lists of lines; every line is either such an instance or follows
from earlier lines by reflexivity, symmetry, transitivity, congruence in one
argument position, or existential introduction.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import NamedTuple, Union

from . import rf
from .rf import DefEnv

# ----------------------------------------------------------------------------
# Terms and formulas


@dataclass(frozen=True)
class ZeroSym:
    pass


@dataclass(frozen=True)
class SuccApp:
    """``count`` stacked successors applied to ``arg`` (never itself a SuccApp)."""

    arg: "Term"
    count: int = 1


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class FnApp:
    fn: str
    args: tuple["Term", ...]


Term = Union[ZeroSym, SuccApp, Var, FnApp]


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class ExistsEq:
    """``exists var (lhs = var)``."""

    var: str
    lhs: Term


Formula = Union[Eq, ExistsEq]

ZERO = ZeroSym()


def succ(term: Term, count: int = 1) -> Term:
    if count == 0:
        return term
    if isinstance(term, SuccApp):
        return SuccApp(term.arg, term.count + count)
    return SuccApp(term, count)


def numeral(k: int) -> Term:
    return succ(ZERO, k)


def numeral_value(term: Term) -> int | None:
    """The number a closed numeral denotes, or None for any other term."""
    if isinstance(term, ZeroSym):
        return 0
    if isinstance(term, SuccApp) and isinstance(term.arg, ZeroSym):
        return term.count
    return None


def free_vars(obj: Term | Formula) -> set[str]:
    if isinstance(obj, Var):
        return {obj.name}
    if isinstance(obj, SuccApp):
        return free_vars(obj.arg)
    if isinstance(obj, FnApp):
        out: set[str] = set()
        for a in obj.args:
            out |= free_vars(a)
        return out
    if isinstance(obj, Eq):
        return free_vars(obj.lhs) | free_vars(obj.rhs)
    if isinstance(obj, ExistsEq):
        return free_vars(obj.lhs) - {obj.var}
    return set()


def substitute(obj, var: str, value: Term):
    """Replace every free occurrence of ``var`` in a term or formula."""
    if isinstance(obj, Var):
        return value if obj.name == var else obj
    if isinstance(obj, ZeroSym):
        return obj
    if isinstance(obj, SuccApp):
        return succ(substitute(obj.arg, var, value), obj.count)
    if isinstance(obj, FnApp):
        return FnApp(obj.fn, tuple(substitute(a, var, value) for a in obj.args))
    if isinstance(obj, Eq):
        return Eq(substitute(obj.lhs, var, value), substitute(obj.rhs, var, value))
    if isinstance(obj, ExistsEq):
        if obj.var == var:
            return obj
        return ExistsEq(obj.var, substitute(obj.lhs, var, value))
    raise TypeError(f"not a term or formula: {obj!r}")


# ----------------------------------------------------------------------------
# Printing and parsing


def format_term(term: Term) -> str:
    if isinstance(term, ZeroSym):
        return "0"
    if isinstance(term, Var):
        return term.name
    if isinstance(term, SuccApp):
        inner = format_term(term.arg)
        if term.count <= 3:
            return "S(" * term.count + inner + ")" * term.count
        return f"S^{term.count}({inner})"
    if isinstance(term, FnApp):
        return f"{term.fn}(" + ", ".join(format_term(a) for a in term.args) + ")"
    raise TypeError(f"not a term: {term!r}")


def format_formula(fml: Formula) -> str:
    if isinstance(fml, Eq):
        return f"{format_term(fml.lhs)} = {format_term(fml.rhs)}"
    if isinstance(fml, ExistsEq):
        return f"∃{fml.var} ({format_term(fml.lhs)} = {fml.var})"
    raise TypeError(f"not a formula: {fml!r}")


class LogicSyntaxError(ValueError):
    pass


_LTOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<sym>[A-Za-z_][A-Za-z0-9_.]*)|(?P<p>[()=,^∃]))")


def _ltokens(text: str) -> list[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _LTOKEN.match(text, pos)
        if m is None:
            raise LogicSyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        out.append(m.group(m.lastgroup))
        pos = m.end()
    return out


class _LParser:
    def __init__(self, text: str):
        self.toks = _ltokens(text)
        self.pos = 0

    def peek(self) -> str | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, want: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise LogicSyntaxError(f"expected {want or 'a token'}, found {tok!r}")
        self.pos += 1
        return tok

    def term(self) -> Term:
        tok = self.take()
        if tok.isdigit():
            return numeral(int(tok))
        if tok == "S":
            count = 1
            if self.peek() == "^":
                self.take("^")
                count = int(self.take())
            self.take("(")
            inner = self.term()
            self.take(")")
            return succ(inner, count)
        if re.match(r"[A-Za-z_]", tok):
            if self.peek() == "(":
                self.take("(")
                args = []
                if self.peek() != ")":
                    args.append(self.term())
                    while self.peek() == ",":
                        self.take(",")
                        args.append(self.term())
                self.take(")")
                return FnApp(tok, tuple(args))
            return Var(tok)
        raise LogicSyntaxError(f"unexpected {tok!r}")

    def formula(self) -> Formula:
        if self.peek() in ("∃", "E", "exists") and self.pos + 1 < len(self.toks) and self.toks[self.pos + 1] not in ("(", "="):
            self.take()
            var = self.take()
            self.take("(")
            lhs = self.term()
            self.take("=")
            rhs = self.take()
            if rhs != var:
                raise LogicSyntaxError("existential must read ∃v (t = v)")
            self.take(")")
            return ExistsEq(var, lhs)
        lhs = self.term()
        self.take("=")
        return Eq(lhs, self.term())

    def done(self):
        if self.peek() is not None:
            raise LogicSyntaxError(f"trailing input at {self.peek()!r}")


def parse_term(text: str) -> Term:
    p = _LParser(text)
    t = p.term()
    p.done()
    return t


def parse_formula(text: str) -> Formula:
    p = _LParser(text)
    f = p.formula()
    p.done()
    return f


# ----------------------------------------------------------------------------
# Function symbols


def child_symbol(parent: str, index: int, child: rf.RFExpr) -> str:
    if isinstance(child, rf.Call):
        return child.name
    return f"{parent}.{index}"


class Symbols:
    """Resolves function symbols of an environment to nodes and arities."""

    def __init__(self, env: DefEnv):
        self.env = env
        self._cache: dict[str, tuple[rf.RFExpr, int] | None] = {}

    def lookup(self, symbol: str) -> tuple[rf.RFExpr, int] | None:
        if symbol in self._cache:
            return self._cache[symbol]
        name, *path = symbol.split(".")
        found = None
        if name in self.env:
            node = self.env[name]
            try:
                for part in path:
                    if not part.isdigit():
                        raise IndexError
                    node = rf.children(node)[int(part)]
                    if isinstance(node, rf.Call):
                        raise IndexError
                found = (node, rf.arity(node, self.env))
            except IndexError:
                found = None
        self._cache[symbol] = found
        return found

    def all_symbols(self) -> list[str]:
        """Every symbol of the environment in definition order, preorder."""
        out = []
        for name, expr in self.env.items():
            stack = [(name, expr)]
            while stack:
                sym, node = stack.pop()
                out.append(sym)
                kids = [
                    (f"{sym}.{i}", c)
                    for i, c in enumerate(rf.children(node))
                    if not isinstance(c, rf.Call)
                ]
                stack.extend(reversed(kids))
        return out


# ----------------------------------------------------------------------------
# Proofs

RULES = (
    "DefiningEquation",
    "Reflexivity",
    "Symmetry",
    "Transitivity",
    "Congruence",
    "ExistsIntro",
)


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    rule: str
    refs: tuple[int, ...] = ()
    position: int | None = None
    witness: Term | None = None

    def to_dict(self) -> dict:
        d: dict = {"formula": format_formula(self.formula), "rule": self.rule, "refs": list(self.refs)}
        if self.position is not None:
            d["position"] = self.position
        if self.witness is not None:
            d["witness"] = format_term(self.witness)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ProofLine":
        witness = d.get("witness")
        return cls(
            formula=parse_formula(d["formula"]),
            rule=d["rule"],
            refs=tuple(int(r) for r in d.get("refs", ())),
            position=d.get("position"),
            witness=parse_term(witness) if witness is not None else None,
        )


@dataclass(frozen=True)
class Proof:
    """Proof lines; references are 1-based line numbers."""

    lines: tuple[ProofLine, ...] = field(default_factory=tuple)

    @property
    def conclusion(self) -> Formula | None:
        return self.lines[-1].formula if self.lines else None

    def __len__(self) -> int:
        return len(self.lines)

    def to_json(self) -> str:
        return json.dumps([line.to_dict() for line in self.lines], ensure_ascii=False, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "Proof":
        data = json.loads(text)
        if not isinstance(data, list):
            raise LogicSyntaxError("a proof file holds a JSON array of lines")
        return cls(tuple(ProofLine.from_dict(d) for d in data))


class ProofCheck(NamedTuple):
    ok: bool
    line: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _numerals(args: tuple[Term, ...]) -> list[int] | None:
    vals = [numeral_value(a) for a in args]
    return None if any(v is None for v in vals) else vals  # type: ignore[return-value]


def _defining_instance(line: ProofLine, lines: tuple[ProofLine, ...], symbols: Symbols) -> str | None:
    """None when ``line`` is a correct instance, else the reason it is not."""
    fml = line.formula
    if not isinstance(fml, Eq) or not isinstance(fml.lhs, FnApp):
        return "defining equation must be f(numerals) = t"
    lhs = fml.lhs
    found = symbols.lookup(lhs.fn)
    if found is None:
        return f"unknown function symbol {lhs.fn!r}"
    node, n = found
    if len(lhs.args) != n:
        return f"{lhs.fn} takes {n} argument(s)"
    vals = _numerals(lhs.args)
    if vals is None:
        return "defining equations are instantiated at numerals only"
    if not isinstance(node, rf.Mu) and line.refs:
        return "only minimisation instances take premises"

    def kid(i: int) -> str:
        return child_symbol(lhs.fn, i, rf.children(node)[i])

    if isinstance(node, rf.Zero):
        expected: Term = ZERO
    elif isinstance(node, rf.Const):
        expected = numeral(node.value)
    elif isinstance(node, rf.Succ):
        expected = numeral(vals[0] + 1)
    elif isinstance(node, rf.Proj):
        expected = lhs.args[node.i - 1]
    elif isinstance(node, rf.Call):
        expected = FnApp(node.name, lhs.args)
    elif isinstance(node, rf.Compose):
        expected = FnApp(kid(0), tuple(FnApp(kid(j), lhs.args) for j in range(1, len(node.gs) + 1)))
    elif isinstance(node, rf.PrimRec):
        xs, last = lhs.args[:-1], vals[-1]
        if last == 0:
            expected = FnApp(kid(0), xs)
        else:
            t = numeral(last - 1)
            expected = FnApp(kid(1), (*xs, t, FnApp(lhs.fn, (*xs, t))))
    elif isinstance(node, rf.Mu):
        z = numeral_value(fml.rhs)
        if z is None:
            return "minimisation value must be a numeral"
        if node.bound is not None and z > node.bound:
            return f"value {z} exceeds the search bound {node.bound}"
        if len(line.refs) != z + 1:
            return f"minimisation at {z} needs {z + 1} premise(s)"
        body = kid(0)
        for j, ref in enumerate(line.refs):
            prem = lines[ref - 1].formula
            want_lhs = FnApp(body, (*lhs.args, numeral(j)))
            if not isinstance(prem, Eq) or prem.lhs != want_lhs:
                return f"premise {ref} must be about {format_term(want_lhs)}"
            c = numeral_value(prem.rhs)
            if c is None:
                return f"premise {ref} must have a numeral value"
            if (j < z and c == 0) or (j == z and c != 0):
                return f"premise {ref} breaks minimality"
        return None
    else:
        return "unsupported node"
    if fml.rhs != expected:
        return f"expected right-hand side {format_term(expected)}"
    return None


def _check_line(k: int, line: ProofLine, lines: tuple[ProofLine, ...], symbols: Symbols) -> str | None:
    for r in line.refs:
        if not 1 <= r < k:
            return f"reference {r} does not precede line {k}"
    fml = line.formula
    refs = [lines[r - 1].formula for r in line.refs]
    rule = line.rule
    if rule == "DefiningEquation":
        return _defining_instance(line, lines, symbols)
    if rule == "Reflexivity":
        if line.refs or not (isinstance(fml, Eq) and fml.lhs == fml.rhs):
            return "reflexivity proves t = t"
        return None
    if rule == "Symmetry":
        if len(refs) != 1 or not isinstance(refs[0], Eq) or fml != Eq(refs[0].rhs, refs[0].lhs):
            return "symmetry flips exactly one equation"
        return None
    if rule == "Transitivity":
        if len(refs) != 2 or not all(isinstance(r, Eq) for r in refs):
            return "transitivity needs two equations"
        a, b = refs
        if a.rhs != b.lhs or fml != Eq(a.lhs, b.rhs):
            return "transitivity chain does not match"
        return None
    if rule == "Congruence":
        if len(refs) != 1 or not isinstance(refs[0], Eq) or line.position is None:
            return "congruence needs one equation and a position"
        if not (isinstance(fml, Eq) and isinstance(fml.lhs, FnApp) and isinstance(fml.rhs, FnApp)):
            return "congruence proves f(..) = f(..)"
        lhs, rhs, p = fml.lhs, fml.rhs, line.position
        if lhs.fn != rhs.fn or len(lhs.args) != len(rhs.args) or not 1 <= p <= len(lhs.args):
            return "congruence sides must share the head symbol"
        for i, (a, b) in enumerate(zip(lhs.args, rhs.args), start=1):
            if i == p:
                if (a, b) != (refs[0].lhs, refs[0].rhs):
                    return f"argument {p} must be rewritten by line {line.refs[0]}"
            elif a != b:
                return f"argument {i} differs outside position {p}"
        return None
    if rule == "ExistsIntro":
        if len(refs) != 1 or line.witness is None or not isinstance(fml, ExistsEq):
            return "existential introduction needs one equation and a witness"
        if fml.var in free_vars(fml.lhs):
            return "bound variable occurs in the body"
        if refs[0] != Eq(fml.lhs, line.witness):
            return "premise must be the body with the witness"
        return None
    return f"unknown rule {rule!r}"


def check_proof(proof: Proof, target: Formula, env: DefEnv) -> ProofCheck:
    """The proof relation: does ``proof`` derive ``target`` from ``env``?

    Total and terminating; a failed check names the first bad line.
    """
    if not proof.lines:
        return ProofCheck(False, None, "empty proof")
    symbols = Symbols(env)
    for k, line in enumerate(proof.lines, start=1):
        try:
            err = _check_line(k, line, proof.lines, symbols)
        except (IndexError, TypeError, ValueError, rf.RFError) as exc:
            err = f"malformed line: {exc}"
        if err is not None:
            return ProofCheck(False, k, err)
    if proof.lines[-1].formula != target:
        return ProofCheck(False, len(proof.lines), "last line is not the target")
    return ProofCheck(True)
