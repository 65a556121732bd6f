"""Gödel numbering of the equational arithmetic in :mod:`haltlab.logic`.

Symbol codes (all odd)::

    0   1      S   3      =   5      (   7      )   9      ,  11
    x  13      ∃  15      |  17      :  31      notisdef  33

    rules       DefiningEquation 19, Reflexivity 21, Symmetry 23,
                Transitivity 25, Congruence 27, ExistsIntro 29
    variables   k, y, z, u, v, w, v7, v8, ...  ->  35, 39, 43, ...  (35 + 4(j-1))
    functions   j-th symbol of the environment ->  37 + 4j

Function symbols are numbered in :meth:`logic.Symbols.all_symbols` order, so
function codes depend on the environment; every other code is fixed.

A single symbol (a variable or ``0``) is encoded by its own code, so
``encode(Var("x")) == 13``. Anything longer is a symbol sequence
``c1 .. ck`` encoded as ``2**c1 * 3**c2 * ... * p_k**ck``; sequence codes are
even and symbol codes odd, so the two never collide.

Token layout:

* ``S t`` is a prefix ``S`` (no parentheses), ``f(a, b)`` is spelled out;
* ``∃v (t = v)`` is ``∃ v ( t = v )``;
* a proof line is ``RULE ( refs ) [ ( extra ) ] : formula`` where the second
  group carries the congruence position (as a numeral) or the witness term,
  and lines are joined by ``|``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count

from . import logic
from .evaluator import Defined, eval_with_proof
from .logic import ExistsEq, Eq, FnApp, Proof, ProofLine, SuccApp, Var, ZeroSym
from .rf import Call, DefEnv

ZERO_C, SUCC_C, EQ_C, LP, RP, COMMA, X_C, EXISTS_C, BAR, COLON, NOTISDEF_C = 1, 3, 5, 7, 9, 11, 13, 15, 17, 31, 33
RULE_CODES = {
    "DefiningEquation": 19,
    "Reflexivity": 21,
    "Symmetry": 23,
    "Transitivity": 25,
    "Congruence": 27,
    "ExistsIntro": 29,
}
RULE_NAMES = {v: k for k, v in RULE_CODES.items()}
VAR_NAMES = ("x", "k", "y", "z", "u", "v", "w")
NOTISDEF = "notisdef"


class NotACode:
    """Result of decoding a number that encodes nothing."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "NOT_A_CODE"

    def __bool__(self) -> bool:
        return False


NOT_A_CODE = NotACode()


class GodelError(ValueError):
    pass


# ----------------------------------------------------------------------------
# Primes and prime-power sequences


_PRIMES = [2, 3, 5, 7, 11, 13]


def nth_prime(i: int) -> int:
    """0-based: nth_prime(0) == 2."""
    while len(_PRIMES) <= i:
        c = _PRIMES[-1] + 2
        while any(c % p == 0 for p in _PRIMES if p * p <= c):
            c += 2
        _PRIMES.append(c)
    return _PRIMES[i]


def encode_seq(codes: list[int]) -> int:
    out = 1
    for i, c in enumerate(codes):
        out *= nth_prime(i) ** c
    return out


def decode_seq(n: int) -> list[int] | None:
    """Exponents of 2, 3, 5, ... when ``n`` is a gap-free prime-power product."""
    if n < 2:
        return None
    out = []
    for i in count():
        if n == 1:
            return out
        p = nth_prime(i)
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e == 0:
            return None
        out.append(e)
    return out


# ----------------------------------------------------------------------------
# Symbol table


def var_code(name: str) -> int:
    if name == "x":
        return X_C
    if name in VAR_NAMES:
        j = VAR_NAMES.index(name)
    elif name.startswith("v") and name[1:].isdigit() and int(name[1:]) >= len(VAR_NAMES):
        j = int(name[1:])
    else:
        raise GodelError(f"variable {name!r} has no code")
    return 35 + 4 * (j - 1)


def var_name(code: int) -> str | None:
    if code == X_C:
        return "x"
    if code >= 35 and (code - 35) % 4 == 0:
        j = (code - 35) // 4 + 1
        return VAR_NAMES[j] if j < len(VAR_NAMES) else f"v{j}"
    return None


class SymbolTable:
    """Codes of the function symbols of one environment."""

    def __init__(self, env: DefEnv | None = None):
        self.env = env if env is not None else DefEnv()
        self.functions = logic.Symbols(self.env).all_symbols()
        self._fn_code = {name: 37 + 4 * j for j, name in enumerate(self.functions)}
        self._fn_name = {v: k for k, v in self._fn_code.items()}

    def fn_code(self, name: str) -> int:
        if name == NOTISDEF:
            return NOTISDEF_C
        try:
            return self._fn_code[name]
        except KeyError:
            raise GodelError(f"function symbol {name!r} is not in the environment") from None

    def fn_name(self, code: int) -> str | None:
        if code == NOTISDEF_C:
            return NOTISDEF
        return self._fn_name.get(code)

    def rows(self) -> list[tuple[str, int]]:
        """The full table as (symbol, code) rows, fixed part first."""
        fixed = [("0", 1), ("S", 3), ("=", 5), ("(", 7), (")", 9), (",", 11), ("x", 13), ("∃", 15), ("|", 17)]
        fixed += sorted(RULE_CODES.items(), key=lambda kv: kv[1])
        fixed += [(":", COLON), (NOTISDEF, NOTISDEF_C)]
        fixed += [(name, var_code(name)) for name in VAR_NAMES[1:]]
        return fixed + [(name, self._fn_code[name]) for name in self.functions]


# ----------------------------------------------------------------------------
# Objects <-> token lists


def term_tokens(t: logic.Term, table: SymbolTable) -> list[int]:
    if isinstance(t, ZeroSym):
        return [ZERO_C]
    if isinstance(t, Var):
        return [var_code(t.name)]
    if isinstance(t, SuccApp):
        return [SUCC_C] * t.count + term_tokens(t.arg, table)
    if isinstance(t, FnApp):
        out = [table.fn_code(t.fn), LP]
        for i, a in enumerate(t.args):
            if i:
                out.append(COMMA)
            out += term_tokens(a, table)
        return out + [RP]
    raise GodelError(f"not a term: {t!r}")


def formula_tokens(f: logic.Formula, table: SymbolTable) -> list[int]:
    if isinstance(f, Eq):
        return term_tokens(f.lhs, table) + [EQ_C] + term_tokens(f.rhs, table)
    if isinstance(f, ExistsEq):
        v = var_code(f.var)
        return [EXISTS_C, v, LP] + term_tokens(f.lhs, table) + [EQ_C, v, RP]
    raise GodelError(f"not a formula: {f!r}")


def proof_tokens(p: Proof, table: SymbolTable) -> list[int]:
    out: list[int] = []
    for n, line in enumerate(p.lines):
        if n:
            out.append(BAR)
        out += [RULE_CODES[line.rule], LP]
        for i, r in enumerate(line.refs):
            if i:
                out.append(COMMA)
            out += term_tokens(logic.numeral(r), table)
        out.append(RP)
        if line.position is not None:
            out += [LP] + term_tokens(logic.numeral(line.position), table) + [RP]
        elif line.witness is not None:
            out += [LP] + term_tokens(line.witness, table) + [RP]
        out += [COLON] + formula_tokens(line.formula, table)
    return out


def tokens_of(obj, table: SymbolTable) -> list[int]:
    if isinstance(obj, Proof):
        return proof_tokens(obj, table)
    if isinstance(obj, (Eq, ExistsEq)):
        return formula_tokens(obj, table)
    return term_tokens(obj, table)


def code_of_tokens(tokens: list[int]) -> int:
    return tokens[0] if len(tokens) == 1 else encode_seq(tokens)


def tokens_of_code(code: int) -> list[int] | None:
    if code <= 0:
        return None
    if code % 2 == 1:
        return [code]
    toks = decode_seq(code)
    # one-symbol objects are coded by the symbol itself, never as 2**c
    return toks if toks and len(toks) > 1 else None


class _Reader:
    def __init__(self, toks: list[int], table: SymbolTable):
        self.toks, self.pos, self.table = toks, 0, table

    def peek(self) -> int | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, want: int | None = None) -> int:
        t = self.peek()
        if t is None or (want is not None and t != want):
            raise GodelError("malformed code")
        self.pos += 1
        return t

    def term(self) -> logic.Term:
        t = self.take()
        if t == ZERO_C:
            return logic.ZERO
        if t == SUCC_C:
            n = 1
            while self.peek() == SUCC_C:
                self.take()
                n += 1
            return logic.succ(self.term(), n)
        name = var_name(t)
        if name is not None:
            return Var(name)
        fn = self.table.fn_name(t)
        if fn is None:
            raise GodelError(f"symbol {t} cannot start a term")
        self.take(LP)
        args = []
        if self.peek() != RP:
            args.append(self.term())
            while self.peek() == COMMA:
                self.take()
                args.append(self.term())
        self.take(RP)
        return FnApp(fn, tuple(args))

    def formula(self) -> logic.Formula:
        if self.peek() == EXISTS_C:
            self.take()
            v = self.take()
            name = var_name(v)
            if name is None:
                raise GodelError("∃ must bind a variable")
            self.take(LP)
            lhs = self.term()
            self.take(EQ_C)
            self.take(v)
            self.take(RP)
            return ExistsEq(name, lhs)
        lhs = self.term()
        self.take(EQ_C)
        return Eq(lhs, self.term())

    def numeral(self) -> int:
        n = logic.numeral_value(self.term())
        if n is None:
            raise GodelError("expected a numeral")
        return n

    def proof_line(self) -> ProofLine:
        rule = RULE_NAMES.get(self.take())
        if rule is None:
            raise GodelError("unknown rule code")
        self.take(LP)
        refs = []
        if self.peek() != RP:
            refs.append(self.numeral())
            while self.peek() == COMMA:
                self.take()
                refs.append(self.numeral())
        self.take(RP)
        position = witness = None
        if self.peek() == LP:
            self.take()
            if rule == "Congruence":
                position = self.numeral()
            elif rule == "ExistsIntro":
                witness = self.term()
            else:
                raise GodelError(f"{rule} carries no extra group")
            self.take(RP)
        self.take(COLON)
        return ProofLine(self.formula(), rule, tuple(refs), position, witness)

    def proof(self) -> Proof:
        lines = [self.proof_line()]
        while self.peek() == BAR:
            self.take()
            lines.append(self.proof_line())
        return Proof(tuple(lines))

    def done(self) -> None:
        if self.pos != len(self.toks):
            raise GodelError("trailing symbols")


def parse_tokens(toks: list[int], table: SymbolTable):
    r = _Reader(toks, table)
    if toks and toks[0] in RULE_NAMES:
        obj = r.proof()
    elif toks and (toks[0] == EXISTS_C or EQ_C in toks):
        obj = r.formula()
    else:
        obj = r.term()
    r.done()
    return obj


# ----------------------------------------------------------------------------
# Public operations


def encode(obj, env: DefEnv | None = None) -> int:
    """Gödel number of a term, formula or proof."""
    return code_of_tokens(tokens_of(obj, SymbolTable(env)))


def decode(code: int, env: DefEnv | None = None):
    """Inverse of :func:`encode`; ``NOT_A_CODE`` for anything else."""
    toks = tokens_of_code(code)
    if not toks:
        return NOT_A_CODE
    try:
        return parse_tokens(toks, SymbolTable(env))
    except (GodelError, RecursionError):
        return NOT_A_CODE


def sub(y: int, u: int, v: int, env: DefEnv | None = None) -> int:
    """Code of the expression coded ``y`` with the term coded ``u`` put for variable ``v``.

    Works on symbol sequences: each free occurrence of the symbol ``v`` is
    replaced by the symbols of ``u``. A variable bound by ``∃`` is left alone.
    """
    table = SymbolTable(env)
    ytoks, utoks = tokens_of_code(y), tokens_of_code(u)
    if not ytoks or not utoks:
        raise GodelError("sub needs codes of a term or formula")
    if var_name(v) is None:
        raise GodelError(f"{v} is not the code of a variable")
    try:
        yobj = parse_tokens(ytoks, table)
        uobj = parse_tokens(utoks, table)
    except GodelError as exc:
        raise GodelError(f"sub needs codes of a term or formula: {exc}") from None
    if isinstance(yobj, Proof) or isinstance(uobj, (Proof, Eq, ExistsEq)):
        raise GodelError("sub substitutes a term into a term or formula")
    if ytoks[0] == EXISTS_C and ytoks[1] == v:
        return y
    out: list[int] = []
    for t in ytoks:
        out.extend(utoks if t == v else (t,))
    return code_of_tokens(out)


@dataclass(frozen=True)
class Proved:
    proof: Proof
    target: logic.Formula


@dataclass(frozen=True)
class IsDefUnknown:
    target: logic.Formula
    fuel_spent: int


def is_def(fml_code: int, u: int, budget: int, env: DefEnv):
    """Try to certify ``IsDef(fml_code, u)`` by computing a proof.

    ``fml_code`` must code ``∃k (f(x) = k)`` for a defined unary ``f``. The
    closed formula coded ``sub(fml_code, #numeral(u), 13)`` is proved by
    evaluating ``f(u)`` with proof emission, then introducing the
    existential. Returns :class:`Proved` or :class:`IsDefUnknown`; the
    latter only says no proof was found within ``budget``.
    """
    fml = decode(fml_code, env)
    if not (
        isinstance(fml, ExistsEq)
        and isinstance(fml.lhs, FnApp)
        and fml.lhs.args == (Var("x"),)
        and fml.var != "x"
    ):
        raise GodelError("is_def expects the code of ∃k (f(x) = k)")
    fn = fml.lhs.fn
    if fn not in env or env.arity_of(fn) != 1:
        raise GodelError(f"{fn!r} is not a unary definition")
    w = sub(fml_code, encode(logic.numeral(u), env), X_C, env)
    target = decode(w, env)
    outcome, proof = eval_with_proof(Call(fn), (u,), budget, env)
    if not isinstance(outcome, Defined):
        spent = getattr(outcome, "fuel_spent", budget)
        return IsDefUnknown(target, spent)
    body = Eq(FnApp(fn, (logic.numeral(u),)), logic.numeral(outcome.value))
    line = ProofLine(target, "ExistsIntro", (len(proof.lines),), witness=body.rhs)
    return Proved(Proof(proof.lines + (line,)), target)


NEG_TEMPLATE = Eq(FnApp(NOTISDEF, (Var("x"), Var("x"))), logic.numeral(1))


@dataclass(frozen=True)
class NegatedSelfReport:
    code: int
    formula: logic.Formula
    text: str


def negated_self_code(env: DefEnv | None = None) -> NegatedSelfReport:
    """Code of the negation template ``notisdef(x, x) = S(0)``, with a report.

    Nothing is decided or searched: the object theory has no symbol that
    expresses definedness, so ``notisdef`` is only a reserved tag.
    """
    table = SymbolTable(env)
    toks = formula_tokens(NEG_TEMPLATE, table)
    code = code_of_tokens(toks)
    text = "\n".join(
        [
            f"template   : {logic.format_formula(NEG_TEMPLATE)}",
            f"symbols    : {' '.join(map(str, toks))}",
            f"#Neg       : {code}",
            f"digits     : {len(str(code))}",
            "self-application: substitute the numeral of #Neg for x, i.e. Sub(#Neg, #numeral(#Neg), 13).",
            f"That numeral has {code} successor symbols, so its code is not computed here.",
            "The resulting sentence has the undecidable shape: it asserts that the formula",
            "coded by its own number is not defined at that number. No truth value is claimed.",
        ]
    )
    return NegatedSelfReport(code, NEG_TEMPLATE, text)
