"""The halting verdict on its computable part, with the degree of uncertainty.

Degrees:

1. syntactically total (primitive recursive) and evaluated;
2. defined, shown by running it;
3. undefined, shown by a certificate (periodic snapshot, exhausted bounded
   search, constant-false condition, or a polynomial with no usable root);
4. unknown within the budget.

Every verdict other than ``Unknown`` is sound; ``Unknown`` is always allowed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from . import rf
from .compiler import compile_rf
from .evaluator import (
    Defined,
    Evaluator,
    NoIntegerRoot,
    ProvenUndefined,
    UndefReason,
    match_kernel,
    reason_to_dict,
)
from .machine import Halted, ImpProgram, _lowered, initial, run
from .polynomial import Polynomial, prove_empty_search
from .rf import Call, Compose, Const, DefEnv, Mu, PrimRec, Proj, RFExpr, Succ, Zero

# ----------------------------------------------------------------------------
# Verdicts


@dataclass(frozen=True)
class Halts:
    value: int
    steps: int


@dataclass(frozen=True)
class DivergesPeriodic:
    start: int
    period: int


@dataclass(frozen=True)
class DivergesProven:
    reason: UndefReason


@dataclass(frozen=True)
class NonRecursiveDefinition:
    explanation: str


@dataclass(frozen=True)
class Unknown:
    fuel_spent: int
    snapshots_checked: int
    note: str | None = None


Verdict = Union[Halts, DivergesPeriodic, DivergesProven, NonRecursiveDefinition, Unknown]

REGRESS = "infinite regress"


@dataclass(frozen=True)
class OnInput:
    args: tuple[int, ...]


@dataclass(frozen=True)
class OnAnyInput:
    pass


@dataclass(frozen=True)
class OnEveryInput:
    pass


Mode = Union[OnInput, OnAnyInput, OnEveryInput]


@dataclass(frozen=True)
class RFTarget:
    expr: RFExpr
    env: DefEnv = field(default_factory=DefEnv)


@dataclass(frozen=True)
class DiagonalTarget:
    """The diagonal ``d(n) = theta(n, n)`` over ``functions``, computed by the analyzer itself.

    Index ``len(functions)`` stands for the diagonal's own position: asking
    for it makes the analyzer analyze its own running request.
    """

    functions: tuple[RFExpr, ...]
    env: DefEnv = field(default_factory=DefEnv)

    @property
    def own_index(self) -> int:
        return len(self.functions)


Target = Union[RFTarget, ImpProgram, DiagonalTarget]


@dataclass(frozen=True)
class ProblemSpec:
    target: Target
    mode: Mode = OnInput(())

    def __post_init__(self):
        if isinstance(self.mode, OnInput):
            object.__setattr__(self, "mode", OnInput(tuple(int(a) for a in self.mode.args)))
            n = target_arity(self.target)
            if len(self.mode.args) != n:
                raise ValueError(f"target takes {n} argument(s), got {len(self.mode.args)}")
            if any(a < 0 for a in self.mode.args):
                raise ValueError("arguments are natural numbers")


def target_arity(target: Target) -> int:
    if isinstance(target, RFTarget):
        return rf.arity(target.expr, target.env)
    if isinstance(target, ImpProgram):
        return target.n_inputs
    if isinstance(target, DiagonalTarget):
        return 1
    raise TypeError(f"unsupported target {target!r}")


@dataclass(frozen=True)
class AnalyzerConfig:
    fuel: int = 10**6
    max_snapshots: int = 10**5
    root_search: bool = True
    cycle_memory: bool = False
    advisory_steps: int = 10**4

    def __post_init__(self):
        if self.fuel <= 0 or self.max_snapshots <= 0:
            raise ValueError("fuel and max_snapshots must be positive")


@dataclass(frozen=True)
class Analysis:
    """A verdict and its degree; ``degree`` is None for NonRecursiveDefinition."""

    verdict: Verdict
    degree: int | None
    advisories: tuple[str, ...] = ()
    events: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        d = verdict_to_dict(self.verdict)
        if self.degree is not None:
            d["degree"] = self.degree
        if self.advisories:
            d["advisories"] = list(self.advisories)
        return d


def verdict_to_dict(v: Verdict) -> dict:
    if isinstance(v, Halts):
        return {"verdict": "Halts", "value": v.value, "steps": v.steps}
    if isinstance(v, DivergesPeriodic):
        return {"verdict": "DivergesPeriodic", "start": v.start, "period": v.period}
    if isinstance(v, DivergesProven):
        return {"verdict": "DivergesProven", **reason_to_dict(v.reason)}
    if isinstance(v, NonRecursiveDefinition):
        return {"verdict": "NonRecursiveDefinition", "explanation": v.explanation}
    d = {"verdict": "Unknown", "fuel_spent": v.fuel_spent, "snapshots_checked": v.snapshots_checked}
    if v.note:
        d["note"] = v.note
    return d


def check_degree(verdict: Verdict, degree: int, target: Target) -> None:
    """The degree invariants; raises AssertionError when violated."""
    if degree == 1:
        assert isinstance(verdict, Halts)
        # a diagonal target delegates to a listed function, checked on its own
        assert isinstance(target, DiagonalTarget) or (
            isinstance(target, RFTarget) and rf.is_primitive_recursive(target.expr, target.env)
        )
    elif degree == 2:
        assert isinstance(verdict, Halts)
    elif degree == 3:
        assert isinstance(verdict, (DivergesProven, DivergesPeriodic))
    elif degree == 4:
        assert isinstance(verdict, Unknown)
    else:
        assert degree is None and isinstance(verdict, NonRecursiveDefinition)


# ----------------------------------------------------------------------------
# Cycle detection


class _Runner:
    """Mutable machine state for fast stepping."""

    __slots__ = ("ops", "regs", "tgts", "n", "pc", "vals")

    def __init__(self, program: ImpProgram, inputs):
        self.ops, self.regs, self.tgts = _lowered(program)
        self.n = len(self.ops)
        s = initial(program, inputs)
        self.pc, self.vals = s.pc, list(s.values)

    def step(self) -> bool:
        """Advance one instruction; False when already halted."""
        pc = self.pc
        if pc >= self.n:
            return False
        op = self.ops[pc]
        if op == 2:
            self.pc = self.tgts[pc] if self.vals[self.regs[pc]] else pc + 1
        elif op == 1:
            r = self.regs[pc]
            if self.vals[r]:
                self.vals[r] -= 1
            self.pc = pc + 1
        elif op == 0:
            self.vals[self.regs[pc]] += 1
            self.pc = pc + 1
        else:
            self.pc = self.n
        return True

    def same(self, other: "_Runner") -> bool:
        return self.pc == other.pc and self.vals == other.vals

    def key(self) -> tuple:
        return (self.pc, *self.vals)


def detect_cycle(program: ImpProgram, inputs, max_steps: int, memory: bool = False) -> tuple[int, int] | None:
    """``(start, period)`` with snapshot(start) == snapshot(start + period), or None.

    ``start`` is the first snapshot that recurs and ``period`` the least
    period, so both are minimal. Tortoise and hare by default; ``memory``
    hashes every snapshot instead, which finds the cycle as soon as it
    closes. Only ``max_steps`` snapshots are examined; a halting run gives None.
    """
    if max_steps <= 0:
        raise ValueError("max_steps must be positive")
    if memory:
        r = _Runner(program, inputs)
        seen: dict[tuple, int] = {r.key(): 0}
        for t in range(1, max_steps + 1):
            if not r.step():
                return None
            k = r.key()
            if k in seen:
                return seen[k], t - seen[k]
            seen[k] = t
        return None

    tort, hare = _Runner(program, inputs), _Runner(program, inputs)
    t = 0
    while True:
        if 2 * (t + 1) > max_steps:
            return None
        if not hare.step() or not hare.step():
            return None
        tort.step()
        t += 1
        if tort.same(hare):
            break
    # least start: walk one pointer from the beginning, both at equal speed
    tort = _Runner(program, inputs)
    start = 0
    while not tort.same(hare):
        tort.step()
        hare.step()
        start += 1
    period = 1
    hare.step()
    while not tort.same(hare):
        hare.step()
        period += 1
    return start, period


def snapshot_at(program: ImpProgram, inputs, t: int):
    r = _Runner(program, inputs)
    for _ in range(t):
        r.step()
    return (r.pc, tuple(r.vals))


def verify_cycle(program: ImpProgram, inputs, start: int, period: int) -> bool:
    """Independent re-simulation: are the two snapshots equal and not halted?"""
    if period < 1:
        return False
    a = snapshot_at(program, inputs, start)
    b = snapshot_at(program, inputs, start + period)
    return a == b and a[0] < len(program)


def growth_suspect(program: ImpProgram, inputs, steps: int) -> bool:
    """The unbounded-growth heuristic: some pc revisited with every register
    at least as large, at least one larger, and the same zero pattern.

    Advisory only; counter machines can still halt after such a visit.
    """
    r = _Runner(program, inputs)
    last: dict[int, list[int]] = {}
    for _ in range(steps):
        prev = last.get(r.pc)
        cur = r.vals
        if prev is not None and prev != cur:
            if all(b >= a and (a == 0) == (b == 0) for a, b in zip(prev, cur)):
                return True
        last[r.pc] = list(cur)
        if not r.step():
            return False
    return False


# ----------------------------------------------------------------------------
# Polynomial recognition of mu bodies

X = Polynomial.x()


class _NotPolynomial(Exception):
    pass


class _Recognizer:
    """Symbolic evaluation of a body at constant prefix arguments and a variable x.

    Conservative: ``plus`` and ``times`` of polynomials, successor, constants
    and projections; anything with only constant arguments is evaluated
    concretely; a ``primrec`` whose recursion argument is constant is unrolled.
    Everything else is rejected.
    """

    UNROLL = 64

    def __init__(self, env: DefEnv, fuel: int = 10**5):
        self.env = env
        self.ev = Evaluator(env)
        self.fuel = fuel

    def concrete(self, expr: RFExpr, args: list[Polynomial]) -> Polynomial:
        out = self.ev.eval(expr, [a.const_value() for a in args], self.fuel)
        if not isinstance(out, Defined):
            raise _NotPolynomial
        return Polynomial.const(out.value)

    def value(self, expr: RFExpr, args: list[Polynomial]) -> Polynomial:
        if all(a.is_const() for a in args) and all(a.const_value() >= 0 for a in args):
            return self.concrete(expr, args)
        if isinstance(expr, Call):
            return self.value(self.env[expr.name], args)
        if isinstance(expr, (Zero, Const)):
            return Polynomial.const(0 if isinstance(expr, Zero) else expr.value)
        if isinstance(expr, Succ):
            return args[0] + Polynomial.const(1)
        if isinstance(expr, Proj):
            return args[expr.i - 1]
        if isinstance(expr, Compose):
            return self.value(expr.f, [self.value(g, args) for g in expr.gs])
        if isinstance(expr, PrimRec):
            kernel = match_kernel(expr, self.env)
            if kernel == "plus":
                return args[0] + args[1]
            if kernel == "times":
                return args[0] * args[1]
            last = args[-1]
            if kernel is None and last.is_const() and last.const_value() <= self.UNROLL:
                xs = args[:-1]
                v = self.value(expr.base, xs)
                for t in range(last.const_value()):
                    v = self.value(expr.step, [*xs, Polynomial.const(t), v])
                return v
        raise _NotPolynomial

    def monus_args(self, expr: RFExpr, args: list[Polynomial]):
        """(a, b) when ``expr(args)`` is ``monus(a, b)``."""
        expr = self.env.resolve(expr)
        if match_kernel(expr, self.env) == "monus":
            return args[0], args[1]
        if isinstance(expr, Compose) and match_kernel(self.env.resolve(expr.f), self.env) == "monus":
            return self.value(expr.gs[0], args), self.value(expr.gs[1], args)
        return None

    def zero_condition(self, expr: RFExpr, args: list[Polynomial]) -> tuple[Polynomial, int]:
        """(P, L) with ``expr(args) == 0`` iff ``P(x) == 0 and x > L``."""
        try:
            return self.value(expr, args), -1
        except _NotPolynomial:
            pass
        node = self.env.resolve(expr)
        if not isinstance(node, Compose):
            raise _NotPolynomial
        head = match_kernel(self.env.resolve(node.f), self.env)
        if head == "plus" and len(node.gs) == 2:
            g1, g2 = node.gs
            m1, m2 = self.monus_args(g1, args), self.monus_args(g2, args)
            if m1 and m2 and m1 == (m2[1], m2[0]):
                # |a - b| == 0 iff a == b
                return m1[0] - m1[1], -1
            p1, l1 = self.zero_condition(g1, args)
            p2, l2 = self.zero_condition(g2, args)
            # a sum of naturals is 0 iff both are; over the integers p1^2 + p2^2 == 0 iff both are
            if p2.is_zero() or p1.is_zero():
                return (p1 if p2.is_zero() else p2), max(l1, l2)
            return p1 * p1 + p2 * p2, max(l1, l2)
        if head == "nsg" and len(node.gs) == 1:
            inner = self.env.resolve(node.gs[0])
            m = self.monus_args(inner, args)
            if m is None and isinstance(inner, Compose) and match_kernel(self.env.resolve(inner.f), self.env) == "nsg":
                # nsg(nsg(e)) == 0 iff e == 0
                return self.zero_condition(inner.gs[0], args)
            if m is not None:
                a, b = m
                # nsg(a - b) == 0 iff a > b; usable when a is x and b constant
                if a == X and b.is_const():
                    return Polynomial(), b.const_value()
            raise _NotPolynomial
        if head is None and isinstance(self.env.resolve(node.f), Compose):
            # a composed definition such as le or absdiff: inline it
            return self.zero_condition(node.f, [self.value(g, args) for g in node.gs])
        raise _NotPolynomial


def recognize_search(expr: RFExpr, args: tuple[int, ...], env: DefEnv) -> tuple[Polynomial, int] | None:
    """For an unbounded ``mu`` (possibly behind calls): the polynomial condition of its body."""
    node = env.resolve(expr)
    if not isinstance(node, Mu) or node.bound is not None:
        return None
    rec = _Recognizer(env)
    try:
        p, lower = rec.zero_condition(node.body, [Polynomial.const(a) for a in args] + [X])
    except (_NotPolynomial, rf.RFError):
        return None
    if p.is_zero():
        return None
    return p, lower


# ----------------------------------------------------------------------------
# The pipeline


class _Context:
    """Per-analysis stack of requests currently being analyzed."""

    def __init__(self):
        self.stack: list[tuple] = []
        self.events: list[str] = []


def _key(spec: ProblemSpec) -> tuple:
    t = spec.target
    ident = ("diagonal", t.functions) if isinstance(t, DiagonalTarget) else ("target", id(t))
    return (ident, spec.mode)


def analyze(spec: ProblemSpec, config: AnalyzerConfig | None = None) -> Analysis:
    """Classify a halting question; see the module docstring for the degrees."""
    config = config if config is not None else AnalyzerConfig()
    return _analyze(spec, config, _Context())


def _analyze(spec: ProblemSpec, config: AnalyzerConfig, ctx: _Context) -> Analysis:
    key = _key(spec)
    if key in ctx.stack:
        ctx.events.append(f"regress: the request {len(ctx.stack)} level(s) up asks for itself")
        return _done(Analysis(Unknown(0, 0, REGRESS), 4, events=tuple(ctx.events)), spec)
    ctx.stack.append(key)
    try:
        result = _pipeline(spec, config, ctx)
    finally:
        ctx.stack.pop()
    return _done(
        Analysis(result.verdict, result.degree, result.advisories, tuple(ctx.events)),
        spec,
    )


def _done(a: Analysis, spec: ProblemSpec) -> Analysis:
    check_degree(a.verdict, a.degree, spec.target)
    return a


def _pipeline(spec: ProblemSpec, config: AnalyzerConfig, ctx: _Context) -> Analysis:
    if isinstance(spec.mode, (OnAnyInput, OnEveryInput)):
        which = "some" if isinstance(spec.mode, OnAnyInput) else "every"
        return Analysis(
            NonRecursiveDefinition(
                f"halting on {which} input quantifies over all natural numbers; "
                "that question is not a recursive definition, so nothing is run"
            ),
            None,
        )
    args = spec.mode.args
    target = spec.target

    if isinstance(target, DiagonalTarget):
        n = args[0]
        if n == target.own_index:
            inner = spec
        elif n < len(target.functions):
            inner = ProblemSpec(RFTarget(target.functions[n], target.env), OnInput((n,)))
        else:
            raise IndexError(f"index {n} outside the list of {len(target.functions)} function(s)")
        sub = _analyze(inner, config, ctx)
        return Analysis(sub.verdict, sub.degree, sub.advisories)

    if isinstance(target, RFTarget):
        expr, env = target.expr, target.env
        ev = Evaluator(env)
        out = ev.eval(expr, args, config.fuel)
        if isinstance(out, Defined):
            degree = 1 if rf.is_primitive_recursive(expr, env) else 2
            return Analysis(Halts(out.value, out.steps), degree)
        if isinstance(out, ProvenUndefined):
            return Analysis(DivergesProven(out.reason), 3)
        fuel_spent = out.fuel_spent
        program = compile_rf(expr, env)
    else:
        program = target
        res = run(program, args, config.fuel)
        if isinstance(res, Halted):
            return Analysis(Halts(res.output, res.steps), 2)
        fuel_spent = config.fuel

    cyc = detect_cycle(program, args, config.max_snapshots, memory=config.cycle_memory)
    if cyc is not None:
        return Analysis(DivergesPeriodic(*cyc), 3)

    if config.root_search and isinstance(target, RFTarget):
        found = recognize_search(target.expr, args, target.env)
        if found is not None:
            cert = prove_empty_search(*found)
            if cert is not None:
                return Analysis(DivergesProven(cert), 3)

    advisories = ()
    if growth_suspect(program, args, min(config.advisory_steps, config.max_snapshots)):
        advisories = ("suspect: B.1",)
    return Analysis(Unknown(fuel_spent, config.max_snapshots), 4, advisories)


def verify_verdict(spec: ProblemSpec, verdict: Verdict) -> bool:
    """Re-check a verdict's certificate without the analyzer."""
    target = spec.target
    if isinstance(verdict, DivergesPeriodic):
        program = target if isinstance(target, ImpProgram) else compile_rf(target.expr, target.env)
        return verify_cycle(program, spec.mode.args, verdict.start, verdict.period)
    if isinstance(verdict, DivergesProven) and isinstance(verdict.reason, NoIntegerRoot):
        return verdict.reason.verify()
    return True
