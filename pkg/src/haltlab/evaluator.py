"""Fueled evaluation of partial recursive functions.

Fuel accounting (one unit per node evaluation):

* ``zero``, ``const``, ``succ``, ``proj``: 1
* call: 1 + cost of the callee's body
* ``comp(h, g1..gm)``: 1 + cost of every ``gj`` + cost of ``h``
* ``primrec`` at ``(xs, y)``: 1 + cost(base) + sum over the ``y`` iterations of
  (1 + cost of the step)
* ``mu``: 1 + sum over the tested candidates of (1 + cost of the body)

A result is ``Defined`` exactly when this cost fits in the fuel supplied.

The default evaluator is accelerated but charges exactly the same fuel as
the plain tree walk (``accelerate=False``):

* recognised arithmetic kernels (``pred``, ``plus``, ``monus``, ``times``,
  ``sg``, ``nsg`` in their library shape) are computed natively with a
  closed-form cost;
* calls are memoised with their value and cost;
* a ``primrec`` whose step never reads the iteration counter is a
  deterministic iteration ``v -> step(xs, v)``; once a value repeats, whole
  periods are skipped and charged in one lump.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import logic, rf
from .rf import Call, Compose, Const, DefEnv, Mu, PrimRec, Proj, RFExpr, Succ, Zero

# ----------------------------------------------------------------------------
# Outcomes


@dataclass(frozen=True)
class BoundedSearchExhausted:
    bound: int


@dataclass(frozen=True)
class ConstantFalseCondition:
    pass


@dataclass(frozen=True)
class NoIntegerRoot:
    """No natural ``x > lower`` is a root of ``coeffs`` (a_0 first).

    ``cauchy_bound`` encloses every real root; ``roots`` lists all integer
    roots, each ``<= lower`` or negative.
    """

    coeffs: tuple[int, ...]
    lower: int
    cauchy_bound: int
    roots: tuple[int, ...]

    def verify(self) -> bool:
        """Re-check by brute force over the enclosing interval."""
        from .polynomial import Polynomial, cauchy_bound

        p = Polynomial(self.coeffs)
        if p.is_zero() or cauchy_bound(p) != self.cauchy_bound:
            return False
        b = self.cauchy_bound
        found = tuple(x for x in range(-b, b + 1) if p(x) == 0)
        return found == self.roots and all(r < 0 or r <= self.lower for r in found)


UndefReason = Union[BoundedSearchExhausted, ConstantFalseCondition, NoIntegerRoot]


@dataclass(frozen=True)
class Defined:
    value: int
    steps: int


@dataclass(frozen=True)
class ProvenUndefined:
    reason: UndefReason


@dataclass(frozen=True)
class Exhausted:
    fuel_spent: int


EvalOutcome = Union[Defined, ProvenUndefined, Exhausted]


def reason_to_dict(reason: UndefReason) -> dict:
    if isinstance(reason, BoundedSearchExhausted):
        return {"reason": "BoundedSearchExhausted", "bound": reason.bound}
    if isinstance(reason, ConstantFalseCondition):
        return {"reason": "ConstantFalseCondition"}
    return {
        "reason": "NoIntegerRoot",
        "polynomial": list(reason.coeffs),
        "lower": reason.lower,
        "bound": reason.cauchy_bound,
        "roots": list(reason.roots),
    }


def outcome_to_dict(outcome: EvalOutcome) -> dict:
    if isinstance(outcome, Defined):
        return {"outcome": "Defined", "value": outcome.value, "steps": outcome.steps}
    if isinstance(outcome, ProvenUndefined):
        return {"outcome": "ProvenUndefined", **reason_to_dict(outcome.reason)}
    return {"outcome": "Exhausted", "fuel_spent": outcome.fuel_spent}


class _OutOfFuel(Exception):
    pass


class _Undefined(Exception):
    def __init__(self, reason: UndefReason):
        self.reason = reason


# ----------------------------------------------------------------------------
# Syntactic facts used by the evaluator


def always_positive(expr: RFExpr, env: DefEnv, _depth: int = 0) -> bool:
    """True when every defined value of ``expr`` is >= 1."""
    if _depth > 64:
        return False
    if isinstance(expr, Call):
        return always_positive(env[expr.name], env, _depth + 1)
    if isinstance(expr, Const):
        return expr.value > 0
    if isinstance(expr, Succ):
        return True
    if isinstance(expr, Compose):
        return always_positive(expr.f, env, _depth + 1)
    if isinstance(expr, PrimRec):
        return always_positive(expr.base, env, _depth + 1) and always_positive(expr.step, env, _depth + 1)
    return False


def reads_arg(expr: RFExpr, j: int, env: DefEnv, _seen=None) -> bool:
    """Conservative: may the value *or cost* of ``expr`` depend on argument j (1-based)?"""
    if isinstance(expr, (Zero, Const)):
        return False
    if isinstance(expr, Succ):
        return j == 1
    if isinstance(expr, Proj):
        return expr.i == j
    if isinstance(expr, Call):
        return reads_arg(env[expr.name], j, env)
    if isinstance(expr, Compose):
        return any(reads_arg(g, j, env) for g in expr.gs)
    if isinstance(expr, PrimRec):
        n = rf.arity(expr.base, env)
        if j == n + 1:
            return True
        return reads_arg(expr.base, j, env) or reads_arg(expr.step, j, env)
    if isinstance(expr, Mu):
        return reads_arg(expr.body, j, env)
    return True


# ----------------------------------------------------------------------------
# Kernels: library shapes with native value and closed-form cost


class _CallOf:
    """Pattern: a call whose callee body matches ``pattern`` directly."""

    def __init__(self, pattern):
        self.pattern = pattern


def _matches(expr: RFExpr, pattern, env: DefEnv) -> bool:
    if isinstance(pattern, _CallOf):
        if not isinstance(expr, Call) or expr.name not in env:
            return False
        return _matches(env[expr.name], pattern.pattern, env)
    if type(expr) is not type(pattern):
        return False
    if isinstance(pattern, Compose):
        return len(expr.gs) == len(pattern.gs) and all(
            _matches(a, b, env) for a, b in zip((expr.f, *expr.gs), (pattern.f, *pattern.gs))
        )
    if isinstance(pattern, PrimRec):
        return _matches(expr.base, pattern.base, env) and _matches(expr.step, pattern.step, env)
    return expr == pattern


PRED = PrimRec(Const(0, 0), Proj(2, 1))
PLUS = PrimRec(Proj(1, 1), Compose(Succ(), (Proj(3, 3),)))
MONUS = PrimRec(Proj(1, 1), Compose(_CallOf(PRED), (Proj(3, 3),)))
TIMES = PrimRec(Zero(), Compose(_CallOf(PLUS), (Proj(3, 3), Proj(3, 1))))
SG = PrimRec(Const(0, 0), Const(1, 2))
NSG = PrimRec(Const(1, 0), Const(0, 2))


def _monus_cost(x: int, y: int) -> int:
    m = min(x, y)
    return 2 + 6 * y + 2 * (m * x - m * (m - 1) // 2)


# name -> (pattern, value(args), cost(args)); cost covers the primrec node itself
KERNELS = {
    "pred": (PRED, lambda a: max(a[0] - 1, 0), lambda a: 2 + 2 * a[0]),
    "plus": (PLUS, lambda a: a[0] + a[1], lambda a: 2 + 4 * a[1]),
    "monus": (MONUS, lambda a: max(a[0] - a[1], 0), lambda a: _monus_cost(a[0], a[1])),
    "times": (TIMES, lambda a: a[0] * a[1], lambda a: 2 + a[1] * (7 + 4 * a[0])),
    "sg": (SG, lambda a: 1 if a[0] else 0, lambda a: 2 + 2 * a[0]),
    "nsg": (NSG, lambda a: 0 if a[0] else 1, lambda a: 2 + 2 * a[0]),
}


def match_kernel(expr: RFExpr, env: DefEnv) -> str | None:
    """Name of the arithmetic kernel ``expr`` is shaped like, if any."""
    if not isinstance(expr, PrimRec):
        return None
    for name, (pattern, _, _) in KERNELS.items():
        if _matches(expr, pattern, env):
            return name
    return None


# ----------------------------------------------------------------------------
# The evaluator


class _Orbit:
    """Values ``v_t`` of a counter-free recursion and the cost of reaching each."""

    __slots__ = ("step", "vals", "costs", "first", "cycle", "busy")

    def __init__(self, step: RFExpr, v0: int):
        self.step = step
        self.vals = [v0]
        self.costs = [0]
        self.first = {v0: 0}
        self.cycle: tuple[int, int] | None = None
        self.busy = False


class Evaluator:
    """Evaluates expressions of one environment.

    Reuse an instance across calls to share the call memo (it never changes
    outcomes or step counts, only wall-clock time).
    """

    MEMO_LIMIT = 2_000_000
    CYCLE_LIMIT = 100_000

    def __init__(self, env: DefEnv | None = None, *, accelerate: bool = True):
        self.env = env if env is not None else DefEnv()
        self.accelerate = accelerate
        self.fuel = 0
        self.spent = 0
        self._memo: dict[tuple, tuple[int, int]] = {}
        self._facts: dict[int, tuple] = {}
        self._orbits: dict[tuple, _Orbit] = {}

    # -- fuel ----------------------------------------------------------------
    def _charge(self, n: int) -> None:
        self.spent += n
        if self.spent > self.fuel:
            self.spent = self.fuel
            raise _OutOfFuel

    def _fact(self, expr: RFExpr):
        """(kernel, positive_body, counter_free_step, blind_body) for a node, cached by identity."""
        key = id(expr)
        hit = self._facts.get(key)
        if hit is not None and hit[0] is expr:
            return hit[1]
        kernel = match_kernel(expr, self.env) if self.accelerate else None
        positive = isinstance(expr, Mu) and always_positive(expr.body, self.env)
        # a body that ignores the searched variable gives the same answer for every z
        blind = isinstance(expr, Mu) and not reads_arg(expr.body, rf.arity(expr.body, self.env), self.env)
        counter_free = False
        if self.accelerate and isinstance(expr, PrimRec) and kernel is None:
            n = rf.arity(expr.base, self.env)
            counter_free = not reads_arg(expr.step, n + 1, self.env)
        facts = (kernel, positive, counter_free, blind)
        self._facts[key] = (expr, facts)
        return facts

    # -- entry points ----------------------------------------------------------
    def eval(self, expr: RFExpr, args, fuel: int) -> EvalOutcome:
        args = tuple(int(a) for a in args)
        n = rf.arity(expr, self.env)
        if len(args) != n:
            raise rf.ArityError(f"expected {n} argument(s), got {len(args)}", expr)
        if any(a < 0 for a in args):
            raise ValueError("arguments are natural numbers")
        self.fuel, self.spent = fuel, 0
        try:
            value = self._ev(expr, args)
        except _OutOfFuel:
            return Exhausted(fuel)
        except _Undefined as u:
            return ProvenUndefined(u.reason)
        return Defined(value, self.spent)

    def mu_search(self, body: RFExpr, prefix_args, bound: int | None, fuel: int) -> EvalOutcome:
        return self.eval(Mu(body, bound), prefix_args, fuel)

    # -- the walk --------------------------------------------------------------
    def _ev(self, expr: RFExpr, args: tuple[int, ...]) -> int:
        if isinstance(expr, Proj):
            self._charge(1)
            return args[expr.i - 1]
        if isinstance(expr, Call):
            return self._call(expr.name, args)
        if isinstance(expr, Compose):
            self._charge(1)
            vals = tuple(self._ev(g, args) for g in expr.gs)
            return self._ev(expr.f, vals)
        if isinstance(expr, Succ):
            self._charge(1)
            return args[0] + 1
        if isinstance(expr, Zero):
            self._charge(1)
            return 0
        if isinstance(expr, Const):
            self._charge(1)
            return expr.value
        if isinstance(expr, PrimRec):
            return self._primrec(expr, args)
        if isinstance(expr, Mu):
            return self._mu(expr, args)
        raise TypeError(f"not an RFExpr: {expr!r}")

    def _call(self, name: str, args: tuple[int, ...]) -> int:
        if not self.accelerate:
            self._charge(1)
            return self._ev(self.env[name], args)
        key = (name, args)
        hit = self._memo.get(key)
        if hit is not None:
            self._charge(hit[1])
            return hit[0]
        start = self.spent
        self._charge(1)
        value = self._ev(self.env[name], args)
        if len(self._memo) < self.MEMO_LIMIT:
            self._memo[key] = (value, self.spent - start)
        return value

    def _primrec(self, expr: PrimRec, args: tuple[int, ...]) -> int:
        kernel, _, counter_free, _ = self._fact(expr)
        if kernel is not None:
            _, value, cost = KERNELS[kernel]
            self._charge(cost(args))
            return value(args)
        self._charge(1)
        xs, y = args[:-1], args[-1]
        v = self._ev(expr.base, xs)
        step = expr.step
        if not counter_free:
            for t in range(y):
                self._charge(1)
                v = self._ev(step, (*xs, t, v))
            return v
        # counter-free: the orbit of v and its cost depend on (xs, v) only,
        # so it is recorded once and replayed, reduced modulo its period
        key = (id(step), xs, v)
        orbit = self._orbits.get(key)
        if orbit is None or orbit.step is not step:
            orbit = self._orbits[key] = _Orbit(step, v)
        elif orbit.busy:
            # re-entered while this orbit is being extended: use a private one
            orbit = _Orbit(step, v)
        orbit.busy = True
        try:
            return self._replay(orbit, xs, y)
        finally:
            orbit.busy = False

    def _replay(self, orbit: "_Orbit", xs: tuple[int, ...], y: int) -> int:
        vals, costs = orbit.vals, orbit.costs
        if orbit.cycle is None and y >= len(vals):
            self._charge(costs[-1])
            t, v = len(vals) - 1, vals[-1]
            while t < y:
                start = self.spent
                self._charge(1)
                v = self._ev(orbit.step, (*xs, t, v))
                t += 1
                if orbit.cycle is None and len(vals) <= self.CYCLE_LIMIT:
                    vals.append(v)
                    costs.append(costs[-1] + self.spent - start)
                    t0 = orbit.first.get(v)
                    if t0 is not None:
                        orbit.cycle = (t0, t - t0)
                        # charge the rest of the run from the recorded cycle
                        self.spent -= costs[t]
                        return self._replay(orbit, xs, y)
                    orbit.first[v] = t
            return v
        if orbit.cycle is not None and y >= orbit.cycle[0]:
            t0, p = orbit.cycle
            k, r = divmod(y - t0, p)
            self._charge(costs[t0 + r] + k * (costs[t0 + p] - costs[t0]))
            return vals[t0 + r]
        self._charge(costs[y])
        return vals[y]

    def _mu(self, expr: Mu, args: tuple[int, ...]) -> int:
        _, positive, _, blind = self._fact(expr)
        self._charge(1)
        if positive and not blind and expr.bound is None:
            raise _Undefined(ConstantFalseCondition())
        body, bound = expr.body, expr.bound
        z = 0
        while True:
            self._charge(1)
            if self._ev(body, (*args, z)) == 0:
                return z
            if bound is not None and z >= bound:
                raise _Undefined(BoundedSearchExhausted(bound))
            if blind and bound is None:
                raise _Undefined(ConstantFalseCondition())
            z += 1


def eval_rf(expr: RFExpr, args, fuel: int, env: DefEnv | None = None, *, accelerate: bool = True) -> EvalOutcome:
    """Evaluate ``expr`` at ``args`` with ``fuel`` node evaluations."""
    return Evaluator(env, accelerate=accelerate).eval(expr, args, fuel)


def mu_search(body: RFExpr, prefix_args, bound: int | None, fuel: int, env: DefEnv | None = None) -> EvalOutcome:
    """Least z (at most ``bound`` if given) with ``body(prefix_args, z) == 0``."""
    env = env if env is not None else DefEnv()
    n = rf.arity(body, env)
    if n != len(prefix_args) + 1:
        raise rf.ArityError(f"body of arity {n} cannot extend {len(prefix_args)} argument(s)", body)
    return Evaluator(env).mu_search(body, prefix_args, bound, fuel)


# ----------------------------------------------------------------------------
# Proof emission


def proof_env(expr: RFExpr, env: DefEnv) -> DefEnv:
    """The environment a proof about ``expr`` refers to.

    A call is proved about its own name; any other expression is named
    ``main`` in an extended environment.
    """
    if isinstance(expr, Call):
        return env
    return env.extend("main", expr)


def _root_symbol(expr: RFExpr) -> str:
    return expr.name if isinstance(expr, Call) else "main"


class _ProofBuilder:
    def __init__(self, env: DefEnv):
        self.env = env
        self.lines: list[logic.ProofLine] = []
        self.known: dict[tuple[str, tuple[int, ...]], tuple[int, int]] = {}

    def add(self, formula, rule, refs=(), position=None, witness=None) -> int:
        self.lines.append(logic.ProofLine(formula, rule, tuple(refs), position, witness))
        return len(self.lines)

    def trans(self, a: int, b: int) -> int:
        fa, fb = self.lines[a - 1].formula, self.lines[b - 1].formula
        return self.add(logic.Eq(fa.lhs, fb.rhs), "Transitivity", (a, b))

    def prove(self, symbol: str, node: RFExpr, args: tuple[int, ...]) -> tuple[int, int]:
        """Lines proving ``symbol(args) = value``; returns (value, line number)."""
        key = (symbol, args)
        if key in self.known:
            return self.known[key]
        num = tuple(logic.numeral(a) for a in args)
        lhs = logic.FnApp(symbol, num)
        kids = rf.children(node)

        def kid(i: int) -> tuple[str, RFExpr]:
            c = kids[i]
            if isinstance(c, Call):
                return c.name, self.env[c.name]
            return f"{symbol}.{i}", c

        if isinstance(node, (Zero, Const, Succ, Proj)):
            if isinstance(node, Zero):
                v = 0
            elif isinstance(node, Const):
                v = node.value
            elif isinstance(node, Succ):
                v = args[0] + 1
            else:
                v = args[node.i - 1]
            line = self.add(logic.Eq(lhs, logic.numeral(v)), "DefiningEquation")
        elif isinstance(node, Call):
            d = self.add(logic.Eq(lhs, logic.FnApp(node.name, num)), "DefiningEquation")
            v, sub = self.prove(node.name, self.env[node.name], args)
            line = self.trans(d, sub)
        elif isinstance(node, Compose):
            hsym, hnode = kid(0)
            gs = [kid(j) for j in range(1, len(kids))]
            cur = [logic.FnApp(gsym, num) for gsym, _ in gs]
            line = self.add(logic.Eq(lhs, logic.FnApp(hsym, tuple(cur))), "DefiningEquation")
            vals = []
            for j, (gsym, gnode) in enumerate(gs):
                b, gl = self.prove(gsym, gnode, args)
                vals.append(b)
                before = logic.FnApp(hsym, tuple(cur))
                cur[j] = logic.numeral(b)
                after = logic.FnApp(hsym, tuple(cur))
                cong = self.add(logic.Eq(before, after), "Congruence", (gl,), position=j + 1)
                line = self.trans(line, cong)
            v, hl = self.prove(hsym, hnode, tuple(vals))
            line = self.trans(line, hl)
        elif isinstance(node, PrimRec):
            xs, y = args[:-1], args[-1]
            bsym, bnode = kid(0)
            ssym, snode = kid(1)
            xnum = num[:-1]
            d = self.add(
                logic.Eq(logic.FnApp(symbol, (*xnum, logic.ZERO)), logic.FnApp(bsym, xnum)),
                "DefiningEquation",
            )
            v, bl = self.prove(bsym, bnode, xs)
            line = self.trans(d, bl)
            self.known[(symbol, (*xs, 0))] = (v, line)
            for t in range(y):
                key_t = (symbol, (*xs, t + 1))
                if key_t in self.known:
                    v, line = self.known[key_t]
                    continue
                tn = logic.numeral(t)
                inner = logic.FnApp(symbol, (*xnum, tn))
                d = self.add(
                    logic.Eq(logic.FnApp(symbol, (*xnum, logic.numeral(t + 1))), logic.FnApp(ssym, (*xnum, tn, inner))),
                    "DefiningEquation",
                )
                cong = self.add(
                    logic.Eq(logic.FnApp(ssym, (*xnum, tn, inner)), logic.FnApp(ssym, (*xnum, tn, logic.numeral(v)))),
                    "Congruence",
                    (line,),
                    position=len(xs) + 2,
                )
                step_line = self.trans(d, cong)
                v, sl = self.prove(ssym, snode, (*xs, t, v))
                line = self.trans(step_line, sl)
                self.known[key_t] = (v, line)
        elif isinstance(node, Mu):
            bsym, bnode = kid(0)
            refs = []
            z = 0
            while True:
                c, cl = self.prove(bsym, bnode, (*args, z))
                refs.append(cl)
                if c == 0:
                    break
                z += 1
            v = z
            line = self.add(logic.Eq(lhs, logic.numeral(z)), "DefiningEquation", refs)
        else:
            raise TypeError(f"not an RFExpr: {node!r}")
        self.known[key] = (v, line)
        return v, line


def eval_with_proof(expr: RFExpr, args, fuel: int, env: DefEnv | None = None):
    """Evaluate, and when the result is Defined also return a checkable proof.

    The proof ends with ``f(numerals(args)) = numeral(value)`` where ``f`` is
    the called name (or ``main``, see :func:`proof_env`). Returns
    ``(outcome, proof_or_None)``.
    """
    env = env if env is not None else DefEnv()
    outcome = eval_rf(expr, args, fuel, env)
    if not isinstance(outcome, Defined):
        return outcome, None
    penv = proof_env(expr, env)
    symbol = _root_symbol(expr)
    builder = _ProofBuilder(penv)
    value, _ = builder.prove(symbol, penv[symbol], tuple(int(a) for a in args))
    assert value == outcome.value
    lines = builder.lines
    # the fact asked about may have been proved early and reused; restate it last
    final = logic.Eq(logic.FnApp(symbol, tuple(logic.numeral(int(a)) for a in args)), logic.numeral(value))
    if lines[-1].formula != final:
        idx = next(i for i, ln in enumerate(lines, start=1) if ln.formula == final)
        refl = builder.add(logic.Eq(final.rhs, final.rhs), "Reflexivity")
        builder.add(final, "Transitivity", (idx, refl))
    return outcome, logic.Proof(tuple(builder.lines))
