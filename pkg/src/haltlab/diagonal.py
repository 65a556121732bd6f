"""Diagonal constructions over a finite list of unary functions.

* ``h(i) = g_i(i) + 1`` differs from every listed function at its own index.
* ``theta(i, x)`` is 1 when ``g_i(x)`` halts and 0 when it provably does not;
  elsewhere it is Unknown.
* The diagonal ``d(n) = theta(n, n)`` is computed over the list. It is a
  host-level function of the list itself, never an entry of it, so asking
  for ``d`` at its own position only yields an infinite regress, which the
  analyzer reports as an event.
* ``alpha(z) = mu y [theta(z, z) = 0 and y = y]`` is defined exactly where
  ``g_z(z)`` is undefined.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import rf
from .analyzer import (
    REGRESS,
    Analysis,
    AnalyzerConfig,
    DiagonalTarget,
    DivergesPeriodic,
    DivergesProven,
    Halts,
    OnInput,
    ProblemSpec,
    RFTarget,
    Unknown,
    analyze,
    verdict_to_dict,
)
from .corpus import FnList
from .evaluator import Defined, EvalOutcome, Evaluator
from .rf import Const, DefEnv, Mu, RFExpr


def fn_list(name: str, exprs, env: DefEnv | None = None) -> FnList:
    """A list from raw expressions; each gets a definition ``<name>_<i>``."""
    env = env if env is not None else DefEnv()
    names = []
    for i, e in enumerate(exprs):
        if rf.arity(e, env) != 1:
            raise ValueError(f"entry {i} is not unary")
        n = f"{name}_{i}"
        env = env.extend(n, e)
        names.append(n)
    return FnList(name, tuple(names), env)


def _check_index(fns: FnList, i: int) -> None:
    if not 0 <= i < len(fns):
        raise IndexError(f"index {i} outside a list of {len(fns)}")


def finite_diagonal(fns: FnList, i: int, config: AnalyzerConfig | None = None) -> EvalOutcome:
    """``g_i(i) + 1``; undefined or exhausted outcomes pass through unchanged."""
    config = config or AnalyzerConfig()
    _check_index(fns, i)
    out = Evaluator(fns.env).eval(fns[i], (i,), config.fuel)
    if isinstance(out, Defined):
        return Defined(out.value + 1, out.steps)
    return out


def theta_value(analysis: Analysis) -> int | None:
    v = analysis.verdict
    if isinstance(v, Halts):
        return 1
    if isinstance(v, (DivergesPeriodic, DivergesProven)):
        return 0
    return None


def theta_analysis(fns: FnList, i: int, x: int, config: AnalyzerConfig | None = None) -> Analysis:
    _check_index(fns, i)
    return analyze(ProblemSpec(RFTarget(fns[i], fns.env), OnInput((x,))), config)


def theta_finite(fns: FnList, i: int, x: int, config: AnalyzerConfig | None = None) -> int | None:
    """1 if ``g_i(x)`` halts, 0 if it provably diverges, None (Unknown) otherwise."""
    return theta_value(theta_analysis(fns, i, x, config))


@dataclass(frozen=True)
class ReportRow:
    index: int
    name: str
    analysis: Analysis
    value: int | None  # theta, d or alpha value; None is Unknown or undefined

    def to_dict(self) -> dict:
        return {"index": self.index, "name": self.name, "value": self.value, **self.analysis.to_dict()}


@dataclass
class DiagonalReport:
    construction: str
    rows: list[ReportRow] = field(default_factory=list)
    events: list[str] = field(default_factory=list)
    facts: dict = field(default_factory=dict)
    conclusion: str = ""

    def to_dict(self) -> dict:
        return {
            "construction": self.construction,
            "rows": [r.to_dict() for r in self.rows],
            "events": list(self.events),
            "facts": dict(self.facts),
            "conclusion": self.conclusion,
        }

    def to_text(self) -> str:
        lines = [f"{self.construction}"]
        for r in self.rows:
            v = verdict_to_dict(r.analysis.verdict)
            shown = "Unknown" if r.value is None else str(r.value)
            extra = f" degree {r.analysis.degree}" if r.analysis.degree is not None else ""
            lines.append(f"  [{r.index}] {r.name}: {v['verdict']}{extra} -> {shown}")
        for e in self.events:
            lines.append(f"  event: {e}")
        for k, v in self.facts.items():
            lines.append(f"  {k}: {v}")
        if self.conclusion:
            lines.append(self.conclusion)
        return "\n".join(lines)


def diag_self_demo(fns: FnList, config: AnalyzerConfig | None = None) -> DiagonalReport:
    """Compute ``d(n) = theta(n, n)`` on every index, then ask ``d`` about itself."""
    config = config or AnalyzerConfig()
    target = DiagonalTarget(fns.exprs, fns.env)
    report = DiagonalReport("diagonal d(n) = theta(n, n)")
    for i, name in enumerate(fns.names):
        a = analyze(ProblemSpec(target, OnInput((i,))), config)
        report.rows.append(ReportRow(i, name, a, theta_value(a)))

    own = analyze(ProblemSpec(target, OnInput((target.own_index,))), config)
    report.rows.append(ReportRow(target.own_index, "d", own, None))
    report.events.extend(own.events)

    report.facts = {
        "d_in_list": any(e == target for e in fns.exprs),
        "list_entries": "unary function expressions, each applied to a natural number",
        "d_argument": "a natural number, but d itself is defined by ranging over the whole list",
    }
    regress = sum(1 for e in own.events if e.startswith("regress"))
    report.conclusion = (
        f"d is not an entry of the list: it is built from the list, one level up. "
        f"Applying d at its own position {target.own_index} asks the analyzer to decide "
        f"d(d(d(...))); this was reported as {regress} regress event(s) "
        f"({REGRESS}) instead of looping."
    )
    return report


def alpha_expr(theta: int) -> RFExpr:
    """``mu y [theta = 0 and y = y]`` as a search whose test is the constant ``theta``."""
    return Mu(Const(theta, 2))


def alpha_demo(fns: FnList, z: int, config: AnalyzerConfig | None = None) -> DiagonalReport:
    """``alpha(z)``: defined (value 0) exactly when ``g_z(z)`` is undefined."""
    config = config or AnalyzerConfig()
    _check_index(fns, z)
    theta_a = theta_analysis(fns, z, z, config)
    theta = theta_value(theta_a)
    report = DiagonalReport(f"alpha(z) = mu y [theta(z, z) = 0 and y = y] at z = {z}")
    report.rows.append(ReportRow(z, fns.names[z], theta_a, theta))
    if theta is None:
        alpha = Analysis(Unknown(0, 0, "theta(z, z) is unknown"), 4)
        report.conclusion = f"theta({z}, {z}) is not decided within the budget, so alpha({z}) is Unknown."
    else:
        alpha = analyze(ProblemSpec(RFTarget(alpha_expr(theta)), OnInput((z,))), config)
        if theta == 0:
            report.conclusion = f"g_{z}({z}) is undefined, so the condition holds for every y and alpha({z}) = 0."
        else:
            report.conclusion = (
                f"g_{z}({z}) is defined, so the condition can never hold and alpha({z}) is undefined: "
                "alpha is the converse of g_z(z)."
            )
    value = alpha.verdict.value if isinstance(alpha.verdict, Halts) else None
    report.rows.append(ReportRow(z, "alpha", alpha, value))
    report.facts = {"theta": theta}
    return report
