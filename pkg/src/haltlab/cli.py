"""Command line entry point.

Exit codes: 0 success, 1 usage error, 2 input or analysis error. Results go
to stdout, diagnostics to stderr. With ``--format json`` every verb prints
exactly one JSON document carrying ``"schema": "1"``.

Names from the bundled corpus (``plus``, ``goldbach_mu``, ...) are always in
scope; ``--defs FILE`` adds more.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import godel, logic, rf
from .analyzer import (
    AnalyzerConfig,
    OnAnyInput,
    OnEveryInput,
    OnInput,
    ProblemSpec,
    RFTarget,
    analyze,
)
from .compiler import compile_rf
from .corpus import MACHINE_FUEL, CorpusError, analyze_corpus, compare_compiled, load_corpus, load_list, resolve_path
from .diagonal import alpha_demo, diag_self_demo
from .evaluator import eval_rf, eval_with_proof, outcome_to_dict
from .machine import Halted, MachineError, format_imp, parse_imp, run, trace_jsonl

SCHEMA = "1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class CliConfig:
    fuel: int = 10**6
    max_snapshots: int = 10**5
    format: str = "text"
    root_search: bool = True
    budget: int = 10**6

    def __post_init__(self):
        for name in ("fuel", "max_snapshots", "budget"):
            if getattr(self, name) <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")

    def analyzer(self) -> AnalyzerConfig:
        return AnalyzerConfig(fuel=self.fuel, max_snapshots=self.max_snapshots, root_search=self.root_search)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _inputs(text: str | None) -> tuple[int, ...]:
    if text is None or text.strip() == "":
        return ()
    try:
        vals = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"--input expects comma-separated naturals, got {text!r}") from None
    if any(v < 0 for v in vals):
        raise UsageError("--input values must be natural numbers")
    return vals


# ----------------------------------------------------------------------------
# Shared loading


def _env(args) -> rf.DefEnv:
    env = load_corpus().env
    for path in args.defs or ():
        env = rf.with_prelude(env, rf.parse_rf(Path(path).read_text(encoding="utf-8"), prelude=env))
    return env


def _expr(text: str, env: rf.DefEnv) -> rf.RFExpr:
    return rf.parse_expr(text, env)


def _program(path: str):
    return parse_imp(resolve_path(path).read_text(encoding="utf-8"))


def _emit(cfg: CliConfig, doc: dict, text: str) -> None:
    if cfg.format == "json":
        print(json.dumps({"schema": SCHEMA, **doc}, sort_keys=True))
    else:
        print(text)


def _verdict_text(d: dict) -> str:
    skip = {"verdict", "degree", "advisories"}
    details = ", ".join(f"{k}={v}" for k, v in d.items() if k not in skip)
    out = f"{d['verdict']}({details})"
    if "degree" in d:
        out += f"  degree {d['degree']}"
    for a in d.get("advisories", ()):
        out += f"  [{a}]"
    return out


# ----------------------------------------------------------------------------
# Verbs


def cmd_parse(args, cfg: CliConfig) -> int:
    path = resolve_path(args.file)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".imp":
        program = parse_imp(text)
        doc = {"kind": "imp", "inputs": program.n_inputs, "program": format_imp(program).splitlines()}
        _emit(cfg, doc, format_imp(program))
        return 0
    env = _env(args)
    own = set(re.findall(r"^\s*def\s+(\w+)", text, flags=re.M))
    if own & set(env.names):
        # a file of the bundled corpus: parse it against the files loaded before it
        env = _prefix_env(env, own)
    local = rf.parse_rf(text, prelude=env)
    env = rf.with_prelude(env, local)
    defs = {
        name: {
            "arity": local.arity_of(name),
            "expr": rf.format_expr(expr),
            "primitive_recursive": rf.is_primitive_recursive(expr, env),
        }
        for name, expr in local.items()
    }
    lines = [
        f"{n}/{d['arity']} {'pr' if d['primitive_recursive'] else 'mu'}  {d['expr']}" for n, d in defs.items()
    ]
    _emit(cfg, {"kind": "rf", "definitions": defs}, "\n".join(lines))
    return 0


def _prefix_env(env: rf.DefEnv, stop: set[str]) -> rf.DefEnv:
    """The definitions of ``env`` that come before the first name in ``stop``."""
    out = rf.DefEnv()
    for name, expr in env.items():
        if name in stop:
            break
        out = out.extend(name, expr)
    return out


def cmd_eval(args, cfg: CliConfig) -> int:
    env = _env(args)
    expr = _expr(args.expr, env)
    inputs = _inputs(args.input)
    if args.proof:
        outcome, proof = eval_with_proof(expr, inputs, cfg.fuel, env)
    else:
        outcome, proof = eval_rf(expr, inputs, cfg.fuel, env), None
    doc = outcome_to_dict(outcome)
    text = _outcome_text(doc)
    if proof is not None:
        doc["proof"] = [line.to_dict() for line in proof.lines]
        text += "\n" + "\n".join(
            f"{i:>4}. {logic.format_formula(ln.formula)}   [{ln.rule} {', '.join(map(str, ln.refs))}]".rstrip()
            for i, ln in enumerate(proof.lines, start=1)
        )
    _emit(cfg, doc, text)
    return 0


def _outcome_text(d: dict) -> str:
    details = ", ".join(f"{k}={v}" for k, v in d.items() if k != "outcome")
    return f"{d['outcome']}({details})"


def cmd_compile(args, cfg: CliConfig) -> int:
    env = _env(args)
    program = compile_rf(_expr(args.expr, env), env)
    listing = format_imp(program)
    if args.output:
        Path(args.output).write_text(listing, encoding="utf-8")
    _emit(cfg, {"inputs": program.n_inputs, "instructions": len(program), "program": listing.splitlines()}, listing.rstrip("\n"))
    return 0


def _run_target(args):
    if args.program:
        return _program(args.program)
    env = _env(args)
    return compile_rf(_expr(args.expr, env), env)


def cmd_run(args, cfg: CliConfig) -> int:
    program = _run_target(args)
    res = run(program, _inputs(args.input), cfg.fuel)
    if isinstance(res, Halted):
        doc = {"result": "Halted", "output": res.output, "steps": res.steps}
        text = f"Halted(output={res.output}, steps={res.steps})"
    else:
        doc = {"result": "StillRunning", "steps": res.steps, "last": res.last.to_dict(program)}
        text = f"StillRunning(steps={res.steps}, pc={res.last.pc}, vars={res.last.vars(program)})"
    _emit(cfg, doc, text)
    return 0


def cmd_trace(args, cfg: CliConfig) -> int:
    program = _run_target(args)
    res = run(program, _inputs(args.input), cfg.fuel, capture_trace=True, trace_cap=args.cap)
    if cfg.format == "json":
        _emit(cfg, {"trace": [s.to_dict(program) for s in res.trace]}, "")
    else:
        sys.stdout.write(trace_jsonl(program, res.trace))
    return 0


def cmd_analyze(args, cfg: CliConfig) -> int:
    if args.program:
        target = _program(args.program)
    else:
        env = _env(args)
        target = RFTarget(_expr(args.expr, env), env)
    if args.any_input:
        mode = OnAnyInput()
    elif args.every_input:
        mode = OnEveryInput()
    else:
        mode = OnInput(_inputs(args.input))
    try:
        spec = ProblemSpec(target, mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    a = analyze(spec, cfg.analyzer())
    doc = a.to_dict()
    _emit(cfg, doc, _verdict_text(doc))
    return 0


def _logic_obj(text: str):
    try:
        return logic.parse_formula(text)
    except logic.LogicSyntaxError:
        return logic.parse_term(text)


def cmd_godel(args, cfg: CliConfig) -> int:
    env = _env(args)
    if args.godel_cmd == "encode":
        if args.proof:
            obj = logic.Proof.from_json(resolve_path(args.proof).read_text(encoding="utf-8"))
            shown = f"proof of {len(obj)} line(s)"
        else:
            if args.text is None:
                raise UsageError("godel encode needs a term, a formula or --proof FILE")
            obj = _logic_obj(args.text)
            shown = args.text
        code = godel.encode(obj, env)
        _emit(cfg, {"code": str(code), "digits": len(str(code))}, str(code) if not args.proof else f"{shown}: {code}")
        return 0
    if args.godel_cmd == "decode":
        obj = godel.decode(int(args.code), env)
        if obj is godel.NOT_A_CODE:
            _emit(cfg, {"decoded": None}, "not a code")
            return 0
        text = (
            logic.format_formula(obj)
            if isinstance(obj, (logic.Eq, logic.ExistsEq))
            else logic.format_term(obj)
            if not isinstance(obj, logic.Proof)
            else obj.to_json()
        )
        _emit(cfg, {"decoded": text}, text)
        return 0
    if args.godel_cmd == "sub":
        code = godel.sub(_code(args.y, env), _code(args.u, env), _var(args.v), env)
        _emit(cfg, {"code": str(code)}, str(code))
        return 0
    if args.godel_cmd == "check":
        proof = logic.Proof.from_json(resolve_path(args.proof).read_text(encoding="utf-8"))
        target = logic.parse_formula(args.target)
        res = logic.check_proof(proof, target, env)
        doc = {"ok": res.ok, "line": res.line, "message": res.message}
        text = "accepted" if res.ok else f"rejected at line {res.line}: {res.message}"
        _emit(cfg, doc, text)
        return 0
    # isdef
    res = godel.is_def(_code(args.fml, env), args.u, cfg.budget, env)
    if isinstance(res, godel.Proved):
        doc = {
            "isdef": True,
            "target": logic.format_formula(res.target),
            "proof": [ln.to_dict() for ln in res.proof.lines],
        }
        text = f"proved {logic.format_formula(res.target)} in {len(res.proof)} line(s)"
    else:
        doc = {"isdef": "Unknown", "target": logic.format_formula(res.target), "fuel_spent": res.fuel_spent}
        text = f"Unknown: no proof of {logic.format_formula(res.target)} within budget {cfg.budget}"
    _emit(cfg, doc, text)
    return 0


def _code(text: str, env) -> int:
    """A Gödel number given directly, or the code of a term or formula."""
    if text.isdigit():
        return int(text)
    return godel.encode(_logic_obj(text), env)


def _var(text: str) -> int:
    return int(text) if text.isdigit() else godel.var_code(text)


def _fn_list(args):
    corpus = load_corpus()
    if args.list in corpus.lists:
        return corpus.lists[args.list]
    path = resolve_path(args.list)
    if path.stem in corpus.lists and path.parent == resolve_path(path.name).parent:
        return corpus.lists[path.stem]
    return load_list(path, corpus.env)


def cmd_demo(args, cfg: CliConfig) -> int:
    fns = _fn_list(args)
    if args.demo_cmd == "diagonal":
        report = diag_self_demo(fns, cfg.analyzer())
    else:
        if args.z is None:
            raise UsageError("demo alpha needs --z N")
        if not 0 <= args.z < len(fns):
            raise UsageError(f"--z {args.z} outside a list of {len(fns)}")
        report = alpha_demo(fns, args.z, cfg.analyzer())
    _emit(cfg, report.to_dict(), report.to_text())
    return 0


def cmd_corpus(args, cfg: CliConfig) -> int:
    t0 = time.perf_counter()
    corpus = load_corpus(args.dir, check=args.check, fuel=cfg.fuel)
    names = set(args.only.split(",")) if args.only else None
    results = analyze_corpus(corpus, cfg.analyzer(), names)
    unsound = [r for r in results if not r.sound]
    doc = {
        "probes": len(results),
        "decided": sum(r.decided for r in results),
        "unsound": len(unsound),
        "results": [r.to_dict() for r in results],
    }
    lines = [
        f"{r.name}{list(r.args)}: label {r.label}"
        f"{'' if r.expected is None else f'({r.expected})'} -> "
        f"{_verdict_text(r.analysis.to_dict())}{'' if r.sound else '  UNSOUND'}"
        for r in results
    ]
    if args.compiled:
        comps = compare_compiled(corpus, cfg.fuel, args.machine_fuel)
        bad = [c for c in comps if not c.agree]
        doc["compiled"] = {
            "functions": len(corpus.functions()),
            "probes": len(comps),
            "disagreements": [{"name": c.name, "input": list(c.args)} for c in bad],
        }
        lines.append(f"evaluator vs compiled: {len(comps) - len(bad)}/{len(comps)} agree")
    lines.append(f"{doc['probes']} probes, {doc['decided']} decided, {doc['unsound']} unsound")
    print(f"corpus run took {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    _emit(cfg, doc, "\n".join(lines))
    return 2 if unsound or (args.compiled and doc["compiled"]["disagreements"]) else 0


# ----------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--fuel", type=_positive, default=10**6)
    common.add_argument("--max-snapshots", type=_positive, default=10**5)
    common.add_argument("--no-root-search", action="store_true")
    common.add_argument("--budget", type=_positive, default=10**6, help="fuel for proof certification")
    common.add_argument("--defs", action="append", metavar="FILE", help="extra .rf definitions")

    p = _Parser(prog="haltlab", description="Recursive functions, register machines and halting analysis.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("parse", parents=[common], help="parse a .rf or .imp file")
    s.add_argument("file")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    s.add_argument("expr")
    s.add_argument("--input", default="")
    s.add_argument("--proof", action="store_true", help="also emit an equational proof")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("compile", parents=[common], help="compile an expression to a register program")
    s.add_argument("expr")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_compile)

    for name, func, help_ in (("run", cmd_run, "run a program"), ("trace", cmd_trace, "print snapshots as JSON lines")):
        s = sub.add_parser(name, parents=[common], help=help_)
        g = s.add_mutually_exclusive_group(required=True)
        g.add_argument("--program")
        g.add_argument("--expr")
        s.add_argument("--input", default="")
        if name == "trace":
            s.add_argument("--cap", type=_positive, default=10_000)
        s.set_defaults(func=func)

    s = sub.add_parser("analyze", parents=[common], help="classify a halting question")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--program")
    g.add_argument("--expr")
    m = s.add_mutually_exclusive_group()
    m.add_argument("--input", default="")
    m.add_argument("--any-input", action="store_true")
    m.add_argument("--every-input", action="store_true")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("godel", help="Gödel numbering")
    gs = s.add_subparsers(dest="godel_cmd", required=True, parser_class=_Parser)
    e = gs.add_parser("encode", parents=[common])
    e.add_argument("text", nargs="?")
    e.add_argument("--proof", help="encode a proof file instead")
    e = gs.add_parser("decode", parents=[common])
    e.add_argument("code")
    e = gs.add_parser("sub", parents=[common])
    e.add_argument("y")
    e.add_argument("u")
    e.add_argument("v")
    e = gs.add_parser("check", parents=[common])
    e.add_argument("proof")
    e.add_argument("target")
    e = gs.add_parser("isdef", parents=[common])
    e.add_argument("fml")
    e.add_argument("u", type=int)
    s.set_defaults(func=cmd_godel)

    s = sub.add_parser("demo", help="diagonal constructions")
    ds = s.add_subparsers(dest="demo_cmd", required=True, parser_class=_Parser)
    for name in ("diagonal", "alpha"):
        e = ds.add_parser(name, parents=[common])
        e.add_argument("--list", required=True)
        if name == "alpha":
            e.add_argument("--z", type=int)
    s.set_defaults(func=cmd_demo)

    s = sub.add_parser("corpus", help="corpus checks")
    cs = s.add_subparsers(dest="corpus_cmd", required=True, parser_class=_Parser)
    e = cs.add_parser("run", parents=[common])
    e.add_argument("--dir")
    e.add_argument("--only", help="comma-separated entry names")
    e.add_argument("--check", action="store_true", help="re-confirm labels by evaluation first")
    e.add_argument("--compiled", action="store_true", help="also compare evaluation with compiled programs")
    e.add_argument("--machine-fuel", type=_positive, default=MACHINE_FUEL)
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = CliConfig(
            fuel=args.fuel,
            max_snapshots=args.max_snapshots,
            format=args.format,
            root_search=not args.no_root_search,
            budget=args.budget,
        )
        return args.func(args, cfg)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (
        rf.RFError,
        logic.LogicSyntaxError,
        godel.GodelError,
        MachineError,
        CorpusError,
        OSError,
        ValueError,
        IndexError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
