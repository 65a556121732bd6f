"""The bundled corpus: function definitions, register programs and ground-truth labels.

Layout of a corpus directory:

* ``arith.rf`` is the arithmetic library; every other ``.rf`` file is
  parsed with the library and all earlier files (alphabetical order) as
  prelude.
* ``list*.rf`` files are function lists for the diagonal demos; they are
  parsed last and their definitions are not corpus entries.
* ``*.imp`` files hold one register program each.
* ``<stem>.labels.json`` sidecars map a function (or, for ``.imp`` files,
  the program stem) to its probes::

      {"plus": {"provenance": "...", "probes": [
          {"input": [2, 3], "label": "Halts", "value": 5}, ...]}}

Labels are ``Halts`` (with the value), ``Diverges`` or ``Open``. ``Open``
probes are never used to judge soundness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, Union

from . import rf
from .evaluator import Defined, Evaluator
from .machine import ImpProgram, parse_imp
from .rf import Call, DefEnv, RFExpr

LIBRARY = "arith.rf"
LABELS = ("Halts", "Diverges", "Open")


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class Probe:
    args: tuple[int, ...]
    label: str
    value: int | None = None


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    source: str
    arity: int
    probes: tuple[Probe, ...]
    provenance: str
    target: Union[RFExpr, ImpProgram]

    @property
    def is_program(self) -> bool:
        return isinstance(self.target, ImpProgram)


@dataclass(frozen=True)
class FnList:
    """An ordered list of unary functions, index i is g_i."""

    name: str
    names: tuple[str, ...]
    env: DefEnv

    def __len__(self) -> int:
        return len(self.names)

    def __getitem__(self, i: int) -> RFExpr:
        if not 0 <= i < len(self.names):
            raise IndexError(f"index {i} outside a list of {len(self.names)}")
        return Call(self.names[i])

    @property
    def exprs(self) -> tuple[RFExpr, ...]:
        return tuple(Call(n) for n in self.names)


@dataclass
class Corpus:
    env: DefEnv
    entries: list[CorpusEntry] = field(default_factory=list)
    lists: dict[str, FnList] = field(default_factory=dict)

    def __iter__(self) -> Iterator[CorpusEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, name: str) -> CorpusEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def functions(self) -> list[CorpusEntry]:
        return [e for e in self.entries if not e.is_program]

    def programs(self) -> list[CorpusEntry]:
        return [e for e in self.entries if e.is_program]


def default_dir() -> Path:
    return Path(str(resources.files("haltlab") / "corpus_data"))


def _read_labels(path: Path) -> dict:
    if not path.exists():
        return {}
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorpusError(f"{path.name}: {exc}") from None
    if not isinstance(data, dict):
        raise CorpusError(f"{path.name}: expected an object")
    return data


def _probes(name: str, spec: dict, arity: int, where: str) -> tuple[tuple[Probe, ...], str]:
    if not isinstance(spec, dict) or "probes" not in spec:
        raise CorpusError(f"{where}: {name}: expected provenance and probes")
    out: dict[tuple[int, ...], Probe] = {}
    for p in spec["probes"]:
        args = tuple(int(a) for a in p["input"])
        label = p["label"]
        if label not in LABELS:
            raise CorpusError(f"{where}: {name}{list(args)}: unknown label {label!r}")
        if len(args) != arity:
            raise CorpusError(f"{where}: {name}{list(args)}: expected {arity} argument(s)")
        if any(a < 0 for a in args):
            raise CorpusError(f"{where}: {name}{list(args)}: arguments are natural numbers")
        value = p.get("value")
        if (label == "Halts") != (value is not None):
            raise CorpusError(f"{where}: {name}{list(args)}: only Halts labels carry a value")
        probe = Probe(args, label, value)
        if args in out and out[args] != probe:
            raise CorpusError(f"{where}: {name}{list(args)}: conflicting labels")
        out[args] = probe
    return tuple(out.values()), str(spec.get("provenance", ""))


def load_corpus(directory: str | Path | None = None, check: bool = False, fuel: int = 10**9) -> Corpus:
    """Parse and validate every corpus file.

    With ``check`` every ``Halts`` label is confirmed by evaluation and no
    ``Diverges`` label may evaluate to a value within ``fuel``.
    """
    d = Path(directory) if directory is not None else default_dir()
    lib_path = d / LIBRARY
    if not lib_path.exists():
        raise CorpusError(f"{d}: missing {LIBRARY}")
    sources = [lib_path] + sorted(p for p in d.glob("*.rf") if p.name != LIBRARY and not p.name.startswith("list"))
    env = DefEnv()
    entries: list[CorpusEntry] = []
    for path in sources:
        try:
            local = rf.parse_rf(path.read_text(encoding="utf-8"), prelude=env)
        except rf.RFError as exc:
            raise CorpusError(f"{path.name}: {exc}") from None
        env = rf.with_prelude(env, local)
        labels = _read_labels(path.with_suffix(".labels.json"))
        for name in labels:
            if name not in local:
                raise CorpusError(f"{path.stem}.labels.json: {name!r} is not defined in {path.name}")
        for name in local.names:
            if name not in labels:
                continue
            probes, prov = _probes(name, labels[name], local.arity_of(name), path.name)
            entries.append(CorpusEntry(name, path.name, local.arity_of(name), probes, prov, Call(name)))

    for path in sorted(d.glob("*.imp")):
        try:
            program = parse_imp(path.read_text(encoding="utf-8"))
        except ValueError as exc:
            raise CorpusError(f"{path.name}: {exc}") from None
        labels = _read_labels(path.with_suffix(".labels.json"))
        spec = labels.get(path.stem)
        if spec is None:
            raise CorpusError(f"{path.name}: no labels for {path.stem!r}")
        probes, prov = _probes(path.stem, spec, program.n_inputs, path.name)
        entries.append(CorpusEntry(path.stem, path.name, program.n_inputs, probes, prov, program))

    lists: dict[str, FnList] = {}
    for path in sorted(d.glob("list*.rf")):
        lists[path.stem] = load_list(path, env)

    corpus = Corpus(env, entries, lists)
    if check:
        check_labels(corpus, fuel)
    return corpus


def load_list(path: str | Path, env: DefEnv) -> FnList:
    path = Path(path)
    try:
        local = rf.parse_rf(path.read_text(encoding="utf-8"), prelude=env)
    except rf.RFError as exc:
        raise CorpusError(f"{path.name}: {exc}") from None
    for name in local.names:
        if local.arity_of(name) != 1:
            raise CorpusError(f"{path.name}: {name} is not unary")
    return FnList(path.stem, tuple(local.names), rf.with_prelude(env, local))


def check_labels(corpus: Corpus, fuel: int = 10**9) -> None:
    """Re-confirm labels by evaluation; raises CorpusError on the first mismatch."""
    from .machine import Halted, run

    ev = Evaluator(corpus.env)
    for e in corpus.entries:
        for p in e.probes:
            if p.label == "Open":
                continue
            if e.is_program:
                out = run(e.target, p.args, fuel)
                got = out.output if isinstance(out, Halted) else None
            else:
                out = ev.eval(e.target, p.args, fuel)
                got = out.value if isinstance(out, Defined) else None
            if p.label == "Halts" and got != p.value:
                raise CorpusError(f"{e.name}{list(p.args)}: labeled Halts({p.value}), evaluation gave {out}")
            if p.label == "Diverges" and got is not None:
                raise CorpusError(f"{e.name}{list(p.args)}: labeled Diverges, evaluation gave {got}")


def resolve_path(path: str | Path) -> Path:
    """A path as given, or else the bundled corpus file of the same name."""
    p = Path(path)
    if p.exists():
        return p
    bundled = default_dir() / p.name
    if bundled.exists():
        return bundled
    raise FileNotFoundError(str(path))


# Machine fuel for compiled corpus functions: the longest halting probe
# (twin_after(12)) takes about 2.6 million steps; see scripts/calibrate_fuel.py.
MACHINE_FUEL = 5 * 10**6


@dataclass(frozen=True)
class Comparison:
    name: str
    args: tuple[int, ...]
    eval_value: int | None
    machine_value: int | None
    machine_steps: int

    @property
    def agree(self) -> bool:
        return self.eval_value == self.machine_value


def compare_compiled(corpus: Corpus, fuel: int = 10**6, machine_fuel: int = MACHINE_FUEL) -> list[Comparison]:
    """Evaluate every function probe and run its compiled program on the same input."""
    from .compiler import compile_rf
    from .machine import Halted, run

    ev = Evaluator(corpus.env)
    out = []
    for e in corpus.functions():
        program = compile_rf(e.target, corpus.env)
        for p in e.probes:
            o = ev.eval(e.target, p.args, fuel)
            r = run(program, p.args, machine_fuel)
            out.append(
                Comparison(
                    e.name,
                    p.args,
                    o.value if isinstance(o, Defined) else None,
                    r.output if isinstance(r, Halted) else None,
                    r.steps,
                )
            )
    return out


@dataclass(frozen=True)
class ProbeResult:
    name: str
    args: tuple[int, ...]
    label: str
    expected: int | None
    analysis: object  # analyzer.Analysis

    @property
    def verdict(self) -> str:
        return type(self.analysis.verdict).__name__

    @property
    def sound(self) -> bool:
        """False only when a decided verdict contradicts the label."""
        v = self.verdict
        if self.label == "Open" or v in ("Unknown", "NonRecursiveDefinition"):
            return True
        if v == "Halts":
            return self.label == "Halts" and self.analysis.verdict.value == self.expected
        return self.label == "Diverges"

    @property
    def decided(self) -> bool:
        return self.verdict not in ("Unknown", "NonRecursiveDefinition")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "input": list(self.args),
            "label": self.label,
            "value": self.expected,
            "sound": self.sound,
            **self.analysis.to_dict(),
        }


def analyze_corpus(corpus: Corpus, config=None, names=None) -> list[ProbeResult]:
    """Run the analyzer on every labeled probe (optionally only the entries in ``names``)."""
    from .analyzer import OnInput, ProblemSpec, RFTarget, analyze

    results = []
    for e in corpus.entries:
        if names is not None and e.name not in names:
            continue
        target = e.target if e.is_program else RFTarget(e.target, corpus.env)
        for p in e.probes:
            a = analyze(ProblemSpec(target, OnInput(p.args)), config)
            results.append(ProbeResult(e.name, p.args, p.label, p.value, a))
    return results
