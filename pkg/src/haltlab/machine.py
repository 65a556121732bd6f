"""A Davis-style register machine.

Instructions: ``INC V``, ``DEC V`` (0 stays 0), ``IFNZ V GOTO L`` and ``HALT``.
Variables are the inputs ``X1..Xn``, the output ``Y`` and scratch ``Z1..Zk``;
every variable other than the inputs starts at 0. Running off the end or
executing ``HALT`` halts, and the result is the value of ``Y``.

Text format (``.imp``), one instruction per line, ``#`` comments::

    [A] IFNZ X1 GOTO A
        INC Y
        HALT
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterator, Union


class MachineError(ValueError):
    pass


@dataclass(frozen=True)
class Inc:
    var: str
    label: str | None = None


@dataclass(frozen=True)
class Dec:
    var: str
    label: str | None = None


@dataclass(frozen=True)
class IfNZGoto:
    var: str
    target: str
    label: str | None = None


@dataclass(frozen=True)
class Halt:
    label: str | None = None


Instr = Union[Inc, Dec, IfNZGoto, Halt]

_VAR = re.compile(r"^(X[1-9]\d*|Y|Z[1-9]\d*)$")


def _var_key(name: str) -> tuple[int, int]:
    if name == "Y":
        return (1, 0)
    return (0 if name[0] == "X" else 2, int(name[1:]))


@dataclass(frozen=True)
class ImpProgram:
    instructions: tuple[Instr, ...]
    n_inputs: int | None = None
    variables: tuple[str, ...] = field(init=False)
    labels: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        labels: dict[str, int] = {}
        names = {"Y"}
        for i, ins in enumerate(self.instructions):
            if ins.label is not None:
                if ins.label in labels:
                    raise MachineError(f"duplicate label {ins.label!r}")
                labels[ins.label] = i
            if not isinstance(ins, Halt):
                if not _VAR.match(ins.var):
                    raise MachineError(f"bad variable name {ins.var!r}")
                names.add(ins.var)
        for ins in self.instructions:
            if isinstance(ins, IfNZGoto) and ins.target not in labels:
                raise MachineError(f"jump to undefined label {ins.target!r}")
        xs = [int(v[1:]) for v in names if v[0] == "X"]
        n = self.n_inputs if self.n_inputs is not None else max(xs, default=0)
        if xs and max(xs) > n:
            raise MachineError(f"X{max(xs)} used but only {n} input(s) declared")
        names |= {f"X{i}" for i in range(1, n + 1)}
        object.__setattr__(self, "n_inputs", n)
        object.__setattr__(self, "variables", tuple(sorted(names, key=_var_key)))
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.instructions)

    def index(self, var: str) -> int:
        return self.variables.index(var)


@dataclass(frozen=True)
class Snapshot:
    """Instruction index plus the value of every declared variable, in program order."""

    pc: int
    values: tuple[int, ...]

    def vars(self, program: ImpProgram) -> dict[str, int]:
        return dict(zip(program.variables, self.values))

    def to_dict(self, program: ImpProgram) -> dict:
        return {"pc": self.pc, "vars": self.vars(program)}

    def halted(self, program: ImpProgram) -> bool:
        return self.pc >= len(program)


@dataclass(frozen=True)
class Halted:
    output: int
    steps: int
    trace: tuple[Snapshot, ...] | None = None


@dataclass(frozen=True)
class StillRunning:
    last: Snapshot
    steps: int
    trace: tuple[Snapshot, ...] | None = None


RunResult = Union[Halted, StillRunning]


# ----------------------------------------------------------------------------
# Text format

_LINE = re.compile(
    r"^\s*(?:\[(?P<label>[A-Za-z_][A-Za-z0-9_]*)\]\s*)?"
    r"(?:(?P<op>INC|DEC)\s+(?P<v1>\w+)|IFNZ\s+(?P<v2>\w+)\s+GOTO\s+(?P<tgt>[A-Za-z_][A-Za-z0-9_]*)|(?P<halt>HALT))\s*$"
)


def parse_imp(text: str, n_inputs: int | None = None) -> ImpProgram:
    out: list[Instr] = []
    pending: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if m is None:
            lab = re.fullmatch(r"\[([A-Za-z_][A-Za-z0-9_]*)\]", line)
            if lab and pending is None:
                pending = lab.group(1)
                continue
            raise MachineError(f"line {lineno}: cannot parse {raw.strip()!r}")
        label = m.group("label")
        if pending is not None:
            if label is not None:
                raise MachineError(f"line {lineno}: two labels on one instruction")
            label, pending = pending, None
        if m.group("op") == "INC":
            out.append(Inc(m.group("v1"), label))
        elif m.group("op") == "DEC":
            out.append(Dec(m.group("v1"), label))
        elif m.group("halt"):
            out.append(Halt(label))
        else:
            out.append(IfNZGoto(m.group("v2"), m.group("tgt"), label))
    if pending is not None:
        out.append(Halt(pending))
    try:
        return ImpProgram(tuple(out), n_inputs)
    except MachineError as exc:
        raise MachineError(str(exc)) from None


def format_instr(ins: Instr) -> str:
    prefix = f"[{ins.label}] " if ins.label else "    "
    if isinstance(ins, Inc):
        return f"{prefix}INC {ins.var}"
    if isinstance(ins, Dec):
        return f"{prefix}DEC {ins.var}"
    if isinstance(ins, IfNZGoto):
        return f"{prefix}IFNZ {ins.var} GOTO {ins.target}"
    return f"{prefix}HALT"


def format_imp(program: ImpProgram) -> str:
    return "".join(format_instr(i) + "\n" for i in program.instructions)


# ----------------------------------------------------------------------------
# Execution

_INC, _DEC, _JNZ, _HALT = 0, 1, 2, 3


def _lower(program: ImpProgram) -> tuple[list[int], list[int], list[int]]:
    """Parallel arrays (opcode, register, jump target) for the fast loop."""
    ops, regs, tgts = [], [], []
    for ins in program.instructions:
        if isinstance(ins, Inc):
            ops.append(_INC)
        elif isinstance(ins, Dec):
            ops.append(_DEC)
        elif isinstance(ins, IfNZGoto):
            ops.append(_JNZ)
        else:
            ops.append(_HALT)
        regs.append(program.index(ins.var) if not isinstance(ins, Halt) else -1)
        tgts.append(program.labels[ins.target] if isinstance(ins, IfNZGoto) else -1)
    return ops, regs, tgts


_LOWERED: dict[int, tuple[ImpProgram, tuple]] = {}


def _lowered(program: ImpProgram):
    hit = _LOWERED.get(id(program))
    if hit is not None and hit[0] is program:
        return hit[1]
    low = _lower(program)
    if len(_LOWERED) > 256:
        _LOWERED.clear()
    _LOWERED[id(program)] = (program, low)
    return low


def initial(program: ImpProgram, inputs) -> Snapshot:
    inputs = tuple(int(a) for a in inputs)
    if len(inputs) != program.n_inputs:
        raise MachineError(f"program takes {program.n_inputs} input(s), got {len(inputs)}")
    if any(a < 0 for a in inputs):
        raise MachineError("inputs are natural numbers")
    values = [0] * len(program.variables)
    for i, a in enumerate(inputs, start=1):
        values[program.index(f"X{i}")] = a
    return Snapshot(0, tuple(values))


def step(program: ImpProgram, s: Snapshot) -> Snapshot:
    """Apply exactly one instruction."""
    if s.halted(program):
        raise MachineError("cannot step a halted snapshot")
    ops, regs, tgts = _lowered(program)
    pc, op, r = s.pc, ops[s.pc], regs[s.pc]
    if op == _HALT:
        return Snapshot(len(program), s.values)
    values = list(s.values)
    if op == _INC:
        values[r] += 1
        pc += 1
    elif op == _DEC:
        if values[r]:
            values[r] -= 1
        pc += 1
    else:
        pc = tgts[pc] if values[r] else pc + 1
    return Snapshot(pc, tuple(values))


def states(program: ImpProgram, inputs) -> Iterator[Snapshot]:
    """Every snapshot of the run, starting with the initial one."""
    s = initial(program, inputs)
    yield s
    while not s.halted(program):
        s = step(program, s)
        yield s


def run(program: ImpProgram, inputs, fuel: int, capture_trace: bool = False, trace_cap: int = 10_000) -> RunResult:
    """Execute at most ``fuel`` instructions."""
    start = initial(program, inputs)
    if capture_trace:
        s, steps = start, 0
        trace = [s]
        while steps < fuel and not s.halted(program):
            s = step(program, s)
            steps += 1
            if len(trace) < trace_cap:
                trace.append(s)
        if s.halted(program):
            return Halted(s.values[program.index("Y")], steps, tuple(trace))
        return StillRunning(s, steps, tuple(trace))

    ops, regs, tgts = _lowered(program)
    vals = list(start.values)
    n = len(ops)
    pc = 0
    steps = 0
    while steps < fuel and pc < n:
        op = ops[pc]
        steps += 1
        if op == _JNZ:
            pc = tgts[pc] if vals[regs[pc]] else pc + 1
        elif op == _DEC:
            r = regs[pc]
            if vals[r]:
                vals[r] -= 1
            pc += 1
        elif op == _INC:
            vals[regs[pc]] += 1
            pc += 1
        else:
            pc = n
    if pc >= n:
        return Halted(vals[program.index("Y")], steps)
    return StillRunning(Snapshot(pc, tuple(vals)), steps)


def trace_jsonl(program: ImpProgram, trace) -> str:
    """One JSON object per snapshot: ``{"pc":0,"vars":{"X1":1,"Y":0}}``."""
    return "".join(json.dumps(s.to_dict(program), separators=(",", ":")) + "\n" for s in trace)
