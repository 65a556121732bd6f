"""Transcription of partial recursive functions into register-machine programs.

Compilation scheme (fixed, so step counts are reproducible):

* ``Z1`` is set to 1 by the first instruction and never changes; ``GOTO L``
  is ``IFNZ Z1 GOTO L``. ``Z2`` is the scratch register of the copy and
  doubling macros and is 0 between macros.
* Every subexpression writes its value into its own fresh register and
  never changes the registers holding its arguments. Calls are inlined.
* ``comp(h, g1..gm)`` evaluates ``g1..gm`` left to right into fresh
  registers, then ``h`` on those.
* ``primrec`` is a counting loop: accumulator := base; counter := 0;
  remaining := last argument; while remaining is nonzero the step is
  evaluated on (xs, counter, accumulator) and moved into the accumulator.
* ``mu`` is a search loop over a fresh register ``z`` that exits when the
  body's register is 0. A bounded ``mu(body, bound=b)`` also owns a register
  holding ``b - z``; it is loaded once in the program prologue and restored
  on exit. When it is already 0 at a failed test the program jumps to the
  trap ``[T] IFNZ Z1 GOTO T``, an infinite loop with a constant snapshot.
* Macros: ``zero v`` is ``[L] DEC v / IFNZ v GOTO L``; a destructive move
  is ``GOTO T / [B] DEC s / INC d / [T] IFNZ s GOTO B``; a copy moves the
  source into the target and ``Z2`` and then moves ``Z2`` back; constants
  above 8 are built by binary doubling.
"""

from __future__ import annotations

from . import rf
from .machine import Dec, Halt, IfNZGoto, ImpProgram, Inc, Instr
from .rf import Call, Compose, Const, DefEnv, Mu, PrimRec, Proj, RFExpr, Succ, Zero

ONE = "Z1"
TMP = "Z2"
TRAP = "T"


class _Gen:
    def __init__(self, env: DefEnv):
        self.env = env
        self.code: list[tuple] = []
        self.prologue: list[tuple] = []
        self.pending: list[str] = []
        self.alias: dict[str, str] = {}
        self.n_regs = 2
        self.n_labels = 0
        self.trap_used = False

    # -- low level ------------------------------------------------------------
    def reg(self) -> str:
        self.n_regs += 1
        return f"Z{self.n_regs}"

    def label(self) -> str:
        self.n_labels += 1
        return f"L{self.n_labels}"

    def here(self, label: str) -> None:
        self.pending.append(label)

    def emit(self, op: str, var: str | None = None, target: str | None = None) -> None:
        if self.pending:
            head, *rest = self.pending
            for other in rest:
                self.alias[other] = head
            self.pending = []
            self.code.append((op, var, target, head))
        else:
            self.code.append((op, var, target, None))

    def inc(self, v: str) -> None:
        self.emit("INC", v)

    def dec(self, v: str) -> None:
        self.emit("DEC", v)

    def jnz(self, v: str, label: str) -> None:
        self.emit("IFNZ", v, label)

    def goto(self, label: str) -> None:
        self.jnz(ONE, label)

    # -- macros ---------------------------------------------------------------
    def zero(self, v: str) -> None:
        loop = self.label()
        self.here(loop)
        self.dec(v)
        self.jnz(v, loop)

    def move(self, dst: str, src: str, also: str | None = None) -> None:
        """dst += src (and also += src); src := 0."""
        body, test = self.label(), self.label()
        self.goto(test)
        self.here(body)
        self.dec(src)
        self.inc(dst)
        if also is not None:
            self.inc(also)
        self.here(test)
        self.jnz(src, body)

    def copy(self, dst: str, src: str) -> None:
        """dst += src, src unchanged."""
        self.move(dst, src, also=TMP)
        self.move(src, TMP)

    def assign(self, dst: str, src: str) -> None:
        self.zero(dst)
        self.copy(dst, src)

    def add_const(self, v: str, k: int) -> None:
        """v += k, v assumed 0 when k > 8."""
        if k <= 8:
            for _ in range(k):
                self.inc(v)
            return
        for bit in bin(k)[2:]:
            # v := 2v
            self.move(TMP, v)
            body, test = self.label(), self.label()
            self.goto(test)
            self.here(body)
            self.dec(TMP)
            self.inc(v)
            self.inc(v)
            self.here(test)
            self.jnz(TMP, body)
            if bit == "1":
                self.inc(v)

    # -- expressions ----------------------------------------------------------
    def gen(self, expr: RFExpr, ins: list[str], out: str) -> None:
        """Code leaving expr(ins) in ``out``; registers in ``ins`` are preserved."""
        if isinstance(expr, Call):
            self.gen(self.env[expr.name], ins, out)
        elif isinstance(expr, Zero):
            self.zero(out)
        elif isinstance(expr, Const):
            self.zero(out)
            self.add_const(out, expr.value)
        elif isinstance(expr, Succ):
            self.assign(out, ins[0])
            self.inc(out)
        elif isinstance(expr, Proj):
            self.assign(out, ins[expr.i - 1])
        elif isinstance(expr, Compose):
            temps = []
            for g in expr.gs:
                t = self.reg()
                self.gen(g, ins, t)
                temps.append(t)
            self.gen(expr.f, temps, out)
        elif isinstance(expr, PrimRec):
            self._primrec(expr, ins, out)
        elif isinstance(expr, Mu):
            self._mu(expr, ins, out)
        else:
            raise TypeError(f"not an RFExpr: {expr!r}")

    def _primrec(self, expr: PrimRec, ins: list[str], out: str) -> None:
        xs, y = ins[:-1], ins[-1]
        acc, c, left, nxt = self.reg(), self.reg(), self.reg(), self.reg()
        loop, body, end = self.label(), self.label(), self.label()
        self.gen(expr.base, xs, acc)
        self.zero(c)
        self.assign(left, y)
        self.here(loop)
        self.jnz(left, body)
        self.goto(end)
        self.here(body)
        self.gen(expr.step, [*xs, c, acc], nxt)
        self.zero(acc)
        self.move(acc, nxt)
        self.dec(left)
        self.inc(c)
        self.goto(loop)
        self.here(end)
        self.assign(out, acc)

    def _mu(self, expr: Mu, ins: list[str], out: str) -> None:
        z, b = self.reg(), self.reg()
        loop, nxt, found = self.label(), self.label(), self.label()
        room = None
        if expr.bound is not None:
            room = self.reg()
            saved, self.code, self.pending = (self.code, self.pending), [], []
            self.add_const(room, expr.bound)
            self.prologue += self.code
            self.code, self.pending = saved
        self.zero(z)
        self.here(loop)
        self.gen(expr.body, [*ins, z], b)
        self.jnz(b, nxt)
        self.goto(found)
        self.here(nxt)
        if room is not None:
            ok = self.label()
            self.jnz(room, ok)
            self.trap_used = True
            self.goto(TRAP)
            self.here(ok)
            self.dec(room)
        self.inc(z)
        self.goto(loop)
        self.here(found)
        self.assign(out, z)
        if room is not None:
            self.copy(room, z)


def compile_rf(expr: RFExpr, env: DefEnv | None = None) -> ImpProgram:
    """Register-machine program computing ``expr`` (inputs X1..Xn, output Y)."""
    env = env if env is not None else DefEnv()
    n = rf.arity(expr, env)
    g = _Gen(env)
    g.inc(ONE)
    g.gen(expr, [f"X{i}" for i in range(1, n + 1)], "Y")
    g.emit("HALT")
    if g.trap_used:
        g.here(TRAP)
        g.goto(TRAP)
    # bound registers are loaded right after Z1 is set
    code = g.code[:1] + g.prologue + g.code[1:]
    out: list[Instr] = []
    for op, var, target, label in code:
        if op == "INC":
            out.append(Inc(var, label))
        elif op == "DEC":
            out.append(Dec(var, label))
        elif op == "IFNZ":
            out.append(IfNZGoto(var, g.alias.get(target, target), label))
        else:
            out.append(Halt(label))
    return ImpProgram(tuple(out), n)
