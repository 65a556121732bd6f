import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from haltlab.machine import (
    Dec,
    Halt,
    Halted,
    IfNZGoto,
    ImpProgram,
    Inc,
    MachineError,
    Snapshot,
    StillRunning,
    format_imp,
    initial,
    parse_imp,
    run,
    states,
    step,
    trace_jsonl,
)

ADD = """
    INC Z1
[A] IFNZ X1 GOTO B
    IFNZ Z1 GOTO C
[B] DEC X1
    INC Y
    IFNZ Z1 GOTO A
[C] IFNZ X2 GOTO D
    HALT
[D] DEC X2
    INC Y
    IFNZ Z1 GOTO C
"""


def test_parse_and_variables():
    p = parse_imp(ADD)
    assert p.n_inputs == 2
    assert p.variables == ("X1", "X2", "Y", "Z1")
    assert p.labels == {"A": 1, "B": 3, "C": 6, "D": 8}


def test_format_round_trip():
    p = parse_imp(ADD)
    assert parse_imp(format_imp(p)) == p


def test_run_add():
    assert run(parse_imp(ADD), (2, 3), 1000).output == 5


def test_step_examples():
    p = ImpProgram((Inc("Y"), Dec("Z1"), IfNZGoto("X1", "L"), Halt("L")))
    s = step(p, Snapshot(0, (0, 4, 0)))
    assert s == Snapshot(1, (0, 5, 0))
    s = step(p, s)
    assert s == Snapshot(2, (0, 5, 0))  # DEC of 0 stays 0
    assert step(p, Snapshot(2, (2, 5, 0))).pc == 3


def test_stepping_halted_snapshot_is_an_error():
    p = ImpProgram((Halt(),))
    s = step(p, initial(p, ()))
    assert s.halted(p)
    with pytest.raises(MachineError):
        step(p, s)


def test_fuel_zero_is_initial_snapshot():
    p = parse_imp(ADD)
    res = run(p, (1, 1), 0)
    assert isinstance(res, StillRunning)
    assert res.last == initial(p, (1, 1))
    assert res.steps == 0


def test_self_loop_snapshots_repeat():
    p = parse_imp("[A] IFNZ X1 GOTO A")
    res = run(p, (1,), 50, capture_trace=True)
    assert isinstance(res, StillRunning)
    assert len(set(res.trace)) == 1


def test_falling_off_the_end_halts():
    p = parse_imp("INC Y\nINC Y")
    assert run(p, (), 10) == Halted(2, 2)


@pytest.mark.parametrize(
    "text",
    ["[A] INC Y\n[A] INC Y", "IFNZ X1 GOTO NOWHERE", "INC Q", "JMP A", "[A] [B] INC Y"],
)
def test_malformed_programs(text):
    with pytest.raises(MachineError):
        parse_imp(text)


def test_declared_inputs_checked():
    with pytest.raises(MachineError):
        parse_imp("INC X3", n_inputs=2)
    with pytest.raises(ValueError):
        run(parse_imp(ADD), (1,), 10)


def test_trace_jsonl_format():
    p = parse_imp("INC Y")
    res = run(p, (), 10, capture_trace=True)
    lines = trace_jsonl(p, res.trace).splitlines()
    assert json.loads(lines[0]) == {"pc": 0, "vars": {"Y": 0}}
    assert json.loads(lines[-1]) == {"pc": 1, "vars": {"Y": 1}}
    assert lines[0] == '{"pc":0,"vars":{"Y":0}}'


def test_trace_cap():
    p = parse_imp("[A] IFNZ X1 GOTO A")
    res = run(p, (1,), 1000, capture_trace=True, trace_cap=10)
    assert len(res.trace) == 10


@given(st.integers(0, 30), st.integers(0, 30), st.integers(0, 400))
@settings(max_examples=100, deadline=None)
def test_fast_run_matches_stepper(a, b, fuel):
    p = parse_imp(ADD)
    snaps = []
    for s in states(p, (a, b)):
        snaps.append(s)
        if len(snaps) > fuel or s.halted(p):
            break
    res = run(p, (a, b), fuel, capture_trace=True)
    assert list(res.trace) == snaps[: len(res.trace)]
    if isinstance(res, Halted):
        assert res.output == a + b == snaps[-1].vars(p)["Y"]
    else:
        assert res.last == snaps[fuel]


@given(st.lists(st.integers(0, 5), min_size=2, max_size=2), st.integers(0, 300))
@settings(max_examples=50, deadline=None)
def test_determinism(inputs, fuel):
    p = parse_imp(ADD)
    assert run(p, inputs, fuel, capture_trace=True) == run(p, inputs, fuel, capture_trace=True)


def test_snapshot_covers_declared_variables():
    p = parse_imp(ADD)
    for s in list(states(p, (2, 1)))[:20]:
        assert set(s.vars(p)) == set(p.variables)
