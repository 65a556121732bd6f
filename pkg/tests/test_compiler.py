import pytest
from hypothesis import given, settings

from gen import pr_exprs
from haltlab import rf
from haltlab.compiler import compile_rf
from haltlab.evaluator import Defined, ProvenUndefined, eval_rf
from haltlab.machine import Halted, StillRunning, format_imp, run
from haltlab.rf import Call, Const, Mu, Succ


def test_succ_program():
    p = compile_rf(Succ())
    res = run(p, (7,), 100)
    # 9 setup steps plus 7 per unit: copy X1 through a temporary, then increment
    assert res == Halted(8, 58)


def test_plus_program(env):
    assert run(compile_rf(Call("plus"), env), (2, 3), 10**5).output == 5


def test_unsatisfiable_search_never_halts():
    p = compile_rf(Mu(Const(1, 1)))
    for fuel in (0, 10, 1000, 10**5):
        assert isinstance(run(p, (), fuel), StillRunning)


def test_bounded_search_exhaustion_traps():
    p = compile_rf(Mu(Const(1, 2), 3))
    assert isinstance(eval_rf(Mu(Const(1, 2), 3), (0,), 100), ProvenUndefined)
    assert isinstance(run(p, (0,), 10**5), StillRunning)


def test_compilation_is_deterministic(env):
    assert format_imp(compile_rf(Call("prime"), env)) == format_imp(compile_rf(Call("prime"), env))


def test_inputs_are_preserved_for_reuse(env):
    # proj(2,1) is read after the second argument has been consumed elsewhere
    e = rf.parse_expr("comp(plus, proj(2, 1), comp(times, proj(2, 1), proj(2, 2)))", env)
    assert run(compile_rf(e, env), (3, 4), 10**6).output == 15


@pytest.mark.parametrize(
    "name,args",
    [("monus", (3, 7)), ("monus", (9, 2)), ("fact", (4,)), ("isqrt", (17,)), ("lpd", (35,)),
     ("has_divisor", (13,)), ("cond", (0, 3, 5)), ("cond", (2, 3, 5)), ("exact_half", (8,)), ("tri_root", (11,))],
)
def test_library_compiled(env, name, args):
    out = eval_rf(Call(name), args, 10**7, env)
    assert run(compile_rf(Call(name), env), args, 10**7).output == out.value


@given(pr_exprs(max_arity=3, max_depth=4))
@settings(max_examples=80, deadline=None)
def test_compiled_random_expressions_agree(case):
    expr, args = case
    out = eval_rf(expr, args, 10**6)
    assert isinstance(out, Defined)
    res = run(compile_rf(expr), args, 10**7)
    assert isinstance(res, Halted)
    assert res.output == out.value
