import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import pr_exprs
from haltlab import rf
from haltlab.evaluator import (
    BoundedSearchExhausted,
    ConstantFalseCondition,
    Defined,
    Evaluator,
    Exhausted,
    ProvenUndefined,
    eval_rf,
    mu_search,
    outcome_to_dict,
)
from haltlab.rf import Call, Compose, Const, Mu, Proj, Succ, Zero

FUEL = 10**6


def ev(env, name, *args, fuel=FUEL):
    return eval_rf(Call(name), args, fuel, env)


def test_leaf_costs():
    assert eval_rf(Zero(), (4,), 10) == Defined(0, 1)
    assert eval_rf(Succ(), (4,), 10) == Defined(5, 1)
    assert eval_rf(Proj(3, 2), (1, 2, 3), 10) == Defined(2, 1)
    assert eval_rf(Const(7, 0), (), 10) == Defined(7, 1)


def test_composition_cost():
    # 1 for the node, 1 per argument, 1 for the head
    assert eval_rf(Compose(Succ(), (Succ(),)), (0,), 10) == Defined(2, 3)


def test_fuel_boundary_is_exact():
    e = Compose(Succ(), (Succ(),))
    assert isinstance(eval_rf(e, (0,), 3), Defined)
    assert eval_rf(e, (0,), 2) == Exhausted(2)


@pytest.mark.parametrize(
    "name,args,value",
    [
        ("plus", (2, 3), 5),
        ("times", (4, 6), 24),
        ("monus", (3, 5), 0),
        ("monus", (9, 4), 5),
        ("pred", (0,), 0),
        ("power", (2, 10), 1024),
        ("fact", (5,), 120),
        ("mod", (17, 5), 2),
        ("quo", (5, 17), 3),
        ("half", (9,), 4),
        ("prime", (97,), 1),
        ("prime", (91,), 0),
        ("lpd", (91,), 7),
        ("has_divisor", (21,), 1),
        ("has_divisor", (23,), 0),
        ("isqrt", (26,), 5),
        ("ilog2", (9,), 3),
        ("cond", (0, 4, 7), 7),
    ],
)
def test_library_values(env, name, args, value):
    out = ev(env, name, *args)
    assert isinstance(out, Defined) and out.value == value


def test_library_matches_python_up_to_30(env):
    import math

    def is_prime(m):
        return m >= 2 and all(m % d for d in range(2, math.isqrt(m) + 1))

    for x in range(31):
        assert ev(env, "prime", x).value == int(is_prime(x))
        assert ev(env, "has_divisor", x).value == int(any(x % d == 0 for d in range(2, x)))
        for y in range(0, 31, 3):
            assert ev(env, "plus", x, y).value == x + y
            assert ev(env, "times", x, y).value == x * y
            assert ev(env, "monus", x, y).value == max(x - y, 0)
            assert ev(env, "le", x, y).value == int(x <= y)
            assert ev(env, "eq", x, y).value == int(x == y)


def test_mu_finds_least_zero(env):
    # le(z, x) is 0 exactly when z > x
    out = mu_search(rf.parse_expr("comp(le, proj(2, 2), proj(2, 1))", env), (6,), None, FUEL, env)
    assert out.value == 7
    # first z with z*z >= 10
    body = rf.parse_expr("comp(gt, proj(2, 1), comp(square, proj(2, 2)))", env)
    assert mu_search(body, (10,), None, FUEL, env).value == 4


def test_bounded_search_exhausts():
    out = eval_rf(Mu(Const(1, 2), 5), (0,), 1000)
    assert out == ProvenUndefined(BoundedSearchExhausted(5))


def test_constant_false_condition():
    assert eval_rf(Mu(Const(1, 2)), (0,), 1000) == ProvenUndefined(ConstantFalseCondition())
    assert eval_rf(Mu(Compose(Succ(), (Proj(2, 2),))), (3,), 1000) == ProvenUndefined(ConstantFalseCondition())


def test_blind_body_true_at_zero_is_defined():
    assert eval_rf(Mu(Const(0, 2)), (9,), 100) == Defined(0, 3)


def test_unbounded_divergence_exhausts(env):
    out = ev(env, "sq1_search", 0, fuel=5000)
    assert out == Exhausted(5000)


def test_outcome_dicts():
    assert outcome_to_dict(Defined(3, 9)) == {"outcome": "Defined", "value": 3, "steps": 9}
    assert outcome_to_dict(ProvenUndefined(BoundedSearchExhausted(2))) == {
        "outcome": "ProvenUndefined",
        "reason": "BoundedSearchExhausted",
        "bound": 2,
    }
    assert outcome_to_dict(Exhausted(7)) == {"outcome": "Exhausted", "fuel_spent": 7}


@pytest.mark.parametrize("kernel", ["pred", "sg", "nsg"])
def test_unary_kernel_costs(env, kernel):
    for y in range(6):
        assert ev(env, kernel, y).steps == 2 + 2 * y + 1  # +1 for the call


def test_binary_kernel_costs(env):
    for x in range(5):
        for y in range(5):
            m = min(x, y)
            assert ev(env, "plus", x, y).steps == 1 + 2 + 4 * y
            assert ev(env, "times", x, y).steps == 1 + 2 + y * (7 + 4 * x)
            assert ev(env, "monus", x, y).steps == 1 + 2 + 6 * y + 2 * (m * x - m * (m - 1) // 2)


def _naive(env):
    return Evaluator(env, accelerate=False)


@pytest.mark.parametrize(
    "name,args",
    [("plus", (7, 9)), ("times", (5, 6)), ("mod", (40, 7)), ("prime", (53,)), ("quo", (4, 21)),
     ("isqrt", (30,)), ("goldbach_cex", (20,)), ("has_divisor", (25,)), ("even", (13,))],
)
def test_acceleration_preserves_value_and_steps(env, name, args):
    fast = Evaluator(env).eval(Call(name), args, 10**8)
    slow = _naive(env).eval(Call(name), args, 10**8)
    assert fast == slow


def test_acceleration_preserves_exhaustion_point(env):
    slow = _naive(env).eval(Call("mod"), (40, 7), 10**8)
    for fuel in (1, 50, slow.steps - 1, slow.steps):
        assert Evaluator(env).eval(Call("mod"), (40, 7), fuel) == _naive(env).eval(Call("mod"), (40, 7), fuel)


def test_shared_evaluator_memo_is_transparent(env):
    shared = Evaluator(env)
    first = [shared.eval(Call("prime"), (m,), 10**8) for m in range(40)]
    again = [Evaluator(env).eval(Call("prime"), (m,), 10**8) for m in range(40)]
    assert first == again
    assert [shared.eval(Call("prime"), (m,), 10**8) for m in range(40)] == first


@given(pr_exprs(max_arity=3, max_depth=4))
@settings(max_examples=150, deadline=None)
def test_fast_equals_naive_on_random_expressions(case):
    expr, args = case
    assert eval_rf(expr, args, 10**5) == eval_rf(expr, args, 10**5, accelerate=False)


@given(pr_exprs(max_arity=3, max_depth=4), st.integers(1, 200))
@settings(max_examples=150, deadline=None)
def test_fuel_monotonicity(case, fuel):
    expr, args = case
    small = eval_rf(expr, args, fuel)
    big = eval_rf(expr, args, fuel * 10)
    if isinstance(small, Defined):
        assert big == small
    else:
        assert small == Exhausted(fuel)


@given(st.integers(0, 40), st.integers(0, 6))
@settings(max_examples=100, deadline=None)
def test_mu_minimality(x, k):
    env = rf.parse_rf(
        """
        def plus = primrec(proj(1, 1), comp(succ, proj(3, 3)))
        def pred = primrec(const(0, 0), proj(2, 1))
        def monus = primrec(proj(1, 1), comp(pred, proj(3, 3)))
        def times = primrec(zero, comp(plus, proj(3, 3), proj(3, 1)))
        """
    )
    # least z with x - z*(k+1) = 0, i.e. ceil(x / (k+1))
    body = rf.parse_expr(f"comp(monus, proj(2, 1), comp(times, proj(2, 2), const({k + 1}, 2)))", env)
    out = mu_search(body, (x,), None, 10**6, env)
    assert isinstance(out, Defined)
    z = out.value
    assert z * (k + 1) >= x
    assert z == 0 or (z - 1) * (k + 1) < x


def test_random_pr_always_defined():
    from gen import random_pr

    rng = random.Random(3)
    for _ in range(100):
        a = rng.randint(0, 4)
        e = random_pr(rng, a, 4)
        out = eval_rf(e, [rng.randint(0, 5) for _ in range(a)], 10**7)
        assert isinstance(out, Defined)
