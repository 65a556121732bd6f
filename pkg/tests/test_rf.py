import random

import pytest
from hypothesis import given, settings

from gen import pr_exprs, random_pr
from haltlab import rf
from haltlab.rf import Call, Compose, Const, Mu, PrimRec, Proj, Succ, Zero


def test_parse_basic_forms():
    env = rf.parse_rf(
        """
        # comment
        def one = const(1)
        def p = primrec(proj(1, 1), comp(succ, proj(3, 3)))
        def m = mu(proj(2, 2), bound=4)
        """
    )
    assert env.names == ["one", "p", "m"]
    assert env["one"] == Const(1, 1)
    assert env["p"] == PrimRec(Proj(1, 1), Compose(Succ(), (Proj(3, 3),)))
    assert env["m"] == Mu(Proj(2, 2), 4)
    assert env.arity_of("p") == 2
    assert env.arity_of("m") == 1


def test_const_arity_form():
    assert rf.parse_expr("const(5, 3)") == Const(5, 3)
    assert rf.arity(rf.parse_expr("const(5, 0)")) == 0


def test_huge_naturals_parse():
    big = 10**40
    assert rf.parse_expr(f"const({big})") == Const(big, 1)


def test_syntax_error_position():
    with pytest.raises(rf.RFSyntaxError) as exc:
        rf.parse_rf("def a = succ\ndef b = comp(succ,")
    assert exc.value.line == 2
    assert exc.value.expected


def test_missing_equals_reports_expected():
    with pytest.raises(rf.RFSyntaxError) as exc:
        rf.parse_rf("def a succ")
    assert "=" in str(exc.value)


def test_arity_errors():
    with pytest.raises(rf.ArityError):
        rf.parse_expr("comp(succ, proj(2, 1), proj(2, 2))")
    with pytest.raises(rf.ArityError):
        rf.parse_expr("proj(2, 3)")
    with pytest.raises(rf.ArityError):
        rf.parse_expr("primrec(zero, proj(2, 1))")
    with pytest.raises(rf.ArityError):
        rf.parse_expr("comp(proj(2, 1), succ, proj(2, 1))")


def test_unknown_and_duplicate_names():
    with pytest.raises(rf.UnknownNameError):
        rf.parse_rf("def a = comp(b, succ)")
    with pytest.raises(rf.DuplicateNameError):
        rf.parse_rf("def a = succ\ndef a = zero")
    base = rf.parse_rf("def a = succ")
    with pytest.raises(rf.DuplicateNameError):
        rf.parse_rf("def a = zero", prelude=base)


def test_no_forward_references():
    # a name must be defined before it is called, so cycles are impossible
    with pytest.raises(rf.UnknownNameError):
        rf.parse_rf("def a = comp(succ, b)\ndef b = succ")


def test_prelude_is_visible_but_not_returned():
    lib = rf.parse_rf("def inc = succ")
    local = rf.parse_rf("def two = comp(inc, inc)", prelude=lib)
    assert local.names == ["two"]
    assert rf.with_prelude(lib, local).names == ["inc", "two"]


def test_primitive_recursive_classification(env):
    assert rf.is_primitive_recursive(Call("plus"), env)
    assert rf.is_primitive_recursive(Call("prime"), env)  # bounded search only
    assert not rf.is_primitive_recursive(Call("isqrt"), env)
    assert not rf.is_primitive_recursive(Mu(Proj(2, 2)))
    assert rf.is_primitive_recursive(Mu(Proj(2, 2), 3))


def test_format_round_trip_on_corpus(env):
    for name, expr in env.items():
        assert rf.parse_expr(rf.format_expr(expr), env) == expr, name
    again = rf.parse_rf(rf.format_env(env))
    assert again == env


@given(pr_exprs(max_arity=4, max_depth=5))
@settings(max_examples=200, deadline=None)
def test_format_parse_round_trip(case):
    expr, _ = case
    text = rf.format_expr(expr)
    assert rf.parse_expr(text) == expr
    assert rf.arity(rf.parse_expr(text)) == rf.arity(expr)


def test_generated_expressions_are_primitive_recursive():
    rng = random.Random(7)
    for _ in range(100):
        a = rng.randint(0, 6)
        e = random_pr(rng, a, 5)
        assert rf.arity(e) == a
        assert rf.is_primitive_recursive(e)


def test_walk_visits_every_node():
    e = Compose(Succ(), (PrimRec(Zero(), Proj(3, 3)),))
    kinds = [type(n).__name__ for n in rf.walk(e)]
    assert sorted(kinds) == ["Compose", "PrimRec", "Proj", "Succ", "Zero"]
