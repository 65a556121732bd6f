import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from haltlab.evaluator import NoIntegerRoot
from haltlab.polynomial import Polynomial, cauchy_bound, isolate_integer_roots, prove_empty_search, sign_changes

coeff_lists = st.lists(st.integers(-20, 20), min_size=1, max_size=6)


def brute_roots(p: Polynomial, b: int) -> list[int]:
    return [x for x in range(-b, b + 1) if p(x) == 0]


def test_examples():
    assert isolate_integer_roots(Polynomial((-4, 0, 1))) == ([-2, 2], 5)
    assert isolate_integer_roots(Polynomial((1, 0, 1))) == ([], 2)
    assert isolate_integer_roots(Polynomial((-3, 1)))[0] == [3]


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        isolate_integer_roots(Polynomial())


def test_trailing_zeros_stripped():
    assert Polynomial((1, 2, 0, 0)).degree == 1
    assert Polynomial((0,)).is_zero()


def test_arithmetic_and_str():
    x = Polynomial.x()
    p = x * x - Polynomial.const(4)
    assert p.coeffs == (-4, 0, 1)
    assert str(p) == "x^2 - 4"
    assert str(Polynomial((1, -1))) == "-x + 1"
    assert p(3) == 5


def test_cauchy_bound_rounds_up():
    assert cauchy_bound(Polynomial((1, 3))) == 2  # 1 + 1/3 -> 2
    assert cauchy_bound(Polynomial((7, 0, 2))) == 5  # 1 + ceil(7/2)


@given(coeff_lists)
@settings(max_examples=300, deadline=None)
def test_roots_agree_with_brute_force(coeffs):
    p = Polynomial(coeffs)
    assume(not p.is_zero())
    roots, b = isolate_integer_roots(p)
    assert roots == brute_roots(p, b)


@given(coeff_lists, st.integers(-200, 200))
@settings(max_examples=200, deadline=None)
def test_no_root_outside_cauchy_bound(coeffs, x):
    p = Polynomial(coeffs)
    assume(not p.is_zero())
    b = cauchy_bound(p)
    assume(abs(x) > b)
    assert p(x) != 0


def test_prove_empty_search_examples():
    sq1 = Polynomial((1, 0, 1))
    cert = prove_empty_search(sq1, 0)
    assert isinstance(cert, NoIntegerRoot) and cert.cauchy_bound == 2 and cert.roots == ()
    assert cert.verify()
    xm3 = Polynomial((-3, 1))
    assert prove_empty_search(xm3, 0) is None
    cert = prove_empty_search(xm3, 5)
    assert cert is not None and cert.roots == (3,) and cert.verify()


def test_tampered_certificate_fails_verification():
    cert = prove_empty_search(Polynomial((-3, 1)), 5)
    forged = NoIntegerRoot(cert.coeffs, 1, cert.cauchy_bound, cert.roots)
    assert not forged.verify()


def test_sign_changes():
    p = Polynomial((-2, 0, 1))  # roots at +-sqrt(2)
    assert sign_changes(p, -3, 3) == [(-2, -1), (1, 2)]
