import json
import time

import pytest

from haltlab import diagonal as D
from haltlab.analyzer import REGRESS, DivergesProven, Halts, Unknown
from haltlab.evaluator import Defined, Evaluator
from haltlab.rf import Const, Proj, Succ


@pytest.fixture(scope="module")
def small():
    return D.fn_list("g", [Const(0, 1), Succ(), Proj(1, 1)])


def test_finite_diagonal_small(small):
    assert [D.finite_diagonal(small, i).value for i in range(3)] == [1, 3, 3]


def test_finite_diagonal_index_checked(small):
    with pytest.raises(IndexError):
        D.finite_diagonal(small, 3)


def test_fn_list_rejects_non_unary():
    with pytest.raises(ValueError):
        D.fn_list("bad", [Proj(2, 1)])


@pytest.mark.parametrize("name", ["list1", "list2", "list3"])
def test_diagonal_differs_at_own_index(corpus, name):
    fns = corpus.lists[name]
    ev = Evaluator(fns.env)
    defined = 0
    for i in range(len(fns)):
        h = D.finite_diagonal(fns, i)
        g = ev.eval(fns[i], (i,), 10**6)
        if isinstance(h, Defined):
            defined += 1
            assert isinstance(g, Defined) and h.value == g.value + 1
        else:
            assert not isinstance(g, Defined)
    assert defined >= 3


def test_theta_examples(corpus):
    l1 = corpus.lists["list1"]
    assert D.theta_finite(l1, 0, 5) == 1
    assert D.theta_finite(l1, 3, 3) == 0  # x^2 + 1 has no natural root
    assert D.theta_finite(l1, 4, 4) is None  # Goldbach searcher


@pytest.mark.parametrize("name", ["list1", "list2", "list3"])
def test_diag_self_demo(corpus, name):
    fns = corpus.lists[name]
    t0 = time.perf_counter()
    rep = D.diag_self_demo(fns)
    assert time.perf_counter() - t0 < 5
    assert len(rep.events) == 1 and rep.events[0].startswith("regress")
    assert REGRESS in rep.conclusion
    assert rep.facts["d_in_list"] is False
    own = rep.rows[-1]
    assert own.name == "d" and own.index == len(fns)
    assert isinstance(own.analysis.verdict, Unknown) and own.value is None
    for row in rep.rows[:-1]:
        assert row.value == D.theta_finite(fns, row.index, row.index)


@pytest.mark.parametrize("name", ["list1", "list2", "list3"])
def test_alpha_is_converse(corpus, name):
    fns = corpus.lists[name]
    decided = 0
    for z in range(len(fns)):
        rep = D.alpha_demo(fns, z)
        theta = rep.facts["theta"]
        alpha = rep.rows[-1].analysis.verdict
        if theta is None:
            assert isinstance(alpha, Unknown)
            continue
        decided += 1
        if theta == 0:
            assert isinstance(alpha, Halts) and alpha.value == 0
        else:
            assert isinstance(alpha, DivergesProven)
    assert decided >= 4


def test_alpha_expr_values():
    ev = Evaluator()
    assert ev.eval(D.alpha_expr(0), (7,), 100).value == 0
    assert not isinstance(ev.eval(D.alpha_expr(1), (7,), 100), Defined)


def test_reports_deterministic(corpus):
    fns = corpus.lists["list1"]
    a = json.dumps(D.diag_self_demo(fns).to_dict(), sort_keys=True)
    b = json.dumps(D.diag_self_demo(fns).to_dict(), sort_keys=True)
    assert a == b
    assert D.alpha_demo(fns, 3).to_text() == D.alpha_demo(fns, 3).to_text()
