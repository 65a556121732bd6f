import itertools
import json
import math
import shutil

import pytest

from haltlab.corpus import CorpusError, check_labels, default_dir, load_corpus, load_list, resolve_path
from haltlab.evaluator import Defined, Evaluator
from haltlab.rf import Call


def is_prime(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


UNARY = {
    "id": lambda x: x,
    "pred": lambda x: max(x - 1, 0),
    "sg": lambda x: int(x > 0),
    "nsg": lambda x: int(x == 0),
    "double": lambda x: 2 * x,
    "square": lambda x: x * x,
    "fact": math.factorial,
    "triangle": lambda x: x * (x + 1) // 2,
    "even": lambda x: int(x % 2 == 0),
    "odd": lambda x: x % 2,
    "half": lambda x: x // 2,
    "prime": lambda x: int(is_prime(x)),
    "has_divisor": lambda x: int(x >= 2 and not is_prime(x)),
    "isqrt": math.isqrt,
    "is_square": lambda x: int(math.isqrt(x) ** 2 == x),
    "next_prime": lambda x: next(p for p in itertools.count(x + 1) if is_prime(p)),
    "poly3": lambda x: 3 * x * x + 2 * x + 1,
    "clamp10": lambda x: min(x, 10),
}

BINARY = {
    "plus": lambda x, y: x + y,
    "monus": lambda x, y: max(x - y, 0),
    "times": lambda x, y: x * y,
    "absdiff": lambda x, y: abs(x - y),
    "le": lambda x, y: int(x <= y),
    "lt": lambda x, y: int(x < y),
    "ge": lambda x, y: int(x >= y),
    "gt": lambda x, y: int(x > y),
    "eq": lambda x, y: int(x == y),
    "neq": lambda x, y: int(x != y),
    "land": lambda x, y: int(x > 0 and y > 0),
    "lor": lambda x, y: int(x > 0 or y > 0),
    "min": min,
    "max": max,
    "mod": lambda x, y: x % y if y else x,
    "remr": lambda d, m: m % d if d else m,
    "divides": lambda d, m: int((m % d == 0) if d else m == 0),
    "quo": lambda d, m: m // d if d else 0,
    "avg_floor": lambda x, y: (x + y) // 2,
    "sign_diff": lambda x, y: int(x != y),
}


@pytest.mark.parametrize("name", sorted(UNARY))
def test_unary_library_matches_brute_force(env, name):
    ev = Evaluator(env)
    for x in range(0, 31 if name != "fact" else 9):
        assert ev.eval(Call(name), (x,), 10**8) == Defined(UNARY[name](x), ev.spent), (name, x)


@pytest.mark.parametrize("name", sorted(BINARY))
def test_binary_library_matches_brute_force(env, name):
    ev = Evaluator(env)
    for x in range(0, 13):
        for y in range(0, 13):
            out = ev.eval(Call(name), (x, y), 10**8)
            assert isinstance(out, Defined) and out.value == BINARY[name](x, y), (name, x, y)


def test_cond_and_power(env):
    ev = Evaluator(env)
    for c, a, b in itertools.product(range(3), range(3), range(3)):
        assert ev.eval(Call("cond"), (c, a, b), 10**6).value == (a if c else b)
    for b, e in itertools.product(range(5), range(5)):
        assert ev.eval(Call("power"), (b, e), 10**7).value == b**e


def test_partial_searches(env):
    ev = Evaluator(env)
    for x in range(0, 20):
        half = ev.eval(Call("exact_half"), (x,), 10**7)
        root = ev.eval(Call("exact_sqrt"), (x,), 10**7)
        assert (half.value if isinstance(half, Defined) else None) == (x // 2 if x % 2 == 0 else None)
        assert (root.value if isinstance(root, Defined) else None) == (math.isqrt(x) if math.isqrt(x) ** 2 == x else None)


def test_goldbach_small_labels(env):
    ev = Evaluator(env)
    assert ev.eval(Call("goldbach_cex"), (6,), 10**7).value == 0
    assert ev.eval(Call("goldbach_cex"), (8,), 10**7).value == 0
    assert ev.eval(Call("gb_witness"), (8,), 10**7).value == 3


def test_goldbach_witness_brute_force(env):
    ev = Evaluator(env)
    for n in range(0, 60):
        want = next((x for x in range(n + 1) if is_prime(x) and is_prime(n - x)), n + 1)
        assert ev.eval(Call("gb_witness"), (n,), 10**8).value == want, n


def test_sq1_labels(corpus):
    g = corpus["g_sq1"]
    assert all(p.label == "Diverges" for p in g.probes)
    assert corpus["goldbach_mu"].probes[0].label == "Open"


def test_corpus_shape(corpus):
    assert len(corpus.functions()) >= 40
    # nullary searchers and the open Goldbach searchers have few meaningful inputs
    assert sum(len(e.probes) >= 5 for e in corpus.functions()) >= 40
    assert len(corpus.programs()) >= 10
    assert set(corpus.lists) == {"list1", "list2", "list3"}
    assert all(e.provenance for e in corpus)


def test_labels_reconfirmed(corpus):
    check_labels(corpus, fuel=10**6)


def test_never_defined_is_undefined(env):
    out = Evaluator(env).eval(Call("never_defined"), (0,), 10**4)
    assert not isinstance(out, Defined)


def test_resolve_bundled_path():
    assert resolve_path("corpus/self_loop.imp") == default_dir() / "self_loop.imp"
    with pytest.raises(FileNotFoundError):
        resolve_path("corpus/nothing_here.imp")


@pytest.fixture
def corpus_copy(tmp_path):
    d = tmp_path / "corpus"
    shutil.copytree(default_dir(), d)
    return d


def test_malformed_rf(corpus_copy):
    (corpus_copy / "misc.rf").write_text("def broken = comp(plus\n")
    with pytest.raises(CorpusError, match="misc.rf"):
        load_corpus(corpus_copy)


def test_malformed_labels_json(corpus_copy):
    (corpus_copy / "misc.labels.json").write_text("{not json")
    with pytest.raises(CorpusError, match="misc.labels.json"):
        load_corpus(corpus_copy)


def test_label_for_unknown_name(corpus_copy):
    path = corpus_copy / "misc.labels.json"
    data = json.loads(path.read_text())
    data["ghost"] = {"provenance": "x", "probes": []}
    path.write_text(json.dumps(data))
    with pytest.raises(CorpusError, match="ghost"):
        load_corpus(corpus_copy)


def test_bad_label_value(corpus_copy):
    path = corpus_copy / "misc.labels.json"
    data = json.loads(path.read_text())
    data["sum_to"]["probes"].append({"input": [1], "label": "Maybe"})
    path.write_text(json.dumps(data))
    with pytest.raises(CorpusError, match="unknown label"):
        load_corpus(corpus_copy)


def test_wrong_label_caught_by_check(corpus_copy):
    path = corpus_copy / "misc.labels.json"
    data = json.loads(path.read_text())
    data["sum_to"]["probes"] = [{"input": [3], "label": "Halts", "value": 7}]
    path.write_text(json.dumps(data))
    load_corpus(corpus_copy)
    with pytest.raises(CorpusError, match="sum_to"):
        load_corpus(corpus_copy, check=True, fuel=10**6)


def test_missing_library(tmp_path):
    with pytest.raises(CorpusError, match="arith.rf"):
        load_corpus(tmp_path)


def test_non_unary_list(env, tmp_path):
    p = tmp_path / "listx.rf"
    p.write_text("def a = plus\n")
    with pytest.raises(CorpusError, match="not unary"):
        load_list(p, env)
