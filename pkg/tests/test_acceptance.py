"""The eight acceptance criteria, each at its stated scale and tolerance."""

import random
import time

from acceptance_report import criterion
from gen import random_formula, random_pr
from test_godel import emitted_proofs, single_line_mutations

from haltlab import godel, logic
from haltlab.analyzer import (
    AnalyzerConfig,
    DivergesPeriodic,
    DivergesProven,
    OnInput,
    ProblemSpec,
    RFTarget,
    Unknown,
    analyze,
    verify_verdict,
)
from haltlab.compiler import compile_rf
from haltlab.corpus import MACHINE_FUEL, analyze_corpus, compare_compiled
from haltlab import diagonal as D
from haltlab.evaluator import Defined, Evaluator
from haltlab.machine import Halted, run
from haltlab.polynomial import NoIntegerRoot, Polynomial, cauchy_bound, isolate_integer_roots
from haltlab.rf import Call


def test_criterion_1_evaluator_compiler_equivalence(corpus):
    with criterion(1, "evaluator and compiled programs agree") as info:
        t0 = time.perf_counter()
        rows = compare_compiled(corpus, fuel=10**6, machine_fuel=MACHINE_FUEL)
        elapsed = time.perf_counter() - t0
        per_fn: dict[str, int] = {}
        for r in rows:
            per_fn[r.name] = per_fn.get(r.name, 0) + 1
        covered = sum(1 for n in per_fn.values() if n >= 5)
        bad = [(r.name, r.args) for r in rows if not r.agree]
        info.update(functions=covered, probes=len(rows), disagreements=len(bad))
        assert covered >= 40
        assert not bad, bad[:5]
        assert elapsed < 120


def test_criterion_2_goldbach_scan(env):
    with criterion(2, "Goldbach scan to 10^4 and the unbounded searcher") as info:
        ev = Evaluator(env)
        t0 = time.perf_counter()
        bad = []
        for n in range(6, 10**4 + 1, 2):
            out = ev.eval(Call("goldbach_cex"), (n,), 10**12)
            if not (isinstance(out, Defined) and out.value == 0):
                bad.append(n)
        elapsed = time.perf_counter() - t0
        a = analyze(ProblemSpec(RFTarget(Call("goldbach_mu"), env), OnInput(())))
        info.update(counterexamples=len(bad), scan_s=round(elapsed, 1), verdict=type(a.verdict).__name__, degree=a.degree)
        assert not bad
        assert elapsed < 60
        assert isinstance(a.verdict, Unknown) and a.degree == 4


def test_criterion_3_primitive_recursive_totality():
    with criterion(3, "random primitive recursive expressions are Defined") as info:
        rng = random.Random(20240501)
        defined = 0
        for _ in range(500):
            arity = rng.randint(0, 6)
            expr = random_pr(rng, arity, 5)
            args = tuple(rng.randint(0, 6) for _ in range(arity))
            defined += isinstance(Evaluator().eval(expr, args, 10**7), Defined)
        info.update(defined=f"{defined}/500")
        assert defined == 500


def test_criterion_4_non_termination_proofs(corpus):
    with criterion(4, "looping programs, the x^2 + 1 search and no false divergence") as info:
        config = AnalyzerConfig(max_snapshots=10**5)
        looping = [e for e in corpus.programs() if any(p.label == "Diverges" for p in e.probes)]
        detected = 0
        for e in looping:
            p = next(p for p in e.probes if p.label == "Diverges")
            spec = ProblemSpec(e.target, OnInput(p.args))
            v = analyze(spec, config).verdict
            if isinstance(v, DivergesPeriodic) and verify_verdict(spec, v):
                detected += 1

        t0 = time.perf_counter()
        spec = ProblemSpec(RFTarget(Call("g_sq1"), corpus.env), OnInput((0,)))
        v = analyze(spec, config).verdict
        root_s = time.perf_counter() - t0
        root_ok = isinstance(v, DivergesProven) and isinstance(v.reason, NoIntegerRoot) and verify_verdict(spec, v)

        halting = [e.name for e in corpus.functions() if all(p.label == "Halts" for p in e.probes)]
        results = analyze_corpus(corpus, config, names=halting)
        false_div = [(r.name, r.args) for r in results if r.verdict.startswith("Diverges")]

        info.update(looping=f"{detected}/{len(looping)}", root_s=round(root_s, 3), halting_fns=len(halting), false_divergence=len(false_div))
        assert len(looping) == 10 and detected == 10
        assert root_ok and root_s < 1
        assert len(halting) >= 40 and not false_div


def test_criterion_5_root_isolation():
    with criterion(5, "integer roots of random polynomials vs brute force") as info:
        rng = random.Random(7)
        agree = 0
        for _ in range(200):
            degree = rng.randint(1, 5)
            coeffs = [rng.randint(-20, 20) for _ in range(degree)] + [rng.choice([c for c in range(-20, 21) if c])]
            p = Polynomial(coeffs)
            b = cauchy_bound(p)
            brute = [x for x in range(-b, b + 1) if p(x) == 0]
            roots, _ = isolate_integer_roots(p)
            agree += roots == brute
        info.update(agree=f"{agree}/200")
        assert agree == 200


def test_criterion_6_arithmetization(env):
    with criterion(6, "Godel coding, substitution, proof checking") as info:
        rng = random.Random(11)
        round_trip = sub_ok = 0
        for _ in range(1000):
            f = random_formula(rng)
            code = godel.encode(f, env)
            round_trip += godel.decode(code, env) == f
            var = rng.choice(("x", "k", "y"))
            t = logic.numeral(rng.randint(0, 5))
            got = godel.sub(code, godel.encode(t, env), godel.var_code(var), env)
            sub_ok += got == godel.encode(logic.substitute(f, var, t), env)
        proofs = emitted_proofs(env, 20)
        accepted = sum(logic.check_proof(p, p.conclusion, env).ok for *_, p in proofs)
        muts = single_line_mutations(env)
        rejected = sum(not logic.check_proof(m, t, env).ok for m, t in muts)
        x_code = godel.encode(logic.Var("x"), env)
        info.update(round_trip=round_trip, sub=sub_ok, proofs=f"{accepted}/{len(proofs)}", mutations_rejected=f"{rejected}/{len(muts)}", x=x_code)
        assert round_trip == 1000 and sub_ok == 1000
        assert accepted == len(proofs)
        assert len(muts) == 100 and rejected == 100
        assert x_code == 13


def test_criterion_7_isdef_matches_halting(corpus):
    with criterion(7, "IsDef certification agrees with compiled halting") as info:
        env = corpus.env
        checked = proved = 0
        disagreements = []
        for e in corpus.functions():
            if e.arity != 1:
                continue
            fml = godel.encode(logic.ExistsEq("k", logic.FnApp(e.name, (logic.Var("x"),))), env)
            program = compile_rf(e.target, env)
            for p in e.probes:
                (u,) = p.args
                res = godel.is_def(fml, u, 10**6, env)
                halted = isinstance(run(program, (u,), MACHINE_FUEL), Halted)
                is_proved = isinstance(res, godel.Proved)
                if is_proved:
                    assert logic.check_proof(res.proof, res.target, env).ok
                checked += 1
                proved += is_proved
                if is_proved != halted:
                    disagreements.append((e.name, u))
        info.update(points=checked, proved=proved, disagreements=len(disagreements))
        assert checked >= 100
        assert not disagreements, disagreements


def test_criterion_8_diagonal_suite(corpus):
    with criterion(8, "diagonal, regress and converse constructions") as info:
        differs = regress_ok = converse = 0
        for name in ("list1", "list2", "list3"):
            fns = corpus.lists[name]
            ev = Evaluator(fns.env)
            for i in range(len(fns)):
                h = D.finite_diagonal(fns, i)
                if isinstance(h, Defined):
                    g = ev.eval(fns[i], (i,), 10**6)
                    assert h.value != g.value
                    differs += 1
            t0 = time.perf_counter()
            rep = D.diag_self_demo(fns)
            assert time.perf_counter() - t0 < 5
            assert len(rep.events) == 1
            regress_ok += 1
            for z in range(len(fns)):
                rep = D.alpha_demo(fns, z)
                theta = rep.facts["theta"]
                if theta is None:
                    continue
                alpha_defined = rep.rows[-1].value is not None
                assert alpha_defined == (theta == 0)
                converse += 1
        info.update(diagonal_points=differs, regress_demos=regress_ok, converse_points=converse)
        assert regress_ok == 3 and differs >= 9 and converse >= 12
