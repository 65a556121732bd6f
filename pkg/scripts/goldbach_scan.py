"""Check goldbach_cex(n) = 0 for every even n in (4, limit], then analyze the unbounded searcher."""

import argparse
import time

from haltlab.analyzer import AnalyzerConfig, OnInput, ProblemSpec, RFTarget, analyze
from haltlab.corpus import load_corpus
from haltlab.evaluator import Defined, Evaluator
from haltlab.rf import Call


def scan(env, limit: int, fuel: int) -> list[int]:
    """Even n in (4, limit] where goldbach_cex is not Defined(0)."""
    ev = Evaluator(env)
    bad = []
    for n in range(6, limit + 1, 2):
        out = ev.eval(Call("goldbach_cex"), (n,), fuel)
        if not (isinstance(out, Defined) and out.value == 0):
            bad.append(n)
    return bad


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--limit", type=int, default=10**4)
    ap.add_argument("--fuel", type=int, default=10**12, help="per-n evaluator fuel")
    args = ap.parse_args(argv)

    env = load_corpus().env
    t0 = time.perf_counter()
    bad = scan(env, args.limit, args.fuel)
    print(f"even n in (4, {args.limit}]: {len(bad)} counterexample(s) {bad[:10]}  ({time.perf_counter() - t0:.1f}s)")

    a = analyze(ProblemSpec(RFTarget(Call("goldbach_mu"), env), OnInput(())), AnalyzerConfig())
    print("goldbach_mu:", a.to_dict())


if __name__ == "__main__":
    main()
