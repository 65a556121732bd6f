"""Measure compiled-program step counts over the corpus function probes.

Prints the largest step count of a halting probe so the machine fuel used
for the equivalence check can be chosen with headroom.
"""

import argparse
import time

from haltlab.compiler import compile_rf
from haltlab.corpus import load_corpus
from haltlab.evaluator import Defined, Evaluator
from haltlab.machine import Halted, run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fuel", type=int, default=10**6, help="evaluator fuel")
    ap.add_argument("--machine-fuel", type=int, default=10**8)
    args = ap.parse_args(argv)

    corpus = load_corpus()
    ev = Evaluator(corpus.env)
    worst = (0, None)
    t0 = time.perf_counter()
    for e in corpus.functions():
        prog = compile_rf(e.target, corpus.env)
        for p in e.probes:
            out = ev.eval(e.target, p.args, args.fuel)
            if not isinstance(out, Defined):
                continue
            res = run(prog, p.args, args.machine_fuel)
            if not isinstance(res, Halted) or res.output != out.value:
                print(f"MISMATCH {e.name}{list(p.args)}: eval {out}, machine {res}")
                continue
            if res.steps > worst[0]:
                worst = (res.steps, f"{e.name}{list(p.args)}")
    print(f"largest halting run: {worst[0]} steps at {worst[1]}")
    print(f"elapsed {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
