"""Analyze every labeled corpus probe and print a per-entry summary table."""

import argparse
from collections import Counter, defaultdict

from haltlab.analyzer import AnalyzerConfig
from haltlab.corpus import analyze_corpus, load_corpus


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fuel", type=int, default=10**6)
    ap.add_argument("--max-snapshots", type=int, default=10**5)
    args = ap.parse_args(argv)

    corpus = load_corpus()
    results = analyze_corpus(corpus, AnalyzerConfig(fuel=args.fuel, max_snapshots=args.max_snapshots))
    by_entry = defaultdict(list)
    for r in results:
        by_entry[r.name].append(r)
    print(f"{'entry':<18} {'probes':>6} {'decided':>7} {'unsound':>7}  verdicts")
    for name, rs in by_entry.items():
        verdicts = Counter(r.verdict for r in rs)
        shown = ", ".join(f"{v} x{k}" for v, k in sorted(verdicts.items()))
        print(f"{name:<18} {len(rs):>6} {sum(r.decided for r in rs):>7} {sum(not r.sound for r in rs):>7}  {shown}")
    print(f"total: {len(results)} probes, {sum(r.decided for r in results)} decided, "
          f"{sum(not r.sound for r in results)} unsound")


if __name__ == "__main__":
    main()
