"""Write the corpus label sidecars from plain-Python reference functions.

The reference functions below are independent of the evaluator: they are
direct Python transcriptions of what each definition is meant to compute.
``load_corpus(check=True)`` later confirms the labels by evaluation.

    python3 scripts/build_labels.py [corpus_dir]
"""

from __future__ import annotations

import argparse
import json
import math
from pathlib import Path

HALTS, DIVERGES, OPEN = "Halts", "Diverges", "Open"


def is_prime(m: int) -> bool:
    return m >= 2 and all(m % d for d in range(2, math.isqrt(m) + 1))


def lpd(m: int) -> int:
    d = 0
    while not ((d >= 2 and m % d == 0) or d * d > m):
        d += 1
    return d


def has_divisor(m: int) -> bool:
    return any(m % d == 0 for d in range(2, m))


def gb_found(n: int, x: int) -> bool:
    return x <= n and is_prime(x) and is_prime(n - x)


def gb_witness(n: int) -> int:
    return next(x for x in range(n + 2) if gb_found(n, x) or x > n)


def goldbach_cex(n: int) -> int:
    return int(n % 2 == 0 and n > 4 and gb_witness(n) > n)


def monus(a: int, b: int) -> int:
    return max(a - b, 0)


def rem(d: int, m: int) -> int:
    return m % d if d else m


def search(cond, start: int = 0, limit: int = 10**6):
    """Least z >= start with cond(z); None when cond is known to fail (caller decides)."""
    for z in range(start, limit):
        if cond(z):
            return z
    raise RuntimeError("reference search ran out")


def root(n: int, k: int):
    r = round(n ** (1 / k)) if n else 0
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == n:
            return c
    return None


# name -> (reference, provenance, probes); a reference returns an int or DIVERGES
ARITH = {
    "id": (lambda x: x, "identity", [(0,), (1,), (5,), (9,), (30,)]),
    "pred": (lambda x: monus(x, 1), "x - 1 truncated at 0", [(0,), (1,), (2,), (7,), (30,)]),
    "plus": (lambda x, y: x + y, "integer addition", None),
    "monus": (monus, "truncated subtraction", None),
    "times": (lambda x, y: x * y, "integer multiplication", None),
    "sg": (lambda x: int(x > 0), "sign", [(0,), (1,), (2,), (9,), (30,)]),
    "nsg": (lambda x: int(x == 0), "negated sign", [(0,), (1,), (2,), (9,), (30,)]),
    "absdiff": (lambda x, y: abs(x - y), "absolute difference", None),
    "le": (lambda x, y: int(x <= y), "x <= y", None),
    "lt": (lambda x, y: int(x < y), "x < y", None),
    "ge": (lambda x, y: int(x >= y), "x >= y", None),
    "gt": (lambda x, y: int(x > y), "x > y", None),
    "eq": (lambda x, y: int(x == y), "x == y", None),
    "neq": (lambda x, y: int(x != y), "x != y", None),
    "land": (lambda a, b: int(bool(a) and bool(b)), "conjunction of truth values", None),
    "lor": (lambda a, b: int(bool(a) or bool(b)), "disjunction of truth values", None),
    "lnot": (lambda a: int(a == 0), "negation of a truth value", [(0,), (1,), (2,), (5,), (30,)]),
    "cond": (lambda c, a, b: a if c else b, "if c then a else b", [(0, 2, 3), (1, 2, 3), (2, 4, 1), (0, 0, 5), (3, 0, 0), (1, 5, 5)]),
    "min": (min, "minimum", None),
    "max": (max, "maximum", None),
    "double": (lambda x: 2 * x, "2x", [(0,), (1,), (3,), (8,), (30,)]),
    "square": (lambda x: x * x, "x squared", [(0,), (1,), (3,), (7,), (12,)]),
    "power": (lambda x, y: x**y, "x to the power y", [(2, 0), (2, 3), (3, 2), (0, 0), (0, 3), (1, 5), (2, 5)]),
    "fact": (math.factorial, "factorial", [(0,), (1,), (2,), (3,), (4,), (5,)]),
    "triangle": (lambda y: y * (y + 1) // 2, "0 + 1 + ... + y", [(0,), (1,), (4,), (7,), (12,)]),
    "even": (lambda y: int(y % 2 == 0), "parity", [(0,), (1,), (2,), (7,), (30,)]),
    "odd": (lambda y: y % 2, "parity", [(0,), (1,), (2,), (7,), (30,)]),
    "half": (lambda y: y // 2, "floor of y / 2", [(0,), (1,), (2,), (7,), (30,)]),
    "remr": (rem, "remainder of m by d (m when d = 0)", [(3, 10), (1, 7), (5, 5), (0, 4), (4, 3), (7, 30)]),
    "mod": (lambda m, d: rem(d, m), "m mod d (m when d = 0)", [(10, 3), (7, 1), (5, 5), (4, 0), (3, 4), (30, 7)]),
    "divides": (lambda d, m: int(rem(d, m) == 0), "d divides m", [(3, 12), (3, 10), (1, 7), (0, 0), (0, 5), (6, 30)]),
    "quo": (lambda d, m: m // d if d else 0, "floor of m / d (0 when d = 0)", [(3, 10), (1, 7), (5, 5), (0, 4), (4, 3), (7, 30)]),
    "lpd_stop": (lambda m, d: int(not ((d >= 2 and m % d == 0) or d * d > m)), "search condition of lpd", [(9, 2), (9, 3), (7, 3), (0, 0), (1, 1), (30, 5)]),
    "lpd": (lpd, "least d >= 2 dividing m, or the least d with d * d > m", [(0,), (1,), (2,), (9,), (25,), (29,), (30,)]),
    "prime": (lambda m: int(is_prime(m)), "primality by trial division", [(0,), (1,), (2,), (3,), (4,), (9,), (13,), (25,), (29,)]),
    "div_witness": (lambda m, d: int(2 <= d < m and m % d == 0), "d is a proper divisor of m", [(6, 2), (6, 3), (7, 7), (9, 3), (0, 0), (4, 1)]),
    "div_stop": (
        lambda m, d: int(not ((2 <= d < m and m % d == 0) or d > m)),
        "search condition of has_divisor",
        [(6, 2), (7, 3), (7, 8), (4, 5), (0, 0), (1, 1)],
    ),
    "has_divisor": (lambda m: int(has_divisor(m)), "exists d with 2 <= d < m and d | m", [(0,), (1,), (2,), (4,), (9,), (13,), (30,)]),
}

PAIRS = [(0, 0), (2, 3), (3, 2), (5, 5), (7, 1), (1, 7), (0, 4)]


ALGEBRA = {
    "f_sq1": (lambda x: x * x + 1, "x^2 + 1", [(0,), (1,), (2,), (5,), (10,)]),
    "g_sq1": (lambda y: DIVERGES, "x^2 + 1 is never 0", [(0,), (1,), (2,), (5,), (10,)]),
    "mu_sq1": (lambda: DIVERGES, "x^2 + 1 is never 0", [()]),
    "sq1_search": (lambda y: DIVERGES, "x^2 + 1 is never 0", [(0,), (1,), (2,), (3,), (4,)]),
    "root_xm3": (lambda y: 3 if y < 3 else DIVERGES, "the only root of x - 3 is 3", [(0,), (1,), (2,), (3,), (5,)]),
    "root_sq4": (lambda y: 2 if y < 2 else DIVERGES, "the only natural root of x^2 - 4 is 2", [(0,), (1,), (2,), (3,), (6,)]),
    "exact_sqrt": (lambda n: root(n, 2) if root(n, 2) is not None else DIVERGES, "square root where it is a natural number", [(0,), (1,), (2,), (9,), (10,), (16,)]),
    "exact_half": (lambda n: n // 2 if n % 2 == 0 else DIVERGES, "n / 2 where n is even", [(0,), (1,), (4,), (7,), (10,)]),
    "exact_cbrt": (lambda n: root(n, 3) if root(n, 3) is not None else DIVERGES, "cube root where it is a natural number", [(0,), (1,), (2,), (8,), (9,)]),
    "isqrt": (math.isqrt, "floor of the square root", [(0,), (1,), (3,), (4,), (10,), (24,)]),
    "ilog2": (lambda n: n.bit_length() - 1 if n else 0, "floor of log2 n (0 for n = 0)", [(0,), (1,), (2,), (5,), (8,), (20,)]),
    "tri_root": (lambda n: search(lambda x: x * (x + 1) // 2 >= n), "least x with x(x+1)/2 >= n", [(0,), (1,), (3,), (4,), (10,), (11,)]),
    "never_defined": (lambda y: DIVERGES, "the condition is constantly 1", [(0,), (1,), (2,), (3,), (4,)]),
}

GOLDBACH = {
    "gb_found": (lambda n, x: int(gb_found(n, x)), "x <= n and x, n - x prime", [(6, 3), (6, 2), (8, 3), (8, 5), (4, 2), (9, 4)]),
    "gb_stop": (lambda n, x: int(not (gb_found(n, x) or x > n)), "search condition of gb_witness", [(6, 3), (6, 2), (6, 7), (1, 2), (0, 0)]),
    "gb_witness": (gb_witness, "least x <= n with x and n - x prime, else n + 1", [(0,), (4,), (6,), (8,), (11,), (12,)]),
    "goldbach_cex": (goldbach_cex, "hand check: 6 = 3 + 3, 8 = 3 + 5, 10 = 3 + 7, 12 = 5 + 7; odd n and n <= 4 are excluded", [(6,), (8,), (10,), (12,), (7,), (4,), (2,)]),
    "goldbach_mu": (lambda: OPEN, "least counterexample to the Goldbach conjecture; unknown whether one exists", [()]),
    "goldbach_from": (lambda y: OPEN, "least counterexample >= y; unknown whether one exists", [(0,), (6,), (100,)]),
    "goldbach_tester": (
        lambda n: DIVERGES if goldbach_cex(n) == 0 else 0,
        "n is not a counterexample (checked by brute force), so the search never stops",
        [(0,), (6,), (7,), (8,), (12,)],
    ),
    "goldbach_search": (lambda y: OPEN, "least counterexample; unknown whether one exists", [(0,), (1,)]),
}

MISC = {
    "next_prime": (lambda n: search(is_prime, n + 1), "least prime above n", [(0,), (2,), (7,), (13,), (20,)]),
    "twin_after": (lambda n: search(lambda x: is_prime(x) and is_prime(x + 2), n + 1), "least x > n with x and x + 2 prime", [(0,), (3,), (5,), (6,), (12,)]),
    "first_multiple": (
        lambda a, d: (a // d + 1) * d if d else DIVERGES,
        "least z > a divisible by d; with d = 0 only z = 0 qualifies, which is not > a",
        [(0, 3), (4, 3), (6, 3), (5, 1), (2, 0), (0, 0)],
    ),
    "sum_to": (lambda y: y * (y + 1) // 2, "0 + 1 + ... + y", [(0,), (1,), (5,), (9,), (12,)]),
    "poly3": (lambda x: 3 * x * x + 2 * x + 1, "3x^2 + 2x + 1", [(0,), (1,), (2,), (5,), (9,)]),
    "clamp10": (lambda x: min(x, 10), "min(x, 10)", [(0,), (5,), (10,), (11,), (30,)]),
    "sign_diff": (lambda x, y: int(x != y), "sign of |x - y|", None),
    "avg_floor": (lambda x, y: (x + y) // 2, "floor of (x + y) / 2", None),
    "is_square": (lambda n: int(math.isqrt(n) ** 2 == n), "n is a perfect square", [(0,), (1,), (2,), (9,), (10,), (16,)]),
}

PROGRAMS = {
    "self_loop": (lambda x: DIVERGES if x else 0, "jumps to itself while X1 > 0", [(0,), (1,), (2,), (5,), (9,)]),
    "flip_flop": (lambda x: DIVERGES if x else 0, "loops while X1 > 0, Z1 alternates", [(0,), (1,), (2,), (5,), (9,)]),
    "ping_pong": (lambda x: DIVERGES if x else 0, "two jumps bounce while X1 > 0", [(0,), (1,), (2,), (5,), (9,)]),
    "drain_then_spin": (lambda x: DIVERGES if x else 0, "spins on Z1 once X1 has been moved into it", [(0,), (1,), (2,), (5,), (9,)]),
    "shuttle": (lambda x: DIVERGES, "moves X1 back and forth forever", [(0,), (1,), (2,), (5,), (9,)]),
    "mod3_counter": (lambda: DIVERGES, "exit test reads Z2, which is never written", [()]),
    "dead_exit": (lambda x: DIVERGES if x else 0, "exit tests Z1, which stays 0", [(0,), (1,), (2,), (5,), (9,)]),
    "sum_then_trap": (lambda a, b: DIVERGES, "ends in a self-jump on Z1 = 1", [(0, 0), (1, 2), (3, 0), (2, 2), (5, 4)]),
    "copy_forever": (lambda x: DIVERGES, "restores X1 and clears Z2 before jumping back", [(0,), (1,), (2,), (5,), (9,)]),
    "bounce_bits": (lambda: DIVERGES, "Z1, Z2 toggle forever", [()]),
    "add": (lambda a, b: a + b, "Y = X1 + X2", [(0, 0), (1, 2), (3, 0), (2, 2), (5, 4)]),
    "countdown": (lambda x: 2 * x, "Y = 2 X1", [(0,), (1,), (2,), (5,), (9,)]),
}


def label_of(fn, args) -> dict:
    v = fn(*args)
    if v in (DIVERGES, OPEN):
        return {"input": list(args), "label": v}
    return {"input": list(args), "label": HALTS, "value": int(v)}


def build(table: dict) -> dict:
    out = {}
    for name, (fn, prov, probes) in table.items():
        probes = probes if probes is not None else PAIRS
        out[name] = {"provenance": prov, "probes": [label_of(fn, a) for a in probes]}
    return out


FILES = {
    "arith": ARITH,
    "algebra": ALGEBRA,
    "goldbach": GOLDBACH,
    "misc": MISC,
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("corpus_dir", nargs="?", default=str(Path(__file__).resolve().parents[1] / "src/haltlab/corpus_data"))
    args = ap.parse_args(argv)
    d = Path(args.corpus_dir)
    for stem, table in FILES.items():
        (d / f"{stem}.labels.json").write_text(json.dumps(build(table), indent=1) + "\n", encoding="utf-8")
    for name, spec in PROGRAMS.items():
        (d / f"{name}.labels.json").write_text(json.dumps(build({name: spec}), indent=1) + "\n", encoding="utf-8")
    print(f"wrote labels for {sum(len(t) for t in FILES.values()) + len(PROGRAMS)} entries to {d}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
