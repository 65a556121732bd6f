"""Integer polynomials in one variable and their integer roots."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, isqrt

from .evaluator import NoIntegerRoot


@dataclass(frozen=True)
class Polynomial:
    """Coefficients ``a_0 .. a_n`` (constant term first), trailing zeros stripped."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs=()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def const(cls, c: int) -> "Polynomial":
        return cls((c,))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return self.degree <= 0

    def const_value(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            body = "" if (mag == 1 and k) else str(mag)
            if k:
                body += "x" if k == 1 else f"x^{k}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def cauchy_bound(p: Polynomial) -> int:
    """``1 + max |a_i| / |a_n|`` rounded up; every real root lies in ``[-B, B]``."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no root bound")
    lead = abs(p.coeffs[-1])
    top = max((abs(c) for c in p.coeffs[:-1]), default=0)
    return 1 + ceil(Fraction(top, lead))


def _divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def isolate_integer_roots(p: Polynomial) -> tuple[list[int], int]:
    """All integer roots of ``p`` (sorted) and the Cauchy bound certifying completeness.

    An integer root ``r != 0`` of ``x^m * q(x)`` with ``q(0) != 0`` divides
    ``q(0)``, so only those divisors inside ``[-B, B]`` need testing.
    """
    if p.is_zero():
        raise ValueError("every integer is a root of the zero polynomial")
    b = cauchy_bound(p)
    m = next(i for i, c in enumerate(p.coeffs) if c != 0)
    roots = {0} if m > 0 else set()
    for d in _divisors(abs(p.coeffs[m])):
        if d > b:
            break
        for r in (d, -d):
            if p(r) == 0:
                roots.add(r)
    return sorted(roots), b


def sign_changes(p: Polynomial, lo: int, hi: int) -> list[tuple[int, int]]:
    """Consecutive integers ``(k, k+1)`` in ``[lo, hi]`` where ``p`` strictly changes sign."""
    out = []
    prev = p(lo)
    for k in range(lo, hi):
        cur = p(k + 1)
        if prev * cur < 0:
            out.append((k, k + 1))
        prev = cur
    return out


def prove_empty_search(body: Polynomial, lower: int) -> NoIntegerRoot | None:
    """Certificate that no natural ``x > lower`` satisfies ``body(x) == 0``.

    None when such a root exists (the search will find it) or ``body`` is
    the zero polynomial.
    """
    if body.is_zero():
        return None
    roots, b = isolate_integer_roots(body)
    if any(r >= 0 and r > lower for r in roots):
        return None
    return NoIntegerRoot(body.coeffs, lower, b, tuple(roots))
