"""Ball arithmetic in the p-adic completion of the rationals.

A ball ``c + O(p^k)`` is the set ``{x | v_p(x - c) ≥ k}``.  Centers are
exact rationals, reduced to a canonical representative so that equal balls
compare equal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime


def _vint(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(q, p: int):
    """``v_p(q)``; ``math.inf`` for zero."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    q = Fraction(q)
    if q == 0:
        return math.inf
    return _vint(abs(q.numerator), p) - _vint(q.denominator, p)


def _canonical(c: Fraction, p: int, k: int) -> Fraction:
    if padic_valuation(c, p) >= k:
        return Fraction(0)
    m = _vint(c.denominator, p)
    unit_den = c.denominator // p**m
    mod = p ** (k + m)
    num = c.numerator * pow(unit_den, -1, mod) % mod
    return Fraction(num, p**m)


@dataclass(frozen=True)
class PAdicBall:
    p: int
    center: Fraction
    k: int

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        object.__setattr__(self, "center", _canonical(Fraction(self.center), self.p, int(self.k)))

    def __str__(self):
        return f"{self.center} + O({self.p}^{self.k})"

    def contains(self, x) -> bool:
        return padic_valuation(Fraction(x) - self.center, self.p) >= self.k

    def _same(self, other: PAdicBall) -> None:
        if not isinstance(other, PAdicBall):
            raise TypeError("expected a p-adic ball")
        if other.p != self.p:
            raise ValueError(f"prime mismatch: {self.p} vs {other.p}")

    def __add__(self, other: PAdicBall) -> PAdicBall:
        self._same(other)
        return PAdicBall(self.p, self.center + other.center, min(self.k, other.k))

    def __neg__(self) -> PAdicBall:
        return PAdicBall(self.p, -self.center, self.k)

    def __sub__(self, other: PAdicBall) -> PAdicBall:
        return self + (-other)

    def __mul__(self, other: PAdicBall) -> PAdicBall:
        self._same(other)
        p = self.p
        k = min(
            self.k + padic_valuation(other.center, p),
            other.k + padic_valuation(self.center, p),
            self.k + other.k,
        )
        return PAdicBall(p, self.center * other.center, int(k))


def padic_arith(op: str, a: PAdicBall, b: PAdicBall | None = None) -> PAdicBall:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown operation {op!r}")
