"""Finitely generated opens of the real line and interval-refinement reals.

A ``RealOpen`` is a finite join of generators ``((r, s))``.  Overlapping
intervals merge; intervals that merely touch stay apart, because
``((0,1)) ∨ ((1,2))`` misses the point 1 and is strictly below ``((0,2))``.
Half-lines use ``math.inf`` as an endpoint marker; rational endpoints are
always ``Fraction``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Union

Endpoint = Union[Fraction, float]
INF = math.inf


def _q(x) -> Endpoint:
    if isinstance(x, float):
        if math.isinf(x):
            return x
        raise TypeError("finite endpoints must be exact rationals, not floats")
    return Fraction(x)


@dataclass(frozen=True, order=True)
class Interval:
    """``[lo, hi]`` or ``(lo, hi)`` depending on context; ``lo ≤ hi`` always holds."""

    lo: Endpoint
    hi: Endpoint

    def __post_init__(self):
        object.__setattr__(self, "lo", _q(self.lo))
        object.__setattr__(self, "hi", _q(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")

    @property
    def width(self) -> Endpoint:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def meets(self, other: Interval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __str__(self):
        return f"[{fmt(self.lo)}, {fmt(self.hi)}]"


def fmt(x: Endpoint) -> str:
    if x == INF:
        return "+inf"
    if x == -INF:
        return "-inf"
    return str(x)


class RealOpen:
    """Canonical finite union of open intervals."""

    __slots__ = ("parts",)

    def __init__(self, intervals: Iterable = ()):
        raw = []
        for item in intervals:
            lo, hi = (item.lo, item.hi) if isinstance(item, Interval) else item
            lo, hi = _q(lo), _q(hi)
            if lo < hi:
                raw.append((lo, hi))
        raw.sort()
        merged: list[list] = []
        for lo, hi in raw:
            if merged and lo < merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        self.parts = tuple(Interval(lo, hi) for lo, hi in merged)

    @classmethod
    def gen(cls, r, s) -> RealOpen:
        """The generator ``((r, s))``; zero when ``r ≥ s``."""
        return cls([(r, s)])

    def __eq__(self, other):
        return isinstance(other, RealOpen) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        if not self.parts:
            return "0"
        return " ∨ ".join(f"(({fmt(p.lo)}, {fmt(p.hi)}))" for p in self.parts)

    def __or__(self, other: RealOpen) -> RealOpen:
        return RealOpen(self.parts + other.parts)

    def __and__(self, other: RealOpen) -> RealOpen:
        return RealOpen((max(a.lo, b.lo), min(a.hi, b.hi)) for a in self.parts for b in other.parts)

    def __le__(self, other: RealOpen) -> bool:
        return real_open_leq(self, other)

    @property
    def bounded(self) -> bool:
        return all(math.isfinite(p.lo) and math.isfinite(p.hi) for p in self.parts)

    def star(self, q) -> RealOpen:
        """``st(A, C_q)``: each component widened by ``q`` on both sides."""
        q = Fraction(q)
        return RealOpen((p.lo - q, p.hi + q) for p in self.parts)


ZERO = RealOpen()
TOP = RealOpen([(-INF, INF)])


def real_open_canonicalize(intervals: Iterable) -> RealOpen:
    return RealOpen(intervals)


def real_open_leq(A: RealOpen, B: RealOpen) -> bool:
    """Each component of ``A`` sits inside one component of ``B``.

    Components of a canonical form neither overlap nor share interior
    points, so a connected interval is covered by their union only when a
    single component holds it.
    """
    return all(any(b.lo <= a.lo and a.hi <= b.hi for b in B.parts) for a in A.parts)


def uniformly_below_witness(A: RealOpen, B: RealOpen) -> Fraction | None:
    """A ``q > 0`` with ``st(A, C_q) ≤ B``, or None when there is none.

    A component needs a ``B`` component with room to spare on every finite
    side, and an infinite side only fits against an infinite side.  Half the
    smallest spare room is a witness.
    """
    clearance = None
    for a in A.parts:
        best = None
        for b in B.parts:
            room = []
            for inner, outer in ((a.lo, b.lo), (-a.hi, -b.hi)):
                if math.isinf(inner):
                    if not math.isinf(outer):
                        break
                elif math.isinf(outer):
                    continue
                elif outer < inner:
                    room.append(inner - outer)
                else:
                    break
            else:
                best = min(room) if room else INF
                break
        if best is None:
            return None
        if clearance is None or best < clearance:
            clearance = best
    q = Fraction(1) if clearance is None or clearance == INF else clearance / 2
    assert real_open_leq(A.star(q), B)
    return q


def real_uniformly_below(A: RealOpen, B: RealOpen) -> bool:
    return uniformly_below_witness(A, B) is not None


# -- Dedekind cuts ---------------------------------------------------------------


@dataclass(frozen=True)
class CutMeet:
    """``ℓ_r ∧ u_s``; ``None`` leaves that side unconstrained (so ``CutMeet(r, None)`` is ``ℓ_r``)."""

    lower: Fraction | None = None
    upper: Fraction | None = None


def lower_cut(r) -> CutMeet:
    return CutMeet(Fraction(r), None)


def upper_cut(s) -> CutMeet:
    return CutMeet(None, Fraction(s))


def dedekind_to_open(c: CutMeet) -> RealOpen:
    """``ℓ_r ↦ (r, ∞)``, ``u_s ↦ (-∞, s)``, meets to meets."""
    lo = -INF if c.lower is None else c.lower
    hi = INF if c.upper is None else c.upper
    return RealOpen([(lo, hi)]) if lo < hi else ZERO


def open_to_dedekind(A: RealOpen) -> list[CutMeet]:
    """``((r, s)) ↦ ℓ_r ∧ u_s``, one meet per component."""
    return [
        CutMeet(None if math.isinf(p.lo) else p.lo, None if math.isinf(p.hi) else p.hi)
        for p in A.parts
    ]


def dedekind_iso(direction: str, generator):
    if direction == "to-dedekind":
        return open_to_dedekind(generator)
    if direction == "from-dedekind":
        return dedekind_to_open(generator)
    raise ValueError("direction must be 'to-dedekind' or 'from-dedekind'")


# -- Cauchy reals ----------------------------------------------------------------


class CauchyReal:
    """A point of the completion, given by a pure refinement oracle.

    ``approx(eps)`` returns a closed rational interval of width at most
    ``eps`` containing the point.
    """

    def __init__(self, oracle: Callable[[Fraction], Interval], label: str = "x"):
        self._oracle = oracle
        self.label = label

    def approx(self, eps) -> Interval:
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("precision must be positive")
        out = self._oracle(eps)
        if out.width > eps:
            raise AssertionError(f"oracle for {self.label} overshot: width {out.width} > {eps}")
        return out

    def __repr__(self):
        return f"CauchyReal({self.label})"

    def __add__(self, other: CauchyReal) -> CauchyReal:
        return CauchyReal(lambda e: real_add(self, other, e), f"({self.label} + {other.label})")

    def __mul__(self, other: CauchyReal) -> CauchyReal:
        return CauchyReal(lambda e: real_mul(self, other, e), f"({self.label} * {other.label})")

    def __neg__(self) -> CauchyReal:
        def oracle(e):
            a = self.approx(e)
            return Interval(-a.hi, -a.lo)

        return CauchyReal(oracle, f"-{self.label}")

    def __sub__(self, other: CauchyReal) -> CauchyReal:
        return self + (-other)


def embed_rational(q) -> CauchyReal:
    q = Fraction(q)
    return CauchyReal(lambda e: Interval(q - e / 2, q + e / 2), str(q))


def real_add(x: CauchyReal, y: CauchyReal, eps) -> Interval:
    eps = Fraction(eps)
    a, b = x.approx(eps / 2), y.approx(eps / 2)
    return Interval(a.lo + b.lo, a.hi + b.hi)


def real_mul(x: CauchyReal, y: CauchyReal, eps) -> Interval:
    """Product bracket of width at most ``eps``.

    One probe at precision 1 bounds both magnitudes by ``M``; a later
    ``δ``-interval meets the probe, so its points stay within ``M + 1``.
    """
    eps = Fraction(eps)
    a1, b1 = x.approx(1), y.approx(1)
    M = max(abs(a1.lo), abs(a1.hi), abs(b1.lo), abs(b1.hi))
    delta = min(Fraction(1), eps / (2 * (M + 1)))
    a, b = x.approx(delta), y.approx(delta)
    corners = [a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi]
    return Interval(min(corners), max(corners))
