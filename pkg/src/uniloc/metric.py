"""Finite metric spaces and the uniformity generated by the balls ``d < q``."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .frames import Element, FiniteFrame, FrameHom, square
from .uniform import AxiomViolation, PreUniformLocale, Violation, pullback_entourage


@dataclass(frozen=True)
class MetricSpace:
    """Points of a finite (pseudo)metric space with a rational distance table.

    ``dist[i][j]`` is the distance between ``points[i]`` and ``points[j]``.
    Validation checks zero diagonal, symmetry, nonnegativity and the triangle
    inequality, and names the offending points on failure.
    """

    points: tuple[Hashable, ...]
    dist: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.points)
        d = tuple(tuple(Fraction(x) for x in row) for row in self.dist)
        object.__setattr__(self, "dist", d)
        if len(d) != n or any(len(row) != n for row in d):
            raise ValueError("distance table must be square with one row per point")
        P = self.points
        for i in range(n):
            if d[i][i] != 0:
                raise AxiomViolation(Violation("zero diagonal", f"({P[i]})", f"d = {d[i][i]}"))
        for i, j in itertools.combinations(range(n), 2):
            if d[i][j] != d[j][i]:
                raise AxiomViolation(Violation("symmetry", f"({P[i]}, {P[j]})", f"{d[i][j]} ≠ {d[j][i]}"))
            if d[i][j] < 0:
                raise AxiomViolation(Violation("nonnegativity", f"({P[i]}, {P[j]})"))
        for i, j, k in itertools.product(range(n), repeat=3):
            if d[i][k] > d[i][j] + d[j][k]:
                raise AxiomViolation(
                    Violation("triangle inequality", f"({P[i]}, {P[j]}, {P[k]})", f"{d[i][k]} > {d[i][j]} + {d[j][k]}")
                )

    @classmethod
    def from_function(cls, points: Sequence, d) -> MetricSpace:
        return cls(tuple(points), tuple(tuple(d(x, y) for y in points) for x in points))

    @classmethod
    def from_table(cls, points: Sequence, table: Mapping[tuple, Fraction]) -> MetricSpace:
        def d(x, y):
            if x == y:
                return Fraction(0)
            return table[(x, y)] if (x, y) in table else table[(y, x)]

        return cls.from_function(points, d)

    @property
    def frame(self) -> FiniteFrame:
        return _discrete(self.points)

    def thresholds(self) -> list[Fraction]:
        """Distinct positive distances, their halves and quarters; ``[1]`` when there are none."""
        ds = {x for row in self.dist for x in row if x > 0}
        if not ds:
            return [Fraction(1)]
        return sorted(ds | {x / 2 for x in ds} | {x / 4 for x in ds})

    def entourage(self, q) -> Element:
        """``E_q = ⋁{p ⊕ p' | d(p, p') < q}``."""
        q = Fraction(q)
        sq = square(self.frame)
        n = len(self.points)
        mask = 0
        for i in range(n):
            for j in range(n):
                if self.dist[i][j] < q:
                    mask |= 1 << (i * n + j)
        return Element(sq, mask)

    def uniformity(self) -> PreUniformLocale:
        return PreUniformLocale.from_entourages(self.frame, [self.entourage(q) for q in self.thresholds()])


def _discrete(points) -> FiniteFrame:
    return FiniteFrame(points)


def metric_uniformity(points: Sequence, dist) -> PreUniformLocale:
    return MetricSpace(tuple(points), tuple(tuple(r) for r in dist)).uniformity()


def point_map_hom(f: Mapping, X: MetricSpace, Y: MetricSpace) -> FrameHom:
    """Frame map ``O Y → O X`` of the point map ``f: X → Y``."""
    return FrameHom.from_point_map(Y.frame, X.frame, f)


def nonexpansive_failure(f: Mapping, X: MetricSpace, Y: MetricSpace):
    """First threshold ``q`` with ``E_q^X ≰ (f × f)*(E_q^Y)``, or None.

    Thresholds of both spaces are tried; between consecutive distance values
    the entourages are constant, so this decides nonexpansiveness.
    """
    h = point_map_hom(f, X, Y)
    for q in sorted(set(X.thresholds()) | set(Y.thresholds())):
        if not X.entourage(q) <= pullback_entourage(h, Y.entourage(q)):
            return q
    return None


def is_nonexpansive(f: Mapping, X: MetricSpace, Y: MetricSpace) -> bool:
    return nonexpansive_failure(f, X, Y) is None
