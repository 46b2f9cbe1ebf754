"""Small frames, uniformities, maps and fixtures for exhaustive checking."""
from __future__ import annotations

import functools
import itertools
import random
from fractions import Fraction

import networkx as nx

from .frames import Element, FiniteFrame, FrameHom, NotAFrameHom, compose, diagonal, opposite, square
from .groups import FiniteGroup, cyclic, symmetric3
from .metric import MetricSpace
from .uniform import PreUniformLocale

_LETTERS = "abcdefgh"


@functools.cache
def posets(n: int) -> tuple[FiniteFrame, ...]:
    """Frames on ``n`` irreducibles, one per isomorphism class of the poset.

    Every finite poset has a linear extension, so strict relations may be
    taken to run from lower to higher index.
    """
    pairs = list(itertools.combinations(range(n), 2))
    seen: list[nx.DiGraph] = []
    out = []
    for r in range(len(pairs) + 1):
        for rel in itertools.combinations(pairs, r):
            s = set(rel)
            if any((i, j) in s and (j, k) in s and (i, k) not in s for i, j in s for k in range(n)):
                continue
            g = nx.DiGraph(list(rel))
            g.add_nodes_from(range(n))
            if any(nx.is_isomorphic(g, h) for h in seen):
                continue
            seen.append(g)
            labels = _LETTERS[:n]
            out.append(FiniteFrame(labels, [(labels[i], labels[j]) for i, j in rel], name=f"P{n}.{len(out)}"))
    return tuple(out)


def frames(max_irr: int = 3) -> list[FiniteFrame]:
    return [F for n in range(max_irr + 1) for F in posets(n)]


def _partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def closed_entourages(frame: FiniteFrame) -> list[Element]:
    """Reflexive, symmetric, ``E∘E ≤ E`` relations spanned by partitions of the irreducibles.

    Each one on its own is a base of a uniformity.
    """
    sq = square(frame)
    out, seen = [], set()
    for part in _partitions(list(range(frame.size))):
        m = 0
        for block in part:
            for i in block:
                for j in block:
                    m |= sq.rect(frame._below[i], frame._below[j])
        E = Element(sq, m | diagonal(frame).mask)
        if E.mask in seen or opposite(E) != E or not compose(E, E) <= E:
            continue
        seen.add(E.mask)
        out.append(E)
    return out


def structures(max_irr: int = 3) -> list[PreUniformLocale]:
    """Every single-entourage uniformity from ``closed_entourages`` on every small frame."""
    out = []
    for F in frames(max_irr):
        for n, E in enumerate(closed_entourages(F)):
            out.append(PreUniformLocale.from_entourages(F, [E], name=f"{F.name}/E{n}"))
    return out


def random_structure(rng: random.Random, max_irr: int = 4) -> PreUniformLocale:
    """A closed entourage plus a few random reflexive supersets as a redundant base."""
    F = rng.choice(frames(max_irr))
    E = rng.choice(closed_entourages(F))
    sq = square(F)
    base = [E]
    for _ in range(rng.randint(0, 2)):
        extra = 0
        for i in range(sq.size):
            if rng.random() < 0.3:
                extra |= sq._below[i]
        base.append(Element(sq, E.mask | extra))
    rng.shuffle(base)
    return PreUniformLocale.from_entourages(F, base, name=f"{F.name}/random")


def locale_maps(X: FiniteFrame, Y: FiniteFrame) -> list[FrameHom]:
    """Frame maps ``OY → OX`` induced by monotone maps of irreducibles ``X → Y``."""
    out = []
    for images in itertools.product(Y.labels, repeat=X.size):
        try:
            out.append(FrameHom.from_point_map(Y, X, dict(zip(X.labels, images))))
        except NotAFrameHom:
            continue
    return out


# -- metric and group fixtures -------------------------------------------------


def random_metric(rng: random.Random, n: int) -> MetricSpace:
    """Shortest-path closure of random positive rational weights, so the triangle inequality holds."""
    pts = [f"p{i}" for i in range(n)]
    d = [[Fraction(0) if i == j else None for j in range(n)] for i in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        d[i][j] = d[j][i] = Fraction(rng.randint(1, 12), rng.randint(1, 4))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return MetricSpace(tuple(pts), tuple(tuple(r) for r in d))


def line_metric(coords) -> MetricSpace:
    """Points of the rational line with ``|x - y|``."""
    coords = [Fraction(c) for c in coords]
    return MetricSpace.from_function([str(c) for c in coords], lambda x, y: abs(Fraction(x) - Fraction(y)))


def metric_maps():
    """``(name, f, X, Y, nonexpansive)`` fixtures of point maps."""
    X = line_metric([0, 1, 2])
    Y = line_metric([0, 1])
    Z = line_metric([0, 2, 4])
    return [
        ("collapse", {"0": "0", "1": "0", "2": "0"}, X, Y, True),
        ("fold", {"0": "0", "1": "1", "2": "0"}, X, Y, True),
        ("identity", {p: p for p in X.points}, X, X, True),
        ("halve", {"0": "0", "2": "1", "4": "2"}, Z, X, True),
        ("double", {"0": "0", "1": "2", "2": "4"}, X, Z, False),
    ]


def groups() -> list[FiniteGroup]:
    return [cyclic(2), cyclic(4), symmetric3()]


def group_homs():
    """``(name, G, H, phi)`` homomorphism fixtures."""
    z2, z4, s3 = cyclic(2), cyclic(4), symmetric3()

    def sign(p):
        inv = sum(1 for i, j in itertools.combinations(range(3), 2) if p[i] > p[j])
        return inv % 2

    swap = (1, 0, 2)
    return [
        ("Z/4 → Z/2 mod 2", z4, z2, {x: x % 2 for x in z4.elements}),
        ("S3 → Z/2 sign", s3, z2, {p: sign(p) for p in s3.elements}),
        ("Z/2 → S3 onto a transposition", z2, s3, {0: s3.identity, 1: swap}),
        ("Z/2 → Z/4 doubling", z2, z4, {0: 0, 1: 2}),
        ("S3 identity", s3, s3, {p: p for p in s3.elements}),
    ]
