"""Frames presented by generators and relations.

Relations come in two shapes, both over finite meets of generators:

* ``Equation(S, T)``: ``⋀S = ⋀T``;
* ``CoverRule(S, [T1, ..., Tk])``: ``⋀S ≤ ⋁k ⋀Tk`` (``k = 0`` forces ``⋀S = 0``).

The equations are absorbed first: the meet-semilattice they present is the
family of generator sets closed under ``S ⇒ T`` and ``T ⇒ S``.  The frame is
then the lattice of downsets of that semilattice that are saturated for the
meet-stabilised cover rules, found by least-fixpoint iteration.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from .frames import Element, FiniteFrame, FrameHom, bits


@dataclass(frozen=True)
class Equation:
    lhs: frozenset
    rhs: frozenset


@dataclass(frozen=True)
class CoverRule:
    lhs: frozenset
    rhs: tuple[frozenset, ...]


def eq(lhs: Iterable, rhs: Iterable) -> Equation:
    return Equation(frozenset(lhs), frozenset(rhs))


def cover(lhs: Iterable, rhs: Iterable[Iterable]) -> CoverRule:
    return CoverRule(frozenset(lhs), tuple(frozenset(t) for t in rhs))


@dataclass(frozen=True)
class FramePresentation:
    generators: tuple[Hashable, ...]
    equations: tuple[Equation, ...] = ()
    covers: tuple[CoverRule, ...] = ()

    def __post_init__(self):
        known = set(self.generators)
        if len(known) != len(self.generators):
            raise ValueError("duplicate generator")
        for rel in self.equations:
            self._known(rel.lhs | rel.rhs, known)
        for rel in self.covers:
            self._known(rel.lhs.union(*rel.rhs), known)

    @staticmethod
    def _known(names, known):
        bad = set(names) - known
        if bad:
            raise ValueError(f"relation mentions undeclared generators {sorted(map(str, bad))}")

    def dump(self) -> str:
        """Deterministic text form: one line per generator, then one per relation."""

        def meet(s):
            return " ∧ ".join(sorted(map(str, s))) or "⊤"

        lines = [f"gen {g}" for g in self.generators]
        lines += sorted(f"eq {meet(r.lhs)} = {meet(r.rhs)}" for r in self.equations)
        lines += sorted(
            f"le {meet(r.lhs)} <= " + (" ∨ ".join(meet(t) for t in r.rhs) or "⊥") for r in self.covers
        )
        return "\n".join(lines) + "\n"


class PresentedFrame:
    """The frame presented by a ``FramePresentation``, as a ``FiniteFrame``.

    ``degenerate`` is set when the relations collapse the frame to ``0 = 1``.
    """

    def __init__(self, presentation: FramePresentation):
        self.presentation = presentation
        gens = presentation.generators
        self._gidx = {g: i for i, g in enumerate(gens)}
        self._eqs = [(self._gmask(r.lhs), self._gmask(r.rhs)) for r in presentation.equations]

        # meet-semilattice of closed generator sets
        elems = {self._close(0)}
        for i in range(len(gens)):
            elems.add(self._close(1 << i))
        frontier = list(elems)
        while frontier:
            new = []
            for x in frontier:
                for y in list(elems):
                    z = self._close(x | y)
                    if z not in elems:
                        elems.add(z)
                        new.append(z)
            frontier = new
        self.semilattice = sorted(elems, key=lambda s: (bin(s).count("1"), s))
        self._pos = {s: i for i, s in enumerate(self.semilattice)}
        m = len(self.semilattice)
        # down[i]: members below member i, i.e. closed supersets
        self._down = [0] * m
        for i, s in enumerate(self.semilattice):
            for j, t in enumerate(self.semilattice):
                if t & s == s:
                    self._down[i] |= 1 << j

        rules = set()
        for r in presentation.covers:
            lhs = self._gmask(r.lhs)
            rhs = [self._gmask(t) for t in r.rhs]
            for w in self.semilattice:
                l = self._pos[self._close(w | lhs)]
                rs = 0
                for t in rhs:
                    rs |= 1 << self._pos[self._close(w | t)]
                if not rs >> l & 1:
                    rules.add((l, rs))
        self._rules = sorted(rules)

        self.bottom = self._sat(0)
        principal = [self._sat(self._down[i]) for i in range(m)]
        cands = sorted(set(principal), key=lambda d: (bin(d).count("1"), d))
        irr = []
        for c in cands:
            if c == self.bottom:
                continue
            below = 0
            for d in cands:
                if d != c and d & ~c == 0:
                    below |= d
            if self._sat(below) != c:
                irr.append(c)
        self._irr = irr
        self._rep = {}
        for i, d in enumerate(principal):
            if d in irr and d not in self._rep:
                self._rep[d] = self._short(self.semilattice[i])
        labels = [self._meet_label(self._rep[d]) for d in irr]
        order = [(labels[i], labels[j]) for i, a in enumerate(irr) for j, b in enumerate(irr) if i != j and a & ~b == 0]
        self.frame = FiniteFrame(labels, order)
        self.degenerate = self.frame.size == 0

    # -- internals

    def _gmask(self, names) -> int:
        out = 0
        for g in names:
            out |= 1 << self._gidx[g]
        return out

    def _close(self, s: int) -> int:
        changed = True
        while changed:
            changed = False
            for a, b in self._eqs:
                if a & ~s == 0 and b & ~s:
                    s |= b
                    changed = True
                if b & ~s == 0 and a & ~s:
                    s |= a
                    changed = True
        return s

    def _short(self, s: int) -> int:
        """A smallest generator set with closure ``s``."""
        members = list(bits(s))
        for r in range(len(members) + 1):
            for combo in itertools.combinations(members, r):
                t = sum(1 << i for i in combo)
                if self._close(t) == s:
                    return t
        return s

    def _sat(self, d: int) -> int:
        """Least saturated downset containing ``d``."""
        d = self._downclose(d)
        changed = True
        while changed:
            changed = False
            for l, rs in self._rules:
                if not d >> l & 1 and rs & ~d == 0:
                    d |= self._down[l]
                    changed = True
        return d

    def _downclose(self, d: int) -> int:
        out = 0
        for i in bits(d):
            out |= self._down[i]
        return out

    def _meet_label(self, s: int) -> str:
        names = [str(g) for i, g in enumerate(self.presentation.generators) if s >> i & 1]
        return "∧".join(sorted(names)) if names else "⊤"

    def _to_frame(self, d: int) -> int:
        out = 0
        for k, j in enumerate(self._irr):
            if j & ~d == 0:
                out |= 1 << k
        return out

    # -- public

    def meet_of(self, names: Iterable) -> Element:
        """The element ``⋀ names`` of the presented frame."""
        s = self._close(self._gmask(names))
        return Element(self.frame, self._to_frame(self._sat(self._down[self._pos[s]])))

    def gen(self, name) -> Element:
        return self.meet_of([name])

    def representatives(self) -> list[frozenset]:
        """For each irreducible, a generator set whose meet it is."""
        gens = self.presentation.generators
        return [frozenset(g for i, g in enumerate(gens) if self._rep[d] >> i & 1) for d in self._irr]

    def models(self) -> list[frozenset]:
        """Generators true at each point: one set per irreducible."""
        out = []
        for k in range(self.frame.size):
            j = self.frame._below[k]
            out.append(frozenset(g for g in self.presentation.generators if self.gen(g).mask & j == j))
        return out


def present_frame(p: FramePresentation) -> PresentedFrame:
    return PresentedFrame(p)


def relations_hold(p: FramePresentation, target: FiniteFrame, assign: Mapping) -> str | None:
    """Check every relation under ``assign`` (generator to target mask); return the first failure."""

    def meet(s):
        out = target.full
        for g in s:
            out &= assign[g]
        return out

    for r in p.equations:
        if meet(r.lhs) != meet(r.rhs):
            return f"equation {sorted(map(str, r.lhs))} = {sorted(map(str, r.rhs))}"
    for r in p.covers:
        rhs = 0
        for t in r.rhs:
            rhs |= meet(t)
        if meet(r.lhs) & ~rhs:
            return f"cover {sorted(map(str, r.lhs))} <= {[sorted(map(str, t)) for t in r.rhs]}"
    return None


class RelationFailure(ValueError):
    pass


def hom_from_generators(pf: PresentedFrame, target: FiniteFrame, assign: Mapping) -> FrameHom:
    """The frame map out of a presented frame determined by generator images."""
    masks = {g: (v.mask if isinstance(v, Element) else v) for g, v in assign.items()}
    bad = relations_hold(pf.presentation, target, masks)
    if bad:
        raise RelationFailure(bad)
    images = []
    for rep in pf.representatives():
        m = target.full
        for g in rep:
            m &= masks[g]
        images.append(m)
    return FrameHom(pf.frame, target, images)

