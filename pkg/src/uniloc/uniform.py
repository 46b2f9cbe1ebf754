"""Covering and entourage uniformities on finite frames.

Uniformities are stored by finite bases.  A cover is kept as the antichain of
maximal generators of its downset, so membership and refinement are cheap
subset tests.  Both forms of a structure are carried side by side in a
``PreUniformLocale``; whichever form was not supplied is produced by the
standard conversion (``overline`` for covers, ``hat`` for entourages).

Finite filters are principal, so ``◁`` and filter membership only ever depend
on the least base member.  The code still quantifies over the whole base: it
keeps the definitions honest and costs nothing at this size.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .frames import (
    Element,
    FiniteFrame,
    FrameHom,
    ProductFrame,
    compose,
    coproduct_hom,
    diagonal,
    opposite,
    relation_image,
    square,
)


# -- covers -------------------------------------------------------------------


def _antichain(masks: Iterable[int]) -> tuple[int, ...]:
    uniq = sorted(set(masks), key=lambda m: (-bin(m).count("1"), m))
    keep: list[int] = []
    for m in uniq:
        if not any(m & ~k == 0 for k in keep):
            keep.append(m)
    return tuple(sorted(keep))


@dataclass(frozen=True)
class Cover:
    """Downset of opens, stored by its maximal generators."""

    frame: FiniteFrame
    gens: tuple[int, ...]

    @classmethod
    def of(cls, frame: FiniteFrame, elems: Iterable) -> Cover:
        masks = [e.mask if isinstance(e, Element) else e for e in elems]
        for m in masks:
            if not frame.is_downset(m):
                raise ValueError(f"{m:#b} is not an element of {frame!r}")
        return cls(frame, _antichain(masks))

    @property
    def join(self) -> int:
        out = 0
        for g in self.gens:
            out |= g
        return out

    def covers(self) -> bool:
        return self.join == self.frame.full

    def contains(self, u: int) -> bool:
        return any(u & ~g == 0 for g in self.gens)

    def refines(self, other: Cover) -> bool:
        """Every member of ``self`` lies in ``other``, i.e. ``self ⊆ other`` as downsets."""
        return all(other.contains(g) for g in self.gens)

    def meet(self, other: Cover) -> Cover:
        return Cover(self.frame, _antichain(g & h for g in self.gens for h in other.gens))

    def is_strong(self) -> bool:
        return 0 not in self.gens

    def generators(self) -> list[Element]:
        return [Element(self.frame, g) for g in self.gens]

    def __repr__(self):
        return "↓{" + ", ".join(self.frame.format(g) for g in self.gens) + "}"


def star_mask(a: int, U: Cover) -> int:
    out = 0
    for g in U.gens:
        if g & a:
            out |= g
    return out


def star(a: Element, U: Cover) -> Element:
    """``st(a, U)``: the join of the members of ``U`` that meet ``a``."""
    U.frame._own(a)
    return Element(U.frame, star_mask(a.mask, U))


def star_set(U: Cover) -> Cover:
    return Cover(U.frame, _antichain(star_mask(g, U) for g in U.gens))


def strengthen(U: Cover) -> Cover:
    """Keep only the positive generators.

    On the one-element frame this yields the empty cover, which still covers
    because there ``0 = 1``.
    """
    out = Cover(U.frame, tuple(g for g in U.gens if g))
    if not out.covers():
        raise ValueError(f"positive part of {U!r} does not cover")
    return out


def overline(U: Cover) -> Element:
    """``⋁ u ⊕ u`` over the members of a strengthened cover."""
    sq = square(U.frame)
    mask = 0
    for g in strengthen(U).gens:
        mask |= sq.rect(g, g)
    return Element(sq, mask)


def hat(E: Element) -> Cover:
    """``↓{u > 0 | u ⊕ u ≤ E}``."""
    sq = E.frame
    assert isinstance(sq, ProductFrame)
    X = sq.left
    good = [u for u in X.element_masks() if u and sq.rect(u, u) & ~E.mask == 0]
    return Cover(X, _antichain(good))


# -- violations ---------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    axiom: str
    subject: str
    detail: str = ""

    def __str__(self):
        msg = f"{self.axiom} fails for {self.subject}"
        return f"{msg}: {self.detail}" if self.detail else msg


class AxiomViolation(ValueError):
    def __init__(self, violation: Violation):
        self.violation = violation
        super().__init__(str(violation))


# -- uniformities -------------------------------------------------------------


@dataclass(frozen=True)
class CoverUniformity:
    frame: FiniteFrame
    base: tuple[Cover, ...]

    def contains(self, C: Cover) -> bool:
        return any(B.refines(C) for B in self.base)

    def filter_equal(self, other: CoverUniformity) -> bool:
        return all(other.contains(B) for B in self.base) and all(self.contains(B) for B in other.base)

    def uniformly_below(self, a: int, b: int) -> bool:
        return any(star_mask(a, U) & ~b == 0 for U in self.base)


@dataclass(frozen=True)
class EntourageUniformity:
    frame: FiniteFrame
    base: tuple[Element, ...]

    def contains(self, G: Element) -> bool:
        return any(E <= G for E in self.base)

    def filter_equal(self, other: EntourageUniformity) -> bool:
        return all(other.contains(E) for E in self.base) and all(self.contains(E) for E in other.base)

    def uniformly_below(self, a: int, b: int) -> bool:
        av = Element(self.frame, a)
        return any(relation_image(E, av).mask & ~b == 0 for E in self.base)


def meet_closure(items: Sequence, meet: Callable, key: Callable = lambda x: x) -> list:
    """Close a finite family under binary meets, keeping first occurrences."""
    out, seen = [], set()
    for x in items:
        if key(x) not in seen:
            seen.add(key(x))
            out.append(x)
    frontier = list(out)
    while frontier:
        new = []
        for x in frontier:
            for y in list(out):
                z = meet(x, y)
                if key(z) not in seen:
                    seen.add(key(z))
                    new.append(z)
        out.extend(new)
        frontier = new
    return out


def cover_violation(frame: FiniteFrame, base: Sequence[Cover]) -> Violation | None:
    if not base:
        return Violation("inhabited", "base", "a uniformity needs at least one cover")
    for U in base:
        if U.frame != frame:
            return Violation("same frame", repr(U))
        if not U.covers():
            missing = frame.full & ~U.join
            return Violation("covering", repr(U), "uncovered irreducibles " + frame.format(frame.downclose(missing)))
    for U, V in itertools.combinations(base, 2):
        W = U.meet(V)
        if not any(B.refines(W) for B in base):
            return Violation("directed", f"{U!r} ∧ {V!r}", "no base cover refines the meet")
    candidates = list(base) + [U.meet(V) for U, V in itertools.combinations(base, 2)]
    for U in base:
        if not any(V.is_strong() and star_set(V).refines(U) for V in (strengthen(W) for W in candidates)):
            return Violation("star-refinement", repr(U), "no strong V in reach with V★ ⊆ U")
    return None


def validate_cover_uniformity(frame: FiniteFrame, base: Iterable) -> CoverUniformity:
    covers = tuple(b if isinstance(b, Cover) else Cover.of(frame, b) for b in base)
    bad = cover_violation(frame, covers)
    if bad:
        raise AxiomViolation(bad)
    return CoverUniformity(frame, covers)


def entourage_violation(frame: FiniteFrame, base: Sequence[Element]) -> Violation | None:
    if not base:
        return Violation("inhabited", "base", "a uniformity needs at least one entourage")
    sq = square(frame)
    delta = diagonal(frame)
    for E in base:
        if E.frame != sq:
            return Violation("same frame", repr(E))
        if not delta <= E:
            missing = [frame.labels[i] for i in range(frame.size) if not E.mask >> (i * frame.size + i) & 1]
            return Violation("reflexivity", repr(E), "diagonal misses " + ", ".join(map(str, missing)))
    for E, F in itertools.combinations(base, 2):
        if not any(G <= (E & F) for G in base):
            return Violation("directed", f"{E!r} ∧ {F!r}", "no base entourage below the meet")
    candidates = list(base) + [E & F for E, F in itertools.combinations(base, 2)]
    for E in base:
        if not any(G <= opposite(E) for G in base):
            return Violation("symmetry", repr(E), "no base entourage below the opposite")
        if not any(compose(F, F) <= E for F in candidates):
            return Violation("transitivity", repr(E), "no F in reach with F∘F ≤ E")
    return None


def validate_entourage_uniformity(frame: FiniteFrame, base: Iterable[Element]) -> EntourageUniformity:
    ents = tuple(base)
    bad = entourage_violation(frame, ents)
    if bad:
        raise AxiomViolation(bad)
    return EntourageUniformity(frame, ents)


def covers_to_entourages(U: CoverUniformity) -> EntourageUniformity:
    return validate_entourage_uniformity(U.frame, [overline(C) for C in U.base])


def entourages_to_covers(E: EntourageUniformity) -> CoverUniformity:
    return validate_cover_uniformity(E.frame, [hat(F) for F in E.base])


class PreUniformLocale:
    """A finite frame with a uniformity, held in both cover and entourage form."""

    def __init__(self, covers: CoverUniformity, entourages: EntourageUniformity, name: str | None = None):
        if covers.frame != entourages.frame:
            raise ValueError("cover and entourage forms live on different frames")
        self.frame = covers.frame
        self.covers = covers
        self.entourages = entourages
        self.name = name

    @classmethod
    def from_covers(cls, frame: FiniteFrame, base: Iterable, name: str | None = None) -> PreUniformLocale:
        U = validate_cover_uniformity(frame, base)
        return cls(U, covers_to_entourages(U), name)

    @classmethod
    def from_entourages(cls, frame: FiniteFrame, base: Iterable[Element], name: str | None = None) -> PreUniformLocale:
        E = validate_entourage_uniformity(frame, base)
        return cls(entourages_to_covers(E), E, name)

    @classmethod
    def from_both(cls, frame, cover_base, entourage_base, name=None) -> PreUniformLocale:
        U = validate_cover_uniformity(frame, cover_base)
        E = validate_entourage_uniformity(frame, entourage_base)
        if not U.filter_equal(entourages_to_covers(E)):
            raise AxiomViolation(Violation("form agreement", name or "structure", "covers and entourages differ"))
        return cls(U, E, name)

    @classmethod
    def discrete(cls, frame: FiniteFrame, name=None) -> PreUniformLocale:
        return cls.from_entourages(frame, [diagonal(frame)], name)

    @classmethod
    def chaotic(cls, frame: FiniteFrame, name=None) -> PreUniformLocale:
        return cls.from_covers(frame, [Cover.of(frame, [frame.full])], name)

    def __repr__(self):
        tag = self.name or repr(self.frame)
        return f"<PreUniformLocale {tag}: {len(self.covers.base)} covers, {len(self.entourages.base)} entourages>"

    # ◁ and the conucleus

    def uniformly_below(self, a: Element, b: Element, form: str = "cover") -> bool:
        self.frame._own(a, b)
        return self._below(a.mask, b.mask, form)

    def _below(self, a: int, b: int, form: str = "cover") -> bool:
        if form == "cover":
            return self.covers.uniformly_below(a, b)
        if form == "entourage":
            return self.entourages.uniformly_below(a, b)
        raise ValueError(f"unknown form {form!r}")

    @cached_property
    def _r_table(self) -> dict[int, int]:
        masks = self.frame.element_masks()
        table = {}
        for b in masks:
            acc = 0
            for a in masks:
                if a & ~acc and self._below(a, b):
                    acc |= a
            table[b] = acc
        return table

    def conucleus(self, b: Element) -> Element:
        """``r(b) = ⋁{a | a ◁ b}``."""
        self.frame._own(b)
        return Element(self.frame, self._r_table[b.mask])

    def r_mask(self, b: int) -> int:
        return self._r_table[b]

    def fixed_masks(self) -> list[int]:
        return [b for b, rb in self._r_table.items() if rb == b]

    def is_admissible(self) -> bool:
        return all(rb == b for b, rb in self._r_table.items())


def uniformly_below(a: Element, b: Element, structure: PreUniformLocale, form: str = "cover") -> bool:
    return structure.uniformly_below(a, b, form)


def is_admissible(structure: PreUniformLocale) -> bool:
    return structure.is_admissible()


# -- morphisms -----------------------------------------------------------------


def pullback_cover(f: FrameHom, V: Cover) -> Cover:
    return Cover(f.target, _antichain(f.apply(g) for g in V.gens))


def pullback_entourage(f: FrameHom, F: Element) -> Element:
    return coproduct_hom(f, f)(F)


def is_uniform_morphism(f: FrameHom, source: PreUniformLocale, target: PreUniformLocale, form: str = "both") -> bool:
    """Locale map ``source → target`` given by its frame map ``O target → O source``."""
    if f.source != target.frame or f.target != source.frame:
        raise ValueError("frame map does not run from the target frame to the source frame")
    by_cover = all(source.covers.contains(pullback_cover(f, V)) for V in target.covers.base)
    if form == "cover":
        return by_cover
    by_ent = all(source.entourages.contains(pullback_entourage(f, F)) for F in target.entourages.base)
    if form == "entourage":
        return by_ent
    if by_cover != by_ent:
        raise AssertionError(f"cover and entourage tests disagree on {f!r}")
    return by_cover


def initial_uniformity(frame: FiniteFrame, family: Sequence[tuple[FrameHom, PreUniformLocale]]) -> PreUniformLocale:
    """Coarsest structure on ``frame`` making every ``f_i`` uniform.

    Entourage base: all finite meets of pulled-back base entourages.  The
    empty family gives the chaotic structure.
    """
    pulled = []
    for f, structure in family:
        if f.target != frame or f.source != structure.frame:
            raise ValueError("family member does not end at the common frame")
        pulled.extend(pullback_entourage(f, F) for F in structure.entourages.base)
    if not pulled:
        return PreUniformLocale.chaotic(frame)
    base = meet_closure(pulled, lambda x, y: x & y, key=lambda e: e.mask)
    return PreUniformLocale.from_entourages(frame, base)


def initial_cover_uniformity(frame: FiniteFrame, family: Sequence[tuple[FrameHom, PreUniformLocale]]) -> PreUniformLocale:
    """Cover form of ``initial_uniformity``: finite meets of ``↓f_i[V]``."""
    pulled = []
    for f, structure in family:
        pulled.extend(pullback_cover(f, V) for V in structure.covers.base)
    if not pulled:
        return PreUniformLocale.chaotic(frame)
    base = meet_closure(pulled, Cover.meet, key=lambda c: c.gens)
    return PreUniformLocale.from_covers(frame, [strengthen(c) for c in base])


def is_uniform_embedding(f: FrameHom, source: PreUniformLocale, target: PreUniformLocale) -> bool:
    if not f.is_surjective():
        return False
    init = initial_uniformity(source.frame, [(f, target)])
    return source.covers.filter_equal(init.covers)


# -- strong regularity -----------------------------------------------------------


@dataclass(frozen=True)
class StrongRegularity:
    structure: PreUniformLocale
    strongly_regular: bool  # b = ⋁{a | a ◁ b} for every b, with the supplied ◁
    subbasis: tuple[Cover, ...] = field(default=())


def strong_regularity_uniformity(frame: FiniteFrame, rel: Iterable[tuple]) -> StrongRegularity:
    """Uniformity with subbasic covers ``↓{a*, b}`` for ``a ◁ b``.

    ``rel`` lists the pairs of the supplied relation, as elements or masks.
    """
    pairs = {(_m(a), _m(b)) for a, b in rel}
    for a, b in sorted(pairs):
        if frame.pseudocomplement(Element(frame, a)).mask | b != frame.full:
            raise AxiomViolation(
                Violation("rather below", f"({frame.format(a)}, {frame.format(b)})", "a* ∨ b ≠ 1")
            )
        if not any((a, c) in pairs and (c, b) in pairs for c in frame.element_masks()):
            raise AxiomViolation(Violation("interpolation", f"({frame.format(a)}, {frame.format(b)})"))
    sub = [Cover.of(frame, [frame.pseudocomplement(Element(frame, a)).mask, b]) for a, b in sorted(pairs)]
    if not sub:
        sub = [Cover.of(frame, [frame.full])]
    closed = meet_closure(sub, Cover.meet, key=lambda c: c.gens)
    structure = PreUniformLocale.from_covers(frame, [strengthen(c) for c in closed])
    regular = all(b == _join(a for a, b2 in pairs if b2 == b) for b in frame.element_masks())
    return StrongRegularity(structure, regular, tuple(sub))


def _m(x) -> int:
    return x.mask if isinstance(x, Element) else x


def _join(masks: Iterable[int]) -> int:
    out = 0
    for m in masks:
        out |= m
    return out
