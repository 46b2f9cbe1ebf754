"""The uniform reflection of a finite pre-uniform locale.

The reflection keeps exactly the opens fixed by the conucleus
``r(b) = ⋁{a | a ◁ b}``.  They form a subframe ``R`` of ``O X``; it is
rebuilt here as a standalone ``FiniteFrame`` so later stages never need to
know it came from ``X``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .frames import Element, FiniteFrame, FrameHom
from .uniform import Cover, PreUniformLocale, is_uniform_morphism, strengthen


class NotAdmissible(ValueError):
    pass


def subframe(frame: FiniteFrame, masks) -> tuple[FiniteFrame, FrameHom]:
    """Materialise a subframe of ``frame`` given by its element masks.

    Returns the new frame and the inclusion frame map into ``frame``.  The
    irreducibles of the subframe are the members that are not the join of the
    members strictly below them; each is labelled by its name in ``frame``.
    """
    members = sorted(set(masks))
    irr = []
    for m in members:
        if m == 0:
            continue
        below = 0
        for k in members:
            if k != m and k & ~m == 0:
                below |= k
        if below != m:
            irr.append(m)
    labels = [frame.format(m) for m in irr]
    order = [(labels[i], labels[j]) for i, a in enumerate(irr) for j, b in enumerate(irr) if i != j and a & ~b == 0]
    sub = FiniteFrame(labels, order)
    return sub, FrameHom(sub, frame, irr)


def to_sub(inclusion: FrameHom, mask: int) -> int:
    """Largest element of the subframe whose image lies below ``mask``, as a subframe mask."""
    return inclusion.right_adjoint_mask(mask)


@dataclass
class Reflection:
    source: PreUniformLocale
    frame: FiniteFrame
    inclusion: FrameHom  # υ*: R → O X
    structure: PreUniformLocale

    @property
    def unit(self) -> FrameHom:
        return self.inclusion

    def to_sub(self, b: int) -> int:
        return to_sub(self.inclusion, b)

    def r(self, b: Element) -> Element:
        return self.source.conucleus(b)

    def is_identity(self) -> bool:
        return self.inclusion.is_iso()


def conucleus_r(structure: PreUniformLocale, b: Element) -> Element:
    return structure.conucleus(b)


def uniform_reflection(structure: PreUniformLocale) -> Reflection:
    fixed = structure.fixed_masks()
    R, inc = subframe(structure.frame, fixed)
    base = []
    for U in structure.covers.base:
        gens = [to_sub(inc, structure.r_mask(g)) for g in U.gens]
        base.append(strengthen(Cover.of(R, gens)))
    name = f"Υ({structure.name})" if structure.name else None
    return Reflection(structure, R, inc, PreUniformLocale.from_covers(R, base, name))


def factor_through_unit(refl: Reflection, f: FrameHom, target: PreUniformLocale) -> FrameHom:
    """``f♭`` with ``υ* ∘ f♭* = f*`` for a uniform ``f`` into an admissible target."""
    if not target.is_admissible():
        raise NotAdmissible("target structure is not admissible")
    if f.target != refl.source.frame or f.source != target.frame:
        raise ValueError("map does not run from the reflected structure's locale")
    if not is_uniform_morphism(f, refl.source, target):
        raise ValueError("map is not uniform")
    fixed = set(refl.source.fixed_masks())
    for q, img in enumerate(f.images):
        if img not in fixed:
            raise ValueError(f"image of {f.source.labels[q]!r} is not fixed by r")
    return FrameHom(f.source, refl.frame, [to_sub(refl.inclusion, img) for img in f.images])
