"""Left, right and two-sided uniformities of finite discrete groups."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .frames import Element, FiniteFrame, FrameHom, square
from .uniform import PreUniformLocale

SIDES = ("left", "right", "two-sided")


@dataclass(frozen=True)
class FiniteGroup:
    elements: tuple[Hashable, ...]
    table: Mapping[tuple, Hashable]
    identity: Hashable
    name: str = "G"

    @classmethod
    def from_operation(cls, elements: Sequence, op: Callable, identity, name: str = "G") -> FiniteGroup:
        elements = tuple(elements)
        return cls(elements, {(x, y): op(x, y) for x in elements for y in elements}, identity, name)

    def mul(self, x, y):
        return self.table[(x, y)]

    def inv(self, x):
        for y in self.elements:
            if self.table[(x, y)] == self.identity:
                return y
        raise ValueError(f"{x!r} has no inverse")

    def is_abelian(self) -> bool:
        return all(self.mul(x, y) == self.mul(y, x) for x, y in itertools.combinations(self.elements, 2))

    def check_axioms(self) -> None:
        G = self.elements
        for x in G:
            if self.mul(self.identity, x) != x or self.mul(x, self.identity) != x:
                raise ValueError(f"identity law fails at {x!r}")
            self.inv(x)
        for x, y, z in itertools.product(G, repeat=3):
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                raise ValueError(f"associativity fails at {(x, y, z)!r}")

    @property
    def frame(self) -> FiniteFrame:
        return FiniteFrame([str(g) for g in self.elements], name=self.name)

    def neighbourhoods(self) -> list[frozenset]:
        """All subsets containing the identity."""
        rest = [g for g in self.elements if g != self.identity]
        out = []
        for r in range(len(rest) + 1):
            for combo in itertools.combinations(rest, r):
                out.append(frozenset((self.identity, *combo)))
        return out


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup.from_operation(range(n), lambda x, y: (x + y) % n, 0, name=f"Z/{n}")


def symmetric3() -> FiniteGroup:
    """S₃ as permutations of (0, 1, 2); ``x·y`` applies ``y`` first."""
    perms = tuple(itertools.permutations(range(3)))
    return FiniteGroup.from_operation(perms, lambda x, y: tuple(x[y[i]] for i in range(3)), (0, 1, 2), name="S3")


def group_entourage(G: FiniteGroup, u: Iterable, side: str = "left") -> Element:
    """``L_u = {x⁻¹y ∈ u}``, ``R_u = {xy⁻¹ ∈ u}``, ``T_u = L_u ∧ R_u``."""
    u = frozenset(u)
    if G.identity not in u:
        raise ValueError("neighbourhood must contain the identity")
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    sq = square(G.frame)
    n = len(G.elements)
    mask = 0
    for i, x in enumerate(G.elements):
        for j, y in enumerate(G.elements):
            left = G.mul(G.inv(x), y) in u
            right = G.mul(x, G.inv(y)) in u
            ok = {"left": left, "right": right, "two-sided": left and right}[side]
            if ok:
                mask |= 1 << (i * n + j)
    return Element(sq, mask)


def group_uniformities(G: FiniteGroup, side: str = "left") -> dict[frozenset, Element]:
    return {u: group_entourage(G, u, side) for u in G.neighbourhoods()}


def group_uniformity(G: FiniteGroup, side: str = "left") -> PreUniformLocale:
    return PreUniformLocale.from_entourages(G.frame, list(group_uniformities(G, side).values()), name=f"{G.name}/{side}")


def translate(G: FiniteGroup, E: Element, z) -> Element:
    """Shift both coordinates by ``z``: ``(x, y) ↦ (xz, yz)``."""
    sq = E.frame
    n = len(G.elements)
    pos = {g: i for i, g in enumerate(G.elements)}
    mask = 0
    for i, j in sq.pairs(E.mask):
        a = pos[G.mul(G.elements[i], z)]
        b = pos[G.mul(G.elements[j], z)]
        mask |= 1 << (a * n + b)
    return Element(sq, mask)


def is_translation_invariant(G: FiniteGroup, E: Element) -> bool:
    return all(translate(G, E, z) == E for z in G.elements)


def group_hom_map(G: FiniteGroup, H: FiniteGroup, phi: Mapping) -> FrameHom:
    """Frame map ``O H → O G`` of a group homomorphism ``phi: G → H``."""
    for x, y in itertools.product(G.elements, repeat=2):
        if phi[G.mul(x, y)] != H.mul(phi[x], phi[y]):
            raise ValueError(f"not a homomorphism at {(x, y)!r}")
    return FrameHom.from_point_map(H.frame, G.frame, {str(g): str(phi[g]) for g in G.elements})
