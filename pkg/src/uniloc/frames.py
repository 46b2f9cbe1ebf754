"""Finite frames, their coproducts, open relations and frame homomorphisms.

A finite frame is stored as the lattice of downsets of a finite poset of
join-irreducibles.  Elements are bitmasks over that poset, so meet is ``&``,
join is ``|`` and the order is subset inclusion.

Positivity follows the classical reading: an element is positive iff it is
not the bottom element.  Names such as ``positive`` and ``overlaps`` keep the
constructive vocabulary even though the test is just ``mask != 0``.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

import networkx as nx


class PosetError(ValueError):
    """The supplied order relation is not antisymmetric."""

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("order relation has a cycle: " + " <= ".join(map(str, self.cycle + self.cycle[:1])))


class FrameMismatch(ValueError):
    pass


class NotAFrameHom(ValueError):
    pass


class NoLeftAdjoint(ValueError):
    pass


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FiniteFrame:
    """Frame of downsets of a finite poset of join-irreducibles.

    ``order`` is an iterable of pairs ``(x, y)`` meaning ``x <= y``; the
    reflexive-transitive closure is taken.  A cycle raises ``PosetError``.
    """

    def __init__(self, irreducibles: Iterable[Hashable] = (), order: Iterable[tuple] = (), name: str | None = None):
        labels = tuple(irreducibles)
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate irreducible labels")
        graph = nx.DiGraph()
        graph.add_nodes_from(labels)
        for x, y in order:
            if x not in graph or y not in graph:
                raise ValueError(f"unknown irreducible in order pair {(x, y)!r}")
            if x != y:
                graph.add_edge(x, y)
        try:
            cycle = nx.find_cycle(graph)
        except nx.NetworkXNoCycle:
            pass
        else:
            raise PosetError([u for u, _ in cycle])
        index = {label: i for i, label in enumerate(labels)}
        below = []
        for i, label in enumerate(labels):
            mask = 1 << i
            for x in nx.ancestors(graph, label):
                mask |= 1 << index[x]
            below.append(mask)
        self._setup(labels, below, name)

    @classmethod
    def _from_masks(cls, labels, below, name=None):
        frame = cls.__new__(cls)
        FiniteFrame._setup(frame, tuple(labels), list(below), name)
        return frame

    def _setup(self, labels, below, name):
        self.labels = labels
        self.name = name
        self.index = {label: i for i, label in enumerate(labels)}
        self.size = len(labels)
        self.full = (1 << self.size) - 1
        self._below = tuple(below)
        above = [0] * self.size
        for i, mask in enumerate(self._below):
            for j in bits(mask):
                above[j] |= 1 << i
        self._above = tuple(above)
        # overlap[i]: irreducibles j whose principal downsets meet that of i
        self._overlap = tuple(
            functools.reduce(lambda acc, t: acc | self._above[t], bits(self._below[i]), 0) for i in range(self.size)
        )
        self._key = (self.labels, self._below)
        self._hash = hash(self._key)

    def __eq__(self, other):
        return isinstance(other, FiniteFrame) and (self is other or self._key == other._key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<FiniteFrame{tag} with {self.size} irreducibles>"

    # -- elements -------------------------------------------------------

    def wrap(self, mask: int) -> Element:
        return Element(self, mask)

    @property
    def top(self) -> Element:
        return Element(self, self.full)

    @property
    def bottom(self) -> Element:
        return Element(self, 0)

    def principal(self, label) -> Element:
        return Element(self, self._below[self.index[label]])

    def element(self, *labels) -> Element:
        """Join of the principal downsets of ``labels``."""
        mask = 0
        for label in labels:
            mask |= self._below[self.index[label]]
        return Element(self, mask)

    def downclose(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self._below[i]
        return out

    def is_downset(self, mask: int) -> bool:
        return all(self._below[i] & ~mask == 0 for i in bits(mask))

    def le(self, x, y) -> bool:
        """Order on irreducible labels."""
        return bool(self._below[self.index[y]] >> self.index[x] & 1)

    def elements(self) -> list[Element]:
        return [Element(self, m) for m in self.element_masks()]

    @functools.cache
    def element_masks(self) -> tuple[int, ...]:
        if self.size > 22:
            raise ValueError("frame too large to enumerate")
        out = []
        # build downsets along a linear extension: adding i requires its strict lower set present
        order = sorted(range(self.size), key=lambda i: bin(self._below[i]).count("1"))
        masks = [0]
        for i in order:
            need = self._below[i] & ~(1 << i)
            masks += [m | 1 << i for m in masks if m & need == need]
        out = sorted(masks)
        return tuple(out)

    def maximal(self, mask: int) -> list[int]:
        """Indices of the maximal irreducibles of a downset."""
        return [i for i in bits(mask) if self._above[i] & mask == 1 << i]

    def pseudocomplement(self, a: Element) -> Element:
        self._own(a)
        mask = 0
        for i in range(self.size):
            if self._below[i] & a.mask == 0:
                mask |= 1 << i
        return Element(self, mask)

    def rather_below(self, a: Element, b: Element) -> bool:
        return (self.pseudocomplement(a) | b).mask == self.full

    @property
    def is_discrete(self) -> bool:
        return all(b == 1 << i for i, b in enumerate(self._below))

    def format(self, mask: int) -> str:
        if mask == 0:
            return "0"
        if mask == self.full:
            return "1"
        return "+".join(_label_str(self.labels[i]) for i in self.maximal(mask))

    def _own(self, *elems: Element) -> None:
        for e in elems:
            if e.frame is not self and e.frame != self:
                raise FrameMismatch(f"{e!r} does not belong to {self!r}")


def _label_str(label) -> str:
    if isinstance(label, tuple):
        return "(" + ",".join(_label_str(x) for x in label) + ")"
    return str(label)


@dataclass(frozen=True)
class Element:
    """An element of a finite frame: a downset of irreducibles, as a bitmask."""

    frame: FiniteFrame
    mask: int

    def _check(self, other: Element) -> None:
        if not isinstance(other, Element):
            raise TypeError(f"expected a frame element, got {type(other).__name__}")
        if other.frame is not self.frame and other.frame != self.frame:
            raise FrameMismatch("operands belong to different frames")

    def __and__(self, other: Element) -> Element:
        self._check(other)
        return Element(self.frame, self.mask & other.mask)

    def __or__(self, other: Element) -> Element:
        self._check(other)
        return Element(self.frame, self.mask | other.mask)

    def __le__(self, other: Element) -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def __ge__(self, other: Element) -> bool:
        return other <= self

    def __lt__(self, other: Element) -> bool:
        return self <= other and self.mask != other.mask

    @property
    def positive(self) -> bool:
        return self.mask != 0

    def overlaps(self, other: Element) -> bool:
        """``a ≬ b``: the meet is positive."""
        return (self & other).positive

    def __repr__(self):
        return self.frame.format(self.mask)


def frame_from_poset(elements: Iterable[Hashable], order: Iterable[tuple] = (), name: str | None = None) -> FiniteFrame:
    return FiniteFrame(elements, order, name)


def positive(a: Element) -> bool:
    return a.positive


def meet_all(frame: FiniteFrame, elems: Iterable[Element]) -> Element:
    mask = frame.full
    for e in elems:
        mask &= e.mask
    return Element(frame, mask)


def join_all(frame: FiniteFrame, elems: Iterable[Element]) -> Element:
    mask = 0
    for e in elems:
        mask |= e.mask
    return Element(frame, mask)


# -- coproducts and open relations ------------------------------------------


class ProductFrame(FiniteFrame):
    """Coproduct of two finite frames, i.e. the frame of opens of ``X × Y``.

    Irreducibles are pairs ``(p, q)`` with the componentwise order; bit
    ``i * right.size + j`` stands for the pair of the ``i``-th and ``j``-th
    irreducibles.
    """

    def __init__(self, left: FiniteFrame, right: FiniteFrame):
        self.left = left
        self.right = right
        m = right.size
        labels = [(p, q) for p in left.labels for q in right.labels]
        below = [
            self._rect_masks(left._below[i], right._below[j], m) for i in range(left.size) for j in range(right.size)
        ]
        self._setup(tuple(labels), below, None)
        self._key = ("product", left._key, right._key)
        self._hash = hash(self._key)

    @staticmethod
    def _rect_masks(a: int, b: int, m: int) -> int:
        out = 0
        for i in bits(a):
            out |= b << (i * m)
        return out

    def rect(self, a: int, b: int) -> int:
        return self._rect_masks(a, b, self.right.size)

    def inject(self, a: Element, b: Element) -> Element:
        """``a ⊕ b``."""
        self.left._own(a)
        self.right._own(b)
        return Element(self, self.rect(a.mask, b.mask))

    def rows(self, mask: int) -> list[int]:
        m = self.right.size
        full = self.right.full
        return [(mask >> (i * m)) & full for i in range(self.left.size)]

    def from_rows(self, rows: Sequence[int]) -> int:
        m = self.right.size
        out = 0
        for i, row in enumerate(rows):
            out |= row << (i * m)
        return out

    def pairs(self, mask: int) -> Iterator[tuple[int, int]]:
        m = self.right.size
        for k in bits(mask):
            yield divmod(k, m)

    def projections(self) -> tuple[FrameHom, FrameHom]:
        """Frame maps ``a ↦ a ⊕ 1`` and ``b ↦ 1 ⊕ b``."""
        p1 = FrameHom(self.left, self, [self.rect(b, self.right.full) for b in self.left._below])
        p2 = FrameHom(self.right, self, [self.rect(self.left.full, b) for b in self.right._below])
        return p1, p2


@functools.lru_cache(maxsize=256)
def coproduct(left: FiniteFrame, right: FiniteFrame) -> ProductFrame:
    return ProductFrame(left, right)


def square(frame: FiniteFrame) -> ProductFrame:
    return coproduct(frame, frame)


def _square_of(rel: Element) -> ProductFrame:
    frame = rel.frame
    if not isinstance(frame, ProductFrame) or frame.left != frame.right:
        raise FrameMismatch("expected an open relation on X × X")
    return frame


def diagonal(frame: FiniteFrame) -> Element:
    """``⋁ p ⊕ p`` over irreducibles ``p``: the least reflexive relation."""
    sq = square(frame)
    mask = 0
    for b in frame._below:
        mask |= sq.rect(b, b)
    return Element(sq, mask)


def is_reflexive(rel: Element) -> bool:
    sq = _square_of(rel)
    m = sq.right.size
    return all(rel.mask >> (i * m + i) & 1 for i in range(m))


def compose(F: Element, E: Element) -> Element:
    """``F ∘ E``: first ``E`` then ``F``.

    Expands both relations into irreducible rectangles ``p ⊕ q`` and emits
    ``p ⊕ s`` for every ``p ⊕ q ≤ E`` and ``r ⊕ s ≤ F`` with ``q ≬ r``.
    """
    E._check(F)
    sq = _square_of(E)
    X = sq.left
    erows = sq.rows(E.mask)
    frows = sq.rows(F.mask)
    out = []
    for row in erows:
        reach = 0
        for q in bits(row):
            reach |= X._overlap[q]
        acc = 0
        for r in bits(reach):
            acc |= frows[r]
        out.append(acc)
    return Element(sq, sq.downclose(sq.from_rows(out)))


def opposite(E: Element) -> Element:
    sq = _square_of(E)
    m = sq.right.size
    out = 0
    for i, j in sq.pairs(E.mask):
        out |= 1 << (j * m + i)
    return Element(sq, out)


def relation_image(E: Element, a: Element) -> Element:
    """``{z | ∃y. y ∈ a ∧ (y, z) ∈ E}``."""
    sq = _square_of(E)
    sq.left._own(a)
    rows = sq.rows(E.mask)
    out = 0
    for t in bits(a.mask):
        out |= rows[t]
    return Element(sq.right, out)


# -- maps ------------------------------------------------------------------


class JoinMap:
    """Join-preserving map between finite frames.

    Determined by the images of the principal downsets of the source
    irreducibles; ``images[i]`` is a mask in the target.
    """

    def __init__(self, source: FiniteFrame, target: FiniteFrame, images: Sequence[int]):
        if len(images) != source.size:
            raise ValueError("one image per source irreducible is required")
        self.source = source
        self.target = target
        self.images = tuple(images)

    @classmethod
    def from_images(cls, source: FiniteFrame, target: FiniteFrame, mapping: Mapping, **kw):
        images = []
        for label in source.labels:
            value = mapping[label]
            if isinstance(value, Element):
                target._own(value)
                value = value.mask
            images.append(value)
        return cls(source, target, images, **kw)

    def apply(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.images[i]
        return out

    def __call__(self, a: Element) -> Element:
        self.source._own(a)
        return Element(self.target, self.apply(a.mask))

    def right_adjoint_mask(self, b: int) -> int:
        out = 0
        for i, img in enumerate(self.images):
            if img & ~b == 0:
                out |= 1 << i
        return out

    def right_adjoint(self, b: Element) -> Element:
        """``h_*(b) = ⋁{a | h(a) ≤ b}``."""
        self.target._own(b)
        return Element(self.source, self.right_adjoint_mask(b.mask))

    def left_adjoint(self, a: Element) -> Element:
        """``h_!(a) = ⋀{b | a ≤ h(b)}``; raises ``NoLeftAdjoint`` if that fails."""
        self.target._own(a)
        out = 0
        for p in bits(a.mask):
            least = self.source.full
            hit = False
            for q, img in enumerate(self.images):
                if img >> p & 1:
                    least &= self.source._below[q]
                    hit = True
            if not hit or not self.apply(least) >> p & 1:
                raise NoLeftAdjoint(f"no least element is mapped above {self.target.labels[p]!r}")
            out |= least
        return Element(self.source, out)

    def meet_failure(self):
        """A pair of source irreducibles whose meet is not preserved, or None."""
        full = self.apply(self.source.full)
        if full != self.target.full:
            return ("top",)
        n = self.source.size
        for i in range(n):
            for j in range(i + 1, n):
                lhs = self.images[i] & self.images[j]
                if lhs != self.apply(self.source._below[i] & self.source._below[j]):
                    return (self.source.labels[i], self.source.labels[j])
        return None


class FrameHom(JoinMap):
    """Frame homomorphism ``source → target``.

    For a locale map ``f: X → Y`` this is ``f*: O Y → O X``; ``source`` is
    the frame of the codomain locale.
    """

    def __init__(self, source: FiniteFrame, target: FiniteFrame, images: Sequence[int], check: bool = True):
        super().__init__(source, target, images)
        if check:
            for i, img in enumerate(self.images):
                if not target.is_downset(img):
                    raise NotAFrameHom(f"image of {source.labels[i]!r} is not an element of the target")
                for j in bits(source._below[i]):
                    if self.images[j] & ~img:
                        raise NotAFrameHom(f"not monotone at {source.labels[j]!r} <= {source.labels[i]!r}")
            bad = self.meet_failure()
            if bad is not None:
                raise NotAFrameHom(f"finite meets not preserved at {bad!r}")

    @classmethod
    def identity(cls, frame: FiniteFrame) -> FrameHom:
        return cls(frame, frame, frame._below)

    @classmethod
    def from_point_map(cls, source: FiniteFrame, target: FiniteFrame, points: Mapping) -> FrameHom:
        """Frame map ``b ↦ {p | points[p] ∈ b}`` induced by a monotone map of irreducibles ``target → source``."""
        images = [0] * source.size
        for p in target.labels:
            q = source.index[points[p]]
            for i in bits(source._above[q]):
                images[i] |= 1 << target.index[p]
        return cls(source, target, images)

    def __matmul__(self, inner: FrameHom) -> FrameHom:
        """``self ∘ inner``."""
        if inner.target != self.source:
            raise FrameMismatch("cannot compose: inner target differs from outer source")
        return FrameHom(inner.source, self.target, [self.apply(m) for m in inner.images], check=False)

    def __eq__(self, other):
        return (
            isinstance(other, JoinMap)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def is_strongly_dense(self) -> bool:
        """Every positive element of the source has a positive image."""
        return all(img != 0 for img in self.images)

    def is_surjective(self) -> bool:
        return all(self.apply(self.right_adjoint_mask(b)) == b for b in self.target._below)

    def is_injective(self) -> bool:
        seen = set()
        for m in self.source.element_masks():
            img = self.apply(m)
            if img in seen:
                return False
            seen.add(img)
        return True

    def is_iso(self) -> bool:
        return self.source.size == self.target.size and self.is_injective() and self.is_surjective()


def is_strongly_dense(h: FrameHom) -> bool:
    return h.is_strongly_dense()


def hom_adjoints(h: FrameHom, b: Element) -> Element:
    return h.right_adjoint(b)


def coproduct_hom(f: FrameHom, g: FrameHom) -> FrameHom:
    """``f ⊕ g``: the frame map of the product of the two locale maps."""
    src = coproduct(f.source, g.source)
    tgt = coproduct(f.target, g.target)
    images = [tgt.rect(fi, gj) for fi in f.images for gj in g.images]
    return FrameHom(src, tgt, images, check=False)


def product_hom_right_adjoint(f: FrameHom, g: FrameHom, c: Element) -> Element:
    """``(f × g)_*(c) = ⋁{f_*(a) ⊕ g_*(b) | a ⊕ b ≤ c}``.

    For each ``a`` the largest admissible ``b`` is taken, which suffices
    since ``g_*`` is monotone.
    """
    tgt = coproduct(f.target, g.target)
    src = coproduct(f.source, g.source)
    tgt._own(c)
    rows = tgt.rows(c.mask)
    out = 0
    for a in f.target.element_masks():
        b = g.target.full
        for i in bits(a):
            b &= rows[i]
        out |= src.rect(f.right_adjoint_mask(a), g.right_adjoint_mask(b))
    return Element(src, out)
