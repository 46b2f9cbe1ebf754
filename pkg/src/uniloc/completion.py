"""Cauchy filter locales and completions of finite pre-uniform locales.

For a finite structure ``X`` the locale of (regular) Cauchy filters is built
from its presentation: one generator ``[a]`` per open ``a`` and the five
families of relations.  Everything downstream (completion, lifting, products)
is then a matter of building frame maps out of presented frames via
``hom_from_generators``, which re-checks the relations in the target.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .frames import FiniteFrame, FrameHom, coproduct, is_reflexive, product_hom_right_adjoint
from .presentation import FramePresentation, PresentedFrame, cover, eq, hom_from_generators
from .reflection import Reflection, uniform_reflection
from .uniform import (
    Cover,
    PreUniformLocale,
    initial_cover_uniformity,
    is_uniform_embedding,
    is_uniform_morphism,
    pullback_entourage,
    strengthen,
)


class EngineError(AssertionError):
    """A property the theory guarantees failed to hold; indicates a bug, not bad data."""


def gen_name(X: FiniteFrame, a: int) -> str:
    return f"[{X.format(a)}]"


def cauchy_presentation(structure: PreUniformLocale, regular: bool = True) -> FramePresentation:
    X = structure.frame
    masks = X.element_masks()
    g = {a: gen_name(X, a) for a in masks}
    eqs = [eq([g[X.full]], [])]
    for a, b in itertools.combinations(masks, 2):
        eqs.append(eq([g[a & b]], [g[a], g[b]]))
    covers = [cover([g[0]], [])]
    for U in structure.covers.base:
        covers.append(cover([], [[g[u]] for u in U.gens]))
    if regular:
        for a in masks:
            covers.append(cover([g[a]], [[g[b]] for b in masks if structure._below(b, a)]))
    return FramePresentation(tuple(g[a] for a in masks), tuple(eqs), tuple(covers))


@dataclass
class CauchyLocale:
    """``𝒞X`` (``regular``) or the locale of all Cauchy filters, with ``γ*: [a] ↦ a``."""

    source: PreUniformLocale
    regular: bool
    presented: PresentedFrame
    gamma: FrameHom
    structure: PreUniformLocale

    @property
    def frame(self) -> FiniteFrame:
        return self.presented.frame

    def bracket(self, a: int) -> int:
        """``γ_*(a) = [a]`` as a mask of the Cauchy frame."""
        return self.presented.gen(gen_name(self.source.frame, a)).mask


def cauchy_locale(structure: PreUniformLocale, regular: bool = True) -> CauchyLocale:
    """Locale of regular Cauchy filters, or of all Cauchy filters when ``regular`` is false.

    The regular variant only receives ``γ`` when the structure is admissible,
    so a pre-uniform input is replaced by its uniform reflection first.
    """
    if regular and not structure.is_admissible():
        structure = uniform_reflection(structure).structure
    X = structure.frame
    pres = cauchy_presentation(structure, regular)
    pf = PresentedFrame(pres)
    gamma = hom_from_generators(pf, X, {gen_name(X, a): a for a in X.element_masks()})
    for a in X.element_masks():
        if gamma.right_adjoint_mask(a) != pf.gen(gen_name(X, a)).mask:
            raise EngineError(f"γ_* disagrees with [a] at {X.format(a)}")
    if not gamma.is_strongly_dense():
        raise EngineError("γ is not strongly dense")
    base = []
    for U in structure.covers.base:
        base.append(strengthen(Cover.of(pf.frame, [pf.gen(gen_name(X, u)).mask for u in U.gens])))
    name = f"C({structure.name})" if structure.name else None
    return CauchyLocale(structure, regular, pf, gamma, PreUniformLocale.from_covers(pf.frame, base, name))


@dataclass
class CompletionResult:
    source: PreUniformLocale
    reflection: Reflection
    cauchy: CauchyLocale
    unit: FrameHom  # (γ ∘ υ)*: O 𝒞ΥX → O X
    witnesses: dict = field(default_factory=dict)

    @property
    def structure(self) -> PreUniformLocale:
        return self.cauchy.structure

    @property
    def frame(self) -> FiniteFrame:
        return self.cauchy.frame

    def unit_lower(self, a: int) -> int:
        """``(γυ)_*(a)``."""
        return self.unit.right_adjoint_mask(a)


def completion(structure: PreUniformLocale) -> CompletionResult:
    refl = uniform_reflection(structure)
    C = cauchy_locale(refl.structure, regular=True)
    unit = refl.inclusion @ C.gamma
    gamma = C.gamma
    w = {
        "gamma strongly dense": gamma.is_strongly_dense(),
        "gamma uniform embedding": is_uniform_embedding(gamma, refl.structure, C.structure)
        and is_uniform_morphism(gamma, refl.structure, C.structure),
        "unit strongly dense": unit.is_strongly_dense(),
        "unit uniform": is_uniform_morphism(unit, structure, C.structure),
        "completed admissible": C.structure.is_admissible(),
        "unit iso": unit.is_iso(),
    }
    return CompletionResult(structure, refl, C, unit, w)


def is_complete(structure: PreUniformLocale) -> bool:
    """``γ`` is an isomorphism (for admissible input)."""
    return completion(structure).unit.is_iso()


@dataclass
class CauchyReflectionWitness:
    scr: CauchyLocale
    reg: CauchyLocale
    rho: FrameHom  # ρ*: O𝒞scr → O𝒞
    r: FrameHom  # O𝒞 → O𝒞scr
    iso: FrameHom  # O𝒞 → O Υ𝒞scr


def reflect_cauchy(structure: PreUniformLocale) -> CauchyReflectionWitness:
    """Check ``Υ𝒞scr X ≅ 𝒞ΥX`` through the explicit pair ``r ⊣ ρ*``."""
    X = structure.frame
    masks = X.element_masks()
    ups = uniform_reflection(structure)
    scr = cauchy_locale(structure, regular=False)
    reg = cauchy_locale(ups.structure, regular=True)
    rho = hom_from_generators(scr.presented, reg.frame, {gen_name(X, a): reg.bracket(ups.to_sub(a)) for a in masks})
    r_assign = {}
    for a in ups.frame.element_masks():
        a_x = ups.inclusion.apply(a)
        acc = 0
        for b in masks:
            if structure._below(b, a_x):
                acc |= scr.bracket(b)
        r_assign[gen_name(ups.frame, a)] = acc
    r = hom_from_generators(reg.presented, scr.frame, r_assign)
    for x in reg.frame.element_masks():
        if rho.apply(r.apply(x)) != x:
            raise EngineError(f"ρ* r ≠ id at {reg.frame.format(x)}")
    for y in scr.frame.element_masks():
        if r.apply(rho.apply(y)) & ~y:
            raise EngineError(f"r ρ* ≰ id at {scr.frame.format(y)}")
    refl = uniform_reflection(scr.structure)
    image = {r.apply(x) for x in reg.frame.element_masks()}
    if image != set(scr.structure.fixed_masks()):
        raise EngineError("image of r differs from the fixed points of the reflection")
    iso = FrameHom(reg.frame, refl.frame, [refl.to_sub(m) for m in r.images])
    if not iso.is_iso():
        raise EngineError("comparison map is not an isomorphism")
    return CauchyReflectionWitness(scr, reg, rho, r, iso)


class EmbeddingRejected(ValueError):
    pass


def factor_dense_embedding(j: FrameHom, X: PreUniformLocale, Y: PreUniformLocale) -> FrameHom:
    """``k*: O𝒞X → O Y`` with ``[a] ↦ j_*(a)`` for a strongly dense uniform embedding ``j: X ↪ Y``."""
    if not j.is_strongly_dense():
        raise EmbeddingRejected("not strongly dense")
    if not is_uniform_morphism(j, X, Y):
        raise EmbeddingRejected("not uniform")
    if not is_uniform_embedding(j, X, Y):
        raise EmbeddingRejected("not a uniform embedding")
    C = cauchy_locale(X, regular=True)
    k = hom_from_generators(
        C.presented, Y.frame, {gen_name(X.frame, a): j.right_adjoint_mask(a) for a in X.frame.element_masks()}
    )
    if j @ k != C.gamma:
        raise EngineError("j* k* ≠ γ*")
    if not (k.is_strongly_dense() and is_uniform_morphism(k, Y, C.structure) and is_uniform_embedding(k, Y, C.structure)):
        raise EngineError("k is not a strongly dense uniform embedding")
    return k


@dataclass
class LiftResult:
    exists: bool
    cover_verdict: bool
    entourage_verdict: bool
    lift: FrameHom | None = None
    certificate: object = None
    functorial: FrameHom | None = None


def lift_map(f: FrameHom, X: PreUniformLocale, Y: PreUniformLocale, CX: CompletionResult | None = None,
             CY: CompletionResult | None = None) -> LiftResult:
    """Lift a locale map ``X → Y`` (frame map ``O Y → O X``) to the completions, if possible."""
    CX = CX or completion(X)
    CY = CY or completion(Y)
    u = CX.unit
    top = CX.frame.full
    bad_cover = None
    for V in Y.covers.base:
        acc = 0
        for v in V.gens:
            acc |= u.right_adjoint_mask(f.apply(v))
        if acc != top:
            bad_cover = V
            break
    bad_ent = None
    for E in Y.entourages.base:
        lowered = product_hom_right_adjoint(u, u, pullback_entourage(f, E))
        if not is_reflexive(lowered):
            bad_ent = E
            break
    cv, ev = bad_cover is None, bad_ent is None
    if cv != ev:
        raise EngineError("cover and entourage lifting criteria disagree")
    if not cv:
        return LiftResult(False, cv, ev, certificate=bad_cover)

    RY = CY.reflection
    YR = RY.structure
    assign = {}
    for a in YR.frame.element_masks():
        a_y = RY.inclusion.apply(a)
        acc = 0
        for b in Y.frame.element_masks():
            if Y._below(b, a_y):
                acc |= u.right_adjoint_mask(f.apply(b))
        assign[gen_name(YR.frame, a)] = acc
    lift = hom_from_generators(CY.cauchy.presented, CX.frame, assign)
    if u @ lift != f @ CY.unit:
        raise EngineError("lifted square does not commute")
    functorial = None
    if is_uniform_morphism(f, X, Y):
        RX = CX.reflection
        fassign = {
            gen_name(YR.frame, a): CX.cauchy.bracket(RX.to_sub(f.apply(RY.inclusion.apply(a))))
            for a in YR.frame.element_masks()
        }
        functorial = hom_from_generators(CY.cauchy.presented, CX.frame, fassign)
        if functorial != lift:
            raise EngineError("lift differs from the functorial map on a uniform morphism")
    return LiftResult(True, cv, ev, lift=lift, functorial=functorial)


def product_structure(X: PreUniformLocale, Y: PreUniformLocale) -> tuple[PreUniformLocale, FrameHom, FrameHom]:
    """``X × Y`` with the initial uniformity of the projections."""
    P = coproduct(X.frame, Y.frame)
    p1, p2 = P.projections()
    name = f"{X.name}×{Y.name}" if X.name and Y.name else None
    S = initial_cover_uniformity(P, [(p1, X), (p2, Y)])
    S.name = name
    return S, p1, p2


@dataclass
class ProductWitness:
    iso: bool
    comparison: FrameHom
    uniform_both_ways: bool


def check_product_preservation(X: PreUniformLocale, Y: PreUniformLocale) -> ProductWitness:
    P, p1, p2 = product_structure(X, Y)
    CP, CX, CY = completion(P), completion(X), completion(Y)
    L1 = lift_map(p1, P, X, CP, CX)
    L2 = lift_map(p2, P, Y, CP, CY)
    if not (L1.exists and L2.exists):
        raise EngineError("projections failed to lift")
    Q = coproduct(CX.frame, CY.frame)
    images = [L1.lift.images[i] & L2.lift.images[j] for i in range(CX.frame.size) for j in range(CY.frame.size)]
    phi = FrameHom(Q, CP.frame, images)
    iso = phi.is_iso()
    both = False
    if iso:
        Qs, _, _ = product_structure(CX.structure, CY.structure)
        inv = FrameHom(CP.frame, Q, [phi.right_adjoint_mask(b) for b in CP.frame._below])
        both = is_uniform_morphism(phi, CP.structure, Qs) and is_uniform_morphism(inv, Qs, CP.structure)
    return ProductWitness(iso, phi, both)
