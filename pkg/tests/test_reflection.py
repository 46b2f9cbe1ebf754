import pytest

from uniloc.corpus import locale_maps, structures
from uniloc.frames import FiniteFrame, FrameHom
from uniloc.laws import conucleus_laws
from uniloc.reflection import NotAdmissible, factor_through_unit, subframe, uniform_reflection
from uniloc.uniform import PreUniformLocale, is_uniform_morphism

CORPUS = structures(3)


@pytest.mark.parametrize("S", CORPUS, ids=lambda S: S.name)
def test_reflection_properties(S):
    assert all(r.ok for r in conucleus_laws(S))
    R = uniform_reflection(S)
    assert R.structure.is_admissible()
    assert R.unit.is_injective() and R.unit.is_strongly_dense()
    assert is_uniform_morphism(R.unit, S, R.structure)
    assert uniform_reflection(R.structure).is_identity()
    assert R.is_identity() == S.is_admissible()
    # the image of the unit is exactly the fixed set of r
    assert {R.unit.apply(m) for m in R.frame.element_masks()} == set(S.fixed_masks())


def test_chaotic_reflects_to_a_point():
    F = FiniteFrame("ab")
    R = uniform_reflection(PreUniformLocale.chaotic(F))
    assert R.frame.size == 1 and R.frame.labels == ("1",)


def test_subframe_labels():
    F = FiniteFrame("abc")
    a, b, c = (F.element(x).mask for x in "abc")
    sub, inc = subframe(F, [0, a, b | c, F.full])
    assert sorted(sub.labels) == ["a", "b+c"]
    assert inc.is_injective()


def _targets():
    return [S for S in CORPUS if S.is_admissible() and S.frame.size]


def test_universal_property_of_the_unit():
    checked = 0
    for X in CORPUS:
        R = uniform_reflection(X)
        for T in _targets():
            for f in locale_maps(X.frame, T.frame):
                if not is_uniform_morphism(f, X, T):
                    continue
                flat = factor_through_unit(R, f, T)
                assert R.inclusion @ flat == f
                assert is_uniform_morphism(flat, R.structure, T)
                lifts = [g for g in locale_maps(R.frame, T.frame) if R.inclusion @ g == f]
                assert lifts == [flat]
                checked += 1
    assert checked > 20


def test_factoring_needs_admissible_target():
    X = PreUniformLocale.discrete(FiniteFrame("ab"))
    T = PreUniformLocale.chaotic(FiniteFrame("pq"))
    f = FrameHom.identity(FiniteFrame("ab"))
    with pytest.raises(NotAdmissible):
        factor_through_unit(uniform_reflection(X), FrameHom(T.frame, X.frame, f.images), T)
