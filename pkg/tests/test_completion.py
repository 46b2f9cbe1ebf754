import itertools

import pytest

from uniloc.completion import (
    EmbeddingRejected,
    cauchy_locale,
    cauchy_presentation,
    check_product_preservation,
    completion,
    factor_dense_embedding,
    gen_name,
    is_complete,
    lift_map,
    product_structure,
    reflect_cauchy,
)
from uniloc.corpus import locale_maps, structures
from uniloc.frames import FiniteFrame, FrameHom
from uniloc.presentation import relations_hold
from uniloc.reflection import uniform_reflection
from uniloc.uniform import PreUniformLocale, is_uniform_morphism

CORPUS = structures(3)
SMALL = [S for S in CORPUS if S.frame.size <= 2]


@pytest.mark.parametrize("S", CORPUS, ids=lambda S: S.name)
def test_completion_witnesses(S):
    C = completion(S)
    for key, ok in C.witnesses.items():
        if key != "unit iso":
            assert ok, key
    assert C.witnesses["unit iso"] == S.is_admissible()
    assert completion(C.structure).unit.is_iso()
    X = C.cauchy.source
    for a in X.frame.element_masks():
        assert C.cauchy.gamma.right_adjoint_mask(a) == C.cauchy.bracket(a)


@pytest.mark.parametrize("S", CORPUS, ids=lambda S: S.name)
def test_regular_cauchy_is_reflection_of_all_cauchy(S):
    w = reflect_cauchy(S)
    for x in w.reg.frame.element_masks():
        assert w.rho.apply(w.r.apply(x)) == x
    for y in w.scr.frame.element_masks():
        assert w.r.apply(w.rho.apply(y)) & ~y == 0
    assert w.iso.is_iso()


def test_cauchy_of_two_point_chaotic_space():
    S = PreUniformLocale.chaotic(FiniteFrame("ab"))
    scr = cauchy_locale(S, regular=False)
    # the two points and the generic filter containing only top
    assert scr.frame.size == 3
    assert completion(S).frame.size == 1


def test_finite_discrete_spaces_are_complete():
    for n in range(4):
        assert is_complete(PreUniformLocale.discrete(FiniteFrame("abcd"[:n])))


def test_gamma_right_adjoint_is_a_regular_cauchy_filter():
    for S in CORPUS:
        X = uniform_reflection(S).structure
        C = cauchy_locale(X)
        assign = {gen_name(X.frame, a): C.gamma.right_adjoint_mask(a) for a in X.frame.element_masks()}
        assert relations_hold(cauchy_presentation(X), C.frame, assign) is None


def test_factor_dense_embedding_reproduces_gamma():
    for S in CORPUS:
        X = uniform_reflection(S).structure
        C = cauchy_locale(X)
        k = factor_dense_embedding(C.gamma, X, C.structure)
        assert C.gamma @ k == C.gamma
        assert k.is_iso()


def test_factor_dense_embedding_on_automorphisms():
    X = PreUniformLocale.discrete(FiniteFrame("ab"))
    swap = FrameHom.from_point_map(X.frame, X.frame, {"a": "b", "b": "a"})
    k = factor_dense_embedding(swap, X, X)
    assert swap @ k == cauchy_locale(X).gamma


def test_factor_dense_embedding_rejects_non_dense():
    X = PreUniformLocale.discrete(FiniteFrame("a"))
    Y = PreUniformLocale.discrete(FiniteFrame("ab"))
    inc = FrameHom.from_point_map(Y.frame, X.frame, {"a": "a"})
    with pytest.raises(EmbeddingRejected):
        factor_dense_embedding(inc, X, Y)


def test_uniform_maps_lift_functorially():
    for X, Y in itertools.product(SMALL, repeat=2):
        for f in locale_maps(X.frame, Y.frame):
            L = lift_map(f, X, Y)
            assert L.cover_verdict == L.entourage_verdict
            if is_uniform_morphism(f, X, Y):
                assert L.exists and L.functorial == L.lift


def test_non_uniform_map_has_no_lift():
    X = PreUniformLocale.chaotic(FiniteFrame("ab"))
    Y = PreUniformLocale.discrete(FiniteFrame("pq"))
    f = FrameHom.from_point_map(Y.frame, X.frame, {"a": "p", "b": "q"})
    L = lift_map(f, X, Y)
    assert not L.exists and L.certificate is not None


def test_product_structure_makes_projections_uniform():
    X = PreUniformLocale.discrete(FiniteFrame("ab"))
    Y = PreUniformLocale.chaotic(FiniteFrame("pq"))
    P, p1, p2 = product_structure(X, Y)
    assert is_uniform_morphism(p1, P, X) and is_uniform_morphism(p2, P, Y)


def test_product_preservation():
    pairs = list(itertools.combinations_with_replacement(SMALL, 2))
    assert len(pairs) >= 5
    for X, Y in pairs:
        w = check_product_preservation(X, Y)
        assert w.iso and w.uniform_both_ways, (X.name, Y.name)
