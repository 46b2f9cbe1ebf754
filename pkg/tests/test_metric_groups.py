import itertools
import random
from fractions import Fraction

import pytest

from oracles import relation_pairs
from uniloc.corpus import group_homs, groups, line_metric, metric_maps, random_metric
from uniloc.frames import compose, opposite
from uniloc.groups import (
    SIDES,
    FiniteGroup,
    cyclic,
    group_entourage,
    group_hom_map,
    group_uniformity,
    is_translation_invariant,
    symmetric3,
)
from uniloc.metric import MetricSpace, is_nonexpansive, nonexpansive_failure, point_map_hom
from uniloc.uniform import AxiomViolation, is_uniform_morphism, pullback_entourage


def test_thresholds_of_three_points():
    X = line_metric([0, 1, 2])
    assert X.thresholds() == [Fraction(1, 4), Fraction(1, 2), 1, 2]
    E = {q: X.entourage(q) for q in (Fraction(3, 2), 2, 3)}
    assert compose(E[Fraction(3, 2)], E[Fraction(3, 2)]) <= E[3]
    assert not compose(E[Fraction(3, 2)], E[Fraction(3, 2)]) <= E[2]


def test_metric_entourage_pairs():
    X = line_metric([0, 1, 3])
    assert relation_pairs(X.entourage(2)) == {(x, y) for x in X.points for y in X.points
                                            if abs(Fraction(x) - Fraction(y)) < 2}


def test_metric_validation_names_points():
    with pytest.raises(AxiomViolation) as err:
        MetricSpace.from_table("xyz", {("x", "y"): 1, ("y", "z"): 1, ("x", "z"): 3})
    assert err.value.violation.axiom == "triangle inequality"
    assert "x" in err.value.violation.subject
    with pytest.raises(AxiomViolation):
        MetricSpace(("x", "y"), ((0, 1), (2, 0)))


def test_random_metric_laws():
    rng = random.Random(3)
    for _ in range(15):
        X = random_metric(rng, rng.randint(1, 5))
        ts = X.thresholds()
        for p, q in itertools.product(ts, repeat=2):
            if p <= q:
                assert X.entourage(p) <= X.entourage(q)
        for q in ts:
            E = X.entourage(q)
            assert opposite(E) == E
            half = X.entourage(q / 2)
            assert compose(half, half) <= E
        assert X.uniformity().is_admissible()


@pytest.mark.parametrize("name,f,X,Y,ok", metric_maps(), ids=lambda v: v if isinstance(v, str) else "")
def test_metric_maps(name, f, X, Y, ok):
    assert is_nonexpansive(f, X, Y) == ok
    h = point_map_hom(f, X, Y)
    if ok:
        assert is_uniform_morphism(h, X.uniformity(), Y.uniformity())
    else:
        q = nonexpansive_failure(f, X, Y)
        assert not X.entourage(q) <= pullback_entourage(h, Y.entourage(q))


@pytest.mark.parametrize("G", groups(), ids=lambda G: G.name)
def test_group_uniformities(G):
    G.check_axioms()
    for side in SIDES:
        S = group_uniformity(G, side)
        assert S.is_admissible()
    left, right = group_uniformity(G, "left"), group_uniformity(G, "right")
    # u = {e} gives Δ, so on a finite group every side is the discrete uniformity
    assert left.entourages.filter_equal(right.entourages)
    for u in G.neighbourhoods():
        L, R, T = (group_entourage(G, u, s) for s in SIDES)
        u_inv = {G.inv(x) for x in u}
        assert opposite(L) == group_entourage(G, u_inv, "left")
        if G.is_abelian():
            # entourage by entourage only up to inverting u; as filters the two agree
            assert L == group_entourage(G, u_inv, "right")
            if u == u_inv:
                assert L == R
            assert is_translation_invariant(G, T)
        assert T == L & R
        assert is_translation_invariant(G, R)


def test_s3_left_and_right_differ():
    G = symmetric3()
    u = {G.identity, (1, 0, 2)}
    assert group_entourage(G, u, "left") != group_entourage(G, u, "right")


def test_neighbourhood_must_contain_identity():
    with pytest.raises(ValueError):
        group_entourage(cyclic(2), {1})


@pytest.mark.parametrize("name,G,H,phi", group_homs(), ids=lambda v: v if isinstance(v, str) else "")
def test_group_homs_are_uniform(name, G, H, phi):
    f = group_hom_map(G, H, phi)
    for side in SIDES:
        assert is_uniform_morphism(f, group_uniformity(G, side), group_uniformity(H, side))


def test_non_homomorphism_is_rejected():
    z2, z4 = cyclic(2), cyclic(4)
    with pytest.raises(ValueError):
        group_hom_map(z2, z4, {0: 0, 1: 1})


def test_group_operation_table():
    G = FiniteGroup.from_operation(range(3), lambda x, y: (x + y) % 3, 0)
    assert G.inv(1) == 2 and G.is_abelian()
