import itertools
import random
from fractions import Fraction as F

import pytest

from oracles import det as det_oracle
from seifert_tight.plumbing import (Mn_star, PlumbingTree, StarShape, bad_vertices, dual_tree,
                                    integer_det, intersection_lattice, recognize_Mn, signature,
                                    seifert_from_star_tree, star_tree_from_seifert,
                                    truncate_third_leg)
from seifert_tight.seifert import SeifertInvariants, euler_number


def Y(e0, *rs):
    return SeifertInvariants(e0, tuple(F(r) for r in rs))


def star(center, *legs):
    return StarShape(center, tuple(tuple(l) for l in legs)).tree()


def random_star(rng, center=-1):
    legs = [[-rng.randint(2, 6) for _ in range(rng.randint(1, 4))] for _ in range(3)]
    return StarShape(center, tuple(tuple(l) for l in legs))


def test_tree_validation():
    with pytest.raises(ValueError):
        PlumbingTree({0: -2, 1: -2}, [])
    with pytest.raises(ValueError):
        PlumbingTree({0: -2, 1: -2, 2: -2}, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        PlumbingTree({0: -2}, [(0, 0)])
    with pytest.raises(ValueError):
        PlumbingTree({0: -2, 1: -2, 2: -2}, [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(ValueError):
        PlumbingTree([(0, -2), (0, -3)])


def test_star_tree_from_seifert():
    assert star_tree_from_seifert(Y(-1, "1/2", "1/3", "1/5")).star_shape() == \
        StarShape(-1, ((-2,), (-3,), (-5,)))
    assert star_tree_from_seifert(Y(-1, "1/2", "2/5", "1/3")).star_shape() == \
        StarShape(-1, ((-2,), (-3, -2), (-3,)))
    assert star_tree_from_seifert(Y(-2, "1/2", "1/2", "1/2")).star_shape() == \
        StarShape(-2, ((-2,), (-2,), (-2,)))


def test_seifert_roundtrip_random():
    rng = random.Random(3)
    for _ in range(50):
        g = random_star(rng, center=rng.randint(-3, 0))
        si = seifert_from_star_tree(g.tree())
        assert star_tree_from_seifert(si).star_shape().sorted_legs() == g.sorted_legs()


def test_dual_tree_examples():
    assert dual_tree(star(-1, [-2], [-3], [-5])).star_shape() == \
        StarShape(-2, ((-2,), (-2, -2), (-2, -2, -2, -2)))
    assert dual_tree(star(-1, [-2], [-2], [-2])).star_shape() == \
        StarShape(-2, ((-2,), (-2,), (-2,)))


def test_dual_has_reversed_orientation():
    rng = random.Random(11)
    for _ in range(20):
        g = random_star(rng)
        d = intersection_lattice(g.tree()).det
        assert abs(intersection_lattice(dual_tree(g.tree())).det) == abs(d) == abs(det_oracle(g.tree().matrix()))
        # -Y(-1; r) = Y(-2; 1 - r)
        assert g.dual().seifert() == SeifertInvariants(-2, tuple(1 - r for r in g.seifert().ratios))


def test_intersection_lattice_examples():
    lat = intersection_lattice(PlumbingTree({0: -2}))
    assert lat.Q == ((-2,),) and lat.det == -2 and lat.signature == (0, 1, 0)
    lat = intersection_lattice(star(-2, [-2]))
    assert lat.det == 3 and lat.signature == (0, 2, 0)
    assert intersection_lattice(star(-1, [-2], [-3], [-5])).signature[0] == 1


def test_det_and_signature_against_sympy():
    import sympy
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(1, 6)
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                M[i][j] = M[j][i] = rng.randint(-3, 3)
        assert integer_det(M) == det_oracle(M)
        eig = sympy.Matrix(M).eigenvals()
        pos = sum(m for v, m in eig.items() if sympy.re(sympy.N(v)) > 1e-9)
        neg = sum(m for v, m in eig.items() if sympy.re(sympy.N(v)) < -1e-9)
        assert signature(M) == (pos, neg, n - pos - neg)


def test_bad_vertices():
    assert bad_vertices(star(-2, [-2], [-2], [-2])) == [0]
    assert bad_vertices(star(-2, [-2, -2, -2])) == []
    assert bad_vertices(star(-3, [-2], [-2], [-2])) == []


def test_recognize_Mn():
    assert recognize_Mn(star(-1, [-2], [-5], [-3])) == 1
    assert recognize_Mn(star(-1, [-2], [-7], [-3, -2])) == 2
    assert recognize_Mn(star(-1, [-2], [-5], [-4])) is None
    for n in range(1, 8):
        assert recognize_Mn(Mn_star(n)) == n
        assert recognize_Mn(Mn_star(n).tree()) == n


def test_Mn_is_the_expected_seifert_space():
    for n in range(1, 8):
        assert Mn_star(n).seifert() == Y(-1, "1/2", F(n, 2 * n + 1), F(1, 2 * n + 3))


def test_truncate_third_leg():
    t = truncate_third_leg(star(-1, [-2, -3], [-3], [-5, -2]))
    assert t.star_shape() == StarShape(-1, ((-2, -3), (-3,), (-5,)))
    assert t.star_shape().seifert().ratios[2] == F(1, 5)
    same = star(-1, [-2, -3], [-3], [-5])
    assert truncate_third_leg(same) == same
    rng = random.Random(2)
    for _ in range(50):
        g = random_star(rng).sorted_legs()
        # [c1, ...] < c1, so cutting the leg lowers r3 and the Euler number
        assert euler_number(g.truncate_third_leg().seifert()) <= euler_number(g.seifert())


def test_b2_plus_detects_positive_euler_number():
    # every star with center -1 and three legs of at most 3 vertices, weights -2..-5
    legs = [tuple(-x for x in t)
            for n in range(1, 4) for t in itertools.product(range(2, 6), repeat=n)]
    count = 0
    for trio in itertools.combinations_with_replacement(legs, 3):
        g = StarShape(-1, trio)
        pos, _, zero = signature(g.tree().matrix())
        e = euler_number(g.seifert())
        assert (pos == 1) == (e > 0), trio
        assert (zero == 1) == (e == 0)
        count += 1
    assert count == 102340


def test_json_forms():
    t = star(-1, [-2], [-3, -2], [-5])
    assert PlumbingTree.from_json(t.to_json()) == t
    assert PlumbingTree.from_json({"center": -1, "legs": [[-2], [-3, -2], [-5]]}) == t
    relabeled = t.relabel({v: 10 + v for v in t.ids})
    assert relabeled.star_shape() == t.star_shape()
