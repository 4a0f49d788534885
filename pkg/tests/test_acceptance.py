"""The ten acceptance criteria, each an exact check, each reporting one
PASS/FAIL line (collected by conftest and printed in the terminal summary).

Sweeps shared between criteria are built once per session.
"""
import functools
import itertools
import json
import random
import time
from fractions import Fraction as F

import conftest
from families import family_a, family_b
from oracles import (brute_generators, cf_value, det, naive_realizable, point_rule_dual,
                     positive_eigenvalues, square)
from value_lists import family_a_mismatches, family_b_expected
from seifert_tight.cf import cf_eval, cf_expand, riemenschneider_dual
from seifert_tight.classify import (ClassifierInput, Report, classify, verify_certificate)
from seifert_tight.contact import (NO_TIGHT, TIGHT_BY_CITATION, TIGHT_WITH_CERTIFICATE,
                                   build_class_c, certify, d3_from_restriction)
from seifert_tight.embedding import GAMMA, GAMMA_P, restrict_square
from seifert_tight.lattice import correction_terms, lattice_for
from seifert_tight.plumbing import (Mn_star, PlumbingTree, StarShape, bad_vertices,
                                    intersection_lattice, recognize_Mn, star_from_seifert)
from seifert_tight.seifert import SeifertInvariants, euler_number, normalize, realizable


def criterion(n, title, budget=None):
    """Record PASS/FAIL for criterion ``n``; the body returns a short summary."""
    def deco(fn):
        @functools.wraps(fn)
        def run(*args, **kw):
            t0 = time.perf_counter()
            try:
                summary = fn(*args, **kw)
                took = time.perf_counter() - t0
                assert budget is None or took < budget, f"took {took:.1f}s, budget {budget}s"
            except BaseException as exc:
                line = f"FAIL criterion {n}: {title}: {type(exc).__name__}: {str(exc)[:200]}"
                conftest.ACCEPTANCE.append((n, line))
                print(line)
                raise
            line = f"PASS criterion {n}: {title} ({summary}; {took:.1f}s)"
            conftest.ACCEPTANCE.append((n, line))
            print(line)
        return run
    return deco


@functools.lru_cache(maxsize=None)
def sweep_a():
    return tuple(family_a(kmax=3, maxlen=4, extra=(2, 3, 4)))


@functools.lru_cache(maxsize=None)
def sweep_b():
    return tuple(family_b(smax=4, mmax=6))


def chain(n):
    return PlumbingTree({i: -2 for i in range(n)}, [(i, i + 1) for i in range(n - 1)])


# 1 -------------------------------------------------------------------------

@criterion(1, "continued fraction round trip and dual involution")
def test_criterion_1_continued_fractions():
    every = [t for length in range(1, 7) for t in itertools.product(range(2, 7), repeat=length)]
    t0 = time.perf_counter()
    for terms in every:
        assert cf_expand(cf_eval(terms)) == terms
        assert riemenschneider_dual(riemenschneider_dual(terms)) == terms
    took = time.perf_counter() - t0
    assert took < 5, f"library round trips took {took:.1f}s"
    # oracle comparison, outside the timed part
    for terms in every:
        assert cf_eval(terms) == cf_value(terms)
        assert riemenschneider_dual(terms) == point_rule_dual(terms)
    return f"{len(every)} expansions, library time {took:.1f}s"


# 2 -------------------------------------------------------------------------

@criterion(2, "duality: determinants, dual definiteness, b2+ against e", budget=10)
def test_criterion_2_duality():
    rng = random.Random(2)
    trees = [g for _, g in rng.sample(sweep_a(), 90)] + [g for _, _, g in sweep_b()[::2]]
    # the families have e > 0 by construction; move the third leg across e = 0
    # so that both sides of the equivalence are exercised
    while len(trees) < 200:
        _, g = rng.choice(sweep_a())
        r1, r2 = (1 / v for v in (cf_eval([-x for x in leg]) for leg in g.legs[:2]))
        if r1 + r2 < 1:
            c1 = int(1 / (1 - r1 - r2)) + rng.randint(-3, 3)
            if not 2 <= c1 <= 30:
                continue
            trees.append(StarShape(-1, (g.legs[0], g.legs[1], (-c1,))))
    positive = 0
    for g in trees:
        t, tp = g.tree(), g.dual().tree()
        Q, Qp = t.matrix(), tp.matrix()
        assert abs(det(Q)) == abs(det(Qp)) == abs(intersection_lattice(t).det)
        e = euler_number(g.seifert())
        assert (positive_eigenvalues(Q) == 1) == (e > 0)
        assert (intersection_lattice(t).signature[0] == 1) == (e > 0)
        if e > 0:
            positive += 1
            assert positive_eigenvalues([[-x for x in row] for row in Qp]) == len(Qp)
            assert intersection_lattice(tp).is_negative_definite()
            assert len(bad_vertices(tp)) <= 1
    assert 0 < positive < 200
    return f"200 trees, {positive} with e > 0"


# 3 -------------------------------------------------------------------------

@criterion(3, "lattice engine on a -2 vertex and the [-2,-2] chain", budget=1)
def test_criterion_3_lattice_engine():
    expected = {1: [F(-1, 4), F(1, 4)], 2: [F(-1, 6), F(-1, 6), F(1, 2)]}
    for n, want in expected.items():
        tree = chain(n)
        table = lattice_for(tree).generators()
        got = sorted(g.degree for gens in table.values() for g in gens)
        assert got == want
        brute = brute_generators(tree.matrix())
        assert sorted(d for ds in brute.values() for d in ds) == want
        assert len(got) == abs(det(tree.matrix())) and all(len(g) == 1 for g in table.values())
    return "degrees {1/4, -1/4} and {1/2, -1/6, -1/6}, both L-spaces"


# 4 -------------------------------------------------------------------------

@criterion(4, "generator count equals |det| on -2 chains and family duals", budget=60)
def test_criterion_4_l_space_counts():
    for n in range(1, 9):
        lat = lattice_for(chain(n))
        assert lat.generator_count() == abs(lat.det) == n + 1
    # only duals of non-realizable instances are L-spaces; realizable ones are skipped
    duals = [g.dual().tree() for _, g in sweep_a() if realizable(g.seifert()) is None]
    duals += [g.dual().tree() for _, _, g in sweep_b()]
    duals = [t for t in duals if len(t) <= 14]
    for t in duals:
        lat = lattice_for(t)
        assert lat.generator_count() == abs(lat.det), t.to_json()
    return f"8 chains, {len(duals)} dual trees"


# 6 -------------------------------------------------------------------------

def _characteristic_with_square(c):
    pd = c.pd.padded(c.model.N)
    # <c, e_i> = +-1 for every exceptional class, h odd, square 1 - N
    unit = pd.h % 2 == 1 and all(abs(x) == 1 for x in pd.e)
    return unit and pd.pair(pd) == 1 - c.model.N


CLASSES = {}  # shape -> class c, filled by criterion 6 and reused by 7 and 8


@criterion(6, "class c values, characteristic, c^2 = signature", budget=30)
def test_criterion_6_class_c():
    for k, g in sweep_a():
        c = build_class_c(g, "A")
        # values must be the actual pairings, not just what the builder recorded
        assert {key: c.pd.pair(cls) for key, cls in c.model.classes.items()} == c.values
        assert family_a_mismatches(c, k) == [], g
        assert _characteristic_with_square(c)
        CLASSES[g] = c
    for s, m, g in sweep_b():
        c = build_class_c(g, "B")
        assert {key: c.pd.pair(cls) for key, cls in c.model.classes.items()} == c.values
        assert (c.side_vector(GAMMA), c.side_vector(GAMMA_P)) == family_b_expected(s, m, c.model)
        assert _characteristic_with_square(c)
        CLASSES[g] = c
    return f"{len(sweep_a())} family-A and {len(sweep_b())} family-B instances"


# 7 -------------------------------------------------------------------------

CERTIFIED = []


@criterion(7, "full path through c on the dual side, d3 + d(-Y) = 0", budget=120)
def test_criterion_7_certificates():
    CERTIFIED.clear()
    for fam, items in (("A", [g for _, g in sweep_a()]), ("B", [g for _, _, g in sweep_b()])):
        for g in items:
            cert = certify(g, fam)
            c = CLASSES.get(g) or build_class_c(g, fam)
            assert tuple(cert.path.steps[cert.through]) == c.side_vector(GAMMA_P)
            assert cert.d3 + cert.d_minus_Y == 0
            CERTIFIED.append(cert)
    return f"{len(CERTIFIED)} certificates"


# 8 -------------------------------------------------------------------------

@criterion(8, "d3 from the restriction against (c^2 - sigma)/4 and -d(-Y)")
def test_criterion_8_d3_cross_oracle():
    rng = random.Random(8)
    for _ in range(200):
        b2 = rng.randint(1, 20)
        c2 = F(rng.randint(-500, 500), rng.randint(1, 60))
        assert d3_from_restriction(c2, 2 - b2, b2) == (c2 - (2 - b2)) / 4
    certs = CERTIFIED or [certify(g, "A") for _, g in sweep_a()[:200]]
    for cert in certs:
        lat_g = lattice_for(cert.gamma.tree())
        assert lat_g.signature[0] == 1
        sigma = lat_g.signature[0] - lat_g.signature[1]
        c = CLASSES.get(cert.gamma) or build_class_c(cert.gamma, cert.family)
        c2g = restrict_square(c, GAMMA)
        d3 = d3_from_restriction(c2g, sigma, lat_g.n)
        assert d3 == (c2g - sigma) / 4 == cert.d3 == -cert.d_minus_Y
    # a sample against sympy squares and the correction term of the class
    for cert in certs[::150]:
        c = CLASSES.get(cert.gamma) or build_class_c(cert.gamma, cert.family)
        tg, tp = cert.gamma.tree(), cert.model.gamma_p.tree()
        Qg, Qp = tg.matrix(), tp.matrix()
        sigma = 2 * positive_eigenvalues(Qg) - len(Qg)
        d3 = (square(Qg, c.side_vector(GAMMA)) - sigma) / 4
        K = c.side_vector(GAMMA_P)
        d_minus_y = (square(Qp, K) + len(Qp)) / 4
        lat_p = lattice_for(tp)
        assert correction_terms(lat_p)[lat_p.spinc_class(K)] == d_minus_y
        assert d3 == -d_minus_y == cert.d3
    return f"{len(certs)} certified instances, {len(certs[::150])} against sympy"


# 9 -------------------------------------------------------------------------

def _is_mn(si):
    if si.e0 != -1 or si.k != 3:
        return False
    try:
        shape = star_from_seifert(si)
    except ValueError:
        return False
    return recognize_Mn(shape) is not None and shape == Mn_star(recognize_Mn(shape))


def _random_seifert(rng):
    e0 = rng.choice((-2, -1, -1, -1, 0, 1))
    k = rng.choice((1, 2, 3, 3, 3, 3, 4))
    return normalize(e0, [F(rng.randint(1, q - 1), q) for q in
                          (rng.randint(2, 30) for _ in range(k))])


def _family_biased(rng):
    kind = rng.randrange(4)
    if kind == 0:
        _, g = rng.choice(sweep_a())
    elif kind == 1:
        _, _, g = rng.choice(sweep_b())
    else:
        g = Mn_star(rng.randint(1, 6)) if kind == 2 else rng.choice(sweep_b())[2]
    legs = [list(l) for l in g.legs]
    if rng.random() < 0.6:  # longer third leg: exercises truncation
        legs[2] += [-rng.randint(2, 4) for _ in range(rng.randint(1, 2))]
    if kind == 3 and rng.random() < 0.7:  # longer second leg: exercises reduction
        legs[1] += [-rng.randint(2, 4) for _ in range(rng.randint(1, 2))]
    return StarShape(-1, tuple(tuple(l) for l in legs)).seifert()


@criterion(9, "NoTight exactly on M_n, tight with certificates elsewhere", budget=300)
def test_criterion_9_classifier_endpoints():
    for n in range(1, 7):
        for inp in (ClassifierInput(tree=Mn_star(n).tree()),
                    ClassifierInput(seifert=Mn_star(n).seifert())):
            rep = classify(inp)
            assert rep.outcome == NO_TIGHT and rep.verdict.mn_index == n
    rng = random.Random(9)
    inputs = []
    while len(inputs) < 500:
        si = _random_seifert(rng) if len(inputs) % 2 else _family_biased(rng)
        if si.k > 0 and not _is_mn(si):
            inputs.append(si)
    counts, certified = {}, 0
    for si in inputs:
        rep = classify(ClassifierInput(seifert=si))
        assert rep.outcome in (TIGHT_WITH_CERTIFICATE, TIGHT_BY_CITATION), (si, rep.trace)
        if rep.verdict.provenance in ("criterion-a", "criterion-b"):
            assert rep.certificate is not None
        if rep.certificate is not None:
            back = Report.from_json(json.loads(json.dumps(rep.to_json())))
            assert verify_certificate(back)
            certified += 1
        counts[rep.verdict.provenance] = counts.get(rep.verdict.provenance, 0) + 1
    assert certified > 50
    return "500 inputs, " + ", ".join(f"{k} {v}" for k, v in sorted(counts.items()))


# 10 ------------------------------------------------------------------------

@criterion(10, "realizability against the naive double loop")
def test_criterion_10_realizability():
    rng = random.Random(10)
    hits = 0
    for _ in range(1000):
        si = SeifertInvariants(-1, tuple(F(rng.randint(1, q - 1), q)
                                         for q in (rng.randint(2, 30) for _ in range(3))))
        w = realizable(si)
        assert (None if w is None else (w.m, w.a)) == naive_realizable(*si.ratios)
        hits += w is not None
    assert realizable(SeifertInvariants(-1, (F(1, 2), F(1, 3), F(1, 5)))) is None
    assert realizable(SeifertInvariants(-1, (F(1, 2), F(1, 2), F(1, 2)))) is None
    w = realizable(SeifertInvariants(-1, (F(2, 5), F(1, 3), F(1, 4))))
    assert (w.m, w.a) == (2, 1)
    return f"1000 triples, {hits} realizable"


# 5 (last, so every path produced by the other criteria is counted) --------

@criterion(5, "every emitted full path has constant degree")
def test_criterion_5_degree_constancy():
    # conftest wraps full_path_through and checks each path as it is produced;
    # here we make sure some were produced, then add a few of our own
    for g in (StarShape(-1, ((-2, -3), (-3,), (-3,))), StarShape(-1, ((-2,), (-3, -3), (-5,)))):
        lat = lattice_for(g.dual().tree())
        for gens in lat.generators().values():
            for gen in gens:
                assert len({lat.degree(s) for s in gen.witness.steps}) == 1
    assert conftest.PATH_STATS["paths"] > 0
    return f"{conftest.PATH_STATS['paths']} paths checked in this session"
