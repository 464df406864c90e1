"""Acceptance gate: one test per criterion, each printing a PASS line."""

import json
import os
import random
import time

import pytest

from polynov.advisor import advise
from polynov.cli import main as cli_main
from polynov.complexes import (
    ACYCLIC,
    FREE_HOMOLOGY,
    base_change_novikov,
    duality_check,
    fingerprint,
    fox_derivative,
    homology_verdict,
    mapping_torus,
    parse_complex,
    presentation_complex,
    reduce_complex,
    verdict,
)
from polynov.groupring import RingElement
from polynov.novikov import NovikovMatrix, NovikovSeries, invert_id_minus
from polynov.pcgroup import character_check, parse_presentation, parse_word
from polynov.sigma import (
    Representation,
    Resolution,
    finish_executor,
    parse_resolution,
    parse_witness,
    verify_homotopy,
    verify_sigma_witness,
)
from polynov.errors import Precondition

from test_pcgroup import KLEIN, Z2, DIHEDRAL, random_word
from test_novikov import random_certified_unit, random_u_positive_matrix

DATA = os.path.join(os.path.dirname(__file__), "data")

PRIMES = (2, 3, 5)


def data(name):
    return os.path.join(DATA, name)


def klein_complex():
    return presentation_complex(parse_presentation(KLEIN), ["b a b^-1 a"])


def ok(n, text):
    print("ACCEPTANCE %d PASS: %s" % (n, text))


def test_criterion_1_klein_fibration_obstruction():
    started = time.monotonic()
    K = klein_complex()
    u = character_check(K.pres, (1, 0))       # u(a)=0, u(b)=1
    rep = homology_verdict(K, u, 32)
    assert rep.verdict == ACYCLIC
    assert len(rep.trace) == 2
    assert rep.precision == 32
    for p in PRIMES:
        assert fingerprint(K, u, p) == [0, 0, 0]
    elapsed = time.monotonic() - started
    assert elapsed < 1.0, "took %.2fs" % elapsed
    ok(1, "Klein bottle ACYCLIC at 32 with a 2-move trace, fingerprints "
          "zero for p in {2,3,5}, %.3fs" % elapsed)


def test_criterion_2_tori_random_characters():
    started = time.monotonic()
    rng = random.Random(20260810)
    t2 = presentation_complex(parse_presentation(Z2), ["a b a^-1 b^-1"])
    t3 = mapping_torus(2, [[1, 0], [0, 1]])
    for C, size in ((t2, 2), (t3, 3)):
        done = 0
        while done < 20:
            vals = tuple(rng.randint(-4, 4) for _ in range(size))
            if all(v == 0 for v in vals):
                continue
            u = character_check(C.pres, vals)
            rep = homology_verdict(C, u, 32)
            assert rep.verdict == ACYCLIC
            assert rep.euler == 0
            for p in PRIMES:
                assert all(b == 0 for b in fingerprint(C, u, p))
            done += 1
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, "took %.2fs" % elapsed
    ok(2, "T^2 and T^3 ACYCLIC with euler 0 for 20 random nonzero "
          "characters each, oracle agreement throughout, %.2fs" % elapsed)


def test_criterion_3_sol_manifold():
    M = mapping_torus(2, [[2, 1], [1, 1]])
    M.check_d_squared()                        # exact, over the group ring
    pres = M.pres
    coll = lambda text: pres.collect(parse_word(pres.names, text))
    assert coll("t a t^-1") == coll("a^2 b")
    assert coll("t b t^-1") == coll("a b")
    u = character_check(pres, (1, 0, 0))       # u(t)=1, fibre killed
    rep = homology_verdict(M, u, 32)
    assert rep.verdict == ACYCLIC
    ok(3, "sol-manifold mapping torus collects nonabelian conjugations, "
          "d.d = 0 exactly, verdict ACYCLIC")


def test_criterion_4_wedge_nonvanishing_and_chi_route():
    W = parse_complex(open(data("wedge.cx")).read())
    u = character_check(W.pres, (1,))
    rep = homology_verdict(W, u, 32)
    assert rep.verdict == FREE_HOMOLOGY
    assert rep.betti == [0, 0, 1]
    assert rep.euler == 1
    z1 = parse_presentation("gens: t; order t: inf")
    out = advise(z1, "CW", 2, chi=1, kernel_finiteness=True)
    assert out["verdict"] == "HOMOTOPY_NOT_FG"
    assert "euler-characteristic-route" in out["citations"]
    ok(4, "circle-wedge-sphere complex has FREE_HOMOLOGY (0,0,1), euler 1; "
          "advisor upgrades via the euler route")


def test_criterion_5_novikov_kernel():
    klein = parse_presentation(KLEIN)
    u = character_check(klein, (1, 0))
    rng = random.Random(555)
    for _ in range(200):
        x = random_certified_unit(klein, u, rng, 32)
        inv = x.invert_unit()
        one = NovikovSeries.one(klein, u, 32)
        assert (x * inv).agrees_with(one)
        assert (inv * x).agrees_with(one)
    count = 0
    while count < 50:
        n = rng.randint(1, 4)
        A = random_u_positive_matrix(klein, u, rng, n, 32)
        B = invert_id_minus(A)
        Id = NovikovMatrix.identity(klein, u, n, 32)
        IA = Id - A
        for M in (IA.compose(B), B.compose(IA)):
            for i in range(n):
                for j in range(n):
                    want = NovikovSeries.one(klein, u, 32) if i == j \
                        else NovikovSeries.zero(klein, u, 32)
                    assert M.entries[i][j].agrees_with(want, below=32)
        count += 1
    ok(5, "200 random certified units invert exactly both sides at 32; "
          "50 random u-positive matrices satisfy the two-sided identity")


def test_criterion_6_finish_executor():
    res, _ = parse_resolution(open(data("circle.res")).read())
    u = character_check(res.pres, (1,))
    phi, s, _ = parse_witness(open(data("circle.wit")).read(), res.pres)
    cert = finish_executor(res, phi, s, Representation.trivial(res.pres), u, 16)
    assert cert["acyclic_up_to_precision"] == 16

    res2, _ = parse_resolution(open(data("z2.res")).read())
    u2 = character_check(res2.pres, (1, 0))
    phi2, s2, _ = parse_witness(open(data("z2.wit")).read(), res2.pres)
    cert2 = finish_executor(res2, phi2, s2, Representation.trivial(res2.pres),
                            u2, 16)
    assert cert2["acyclic_up_to_precision"] == 16

    one = RingElement.one(res.pres)
    with pytest.raises(Precondition):
        finish_executor(res, {0: [[one]], 1: [[one]]}, {},
                        Representation.trivial(res.pres), u, 16)
    from polynov.groupring import parse_ring_expr
    tinv = parse_ring_expr(res.pres, "t^-1")
    with pytest.raises(Precondition):
        finish_executor(res, {0: [[tinv]], 1: [[tinv]]}, {},
                        Representation.trivial(res.pres), u, 16)
    ok(6, "finish executor certifies the circle and Z^2 resolutions at 16 "
          "and rejects identity and negative-direction witnesses")


def test_criterion_7_duality_harness():
    K = klein_complex()
    K.manifold_dim = 2
    for vals in ((1, 0), (-1, 0), (2, 0)):
        u = character_check(K.pres, vals)
        report = duality_check(K, u, 32)
        assert report["status"] in ("HOLDS", "UNTESTED")
        assert report["status"] != "VIOLATED"
    T = presentation_complex(parse_presentation(Z2), ["a b a^-1 b^-1"])
    T.manifold_dim = 2
    for vals in ((1, 0), (0, 1), (2, -3)):
        u = character_check(T.pres, vals)
        report = duality_check(T, u, 32)
        assert report["status"] == "HOLDS"
    W = parse_complex(open(data("wedge.cx")).read())
    with pytest.raises(Precondition):
        duality_check(W, character_check(W.pres, (1,)), 32)
    ok(7, "duality implication never violated on Klein and T^2 corpus "
          "characters; non-manifold input refused")


def test_criterion_8_advisor_table(capsys):
    z4 = parse_presentation(
        "gens: a b c d; order a: inf; order b: inf; order c: inf; order d: inf")
    assert advise(z4, "CW", 3)["verdict"] == "HOMOTOPY_NOT_FG"
    klein = parse_presentation(KLEIN)
    assert advise(klein, "CW", 2)["verdict"] == "NOT_FG_UNLESS_ASPHERICAL"
    dih = parse_presentation(DIHEDRAL)
    out = advise(dih, "CW", 2, torsion_declared=True)
    assert out["hirsch"] == 1 and out["verdict"] == "HOMOTOPY_NOT_FG"
    assert "torsion-excludes-aspherical" in out["citations"]
    z3 = parse_presentation(
        "gens: a b c; order a: inf; order b: inf; order c: inf")
    out = advise(z3, "MANIFOLD", 4)
    assert out["verdict"] == "NOT_FG_SOME_LOW_DEGREE"
    assert out["low_degree_bound"] == 2

    runs = []
    for _ in range(2):
        code = cli_main(["advise", "--cw", "--dim", "3",
                         "--pres", data("z4.pc")])
        assert code == 0
        runs.append(capsys.readouterr().out)
    assert runs[0] == runs[1]
    json.loads(runs[0])
    ok(8, "advisor table verdicts as required; JSON byte-identical across "
          "two runs")


def test_criterion_9_property_suites():
    # collection confluence: 1000 random word pairs per corpus group
    for text in (KLEIN, Z2, DIHEDRAL):
        pres = parse_presentation(text)
        rng = random.Random(hash(text) & 0xFFFF)
        for _ in range(1000):
            w1 = random_word(pres, rng)
            w2 = random_word(pres, rng)
            assert pres.collect(w1 + w2) == \
                pres.multiply(pres.collect(w1), pres.collect(w2))
    sol = mapping_torus(2, [[2, 1], [1, 1]]).pres
    rng = random.Random(4242)
    for _ in range(1000):
        w1 = random_word(sol, rng, 10)
        w2 = random_word(sol, rng, 10)
        assert sol.collect(w1 + w2) == \
            sol.multiply(sol.collect(w1), sol.collect(w2))

    # Fox fundamental identity on 200 random relators
    for text in (KLEIN, Z2):
        pres = parse_presentation(text)
        rng = random.Random(31337)
        for _ in range(100):
            w = random_word(pres, rng, 12)
            lhs = RingElement.zero(pres)
            for i in range(pres.k):
                gi = RingElement.monomial(pres, pres.collect(((i, 1),)))
                lhs = lhs + fox_derivative(pres, w, i) * (gi - 1)
            assert lhs == RingElement.monomial(pres, pres.collect(w)) - 1

    # d.d = 0 across every reduction move: the reducer re-checks after each
    # move and raises on failure, so completing under random pivot orders
    # exercises the invariant on every move of every corpus complex
    klein_c = klein_complex()
    t2 = presentation_complex(parse_presentation(Z2), ["a b a^-1 b^-1"])
    sol_c = mapping_torus(2, [[2, 1], [1, 1]])
    from polynov.complexes import product_with_sphere
    prod = product_with_sphere(t2, 2)
    rng = random.Random(777)
    outcomes = {}
    for name, C, vals, prec in (
            ("klein", klein_c, (1, 0), 32),
            ("t2", t2, (1, 0), 32),
            ("sol", sol_c, (1, 0, 0), 10),
            ("product", prod, (1, 0), 16)):
        u = character_check(C.pres, vals)
        seen = set()
        for _ in range(5):
            nc = base_change_novikov(C, u, prec)
            trace, residual = reduce_complex(nc, strategy="random", rng=rng)
            rep = verdict(residual, trace)
            seen.add((rep.verdict, tuple(rep.betti or ())))
        outcomes[name] = seen
        assert len(seen) == 1, (name, seen)
        assert next(iter(seen))[0] == ACYCLIC

    # precision soundness: criteria 1-3 reductions at 64 agree below 32
    for C, vals in ((klein_c, (1, 0)), (t2, (1, 0)), (sol_c, (1, 0, 0))):
        u = character_check(C.pres, vals)
        lo = homology_verdict(C, u, 32)
        hi = homology_verdict(C, u, 64)
        assert lo.verdict == hi.verdict == ACYCLIC
        assert [(m["degree"], m["source"], m["target"]) for m in lo.trace.moves] \
            == [(m["degree"], m["source"], m["target"]) for m in hi.trace.moves]
    t3 = mapping_torus(2, [[1, 0], [0, 1]])
    u3 = character_check(t3.pres, (1, -2, 3))
    assert homology_verdict(t3, u3, 32).verdict == \
        homology_verdict(t3, u3, 64).verdict == ACYCLIC
    ok(9, "confluence (1000 pairs x 4 groups), Fox identity (200 relators), "
          "d.d = 0 held on every reduction move under random pivot orders, "
          "precision soundness 32 vs 64")
