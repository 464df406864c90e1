import pytest

from polynov.advisor import (
    HOMOTOPY_NOT_FG,
    NO_CONCLUSION,
    NOT_FG_SOME_LOW_DEGREE,
    NOT_FG_UNLESS_ASPHERICAL,
    VERDICT_ORDER,
    advise,
    obstruction_report,
)
from polynov.complexes import parse_complex, presentation_complex
from polynov.errors import Precondition
from polynov.pcgroup import character_check, parse_presentation

from test_pcgroup import DIHEDRAL, KLEIN
from test_complexes import WEDGE_CX, klein_complex


def zn(n):
    gens = " ".join("g%d" % i for i in range(n))
    orders = "; ".join("order g%d: inf" % i for i in range(n))
    return parse_presentation("gens: %s; %s" % (gens, orders))


def test_cw_hirsch_exceeds():
    out = advise(zn(4), "CW", 3)
    assert out["verdict"] == HOMOTOPY_NOT_FG
    assert "hirsch-exceeds-dimension" in out["citations"]


def test_cw_klein_band():
    out = advise(parse_presentation(KLEIN), "CW", 2)
    assert out["verdict"] == NOT_FG_UNLESS_ASPHERICAL
    assert out["caveats"]


def test_cw_torsion_upgrade():
    out = advise(parse_presentation(DIHEDRAL), "CW", 2, torsion_declared=True)
    assert out["hirsch"] == 1
    assert out["verdict"] == HOMOTOPY_NOT_FG
    assert "torsion-excludes-aspherical" in out["citations"]


def test_cw_chi_route():
    out = advise(zn(1), "CW", 2, chi=1, kernel_finiteness=True)
    assert out["verdict"] == HOMOTOPY_NOT_FG
    assert "euler-characteristic-route" in out["citations"]


def test_cw_chi_without_flags_stays_conditional():
    out = advise(zn(1), "CW", 2, chi=1, kernel_finiteness=False)
    assert out["verdict"] == NOT_FG_UNLESS_ASPHERICAL


def test_manifold_low_degree():
    out = advise(zn(5), "MANIFOLD", 6)
    assert out["verdict"] == NOT_FG_SOME_LOW_DEGREE
    assert out["low_degree_bound"] == 3
    out = advise(zn(7), "MANIFOLD", 8)
    assert out["low_degree_bound"] == 4


def test_manifold_dim4_pi2():
    out = advise(zn(3), "MANIFOLD", 4)
    assert out["verdict"] == NOT_FG_SOME_LOW_DEGREE
    assert out["low_degree_bound"] == 2
    assert "dimension-four-pi2" in out["citations"]


def test_no_conclusion():
    assert advise(zn(1), "CW", 3)["verdict"] == NO_CONCLUSION
    assert advise(zn(2), "MANIFOLD", 5)["verdict"] == NO_CONCLUSION


def test_torsion_declaration_on_poly_z_ignored():
    out = advise(parse_presentation(KLEIN), "CW", 2, torsion_declared=True)
    assert out["verdict"] == NOT_FG_UNLESS_ASPHERICAL
    assert any("torsion" in c for c in out["caveats"])


def test_monotone_in_hirsch():
    q = 3
    prev = -1
    for n in range(1, 6):
        out = advise(zn(n), "CW", q)
        rank = VERDICT_ORDER[out["verdict"]]
        assert rank >= prev
        prev = rank


def test_torsion_upgrade_matches_high_hirsch():
    # declared torsion in the band gives the same class as h > q
    banded = advise(parse_presentation(DIHEDRAL), "CW", 2,
                    torsion_declared=True)
    high = advise(zn(3), "CW", 2)
    assert banded["verdict"] == high["verdict"] == HOMOTOPY_NOT_FG


def test_invalid_inputs():
    with pytest.raises(Precondition):
        advise(zn(1), "CW", 0)
    with pytest.raises(Precondition):
        advise(zn(1), "SIMPLICIAL", 2)


def test_obstruction_klein():
    K = klein_complex()
    u = character_check(K.pres, (1, 0))
    out = obstruction_report(K, u, 32, kernel_fp_declared=True)
    conds = {c["condition"]: c["status"] for c in out["conditions"]}
    assert conds["vanishing-completed-homology"] == "COMPUTED-VANISHING"
    assert conds["torsion-obstruction-vanishes"] == "AUTO-POLY-Z"
    assert conds["kernel-finitely-presented"] == "DECLARED"
    assert out["fibration_unobstructed"]
    assert out["euler"] == 0


def test_obstruction_wedge():
    W = parse_complex(WEDGE_CX)
    u = character_check(W.pres, (1,))
    out = obstruction_report(W, u, 32, kernel_fp_declared=True)
    conds = {c["condition"]: c["status"] for c in out["conditions"]}
    assert conds["vanishing-completed-homology"] == "COMPUTED-NONVANISHING"
    assert not out["fibration_unobstructed"]
    assert out["euler"] == 1
    assert out["homology"]["betti"] == [0, 0, 1]


def test_obstruction_sol():
    from polynov.complexes import mapping_torus
    M = mapping_torus(2, [[2, 1], [1, 1]])
    u = character_check(M.pres, (1, 0, 0))
    out = obstruction_report(M, u, 32, kernel_fp_declared=True)
    assert out["fibration_unobstructed"]
