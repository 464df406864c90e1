import json
import os

import pytest

from polynov.cli import main

DATA = os.path.join(os.path.dirname(__file__), "data")


def path(name):
    return os.path.join(DATA, name)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, (out, err)
    return json.loads(out)


def test_hirsch(capsys):
    payload = run_json(capsys, "hirsch", "--pres", path("z3.pc"))
    assert payload["report"]["hirsch"] == 3
    assert payload["report"]["poly_Z"] is True


def test_collect(capsys):
    payload = run_json(capsys, "collect", "--pres", path("klein.cx"),
                       "--word", "a b", "--char", "a=0, b=1")
    assert payload["report"]["normal_form"] == "b a^-1"
    assert payload["report"]["height"] == 1


def test_consistency(capsys):
    payload = run_json(capsys, "consistency", "--pres", path("dihedral.pc"))
    assert payload["report"]["ok"] is True


def test_char_accept_and_reject(capsys):
    payload = run_json(capsys, "char", "--pres", path("klein.cx"),
                       "--char", "a=0, b=1")
    assert payload["report"]["accepted"] is True
    code, out, err = run_cli(capsys, "char", "--pres", path("klein.cx"),
                             "--char", "a=1, b=1")
    assert code == 2
    assert json.loads(out)["error"]["code"] == "CHARACTER_INCONSISTENT"


def test_fox(capsys):
    payload = run_json(capsys, "fox", "--pres", path("klein.cx"),
                       "--word", "b a b^-1 a", "--gen", "a")
    assert payload["report"]["derivative"] == "a^-1 + b"


def test_complex_check(capsys):
    payload = run_json(capsys, "complex-check", "--complex", path("klein.cx"))
    assert payload["report"]["ok"] and payload["report"]["euler"] == 0


def test_homology_klein(capsys):
    payload = run_json(capsys, "homology", "--complex", path("klein.cx"),
                       "--char", "a=0, b=1")
    rep = payload["report"]
    assert rep["verdict"] == "ACYCLIC"
    assert rep["trace_length"] == 2
    assert payload["precision"] == 32


def test_homology_wedge(capsys):
    payload = run_json(capsys, "homology", "--complex", path("wedge.cx"),
                       "--char", "t=1")
    rep = payload["report"]
    assert rep["verdict"] == "FREE_HOMOLOGY"
    assert rep["betti"] == [0, 0, 1]
    assert rep["euler"] == 1


def test_fingerprint(capsys):
    payload = run_json(capsys, "fingerprint", "--complex", path("klein.cx"),
                       "--char", "a=0, b=1", "--prime", "2", "--prime", "3",
                       "--prime", "5")
    assert payload["report"]["betti"] == {"2": [0, 0, 0], "3": [0, 0, 0],
                                          "5": [0, 0, 0]}


def test_duality(capsys):
    payload = run_json(capsys, "duality", "--complex", path("klein.cx"),
                       "--char", "a=0, b=1")
    assert payload["report"]["status"] == "HOLDS"
    code, out, _ = run_cli(capsys, "duality", "--complex", path("wedge.cx"),
                           "--char", "t=1")
    assert code == 2
    assert json.loads(out)["error"]["code"] == "PRECONDITION"


def test_product_and_round_trip(capsys, tmp_path):
    payload = run_json(capsys, "product", "--complex", path("wedge.cx"),
                       "--sphere", "2")
    assert payload["report"]["ranks"] == [1, 1, 2, 1, 1]
    out_file = tmp_path / "product.cx"
    out_file.write_text(payload["report"]["complex"])
    check = run_json(capsys, "complex-check", "--complex", str(out_file))
    assert check["report"]["ok"] is True


def test_mapping_torus_cli(capsys, tmp_path):
    payload = run_json(capsys, "mapping-torus", "--rank", "2",
                       "--phi", "[[2,1],[1,1]]")
    assert payload["report"]["ranks"] == [1, 3, 3, 1]
    out_file = tmp_path / "sol.cx"
    out_file.write_text(payload["report"]["complex"])
    rep = run_json(capsys, "homology", "--complex", str(out_file),
                   "--char", "t=1")
    assert rep["report"]["verdict"] == "ACYCLIC"


def test_sigma_verify_and_finish(capsys):
    payload = run_json(capsys, "sigma-verify",
                       "--resolution", path("circle.res"),
                       "--witness", path("circle.wit"), "--char", "t=1")
    assert payload["report"]["accepted"] is True
    assert payload["report"]["homotopy_ok"] is True
    payload = run_json(capsys, "finish", "--resolution", path("circle.res"),
                       "--witness", path("circle.wit"), "--char", "t=1",
                       "--prec", "16")
    assert payload["report"]["acyclic_up_to_precision"] == 16


def test_finish_z2(capsys):
    payload = run_json(capsys, "finish", "--resolution", path("z2.res"),
                       "--witness", path("z2.wit"), "--char", "a=1, b=0",
                       "--prec", "16")
    assert payload["report"]["acyclic_up_to_precision"] == 16


def test_advise(capsys):
    payload = run_json(capsys, "advise", "--cw", "--dim", "3",
                       "--pres", path("z4.pc"))
    assert payload["report"]["verdict"] == "HOMOTOPY_NOT_FG"
    payload = run_json(capsys, "advise", "--cw", "--dim", "2",
                       "--pres", path("klein.cx"))
    assert payload["report"]["verdict"] == "NOT_FG_UNLESS_ASPHERICAL"
    payload = run_json(capsys, "advise", "--manifold", "--dim", "4",
                       "--pres", path("z3.pc"))
    assert payload["report"]["verdict"] == "NOT_FG_SOME_LOW_DEGREE"
    assert payload["report"]["low_degree_bound"] == 2


def test_obstruction(capsys):
    payload = run_json(capsys, "obstruction", "--complex", path("klein.cx"),
                       "--char", "a=0, b=1", "--kernel-fp")
    assert payload["report"]["fibration_unobstructed"] is True


def test_deterministic_json(capsys):
    one = run_cli(capsys, "homology", "--complex", path("klein.cx"),
                  "--char", "a=0, b=1")
    two = run_cli(capsys, "homology", "--complex", path("klein.cx"),
                  "--char", "a=0, b=1")
    assert one == two
    adv1 = run_cli(capsys, "advise", "--cw", "--dim", "3",
                   "--pres", path("z4.pc"))
    adv2 = run_cli(capsys, "advise", "--cw", "--dim", "3",
                   "--pres", path("z4.pc"))
    assert adv1 == adv2


def test_usage_errors(capsys):
    code, out, err = run_cli(capsys, "homology")
    assert code == 64
    code, out, err = run_cli(capsys, "not-a-command")
    assert code == 64
    code, out, err = run_cli(capsys)
    assert code == 64
    code, out, err = run_cli(capsys, "homology", "--complex",
                             path("missing.cx"), "--char", "t=1")
    assert code == 64


def test_precondition_exit_code(capsys):
    # zero character is a precondition failure of the completion
    code, out, err = run_cli(capsys, "homology", "--complex", path("wedge.cx"),
                             "--char", "t=0")
    assert code == 2
    assert json.loads(out)["error"]["code"] == "PRECONDITION"


def test_text_format(capsys):
    code, out, err = run_cli(capsys, "hirsch", "--pres", path("z3.pc"),
                             "--format", "text")
    assert code == 0
    assert "hirsch: 3" in out


def test_timing_flag_only_when_asked(capsys):
    payload = run_json(capsys, "hirsch", "--pres", path("z3.pc"))
    assert "timing_ms" not in payload
    payload = run_json(capsys, "hirsch", "--pres", path("z3.pc"), "--timing")
    assert "timing_ms" in payload
