import json

import pytest

from brunonf.cli.main import SCHEMA, main
from brunonf.cli.parser import parse_field, parse_scalar_list
from brunonf.derivation import LogDerivation
from brunonf.errors import MixedScalars, NotLogarithmic, ParseError, UnknownVariable
from brunonf.scalars import QQ, QQI, GaussQ

from conftest import example_two

EXAMPLE_TWO = """vars: x, y, z
i*x*dx - i*y*dy + (x*y - z^2)*(x*dx + y*dy + z*dz)
"""


def _write(tmp_path, text, name="field.txt"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_parse_example_two():
    spec = parse_field(EXAMPLE_TWO, order=16)
    assert spec.field is QQI
    assert spec.names == ["x", "y", "z"]
    assert spec.derivation == example_two(16)


def test_parse_rational_diagonal():
    spec = parse_field("vars: x, y\n1/2*x*dx + 3/4*y*dy\n", order=8)
    assert spec.field is QQ
    from fractions import Fraction

    assert spec.derivation == LogDerivation.diagonal((Fraction(1, 2), Fraction(3, 4)), 8, QQ)


def test_parse_headers():
    spec = parse_field("vars: u, v\nscalars: float\ntruncation: 4\nfield: u*du - 0.5*v*dv\n")
    assert spec.order == 4 and not spec.field.exact
    assert spec.derivation.linear_part()[1] == pytest.approx(-0.5)


def test_not_logarithmic_names_term():
    with pytest.raises(NotLogarithmic) as info:
        parse_field("vars: x, y\nx*dx + y*dx\n", order=4)
    assert "y" in str(info.value) and "dx" in str(info.value)


def test_unknown_variable_position():
    with pytest.raises(UnknownVariable) as info:
        parse_field("vars: x, y\nx*dx + w*dy\n", order=4)
    assert info.value.line == 2 and info.value.column == 8


def test_mixed_scalars():
    with pytest.raises(MixedScalars):
        parse_field("vars: x\nscalars: rational\ni*x*dx\n", order=4)
    with pytest.raises(MixedScalars):
        parse_field("vars: x\n0.5*x*dx\n", order=4)


def test_syntax_error_reports_expected():
    with pytest.raises(ParseError) as info:
        parse_field("vars: x, y\nx*dx + (y*dy\n", order=4)
    d = info.value.to_dict()
    assert d["line"] is not None and d["expected"]


def test_missing_vars():
    with pytest.raises(ParseError):
        parse_field("x*dx\n")


def test_print_roundtrip():
    d = example_two(8)
    text = "vars: x, y, z\n" + d.to_expr(["x", "y", "z"])
    assert parse_field(text, order=8).derivation == d


def test_scalar_list():
    lam, field = parse_scalar_list("1, -1")
    assert field is QQ and list(lam) == [1, -1]
    lam, field = parse_scalar_list("1, i")
    assert field is QQI and lam[1] == GaussQ(0, 1)
    lam, field = parse_scalar_list("1, -1.618")
    assert not field.exact


def test_bruno_ideal_command(tmp_path, capsys):
    path = _write(tmp_path, EXAMPLE_TWO)
    code, rep, _ = _run(capsys, ["bruno-ideal", "--input", path, "--order", "16"])
    assert code == 0 and rep["schema"] == SCHEMA
    res = rep["result"]
    assert res["automorphism_is_identity"]
    assert res["bruno_generators_original"] == ["x*y - z^2"]


def test_omega_command(capsys):
    code, rep, _ = _run(capsys, ["omega", "--lambda", "1,-1", "--kmax", "8"])
    assert code == 0
    om = rep["result"]["omega"]
    assert om["verdict"] == "SatisfiedCertified"
    assert all(e["omega"] == "1.0" for e in om["table"])


def test_normalize_linear(tmp_path, capsys):
    path = _write(tmp_path, "vars: x, y\nx*dx - 2*y*dy\n")
    code, rep, _ = _run(capsys, ["normalize", "--input", path, "--order", "8"])
    res = rep["result"]
    assert code == 0 and res["automorphism_is_identity"]
    assert all(not s["U"]["terms"] for s in res["trace"]["steps"])


def test_certify_and_oracle(tmp_path, capsys):
    path = _write(tmp_path, EXAMPLE_TWO)
    code, rep, _ = _run(capsys, ["certify", "--input", path, "--order", "8", "--kmax", "4"])
    assert code == 0
    assert rep["result"]["certificate"]["equals_bruno_ideal"] is True
    assert rep["result"]["certificate_ideal"] == ["x*y - z^2"]
    code, rep, _ = _run(capsys, ["oracle-compare", "--input", path, "--jet", "8"])
    assert code == 0 and rep["result"]["comparison"]["equal"]


def test_check_command(tmp_path, capsys):
    path = _write(tmp_path, "vars: x, y\nx*dx - y*dy + x*y*x*dx + x*dy*y\n")
    code, rep, _ = _run(capsys, ["check", "--input", path, "--order", "8"])
    assert code == 0 and rep["result"]["all_passed"]


def test_error_object_and_exit_code(tmp_path, capsys):
    path = _write(tmp_path, "vars: x, y\ny*dx\n")
    code, rep, _ = _run(capsys, ["normalize", "--input", path])
    assert code == 2
    assert rep["error"]["error"] == "not_logarithmic"


def test_missing_file(tmp_path, capsys):
    code, rep, _ = _run(capsys, ["normalize", "--input", str(tmp_path / "nope.txt")])
    assert code == 2 and "error" in rep


def test_out_file_and_determinism(tmp_path, capsys):
    path = _write(tmp_path, EXAMPLE_TWO)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["bruno-ideal", "--input", path, "--order", "8", "--out", str(a)])
    main(["bruno-ideal", "--input", path, "--order", "8", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    assert "timing_seconds" not in json.loads(a.read_text())
