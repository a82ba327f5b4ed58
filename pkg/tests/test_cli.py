from __future__ import annotations

import json
import subprocess
import sys

import pytest

from heuncft import cli
from heuncft.heun import floquet_expansion
from heuncft.ratfunc import ParameterSpace
from heuncft.report import SeriesReport
from heuncft.serialize import dumps, parse_series, serialize
from heuncft.series import FormalSeries


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_floquet_hiii3_json(capsys):
    code, out, _ = run(capsys, "compute", "--object", "floquet", "--equation", "HIII3", "--order", "3")
    assert code == 0
    doc = json.loads(out)
    terms = {t["power"]: t["coefficient"] for t in doc["E"]["terms"]}
    assert terms[1] == "-2/(4*sigma^2-1)"
    assert doc["E"]["truncation_order"] == 3


def test_long_command_flag_and_text_format(capsys):
    code, out, _ = run(capsys, "--command", "compute", "--object", "floquet", "--equation", "HIII3",
                       "--order", "1", "--format", "text")
    assert code == 0 and "-2/(4*sigma^2-1)" in out


def test_resonant_binding_exit_code(capsys):
    code, _, err = run(capsys, "compute", "--object", "floquet", "--equation", "HIII3", "--order", "3",
                       "--bind", "sigma=1/2")
    assert code == 3 and "ResonantDenominator" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("compute", "--object", "bs", "--equation", "HI"),
        ("verify", "--suite", "conjectureB-typeG", "--order", "7"),
        ("compute", "--object", "classical", "--block-kind", "typeG", "--order", "3"),
        ("compute", "--object", "floquet", "--equation", "HIII3", "--bind", "theta0=1"),
        ("compute", "--object", "floquet", "--equation", "HIII3", "--bind", "sigma=x"),
        ("compute", "--object", "floquet"),
        ("catalog", "--equation", "HVII"),
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("heuncft: error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["compute", "--object", "floquet", "--equation", "HIII3", "--order", "-1"])
    assert exc.value.code == 2


def test_verify_typeG_exit_0(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "conjectureB-typeG", "--order", "3")
    assert code == 0
    (report,) = json.loads(out)
    assert report["verdict"] == "exact-equal"
    assert report["orders"] == ["kappa", "0", "1", "2", "3"]


def test_verify_mismatch_exit_1(capsys, monkeypatch):
    zero = ParameterSpace(("x",)).zero
    bad = lambda N: [SeriesReport("lhs", "rhs", [0], True), cli.corr.compare("a", "b", [(0, zero, zero + 1)])]
    monkeypatch.setitem(cli.SUITES, "conjectureB-Nf0", bad)
    code, out, _ = run(capsys, "verify", "--suite", "conjectureB-Nf0", "--format", "text")
    assert code == 1 and "mismatch at order 0: 0 != 1" in out


def test_output_is_deterministic():
    argv = [sys.executable, "-m", "heuncft.cli", "compute", "--object", "block", "--block-kind", "Nf2", "--order", "2"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first


def test_json_round_trip():
    E = floquet_expansion("HV", 2).E
    doc = json.loads(dumps(serialize(E)))
    assert parse_series(doc) == E
    assert dumps(serialize(parse_series(doc))) == dumps(serialize(E))


def test_zero_series_has_no_terms():
    S = ParameterSpace(("x",))
    doc = serialize(FormalSeries("t", {}, 3, zero=S.zero))
    assert doc["terms"] == []
    assert parse_series(doc).coefficients == {}


def test_hiv_bs_omits_vanishing_even_terms(capsys):
    code, out, _ = run(capsys, "compute", "--object", "bs", "--equation", "HIV", "--order", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["kappa"] == "-2*nu"
    powers = [t["power"] for t in doc["E"]["terms"]]
    assert 0 not in powers and 2 not in powers and 4 not in powers
    assert 1 in powers and 3 in powers


def test_bindings_specialize_output(capsys):
    code, out, _ = run(capsys, "compute", "--object", "floquet", "--equation", "HIII3", "--order", "1",
                       "--bind", "sigma=1/3")
    assert code == 0
    terms = {t["power"]: t["coefficient"] for t in json.loads(out)["E"]["terms"]}
    # delta_sigma = 1/4 - 1/9 = 5/36
    assert terms == {0: "5/36", 1: "18/5"}


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    rows = json.loads(out)["equations"]
    assert len(rows) == 10
    hv = next(r for r in rows if r["equation"] == "HV")
    assert "rescaled" in hv
