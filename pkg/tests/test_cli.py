import json
import sys
from importlib import resources

import pytest

from ddbar.cli import main
from ddbar.examples_data import golden_table_text


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_builtin(capsys):
    code, out, err = run_cli(capsys, "validate", "iwasawa")
    assert code == 0
    assert "d squared is zero" in out and "FAIL" not in out


def test_validate_broken_presentation(tmp_path, capsys):
    data = json.loads(resources.files("ddbar").joinpath("data/iwasawa.json").read_text())
    data["d"][0]["partial"] = [{"coeff": "1", "monomial": ["phi1", "phib1"]}]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(data))
    code, out, err = run_cli(capsys, "validate", str(path))
    assert code == 1
    assert "phi3" in (out + err)


def test_unknown_example_fails(capsys):
    code, out, err = run_cli(capsys, "cohom", "noexist")
    assert code == 1
    assert "unknown example" in err


def test_bad_bidegree_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["cohom", "iwasawa", "--bidegree", "two,one"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_bad_point_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["jump", "iwasawa", "--at", "t11=??"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_cohom_json(capsys):
    code, out, err = run_cli(capsys, "cohom", "nakamura", "--theory", "aeppli", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["aeppli"]["1,1"] == 11
    assert payload["aeppli"]["2,1"] == 9


def test_cohom_single_bidegree(capsys):
    code, out, err = run_cli(capsys, "cohom", "iwasawa", "--theory", "bc", "--bidegree", "2,0")
    assert code == 0
    assert "h[2,0] = 3" in out


def test_hodge_checks(capsys):
    code, out, err = run_cli(capsys, "hodge", "iwasawa")
    assert code == 0
    assert "star identities" in out and "FAIL" not in out


def test_hodge_dump(capsys):
    code, out, err = run_cli(capsys, "hodge", "iwasawa", "--dump")
    assert code == 0
    assert "partial\t(1,0)\t" in out


def test_table_golden_bytes(capsys):
    for name in ("iwasawa", "nakamura"):
        code, out, err = run_cli(capsys, "table", name, "--paper")
        assert code == 0
        assert out == golden_table_text(name)


def test_jump_stratum_iii_row(capsys):
    code, out, err = run_cli(capsys, "jump", "iwasawa", "--stratum", "iii", "--format", "tsv")
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines() if line and not line.startswith("#")]
    header, body = rows[0], rows[1:]
    idx = {name: k for k, name in enumerate(header)}
    row20 = next(r for r in body if r[idx["p"]] == "2" and r[idx["q"]] == "0")
    # 3 = 1 + 2 + 0
    assert row20[idx["h_BC"]] == "3"
    assert row20[idx["h_BCt"]] == "1"
    assert row20[idx["defectBC"]] == "2"
    assert row20[idx["defectA_shift"]] == "0"
    assert row20[idx["residualBC"]] == "0"


def test_jump_at_point_json(capsys):
    code, out, err = run_cli(
        capsys, "jump", "nakamura", "--at", "t=1/2", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["all_residuals_zero"] and payload["duality_ok"]
    row = next(r for r in payload["rows"] if r["p"] == 2 and r["q"] == 1)
    assert row["h_BC"] == 9 and row["h_BCt"] == 5 and row["defectBC"] == 2


def test_jump_missing_parameter(capsys):
    code, out, err = run_cli(capsys, "jump", "iwasawa", "--at", "t11=1/2")
    assert code == 1
    assert "missing parameters" in err


def test_jump_requires_point_or_stratum(capsys):
    code, out, err = run_cli(capsys, "jump", "iwasawa")
    assert code == 1
    assert "needs --at or --stratum" in err


def test_deform_output(capsys):
    code, out, err = run_cli(
        capsys, "deform", "iwasawa", "--theory", "bc", "--bidegree", "2,0",
        "--at", "t11=1/2", "--at", "t12=0", "--at", "t21=0", "--at", "t22=1/2",
        "--at", "t31=0", "--at", "t32=0",
    )
    assert code == 0
    assert "harmonic classes: 3" in out
    assert "t11" in out  # rank matrix entries are printed as polynomials
    assert "defect at" in out and ": 2" in out
    assert "obstructed for generic parameters" in out


def test_deform_unobstructed_verdict(capsys):
    code, out, err = run_cli(capsys, "deform", "iwasawa", "--theory", "aeppli", "--bidegree", "1,1")
    assert code == 0
    assert "canonically unobstructed" in out


def test_jump_stratum_deterministic(capsys):
    code1, out1, _ = run_cli(capsys, "jump", "nakamura", "--stratum", "nonzero", "--format", "tsv")
    code2, out2, _ = run_cli(capsys, "jump", "nakamura", "--stratum", "nonzero", "--format", "tsv")
    assert code1 == code2 == 0
    assert out1 == out2
