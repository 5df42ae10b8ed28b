import json
import math
import re

import pytest

from trace_sharp.cli import RunConfig, main, run


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _csv_rows(text):
    lines = text.splitlines()
    assert lines[0].startswith("# trace-sharp ") and "schema v1" in lines[0]
    header = lines[1].split(",")
    return header, [ln.split(",") for ln in lines[2:]]


def test_constants_n3(capsys):
    code, out, _ = _run(capsys, "constants", "--n", "3")
    assert code == 0
    header, rows = _csv_rows(out)
    assert float(rows[0][header.index("k_mv")]) == pytest.approx(2.0, rel=1e-14)


def test_constants_with_sigma(capsys):
    code, out, _ = _run(capsys, "constants", "--n", "2", "--sigma", "0.3", "--format", "json")
    doc = json.loads(out)["result"]
    assert doc["rho"] == 0.7
    assert code == 0 and doc["c_med"] > doc["k_mv"]


def test_solve_med_json(capsys):
    code, out, _ = _run(capsys, "solve-med", "--n", "2", "--sigma", "0.5", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    r = doc["result"]
    assert doc["schema_version"] == 1
    assert set(r) == {"sigma", "rho", "theta_sigma", "varphi_sigma", "k_med", "residual_sys",
                      "residual_nec", "n"}
    assert r["residual_sys"] <= 1e-10
    assert abs(r["theta_sigma"] - 2 * r["varphi_sigma"]) <= 1e-8


def test_lemma_check_exit_zero(capsys):
    code, out, _ = _run(capsys, "lemma-check", "--n", "2", "--resolution", "200")
    assert code == 0
    header, rows = _csv_rows(out)
    # quoted names contain commas; the passed column is last on every line
    assert all(line.endswith(",true") for line in out.splitlines()[2:])


def test_sweep(capsys):
    code, out, _ = _run(capsys, "sweep-mv", "--n", "3", "--resolution", "64", "--format", "json")
    r = json.loads(out)["result"]
    assert code == 0 and r["max_value"] == pytest.approx(2.0, abs=1e-4)


def test_verify_bv(capsys):
    code, out, _ = _run(capsys, "verify-bv", "--n", "2", "--count", "100", "--sigma", "0.4")
    assert code == 0
    assert all(line.endswith("true") for line in out.splitlines()[2:])


def test_oracle_csv_columns(capsys, tmp_path):
    p = tmp_path / "o.csv"
    code, _, _ = _run(capsys, "oracle", "--count", "50", "--sigma", "0.5", "--out", str(p))
    assert code == 0
    lines = p.read_text().splitlines()
    assert lines[1] == ("kind,params,volume,boundary_share,relative_perimeter,"
                        "quotient_mv,quotient_med,margin")
    assert "np.float64" not in p.read_text()


@pytest.mark.parametrize(
    "argv",
    [
        ("constants", "--n", "1"),
        ("solve-med", "--n", "2"),
        ("solve-med", "--sigma", "1.5"),
        ("sweep-mv", "--resolution", "8"),
        ("plot", "--format", "csv"),
        ("constants", "--format", "svg"),
        ("oracle", "--n", "3"),
        ("oracle", "--count", "0"),
        ("bogus",),
        ("constants", "--n", "two"),
    ],
)
def test_invalid_config_exit_one(capsys, argv):
    code = None
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_violation_exit_two(capsys, monkeypatch):
    from trace_sharp import bvcheck

    real = bvcheck.verify_suite

    def broken(*a, **k):
        checks = real(*a, **k)
        return [bvcheck.SuiteCheck("forced", 1, 2.0, 1e-9)] + checks

    monkeypatch.setattr(bvcheck, "verify_suite", broken)
    code, _, err = _run(capsys, "verify-bv", "--count", "10")
    assert code == 2 and "violation" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("oracle", "--count", "80", "--sigma", "0.3", "--seed", "9"),
        ("solve-med", "--sigma", "0.7", "--n", "3", "--format", "json"),
        ("verify-bv", "--count", "50", "--seed", "2", "--format", "json"),
        ("plot", "--sigma", "0.4"),
    ],
)
def test_byte_identical_outputs(tmp_path, argv):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main([*argv, "--out", str(a)]) == 0
    assert main([*argv, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def _svg_attr(svg, elem_id, attr):
    m = re.search(rf'<[^>]*id="{elem_id}"[^>]*>', svg)
    assert m, elem_id
    return float(re.search(rf'{attr}="([^"]+)"', m.group(0)).group(1))


def test_plot_half_moon_centre_on_circle():
    svg, code = run(RunConfig("plot", n=2, sigma=0.5, out_format="svg"))
    assert code == 0
    assert 'width="800"' in svg and 'height="800"' in svg
    cx = _svg_attr(svg, "removed-center", "cx")
    cy = _svg_attr(svg, "removed-center", "cy")
    assert abs(math.hypot(cx, cy) - 1.0) <= 1e-6
    assert "K_med" in svg and "theta" in svg


def test_plot_half_ball():
    svg, code = run(RunConfig("plot", n=3, out_format="svg"))
    assert code == 0
    assert "removed-center" not in svg
    assert "K_mv = 2" in svg
    assert 'id="extremal-set"' in svg


def test_help_lists_columns(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    assert "quotient_med" in capsys.readouterr().out
