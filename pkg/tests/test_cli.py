import json

import pytest

from tindex import cli
from tindex.nzdata import index_input, load_fixture, parse
from tindex.qseries import TruncatedQSeries
from tindex.tetindex import tet_index


def call(capsys, *argv):
    code = cli.run(list(argv))
    return code, capsys.readouterr().out


def test_tet_index_text(capsys):
    code, out = call(capsys, "tet-index", "--m", "0", "--e", "0", "--order", "4")
    assert code == 0 and out.strip() == "1 - q - 2*q^2 - 2*q^3 + O(q^4)"


def test_tet_index_json_roundtrip(capsys):
    code, out = call(capsys, "--json", "tet-index", "--m", "1", "--e", "-2", "--order", "7/2")
    d = json.loads(out)["series"]
    s = TruncatedQSeries(d["offset2"], d["coeffs"], d["order2"])
    assert s == tet_index(1, -2, "7/2") and d["text"] == str(s)


def test_bad_order_rejected():
    with pytest.raises(SystemExit):
        cli.run(["tet-index", "--m", "0", "--e", "0", "--order", "1/3"])


def test_structures_m136(capsys):
    code, out = call(capsys, "structures", "--file", "m136.json")
    assert code == 0
    assert "strict_angle: false" in out and "semi_angle: true" in out
    assert "index_structure: true" in out


def test_structures_json_degenerate(capsys):
    code, out = call(capsys, "--json", "structures", "--file", "degenerate_edge", "--full")
    d = json.loads(out)
    assert code == 0 and not d["index_structure"] and d["failures"]
    assert d["witnesses"]["strict"] is None and d["witnesses"]["semi"] is not None


def test_divergent_exit_code(capsys, tmp_path):
    M = index_input(load_fixture("m136"))
    f = tmp_path / "m136_nu0.json"
    f.write_text(json.dumps({"A": M.A, "B": M.B, "nu": [0] * M.R}))
    code, out = call(capsys, "--json", "index", "--file", str(f), "--order", "0")
    d = json.loads(out)
    assert code == 2 and d["error"] == "divergent"
    assert d["ray"] is not None and len(d["quad"]) == M.s


def test_index_figure_eight(capsys):
    code, out = call(capsys, "--json", "index", "--file", "4_1", "--order", "6", "--mode", "certified")
    d = json.loads(out)
    assert code == 0 and d["mode"] == "certified" and not d["heuristic"]
    code, out2 = call(capsys, "--json", "index", "--file", "4_1", "--order", "6", "--mode", "shell")
    assert json.loads(out2)["series"] == d["series"]


def test_index_bad_rows(capsys):
    code, _ = call(capsys, "index", "--file", "m136", "--order", "2", "--rows", "0", "1")
    assert code == 3


def test_missing_and_broken_files(capsys, tmp_path):
    assert call(capsys, "structures", "--file", str(tmp_path / "nope.json"))[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{"num_tetrahedra": 2, "edge_A": [')
    assert call(capsys, "structures", "--file", str(bad))[0] == 3


def test_determinism(capsys):
    argv = ["--json", "structures", "--file", "m064"]
    assert call(capsys, *argv) == call(capsys, *argv)
    argv = ["index", "--file", "4_1", "--order", "5"]
    assert call(capsys, *argv) == call(capsys, *argv)


def test_verify_ok(capsys):
    code, out = call(capsys, "verify", "triality", "--range", "-1", "1", "--order", "6")
    assert code == 0 and "ok" in out
    code, _ = call(capsys, "verify", "pentagon", "--range", "0", "1", "--order", "5")
    assert code == 0


def test_verify_failure_reports_first_case(capsys, monkeypatch):
    real = cli.ids.triality_residuals

    def broken(m, e, order):
        r1, r2 = real(m, e, order)
        return (r1 + TruncatedQSeries.from_terms({3: 1}, order), r2) if (m, e) == (0, 1) else (r1, r2)
    monkeypatch.setattr(cli.ids, "triality_residuals", broken)
    code, out = call(capsys, "--json", "verify", "triality", "--range", "0", "1", "--order", "6")
    d = json.loads(out)
    assert code == 1 and not d["ok"] and d["first_failure"] == {"m": 0, "e": 1}


def test_move_outputs(capsys):
    code, out = call(capsys, "move", "two-three", "--file", "4_1", "--site", "0", "1")
    t = parse(out)
    assert code == 0 and t.num_tet == 3
    code, out = call(capsys, "move", "two-three", "--file", "4_1", "--site", "0", "1", "--align", "1", "2")
    assert code == 0 and parse(out).num_tet == 3


def test_move_errors(capsys, tmp_path):
    assert call(capsys, "move", "three-two", "--file", "4_1", "--site", "0", "0", "1")[0] == 3
    assert call(capsys, "move", "three-two", "--file", "m136", "--site", "0", "1", "2")[0] == 3


def test_three_two_after_two_three(capsys, tmp_path):
    _, out = call(capsys, "move", "two-three", "--file", "m064", "--site", "2", "5")
    f = tmp_path / "t.json"
    f.write_text(out)
    code, out = call(capsys, "move", "three-two", "--file", str(f), "--site", "2", "5", "7")
    assert code == 0 and parse(out).num_tet == 7
