import csv
import json
from fractions import Fraction

import pytest

from psym.cli import ENGINE_VERSION, _cache_path, load_cached_matrix, main
from psym.combinat import types_of
from psym.notation import render_expr


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_json(capsys):
    code, out, _ = run(["enumerate", "--kind", "pcom", "--n", "3"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 6 and len(data["items"]) == 6


def test_enumerate_tableaux(capsys):
    code, out, _ = run(["enumerate", "--kind", "wbt", "--n", "2", "--labels", "2", "--format", "text"], capsys)
    assert code == 0 and out.strip()


def test_expand_source(capsys):
    code, out, _ = run(["expand", "--from", "P", "--to", "Eplus", "--source", "(4)^1"], capsys)
    assert code == 0
    assert len(json.loads(out)["terms"]) == 8


def test_expand_by_type_text(capsys):
    code, out, _ = run(["expand", "--from", "H", "--to", "E", "--d", "4", "--by-type", "--format", "text"], capsys)
    assert code == 0
    assert sorted(out.split("\n")[:-1]) == sorted(["1  (1,1,1,1)^1", "-3  (2,1,1)^1", "2  (3,1)^1", "1  (2,2)^1", "-1  (4)^1"])


def test_matrix_json_matches_appendix(capsys, cache_dir, appendix):
    for F, G in [("H", "E"), ("P", "Eplus"), ("Eplus", "P")]:
        code, out, _ = run(["matrix", "--from", F, "--to", G, "--n", "4", "--format", "json"], capsys)
        assert code == 0
        data = json.loads(out)
        got = {(e["row"], e["col"]): Fraction(e["num"], e["den"]) for e in data["entries"]}
        want = {k: v for k, v in appendix[(F, G)].items() if v}
        assert got == want


def test_matrix_latex_fractions(capsys, cache_dir):
    code, out, _ = run(["matrix", "--from", "H", "--to", "P", "--n", "4", "--format", "latex"], capsys)
    assert code == 0
    assert r"\frac{1}{24}" in out


def test_matrix_cache_reload_is_byte_identical(capsys, cache_dir):
    argv = ["matrix", "--from", "E", "--to", "P", "--n", "4", "--format", "csv"]
    _, first, _ = run(argv, capsys)
    path = _cache_path("E", "P", 4)
    assert path.exists()
    assert load_cached_matrix("E", "P", 4) is not None
    _, second, _ = run(argv, capsys)
    assert first == second
    _, fresh, _ = run(argv + ["--no-cache"], capsys)
    assert fresh == first


def test_stale_and_corrupt_cache_entries_are_ignored(capsys, cache_dir):
    argv = ["matrix", "--from", "H", "--to", "P", "--n", "3", "--format", "json"]
    _, good, _ = run(argv, capsys)
    path = _cache_path("H", "P", 3)

    entry = json.loads(path.read_text())
    entry["payload"]["entries"][0]["num"] += 7
    path.write_text(json.dumps(entry))
    assert load_cached_matrix("H", "P", 3) is None
    _, out, _ = run(argv, capsys)
    assert out == good

    entry = json.loads(path.read_text())
    entry["key"]["engine"] = ENGINE_VERSION + "-old"
    path.write_text(json.dumps(entry))
    assert load_cached_matrix("H", "P", 3) is None

    path.write_text("{not json")
    assert load_cached_matrix("H", "P", 3) is None
    _, out, _ = run(argv, capsys)
    assert out == good


def test_matrix_order_file(capsys, cache_dir, tmp_path):
    order = list(reversed(types_of(3)))
    f = tmp_path / "order.txt"
    f.write_text("# reversed\n" + "\n".join(render_expr(t) for t in order) + "\n")
    code, out, _ = run(["matrix", "--from", "H", "--to", "E", "--n", "3", "--order", "file",
                        "--order-file", str(f), "--format", "csv"], capsys)
    assert code == 0
    assert next(csv.reader(out.splitlines()))[1:] == [render_expr(t) for t in order]

    f.write_text("(3)^1\n")
    code, _, err = run(["matrix", "--from", "H", "--to", "E", "--n", "3", "--order", "file",
                        "--order-file", str(f)], capsys)
    assert code == 2 and "exactly once" in err


def test_out_file_written_atomically(capsys, tmp_path):
    target = tmp_path / "seq.txt"
    code, out, _ = run(["oeis", "--seq", "A025065_TH", "--count", "6", "--format", "text", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert target.read_text() == "1 1 2 2 4 4\n"
    assert [p.name for p in tmp_path.iterdir()] == ["seq.txt"]


def test_usage_error_writes_no_output_file(capsys, tmp_path):
    target = tmp_path / "never.json"
    code, _, err = run(["tabloids", "--family", "simple", "--shape", "(2,)^1", "--content", "(1,1)^1",
                        "--out", str(target)], capsys)
    assert code == 2
    assert "position 3" in err and "     ^" in err
    assert not target.exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["matrix", "--from", "H", "--to", "H", "--n", "2"],
        ["matrix", "--from", "H", "--to", "E", "--n", "-1"],
        ["matrix", "--from", "H", "--to", "E", "--n", "2", "--order-file", "x"],
        ["matrix", "--from", "H", "--to", "E", "--n", "2", "--order", "file"],
        ["expand", "--from", "H", "--to", "E"],
        ["expand", "--from", "H", "--to", "E", "--source", "(1)^1x"],
        ["oeis", "--seq", "A024786_TE", "--count", "0"],
        ["tabloids", "--family", "simple", "--shape", "(2)^1", "--content", "(1)^1"],
        ["involution", "--name", "rho", "--d", "2"],
        ["verify", "--identity", "nope", "--max-d", "2"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_verify_all(capsys):
    code, out, _ = run(["verify", "--identity", "all", "--max-d", "4"], capsys)
    assert code == 0
    assert out.strip().endswith("85/85 passed")


def test_verify_json(capsys):
    code, out, _ = run(["verify", "--identity", "dH", "--max-d", "3", "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["ok"] and [r["J"] for r in data["results"]] == [1, 1, 2, 3]


def test_tabloids_json(capsys):
    code, out, _ = run(["tabloids", "--family", "dyad_singular", "--shape", "(4,2)^1(2,2)^2",
                        "--content", "(2,2,1,1,1)^2"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 3
    assert [t["weights"]["L_star"] for t in data["tabloids"]] == [16, 16, 16]


def test_oeis_csv(capsys):
    code, out, _ = run(["oeis", "--seq", "A002513_TP", "--count", "13", "--format", "csv", "--expand-up-to", "5"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "d,formula,expansion,match,extrapolated"
    assert lines[6] == "5,12,12,true,false"
    assert lines[13] == "12,246,,,true"


def test_involution_report_and_trace(capsys):
    code, out, _ = run(["involution", "--name", "rho_marked", "--d", "2", "--trace"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["report"]["ok"] and data["report"]["domain_size"] == 10
    assert len(data["trace"]) >= data["report"]["domain_size"]
    assert all(step["map"] == "rho_marked" for step in data["trace"])


def test_involution_text(capsys):
    code, out, _ = run(["involution", "--name", "strict_sos", "--d", "3", "--format", "text"], capsys)
    assert code == 0
    assert out.startswith("strict_sos d=3 J=3: pass")


def test_version(capsys):
    code, out, _ = run(["--version"], capsys)
    assert code == 0 and out.startswith("psym ")
