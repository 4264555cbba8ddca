import io
import json

import pytest

from weakdp.cli import run
from weakdp.surface_builder import degree_four_example


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_classify_roots_rank2():
    code, out, _ = call("classify-roots", "--rank", "2")
    doc = json.loads(out)
    assert code == 0
    assert doc["command"] == "classify-roots" and doc["inputs"] == {"rank": 2}
    assert [r["type"] for r in doc["payload"]["rows"]] == ["A0", "A1"]
    assert doc["payload"]["rows"][1]["sizes"] == {"C": 0, "K": 2}


def test_classify_real_rank5():
    code, out, _ = call("classify-real", "--rank", "5")
    rows = json.loads(out)["payload"]["rows"]
    assert code == 0
    assert [r["index"] for r in rows] == list(range(10, 16))
    assert rows[-1]["images"][0] == "3H-2Q1-Q2-Q3-Q4-Q5"


def test_table_and_csv_formats():
    code, out, _ = call("classify-roots", "--rank", "3", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "index,rank,label,type,sizes"
    code, out, _ = call("classify-roots", "--rank", "3", "--format", "table")
    assert code == 0 and len(out.splitlines()) == 7


def test_byte_stable():
    assert call("sets", "--rank", "4")[1] == call("sets", "--rank", "4")[1]


def test_sets():
    code, out, _ = call("sets", "--rank", "5")
    assert json.loads(out)["payload"]["sizes"] == {"F": 40, "E": 16, "G": 10}
    code, out, _ = call("sets", "--label", "1123,45;5")
    assert len(json.loads(out)["payload"]["G_irreducible"]) == 7


def test_oracle():
    code, out, _ = call("oracle", "--rank", "4")
    p = json.loads(out)["payload"]
    assert code == 0 and p["orbit_count"] == 7 and p["bijective"]


def test_series_commands(tmp_path):
    tree = {"z": [{"sol": ["0", "1"], "mult": 1, "t": [{"sol": ["0", "0"], "mult": 1}]}]}
    (tmp_path / "tree.json").write_text(json.dumps(tree))
    code, out, _ = call("construct-series", "--degree", "2", "--basepoints", str(tmp_path / "tree.json"))
    p = json.loads(out)["payload"]
    assert code == 0
    assert p["conditions"] == [["1", "1", "1", "0", "0", "0"], ["0", "1", "2", "0", "0", "0"]]
    (tmp_path / "series.json").write_text(json.dumps(p["series"]))
    code, out, _ = call("analyze-series", "--input", str(tmp_path / "series.json"))
    z = json.loads(out)["payload"]["base_points"]["z"]
    assert code == 0 and z[0]["sol"] == ["0", "1"] and z[0]["t"][0]["mult"] == 1


def test_build_surface(tmp_path):
    (tmp_path / "pts.json").write_text(json.dumps(degree_four_example().to_json()))
    out_file = tmp_path / "surface.json"
    code, out, _ = call("build-surface", "--label", "1123,45;5", "--points", str(tmp_path / "pts.json"),
                        "--out", str(out_file))
    assert code == 0
    p = json.loads(out_file.read_text())
    assert p["effective_basis"] == ["H-Q1-Q2-Q3", "Q4-Q5"] and len(p["conic_families"]) == 7


def test_usage_errors():
    assert call("bogus")[0] == 2
    assert call("classify-roots")[0] == 2
    assert call("classify-roots", "--rank", "9")[0] == 2
    code, _, err = call("analyze-series", "--input", "x.json", "--format", "csv")
    assert code in (1, 2)
    code, _, err = call("conic-families", "--degree", "3")
    assert code == 2


def test_domain_errors():
    code, _, err = call("sets", "--label=-1145;5")
    assert code == 1 and "LatticeError" in err
    code, _, err = call("build-surface", "--label", "1123,1345,1156,1258,1367,1247,1468,1178;8", "--retries", "3")
    assert code == 1 and "unsatisfiable" in err


@pytest.mark.slow
def test_conic_families_table():
    code, out, _ = call("conic-families", "--degree", "4", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 97
    assert "16,10,10" in lines
