import csv
import io
import json

import pytest
from click.testing import CliRunner

from ambikit.cli import BENCH_FIELDS, bench_row, main
from ambikit.documents import DocumentError, ModelDocument, bundled, bundled_names, load_document, schema


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return go


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(p)


def test_every_bundled_document_validates():
    names = bundled_names()
    assert "verma" in names and "rcon" in names
    for n in names:
        d = bundled(n)
        assert ModelDocument.from_json(d.to_json()) == d


@pytest.mark.parametrize("doc", [
    {"family": "graph", "n": 3},
    {"family": "concentration"},
    {"family": "concentration", "n": 3, "edges": [[1]]},
    {"family": "lyapunov", "n": 4},
    {"family": "staged_tree", "binary_depth": 2, "stages": "x"},
    {"family": "sem", "n": 3, "constraints": ["l_1_2"]},
])
def test_schema_rejections(doc):
    with pytest.raises(DocumentError):
        ModelDocument.from_json(doc)


def test_schema_is_draft_2020(tmp_path):
    assert schema()["$schema"].endswith("2020-12/schema")


def test_semantic_errors_are_document_errors(tmp_path):
    with pytest.raises(DocumentError):
        ModelDocument.from_json({"family": "sem", "n": 2, "edges": [[2, 1]]}).build()
    with pytest.raises(DocumentError):
        ModelDocument.from_json({"family": "concentration", "n": 2, "edges": [[1, 2]],
                                 "options": {"box": {"zz": [1, 2, 1]}}}).build()
    with pytest.raises(DocumentError):
        load_document(str(tmp_path / "missing.json"))


def test_list(run):
    r = run("list")
    assert r.exit_code == 0
    assert any(line.startswith("verma\t") for line in r.output.splitlines())


def test_markov_text_and_json(run):
    r = run("markov", "path3")
    assert r.exit_code == 0
    # grevlex over the diagonal-first table puts s_2_2*s_1_3 first
    assert r.output.splitlines()[0] == "-s_2_2*s_1_3 + s_1_2*s_2_3 = 0"
    j = json.loads(run("markov", "path3", "--json").output)
    assert j["equations"] == ["-s_2_2*s_1_3 + s_1_2*s_2_3"]


def test_markov_is_deterministic(run):
    assert run("markov", "cycle4", "--json").output == run("markov", "cycle4", "--json").output


def test_schema_error_exit_code(run, tmp_path):
    assert run("markov", write(tmp_path, "bad.json", {"family": "nope"})).exit_code == 2
    assert run("markov", write(tmp_path, "bad2.json", "{not json")).exit_code == 2


def test_consistency_exit_code(run, tmp_path):
    f = write(tmp_path, "empty.json", {"family": "concentration", "n": 2, "edges": [[1, 2]],
                                       "constraints": ["k_1_2 == 0", "k_1_2 == 1"]})
    assert run("markov", f).exit_code == 3


def test_vanishing_methods_agree(run):
    a = run("vanishing", "path3", "--json")
    b = run("vanishing", "path3", "--method", "elimination", "--json")
    assert a.exit_code == b.exit_code == 0
    assert json.loads(a.output)["gens"] == json.loads(b.output)["gens"]


def test_vanishing_deadline_exit_code(run):
    assert run("vanishing", "rcon", "--timeout-seconds", "0.01").exit_code == 5


def test_equiv_exit_codes(run):
    assert run("equiv", "staged_7a", "staged_7b").exit_code == 0
    r = run("equiv", "staged_7b", "staged_7c", "--json")
    assert r.exit_code == 10
    assert json.loads(r.output)["result"] == "inequivalent"
    assert run("equiv", "path3", "verma").exit_code == 2


def test_check_modes(run, tmp_path):
    assert run("check", "path3", "--sample").exit_code == 0
    ident = {"s_1_1": 1, "s_2_2": 1, "s_3_3": 1, "s_1_2": 0, "s_1_3": 0, "s_2_3": 0}
    assert run("check", "path3", "--point", json.dumps(ident)).exit_code == 0
    ident["s_1_3"] = "1/2"
    r = run("check", "path3", "--point", json.dumps(ident), "--json")
    assert r.exit_code == 1 and json.loads(r.output)["ok"] is False
    params = {"k_1_1": 2, "k_2_2": 2, "k_3_3": 2, "k_1_2": "-1/2", "k_1_3": 0, "k_2_3": "1/3"}
    assert run("check", "path3", "--params", write(tmp_path, "p.json", params)).exit_code == 0
    assert run("check", "path3").exit_code == 2
    assert run("check", "path3", "--point", "{}").exit_code == 2


def test_verify(run):
    r = run("verify", "verma", "--both", "--json")
    assert r.exit_code == 0 and json.loads(r.output)["ok"] is True


def test_bench_csv(run):
    r = run("bench", "path3", "staged_trivial")
    assert r.exit_code == 0
    rows = list(csv.DictReader(io.StringIO(r.output)))
    assert [row["status"] for row in rows] == ["ok", "ok"]
    assert tuple(rows[0]) == BENCH_FIELDS
    assert rows[0]["generators"] == "1"
    assert run("bench", "path3", "--no-header").output.count("\n") == 1


def test_bench_timeout_row():
    row = bench_row("rcon", "saturation", 0.01)
    assert row["status"] == "timeout" and row["generators"] == ""


def test_bench_parallel_matches_serial(run, monkeypatch):
    serial = list(csv.DictReader(io.StringIO(run("bench", "path3", "colored_dag").output)))
    monkeypatch.setenv("AMBIKIT_THREADS", "2")
    par = list(csv.DictReader(io.StringIO(run("bench", "path3", "colored_dag").output)))
    assert [r["hash"] for r in serial] == [r["hash"] for r in par]


def test_docs_schema_matches_packaged_copy():
    from pathlib import Path

    docs = Path(__file__).resolve().parents[1] / "docs" / "model-document.schema.json"
    assert json.loads(docs.read_text()) == schema()
