import io
import json
from types import SimpleNamespace

import pytest

from facepair.cli import main
from facepair.multigraph import MultiGraph, serialize_graph

DOUBLE_LOOP = MultiGraph(1, ((0, 0), (0, 0)))
PARALLEL = MultiGraph(2, ((0, 1),) * 4)


@pytest.fixture
def files(tmp_path):
    paths = SimpleNamespace()
    paths.loop = tmp_path / "loop.txt"
    paths.loop.write_text(serialize_graph(DOUBLE_LOOP))
    paths.par = tmp_path / "par.txt"
    paths.par.write_text(serialize_graph(PARALLEL))
    paths.bad = tmp_path / "bad.txt"
    paths.bad.write_text("2 4\n0 0\n0 0\n1 1\n1 1\n")
    paths.dir = tmp_path
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, [json.loads(line) for line in out.splitlines()], err


def test_check_records(files, capsys):
    code, recs, _ = run(capsys, "check", "--graph", files.loop, files.par, "--property", "one-vertex",
                        "--strategy", "dfs", "--verify-oracle")
    assert code == 0 and len(recs) == 2
    for r in recs:
        assert set(r) == {"graph_id", "node_count", "treewidth_used", "admissible", "property",
                          "strategy", "max_configs", "elapsed_ms", "oracle_agrees"}
        assert r["admissible"] is True and r["oracle_agrees"] is True
        assert r["property"] == "one-vertex" and r["strategy"] == "dfs"


def test_check_is_repeatable(files, capsys):
    a = run(capsys, "check", "--graph", files.par)[1]
    b = run(capsys, "check", "--graph", files.par)[1]
    strip = lambda rs: [{k: v for k, v in r.items() if k != "elapsed_ms"} for r in rs]
    assert strip(a) == strip(b)


def test_invalid_input_exit_code(files, capsys):
    code, recs, err = run(capsys, "check", "--graph", files.bad, files.loop)
    assert code == 1 and len(recs) == 1 and "not connected" in err
    code, _, err = run(capsys, "check", "--graph", files.dir / "missing.txt")
    assert code == 1 and "cannot read" in err
    assert run(capsys, "check", "--graph", files.loop, "--property", "bogus")[0] == 1


def test_treewidth_and_external_td(files, capsys):
    td = files.dir / "par.td"
    code, recs, _ = run(capsys, "treewidth", "--graph", files.par, "--exact", "--out", td)
    assert code == 0 and recs[0]["width"] == 1 and td.exists()
    code, recs, _ = run(capsys, "check", "--graph", files.par, "--td", td)
    assert code == 0 and recs[0]["treewidth_used"] == 1
    broken = files.dir / "broken.td"
    broken.write_text("s td 1 1 2\nb 1 0\n")
    assert run(capsys, "check", "--graph", files.par, "--td", broken)[0] == 1


def test_treewidth_k5(tmp_path, capsys):
    k5 = tmp_path / "k5.txt"
    k5.write_text(serialize_graph(MultiGraph(5, tuple((i, j) for i in range(5) for j in range(i + 1, 5)))))
    assert run(capsys, "treewidth", "--graph", k5, "--exact")[1][0]["width"] == 4


def test_gen(tmp_path, capsys):
    code, recs, _ = run(capsys, "gen", "--nodes", 4, "--out", tmp_path / "g4")
    assert code == 0
    assert recs[-1]["treewidth_histogram"] == {"1": 1, "2": 8, "3": 1}
    assert len(list((tmp_path / "g4").iterdir())) == 10
    assert run(capsys, "gen", "--nodes", 7)[0] == 1


def test_oracle_command(files, capsys):
    code, recs, _ = run(capsys, "oracle", "--graph", files.loop)
    assert code == 0
    assert set(recs[0]) == {"graph_id", "admissible", "closed_count", "property", "elapsed_ms"}
    assert recs[0]["admissible"] and recs[0]["closed_count"] > 0


def test_summary_and_jobs(files, capsys):
    code, recs, _ = run(capsys, "check", "--graph", files.loop, files.par, "--jobs", 2, "--summary")
    assert code == 0
    rows = [r for r in recs if r.get("summary")]
    assert [(r["node_count"], r["graphs"]) for r in rows] == [(1, 1), (2, 1)]
