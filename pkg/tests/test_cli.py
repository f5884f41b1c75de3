import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from src.catalog import instantiate
from src.cli import cli
from src.models import AlgebraFile, read_algebra, write_model

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def n5_file(tmp_path):
    path = tmp_path / "n5.json"
    write_model(path, AlgebraFile.from_algebra(instantiate("N5")))
    return str(path)


def invoke(runner, *args):
    return runner.invoke(cli, [str(a) for a in args])


def test_catalog_list(runner):
    result = invoke(runner, "catalog", "list")
    assert result.exit_code == 0
    rows = json.loads(result.stdout)
    assert len(rows) == 18
    n5 = next(r for r in rows if r["id"] == "N5")
    assert n5["nil_index"] == 3


def test_catalog_emit_with_parameter(runner, tmp_path):
    out = tmp_path / "n6.json"
    result = invoke(runner, "catalog", "emit", "N6", "--param", "alpha=2", "-o", out)
    assert result.exit_code == 0
    assert read_algebra(out) == instantiate("N6(2)")


def test_catalog_emit_to_stdout(runner):
    result = invoke(runner, "catalog", "emit", "g4")
    assert result.exit_code == 0
    assert AlgebraFile.model_validate_json(result.stdout).to_algebra() == instantiate("g4")


@pytest.mark.parametrize("args", [
    ("catalog", "emit", "N7"),
    ("catalog", "emit", "N6", "--param", "gamma=1"),
])
def test_bad_arguments_exit_with_usage_error(runner, args):
    assert invoke(runner, *args).exit_code == 2


def test_nil_index(runner, n5_file):
    result = invoke(runner, "nil-index", n5_file)
    assert result.exit_code == 0
    assert json.loads(result.stdout)["index"] == 3


def test_classify(runner, n5_file):
    result = invoke(runner, "classify", n5_file)
    assert result.exit_code == 0
    assert json.loads(result.stdout)["label"] == "N5"


def test_classify_outside_the_list(runner, tmp_path):
    path = tmp_path / "isotropic.json"
    path.write_text(json.dumps({"table": [
        {"i": 1, "j": 1, "k": 2, "c": "1"}, {"i": 3, "j": 3, "k": 2, "c": "1"},
        {"i": 1, "j": 3, "k": 1, "c": "1"}, {"i": 1, "j": 3, "k": 3, "c": "i"},
        {"i": 3, "j": 1, "k": 1, "c": "-1"}, {"i": 3, "j": 1, "k": 3, "c": "-i"},
    ]}))
    result = invoke(runner, "classify", path)
    assert result.exit_code == 1
    assert json.loads(result.stdout)["error"] == "OutsideCatalog"


def test_verify_degeneration(runner, tmp_path):
    result = invoke(runner, "verify-degeneration", DATA_DIR / "witnesses" / "n5-n2.json")
    assert result.exit_code == 0
    assert json.loads(result.stdout)["verdict"] == "Verified"

    path = tmp_path / "printed.json"
    path.write_text('{"source":"N2","target":"N3","basis":[["1","0","-1"],["0","0","1"],["0","0","t"]]}')
    result = invoke(runner, "verify-degeneration", path)
    assert result.exit_code == 1
    assert json.loads(result.stdout)["verdict"] == "Rejected(NotABasis)"


def test_search_witness(runner, tmp_path):
    out = tmp_path / "found.json"
    result = invoke(runner, "search-witness", "N5", "N5", "-o", out)
    assert result.exit_code == 0
    assert json.loads(result.stdout)["result"] == "Found"
    assert out.exists()

    result = invoke(runner, "search-witness", "C3-zero", "N1")
    assert result.exit_code == 1
    assert json.loads(result.stdout)["result"] == "Exhausted"


def test_verify_nondegeneration(runner):
    result = invoke(runner, "verify-nondegeneration", DATA_DIR / "certificates" / "g1-bn2.json")
    assert result.exit_code == 0
    assert json.loads(result.stdout)["valid"] is True


def _graph_dir(root: Path, witness: str) -> Path:
    (root / "witnesses").mkdir(parents=True)
    (root / "certificates").mkdir()
    (root / "witnesses" / "w.json").write_text(witness)
    return root


def test_verify_graph_exit_codes(runner, tmp_path):
    good = _graph_dir(tmp_path / "good",
                      '{"source":"N4","target":"N1","basis":[["1","0","0"],["0","1","0"],["0","0","t"]]}')
    report = tmp_path / "report.json"
    result = invoke(runner, "verify-graph", good, "--report", report)
    assert result.exit_code == 0
    assert json.loads(report.read_text())["failures"] == []
    assert "vertices" in result.stderr

    bad = _graph_dir(tmp_path / "bad",
                     '{"source":"N4","target":"N1","basis":[["1","0","0"],["0","1","0"],["0","0","1"]]}')
    result = invoke(runner, "verify-graph", bad)
    assert result.exit_code == 1
    assert len(json.loads(result.stdout)["failures"]) == 1
