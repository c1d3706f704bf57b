import io
import json

import pytest

from src.cli.commands import UsageError, cmd_random, cmd_sets
from src.cli.main import USAGE_ERRORS, main
from src.cli.run_config import RunConfig
from src.parsers.graph_parser import get_graph_parser


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def figure1_path(data_dir):
    return str(data_dir / "figure1.rg")


@pytest.fixture
def small5_path(data_dir):
    return str(data_dir / "small5.rg")


def test_validate(figure1_path, data_dir):
    assert run("validate", figure1_path) == (0, "valid\n")
    code, text = run("validate", str(data_dir / "arrow_into_full.rg"))
    assert code == 1
    assert "arrow_into_full: " in text
    assert run("validate", str(data_dir / "missing.rg"))[0] == 2


def test_validate_json_graph(data_dir):
    assert run("validate", str(data_dir / "figure1.json")) == (0, "valid\n")


def test_pairwise(figure1_path):
    code, text = run("pairwise", figure1_path, "--property", "p4")
    assert code == 0
    assert "2 | 4 | 5\n" in text
    assert len(text.splitlines()) == 24
    assert "2 | 4 | 5,6\n" in run("pairwise", figure1_path, "--property", "p3")[1]
    assert "2 | 4 | 5,6,7,8,9\n" in run("pairwise", figure1_path)[1]


def test_pairwise_on_complete_graph(figure1_path, tmp_path):
    code, saturated = run("saturate", figure1_path)
    assert code == 0
    path = tmp_path / "complete.rg"
    path.write_text(saturated, encoding="utf-8")
    assert run("pairwise", str(path), "--property", "p2") == (0, "")


def test_separate(figure1_path):
    assert run("separate", figure1_path, "--a", "2", "--b", "4", "--c", "5,6,8,9") == (0, "separated\n")
    assert run("separate", figure1_path, "--a", "2", "--b", "5") == (0, "connected\nwitness: 2 5\n")
    assert run("separate", figure1_path, "--a", "2", "--b", "2")[0] == 2
    assert run("separate", figure1_path, "--a", "2", "--b", "10")[0] == 2
    assert run("separate", figure1_path, "--a", "x", "--b", "4")[0] == 2


def test_verify_soundness(figure1_path):
    code, text = run("verify", figure1_path, "--soundness")
    assert code == 0
    assert "p1: 24/24 separated" in text
    assert text.endswith("all pass\n")


def test_verify_theorem1(small5_path, figure1_path):
    code, text = run("verify", small5_path, "--theorem1")
    assert code == 0
    assert text.endswith("closures equal\n")
    assert run("verify", figure1_path, "--theorem1")[0] == 2
    code, text = run("verify", small5_path, "--theorem1", "--budget", "1")
    assert code == 3
    assert text.endswith("inconclusive\n")


def test_verify_gaussian(figure1_path):
    code, text = run("verify", figure1_path, "--gaussian", "--seed", "1")
    assert code == 0
    assert "p4: 24/24 hold" in text
    payload = json.loads(run("verify", figure1_path, "--gaussian", "--seed", "1", "--format", "json")[1])
    assert payload["provenance"]["seed"] == 1
    assert payload["passed"]


def test_verify_needs_a_check(figure1_path):
    assert run("verify", figure1_path)[0] == 2


def test_sets_and_order(figure1_path):
    assert run("sets", figure1_path, "--pair", "2,4") == (0, "par={5,6} ant={5,6,8,9} pst={5,6,7,8,9}\n")
    assert run("sets", figure1_path, "--pair", "2,2")[0] == 2
    assert run("order", figure1_path) == (0, "1,2,3,4;5,7;6;8,9\n")
    assert run("order", figure1_path, "--ordering", "1,2;3,4;5,7;6;8,9")[0] == 2
    code, text = run("order", figure1_path, "--all")
    assert code == 0
    assert text.splitlines()[0] == "1,2,3,4;5,7;6;8,9"


def test_saturate_output_is_valid(figure1_path, monkeypatch):
    _, saturated = run("saturate", figure1_path)
    monkeypatch.setattr("sys.stdin", io.StringIO(saturated))
    assert run("validate", "-") == (0, "valid\n")
    assert get_graph_parser().parse(saturated).is_complete()


def test_random_is_deterministic(monkeypatch):
    first = run("random", "--nodes", "6", "--seed", "3")
    assert first == run("random", "--nodes", "6", "--seed", "3")
    assert first[0] == 0
    monkeypatch.setattr("sys.stdin", io.StringIO(first[1]))
    assert run("validate", "-") == (0, "valid\n")
    graph_json = run("random", "--nodes", "6", "--seed", "3", "--format", "json")[1]
    assert json.loads(graph_json)["nodes"] == [1, 2, 3, 4, 5, 6]


def test_derive(data_dir, tmp_path):
    premises = str(data_dir / "p1_pair24.txt")
    code, text = run("derive", "--goal", "2|4|5,6,8,9", "--premises", premises)
    assert code == 0
    assert text.splitlines()[0].startswith("1. symmetry:")
    assert len(text.splitlines()) == 3

    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n", encoding="utf-8")
    assert run("derive", "--goal", "2|4|5", "--premises", str(empty)) == (1, "not derived\n")


def test_json_output_is_deterministic(figure1_path):
    first = run("pairwise", figure1_path, "--property", "p4", "--format", "json")
    assert first == run("pairwise", figure1_path, "--property", "p4", "--format", "json")
    payload = json.loads(first[1])
    assert payload["property"] == "p4"
    assert {"A": [2], "B": [4], "C": [5]} in payload["statements"]


def test_report(figure1_path):
    code, text = run("report", figure1_path, "--format", "json")
    assert code == 0
    rows = json.loads(text)
    assert len(rows) == 24
    assert {"i": 2, "j": 4, "kind": "response", "past": [5, 6, 7, 8, 9], "anteriors": [5, 6, 8, 9],
            "joint_parents": [5, 6], "parents_of_lower": [5]} in rows
    assert run("report", figure1_path)[1].splitlines()[0].split()[:3] == ["i", "j", "kind"]


def test_usage_errors():
    assert run()[0] == 2
    assert run("unknown")[0] == 2
    assert run("random")[0] == 2


def test_core_value_errors_become_usage_errors(figure1_path):
    with pytest.raises(UsageError):
        cmd_sets(RunConfig.model_construct(command="sets", graph=figure1_path, pair=(2, 2)))
    with pytest.raises(UsageError):
        cmd_random(RunConfig.model_construct(command="random", nodes=0))
    assert ValueError not in USAGE_ERRORS
