import json

import pytest

from bankmap.cli import main
from conftest import CROSSBAR_ONLY_MAPPING, DEMO_PERMUTATION, KNOWN_MAPPING


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def demo_file(tmp_path):
    return write_json(
        tmp_path / "problem.json",
        {
            "permutation": list(DEMO_PERMUTATION),
            "parallelism": 3,
            "objective": "barrel-shifter",
        },
    )


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_demo_report(demo_file, capsys):
    code, out, _ = run(capsys, "solve", demo_file)
    assert code == 0
    report = json.loads(out)
    assert report["solver"] == "backtracking"
    assert report["status"] == "solved"
    assert report["objective_met"] is True
    assert report["banks"] == [[0, 1, 6, 3], [4, 5, 10, 7], [8, 9, 2, 11]]
    assert report["matrices"]["natural"] == ["A A C A", "B B A B", "C C B C"]
    assert report["matrices"]["interleaved"] == ["A B C A", "C A B C", "B C A B"]
    controls = report["controls"]
    assert controls["kind"] == "barrel-shifter"
    assert controls["natural"] == {"words": [0, 0, 1, 0], "distinct_word_count": 2}
    assert controls["interleaved"]["words"] == [0, 1, 2, 0]
    assert report["verification"]["valid"] is True


def test_report_json_round_trips(demo_file, capsys):
    code, out, _ = run(capsys, "solve", demo_file)
    assert code == 0
    report = json.loads(out)
    assert json.loads(json.dumps(report)) == report


def test_solve_report_feeds_verify(demo_file, tmp_path, capsys):
    code, out, _ = run(capsys, "solve", demo_file)
    assert code == 0
    mapping_file = tmp_path / "report.json"
    mapping_file.write_text(out)
    code, out, _ = run(capsys, "verify", demo_file, str(mapping_file))
    assert code == 0
    assert json.loads(out)["valid"] is True


def test_solve_trace_and_pretty(demo_file, capsys):
    code, _, err = run(capsys, "solve", demo_file, "--trace", "--pretty")
    assert code == 0
    assert "select interleaved column 3" in err
    assert " 0  1  2  3" in err  # natural data matrix rendering
    assert "A A C A" in err


def test_solve_non_divisor_is_input_error(tmp_path, capsys):
    problem = write_json(
        tmp_path / "bad.json", {"permutation": list(DEMO_PERMUTATION), "parallelism": 5}
    )
    code, _, err = run(capsys, "solve", problem)
    assert code == 1
    assert "parallelism 5 does not divide" in err


def test_solve_unknown_key_rejected(tmp_path, capsys):
    problem = write_json(
        tmp_path / "bad.json",
        {"permutation": [0, 1], "parallelism": 1, "extra": True},
    )
    code, _, err = run(capsys, "solve", problem)
    assert code == 1
    assert "extra" in err


def test_solve_bad_objective_named(tmp_path, capsys):
    problem = write_json(
        tmp_path / "bad.json",
        {"permutation": [0, 1], "parallelism": 1, "objective": "benes"},
    )
    code, _, err = run(capsys, "solve", problem)
    assert code == 1
    assert "objective" in err


def test_solve_conventions_accepted(tmp_path, capsys):
    problem = write_json(
        tmp_path / "conv.json",
        {
            "permutation": [3, 1, 0, 2],
            "parallelism": 2,
            "conventions": {
                "natural_fill": "column-major-sequence",
                "interleaved_fill": "column-major-sequence",
            },
        },
    )
    code, out, _ = run(capsys, "solve", problem)
    assert code == 0
    assert json.loads(out)["problem"]["conventions"]["natural_fill"] == "column-major-sequence"


def test_strict_objective_infeasible_exit(pinned, tmp_path, capsys):
    doc = pinned["barrel_infeasible"]
    problem = write_json(
        tmp_path / "hard.json",
        {
            "permutation": doc["permutation"],
            "parallelism": doc["parallelism"],
            "objective": "barrel-shifter",
        },
    )
    code, out, _ = run(capsys, "solve", problem, "--strict-objective")
    assert code == 3
    assert json.loads(out)["status"] == "infeasible"
    # without the flag the solver degrades instead of failing
    code, out, _ = run(capsys, "solve", problem)
    assert code == 2
    report = json.loads(out)
    assert report["status"] == "solved" and report["objective_met"] is False
    assert report["controls"]["kind"] == "crossbar"


def test_max_nodes_budget_exit(demo_file, capsys):
    code, out, _ = run(capsys, "solve", demo_file, "--max-nodes", "2")
    assert code == 3
    assert json.loads(out)["status"] == "budget-exhausted"


def test_solver_baseline_flag(demo_file, capsys):
    code, out, _ = run(capsys, "solve", demo_file, "--solver", "baseline", "--seed", "1")
    assert code == 2  # valid mapping, barrel objective typically unmet
    report = json.loads(out)
    assert report["solver"] == "baseline"
    assert report["seed"] == 1
    assert report["verification"]["valid"] is True


def test_solver_oracle_flag(demo_file, capsys):
    code, out, _ = run(capsys, "solve", demo_file, "--solver", "oracle")
    assert code == 0
    report = json.loads(out)
    assert report["solver"] == "oracle"
    assert report["banks"] == [[0, 1, 6, 3], [4, 5, 10, 7], [8, 9, 2, 11]]


def test_verify_conflicting_mapping_exit(demo_file, tmp_path, capsys):
    mapping = write_json(tmp_path / "onebank.json", {"banks": [list(range(12)), [], []]})
    code, out, _ = run(capsys, "verify", demo_file, mapping)
    assert code == 4
    assert json.loads(out)["valid"] is False
    assert json.loads(out)["conflicts"]


def test_verify_missing_datum_is_input_error(demo_file, tmp_path, capsys):
    banks = [[d for d in bank if d != 11] for bank in ([0, 1, 6, 3], [4, 5, 10, 7], [8, 9, 2, 11])]
    mapping = write_json(tmp_path / "partial.json", {"banks": banks})
    code, _, err = run(capsys, "verify", demo_file, mapping)
    assert code == 1
    assert "11" in err


def test_verify_known_mapping_files(demo_file, tmp_path, capsys):
    banks = [[], [], []]
    for datum, bank in enumerate(KNOWN_MAPPING):
        banks[bank].append(datum)
    mapping = write_json(tmp_path / "good.json", {"banks": banks})
    code, out, _ = run(capsys, "verify", demo_file, mapping)
    assert code == 0
    assert json.loads(out)["objective_met"]["barrel-shifter"] is True

    banks = [[], [], []]
    for datum, bank in enumerate(CROSSBAR_ONLY_MAPPING):
        banks[bank].append(datum)
    mapping = write_json(tmp_path / "agnostic.json", {"banks": banks})
    code, out, _ = run(capsys, "verify", demo_file, mapping)
    assert code == 0
    assert json.loads(out)["objective_met"]["barrel-shifter"] is False


def test_compare_demo(demo_file, capsys):
    code, out, _ = run(capsys, "compare", demo_file)
    assert code == 0
    summary = json.loads(out)["summary"]
    by_solver = {run_["solver"]: run_ for run_ in summary["runs"]}
    assert by_solver["backtracking"]["objective_met"] is True
    assert by_solver["baseline"]["valid"] is True


def test_compare_seed_range(demo_file, capsys):
    code, out, _ = run(capsys, "compare", demo_file, "--seed-range", "0:3")
    assert code == 0
    runs = json.loads(out)["summary"]["runs"]
    assert [r["seed"] for r in runs if r["solver"] == "baseline"] == [0, 1, 2, 3]
    assert all(r["valid"] for r in runs)


def test_compare_single_pe_agrees(tmp_path, capsys):
    problem = write_json(tmp_path / "tiny.json", {"permutation": [1, 0, 2], "parallelism": 1})
    code, out, _ = run(capsys, "compare", problem)
    assert code == 0
    assert all(r["objective_met"] for r in json.loads(out)["summary"]["runs"])
