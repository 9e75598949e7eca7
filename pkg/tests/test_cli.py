import json

import pytest

from cli import EXIT_INVALID, EXIT_NOT_INVOLUTIVE, EXIT_OK, main


def write_structure(path, family, rank, assignment):
    path.write_text(json.dumps({"algebra": {"family": family, "rank": rank}, "assignment": assignment}))
    return str(path)


@pytest.fixture
def failing_sl3(tmp_path):
    return write_structure(tmp_path / "failing.json", "A", 2, {
        "[1,0]": {"case": "3", "epsilon": 1},
        "[0,1]": {"case": "3", "epsilon": 1},
        "[1,1]": {"case": "1"},
    })


def test_roots_json(capsys):
    assert main(["roots", "A2", "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert [r["root"] for r in payload["positive_roots"]] == ["[1,0]", "[0,1]", "[1,1]"]
    assert payload["triples"] == [["[1,0]", "[0,1]", "[1,1]"]]


def test_roots_text(capsys):
    assert main(["roots", "A3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "A3: 6 positive roots, 4 sum triples" in out
    assert "d1=3, d2=2, d3=1" in out


def test_roots_bad_type(capsys):
    assert main(["roots", "Z9"]) == EXIT_INVALID
    assert "error:" in capsys.readouterr().err


def test_construct_then_verify(tmp_path, capsys):
    out = str(tmp_path / "a3.json")
    assert main(["construct", "A3", "--real-index", "4", "--out", out]) == EXIT_OK
    capsys.readouterr()
    assert main(["verify", out, "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["involutive"] and payload["agree"]
    assert payload["real_index"] == 4


def test_construct_a2_cases(capsys):
    assert main(["construct", "A2", "--real-index", "4", "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert [c["case"] for c in payload["assignment"].values()] == ["2", "2", "3"]


@pytest.mark.parametrize("real_index", ["3", "8", "-2"])
def test_construct_rejects_bad_real_index(capsys, real_index):
    assert main(["construct", "A2", "--real-index", real_index]) == EXIT_INVALID


def test_verify_reports_failure_with_witness(failing_sl3, capsys):
    assert main(["verify", failing_sl3]) == EXIT_NOT_INVOLUTIVE
    out = capsys.readouterr().out
    assert "NOT involutive" in out
    assert "witness Nij(" in out


@pytest.mark.parametrize("method", ["table", "oracle"])
def test_verify_single_method(failing_sl3, method):
    assert main(["verify", failing_sl3, "--method", method]) == EXIT_NOT_INVOLUTIVE


def test_verify_missing_root(tmp_path, capsys):
    path = write_structure(tmp_path / "short.json", "A", 2, {
        "[1,0]": {"case": "1"},
        "[0,1]": {"case": "1"},
    })
    assert main(["verify", path]) == EXIT_INVALID
    assert "[1,1]: missing from assignment" in capsys.readouterr().err


def test_verify_bad_parameters(tmp_path, capsys):
    path = write_structure(tmp_path / "bad.json", "A", 2, {
        "[1,0]": {"case": "3", "epsilon": 2},
        "[0,1]": {"case": "4.2", "x": "0", "a": "1"},
        "[2,2]": {"case": "1"},
        "[1,1]": {"case": "1"},
    })
    assert main(["verify", path]) == EXIT_INVALID
    err = capsys.readouterr().err
    assert "[1,0]" in err and "[0,1]" in err and "[2,2]" in err


def test_verify_unreadable_file(tmp_path, capsys):
    assert main(["verify", str(tmp_path / "absent.json")]) == EXIT_INVALID
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert main(["verify", str(broken)]) == EXIT_INVALID


def test_classify_with_omega(tmp_path, capsys):
    path = write_structure(tmp_path / "mixed.json", "A", 2, {
        "[1,0]": {"case": "3", "epsilon": 1},
        "[0,1]": {"case": "2"},
        "[1,1]": {"case": "4.2", "x": "2", "a": "1"},
    })
    assert main(["classify", path, "--with-omega", "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert [r["normal_form"] for r in payload["roots"]] == ["c", "b", "d"]
    assert payload["b_field"] == {"[1,1]": "-1/2"}
    assert payload["report"]["omega"] == {"[1,1]": pytest.approx(-0.5)}


def test_tables_involutivity(capsys):
    assert main(["tables", "involutivity", "--json"]) == EXIT_OK
    assert len(json.loads(capsys.readouterr().out)["rows"]) == 10


def test_tables_generated_text(capsys):
    assert main(["tables", "sl3", "--real-index", "6"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "real index 6:" in out
    assert "1, 4.1, 4.1  (additional)" in out


def test_tables_unknown_name():
    with pytest.raises(SystemExit):
        main(["tables", "sl9"])


def test_sweep_check_agreement(capsys):
    assert main(["sweep", "A1", "--check-agreement", "--workers", "2", "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["total"] == 17
    assert payload["disagreements"] == []


def test_sweep_cap(capsys):
    assert main(["sweep", "A3", "--cap", "1000"]) == EXIT_INVALID
    assert "above the cap" in capsys.readouterr().err


def test_sweep_dump(tmp_path):
    dump = tmp_path / "disagreements.json"
    assert main(["sweep", "A2", "--cases", "1", "2", "--dump", str(dump)]) == EXIT_OK
    assert json.loads(dump.read_text()) == []


def test_worker_requires_broker(capsys):
    assert main(["worker"]) == EXIT_INVALID
    assert "broker" in capsys.readouterr().err


def test_metrics_out(tmp_path):
    metrics = tmp_path / "metrics.prom"
    assert main(["roots", "A2", "--metrics-out", str(metrics)]) == EXIT_OK
    assert "decider_evaluations_total" in metrics.read_text()
