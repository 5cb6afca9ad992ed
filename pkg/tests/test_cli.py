import json

import pytest

from app import EXIT_BOUND, EXIT_INVALID, EXIT_OK, main


@pytest.fixture
def run(tmp_path, monkeypatch, capsys):
    """Run the command line in a scratch directory and parse its JSON output."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("EXTKIT_MAX_ORDER", raising=False)

    def invoke(*argv):
        code = main(["--json", "--no-cache", *argv])
        return code, json.loads(capsys.readouterr().out)

    return invoke


@pytest.mark.parametrize("G, N, s, totals", [
    ("C2", "C2", "trivial", {"V4", "C4"}),
    ("C2", "C4", "inversion", {"D4", "Q8"}),
    ("C2", "C3", "inversion", {"S3"}),
])
def test_classify(run, G, N, s, totals):
    code, body = run("ext", "classify", G, N, s)
    assert code == EXIT_OK
    assert not body["result"]["obstructed"]
    assert set(body["result"]["totals"]) == totals
    assert body["result"]["classes"] == len(totals)
    assert body["provenance"]["seed"] == 0


def test_central_classification_counts_h2(run):
    code, body = run("ext", "classify", "V4", "C2", "central")
    assert code == EXIT_OK
    assert body["result"]["classes"] == 8
    assert body["result"]["h2_invariants"] == [2, 2, 2]


def test_group_info(run):
    code, body = run("group", "info", "Q8")
    assert code == EXIT_OK
    result = body["result"]
    assert (result["center"], result["aut"], result["inn"], result["out"]) == (2, 24, 4, 6)
    assert result["name"] == "Q8"
    assert not result["abelian"]


def test_output_is_deterministic(run):
    first = run("ext", "classify", "C2", "C4", "inversion")
    second = run("ext", "classify", "C2", "C4", "inversion")
    assert first == second


def test_unknown_group_is_a_validation_failure(run):
    code, body = run("group", "info", "Q9")
    assert code == EXIT_INVALID
    assert body["error"] == "ValidationError"


def test_order_bound_exit_code(run):
    code, body = run("--max-order", "4", "group", "info", "Q8")
    assert code == EXIT_BOUND
    assert body["error"] == "BoundExceeded"
    assert body["limit"] == 4


def test_missing_file(run, tmp_path):
    code, body = run("ext", "split", str(tmp_path / "missing.fs"))
    assert code == EXIT_INVALID
    assert body["error"] == "FileNotFoundError"


def test_kernel_commands(run):
    code, body = run("kernel", "check", "C2", "Q8", "index:1")
    assert code == EXIT_OK
    assert body["result"]["out_order"] == 6
    code, body = run("kernel", "obstruction", "C2", "Q8", "index:1")
    assert code == EXIT_OK
    assert not body["result"]["obstructed"]
    code, _ = run("kernel", "check", "C2", "Q8", "index:9")
    assert code == EXIT_INVALID


def test_written_classes_feed_other_commands(run, tmp_path):
    out = tmp_path / "classes"
    code, body = run("ext", "classify", "C2", "C4", "inversion", "--write", str(out))
    assert code == EXIT_OK
    files = sorted(out.glob("class*.fs"))
    assert len(files) == 2

    names = []
    splits = []
    for path in files:
        code, built = run("ext", "build", "C2", "C4", str(path))
        assert code == EXIT_OK
        assert built["result"]["order"] == 8
        names.append(built["result"]["name"])
        code, split = run("ext", "split", str(path))
        splits.append(split["result"]["split"])
        code, listing = run("aut", "list", str(path), "--oracle")
        assert listing["result"]["aut_preserving"] == 8
    assert names == body["result"]["totals"]
    assert sorted(splits) == [False, True]

    code, same = run("ext", "equiv", str(files[0]), str(files[0]))
    assert same["result"]["equivalent"]
    code, different = run("ext", "equiv", str(files[0]), str(files[1]))
    assert not different["result"]["equivalent"]


def test_text_output(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(["--no-cache", "group", "info", "C4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "extkit group info C4" in out
    assert "aut: 2" in out


def test_commands_leave_no_settings_file_behind(run, tmp_path):
    code, _ = run("group", "info", "C4")
    assert code == EXIT_OK
    assert not (tmp_path / "extkit.xml").exists()


def test_config_init_writes_defaults_once(run, tmp_path):
    code, body = run("config", "init")
    assert code == EXIT_OK
    assert body["result"]["created"]
    assert (tmp_path / "extkit.xml").exists()
    code, body = run("config", "init")
    assert code == EXIT_OK
    assert not body["result"]["created"]


def test_config_show_reports_overrides(run):
    code, body = run("--max-order", "64", "config", "show")
    assert code == EXIT_OK
    assert not body["result"]["exists"]
    assert body["result"]["settings"]["max_order"] == "64"
