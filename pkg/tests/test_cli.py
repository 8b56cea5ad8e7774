import json

from biorth.cli import _glue_values, main

CANONICAL = ["--a", "1", "--b", "1/2", "--c=-1/3", "--d=-1/4", "--q", "1/2"]


def strip_timings(obj):
    if isinstance(obj, dict):
        return {k: strip_timings(v) for k, v in obj.items() if k != "timings_ms"}
    if isinstance(obj, list):
        return [strip_timings(v) for v in obj]
    return obj


def test_glue_values():
    assert _glue_values(["--c", "-1/3", "--n", "4"]) == ["--c=-1/3", "--n", "4"]
    assert _glue_values(["--c", "1/3"]) == ["--c", "1/3"]
    assert _glue_values(["--n", "-1"]) == ["--n", "-1"]  # only parameter flags glue


def test_bimoment_trivial_block(capsys):
    assert main(["bimoment", *CANONICAL, "--n", "0", "--format", "csv"]) == 0
    assert capsys.readouterr().out == "1\n"


def test_bimoment_json_and_negative_value_form(capsys):
    rc = main(
        ["bimoment", "--a", "1", "--b", "1/2", "--c", "-1/3", "--d", "-1/4", "--q", "1/2", "--n", "1"]
    )
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["entries"][1][0] == "8/23"
    assert payload["params"]["c"] == "-1/3"


def test_rate_flags_reach_same_point(capsys):
    rc = main(
        [
            "bimoment",
            "--alpha", "3/8", "--beta", "4/9", "--gamma", "1/8", "--delta", "1/18",
            "--q", "1/2", "--n", "1",
        ]
    )
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["params"] == {"a": "1", "b": "1/2", "c": "-1/3", "d": "-1/4", "q": "1/2"}


def test_config_errors_exit_2(capsys):
    # decimal input is rejected, not rounded
    assert main(["bimoment", "--a", "1", "--b", "0.5", "--c=-1/3", "--d=-1/4", "--q", "1/2"]) == 2
    # incomplete parameter set
    assert main(["bimoment", "--a", "1", "--q", "1/2"]) == 2
    # mixing the two input styles
    assert main(["bimoment", *CANONICAL, "--alpha", "1/4"]) == 2
    # rates whose algebraic parameters are irrational
    assert main(
        ["bimoment", "--alpha", "1/3", "--beta", "1/5", "--gamma", "1/7", "--delta", "1/11", "--q", "1/2"]
    ) == 2
    err = capsys.readouterr().err
    assert "error:" in err


def test_singular_point_exits_2(capsys):
    # abcd q = 1 makes the coefficient denominators vanish
    rc = main(["ldu", "--a", "2", "--b", "1", "--c", "1", "--d", "1", "--q", "1/2", "--n", "4"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_ldu_report(capsys):
    assert main(["ldu", *CANONICAL, "--n", "6"]) == 0
    payload = json.loads(capsys.readouterr().out)
    checks = {c["name"]: c["pass"] for c in payload["reports"]["ldu"]["checks"]}
    assert checks == {
        "bimoment-equals-LDU": True,
        "lower-times-inverse": True,
        "inverse-times-upper": True,
        "determinant-triple-agreement": True,
    }


def test_reports_are_deterministic(tmp_path):
    first = tmp_path / "one.json"
    second = tmp_path / "two.json"
    for path in (first, second):
        assert main(["polys", *CANONICAL, "--n", "6", "--out", str(path)]) == 0
    a = strip_timings(json.loads(first.read_text()))
    b = strip_timings(json.loads(second.read_text()))
    assert a == b
    assert a["reports"]["polys"]["checks"]


def test_out_flag_writes_file_only(tmp_path, capsys):
    path = tmp_path / "report.json"
    assert main(["aw", *CANONICAL, "--n", "3", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    payload = json.loads(path.read_text())
    names = [c["name"] for c in payload["reports"]["aw"]["checks"]]
    assert names == [
        "series-matches-recurrence-t2",
        "series-matches-recurrence-t3/2",
        "series-matches-recurrence-t5",
    ]
    assert all(c["pass"] for c in payload["reports"]["aw"]["checks"])


def test_functional_command(capsys):
    assert main(["functional", *CANONICAL, "--trials", "10", "--max-len", "4"]) == 0
    payload = json.loads(capsys.readouterr().out)
    names = {c["name"] for c in payload["reports"]["functional"]["checks"]}
    assert "evaluation-path-agreement-len4" in names


def test_rep_command_with_zero_parameters(capsys):
    rc = main(["rep", "--a", "1", "--b", "1/2", "--c", "0", "--d", "0", "--q", "1/2", "--n", "6"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    aw_match = payload["reports"]["aw-match"]["checks"][0]
    assert aw_match["pass"] and aw_match.get("skipped")


def test_stationary_command(capsys):
    assert main(["stationary", *CANONICAL, "--L", "2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    matched = [v["name"] for v in payload["variants"] if v["matches_oracle"]]
    assert matched == ["unshifted"]

    assert main(["stationary", *CANONICAL, "--L", "2", "--variant", "shifted"]) == 1
    capsys.readouterr()  # drop the failing-variant report

    assert main(["stationary", *CANONICAL, "--L", "1", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "configuration,probability,decimal"
    assert lines[2].startswith("1,31/72,")


def test_verify_all(capsys):
    assert main(["verify-all", "--jobs", "2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["grid"]) == 7
    for entry in payload["grid"]:
        for suite in entry["suites"].values():
            assert all(c["pass"] for c in suite["checks"])
