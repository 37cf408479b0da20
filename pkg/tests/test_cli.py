import json

import pytest

from cuecoe.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_weingarten_json(capsys):
    code, out = run(capsys, "weingarten", "--ensemble", "cue", "--partition", "1,1")
    assert code == 0
    payload = json.loads(out)
    assert payload["numerator"] == "1"
    assert payload["denominator"] == "N^2 - 1"


def test_weingarten_value_at_n(capsys):
    code, out = run(capsys, "weingarten", "--ensemble", "coe", "--partition", "1", "--n", "3")
    assert code == 0
    assert json.loads(out)["value_at_n"] == "1/4"


def test_series_equal(capsys):
    code, out = run(capsys, "series", "--type", "u", "--partition", "2", "--order", "5")
    assert code == 0
    payload = json.loads(out)
    assert payload["equal"] is True
    assert payload["factorization_series"] == [
        {"power": 3, "coefficient": "-1"},
        {"power": 5, "coefficient": "-1"},
    ]


def test_factorize(capsys):
    code, out = run(capsys, "factorize", "--type", "u", "--partition", "2", "--v", "3")
    payload = json.loads(out)
    assert code == 0 and payload["agree"] and payload["count"] == 1


def test_diagrams(capsys):
    code, out = run(capsys, "diagrams", "--target", "(1 2)", "--symmetry", "u",
                    "--max-order", "3")
    payload = json.loads(out)
    assert code == 0
    assert payload["total"] == 1
    assert payload["signed_sum"] == [{"power": 3, "coefficient": "-1"}]


def test_correlator_cmd(capsys):
    code, out = run(capsys, "correlator", "--ensemble", "cue",
                    "--z", "1,1", "--zstar", "1,1", "--n", "4")
    payload = json.loads(out)
    assert code == 0
    assert payload["denominator"] == "N" and payload["value_at_n"] == "1/4"


def test_moment_cmd_with_oracle(capsys):
    code, out = run(capsys, "moment", "--ensemble", "coe", "--traces", "1",
                    "--n1", "2", "--n2", "3", "--oracle")
    payload = json.loads(out)
    assert code == 0 and payload["agree"] and payload["moment"] == "1"


def test_mc_cmd(capsys):
    code, out = run(capsys, "mc", "--ensemble", "cue", "--n", "4",
                    "--samples", "2000", "--seed", "1",
                    "--correlator", "1,1", "--zstar", "1,1")
    payload = json.loads(out)
    assert code == 0
    assert abs(payload["mean_re"] - 0.25) < 5 * payload["stderr"]


def test_render(capsys, tmp_path):
    code, out = run(capsys, "render", "--target", "(1 2)", "--symmetry", "u",
                    "--max-order", "3", "--dot", str(tmp_path))
    payload = json.loads(out)
    assert code == 0 and payload["count"] == 1
    dot = (tmp_path / payload["files"][0].split("/")[-1]).read_text()
    assert dot.startswith("graph ribbon {")


def test_verify_small(capsys):
    code, out = run(capsys, "verify", "--max-t", "2", "--max-order", "3",
                    "--symmetry", "u")
    payload = json.loads(out)
    assert code == 0 and payload["all_equal"] is True


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["weingarten", "--ensemble", "cue"])  # missing --partition
    assert exc.value.code == 2


def test_computation_error_exits_1(capsys):
    code = main(["diagrams", "--target", "(1 2)", "--symmetry", "o", "--max-order", "3"])
    assert code == 1  # plain cycle is not a valid orthogonal target


def test_text_format(capsys):
    code, out = run(capsys, "--format", "text", "weingarten",
                    "--ensemble", "cue", "--partition", "2")
    assert code == 0 and "denominator: N^3 - N" in out
