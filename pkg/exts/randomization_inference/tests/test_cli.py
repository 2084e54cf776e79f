"""Tests of the command-line front end."""

import io
import json
import numpy as np
import os
import pandas as pd
import pytest
import subprocess
import sys

from randomization_inference.cli import VALID_COMBINATIONS, build_parser, check_compatible, parse_and_dispatch
from randomization_inference.errors import ParameterError


def _write_csv(path, **columns):
    pd.DataFrame(columns).to_csv(path, index=False)
    return str(path)


@pytest.fixture
def one_sample_csv(tmp_path):
    return _write_csv(tmp_path / "one_sample.csv", x=[1.0, 2.0, 3.0])


@pytest.fixture
def two_sample_csv(tmp_path):
    return _write_csv(tmp_path / "two_sample.csv", y=[5.0, 6.0, 7.0, 1.0, 2.0, 3.0], group=[1, 1, 1, 0, 0, 0])


def _run(capsys, *argv):
    code = parse_and_dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTest:
    def test_sign_test(self, capsys, one_sample_csv):
        code, out, _ = _run(capsys, "test", "one-sample", "--input", one_sample_csv, "--cols", "x", "--exact")
        assert code == 0
        payload = json.loads(out)
        assert payload["method"] == "test one-sample"
        assert payload["p_value"] == pytest.approx(0.25)
        assert payload["m_or_b"] == 8
        assert payload["mode"] == "exact"
        assert "version" in payload
        assert payload["config_echo"]["cols"] == ["x"]

    def test_two_sample_exact(self, capsys, two_sample_csv):
        code, out, _ = _run(capsys, "test", "two-sample", "--input", two_sample_csv, "--cols", "y,group")
        assert code == 0
        assert json.loads(out)["p_value"] == pytest.approx(72.0 / 720.0)

    def test_wide_layout(self, capsys, tmp_path):
        path = _write_csv(tmp_path / "wide.csv", x=["5", "6", "7"], y=["1", "2", ""])
        code, out, _ = _run(capsys, "test", "two-sample", "--wide", "--input", path, "--cols", "x,y", "--exact")
        assert code == 0
        assert json.loads(out)["m_or_b"] == 120

    def test_monte_carlo_is_reproducible(self, capsys, two_sample_csv):
        argv = ("test", "two-sample", "--input", two_sample_csv, "--cols", "y,group", "--mc", "199", "--seed", "5")
        first = json.loads(_run(capsys, *argv)[1])
        second = json.loads(_run(capsys, *argv)[1])
        assert first["p_value"] == second["p_value"]
        assert first["seed"] == 5
        assert first["m_or_b"] == 200
        assert first["bit_generator"] == "PCG64"

    def test_monte_carlo_requires_seed(self, capsys, two_sample_csv):
        code, _, err = _run(capsys, "test", "two-sample", "--input", two_sample_csv, "--cols", "y,group", "--mc", "99")
        assert code == 2
        assert "--seed is required" in err

    def test_invalid_combination(self, capsys, two_sample_csv):
        argv = ("test", "two-sample", "--input", two_sample_csv, "--cols", "y,group", "--statistic", "abs_mean")
        code, _, err = _run(capsys, *argv)
        assert code == 2
        assert "Valid statistic/group pairs" in err
        assert "test one-sample" in err

    def test_randomized_decision(self, capsys, one_sample_csv):
        argv = ("test", "one-sample", "--input", one_sample_csv, "--cols", "x", "--randomized", "--seed", "1")
        payload = json.loads(_run(capsys, *argv)[1])
        assert set(payload["decision"]) == {"reject", "phi"}

    def test_randomized_requires_seed(self, capsys, one_sample_csv):
        code, _, err = _run(capsys, "test", "one-sample", "--input", one_sample_csv, "--cols", "x", "--randomized")
        assert code == 2
        assert "--randomized requires --seed" in err

    def test_hot_hand_streak_length(self, capsys, tmp_path):
        path = _write_csv(tmp_path / "shots.csv", shot=[1, 1, 0, 1, 0, 0, 1, 1, 1, 0])
        argv = ("test", "hothand", "--input", path, "--cols", "shot", "--k", "1", "--mc", "499", "--seed", "2")
        code, out, _ = _run(capsys, *argv)
        assert code == 0
        payload = json.loads(out)
        assert payload["statistic"] == "hot_hand_diff(1)"
        assert payload["t_obs"] == pytest.approx(0.5 - 2.0 / 3.0)

    def test_json_output_file(self, capsys, tmp_path, one_sample_csv):
        output = tmp_path / "result.json"
        argv = ("test", "one-sample", "--input", one_sample_csv, "--cols", "x", "--output", str(output))
        code, out, err = _run(capsys, *argv)
        assert code == 0
        assert out == ""
        assert "Results written to" in err
        assert json.loads(output.read_text(encoding="utf-8"))["p_value"] == pytest.approx(0.25)

    def test_histogram_file(self, capsys, tmp_path, two_sample_csv):
        histogram = tmp_path / "histogram.csv"
        argv = ("test", "two-sample", "--input", two_sample_csv, "--cols", "y,group", "--histogram", str(histogram))
        code, _, _ = _run(capsys, *argv, "--bins", "5")
        assert code == 0
        table = pd.read_csv(histogram)
        assert list(table.columns) == ["bin_left", "bin_right", "count"]
        assert table["count"].sum() == 720


class TestInputErrors:
    def test_missing_file(self, capsys, tmp_path):
        code, _, err = _run(capsys, "test", "one-sample", "--input", str(tmp_path / "nope.csv"), "--cols", "x")
        assert code == 2
        assert "not found" in err

    def test_malformed_value(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x\n1.0\nabc\n3.0\n", encoding="utf-8")
        code, _, err = _run(capsys, "test", "one-sample", "--input", str(path), "--cols", "x")
        assert code == 2
        assert "line(s) 3" in err

    def test_missing_column(self, capsys, one_sample_csv):
        code, _, err = _run(capsys, "test", "one-sample", "--input", one_sample_csv, "--cols", "z")
        assert code == 2
        assert "not found" in err

    def test_labels_must_be_binary(self, capsys, tmp_path):
        path = _write_csv(tmp_path / "labels.csv", y=[1.0, 2.0, 3.0], group=[0, 1, 2])
        code, _, err = _run(capsys, "test", "two-sample", "--input", path, "--cols", "y,group")
        assert code == 2
        assert "labels 0 and 1" in err

    def test_argument_error(self, capsys):
        code, _, _ = _run(capsys, "test", "no-such-layout")
        assert code == 2

    def test_help(self, capsys):
        code, out, _ = _run(capsys, "--help")
        assert code == 0
        assert "simlab" in out


class TestExperiment:
    @pytest.fixture
    def pairs_csv(self, tmp_path):
        return _write_csv(
            tmp_path / "pairs.csv",
            y=[3.0, 1.0, 3.5, 1.2, 2.8, 1.1, 3.1, 0.9],
            d=[1, 0, 1, 0, 1, 0, 1, 0],
            pair=["a", "a", "b", "b", "c", "c", "d", "d"],
        )

    def test_strong_null(self, capsys, pairs_csv):
        code, out, _ = _run(capsys, "experiment", "strong", "--input", pairs_csv, "--cols", "y,d")
        assert code == 0
        payload = json.loads(out)
        assert payload["m_or_b"] == 40320
        assert payload["diagnostics"]["scheme"] == "complete"

    def test_weak_null_with_interval(self, capsys, pairs_csv):
        argv = ("experiment", "weak", "--input", pairs_csv, "--cols", "y,d", "--pairs", "pair", "--ci")
        code, out, _ = _run(capsys, *argv)
        assert code == 0
        payload = json.loads(out)
        assert payload["m_or_b"] == 16
        assert {"tau2", "lambda", "variance"} <= set(payload["diagnostics"])
        assert "confidence_interval" in payload

    def test_weak_null_requires_pairs(self, capsys, pairs_csv):
        code, _, err = _run(capsys, "experiment", "weak", "--input", pairs_csv, "--cols", "y,d")
        assert code == 2
        assert "--pairs" in err

    def test_resample_requires_monte_carlo(self, capsys, pairs_csv):
        code, _, err = _run(capsys, "experiment", "strong", "--input", pairs_csv, "--cols", "y,d", "--resample")
        assert code == 2
        assert "--mc" in err


class TestConformal:
    def test_bound(self, capsys, tmp_path):
        path = _write_csv(tmp_path / "values.csv", x=np.arange(1.0, 20.0))
        code, out, _ = _run(capsys, "conformal", "bound", "--input", path, "--cols", "x", "--alpha", "0.05")
        assert code == 0
        interval = json.loads(out)["interval"]
        assert interval["upper"] == 19.0
        assert interval["lower"] == "-inf"
        assert interval["k"] == 19

    def test_full_requires_query(self, capsys, tmp_path):
        path = _write_csv(tmp_path / "xy.csv", y=[1.0, 2.0, 3.0, 4.0], x=[0.0, 1.0, 2.0, 3.0])
        code, _, err = _run(capsys, "conformal", "full", "--input", path, "--cols", "y,x")
        assert code == 2
        assert "--x" in err


class TestClusterArt:
    def test_intercept_only(self, capsys, tmp_path):
        rng = np.random.default_rng(0)
        path = _write_csv(tmp_path / "panel.csv", y=rng.normal(size=40) + 2.0, state=np.repeat(list("abcd"), 10))
        code, out, _ = _run(capsys, "cluster", "art", "--input", path, "--cols", "y,state", "--ttest")
        assert code == 0
        payload = json.loads(out)
        assert payload["m_or_b"] == 16
        assert payload["t_comparison"]["df"] == 3

    def test_invalid_statistic(self, capsys, tmp_path):
        path = _write_csv(tmp_path / "panel.csv", y=[1.0, 2.0, 3.0, 4.0], state=["a", "a", "b", "b"])
        code, _, err = _run(capsys, "cluster", "art", "--input", path, "--cols", "y,state", "--statistic", "mean_diff")
        assert code == 2
        assert "tstat/cluster_sign_change" in err


class TestSimlab:
    def test_rates_table(self, capsys):
        code, out, _ = _run(capsys, "simlab", "sign_test_level", "--reps", "100", "--seed", "1")
        assert code == 0
        table = pd.read_csv(io.StringIO(out))
        assert list(table["test"]) == ["exact_randomized", "mc_p_value"]
        assert (table["reps"] == 100).all()

    def test_too_few_replications(self, capsys):
        code, _, err = _run(capsys, "simlab", "sign_test_level", "--reps", "10", "--seed", "1")
        assert code == 2
        assert "at least 100 replications" in err


class TestCompatibility:
    @pytest.mark.parametrize("subcommand", sorted(VALID_COMBINATIONS))
    def test_valid_pairs_pass(self, subcommand):
        for statistic_id, groups in VALID_COMBINATIONS[subcommand].items():
            for group_id in groups:
                check_compatible(subcommand, statistic_id, group_id)

    def test_invalid_pair(self):
        with pytest.raises(ParameterError, match="sign_change"):
            check_compatible("one-sample", "abs_mean", "full_permutation")

    def test_parser_accepts_trailing_flags(self):
        args = build_parser().parse_args(["test", "one-sample", "--alpha", "0.1", "--exact"])
        assert args.alpha == 0.1
        assert args.exact


class TestEntryPoint:
    @pytest.mark.parametrize(
        "statement",
        [
            "from randomization_inference.cli.dispatch import main",
            "import randomization_inference.engine",
            "import randomization_inference.simlab",
        ],
    )
    def test_imports_in_fresh_interpreter(self, statement):
        env = dict(os.environ, PYTHONPATH=os.pathsep.join(p for p in sys.path if p))
        completed = subprocess.run([sys.executable, "-c", statement], env=env, capture_output=True, text=True)
        assert completed.returncode == 0, completed.stderr
