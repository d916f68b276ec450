import numpy as np
import pytest

from app import cli
from app.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, main
from app.src.core.config import get_settings
from app.src.core.errors import DimensionError, TrialError
from app.src.managers.experiment_manager import ExperimentManager, merge_mse_curves, mse_curve
from app.src.models.experiment_models import MseCurve
from app.src.services.dynamics import simulate_trajectory, vec_params
from app.src.services.likelihood import ergodic_objective_estimate
from app.src.services.markov import build_transition_matrix
from app.src.utils.csv_io import write_matrix_csv
from app.src.utils.param_files import load_experiment_config, load_params, write_params


@pytest.fixture
def hand_files(tmp_path, hand_params):
    write_params(tmp_path / "params.txt", hand_params)
    config = tmp_path / "experiment.cfg"
    config.write_text(
        "# small experiment\n"
        "params=params.txt\n"
        "trials=3\n"
        "T=600\n"
        "seed=7\n"
        "snapshot_every=200\n"
        "track=a12,c2\n",
        encoding="utf-8",
    )
    return tmp_path, config


@pytest.fixture
def friedkin_raw_file(tmp_path, friedkin_raw_params):
    return write_params(tmp_path / "friedkin.txt", friedkin_raw_params)


class TestMseAggregation:
    def test_single_trial_is_squared_error(self, hand_files):
        _, config = hand_files
        manager = ExperimentManager(load_experiment_config(config))
        run = manager.run_trials()[0]
        curve = mse_curve([run])
        np.testing.assert_allclose(curve.mse, run.err_norms ** 2)
        assert curve.n_trials == 1

    def test_merge_equals_union(self, hand_files):
        _, config = hand_files
        runs = ExperimentManager(load_experiment_config(config)).run_trials()
        merged = merge_mse_curves(mse_curve(runs[:1]), mse_curve(runs[1:]))
        union = mse_curve(runs)
        np.testing.assert_allclose(merged.mse, union.mse, rtol=1e-14)
        assert merged.n_trials == 3

    def test_merge_rejects_other_checkpoints(self):
        first = MseCurve(checkpoints=[1, 2], mse=[0.5, 0.4], n_trials=1)
        second = MseCurve(checkpoints=[1, 3], mse=[0.5, 0.4], n_trials=1)
        with pytest.raises(DimensionError):
            merge_mse_curves(first, second)

    def test_curve_invariants(self):
        with pytest.raises(ValueError):
            MseCurve(checkpoints=[1, 2], mse=[0.1], n_trials=1)
        with pytest.raises(ValueError):
            MseCurve(checkpoints=[1], mse=[-0.1], n_trials=1)


class TestExperimentManager:
    def test_trials_use_distinct_seeds(self, hand_files):
        _, config = hand_files
        runs = ExperimentManager(load_experiment_config(config)).run_trials()
        assert [run.seed for run in runs] == [7, 8, 9]
        assert not runs[0].same_path(runs[1])

    def test_worker_count_does_not_change_results(self, hand_files):
        _, config = hand_files
        manager = ExperimentManager(load_experiment_config(config))
        serial = manager.run_trials(workers=1)
        parallel = manager.run_trials(workers=2)
        assert all(a.same_path(b) for a, b in zip(serial, parallel))

    def test_outputs(self, hand_files, hand_params):
        root, config = hand_files
        manager = ExperimentManager(load_experiment_config(config))
        manager.write_outputs(manager.run_trials(), root / "out")
        out = root / "out"
        assert sorted(p.name for p in out.iterdir()) == [
            "mse.csv", "paths.csv", "run_000.csv", "run_001.csv", "run_002.csv", "summary.csv", "truth.csv",
        ]
        mse_lines = (out / "mse.csv").read_text().splitlines()
        assert mse_lines[0] == "t,mse,n_trials"
        assert [line.split(",")[0] for line in mse_lines[1:]] == ["200", "400", "600"]
        run_header = (out / "run_000.csv").read_text().splitlines()[0]
        assert run_header == "t,theta_1,theta_2,theta_3,theta_4,theta_5,theta_6,err_norm"
        paths = (out / "paths.csv").read_text().splitlines()
        assert paths[0] == "t,trial,component,value"
        assert len(paths) == 1 + 3 * 3 * 2
        assert paths[1].split(",")[:3] == ["200", "0", "a12"]
        truth = (out / "truth.csv").read_text().splitlines()
        assert truth[1] == f"a11,{float(vec_params(hand_params).theta[0])!r}"
        assert (out / "summary.csv").read_text().startswith("trial,seed,final_err,truncation_count\n0,7,")

    def test_theta0_from_file(self, hand_files, hand_params):
        root, config = hand_files
        config.write_text(config.read_text() + "theta0=params.txt\n", encoding="utf-8")
        manager = ExperimentManager(load_experiment_config(config))
        np.testing.assert_array_equal(manager.theta0, vec_params(hand_params).theta)

    def test_theta0_size_mismatch(self, hand_files, friedkin_raw_file):
        _, config = hand_files
        config.write_text(config.read_text() + f"theta0={friedkin_raw_file}\n", encoding="utf-8")
        with pytest.raises(DimensionError):
            ExperimentManager(load_experiment_config(config))

    def test_trial_failure_names_trial(self, hand_files):
        _, config = hand_files
        manager = ExperimentManager(load_experiment_config(config))
        manager.theta0 = np.full(6, np.nan)
        with pytest.raises(TrialError) as info:
            manager.run_trials(workers=1)
        assert info.value.trial == 0


class TestCli:
    def test_simulate_is_reproducible(self, hand_files):
        root, _ = hand_files
        params = str(root / "params.txt")
        assert main(["simulate", "--params", params, "--T", "100", "--seed", "7", "--out", str(root / "a")]) == EXIT_OK
        assert main(["simulate", "--params", params, "--T", "100", "--seed", "7", "--out", str(root / "b")]) == EXIT_OK
        first = (root / "a" / "trajectory.csv").read_bytes()
        assert first == (root / "b" / "trajectory.csv").read_bytes()
        assert len(first.decode().splitlines()) == 101

    def test_simulate_visits_every_state(self, tmp_path, friedkin_raw_file, capsys):
        code = main(["simulate", "--params", str(friedkin_raw_file), "--T", "100000", "--seed", "1", "--out", str(tmp_path / "o")])
        assert code == EXIT_OK
        assert "16/16 states visited" in capsys.readouterr().out

    def test_simulate_from_config(self, hand_files):
        root, config = hand_files
        assert main(["simulate", "--config", str(config), "--out", str(root / "sim")]) == EXIT_OK
        assert len((root / "sim" / "trajectory.csv").read_text().splitlines()) == 601

    def test_missing_params_file(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["simulate", "--params", str(tmp_path / "missing.txt"), "--out", str(out)])
        assert code == EXIT_USAGE
        assert not out.exists()
        assert "file not found" in capsys.readouterr().err

    def test_bad_config_key_reports_line(self, tmp_path, capsys):
        config = tmp_path / "bad.cfg"
        config.write_text("params=p.txt\nT=10\nwokers=2\n", encoding="utf-8")
        assert main(["estimate", "--config", str(config), "--out", str(tmp_path / "o")]) == EXIT_USAGE
        assert f"{config}:3:" in capsys.readouterr().err

    def test_usage_errors(self, tmp_path):
        assert main([]) == EXIT_USAGE
        assert main(["frobnicate"]) == EXIT_USAGE
        assert main(["analyze", "--out", str(tmp_path)]) == EXIT_USAGE
        assert main(["--log-level", "chatty", "analyze", "--out", str(tmp_path)]) == EXIT_USAGE

    def test_estimate_is_byte_identical(self, hand_files):
        root, config = hand_files
        assert main(["estimate", "--config", str(config), "--out", str(root / "e1")]) == EXIT_OK
        assert main(["estimate", "--config", str(config), "--workers", "2", "--out", str(root / "e2")]) == EXIT_OK
        for name in ("mse.csv", "run_001.csv", "summary.csv", "paths.csv"):
            assert (root / "e1" / name).read_bytes() == (root / "e2" / name).read_bytes()

    def test_analyze_friedkin(self, tmp_path, friedkin_raw_file, friedkin_params):
        out = tmp_path / "analysis"
        assert main(["--log-level", "INFO", "analyze", "--params", str(friedkin_raw_file), "--out", str(out)]) == EXIT_OK
        report = dict(line.split("=", 1) for line in (out / "report.txt").read_text().splitlines())
        for key in ("kernel_positive", "row_sums_ok", "lemma1_passed", "objective_grad_ok"):
            assert report[key] == "true", key
        assert load_params(out / "standardized_params.txt") == friedkin_params
        assert (out / "stationary.csv").read_text().splitlines()[0] == "state,probability"

    def test_analyze_hand_kernel(self, tmp_path, hand_files, hand_params):
        root, _ = hand_files
        assert main(["analyze", "--params", str(root / "params.txt"), "--out", str(tmp_path / "a")]) == EXIT_OK
        kernel = np.loadtxt(tmp_path / "a" / "kernel.csv", delimiter=",")
        np.testing.assert_array_equal(kernel, build_transition_matrix(hand_params).rows)
        assert not (tmp_path / "a" / "standardized_params.txt").exists()

    def test_analyze_capacity(self, tmp_path, make_random_params, capsys):
        params = write_params(tmp_path / "big.txt", make_random_params(np.random.default_rng(0), 12))
        assert main(["analyze", "--params", str(params), "--out", str(tmp_path / "o")]) == EXIT_NUMERICAL
        assert "n <= 10" in capsys.readouterr().err

    def test_analyze_then_recover(self, tmp_path, friedkin_raw_file, friedkin_params):
        out = tmp_path / "o"
        assert main(["analyze", "--params", str(friedkin_raw_file), "--out", str(out)]) == EXIT_OK
        assert main(["recover", "--kernel", str(out / "kernel.csv"), "--n", "4", "--out", str(out)]) == EXIT_OK
        recovered = load_params(out / "recovered_params.txt")
        error = np.max(np.abs(vec_params(recovered).theta - vec_params(friedkin_params).theta))
        assert error < 1e-8

    def test_recover_corrupted_csv(self, tmp_path, capsys):
        kernel = tmp_path / "kernel.csv"
        kernel.write_text("0.25,0.25,0.25,0.25\n0.25,oops,0.25,0.25\n", encoding="utf-8")
        assert main(["recover", "--kernel", str(kernel), "--n", "2", "--out", str(tmp_path)]) == EXIT_USAGE
        assert f"{kernel}:2:" in capsys.readouterr().err

    def test_recover_mismatch(self, tmp_path, make_random_params):
        rows = build_transition_matrix(make_random_params(np.random.default_rng(2), 3)).rows.copy()
        rows[[1, 2]] = rows[[2, 1]]
        kernel = write_matrix_csv(tmp_path / "kernel.csv", rows)
        assert main(["recover", "--kernel", str(kernel), "--n", "3", "--out", str(tmp_path)]) == EXIT_NUMERICAL
        assert not (tmp_path / "recovered_params.txt").exists()

    def test_sweep(self, tmp_path, hand_files):
        root, _ = hand_files
        out = tmp_path / "sweep"
        args = ["sweep", "--params", str(root / "params.txt"), "--component", "c1", "--steps", "21", "--out", str(out)]
        assert main(args) == EXIT_OK
        lines = (out / "sweep.csv").read_text().splitlines()
        assert lines[0] == "theta_component,offset,value,grad_norm"
        values = [float(line.split(",")[2]) for line in lines[1:]]
        assert len(values) == 21
        assert int(np.argmax(values)) == 10

    def test_sweep_unknown_component(self, tmp_path, hand_files, capsys):
        root, _ = hand_files
        out = tmp_path / "sweep"
        args = ["sweep", "--params", str(root / "params.txt"), "--component", "a99", "--out", str(out)]
        assert main(args) == EXIT_USAGE
        assert "a99" in capsys.readouterr().err
        assert not out.exists()

    def test_simulate_zero_steps_is_rejected(self, hand_files):
        root, config = hand_files
        params = str(root / "params.txt")
        assert main(["simulate", "--params", params, "--T", "0", "--out", str(root / "p")]) == EXIT_NUMERICAL
        assert main(["simulate", "--config", str(config), "--T", "0", "--out", str(root / "c")]) == EXIT_NUMERICAL
        assert not (root / "p" / "trajectory.csv").exists()
        assert not (root / "c" / "trajectory.csv").exists()

    def test_simulate_seed_zero_overrides_config(self, hand_files):
        root, config = hand_files
        assert main(["simulate", "--config", str(config), "--seed", "0", "--out", str(root / "a")]) == EXIT_OK
        assert main(["simulate", "--params", str(root / "params.txt"), "--T", "600", "--out", str(root / "b")]) == EXIT_OK
        assert (root / "a" / "trajectory.csv").read_bytes() == (root / "b" / "trajectory.csv").read_bytes()

    def test_analyze_config_uses_burn_in(self, tmp_path, hand_files, hand_params):
        root, config = hand_files
        config.write_text(config.read_text() + "burn_in=100\n", encoding="utf-8")
        out = tmp_path / "a"
        assert main(["analyze", "--config", str(config), "--out", str(out)]) == EXIT_OK
        report = dict(line.split("=", 1) for line in (out / "report.txt").read_text().splitlines())
        trajectory = simulate_trajectory(hand_params, T=600, seed=7)
        expected = ergodic_objective_estimate(vec_params(hand_params), trajectory, burn_in=100)
        assert report["ergodic_burn_in"] == "100"
        assert float(report["ergodic_objective_at_truth"]) == pytest.approx(expected, rel=1e-12)
        gap = abs(expected - float(report["objective_at_truth"]))
        assert float(report["ergodic_gap"]) == pytest.approx(gap, rel=1e-9, abs=1e-12)

    def test_analyze_config_burn_in_covers_run(self, tmp_path, hand_files):
        _, config = hand_files
        out = tmp_path / "a"
        # T=600 does not outlast the default burn_in of 1000
        assert main(["analyze", "--config", str(config), "--out", str(out)]) == EXIT_OK
        report = dict(line.split("=", 1) for line in (out / "report.txt").read_text().splitlines())
        assert report["ergodic_objective_at_truth"] == "skipped"
        assert "ergodic_gap" not in report

    def test_analyze_gradient_flag_uses_its_own_tolerance(self, tmp_path, hand_files, monkeypatch):
        root, _ = hand_files
        settings = get_settings()
        monkeypatch.setattr(cli, "get_settings", lambda: settings.model_copy(update={"OBJECTIVE_GRAD_TOL": 0.0}))
        out = tmp_path / "a"
        assert main(["analyze", "--params", str(root / "params.txt"), "--out", str(out)]) == EXIT_OK
        report = dict(line.split("=", 1) for line in (out / "report.txt").read_text().splitlines())
        assert report["objective_grad_ok"] == "false"
        assert report["lemma1_passed"] == "true"


def _run_benchmark(tmp_path, params_file, trials, T):
    config = tmp_path / "benchmark.cfg"
    config.write_text(
        f"params={params_file}\ntrials={trials}\nT={T}\nsnapshot_every=1000\nworkers=4\ntrack=a12,a33\n",
        encoding="utf-8",
    )
    out = tmp_path / "bench"
    assert main(["estimate", "--config", str(config), "--out", str(out)]) == EXIT_OK
    mse = {}
    for row in (out / "mse.csv").read_text().splitlines()[1:]:
        t, value, _ = row.split(",")
        mse[int(t)] = float(value)
    errors = {}
    for run_file in sorted(out.glob("run_*.csv")):
        for row in run_file.read_text().splitlines()[1:]:
            fields = row.split(",")
            errors.setdefault(int(fields[0]), []).append(float(fields[-1]))
    assert all(len(values) == trials for values in errors.values())
    return mse, errors


def _assert_error_trend(mse, errors, checkpoints):
    curve = [mse[t] for t in checkpoints]
    assert all(later < earlier for earlier, later in zip(curve, curve[1:])), curve
    assert np.median(errors[checkpoints[-1]]) < 0.5 * np.median(errors[checkpoints[0]])


def test_reduced_benchmark_error_trend(tmp_path, friedkin_raw_file):
    mse, errors = _run_benchmark(tmp_path, friedkin_raw_file, trials=20, T=100_000)
    _assert_error_trend(mse, errors, [1_000, 10_000, 100_000])


@pytest.mark.slow
def test_benchmark_error_trend(tmp_path, friedkin_raw_file):
    mse, errors = _run_benchmark(tmp_path, friedkin_raw_file, trials=100, T=200_000)
    _assert_error_trend(mse, errors, [1_000, 10_000, 100_000, 200_000])
