import math
from pathlib import Path

import numpy as np
import pytest

from conftest import SCENARIO_PATH
from pushalign.cli import main
from pushalign.contact import MotionRegime
from pushalign.control import Wrench
from pushalign.harness import (
    PHASE_FORCE_LEVEL,
    REPORT_COLUMNS,
    TRACE_COLUMNS,
    TrialConfig,
    TrialResult,
    export_trace,
    make_trial_config,
    phase_labels,
    run_campaign,
    run_trial,
    sample_error,
    write_report,
)
from pushalign.skill import TraceSample


class TestSampleError:
    @pytest.mark.parametrize("seed", [0, 7, 123456789])
    def test_perfect_group_is_exactly_zero(self, seed):
        assert sample_error(seed, "perfect") == (0.0, 0.0)

    def test_uncertainty_magnitude_bounds(self):
        mag = math.hypot(*sample_error(42, "uncertainty"))
        assert 2.0 <= mag <= 4.0

    def test_same_seed_same_vector(self):
        assert sample_error(5, "uncertainty") == sample_error(5, "uncertainty")

    def test_distinct_seeds_decorrelate(self):
        vecs = {sample_error(s, "uncertainty") for s in range(50)}
        assert len(vecs) == 50

    def test_unknown_group_rejected(self):
        with pytest.raises(ValueError):
            sample_error(0, "chaotic")

    def test_magnitude_deciles_are_uniform(self):
        # 10k draws; each 0.2 mm decile of [2, 4] should hold 1000 +/- 3
        # binomial sigmas (sigma = sqrt(10000 * 0.1 * 0.9) ~ 30).
        mags = np.array([math.hypot(*sample_error(s, "uncertainty"))
                         for s in range(10_000)])
        counts, _ = np.histogram(mags, bins=np.linspace(2.0, 4.0, 11))
        assert counts.sum() == 10_000
        assert np.all(np.abs(counts - 1000) <= 90)

    def test_direction_covers_the_circle(self):
        angs = np.array([math.atan2(*reversed(sample_error(s, "uncertainty")))
                         for s in range(2_000)])
        # crude isotropy check: mean resultant vector stays short
        assert np.hypot(np.cos(angs).mean(), np.sin(angs).mean()) < 0.05


class TestTrialConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            TrialConfig(0, "weird", "push", "s", (0, 0))
        with pytest.raises(ValueError):
            TrialConfig(0, "perfect", "dance", "s", (0, 0))

    def test_factory_threads_the_error(self):
        cfg = make_trial_config(3, "uncertainty", "spiral", "holder_a")
        assert cfg.error == sample_error(3, "uncertainty")


class TestRunTrial:
    def test_perfect_push_succeeds(self, bundle):
        res = run_trial(make_trial_config(0, "perfect", "push", bundle.name), bundle)
        assert res.success
        assert res.final_error <= 0.2
        assert not res.stuck

    def test_uncertainty_push_succeeds(self, bundle):
        res = run_trial(make_trial_config(0, "uncertainty", "push", bundle.name), bundle)
        assert res.success

    def test_adversarial_spiral_seed_wedges(self, bundle):
        # Seed 3 aims 3.9 mm toward the right wall region; the dragged
        # object catches a lip and the trial ends stuck at the safety bound.
        res = run_trial(make_trial_config(3, "uncertainty", "spiral", bundle.name), bundle)
        assert not res.success
        assert res.stuck
        assert res.peak_force >= 50.0

    def test_simulation_exception_becomes_failed_trial(self, bundle, monkeypatch):
        import pushalign.harness as hz

        def boom(*a, **kw):
            raise RuntimeError("synthetic fault")

        monkeypatch.setattr(hz, "execute_skill", boom)
        res = run_trial(make_trial_config(0, "perfect", "push", bundle.name), bundle)
        assert not res.success
        assert math.isinf(res.final_error)

    def test_trace_kept_only_on_request(self, bundle):
        cfg = make_trial_config(1, "perfect", "push", bundle.name)
        assert run_trial(cfg, bundle).trace is None
        assert run_trial(cfg, bundle, keep_trace=True).trace


class TestRunCampaign:
    def test_report_counts_match_trials(self, bundle):
        rep = run_campaign(bundle, ["push"], ["perfect"], 3)
        stats = rep.cells[("push", "perfect")]
        assert stats.trials == 3
        assert stats.successes == sum(1 for t in rep.trials if t.success)

    def test_rejects_empty_campaign(self, bundle):
        with pytest.raises(ValueError):
            run_campaign(bundle, ["push"], ["perfect"], 0)

    def test_adding_a_method_does_not_move_existing_results(self, bundle):
        alone = run_campaign(bundle, ["push"], ["uncertainty"], 4)
        paired = run_campaign(bundle, ["push", "spiral"], ["uncertainty"], 4)
        key = lambda r: (r.config.seed, r.success, r.final_error, r.peak_force)
        mine = [key(r) for r in alone.trials]
        theirs = [key(r) for r in paired.trials if r.config.method == "push"]
        assert mine == theirs

    def test_write_report_is_reproducible(self, bundle, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_report(run_campaign(bundle, ["push"], ["uncertainty"], 3), a)
        write_report(run_campaign(bundle, ["push"], ["uncertainty"], 3), b)
        assert a.read_bytes() == b.read_bytes()

    def test_report_floats_round_trip(self, bundle, tmp_path):
        rep = run_campaign(bundle, ["push"], ["uncertainty"], 2)
        out = tmp_path / "r.csv"
        write_report(rep, out)
        lines = out.read_text().splitlines()
        assert lines[0] == ",".join(REPORT_COLUMNS)
        row = dict(zip(REPORT_COLUMNS, lines[1].split(",")))
        assert float(row["final_error"]) == rep.trials[0].final_error
        assert float(row["error_x"]) == rep.trials[0].config.error[0]
        assert row["success"] in ("true", "false")

    def test_traces_dir_collects_per_trial_files(self, bundle, tmp_path):
        traces = tmp_path / "traces"
        rep = run_campaign(bundle, ["push"], ["perfect"], 2, traces_dir=traces)
        for r in rep.trials:
            assert r.trace_path is not None
            assert Path(r.trace_path).exists()
            assert r.trace is None  # dropped after export


def _sample(step, fx, regime=MotionRegime.STICK_ADVANCE):
    return TraceSample(step, Wrench(fx=fx), regime)


class TestPhaseLabels:
    def test_empty_trace(self):
        assert phase_labels(()) == []

    def test_three_phase_anatomy(self):
        trace = tuple(
            [_sample(i, 0.0) for i in range(10)]
            + [_sample(10 + i, 1.5) for i in range(20)]
            + [_sample(30 + i, 0.0) for i in range(23)]
        )
        labels = phase_labels(trace)
        assert labels == ["free_0"] * 10 + ["contact_1"] * 20 + ["residual"] * 23

    def test_short_excursions_merge_into_surroundings(self):
        trace = tuple(
            [_sample(i, 0.0) for i in range(10)]
            + [_sample(10 + i, 1.5) for i in range(20)]
            + [_sample(30 + i, 0.0) for i in range(10)]
            + [_sample(40 + i, 1.5) for i in range(3)]   # blip, < 5 steps
            + [_sample(43 + i, 0.0) for i in range(10)]
        )
        labels = phase_labels(trace)
        assert labels == ["free_0"] * 10 + ["contact_1"] * 20 + ["residual"] * 23

    def test_threshold_is_the_documented_level(self):
        low = tuple(_sample(i, PHASE_FORCE_LEVEL * 0.99) for i in range(12))
        assert set(phase_labels(low)) == {"residual"}

    def test_real_push_trace_phases(self, bundle):
        res = run_trial(make_trial_config(0, "perfect", "push", bundle.name),
                        bundle, keep_trace=True)
        labels = phase_labels(res.trace)
        assert len(labels) == len(res.trace)
        assert labels[0] == "free_0"      # settle: press only, no pushing
        assert "contact_1" in labels      # the sweeps drag the object
        assert labels[-1] == "residual"


class TestExportTrace:
    def test_empty_trace_writes_header_only(self, tmp_path):
        out = tmp_path / "t.csv"
        cfg = TrialConfig(0, "perfect", "push", "s", (0.0, 0.0))
        export_trace(TrialResult(cfg, True, 0.0, 0.0, 0, False, 0.0), out)
        assert out.read_text() == ",".join(TRACE_COLUMNS) + "\n"

    def test_write_failure_reports_the_path(self, bundle, tmp_path):
        res = run_trial(make_trial_config(0, "perfect", "push", bundle.name),
                        bundle, keep_trace=True)
        with pytest.raises(OSError, match="cannot write trace"):
            export_trace(res, tmp_path)  # a directory, not a file

    def test_perfect_push_trace_content(self, bundle, tmp_path):
        res = run_trial(make_trial_config(0, "perfect", "push", bundle.name),
                        bundle, keep_trace=True)
        out = tmp_path / "trace.csv"
        export_trace(res, out)
        lines = out.read_text().splitlines()
        assert lines[0] == ",".join(TRACE_COLUMNS)
        rows = [dict(zip(TRACE_COLUMNS, ln.split(","))) for ln in lines[1:]]
        # z force converges to the 5 N press before release
        settled = [float(r["fz"]) for r in rows[55:60]]
        assert all(abs(v - 5.0) <= 0.05 for v in settled)
        # free phases really are quiet in plane
        for r in rows:
            if r["phase_label"].startswith("free"):
                assert math.hypot(float(r["fx"]), float(r["fy"])) < PHASE_FORCE_LEVEL

    def test_uncertainty_trace_respects_slip_cap(self, bundle, tmp_path):
        res = run_trial(make_trial_config(2, "uncertainty", "push", bundle.name),
                        bundle, keep_trace=True)
        out = tmp_path / "trace.csv"
        export_trace(res, out)
        rows = out.read_text().splitlines()[1:]
        peaks = [math.hypot(float(r.split(",")[1]), float(r.split(",")[2]))
                 for r in rows]
        assert max(peaks) <= 0.8 * 5.0 + 1e-9
        assert max(peaks) > PHASE_FORCE_LEVEL


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

SCN = str(SCENARIO_PATH)


class TestCli:
    def test_run_writes_report_and_figure(self, tmp_path, capsys):
        out = tmp_path / "report.csv"
        rc = main(["run", "--scenario", SCN, "--method", "push",
                   "--group", "perfect", "--trials", "2", "--seed", "0",
                   "--out", str(out)])
        assert rc == 0
        assert out.exists()
        fig = out.with_suffix(".png")
        assert fig.exists() and fig.stat().st_size > 0
        assert "2/2" in capsys.readouterr().out

    def test_run_reports_are_byte_identical(self, tmp_path):
        outs = []
        for name in ("a.csv", "b.csv"):
            p = tmp_path / name
            rc = main(["run", "--scenario", SCN, "--method", "push",
                       "--group", "uncertainty", "--trials", "3",
                       "--seed", "7", "--out", str(p), "--no-figures"])
            assert rc == 0
            outs.append(p.read_bytes())
        assert outs[0] == outs[1]

    def test_run_with_traces_dir(self, tmp_path):
        out = tmp_path / "report.csv"
        traces = tmp_path / "traces"
        rc = main(["run", "--scenario", SCN, "--method", "spiral",
                   "--group", "perfect", "--trials", "2", "--seed", "0",
                   "--out", str(out), "--traces", str(traces), "--no-figures"])
        assert rc == 0
        files = sorted(traces.glob("trace_*.csv"))
        assert len(files) == 2

    def test_run_failed_trials_still_exit_zero(self, tmp_path):
        # Seed 3 is a known spiral failure; a completed campaign is exit 0.
        rc = main(["run", "--scenario", SCN, "--method", "spiral",
                   "--group", "uncertainty", "--trials", "1", "--seed", "3",
                   "--out", str(tmp_path / "r.csv"), "--no-figures"])
        assert rc == 0

    def test_trace_subcommand(self, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        rc = main(["trace", "--scenario", SCN, "--method", "push",
                   "--group", "uncertainty", "--seed", "1", "--out", str(out)])
        assert rc == 0
        assert out.read_text().startswith(",".join(TRACE_COLUMNS))
        assert out.with_suffix(".png").exists()
        assert "success=true" in capsys.readouterr().out

    @pytest.mark.parametrize("kind", ["linear", "zigzag", "spiral", "sinus", "lissajous"])
    def test_paths_subcommand(self, tmp_path, kind):
        out = tmp_path / f"{kind}.csv"
        rc = main(["paths", "--kind", kind, "--out", str(out), "--no-figures"])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "x,y"
        assert len(lines) >= 3 if kind != "linear" else len(lines) == 3

    def test_paths_renders_a_figure(self, tmp_path):
        out = tmp_path / "p.csv"
        rc = main(["paths", "--kind", "lissajous", "--out", str(out)])
        assert rc == 0
        assert out.with_suffix(".png").stat().st_size > 0

    def test_missing_scenario_is_a_config_error(self, tmp_path, capsys):
        rc = main(["run", "--scenario", str(tmp_path / "nope.json"),
                   "--method", "push", "--group", "perfect",
                   "--out", str(tmp_path / "r.csv")])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_non_positive_trials_is_a_config_error(self, tmp_path, capsys):
        rc = main(["run", "--scenario", SCN, "--method", "push",
                   "--group", "perfect", "--trials", "0",
                   "--out", str(tmp_path / "r.csv")])
        assert rc == 1
        assert "--trials" in capsys.readouterr().err

    def test_unknown_method_is_rejected_by_argparse(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["run", "--scenario", SCN, "--method", "teleport",
                  "--group", "perfect", "--out", str(tmp_path / "r.csv")])

    def test_malformed_scenario_json(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        rc = main(["trace", "--scenario", str(bad), "--method", "push",
                   "--group", "perfect", "--out", str(tmp_path / "t.csv")])
        assert rc == 1
        assert "not valid JSON" in capsys.readouterr().err
