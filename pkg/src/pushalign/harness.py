"""Benchmark orchestration: seeded error sampling, trials, campaigns, CSV.

Placement error for the uncertainty group is sampled from a counter-based
Philox generator keyed by the trial seed, so every trial owns a decorrelated
stream: trial i of one cell never perturbs trial j of another, and the same
seed always reproduces the same error vector.  Campaign cells share the
seed range, which deliberately gives both methods identical error sets for
paired comparison.

Report and trace CSVs print floats through repr(), i.e. shortest
round-trip decimal text, making outputs byte-identical across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .baselines import execute_spiral
from .contact import MotionRegime, make_press_balance
from .geometry import Pose
from .scenario import ScenarioBundle
from .skill import SkillOutcome, TraceSample, execute_skill

GROUPS = ("perfect", "uncertainty")
METHODS = ("push", "spiral")

# In-plane force level that separates contact from free phases in a trace,
# and how long a level change must hold to count as a phase boundary.
PHASE_FORCE_LEVEL = 0.1
PHASE_MIN_STEPS = 5


@dataclass(frozen=True)
class TrialConfig:
    """One benchmark trial: where the object lands and which method runs."""

    seed: int
    group: str
    method: str
    scene_id: str
    error: tuple[float, float]

    def __post_init__(self) -> None:
        if self.group not in GROUPS:
            raise ValueError(f"group must be one of {GROUPS}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")


@dataclass(frozen=True)
class TrialResult:
    config: TrialConfig
    success: bool
    final_error: float
    peak_force: float
    steps: int
    stuck: bool
    max_residual: float
    trace_path: str | None = None
    trace: tuple[TraceSample, ...] | None = None


@dataclass(frozen=True)
class CellStats:
    successes: int
    trials: int
    mean_final_error: float
    mean_peak_force: float


@dataclass(frozen=True)
class CampaignReport:
    cells: dict[tuple[str, str], CellStats]
    trials: tuple[TrialResult, ...]


def sample_error(seed: int, group: str) -> tuple[float, float]:
    """Placement error vector for a trial.

    Perfect group: exactly zero.  Uncertainty group: magnitude uniform in
    [2, 4] mm, direction uniform over the circle, drawn from a Philox
    stream keyed by the seed.
    """
    if group == "perfect":
        return (0.0, 0.0)
    if group != "uncertainty":
        raise ValueError(f"group must be one of {GROUPS}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    mag = rng.uniform(2.0, 4.0)
    ang = rng.uniform(0.0, 2.0 * math.pi)
    return (mag * math.cos(ang), mag * math.sin(ang))


def make_trial_config(seed: int, group: str, method: str, scene_id: str) -> TrialConfig:
    return TrialConfig(seed=seed, group=group, method=method, scene_id=scene_id,
                       error=sample_error(seed, group))


def _trace_stats(bundle: ScenarioBundle, outcome: SkillOutcome) -> tuple[float, bool, float]:
    """Peak in-plane force, stuck flag, and worst force-balance residual."""
    peak = 0.0
    max_residual = 0.0
    friction = bundle.scene.friction
    for s in outcome.force_trace:
        peak = max(peak, s.wrench.in_plane())
        moving = s.regime in (MotionRegime.STICK_ADVANCE,
                              MotionRegime.FREE_SLIDE_TO_CONTACT)
        bal = make_press_balance(friction, s.wrench.fz, moving=moving)
        max_residual = max(max_residual, abs(bal.residual_y()))
    stuck = not outcome.success and any(
        s.regime is MotionRegime.STUCK for s in outcome.force_trace)
    return peak, stuck, max_residual


def run_trial(config: TrialConfig, bundle: ScenarioBundle,
              keep_trace: bool = False) -> TrialResult:
    """Place the object with the configured error and run the method."""
    goal = bundle.scene.goal_pose
    start = Pose(goal.x + config.error[0], goal.y + config.error[1], goal.yaw)
    try:
        if config.method == "push":
            outcome = execute_skill(bundle.scene, start, bundle.skill,
                                    bundle.gains, bundle.compliance)
        else:
            outcome = execute_spiral(bundle.scene, start, bundle.spiral,
                                     bundle.gains, bundle.compliance,
                                     success_tol=bundle.skill.success_tol,
                                     safety_bound=bundle.skill.safety_bound)
    except Exception:
        return TrialResult(config=config, success=False, final_error=math.inf,
                           peak_force=0.0, steps=0, stuck=False, max_residual=0.0)
    peak, stuck, max_residual = _trace_stats(bundle, outcome)
    return TrialResult(
        config=config,
        success=outcome.success,
        final_error=outcome.final_error,
        peak_force=peak,
        steps=len(outcome.force_trace),
        stuck=stuck,
        max_residual=max_residual,
        trace=outcome.force_trace if keep_trace else None,
    )


def run_campaign(bundle: ScenarioBundle, methods, groups, trials_per_cell: int,
                 base_seed: int = 0, traces_dir: str | Path | None = None) -> CampaignReport:
    """Run every (method, group) cell with seeds base..base+N-1 each."""
    if trials_per_cell <= 0:
        raise ValueError("trials_per_cell must be positive")
    results: list[TrialResult] = []
    cells: dict[tuple[str, str], CellStats] = {}
    keep = traces_dir is not None
    if keep:
        Path(traces_dir).mkdir(parents=True, exist_ok=True)
    for method in methods:
        for group in groups:
            cell: list[TrialResult] = []
            for i in range(trials_per_cell):
                cfg = make_trial_config(base_seed + i, group, method, bundle.name)
                res = run_trial(cfg, bundle, keep_trace=keep)
                if keep:
                    p = Path(traces_dir) / f"trace_{method}_{group}_{cfg.seed}.csv"
                    export_trace(res, p)
                    res = replace(res, trace_path=str(p), trace=None)
                cell.append(res)
            ok = sum(1 for r in cell if r.success)
            finite = [r.final_error for r in cell if math.isfinite(r.final_error)]
            cells[(method, group)] = CellStats(
                successes=ok,
                trials=len(cell),
                mean_final_error=sum(finite) / len(finite) if finite else math.inf,
                mean_peak_force=sum(r.peak_force for r in cell) / len(cell),
            )
            results.extend(cell)
    return CampaignReport(cells=cells, trials=tuple(results))


# ---------------------------------------------------------------------------
# CSV output.
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


REPORT_COLUMNS = ("method", "group", "seed", "scene", "error_x", "error_y",
                  "success", "stuck", "final_error", "peak_force", "steps",
                  "max_residual")


def write_report(report: CampaignReport, path: str | Path) -> None:
    """Per-trial CSV table; deterministic bytes for identical campaigns."""
    lines = [",".join(REPORT_COLUMNS)]
    for r in report.trials:
        c = r.config
        lines.append(",".join(_fmt(v) for v in (
            c.method, c.group, c.seed, c.scene_id, c.error[0], c.error[1],
            r.success, r.stuck, r.final_error, r.peak_force, r.steps,
            r.max_residual)))
    Path(path).write_text("\n".join(lines) + "\n")


def format_summary(report: CampaignReport) -> str:
    lines = []
    for (method, group), s in report.cells.items():
        lines.append(
            f"{method:6s} {group:11s} {s.successes:4d}/{s.trials:<4d} "
            f"mean_final_error={s.mean_final_error:.4f} mm "
            f"mean_peak_force={s.mean_peak_force:.3f} N")
    return "\n".join(lines)


def phase_labels(samples: tuple[TraceSample, ...]) -> list[str]:
    """Segment a trace into free/contact phases by in-plane force level.

    A phase boundary is a level crossing of PHASE_FORCE_LEVEL that holds for
    at least PHASE_MIN_STEPS consecutive steps; shorter excursions merge
    into the surrounding phase.  The final phase is labeled `residual`
    (trailing contact decay after the motion program ends).
    """
    if not samples:
        return []
    above = [s.wrench.in_plane() >= PHASE_FORCE_LEVEL for s in samples]
    runs: list[list] = []  # [state, length]
    for a in above:
        if runs and runs[-1][0] == a:
            runs[-1][1] += 1
        else:
            runs.append([a, 1])
    merged: list[list] = [runs[0]]
    for state, length in runs[1:]:
        if length < PHASE_MIN_STEPS or state == merged[-1][0]:
            merged[-1][1] += length
        else:
            merged.append([state, length])
    labels: list[str] = []
    for idx, (state, length) in enumerate(merged):
        if idx == len(merged) - 1:
            name = "residual"
        else:
            name = f"{'contact' if state else 'free'}_{idx}"
        labels.extend([name] * length)
    return labels


TRACE_COLUMNS = ("step", "fx", "fy", "fz", "mx", "my", "mz", "regime",
                 "phase_label")


def export_trace(result: TrialResult, path: str | Path) -> None:
    """Write one trial's force trace with regime and phase columns."""
    samples = result.trace or ()
    labels = phase_labels(samples)
    lines = [",".join(TRACE_COLUMNS)]
    for s, label in zip(samples, labels):
        w = s.wrench
        lines.append(",".join(_fmt(v) for v in (
            s.step, w.fx, w.fy, w.fz, w.mx, w.my, w.mz,
            s.regime.value, label)))
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write trace to {path}: {exc}") from exc
