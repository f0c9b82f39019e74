"""Scenario files: JSON descriptions of a holder, object, and tuning set.

A scenario bundles everything one benchmark needs: the scene geometry, the
friction pair, gripper compliance, controller gains, skill parameters, and
spiral-search parameters.  The canonical `holder_a.json` describes a
50 x 30 mm object in a pocket with 0.1 mm clearance per side, bounded by
six fixture faces (two each on top and bottom, one left, one right).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .baselines import SpiralParams
from .contact import MAX_SUBSTEP, Fixture, FrictionParams, Scene
from .control import ControllerGains, GripperCompliance
from .geometry import Polygon, Pose, Segment
from .skill import SkillParams


class ScenarioError(Exception):
    """A scenario file is missing, malformed, or self-inconsistent."""


@dataclass(frozen=True)
class ScenarioBundle:
    """Everything loaded from one scenario file."""

    name: str
    scene: Scene
    gains: ControllerGains
    compliance: GripperCompliance
    skill: SkillParams
    spiral: SpiralParams


def _point(v) -> tuple[float, float]:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise ScenarioError(f"expected a 2-element point, got {v!r}")
    return float(v[0]), float(v[1])


def load_scenario(path: str | Path) -> ScenarioBundle:
    """Parse and validate a scenario JSON file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario {path} is not valid JSON: {exc}") from exc
    try:
        return _build(path.stem, raw)
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"scenario {path}: {exc}") from exc


def _build(name: str, raw: dict) -> ScenarioBundle:
    sc = raw["scene"]
    pocket = Polygon(tuple(_point(v) for v in sc["pocket"]))
    footprint = Polygon(tuple(_point(v) for v in sc["object"]))
    fixtures = []
    for f in sc["fixtures"]:
        seg = Segment(a=_point(f["a"]), b=_point(f["b"]),
                      outward_normal=_point(f["outward_normal"]))
        fixtures.append(Fixture(id=int(f["id"]), face=seg,
                                lip_height=float(f["lip_height_mm"])))
    gx, gy, gyaw = (float(v) for v in sc["goal_pose"])
    goal = Pose(gx, gy, gyaw)

    friction = FrictionParams(mu1=float(raw["friction"]["mu1"]),
                              mu2=float(raw["friction"]["mu2"]))
    grip = raw["gripper"]
    compliance = GripperCompliance(stiffness=float(grip["stiffness_n_per_mm"]),
                                   max_deflection=float(grip["max_deflection_mm"]))
    scene = Scene(pocket=pocket, fixtures=tuple(fixtures),
                  object_footprint=footprint, friction=friction,
                  press_stiffness=compliance.stiffness, goal_pose=goal)

    clearance = float(sc["clearance_mm"])
    actual = scene.goal_clearance()
    if abs(actual - clearance) > 1e-9:
        raise ScenarioError(
            f"declared clearance_mm={clearance} but the goal placement "
            f"has {actual:.6f} mm of clearance")

    ctl = raw["controller"]
    max_substep = float(ctl["max_substep_mm"])
    if not 0.0 < max_substep <= MAX_SUBSTEP:
        raise ScenarioError(f"max_substep_mm must lie in (0, {MAX_SUBSTEP}]")
    gains = ControllerGains(p_gain=float(ctl["p_gain"]),
                            admittance_gain=float(ctl["admittance_gain"]),
                            max_substep=max_substep)

    sk = raw["skill"]
    skill = SkillParams(push_span_x=float(sk["p_sigma_x_mm"]),
                        push_span_y=float(sk["p_sigma_y_mm"]),
                        press_force=float(sk["f_z_n"]),
                        success_tol=float(sk["success_tol_mm"]))

    sp = raw["spiral"]
    spiral = SpiralParams(max_radius=float(sp["max_radius_mm"]),
                          pitch=float(sp["pitch_mm"]),
                          step_len=float(sp["step_len_mm"]),
                          press_force=skill.press_force)

    return ScenarioBundle(name=name, scene=scene, gains=gains,
                          compliance=compliance, skill=skill, spiral=spiral)
