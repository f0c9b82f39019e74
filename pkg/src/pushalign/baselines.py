"""Comparison strategies: spiral search and canned exploration trajectories.

The spiral baseline drags the *grasped* object along an Archimedean spiral
under constant press, watching for the moment the footprint drops fully
inside the pocket near the goal.  Because the object stays attached, pocket
walls do not merely stop it: the compliant mount winds up, and an object
hauled far enough past a fixture lip wedges against it, ending the trial by
force abort.  This is the failure mode that the released-object pushing
skill avoids by construction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Protocol

from .contact import MAX_SUBSTEP, MotionRegime, Scene
from .control import ControllerGains, GripperCompliance, Wrench
from .geometry import Pose
from .skill import SkillOutcome, TraceSample, _PressRig, inspect

Vec2 = tuple[float, float]


@dataclass(frozen=True)
class SpiralParams:
    """Archimedean search spiral plus the press force used while dragging."""

    max_radius: float = 10.0
    pitch: float = 1.0
    step_len: float = 0.1
    press_force: float = 5.0

    def __post_init__(self) -> None:
        if self.max_radius <= 0.0:
            raise ValueError("max_radius must be positive")
        if not 0.0 < self.pitch < self.max_radius:
            raise ValueError("pitch must lie in (0, max_radius)")
        if not 0.0 < self.step_len <= MAX_SUBSTEP:
            raise ValueError(f"step_len must lie in (0, {MAX_SUBSTEP}]")
        if self.press_force <= 0.0:
            raise ValueError("press_force must be positive")


def spiral_path(p: SpiralParams) -> list[Vec2]:
    """Waypoints of r = (pitch/2pi)*phi at roughly equal arc spacing.

    Starts at the center and stops at the first point past max_radius
    (exclusive), so the last kept waypoint sits within one step of the rim.
    """
    b = p.pitch / (2.0 * math.pi)
    pts: list[Vec2] = [(0.0, 0.0)]
    phi = 0.0
    while True:
        # ds = b*sqrt(1+phi^2) dphi; refine the step at the midpoint, then
        # cap the chord so no segment exceeds step_len.
        dphi = p.step_len / (b * math.sqrt(1.0 + phi * phi))
        for _ in range(2):
            mid = phi + 0.5 * dphi
            dphi = p.step_len / (b * math.sqrt(1.0 + mid * mid))
        px, py = pts[-1]
        while True:
            cand = phi + dphi
            r = b * cand
            x, y = r * math.cos(cand), r * math.sin(cand)
            chord = math.hypot(x - px, y - py)
            if chord <= p.step_len:
                break
            dphi *= (p.step_len / chord) * (1.0 - 1e-12)
        phi += dphi
        if r > p.max_radius:
            return pts
        pts.append((x, y))


class TrajectoryKind(enum.Enum):
    LINEAR = "linear"
    ZIGZAG = "zigzag"
    SPIRAL = "spiral"
    SINUS = "sinus"
    LISSAJOUS = "lissajous"


@dataclass(frozen=True)
class TrajectoryParams:
    """Shape parameters for the exploration trajectory families.

    Fields are interpreted per kind: `length` is the x extent for linear,
    zigzag and sinus; `amplitude` the transverse swing (or the Lissajous A
    and B); `periods` the cycle count; `freq_a`, `freq_b`, `phase` the
    Lissajous frequencies and phase offset.
    """

    length: float = 5.0
    amplitude: float = 3.0
    periods: int = 4
    freq_a: int = 3
    freq_b: int = 2
    phase: float = math.pi / 2.0
    step_len: float = 0.1

    def __post_init__(self) -> None:
        if self.length <= 0.0 or self.amplitude <= 0.0:
            raise ValueError("length and amplitude must be positive")
        if self.periods < 1 or self.freq_a < 1 or self.freq_b < 1:
            raise ValueError("periods and frequencies must be >= 1")
        if self.step_len <= 0.0:
            raise ValueError("step_len must be positive")


def _densify(corners: list[Vec2], step_len: float) -> list[Vec2]:
    """Interpolate a corner polyline so no step exceeds step_len."""
    out = [corners[0]]
    for (x0, y0), (x1, y1) in zip(corners, corners[1:]):
        seg = math.hypot(x1 - x0, y1 - y0)
        n = max(1, math.ceil(seg / step_len))
        for k in range(1, n + 1):
            t = k / n
            out.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0)))
    return out


def _resample(dense: list[Vec2], step_len: float) -> list[Vec2]:
    """Pick waypoints from a dense polyline at >= step_len arc spacing."""
    out = [dense[0]]
    acc = 0.0
    for i in range(1, len(dense)):
        x0, y0 = dense[i - 1]
        x1, y1 = dense[i]
        acc += math.hypot(x1 - x0, y1 - y0)
        if acc >= step_len:
            out.append((x1, y1))
            acc = 0.0
    if out[-1] != dense[-1]:
        out.append(dense[-1])
    return out


def generate_trajectory(kind: TrajectoryKind,
                        p: TrajectoryParams = TrajectoryParams()) -> list[Vec2]:
    """Planar waypoint list for one of the named exploration patterns."""
    if kind is TrajectoryKind.LINEAR:
        return [(0.0, 0.0), (p.length, 0.0)]
    if kind is TrajectoryKind.SPIRAL:
        # Reuse the search spiral with a pitch that fits the amplitude.
        sp = SpiralParams(max_radius=p.amplitude,
                          pitch=min(1.0, p.amplitude / 2.0),
                          step_len=min(p.step_len, MAX_SUBSTEP))
        return spiral_path(sp)
    dense: list[Vec2] = []
    if kind is TrajectoryKind.ZIGZAG:
        # One period = out to +A, back through to -A, return to 0.
        half = p.length / (2.0 * p.periods)
        x = 0.0
        corners: list[Vec2] = [(0.0, 0.0)]
        for _ in range(p.periods):
            corners.append((x + 0.5 * half, +p.amplitude))
            corners.append((x + 1.5 * half, -p.amplitude))
            corners.append((x + 2.0 * half, 0.0))
            x += 2.0 * half
        return _densify(corners, p.step_len)
    n = max(64, int(16 * p.length / p.step_len))
    if kind is TrajectoryKind.SINUS:
        w = 2.0 * math.pi * p.periods / p.length
        for i in range(n + 1):
            x = p.length * i / n
            dense.append((x, p.amplitude * math.sin(w * x)))
        return _resample(dense, p.step_len)
    if kind is TrajectoryKind.LISSAJOUS:
        for i in range(n + 1):
            t = 2.0 * math.pi * i / n
            dense.append((p.amplitude * math.sin(p.freq_a * t),
                          p.amplitude * math.sin(p.freq_b * t + p.phase)))
        return _resample(dense, p.step_len)
    raise ValueError(f"unknown trajectory kind: {kind}")


class SearchPolicy(Protocol):
    """Pluggable closed-loop search interface (state in, force command out).

    A learned policy would observe the latest wrench and emit the next
    in-plane force command; none ships here.
    """

    def next_command(self, observed: Wrench) -> Vec2: ...


def execute_spiral(scene: Scene, start_pose: Pose, params: SpiralParams,
                   gains: ControllerGains, compliance: GripperCompliance,
                   success_tol: float = 0.2, safety_bound: float = 50.0) -> SkillOutcome:
    """Drag the grasped object along the search spiral until it seats.

    The commanded frame follows the spiral around the nominal goal (which is
    where the object was placed, error included).  Walls clamp the object
    while the mount stretches by the commanded-minus-actual gap; a commanded
    frame hauled deeper than a fixture lip wedges the object (regime latches
    to STUCK) and the growing mount load trips the safety bound.
    """
    rig = _PressRig(scene, start_pose, gains, compliance)
    rig.run_force_phase(params.press_force, 60)
    gap = (0.0, 0.0)
    jammed = False
    waypoints = spiral_path(params)
    visited = 0
    success = False

    ok, _ = inspect(scene, rig.pose, success_tol)
    if ok:
        success = True
    else:
        for i in range(1, len(waypoints)):
            dx = waypoints[i][0] - waypoints[i - 1][0]
            dy = waypoints[i][1] - waypoints[i - 1][1]
            visited += 1
            if jammed:
                # Wedged on a lip: the object cannot follow at all, the
                # commanded frame keeps spiraling and the mount winds up.
                gap = (gap[0] + dx, gap[1] + dy)
                load = Wrench(fx=-compliance.stiffness * gap[0],
                              fy=-compliance.stiffness * gap[1],
                              fz=rig.press)
                rig.trace.append(TraceSample(rig.step, load, MotionRegime.STUCK))
                rig.peak_inplane = max(rig.peak_inplane, load.in_plane())
                rig.step += 1
                rig.gx += dx
                rig.gy += dy
                if load.in_plane() >= safety_bound:
                    break
                continue
            prev = rig.pose
            _, _, dz = rig.control_deltas(rig.gx + dx, rig.gy + dy, params.press_force)
            res = rig.advance(dx, dy, dz, grasped=True, drag_gap=gap)
            gap = (gap[0] + dx - (rig.pose.x - prev.x),
                   gap[1] + dy - (rig.pose.y - prev.y))
            if res.regime is MotionRegime.STUCK:
                jammed = True
                continue
            if rig.peak_inplane >= safety_bound:
                break
            ok, _ = inspect(scene, rig.pose, success_tol)
            if ok:
                success = True
                break

    rig.run_force_phase(0.0, 40)
    _, final_error = inspect(scene, rig.pose, success_tol)
    return SkillOutcome(
        success=success,
        final_error=final_error,
        actions_executed=visited,
        force_trace=tuple(rig.trace),
        final_pose=rig.pose,
    )
