"""Wall-guided pushing skill for seating a released object in a pocket.

The sequence mirrors a fixed open-loop funnel: press the released object
against the holder, push it past the pocket walls along +x, -x, +x, then
+y, -y, +y, and let the fixtures strip off the placement error.  Push spans
are sized to at least twice the worst placement error so the sweeps always
reach a wall on both sides; the object ends flush against the last pushed
faces, inside the clearance band, regardless of where it started within
that budget.

The press force stays under closed-loop force control on z for the entire
sequence, including the re-centering move between the x and y sweeps.
Re-centering with the press applied drags the object, but the walls catch
it again inside the clearance band, so alignment survives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .contact import MotionRegime, Scene, resolve_step
from .control import (
    CommandFrame,
    ControllerGains,
    GripperCompliance,
    Wrench,
    hybrid_step,
    selection_pair,
)
from .geometry import Pose, pocket_containment_error

# Steps given to the z force loop before/after the pushing phases.  The loop
# contracts force error by 0.8 per step, so 60 steps settle to ~1e-6 N.
_SETTLE_STEPS = 60
_RELEASE_STEPS = 40
# An action is complete when the gripper is this close to its target, mm.
_TARGET_TOL = 1e-3


@dataclass(frozen=True)
class SkillParams:
    """Tunables of the pushing skill."""

    push_span_x: float = 8.0
    push_span_y: float = 8.0
    press_force: float = 5.0
    success_tol: float = 0.2
    safety_bound: float = 50.0

    def __post_init__(self) -> None:
        if self.push_span_x <= 0.0 or self.push_span_y <= 0.0:
            raise ValueError("push spans must be positive")
        if self.press_force <= 0.0:
            raise ValueError("press_force must be positive")
        if self.success_tol <= 0.0:
            raise ValueError("success_tol must be positive")
        if self.safety_bound <= 0.0:
            raise ValueError("safety_bound must be positive")


@dataclass(frozen=True)
class MotionCommand:
    """One linear pushing move under a commanded press force."""

    dx: float
    dy: float
    fz_cmd: float

    def __post_init__(self) -> None:
        if (self.dx != 0.0) == (self.dy != 0.0):
            raise ValueError("exactly one of dx, dy must be nonzero")


@dataclass(frozen=True)
class TraceSample:
    """One control step of recorded interaction force."""

    step: int
    wrench: Wrench
    regime: MotionRegime


@dataclass(frozen=True)
class SkillOutcome:
    """Result of one full skill (or baseline) execution."""

    success: bool
    final_error: float
    actions_executed: int
    force_trace: tuple[TraceSample, ...]
    final_pose: Pose


def build_actions(p: SkillParams) -> tuple[MotionCommand, ...]:
    """The six pushing moves: out-back-out on x, then the same on y.

    The pattern telescopes to zero net displacement, so the gripper finishes
    each sweep where it started it.
    """
    sx, sy, fz = p.push_span_x, p.push_span_y, p.press_force
    return (
        MotionCommand(+sx, 0.0, fz),
        MotionCommand(-2.0 * sx, 0.0, fz),
        MotionCommand(+sx, 0.0, fz),
        MotionCommand(0.0, +sy, fz),
        MotionCommand(0.0, -2.0 * sy, fz),
        MotionCommand(0.0, +sy, fz),
    )


def inspect(scene: Scene, object_pose: Pose, tol: float) -> tuple[bool, float]:
    """Post-execution check: seated in the pocket and close to the goal.

    The reported error is the worse of the position error and the pocket
    containment error; success additionally requires full containment.
    """
    gx, gy = scene.goal_pose.x, scene.goal_pose.y
    pos_err = math.hypot(object_pose.x - gx, object_pose.y - gy)
    cont_err = pocket_containment_error(scene.object_footprint, scene.pocket, object_pose)
    final_error = max(pos_err, cont_err)
    success = cont_err <= 1e-9 and final_error <= tol
    return success, final_error


class _PressRig:
    """Shared plumbing: a gripper under z force control above the holder.

    Tracks the gripper frame, the compliant z deflection, and the force
    trace.  The press force is the spring load of the current deflection;
    the z axis chases its force target by admittance while x and y follow
    position targets.
    """

    def __init__(self, scene: Scene, start_pose: Pose, gains: ControllerGains,
                 compliance: GripperCompliance) -> None:
        self.scene = scene
        self.pose = start_pose
        self.gx, self.gy = start_pose.x, start_pose.y
        self.gz = 0.0
        self.gains = gains
        self.compliance = compliance
        self.k_sel, _ = selection_pair({"z"})
        self.trace: list[TraceSample] = []
        self.step = 0
        self.peak_inplane = 0.0

    @property
    def press(self) -> float:
        return self.compliance.stiffness * max(0.0, -self.gz)

    def control_deltas(self, tx: float, ty: float, fz_cmd: float) -> tuple[float, float, float]:
        cmd = CommandFrame(target=(tx, ty, 0.0, 0.0, 0.0, 0.0),
                           wrench_cmd=Wrench(fz=fz_cmd))
        meas = Wrench(fz=self.press)
        d = hybrid_step(cmd, (self.gx, self.gy, self.gz, 0.0, 0.0, 0.0),
                        meas, self.k_sel, self.gains)
        return d[0], d[1], d[2]

    def advance(self, dx: float, dy: float, dz: float, grasped: bool = False,
                drag_gap: tuple[float, float] = (0.0, 0.0)):
        """Apply one control step: move the object, then the gripper frame."""
        res = resolve_step(self.scene, self.pose, (dx, dy), self.press,
                           grasped=grasped, drag_gap=drag_gap)
        self.pose = res.pose
        self.gx += dx
        self.gy += dy
        self.gz += dz
        self.trace.append(TraceSample(self.step, res.reaction, res.regime))
        self.peak_inplane = max(self.peak_inplane, res.reaction.in_plane())
        self.step += 1
        return res

    def run_force_phase(self, fz_cmd: float, steps: int) -> None:
        """Hold position, chase a z force target for a fixed step count."""
        for _ in range(steps):
            _, _, dz = self.control_deltas(self.gx, self.gy, fz_cmd)
            self.advance(0.0, 0.0, dz)

    def move_to(self, tx: float, ty: float, fz_cmd: float,
                max_steps: int) -> bool:
        """Drive the gripper to an in-plane target under continuous press.

        Returns False if the safety bound logic of the caller should not
        even be consulted because the target was not reached (never expected
        in practice; guards against non-termination).
        """
        for _ in range(max_steps):
            if math.hypot(tx - self.gx, ty - self.gy) <= _TARGET_TOL:
                return True
            dx, dy, dz = self.control_deltas(tx, ty, fz_cmd)
            self.advance(dx, dy, dz)
        return math.hypot(tx - self.gx, ty - self.gy) <= _TARGET_TOL


def execute_skill(scene: Scene, start_pose: Pose, params: SkillParams,
                  gains: ControllerGains, compliance: GripperCompliance) -> SkillOutcome:
    """Run the full pushing sequence on a released object.

    The gripper starts centered above the object.  Sequence: settle the
    press, three x pushes, re-center above the object (press still on),
    three y pushes, release, inspect.
    """
    rig = _PressRig(scene, start_pose, gains, compliance)
    actions = build_actions(params)
    executed = 0
    aborted = False

    rig.run_force_phase(params.press_force, _SETTLE_STEPS)
    for idx, act in enumerate(actions):
        if idx == 3:
            # Between the x and y sweeps, walk back over the object so the
            # cup cannot run off it after heavy slip.  The drag this causes
            # stays inside the clearance band: the walls catch the object.
            tx, ty = rig.pose.x, rig.pose.y
            steps = int(math.hypot(tx - rig.gx, ty - rig.gy) / gains.max_substep) + 60
            rig.move_to(tx, ty, params.press_force, steps)
        tx = rig.gx + act.dx
        ty = rig.gy + act.dy
        steps = int(math.hypot(act.dx, act.dy) / gains.max_substep) + 60
        reached = rig.move_to(tx, ty, act.fz_cmd, steps)
        executed += 1
        if not reached or rig.peak_inplane > params.safety_bound:
            aborted = True
            break

    rig.run_force_phase(0.0, _RELEASE_STEPS)
    success, final_error = inspect(scene, rig.pose, params.success_tol)
    if aborted:
        success = False
    return SkillOutcome(
        success=success,
        final_error=final_error,
        actions_executed=executed,
        force_trace=tuple(rig.trace),
        final_pose=rig.pose,
    )


def settle_press(press_target: float, gains: ControllerGains,
                 compliance: GripperCompliance, steps: int = 500) -> tuple[float, float]:
    """Closed-loop press against the compliant mount alone.

    Returns (deflection, measured force) after the loop runs; used to
    characterize the force loop against the known mount stiffness.
    """
    z = 0.0
    k_sel, _ = selection_pair({"z"})
    for _ in range(steps):
        press = compliance.stiffness * max(0.0, -z)
        cmd = CommandFrame(target=(0.0,) * 6, wrench_cmd=Wrench(fz=press_target))
        d = hybrid_step(cmd, (0.0, 0.0, z, 0.0, 0.0, 0.0),
                        Wrench(fz=press), k_sel, gains)
        z += d[2]
    return -z, compliance.stiffness * max(0.0, -z)
