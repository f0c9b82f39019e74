"""Hybrid position/force control primitives.

Axis order everywhere is (x, y, z, rx, ry, rz).  A selection matrix picks
which axes run position control; its complement runs force control through a
first-order admittance law.  Units: mm, N, N*mm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

AXES = ("x", "y", "z", "rx", "ry", "rz")

Vec6 = tuple[float, float, float, float, float, float]

_ZERO6: Vec6 = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class Wrench:
    """6-axis force/torque sample (fx, fy, fz in N; mx, my, mz in N*mm)."""

    fx: float = 0.0
    fy: float = 0.0
    fz: float = 0.0
    mx: float = 0.0
    my: float = 0.0
    mz: float = 0.0

    def __post_init__(self) -> None:
        for v in self.as_tuple():
            if not math.isfinite(v):
                raise ValueError("wrench components must be finite")

    def as_tuple(self) -> Vec6:
        return (self.fx, self.fy, self.fz, self.mx, self.my, self.mz)

    def in_plane(self) -> float:
        """Magnitude of the (fx, fy) component."""
        return math.hypot(self.fx, self.fy)


ZERO_WRENCH = Wrench()


@dataclass(frozen=True)
class SelectionMatrix:
    """Diagonal 0/1 axis selector; 1 means the axis is position-controlled."""

    diag: tuple[int, int, int, int, int, int]

    def __post_init__(self) -> None:
        if len(self.diag) != 6 or any(v not in (0, 1) for v in self.diag):
            raise ValueError("selection diagonal must be six 0/1 entries")
        object.__setattr__(self, "diag", tuple(int(v) for v in self.diag))

    def complement(self) -> "SelectionMatrix":
        return SelectionMatrix(tuple(1 - v for v in self.diag))

    def __mul__(self, other: "SelectionMatrix") -> "SelectionMatrix":
        return SelectionMatrix(tuple(a * b for a, b in zip(self.diag, other.diag)))


IDENTITY = SelectionMatrix((1, 1, 1, 1, 1, 1))


def selection_pair(force_axes: str | list[str] | tuple[str, ...]) -> tuple[SelectionMatrix, SelectionMatrix]:
    """Build (K, K') from the names of the force-controlled axes.

    K has zeros on the force axes (position control suspended there) and K'
    is its complement, so K + K' is always the identity.
    """
    if isinstance(force_axes, str):
        force_axes = [force_axes]
    names = set(force_axes)
    unknown = names - set(AXES)
    if unknown:
        raise ValueError(f"unknown axes: {sorted(unknown)}")
    k = SelectionMatrix(tuple(0 if a in names else 1 for a in AXES))
    return k, k.complement()


@dataclass(frozen=True)
class GripperCompliance:
    """Linear elastic model of the suction-cup mount."""

    stiffness: float = 10.0       # N per mm of deflection
    max_deflection: float = 2.0   # mm, hard stop of the elastic range

    def __post_init__(self) -> None:
        if self.stiffness <= 0.0:
            raise ValueError("stiffness must be positive")
        if self.max_deflection <= 0.0:
            raise ValueError("max_deflection must be positive")


def gripper_deflection(wrench: Wrench, compliance: GripperCompliance) -> tuple[float, float, float]:
    """Translational mount deflection (mm) under a wrench, clamped per axis."""
    out = []
    for f in (wrench.fx, wrench.fy, wrench.fz):
        d = abs(f) / compliance.stiffness
        out.append(min(d, compliance.max_deflection))
    return (out[0], out[1], out[2])


@dataclass(frozen=True)
class ControllerGains:
    """Per-step gains of the hybrid loop."""

    p_gain: float = 0.5             # fraction of remaining position error per step
    admittance_gain: float = 0.02   # mm of motion per N of force error per step
    max_substep: float = 0.1        # mm, per-axis motion clamp per step

    def __post_init__(self) -> None:
        if not 0.0 < self.p_gain <= 1.0:
            raise ValueError("p_gain must be in (0, 1]")
        if self.admittance_gain <= 0.0:
            raise ValueError("admittance_gain must be positive")
        if self.max_substep <= 0.0:
            raise ValueError("max_substep must be positive")


@dataclass(frozen=True)
class CommandFrame:
    """Setpoints for one control step: target position plus command wrench."""

    target: Vec6 = _ZERO6
    wrench_cmd: Wrench = ZERO_WRENCH


def _clamp(v: float, lim: float) -> float:
    if v > lim:
        return lim
    if v < -lim:
        return -lim
    return v


def admittance_update(wrench_cmd: Wrench, wrench_meas: Wrench,
                      k_prime: SelectionMatrix, gain: float,
                      offsets: Vec6 = _ZERO6) -> Vec6:
    """Accumulate admittance offsets on the force-selected axes.

    Offsets on position-selected axes pass through unchanged; each force axis
    moves by gain * (commanded - measured) along that axis.
    """
    cmd = wrench_cmd.as_tuple()
    meas = wrench_meas.as_tuple()
    out = list(offsets)
    for i in range(6):
        if k_prime.diag[i]:
            out[i] = out[i] + gain * (cmd[i] - meas[i])
    return tuple(out)  # type: ignore[return-value]


def hybrid_step(cmd: CommandFrame, current: Vec6, wrench_meas: Wrench,
                selection: SelectionMatrix, gains: ControllerGains) -> Vec6:
    """One step of the hybrid law: per-axis motion deltas, clamped.

    Position axes approach their targets with a proportional law.  Force axes
    move by the admittance increment; the sign convention is that a positive
    measured force pushes the axis back toward negative motion, so a force
    deficit drives the axis negative (pressing further into the environment).
    """
    meas = wrench_meas.as_tuple()
    cmd_w = cmd.wrench_cmd.as_tuple()
    out = [0.0] * 6
    for i in range(6):
        if selection.diag[i]:
            out[i] = _clamp(gains.p_gain * (cmd.target[i] - current[i]), gains.max_substep)
        else:
            out[i] = _clamp(-gains.admittance_gain * (cmd_w[i] - meas[i]), gains.max_substep)
    return tuple(out)  # type: ignore[return-value]
