"""Quasi-static contact model for an object moved around a fixtured pocket.

The world is the holder plane seen from above.  Six fixture faces bound a
pocket; an object slides on the holder under a vertical press force.  Two
friction pairs drive everything: mu1 between the suction cup and the object,
mu2 between the object and the holder surface, with mu2 < mu1 so the cup can
always shove the object across the holder.

Face semantics capture the out-of-plane reality of a shallow pocket.  An
object whose footprint overlaps a face line is *riding* on that fixture's lip
(resting on top of it, slightly tilted); a ridden face imposes no in-plane
constraint until the footprint slides back off it.  Every other face is a
hard wall from the pocket side: the dipped edge of the object catches on it.
A released object simply stops there while the cup slips over it; a grasped
object builds elastic load in the compliant mount and jams once the commanded
pose has been dragged further than the fixture lip height past the wall.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .control import Wrench
from .geometry import (
    Polygon,
    Pose,
    Segment,
    ContactPatch,
    face_depth,
    penetration,
    pocket_containment_error,
    world_vertices,
)

Vec2 = tuple[float, float]

# Largest in-plane gripper motion the resolver accepts per call, mm.
MAX_SUBSTEP = 0.1
# Contact classification band: depths above -TOL_TOUCH count as touching.
TOL_TOUCH = 1e-6
# Load a fixture can react before yielding, N.  Far above any push force the
# cup can transmit, which is what makes wall-guided alignment safe.
FIXTURE_CAPACITY = 1000.0

_EPS = 1e-12


@dataclass(frozen=True)
class FrictionParams:
    """Friction pair: cup-object (mu1) and object-holder (mu2)."""

    mu1: float = 0.8
    mu2: float = 0.3

    def __post_init__(self) -> None:
        if not 0.0 < self.mu2 < self.mu1:
            raise ValueError("need 0 < mu2 < mu1 for pushable contact")


@dataclass(frozen=True)
class Fixture:
    """One pocket-bounding fixture: an id, its inner face, and its lip height."""

    id: int
    face: Segment
    lip_height: float = 4.0

    def __post_init__(self) -> None:
        if self.lip_height <= 0.0:
            raise ValueError("lip_height must be positive")


class MotionRegime(enum.Enum):
    """How the object responded to one resolver substep."""

    STICK_ADVANCE = "stick_advance"
    FREE_SLIDE_TO_CONTACT = "free_slide_to_contact"
    SLIP_ON_OBJECT = "slip_on_object"
    STUCK = "stuck"


@dataclass
class Scene:
    """Immutable world description: pocket, fixtures, object footprint."""

    pocket: Polygon
    fixtures: tuple[Fixture, ...]
    object_footprint: Polygon
    friction: FrictionParams
    press_stiffness: float
    goal_pose: Pose
    fixture_capacity: float = FIXTURE_CAPACITY

    def __post_init__(self) -> None:
        self.fixtures = tuple(self.fixtures)
        if len(self.fixtures) != 6:
            raise ValueError("scene requires exactly 6 fixtures")
        ids = sorted(f.id for f in self.fixtures)
        if ids != [1, 2, 3, 4, 5, 6]:
            raise ValueError("fixture ids must be 1..6, unique")
        if self.press_stiffness <= 0.0:
            raise ValueError("press_stiffness must be positive")
        cx = sum(x for x, _ in self.pocket.vertices) / len(self.pocket.vertices)
        cy = sum(y for _, y in self.pocket.vertices) / len(self.pocket.vertices)
        for f in self.fixtures:
            mx = 0.5 * (f.face.a[0] + f.face.b[0])
            my = 0.5 * (f.face.a[1] + f.face.b[1])
            nx, ny = f.face.outward_normal
            if (cx - mx) * nx + (cy - my) * ny <= 0.0:
                raise ValueError(f"fixture {f.id} face normal must point into the pocket")
        err = pocket_containment_error(self.object_footprint, self.pocket, self.goal_pose)
        if err > 0.0:
            raise ValueError("object at goal_pose must sit inside the pocket")
        if self.goal_clearance() <= 0.0:
            raise ValueError("goal placement needs positive clearance on all sides")

    def goal_clearance(self) -> float:
        """Smallest inset of the goal placement from the pocket boundary."""
        verts = world_vertices(self.object_footprint, self.goal_pose)
        pv = self.pocket.vertices
        n = len(pv)
        worst = math.inf
        for vx, vy in verts:
            for i in range(n):
                x0, y0 = pv[i]
                x1, y1 = pv[(i + 1) % n]
                ex, ey = x1 - x0, y1 - y0
                L = math.hypot(ex, ey)
                inset = ((ex) * (vy - y0) - (ey) * (vx - x0)) / L
                worst = min(worst, inset)
        return worst


@dataclass(frozen=True)
class ContactState:
    """Which fixtures the object touches, and a stable class id for the set."""

    contacts: tuple[tuple[int, ContactPatch], ...]
    class_id: int

    @property
    def free(self) -> bool:
        return not self.contacts

    @property
    def touching_ids(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.contacts)


def enumerate_contacts(scene: Scene, pose: Pose) -> ContactState:
    """Classify the object's contact set at a pose.

    A fixture counts as touching when the footprint reaches its face to
    within TOL_TOUCH.  The class id is a bitmask over fixture ids, so it is
    determined purely by the touching subset (0 means free).
    """
    hits = []
    mask = 0
    for f in sorted(scene.fixtures, key=lambda f: f.id):
        patch = penetration(scene.object_footprint, f.face, pose, touch_tol=TOL_TOUCH)
        if patch is not None:
            hits.append((f.id, patch))
            mask |= 1 << (f.id - 1)
    return ContactState(contacts=tuple(hits), class_id=mask)


# ---------------------------------------------------------------------------
# Cross-section force identities (press axis vs push axis, tilt angle theta).
# ---------------------------------------------------------------------------

def _check_theta(theta: float) -> None:
    if not -math.pi / 2 < theta < math.pi / 2:
        raise ValueError("tilt angle must lie in (-pi/2, pi/2)")


def force_balance_y(f_n1: float, f_n2: float, f2: float, theta: float) -> float:
    """Vertical reaction that closes the cross-section force balance.

    Sign convention: f_n1 and f_n2 are load magnitudes; the return value is
    the signed third normal such that
        f_n1*cos(theta) + f_n2*cos(theta) + f_n3 + f2*sin(theta) == 0
    holds exactly, i.e. it comes out negative for positive loads (a reaction).
    """
    if f_n1 < 0.0 or f_n2 < 0.0:
        raise ValueError("normal force magnitudes must be >= 0")
    _check_theta(theta)
    c = math.cos(theta)
    return -(f_n1 * c + f_n2 * c + f2 * math.sin(theta))


def drive_force(f_n1: float, theta: float, mu1: float) -> float:
    """In-plane force the cup can transmit to the object under press f_n1."""
    if f_n1 < 0.0:
        raise ValueError("press force must be >= 0")
    if mu1 <= 0.0:
        raise ValueError("mu1 must be positive")
    _check_theta(theta)
    return mu1 * f_n1 * math.cos(theta) + f_n1 * math.sin(theta)


def resist_force(f_n1: float, f2: float, theta: float, mu2: float) -> float:
    """Sliding resistance from the holder, signed against the push direction."""
    if f_n1 < 0.0:
        raise ValueError("press force must be >= 0")
    if mu2 <= 0.0:
        raise ValueError("mu2 must be positive")
    _check_theta(theta)
    return -(mu2 * f_n1 * math.cos(theta) + mu2 * f2 * math.sin(theta))


@dataclass(frozen=True)
class ForceBalance:
    """Snapshot of the cross-section force state for one quasi-static step.

    Normal forces are stored as magnitudes; f_n3 is the magnitude of the
    closing reaction returned by force_balance_y.  f_vo is the transmissible
    drive force, f_oh the (signed, <= 0) holder resistance.
    """

    f_n1: float
    f_n2: float = 0.0
    f_n3: float = 0.0
    f_n4: float = 0.0
    f_n5: float = 0.0
    f_n6: float = 0.0
    f1: float = 0.0
    f2: float = 0.0
    f3: float = 0.0
    f_vo: float = 0.0
    f_oh: float = 0.0
    theta: float = 0.0

    def residual_y(self) -> float:
        """Signed residual of the vertical balance; 0 for a consistent state."""
        c = math.cos(self.theta)
        return (self.f_n1 * c + self.f_n2 * c + (-self.f_n3)
                + self.f2 * math.sin(self.theta))

    def check(self, friction: FrictionParams, tol: float = 1e-9) -> None:
        """Raise if any stored component violates its cone or sign bound."""
        for name in ("f_n1", "f_n2", "f_n3", "f_n4", "f_n5", "f_n6"):
            if getattr(self, name) < -tol:
                raise ValueError(f"{name} must be a magnitude >= 0")
        if self.f1 > friction.mu1 * self.f_n1 + tol:
            raise ValueError("f1 exceeds the cup friction cone")
        if abs(self.residual_y()) > tol:
            raise ValueError("vertical balance residual out of tolerance")


def make_press_balance(friction: FrictionParams, press: float,
                       moving: bool = False, theta: float = 0.0) -> ForceBalance:
    """Force state of a pressed object on the flat holder floor."""
    f2 = friction.mu2 * press if moving else 0.0
    signed_n3 = force_balance_y(press, 0.0, f2, theta)
    return ForceBalance(
        f_n1=press,
        f_n2=0.0,
        f_n3=-signed_n3,
        f1=friction.mu1 * press if moving else 0.0,
        f2=f2,
        f_vo=drive_force(press, theta, friction.mu1),
        f_oh=resist_force(press, f2, theta, friction.mu2),
        theta=theta,
    )


def pushability(balance: ForceBalance, fixture_capacity: float = FIXTURE_CAPACITY) -> bool:
    """True when wall-guided pushing is safe and effective.

    The fixtures must dwarf the transmissible push (an order of magnitude of
    headroom) and the push must beat the holder's sliding resistance.
    """
    if fixture_capacity <= 0.0:
        raise ValueError("fixture_capacity must be positive")
    return fixture_capacity >= 10.0 * balance.f_vo and balance.f_vo > abs(balance.f_oh)


# ---------------------------------------------------------------------------
# Motion resolution.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResolveResult:
    """Outcome of one resolver substep."""

    pose: Pose
    regime: MotionRegime
    reaction: Wrench


def _slide_direction(dx: float, dy: float,
                     normals: list[Vec2]) -> Vec2:
    """Largest feasible motion after removing components into active faces."""
    cands = [(dx, dy)]
    for nx, ny in normals:
        dot = dx * nx + dy * ny
        cands.append((dx - dot * nx, dy - dot * ny))
    if len(normals) >= 2:
        for i, (n1x, n1y) in enumerate(normals):
            d1 = dx * n1x + dy * n1y
            t1x, t1y = dx - d1 * n1x, dy - d1 * n1y
            for j, (n2x, n2y) in enumerate(normals):
                if i == j:
                    continue
                d2 = t1x * n2x + t1y * n2y
                cands.append((t1x - d2 * n2x, t1y - d2 * n2y))
    best: Vec2 = (0.0, 0.0)
    best_mag = 0.0
    for vx, vy in cands:
        if all(vx * nx + vy * ny >= -1e-12 for nx, ny in normals):
            mag = vx * vx + vy * vy
            if mag > best_mag:
                best_mag = mag
                best = (vx, vy)
    return best


def _constrained_advance(base_verts: list[Vec2], faces: list[Fixture],
                         delta: Vec2) -> Vec2:
    """Advance the footprint by a gripper motion, respecting wall faces.

    Ridden faces (depth beyond TOL_TOUCH at evaluation time) are exempt; all
    other faces stop the normal component of motion at their line.  The
    motion is resolved as a sequence of straight segments between contact
    events, so the result is exact for translations up to float rounding.
    Returns the achieved object displacement.
    """
    ox, oy = 0.0, 0.0
    t = 0.0
    dx, dy = delta
    if dx * dx + dy * dy <= _EPS * _EPS:
        return (0.0, 0.0)
    for _ in range(24):
        if t >= 1.0 - 1e-12:
            break
        verts = [(x + ox, y + oy) for x, y in base_verts]
        states: list[tuple[Fixture, float]] = []
        for f in faces:
            hit = face_depth(verts, f.face)
            if hit is not None:
                states.append((f, hit[0]))
        # Active contacts: touching, not ridden.
        normals = [f.face.outward_normal for f, d in states
                   if -TOL_TOUCH <= d <= TOL_TOUCH]
        vx, vy = _slide_direction(dx, dy, normals)
        if vx * vx + vy * vy <= _EPS * _EPS:
            break
        # Earliest new contact along (vx, vy) among separated faces.
        t_hit = 1.0 - t
        for f, d in states:
            if d >= -TOL_TOUCH:
                continue
            approach = -(vx * f.face.outward_normal[0] + vy * f.face.outward_normal[1])
            if approach <= 1e-15:
                continue
            t_f = -d / approach
            if t_f < t_hit:
                t_hit = max(t_f, 0.0)
        ox += vx * t_hit
        oy += vy * t_hit
        t += t_hit
    return (ox, oy)


def _unit(vx: float, vy: float) -> Vec2:
    mag = math.hypot(vx, vy)
    if mag <= _EPS:
        return (0.0, 0.0)
    return (vx / mag, vy / mag)


def resolve_step(scene: Scene, pose: Pose, gripper_delta: Vec2, press_force: float,
                 grasped: bool = False, drag_gap: Vec2 = (0.0, 0.0)) -> ResolveResult:
    """Resolve one gripper substep against the scene.

    Released mode: the object sticks to the cup motion until a wall face
    stops it; blocked components turn into cup slip at the mu1 friction cap.

    Grasped mode: the object is attached and follows the commanded frame,
    which lags behind by drag_gap (commanded minus actual, accumulated by the
    caller).  Walls clamp the object while the mount stretches; once the
    commanded frame has been dragged past a wall by more than that fixture's
    lip height the object jams and the regime latches to STUCK.

    The caller must substep: |gripper_delta| above MAX_SUBSTEP is rejected.
    """
    dx, dy = gripper_delta
    if math.hypot(dx, dy) > MAX_SUBSTEP * (1.0 + 1e-9):
        raise ValueError(f"gripper_delta exceeds max substep {MAX_SUBSTEP} mm; substep the motion")
    if press_force < 0.0:
        raise ValueError("press_force must be >= 0")
    mu1 = scene.friction.mu1
    mu2 = scene.friction.mu2
    faces = list(scene.fixtures)
    base_verts = world_vertices(scene.object_footprint, pose)

    if not grasped:
        if press_force <= 0.0:
            # Nothing pins the object; the cup just travels over it.
            return ResolveResult(pose, MotionRegime.SLIP_ON_OBJECT, Wrench())
        ax, ay = _constrained_advance(base_verts, faces, (dx, dy))
        new_pose = pose.translated(ax, ay)
        moved = math.hypot(ax, ay)
        slip_x, slip_y = dx - ax, dy - ay
        slip = math.hypot(slip_x, slip_y)
        if slip <= 1e-9:
            regime = MotionRegime.STICK_ADVANCE
            ux, uy = _unit(ax, ay)
            f = mu2 * press_force if moved > 1e-9 else 0.0
            reaction = Wrench(fx=-f * ux, fy=-f * uy, fz=press_force)
        elif moved <= 1e-9:
            regime = MotionRegime.SLIP_ON_OBJECT
            ux, uy = _unit(slip_x, slip_y)
            f = mu1 * press_force
            reaction = Wrench(fx=-f * ux, fy=-f * uy, fz=press_force)
        else:
            regime = MotionRegime.FREE_SLIDE_TO_CONTACT
            ux, uy = _unit(slip_x, slip_y)
            f = mu1 * press_force
            reaction = Wrench(fx=-f * ux, fy=-f * uy, fz=press_force)
        return ResolveResult(new_pose, regime, reaction)

    # Grasped: chase the commanded frame (current gap plus this increment).
    gx, gy = drag_gap
    tx, ty = gx + dx, gy + dy
    ax, ay = _constrained_advance(base_verts, faces, (tx, ty))
    new_pose = pose.translated(ax, ay)
    ngx, ngy = tx - ax, ty - ay
    # Jam check: commanded frame dragged past a wall deeper than its lip.
    stuck = False
    verts = [(x + ax, y + ay) for x, y in base_verts]
    for f in faces:
        hit = face_depth(verts, f.face)
        if hit is None:
            continue
        d_act = hit[0]
        if d_act > TOL_TOUCH:
            continue  # riding on this fixture, not caught by it
        nx, ny = f.face.outward_normal
        d_cmd = d_act - (ngx * nx + ngy * ny)
        if d_cmd > f.lip_height:
            stuck = True
            break
    k = scene.press_stiffness
    fx = -k * ngx
    fy = -k * ngy
    moved = math.hypot(ax, ay)
    if moved > 1e-9:
        ux, uy = _unit(ax, ay)
        fx -= mu2 * press_force * ux
        fy -= mu2 * press_force * uy
    reaction = Wrench(fx=fx, fy=fy, fz=press_force)
    if stuck:
        regime = MotionRegime.STUCK
    elif math.hypot(ngx, ngy) <= 1e-9:
        regime = MotionRegime.STICK_ADVANCE
    elif moved > 1e-9:
        regime = MotionRegime.FREE_SLIDE_TO_CONTACT
    else:
        regime = MotionRegime.SLIP_ON_OBJECT
    return ResolveResult(new_pose, regime, reaction)
