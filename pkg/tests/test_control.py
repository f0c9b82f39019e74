import itertools
import math

import numpy as np
import pytest

from pushalign.control import (
    AXES,
    CommandFrame,
    ControllerGains,
    GripperCompliance,
    SelectionMatrix,
    Wrench,
    admittance_update,
    gripper_deflection,
    hybrid_step,
    selection_pair,
)
from pushalign.skill import settle_press

GAINS = ControllerGains()


class TestWrench:
    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Wrench(fx=math.nan)

    def test_in_plane_magnitude(self):
        assert Wrench(fx=3.0, fy=4.0, fz=99.0).in_plane() == pytest.approx(5.0)

    def test_as_tuple_order(self):
        w = Wrench(1, 2, 3, 4, 5, 6)
        assert w.as_tuple() == (1, 2, 3, 4, 5, 6)


class TestSelection:
    def test_z_force_control(self):
        k, kp = selection_pair({"z"})
        assert k.diag == (1, 1, 0, 1, 1, 1)
        assert kp.diag == (0, 0, 1, 0, 0, 0)

    def test_pure_position(self):
        k, kp = selection_pair(set())
        assert k.diag == (1,) * 6
        assert kp.diag == (0,) * 6

    def test_pure_force(self):
        k, kp = selection_pair(set(AXES))
        assert k.diag == (0,) * 6
        assert kp.diag == (1,) * 6

    def test_unknown_axis_rejected(self):
        with pytest.raises(ValueError, match="unknown axes"):
            selection_pair({"w"})

    def test_complement_identity_all_subsets(self):
        # Every one of the 64 axis subsets: K + K' = I and K*K' = 0.
        for r in range(len(AXES) + 1):
            for combo in itertools.combinations(AXES, r):
                k, kp = selection_pair(set(combo))
                assert tuple(a + b for a, b in zip(k.diag, kp.diag)) == (1,) * 6
                assert (k * kp).diag == (0,) * 6

    def test_selection_matrix_validation(self):
        with pytest.raises(ValueError):
            SelectionMatrix((1, 0, 2, 0, 0, 0))
        with pytest.raises(ValueError):
            SelectionMatrix((1, 0, 1))


class TestAdmittance:
    def test_no_error_no_motion(self):
        _, kp = selection_pair({"z"})
        w = Wrench(fz=5.0)
        assert admittance_update(w, w, kp, 0.02) == (0.0,) * 6

    def test_z_error_moves_z_offset(self):
        _, kp = selection_pair({"z"})
        out = admittance_update(Wrench(fz=5.0), Wrench(), kp, 0.02)
        assert out[2] == pytest.approx(0.1)
        assert out[:2] == (0.0, 0.0) and out[3:] == (0.0, 0.0, 0.0)

    def test_masked_axis_ignores_error(self):
        _, kp = selection_pair({"z"})
        out = admittance_update(Wrench(fx=7.0), Wrench(), kp, 0.02)
        assert out[0] == 0.0

    def test_accumulates_onto_existing_offsets(self):
        _, kp = selection_pair({"z"})
        out = admittance_update(Wrench(fz=1.0), Wrench(), kp, 0.02,
                                offsets=(0, 0, 0.5, 0, 0, 0))
        assert out[2] == pytest.approx(0.52)


class TestHybridStep:
    def test_converged_state_is_still(self):
        k, _ = selection_pair({"z"})
        cmd = CommandFrame(target=(1.0, 2.0, 0, 0, 0, 0), wrench_cmd=Wrench(fz=5.0))
        out = hybrid_step(cmd, (1.0, 2.0, -0.5, 0, 0, 0), Wrench(fz=5.0), k, GAINS)
        assert out == (0.0,) * 6

    def test_position_error_moves_only_that_axis(self):
        k, _ = selection_pair({"z"})
        cmd = CommandFrame(target=(1.0, 0, 0, 0, 0, 0), wrench_cmd=Wrench(fz=5.0))
        out = hybrid_step(cmd, (0.0,) * 6, Wrench(fz=5.0), k, GAINS)
        # P-law asks for 0.5 * 1.0 mm; the substep clamp caps it at 0.1 mm.
        assert out[0] == pytest.approx(GAINS.max_substep)
        assert out[1:] == (0.0,) * 5

    def test_position_axes_ignore_wrench_command(self):
        k, _ = selection_pair({"z"})
        state = (0.2, -0.3, -0.1, 0, 0, 0)
        meas = Wrench(fz=2.0)
        a = hybrid_step(CommandFrame((1, 1, 0, 0, 0, 0), Wrench(fz=5.0)), state, meas, k, GAINS)
        b = hybrid_step(CommandFrame((1, 1, 0, 0, 0, 0), Wrench(fz=-3.0)), state, meas, k, GAINS)
        assert a[:2] == b[:2]

    def test_force_axis_ignores_position_target(self):
        k, _ = selection_pair({"z"})
        state = (0.0, 0.0, -0.1, 0, 0, 0)
        meas = Wrench(fz=2.0)
        a = hybrid_step(CommandFrame((0, 0, 9.0, 0, 0, 0), Wrench(fz=5.0)), state, meas, k, GAINS)
        b = hybrid_step(CommandFrame((0, 0, -9.0, 0, 0, 0), Wrench(fz=5.0)), state, meas, k, GAINS)
        assert a[2] == b[2]

    def test_press_fixed_point_against_stiff_surface(self):
        # Closed loop against the 10 N/mm mount: 5 N target -> 0.5 mm in.
        deflection, force = settle_press(5.0, GAINS, GripperCompliance())
        assert abs(force - 5.0) <= 0.05
        assert abs(deflection - 0.5) <= 0.005


class TestGripperCompliance:
    def test_ten_newtons_is_one_millimetre(self):
        d = gripper_deflection(Wrench(fz=10.0), GripperCompliance())
        assert d[2] == 1.0

    def test_zero_wrench_zero_deflection(self):
        assert gripper_deflection(Wrench(), GripperCompliance()) == (0.0, 0.0, 0.0)

    def test_clamped_at_max_deflection(self):
        d = gripper_deflection(Wrench(fx=25.0), GripperCompliance())
        assert d[0] == 2.0

    def test_validation(self):
        with pytest.raises(ValueError):
            GripperCompliance(stiffness=0.0)
        with pytest.raises(ValueError):
            GripperCompliance(max_deflection=-1.0)

    @pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 1.0, 1.9])
    def test_linear_below_the_clamp(self, alpha):
        base = Wrench(fx=2.0, fy=5.0, fz=10.0)
        scaled = Wrench(fx=alpha * 2.0, fy=alpha * 5.0, fz=alpha * 10.0)
        c = GripperCompliance()  # clamp at 2 mm = 20 N; alpha*10 stays below
        want = tuple(alpha * v for v in gripper_deflection(base, c))
        assert gripper_deflection(scaled, c) == pytest.approx(want)


class TestGains:
    def test_validation_bounds(self):
        with pytest.raises(ValueError):
            ControllerGains(p_gain=0.0)
        with pytest.raises(ValueError):
            ControllerGains(p_gain=1.5)
        with pytest.raises(ValueError):
            ControllerGains(admittance_gain=0.0)
        with pytest.raises(ValueError):
            ControllerGains(max_substep=0.0)


def test_substep_clamp_applies_per_axis():
    k, _ = selection_pair(set())
    cmd = CommandFrame(target=(5.0, -5.0, 5.0, 0, 0, 0))
    out = hybrid_step(cmd, (0.0,) * 6, Wrench(), k, GAINS)
    assert out[:3] == (0.1, -0.1, 0.1)


def test_admittance_sign_presses_into_force_deficit():
    # Measured force below command drives the axis negative (press deeper).
    k, _ = selection_pair({"z"})
    out = hybrid_step(CommandFrame(wrench_cmd=Wrench(fz=5.0)), (0.0,) * 6,
                      Wrench(fz=0.0), k, GAINS)
    assert out[2] == pytest.approx(-0.1)


@pytest.mark.parametrize("seed", range(5))
def test_admittance_converges_for_random_stiffness(seed):
    rng = np.random.Generator(np.random.Philox(key=seed))
    stiffness = float(rng.uniform(4.0, 40.0))
    target = float(rng.uniform(1.0, 8.0))
    deflection, force = settle_press(target, GAINS,
                                     GripperCompliance(stiffness=stiffness))
    assert abs(force - target) <= 0.01 * target
    assert deflection == pytest.approx(target / stiffness, rel=0.01)
