"""PID stepping against a hand-unrolled recurrence and its contract edges."""
import math
from random import Random

import pytest

from cablebot.control import PidState, pid_step, reset, set_gains


def naive_pid(errors, kp, ki, kd, dt, out_min=-1.0, out_max=1.0):
    """Independent reference recurrence, written long-hand."""
    outputs = []
    integral = 0.0
    prev = None
    for e in errors:
        integral = integral + e * dt
        if ki > 0.0:
            lo, hi = out_min / ki, out_max / ki
            if integral < lo:
                integral = lo
            elif integral > hi:
                integral = hi
        deriv = 0.0 if prev is None else (e - prev) / dt
        u = kp * e + ki * integral + kd * deriv
        if u < out_min:
            u = out_min
        elif u > out_max:
            u = out_max
        outputs.append(u)
        prev = e
    return outputs


def run_sequence(pid, errors, dt):
    outs = []
    for e in errors:
        u, pid = pid_step(pid, e, 0.0, dt)  # measured 0 makes error == setpoint
        outs.append(u)
    return outs, pid


def test_constant_error_saturates_default_gains():
    # kp=30 with a 0.05 error pins the output at the +1 limit
    pid = PidState()
    outs, _ = run_sequence(pid, [0.05, 0.05, 0.05], dt=0.02)
    assert outs == [1.0, 1.0, 1.0]


def test_constant_error_raw_terms_with_wide_limits():
    pid = PidState(out_min=-100.0, out_max=100.0)
    outs, _ = run_sequence(pid, [0.05, 0.05, 0.05], dt=0.02)
    assert outs[0] == pytest.approx(30 * 0.05 + 1.0 * 0.05 * 0.02, rel=1e-12)  # 1.501
    assert outs[1] == pytest.approx(1.502, rel=1e-12)
    assert outs[2] == pytest.approx(1.503, rel=1e-12)


def test_first_step_derivative_exactly_zero():
    pid = PidState(kp=0.0, ki=0.0, kd=1000.0, out_min=-1e9, out_max=1e9)
    out, pid = pid_step(pid, 5.0, 0.0, dt=0.02)
    assert out == 0.0  # a large error jump produces no derivative kick
    out, _ = pid_step(pid, 5.0, 0.0, dt=0.02)
    assert out == 0.0  # constant error keeps derivative at zero


def test_matches_naive_recurrence_random_sequences():
    rng = Random(314)
    for _ in range(300):
        kp = rng.uniform(0.0, 40.0)
        ki = rng.choice([0.0, rng.uniform(0.01, 5.0)])
        kd = rng.uniform(0.0, 1.0)
        dt = rng.choice([0.005, 0.01, 0.02, 0.1])
        errors = [rng.uniform(-2.0, 2.0) for _ in range(40)]
        expected = naive_pid(errors, kp, ki, kd, dt)
        pid = PidState(kp=kp, ki=ki, kd=kd)
        got, _ = run_sequence(pid, errors, dt)
        for g, e in zip(got, expected):
            assert g == pytest.approx(e, rel=1e-12, abs=1e-15)


def test_output_always_within_limits():
    rng = Random(2718)
    pid = PidState(kp=50.0, ki=10.0, kd=5.0)
    for _ in range(2000):
        u, pid = pid_step(pid, rng.uniform(-10, 10), rng.uniform(-10, 10), dt=0.02)
        assert -1.0 <= u <= 1.0


def test_integral_clamped_during_saturation():
    pid = PidState(kp=1.0, ki=2.0, kd=0.0)
    for _ in range(5000):  # setpoint far above a stuck measurement
        _, pid = pid_step(pid, 1.0, 0.0, dt=0.02)
    assert pid.integral == pytest.approx(pid.out_max / pid.ki)
    # recovery: flip the error sign; output must unwind quickly because the
    # integral never grew beyond out_max/ki
    steps = 0
    u = 1.0
    while u >= 1.0 and steps < 200:
        u, pid = pid_step(pid, -1.0, 0.0, dt=0.02)
        steps += 1
    assert steps < 60


def test_linear_in_error_when_unsaturated():
    rng = Random(99)
    errors = [rng.uniform(-0.01, 0.01) for _ in range(50)]
    alpha = 3.7
    pid_a = PidState(kp=2.0, ki=1.0, kd=0.1, out_min=-1e9, out_max=1e9)
    pid_b = PidState(kp=2.0, ki=1.0, kd=0.1, out_min=-1e9, out_max=1e9)
    outs_a, _ = run_sequence(pid_a, errors, dt=0.02)
    outs_b, _ = run_sequence(pid_b, [alpha * e for e in errors], dt=0.02)
    for a, b in zip(outs_a, outs_b):
        assert b == pytest.approx(alpha * a, rel=1e-9, abs=1e-12)


def test_halving_dt_converges_first_order():
    # error sin(t): continuous output kp*sin + ki*(1-cos) + kd*cos
    kp, ki, kd = 2.0, 1.0, 0.5
    t_end = 1.0

    def final_output(dt):
        pid = PidState(kp=kp, ki=ki, kd=kd, out_min=-1e9, out_max=1e9)
        n = round(t_end / dt)
        u = 0.0
        for k in range(1, n + 1):
            u, pid = pid_step(pid, math.sin(k * dt), 0.0, dt)
        return u

    exact = kp * math.sin(t_end) + ki * (1 - math.cos(t_end)) + kd * math.cos(t_end)
    err_coarse = abs(final_output(0.01) - exact)
    err_fine = abs(final_output(0.005) - exact)
    assert err_fine < 0.75 * err_coarse


def test_fault_on_non_finite_measurement():
    pid = PidState()
    _, pid = pid_step(pid, 0.2, 0.1, dt=0.02)
    before = pid
    u, pid = pid_step(pid, 0.2, math.nan, dt=0.02)
    assert u == 0.0
    assert pid == before
    u, pid = pid_step(pid, math.inf, 0.1, dt=0.02)
    assert u == 0.0
    assert pid == before


def test_dt_contract():
    pid = PidState()
    with pytest.raises(ValueError):
        pid_step(pid, 0.2, 0.0, dt=0.0)
    with pytest.raises(ValueError):
        pid_step(pid, 0.2, 0.0, dt=-0.02)
    with pytest.raises(ValueError):
        pid_step(pid, 0.2, 0.0, dt=math.nan)


def test_set_gains_keeps_integral_and_reclamps():
    pid = PidState(kp=1.0, ki=1.0, kd=0.0)
    for _ in range(2000):
        _, pid = pid_step(pid, 1.0, 0.0, dt=0.02)
    assert pid.integral == pytest.approx(1.0)  # clamped at out_max/ki
    retuned = set_gains(pid, kp=2.0, ki=4.0, kd=0.1)
    assert retuned.kp == 2.0 and retuned.ki == 4.0 and retuned.kd == 0.1
    assert retuned.integral == pytest.approx(0.25)  # re-clamped to out_max/new_ki
    assert retuned.prev_error == pid.prev_error


def test_set_gains_rejects_bad_values():
    pid = PidState()
    for bad in ((-1.0, 1.0, 0.1), (30.0, math.nan, 0.1), (30.0, 1.0, -0.5)):
        with pytest.raises(ValueError):
            set_gains(pid, *bad)


def test_reset_clears_history_keeps_gains():
    pid = PidState(kp=7.0, ki=2.0, kd=0.3)
    _, pid = pid_step(pid, 1.0, 0.0, dt=0.02)
    cleared = reset(pid)
    assert cleared.kp == 7.0 and cleared.ki == 2.0 and cleared.kd == 0.3
    assert cleared.integral == 0.0
    assert not cleared.initialized


def test_state_validation():
    with pytest.raises(ValueError):
        PidState(kp=-1.0)
    with pytest.raises(ValueError):
        PidState(out_min=1.0, out_max=-1.0)
    with pytest.raises(ValueError):
        PidState(out_min=math.inf, out_max=math.inf)
