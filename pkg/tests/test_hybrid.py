"""Integrator, event location and hybrid-loop behavior."""

import math

import numpy as np
import pytest

from gaitlab.errors import NoCrossing, NonFiniteState, NotArmed
from gaitlab.hybrid import (
    IntegratorConfig,
    integrate_fixed_step,
    locate_guard_crossing,
    run_hybrid,
)
from gaitlab.lip import default_params, flow, reset, synchronized_start


def lip_field(params):
    w2 = params.omega**2

    def f(t, s):
        return np.array([s[2], s[3], w2 * s[0], w2 * s[1]])

    return f


def lip_circle_guard(params):
    r02 = params.r0_squared
    return lambda s: s[0] ** 2 + s[1] ** 2 - r02


def lip_step_guard(params):
    # Circle residual gated by forward progress, as used by the step map.
    r02 = params.r0_squared
    return lambda s: min(s[0] ** 2 + s[1] ** 2 - r02, s[0], s[1])


class LipHybridModel:
    def __init__(self, params):
        self.params = params
        self._f = lip_field(params)
        self._g = lip_step_guard(params)

    def flow(self, t, s):
        return self._f(t, s)

    def guard(self, s):
        return self._g(s)

    def reset(self, s):
        return np.array([-self.params.x0, self.params.y0, s[2], -s[3]])


def sync_start_array(params, K0=1.0):
    s = synchronized_start(params, K0)
    return np.array([s.x, s.y, s.xdot, s.ydot])


class TestIntegrateFixedStep:
    def test_constant_field_state_unchanged(self):
        times, states = integrate_fixed_step(lambda t, x: np.zeros(3), [1.0, -2.0, 0.5], 1.0)
        assert times[-1] == pytest.approx(1.0, abs=1e-15)
        np.testing.assert_allclose(states[-1], [1.0, -2.0, 0.5], atol=0.0)

    def test_exponential_growth_matches_e(self):
        cfg = IntegratorConfig(step_size=1e-3)
        _, states = integrate_fixed_step(lambda t, x: x, [1.0], 1.0, cfg)
        assert states[-1][0] == pytest.approx(math.e, abs=1e-6)

    def test_lip_field_matches_cosh(self):
        params = default_params()
        w = params.omega
        f = lip_field(params)
        _, states = integrate_fixed_step(f, [1.0 / w, 0.0, 0.0, 0.0], 1.0 / w, IntegratorConfig())
        # x(t) = x0 cosh(w t); with t = 1/w the value is x0 cosh(1)
        assert states[-1][0] == pytest.approx(math.cosh(1.0) / w, abs=1e-6)

    def test_partial_final_step_lands_on_duration(self):
        times, _ = integrate_fixed_step(lambda t, x: x, [1.0], 0.0015, IntegratorConfig())
        assert times[-1] == pytest.approx(0.0015, abs=1e-15)
        assert len(times) == 3

    def test_fourth_order_convergence(self):
        # halving the step must shrink the error by at least 14x (16 ideal)
        errors = []
        for h in (2e-2, 1e-2):
            _, states = integrate_fixed_step(lambda t, x: x, [1.0], 1.0, IntegratorConfig(step_size=h))
            errors.append(abs(states[-1][0] - math.e))
        assert errors[0] / errors[1] >= 14.0

    def test_nonfinite_state_raises(self):
        with pytest.raises(NonFiniteState):
            integrate_fixed_step(lambda t, x: x**3, [10.0], 5.0, IntegratorConfig(step_size=1e-2))

    def test_negative_duration_rejected(self):
        with pytest.raises(ValueError):
            integrate_fixed_step(lambda t, x: x, [1.0], -1.0)


class TestLocateGuardCrossing:
    def test_linear_motion_crossing(self):
        event = locate_guard_crossing(
            lambda t, x: np.array([1.0]), lambda s: s[0] - 1.0, [-1.0], IntegratorConfig()
        )
        assert event.time_of_crossing == pytest.approx(2.0, abs=1e-9)
        assert abs(event.guard_value_residual) <= 1e-10

    def test_lip_synchronized_orbit_circle_guard(self):
        params = default_params()
        event = locate_guard_crossing(
            lip_field(params), lip_circle_guard(params), sync_start_array(params), IntegratorConfig()
        )
        assert abs(event.guard_value_residual) <= 1e-10
        # crossing happens at (x0, y0) for the synchronized orbit
        assert event.state_at_crossing[0] == pytest.approx(params.x0, abs=1e-6)
        assert event.state_at_crossing[1] == pytest.approx(params.y0, abs=1e-6)

    def test_fallback_orbit_never_crosses(self):
        # Ex < 0: x turns around before the origin, so the forward-gated
        # guard stays negative and the search times out.
        params = default_params()
        start = np.array([-params.x0, params.y0, 0.05, -0.05])
        with pytest.raises(NoCrossing):
            locate_guard_crossing(lip_field(params), lip_step_guard(params), start, IntegratorConfig())

    def test_unarmed_guard_raises_not_armed(self):
        with pytest.raises(NotArmed):
            locate_guard_crossing(
                lambda t, x: np.array([1.0]),
                lambda s: s[0],
                [1.0],
                IntegratorConfig(max_step_duration=0.5),
            )

    def test_event_location_is_deterministic(self):
        params = default_params()
        args = (lip_field(params), lip_circle_guard(params), sync_start_array(params), IntegratorConfig())
        e1 = locate_guard_crossing(*args)
        e2 = locate_guard_crossing(*args)
        assert e1.time_of_crossing == e2.time_of_crossing
        assert np.array_equal(e1.state_at_crossing, e2.state_at_crossing)
        assert e1.guard_value_residual == e2.guard_value_residual

    def test_guard_was_armed_before_crossing(self):
        params = default_params()
        guard = lip_circle_guard(params)
        start = sync_start_array(params)
        cfg = IntegratorConfig()
        _, states = integrate_fixed_step(lip_field(params), start, 0.1, cfg)
        assert min(guard(s) for s in states) < -cfg.arming_threshold


class TestRunHybrid:
    def test_zero_steps_single_sample(self):
        params = default_params()
        trace = run_hybrid(LipHybridModel(params), sync_start_array(params), 0)
        assert trace.n_events == 0
        assert len(trace.phases) == 1
        assert trace.phases[0].states.shape[0] == 1

    def test_five_synchronized_steps_periodic(self):
        params = default_params()
        trace = run_hybrid(LipHybridModel(params), sync_start_array(params), 5)
        assert trace.failure is None
        assert trace.n_events == 5
        pre_states = np.array([ev.pre_impact for ev in trace.events])
        spread = np.max(np.abs(pre_states - pre_states[0]), axis=0)
        assert np.all(spread < 1e-6)

    def test_post_impact_equals_reset_of_pre(self):
        params = default_params()
        model = LipHybridModel(params)
        trace = run_hybrid(model, sync_start_array(params), 3)
        for ev in trace.events:
            np.testing.assert_array_equal(ev.post_impact, model.reset(ev.pre_impact))

    def test_event_times_strictly_increasing(self):
        params = default_params()
        trace = run_hybrid(LipHybridModel(params), sync_start_array(params), 4)
        times = [ev.time for ev in trace.events]
        assert all(b > a for a, b in zip(times, times[1:]))

    def test_low_energy_start_fails_on_first_step(self):
        params = default_params()
        start = np.array([-params.x0, params.y0, 0.05, -0.05])
        trace = run_hybrid(LipHybridModel(params), start, 3)
        assert trace.failure is not None and "NoCrossing" in trace.failure
        assert trace.failed_step == 0
        assert trace.n_events == 0


class TestIntegratorConfig:
    def test_rejects_nonpositive_fields(self):
        with pytest.raises(ValueError):
            IntegratorConfig(step_size=0.0)
        with pytest.raises(ValueError):
            IntegratorConfig(event_tolerance=-1.0)

    def test_rejects_tolerance_above_arming(self):
        with pytest.raises(ValueError):
            IntegratorConfig(event_tolerance=1e-5, arming_threshold=1e-6)
