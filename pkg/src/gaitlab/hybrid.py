"""Generic hybrid-system machinery: fixed-step RK4 integration, guard-crossing
event location with arming, and an execute loop alternating flow and reset.

Vector fields have the signature ``f(t, x) -> dx/dt`` where ``t`` is the time
since the start of the current continuous phase.  Guards are scalar functions
of the state; an event fires on the first negative-to-positive crossing after
the guard has been armed (i.e. has been observed below ``-arming_threshold``).
Arming prevents immediate re-triggering when a phase starts exactly on the
switching surface, which is the normal situation right after a reset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

import numpy as np

from .errors import NoCrossing, NonFiniteState, NotArmed, StepFailed

VectorField = Callable[[float, np.ndarray], np.ndarray]
GuardFn = Callable[[np.ndarray], float]

# Bisection is run until the time bracket collapses to this relative width, so
# located events are accurate to roundoff, not merely to the guard tolerance.
_BRACKET_FLOOR = 1e-14
_MAX_BISECT = 200


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step integration and event-location settings."""

    step_size: float = 1e-3
    event_tolerance: float = 1e-10
    arming_threshold: float = 1e-6
    max_step_duration: float = 5.0

    def __post_init__(self):
        for name in ("step_size", "event_tolerance", "arming_threshold", "max_step_duration"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if not self.event_tolerance < self.arming_threshold:
            raise ValueError("event_tolerance must be smaller than arming_threshold")


@dataclass(frozen=True)
class GuardEvent:
    """A located guard crossing."""

    time_of_crossing: float
    state_at_crossing: np.ndarray
    guard_value_residual: float


@dataclass
class PhaseTrace:
    """Samples of one continuous phase; times are relative to the phase start."""

    times: np.ndarray
    states: np.ndarray


@dataclass
class EventRecord:
    time: float  # accumulated time since the start of the execution
    pre_impact: np.ndarray
    post_impact: np.ndarray


@dataclass
class HybridTrace:
    phases: list[PhaseTrace] = field(default_factory=list)
    events: list[EventRecord] = field(default_factory=list)
    failure: str | None = None
    failed_step: int | None = None

    @property
    def n_events(self) -> int:
        return len(self.events)


class HybridModel(Protocol):
    """What `run_hybrid` needs from a model."""

    def flow(self, t: float, state: np.ndarray) -> np.ndarray: ...

    def guard(self, state: np.ndarray) -> float: ...

    def reset(self, state: np.ndarray) -> np.ndarray: ...

    def validate(self, state: np.ndarray) -> None:
        """Optional hook; raise StepFailed to abort the current step."""


def rk4_step(f: VectorField, t: float, x: np.ndarray, h: float) -> np.ndarray:
    """One classical Runge-Kutta step of size h."""
    k1 = f(t, x)
    k2 = f(t + 0.5 * h, x + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, x + 0.5 * h * k2)
    k4 = f(t + h, x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _check_finite(x: np.ndarray) -> None:
    if not np.all(np.isfinite(x)):
        raise NonFiniteState("state contains NaN or infinity")


def integrate_fixed_step(
    vector_field: VectorField,
    state0: Sequence[float] | np.ndarray,
    duration: float,
    config: IntegratorConfig = IntegratorConfig(),
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate for `duration` seconds; the last partial step is shortened to
    land exactly on `duration`.  Returns (times, states) including t = 0.
    """
    if duration < 0.0:
        raise ValueError("duration must be non-negative")
    x = np.array(state0, dtype=float)
    _check_finite(x)
    times = [0.0]
    states = [x]
    t = 0.0
    while t < duration - 1e-15:
        h = min(config.step_size, duration - t)
        x = rk4_step(vector_field, t, x, h)
        _check_finite(x)
        t = t + h
        times.append(t)
        states.append(x)
    return np.array(times), np.array(states)


def _refine_crossing(
    vector_field: VectorField,
    guard_function: GuardFn,
    t_lo: float,
    s_lo: np.ndarray,
    t_hi: float,
    config: IntegratorConfig,
) -> GuardEvent:
    """Bisect the bracket [t_lo, t_hi] with g(lo) < 0 <= g(hi).

    Probe states are one RK4 step of size (t - t_lo) from the bracket-left
    sample, consistent with the sampling trajectory to O(h^5).
    """
    lo, hi = t_lo, t_hi
    state_hi = rk4_step(vector_field, lo, s_lo, hi - t_lo)
    g_hi = float(guard_function(state_hi))
    for _ in range(_MAX_BISECT):
        if hi - lo <= _BRACKET_FLOOR * max(1.0, abs(hi)) and abs(g_hi) <= config.event_tolerance:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        state_mid = rk4_step(vector_field, t_lo, s_lo, mid - t_lo)
        g_mid = float(guard_function(state_mid))
        if g_mid >= 0.0:
            hi, state_hi, g_hi = mid, state_mid, g_mid
        else:
            lo = mid
    if abs(g_hi) > config.event_tolerance:
        raise NoCrossing(f"guard refinement stalled at |g| = {abs(g_hi):.3e}")
    return GuardEvent(time_of_crossing=hi, state_at_crossing=state_hi, guard_value_residual=g_hi)


def _advance_to_crossing(
    vector_field: VectorField,
    guard_function: GuardFn,
    state0: np.ndarray,
    config: IntegratorConfig,
    validate: Callable[[np.ndarray], None] | None = None,
    collect: list[tuple[float, np.ndarray]] | None = None,
) -> GuardEvent:
    x = np.array(state0, dtype=float)
    _check_finite(x)
    t = 0.0
    g = float(guard_function(x))
    armed = g < -config.arming_threshold
    if collect is not None:
        collect.append((t, x))
    while t < config.max_step_duration - 1e-15:
        h = min(config.step_size, config.max_step_duration - t)
        x_next = rk4_step(vector_field, t, x, h)
        _check_finite(x_next)
        t_next = t + h
        g_next = float(guard_function(x_next))
        if armed and g <= 0.0 and g_next >= 0.0:
            return _refine_crossing(vector_field, guard_function, t, x, t_next, config)
        if validate is not None:
            validate(x_next)
        if g_next < -config.arming_threshold:
            armed = True
        x, t, g = x_next, t_next, g_next
        if collect is not None:
            collect.append((t, x))
    if not armed:
        raise NotArmed("guard never descended below the arming threshold")
    raise NoCrossing("no guard crossing within max_step_duration")


def locate_guard_crossing(
    vector_field: VectorField,
    guard_function: GuardFn,
    state0: Sequence[float] | np.ndarray,
    config: IntegratorConfig = IntegratorConfig(),
) -> GuardEvent:
    """Locate the first armed negative-to-positive guard crossing.

    The trajectory is sampled with fixed RK4 steps; the first sign change
    after arming is refined by bisection until both the guard residual is
    within ``event_tolerance`` and the time bracket is at roundoff width.
    """
    return _advance_to_crossing(vector_field, guard_function, np.asarray(state0, dtype=float), config)


def run_hybrid(
    model: HybridModel,
    initial_state: Sequence[float] | np.ndarray,
    n_steps: int,
    config: IntegratorConfig = IntegratorConfig(),
) -> HybridTrace:
    """Alternate guard location and reset exactly `n_steps` times.

    The first failure (missed crossing, fall, non-finite state) stops the
    execution and is recorded in the trace instead of being raised.
    """
    trace = HybridTrace()
    state = np.array(initial_state, dtype=float)
    validate = getattr(model, "validate", None)
    elapsed = 0.0
    if n_steps == 0:
        trace.phases.append(PhaseTrace(times=np.array([0.0]), states=np.array([state])))
        return trace
    for step_index in range(n_steps):
        samples: list[tuple[float, np.ndarray]] = []
        try:
            event = _advance_to_crossing(
                model.flow, model.guard, state, config, validate=validate, collect=samples
            )
            post = model.reset(event.state_at_crossing)
        except (NoCrossing, NotArmed, NonFiniteState, StepFailed) as err:
            times = np.array([t for t, _ in samples])
            states = np.array([s for _, s in samples])
            trace.phases.append(PhaseTrace(times=times, states=states))
            trace.failure = f"{type(err).__name__}: {err}"
            trace.failed_step = step_index
            return trace
        samples.append((event.time_of_crossing, event.state_at_crossing))
        trace.phases.append(
            PhaseTrace(
                times=np.array([t for t, _ in samples]),
                states=np.array([s for _, s in samples]),
            )
        )
        elapsed += event.time_of_crossing
        trace.events.append(
            EventRecord(time=elapsed, pre_impact=event.state_at_crossing, post_impact=post)
        )
        state = np.asarray(post, dtype=float)
    return trace
