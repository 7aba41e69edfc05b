"""3D linear inverted pendulum (LIP) with a discrete-invariant gait.

The point mass moves on the plane z = z0 with decoupled dynamics
xdd = w^2 x, ydd = w^2 y (w = sqrt(g/z0)), in a frame centered at the
support point with the mass on the +y side.  A step starts at position
(-x0, y0); the swing leg lands at (x0, y0) relative to the mass when the
hip crosses the circle x^2 + y^2 = x0^2 + y0^2, and the reset swaps the
support point and flips the sign of ydot (the lateral axis is re-oriented
toward the body at every support exchange).

The continuous flow is evaluated in closed form (hyperbolic functions),
so event location by bisection is exact to roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DegenerateY,
    InconsistentCoords,
    InfeasibleEnergy,
    NoCrossing,
    NotArmed,
    NotOnGuard,
)
from .hybrid import IntegratorConfig

_BRACKET_FLOOR = 1e-15


@dataclass(frozen=True)
class LipParams:
    """Pendulum constants and gait targets (mass m = 1)."""

    omega: float
    x0: float
    y0: float
    g: float = 9.81
    z0: float = 0.8

    def __post_init__(self):
        if not (self.x0 > 0.0 and self.y0 > 0.0):
            raise ValueError("gait targets x0, y0 must be positive")
        if not (self.g > 0.0 and self.z0 > 0.0):
            raise ValueError("g and z0 must be positive")
        if abs(self.omega**2 - self.g / self.z0) > 1e-12 * max(1.0, self.g / self.z0):
            raise ValueError("omega^2 must equal g / z0")

    @classmethod
    def from_geometry(cls, g: float = 9.81, z0: float = 0.8, x0: float = 0.15, y0: float = 0.2) -> "LipParams":
        return cls(omega=math.sqrt(g / z0), x0=x0, y0=y0, g=g, z0=z0)

    @property
    def r0_squared(self) -> float:
        return self.x0**2 + self.y0**2


def default_params() -> LipParams:
    """Desk-scale defaults: g = 9.81, z0 = 0.8 m, x0 = 0.15 m, y0 = 0.2 m."""
    return LipParams.from_geometry()


@dataclass(frozen=True)
class LipState:
    """Point-mass position and velocity in the support-centered frame."""

    x: float
    y: float
    xdot: float
    ydot: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.x, self.y, self.xdot, self.ydot))):
            raise ValueError("state must be finite")


@dataclass(frozen=True)
class SwitchCoords:
    """Chart (alpha, gamma, v) on the switching circle, with redundant r.

    alpha = atan(x / y) in [-pi/2, pi/2], gamma = xdot * ydot,
    v = speed, r = sqrt(x^2 + y^2).
    """

    alpha: float
    gamma: float
    v: float
    r: float


@dataclass(frozen=True)
class LipStepResult:
    duration: float
    pre_impact: LipState
    post_impact: LipState


def flow(state: LipState, params: LipParams, t: float) -> LipState:
    """Closed-form hyperbolic solution of the continuous phase at time t >= 0."""
    w = params.omega
    ch = math.cosh(w * t)
    sh = math.sinh(w * t)
    return LipState(
        x=state.x * ch + state.xdot / w * sh,
        y=state.y * ch + state.ydot / w * sh,
        xdot=state.x * w * sh + state.xdot * ch,
        ydot=state.y * w * sh + state.ydot * ch,
    )


def orbital_energies(state: LipState, params: LipParams) -> tuple[float, float]:
    """Per-axis conserved quantities Ex = xdot^2 - w^2 x^2 and Ey likewise."""
    w2 = params.omega**2
    return state.xdot**2 - w2 * state.x**2, state.ydot**2 - w2 * state.y**2


def kinetic_energy(state: LipState) -> float:
    return 0.5 * (state.xdot**2 + state.ydot**2)


def sync_measure(state: LipState, params: LipParams) -> float:
    """Synchronization measure L = xdot*ydot + w^2 x0 y0 of a step-start state.

    Zero exactly when the step is synchronized (ydot vanishes when x does).
    """
    return state.xdot * state.ydot + params.omega**2 * params.x0 * params.y0


def sync_invariant(state: LipState, params: LipParams) -> float:
    """xdot*ydot - w^2 x y, constant along the continuous flow."""
    return state.xdot * state.ydot - params.omega**2 * state.x * state.y


def reset(pre_impact: LipState, params: LipParams, tol: float = 1e-8) -> LipState:
    """Support exchange: new state (-x0, y0, xdot, -ydot).

    The pre-impact state must lie on the switching circle within `tol`
    (measured on x^2 + y^2 - r0^2).
    """
    residual = pre_impact.x**2 + pre_impact.y**2 - params.r0_squared
    if abs(residual) > tol:
        raise NotOnGuard(f"pre-impact state off the switching circle by {residual:.3e}")
    return LipState(x=-params.x0, y=params.y0, xdot=pre_impact.xdot, ydot=-pre_impact.ydot)


def _step_guard(state: LipState, params: LipParams) -> float:
    # Composite guard: the circle residual gated by forward progress (x > 0)
    # and lateral sanity (y > 0).  A pendulum that falls back (Ex <= 0) or
    # tips over the support line re-crosses the circle with x < 0 or y < 0;
    # those crossings are not steps and must time out as NoCrossing.
    return min(state.x**2 + state.y**2 - params.r0_squared, state.x, state.y)


def step(start_state: LipState, params: LipParams, config: IntegratorConfig = IntegratorConfig()) -> LipStepResult:
    """One hybrid step: flow from a step-start state to the first armed
    crossing of the switching circle, then apply the reset.

    Raises NoCrossing when the gait fails (the mass never reaches the
    circle moving forward on the +x, +y side).
    """
    g_prev = _step_guard(start_state, params)
    armed = g_prev < -config.arming_threshold
    t_prev = 0.0
    t = 0.0
    while t < config.max_step_duration - 1e-15:
        t = min(t + config.step_size, config.max_step_duration)
        g = _step_guard(flow(start_state, params, t), params)
        if armed and g_prev <= 0.0 and g >= 0.0:
            duration, pre = _bisect_step(start_state, params, t_prev, t, config)
            return LipStepResult(duration=duration, pre_impact=pre, post_impact=reset(pre, params))
        if g < -config.arming_threshold:
            armed = True
        t_prev, g_prev = t, g
    if not armed:
        raise NotArmed("step guard never descended below the arming threshold")
    raise NoCrossing("gait failure: no forward crossing of the switching circle")


def _bisect_step(
    start: LipState, params: LipParams, t_lo: float, t_hi: float, config: IntegratorConfig
) -> tuple[float, LipState]:
    lo, hi = t_lo, t_hi
    state_hi = flow(start, params, hi)
    g_hi = _step_guard(state_hi, params)
    for _ in range(200):
        if hi - lo <= _BRACKET_FLOOR * max(1.0, hi) and abs(g_hi) <= config.event_tolerance:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        state_mid = flow(start, params, mid)
        g_mid = _step_guard(state_mid, params)
        if g_mid >= 0.0:
            hi, state_hi, g_hi = mid, state_mid, g_mid
        else:
            lo = mid
    if abs(g_hi) > config.event_tolerance:
        raise NoCrossing(f"crossing refinement stalled at |g| = {abs(g_hi):.3e}")
    return hi, state_hi


def synchronized_start(params: LipParams, K0: float) -> LipState:
    """Step-start state of the synchronized orbit with kinetic energy K0.

    xdot0 = sqrt(K0 + sqrt(K0^2 - w^4 x0^2 y0^2)) and ydot0 = -w^2 x0 y0 / xdot0,
    which gives L = 0 and kinetic energy exactly K0.
    """
    w2 = params.omega**2
    gamma_star = w2 * params.x0 * params.y0
    disc = K0**2 - gamma_star**2
    if not K0 > gamma_star:
        raise InfeasibleEnergy(f"need K0 > w^2 x0 y0 = {gamma_star:.6g}, got {K0:.6g}")
    xdot0 = math.sqrt(K0 + math.sqrt(disc))
    ydot0 = -gamma_star / xdot0
    return LipState(x=-params.x0, y=params.y0, xdot=xdot0, ydot=ydot0)


def synchronized_step_duration(params: LipParams, K0: float) -> float:
    """Duration of a synchronized step: the time for x to run -x0 -> +x0.

    Closed form from the hyperbolic flow: with u = exp(w T),
    u = (x0 + xdot0/w) / (xdot0/w - x0).
    """
    start = synchronized_start(params, K0)
    a = start.xdot / params.omega
    if not a > params.x0:
        raise InfeasibleEnergy("forward orbital energy is not positive")
    u = (params.x0 + a) / (a - params.x0)
    return math.log(u) / params.omega


def to_switch_coords(state: LipState) -> SwitchCoords:
    """Forward chart; requires y != 0."""
    if abs(state.y) < 1e-9:
        raise DegenerateY("alpha = atan(x/y) undefined for y ~ 0")
    return SwitchCoords(
        alpha=math.atan(state.x / state.y),
        gamma=state.xdot * state.ydot,
        v=math.hypot(state.xdot, state.ydot),
        r=math.hypot(state.x, state.y),
    )


def from_switch_coords(coords: SwitchCoords, params: LipParams, ydot_sign: int = 1) -> LipState:
    """Inverse chart on the sagittal-dominant branch |xdot| >= |ydot|.

    `ydot_sign` selects the lateral-velocity branch: +1 for pre-impact
    states (ydot > 0 near the fixed point), -1 for step-start states.
    The sign of xdot then follows from gamma; for gamma = 0 the forward
    branch xdot >= 0 is taken.
    """
    if coords.v < 0.0:
        raise InconsistentCoords("speed v must be non-negative")
    disc = coords.v**4 - 4.0 * coords.gamma**2
    if disc < -1e-12 * max(coords.v**4, 1.0):
        raise InconsistentCoords(f"|gamma| = {abs(coords.gamma):.6g} exceeds v^2/2 = {coords.v**2 / 2:.6g}")
    s = math.sqrt(max(disc, 0.0))
    ydot_mag = math.sqrt(max((coords.v**2 - s) / 2.0, 0.0))
    ydot = ydot_sign * ydot_mag
    if ydot_mag > 0.0 and abs(coords.gamma) > 0.0:
        xdot = coords.gamma / ydot
    else:
        xdot = math.sqrt((coords.v**2 + s) / 2.0)
    return LipState(
        x=coords.r * math.sin(coords.alpha),
        y=coords.r * math.cos(coords.alpha),
        xdot=xdot,
        ydot=ydot,
    )
