"""Return-map analysis for the LIP gait.

The section is the switching circle sampled just before impact, charted by
(alpha, gamma, v).  The full map P applies the reset, flows to the next
armed crossing and reads the chart there.  Key facts exercised here:

* fixed point (alpha*, gamma*, v*) = (atan(x0/y0), w^2 x0 y0, sqrt(2 K0));
* the alpha column of DP vanishes (massless legs) and the v column is
  (0, 0, 1);
* the gamma contraction equals -lambda with the closed form
  lambda = 1 - 2 w^2 (y0^2 - x0^2) / (w^2 (y0^2 - x0^2) + 2 sqrt(K0^2 - w^4 x0^2 y0^2)),
  so the synchronization measure obeys L_{n+1}/L_n -> -lambda and the gait
  self-synchronizes for y0 > x0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GaitFailure, InfeasibleEnergy
from .hybrid import IntegratorConfig
from .lip import (
    LipParams,
    LipState,
    SwitchCoords,
    from_switch_coords,
    reset,
    step,
    sync_measure,
    synchronized_start,
    to_switch_coords,
)
from .linalg import eigenvalues
from .numdiff import central_jacobian


def fixed_point_coords(params: LipParams, K0: float) -> SwitchCoords:
    """Section coordinates of the synchronized orbit at kinetic energy K0."""
    if not K0 > params.omega**2 * params.x0 * params.y0:
        raise InfeasibleEnergy("K0 must exceed w^2 x0 y0")
    return SwitchCoords(
        alpha=math.atan(params.x0 / params.y0),
        gamma=params.omega**2 * params.x0 * params.y0,
        v=math.sqrt(2.0 * K0),
        r=math.sqrt(params.r0_squared),
    )


def poincare_map(
    coords: SwitchCoords, params: LipParams, config: IntegratorConfig = IntegratorConfig()
) -> SwitchCoords:
    """Pre-impact coords -> pre-impact coords of the next step."""
    pre = from_switch_coords(coords, params, ydot_sign=1)
    start = reset(pre, params, tol=max(1e-6, abs(pre.x**2 + pre.y**2 - params.r0_squared) + 1e-12))
    result = step(start, params, config)
    return to_switch_coords(result.pre_impact)


def analytic_lambda(params: LipParams, K0: float) -> float:
    """Closed-form contraction factor of the synchronization measure."""
    w2 = params.omega**2
    gamma_star = w2 * params.x0 * params.y0
    if not K0 > gamma_star:
        raise InfeasibleEnergy(f"need K0 > w^2 x0 y0 = {gamma_star:.6g}")
    dy2 = params.y0**2 - params.x0**2
    lam = 1.0 - 2.0 * w2 * dy2 / (w2 * dy2 + 2.0 * math.sqrt(K0**2 - gamma_star**2))
    if params.y0 > params.x0:
        assert abs(lam) < 1.0, "self-synchronization bound violated"
    return lam


def _map_as_vector(params: LipParams, config: IntegratorConfig):
    r0 = math.sqrt(params.r0_squared)

    def f(vec: np.ndarray) -> np.ndarray:
        out = poincare_map(SwitchCoords(alpha=vec[0], gamma=vec[1], v=vec[2], r=r0), params, config)
        return np.array([out.alpha, out.gamma, out.v])

    return f


def poincare_jacobian(
    params: LipParams, K0: float, config: IntegratorConfig = IntegratorConfig(), h: float = 1e-6
) -> np.ndarray:
    """Central-difference Jacobian of P at the fixed point (3x3)."""
    fp = fixed_point_coords(params, K0)
    return central_jacobian(_map_as_vector(params, config), np.array([fp.alpha, fp.gamma, fp.v]), h)


def restricted_map_K0(
    alpha_gamma: tuple[float, float],
    params: LipParams,
    K0: float,
    config: IntegratorConfig = IntegratorConfig(),
) -> tuple[float, float]:
    """The return map restricted to the constant-energy slice v = sqrt(2 K0)."""
    r0 = math.sqrt(params.r0_squared)
    out = poincare_map(
        SwitchCoords(alpha=alpha_gamma[0], gamma=alpha_gamma[1], v=math.sqrt(2.0 * K0), r=r0),
        params,
        config,
    )
    return out.alpha, out.gamma


def restricted_jacobian(
    params: LipParams, K0: float, config: IntegratorConfig = IntegratorConfig(), h: float = 1e-6
) -> np.ndarray:
    fp = fixed_point_coords(params, K0)

    def f(vec: np.ndarray) -> np.ndarray:
        return np.array(restricted_map_K0((vec[0], vec[1]), params, K0, config))

    return central_jacobian(f, np.array([fp.alpha, fp.gamma]), h)


@dataclass
class ConvergenceRecord:
    n: int
    L: float
    alpha: float
    gamma: float
    v: float


def convergence_experiment(
    initial: SwitchCoords,
    params: LipParams,
    n_steps: int,
    config: IntegratorConfig = IntegratorConfig(),
) -> list[ConvergenceRecord]:
    """Iterate the return map, recording the synchronization measure of the
    step that starts at each section crossing.  A gait failure truncates
    the record.
    """
    records: list[ConvergenceRecord] = []
    coords = initial
    for n in range(n_steps + 1):
        start = reset(from_switch_coords(coords, params, ydot_sign=1), params, tol=1e-6)
        records.append(
            ConvergenceRecord(
                n=n, L=sync_measure(start, params), alpha=coords.alpha, gamma=coords.gamma, v=coords.v
            )
        )
        if n == n_steps:
            break
        try:
            coords = poincare_map(coords, params, config)
        except GaitFailure:
            break
    return records


def sync_ratios(records: list[ConvergenceRecord]) -> list[float]:
    """Successive ratios L_{n+1} / L_n (skipping near-zero denominators)."""
    out = []
    for a, b in zip(records, records[1:]):
        if abs(a.L) > 1e-300:
            out.append(b.L / a.L)
    return out


@dataclass
class LipPoincareReport:
    fixed_point: SwitchCoords
    jacobian: np.ndarray
    eigenvalues: np.ndarray
    analytic_lambda: float
    convergence_ratios: list[float] = field(default_factory=list)
    lambda_stable: bool = True

    def to_json_dict(self) -> dict:
        return {
            "fixed_point": {
                "alpha": self.fixed_point.alpha,
                "gamma": self.fixed_point.gamma,
                "v": self.fixed_point.v,
                "r": self.fixed_point.r,
            },
            "jacobian": [float(x) for x in np.asarray(self.jacobian).ravel()],
            "eigenvalues": [[float(ev.real), float(ev.imag)] for ev in np.asarray(self.eigenvalues)],
            "analytic_lambda": self.analytic_lambda,
            "lambda_stable": self.lambda_stable,
            "ratios": [float(r) for r in self.convergence_ratios],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def analyze(
    params: LipParams,
    K0: float,
    config: IntegratorConfig = IntegratorConfig(),
    n_steps: int = 12,
    perturbation_rel: float = 1e-3,
    h: float = 1e-6,
) -> LipPoincareReport:
    """Full section analysis: Jacobian and spectrum at the fixed point plus a
    self-synchronization convergence experiment from a small gamma offset
    (scaled relative to gamma* = w^2 x0 y0).
    """
    fp = fixed_point_coords(params, K0)
    jac = poincare_jacobian(params, K0, config, h)
    lam = analytic_lambda(params, K0)
    start = SwitchCoords(
        alpha=fp.alpha, gamma=fp.gamma * (1.0 - perturbation_rel), v=fp.v, r=fp.r
    )
    ratios = sync_ratios(convergence_experiment(start, params, n_steps, config))
    # sanity check retained in the report rather than raised: |lambda| >= 1
    # simply means the gait does not self-synchronize (y0 <= x0 studies).
    return LipPoincareReport(
        fixed_point=fp,
        jacobian=jac,
        eigenvalues=eigenvalues(jac),
        analytic_lambda=lam,
        convergence_ratios=ratios,
        lambda_stable=bool(abs(lam) < 1.0),
    )


def synchronized_start_for(params: LipParams, K0: float) -> LipState:
    """Re-export of the synchronized step-start state (convenience)."""
    return synchronized_start(params, K0)
