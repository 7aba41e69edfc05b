"""Parameters, gait targets and state container for the 9-DOF biped.

Generalized coordinates q = (theta_y, theta_r, theta_p, q1..q6): torso
yaw/roll/pitch plus, per leg, hip pitch, hip roll and knee flexion
(stance leg first).  The model always describes the stance leg on the -y
side of the hip in a frame whose lateral axis points from the support
foot toward the body; the frame's handedness conceptually flips at every
support exchange (tracked by `stance_leg`), which makes a two-step gait
one-periodic in these coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# indices into q
IDX_YAW, IDX_ROLL, IDX_PITCH = 0, 1, 2
IDX_Q1, IDX_Q2, IDX_Q3 = 3, 4, 5  # stance hip pitch, hip roll, knee
IDX_Q4, IDX_Q5, IDX_Q6 = 6, 7, 8  # swing hip pitch, hip roll, knee


@dataclass(frozen=True)
class BipedParams:
    """Geometry and mass model (implementation defaults, config-overridable)."""

    L1: float = 0.4  # shin length [m]
    L2: float = 0.4  # thigh length [m]
    L3: float = 0.5  # torso length [m]
    W: float = 0.2  # hip width [m]
    m_torso: float = 20.0  # [kg]
    torso_com_height: float = 0.25  # above the hip center, along the torso [m]
    torso_inertia: tuple[float, float, float] = (1.0, 0.8, 0.5)  # [kg m^2]
    m_thigh: float = 2.0  # point mass at the thigh midpoint [kg]
    m_shin: float = 1.0  # point mass at the shin midpoint [kg]
    g: float = 9.81
    knee_limits: tuple[float, float] = (0.0, math.pi)
    min_hip_height: float = 0.3  # fall detection [m]

    def __post_init__(self):
        for name in ("L1", "L2", "L3", "W", "m_torso", "m_thigh", "m_shin", "g"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if not all(i > 0.0 for i in self.torso_inertia):
            raise ValueError("torso inertia components must be positive")


@dataclass(frozen=True)
class GaitSpec:
    """Impact-event gait targets (theta_p_d, x0, y0, q_k_d) plus derived geometry.

    r1 is the hip-to-foot distance at knee angle q_k_d, z0 the hip height at
    impact and r0 the horizontal hip offset: r1^2 = L1^2 + L2^2 + W^2/4 +
    2 L1 L2 cos(q_k_d), z0 = sqrt(r1^2 - x0^2 - y0^2), r0 = sqrt(x0^2 + y0^2).
    """

    theta_p_d: float
    x0: float
    y0: float
    q_k_d: float
    r0: float
    r1: float
    z0: float

    @classmethod
    def from_targets(
        cls,
        params: BipedParams,
        theta_p_d: float = 0.05,
        x0: float = 0.15,
        y0: float = 0.2,
        q_k_d: float = 0.3,
    ) -> "GaitSpec":
        if not (x0 > 0.0 and y0 > 0.0 and q_k_d > 0.0 and theta_p_d > 0.0):
            raise ValueError("gait targets must be strictly positive")
        r1_sq = params.L1**2 + params.L2**2 + params.W**2 / 4.0 + 2.0 * params.L1 * params.L2 * math.cos(q_k_d)
        z0_sq = r1_sq - x0**2 - y0**2
        if not z0_sq > 0.0:
            raise ValueError("infeasible gait: r1^2 must exceed x0^2 + y0^2")
        return cls(
            theta_p_d=theta_p_d,
            x0=x0,
            y0=y0,
            q_k_d=q_k_d,
            r0=math.hypot(x0, y0),
            r1=math.sqrt(r1_sq),
            z0=math.sqrt(z0_sq),
        )

    def matched_omega(self, params: BipedParams) -> float:
        """Pendulum frequency of the height-matched LIP, sqrt(g / z0)."""
        return math.sqrt(params.g / self.z0)


def default_gait(params: BipedParams | None = None) -> GaitSpec:
    return GaitSpec.from_targets(params or BipedParams())


@dataclass
class BipedState:
    """Configuration, velocity and which physical leg is the stance leg."""

    q: np.ndarray
    qdot: np.ndarray
    stance_leg: str = "right"

    def __post_init__(self):
        self.q = np.array(self.q, dtype=float)
        self.qdot = np.array(self.qdot, dtype=float)
        if self.q.shape != (9,) or self.qdot.shape != (9,):
            raise ValueError("q and qdot must be 9-vectors")
        if not (np.all(np.isfinite(self.q)) and np.all(np.isfinite(self.qdot))):
            raise ValueError("state must be finite")
        if self.stance_leg not in ("right", "left"):
            raise ValueError("stance_leg must be 'right' or 'left'")

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.q, self.qdot])

    @classmethod
    def from_array(cls, x: np.ndarray, stance_leg: str = "right") -> "BipedState":
        x = np.asarray(x, dtype=float)
        return cls(q=x[:9].copy(), qdot=x[9:].copy(), stance_leg=stance_leg)

    def to_json_dict(self) -> dict:
        return {
            "q": [float(v) for v in self.q],
            "qdot": [float(v) for v in self.qdot],
            "stance_leg": self.stance_leg,
        }


def other_leg(leg: str) -> str:
    return "left" if leg == "right" else "right"
