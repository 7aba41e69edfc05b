"""Forward kinematics of the 9-DOF chain, batched and dtype-generic.

Frames.  W is the world frame; I is parallel to W and centered at the
support foot (so I-coordinates equal W-coordinates up to the support-point
offset); Y is I rotated by the torso yaw.  The torso carries the frame
R_T = Rz(theta_y) Rx(theta_r) Ry(theta_p) (intrinsic yaw-roll-pitch).

Chain.  Each leg hangs from the hip center: its half of the hip bar
(length W/2, stance side -y, swing side +y) rolls together with the leg
about the torso's fore-aft axis, then hip pitch and knee pitch rotate the
thigh/shin in the rolled sagittal plane.  This gimballed-hip construction
makes ||r_H||^2 = L1^2 + L2^2 + W^2/4 + 2 L1 L2 cos(knee) exactly, for
every configuration, with the same identity for the swing chain.

All functions accept q of shape (..., 9) and preserve dtype, so complex-step
differentiation through them is exact.  Positions of all mass points are
expressed in I (support foot at the origin).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import BipedParams

# point indices in the chain tables
PT_HIP = 0
PT_ST_THIGH = 1
PT_ST_SHIN = 2
PT_SW_THIGH = 3
PT_SW_SHIN = 4
PT_SW_FOOT = 5
PT_TORSO = 6
N_POINTS = 7


def _rot_x(a: np.ndarray) -> np.ndarray:
    c, s = np.cos(a), np.sin(a)
    z, o = np.zeros_like(a), np.ones_like(a)
    return np.stack(
        [
            np.stack([o, z, z], -1),
            np.stack([z, c, -s], -1),
            np.stack([z, s, c], -1),
        ],
        -2,
    )


def _rot_y(a: np.ndarray) -> np.ndarray:
    c, s = np.cos(a), np.sin(a)
    z, o = np.zeros_like(a), np.ones_like(a)
    return np.stack(
        [
            np.stack([c, z, s], -1),
            np.stack([z, o, z], -1),
            np.stack([-s, z, c], -1),
        ],
        -2,
    )


def _rot_z(a: np.ndarray) -> np.ndarray:
    c, s = np.cos(a), np.sin(a)
    z, o = np.zeros_like(a), np.ones_like(a)
    return np.stack(
        [
            np.stack([c, -s, z], -1),
            np.stack([s, c, z], -1),
            np.stack([z, z, o], -1),
        ],
        -2,
    )


def _apply(rot: np.ndarray, vec: np.ndarray) -> np.ndarray:
    return (rot @ vec[..., None])[..., 0]


def _x_cross(v: np.ndarray) -> np.ndarray:
    # ex x v
    return np.stack([np.zeros_like(v[..., 0]), -v[..., 2], v[..., 1]], -1)


def _leg_chain(roll, pitch, knee, bar_sign: float, params: BipedParams):
    """Torso-frame positions and joint partials of one leg.

    Returns (s_thigh, s_shin, s_foot, dpitch_*, dknee_shin, dknee_foot);
    roll partials are ex x s and are formed by the caller.
    """
    L1, L2 = params.L1, params.L2
    zeros = np.zeros_like(pitch)
    pk = pitch + knee
    d1 = np.stack([-np.sin(pitch), zeros, -np.cos(pitch)], -1)
    d13 = np.stack([-np.sin(pk), zeros, -np.cos(pk)], -1)
    d1p = np.stack([-np.cos(pitch), zeros, np.sin(pitch)], -1)
    d13p = np.stack([-np.cos(pk), zeros, np.sin(pk)], -1)
    bar = np.stack([zeros, zeros + bar_sign * params.W / 2.0, zeros], -1)
    rr = _rot_x(roll)
    s_thigh = _apply(rr, bar + (L2 / 2.0) * d1)
    s_shin = _apply(rr, bar + L2 * d1 + (L1 / 2.0) * d13)
    s_foot = _apply(rr, bar + L2 * d1 + L1 * d13)
    dpitch_thigh = _apply(rr, (L2 / 2.0) * d1p)
    dpitch_shin = _apply(rr, L2 * d1p + (L1 / 2.0) * d13p)
    dpitch_foot = _apply(rr, L2 * d1p + L1 * d13p)
    dknee_shin = _apply(rr, (L1 / 2.0) * d13p)
    dknee_foot = _apply(rr, L1 * d13p)
    return s_thigh, s_shin, s_foot, dpitch_thigh, dpitch_shin, dpitch_foot, dknee_shin, dknee_foot


def chain_points(q: np.ndarray, params: BipedParams) -> np.ndarray:
    """Positions (..., 7, 3) of the chain points in I: hip center, stance
    thigh/shin midpoints, swing thigh/shin midpoints, swing foot, torso COM.
    """
    return _chain(q, params, with_jacobians=False)[0]


@dataclass
class ChainData:
    points: np.ndarray  # (..., 7, 3)
    jacobians: np.ndarray  # (..., 7, 3, 9)
    torso_rotation: np.ndarray  # (..., 3, 3)
    omega_jacobian: np.ndarray  # (..., 3, 9)


def chain_jacobians(q: np.ndarray, params: BipedParams) -> ChainData:
    points, jac, rot, jw = _chain(q, params, with_jacobians=True)
    return ChainData(points=points, jacobians=jac, torso_rotation=rot, omega_jacobian=jw)


def _chain(q: np.ndarray, params: BipedParams, with_jacobians: bool):
    q = np.asarray(q)
    batch = q.shape[:-1]
    yaw, troll, tpitch = q[..., 0], q[..., 1], q[..., 2]
    rz = _rot_z(yaw)
    rx = _rot_x(troll)
    rzx = rz @ rx
    r_t = rzx @ _rot_y(tpitch)

    st = _leg_chain(q[..., 4], q[..., 3], q[..., 5], -1.0, params)
    sw = _leg_chain(q[..., 7], q[..., 6], q[..., 8], +1.0, params)
    s_st_thigh, s_st_shin, s_sf = st[0], st[1], st[2]
    s_sw_thigh, s_sw_shin, s_swf = sw[0], sw[1], sw[2]
    zeros3 = np.zeros_like(s_sf)
    s_torso = zeros3.copy()
    s_torso[..., 2] = params.torso_com_height

    # positions relative to the pinned stance foot, stacked (..., 7, 3)
    s_all = np.stack(
        [zeros3, s_st_thigh, s_st_shin, s_sw_thigh, s_sw_shin, s_swf, s_torso], axis=-2
    )
    points = np.einsum("...ij,...pj->...pi", r_t, s_all - s_sf[..., None, :])
    if not with_jacobians:
        return (points, None, r_t, None)

    # torso-frame joint partials, (..., 7, 3, 6) for columns q1..q6
    tpart = np.zeros(batch + (N_POINTS, 3, 6), dtype=q.dtype)
    dp_st_thigh, dp_st_shin, dp_sf = st[3], st[4], st[5]
    dk_st_shin, dk_sf = st[6], st[7]
    dp_sw_thigh, dp_sw_shin, dp_swf = sw[3], sw[4], sw[5]
    dk_sw_shin, dk_swf = sw[6], sw[7]

    # q1, q3 move the stance chain; every point sees -d(s_sf), stance points
    # additionally their own chain partial
    tpart[..., :, :, 0] = -dp_sf[..., None, :]
    tpart[..., PT_ST_THIGH, :, 0] += dp_st_thigh
    tpart[..., PT_ST_SHIN, :, 0] += dp_st_shin
    tpart[..., :, :, 2] = -dk_sf[..., None, :]
    tpart[..., PT_ST_SHIN, :, 2] += dk_st_shin
    # q2 rolls the whole stance assembly about ex (through the hip center)
    x_sf = _x_cross(s_sf)
    tpart[..., :, :, 1] = -x_sf[..., None, :]
    tpart[..., PT_ST_THIGH, :, 1] += _x_cross(s_st_thigh)
    tpart[..., PT_ST_SHIN, :, 1] += _x_cross(s_st_shin)
    # q4, q5, q6 move only the swing chain
    tpart[..., PT_SW_THIGH, :, 3] = dp_sw_thigh
    tpart[..., PT_SW_SHIN, :, 3] = dp_sw_shin
    tpart[..., PT_SW_FOOT, :, 3] = dp_swf
    tpart[..., PT_SW_THIGH, :, 4] = _x_cross(s_sw_thigh)
    tpart[..., PT_SW_SHIN, :, 4] = _x_cross(s_sw_shin)
    tpart[..., PT_SW_FOOT, :, 4] = _x_cross(s_swf)
    tpart[..., PT_SW_SHIN, :, 5] = dk_sw_shin
    tpart[..., PT_SW_FOOT, :, 5] = dk_swf

    jac = np.zeros(batch + (N_POINTS, 3, 9), dtype=q.dtype)
    jac[..., 3:9] = np.einsum("...ij,...pjc->...pic", r_t, tpart)

    # Euler-angle columns: instantaneous rotation about ez / Rz ex / Rz Rx ey
    a_y = np.zeros(batch + (3,), dtype=q.dtype)
    a_y[..., 2] = 1.0
    a_r = rz[..., :, 0]
    a_p = rzx[..., :, 1]
    jac[..., 0] = np.cross(np.broadcast_to(a_y[..., None, :], points.shape), points)
    jac[..., 1] = np.cross(np.broadcast_to(a_r[..., None, :], points.shape), points)
    jac[..., 2] = np.cross(np.broadcast_to(a_p[..., None, :], points.shape), points)

    jw = np.zeros(batch + (3, 9), dtype=q.dtype)
    jw[..., 0] = a_y
    jw[..., 1] = a_r
    jw[..., 2] = a_p
    return points, jac, r_t, jw


@dataclass(frozen=True)
class ForwardKinematics:
    """Hip, swing-foot-minus-hip and swing-foot positions in I and Y.

    W-frame values equal the I values shifted by the support-point position,
    which the caller tracks across steps; `support_point` defaults to the
    origin so that the W and I columns coincide.
    """

    r_H_I: np.ndarray
    r_FH_I: np.ndarray
    r_F_I: np.ndarray
    r_H_Y: np.ndarray
    r_FH_Y: np.ndarray
    r_F_Y: np.ndarray
    r_H_W: np.ndarray
    r_FH_W: np.ndarray
    r_F_W: np.ndarray


def forward_kinematics(
    q: np.ndarray, params: BipedParams, support_point: np.ndarray | None = None
) -> ForwardKinematics:
    q = np.asarray(q, dtype=float)
    pts = chain_points(q, params)
    r_h = pts[..., PT_HIP, :]
    r_f = pts[..., PT_SW_FOOT, :]
    r_fh = r_f - r_h
    # Y-frame coordinates: undo the yaw. Equivalent to evaluating the chain
    # with the yaw zeroed.
    rz_t = np.swapaxes(_rot_z(q[..., 0]), -1, -2)
    r_h_y = _apply(rz_t, r_h)
    r_fh_y = _apply(rz_t, r_fh)
    offset = np.zeros(3) if support_point is None else np.asarray(support_point, dtype=float)
    return ForwardKinematics(
        r_H_I=r_h,
        r_FH_I=r_fh,
        r_F_I=r_f,
        r_H_Y=r_h_y,
        r_FH_Y=r_fh_y,
        r_F_Y=r_h_y + r_fh_y,
        r_H_W=r_h + offset,
        r_FH_W=r_fh,
        r_F_W=r_f + offset,
    )


def swing_foot_height(q: np.ndarray, params: BipedParams) -> np.ndarray | float:
    """Guard quantity z_F: height of the swing foot above the ground."""
    q = np.asarray(q)
    z = chain_points(q, params)[..., PT_SW_FOOT, 2]
    return float(z) if z.ndim == 0 else z
