"""Closed-form order-alpha information measures, in nats.

Each alpha-measure is available in every equivalent closed form (direct sum,
Gallager E0 form, tilted form) so the forms can be cross-checked against
each other. Near ``alpha == 1`` the mutual informations fall back to their
Shannon counterparts.
"""

import numpy as np

from .errors import (
    AlphaNearOne,
    DimensionMismatch,
    RhoOutOfRange,
    SupportViolation,
)
from .simplex import as_matrix, as_probs, check_alpha, check_compatible, tilt

ALPHA_ONE_TOL = 1e-9


def near_one(alpha):
    return abs(alpha - 1.0) < ALPHA_ONE_TOL


def _check_order(alpha):
    check_alpha(alpha)
    if near_one(alpha):
        raise AlphaNearOne(
            f"alpha={alpha!r} is within {ALPHA_ONE_TOL:g} of 1; use the Shannon measure"
        )


def _log_power_sum(p, alpha):
    """``log(sum(p**alpha))`` with the largest entry factored out."""
    top = p.max()
    if top <= 0:
        return -np.inf
    return alpha * np.log(top) + np.log(np.sum(np.power(p / top, alpha)))


def _setup(p, W):
    p = as_probs(p)
    W = as_matrix(W)
    check_compatible(p, W)
    return p, W


def renyi_entropy(p, alpha):
    _check_order(alpha)
    p = as_probs(p)
    return float(_log_power_sum(p, alpha) / (1.0 - alpha))


def renyi_divergence(p, q, alpha):
    """Order-alpha Renyi divergence ``D_alpha(p || q)``.

    Terms with ``p == 0`` vanish. For ``alpha > 1`` any ``p > 0`` where
    ``q == 0`` raises :class:`SupportViolation`; for ``alpha < 1`` such terms
    contribute zero.
    """
    _check_order(alpha)
    p = as_probs(p)
    q = as_probs(q)
    if p.shape != q.shape:
        raise DimensionMismatch(f"shapes differ: {p.shape} vs {q.shape}")
    on = p > 0
    if alpha > 1 and np.any(q[on] <= 0):
        raise SupportViolation("p is not absolutely continuous w.r.t. q")
    pp, qq = p[on], q[on]
    keep = qq > 0
    terms = np.power(pp[keep], alpha) * np.power(qq[keep], 1.0 - alpha)
    total = terms.sum()
    if total <= 0:
        return float("inf")
    return float(np.log(total) / (alpha - 1.0))


def shannon_entropy(p):
    p = as_probs(p)
    on = p > 0
    return float(-np.sum(p[on] * np.log(p[on])))


def _joint_and_output(p, W):
    joint = p[:, None] * W
    return joint, joint.sum(axis=0)


def shannon_cond_entropy(p, W):
    """``H(X|Y)`` with ``0 log 0 = 0``."""
    p, W = _setup(p, W)
    joint, py = _joint_and_output(p, W)
    on = joint > 0
    post = np.divide(joint, py[None, :], out=np.zeros_like(joint), where=on)
    return float(-np.sum(joint[on] * np.log(post[on])))


def shannon_mi(p, W):
    p, W = _setup(p, W)
    joint, py = _joint_and_output(p, W)
    on = joint > 0
    ratio = np.divide(W, py[None, :], out=np.ones_like(W), where=on)
    return float(np.sum(joint[on] * np.log(ratio[on])))


def gallager_e0(rho, p, W):
    """Gallager's ``E0(rho, p) = -log sum_y (sum_x p W^(1/(1+rho)))^(1+rho)``."""
    if not np.isfinite(rho) or rho <= -1:
        raise RhoOutOfRange(f"rho must exceed -1, got {rho!r}")
    p, W = _setup(p, W)
    s = 1.0 + rho
    inner = p @ np.power(W, 1.0 / s)
    return float(-np.log(np.sum(np.power(inner, s))))


def arimoto_cond_entropy(p, W, alpha):
    _check_order(alpha)
    p, W = _setup(p, W)
    inner = np.power(p, alpha) @ np.power(W, alpha)
    return float(alpha / (1.0 - alpha) * np.log(np.sum(np.power(inner, 1.0 / alpha))))


def sibson_mi(p, W, alpha):
    check_alpha(alpha)
    if near_one(alpha):
        return shannon_mi(p, W)
    p, W = _setup(p, W)
    inner = p @ np.power(W, alpha)
    return float(alpha / (alpha - 1.0) * np.log(np.sum(np.power(inner, 1.0 / alpha))))


def sibson_mi_e0(p, W, alpha):
    """Sibson MI through the Gallager function: ``alpha/(1-alpha) E0(1/alpha - 1, p)``."""
    check_alpha(alpha)
    if near_one(alpha):
        return shannon_mi(p, W)
    return alpha / (1.0 - alpha) * gallager_e0(1.0 / alpha - 1.0, p, W)


def arimoto_mi(p, W, alpha):
    check_alpha(alpha)
    if near_one(alpha):
        return shannon_mi(p, W)
    return renyi_entropy(p, alpha) - arimoto_cond_entropy(p, W, alpha)


def arimoto_mi_e0(p, W, alpha):
    """Arimoto MI as the E0 form evaluated at the alpha-tilted input."""
    check_alpha(alpha)
    if near_one(alpha):
        return shannon_mi(p, W)
    return alpha / (1.0 - alpha) * gallager_e0(1.0 / alpha - 1.0, tilt(p, alpha), W)


def joint_renyi_divergence(p, W, q_out, alpha):
    """``D_alpha(p_X W || p_X q_Y)`` expanded over the product alphabet.

    The Sibson MI is the minimum of this over output distributions ``q_out``.
    """
    _check_order(alpha)
    p, W = _setup(p, W)
    q_out = as_probs(q_out)
    if q_out.shape[0] != W.shape[1]:
        raise DimensionMismatch(
            f"output distribution has {q_out.shape[0]} symbols, channel has {W.shape[1]} columns"
        )
    joint = p[:, None] * W
    product = p[:, None] * q_out[None, :]
    return renyi_divergence(joint.ravel(), product.ravel(), alpha)
