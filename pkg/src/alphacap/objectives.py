"""Two-block objective functions and their closed-form block maximizers.

Every capacity in this package is a double maximum ``max_p max_q F(p, q)``
where ``q`` is a reverse conditional ``q(x|y)``. The five objectives are

* ``SHANNON``: ``E[log q(X|Y) / p(X)]`` (classic Arimoto-Blahut),
* ``S1``: Sibson form ``a/(a-1) log sum p^(1/a) W q^((a-1)/a)``,
* ``A1``: Arimoto form ``H_a(p) - a/(1-a) log sum p W q^((a-1)/a)``,
* ``S2`` / ``A2``: ``S1`` / ``A1`` evaluated at the column-wise a-tilted ``q``.

In every double sum, terms with ``p(x) W(y|x) == 0`` are skipped before
exponentiation.
"""

import enum

import numpy as np

from .errors import (
    AlphaNearOne,
    DegenerateNormalizer,
    DimensionMismatch,
    SupportViolation,
)
from .measures import near_one, renyi_entropy
from .simplex import (
    Distribution,
    ReverseConditional,
    as_matrix,
    as_probs,
    check_alpha,
    check_compatible,
    tilt,
    tilt_conditional,
)


class ObjectiveKind(str, enum.Enum):
    SHANNON = "shannon"
    S1 = "s1"
    S2 = "s2"
    A1 = "a1"
    A2 = "a2"

    @property
    def is_alpha(self):
        return self is not ObjectiveKind.SHANNON

    @property
    def tilts_q(self):
        return self in (ObjectiveKind.S2, ObjectiveKind.A2)

    @property
    def family(self):
        """``"S"`` for Sibson kinds, ``"A"`` for Arimoto kinds, else ``None``."""
        return {"s1": "S", "s2": "S", "a1": "A", "a2": "A"}.get(self.value)


ALPHA_KINDS = (ObjectiveKind.S1, ObjectiveKind.S2, ObjectiveKind.A1, ObjectiveKind.A2)


def _check(kind, alpha):
    kind = ObjectiveKind(kind)
    if kind.is_alpha:
        check_alpha(alpha)
        if near_one(alpha):
            raise AlphaNearOne(f"{kind.name} needs alpha != 1, got {alpha!r}")
    return kind


def _q_matrix(q):
    return q.matrix if isinstance(q, ReverseConditional) else as_matrix(q)


def _shannon_value(p, Q, W):
    on = p[:, None] * W > 0
    if np.any(Q[on] <= 0):
        raise SupportViolation("q(x|y) vanishes where p(x) W(y|x) > 0")
    joint = (p[:, None] * W)[on]
    ratio = Q / p[:, None].clip(min=np.finfo(float).tiny)
    return float(np.sum(joint * np.log(ratio[on])))


def _power_sum(weight, W, Q, alpha):
    """``sum_{x,y} weight(x) W(y|x) q(x|y)^((alpha-1)/alpha)`` over the support."""
    on = weight[:, None] * W > 0
    if alpha < 1 and np.any(Q[on] <= 0):
        raise SupportViolation("q(x|y) vanishes where p(x) W(y|x) > 0 and alpha < 1")
    qq = np.where(on, Q, 1.0)
    terms = np.where(on, weight[:, None] * W * np.power(qq, (alpha - 1.0) / alpha), 0.0)
    return terms.sum()


def _sibson_value(p, Q, W, alpha):
    total = _power_sum(np.power(p, 1.0 / alpha), W, Q, alpha)
    return float(alpha / (alpha - 1.0) * np.log(total))


def _arimoto_value(p, Q, W, alpha):
    total = _power_sum(p, W, Q, alpha)
    return renyi_entropy(p, alpha) - float(alpha / (1.0 - alpha) * np.log(total))


def eval_objective(kind, p, q, W, alpha=None):
    """Value of the ``kind`` objective at ``(p, q)`` in nats."""
    kind = _check(kind, alpha)
    p = as_probs(p)
    Q = _q_matrix(q)
    W = as_matrix(W)
    check_compatible(p, W)
    check_compatible(p, Q)
    if Q.shape[1] != W.shape[1]:
        raise DimensionMismatch(f"q has {Q.shape[1]} columns, channel has {W.shape[1]}")
    if kind is ObjectiveKind.SHANNON:
        return _shannon_value(p, Q, W)
    if kind.tilts_q:
        Q = tilt_conditional(Q, alpha).matrix
    if kind.family == "S":
        return _sibson_value(p, Q, W, alpha)
    return _arimoto_value(p, Q, W, alpha)


def _normalize_columns(weights):
    totals = weights.sum(axis=0)
    dead = ~(totals > 0)
    n_in = weights.shape[0]
    Q = np.divide(weights, totals[None, :], out=np.full_like(weights, 1.0 / n_in),
                  where=~dead[None, :])
    return ReverseConditional(Q, dead)


def optimal_q(kind, p, W, alpha=None):
    """Maximizer of the ``kind`` objective over ``q`` for fixed ``p``.

    Columns whose normalizer is zero (outputs that ``p`` cannot reach) are set
    to uniform and flagged in ``ReverseConditional.unreachable``.
    """
    kind = _check(kind, alpha)
    p = as_probs(p)
    W = as_matrix(W)
    check_compatible(p, W)
    # tilted weights are proportional to the raw powers; they only differ by a
    # per-x constant, which the column normalization removes, and they stay
    # finite for large alpha
    if kind in (ObjectiveKind.SHANNON, ObjectiveKind.A2):
        weights = p[:, None] * W
    elif kind is ObjectiveKind.S1:
        weights = p[:, None] * np.power(W, alpha)
    elif kind is ObjectiveKind.S2:
        weights = tilt(p, 1.0 / alpha).probs[:, None] * W
    else:
        weights = tilt(p, alpha).probs[:, None] * np.power(W, alpha)
    return _normalize_columns(weights)


def _from_log_weights(z):
    finite = np.isfinite(z)
    if not np.any(finite):
        raise DegenerateNormalizer("every input symbol received zero weight")
    w = np.where(finite, np.exp(z - z[finite].max()), 0.0)
    return Distribution(w / w.sum())


def optimal_p(kind, q, W, alpha=None):
    """Maximizer of the ``kind`` objective over ``p`` for fixed ``q``."""
    kind = _check(kind, alpha)
    Q = _q_matrix(q)
    W = as_matrix(W)
    if Q.shape != W.shape:
        raise DimensionMismatch(f"q has shape {Q.shape}, channel has {W.shape}")
    on = W > 0
    if kind is ObjectiveKind.SHANNON:
        if np.any(Q[on] <= 0):
            raise SupportViolation("q(x|y) vanishes where W(y|x) > 0")
        z = np.sum(np.where(on, W * np.log(np.where(on, Q, 1.0)), 0.0), axis=1)
        return _from_log_weights(z)
    if kind.tilts_q:
        Q = tilt_conditional(Q, alpha).matrix
    if alpha < 1 and np.any(Q[on] <= 0):
        raise SupportViolation("q(x|y) vanishes where W(y|x) > 0 and alpha < 1")
    qq = np.where(on, Q, 1.0)
    inner = np.sum(np.where(on, W * np.power(qq, (alpha - 1.0) / alpha), 0.0), axis=1)
    outer = alpha / (alpha - 1.0) if kind.family == "S" else 1.0 / (alpha - 1.0)
    with np.errstate(divide="ignore"):
        log_inner = np.log(inner)
    # exp(outer * log inner) with the largest term factored out; the outer
    # exponent grows like 1/(alpha - 1)
    z = np.where(inner > 0, outer * log_inner, -np.inf)
    return _from_log_weights(z)
