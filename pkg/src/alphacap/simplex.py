"""Probability vectors, channels, reverse conditionals and alpha-tilting.

All objects are immutable: the arrays they hold are flagged read-only at
construction. Functions in the rest of the package accept either these
objects or plain array-likes; :func:`as_probs` and :func:`as_matrix` do the
coercion.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AllZero,
    DimensionMismatch,
    EmptyMatrix,
    NegativeEntry,
    NegativeWeight,
    NonFinite,
    NonPositiveAlpha,
    RowSumOutOfTolerance,
    ZeroDimension,
)

ROW_TOL = 1e-3
# rows already this close to 1 are left bit-for-bit alone
_EXACT_TOL = 1e-12
# renormalizations larger than this set Channel.renormalized
_WARN_TOL = 1e-9
RANDOM_FLOOR = 1e-6


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Distribution:
    """A probability vector on ``{0, ..., n-1}``."""

    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", _frozen(self.probs))

    def __array__(self, dtype=None, copy=None):
        return self.probs if dtype is None else self.probs.astype(dtype)

    def __len__(self):
        return self.probs.shape[0]

    def __getitem__(self, i):
        return self.probs[i]

    def __iter__(self):
        return iter(self.probs)

    def __repr__(self):
        return f"Distribution({np.array2string(self.probs, precision=6)})"

    @property
    def n(self):
        return self.probs.shape[0]

    @property
    def support(self):
        return self.probs > 0


@dataclass(frozen=True, eq=False)
class Channel:
    """Row-stochastic matrix; entry ``(x, y)`` is ``W(y|x)``.

    ``renormalized`` records whether construction moved any row sum by more
    than 1e-9.
    """

    matrix: np.ndarray
    renormalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        return f"Channel({self.n_in}x{self.n_out})"

    @property
    def n_in(self):
        return self.matrix.shape[0]

    @property
    def n_out(self):
        return self.matrix.shape[1]

    @property
    def rows(self):
        return self.matrix


@dataclass(frozen=True, eq=False)
class ReverseConditional:
    """A family ``q(.|y)`` of distributions over X, one per output symbol.

    Stored as an ``(n_in, n_out)`` matrix whose columns each sum to one.
    ``unreachable`` flags columns that were filled with the uniform
    distribution because their normalizer vanished.
    """

    matrix: np.ndarray
    unreachable: np.ndarray = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        if self.unreachable is None:
            flags = np.zeros(self.matrix.shape[1], dtype=bool)
        else:
            flags = np.array(self.unreachable, dtype=bool)
        flags.setflags(write=False)
        object.__setattr__(self, "unreachable", flags)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    @property
    def n_in(self):
        return self.matrix.shape[0]

    @property
    def n_out(self):
        return self.matrix.shape[1]

    def column(self, y):
        return Distribution(self.matrix[:, y])

    @property
    def columns(self):
        return [self.column(y) for y in range(self.n_out)]

    @classmethod
    def from_columns(cls, columns):
        return cls(np.column_stack([as_probs(c) for c in columns]))


def as_probs(p):
    return np.asarray(p, dtype=np.float64)


def as_matrix(W):
    return np.asarray(W, dtype=np.float64)


def check_alpha(alpha):
    if not np.isfinite(alpha) or alpha <= 0:
        raise NonPositiveAlpha(f"alpha must be positive and finite, got {alpha!r}")


def make_distribution(weights):
    """Normalize non-negative ``weights`` into a :class:`Distribution`."""
    w = np.asarray(weights, dtype=np.float64).ravel()
    if w.size == 0:
        raise ZeroDimension("distribution needs at least one symbol")
    if not np.all(np.isfinite(w)):
        raise NonFinite("weights contain NaN or infinity")
    if np.any(w < 0):
        raise NegativeWeight(f"negative weight at index {int(np.argmin(w))}")
    total = w.sum()
    if total <= 0:
        raise AllZero("all weights are zero")
    return Distribution(w / total)


def uniform(n):
    if n < 1:
        raise ZeroDimension(f"n must be >= 1, got {n}")
    return Distribution(np.full(n, 1.0 / n))


def random_interior(n, seed):
    """Seeded full-support distribution with every entry >= 1e-6."""
    if n < 1:
        raise ZeroDimension(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    w = rng.dirichlet(np.ones(n))
    # renormalizing after flooring can only shrink entries by a factor
    # 1/(1 + n*floor); scale the floor so the final minimum still clears it
    floor = RANDOM_FLOOR * (1.0 + n * RANDOM_FLOOR) * (1.0 + 1e-9)
    w = np.maximum(w, floor)
    return Distribution(w / w.sum())


def _tilt_array(a, alpha, axis=0):
    # factor out the max so large alpha cannot overflow; 0**alpha == 0 keeps
    # the support unchanged
    top = np.max(a, axis=axis, keepdims=True)
    top = np.where(top > 0, top, 1.0)
    powered = np.power(a / top, alpha)
    total = powered.sum(axis=axis, keepdims=True)
    return powered / np.where(total > 0, total, 1.0)


def tilt(p, alpha):
    """The alpha-tilted (escort) distribution ``p**alpha / sum(p**alpha)``."""
    check_alpha(alpha)
    return Distribution(_tilt_array(as_probs(p), alpha))


def tilt_conditional(q, alpha):
    """Tilt every column of a reverse conditional."""
    check_alpha(alpha)
    if isinstance(q, ReverseConditional):
        return ReverseConditional(_tilt_array(q.matrix, alpha, axis=0), q.unreachable)
    return ReverseConditional(_tilt_array(as_matrix(q), alpha, axis=0))


def make_channel(matrix, row_tol=ROW_TOL, renormalize=True):
    """Validate a transition matrix and renormalize its rows.

    Rows whose sum is within ``row_tol`` of one are rescaled to sum to one;
    rows already within 1e-12 are kept untouched so that a channel written
    out and read back is bit-identical. With ``renormalize=False`` the rows
    are validated but kept exactly as given (needed to reproduce published
    matrices whose printed rows were rounded).
    """
    try:
        W = np.array(matrix, dtype=np.float64)
    except ValueError as exc:
        raise EmptyMatrix(f"channel rows are ragged or non-numeric: {exc}") from None
    if W.ndim != 2 or W.shape[0] == 0 or W.shape[1] == 0:
        raise EmptyMatrix(f"channel must be a non-empty 2-D matrix, got shape {W.shape}")
    bad = np.argwhere(~np.isfinite(W))
    if bad.size:
        x, y = bad[0]
        raise NonFinite(f"non-finite entry at row {x + 1}, column {y + 1}")
    neg = np.argwhere(W < 0)
    if neg.size:
        x, y = neg[0]
        raise NegativeEntry(
            f"negative entry {W[x, y]!r} at row {x + 1}, column {y + 1}"
        )
    sums = W.sum(axis=1)
    for x, s in enumerate(sums):
        if abs(s - 1.0) > row_tol:
            raise RowSumOutOfTolerance(
                f"row {x + 1} sums to {s!r}, outside 1 +/- {row_tol:g}"
            )
    if not renormalize:
        return Channel(W)
    fix = np.abs(sums - 1.0) > _EXACT_TOL
    W[fix] /= sums[fix, None]
    return Channel(W, renormalized=bool(np.any(np.abs(sums - 1.0) > _WARN_TOL)))


def check_compatible(p, W):
    if p.shape[0] != W.shape[0]:
        raise DimensionMismatch(
            f"input distribution has {p.shape[0]} symbols but channel has {W.shape[0]} rows"
        )
