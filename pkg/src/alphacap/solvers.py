"""Alternating maximization for the five objectives.

One loop serves every :class:`ObjectiveKind`::

    q(0) = argmax_q F(p(0), q);  F(0,0) = F(p(0), q(0))
    repeat k = 1, 2, ...:
        p(k) = argmax_p F(p, q(k-1))     -> record F(k, k-1)
        q(k) = argmax_q F(p(k), q)       -> record F(k, k)
    until |F(k,k) - F(k-1,k-1)| < epsilon

Not converging within ``max_iter`` is reported through ``converged=False``,
never raised.
"""

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidConfig, SupportViolation
from .measures import near_one
from .objectives import ALPHA_KINDS, ObjectiveKind, eval_objective, optimal_p, optimal_q
from .simplex import (
    Distribution,
    ReverseConditional,
    as_matrix,
    check_compatible,
    make_distribution,
    random_interior,
    tilt,
    uniform,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_ITER = 10_000
# every iteration is snapshotted up to this alphabet size, every 10th above
SNAPSHOT_DIM = 16


@dataclass(frozen=True)
class SolverConfig:
    """Solver settings.

    ``init`` is ``"uniform"``, ``"random"`` (seeded by ``seed``) or an explicit
    distribution. ``snapshot_every=None`` picks 1 for alphabets up to 16
    symbols and 10 otherwise; 0 disables snapshots except for the last step.
    """

    alpha: float = 2.0
    epsilon: float = 1e-7
    max_iter: int = DEFAULT_MAX_ITER
    init: object = "uniform"
    seed: int = 0
    snapshot_every: int = None

    def __post_init__(self):
        if not np.isfinite(self.alpha) or self.alpha <= 0:
            raise InvalidConfig(f"alpha must be positive, got {self.alpha!r}")
        if not self.epsilon > 0:
            raise InvalidConfig(f"epsilon must be positive, got {self.epsilon!r}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise InvalidConfig(f"max_iter must be a positive integer, got {self.max_iter!r}")
        if isinstance(self.init, str) and self.init not in ("uniform", "random"):
            raise InvalidConfig(f"unknown init policy {self.init!r}")

    def initial(self, n):
        if isinstance(self.init, str):
            return uniform(n) if self.init == "uniform" else random_interior(n, self.seed)
        p = self.init if isinstance(self.init, Distribution) else make_distribution(self.init)
        if p.n != n:
            raise InvalidConfig(f"initial distribution has {p.n} symbols, channel has {n} inputs")
        return p


@dataclass
class TraceStep:
    k: int
    f_kk: float
    # F(k+1, k); None on the final step
    f_k1k: float = None
    p: Distribution = None
    q: ReverseConditional = None


@dataclass
class IterationTrace:
    steps: list = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    @property
    def f_kk(self):
        return np.array([s.f_kk for s in self.steps])

    @property
    def f_k1k(self):
        return np.array([s.f_k1k for s in self.steps if s.f_k1k is not None])

    def snapshots(self):
        """``(k, p, q)`` for every step that kept its distributions."""
        return [(s.k, s.p, s.q) for s in self.steps if s.p is not None]


@dataclass
class SolveResult:
    kind: ObjectiveKind
    alpha: float
    capacity: float
    iterations: int
    converged: bool
    p_final: Distribution
    q_final: ReverseConditional
    trace: IterationTrace
    # set when an alpha-kind was asked for with alpha within 1e-9 of 1
    dispatched_from: ObjectiveKind = None


def _snapshot_stride(every, n):
    if every is None:
        return 1 if n <= SNAPSHOT_DIM else 10
    return int(every)


def run_iterations(kind, W, p0, alpha=None, max_iter=DEFAULT_MAX_ITER, epsilon=None,
                   snapshot_every=None):
    """Run the alternating loop from ``p0``.

    With ``epsilon=None`` exactly ``max_iter`` double updates are made.
    Returns ``(p, q, trace, converged)``.
    """
    kind = ObjectiveKind(kind)
    W = as_matrix(W)
    p = p0 if isinstance(p0, Distribution) else make_distribution(p0)
    check_compatible(p.probs, W)
    if np.any(p.probs <= 0):
        raise SupportViolation("initial distribution must have full support")
    stride = _snapshot_stride(snapshot_every, W.shape[0])

    def keep(k):
        return stride > 0 and k % stride == 0

    q = optimal_q(kind, p, W, alpha)
    f = eval_objective(kind, p, q, W, alpha)
    steps = [TraceStep(0, f, p=p if keep(0) else None, q=q if keep(0) else None)]
    converged = False
    for k in range(1, max_iter + 1):
        p = optimal_p(kind, q, W, alpha)
        steps[-1].f_k1k = eval_objective(kind, p, q, W, alpha)
        q = optimal_q(kind, p, W, alpha)
        f_prev, f = f, eval_objective(kind, p, q, W, alpha)
        steps.append(TraceStep(k, f, p=p if keep(k) else None, q=q if keep(k) else None))
        if epsilon is not None and abs(f - f_prev) < epsilon:
            converged = True
            break
    steps[-1].p, steps[-1].q = p, q
    return p, q, IterationTrace(steps), converged


def solve(kind, W, config):
    """Maximize the ``kind`` objective over both blocks; see module docstring."""
    kind = ObjectiveKind(kind)
    W = as_matrix(W)
    dispatched = None
    if kind.is_alpha and near_one(config.alpha):
        log.info("alpha=%r is numerically 1; running SHANNON instead of %s",
                 config.alpha, kind.name)
        dispatched, kind = kind, ObjectiveKind.SHANNON
    p0 = config.initial(W.shape[0])
    p, q, trace, converged = run_iterations(
        kind, W, p0, config.alpha, config.max_iter, config.epsilon, config.snapshot_every
    )
    if not converged:
        log.warning("%s did not converge in %d iterations", kind.name, config.max_iter)
    return SolveResult(
        kind=kind,
        alpha=config.alpha,
        capacity=float(trace.steps[-1].f_kk),
        iterations=trace.steps[-1].k,
        converged=converged,
        p_final=p,
        q_final=q,
        trace=trace,
        dispatched_from=dispatched,
    )


def matched_inits(p0, alpha):
    """Initial distributions under which S1, S2, A1 and A2 run in lockstep.

    The Sibson kinds start at ``p0``; the Arimoto kinds start at the
    distribution whose alpha-tilt is ``p0``. A uniform ``p0`` maps to itself.
    """
    partner = tilt(p0, 1.0 / alpha)
    return {
        ObjectiveKind.S1: p0,
        ObjectiveKind.S2: p0,
        ObjectiveKind.A1: partner,
        ObjectiveKind.A2: partner,
    }


def solve_all(W, config, include_shannon=False):
    """Run S1, S2, A1, A2 (and optionally SHANNON) with matched inits."""
    W = as_matrix(W)
    p0 = config.initial(W.shape[0])
    results = {}
    if include_shannon:
        results[ObjectiveKind.SHANNON] = solve(
            ObjectiveKind.SHANNON, W, replace(config, init=p0)
        )
    if near_one(config.alpha):
        inits = dict.fromkeys(ALPHA_KINDS, p0)
    else:
        inits = matched_inits(p0, config.alpha)
    for kind in ALPHA_KINDS:
        results[kind] = solve(kind, W, replace(config, init=inits[kind]))
    return results

