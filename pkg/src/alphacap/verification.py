"""Independent oracles and algorithm-equivalence checks.

The grid oracles brute-force the defining optimizations on an exact simplex
lattice and share no code with the alternating solvers, so agreement between
the two is real evidence. The equivalence checks run pairs of algorithms from
matched initial distributions and measure how far the iterates drift apart.
"""

import itertools
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionTooLarge, InvalidConfig
from .measures import near_one
from .objectives import ObjectiveKind
from .simplex import (
    as_matrix,
    as_probs,
    check_alpha,
    random_interior,
    tilt,
    tilt_conditional,
    uniform,
)
from .solvers import SolverConfig, run_iterations, solve

DEFAULT_MAX_GRID_DIM = 4
EQUIVALENCE_TOL = 1e-9


def max_grid_dim():
    """Oracle dimension guard; ``CAPACITY_MAX_GRID_DIM`` raises it."""
    return int(os.environ.get("CAPACITY_MAX_GRID_DIM", DEFAULT_MAX_GRID_DIM))


@dataclass(frozen=True)
class GridSpec:
    """Lattice ``{k * step : k_i >= 0, sum k_i = 1/step}`` on a simplex."""

    dimension: int
    step: float

    def __post_init__(self):
        if self.dimension < 1:
            raise InvalidConfig(f"grid dimension must be >= 1, got {self.dimension}")
        if not 0 < self.step <= 1:
            raise InvalidConfig(f"grid step must lie in (0, 1], got {self.step}")
        if abs(1.0 / self.step - round(1.0 / self.step)) > 1e-9:
            raise InvalidConfig(f"1/step must be an integer, got step={self.step}")

    @property
    def divisions(self):
        return int(round(1.0 / self.step))

    @property
    def n_points(self):
        return math.comb(self.divisions + self.dimension - 1, self.dimension - 1)

    def points(self):
        """All lattice points as an ``(n_points, dimension)`` array."""
        n, d = self.divisions, self.dimension
        if d == 1:
            return np.ones((1, 1))
        # stars and bars: bar positions among n + d - 1 slots
        bars = np.fromiter(
            itertools.chain.from_iterable(itertools.combinations(range(n + d - 1), d - 1)),
            dtype=np.int64,
        ).reshape(-1, d - 1)
        edges = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), n + d - 1)])
        counts = np.diff(edges, axis=1) - 1
        return counts / n


def _guard(grid, what, limit):
    limit = max_grid_dim() if limit is None else limit
    if grid.dimension > limit:
        raise DimensionTooLarge(
            f"{what} has {grid.dimension} symbols; grid oracles are limited to {limit} "
            "(set CAPACITY_MAX_GRID_DIM to raise)"
        )


def _batched_sibson(P, W, alpha):
    if near_one(alpha):
        joint = P[:, :, None] * W[None, :, :]
        py = joint.sum(axis=1, keepdims=True)
        on = joint > 0
        ratio = np.divide(W[None, :, :], py, out=np.ones_like(joint), where=on)
        return np.sum(np.where(on, joint * np.log(ratio), 0.0), axis=(1, 2))
    inner = P @ np.power(W, alpha)
    return alpha / (alpha - 1.0) * np.log(np.sum(np.power(inner, 1.0 / alpha), axis=1))


def capacity_oracle(W, alpha, grid=None, step=1e-3, max_dim=None):
    """Largest Sibson MI over the input-simplex lattice.

    A lower bound on the Sibson capacity; the gap shrinks like ``step**2``.
    """
    check_alpha(alpha)
    W = as_matrix(W)
    grid = GridSpec(W.shape[0], step) if grid is None else grid
    _guard(grid, "input alphabet", max_dim)
    return float(np.max(_batched_sibson(grid.points(), W, alpha)))


def sibson_min_oracle(p, W, alpha, grid=None, step=1e-3, max_dim=None):
    """Minimum over lattice output laws ``q`` of ``D_alpha(p W || p q)``.

    The divergence is expanded over the product alphabet; ``(x, y)`` pairs
    with zero joint mass are skipped.
    """
    check_alpha(alpha)
    p = as_probs(p)
    W = as_matrix(W)
    grid = GridSpec(W.shape[1], step) if grid is None else grid
    _guard(grid, "output alphabet", max_dim)
    Q = grid.points()
    # joint and product laws restricted to the joint support, one row per
    # grid point for the product
    x_idx, y_idx = np.nonzero((p[:, None] * W) > 0)
    joint = p[x_idx] * W[x_idx, y_idx]
    product = p[x_idx][None, :] * Q[:, y_idx]
    if near_one(alpha):
        with np.errstate(divide="ignore"):
            vals = np.sum(joint * (np.log(joint) - np.log(product)), axis=1)
        return float(np.min(vals))
    zero = product <= 0
    if alpha > 1:
        # q misses part of the joint support: divergence is infinite
        feasible = ~np.any(zero, axis=1)
        product, zero = product[feasible], zero[feasible]
    safe = np.where(zero, 1.0, product)
    terms = np.where(zero, 0.0, np.power(joint, alpha) * np.power(safe, 1.0 - alpha))
    with np.errstate(divide="ignore"):
        vals = np.log(terms.sum(axis=1)) / (alpha - 1.0)
    return float(np.min(vals))


@dataclass
class EquivalenceReport:
    pair: str
    max_p_gap: float
    max_q_gap: float
    max_f_gap: float
    iterations_compared: int
    passed: bool
    tol: float = EQUIVALENCE_TOL

    def to_dict(self):
        return {
            "pair": self.pair,
            "max_p_gap": self.max_p_gap,
            "max_q_gap": self.max_q_gap,
            "max_f_gap": self.max_f_gap,
            "iterations_compared": self.iterations_compared,
            "passed": self.passed,
            "tol": self.tol,
        }


_K = ObjectiveKind

# pair -> (left kind, right kind, relation)
# "p": same init, p equal, q_left = tilt(q_right)
# "q": tilted init, q equal, p_left = tilt(p_right)
PAIRS = {
    "S1S2": (_K.S1, _K.S2, "p"),
    "A1A2": (_K.A1, _K.A2, "p"),
    "S1A1": (_K.S1, _K.A1, "q"),
    "S2A2": (_K.S2, _K.A2, "q"),
}


def _run(kind, W, p0, alpha, k_max):
    return run_iterations(kind, W, p0, alpha, max_iter=k_max, epsilon=None, snapshot_every=1)[2]


def _linf(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _f_gap(ta, tb):
    return max(_linf(ta.f_kk, tb.f_kk), _linf(ta.f_k1k, tb.f_k1k))


def _matched_gaps(ta, tb, relation, alpha):
    p_gap = q_gap = 0.0
    for sa, sb in zip(ta.steps, tb.steps):
        if relation == "p":
            p_gap = max(p_gap, _linf(sa.p, sb.p))
            q_gap = max(q_gap, _linf(sa.q.matrix, _tilt_q(sb.q, alpha)))
        else:
            p_gap = max(p_gap, _linf(sa.p, tilt(sb.p, alpha)))
            q_gap = max(q_gap, _linf(sa.q.matrix, sb.q.matrix))
    return p_gap, q_gap


def _tilt_q(q, alpha):
    return tilt_conditional(q, alpha).matrix


def check_equivalence(pair, W, init, alpha, k_max=50, tol=EQUIVALENCE_TOL, partner_init=None):
    """Run both algorithms of ``pair`` for ``k_max`` steps and compare.

    The partner's initial distribution is derived from ``init`` so that the
    pair's equivalence precondition holds (``init`` itself for same-family
    pairs, its ``1/alpha``-tilt for Sibson/Arimoto pairs). Passing
    ``partner_init`` overrides that, e.g. to show the equivalence breaking.
    """
    if pair not in PAIRS:
        raise InvalidConfig(f"unknown pair {pair!r}; expected one of {sorted(PAIRS)}")
    left, right, relation = PAIRS[pair]
    W = as_matrix(W)
    init = as_probs(init)
    if partner_init is None:
        partner_init = init if relation == "p" else tilt(init, 1.0 / alpha)
    ta = _run(left, W, init, alpha, k_max)
    tb = _run(right, W, partner_init, alpha, k_max)
    p_gap, q_gap = _matched_gaps(ta, tb, relation, alpha)
    f_gap = _f_gap(ta, tb)
    return EquivalenceReport(
        pair=pair,
        max_p_gap=p_gap,
        max_q_gap=q_gap,
        max_f_gap=f_gap,
        iterations_compared=k_max,
        passed=max(p_gap, q_gap, f_gap) <= tol,
        tol=tol,
    )


def check_uniform_lockstep(W, alpha, k_max=50, tol=EQUIVALENCE_TOL):
    """Run S1, S2, A1, A2 from the uniform law and compare all four."""
    W = as_matrix(W)
    p0 = uniform(W.shape[0])
    traces = {kind: _run(kind, W, p0, alpha, k_max) for kind in (_K.S1, _K.S2, _K.A1, _K.A2)}
    f_gap = max(
        _f_gap(traces[a], traces[b]) for a, b in itertools.combinations(traces, 2)
    )
    p_gap = q_gap = 0.0
    for left, right, relation in PAIRS.values():
        pg, qg = _matched_gaps(traces[left], traces[right], relation, alpha)
        p_gap, q_gap = max(p_gap, pg), max(q_gap, qg)
    return EquivalenceReport(
        pair="ALL_UNIFORM",
        max_p_gap=p_gap,
        max_q_gap=q_gap,
        max_f_gap=f_gap,
        iterations_compared=k_max,
        passed=max(p_gap, q_gap, f_gap) <= tol,
        tol=tol,
    )


@dataclass
class GlobalConvergenceReport:
    passed: bool
    spread: float
    value: float
    capacities: list = field(default_factory=list)
    all_converged: bool = True


def check_global_convergence(W, alpha, n_inits=20, seed=0, tol=1e-6, epsilon=1e-10,
                             kind=ObjectiveKind.S1):
    """Solve from ``n_inits`` seeded random interior starts; pass iff the
    final capacities lie within ``tol`` of each other."""
    if n_inits < 2:
        raise InvalidConfig("need at least two initial distributions")
    W = as_matrix(W)
    results = [
        solve(kind, W, SolverConfig(alpha=alpha, epsilon=epsilon,
                                    init=random_interior(W.shape[0], seed + i),
                                    snapshot_every=0))
        for i in range(n_inits)
    ]
    caps = [r.capacity for r in results]
    spread = max(caps) - min(caps)
    return GlobalConvergenceReport(
        passed=spread <= tol,
        spread=spread,
        value=max(caps),
        capacities=caps,
        all_converged=all(r.converged for r in results),
    )
