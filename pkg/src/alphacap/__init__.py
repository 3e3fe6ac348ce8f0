"""Channel capacity and Sibson/Arimoto alpha-capacities of discrete memoryless
channels by alternating maximization."""

__version__ = "0.1.0"

from .channels import builtin_channel, load_channel
from .errors import CapacityError
from .measures import (
    arimoto_cond_entropy,
    arimoto_mi,
    gallager_e0,
    renyi_divergence,
    renyi_entropy,
    shannon_cond_entropy,
    shannon_entropy,
    shannon_mi,
    sibson_mi,
)
from .objectives import ObjectiveKind, eval_objective, optimal_p, optimal_q
from .simplex import (
    Channel,
    Distribution,
    ReverseConditional,
    make_channel,
    make_distribution,
    random_interior,
    tilt,
    tilt_conditional,
    uniform,
)
from .solvers import IterationTrace, SolveResult, SolverConfig, solve, solve_all
