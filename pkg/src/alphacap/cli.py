"""``capacity`` command-line tool.

Exit codes: 0 converged, 1 error, 2 not converged, 3 the four alpha
algorithms diverged from each other in ``--algorithm all`` mode with uniform
initialization (they must run in lockstep there).
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .channels import builtin_names, channel_digest, export_channel, load_channel
from .errors import CapacityError
from .objectives import ALPHA_KINDS, ObjectiveKind
from .simplex import make_distribution
from .solvers import DEFAULT_MAX_ITER, SolverConfig, solve, solve_all
from .verification import EQUIVALENCE_TOL, capacity_oracle

EXIT_OK, EXIT_ERROR, EXIT_NOT_CONVERGED, EXIT_LOCKSTEP = 0, 1, 2, 3

ALGORITHMS = ("shannon", "s1", "s2", "a1", "a2", "all")
# default oracle grid step by input alphabet size
ORACLE_STEPS = {1: 1.0, 2: 1e-3, 3: 5e-3, 4: 2e-2}


@dataclass
class RunRequest:
    channel_source: str
    algorithm: str = "s1"
    alpha: float = 2.0
    epsilon: float = 1e-7
    max_iter: int = DEFAULT_MAX_ITER
    init: str = "uniform"
    seed: int = 0
    trace_out: str = None
    format: str = "text"
    verify_oracle: bool = False
    oracle_step: float = None
    keep_rows: bool = False
    export: str = None


@dataclass
class Report:
    algorithm: str
    alpha: float
    capacity_nats: float
    iterations: int
    converged: bool
    p_final: list
    channel_digest: str
    f_kk: list = field(default_factory=list)
    f_k1k: list = field(default_factory=list)
    oracle_capacity: float = None
    oracle_delta: float = None

    @property
    def capacity_bits(self):
        return self.capacity_nats / math.log(2)

    def to_dict(self):
        doc = {
            "algorithm": self.algorithm,
            "alpha": self.alpha,
            "capacity_nats": self.capacity_nats,
            "capacity_bits": self.capacity_bits,
            "iterations": self.iterations,
            "converged": self.converged,
            "p_final": self.p_final,
            "channel_digest": self.channel_digest,
            "trace": {"f_kk": self.f_kk, "f_k1k": self.f_k1k},
        }
        if self.oracle_capacity is not None:
            doc["oracle_capacity"] = self.oracle_capacity
            doc["oracle_delta"] = self.oracle_delta
        return doc

    def to_text(self):
        lines = [
            f"algorithm   {self.algorithm.upper()}  (alpha = {self.alpha:g})",
            f"capacity    {self.capacity_nats:.5f} nats  ({self.capacity_bits:.5f} bits)",
            f"iterations  {self.iterations}  ({'converged' if self.converged else 'NOT converged'})",
            "p_final     " + " ".join(f"{v:.5f}" for v in self.p_final),
            f"channel     sha256:{self.channel_digest[:16]}",
        ]
        if self.oracle_capacity is not None:
            lines.append(
                f"oracle      {self.oracle_capacity:.5f} nats  (delta {self.oracle_delta:.2e})"
            )
        return "\n".join(lines)


def _report(result, digest, algorithm):
    return Report(
        algorithm=algorithm,
        alpha=result.alpha,
        capacity_nats=result.capacity,
        iterations=result.iterations,
        converged=result.converged,
        p_final=[float(v) for v in result.p_final.probs],
        channel_digest=digest,
        f_kk=[float(v) for v in result.trace.f_kk],
        f_k1k=[float(v) for v in result.trace.f_k1k],
    )


def _init(request):
    if request.init in ("uniform", "random"):
        return request.init
    text = Path(request.init).read_text()
    weights = [float(tok) for tok in text.split("#", 1)[0].split()]
    return make_distribution(weights)


def lockstep_gap(results):
    """Largest pairwise F discrepancy between the four alpha runs."""
    traces = [results[k].trace for k in ALPHA_KINDS]
    gap = 0.0
    for a in traces:
        for b in traces:
            for fa, fb in ((a.f_kk, b.f_kk), (a.f_k1k, b.f_k1k)):
                m = min(len(fa), len(fb))
                if m:
                    gap = max(gap, float(np.max(np.abs(fa[:m] - fb[:m]))))
    return gap


def _trace_doc(results):
    runs = []
    for kind, res in results.items():
        runs.append({
            "algorithm": kind.value,
            "alpha": res.alpha,
            "f_kk": [float(v) for v in res.trace.f_kk],
            "f_k1k": [float(v) for v in res.trace.f_k1k],
            "snapshots": [
                {"k": k, "p": [float(v) for v in p.probs], "q": q.matrix.tolist()}
                for k, p, q in res.trace.snapshots()
            ],
        })
    return {"runs": runs}


def run(request, out=None, err=None):
    """Execute ``request``, print the report(s) and return the exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        channel = load_channel(request.channel_source, renormalize=not request.keep_rows)
        if request.export:
            export_channel(channel, request.export)
        digest = channel_digest(channel)
        algorithm = request.algorithm.lower()
        if algorithm not in ALGORITHMS:
            raise CapacityError(f"unknown algorithm {request.algorithm!r}")
        alpha = 1.0 if algorithm == "shannon" else request.alpha
        config = SolverConfig(alpha=alpha, epsilon=request.epsilon, max_iter=request.max_iter,
                              init=_init(request), seed=request.seed)
        if algorithm == "all":
            results = solve_all(channel, config)
        else:
            kind = ObjectiveKind(algorithm)
            results = {kind: solve(kind, channel, config)}
        reports = [_report(res, digest, kind.value) for kind, res in results.items()]
        if request.verify_oracle:
            step = request.oracle_step or ORACLE_STEPS.get(channel.n_in, 2e-2)
            oracle = capacity_oracle(channel, alpha, step=step)
            for r in reports:
                r.oracle_capacity = oracle
                r.oracle_delta = abs(r.capacity_nats - oracle)
        gap = None
        if algorithm == "all" and request.init == "uniform":
            gap = lockstep_gap(results)
        if request.trace_out:
            Path(request.trace_out).write_text(json.dumps(_trace_doc(results), indent=1) + "\n")
    except (CapacityError, OSError, ValueError) as exc:
        print(f"capacity: error: {exc}", file=err)
        return EXIT_ERROR

    if request.format == "json":
        doc = {"reports": [r.to_dict() for r in reports]}
        if gap is not None:
            doc["lockstep"] = {"max_f_gap": gap, "tol": EQUIVALENCE_TOL,
                               "passed": gap <= EQUIVALENCE_TOL}
        print(json.dumps(doc, indent=2, sort_keys=True), file=out)
    else:
        print("\n\n".join(r.to_text() for r in reports), file=out)
        if gap is not None:
            print(f"\nlockstep    max |F gap| = {gap:.1e}", file=out)

    if gap is not None and gap > EQUIVALENCE_TOL:
        print(f"capacity: error: S1/S2/A1/A2 diverged from uniform init "
              f"(max F gap {gap:.3e} > {EQUIVALENCE_TOL:g})", file=err)
        return EXIT_LOCKSTEP
    if not all(r.converged for r in reports):
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="capacity",
        description="Channel capacity and Sibson/Arimoto alpha-capacities by alternating maximization.",
    )
    ap.add_argument("--channel", required=True,
                    help=f"channel file or builtin ({', '.join(builtin_names())})")
    ap.add_argument("--algorithm", default="s1", choices=ALGORITHMS)
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("--epsilon", type=float, default=1e-7,
                    help="stop when successive F(k,k) differ by less than this")
    ap.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    ap.add_argument("--init", default="uniform",
                    help="uniform, random, or a file of input weights")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trace-out", help="write per-iteration trace JSON here")
    ap.add_argument("--format", default="text", choices=("text", "json"))
    ap.add_argument("--verify-oracle", action="store_true",
                    help="compare against a brute-force grid maximum (inputs <= 4)")
    ap.add_argument("--oracle-step", type=float)
    ap.add_argument("--keep-rows", action="store_true",
                    help="use file rows as given instead of renormalizing them")
    ap.add_argument("--export", help="write the validated channel to this path")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return ap


def request_from_args(args):
    return RunRequest(
        channel_source=args.channel,
        algorithm=args.algorithm,
        alpha=args.alpha,
        epsilon=args.epsilon,
        max_iter=args.max_iter,
        init=args.init,
        seed=args.seed,
        trace_out=args.trace_out,
        format=args.format,
        verify_oracle=args.verify_oracle,
        oracle_step=args.oracle_step,
        keep_rows=args.keep_rows,
        export=args.export,
    )


def main(argv=None):
    return run(request_from_args(build_parser().parse_args(argv)))


if __name__ == "__main__":
    sys.exit(main())
