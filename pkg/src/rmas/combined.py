"""Best-of-both solver with a max(W/4, lp^2/2W) certificate, plus single-algorithm runs.

The simple arm earns at least W/4 and the rounding arm at least lp^2/(2W).
Since opt <= lp <= W, the better of the two is at least
opt * max(W/(4 opt), opt/(2W)) >= opt / (2 sqrt 2), with equality at W/opt = sqrt 2.
"""

from __future__ import annotations

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Optional

from rmas import exact, rounding, simple_approx
from rmas.errors import LpError
from rmas.instance import Labeling, RmasInstance, evaluate, filter_edges, total_weight
from rmas.lp import build_lp, solve_lp

log = logging.getLogger(__name__)

ALGORITHMS = ("exact", "simple", "simple-rand", "round", "round-rand", "combined")
BOUND_TOL = 1e-9


@dataclass
class SolveReport:
    algorithm: str
    labeling: Labeling
    value: float
    W: float
    lp: Optional[float]
    guarantee: float
    opt: Optional[float] = None
    timings_ms: dict[str, float] = field(default_factory=dict)
    lp_status: Optional[str] = None
    # value reached by each arm of the combined solver
    arms: dict[str, Optional[float]] = field(default_factory=dict)

    def to_json(self, timings: bool = False) -> dict:
        doc = {
            "algorithm": self.algorithm,
            "value": self.value,
            "labeling": list(self.labeling),
            "W": self.W,
            "lp": self.lp,
            "guarantee": self.guarantee,
        }
        if self.opt is not None:
            doc["opt"] = self.opt
        if self.lp_status is not None:
            doc["lp_status"] = self.lp_status
        if timings:
            doc["timings_ms"] = dict(self.timings_ms)
        return doc


def guarantee_bound(W: float, lp: Optional[float]) -> float:
    """max(W/4, lp^2/(2W)); zero for an empty instance, W/4 when the LP is absent."""
    if W == 0:
        return 0.0
    if lp is None:
        return W / 4
    if lp > W + BOUND_TOL * max(1.0, W) or lp < -BOUND_TOL:
        raise ValueError(f"lp={lp!r} outside [0, W={W!r}]")
    return max(W / 4, lp * lp / (2 * W))


@contextmanager
def _phase(timings: dict, name: str):
    t0 = time.perf_counter()
    yield
    timings[name] = (time.perf_counter() - t0) * 1000.0


def solve_combined(inst: RmasInstance) -> SolveReport:
    timings: dict[str, float] = {}
    with _phase(timings, "filter"):
        kept = filter_edges(inst).kept
        W = total_weight(kept)
    with _phase(timings, "simple"):
        simple_lab, _ = simple_approx.derandomize_minmax(kept)
        simple_val = evaluate(inst, simple_lab)

    lp_value, status = None, None
    round_lab, round_val = None, None
    try:
        with _phase(timings, "lp"):
            sol = solve_lp(build_lp(kept))
            lp_value = min(sol.lp, W)
        with _phase(timings, "round"):
            round_lab, _ = rounding.derandomize_rounding(kept, sol)
            round_val = evaluate(inst, round_lab)
    except LpError as exc:
        log.warning("LP arm failed, falling back to the simple arm: %s", exc)
        status = exc.status

    if round_val is not None and round_val > simple_val:
        labeling, value = round_lab, round_val
    else:
        labeling, value = simple_lab, simple_val
    return SolveReport(
        "combined", labeling, value, W, lp_value,
        guarantee_bound(W, lp_value), timings_ms=timings, lp_status=status,
        arms={"simple": simple_val, "round": round_val},
    )


def solve(inst: RmasInstance, algorithm: str = "combined", seed: int = 0,
          cap: int = exact.DEFAULT_CAP) -> SolveReport:
    """Run one named algorithm and wrap its result with the bound certificate."""
    if algorithm == "combined":
        return solve_combined(inst)
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    timings: dict[str, float] = {}
    with _phase(timings, "filter"):
        kept = filter_edges(inst).kept
        W = total_weight(kept)
    lp_value = None
    guarantee = 0.0
    opt = None
    with _phase(timings, algorithm):
        if algorithm == "exact":
            res = exact.brute_force_opt(inst, cap)
            labeling, opt = res.labeling, res.value
        elif algorithm == "simple":
            labeling, _ = simple_approx.derandomize_minmax(kept)
            guarantee = W / 4
        elif algorithm == "simple-rand":
            labeling = simple_approx.sample_minmax(kept, seed)
        else:
            sol = solve_lp(build_lp(kept))
            lp_value = min(sol.lp, W)
            if algorithm == "round":
                labeling, _ = rounding.derandomize_rounding(kept, sol)
                guarantee = lp_value**2 / (2 * W) if W > 0 else 0.0
            else:
                labeling = rounding.sample_from_marginals(
                    kept, rounding.marginals_from_solution(sol), seed
                )
    return SolveReport(algorithm, labeling, evaluate(inst, labeling), W, lp_value,
                       guarantee, opt=opt, timings_ms=timings)
