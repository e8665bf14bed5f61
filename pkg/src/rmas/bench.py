"""Experiment harness: approximation ratios against the exact optimum, dicut
tightness study, Monte Carlo checks of the randomized arms, and per-instance
verification of the bound chain."""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import astuple, dataclass
from typing import Iterable, Optional

import numpy as np

from rmas import exact, rounding, simple_approx
from rmas.combined import guarantee_bound, solve_combined
from rmas.errors import CapExceededError, LpError
from rmas.generators import gen_mas, gen_random_dag
from rmas.instance import RmasInstance, evaluate, filter_edges, total_weight
from rmas.lp import build_lp, check_solution, solve_lp

log = logging.getLogger(__name__)

SQRT8 = 2 * math.sqrt(2)
RATIO_HEADER = ("id", "n", "m", "W", "opt", "lp", "simple", "round", "combined", "ratio")
DICUT_HEADER = ("id", "n", "m", "maxdicut", "simple", "ratio")
BOUND_TOL = 1e-6


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{x:.12g}"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in astuple(row)])
    return buf.getvalue()


@dataclass(frozen=True)
class RatioRow:
    id: int
    n: int
    m: int
    W: float
    opt: float
    lp: Optional[float]
    simple: float
    round: Optional[float]
    combined: float
    ratio: float


def ratio_row(idx: int, inst: RmasInstance, cap: int = exact.DEFAULT_CAP) -> RatioRow:
    opt = exact.brute_force_opt(inst, cap).value
    report = solve_combined(inst)
    ratio = opt / report.value if report.value > 0 else 1.0
    return RatioRow(idx, inst.node_count, len(inst.edges), report.W, opt, report.lp,
                    report.arms["simple"], report.arms["round"], report.value, ratio)


def ratio_experiment(instances: Iterable[tuple[int, RmasInstance]],
                     cap: int = exact.DEFAULT_CAP) -> tuple[list[RatioRow], list[tuple[int, str]]]:
    """One row per instance in id order; instances over the oracle cap are skipped."""
    rows, skipped = [], []
    for idx, inst in instances:
        try:
            rows.append(ratio_row(idx, inst, cap))
        except CapExceededError as exc:
            log.warning("instance %d skipped: %s", idx, exc)
            skipped.append((idx, str(exc)))
    rows.sort(key=lambda r: r.id)
    return rows, skipped


def ratio_summary(rows: list[RatioRow]) -> str:
    if not rows:
        return "max ratio: n/a (no rows)"
    worst = max(rows, key=lambda r: (r.ratio, -r.id))
    return f"max ratio {worst.ratio:.12g} at instance {worst.id} (bound {SQRT8:.12g})"


@dataclass(frozen=True)
class DicutRow:
    id: int
    n: int
    m: int
    maxdicut: float
    simple: float
    ratio: float


def dicut_experiment(count: int, seed: int, n_range=(4, 12), p: float = 0.5) -> list[DicutRow]:
    """Random DAGs as MAS instances: opt is m, while min/max labelings only reach the max dicut."""
    rows = []
    for i in range(count):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        g = gen_random_dag(n, p, rng)
        m = len(g.edges)
        if m == 0:
            continue
        cut = exact.max_dicut(g)
        inst = gen_mas(g)
        simple_value = evaluate(inst, simple_approx.derandomize_minmax(inst)[0])
        rows.append(DicutRow(i, n, m, cut, simple_value, m / cut))
    return rows


@dataclass(frozen=True)
class MonteCarloResult:
    exact: float
    mean: float
    stderr: float
    trials: int

    @property
    def consistent(self) -> bool:
        if self.stderr == 0:
            return abs(self.mean - self.exact) <= 1e-9 * max(1.0, abs(self.exact))
        return abs(self.mean - self.exact) <= 4 * self.stderr


def _batch_values(inst: RmasInstance, labels: np.ndarray) -> np.ndarray:
    if not inst.edges:
        return np.zeros(len(labels))
    t = np.array([e.tail for e in inst.edges])
    h = np.array([e.head for e in inst.edges])
    w = np.array([e.weight for e in inst.edges])
    return (labels[:, t] < labels[:, h]).astype(float) @ w


def monte_carlo_experiment(inst: RmasInstance, trials: int, seed: int, arm: str = "simple",
                           marginals: Optional[rounding.MarginalState] = None) -> MonteCarloResult:
    """Empirical mean of a randomized arm versus its exact expectation.

    ``trials`` labelings are drawn in one batch from a single PCG64 stream.
    The rounding arm uses the LP-optimal marginals unless ``marginals`` is given.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    kept = filter_edges(inst).kept
    n = kept.node_count
    rng = np.random.default_rng(seed)
    if arm == "simple":
        state = simple_approx.initial_state(kept)
        exact_value = simple_approx.expected_minmax(kept, state)
        lo = np.array([kept.lo(v) for v in range(n)], dtype=np.int64)
        hi = np.array([kept.hi(v) for v in range(n)], dtype=np.int64)
        coins = rng.integers(0, 2, size=(trials, n)).astype(bool)
        labels = np.where(coins, hi, lo)
    elif arm == "round":
        if marginals is None:
            marginals = rounding.marginals_from_solution(solve_lp(build_lp(kept)))
        exact_value = rounding.expected_from_marginals(kept, marginals)
        u = rng.random((trials, n))
        labels = np.empty((trials, n), dtype=np.int64)
        for v, ls in enumerate(kept.label_lists):
            k = np.searchsorted(np.cumsum(marginals[v]), u[:, v], side="right")
            labels[:, v] = np.asarray(ls)[np.minimum(k, len(ls) - 1)]
    else:
        raise ValueError(f"unknown arm {arm!r}")
    values = _batch_values(kept, labels)
    stderr = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return MonteCarloResult(exact_value, float(values.mean()), stderr, trials)


@dataclass(frozen=True)
class Check:
    name: str
    passed: Optional[bool]
    detail: str

    @property
    def status(self) -> str:
        return {True: "PASS", False: "FAIL", None: "SKIP"}[self.passed]


def verify_instance(inst: RmasInstance, cap: int = exact.DEFAULT_CAP) -> list[Check]:
    """Filtering soundness, LP sandwich and the bound chain on one instance."""
    checks = []
    kept = filter_edges(inst).kept
    W = total_weight(kept)
    tol = 1e-9 * max(1.0, W)
    try:
        opt = exact.brute_force_opt(inst, cap).value
        opt_kept = exact.brute_force_opt(kept, cap).value
        checks.append(Check("filtering-soundness", abs(opt - opt_kept) <= tol,
                            f"opt={fmt(opt)} filtered={fmt(opt_kept)}"))
    except CapExceededError as exc:
        opt = None
        checks.append(Check("filtering-soundness", None, str(exc)))

    expected_simple = simple_approx.expected_minmax(kept, simple_approx.initial_state(kept))
    checks.append(Check("simple-expectation", expected_simple >= W / 4 - tol,
                        f"E={fmt(expected_simple)} W/4={fmt(W / 4)}"))

    try:
        sol = solve_lp(build_lp(kept))
        lp_value = sol.lp
        res = check_solution(sol.program, sol)
        checks.append(Check("lp-feasible", res.passed, f"max residual {res.worst:.3g}"))
        upper = lp_value <= W + 1e-9
        lower = True if opt is None else opt <= lp_value + BOUND_TOL
        checks.append(Check("lp-sandwich", upper and lower,
                            f"opt={fmt(opt)} lp={fmt(lp_value)} W={fmt(W)}"))
        m = rounding.marginals_from_solution(sol)
        e_round = rounding.expected_from_marginals(kept, m)
        target = lp_value**2 / (2 * W) if W > 0 else 0.0
        checks.append(Check("rounding-expectation", e_round >= target - BOUND_TOL,
                            f"E={fmt(e_round)} lp^2/2W={fmt(target)}"))
    except LpError as exc:
        lp_value = None
        checks.append(Check("lp-feasible", False, str(exc)))

    report = solve_combined(inst)
    g = guarantee_bound(W, None if lp_value is None else min(lp_value, W))
    chain = report.value >= g - BOUND_TOL
    if opt is not None:
        chain = chain and g >= opt / SQRT8 - BOUND_TOL
    checks.append(Check("bound-chain", chain,
                        f"value={fmt(report.value)} guarantee={fmt(g)} opt/2sqrt2="
                        f"{fmt(None if opt is None else opt / SQRT8)}"))
    return checks
