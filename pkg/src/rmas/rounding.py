"""Independent rounding of LP marginals and its conditional-expectation derandomization.

Each node draws its label from its LP marginal ``x[u]``, independently of the
others.  For an edge ``e = (u, v)`` the forward probability is
``p_e = sum_{l < l'} x_u(l) x_v(l')`` while the LP pays
``q_e = sum_{l < l'} y_uv(l, l')``.  Because the y-block has row sums ``x_u``
and column sums ``x_v``, ``p_e >= q_e**2 / 2`` (see :func:`matrix_lemma_gap`),
and convexity gives an expected value of at least ``lp**2 / (2 W)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from rmas.errors import LpError
from rmas.instance import Labeling, RmasInstance
from rmas.lp import LpSolution, check_solution

MarginalState = list[np.ndarray]


@dataclass(frozen=True)
class EdgeStats:
    p: float
    q: float


def edge_probability(labels_u, px, labels_v, py) -> float:
    """P[label(u) < label(v)] for independent draws from ``px`` and ``py``."""
    lu = np.asarray(labels_u)[:, None]
    lv = np.asarray(labels_v)[None, :]
    return float(np.sum(np.outer(px, py) * (lu < lv)))


def normalize_marginals(values: Sequence[np.ndarray]) -> MarginalState:
    """Clip solver noise into [0, 1] and rescale each vector to sum to one."""
    out = []
    for p in values:
        p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
        s = p.sum()
        if s <= 0:
            raise LpError("numerical", "marginal vector has no mass")
        out.append(p / s)
    return out


def marginals_from_solution(sol: LpSolution) -> MarginalState:
    n = sol.program.inst.node_count
    return normalize_marginals([sol.x(u) for u in range(n)])


def uniform_marginals(inst: RmasInstance) -> MarginalState:
    return [np.full(len(ls), 1.0 / len(ls)) for ls in inst.label_lists]


def expected_from_marginals(inst: RmasInstance, m: MarginalState) -> float:
    lists = inst.label_lists
    total = 0.0
    for e in inst.edges:
        total += e.weight * edge_probability(lists[e.tail], m[e.tail], lists[e.head], m[e.head])
    return total


def sample_from_marginals(inst: RmasInstance, m: MarginalState, seed) -> Labeling:
    """One independent draw per node, in node order, from a PCG64 stream."""
    rng = np.random.default_rng(seed)
    u = rng.random(inst.node_count)
    out = []
    for v, ls in enumerate(inst.label_lists):
        k = int(np.searchsorted(np.cumsum(m[v]), u[v], side="right"))
        out.append(ls[min(k, len(ls) - 1)])
    return tuple(out)


def matrix_lemma_gap(A) -> tuple[float, float]:
    """Both sides of ``sum_{i<j} r_i c_j >= 1/2 (sum_{i<j} a_ij)**2``.

    ``r`` and ``c`` are the row and column sums of the nonnegative square
    matrix ``A``.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if (A < 0).any():
        raise ValueError("matrix has a negative entry")
    upper = np.triu(np.ones_like(A, dtype=bool), k=1)
    r = A.sum(axis=1)
    c = A.sum(axis=0)
    lhs = float(np.sum(np.outer(r, c)[upper]))
    rhs = 0.5 * float(np.sum(A[upper])) ** 2
    return lhs, rhs


def edge_stats(inst: RmasInstance, sol: LpSolution) -> list[EdgeStats]:
    """Per-edge forward probability under rounding and the LP's forward mass."""
    m = marginals_from_solution(sol)
    lists = inst.label_lists
    stats = []
    for e in inst.edges:
        p = edge_probability(lists[e.tail], m[e.tail], lists[e.head], m[e.head])
        y = sol.y_oriented(e.tail, e.head)
        wins = np.asarray(lists[e.tail])[:, None] < np.asarray(lists[e.head])[None, :]
        stats.append(EdgeStats(p, float(np.sum(y * wins))))
    return stats


def derandomize_rounding(inst: RmasInstance, sol: LpSolution) -> tuple[Labeling, list[float]]:
    """Fix nodes in index order to the support label with the best conditional expectation.

    Only the edges incident to the node being fixed change their forward
    probability, so each candidate is scored by that local difference.  Ties
    go to the smallest label.  The returned trace starts with the expectation
    at the LP marginals and accumulates the chosen gains, so its last entry is
    the value of the returned labeling up to rounding.
    """
    report = check_solution(sol.program, sol)
    if not report.passed:
        raise LpError("infeasible", f"LP solution violates constraints by {report.worst:.3g}")
    m = marginals_from_solution(sol)
    lists = inst.label_lists
    incident: list[list] = [[] for _ in range(inst.node_count)]
    for e in inst.edges:
        if e.tail != e.head:
            incident[e.tail].append(e)
            incident[e.head].append(e)

    def local(v: int) -> float:
        s = 0.0
        for e in incident[v]:
            s += e.weight * edge_probability(lists[e.tail], m[e.tail], lists[e.head], m[e.head])
        return s

    current = expected_from_marginals(inst, m)
    trace = [current]
    for v in range(inst.node_count):
        before = local(v)
        old = m[v]
        best_k, best_gain = None, None
        for k in np.nonzero(old > 0)[0]:
            m[v] = np.zeros(len(lists[v]))
            m[v][k] = 1.0
            gain = local(v) - before
            if best_gain is None or gain > best_gain:
                best_k, best_gain = int(k), gain
        m[v] = np.zeros(len(lists[v]))
        m[v][best_k] = 1.0
        current += best_gain
        trace.append(current)
    labeling = tuple(lists[v][int(np.argmax(m[v]))] for v in range(inst.node_count))
    return labeling, trace
