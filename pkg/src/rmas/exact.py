"""Exhaustive oracles for small instances: exact RMAS optimum and maximum directed cut."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from rmas.errors import CapExceededError
from rmas.instance import Labeling, RmasInstance, evaluate

DEFAULT_CAP = 10**7
DICUT_MAX_NODES = 24
_CHUNK = 1 << 16


@dataclass(frozen=True)
class OptResult:
    labeling: Labeling
    value: float
    enumerated_count: int


def search_space(inst: RmasInstance) -> int:
    return math.prod(len(ls) for ls in inst.label_lists)


def brute_force_opt(inst: RmasInstance, cap: int = DEFAULT_CAP) -> OptResult:
    """Enumerate every feasible labeling and return a maximizer.

    Labelings are visited as a mixed-radix counter with node 0 as the most
    significant digit, which is lexicographic order on label vectors, so the
    first maximizer found is the lexicographically smallest one.
    """
    size = search_space(inst)
    if size > cap:
        raise CapExceededError(size, cap)
    n = inst.node_count
    radices = np.array([len(ls) for ls in inst.label_lists], dtype=np.int64)
    # place value of each digit, node n-1 least significant
    place = np.ones(n, dtype=np.int64)
    for v in range(n - 2, -1, -1):
        place[v] = place[v + 1] * radices[v + 1]
    tables = [np.asarray(ls, dtype=np.int64) for ls in inst.label_lists]
    tails = np.array([e.tail for e in inst.edges], dtype=np.int64)
    heads = np.array([e.head for e in inst.edges], dtype=np.int64)
    weights = np.array([e.weight for e in inst.edges], dtype=np.float64)

    best_value, best_index = -1.0, 0
    for start in range(0, size, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, size), dtype=np.int64)
        digits = (idx[:, None] // place[None, :]) % radices[None, :]
        labels = np.empty_like(digits)
        for v in range(n):
            labels[:, v] = tables[v][digits[:, v]]
        if len(weights):
            forward = labels[:, tails] < labels[:, heads]
            values = forward.astype(np.float64) @ weights
        else:
            values = np.zeros(len(idx))
        k = int(np.argmax(values))
        if values[k] > best_value:
            best_value, best_index = float(values[k]), int(idx[k])

    digits = (best_index // place) % radices
    labeling = tuple(int(tables[v][digits[v]]) for v in range(n))
    return OptResult(labeling, evaluate(inst, labeling), size)


def max_dicut(g) -> float:
    """Maximum total weight of edges leaving S, over all node subsets S."""
    n = g.node_count
    if n > DICUT_MAX_NODES:
        raise CapExceededError(2**n, 2**DICUT_MAX_NODES)
    if not g.edges:
        return 0.0
    tails = np.array([e[0] for e in g.edges], dtype=np.int64)
    heads = np.array([e[1] for e in g.edges], dtype=np.int64)
    weights = np.array([e[2] for e in g.edges], dtype=np.float64)
    best = 0.0
    for start in range(0, 1 << n, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, 1 << n), dtype=np.int64)
        in_s = ((masks[:, None] >> tails[None, :]) & 1).astype(bool)
        head_out = ((masks[:, None] >> heads[None, :]) & 1) == 0
        values = (in_s & head_out).astype(np.float64) @ weights
        best = max(best, float(values.max()))
    return best
