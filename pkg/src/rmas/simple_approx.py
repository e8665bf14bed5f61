"""The min/max coin-flip algorithm and its derandomization.

Each node independently takes the smallest or the largest label of its list
with probability 1/2.  On a filtered instance every edge is forward with
probability at least 1/4, so the expected value is at least W/4.  Fixing the
nodes one at a time to the side with the larger conditional expectation
turns this into a deterministic algorithm with the same guarantee.

Random draws use numpy's PCG64 generator (``numpy.random.default_rng``),
which is stable across platforms for a given integer seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from rmas.instance import Labeling, RmasInstance, evaluate, filter_edges


@dataclass(frozen=True)
class Fixed:
    label: int


@dataclass(frozen=True)
class Coin:
    lo: int
    hi: int


NodeState = Union[Fixed, Coin]


def initial_state(inst: RmasInstance) -> list[NodeState]:
    """All-coin state; nodes with a single-label list are Fixed."""
    return [
        Fixed(inst.lo(v)) if inst.lo(v) == inst.hi(v) else Coin(inst.lo(v), inst.hi(v))
        for v in range(inst.node_count)
    ]


def _outcomes(s: NodeState):
    if isinstance(s, Fixed):
        return ((s.label, 1.0),)
    return ((s.lo, 0.5), (s.hi, 0.5))


def edge_forward_probability(a: NodeState, b: NodeState) -> float:
    # at most 4 outcome pairs, probabilities are dyadic so the sum is exact
    p = 0.0
    for la, pa in _outcomes(a):
        for lb, pb in _outcomes(b):
            if la < lb:
                p += pa * pb
    return p


def expected_minmax(inst: RmasInstance, state: Sequence[NodeState]) -> float:
    """E[value] when every node is independently drawn from its state."""
    total = 0.0
    for e in inst.edges:
        total += e.weight * edge_forward_probability(state[e.tail], state[e.head])
    return total


def sample_minmax(inst: RmasInstance, seed: int) -> Labeling:
    inst = filter_edges(inst).kept
    coins = np.random.default_rng(seed).integers(0, 2, size=inst.node_count)
    return tuple(inst.hi(v) if c else inst.lo(v) for v, c in enumerate(coins))


def derandomize_minmax(inst: RmasInstance) -> tuple[Labeling, list[float]]:
    """Fix nodes in index order, keeping the conditional expectation from dropping.

    Returns the labeling and the trace of conditional expectations, starting
    with the unconditioned expectation and ending with the achieved value.
    """
    inst = filter_edges(inst).kept
    state = initial_state(inst)
    trace = [expected_minmax(inst, state)]
    for v in range(inst.node_count):
        s = state[v]
        if isinstance(s, Coin):
            state[v] = Fixed(s.lo)
            at_lo = expected_minmax(inst, state)
            state[v] = Fixed(s.hi)
            at_hi = expected_minmax(inst, state)
            if at_lo >= at_hi:
                state[v] = Fixed(s.lo)
        trace.append(expected_minmax(inst, state))
    labeling = tuple(s.label for s in state)
    return labeling, trace

