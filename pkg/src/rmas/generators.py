"""Seeded instance and digraph generators, plus the named fixtures.

All randomness comes from ``numpy.random.default_rng`` (PCG64); a suite of
instances seeds instance ``i`` with ``SeedSequence([seed, i])`` so each
instance is reproducible on its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from rmas.errors import GenSpecError
from rmas.instance import Edge, RmasInstance

KINDS = ("random", "mas", "khandekar", "dag", "fixture")


@dataclass(frozen=True)
class Digraph:
    node_count: int
    edges: tuple[tuple[int, int, float], ...] = ()

    def __post_init__(self):
        for u, v, w in self.edges:
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise GenSpecError(f"edge ({u}, {v}) references a missing node")
            if w < 0:
                raise GenSpecError(f"negative weight on edge ({u}, {v})")

    def is_acyclic(self) -> bool:
        indeg = [0] * self.node_count
        out = [[] for _ in range(self.node_count)]
        for u, v, _ in self.edges:
            out[u].append(v)
            indeg[v] += 1
        stack = [v for v in range(self.node_count) if indeg[v] == 0]
        seen = 0
        while stack:
            u = stack.pop()
            seen += 1
            for v in out[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    stack.append(v)
        return seen == self.node_count


@dataclass(frozen=True)
class GenSpec:
    kind: str = "random"
    n: int = 4
    m: int = 6
    label_lo: int = 0
    label_hi: int = 9
    max_list: int = 4
    weight_lo: int = 1
    weight_hi: int = 10
    p: float = 0.5
    seed: int = 0
    name: Optional[str] = None

    def check(self):
        if self.kind not in KINDS:
            raise GenSpecError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "fixture":
            return
        if self.n < 1 or self.m < 0:
            raise GenSpecError("need n >= 1 and m >= 0")
        if self.label_hi < self.label_lo or self.max_list < 1:
            raise GenSpecError("empty label pool or non-positive list size")
        if self.weight_hi < self.weight_lo or self.weight_lo < 0:
            raise GenSpecError("weight bounds must satisfy 0 <= lo <= hi")
        if not 0.0 <= self.p <= 1.0:
            raise GenSpecError("edge probability must lie in [0, 1]")
        if self.kind in ("random", "mas", "khandekar") and self.n == 1 and self.m > 0:
            raise GenSpecError("a single node admits no non-loop edges")


def _random_pairs(rng, n, m):
    tails = rng.integers(0, n, size=m)
    # shift the head past the tail so tail != head, uniform over the other n-1 nodes
    heads = (tails + rng.integers(1, n, size=m)) % n if n > 1 else tails
    return tails, heads


def gen_random(spec: GenSpec) -> RmasInstance:
    spec.check()
    rng = np.random.default_rng(spec.seed)
    pool = np.arange(spec.label_lo, spec.label_hi + 1)
    biggest = min(spec.max_list, len(pool))
    lists = []
    for _ in range(spec.n):
        k = int(rng.integers(1, biggest + 1))
        lists.append(tuple(int(l) for l in rng.choice(pool, size=k, replace=False)))
    tails, heads = _random_pairs(rng, spec.n, spec.m)
    weights = rng.integers(spec.weight_lo, spec.weight_hi + 1, size=spec.m)
    edges = tuple(Edge(int(u), int(v), float(w)) for u, v, w in zip(tails, heads, weights))
    return RmasInstance(tuple(lists), edges)


def gen_mas(g: Digraph) -> RmasInstance:
    """MAS as RMAS: every node gets the list 1..n."""
    full = tuple(range(1, g.node_count + 1))
    return RmasInstance((full,) * g.node_count, tuple(Edge(u, v, float(w)) for u, v, w in g.edges))


def gen_random_digraph(n: int, m: int, seed, weight_lo: int = 1, weight_hi: int = 1) -> Digraph:
    rng = np.random.default_rng(seed)
    tails, heads = _random_pairs(rng, n, m)
    weights = rng.integers(weight_lo, weight_hi + 1, size=m)
    return Digraph(n, tuple((int(u), int(v), float(w)) for u, v, w in zip(tails, heads, weights)))


def gen_random_dag(n: int, p: float, seed) -> Digraph:
    """Each forward pair (i, j), i < j, becomes a unit edge with probability p."""
    if not 0.0 <= p <= 1.0:
        raise GenSpecError("edge probability must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((i, j, 1.0))
    return Digraph(n, tuple(edges))


def gen_khandekar(n: int, k: int, seed, m: Optional[int] = None,
                  weight_lo: int = 1, weight_hi: int = 10) -> RmasInstance:
    """Lists {0} plus k-1 private positive labels per node.

    Node blocks are consecutive runs of positive labels, handed out to
    nodes in a seeded random order, so any two lists meet exactly in {0}.
    """
    if n < 1 or k < 1:
        raise GenSpecError("need n >= 1 and k >= 1")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    lists = []
    for v in range(n):
        start = 1 + int(order[v]) * (k - 1)
        lists.append((0, *range(start, start + k - 1)))
    if m is None:
        m = n * (n - 1) // 2
    if n == 1:
        m = 0
    tails, heads = _random_pairs(rng, n, m)
    weights = rng.integers(weight_lo, weight_hi + 1, size=m)
    edges = tuple(Edge(int(u), int(v), float(w)) for u, v, w in zip(tails, heads, weights))
    return RmasInstance(tuple(lists), edges)


FIXTURES = {
    "two-cycle": RmasInstance(((1, 2), (1, 2)), (Edge(0, 1, 1.0), Edge(1, 0, 1.0))),
    "single-edge": RmasInstance(((1,), (2,)), (Edge(0, 1, 3.0),)),
    "blocked": RmasInstance(((5,), (1, 3)), (Edge(0, 1, 2.0),)),
    "triangle": RmasInstance(
        ((1, 2, 3),) * 3, (Edge(0, 1, 1.0), Edge(1, 2, 1.0), Edge(2, 0, 1.0))
    ),
}


def fixture(name: str) -> RmasInstance:
    try:
        return FIXTURES[name]
    except KeyError:
        raise GenSpecError(f"unknown fixture {name!r}; expected one of {sorted(FIXTURES)}") from None


def generate(spec: GenSpec) -> RmasInstance:
    spec.check()
    if spec.kind == "random":
        return gen_random(spec)
    if spec.kind == "mas":
        return gen_mas(gen_random_digraph(spec.n, spec.m, spec.seed, spec.weight_lo, spec.weight_hi))
    if spec.kind == "dag":
        return gen_mas(gen_random_dag(spec.n, spec.p, spec.seed))
    if spec.kind == "khandekar":
        return gen_khandekar(spec.n, spec.max_list, spec.seed, spec.m, spec.weight_lo, spec.weight_hi)
    return fixture(spec.name or "")


def random_suite(count: int, seed: int, n_range=(2, 6), max_list: int = 4,
                 labels=(0, 9), weights=(1, 10)) -> Iterator[tuple[int, RmasInstance]]:
    """``count`` random instances with n, m drawn per instance; m ranges over 1..n(n-1)."""
    for i in range(count):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        m = int(rng.integers(1, n * (n - 1) + 1)) if n > 1 else 0
        spec = GenSpec("random", n, m, labels[0], labels[1], max_list,
                       weights[0], weights[1], seed=int(rng.integers(2**63)))
        yield i, gen_random(spec)
