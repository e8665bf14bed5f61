"""RMAS instances: the `.rmas` text format, edge filtering and objective evaluation.

An instance is a directed multigraph on nodes ``0..n-1`` where every node
carries an explicit list of integer labels.  A labeling picks one label per
node; an edge ``(u, v)`` pays its weight when ``label(u) < label(v)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from rmas.errors import InfeasibleLabelingError, InstanceError, ParseError

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

Labeling = tuple[int, ...]


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    weight: float


@dataclass(frozen=True)
class RmasInstance:
    label_lists: tuple[tuple[int, ...], ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        lists = tuple(tuple(sorted(set(int(l) for l in ls))) for ls in self.label_lists)
        edges = tuple(
            e if isinstance(e, Edge) else Edge(int(e[0]), int(e[1]), float(e[2]))
            for e in self.edges
        )
        object.__setattr__(self, "label_lists", lists)
        object.__setattr__(self, "edges", edges)
        self.validate()

    @property
    def node_count(self) -> int:
        return len(self.label_lists)

    def validate(self):
        for v, labels in enumerate(self.label_lists):
            if not labels:
                raise InstanceError(f"node {v} has an empty label list")
            if labels[0] < INT64_MIN or labels[-1] > INT64_MAX:
                raise InstanceError(f"node {v} has a label outside the 64-bit range")
        n = self.node_count
        for i, e in enumerate(self.edges):
            if not (0 <= e.tail < n and 0 <= e.head < n):
                raise InstanceError(f"edge {i} ({e.tail}, {e.head}) references a missing node")
            if not math.isfinite(e.weight) or e.weight < 0:
                raise InstanceError(f"edge {i} has invalid weight {e.weight!r}")

    def lo(self, v: int) -> int:
        return self.label_lists[v][0]

    def hi(self, v: int) -> int:
        return self.label_lists[v][-1]

    def with_edges(self, edges: Iterable[Edge]) -> "RmasInstance":
        return RmasInstance(self.label_lists, tuple(edges))


@dataclass(frozen=True)
class FilterReport:
    kept: RmasInstance
    removed: tuple[tuple[Edge, str], ...] = field(default=())

    @property
    def removed_weight(self) -> float:
        return math.fsum(e.weight for e, _ in self.removed)


def total_weight(inst: RmasInstance) -> float:
    return math.fsum(e.weight for e in inst.edges)


def check_labeling(inst: RmasInstance, labeling: Sequence[int]) -> Labeling:
    """Return ``labeling`` as a tuple, raising if it is not feasible for ``inst``."""
    labeling = tuple(int(l) for l in labeling)
    if len(labeling) != inst.node_count:
        raise InfeasibleLabelingError(
            f"labeling has {len(labeling)} entries, instance has {inst.node_count} nodes"
        )
    for v, l in enumerate(labeling):
        if l not in inst.label_lists[v]:
            raise InfeasibleLabelingError(f"label {l} is not in the list of node {v}")
    return labeling


def evaluate(inst: RmasInstance, labeling: Sequence[int]) -> float:
    """Total weight of edges whose tail label is strictly below the head label."""
    labeling = check_labeling(inst, labeling)
    value = 0.0
    for e in inst.edges:
        if labeling[e.tail] < labeling[e.head]:
            value += e.weight
    return value


def filter_edges(inst: RmasInstance) -> FilterReport:
    """Drop self-loops and edges that can never be forward.

    An edge ``(u, v)`` is blocked when ``min L_u >= max L_v``; removing it
    does not change the optimum.
    """
    kept, removed = [], []
    for e in inst.edges:
        if e.tail == e.head:
            removed.append((e, "self-loop"))
        elif inst.lo(e.tail) >= inst.hi(e.head):
            removed.append((e, "blocked"))
        else:
            kept.append(e)
    return FilterReport(inst.with_edges(kept), tuple(removed))


def _format_weight(w: float) -> str:
    if w.is_integer() and abs(w) < 2**53:
        return str(int(w))
    return repr(w)


def serialize_instance(inst: RmasInstance) -> str:
    lines = [f"nodes {inst.node_count}"]
    for v, labels in enumerate(inst.label_lists):
        lines.append(" ".join(["labels", str(v), *map(str, labels)]))
    for e in inst.edges:
        lines.append(f"edge {e.tail} {e.head} {_format_weight(e.weight)}")
    return "\n".join(lines) + "\n"


def _int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected integer {what}, got {token!r}", lineno) from None


def parse_instance(text: str) -> RmasInstance:
    n = None
    lists: dict[int, list[int]] = {}
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        directive, *args = line.split()
        if n is None:
            if directive != "nodes":
                raise ParseError("first directive must be 'nodes <n>'", lineno)
            if len(args) != 1:
                raise ParseError("'nodes' takes exactly one argument", lineno)
            n = _int(args[0], lineno, "node count")
            if n < 1:
                raise ParseError("node count must be positive", lineno)
            continue
        if directive == "nodes":
            raise ParseError("duplicate 'nodes' directive", lineno)
        elif directive == "labels":
            if len(args) < 2:
                raise ParseError("'labels' needs a node and at least one label", lineno)
            v = _int(args[0], lineno, "node index")
            if not 0 <= v < n:
                raise ParseError(f"node index {v} out of range", lineno)
            if v in lists:
                raise ParseError(f"duplicate 'labels' line for node {v}", lineno)
            labels = [_int(tok, lineno, "label") for tok in args[1:]]
            if any(l < INT64_MIN or l > INT64_MAX for l in labels):
                raise ParseError("label outside the 64-bit signed range", lineno)
            lists[v] = labels
        elif directive == "edge":
            if len(args) != 3:
                raise ParseError("'edge' takes <tail> <head> <weight>", lineno)
            u = _int(args[0], lineno, "tail")
            v = _int(args[1], lineno, "head")
            for x in (u, v):
                if not 0 <= x < n:
                    raise ParseError(f"node index {x} out of range", lineno)
            try:
                w = float(args[2])
            except ValueError:
                raise ParseError(f"bad weight {args[2]!r}", lineno) from None
            if not math.isfinite(w):
                raise ParseError(f"weight must be finite, got {args[2]!r}", lineno)
            if w < 0:
                raise ParseError(f"negative weight {args[2]}", lineno)
            edges.append(Edge(u, v, w))
        else:
            raise ParseError(f"unknown directive {directive!r}", lineno)
    if n is None:
        raise ParseError("missing 'nodes' directive", 1)
    missing = [v for v in range(n) if v not in lists]
    if missing:
        raise ParseError(f"missing 'labels' line for node {missing[0]}", lineno if text else 1)
    return RmasInstance(tuple(tuple(lists[v]) for v in range(n)), tuple(edges))
