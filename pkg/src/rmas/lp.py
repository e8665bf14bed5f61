"""The marginal/joint LP relaxation and a dense two-phase simplex to solve it.

Variables:

* ``x[u][l]`` for every node ``u`` and label ``l`` in its own list,
* one block ``y[(a, b)][l, l']`` per unordered adjacent pair ``a < b``,
  indexed by ``l`` in ``L_a`` and ``l'`` in ``L_b``.  The reverse orientation
  ``y_ba(l', l)`` is the transposed entry, so symmetry holds by construction.

Constraints: each ``x[u]`` sums to one, and every y-block has row sums equal
to ``x[a]`` and column sums equal to ``x[b]``.  The objective pays ``w`` on
``y[(a, b)][l, l']`` for each edge ``a -> b`` with ``l < l'`` and for each edge
``b -> a`` with ``l' < l``.

Non-adjacent pairs get no y-block: the product of the marginals is always a
feasible joint for them and they carry no objective weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from rmas.errors import LpError
from rmas.instance import RmasInstance, check_labeling

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7
MAX_PIVOTS = 200_000


@dataclass
class LpProgram:
    inst: RmasInstance
    x_offset: list[int]
    pairs: list[tuple[int, int]]
    y_offset: dict[tuple[int, int], int]
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    # constraint family per row: "simplex", "row" or "col"
    families: list[str] = field(default_factory=list)

    @property
    def n_vars(self) -> int:
        return len(self.c)

    def x_slice(self, u: int) -> slice:
        start = self.x_offset[u]
        return slice(start, start + len(self.inst.label_lists[u]))

    def y_shape(self, pair) -> tuple[int, int]:
        a, b = pair
        return len(self.inst.label_lists[a]), len(self.inst.label_lists[b])

    def y_slice(self, pair) -> slice:
        start = self.y_offset[pair]
        r, s = self.y_shape(pair)
        return slice(start, start + r * s)

    def variable_names(self) -> list[str]:
        names = [""] * self.n_vars
        lists = self.inst.label_lists
        for u in range(self.inst.node_count):
            for k, l in enumerate(lists[u]):
                names[self.x_offset[u] + k] = f"x[{u},{l}]"
        for a, b in self.pairs:
            base = self.y_offset[(a, b)]
            for i, l in enumerate(lists[a]):
                for j, m in enumerate(lists[b]):
                    names[base + i * len(lists[b]) + j] = f"y[{a},{b},{l},{m}]"
        return names


@dataclass
class LpSolution:
    program: LpProgram
    values: np.ndarray
    lp: float

    def x(self, u: int) -> np.ndarray:
        return self.values[self.program.x_slice(u)]

    def y(self, pair) -> np.ndarray:
        return self.values[self.program.y_slice(pair)].reshape(self.program.y_shape(pair))

    def y_oriented(self, tail: int, head: int) -> np.ndarray:
        """Joint block indexed [tail label, head label]."""
        if tail < head:
            return self.y((tail, head))
        return self.y((head, tail)).T


def adjacent_pairs(inst: RmasInstance) -> list[tuple[int, int]]:
    return sorted({(min(e.tail, e.head), max(e.tail, e.head)) for e in inst.edges if e.tail != e.head})


def build_lp(inst: RmasInstance) -> LpProgram:
    lists = inst.label_lists
    x_offset, nv = [], 0
    for ls in lists:
        x_offset.append(nv)
        nv += len(ls)
    pairs = adjacent_pairs(inst)
    y_offset = {}
    for a, b in pairs:
        y_offset[(a, b)] = nv
        nv += len(lists[a]) * len(lists[b])

    c = np.zeros(nv)
    for e in inst.edges:
        if e.tail == e.head:
            continue
        a, b = min(e.tail, e.head), max(e.tail, e.head)
        la = np.asarray(lists[a])[:, None]
        lb = np.asarray(lists[b])[None, :]
        wins = (la < lb) if e.tail == a else (lb < la)
        c[y_offset[(a, b)]: y_offset[(a, b)] + wins.size] += e.weight * wins.ravel()

    rows, families = [], []
    for u, ls in enumerate(lists):
        row = np.zeros(nv)
        row[x_offset[u]: x_offset[u] + len(ls)] = 1.0
        rows.append(row)
        families.append("simplex")
    b_vec = [1.0] * len(rows)
    for a, b in pairs:
        r, s = len(lists[a]), len(lists[b])
        base = y_offset[(a, b)]
        for i in range(r):
            row = np.zeros(nv)
            row[base + i * s: base + (i + 1) * s] = 1.0
            row[x_offset[a] + i] = -1.0
            rows.append(row)
            families.append("row")
        for j in range(s):
            row = np.zeros(nv)
            row[base + j: base + r * s: s] = 1.0
            row[x_offset[b] + j] = -1.0
            rows.append(row)
            families.append("col")
        b_vec.extend([0.0] * (r + s))
    A = np.array(rows) if rows else np.zeros((0, nv))
    return LpProgram(inst, x_offset, pairs, y_offset, c, A, np.array(b_vec), families)


def _pivot(T: np.ndarray, r: int, k: int):
    T[r] /= T[r, k]
    col = T[:, k].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _simplex(T: np.ndarray, basis: list[int], n_cols: int):
    """Maximize the objective held in the last row of ``T`` using Bland's rule.

    The last row stores reduced costs ``c_j - z_j``; only the first
    ``n_cols`` columns may enter.
    """
    m = len(basis)
    for _ in range(MAX_PIVOTS):
        reduced = T[-1, :n_cols]
        candidates = np.nonzero(reduced > PIVOT_TOL)[0]
        if len(candidates) == 0:
            return
        k = int(candidates[0])
        col = T[:m, k]
        pos = np.nonzero(col > PIVOT_TOL)[0]
        if len(pos) == 0:
            raise LpError("unbounded", f"column {k} has no positive pivot")
        ratios = T[pos, -1] / col[pos]
        best = ratios.min()
        ties = pos[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, k)
        basis[r] = k
    raise LpError("numerical", f"no convergence after {MAX_PIVOTS} pivots")


def simplex_max(c: np.ndarray, A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
    """Solve ``max c.x  s.t.  A x = b, x >= 0`` with a dense two-phase tableau."""
    m, n = A.shape
    A = A.astype(float).copy()
    b = b.astype(float).copy()
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    # phase 1: artificial per row, maximize -sum(artificials)
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = A.sum(axis=0)
    T[-1, -1] = b.sum()
    basis = list(range(n, n + m))
    _simplex(T, basis, n + m)
    if T[-1, -1] > FEAS_TOL * max(1.0, b.sum()):
        raise LpError("infeasible", f"phase 1 residual {T[-1, -1]:.3g}")

    # drive remaining artificials out; rows with no usable pivot are redundant
    keep = []
    for r in range(m):
        if basis[r] >= n:
            nz = np.nonzero(np.abs(T[r, :n]) > PIVOT_TOL)[0]
            if len(nz) == 0:
                continue
            _pivot(T, r, int(nz[0]))
            basis[r] = int(nz[0])
        keep.append(r)
    T = np.vstack([T[keep][:, list(range(n)) + [n + m]], np.zeros((1, n + 1))])
    basis = [basis[r] for r in keep]

    # phase 2: reduced costs of the real objective w.r.t. the current basis
    cb = c[basis]
    T[-1, :n] = c - cb @ T[:-1, :n]
    T[-1, -1] = -(cb @ T[:-1, -1])
    _simplex(T, basis, n)

    # recover the basic solution directly from the original system for accuracy
    x = np.zeros(n)
    if basis:
        B = A[keep][:, basis]
        try:
            xb = np.linalg.solve(B, b[keep])
        except np.linalg.LinAlgError:
            xb = T[:-1, -1]
        x[basis] = xb
    if x.min(initial=0.0) < -FEAS_TOL:
        raise LpError("numerical", f"basic solution has negative entry {x.min():.3g}")
    x = np.clip(x, 0.0, None)
    return x, float(c @ x)


def solve_lp(prog: LpProgram) -> LpSolution:
    values, _ = simplex_max(prog.c, prog.A, prog.b)
    values = np.clip(values, 0.0, 1.0)
    sol = LpSolution(prog, values, float(prog.c @ values))
    report = check_solution(prog, sol)
    if not report.passed:
        raise LpError("numerical", f"solution violates constraints by {report.worst:.3g}")
    return sol


def embed_labeling(inst: RmasInstance, labeling) -> LpSolution:
    """Integral LP point of a labeling: indicator marginals, outer-product joints."""
    labeling = check_labeling(inst, labeling)
    prog = build_lp(inst)
    values = np.zeros(prog.n_vars)
    lists = inst.label_lists
    for u, l in enumerate(labeling):
        values[prog.x_offset[u] + lists[u].index(l)] = 1.0
    for a, b in prog.pairs:
        i, j = lists[a].index(labeling[a]), lists[b].index(labeling[b])
        values[prog.y_offset[(a, b)] + i * len(lists[b]) + j] = 1.0
    return LpSolution(prog, values, float(prog.c @ values))


@dataclass(frozen=True)
class ResidualReport:
    residuals: dict[str, float]
    tol: float = FEAS_TOL

    @property
    def worst(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.worst <= self.tol


def check_solution(prog: LpProgram, sol: LpSolution) -> ResidualReport:
    """Largest absolute violation per constraint family and per bound."""
    if sol.values.shape != (prog.n_vars,) or (
        sol.program is not prog and sol.program.inst != prog.inst
    ):
        raise LpError("catalog-mismatch", "solution catalog does not match the program")
    v = sol.values
    res = {"simplex": 0.0, "row": 0.0, "col": 0.0}
    if len(prog.b):
        viol = np.abs(prog.A @ v - prog.b)
        fam = np.array(prog.families)
        for name in res:
            mask = fam == name
            if mask.any():
                res[name] = float(viol[mask].max())
    res["lower"] = float(max(0.0, -v.min(initial=0.0)))
    res["upper"] = float(max(0.0, v.max(initial=0.0) - 1.0))
    return ResidualReport(res)
