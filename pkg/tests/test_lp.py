import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from lp_oracle import full_lp_value
from rmas.errors import InfeasibleLabelingError, LpError
from rmas.exact import brute_force_opt
from rmas.generators import random_suite
from rmas.instance import Edge, RmasInstance, evaluate, filter_edges, total_weight
from rmas.lp import (
    LpSolution,
    build_lp,
    check_solution,
    embed_labeling,
    simplex_max,
    solve_lp,
)
from test_instance import instances


def test_build_single_edge(i2):
    prog = build_lp(i2)
    assert prog.n_vars == 3
    assert prog.pairs == [(0, 1)]
    assert prog.y_shape((0, 1)) == (1, 1)
    assert prog.c[prog.y_slice((0, 1))].tolist() == [3.0]
    assert prog.c[:2].tolist() == [0.0, 0.0]


def test_build_two_cycle(i1):
    prog = build_lp(i1)
    assert prog.n_vars == 4 + 4
    y = prog.c[prog.y_slice((0, 1))].reshape(2, 2)
    # edge 0->1 pays on (1, 2); edge 1->0 pays on y_01(2, 1)
    assert y.tolist() == [[0.0, 1.0], [1.0, 0.0]]
    assert prog.families == ["simplex", "simplex", "row", "row", "col", "col"]


def test_isolated_node_gets_only_simplex_row():
    inst = RmasInstance(((1, 2), (1, 2), (4, 5, 6)), (Edge(0, 1, 1.0),))
    prog = build_lp(inst)
    assert prog.pairs == [(0, 1)]
    assert prog.n_vars == 7 + 4
    rows_on_2 = np.nonzero(prog.A[:, prog.x_slice(2)].any(axis=1))[0]
    assert [prog.families[r] for r in rows_on_2] == ["simplex"]


def test_solve_single_edge(i2):
    sol = solve_lp(build_lp(i2))
    assert sol.lp == pytest.approx(3, abs=1e-9)
    assert sol.values.tolist() == pytest.approx([1.0, 1.0, 1.0])


def test_solve_two_cycle(i1):
    assert solve_lp(build_lp(i1)).lp == pytest.approx(1, abs=1e-9)


def test_solve_triangle(i4):
    prog = build_lp(i4)
    lp = solve_lp(prog).lp
    assert lp >= embed_labeling(i4, (1, 2, 3)).lp - 1e-9
    assert lp == pytest.approx(full_lp_value(i4), abs=1e-7)
    assert lp == pytest.approx(2.0, abs=1e-7)


def test_embed_examples(i1, i2, i4):
    for inst, lab, value in [(i1, (1, 2), 1), (i2, (1, 2), 3), (i4, (1, 2, 3), 2)]:
        sol = embed_labeling(inst, lab)
        assert sol.lp == value == evaluate(inst, lab)
        report = check_solution(sol.program, sol)
        assert report.passed and report.worst == 0


def test_embed_rejects_infeasible(i1):
    with pytest.raises(InfeasibleLabelingError):
        embed_labeling(i1, (3, 1))


def test_check_flags_perturbation(i4):
    sol = solve_lp(build_lp(i4))
    values = sol.values.copy()
    values[0] += 1e-3
    report = check_solution(sol.program, LpSolution(sol.program, values, sol.lp))
    assert not report.passed
    assert report.residuals["simplex"] == pytest.approx(1e-3, rel=1e-6)


def test_check_catalog_mismatch(i1, i4):
    with pytest.raises(LpError):
        check_solution(build_lp(i1), solve_lp(build_lp(i4)))


def test_simplex_detects_infeasible_and_unbounded():
    with pytest.raises(LpError) as info:
        simplex_max(np.array([1.0]), np.array([[1.0], [1.0]]), np.array([1.0, 2.0]))
    assert info.value.status == "infeasible"
    with pytest.raises(LpError) as info:
        simplex_max(np.array([1.0, 0.0]), np.array([[1.0, -1.0]]), np.array([0.0]))
    assert info.value.status == "unbounded"


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 5), st.integers(0, 2**31))
def test_simplex_matches_highs_on_random_lps(m, extra, seed):
    rng = np.random.default_rng(seed)
    n = m + extra
    A = rng.integers(-3, 4, size=(m, n)).astype(float)
    x0 = rng.random(n)
    b = A @ x0
    A = np.vstack([A, np.ones(n)])
    b = np.append(b, x0.sum() + 1.0)
    A = np.hstack([A, np.eye(m + 1)[:, -1:]])  # slack on the box row keeps it bounded
    c = rng.normal(size=n + 1)
    ref = linprog(-c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    x, value = simplex_max(c, A, b)
    assert value == pytest.approx(-ref.fun, abs=1e-7)
    assert np.abs(A @ x - b).max() < 1e-7


def small_suite():
    return [filter_edges(inst).kept for _, inst in random_suite(40, 5)]


@pytest.mark.parametrize("inst", small_suite())
def test_solution_checks_and_sandwich(inst):
    prog = build_lp(inst)
    sol = solve_lp(prog)
    assert check_solution(prog, sol).passed
    ref = linprog(-prog.c, A_eq=prog.A, b_eq=prog.b, bounds=(0, None), method="highs")
    assert sol.lp == pytest.approx(-ref.fun, abs=1e-7)
    assert brute_force_opt(inst).value <= sol.lp + 1e-6
    assert sol.lp <= total_weight(inst) + 1e-9
    for u in range(inst.node_count):
        assert sol.x(u).sum() == pytest.approx(1, abs=1e-7)
    for pair in prog.pairs:
        a, b = pair
        assert sol.y(pair).sum(axis=1) == pytest.approx(sol.x(a), abs=1e-7)
        assert sol.y(pair).sum(axis=0) == pytest.approx(sol.x(b), abs=1e-7)
        assert np.array_equal(sol.y_oriented(b, a), sol.y(pair).T)


@settings(max_examples=40, deadline=None)
@given(instances(max_nodes=4, max_edges=8, labels=(0, 2)))
def test_pair_restriction_matches_full_formulation(inst):
    inst = filter_edges(inst).kept
    assert solve_lp(build_lp(inst)).lp == pytest.approx(full_lp_value(inst), abs=1e-6)


@settings(max_examples=25, deadline=None)
@given(instances(max_nodes=5, integer_weights=False), st.floats(0.01, 100))
def test_scaling_equivariance(inst, scale):
    inst = filter_edges(inst).kept
    scaled = inst.with_edges(Edge(e.tail, e.head, e.weight * scale) for e in inst.edges)
    lp = solve_lp(build_lp(inst)).lp
    assert solve_lp(build_lp(scaled)).lp == pytest.approx(lp * scale, rel=1e-9, abs=1e-9)
