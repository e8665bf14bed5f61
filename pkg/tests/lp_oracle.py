"""The relaxation written out literally over all node pairs and the global label set,
solved with scipy's HiGHS. Shares no code with rmas.lp."""

import numpy as np
from scipy.optimize import linprog


def full_lp_value(inst):
    n = inst.node_count
    L = sorted(set().union(*inst.label_lists))
    k = len(L)
    xi = {(u, a): u * k + a for u in range(n) for a in range(k)}
    base = n * k
    yi = {}
    for u in range(n):
        for v in range(n):
            for a in range(k):
                for b in range(k):
                    yi[(u, v, a, b)] = base + len(yi)
    nv = base + len(yi)
    c = np.zeros(nv)
    for e in inst.edges:
        for a in range(k):
            for b in range(a + 1, k):
                c[yi[(e.tail, e.head, a, b)]] += e.weight
    rows, rhs = [], []

    def add(coeffs, value):
        row = np.zeros(nv)
        for idx, coef in coeffs:
            row[idx] += coef
        rows.append(row)
        rhs.append(value)

    for u in range(n):
        add([(xi[(u, a)], 1.0) for a in range(k)], 1.0)
        for a in range(k):
            if L[a] not in inst.label_lists[u]:
                add([(xi[(u, a)], 1.0)], 0.0)
    for u in range(n):
        for v in range(n):
            for a in range(k):
                add([(yi[(u, v, a, b)], 1.0) for b in range(k)] + [(xi[(u, a)], -1.0)], 0.0)
            for a in range(k):
                for b in range(k):
                    if (u, a) < (v, b):
                        add([(yi[(u, v, a, b)], 1.0), (yi[(v, u, b, a)], -1.0)], 0.0)
    res = linprog(-c, A_eq=np.array(rows), b_eq=np.array(rhs), bounds=(0, None), method="highs")
    assert res.status == 0, res.message
    return -res.fun
