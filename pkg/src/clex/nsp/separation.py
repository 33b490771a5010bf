"""The n x 3 separation scenario.

Row i (1-based) is ``[X, Y, Z]`` with ``X in 1..n-1``, ``Y in n+2-i..2n-i``
and ``Z = n+1-i``, constrained by ``Y = X + Z``; rows are interchangeable and
ordered lexicographically.  No solution exists.  Propagating each row sum
together with the ordering refutes it at the root, while separate sum and
lex propagators need a search tree that doubles with every row.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..basic import post_lex, post_ternary_sum
from ..clex_generic import post_clex, sum_row_adapter
from ..engine import BranchingOrder, Domain, Limits, Model, SearchStats, solve


def separation_domains(n: int) -> list[list[Domain]]:
    if n < 2:
        raise ValueError("need at least two rows")
    rows = []
    for i in range(1, n + 1):
        z = n + 1 - i
        rows.append([Domain.range(1, n - 1), Domain.range(z + 1, z + n - 1), Domain((z,))])
    return rows


def build_separation_model(n: int, combined: bool) -> tuple[Model, BranchingOrder, list[list[int]]]:
    model = Model()
    rows = [[model.new_var(d) for d in doms] for doms in separation_domains(n)]
    if combined:
        adapter = sum_row_adapter()
        for a, b in zip(rows, rows[1:]):
            post_clex(model, a, b, adapter)
    else:
        for x, y, z in rows:
            post_ternary_sum(model, y, x, z)
        for a, b in zip(rows, rows[1:]):
            post_lex(model, a, b)
    # top-down, left to right
    order = BranchingOrder([v for row in rows for v in row])
    return model, order, rows


@dataclass
class SeparationRow:
    n: int
    combined: SearchStats
    decomposed: SearchStats


def run_separation(ns, limits: Limits | None = None) -> list[SeparationRow]:
    out = []
    for n in ns:
        m1, o1, _ = build_separation_model(n, combined=True)
        m2, o2, _ = build_separation_model(n, combined=False)
        out.append(SeparationRow(n, solve(m1, o1, limits), solve(m2, o2, limits)))
    return out
