"""Generic propagator for C(X) & C(Y) & X <=lex Y, given a DC filter for C.

The conjunction is split using the lexicographically smallest solution
``X_l`` of C(X) and the largest ``Y_u`` of C(Y): pruning Y against the lower
bound ``X_l`` and X against the upper bound ``Y_u`` is enough for domain
consistency, and one pass reaches the fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .basic import filter_ternary_sum
from .engine import Domain, Model, Propagator, PropagatorHandle, Status
from .regular import Dfa, filter_regular
from .sequence import SequenceSpec, sequence_dfa

Doms = Sequence[Domain]
FilterFn = Callable[[Doms], "list[Domain] | None"]


@dataclass
class ConstraintAdapter:
    """A DC filter for one row constraint C, plus a call counter."""

    name: str
    fn: FilterFn
    calls: int = field(default=0, compare=False)

    def filter(self, doms: Doms) -> list[Domain] | None:
        self.calls += 1
        if not all(doms):
            return None
        return self.fn(doms)


def true_adapter() -> ConstraintAdapter:
    return ConstraintAdapter("true", lambda ds: list(ds))


def sum_row_adapter() -> ConstraintAdapter:
    """Row ``[X, Y, Z]`` with Y = X + Z."""

    def fn(ds: Doms) -> list[Domain] | None:
        x, y, z = ds
        res = filter_ternary_sum(y, x, z)
        if res is None:
            return None
        ny, nx, nz = res
        return [nx, ny, nz]

    return ConstraintAdapter("sum", fn)


def regular_adapter(dfa: Dfa) -> ConstraintAdapter:
    return ConstraintAdapter("regular", lambda ds: filter_regular(dfa, ds))


def sequence_adapter(spec: SequenceSpec) -> ConstraintAdapter:
    def fn(ds: Doms) -> list[Domain] | None:
        alpha = frozenset().union(*(d.as_set() for d in ds))
        return filter_regular(sequence_dfa(spec, alpha), ds)

    return ConstraintAdapter("sequence", fn)


# lex-extreme solutions -------------------------------------------------------

def _c_extreme(adapter: ConstraintAdapter, doms: Doms, largest: bool) -> list[int] | None:
    cur = adapter.filter(doms)
    if cur is None:
        return None
    out = []
    for i in range(len(cur)):
        v = cur[i].max() if largest else cur[i].min()
        out.append(v)
        cur = list(cur)
        cur[i] = Domain((v,))
        cur = adapter.filter(cur)
        # DC before the choice guarantees an extension exists
        assert cur is not None, "filter is not domain consistent"
    return out


def c_min(adapter: ConstraintAdapter, doms: Doms) -> list[int] | None:
    """Lexicographically smallest solution of C within ``doms``, or None."""
    return _c_extreme(adapter, doms, largest=False)


def c_max(adapter: ConstraintAdapter, doms: Doms) -> list[int] | None:
    return _c_extreme(adapter, doms, largest=True)


# bound-restricted filtering --------------------------------------------------

def mark_consistent_values(adapter: ConstraintAdapter, marks: list[set[int]],
                           probe: Doms) -> None:
    """Mark every value surviving DC of C on a private copy of ``probe``."""
    z = adapter.filter(list(probe))
    if z is None:
        return
    for m, d in zip(marks, z):
        m.update(d.values)


def _bound_filter(bound: Sequence[int], adapter: ConstraintAdapter, doms: Doms,
                  upper: bool) -> list[Domain] | None:
    x = adapter.filter(doms)
    if x is None:
        return None
    n = len(x)
    marks: list[set[int]] = [set() for _ in range(n)]
    lx = list(x)
    for i in range(n):
        b = bound[i]
        probe = list(lx)
        probe[i] = x[i].below(b) if upper else x[i].above(b)
        if probe[i]:
            mark_consistent_values(adapter, marks, probe)
        if b not in x[i]:
            break
        lx[i] = Domain((b,))
    else:
        mark_consistent_values(adapter, marks, [Domain((b,)) for b in bound])
    out = [d.keep(m) for d, m in zip(x, marks)]
    if not all(out):
        return None
    return out


def clex_lb(bound: Sequence[int], adapter: ConstraintAdapter, doms: Doms) -> list[Domain] | None:
    """DC on C(X) & bound <=lex X."""
    return _bound_filter(bound, adapter, doms, upper=False)


def clex_ub(doms: Doms, bound: Sequence[int], adapter: ConstraintAdapter) -> list[Domain] | None:
    """DC on C(X) & X <=lex bound."""
    return _bound_filter(bound, adapter, doms, upper=True)


def filter_clex(xd: Doms, yd: Doms, adapter: ConstraintAdapter,
                adapter_y: ConstraintAdapter | None = None,
                shortcut: bool = True) -> tuple[list[Domain], list[Domain]] | None:
    """DC on C(X) & C'(Y) & X <=lex Y.  ``adapter_y`` defaults to ``adapter``."""
    if len(xd) != len(yd):
        raise ValueError("rows must have equal length")
    ady = adapter if adapter_y is None else adapter_y
    xl = c_min(adapter, xd)
    if xl is None:
        return None
    yu = c_max(ady, yd)
    if yu is None:
        return None
    if xl > yu:
        return None
    if shortcut:
        # X_u <=lex Y_l: lex is entailed, only the row constraints remain
        xu = c_max(adapter, xd)
        yl = c_min(ady, yd)
        if xu <= yl:
            return adapter.filter(xd), ady.filter(yd)
    ny = clex_lb(xl, ady, yd)
    nx = clex_ub(xd, yu, adapter)
    if nx is None or ny is None:
        return None
    return nx, ny


class CLexPropagator(Propagator):
    priority = 2
    name = "clex"

    def __init__(self, xs: Sequence[int], ys: Sequence[int], adapter: ConstraintAdapter,
                 adapter_y: ConstraintAdapter | None = None):
        if len(xs) != len(ys):
            raise ValueError("rows must have equal length")
        super().__init__(list(xs) + list(ys))
        self.xs, self.ys = list(xs), list(ys)
        self.adapter = adapter
        self.adapter_y = adapter_y

    def propagate(self, model: Model) -> Status:
        res = filter_clex(model.domains(self.xs), model.domains(self.ys),
                          self.adapter, self.adapter_y)
        if res is None:
            return Status.FAILED
        nx, ny = res
        if not (model.narrow_all(self.xs, nx) and model.narrow_all(self.ys, ny)):
            return Status.FAILED
        if all(d.is_fixed() for d in nx) and all(d.is_fixed() for d in ny):
            return Status.ENTAILED
        return Status.CONSISTENT


def propagate_clex(model: Model, xs: Sequence[int], ys: Sequence[int],
                   adapter: ConstraintAdapter,
                   adapter_y: ConstraintAdapter | None = None) -> Status:
    return CLexPropagator(xs, ys, adapter, adapter_y).propagate(model)


def post_clex(model: Model, xs: Sequence[int], ys: Sequence[int],
              adapter: ConstraintAdapter,
              adapter_y: ConstraintAdapter | None = None) -> PropagatorHandle:
    return model.post(CLexPropagator(xs, ys, adapter, adapter_y))
