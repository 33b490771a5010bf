"""Domain-consistent filters for the primitive constraints.

Each constraint has a pure ``filter_*`` (domains in, narrowed domains or
``None`` on failure out), a propagator class for posting, and a
``propagate_*`` helper that applies the filter once to a model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .engine import Domain, FilterPropagator, Model, Propagator, PropagatorHandle, Status
from .sequence import SequenceSpec

Doms = Sequence[Domain]


# Lex (non-strict) ------------------------------------------------------------

@dataclass(frozen=True)
class LexPair:
    xs: tuple[int, ...]
    ys: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "xs", tuple(self.xs))
        object.__setattr__(self, "ys", tuple(self.ys))
        if len(self.xs) != len(self.ys):
            raise ValueError("lex scopes must have equal length")


def lex_le(x: Sequence[int], y: Sequence[int]) -> bool:
    return tuple(x) <= tuple(y)


def filter_lex(xd: Doms, yd: Doms) -> tuple[list[Domain], list[Domain]] | None:
    """DC on X <=lex Y for independent domains.

    v survives at X[i] iff (min X with X[i]=v) <=lex max Y, and dually.
    """
    n = len(xd)
    xl = [d.min() for d in xd]
    yu = [d.max() for d in yd]
    if xl > yu:
        return None
    # first position where the bounds differ
    alpha = next((j for j in range(n) if xl[j] != yu[j]), n)
    # tail_le[j]: xl[j:] <=lex yu[j:]
    tail_le = [True] * (n + 1)
    for j in range(n - 1, -1, -1):
        tail_le[j] = xl[j] < yu[j] or (xl[j] == yu[j] and tail_le[j + 1])
    new_x, new_y = list(xd), list(yd)
    for i in range(min(alpha + 1, n)):
        # positions after alpha have a strictly smaller prefix: free
        ub, lb = yu[i], xl[i]
        nxt = tail_le[i + 1]
        new_x[i] = xd[i].keep(lambda v: v < ub or (v == ub and nxt))
        # Y side: (yu with Y[i]=w) >=lex xl
        new_y[i] = yd[i].keep(lambda w: w > lb or (w == lb and nxt))
        if not new_x[i] or not new_y[i]:
            return None
    return new_x, new_y


def lex_entailed(xd: Doms, yd: Doms) -> bool:
    return [d.max() for d in xd] <= [d.min() for d in yd]


class LexPropagator(Propagator):
    priority = 0
    name = "lex"

    def __init__(self, pair: LexPair):
        super().__init__(list(pair.xs) + list(pair.ys))
        self.pair = pair
        self.n = len(pair.xs)

    def propagate(self, model: Model) -> Status:
        xd = model.domains(self.pair.xs)
        yd = model.domains(self.pair.ys)
        res = filter_lex(xd, yd)
        if res is None:
            return Status.FAILED
        nx, ny = res
        if not (model.narrow_all(self.pair.xs, nx) and model.narrow_all(self.pair.ys, ny)):
            return Status.FAILED
        return Status.ENTAILED if lex_entailed(nx, ny) else Status.CONSISTENT


def propagate_lex(model: Model, pair: LexPair) -> Status:
    return LexPropagator(pair).propagate(model)


def post_lex(model: Model, xs: Sequence[int], ys: Sequence[int]) -> PropagatorHandle:
    return model.post(LexPropagator(LexPair(tuple(xs), tuple(ys))))


# Among / at-least -------------------------------------------------------------

@dataclass(frozen=True)
class AmongSpec:
    l: int
    u: int
    window: tuple[int, ...]
    V: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "window", tuple(self.window))
        object.__setattr__(self, "V", frozenset(self.V))
        if self.l < 0 or self.l > self.u:
            raise ValueError(f"need 0 <= l <= u, got l={self.l} u={self.u}")


def filter_among(l: int, u: int, V: frozenset[int], doms: Doms) -> list[Domain] | None:
    """DC on l <= |{i : X[i] in V}| <= u."""
    forced = possible = 0
    for d in doms:
        s = d.as_set()
        if s <= V:
            forced += 1
            possible += 1
        elif not s.isdisjoint(V):
            possible += 1
    if possible < l or forced > u:
        return None
    if forced == u and possible > u:
        return [d if d.as_set() <= V else d.keep(lambda v: v not in V) for d in doms]
    if possible == l and forced < l:
        return [d if d.as_set().isdisjoint(V) else d.keep(V) for d in doms]
    return list(doms)


def among_entailed(l: int, u: int, V: frozenset[int], doms: Doms) -> bool:
    forced = sum(1 for d in doms if d.as_set() <= V)
    possible = sum(1 for d in doms if not d.as_set().isdisjoint(V))
    return forced >= l and possible <= u


class AmongPropagator(FilterPropagator):
    def __init__(self, spec: AmongSpec):
        l, u, V = spec.l, spec.u, spec.V
        super().__init__(
            spec.window, lambda ds: filter_among(l, u, V, ds), priority=0, name="among",
            entailed_when=lambda ds: among_entailed(l, u, V, ds))
        self.spec = spec


def propagate_among(model: Model, spec: AmongSpec) -> Status:
    return AmongPropagator(spec).propagate(model)


def post_among(model: Model, spec: AmongSpec) -> PropagatorHandle:
    return model.post(AmongPropagator(spec))


def post_sequence_decomposed(model: Model, spec: SequenceSpec,
                             xs: Sequence[int]) -> list[PropagatorHandle]:
    """One Among per length-k window (n-k+1 of them)."""
    if spec.k > len(xs):
        raise ValueError(f"window length {spec.k} exceeds {len(xs)} variables")
    return [post_among(model, AmongSpec(spec.l, spec.u, tuple(xs[w.start:w.stop]), spec.V))
            for w in spec.windows(len(xs))]


def filter_atleast(V: frozenset[int], demand: int, doms: Doms) -> list[Domain] | None:
    return filter_among(demand, len(doms), frozenset(V), doms)


def propagate_atleast(model: Model, xs: Sequence[int], V, demand: int) -> Status:
    if demand < 0:
        raise ValueError("demand must be non-negative")
    spec = AmongSpec(demand, max(demand, len(xs)), tuple(xs), frozenset(V))
    return AmongPropagator(spec).propagate(model)


def post_atleast(model: Model, xs: Sequence[int], V, demand: int) -> PropagatorHandle:
    if demand < 0:
        raise ValueError("demand must be non-negative")
    p = AmongPropagator(AmongSpec(demand, max(demand, len(xs)), tuple(xs), frozenset(V)))
    p.name = "atleast"
    return model.post(p)


# Y = X + Z ------------------------------------------------------------------

def filter_ternary_sum(yd: Domain, xd: Domain, zd: Domain) -> tuple[Domain, Domain, Domain] | None:
    """DC on Y = X + Z."""
    ys = yd.as_set()
    sx, sy, sz = set(), set(), set()
    for x in xd:
        for z in zd:
            if x + z in ys:
                sx.add(x)
                sy.add(x + z)
                sz.add(z)
    if not sx:
        return None
    return yd.keep(sy), xd.keep(sx), zd.keep(sz)


class SumPropagator(Propagator):
    priority = 0
    name = "sum"

    def __init__(self, y: int, x: int, z: int):
        super().__init__([y, x, z])

    def propagate(self, model: Model) -> Status:
        res = filter_ternary_sum(*model.domains(self.scope))
        if res is None or not model.narrow_all(self.scope, res):
            return Status.FAILED
        return Status.ENTAILED if all(d.is_fixed() for d in res) else Status.CONSISTENT


def propagate_ternary_sum(model: Model, y: int, x: int, z: int) -> Status:
    return SumPropagator(y, x, z).propagate(model)


def post_ternary_sum(model: Model, y: int, x: int, z: int) -> PropagatorHandle:
    return model.post(SumPropagator(y, x, z))


# binary (in)equality, mostly for small tests -----------------------------------

def filter_equal(xd: Domain, yd: Domain) -> tuple[Domain, Domain] | None:
    common = xd.as_set() & yd.as_set()
    if not common:
        return None
    return xd.keep(common), yd.keep(common)


def filter_not_equal(xd: Domain, yd: Domain) -> tuple[Domain, Domain] | None:
    if xd.is_fixed() and yd.is_fixed() and xd.min() == yd.min():
        return None
    if xd.is_fixed():
        yd = yd.remove(xd.min())
    if yd.is_fixed():
        xd = xd.remove(yd.min())
    if not xd or not yd:
        return None
    return xd, yd


def post_equal(model: Model, x: int, y: int) -> PropagatorHandle:
    return model.post(FilterPropagator([x, y], lambda ds: filter_equal(*ds), 0, "eq"))


def post_not_equal(model: Model, x: int, y: int) -> PropagatorHandle:
    return model.post(FilterPropagator([x, y], lambda ds: filter_not_equal(*ds), 0, "neq"))
