"""Finite-domain variable store, propagation queue and depth-first search.

A :class:`Model` owns a :class:`VarStore` (domains plus an undo trail) and a
set of propagators.  Propagators narrow domains through :meth:`Model.narrow`,
which records the old domain on the trail and wakes every other propagator
watching the variable.  Search is plain k-way DFS over a static variable
order, values tried in ascending order.
"""

from __future__ import annotations

import enum
import time
from bisect import bisect_left, bisect_right
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence


class Domain:
    """Immutable, ordered finite set of integers."""

    __slots__ = ("_vals", "_set")

    def __init__(self, values: Iterable[int] = ()):
        s = frozenset(values)
        self._set = s
        self._vals = tuple(sorted(s))

    @classmethod
    def _sorted(cls, vals: tuple[int, ...]) -> "Domain":
        d = cls.__new__(cls)
        d._vals = vals
        d._set = frozenset(vals)
        return d

    @classmethod
    def range(cls, lo: int, hi: int) -> "Domain":
        """Interval ``lo..hi`` inclusive."""
        return cls._sorted(tuple(range(lo, hi + 1)))

    def __iter__(self) -> Iterator[int]:
        return iter(self._vals)

    def __len__(self) -> int:
        return len(self._vals)

    def __bool__(self) -> bool:
        return bool(self._vals)

    def __contains__(self, v: object) -> bool:
        return v in self._set

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Domain):
            return self._set == other._set
        if isinstance(other, (set, frozenset)):
            return self._set == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._set)

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self._vals)) + "}"

    @property
    def values(self) -> tuple[int, ...]:
        return self._vals

    def as_set(self) -> frozenset[int]:
        return self._set

    def min(self) -> int:
        return self._vals[0]

    def max(self) -> int:
        return self._vals[-1]

    def is_fixed(self) -> bool:
        return len(self._vals) == 1

    def successor(self, v: int) -> int | None:
        """Smallest member strictly greater than ``v`` (O(log d))."""
        i = bisect_right(self._vals, v)
        return self._vals[i] if i < len(self._vals) else None

    def predecessor(self, v: int) -> int | None:
        i = bisect_left(self._vals, v)
        return self._vals[i - 1] if i > 0 else None

    def above(self, v: int) -> "Domain":
        return Domain._sorted(self._vals[bisect_right(self._vals, v):])

    def below(self, v: int) -> "Domain":
        return Domain._sorted(self._vals[:bisect_left(self._vals, v)])

    def keep(self, allowed: Iterable[int] | Callable[[int], bool]) -> "Domain":
        if callable(allowed):
            return Domain._sorted(tuple(v for v in self._vals if allowed(v)))
        a = allowed if isinstance(allowed, (set, frozenset, Domain)) else set(allowed)
        return Domain._sorted(tuple(v for v in self._vals if v in a))

    def remove(self, v: int) -> "Domain":
        if v not in self._set:
            return self
        return Domain._sorted(tuple(x for x in self._vals if x != v))

    def fix(self, v: int) -> "Domain":
        return Domain._sorted((v,)) if v in self._set else EMPTY


EMPTY = Domain()


def as_domains(spec: Iterable[Iterable[int] | int]) -> list[Domain]:
    """Build a domain list; a bare int means a singleton."""
    out = []
    for d in spec:
        if isinstance(d, Domain):
            out.append(d)
        elif isinstance(d, int):
            out.append(Domain((d,)))
        else:
            out.append(Domain(d))
    return out


class Status(enum.IntEnum):
    FAILED = 0
    CONSISTENT = 1
    ENTAILED = 2


class Outcome(enum.Enum):
    SOLUTION = "Solution"
    UNSAT = "Unsat"
    LIMIT = "LimitReached"


class VarStore:
    """Domains plus a trail of (var, previous domain) entries tagged by level."""

    def __init__(self) -> None:
        self.doms: list[Domain] = []
        self.trail: list[tuple] = []
        self._marks: list[int] = []

    def __len__(self) -> int:
        return len(self.doms)

    def __getitem__(self, i: int) -> Domain:
        return self.doms[i]

    def new_var(self, values: Iterable[int] | Domain) -> int:
        d = values if isinstance(values, Domain) else Domain(values)
        if not d:
            raise ValueError("variable created with an empty domain")
        self.doms.append(d)
        return len(self.doms) - 1

    @property
    def level(self) -> int:
        return len(self._marks)

    def set(self, i: int, d: Domain) -> None:
        self.trail.append((i, self.doms[i]))
        self.doms[i] = d

    def push_level(self) -> int:
        self._marks.append(len(self.trail))
        return len(self._marks)

    def backtrack_to(self, level: int) -> None:
        """Undo everything recorded after ``level`` was opened."""
        if not 0 <= level <= len(self._marks):
            raise ValueError(f"no such level {level}")
        while len(self._marks) > level:
            mark = self._marks.pop()
            trail = self.trail
            doms = self.doms
            while len(trail) > mark:
                entry = trail.pop()
                if entry[0] is None:
                    entry[1].entailed = False
                else:
                    doms[entry[0]] = entry[1]

    def pop_level(self) -> None:
        self.backtrack_to(len(self._marks) - 1)


class Propagator:
    """Base class.  Subclasses set ``scope`` and implement ``propagate``.

    ``propagate(model)`` narrows domains via ``model.narrow`` and returns a
    :class:`Status`.  An idempotent propagator is not re-queued by its own
    changes.
    """

    priority: int = 1
    idempotent: bool = True
    name: str = "propagator"

    def __init__(self, scope: Sequence[int]):
        self.scope = list(scope)
        self.queued = False
        self.entailed = False

    def propagate(self, model: "Model") -> Status:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{self.name}({len(self.scope)} vars)"


class FilterPropagator(Propagator):
    """Wrap a pure filter ``f(domains) -> domains | None`` over the scope."""

    def __init__(self, scope: Sequence[int], fn, priority: int = 1, name: str = "filter",
                 entailed_when: Callable[[list[Domain]], bool] | None = None):
        super().__init__(scope)
        self.fn = fn
        self.priority = priority
        self.name = name
        self.entailed_when = entailed_when

    def propagate(self, model: "Model") -> Status:
        doms = [model.store.doms[i] for i in self.scope]
        new = self.fn(doms)
        if new is None:
            return Status.FAILED
        if not model.narrow_all(self.scope, new):
            return Status.FAILED
        if self.entailed_when is not None and self.entailed_when(new):
            return Status.ENTAILED
        return Status.CONSISTENT


@dataclass
class PropagatorHandle:
    scope: list[int]
    priority: int
    propagator: Propagator


class Model:
    """Variables, propagators and the fixpoint loop."""

    NUM_PRIORITIES = 3

    def __init__(self) -> None:
        self.store = VarStore()
        self.propagators: list[Propagator] = []
        self.watchers: list[list[Propagator]] = []
        self._queues = [deque() for _ in range(self.NUM_PRIORITIES)]
        self._current: Propagator | None = None

    # variables -----------------------------------------------------------
    def new_var(self, values: Iterable[int] | Domain) -> int:
        i = self.store.new_var(values)
        self.watchers.append([])
        return i

    def new_vars(self, n: int, values: Iterable[int]) -> list[int]:
        values = Domain(values)
        return [self.new_var(values) for _ in range(n)]

    def dom(self, i: int) -> Domain:
        return self.store.doms[i]

    def domains(self, idxs: Iterable[int] | None = None) -> list[Domain]:
        if idxs is None:
            return list(self.store.doms)
        return [self.store.doms[i] for i in idxs]

    @property
    def num_vars(self) -> int:
        return len(self.store)

    # propagators ---------------------------------------------------------
    def post(self, prop: Propagator) -> PropagatorHandle:
        n = len(self.store)
        for i in prop.scope:
            if not 0 <= i < n:
                raise IndexError(f"scope index {i} out of range")
        self.propagators.append(prop)
        for i in set(prop.scope):
            self.watchers[i].append(prop)
        prop.priority = min(max(prop.priority, 0), self.NUM_PRIORITIES - 1)
        self._enqueue(prop)
        return PropagatorHandle(list(prop.scope), prop.priority, prop)

    def _enqueue(self, prop: Propagator) -> None:
        if not prop.queued and not prop.entailed:
            prop.queued = True
            self._queues[prop.priority].append(prop)

    def narrow(self, i: int, d: Domain) -> bool:
        """Replace D(i) by ``d`` (a subset).  False iff ``d`` is empty."""
        if not d:
            return False
        old = self.store.doms[i]
        if len(d) == len(old):
            return True
        self.store.set(i, d)
        cur = self._current
        for p in self.watchers[i]:
            if p is cur and p.idempotent:
                continue
            if not p.queued and not p.entailed:
                p.queued = True
                self._queues[p.priority].append(p)
        return True

    def narrow_all(self, idxs: Sequence[int], doms: Sequence[Domain]) -> bool:
        for i, d in zip(idxs, doms):
            if not self.narrow(i, d):
                return False
        return True

    def assign(self, i: int, v: int) -> bool:
        return self.narrow(i, self.store.doms[i].fix(v))

    def _drain(self) -> None:
        for q in self._queues:
            for p in q:
                p.queued = False
            q.clear()

    def propagate(self) -> Status:
        """Run queued propagators until none can prune further."""
        queues = self._queues
        while True:
            for q in queues:
                if q:
                    prop = q.popleft()
                    break
            else:
                return Status.CONSISTENT
            prop.queued = False
            if prop.entailed:
                continue
            self._current = prop
            status = prop.propagate(self)
            self._current = None
            if status is Status.FAILED:
                self._drain()
                return Status.FAILED
            if status is Status.ENTAILED:
                prop.entailed = True
                self.store.trail.append((None, prop))

    # levels --------------------------------------------------------------
    def push_level(self) -> int:
        return self.store.push_level()

    def pop_level(self) -> None:
        self.store.pop_level()

    def backtrack_to(self, level: int) -> None:
        self.store.backtrack_to(level)

    def is_assigned(self) -> bool:
        return all(d.is_fixed() for d in self.store.doms)

    def values(self) -> list[int]:
        return [d.min() for d in self.store.doms]


def post(model: Model, propagator: Propagator) -> PropagatorHandle:
    return model.post(propagator)


def propagate_to_fixpoint(model: Model) -> Status:
    """CONSISTENT or FAILED; ENTAILED is folded into CONSISTENT."""
    s = model.propagate()
    return Status.FAILED if s is Status.FAILED else Status.CONSISTENT


# search --------------------------------------------------------------------

@dataclass
class BranchingOrder:
    variable_sequence: list[int]
    value_rule: str = "MinFirst"

    def __post_init__(self) -> None:
        if self.value_rule != "MinFirst":
            raise ValueError(f"unsupported value rule {self.value_rule!r}")


@dataclass
class Limits:
    nodes: int | None = None
    seconds: float | None = None


@dataclass
class SearchStats:
    nodes: int = 0
    backtracks: int = 0
    failures: int = 0
    wall_time: float = 0.0
    outcome: Outcome = Outcome.UNSAT
    solution: list[int] | None = field(default=None, repr=False)

    @property
    def ms(self) -> float:
        return self.wall_time * 1000.0


class _LimitReached(Exception):
    pass


class Search:
    """Depth-first k-way search over a static order.

    A node is one value assignment attempt; a backtrack is a node whose
    propagation fails.  Fixed variables still get a (single) node so that
    trees of differently-propagating models over the same order line up.
    """

    def __init__(self, model: Model, order: BranchingOrder, limits: Limits | None = None):
        seq = order.variable_sequence
        if sorted(seq) != list(range(model.num_vars)):
            raise ValueError("branching order must list every variable exactly once")
        self.model = model
        self.order = seq
        self.limits = limits or Limits()
        self.stats = SearchStats()
        self._deadline: float | None = None

    def _tick(self) -> None:
        st = self.stats
        lim = self.limits
        if lim.nodes is not None and st.nodes >= lim.nodes:
            raise _LimitReached
        if self._deadline is not None and (st.nodes & 15) == 0 \
                and time.perf_counter() > self._deadline:
            raise _LimitReached

    def solutions(self) -> Iterator[list[int]]:
        """Yield every solution; stats accumulate across the enumeration."""
        m = self.model
        st = self.stats
        if self.limits.seconds is not None:
            self._deadline = time.perf_counter() + self.limits.seconds
        base = m.store.level
        m.push_level()
        if m.propagate() is Status.FAILED:
            st.failures += 1
            m.backtrack_to(base)
            return
        yield from self._dfs(0)
        m.backtrack_to(base)

    def _dfs(self, depth: int) -> Iterator[list[int]]:
        if depth == len(self.order):
            yield self.model.values()
            return
        m = self.model
        st = self.stats
        var = self.order[depth]
        for v in m.dom(var).values:
            self._tick()
            st.nodes += 1
            m.push_level()
            if m.assign(var, v) and m.propagate() is not Status.FAILED:
                yield from self._dfs(depth + 1)
            else:
                st.failures += 1
                st.backtracks += 1
            m.pop_level()


def solve(model: Model, order: BranchingOrder, limits: Limits | None = None) -> SearchStats:
    """Find the first solution under ``order``.  The model is left unchanged."""
    base = model.store.level
    search = Search(model, order, limits)
    st = search.stats
    t0 = time.perf_counter()
    gen = search.solutions()
    try:
        sol = next(gen, None)
        if sol is None:
            st.outcome = Outcome.UNSAT
        else:
            st.outcome = Outcome.SOLUTION
            st.solution = sol
    except _LimitReached:
        st.outcome = Outcome.LIMIT
    finally:
        gen.close()
        model.backtrack_to(base)
    st.wall_time = time.perf_counter() - t0
    return st


def count_solutions(model: Model, order: BranchingOrder) -> list[list[int]]:
    """All solutions, in search order (small models only)."""
    base = model.store.level
    search = Search(model, order)
    try:
        return list(search.solutions())
    finally:
        model.backtrack_to(base)
