"""Brute-force ground truth by exhaustive enumeration.

Tuples are enumerated in lexicographic order with each check applied as soon
as its scope is fully assigned.  Nothing here shares code with the
propagators: the predicates test complete tuples directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Callable, Iterable, Iterator, Sequence

from .engine import Domain

DEFAULT_CAP = 10 ** 7


class OracleCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Check:
    """Predicate over the values of ``scope`` (a tuple of variable indices)."""

    scope: tuple[int, ...]
    pred: Callable[[tuple[int, ...]], bool]
    name: str = "check"


def lex_check(xs: Sequence[int], ys: Sequence[int]) -> Check:
    n = len(xs)

    def pred(vals):
        for a, b in zip(vals[:n], vals[n:]):
            if a < b:
                return True
            if a > b:
                return False
        return True

    return Check(tuple(xs) + tuple(ys), pred, "lex")


def among_check(window: Sequence[int], l: int, u: int, V: Iterable[int]) -> Check:
    V = frozenset(V)
    return Check(tuple(window), lambda vals: l <= sum(v in V for v in vals) <= u, "among")


def sequence_check(xs: Sequence[int], l: int, u: int, k: int, V: Iterable[int]) -> Check:
    V = frozenset(V)
    n = len(xs)

    def pred(vals):
        for j in range(n - k + 1):
            c = sum(v in V for v in vals[j:j + k])
            if c < l or c > u:
                return False
        return True

    return Check(tuple(xs), pred, "sequence")


def regular_check(xs: Sequence[int], dfa) -> Check:
    def pred(vals):
        q = dfa.initial
        for v in vals:
            nxt = [r for (p, a), r in dfa.transitions.items() if p == q and a == v]
            if not nxt:
                return False
            q = nxt[0]
        return q in dfa.finals

    return Check(tuple(xs), pred, "regular")


def sum_check(y: int, x: int, z: int) -> Check:
    return Check((y, x, z), lambda v: v[0] == v[1] + v[2], "sum")


def atleast_check(xs: Sequence[int], V: Iterable[int], demand: int) -> Check:
    V = frozenset(V)
    return Check(tuple(xs), lambda vals: sum(v in V for v in vals) >= demand, "atleast")


def equal_check(x: int, y: int) -> Check:
    return Check((x, y), lambda v: v[0] == v[1], "eq")


def not_equal_check(x: int, y: int) -> Check:
    return Check((x, y), lambda v: v[0] != v[1], "neq")


def _solutions(domains: Sequence[Iterable[int]], checks: Sequence[Check],
               cap: int, reverse: bool = False) -> Iterator[tuple[int, ...]]:
    doms = [sorted(set(d), reverse=reverse) for d in domains]
    size = prod(len(d) for d in doms)
    if size > cap:
        raise OracleCapExceeded(f"{size} tuples exceeds cap {cap}")
    n = len(doms)
    if any(not d for d in doms):
        return
    # checks become testable once their last variable is assigned
    due: list[list[Check]] = [[] for _ in range(n)]
    for c in checks:
        if not c.scope:
            if not c.pred(()):
                return
            continue
        due[max(c.scope)].append(c)
    vals = [0] * n

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(vals)
            return
        for v in doms[i]:
            vals[i] = v
            if all(c.pred(tuple(vals[j] for j in c.scope)) for c in due[i]):
                yield from rec(i + 1)

    yield from rec(0)


def all_solutions(domains: Sequence[Iterable[int]], checks: Sequence[Check],
                  cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
    return list(_solutions(domains, checks, cap))


def brute_force_dc(domains: Sequence[Iterable[int]], checks: Sequence[Check],
                   cap: int = DEFAULT_CAP) -> list[Domain] | None:
    """Keep a value iff it occurs in some tuple satisfying every check.

    Returns None when there is no such tuple.
    """
    seen: list[set[int]] = [set() for _ in domains]
    total = sum(len(set(d)) for d in domains)
    count = 0
    found = False
    for sol in _solutions(domains, checks, cap):
        found = True
        for s, v in zip(seen, sol):
            if v not in s:
                s.add(v)
                count += 1
        if count == total:
            break
    if not found:
        return None
    return [Domain(s) for s in seen]


def brute_force_lex_min(domains: Sequence[Iterable[int]], checks: Sequence[Check],
                        cap: int = DEFAULT_CAP) -> list[int] | None:
    for sol in _solutions(domains, checks, cap):
        return list(sol)
    return None


def brute_force_lex_max(domains: Sequence[Iterable[int]], checks: Sequence[Check],
                        cap: int = DEFAULT_CAP) -> list[int] | None:
    for sol in _solutions(domains, checks, cap, reverse=True):
        return list(sol)
    return None
