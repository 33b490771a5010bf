"""Sequence constraint: parameters, automaton encoding and lex-extreme solutions.

Windows are every run of ``k`` consecutive variables, i.e. ``n-k+1`` of them
(none when ``n < k``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .engine import Domain
from .regular import Dfa, regular_max, regular_min


@dataclass(frozen=True)
class SequenceSpec:
    l: int
    u: int
    k: int
    V: frozenset[int] = frozenset({1})

    def __post_init__(self) -> None:
        object.__setattr__(self, "V", frozenset(self.V))
        if not (self.k >= 1 and 0 <= self.l <= self.u <= self.k):
            raise ValueError(f"need 0 <= l <= u <= k and k >= 1, got {self}")

    def windows(self, n: int) -> list[range]:
        return [range(j, j + self.k) for j in range(n - self.k + 1)]

    def holds(self, word: Sequence[int]) -> bool:
        bits = [1 if v in self.V else 0 for v in word]
        return all(self.l <= sum(bits[w.start:w.stop]) <= self.u
                   for w in self.windows(len(bits)))


def build_sequence_dfa(spec: SequenceSpec, alphabet: Iterable[int] = (0, 1)) -> Dfa:
    """Automaton whose states remember the last ``k-1`` membership bits.

    Warm-up states (fewer than ``k-1`` symbols read) are kept separate so the
    first window is checked in full.  They are never pruned early, since a
    word shorter than ``k`` has no window at all.  Every state is accepting,
    so there are at most ``2**k - 1`` states.
    """
    alphabet = sorted(set(alphabet))
    k, l, u = spec.k, spec.l, spec.u
    ids: dict[tuple[int, ...], int] = {(): 0}
    order: list[tuple[int, ...]] = [()]
    trans: dict[tuple[int, int], int] = {}
    i = 0
    while i < len(order):
        hist = order[i]
        for v in alphabet:
            b = 1 if v in spec.V else 0
            full = hist + (b,)
            if len(full) == k:
                s = sum(full)
                if not l <= s <= u:
                    continue
                nxt = full[1:]
            else:
                # no window is complete yet: a word this short is accepted
                nxt = full
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            trans[(i, v)] = ids[nxt]
        i += 1
    return Dfa(len(order), trans, 0, frozenset(range(len(order))))


def check_consistency_min(spec: SequenceSpec, domains: Sequence[Domain]) -> list[int] | None:
    """Lexicographically smallest solution of Sequence, or None."""
    return regular_min(_dfa_for(spec, domains), domains)


def check_consistency_max(spec: SequenceSpec, domains: Sequence[Domain]) -> list[int] | None:
    return regular_max(_dfa_for(spec, domains), domains)


_DFA_CACHE: dict[tuple[SequenceSpec, frozenset[int]], Dfa] = {}


def _dfa_for(spec: SequenceSpec, domains: Sequence[Domain]) -> Dfa:
    alpha = frozenset().union(*(d.as_set() for d in domains)) if domains else frozenset()
    return sequence_dfa(spec, alpha)


def sequence_dfa(spec: SequenceSpec, alphabet: Iterable[int]) -> Dfa:
    """Cached :func:`build_sequence_dfa`."""
    alpha = frozenset(alphabet)
    key = (spec, alpha)
    dfa = _DFA_CACHE.get(key)
    if dfa is None:
        dfa = _DFA_CACHE[key] = build_sequence_dfa(spec, alpha)
    return dfa
