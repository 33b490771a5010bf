"""Built-in row constraints for the nurse-scheduling models."""

from __future__ import annotations

from ..regular import Dfa
from ..sequence import SequenceSpec

D, E, N, O = 0, 1, 2, 3
SHIFT_NAMES = "DENO"

# Sequence(l, u, k) triples of the Boolean experiments
BOOLEAN_SEQUENCES = [
    SequenceSpec(3, 4, 5),
    SequenceSpec(2, 3, 4),
    SequenceSpec(1, 2, 3),
    SequenceSpec(4, 5, 7),
    SequenceSpec(3, 4, 7),
    SequenceSpec(2, 3, 5),
]

# consecutive working shifts that leave less than 12 hours of rest
FORBIDDEN_PAIRS = frozenset({(N, D), (N, E), (E, D)})


def rest_dfa() -> Dfa:
    """At least 12 hours between shifts: no N->D, N->E or E->D.

    State 0 is the start, state ``1 + s`` remembers yesterday's value ``s``.
    """
    trans = {}
    for v in (D, E, N, O):
        trans[(0, v)] = 1 + v
        for last in (D, E, N, O):
            if (last, v) not in FORBIDDEN_PAIRS:
                trans[(1 + last, v)] = 1 + v
    return Dfa(5, trans, 0, frozenset(range(5)))


def rest_and_runs_dfa() -> Dfa:
    """Rest rule plus: every block of one working shift lasts at least two days.

    States: 0 start, 1 day off, ``2 + 2s`` first day of shift ``s``,
    ``3 + 2s`` second or later day of shift ``s``.  A block still at length
    one when the horizon ends is rejected.
    """
    OFF = 1

    def first(s: int) -> int:
        return 2 + 2 * s

    def more(s: int) -> int:
        return 3 + 2 * s

    trans = {}
    for q in (0, OFF):
        trans[(q, O)] = OFF
        for s in (D, E, N):
            trans[(q, s)] = first(s)
    for s in (D, E, N):
        trans[(first(s), s)] = more(s)
        trans[(more(s), s)] = more(s)
        trans[(more(s), O)] = OFF
        for t in (D, E, N):
            if t != s and (s, t) not in FORBIDDEN_PAIRS:
                trans[(more(s), t)] = first(t)
    finals = frozenset({0, OFF} | {more(s) for s in (D, E, N)})
    return Dfa(8, trans, 0, finals)


DFA_PRESETS = {
    "rest": rest_dfa,
    "rest-runs": rest_and_runs_dfa,
}
