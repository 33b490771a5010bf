"""Deterministic automata, their layered unfolding and the Regular constraint."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .engine import Domain, Model, Propagator, PropagatorHandle, Status


class DfaFormatError(ValueError):
    pass


@dataclass
class Dfa:
    """Partial DFA over integer symbols.  States are ``0..num_states-1``."""

    num_states: int
    transitions: dict[tuple[int, int], int]
    initial: int = 0
    finals: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        self.finals = frozenset(self.finals)
        n = self.num_states
        if not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range")
        for q in self.finals:
            if not 0 <= q < n:
                raise ValueError(f"final state {q} out of range")
        delta: list[dict[int, int]] = [{} for _ in range(n)]
        for (q, v), r in self.transitions.items():
            if not (0 <= q < n and 0 <= r < n):
                raise ValueError(f"transition {q} -{v}-> {r} out of range")
            delta[q][v] = r
        self.delta = delta

    @property
    def alphabet(self) -> frozenset[int]:
        return frozenset(v for (_, v) in self.transitions)

    def step(self, q: int, v: int) -> int | None:
        return self.delta[q].get(v)

    def run(self, word: Iterable[int]) -> int | None:
        q: int | None = self.initial
        for v in word:
            q = self.delta[q].get(v)
            if q is None:
                return None
        return q

    def accepts(self, word: Iterable[int]) -> bool:
        q = self.run(word)
        return q is not None and q in self.finals

    def reachable(self) -> set[int]:
        seen = {self.initial}
        stack = [self.initial]
        while stack:
            q = stack.pop()
            for r in self.delta[q].values():
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen

    # text format ---------------------------------------------------------
    def to_text(self) -> str:
        head = f"states {self.num_states} initial {self.initial} finals"
        for q in sorted(self.finals):
            head += f" {q}"
        lines = [head]
        for (q, v), r in sorted(self.transitions.items()):
            lines.append(f"{q} {v} {r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Dfa":
        lines = [(n, ln.split("#", 1)[0].strip()) for n, ln in enumerate(text.splitlines(), 1)]
        lines = [(n, ln) for n, ln in lines if ln]
        if not lines:
            raise DfaFormatError("empty DFA description")
        lineno, head = lines[0]
        tok = head.split()
        try:
            if tok[0] != "states" or tok[2] != "initial" or tok[4] != "finals":
                raise DfaFormatError(
                    f"line {lineno}: expected 'states K initial I finals ...'")
            k, init = int(tok[1]), int(tok[3])
            finals = [int(t) for t in tok[5:]]
        except (IndexError, ValueError) as exc:
            raise DfaFormatError(f"line {lineno}: malformed header: {exc}") from None
        trans: dict[tuple[int, int], int] = {}
        for lineno, ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 3:
                raise DfaFormatError(f"line {lineno}: expected 'from value to'")
            try:
                q, v, r = map(int, parts)
            except ValueError:
                raise DfaFormatError(f"line {lineno}: non-integer field") from None
            if not (0 <= q < k and 0 <= r < k):
                raise DfaFormatError(f"line {lineno}: state out of range 0..{k - 1}")
            if (q, v) in trans and trans[(q, v)] != r:
                raise DfaFormatError(f"line {lineno}: nondeterministic transition")
            trans[(q, v)] = r
        try:
            return cls(k, trans, init, frozenset(finals))
        except ValueError as exc:
            raise DfaFormatError(str(exc)) from None

    @classmethod
    def load(cls, path: str | Path) -> "Dfa":
        return cls.from_text(Path(path).read_text())

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())


def universal_dfa(alphabet: Iterable[int]) -> Dfa:
    """One accepting state looping on every symbol (Sigma*)."""
    return Dfa(1, {(0, v): 0 for v in alphabet}, 0, {0})


def word_dfa(word: Sequence[int]) -> Dfa:
    """Accepts exactly ``word``."""
    trans = {(i, v): i + 1 for i, v in enumerate(word)}
    return Dfa(len(word) + 1, trans, 0, {len(word)})


class LayeredGraph:
    """Unfolding of a DFA over ``n`` domains, trimmed to accepting paths.

    ``out[j][q]`` is the sorted list of ``(value, next_state)`` arcs leaving
    state ``q`` at layer ``j`` towards layer ``j+1``; only arcs on some path
    from the initial node to a final node at layer ``n`` are kept.
    """

    def __init__(self, dfa: Dfa, domains: Sequence[Domain]):
        self.dfa = dfa
        n = len(domains)
        self.n = n
        delta = dfa.delta
        fwd: list[dict[int, list[tuple[int, int]]]] = []
        layer = {dfa.initial}
        for j in range(n):
            dom = domains[j]
            arcs: dict[int, list[tuple[int, int]]] = {}
            nxt = set()
            for q in layer:
                dq = delta[q]
                lst = [(v, dq[v]) for v in dom.values if v in dq]
                if lst:
                    arcs[q] = lst
                    nxt.update(r for _, r in lst)
            fwd.append(arcs)
            layer = nxt
        alive = layer & dfa.finals
        out: list[dict[int, list[tuple[int, int]]]] = [dict() for _ in range(n)]
        nodes: list[set[int]] = [set() for _ in range(n + 1)]
        nodes[n] = alive
        for j in range(n - 1, -1, -1):
            here: set[int] = set()
            layer_out = out[j]
            for q, lst in fwd[j].items():
                keep = [a for a in lst if a[1] in alive]
                if keep:
                    layer_out[q] = keep
                    here.add(q)
            nodes[j] = here
            alive = here
        self.out = out
        self.nodes = nodes
        self.empty = dfa.initial not in nodes[0] if n else dfa.initial not in dfa.finals

    def arcs(self):
        """All arcs as ``(layer, from, value, to)``."""
        for j, layer in enumerate(self.out):
            for q in sorted(layer):
                for v, r in layer[q]:
                    yield (j, q, v, r)

    def num_arcs(self) -> int:
        return sum(len(lst) for layer in self.out for lst in layer.values())

    def labels(self, j: int) -> set[int]:
        return {v for lst in self.out[j].values() for v, _ in lst}

    def supported_domains(self) -> list[Domain]:
        return [Domain(self.labels(j)) for j in range(self.n)]

    def min_label(self, j: int, q: int, above: int | None = None) -> tuple[int, int] | None:
        """Smallest outgoing arc of ``q`` at layer ``j`` (label > ``above``)."""
        lst = self.out[j].get(q)
        if not lst:
            return None
        if above is None:
            return lst[0]
        k = bisect_right(lst, (above, float("inf")))
        return lst[k] if k < len(lst) else None

    def max_label(self, j: int, q: int) -> tuple[int, int] | None:
        lst = self.out[j].get(q)
        return lst[-1] if lst else None


def build_layered_graph(dfa: Dfa, domains: Sequence[Domain]) -> LayeredGraph:
    return LayeredGraph(dfa, domains)


def filter_regular(dfa: Dfa, domains: Sequence[Domain]) -> list[Domain] | None:
    """DC filter: keep value v of X[j] iff an accepting path uses it."""
    g = LayeredGraph(dfa, domains)
    if g.empty:
        return None
    return [d.keep(g.labels(j)) for j, d in enumerate(domains)]


def _extreme(dfa: Dfa, domains: Sequence[Domain], largest: bool) -> list[int] | None:
    # forward reachability, backward co-reachability, then a greedy walk
    # that never leaves the co-reachable states
    n = len(domains)
    delta = dfa.delta
    reach = [{dfa.initial}]
    for j in range(n):
        vals = domains[j].values
        nxt = set()
        for q in reach[j]:
            dq = delta[q]
            for v in vals:
                r = dq.get(v)
                if r is not None:
                    nxt.add(r)
        reach.append(nxt)
    alive = reach[n] & dfa.finals
    ok = [None] * (n + 1)
    ok[n] = alive
    for j in range(n - 1, -1, -1):
        vals = domains[j].values
        here = set()
        for q in reach[j]:
            dq = delta[q]
            for v in vals:
                if dq.get(v, -1) in alive:
                    here.add(q)
                    break
        ok[j] = alive = here
    q = dfa.initial
    if q not in ok[0]:
        return None
    word = []
    for j in range(n):
        vals = domains[j].values
        nxt = ok[j + 1]
        dq = delta[q]
        for v in (reversed(vals) if largest else vals):
            r = dq.get(v)
            if r is not None and r in nxt:
                break
        else:  # pragma: no cover - ok[j] guarantees an arc
            raise AssertionError("greedy walk reached a dead node")
        word.append(v)
        q = r
    return word


def regular_min(dfa: Dfa, domains: Sequence[Domain]) -> list[int] | None:
    """Lexicographically smallest accepted word within ``domains``."""
    return _extreme(dfa, domains, largest=False)


def regular_max(dfa: Dfa, domains: Sequence[Domain]) -> list[int] | None:
    return _extreme(dfa, domains, largest=True)


class RegularPropagator(Propagator):
    priority = 2
    name = "regular"

    def __init__(self, dfa: Dfa, scope: Sequence[int]):
        super().__init__(scope)
        self.dfa = dfa

    def propagate(self, model: Model) -> Status:
        doms = model.domains(self.scope)
        new = filter_regular(self.dfa, doms)
        if new is None or not model.narrow_all(self.scope, new):
            return Status.FAILED
        if all(d.is_fixed() for d in new):
            return Status.ENTAILED
        return Status.CONSISTENT


def propagate_regular(model: Model, dfa: Dfa, xs: Sequence[int]) -> Status:
    """Run the DC filter once directly on the model's domains."""
    return RegularPropagator(dfa, xs).propagate(model)


def post_regular(model: Model, dfa: Dfa, xs: Sequence[int]) -> PropagatorHandle:
    return model.post(RegularPropagator(dfa, xs))
