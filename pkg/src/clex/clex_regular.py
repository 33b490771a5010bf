"""C&Lex for Regular rows: arc marking on the layered graph, and the
product-automaton encoding over interleaved variables."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .engine import Domain, Model, Propagator, PropagatorHandle, Status
from .regular import (Dfa, LayeredGraph, RegularPropagator, regular_max, regular_min,
                      universal_dfa)

Arc = tuple[int, int, int]  # (layer, from_state, value)


def mark_consistent_arcs(graph: LayeredGraph, layer: int, state: int,
                         marked: set[Arc] | None = None,
                         visited: set[tuple[int, int]] | None = None) -> set[Arc]:
    """Mark every alive arc on a path from node ``(layer, state)`` to a final node.

    ``visited`` nodes are assumed fully marked already and are not expanded
    again, which keeps repeated calls linear in the graph size overall.
    """
    if marked is None:
        marked = set()
    if visited is None:
        visited = set()
    stack = [(layer, state)]
    while stack:
        node = stack.pop()
        if node in visited:
            continue
        visited.add(node)
        j, q = node
        if j >= graph.n:
            continue
        for v, r in graph.out[j].get(q, ()):
            marked.add((j, q, v))
            if (j + 1, r) not in visited:
                stack.append((j + 1, r))
    return marked


def _bound_regular(bound: Sequence[int], dfa: Dfa, doms: Sequence[Domain],
                   upper: bool) -> list[Domain] | None:
    g = LayeredGraph(dfa, doms)
    if g.empty:
        return None
    n = g.n
    marked: set[Arc] = set()
    visited: set[tuple[int, int]] = set()
    path = [dfa.initial]
    q_l = 0

    def mark_path(lo: int, hi: int) -> None:
        # arcs (q[k-1], q[k]) for k = lo..hi
        for k in range(max(lo, 1), hi + 1):
            marked.add((k - 1, path[k - 1], bound[k - 1]))

    completed = True
    q: int | None = dfa.initial
    for i in range(1, n + 1):
        j = i - 1
        b = bound[j]
        # drop arcs labelled up to the bound (from below, for the upper case)
        branch = [(v, r) for v, r in g.out[j].get(q, ()) if (v < b if upper else v > b)]
        for v, r in branch:
            marked.add((j, q, v))
            mark_consistent_arcs(g, i, r, marked, visited)
        if branch and i != 1:
            mark_path(q_l, i - 1)
            q_l = i - 1
        if b not in doms[j]:
            completed = False
            break
        q = dfa.step(q, b)
        if q is None or q not in g.nodes[i]:
            # the bound's prefix leaves the trimmed graph
            completed = False
            break
        path.append(q)
    if completed:
        mark_path(q_l, n)
    labels: list[set[int]] = [set() for _ in range(n)]
    for j, _, v in marked:
        labels[j].add(v)
    out = [d.keep(lab) for d, lab in zip(doms, labels)]
    if not all(out):
        return None
    return out


def clex_lb_regular(bound: Sequence[int], dfa: Dfa, doms: Sequence[Domain]) -> list[Domain] | None:
    """DC on Regular(X) & bound <=lex X, computed on the layered graph."""
    return _bound_regular(bound, dfa, doms, upper=False)


def clex_ub_regular(doms: Sequence[Domain], bound: Sequence[int], dfa: Dfa) -> list[Domain] | None:
    """DC on Regular(X) & X <=lex bound."""
    return _bound_regular(bound, dfa, doms, upper=True)


def filter_clex_regular(xd: Sequence[Domain], yd: Sequence[Domain],
                        dfa: Dfa) -> tuple[list[Domain], list[Domain]] | None:
    if len(xd) != len(yd):
        raise ValueError("rows must have equal length")
    xl = regular_min(dfa, xd)
    if xl is None:
        return None
    yu = regular_max(dfa, yd)
    if yu is None:
        return None
    if xl > yu:
        return None
    ny = clex_lb_regular(xl, dfa, yd)
    nx = clex_ub_regular(xd, yu, dfa)
    if nx is None or ny is None:
        return None
    return nx, ny


class CLexRegularPropagator(Propagator):
    priority = 2
    name = "clex-regular"

    def __init__(self, xs: Sequence[int], ys: Sequence[int], dfa: Dfa):
        if len(xs) != len(ys):
            raise ValueError("rows must have equal length")
        super().__init__(list(xs) + list(ys))
        self.xs, self.ys = list(xs), list(ys)
        self.dfa = dfa

    def propagate(self, model: Model) -> Status:
        res = filter_clex_regular(model.domains(self.xs), model.domains(self.ys), self.dfa)
        if res is None:
            return Status.FAILED
        nx, ny = res
        if not (model.narrow_all(self.xs, nx) and model.narrow_all(self.ys, ny)):
            return Status.FAILED
        if all(d.is_fixed() for d in nx) and all(d.is_fixed() for d in ny):
            return Status.ENTAILED
        return Status.CONSISTENT


def propagate_clex_regular(model: Model, xs: Sequence[int], ys: Sequence[int],
                           dfa: Dfa) -> Status:
    return CLexRegularPropagator(xs, ys, dfa).propagate(model)


def post_clex_regular(model: Model, xs: Sequence[int], ys: Sequence[int],
                      dfa: Dfa) -> PropagatorHandle:
    return model.post(CLexRegularPropagator(xs, ys, dfa))


# product automaton -------------------------------------------------------------

@dataclass
class ProductDfa(Dfa):
    """DFA over ``x1 y1 x2 y2 ...``; ``labels[s]`` names product state ``s``.

    Labels are ``("E", qx, qy)`` equal so far, ``("L", qx, qy)`` already
    strictly less, ``("P", qx, qy, v)`` X[i]=v read under equality and
    ``("M", qx, qy)`` X[i] read while strictly less.
    """

    labels: list[tuple] = field(default_factory=list)


def build_product_dfa(dfa_x: Dfa, dfa_y: Dfa,
                      alphabet: Iterable[int] | None = None) -> ProductDfa:
    """Automaton accepting the interleaving of x and y iff x and y are
    accepted by their automata and x <=lex y.  Only states that are reachable
    and can still reach acceptance are kept."""
    if alphabet is None:
        alphabet = dfa_x.alphabet | dfa_y.alphabet
    alphabet = sorted(set(alphabet))
    dx, dy = dfa_x.delta, dfa_y.delta

    def successors(s: tuple) -> list[tuple[int, tuple]]:
        kind, qx, qy = s[0], s[1], s[2]
        out = []
        if kind in ("E", "L"):
            for v in alphabet:
                rx = dx[qx].get(v)
                if rx is not None:
                    out.append((v, ("P", rx, qy, v) if kind == "E" else ("M", rx, qy)))
        else:
            for w in alphabet:
                ry = dy[qy].get(w)
                if ry is None:
                    continue
                if kind == "M" or w > s[3]:
                    out.append((w, ("L", qx, ry)))
                elif w == s[3]:
                    out.append((w, ("E", qx, ry)))
        return out

    start = ("E", dfa_x.initial, dfa_y.initial)
    seen = {start}
    order = [start]
    edges: dict[tuple, list[tuple[int, tuple]]] = {}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        edges[s] = successors(s)
        for _, t in edges[s]:
            if t not in seen:
                seen.add(t)
                order.append(t)
                queue.append(t)

    def is_final(s: tuple) -> bool:
        return s[0] in ("E", "L") and s[1] in dfa_x.finals and s[2] in dfa_y.finals

    # keep states that can reach a final state
    preds: dict[tuple, list[tuple]] = {s: [] for s in order}
    for s, lst in edges.items():
        for _, t in lst:
            preds[t].append(s)
    live = {s for s in order if is_final(s)}
    stack = list(live)
    while stack:
        t = stack.pop()
        for s in preds[t]:
            if s not in live:
                live.add(s)
                stack.append(s)
    if start not in live:
        return ProductDfa(1, {}, 0, frozenset(), labels=[start])
    kept = [s for s in order if s in live]
    ids = {s: i for i, s in enumerate(kept)}
    trans = {(ids[s], v): ids[t] for s in kept for v, t in edges[s] if t in live}
    finals = frozenset(ids[s] for s in kept if is_final(s))
    return ProductDfa(len(kept), trans, 0, finals, labels=kept)


def lex_dfa(alphabet: Iterable[int]) -> ProductDfa:
    """The Lex automaton alone: interleaved ``x1 y1 x2 y2 ...`` with x <=lex y.

    It has ``|alphabet| + 3`` states (2 over a single letter); its size is the ``d`` in the product
    bound ``d * Qx * Qy``.
    """
    alpha = sorted(set(alphabet))
    return build_product_dfa(universal_dfa(alpha), universal_dfa(alpha), alpha)


def product_state_bound(dfa_x: Dfa, dfa_y: Dfa, alphabet: Iterable[int] | None = None) -> int:
    """Upper bound ``d*Qx*Qy + Qx*Qy`` on :func:`build_product_dfa` states."""
    if alphabet is None:
        alphabet = dfa_x.alphabet | dfa_y.alphabet
    d = lex_dfa(alphabet).num_states
    return (d + 1) * dfa_x.num_states * dfa_y.num_states


def interleave(xs: Sequence[int], ys: Sequence[int]) -> list[int]:
    out = []
    for x, y in zip(xs, ys):
        out.extend((x, y))
    return out


_PRODUCT_CACHE: dict[tuple[str, frozenset[int]], ProductDfa] = {}


def post_clex_regular_product(model: Model, xs: Sequence[int], ys: Sequence[int],
                              dfa: Dfa, alphabet: Iterable[int] | None = None) -> PropagatorHandle:
    """Regular over the interleaved rows with the product automaton."""
    if len(xs) != len(ys):
        raise ValueError("rows must have equal length")
    if alphabet is None:
        alphabet = set().union(*(model.dom(i).as_set() for i in list(xs) + list(ys)))
    key = (dfa.to_text(), frozenset(alphabet))
    prod = _PRODUCT_CACHE.get(key)
    if prod is None:
        prod = _PRODUCT_CACHE[key] = build_product_dfa(dfa, dfa, alphabet)
    prop = RegularPropagator(prod, interleave(xs, ys))
    prop.name = "clex-product"
    return model.post(prop)
