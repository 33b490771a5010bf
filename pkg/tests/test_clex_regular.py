import itertools
import random

import pytest

from clex.basic import lex_le
from clex.clex_generic import clex_lb, clex_ub, filter_clex, regular_adapter
from clex.clex_regular import (build_product_dfa, clex_lb_regular, clex_ub_regular,
                               filter_clex_regular, interleave, lex_dfa, mark_consistent_arcs,
                               post_clex_regular, post_clex_regular_product,
                               product_state_bound, propagate_clex_regular)
from clex.engine import Domain, Model, Status, as_domains
from clex.nsp.separation import separation_domains
from clex.oracle import brute_force_dc, lex_check, regular_check
from clex.regular import Dfa, LayeredGraph, filter_regular, regular_max, universal_dfa, word_dfa

from gen import rand_dfa, rand_domains


def product_filter(xd, yd, dfa):
    """Run Regular with the product automaton over the interleaved rows."""
    alpha = set().union(*(d.as_set() for d in list(xd) + list(yd)))
    prod = build_product_dfa(dfa, dfa, alpha)
    out = filter_regular(prod, interleave(xd, yd))
    if out is None:
        return None
    return out[0::2], out[1::2]


def sum_row_dfa(values) -> Dfa:
    """Words (x, y, z) with y = x + z, every symbol from ``values``."""
    ids = {"start": 0}
    trans = {}

    def sid(key):
        return ids.setdefault(key, len(ids))

    for x in values:
        trans[(0, x)] = sid(("x", x))
        for y in values:
            if y - x in values:
                trans[(sid(("x", x)), y)] = sid(("z", y - x))
    final = sid("done")
    for key in list(ids):
        if isinstance(key, tuple) and key[0] == "z":
            trans[(ids[key], key[1])] = final
    return Dfa(len(ids), trans, 0, frozenset({final}))


# arc marking -------------------------------------------------------------------------------

def test_mark_from_initial_covers_all_alive_arcs():
    rng = random.Random(31)
    for _ in range(50):
        dfa = rand_dfa(rng, 4, 3)
        g = LayeredGraph(dfa, rand_domains(rng, 4, 3))
        if g.empty:
            continue
        marked = mark_consistent_arcs(g, 0, dfa.initial)
        assert marked == {(j, q, v) for j, q, v, _ in g.arcs()}


def test_mark_from_dead_node_is_empty():
    g = LayeredGraph(word_dfa([0, 1, 0]), as_domains([[0, 1]] * 3))
    assert mark_consistent_arcs(g, 1, 0) == set()


def test_mark_unique_path_from_middle():
    g = LayeredGraph(word_dfa([0, 1, 0]), as_domains([[0, 1]] * 3))
    assert mark_consistent_arcs(g, 1, 1) == {(1, 1, 1), (2, 2, 0)}


def test_walk_marks_prefix_of_branch():
    # unique accepted word over the bound's prefix, branch at the last layer
    dfa = Dfa(4, {(0, 0): 1, (1, 1): 2, (2, 0): 3, (2, 1): 3}, 0, frozenset({3}))
    doms = as_domains([[0, 1]] * 3)
    out = clex_lb_regular([0, 1, 0], dfa, doms)
    assert out == as_domains([[0], [1], [0, 1]])
    out = clex_lb_regular([0, 1, 1], dfa, doms)
    assert out == as_domains([[0], [1], [1]])


# bound filters --------------------------------------------------------------------------------

def test_graph_marking_equals_generic():
    rng = random.Random(32)
    for _ in range(400):
        d = rng.randint(2, 3)
        n = rng.randint(1, 5)
        dfa = rand_dfa(rng, 4, d)
        doms = rand_domains(rng, n, d)
        bound = [rng.randrange(d) for _ in range(n)]
        ad = regular_adapter(dfa)
        assert clex_lb_regular(bound, dfa, doms) == clex_lb(bound, ad, doms)
        assert clex_ub_regular(doms, bound, dfa) == clex_ub(doms, bound, ad)


def test_lex_max_bound_fixes_unique_solution():
    dfa = word_dfa([1, 0, 1])
    doms = as_domains([[0, 1]] * 3)
    top = regular_max(dfa, doms)
    assert clex_lb_regular(top, dfa, doms) == as_domains([[1], [0], [1]])


def test_lex_max_bound_keeps_only_bound():
    rng = random.Random(33)
    for _ in range(100):
        dfa = rand_dfa(rng, 4, 2)
        doms = rand_domains(rng, 4, 2)
        top = regular_max(dfa, doms)
        if top is None:
            continue
        assert clex_lb_regular(top, dfa, doms) == [Domain([v]) for v in top]


def test_universal_minima_no_pruning():
    doms = as_domains([[0, 2], [1], [0, 1, 2]])
    assert clex_lb_regular([0, 1, 0], universal_dfa(range(3)), doms) == doms


def test_graph_marking_matches_oracle():
    rng = random.Random(34)
    for _ in range(300):
        d = rng.randint(2, 3)
        n = rng.randint(1, 4)
        dfa = rand_dfa(rng, 4, d)
        xd, yd = rand_domains(rng, n, d), rand_domains(rng, n, d)
        exp = brute_force_dc(xd + yd, [regular_check(range(n), dfa),
                                       regular_check(range(n, 2 * n), dfa),
                                       lex_check(range(n), range(n, 2 * n))])
        got = filter_clex_regular(xd, yd, dfa)
        assert (got[0] + got[1] if got else None) == exp


# product automaton ---------------------------------------------------------------------------------

def test_product_pure_lex_single_pair():
    prod = build_product_dfa(universal_dfa([0, 1]), universal_dfa([0, 1]))
    assert prod.accepts([0, 0]) and prod.accepts([0, 1]) and prod.accepts([1, 1])
    assert not prod.accepts([1, 0])


def test_lex_automaton_size():
    # single letter: x < y is impossible, only equal-so-far and pending remain
    assert lex_dfa([0]).num_states == 2
    for d in range(2, 6):
        assert lex_dfa(range(d)).num_states == d + 3


def test_product_language_exhaustive():
    rng = random.Random(35)
    for _ in range(40):
        d = rng.randint(1, 3)
        a, b = rand_dfa(rng, 4, d), rand_dfa(rng, 4, d)
        alpha = list(range(d))
        prod = build_product_dfa(a, b, alpha)
        assert prod.num_states <= product_state_bound(a, b, alpha)
        for n in range(4):
            for x in itertools.product(alpha, repeat=n):
                for y in itertools.product(alpha, repeat=n):
                    want = a.accepts(x) and b.accepts(y) and lex_le(x, y)
                    assert prod.accepts(interleave(x, y)) == want


def test_product_of_empty_language():
    empty = Dfa(1, {}, 0, frozenset())
    prod = build_product_dfa(empty, empty, [0, 1])
    assert not prod.accepts([])
    m = Model()
    xs, ys = m.new_vars(2, [0, 1]), m.new_vars(2, [0, 1])
    post_clex_regular_product(m, xs, ys, empty)
    assert m.propagate() is Status.FAILED


def test_product_text_round_trip():
    prod = build_product_dfa(word_dfa([0, 1]), universal_dfa([0, 1]))
    assert Dfa.from_text(prod.to_text()).to_text() == prod.to_text()


# agreement -----------------------------------------------------------------------------------------------

def test_three_encodings_agree():
    rng = random.Random(36)
    for _ in range(150):
        d = rng.randint(2, 3)
        n = rng.randint(1, 4)
        dfa = rand_dfa(rng, 4, d)
        xd, yd = rand_domains(rng, n, d), rand_domains(rng, n, d)
        generic = filter_clex(xd, yd, regular_adapter(dfa))
        marking = filter_clex_regular(xd, yd, dfa)
        product = product_filter(xd, yd, dfa)
        norm = [None if r is None else (list(r[0]), list(r[1]))
                for r in (generic, marking, product)]
        assert norm[0] == norm[1] == norm[2]


def test_product_propagator_matches_generic_in_model():
    rng = random.Random(37)
    for _ in range(100):
        d = rng.randint(2, 3)
        n = rng.randint(1, 4)
        dfa = rand_dfa(rng, 4, d)
        doms = rand_domains(rng, 2 * n, d)
        results = []
        for post in (post_clex_regular, post_clex_regular_product):
            m = Model()
            v = [m.new_var(x) for x in doms]
            post(m, v[:n], v[n:], dfa)
            st = m.propagate()
            results.append(None if st is Status.FAILED else m.domains(v))
        assert results[0] == results[1]


@pytest.mark.parametrize("post", [post_clex_regular, post_clex_regular_product])
def test_separation_as_regular_fails_at_root(post):
    n = 5
    dfa = sum_row_dfa(range(1, 2 * n))
    m = Model()
    rows = [[m.new_var(d) for d in r] for r in separation_domains(n)]
    for a, b in zip(rows, rows[1:]):
        post(m, a, b, dfa)
    assert m.propagate() is Status.FAILED


def test_propagate_clex_regular_status():
    m = Model()
    xs = [m.new_var([v]) for v in (0, 1)]
    ys = [m.new_var([v]) for v in (1, 0)]
    assert propagate_clex_regular(m, xs, ys, universal_dfa([0, 1])) is Status.ENTAILED
