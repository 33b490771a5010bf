import random

import pytest

from clex.basic import filter_lex
from clex.clex_generic import (c_max, c_min, clex_lb, clex_ub, filter_clex,
                               mark_consistent_values, propagate_clex, regular_adapter,
                               sequence_adapter, sum_row_adapter, true_adapter)
from clex.engine import Domain, Model, Status, as_domains
from clex.nsp.separation import separation_domains
from clex.oracle import (brute_force_dc, lex_check, regular_check, sequence_check,
                         sum_check)
from clex.sequence import SequenceSpec

from gen import rand_dfa, rand_domains

R = Domain.range


def rows5():
    return separation_domains(5)


def split(doms, n):
    return doms[:n], doms[n:]


# lex-extreme solutions ------------------------------------------------------------------

def test_c_min_sum_row():
    row1, row2 = rows5()[:2]
    assert row1 == [R(1, 4), R(6, 9), Domain([5])]
    assert c_min(sum_row_adapter(), row1) == [1, 6, 5]
    assert c_max(sum_row_adapter(), row2) == [4, 8, 4]


def test_c_min_true_is_per_variable_minimum():
    doms = as_domains([[3, 4], [0, 9], [2]])
    assert c_min(true_adapter(), doms) == [3, 0, 2]
    assert c_max(true_adapter(), doms) == [4, 9, 2]


def test_c_min_sequence():
    doms = as_domains([[0, 1], [0, 1], [1], [0, 1]])
    assert c_min(sequence_adapter(SequenceSpec(2, 2, 3)), doms) == [0, 1, 1, 0]


def test_c_min_unsat():
    assert c_min(sum_row_adapter(), [Domain([1]), Domain([9]), Domain([1])]) is None


# marking ------------------------------------------------------------------------------------

def test_mark_everything_without_constraint():
    doms = as_domains([[0, 1], [2, 3]])
    marks = [set(), set()]
    mark_consistent_values(true_adapter(), marks, doms)
    assert marks == [{0, 1}, {2, 3}]


def test_mark_nothing_on_empty_probe():
    marks = [set(), set()]
    mark_consistent_values(true_adapter(), marks, [Domain([1]), Domain()])
    assert marks == [set(), set()]


def test_mark_sum_probe():
    marks = [set(), set(), set()]
    mark_consistent_values(sum_row_adapter(), marks, [R(2, 4), R(5, 8), Domain([4])])
    assert marks == [{2, 3, 4}, {6, 7, 8}, {4}]


# bound filters ----------------------------------------------------------------------------------

def test_clex_lb_worked_example():
    row2 = rows5()[1]
    assert row2 == [R(1, 4), R(5, 8), Domain([4])]
    out = clex_lb([1, 6, 5], sum_row_adapter(), row2)
    assert out == [R(2, 4), R(6, 8), Domain([4])]


def test_clex_lb_minima_without_constraint_no_pruning():
    doms = as_domains([[0, 2], [1, 3], [5]])
    assert clex_lb([0, 1, 5], true_adapter(), doms) == doms


def test_clex_lb_unique_solution_fixes():
    doms = as_domains([[1, 2], [4, 5, 6], [3, 4]])
    out = clex_lb([2, 6, 4], sum_row_adapter(), doms)
    assert out == as_domains([[2], [6], [4]])


def test_clex_ub_prunes_above_bound():
    doms = as_domains([[0, 1, 2], [0, 1]])
    assert clex_ub(doms, [1, 0], true_adapter()) == as_domains([[0, 1], [0, 1]])


def _oracle_ub(doms, bound, checks):
    n = len(doms)
    fixed = [Domain([b]) for b in bound]
    return brute_force_dc(list(doms) + fixed, checks + [lex_check(range(n), range(n, 2 * n))])


def test_bound_filters_match_oracle():
    rng = random.Random(21)
    for _ in range(200):
        d = rng.randint(2, 3)
        n = rng.randint(1, 4)
        dfa = rand_dfa(rng, 3, d)
        doms = rand_domains(rng, n, d)
        bound = [rng.randrange(d) for _ in range(n)]
        ad = regular_adapter(dfa)
        got = clex_ub(doms, bound, ad)
        exp = _oracle_ub(doms, bound, [regular_check(range(n), dfa)])
        assert got == (exp[:n] if exp else None)
        got = clex_lb(bound, ad, doms)
        fixed = [Domain([b]) for b in bound]
        exp = brute_force_dc(fixed + list(doms), [regular_check(range(n, 2 * n), dfa),
                                                  lex_check(range(n), range(n, 2 * n))])
        assert got == (exp[n:] if exp else None)


# full propagator -------------------------------------------------------------------------------------

def test_branch_fixes_first_row():
    row1, row2 = rows5()[:2]
    row1 = [Domain([1])] + row1[1:]
    nx, ny = filter_clex(row1, row2, sum_row_adapter())
    assert nx == as_domains([[1], [6], [5]])
    assert ny == [R(2, 4), R(6, 8), Domain([4])]


def test_separation_pair_at_root():
    row1, row2 = rows5()[:2]
    nx, ny = filter_clex(row1, row2, sum_row_adapter())
    exp = brute_force_dc(row1 + row2, [sum_check(1, 0, 2), sum_check(4, 3, 5),
                                       lex_check(range(3), range(3, 6))])
    assert nx + ny == exp


def _oracle(xd, yd, row_checks):
    n = len(xd)
    checks = row_checks(range(n)) + row_checks(range(n, 2 * n)) + [
        lex_check(range(n), range(n, 2 * n))]
    return brute_force_dc(list(xd) + list(yd), checks)


def _check_against_oracle(xd, yd, adapter, row_checks):
    got = filter_clex(xd, yd, adapter)
    exp = _oracle(xd, yd, row_checks)
    if exp is None:
        assert got is None
    else:
        assert got is not None and got[0] + got[1] == exp
    return got


def test_regular_adapter_matches_oracle():
    rng = random.Random(22)
    for _ in range(150):
        d = rng.randint(2, 3)
        n = rng.randint(1, 4)
        dfa = rand_dfa(rng, 4, d)
        xd, yd = split(rand_domains(rng, 2 * n, d), n)
        _check_against_oracle(xd, yd, regular_adapter(dfa),
                              lambda s: [regular_check(list(s), dfa)])


def test_sequence_adapter_matches_oracle():
    rng = random.Random(23)
    for _ in range(150):
        k = rng.randint(1, 3)
        l = rng.randint(0, k)
        spec = SequenceSpec(l, rng.randint(l, k), k)
        n = rng.randint(1, 4)
        xd, yd = split(rand_domains(rng, 2 * n, 2), n)
        _check_against_oracle(xd, yd, sequence_adapter(spec),
                              lambda s: [sequence_check(list(s), spec.l, spec.u, k, {1})])


def test_sum_adapter_matches_oracle():
    rng = random.Random(24)
    for _ in range(150):
        xd, yd = split(rand_domains(rng, 6, 6), 3)
        _check_against_oracle(xd, yd, sum_row_adapter(),
                              lambda s: [sum_check(s[1], s[0], s[2])])


def test_true_adapter_is_plain_lex():
    rng = random.Random(25)
    for _ in range(200):
        n = rng.randint(1, 4)
        xd, yd = split(rand_domains(rng, 2 * n, 4), n)
        got = filter_clex(xd, yd, true_adapter())
        assert got == filter_lex(xd, yd)


def test_entailed_pair_acts_like_independent_rows():
    rng = random.Random(26)
    seen = 0
    for _ in range(300):
        dfa = rand_dfa(rng, 3, 3)
        n = rng.randint(1, 3)
        xd = rand_domains(rng, n, 2)
        yd = rand_domains(rng, n, 3)
        ad = regular_adapter(dfa)
        xu, yl = c_max(ad, xd), c_min(ad, yd)
        if xu is None or yl is None or not xu < yl:
            continue
        seen += 1
        with_shortcut = filter_clex(xd, yd, ad)
        without = filter_clex(xd, yd, ad, shortcut=False)
        assert with_shortcut == without == (ad.filter(xd), ad.filter(yd))
    assert seen > 10


def test_idempotent_and_bounds_stable():
    rng = random.Random(27)
    for _ in range(200):
        d = rng.randint(2, 3)
        n = rng.randint(1, 4)
        ad = regular_adapter(rand_dfa(rng, 4, d))
        xd, yd = split(rand_domains(rng, 2 * n, d), n)
        once = filter_clex(xd, yd, ad)
        if once is None:
            continue
        assert filter_clex(*once, ad) == once
        xl, yu = c_min(ad, xd), c_max(ad, yd)
        assert c_min(ad, clex_ub(xd, yu, ad)) == xl
        assert c_max(ad, clex_lb(xl, ad, yd)) == yu


def test_adapter_calls_linear_in_n():
    for n in (4, 8, 16):
        ad = sequence_adapter(SequenceSpec(1, 2, 3))
        doms = [Domain([0, 1])] * n
        filter_clex(doms, doms, ad, shortcut=False)
        # two extremes, two half-filters: each at most n + 2 filter calls
        assert ad.calls <= 4 * (n + 2)


def test_propagator_in_model():
    m = Model()
    xs = [m.new_var(d) for d in rows5()[0]]
    ys = [m.new_var(d) for d in rows5()[1]]
    m.narrow(xs[0], Domain([1]))
    assert propagate_clex(m, xs, ys, sum_row_adapter()) is not Status.FAILED
    assert m.domains(xs) == as_domains([[1], [6], [5]])


def test_length_mismatch():
    with pytest.raises(ValueError):
        filter_clex([Domain([0])], [], true_adapter())
