import itertools

import numpy as np
import pytest

import oracles
from conftest import as_dict
from twovalued.dominance import (
    dominance_matrix,
    dominates,
    full_equivalence_matrix,
    is_compatible,
    is_compatible_bruteforce,
)
from twovalued.errors import DomainError
from twovalued.profiles import get_domain
from twovalued.scf import ScfTable, anti_rule, constant, example_dia


def ranks(P):
    return tuple(w.ranks for w in P.orders)


@pytest.mark.parametrize("m, n", [(1, 2), (2, 2), (1, 3), (3, 2)])
def test_dominance_matrix_matches_oracle(m, n):
    dom = get_domain(n, m)
    profiles = [ranks(P) for P in dom]
    for side in (0, 1):
        mat = dominance_matrix(dom, 0, 1, side)
        for i, j in itertools.product(range(dom.size), repeat=2):
            assert mat[i, j] == oracles.dominates(profiles[i], profiles[j], 0, 1, side)


def test_scalar_dominance_agrees_with_matrix():
    dom = get_domain(3, 2)
    mat = dominance_matrix(dom, 0, 1, 1)
    for i in range(0, dom.size, 13):
        for j in range(0, dom.size, 7):
            assert dominates(dom.profile(i), dom.profile(j), 0, 1, 1) == mat[i, j]


def test_dominance_is_a_preorder():
    dom = get_domain(3, 2)
    for side in (0, 1):
        m = dominance_matrix(dom, 0, 1, side)
        assert m.diagonal().all()
        mi = m.astype(np.int32)
        assert not ((mi @ mi > 0) & ~m).any()


@pytest.mark.parametrize("m, n", [(2, 2), (2, 3)])
def test_four_way_equivalence(m, n):
    dom = get_domain(n, m)
    da = dominance_matrix(dom, 0, 1, 0)
    db = dominance_matrix(dom, 0, 1, 1)
    eq = full_equivalence_matrix(dom, 0, 1)
    assert np.array_equal(da & db, da & da.T)
    assert np.array_equal(da & da.T, db & db.T)
    assert np.array_equal(db & db.T, eq)


def test_dia_is_compatible(dia):
    assert is_compatible(dia, 0, 1)
    assert is_compatible_bruteforce(dia, 0, 1)


def test_anti_rule_is_not_compatible():
    f = anti_rule()
    res = is_compatible(f, 0, 1)
    assert not res
    P, Q = res.witness["P"], res.witness["Q"]
    assert dominates(P, Q, 0, 1, f(P)) and f(Q) != f(P)


def test_range_must_be_the_pair():
    with pytest.raises(DomainError):
        is_compatible(constant(get_domain(3, 1), 2), 0, 1)


def test_compatibility_matches_oracle_exhaustively():
    dom = get_domain(2, 2)
    for combo in itertools.product((0, 1), repeat=dom.size):
        if len(set(combo)) < 2:
            continue
        f = ScfTable(dom, combo)
        expected = oracles.compatible(as_dict(f), 0, 1) is None
        assert is_compatible(f, 0, 1).holds == expected
        assert is_compatible_bruteforce(f, 0, 1).holds == expected
