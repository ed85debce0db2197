import itertools

import numpy as np
import pytest

import oracles
from conftest import as_dict
from twovalued.errors import DomainError, ParseError
from twovalued.orders import Universe, parse_order
from twovalued.profiles import Profile, get_domain, parse_profile_inline
from twovalued.scf import (
    ScfTable,
    anti_rule,
    b_condition,
    b_implication,
    coalition_manipulates,
    constant,
    dictatorship,
    enumerate_tables,
    example_dia,
    format_scf,
    is_csp,
    is_essentially_based_and_monotonic,
    is_individually_sp,
    is_weak_pareto,
    parse_scf,
    search_sp_tables,
)

U2 = Universe(("a", "b"))
U3 = Universe(("a", "b", "c"))


def onto_tables(m, n, values=(0, 1)):
    dom = get_domain(n, m)
    return [f for f in enumerate_tables(dom, values) if f.range() == frozenset(values)]


ONTO_22 = onto_tables(2, 2)


def test_onto_population_size():
    assert len(ONTO_22) == 510


def test_range():
    assert example_dia().range() == {0, 1}
    assert constant(get_domain(3, 2), 0).range() == {0}
    assert dictatorship(get_domain(3, 2), 0, among=(0, 1)).range() == {0, 1}


def test_table_validation():
    dom = get_domain(2, 1)
    with pytest.raises(DomainError):
        ScfTable(dom, [0, 1])
    with pytest.raises(DomainError):
        ScfTable(dom, [0, 1, 2])


def test_values_are_read_only():
    f = example_dia()
    with pytest.raises(ValueError):
        f.values[0] = 1


def test_anti_rule_manipulation():
    f = anti_rule()
    P = parse_profile_inline("(a>b)", U2)
    Q = coalition_manipulates(f, P, {0})
    assert Q is not None
    assert f(Q) == 0 and f(P) == 1
    # the misreport b>a also works; the search returns the first in enumeration order
    assert f(parse_profile_inline("(b>a)", U2)) == 0


def test_coalition_manipulates_needs_nonempty_coalition():
    with pytest.raises(DomainError):
        coalition_manipulates(anti_rule(), get_domain(2, 1).profile(0), set())
    with pytest.raises(DomainError):
        coalition_manipulates(anti_rule(), get_domain(2, 1).profile(0), {3})


def test_dictator_cannot_manipulate():
    dom = get_domain(3, 2)
    f = dictatorship(dom, 0)
    for P in dom:
        assert coalition_manipulates(f, P, {0}) is None
    assert is_csp(f)
    assert is_weak_pareto(f)


def test_dia_has_no_manipulation(dia):
    for P in dia.domain:
        for D in ({0}, {1}, {0, 1}):
            assert coalition_manipulates(dia, P, D) is None
    assert is_csp(dia) and is_individually_sp(dia) and is_weak_pareto(dia)


def test_anti_rule_fails_everything():
    f = anti_rule()
    res = is_csp(f)
    assert not res
    P, Q, D = res.witness["P"], res.witness["Q"], res.witness["D"]
    assert all(P[v].ranks[f(Q)] < P[v].ranks[f(P)] for v in D)
    assert not is_individually_sp(f)
    assert not is_weak_pareto(f)
    assert not is_essentially_based_and_monotonic(f, 0, 1)


@pytest.mark.parametrize("f", ONTO_22[::17])
def test_manipulation_search_matches_oracle(f):
    expected = oracles.manipulation(as_dict(f), 2, 2) is None
    assert is_csp(f).holds == expected


def test_csp_matches_oracle_one_voter():
    for f in onto_tables(1, 2):
        assert is_csp(f).holds == (oracles.manipulation(as_dict(f), 2, 1) is None)
    for f in onto_tables(1, 3)[::97]:
        assert is_csp(f).holds == (oracles.manipulation(as_dict(f), 3, 1) is None)


def test_individual_sp_matches_oracle():
    for f in ONTO_22[::5]:
        assert is_individually_sp(f).holds == (oracles.individual_manipulation(as_dict(f), 2, 2) is None)


def test_csp_equals_individual_sp_on_onto_tables():
    for f in ONTO_22:
        assert is_csp(f).holds == is_individually_sp(f).holds


def test_weak_pareto_matches_oracle():
    for f in ONTO_22:
        assert is_weak_pareto(f).holds == (oracles.weak_pareto_violation(as_dict(f)) is None)


def test_csp_implies_weak_pareto():
    for f in ONTO_22:
        if is_csp(f):
            assert is_weak_pareto(f)


def test_csp_count_at_two_voters():
    assert sum(1 for f in ONTO_22 if is_csp(f)) == 18


def test_one_voter_two_alternatives_has_two_csp_onto_functions():
    assert sum(1 for f in onto_tables(1, 2) if is_csp(f)) == 2


# --- B conditions ---


def test_b1_reflexive_and_failing_pair():
    dom = get_domain(3, 2)
    for P in dom:
        assert b_condition(P, P, 0, 1, "B1")
    P = parse_profile_inline("(a>b)", U2)
    Q = parse_profile_inline("(b>a)", U2)
    assert not b_condition(P, Q, 0, 1, "B1")
    assert b_condition(Q, P, 0, 1, "B1")


def test_b2_is_b1_swapped():
    for dom in (get_domain(2, 1), get_domain(3, 2)):
        for P, Q in itertools.product(list(dom)[:40], repeat=2):
            assert b_condition(P, Q, 0, 1, "B2") == b_condition(Q, P, 0, 1, "B1")


def test_b1_matches_oracle():
    dom = get_domain(3, 2)
    profiles = list(dom)
    for P, Q in itertools.product(profiles[::4], profiles[::3]):
        rp = tuple(w.ranks for w in P.orders)
        rq = tuple(w.ranks for w in Q.orders)
        assert b_condition(P, Q, 0, 1, "B1") == oracles.b1(rp, rq, 0, 1)


def test_b_condition_rejects_unknown_label():
    P = get_domain(2, 1).profile(0)
    with pytest.raises(DomainError):
        b_condition(P, P, 0, 1, "B3")


def test_bbm_matches_strict_oracle_with_basedness():
    for f in ONTO_22:
        d = as_dict(f)
        assert is_essentially_based_and_monotonic(f, 0, 1).holds == oracles.based_and_monotonic_strict(d, 0, 1)


def test_either_primed_implication_suffices():
    for f in ONTO_22:
        first = b_implication(f, 0, 1, "1'").holds
        second = b_implication(f, 0, 1, "2'").holds
        assert first == second
        assert first == oracles.one_prime(as_dict(f), 0, 1, "1'")


def test_bbm_requires_pair_range():
    with pytest.raises(DomainError):
        is_essentially_based_and_monotonic(constant(get_domain(2, 2), 0), 0, 1)


def test_bbm_on_dia(dia):
    assert is_essentially_based_and_monotonic(dia, 0, 1)


# --- exhaustive search ---


def test_search_sp_tables_matches_brute_force():
    dom = get_domain(2, 1)
    brute = {f.values.tobytes() for f in enumerate_tables(dom, (0, 1)) if is_individually_sp(f)}
    found = {f.values.tobytes() for f in search_sp_tables(dom, (0, 1))}
    assert brute == found


def test_search_sp_tables_strict_counts():
    dom = get_domain(3, 2, strict=True)
    tables = list(search_sp_tables(dom))
    assert all(is_individually_sp(f) for f in tables)
    assert sum(1 for f in tables if len(f.range()) == 3) == 2


# --- DIA ---


@pytest.mark.parametrize(
    "profile, value",
    [
        ("(a~b>c, a~b>c)", "a"),
        ("(a~b>c, a>b>c)", "a"),
        ("(c>a~b, c>a~b)", "b"),
        ("(c>a~b, a>b>c)", "b"),
        ("(a~b>c, b>a>c)", "b"),
        ("(b>a>c, a>b>c)", "b"),
        ("(a>b>c, b>a>c)", "a"),
        ("(a~b~c, b>a>c)", "a"),
    ],
)
def test_dia_values(dia, profile, value):
    assert U3.label(dia(parse_profile_inline(profile, U3))) == value


def test_dia_strict_profiles_follow_voter_zero(dia):
    for i in dia.domain.strict_indices():
        P = dia.domain.profile(int(i))
        expected = 0 if P[0].ranks[0] < P[0].ranks[1] else 1
        assert dia(P) == expected


# --- text format ---


def test_scf_format_round_trip(dia):
    text = format_scf(dia)
    assert text.splitlines()[:3] == ["universe: a b c", "society: 2", "domain: weak"]
    assert parse_scf(text) == dia


def test_strict_table_round_trip():
    f = dictatorship(get_domain(3, 2, strict=True), 1)
    assert parse_scf(format_scf(f)) == f


@pytest.mark.parametrize(
    "edit, line",
    [
        (lambda t: t.replace("P#3:", "P#4:", 1), 7),
        (lambda t: t.replace("-> a\n", "-> z\n", 1), 4),
        (lambda t: t.replace("society: 2", "society: x"), 2),
        (lambda t: t.replace("universe: a b c\n", ""), 1),
    ],
)
def test_scf_parse_errors(dia, edit, line):
    with pytest.raises(ParseError) as err:
        parse_scf(edit(format_scf(dia)))
    assert err.value.line == line


def test_scf_parse_rejects_wrong_order(dia):
    lines = format_scf(dia).splitlines()
    lines[3], lines[4] = lines[4].replace("P#1", "P#0"), lines[3].replace("P#0", "P#1")
    with pytest.raises(ParseError) as err:
        parse_scf("\n".join(lines))
    assert err.value.line == 4


def test_scf_parse_rejects_missing_rows(dia):
    text = "\n".join(format_scf(dia).splitlines()[:-1])
    with pytest.raises(ParseError):
        parse_scf(text)
