import random

import numpy as np
import pytest

from twovalued.committees import Committee, ExtendedCommittee, class_membership, dual, enumerate_committees
from twovalued.decompose import (
    decompose,
    extract_base_committee,
    next_entry,
    restrict_scf,
    run,
    start,
)
from twovalued.errors import DomainError, NotCSPError
from twovalued.orders import Universe, parse_order
from twovalued.profiles import PartialProfile, get_domain, unanimous_indifference_profiles
from twovalued.psi import PsiSpec, psi_table, random_psi_spec, strict_committee_scf
from twovalued.scf import ScfTable, anti_rule, constant, dictatorship, enumerate_tables, is_csp

U3 = Universe(("a", "b", "c"))


def csp_onto_tables(m, n):
    dom = get_domain(n, m)
    return [f for f in enumerate_tables(dom, (0, 1)) if f.range() == {0, 1} and is_csp(f)]


CSP_22 = csp_onto_tables(2, 2)


def test_base_committee_of_dictator():
    f = dictatorship(get_domain(2, 2), 0)
    assert extract_base_committee(f, 0, 1) == Committee.generated_by({0, 1}, [{0}])


def test_base_committee_of_unanimity_for_b():
    # a unless every voter strictly prefers b; the strict-profile committee is {{0},{1},{0,1}}
    dom = get_domain(2, 2)
    _, _, db = dom.coalition_masks(0, 1)
    f = ScfTable(dom, np.where(db == 0b11, 1, 0))
    assert extract_base_committee(f, 0, 1) == Committee.generated_by({0, 1}, [{0}, {1}])


def test_base_committee_rejects_anti_rule():
    with pytest.raises(NotCSPError):
        extract_base_committee(anti_rule(), 0, 1)


def test_base_committee_is_the_unique_committee_with_both_inclusions():
    for f in CSP_22 + csp_onto_tables(1, 3):
        dom = f.domain
        F = extract_base_committee(f, 0, 1)
        fits = []
        for G in enumerate_committees(range(dom.n_voters)):
            in_a, in_b = class_membership(dom, ExtendedCommittee(PartialProfile(), G), 0, 1)
            if (f.values[in_a] == 0).all() and (f.values[in_b] == 1).all():
                fits.append(G)
        assert fits == [F]


def test_base_committee_uniqueness_at_three_voters():
    rng = random.Random(3)
    for _ in range(20):
        spec = random_psi_spec(rng, 3, 2, pair=(0, 1))
        f = psi_table(spec)
        if f.range() != {0, 1}:
            continue
        dom = f.domain
        F = extract_base_committee(f, 0, 1)
        for G in enumerate_committees(range(3)):
            in_a, in_b = class_membership(dom, ExtendedCommittee(PartialProfile(), G), 0, 1)
            if (f.values[in_a] == 0).all() and (f.values[in_b] == 1).all():
                assert G == F


def test_restrict_with_empty_pi_is_identity(dia):
    assert restrict_scf(dia, PartialProfile()) == dia


def test_restrict_dia_on_second_entry_is_constant_b(dia):
    g = restrict_scf(dia, PartialProfile({0: parse_order("c>a~b", U3)}))
    assert g.domain.n_voters == 1 and g.domain.size == 13
    assert g.range() == {1}


def test_restrict_rejects_full_pi(dia):
    pi = PartialProfile({0: parse_order("a~b>c", U3), 1: parse_order("a~b>c", U3)})
    with pytest.raises(DomainError):
        restrict_scf(dia, pi)


def test_restrictions_of_csp_functions_are_csp():
    for f in CSP_22:
        for v in range(2):
            for w in get_domain(2, 1).orders:
                g = restrict_scf(f, PartialProfile({v: w}))
                assert is_csp(g)


def test_dia_decomposes_extensionally(dia):
    spec = decompose(dia, 0, 1)
    assert spec.default == 0
    assert psi_table(spec) == dia
    assert spec.entries[0].pi == PartialProfile()
    F0 = spec.entries[0].family
    assert not F0.is_empty and not dual(F0).is_empty


def test_dia_second_entry_mirrors_the_hand_representation(dia):
    state = run(dia, 0, 1)
    frozen = [ec for ec in state.entries if ec.pi == PartialProfile({0: parse_order("c>a~b", U3)})]
    assert frozen and frozen[0].family == Committee.empty({1})
    assert dual(frozen[0].family).members == {frozenset(), frozenset({1})}


def test_one_entry_suffices_for_committee_rules():
    dom = get_domain(2, 2)
    for F in enumerate_committees(range(2)):
        if F.is_empty or F.is_power_set:
            continue
        spec = PsiSpec(0, 1, 0, (ExtendedCommittee(PartialProfile(), F),), 2, Universe.of_size(2))
        f = psi_table(spec)
        state = start(f, 0, 1)
        if f.values[0] == 0:
            assert next_entry(state) is None
            assert state.delta_sizes == [0]


def test_state_invariants_along_the_run():
    rng = random.Random(7)
    for _ in range(40):
        spec = random_psi_spec(rng, 2, 3, pair=(0, 1))
        f = psi_table(spec)
        if f.range() != {0, 1} or extract_base_committee_or_none(f) is None:
            continue
        state = run(f, 0, 1)
        sizes = state.delta_sizes
        assert all(x > y for x, y in zip(sizes, sizes[1:]))
        etas = [e for e in state.etas if e is not None]
        assert etas == sorted(set(etas))
        for alpha, eta in enumerate(state.etas):
            if eta is not None:
                assert alpha <= eta
        pi_idx = f.domain.index(state.pi)
        for ec in state.entries:
            in_a, in_b = class_membership(f.domain, ec, 0, 1)
            assert not in_a[pi_idx] and not in_b[pi_idx]


def extract_base_committee_or_none(f):
    try:
        return extract_base_committee(f, 0, 1)
    except NotCSPError:
        return None


def test_round_trip_on_every_csp_table_two_voters():
    assert len(CSP_22) == 18
    for f in CSP_22:
        assert psi_table(decompose(f, 0, 1)) == f


def test_round_trip_exhaustive_one_voter_three_alternatives():
    for f in csp_onto_tables(1, 3):
        assert psi_table(decompose(f, 0, 1)) == f


@pytest.mark.parametrize("m, n", [(2, 3), (3, 2), (1, 3), (3, 3)])
def test_round_trip_random_specs(m, n):
    rng = random.Random(100 * m + n)
    done = 0
    while done < (8 if (m, n) == (3, 3) else 40):
        spec = random_psi_spec(rng, m, n, pair=(0, 1))
        f = psi_table(spec)
        if f.range() != {0, 1}:
            continue
        assert psi_table(decompose(f, 0, 1)) == f
        done += 1


def test_round_trip_on_other_pair():
    rng = random.Random(1)
    done = 0
    while done < 10:
        spec = random_psi_spec(rng, 2, 3, pair=(2, 0))
        f = psi_table(spec)
        if f.range() != {0, 2}:
            continue
        assert psi_table(decompose(f, 2, 0)) == f
        done += 1


def test_every_unanimous_indifference_profile_gives_a_representation(dia):
    defaults = set()
    for pi in unanimous_indifference_profiles(0, 1, U3, 2):
        spec = decompose(dia, 0, 1, pi)
        assert psi_table(spec) == dia
        assert spec.default == dia(pi)
        defaults.add(spec.default)
    assert defaults == {0, 1}


def test_rejects_non_csp_input():
    with pytest.raises(NotCSPError):
        decompose(anti_rule(), 0, 1)


def test_rejects_bad_inputs(dia):
    with pytest.raises(DomainError):
        decompose(constant(get_domain(2, 2), 0), 0, 1)
    with pytest.raises(DomainError):
        decompose(dia, 0, 0)
    with pytest.raises(DomainError):
        decompose(dia, 0, 1, dia.domain.profile(168))
    with pytest.raises(DomainError):
        decompose(strict_committee_scf(Committee.generated_by({0, 1}, [{0}]), 0, 1), 0, 1)
