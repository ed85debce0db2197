"""Batch verification of the characterization and representation results
on one finite instance.

Tables with range {a, b} are enumerated exhaustively when there are at
most ``2**EXHAUSTIVE_PROFILES`` of them, and sampled otherwise; sampling
mixes uniform onto tables, psi tables, and psi tables with one flipped
entry so that both CSP and non-CSP inputs occur.
"""

from __future__ import annotations

import itertools
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np

from .committees import (
    Committee,
    class_membership,
    dual,
    enumerate_committees,
)
from .decompose import decompose
from .dominance import dominance_matrix, full_equivalence_matrix, is_compatible
from .errors import ResourceBoundError
from .profiles import get_domain
from .psi import find_strict_dictator, psi_table, random_psi_spec, strict_committee_scf
from .report import RunReport
from .scf import (
    ScfTable,
    is_csp,
    is_essentially_based_and_monotonic,
    is_individually_sp,
    is_weak_pareto,
    search_sp_tables,
)

MAX_VOTERS = 3
MAX_ALTERNATIVES = 3
EXHAUSTIVE_PROFILES = 13
PAIR_SCAN_PROFILES = 169
WORKERS_ENV = "TWOVALUED_WORKERS"


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def two_valued_population(n_voters: int, n_alternatives: int, seed: int, samples: int, a: int = 0, b: int = 1):
    """Tables with range exactly {a, b}; returns (tables, exhaustive?)."""
    dom = get_domain(n_alternatives, n_voters)
    if dom.size <= EXHAUSTIVE_PROFILES:
        tables = []
        for combo in itertools.product((a, b), repeat=dom.size):
            if a in combo and b in combo:
                tables.append(ScfTable(dom, combo))
        return tables, True
    rng = random.Random(seed)
    nprng = np.random.default_rng(seed)
    tables: list[ScfTable] = []
    while len(tables) < samples:
        kind = len(tables) % 3
        if kind == 0:
            vals = nprng.choice([a, b], size=dom.size)
        else:
            spec = random_psi_spec(rng, n_voters, n_alternatives, pair=(a, b))
            vals = psi_table(spec).values.copy()
            if kind == 2:
                i = int(nprng.integers(dom.size))
                vals[i] = b if vals[i] == a else a
        if a in vals and b in vals:
            tables.append(ScfTable(dom, vals))
    return tables, False


def _population_row(args):
    f, a, b, pair_scan = args
    csp = is_csp(f).holds
    row = {
        "csp": csp,
        "compat": is_compatible(f, a, b).holds,
        "bbm": is_essentially_based_and_monotonic(f, a, b).holds,
        "isp": is_individually_sp(f).holds,
        "pareto": True,
        "equivalent_equal": True,
        "roundtrip": True,
    }
    if csp:
        row["pareto"] = is_weak_pareto(f).holds
        if pair_scan:
            eq = full_equivalence_matrix(f.domain, a, b)
            row["equivalent_equal"] = bool((f.values[:, None] == f.values[None, :])[eq].all())
        spec = decompose(f, a, b)
        row["roundtrip"] = psi_table(spec) == f
    return row


def _psi_row(args):
    spec = args
    f = psi_table(spec)
    return is_csp(f).holds


def check_structure(n_voters: int, n_alternatives: int, rng: random.Random, report: RunReport, a: int = 0, b: int = 1):
    dom = get_domain(n_alternatives, n_voters)
    indiff, da, db = dom.coalition_masks(a, b)
    full = (1 << n_voters) - 1
    report.add(
        "partition I/D(a)/D(b)",
        bool(((indiff | da | db) == full).all() and not (indiff & da).any() and not (indiff & db).any() and not (da & db).any()),
    )

    involution = True
    for size in range(n_voters + 1):
        for carrier in itertools.combinations(range(n_voters), size):
            for F in enumerate_committees(carrier):
                involution &= dual(dual(F)) == F
    involution &= dual(Committee.empty(range(n_voters))) == Committee.power_set(range(n_voters))
    report.add("dual involution", involution)

    disjoint = True
    for _ in range(50):
        spec = random_psi_spec(rng, n_voters, n_alternatives, pair=(a, b))
        for ec in spec.entries:
            in_a, in_b = class_membership(dom, ec, a, b)
            disjoint &= not (in_a & in_b).any()
    report.add("class disjointness", disjoint)

    if dom.size <= PAIR_SCAN_PROFILES:
        da_m = dominance_matrix(dom, a, b, a)
        db_m = dominance_matrix(dom, a, b, b)
        eq = full_equivalence_matrix(dom, a, b)
        four_way = (
            np.array_equal(da_m & db_m, da_m & da_m.T)
            and np.array_equal(da_m & da_m.T, db_m & db_m.T)
            and np.array_equal(db_m & db_m.T, eq)
        )
        report.add("dominance four-way equivalence", four_way)
        preorder = True
        for m in (da_m, db_m):
            mi = m.astype(np.int32)
            preorder &= bool(m.diagonal().all()) and not ((mi @ mi > 0) & ~m).any()
        report.add("dominance reflexive+transitive", preorder)


def check_strict_committees(n_voters: int, n_alternatives: int, report: RunReport, a: int = 0, b: int = 1):
    dom = get_domain(n_alternatives, n_voters, strict=True)
    found = {
        f.values.tobytes()
        for f in search_sp_tables(dom, (a, b))
        if f.range() == frozenset((a, b)) and is_csp(f)
    }
    expected = {
        strict_committee_scf(F, a, b, n_alternatives).values.tobytes()
        for F in enumerate_committees(range(n_voters))
        if not F.is_empty and not F.is_power_set
    }
    report.counts["strict CSP onto {a,b}"] = len(found)
    report.counts["nonempty committees without the empty coalition"] = len(expected)
    report.add("strict two-valued = committee rules", found == expected, f"{len(found)} functions")


def check_strict_dictators(n_voters: int, n_alternatives: int, report: RunReport):
    dom = get_domain(n_alternatives, n_voters, strict=True)
    wide = [f for f in search_sp_tables(dom) if len(f.range()) >= 3 and is_csp(f)]
    dictators = [find_strict_dictator(f) for f in wide]
    holds = len(wide) == n_voters and sorted(d for d in dictators if d is not None) == list(range(n_voters))
    report.counts["strict CSP with range >= 3"] = len(wide)
    report.add("strict wide-range = dictatorships", holds, f"dictators {dictators}")


def verify_theorems(n_voters: int, n_alternatives: int, seed: int = 0, samples: int = 500, psi_specs: int = 200) -> RunReport:
    if not (1 <= n_voters <= MAX_VOTERS and 2 <= n_alternatives <= MAX_ALTERNATIVES):
        raise ResourceBoundError(
            f"verify-theorems supports 1 <= |V| <= {MAX_VOTERS} and 2 <= |A| <= {MAX_ALTERNATIVES}"
        )
    started = time.perf_counter()
    a, b = 0, 1
    workers = worker_count()
    rng = random.Random(seed)
    dom = get_domain(n_alternatives, n_voters)
    tables, exhaustive = two_valued_population(n_voters, n_alternatives, seed, samples, a, b)
    report = RunReport(
        "verify-theorems",
        {
            "voters": n_voters,
            "alternatives": n_alternatives,
            "pair": "a b",
            "seed": seed,
            "mode": "exhaustive" if exhaustive else "sampled",
        },
    )
    pair_scan = dom.size <= PAIR_SCAN_PROFILES
    rows = _map(_population_row, [(f, a, b, pair_scan) for f in tables], workers)
    n_csp = sum(r["csp"] for r in rows)
    report.counts["profiles"] = dom.size
    report.counts["tables scanned"] = len(rows)
    report.counts["CSP found"] = n_csp

    def count(pred):
        return sum(1 for r in rows if not pred(r))

    bad = count(lambda r: r["csp"] == r["compat"])
    report.add("CSP <=> compatible", bad == 0, f"{bad} mismatches")
    bad = count(lambda r: r["compat"] == r["bbm"])
    report.add("compatible <=> (1') and (2')", bad == 0, f"{bad} mismatches")
    bad = count(lambda r: r["csp"] == r["isp"])
    report.add("CSP <=> individually SP", bad == 0, f"{bad} mismatches")
    bad = count(lambda r: r["pareto"])
    report.add("CSP => weak Pareto", bad == 0, f"{bad} violations")
    if pair_scan:
        bad = count(lambda r: r["equivalent_equal"])
        report.add("CSP => (E(P,Q)=V => f(P)=f(Q))", bad == 0, f"{bad} violations")
    bad = count(lambda r: r["roundtrip"])
    report.add("decompose round-trip", bad == 0, f"{bad} mismatches over {n_csp} CSP tables")

    specs = [random_psi_spec(rng, n_voters, n_alternatives) for _ in range(psi_specs)]
    ok = _map(_psi_row, specs, workers)
    report.counts["psi specs"] = len(specs)
    report.add("psi-type => CSP", all(ok), f"{len(ok) - sum(ok)} failures")

    check_strict_committees(n_voters, 2, report)
    if n_alternatives >= 3:
        check_strict_dictators(n_voters, n_alternatives, report)
    check_structure(n_voters, n_alternatives, rng, report)

    report.elapsed = time.perf_counter() - started
    return report
