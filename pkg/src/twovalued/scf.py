"""Explicit social choice function tables and the strategy-proofness checks.

A :class:`ScfTable` stores one alternative per profile of a
:class:`~twovalued.profiles.ProfileDomain`, indexed by the canonical
profile enumeration.  Manipulation search works on the table reshaped to
one axis per voter: the misreports of a coalition ``D`` at ``P`` are the
slice obtained by freeing the axes of ``D``.
"""

from __future__ import annotations

import itertools
import re
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .dominance import order_b1, scan_implication
from .errors import DomainError, ParseError
from .orders import Cmp, Universe, WeakOrder, restrict_to_pair
from .profiles import (
    Profile,
    ProfileDomain,
    format_profile_inline,
    get_domain,
    indifference_set,
    parse_profile_inline,
    supporters,
)
from .result import CheckResult


class ScfTable:
    """A total map from the profiles of ``domain`` to alternatives."""

    def __init__(self, domain: ProfileDomain, values: Sequence[int], universe: Universe | None = None):
        values = np.array(values, dtype=np.int8)
        if values.shape != (domain.size,):
            raise DomainError(f"expected {domain.size} values, got {values.shape[0] if values.ndim else 0}")
        if values.size and (values.min() < 0 or values.max() >= domain.n_alternatives):
            raise DomainError("table values must lie in the alternative universe")
        values.setflags(write=False)
        self.domain = domain
        self.values = values
        self.universe = universe or Universe.of_size(domain.n_alternatives)
        if len(self.universe) != domain.n_alternatives:
            raise DomainError("universe size does not match the domain")

    @classmethod
    def from_function(cls, domain: ProfileDomain, fn: Callable[[Profile], int], universe: Universe | None = None) -> "ScfTable":
        return cls(domain, [fn(P) for P in domain], universe)

    def __call__(self, P: Profile) -> int:
        return int(self.values[self.domain.index(P)])

    def __len__(self):
        return self.domain.size

    def __eq__(self, other):
        if not isinstance(other, ScfTable):
            return NotImplemented
        return (
            self.domain.n_alternatives == other.domain.n_alternatives
            and self.domain.n_voters == other.domain.n_voters
            and self.domain.strict == other.domain.strict
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def __repr__(self):
        return f"ScfTable({self.domain!r}, range={sorted(self.range())})"

    def range(self) -> frozenset[int]:
        return frozenset(int(x) for x in np.unique(self.values))

    def tensor(self) -> np.ndarray:
        return self.values.reshape(self.domain.shape)

    def items(self) -> Iterator[tuple[Profile, int]]:
        for i, P in enumerate(self.domain):
            yield P, int(self.values[i])


def scf_range(f: ScfTable) -> frozenset[int]:
    return f.range()


# --- manipulation --------------------------------------------------------


def _manipulation_at(f: ScfTable, ids: tuple[int, ...], coalition: Sequence[int]):
    dom = f.domain
    tensor = f.tensor()
    current = int(tensor[ids])
    better = np.ones(dom.n_alternatives, dtype=bool)
    for v in coalition:
        r = dom.rank[ids[v]]
        better &= r < r[current]
    if not better.any():
        return None
    idx = tuple(slice(None) if v in coalition else ids[v] for v in range(dom.n_voters))
    hits = np.flatnonzero(better[tensor[idx]])
    if not len(hits):
        return None
    shape = (dom.k,) * len(coalition)
    report = np.unravel_index(int(hits[0]), shape)
    q = list(ids)
    for v, o in zip(sorted(coalition), report):
        q[v] = int(o)
    return tuple(q)


def coalition_manipulates(f: ScfTable, P: Profile, D: Iterable[int]) -> Profile | None:
    """A profile Q by which coalition D manipulates P, or None.

    Q agrees with P off D and every member of D strictly prefers f(Q) to
    f(P) under its true order.  The first such Q in enumeration order is
    returned.
    """
    coalition = sorted(set(D))
    if not coalition:
        raise DomainError("a coalition must be nonempty")
    if any(not 0 <= v < f.domain.n_voters for v in coalition):
        raise DomainError(f"coalition {coalition} is not a subset of the society")
    q = _manipulation_at(f, tuple(f.domain.order_index(w) for w in P.orders), coalition)
    if q is None:
        return None
    return Profile(tuple(f.domain.orders[o] for o in q))


def _coalitions(n_voters: int, max_size: int | None = None):
    top = n_voters if max_size is None else max_size
    for size in range(1, top + 1):
        yield from itertools.combinations(range(n_voters), size)


def _manipulation_scan(f: ScfTable, max_size: int | None) -> CheckResult:
    dom = f.domain
    coalitions = list(_coalitions(dom.n_voters, max_size))
    for i in range(dom.size):
        ids = dom.decode(i)
        for D in coalitions:
            q = _manipulation_at(f, ids, D)
            if q is not None:
                return CheckResult(
                    False,
                    {
                        "P": dom.profile(i),
                        "Q": Profile(tuple(dom.orders[o] for o in q)),
                        "D": frozenset(D),
                    },
                )
    return CheckResult(True)


def is_csp(f: ScfTable) -> CheckResult:
    """Coalitional strategy-proofness by exhaustive manipulation search.

    Profiles are scanned in enumeration order, coalitions by increasing
    size, misreports in enumeration order; the witness is the first hit.
    """
    return _manipulation_scan(f, None)


def is_individually_sp(f: ScfTable) -> CheckResult:
    return _manipulation_scan(f, 1)


def is_weak_pareto(f: ScfTable) -> CheckResult:
    """No alternative of the range is unanimously strictly preferred to f(P)."""
    dom = f.domain
    ranks = dom.rank[dom.voter_orders].astype(np.int16)  # (N, m, |A|)
    chosen = np.take_along_axis(ranks, f.values.astype(np.intp)[:, None, None].repeat(dom.n_voters, 1), axis=2)
    better = (ranks < chosen).all(axis=1)
    in_range = np.zeros(dom.n_alternatives, dtype=bool)
    in_range[list(f.range())] = True
    bad = better & in_range[None, :]
    rows = np.flatnonzero(bad.any(axis=1))
    if not len(rows):
        return CheckResult(True)
    i = int(rows[0])
    return CheckResult(False, {"P": dom.profile(i), "y": int(np.flatnonzero(bad[i])[0])})


# --- essentially ab-based / ab-monotonic ---------------------------------


def b_condition(P: Profile, Q: Profile, a: int, b: int, which: str) -> bool:
    """B1(P,Q): indifferent-in-both voters keep their order, D(a,.) grows, D(b,.) shrinks.

    ``which="B2"`` evaluates B1(Q, P).
    """
    if which == "B2":
        P, Q = Q, P
    elif which != "B1":
        raise DomainError(f"which must be 'B1' or 'B2', got {which!r}")
    both = indifference_set(P, a, b) & indifference_set(Q, a, b)
    if any(P[v] != Q[v] for v in both):
        return False
    return supporters(a, Q, b) >= supporters(a, P, b) and supporters(b, P, a) >= supporters(b, Q, a)


def _check_pair_range(f: ScfTable, a: int, b: int):
    if a == b:
        raise DomainError("the pair {a, b} must consist of two distinct alternatives")
    if f.range() != frozenset((a, b)):
        raise DomainError(f"range of the function is {sorted(f.range())}, expected exactly {{{a}, {b}}}")


def b_implication(f: ScfTable, a: int, b: int, which: str) -> CheckResult:
    """(1'): B1(P,Q) and f(P)=a imply f(Q)=a;  (2'): B2(P,Q) and f(P)=b imply f(Q)=b."""
    _check_pair_range(f, a, b)
    m1 = order_b1(f.domain.pair_codes(a, b))
    never = np.zeros_like(m1)
    if which == "1'":
        hit = scan_implication(f, a, b, m1, never)
    elif which == "2'":
        hit = scan_implication(f, a, b, never, m1.T)
    else:
        raise DomainError(f"which must be \"1'\" or \"2'\", got {which!r}")
    if hit is None:
        return CheckResult(True)
    i, j = hit
    return CheckResult(False, {"P": f.domain.profile(i), "Q": f.domain.profile(j), "condition": which})


def is_essentially_based_and_monotonic(f: ScfTable, a: int, b: int) -> CheckResult:
    """Both (1') and (2') hold; the strictness-free form of the ab-based/ab-monotonic pair."""
    first = b_implication(f, a, b, "1'")
    if not first:
        return first
    return b_implication(f, a, b, "2'")


# --- named constructors --------------------------------------------------


def example_dia() -> ScfTable:
    """Two voters, alternatives a, b, c; range {a, b}.

    Value b when voter 0 strictly prefers b to a, or ranks c above a~b,
    or has a~b above c while voter 1 strictly prefers b to a; a otherwise.
    """
    a, b, c = 0, 1, 2

    def rule(P: Profile) -> int:
        w0, w1 = P[0], P[1]
        r0 = w0.ranks
        if r0[b] < r0[a]:
            return b
        if r0[a] == r0[b] and r0[c] < r0[a]:
            return b
        if r0[a] == r0[b] and r0[a] < r0[c] and w1.ranks[b] < w1.ranks[a]:
            return b
        return a

    return ScfTable.from_function(get_domain(3, 2), rule, Universe(("a", "b", "c")))


def anti_rule() -> ScfTable:
    """One voter over {a, b}: returns the alternative the voter ranks lower (a on ties)."""
    dom = get_domain(2, 1)
    return ScfTable.from_function(dom, lambda P: 1 if P[0].ranks[0] < P[0].ranks[1] else 0)


def dictatorship(domain: ProfileDomain, voter: int, among: Iterable[int] | None = None) -> ScfTable:
    """The dictator's best alternative within ``among``; ties go to the smallest id."""
    among = sorted(range(domain.n_alternatives) if among is None else set(among))
    if not 0 <= voter < domain.n_voters:
        raise DomainError(f"voter {voter} is outside the society")
    return ScfTable.from_function(domain, lambda P: min(P[voter].top(among)))


def constant(domain: ProfileDomain, x: int) -> ScfTable:
    return ScfTable(domain, np.full(domain.size, x))


# --- exhaustive search over tables ---------------------------------------


def enumerate_tables(domain: ProfileDomain, values: Sequence[int]) -> Iterator[ScfTable]:
    """Every table with values in ``values`` (``len(values) ** size`` of them)."""
    for combo in itertools.product(values, repeat=domain.size):
        yield ScfTable(domain, combo)


def search_sp_tables(domain: ProfileDomain, values: Sequence[int] | None = None) -> Iterator[ScfTable]:
    """All individually strategy-proof tables with values in ``values``.

    Backtracking over profiles in enumeration order; each assignment is
    checked against already-assigned profiles that differ in one voter.
    """
    values = list(range(domain.n_alternatives)) if values is None else list(values)
    n = domain.size
    vo = domain.voter_orders
    rank = domain.rank
    neighbours: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    tensor_ids = np.arange(n).reshape(domain.shape)
    for i in range(n):
        ids = tuple(int(x) for x in vo[i])
        for v in range(domain.n_voters):
            idx = ids[:v] + (slice(None),) + ids[v + 1 :]
            for j in tensor_ids[idx]:
                if j < i:
                    neighbours[i].append((v, int(j)))
    assign = [0] * n

    def consistent(i, x):
        for v, j in neighbours[i]:
            y = assign[j]
            ri, rj = rank[vo[i, v]], rank[vo[j, v]]
            if ri[y] < ri[x] or rj[x] < rj[y]:
                return False
        return True

    def rec(i):
        if i == n:
            yield ScfTable(domain, assign)
            return
        for x in values:
            if consistent(i, x):
                assign[i] = x
                yield from rec(i + 1)

    yield from rec(0)


# --- text format ---------------------------------------------------------

_ROW = re.compile(r"^\s*P#(\d+)\s*:\s*(\(.*\))\s*->\s*(\S+)\s*$")


def format_scf(f: ScfTable) -> str:
    lines = [
        "universe: " + " ".join(f.universe.labels),
        f"society: {f.domain.n_voters}",
        "domain: " + ("strict" if f.domain.strict else "weak"),
    ]
    for i, (P, x) in enumerate(f.items()):
        lines.append(f"P#{i}: {format_profile_inline(P, f.universe)} -> {f.universe.label(x)}")
    return "\n".join(lines) + "\n"


def parse_header(lines: list[tuple[int, str]], keys: Sequence[str]) -> dict[str, tuple[int, str]]:
    found = {}
    for lineno, raw in lines:
        key, sep, rest = raw.partition(":")
        key = key.strip()
        if sep and key in keys:
            if key in found:
                raise ParseError(f"duplicate header '{key}'", lineno, 1)
            found[key] = (lineno, rest.strip())
    return found


def parse_scf(text: str) -> ScfTable:
    lines = [(n, raw) for n, raw in enumerate(text.splitlines(), 1) if raw.strip() and not raw.lstrip().startswith("#")]
    head = parse_header([l for l in lines if not l[1].lstrip().startswith("P#")], ("universe", "society", "domain"))
    for key in ("universe", "society"):
        if key not in head:
            raise ParseError(f"missing '{key}:' header", 1, 1)
    try:
        universe = Universe(tuple(head["universe"][1].split()))
    except DomainError as exc:
        raise ParseError(str(exc), head["universe"][0], 1) from None
    sline, stext = head["society"]
    if not stext.isdigit() or int(stext) < 1:
        raise ParseError(f"society must be a positive voter count, got {stext!r}", sline, 1)
    kind = head.get("domain", (None, "weak"))[1]
    if kind not in ("weak", "strict"):
        raise ParseError(f"domain must be 'weak' or 'strict', got {kind!r}", head["domain"][0], 1)
    domain = get_domain(len(universe), int(stext), kind == "strict")
    rows = [(n, raw) for n, raw in lines if raw.lstrip().startswith("P#")]
    if len(rows) != domain.size:
        raise ParseError(f"expected {domain.size} profile rows, found {len(rows)}", rows[-1][0] if rows else 1)
    values = []
    for expected, (lineno, raw) in enumerate(rows):
        m = _ROW.match(raw)
        if not m:
            raise ParseError("expected 'P#k: (<order>, ...) -> <alternative>'", lineno, 1)
        if int(m.group(1)) != expected:
            raise ParseError(f"row index P#{m.group(1)} out of sequence, expected P#{expected}", lineno, 1)
        P = parse_profile_inline(m.group(2), universe, lineno, m.start(2) + 1)
        try:
            idx = domain.index(P)
        except DomainError as exc:
            raise ParseError(str(exc), lineno, m.start(2) + 1) from None
        if idx != expected:
            raise ParseError("profile is not in canonical enumeration order", lineno, m.start(2) + 1)
        try:
            values.append(universe.index(m.group(3)))
        except DomainError:
            raise ParseError(f"unknown alternative {m.group(3)!r}", lineno, m.start(3) + 1) from None
    return ScfTable(domain, values, universe)
