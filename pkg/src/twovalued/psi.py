"""Double collections, the profile index and psi-type functions.

A psi-type function scans an ordered sequence of extended committees
``(pi^0, F_0), (pi^1, F_1), ...`` and returns the choice of the first one
that is not indifferent on the profile, or a default ``x`` when all of
them are.  The strict-profile committee and dictator rules live here too.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .committees import (
    Committee,
    ExtendedCommittee,
    class_membership,
    enumerate_committees,
    format_committee,
    in_class,
    parse_committee,
)
from .errors import DomainError, ParseError
from .orders import Universe, WeakOrder, enumerate_weak_orders
from .profiles import PartialProfile, Profile, format_partial, get_domain, parse_partial
from .scf import ScfTable, parse_header

INFINITY = math.inf


@dataclass(frozen=True)
class PsiSpec:
    a: int
    b: int
    default: int
    entries: tuple[ExtendedCommittee, ...]
    n_voters: int
    universe: Universe

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        n = len(self.universe)
        if self.a == self.b or not (0 <= self.a < n and 0 <= self.b < n):
            raise DomainError("the pair must be two distinct alternatives of the universe")
        if self.default not in (self.a, self.b):
            raise DomainError("the default must be one of the pair")
        if not self.entries:
            raise DomainError("a double collection needs at least one entry")
        for ec in self.entries:
            for _, w in ec.pi.items():
                if w.size != n:
                    raise DomainError("pi orders do not match the universe")
            ec.validate(self.a, self.b, self.n_voters)

    @property
    def pair(self) -> tuple[int, int]:
        return self.a, self.b

    @property
    def beta(self) -> int:
        return len(self.entries)

    def domain(self):
        return get_domain(len(self.universe), self.n_voters)


def index(P: Profile, spec: PsiSpec):
    """First entry whose class P_a or P_b contains P, else INFINITY."""
    for lam, ec in enumerate(spec.entries):
        if in_class(P, ec, spec.a, spec.b, spec.a) or in_class(P, ec, spec.a, spec.b, spec.b):
            return lam
    return INFINITY


def evaluate_psi(P: Profile, spec: PsiSpec) -> int:
    lam = index(P, spec)
    if lam is INFINITY:
        return spec.default
    # The two classes of one entry are disjoint, so the side test is decisive.
    if in_class(P, spec.entries[lam], spec.a, spec.b, spec.a):
        return spec.a
    return spec.b


def psi_table(spec: PsiSpec) -> ScfTable:
    """Evaluate ``spec`` on every profile at once."""
    dom = spec.domain()
    values = np.full(dom.size, spec.default, dtype=np.int8)
    pending = np.ones(dom.size, dtype=bool)
    for ec in spec.entries:
        in_a, in_b = class_membership(dom, ec, spec.a, spec.b)
        values[pending & in_a] = spec.a
        values[pending & in_b] = spec.b
        pending &= ~(in_a | in_b)
        if not pending.any():
            break
    return ScfTable(dom, values, spec.universe)


def psi_table_scalar(spec: PsiSpec) -> ScfTable:
    dom = spec.domain()
    return ScfTable.from_function(dom, lambda P: evaluate_psi(P, spec), spec.universe)


@dataclass(frozen=True)
class RangeReport:
    case: int
    guaranteed: frozenset[int]
    observed: frozenset[int]
    may_be_constant: bool


def psi_range_report(spec: PsiSpec) -> RangeReport:
    """Classify the range of a single-entry psi function by its committee.

    Case 1 (power set): the range holds a, and also x when dom(pi^0) is
    nonempty.  Case 2 (empty family): b, and x likewise.  Case 3 (both the
    family and its dual nonempty): exactly {a, b}.
    """
    if spec.beta != 1:
        raise DomainError("the range report applies to a single-entry double collection")
    ec = spec.entries[0]
    F = ec.family
    with_x = {spec.default} if ec.pi.domain else set()
    if F.is_power_set:
        case, guaranteed = 1, frozenset({spec.a} | with_x)
    elif F.is_empty:
        case, guaranteed = 2, frozenset({spec.b} | with_x)
    else:
        case, guaranteed = 3, frozenset({spec.a, spec.b})
    observed = psi_table(spec).range()
    return RangeReport(case, guaranteed, observed, case != 3)


def example_dia_spec() -> PsiSpec:
    """Two entries on voter 0 (a~b>c, then c>a~b) deciding via voter 1; default a."""
    u = Universe(("a", "b", "c"))
    ab_over_c = WeakOrder((frozenset({0, 1}), frozenset({2})))
    c_over_ab = WeakOrder((frozenset({2}), frozenset({0, 1})))
    entries = (
        ExtendedCommittee(PartialProfile({0: ab_over_c}), Committee(frozenset({1}), frozenset({frozenset({1})}))),
        ExtendedCommittee(PartialProfile({0: c_over_ab}), Committee.empty({1})),
    )
    return PsiSpec(0, 1, 0, entries, 2, u)


# --- strict-profile rules ------------------------------------------------


def strict_committee_scf(F: Committee, a: int, b: int, n_alternatives: int = 2) -> ScfTable:
    """On strict profiles: a if the coalition preferring a to b is in F, else b."""
    if F.is_empty or F.is_power_set:
        raise DomainError("the committee must be nonempty and must not contain the empty coalition")
    m = len(F.carrier)
    if F.carrier != frozenset(range(m)) or m == 0:
        raise DomainError("the committee carrier must be the whole society 0..m-1")
    dom = get_domain(n_alternatives, m, strict=True)
    _, da, _ = dom.coalition_masks(a, b)
    values = np.where(F.mask_table(m)[da], a, b)
    return ScfTable(dom, values)


def find_strict_dictator(f: ScfTable, among: Iterable[int] | None = None) -> int | None:
    """The voter whose top choice within ``among`` always equals f, if any."""
    among = sorted(f.range() if among is None else set(among))
    if len(among) < 3:
        raise DomainError("dictator recovery needs at least three alternatives in the range")
    dom = f.domain
    if not dom.strict:
        raise DomainError("dictator recovery works on the strict-profile domain")
    ranks = dom.rank[:, among]  # (k, |A*|)
    tops = np.asarray(among)[ranks.argmin(axis=1)]  # top within A* per order
    for d in range(dom.n_voters):
        if np.array_equal(tops[dom.voter_orders[:, d]], f.values):
            return d
    return None


# --- random generation ---------------------------------------------------


def random_psi_spec(
    rng: random.Random,
    n_voters: int,
    n_alternatives: int,
    pair: tuple[int, int] | None = None,
    max_entries: int = 4,
) -> PsiSpec:
    """Draw a psi spec: beta in 1..max_entries, then per entry a uniform
    subset I of voters, uniform a~b orders on I, and a uniform committee
    on the complement of I."""
    if pair is None:
        a, b = rng.sample(range(n_alternatives), 2)
    else:
        a, b = pair
    tied = [w for w in enumerate_weak_orders(n_alternatives) if w.ranks[a] == w.ranks[b]]
    voters = list(range(n_voters))
    entries = []
    for _ in range(rng.randint(1, max_entries)):
        I = [v for v in voters if rng.random() < 0.5]
        pi = PartialProfile({v: rng.choice(tied) for v in I})
        rest = frozenset(voters) - set(I)
        F = rng.choice(enumerate_committees(rest))
        entries.append(ExtendedCommittee(pi, F))
    default = rng.choice((a, b))
    return PsiSpec(a, b, default, tuple(entries), n_voters, Universe.of_size(n_alternatives))


# --- text format ---------------------------------------------------------

_PAIR = re.compile(r"^\s*pair:\s*([^\s;]+)\s+([^\s;]+)\s*;\s*default:\s*([^\s;]+)\s*;?\s*$")


def format_psi(spec: PsiSpec) -> str:
    u = spec.universe
    lines = [
        "universe: " + " ".join(u.labels),
        f"society: {spec.n_voters}",
        f"pair: {u.label(spec.a)} {u.label(spec.b)}; default: {u.label(spec.default)};",
    ]
    for ec in spec.entries:
        lines.append("entry:")
        if len(ec.pi):
            lines.extend("  " + row for row in format_partial(ec.pi, u).splitlines())
        lines.append("  " + format_committee(ec.family))
    return "\n".join(lines) + "\n"


def parse_psi(text: str) -> PsiSpec:
    lines = [(n, raw) for n, raw in enumerate(text.splitlines(), 1) if raw.strip() and not raw.lstrip().startswith("#")]
    head = parse_header(lines, ("universe", "society"))
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
    pair_line = next(((n, raw) for n, raw in lines if raw.lstrip().startswith("pair:")), None)
    if pair_line is None:
        raise ParseError("missing 'pair: <a> <b>; default: <x>;' line", 1, 1)
    m = _PAIR.match(pair_line[1])
    if not m:
        raise ParseError("expected 'pair: <a> <b>; default: <x>;'", pair_line[0], 1)
    try:
        a, b, x = (universe.index(m.group(i)) for i in (1, 2, 3))
    except DomainError as exc:
        raise ParseError(str(exc), pair_line[0], 1) from None

    blocks: list[list[tuple[int, str]]] = []
    for n, raw in lines:
        s = raw.strip()
        if s == "entry:":
            blocks.append([])
        elif s.startswith(("v", "carrier:")) and not s.startswith("universe"):
            if not blocks:
                raise ParseError("entry content before the first 'entry:'", n, 1)
            blocks[-1].append((n, s))
        elif not s.startswith(("universe:", "society:", "pair:")):
            raise ParseError(f"unexpected line {s!r}", n, 1)
    entries = []
    for block in blocks:
        committees = [(n, s) for n, s in block if s.startswith("carrier:")]
        if len(committees) != 1:
            line = block[0][0] if block else pair_line[0]
            raise ParseError("each entry needs exactly one committee line", line, 1)
        pi_rows = [(n, s) for n, s in block if not s.startswith("carrier:")]
        pi = PartialProfile()
        for n, s in pi_rows:
            part = parse_partial(s, universe, first_line=n)
            merged = dict(pi.items())
            for v, w in part.items():
                if v in merged:
                    raise ParseError(f"voter v{v} listed twice in one entry", n, 1)
                merged[v] = w
            pi = PartialProfile(merged)
        F = parse_committee(committees[0][1], committees[0][0])
        try:
            entries.append(ExtendedCommittee(pi, F))
        except DomainError as exc:
            raise ParseError(str(exc), committees[0][0], 1) from None
    try:
        return PsiSpec(a, b, x, tuple(entries), int(stext), universe)
    except DomainError as exc:
        raise ParseError(str(exc), pair_line[0], 1) from None
