"""Superset-closed families (committees), duality, and extended committees.

A committee lives on a carrier set of voters and may be empty or the
whole power set of the carrier; those two are dual to each other.  An
extended committee pairs a partial {a,b}-indifference profile ``pi`` with
a committee on the voters outside ``dom(pi)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import DomainError, ParseError, ResourceBoundError
from .orders import Cmp, restrict_to_pair
from .profiles import PartialProfile, Profile, ProfileDomain, supporters

MAX_CARRIER = 4


def _subsets(carrier: Iterable[int]) -> list[frozenset[int]]:
    items = sorted(carrier)
    return [frozenset(c) for r in range(len(items) + 1) for c in itertools.combinations(items, r)]


def is_superset_closed(members: Iterable[Iterable[int]], carrier: Iterable[int]) -> bool:
    carrier = frozenset(carrier)
    members = {frozenset(m) for m in members}
    for m in members:
        if not m <= carrier:
            raise DomainError(f"member {sorted(m)} is not contained in carrier {sorted(carrier)}")
    for m in members:
        for extra in carrier - m:
            if m | {extra} not in members:
                return False
    return True


def _member_key(m: frozenset[int]):
    return (-len(m), tuple(sorted(m)))


@dataclass(frozen=True)
class Committee:
    carrier: frozenset[int]
    members: frozenset[frozenset[int]]

    def __post_init__(self):
        carrier = frozenset(self.carrier)
        members = frozenset(frozenset(m) for m in self.members)
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "members", members)
        if not is_superset_closed(members, carrier):
            raise DomainError("family is not closed under supersets within its carrier")

    @classmethod
    def empty(cls, carrier: Iterable[int]) -> "Committee":
        return cls(frozenset(carrier), frozenset())

    @classmethod
    def power_set(cls, carrier: Iterable[int]) -> "Committee":
        carrier = frozenset(carrier)
        return cls(carrier, frozenset(_subsets(carrier)))

    @classmethod
    def generated_by(cls, carrier: Iterable[int], minimal: Iterable[Iterable[int]]) -> "Committee":
        """Upward closure of ``minimal`` within ``carrier``."""
        carrier = frozenset(carrier)
        minimal = [frozenset(m) for m in minimal]
        members = {s for s in _subsets(carrier) if any(m <= s for m in minimal)}
        return cls(carrier, frozenset(members))

    def __contains__(self, coalition) -> bool:
        return frozenset(coalition) in self.members

    def __len__(self):
        return len(self.members)

    @property
    def is_empty(self) -> bool:
        return not self.members

    @property
    def is_power_set(self) -> bool:
        return frozenset() in self.members

    def minimal_members(self) -> list[frozenset[int]]:
        return sorted(
            (m for m in self.members if not any(o < m for o in self.members)),
            key=lambda m: (len(m), tuple(sorted(m))),
        )

    def mask_table(self, n_voters: int) -> np.ndarray:
        """Boolean lookup indexed by voter bitmasks (subsets of the carrier)."""
        table = np.zeros(1 << n_voters, dtype=bool)
        for m in self.members:
            table[sum(1 << v for v in m)] = True
        return table

    def __str__(self):
        return format_committee(self)


def dual(F: Committee) -> Committee:
    """E is in the dual iff the carrier-complement of E is not in F."""
    members = {E for E in _subsets(F.carrier) if (F.carrier - E) not in F.members}
    return Committee(F.carrier, frozenset(members))


def _antichains(subsets: list[frozenset[int]]):
    chosen: list[frozenset[int]] = []

    def rec(i):
        if i == len(subsets):
            yield list(chosen)
            return
        yield from rec(i + 1)
        s = subsets[i]
        if all(not (s <= c or c <= s) for c in chosen):
            chosen.append(s)
            yield from rec(i + 1)
            chosen.pop()

    yield from rec(0)


@lru_cache(maxsize=None)
def _enumerate(carrier: frozenset[int]) -> tuple[Committee, ...]:
    out = [Committee.generated_by(carrier, chain) for chain in _antichains(_subsets(carrier))]
    out.sort(key=lambda F: (len(F.members), sorted(_member_key(m) for m in F.members)))
    return tuple(out)


def enumerate_committees(carrier: Iterable[int], bound: int = MAX_CARRIER) -> tuple[Committee, ...]:
    """Every superset-closed family on ``carrier``, smallest families first.

    Built from antichains of minimal members, so the empty family (empty
    antichain) and the power set (antichain ``{{}}``) are both included.
    """
    carrier = frozenset(carrier)
    if len(carrier) > bound:
        raise ResourceBoundError(f"carrier of size {len(carrier)} exceeds the bound {bound}")
    return _enumerate(carrier)


@dataclass(frozen=True)
class ExtendedCommittee:
    pi: PartialProfile
    family: Committee

    def __post_init__(self):
        if not isinstance(self.pi, PartialProfile):
            object.__setattr__(self, "pi", PartialProfile(self.pi))
        if self.pi.domain & self.family.carrier:
            raise DomainError("the committee carrier must avoid the domain of pi")

    @property
    def indifferent_voters(self) -> frozenset[int]:
        return self.pi.domain

    def validate(self, a: int, b: int, n_voters: int):
        if self.pi.domain | self.family.carrier != frozenset(range(n_voters)):
            raise DomainError("dom(pi) and the committee carrier must partition the society")
        for v, w in self.pi.items():
            if restrict_to_pair(w, a, b) != Cmp.TIE:
                raise DomainError(f"pi is not indifferent between the pair at voter v{v}")


def in_class(P: Profile, ec: ExtendedCommittee, a: int, b: int, side: int) -> bool:
    """Membership of P in the class P_a(pi, F) (side a) or P_b(pi, F) (side b)."""
    if a == b:
        raise DomainError("the pair {a, b} must consist of two distinct alternatives")
    if side == a:
        target, family, other = Cmp.FIRST, ec.family, b
    elif side == b:
        target, family, other = Cmp.SECOND, dual(ec.family), a
    else:
        raise DomainError(f"side must be one of the pair ({a}, {b}), got {side}")
    outside = supporters(side, P, other) - ec.pi.domain
    if outside not in family.members:
        return False
    for v, w in ec.pi.items():
        if P[v] != w and restrict_to_pair(P[v], a, b) != target:
            return False
    return True


def in_class_two_alternatives(P: Profile, ec: ExtendedCommittee, a: int, b: int, side: int) -> bool:
    """:func:`in_class` specialised to a universe of exactly the two alternatives.

    There every order indifferent between a and b is the single-class
    order, so the clause on dom(pi) becomes "no voter of dom(pi) strictly
    prefers the other alternative".
    """
    if P.n_alternatives != 2:
        raise DomainError("the specialised class test needs |A| = 2")
    I = ec.pi.domain
    if side == a:
        return (supporters(a, P, b) - I) in ec.family.members and not (supporters(b, P, a) & I)
    if side == b:
        return (supporters(b, P, a) - I) in dual(ec.family).members and not (supporters(a, P, b) & I)
    raise DomainError(f"side must be one of the pair ({a}, {b}), got {side}")


def class_membership(domain: ProfileDomain, ec: ExtendedCommittee, a: int, b: int) -> tuple[np.ndarray, np.ndarray]:
    """Boolean arrays (in P_a, in P_b) over every profile of ``domain``."""
    _, da, db = domain.coalition_masks(a, b)
    carrier_mask = sum(1 << v for v in ec.family.carrier)
    in_a = ec.family.mask_table(domain.n_voters)[da & carrier_mask]
    in_b = dual(ec.family).mask_table(domain.n_voters)[db & carrier_mask]
    codes = domain.profile_codes(a, b)
    vo = domain.voter_orders
    for v, w in ec.pi.items():
        frozen = vo[:, v] == domain.order_index(w)
        in_a &= frozen | (codes[:, v] == 1)
        in_b &= frozen | (codes[:, v] == -1)
    return in_a, in_b


# --- text format ---------------------------------------------------------

_COMMITTEE = re.compile(r"^\s*carrier:(?P<carrier>[^;]*);\s*members:(?P<members>.*)$")


def format_committee(F: Committee) -> str:
    carrier = " ".join(str(v) for v in sorted(F.carrier))
    members = ", ".join("{" + " ".join(str(v) for v in sorted(m)) + "}" for m in sorted(F.members, key=_member_key))
    return f"carrier: {carrier}; members: {members}".rstrip()


def _parse_ids(text: str, line, col) -> frozenset[int]:
    ids = set()
    for tok in text.split():
        if not tok.isdigit():
            raise ParseError(f"expected a voter id, got {tok!r}", line, col)
        ids.add(int(tok))
    return frozenset(ids)


def parse_committee(text: str, line: int | None = None) -> Committee:
    m = _COMMITTEE.match(text)
    if not m:
        raise ParseError(f"expected 'carrier: ...; members: ...', got {text.strip()!r}", line, 1)
    carrier = _parse_ids(m.group("carrier"), line, m.start("carrier") + 1)
    body = m.group("members").strip()
    members = []
    col = m.start("members") + 1
    if body:
        for chunk in body.split(","):
            chunk = chunk.strip()
            if not (chunk.startswith("{") and chunk.endswith("}")):
                raise ParseError(f"expected '{{ids}}', got {chunk!r}", line, col)
            members.append(_parse_ids(chunk[1:-1], line, col))
    try:
        return Committee(carrier, frozenset(members))
    except DomainError as exc:
        raise ParseError(str(exc), line, 1) from None
