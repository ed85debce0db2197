"""Preference profiles and the voter sets derived from them.

Voters are integers ``0..m-1``.  A :class:`ProfileDomain` fixes the
numbers of alternatives and voters and provides the canonical enumeration
of all profiles: lexicographic by voter id (voter 0 most significant) over
the canonical weak-order enumeration.  Tables, tensors and pair scans in
the other modules are all indexed by this enumeration.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import DomainError, ParseError, ResourceBoundError
from .orders import (
    Cmp,
    Universe,
    WeakOrder,
    enumerate_weak_orders,
    format_order,
    parse_order,
    restrict_to_pair,
)

VoterSet = frozenset

MAX_PROFILES = 20_000


@dataclass(frozen=True)
class Profile:
    orders: tuple[WeakOrder, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))
        if not self.orders:
            raise DomainError("a profile needs at least one voter")
        sizes = {w.size for w in self.orders}
        if len(sizes) != 1:
            raise DomainError("all orders of a profile must share one universe")

    @property
    def n_voters(self) -> int:
        return len(self.orders)

    @property
    def n_alternatives(self) -> int:
        return self.orders[0].size

    @property
    def voters(self) -> frozenset[int]:
        return frozenset(range(len(self.orders)))

    def __getitem__(self, v: int) -> WeakOrder:
        return self.orders[v]

    def __len__(self):
        return len(self.orders)

    def items(self):
        return enumerate(self.orders)

    def restrict(self, voters: Iterable[int]) -> "PartialProfile":
        return PartialProfile({v: self.orders[v] for v in voters})

    def replace(self, part: "PartialProfile | Mapping[int, WeakOrder]") -> "Profile":
        """Copy of this profile with the voters of ``part`` overwritten."""
        items = part.items()
        new = list(self.orders)
        for v, w in items:
            new[v] = w
        return Profile(tuple(new))


class PartialProfile:
    """Preferences for a subset of the voters; the domain may be empty."""

    __slots__ = ("_prefs", "_key")

    def __init__(self, prefs: Mapping[int, WeakOrder] | None = None):
        prefs = dict(prefs or {})
        sizes = {w.size for w in prefs.values()}
        if len(sizes) > 1:
            raise DomainError("all orders of a partial profile must share one universe")
        self._prefs = dict(sorted(prefs.items()))
        self._key = tuple(self._prefs.items())

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self._prefs)

    def __getitem__(self, v: int) -> WeakOrder:
        return self._prefs[v]

    def __contains__(self, v) -> bool:
        return v in self._prefs

    def __len__(self):
        return len(self._prefs)

    def items(self):
        return self._prefs.items()

    def __eq__(self, other):
        return isinstance(other, PartialProfile) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        inner = ", ".join(f"{v}: {format_order(w)}" for v, w in self._key)
        return f"PartialProfile({{{inner}}})"


def _check_pair(a: int, b: int):
    if a == b:
        raise DomainError("the pair {a, b} must consist of two distinct alternatives")


def indifference_set(P: Profile, a: int, b: int) -> frozenset[int]:
    """I(P): voters indifferent between a and b."""
    _check_pair(a, b)
    return frozenset(v for v, w in enumerate(P.orders) if restrict_to_pair(w, a, b) == Cmp.TIE)


def supporters(x: int, P: Profile, other: int) -> frozenset[int]:
    """D(x, P): voters strictly preferring ``x`` to ``other``."""
    _check_pair(x, other)
    return frozenset(v for v, w in enumerate(P.orders) if restrict_to_pair(w, x, other) == Cmp.FIRST)


def _check_compatible(P: Profile, Q: Profile):
    if P.n_voters != Q.n_voters or P.n_alternatives != Q.n_alternatives:
        raise DomainError("profiles are over different societies or universes")


def equivalence_set(P: Profile, Q: Profile, a: int, b: int) -> frozenset[int]:
    """E(P, Q): voters with identical orders, or identical strict {a,b} restrictions."""
    _check_pair(a, b)
    _check_compatible(P, Q)
    out = set()
    for v, (p, q) in enumerate(zip(P.orders, Q.orders)):
        if p == q:
            out.add(v)
            continue
        rp, rq = restrict_to_pair(p, a, b), restrict_to_pair(q, a, b)
        if rp == rq and rp != Cmp.TIE:
            out.add(v)
    return frozenset(out)


def compose(parts: Sequence[PartialProfile | Mapping[int, WeakOrder]], n_voters: int | None = None) -> Profile:
    """Glue partial profiles with disjoint domains into a total profile."""
    merged: dict[int, WeakOrder] = {}
    for part in parts:
        for v, w in part.items():
            if v in merged:
                raise DomainError(f"voter {v} appears in two parts")
            merged[v] = w
    if n_voters is None:
        n_voters = len(merged)
    if set(merged) != set(range(n_voters)):
        raise DomainError(f"parts cover voters {sorted(merged)}, expected 0..{n_voters - 1}")
    return Profile(tuple(merged[v] for v in range(n_voters)))


def is_partial_ab_indifference(pi: PartialProfile | Mapping[int, WeakOrder], a: int, b: int) -> bool:
    _check_pair(a, b)
    return all(restrict_to_pair(w, a, b) == Cmp.TIE for _, w in pi.items())


class ProfileDomain:
    """All profiles for ``n_voters`` voters over ``n_alternatives`` alternatives.

    With ``strict=True`` only strict orders are admitted.
    """

    def __init__(self, n_alternatives: int, n_voters: int, strict: bool = False):
        if n_voters < 1:
            raise DomainError("the society must be nonempty")
        self.n_alternatives = n_alternatives
        self.n_voters = n_voters
        self.strict = strict
        self.orders = enumerate_weak_orders(n_alternatives, strict=strict)
        self.k = len(self.orders)
        self.size = self.k**n_voters
        if self.size > MAX_PROFILES:
            raise ResourceBoundError(
                f"{self.size} profiles at |V|={n_voters}, |A|={n_alternatives} "
                f"exceed the bound of {MAX_PROFILES}"
            )
        self._order_index = {w: i for i, w in enumerate(self.orders)}

    def __repr__(self):
        kind = ", strict" if self.strict else ""
        return f"ProfileDomain(|A|={self.n_alternatives}, |V|={self.n_voters}{kind})"

    def __len__(self):
        return self.size

    def __iter__(self) -> Iterator[Profile]:
        for i in range(self.size):
            yield self.profile(i)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.k,) * self.n_voters

    def order_index(self, w: WeakOrder) -> int:
        try:
            return self._order_index[w]
        except KeyError:
            raise DomainError(f"order {w} is not in this domain") from None

    def profile(self, i: int) -> Profile:
        return Profile(tuple(self.orders[j] for j in self.decode(i)))

    def decode(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.size:
            raise DomainError(f"profile index {i} out of range")
        return tuple(int(j) for j in np.unravel_index(i, self.shape))

    def encode(self, order_ids: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(order_ids), self.shape))

    def index(self, P: Profile) -> int:
        if P.n_voters != self.n_voters or P.n_alternatives != self.n_alternatives:
            raise DomainError(f"profile does not belong to {self!r}")
        return self.encode([self.order_index(w) for w in P.orders])

    @cached_property
    def voter_orders(self) -> np.ndarray:
        """``(size, n_voters)`` array of order ids per profile."""
        idx = np.indices(self.shape).reshape(self.n_voters, -1).T
        return np.ascontiguousarray(idx, dtype=np.int16)

    @cached_property
    def rank(self) -> np.ndarray:
        """``(k, n_alternatives)`` array of class positions per order."""
        return np.array([w.ranks for w in self.orders], dtype=np.int8)

    @lru_cache(maxsize=None)
    def pair_codes(self, a: int, b: int) -> np.ndarray:
        """Per order: +1 for a>b, 0 for a~b, -1 for b>a."""
        _check_pair(a, b)
        return np.sign(self.rank[:, b].astype(np.int16) - self.rank[:, a]).astype(np.int8)

    @lru_cache(maxsize=None)
    def profile_codes(self, a: int, b: int) -> np.ndarray:
        """``(size, n_voters)`` array of {a,b} restriction codes."""
        return self.pair_codes(a, b)[self.voter_orders]

    def coalition_masks(self, a: int, b: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Bitmasks of I(P), D(a,P), D(b,P) for every profile."""
        codes = self.profile_codes(a, b)
        weights = (1 << np.arange(self.n_voters)).astype(np.int64)
        return (
            ((codes == 0) * weights).sum(axis=1),
            ((codes == 1) * weights).sum(axis=1),
            ((codes == -1) * weights).sum(axis=1),
        )

    def strict_indices(self) -> np.ndarray:
        strict = np.array([all(len(c) == 1 for c in w.classes) for w in self.orders])
        return np.flatnonzero(strict[self.voter_orders].all(axis=1))

    def total_indifference(self) -> Profile:
        """Every voter indifferent among all alternatives (profile 0 of a weak domain)."""
        if self.strict and self.n_alternatives > 1:
            raise DomainError("a strict domain has no indifference profile")
        w = WeakOrder((frozenset(range(self.n_alternatives)),))
        return Profile((w,) * self.n_voters)


@lru_cache(maxsize=None)
def get_domain(n_alternatives: int, n_voters: int, strict: bool = False) -> ProfileDomain:
    return ProfileDomain(n_alternatives, n_voters, strict)


def unanimous_indifference_profiles(a: int, b: int, universe, society) -> list[Profile]:
    """All profiles with I(P) = V, in canonical enumeration order."""
    _check_pair(a, b)
    n = len(universe) if isinstance(universe, Universe) else int(universe)
    m = len(society) if not isinstance(society, int) else society
    orders = [w for w in enumerate_weak_orders(n) if w.ranks[a] == w.ranks[b]]
    dom = get_domain(n, m)
    out = []
    for combo in itertools.product(orders, repeat=m):
        out.append(Profile(combo))
    out.sort(key=dom.index)
    return out


def designated_indifference_profile(universe, society) -> Profile:
    """The default unanimous-indifference profile: every voter indifferent among all of A."""
    n = len(universe) if isinstance(universe, Universe) else int(universe)
    m = len(society) if not isinstance(society, int) else society
    return get_domain(n, m).total_indifference()


# --- text format ---------------------------------------------------------

_VOTER_LINE = re.compile(r"^\s*v(\d+)\s*:\s*(.*?)\s*$")


def format_partial(pi: PartialProfile | Profile, universe: Universe | None = None) -> str:
    return "\n".join(f"v{v}: {format_order(w, universe)}" for v, w in pi.items())


format_profile = format_partial


def parse_partial(text: str, universe: Universe, first_line: int = 1) -> PartialProfile:
    prefs: dict[int, WeakOrder] = {}
    for offset, raw in enumerate(text.splitlines()):
        lineno = first_line + offset
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        m = _VOTER_LINE.match(raw)
        if not m:
            raise ParseError(f"expected 'v<k>: <order>', got {raw.strip()!r}", lineno, 1)
        v = int(m.group(1))
        if v in prefs:
            raise ParseError(f"voter v{v} listed twice", lineno, 1)
        prefs[v] = parse_order(m.group(2), universe, line=lineno, column=m.start(2) + 1)
    return PartialProfile(prefs)


def parse_profile(text: str, universe: Universe, n_voters: int | None = None, first_line: int = 1) -> Profile:
    pi = parse_partial(text, universe, first_line)
    m = len(pi) if n_voters is None else n_voters
    if pi.domain != frozenset(range(m)):
        raise ParseError(f"profile must list voters v0..v{m - 1} exactly once", first_line)
    return Profile(tuple(pi[v] for v in range(m)))


def format_profile_inline(P: Profile, universe: Universe | None = None) -> str:
    return "(" + ", ".join(format_order(w, universe) for w in P.orders) + ")"


def parse_profile_inline(text: str, universe: Universe, line: int | None = None, column: int = 1) -> Profile:
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError(f"expected '(<order>, ...)', got {s!r}", line, column)
    col = column + (len(text) - len(text.lstrip())) + 1
    orders = []
    for part in s[1:-1].split(","):
        orders.append(parse_order(part, universe, line, col))
        col += len(part) + 1
    return Profile(tuple(orders))
