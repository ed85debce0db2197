"""Weak orders over a finite set of alternatives.

Alternatives are small integers ``0..n-1``; a :class:`Universe` only
supplies display labels.  A weak order is stored as an ordered partition
(best class first), so completeness and transitivity hold by
construction.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError, ParseError


class Cmp(IntEnum):
    """Outcome of comparing two alternatives under a weak order.

    For a pair restriction ``(a, b)`` the members read as ``a>b``
    (FIRST), ``a~b`` (TIE) and ``b>a`` (SECOND).  Mirroring a comparison
    is negation.
    """

    FIRST = 1
    TIE = 0
    SECOND = -1


@dataclass(frozen=True)
class Universe:
    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise DomainError("the alternative universe must be nonempty")
        if len(set(self.labels)) != len(self.labels):
            raise DomainError(f"duplicate alternative labels in {self.labels}")
        for lab in self.labels:
            if not lab or any(ch in lab for ch in "~>,;:() \t#{}"):
                raise DomainError(f"invalid alternative label {lab!r}")

    @classmethod
    def of_size(cls, n: int) -> "Universe":
        if n < 1:
            raise DomainError("the alternative universe must be nonempty")
        if n <= 26:
            return cls(tuple(string.ascii_lowercase[:n]))
        return cls(tuple(f"x{i}" for i in range(n)))

    def __len__(self):
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DomainError(f"unknown alternative {label!r}") from None

    def label(self, alt: int) -> str:
        return self.labels[alt]


@dataclass(frozen=True)
class WeakOrder:
    classes: tuple[frozenset[int], ...]
    ranks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        classes = tuple(frozenset(c) for c in self.classes)
        object.__setattr__(self, "classes", classes)
        seen: set[int] = set()
        for c in classes:
            if not c:
                raise DomainError("indifference classes must be nonempty")
            if seen & c:
                raise DomainError("indifference classes must be disjoint")
            seen |= c
        n = len(seen)
        if seen != set(range(n)):
            raise DomainError(f"classes {sorted(seen)} do not cover 0..{n - 1}")
        ranks = [0] * n
        for i, c in enumerate(classes):
            for x in c:
                ranks[x] = i
        object.__setattr__(self, "ranks", tuple(ranks))

    @classmethod
    def from_ranks(cls, ranks: Sequence[int]) -> "WeakOrder":
        """Build from a class-assignment vector (``ranks[x]`` = class of x)."""
        levels = sorted(set(ranks))
        pos = {r: i for i, r in enumerate(levels)}
        classes = [set() for _ in levels]
        for x, r in enumerate(ranks):
            classes[pos[r]].add(x)
        return cls(tuple(frozenset(c) for c in classes))

    @property
    def size(self) -> int:
        return len(self.ranks)

    def __lt__(self, other: "WeakOrder") -> bool:
        return self.ranks < other.ranks

    def top(self, among: Iterable[int] | None = None) -> frozenset[int]:
        """Best class, or the best elements within ``among``."""
        if among is None:
            return self.classes[0]
        among = list(among)
        best = min(self.ranks[x] for x in among)
        return frozenset(x for x in among if self.ranks[x] == best)

    def __str__(self):
        return format_order(self)


def _check_alt(w: WeakOrder, x: int):
    if not 0 <= x < w.size:
        raise DomainError(f"alternative {x} is outside the universe of size {w.size}")


def compare(w: WeakOrder, x: int, y: int) -> Cmp:
    _check_alt(w, x)
    _check_alt(w, y)
    rx, ry = w.ranks[x], w.ranks[y]
    if rx < ry:
        return Cmp.FIRST
    if rx > ry:
        return Cmp.SECOND
    return Cmp.TIE


def prefers(w: WeakOrder, x: int, y: int) -> bool:
    """Strict preference of x over y."""
    return w.ranks[x] < w.ranks[y]


def restrict_to_pair(w: WeakOrder, a: int, b: int) -> Cmp:
    if a == b:
        raise DomainError("restriction needs two distinct alternatives")
    return compare(w, a, b)


def is_strict(w: WeakOrder) -> bool:
    return all(len(c) == 1 for c in w.classes)


def _universe_size(universe) -> int:
    if isinstance(universe, Universe):
        return len(universe)
    n = int(universe)
    if n < 1:
        raise DomainError("the alternative universe must be nonempty")
    return n


@lru_cache(maxsize=None)
def _enumerate(n: int, strict: bool) -> tuple[WeakOrder, ...]:
    out = []
    # A class-assignment vector is canonical when its values are exactly 0..k-1.
    for vec in itertools.product(range(n), repeat=n):
        used = set(vec)
        if used != set(range(len(used))):
            continue
        if strict and len(used) != n:
            continue
        out.append(WeakOrder.from_ranks(vec))
    return tuple(out)


def enumerate_weak_orders(universe, strict: bool = False) -> tuple[WeakOrder, ...]:
    """All weak orders (or all strict orders) in canonical order.

    The canonical order is lexicographic on the class-assignment vector,
    so the total-indifference order always comes first.
    """
    return _enumerate(_universe_size(universe), strict)


def canonical_strict_pair(a: int, b: int, universe) -> tuple[WeakOrder, WeakOrder]:
    """Strict orders ``a>b>rest`` and ``b>a>rest``, rest in ascending id order."""
    n = _universe_size(universe)
    if a == b:
        raise DomainError("canonical_strict_pair needs two distinct alternatives")
    for x in (a, b):
        if not 0 <= x < n:
            raise DomainError(f"alternative {x} is outside the universe of size {n}")
    rest = [x for x in range(n) if x not in (a, b)]
    s1 = WeakOrder(tuple(frozenset([x]) for x in [a, b, *rest]))
    s2 = WeakOrder(tuple(frozenset([x]) for x in [b, a, *rest]))
    return s1, s2


def format_order(w: WeakOrder, universe: Universe | None = None) -> str:
    if universe is None:
        universe = Universe.of_size(w.size)
    elif len(universe) != w.size:
        raise DomainError("universe size does not match the order")
    return ">".join("~".join(universe.label(x) for x in sorted(c)) for c in w.classes)


def parse_order(text: str, universe: Universe, line: int | None = None, column: int = 1) -> WeakOrder:
    """Parse ``"a~b>c"`` into a weak order over ``universe``.

    ``column`` is where ``text`` starts on its line, for error positions.
    """
    classes = []
    seen: set[int] = set()
    col = column
    for chunk in text.split(">"):
        members = set()
        ccol = col
        for raw in chunk.split("~"):
            lab = raw.strip()
            at = ccol + len(raw) - len(raw.lstrip())
            if not lab:
                raise ParseError(f"empty alternative in {text!r}", line, ccol)
            try:
                x = universe.index(lab)
            except DomainError:
                raise ParseError(f"unknown alternative {lab!r}", line, at) from None
            if x in seen:
                raise ParseError(f"alternative {lab!r} listed twice", line, at)
            seen.add(x)
            members.add(x)
            ccol += len(raw) + 1
        classes.append(frozenset(members))
        col += len(chunk) + 1
    missing = set(range(len(universe))) - seen
    if missing:
        labs = ", ".join(universe.label(x) for x in sorted(missing))
        raise ParseError(f"order {text!r} does not rank {labs}", line)
    return WeakOrder(tuple(classes))
