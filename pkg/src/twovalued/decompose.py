"""Recover a psi-type representation of a two-valued CSP table.

The algorithm walks the profiles in a fixed enumeration that starts with
a unanimous-indifference profile ``pi`` and sets ``x = f(pi)``.  Entry 0
is the empty partial profile with the committee read off strict profiles.
Each later entry is built from the first profile ``Q`` not yet covered by
an earlier entry on which ``f`` differs from ``x``: freeze the voters
indifferent in ``Q`` at their orders in ``Q`` and attach a committee for
the remaining voters.  Every entry covers ``Q``, so the loop ends within
one pass over the profiles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .committees import Committee, ExtendedCommittee, class_membership, dual, is_superset_closed
from .dominance import is_compatible
from .errors import DomainError, NotCSPError
from .orders import canonical_strict_pair
from .profiles import PartialProfile, Profile, get_domain, is_partial_ab_indifference
from .psi import PsiSpec, psi_table
from .scf import ScfTable


def _subsets_of(voters: list[int]):
    for mask in range(1 << len(voters)):
        yield frozenset(v for i, v in enumerate(voters) if mask >> i & 1)


def extract_base_committee(f: ScfTable, a: int, b: int) -> Committee:
    """The committee on the whole society that f induces on strict profiles.

    S is a member iff f picks a when S reports ``a>b>rest`` and everybody
    else reports ``b>a>rest``.  For a CSP table with range {a, b} this is
    a superset-closed family without the empty coalition and with the
    whole society; anything else means f is not CSP.
    """
    dom = f.domain
    voters = list(range(dom.n_voters))
    s1, s2 = canonical_strict_pair(a, b, dom.n_alternatives)
    i1, i2 = dom.order_index(s1), dom.order_index(s2)
    members = set()
    for S in _subsets_of(voters):
        idx = dom.encode([i1 if v in S else i2 for v in voters])
        if f.values[idx] == a:
            members.add(S)
    society = frozenset(voters)
    if frozenset() in members or society not in members:
        raise NotCSPError("strict unanimity is not respected on the pair", witness={"members": members})
    if not is_superset_closed(members, society):
        raise NotCSPError("the coalitions winning a on strict profiles are not superset closed", witness={"members": members})
    return Committee(society, frozenset(members))


def restrict_scf(f: ScfTable, pi: PartialProfile) -> ScfTable:
    """The table over the voters outside dom(pi), with dom(pi) frozen at pi.

    Sub-society voter ``j`` is the ``j``-th smallest voter outside dom(pi).
    """
    dom = f.domain
    fixed = pi.domain
    if any(not 0 <= v < dom.n_voters for v in fixed):
        raise DomainError("pi mentions voters outside the society")
    free = [v for v in range(dom.n_voters) if v not in fixed]
    if not free:
        raise DomainError("pi covers the whole society; nothing is left to restrict to")
    sub = get_domain(dom.n_alternatives, len(free), dom.strict)
    ids = np.empty((sub.size, dom.n_voters), dtype=np.intp)
    for v, w in pi.items():
        ids[:, v] = dom.order_index(w)
    for j, v in enumerate(free):
        ids[:, v] = sub.voter_orders[:, j]
    idx = np.ravel_multi_index(tuple(ids.T), dom.shape)
    return ScfTable(sub, f.values[idx], f.universe)


def _relabel(F: Committee, voters: list[int]) -> Committee:
    def up(S):
        return frozenset(voters[j] for j in S)

    return Committee(up(F.carrier), frozenset(up(S) for S in F.members))


@dataclass
class DecompositionState:
    """Progress of the representation loop.

    ``enumeration`` lists profile indices with the designated ``pi``
    first.  ``etas[alpha]`` is the enumeration position of the profile
    that generated entry ``alpha`` (``None`` for entry 0).
    """

    f: ScfTable
    a: int
    b: int
    x: int
    pi: Profile
    enumeration: np.ndarray
    covered: np.ndarray
    entries: list[ExtendedCommittee] = field(default_factory=list)
    etas: list[int | None] = field(default_factory=list)
    delta_sizes: list[int] = field(default_factory=list)

    def delta(self) -> np.ndarray:
        """Enumeration positions of uncovered profiles whose value is not x."""
        order = self.enumeration
        mask = ~self.covered[order] & (self.f.values[order] != self.x)
        return np.flatnonzero(mask)

    def add(self, ec: ExtendedCommittee, eta: int | None):
        in_a, in_b = class_membership(self.f.domain, ec, self.a, self.b)
        self.covered |= in_a | in_b
        self.entries.append(ec)
        self.etas.append(eta)


def _check_inclusions(state: DecompositionState, ec: ExtendedCommittee):
    dom, f = state.f.domain, state.f
    in_a, in_b = class_membership(dom, ec, state.a, state.b)
    for side, members in ((state.a, in_a), (state.b, in_b)):
        bad = np.flatnonzero(members & (f.values != side))
        if len(bad):
            raise NotCSPError(
                f"entry {len(state.entries)} puts a profile with a different value into its class",
                witness={"P": dom.profile(int(bad[0])), "entry": len(state.entries)},
            )
    pi_idx = dom.index(state.pi)
    if in_a[pi_idx] or in_b[pi_idx]:
        raise NotCSPError(
            f"entry {len(state.entries)} covers the unanimous-indifference profile",
            witness={"P": state.pi, "entry": len(state.entries)},
        )
    return in_a, in_b


def next_entry(state: DecompositionState) -> ExtendedCommittee | None:
    """Build the next extended committee, or return None when every
    profile with value other than x is covered."""
    f, a, b, x = state.f, state.a, state.b, state.x
    dom = f.domain
    delta = state.delta()
    state.delta_sizes.append(len(delta))
    if not len(delta):
        return None
    eta = int(delta[0])
    alpha = len(state.entries)
    previous = [e for e in state.etas if e is not None]
    if previous and eta <= previous[-1]:
        raise NotCSPError("the generating profiles stopped advancing", witness={"eta": eta})
    if alpha > eta:
        raise NotCSPError(f"entry index {alpha} overtook its enumeration position {eta}")

    qi = int(state.enumeration[eta])
    Q = dom.profile(qi)
    y = int(f.values[qi])
    indiff, _, _ = dom.coalition_masks(a, b)
    I = [v for v in range(dom.n_voters) if indiff[qi] >> v & 1]
    rest = [v for v in range(dom.n_voters) if v not in I]
    pi = Q.restrict(I)

    if not rest:
        F = Committee.power_set(()) if y == a else Committee.empty(())
    else:
        g = restrict_scf(f, pi)
        if x not in g.range():
            F = Committee.power_set(rest) if y == a else Committee.empty(rest)
        else:
            F = _relabel(extract_base_committee(g, a, b), rest)
    ec = ExtendedCommittee(pi, F)

    in_a, in_b = _check_inclusions(state, ec)
    if not (in_a[qi] or in_b[qi]):
        raise NotCSPError(f"entry {alpha} does not cover its generating profile", witness={"P": Q})
    state.add(ec, eta)
    return ec


def start(f: ScfTable, a: int, b: int, pi_choice: Profile | None = None) -> DecompositionState:
    dom = f.domain
    if dom.strict:
        raise DomainError("decomposition needs the full weak-order domain")
    if a == b:
        raise DomainError("the pair {a, b} must consist of two distinct alternatives")
    if f.range() != frozenset((a, b)):
        raise DomainError(f"range of the function is {sorted(f.range())}, expected exactly {{{a}, {b}}}")
    compat = is_compatible(f, a, b)
    if not compat:
        raise NotCSPError("the function is not compatible with dominance, hence not CSP", witness=compat.witness)

    pi = dom.total_indifference() if pi_choice is None else pi_choice
    if not is_partial_ab_indifference(pi, a, b) or len(pi) != dom.n_voters:
        raise DomainError("the chosen profile is not unanimously indifferent between a and b")
    pi_idx = dom.index(pi)
    enumeration = np.concatenate(([pi_idx], np.delete(np.arange(dom.size), pi_idx)))
    state = DecompositionState(
        f=f, a=a, b=b, x=int(f.values[pi_idx]), pi=pi, enumeration=enumeration,
        covered=np.zeros(dom.size, dtype=bool),
    )

    F0 = extract_base_committee(f, a, b)
    if F0.is_empty or dual(F0).is_empty:
        raise NotCSPError("the base committee or its dual is empty")
    base = ExtendedCommittee(PartialProfile(), F0)
    _check_inclusions(state, base)
    state.add(base, None)
    return state


def run(f: ScfTable, a: int, b: int, pi_choice: Profile | None = None) -> DecompositionState:
    state = start(f, a, b, pi_choice)
    for _ in range(f.domain.size + 1):
        if next_entry(state) is None:
            return state
    raise NotCSPError("the representation loop did not terminate")


def decompose(f: ScfTable, a: int, b: int, pi_choice: Profile | None = None) -> PsiSpec:
    """A psi spec that reproduces the CSP table ``f`` on every profile."""
    state = run(f, a, b, pi_choice)
    spec = PsiSpec(a, b, state.x, tuple(state.entries), f.domain.n_voters, f.universe)
    rebuilt = psi_table(spec)
    if rebuilt != f:
        bad = int(np.flatnonzero(rebuilt.values != f.values)[0])
        raise NotCSPError("the representation disagrees with the input", witness={"P": f.domain.profile(bad)})
    return spec
