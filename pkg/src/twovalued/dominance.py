"""{a,b}-dominance between profiles and compatibility of two-valued scfs.

Scalar predicates work on :class:`~twovalued.profiles.Profile` values.
The table-level checks build the same relations for all profile pairs at
once: every relation here is a voter-wise conjunction, so a ``k x k``
matrix over single orders lifts to profile pairs by AND-ing one gather
per voter.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .profiles import Profile, ProfileDomain, equivalence_set, indifference_set, supporters
from .result import CheckResult

# Upper bound on the cells of one relation block held in memory.
_BLOCK_CELLS = 1 << 22


def _side_other(a: int, b: int, side: int) -> int:
    if a == b:
        raise DomainError("the pair {a, b} must consist of two distinct alternatives")
    if side == a:
        return b
    if side == b:
        return a
    raise DomainError(f"side must be one of the pair ({a}, {b}), got {side}")


def dominates(P: Profile, Q: Profile, a: int, b: int, side: int) -> bool:
    """P dominates Q on ``side``: V = E(P,Q) | (I(P) & D(side,Q))."""
    other = _side_other(a, b, side)
    covered = equivalence_set(P, Q, a, b) | (indifference_set(P, a, b) & supporters(side, Q, other))
    return covered == P.voters


# --- voter-wise relation matrices over single orders ---------------------


def order_equivalence(codes: np.ndarray) -> np.ndarray:
    k = len(codes)
    same = np.eye(k, dtype=bool)
    strict_same = (codes[:, None] == codes[None, :]) & (codes[:, None] != 0)
    return same | strict_same


def order_dominance(codes: np.ndarray, side_code: int) -> np.ndarray:
    """``M[p, q]``: one voter's contribution to "P dominates Q" (side +1 = a, -1 = b)."""
    return order_equivalence(codes) | ((codes[:, None] == 0) & (codes[None, :] == side_code))


def order_b1(codes: np.ndarray) -> np.ndarray:
    k = len(codes)
    p, q = codes[:, None], codes[None, :]
    both_indiff = (p == 0) & (q == 0)
    same = np.eye(k, dtype=bool)
    return (~both_indiff | same) & ((p != 1) | (q == 1)) & ((q != -1) | (p == -1))


def relation_block(domain: ProfileDomain, matrix: np.ndarray, rows, cols=None) -> np.ndarray:
    """Lift a voter-wise ``k x k`` relation to the profile pairs ``rows x cols``."""
    vo = domain.voter_orders
    rows = np.asarray(rows)
    cols = np.arange(domain.size) if cols is None else np.asarray(cols)
    out = np.ones((len(rows), len(cols)), dtype=bool)
    for v in range(domain.n_voters):
        out &= matrix[vo[rows, v][:, None], vo[cols, v][None, :]]
    return out


def relation_matrix(domain: ProfileDomain, matrix: np.ndarray) -> np.ndarray:
    return relation_block(domain, matrix, np.arange(domain.size))


def dominance_matrix(domain: ProfileDomain, a: int, b: int, side: int) -> np.ndarray:
    _side_other(a, b, side)
    codes = domain.pair_codes(a, b)
    return relation_matrix(domain, order_dominance(codes, 1 if side == a else -1))


def full_equivalence_matrix(domain: ProfileDomain, a: int, b: int) -> np.ndarray:
    """``M[i, j]`` is True iff V = E(P_i, P_j)."""
    return relation_matrix(domain, order_equivalence(domain.pair_codes(a, b)))


def _two_valued(f, a: int, b: int):
    if a == b:
        raise DomainError("the pair {a, b} must consist of two distinct alternatives")
    rng = f.range()
    if rng != frozenset((a, b)):
        raise DomainError(f"range of the function is {sorted(rng)}, expected exactly {{{a}, {b}}}")


def scan_implication(f, a: int, b: int, matrix_a: np.ndarray, matrix_b: np.ndarray):
    """First pair (i, j) in row-major order violating
    ``[R_a(P_i, P_j) and f(P_i) = a] => f(P_j) = a`` or its b-side twin.

    Returns ``None`` when both implications hold on every pair.
    """
    dom = f.domain
    vals = np.asarray(f.values)
    is_a, is_b = vals == a, vals == b
    n = dom.size
    step = max(1, _BLOCK_CELLS // n)
    for start in range(0, n, step):
        rows = np.arange(start, min(n, start + step))
        bad = np.zeros((len(rows), n), dtype=bool)
        ra, rb = rows[is_a[rows]], rows[is_b[rows]]
        if len(ra):
            blk = relation_block(dom, matrix_a, ra) & ~is_a[None, :]
            bad[is_a[rows]] = blk
        if len(rb):
            blk = relation_block(dom, matrix_b, rb) & ~is_b[None, :]
            bad[is_b[rows]] = blk
        hits = np.argwhere(bad)
        if len(hits):
            i, j = hits[0]
            return int(rows[i]), int(j)
    return None


def is_compatible(f, a: int, b: int) -> CheckResult:
    """Compatibility of a two-valued table with the dominance relation.

    Holds iff ``P`` dominating ``Q`` on side ``f(P)`` forces ``f(Q) = f(P)``.
    On failure the witness is the first violating pair in enumeration order.
    """
    _two_valued(f, a, b)
    codes = f.domain.pair_codes(a, b)
    hit = scan_implication(f, a, b, order_dominance(codes, 1), order_dominance(codes, -1))
    if hit is None:
        return CheckResult(True)
    i, j = hit
    return CheckResult(False, {"P": f.domain.profile(i), "Q": f.domain.profile(j)})


def is_compatible_bruteforce(f, a: int, b: int) -> CheckResult:
    """Same as :func:`is_compatible`, by the scalar definition on every ordered pair."""
    _two_valued(f, a, b)
    profiles = list(f.domain)
    for i, P in enumerate(profiles):
        fp = f.values[i]
        for j, Q in enumerate(profiles):
            if f.values[j] != fp and dominates(P, Q, a, b, fp):
                return CheckResult(False, {"P": P, "Q": Q})
    return CheckResult(True)
