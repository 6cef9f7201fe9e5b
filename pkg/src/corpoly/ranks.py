"""Exact rank and relaxed rank of hull decompositions, with certificates.

The rank of a member is the least number of strictly positive weights in a
decomposition; the relaxed rank is the least weight sum. Both solvers check
membership first and answer "not-member" instead of a number when the
promise fails.

Rank search is an iterative-deepening depth-first walk over generator
subsets in lexicographic order (ascending id), solving an exact feasibility
LP at each leaf. A branch is abandoned as soon as some strictly positive
entry of the target can be covered by no chosen-or-remaining generator, so
certificates and NO answers are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactnum import Error, RationalMatrix, as_rational
from .generators import admissible_generators
from .hulls import (
    DEFAULT_MAX_N,
    DecompositionCertificate,
    DimensionCap,
    HullSpec,
    UnknownFamily,
    decide_membership,
    entry_pairs,
    generator_column,
    screen_failures,
)
from .simplexcore import LinearSystem, lp_feasible, lp_minimize

RANK_FAMILIES = ("conx", "cor")


@dataclass(frozen=True)
class RankResult:
    status: str  # "answered" | "not-member"
    rank: Optional[int] = None
    certificate: Optional[DecompositionCertificate] = None
    threshold_met: Optional[bool] = None


@dataclass(frozen=True)
class RelaxedRankResult:
    status: str  # "answered" | "not-member"
    value: Optional[Fraction] = None
    certificate: Optional[DecompositionCertificate] = None
    threshold_met: Optional[bool] = None


def search_min_support(bvec, columns, q, side_total=None):
    """First subset of at most q nonnegative columns whose system is feasible.

    ``columns`` holds (label, column) pairs in ascending label order; all
    column entries must be nonnegative. Candidate subsets are enumerated
    depth-first in lexicographic label order and tested with an exact
    feasibility LP over the equations ``chosen columns . weights = bvec``
    (plus a weight-total row when ``side_total`` is given). Returns a weight
    mapping for the winning subset, or None.

    Testing subsets of size exactly min(q, #columns) suffices: feasibility
    only improves when columns are added, and zero weights are dropped from
    the answer.
    """
    nrows = len(bvec)
    need = 0
    for r in range(nrows):
        if bvec[r] > 0:
            need |= 1 << r
        elif bvec[r] < 0:
            return None  # nonnegative columns can never reach a negative entry
    covers = []
    for _, col in columns:
        mask = 0
        for r in range(nrows):
            if col[r] > 0:
                mask |= 1 << r
        covers.append(mask)
    count = len(columns)
    suffix = [0] * (count + 1)
    for i in range(count - 1, -1, -1):
        suffix[i] = suffix[i + 1] | covers[i]
    target = min(q, count)

    def leaf(chosen):
        a = [[columns[i][1][r] for i in chosen] for r in range(nrows)]
        b = list(bvec)
        if side_total is not None:
            a.append([Fraction(1)] * len(chosen))
            b.append(side_total)
        outcome = lp_feasible(LinearSystem(a, b, num_cols=len(chosen)))
        if outcome.status != "feasible":
            return None
        return {columns[i][0]: w for i, w in zip(chosen, outcome.witness) if w > 0}

    def walk(start, chosen, covered):
        if len(chosen) == target:
            if covered != need:
                return None
            return leaf(chosen)
        if count - start < target - len(chosen):
            return None
        if covered | suffix[start] != need:
            return None
        for i in range(start, count):
            found = walk(i + 1, chosen + [i], covered | covers[i])
            if found is not None:
                return found
        return None

    return walk(0, [], 0)


def _rank_setup(gamma, family):
    ids = admissible_generators(gamma, "boolean")
    if family == "cor":
        # a positive weight on the zero generator counts toward the rank
        ids = [0] + ids
        side = Fraction(1)
    else:
        side = None
    pairs = entry_pairs(gamma.n)
    bvec = [gamma[i, j] for i, j in pairs]
    columns = [(k, generator_column(k, "boolean", pairs)) for k in ids]
    return bvec, columns, side


def _check_family(family):
    if family not in RANK_FAMILIES:
        raise UnknownFamily(f"rank is defined for {RANK_FAMILIES}, got {family!r}")


def rank_decision(gamma: RationalMatrix, family: str, q: int,
                  max_n: int = DEFAULT_MAX_N) -> RankResult:
    """Is there a decomposition with at most q strictly positive weights?

    Membership is established first; non-members get status "not-member"
    rather than a verdict. Otherwise the subset search either produces a
    certificate of at most q generators or exhausts every candidate subset.
    """
    _check_family(family)
    if q < 0:
        raise Error(f"threshold must be nonnegative, got {q}")
    membership = decide_membership(gamma, HullSpec(family), max_n)
    if not membership.member:
        return RankResult("not-member")
    bvec, columns, side = _rank_setup(gamma, family)
    weights = search_min_support(bvec, columns, q, side)
    if weights is None:
        return RankResult("answered", None, None, False)
    certificate = DecompositionCertificate.from_weights(gamma.n, "boolean", weights)
    return RankResult("answered", None, certificate, True)


def rank_minimum(gamma: RationalMatrix, family: str,
                 max_n: int = DEFAULT_MAX_N) -> RankResult:
    """Smallest decomposition support size, by iterative deepening from 0.

    The membership witness bounds the answer above, so the deepening always
    terminates; at the minimal depth the returned certificate has exactly
    that many positive weights (a smaller support would have been found at
    an earlier depth).
    """
    _check_family(family)
    membership = decide_membership(gamma, HullSpec(family), max_n)
    if not membership.member:
        return RankResult("not-member")
    bvec, columns, side = _rank_setup(gamma, family)
    upper = membership.certificate.support_size()
    for q in range(upper + 1):
        weights = search_min_support(bvec, columns, q, side)
        if weights is not None:
            certificate = DecompositionCertificate.from_weights(gamma.n, "boolean", weights)
            return RankResult("answered", q, certificate, None)
    raise AssertionError("the membership witness support is always reachable")


def relaxed_rank(gamma: RationalMatrix, max_n: int = DEFAULT_MAX_N) -> RelaxedRankResult:
    """Least weight sum over all conic decompositions, as one exact LP."""
    if gamma.n > max_n:
        raise DimensionCap(f"n={gamma.n} exceeds the configured cap {max_n}")
    if screen_failures(gamma, "conx"):
        return RelaxedRankResult("not-member")
    ids = admissible_generators(gamma, "boolean")
    pairs = entry_pairs(gamma.n)
    columns = [generator_column(k, "boolean", pairs) for k in ids]
    a = [[col[r] for col in columns] for r in range(len(pairs))]
    b = [gamma[i, j] for i, j in pairs]
    c = [Fraction(1)] * len(ids)
    outcome = lp_minimize(LinearSystem(a, b, c, num_cols=len(ids)))
    if outcome.status != "optimal":
        return RelaxedRankResult("not-member")
    weights = {k: w for k, w in zip(ids, outcome.witness) if w > 0}
    certificate = DecompositionCertificate.from_weights(gamma.n, "boolean", weights)
    return RelaxedRankResult("answered", outcome.value, certificate)


def relaxed_rank_decision(gamma: RationalMatrix, rho,
                          max_n: int = DEFAULT_MAX_N) -> RelaxedRankResult:
    """Is the relaxed rank at most rho? Non-members answer false, flagged."""
    result = relaxed_rank(gamma, max_n)
    if result.status != "answered":
        return RelaxedRankResult("not-member", None, None, False)
    return RelaxedRankResult(
        "answered", result.value, result.certificate, result.value <= as_rational(rho)
    )
