"""Membership deciders with exact certificates for correlation and cut hulls.

Supported families, by their short names:

==========  =====================================================  =========
family      hull                                                   total
==========  =====================================================  =========
conx        conic hull of the boolean rank-one matrices X^k        none
cor         their convex hull (the correlation polytope)           1
rho-cor     that polytope scaled by rho > 0                        rho
ncor        the polytope with the zero vertex removed              1
cut         convex hull of the sign rank-one matrices Y^k          1
ncut        that polytope with the all-ones vertex removed         1
cutcone     conic hull of the Y^k                                  none
==========  =====================================================  =========

A query screens cheap necessary conditions first, then solves an exact
feasibility LP over the admissible generator columns. YES answers carry a
certificate whose recomposition equals the input bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

from .exactnum import (
    Error,
    RationalMatrix,
    as_rational,
    check_psd,
    first_asymmetry,
    first_negative,
)
from .generators import (
    admissible_generators,
    boolean_vector,
    cut_representatives,
    max_generator,
)
from .simplexcore import LinearSystem, lp_feasible

FAMILIES = ("conx", "cor", "rho-cor", "ncor", "cut", "ncut", "cutcone")
BOOLEAN_FAMILIES = frozenset({"conx", "cor", "rho-cor", "ncor"})
CUT_FAMILIES = frozenset({"cut", "ncut", "cutcone"})
CONE_FAMILIES = frozenset({"conx", "cutcone"})

DEFAULT_MAX_N = 16


class UnknownFamily(Error):
    pass


class BadHullSpec(Error):
    """rho supplied for a family that takes none, or missing where required."""


class NonPositiveRho(BadHullSpec):
    pass


class DimensionCap(Error):
    """Matrix dimension exceeds the configured generator-materialization cap."""


class InvalidCertificate(Error):
    pass


@dataclass(frozen=True)
class HullSpec:
    """Which hull a query targets; ``rho`` exactly for the scaled polytope."""

    family: str
    rho: Optional[Fraction] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnknownFamily(f"unknown family {self.family!r}")
        if self.family == "rho-cor":
            if self.rho is None:
                raise BadHullSpec("family 'rho-cor' requires rho")
            rho = as_rational(self.rho)
            if rho <= 0:
                raise NonPositiveRho(f"rho must be positive, got {rho}")
            object.__setattr__(self, "rho", rho)
        elif self.rho is not None:
            raise BadHullSpec(f"family {self.family!r} takes no rho")


@dataclass(frozen=True)
class DecompositionCertificate:
    """Strictly positive generator weights recomposing a matrix exactly.

    ``kind`` selects the generator family ("boolean" for X^k, "cut" for Y^k);
    ``terms`` is sorted by ascending generator id.
    """

    n: int
    kind: str
    terms: tuple  # ((k, weight), ...) ascending k, weights > 0

    @classmethod
    def from_weights(cls, n: int, kind: str, weights: Mapping) -> "DecompositionCertificate":
        if kind not in ("boolean", "cut"):
            raise InvalidCertificate(f"unknown generator kind {kind!r}")
        top = max_generator(n)
        terms = []
        for k in sorted(weights):
            w = as_rational(weights[k])
            if w < 0:
                raise InvalidCertificate(f"negative weight {w} for generator {k}")
            if w == 0:
                continue
            if not 0 <= k <= top:
                raise InvalidCertificate(f"generator id {k} outside [0, 2^{n})")
            terms.append((k, w))
        return cls(n, kind, tuple(terms))

    def weights(self) -> dict:
        return dict(self.terms)

    def total(self) -> Fraction:
        return sum((w for _, w in self.terms), Fraction(0))

    def support_size(self) -> int:
        return len(self.terms)

    def recompose(self) -> RationalMatrix:
        """Sum the weighted generators back into a matrix, exactly."""
        n = self.n
        grid = [[Fraction(0)] * n for _ in range(n)]
        for k, w in self.terms:
            if self.kind == "boolean":
                idx = [i for i in range(n) if (k >> i) & 1]
                for i in idx:
                    for j in idx:
                        grid[i][j] += w
            else:
                signs = [1 if (k >> i) & 1 else -1 for i in range(n)]
                for i in range(n):
                    for j in range(n):
                        grid[i][j] += w * signs[i] * signs[j]
        return RationalMatrix(grid)


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    certificate: Optional[DecompositionCertificate] = None
    rejection: Optional[str] = None  # "failed-screen" | "lp-infeasible"
    screen_failures: tuple = ()


def screen_failures(gamma: RationalMatrix, family: str) -> list:
    """Necessary-condition failures for a family, as diagnostic strings.

    Boolean families require symmetry, nonnegativity, and PSD. Cut polytope
    families require symmetry, a unit diagonal, and entries within [-1, 1].
    The cut cone requires symmetry and PSD only (its members may have
    negative entries and any constant diagonal).
    """
    if family not in FAMILIES:
        raise UnknownFamily(f"unknown family {family!r}")
    fails = []
    asym = first_asymmetry(gamma)
    if asym is not None:
        i, j = asym
        fails.append(f"not symmetric: entries ({i},{j}) and ({j},{i}) differ")
    if family in BOOLEAN_FAMILIES:
        neg = first_negative(gamma)
        if neg is not None:
            i, j = neg
            fails.append(f"negative entry {gamma[neg]} at ({i},{j})")
        if asym is None:
            ok, witness = check_psd(gamma)
            if not ok:
                fails.append(f"not positive semidefinite: {witness.describe()}")
    elif family == "cutcone":
        if asym is None:
            ok, witness = check_psd(gamma)
            if not ok:
                fails.append(f"not positive semidefinite: {witness.describe()}")
    else:  # cut, ncut
        for i in range(gamma.n):
            if gamma[i, i] != 1:
                fails.append(f"diagonal entry ({i},{i}) = {gamma[i, i]}, expected 1")
                break
        box = None
        for i in range(gamma.n):
            for j in range(gamma.n):
                v = gamma[i, j]
                if v < -1 or v > 1:
                    box = (i, j, v)
                    break
            if box:
                break
        if box:
            i, j, v = box
            fails.append(f"entry {v} at ({i},{j}) outside [-1, 1]")
    return fails


def entry_pairs(n: int) -> list:
    """Upper-triangle index pairs (i, j), i <= j, in row-major order."""
    return [(i, j) for i in range(n) for j in range(i, n)]


def generator_column(k: int, kind: str, pairs) -> list:
    """LP column of generator k over the given entry pairs."""
    if kind == "boolean":
        return [
            Fraction(1) if (k >> i) & 1 and (k >> j) & 1 else Fraction(0)
            for i, j in pairs
        ]
    return [
        Fraction(1) if ((k >> i) & 1) == ((k >> j) & 1) else Fraction(-1)
        for i, j in pairs
    ]


def _membership_columns(gamma, family):
    n = gamma.n
    if family in BOOLEAN_FAMILIES:
        ids = admissible_generators(gamma, "boolean")
        if family in ("cor", "rho-cor"):
            # the zero matrix is a genuine vertex of the polytope
            ids = [0] + ids
        return ids, "boolean"
    ids = list(cut_representatives(n))
    if family == "ncut":
        ids = ids[1:]  # id 0 is the all-ones matrix, the removed vertex
    return ids, "cut"


def _side_total(spec: HullSpec):
    if spec.family in CONE_FAMILIES:
        return None
    if spec.family == "rho-cor":
        return spec.rho
    return Fraction(1)


def build_membership_system(gamma, ids, kind, total) -> LinearSystem:
    """One equation per entry (i <= j), one column per generator, plus the
    optional weight-total row."""
    pairs = entry_pairs(gamma.n)
    columns = [generator_column(k, kind, pairs) for k in ids]
    a = [[col[r] for col in columns] for r in range(len(pairs))]
    b = [gamma[i, j] for i, j in pairs]
    if total is not None:
        a.append([Fraction(1)] * len(ids))
        b.append(total)
    return LinearSystem(a, b, num_cols=len(ids))


def decide_membership(
    gamma: RationalMatrix,
    spec: Union[HullSpec, str],
    max_n: int = DEFAULT_MAX_N,
) -> MembershipResult:
    """Decide hull membership with a recomposable certificate on YES.

    Screens run first; a failed screen is a NO with the failure list
    attached, and no LP is solved. Otherwise feasibility of the exact
    generator-column system settles the answer.
    """
    if isinstance(spec, str):
        spec = HullSpec(spec)
    if gamma.n > max_n:
        raise DimensionCap(f"n={gamma.n} exceeds the configured cap {max_n}")
    fails = screen_failures(gamma, spec.family)
    if fails:
        return MembershipResult(False, None, "failed-screen", tuple(fails))
    ids, kind = _membership_columns(gamma, spec.family)
    system = build_membership_system(gamma, ids, kind, _side_total(spec))
    outcome = lp_feasible(system)
    if outcome.status != "feasible":
        return MembershipResult(False, None, "lp-infeasible", ())
    weights = {k: w for k, w in zip(ids, outcome.witness) if w > 0}
    certificate = DecompositionCertificate.from_weights(gamma.n, kind, weights)
    return MembershipResult(True, certificate, None, ())


def decide_scaled_cor(gamma: RationalMatrix, rho, max_n: int = DEFAULT_MAX_N) -> MembershipResult:
    """Membership in the rho-scaled correlation polytope (weights sum to rho).

    Equivalent to membership of gamma / rho in the unscaled polytope; the
    direct system with total rho is solved here.
    """
    return decide_membership(gamma, HullSpec("rho-cor", as_rational(rho)), max_n)


def cp_witness(certificate: DecompositionCertificate) -> list:
    """Completely positive factorization as weighted boolean columns.

    Returns pairs (weight, column) with weight > 0 and boolean columns, so
    that the weighted sum of the columns' outer products reproduces the
    certified matrix. Square roots are never materialized; the weight stays
    a rational attached to its 0/1 column.
    """
    if not isinstance(certificate, DecompositionCertificate):
        raise InvalidCertificate("not a decomposition certificate")
    if certificate.kind != "boolean":
        raise InvalidCertificate("completely positive columns exist for boolean certificates only")
    out = []
    for k, w in certificate.terms:
        if w <= 0:
            raise InvalidCertificate(f"nonpositive weight {w} for generator {k}")
        if k == 0:
            raise InvalidCertificate("the zero generator has no place in a conic certificate")
        out.append((w, boolean_vector(k, certificate.n)))
    return out


def required_total(family: str, rho=None):
    """The weight-sum constraint a valid certificate must satisfy, if any."""
    if family not in FAMILIES:
        raise UnknownFamily(f"unknown family {family!r}")
    if family in CONE_FAMILIES:
        return None
    if family == "rho-cor":
        if rho is None:
            raise BadHullSpec("family 'rho-cor' requires rho")
        return as_rational(rho)
    return Fraction(1)


def verify_certificate(gamma: RationalMatrix, certificate: DecompositionCertificate,
                       family: str, rho=None) -> bool:
    """Recompose the certificate and compare with gamma, exactly.

    Polytope families additionally require the weights to sum to their fixed
    total (1, or rho for the scaled polytope).
    """
    total = required_total(family, rho)
    if total is not None and certificate.total() != total:
        return False
    return certificate.recompose() == gamma
