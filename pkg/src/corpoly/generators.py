"""Rank-one generators over 0/1 and plus/minus-1 vectors, and support pruning.

Generator ids are plain integers: the boolean vector for id ``k`` has bit
``i`` of ``k`` as its component ``i``, least significant bit first. Any fixed
bit order yields the same generator set; this one is pinned so that
certificates are reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exactnum import (
    AsymmetricInput,
    Error,
    RationalMatrix,
    as_rational,
    check_symmetric,
    first_negative,
)


class OutOfRange(Error):
    """Generator id outside [0, 2^n) or a component outside {0, 1}."""


class FortetViolation(Error):
    """A linearized product value breaks one of the product inequalities."""


class NegativeEntry(Error):
    """A nonnegative matrix was required."""


def generator_count(n: int) -> int:
    return 1 << n


def max_generator(n: int) -> int:
    """Largest generator id for dimension n (all bits set)."""
    return (1 << n) - 1


def _validate_id(k: int, n: int) -> None:
    if n < 1:
        raise OutOfRange(f"dimension must be positive, got {n}")
    if not 0 <= k <= max_generator(n):
        raise OutOfRange(f"generator id {k} outside [0, 2^{n})")


def boolean_vector(k: int, n: int) -> tuple:
    """The 0/1 vector whose bits, least significant first, spell out k."""
    _validate_id(k, n)
    return tuple((k >> i) & 1 for i in range(n))


def support(k: int, n: int) -> tuple:
    """Indices of the nonzero components of the boolean vector for k."""
    _validate_id(k, n)
    return tuple(i for i in range(n) if (k >> i) & 1)


def generator_matrix(k: int, n: int) -> RationalMatrix:
    """Outer product of the boolean vector for k with itself."""
    _validate_id(k, n)
    return RationalMatrix(
        [[1 if (k >> i) & 1 and (k >> j) & 1 else 0 for j in range(n)] for i in range(n)]
    )


def cut_generator(k: int, n: int) -> RationalMatrix:
    """Outer product y yᵀ of the sign vector y = 2x - 1 for the bits x of k.

    Entries are plus/minus 1 with a unit diagonal. Flipping every sign of y
    leaves the matrix unchanged, so ids k and 2^n - 1 - k coincide here.
    """
    _validate_id(k, n)
    signs = [1 if (k >> i) & 1 else -1 for i in range(n)]
    return RationalMatrix([[signs[i] * signs[j] for j in range(n)] for i in range(n)])


def cut_representatives(n: int) -> range:
    """One generator id per distinct cut matrix: the 2^(n-1) ids with last bit 0.

    Each {y, -y} pair contains exactly one vector whose last component is -1,
    i.e. whose x vector has top bit 0, so the representatives are simply the
    ids below 2^(n-1). The resulting matrices are pairwise distinct.
    """
    if n < 1:
        raise OutOfRange(f"dimension must be positive, got {n}")
    return range(1 << (n - 1))


def bqp_point_to_matrix(x: Sequence, y: Mapping) -> RationalMatrix:
    """Assemble the symmetric matrix with diagonal x and off-diagonal values y.

    ``y`` maps index pairs (i, j) with i < j to the linearized product value.
    Every pair is checked against the four product inequalities
    (y >= 0, y <= x_i, y <= x_j, y >= x_i + x_j - 1); the first violated one
    is reported. For boolean x these force y to be the exact products, so the
    result is the rank-one matrix x xᵀ.
    """
    n = len(x)
    if n == 0:
        raise OutOfRange("point must have at least one component")
    diag = []
    for i, v in enumerate(x):
        b = as_rational(v)
        if b not in (0, 1):
            raise OutOfRange(f"x[{i}] must be 0 or 1, got {b}")
        diag.append(b)
    grid = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        grid[i][i] = diag[i]
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in y:
                raise KeyError(f"missing product value for pair ({i}, {j})")
            v = as_rational(y[(i, j)])
            xi, xj = diag[i], diag[j]
            if v < 0:
                raise FortetViolation(f"y[{i},{j}] >= 0 violated (y = {v})")
            if v > xi:
                raise FortetViolation(f"y[{i},{j}] <= x[{i}] violated ({v} > {xi})")
            if v > xj:
                raise FortetViolation(f"y[{i},{j}] <= x[{j}] violated ({v} > {xj})")
            if v < xi + xj - 1:
                raise FortetViolation(
                    f"y[{i},{j}] >= x[{i}] + x[{j}] - 1 violated ({v} < {xi + xj - 1})"
                )
            grid[i][j] = v
            grid[j][i] = v
    return RationalMatrix(grid)


@dataclass(frozen=True)
class SupportGraph:
    """Edges at strictly positive off-diagonal entries, loops at positive diagonals."""

    n: int
    edges: frozenset  # of (i, j) pairs with i < j
    loops: frozenset  # of vertex indices

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        return (min(i, j), max(i, j)) in self.edges

    def neighbors(self, i: int) -> tuple:
        out = [j for j in range(self.n) if self.has_edge(i, j)]
        return tuple(out)


def support_graph(gamma: RationalMatrix) -> SupportGraph:
    """Support graph of a symmetric nonnegative matrix."""
    if not check_symmetric(gamma):
        raise AsymmetricInput("support graph needs a symmetric matrix")
    neg = first_negative(gamma)
    if neg is not None:
        raise NegativeEntry(f"negative entry {gamma[neg]} at {neg}")
    n = gamma.n
    edges = frozenset(
        (i, j) for i in range(n) for j in range(i + 1, n) if gamma[i, j] > 0
    )
    loops = frozenset(i for i in range(n) if gamma[i, i] > 0)
    return SupportGraph(n, edges, loops)


def admissible_generators(gamma: RationalMatrix, kind: str = "boolean") -> list:
    """Generator ids that can carry positive weight in a decomposition of gamma.

    For the boolean kind these are the nonzero ids whose support is a clique
    of the support graph with every vertex looped; any other id is forced to
    zero weight by the equation of some entry it touches. The zero id is
    excluded since it contributes nothing to a conic sum. For the cut kind no
    pruning is possible (signed entries cancel), so every representative is
    returned.
    """
    n = gamma.n
    if kind == "cut":
        return list(cut_representatives(n))
    if kind != "boolean":
        raise Error(f"unknown generator kind {kind!r}")
    graph = support_graph(gamma)
    loop_mask = 0
    for i in graph.loops:
        loop_mask |= 1 << i
    allowed = [1 << i for i in range(n)]
    for i, j in graph.edges:
        allowed[i] |= 1 << j
        allowed[j] |= 1 << i
    out = []
    for k in range(1, 1 << n):
        if k & ~loop_mask:
            continue
        rest = k
        good = True
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            if k & ~allowed[i]:
                good = False
                break
            rest ^= low
        if good:
            out.append(k)
    return out
