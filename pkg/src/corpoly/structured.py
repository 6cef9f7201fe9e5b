"""Polynomial special cases driven by the shape of the support graph.

A matrix whose support graph is a forest decomposes, when it decomposes at
all, into edge and loop generators with weights read off directly. Chordal
support graphs have at most n maximal cliques, so the generator columns can
be restricted to clique-indexed variables and the membership, rank, and
relaxed-rank questions solved over a polynomial-size system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exactnum import AsymmetricInput, Error, RationalMatrix, check_symmetric
from .generators import SupportGraph, admissible_generators, support, support_graph
from .hulls import (
    DecompositionCertificate,
    MembershipResult,
    entry_pairs,
)
from .ranks import RankResult, RelaxedRankResult, search_min_support
from .simplexcore import LinearSystem, lp_feasible, lp_minimize


class NotForest(Error):
    pass


class NotChordal(Error):
    pass


class UncoveredEntry(Error):
    """Some strictly positive entry lies inside no supplied clique."""


def clique_id(vertices: Iterable) -> int:
    """Generator id whose support is the given vertex set."""
    k = 0
    for v in vertices:
        k |= 1 << v
    return k


@dataclass(frozen=True)
class CliqueFamily:
    """Deduplicated vertex subsets, each stored sorted, family ordered by
    the generator id of the subset."""

    n: int
    cliques: tuple

    @classmethod
    def from_sets(cls, n: int, sets) -> "CliqueFamily":
        canon = set()
        for raw in sets:
            clique = tuple(sorted({int(v) for v in raw}))
            if not clique:
                raise Error("empty clique")
            if clique[0] < 0 or clique[-1] >= n:
                raise Error(f"clique {clique} leaves the vertex range 0..{n - 1}")
            canon.add(clique)
        ordered = sorted(canon, key=clique_id)
        return cls(n, tuple(ordered))

    def __iter__(self):
        return iter(self.cliques)

    def __len__(self):
        return len(self.cliques)


def is_forest(graph: SupportGraph) -> bool:
    """Acyclic over the proper edges; loops mark diagonals, not cycles."""
    parent = list(range(graph.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in sorted(graph.edges):
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def _mcs_peo(graph: SupportGraph):
    """Perfect elimination ordering via maximum-cardinality search, or None.

    Vertices are picked by descending weight (ties to the smallest index),
    which yields a reversed elimination order for chordal graphs; the order
    is then verified, so a non-chordal graph comes back as None.
    """
    n = graph.n
    adjacency = [set() for _ in range(n)]
    for i, j in graph.edges:
        adjacency[i].add(j)
        adjacency[j].add(i)
    weight = [0] * n
    picked = [False] * n
    selection = []
    for _ in range(n):
        best = -1
        for v in range(n):
            if not picked[v] and (best < 0 or weight[v] > weight[best]):
                best = v
        picked[best] = True
        selection.append(best)
        for u in adjacency[best]:
            if not picked[u]:
                weight[u] += 1
    peo = list(reversed(selection))
    position = {v: i for i, v in enumerate(peo)}
    for i, v in enumerate(peo):
        later = [u for u in adjacency[v] if position[u] > i]
        if not later:
            continue
        anchor = min(later, key=position.get)
        for u in later:
            if u != anchor and u not in adjacency[anchor]:
                return None
    return peo


def is_chordal(graph: SupportGraph) -> bool:
    return _mcs_peo(graph) is not None


def chordal_max_cliques(graph: SupportGraph) -> CliqueFamily:
    """The maximal cliques of a chordal graph, at most n of them.

    Extracted along a perfect elimination ordering: each vertex together
    with its later neighbors is a clique, and every maximal clique arises
    this way.
    """
    peo = _mcs_peo(graph)
    if peo is None:
        raise NotChordal("graph has no perfect elimination ordering")
    adjacency = [set() for _ in range(graph.n)]
    for i, j in graph.edges:
        adjacency[i].add(j)
        adjacency[j].add(i)
    position = {v: i for i, v in enumerate(peo)}
    candidates = []
    for i, v in enumerate(peo):
        candidates.append(frozenset([v] + [u for u in adjacency[v] if position[u] > i]))
    maximal = []
    for c in sorted(set(candidates), key=len, reverse=True):
        if not any(c < kept for kept in maximal):
            maximal.append(c)
    return CliqueFamily.from_sets(graph.n, maximal)


@dataclass(frozen=True)
class ForestDecomposition:
    """Closed-form decomposition over edge and loop generators.

    Every support edge carries its matrix entry as weight; vertex i keeps
    the leftover slack on its loop. All loop slacks are listed, zeros
    included.
    """

    n: int
    edge_weights: dict  # {(i, j): weight} over support edges, i < j
    loop_weights: dict  # {i: slack} for every vertex

    def to_certificate(self) -> DecompositionCertificate:
        weights = {}
        for (i, j), w in self.edge_weights.items():
            if w > 0:
                weights[(1 << i) | (1 << j)] = w
        for i, w in self.loop_weights.items():
            if w > 0:
                weights[1 << i] = w
        return DecompositionCertificate.from_weights(self.n, "boolean", weights)


@dataclass(frozen=True)
class DecompositionFailure:
    """First vertex whose diagonal cannot absorb its incident edge weights."""

    vertex: int
    slack: Fraction


def forest_decompose(gamma: RationalMatrix):
    """Decompose over 1- and 2-support generators when the support is a forest.

    Succeeds iff every vertex slack (diagonal minus incident edge weights)
    is nonnegative; the first offending vertex is reported otherwise.
    """
    graph = support_graph(gamma)
    if not is_forest(graph):
        raise NotForest("support graph contains a cycle")
    edge_weights = {(i, j): gamma[i, j] for i, j in sorted(graph.edges)}
    loop_weights = {}
    for i in range(gamma.n):
        slack = gamma[i, i]
        for j in graph.neighbors(i):
            slack -= gamma[i, j]
        if slack < 0:
            return DecompositionFailure(i, slack)
        loop_weights[i] = slack
    return ForestDecomposition(gamma.n, edge_weights, loop_weights)


def support_clique_family(gamma: RationalMatrix) -> CliqueFamily:
    """Every loop-carrying clique of the support graph.

    These are exactly the supports that can hold positive weight in a
    boolean decomposition of gamma.
    """
    ids = admissible_generators(gamma, "boolean")
    return CliqueFamily.from_sets(gamma.n, (support(k, gamma.n) for k in ids))


def expand_bags(gamma: RationalMatrix, bags) -> CliqueFamily:
    """Clique family from decomposition bags: all non-empty subsets of each
    bag that are loop-carrying support cliques, deduplicated."""
    graph = support_graph(gamma)
    found = set()
    for bag in bags:
        members = sorted({int(v) for v in bag})
        if members and (members[0] < 0 or members[-1] >= gamma.n):
            raise Error(f"bag {members} leaves the vertex range 0..{gamma.n - 1}")
        count = len(members)
        for mask in range(1, 1 << count):
            subset = [members[i] for i in range(count) if (mask >> i) & 1]
            if all(v in graph.loops for v in subset) and all(
                graph.has_edge(a, b) for a, b in _pairs(subset)
            ):
                found.add(tuple(subset))
    return CliqueFamily.from_sets(gamma.n, found)


def _pairs(items):
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            yield items[i], items[j]


def _clique_column(clique, pairs):
    members = set(clique)
    return [
        Fraction(1) if i in members and j in members else Fraction(0) for i, j in pairs
    ]


def _check_coverage(gamma, family: CliqueFamily):
    masks = [clique_id(c) for c in family]
    for i in range(gamma.n):
        for j in range(i, gamma.n):
            if gamma[i, j] > 0:
                want = (1 << i) | (1 << j)
                if not any(mask & want == want for mask in masks):
                    raise UncoveredEntry(f"positive entry at ({i},{j}) lies in no clique")


def _clique_system(gamma, family: CliqueFamily, objective=False):
    pairs = entry_pairs(gamma.n)
    columns = [_clique_column(c, pairs) for c in family]
    a = [[col[r] for col in columns] for r in range(len(pairs))]
    b = [gamma[i, j] for i, j in pairs]
    c = [Fraction(1)] * len(family) if objective else None
    return LinearSystem(a, b, c, num_cols=len(family))


def clique_lp_solve(gamma: RationalMatrix, family: CliqueFamily, mode: str = "membership"):
    """Cone membership or relaxed rank over clique-indexed weight variables.

    Certificates come back as generator weights: clique C maps to the id
    whose support is C. Cliques that contain a pair with a zero entry are
    harmless; their weight is forced to zero by that entry's equation.
    """
    if gamma.n != family.n:
        raise Error(f"matrix is {gamma.n}x{gamma.n} but cliques are over {family.n} vertices")
    _check_coverage(gamma, family)
    if mode == "membership":
        outcome = lp_feasible(_clique_system(gamma, family))
        if outcome.status != "feasible":
            return MembershipResult(False, None, "lp-infeasible", ())
        weights = {
            clique_id(c): w for c, w in zip(family, outcome.witness) if w > 0
        }
        certificate = DecompositionCertificate.from_weights(gamma.n, "boolean", weights)
        return MembershipResult(True, certificate, None, ())
    if mode == "relaxed-rank":
        outcome = lp_minimize(_clique_system(gamma, family, objective=True))
        if outcome.status != "optimal":
            return RelaxedRankResult("not-member")
        weights = {
            clique_id(c): w for c, w in zip(family, outcome.witness) if w > 0
        }
        certificate = DecompositionCertificate.from_weights(gamma.n, "boolean", weights)
        return RelaxedRankResult("answered", outcome.value, certificate)
    raise Error(f"unknown mode {mode!r}")


def clique_rank(gamma: RationalMatrix, family: CliqueFamily, q: int) -> RankResult:
    """Rank decision restricted to clique-indexed variables.

    Identical machinery to the unrestricted rank search, with the candidate
    columns limited to the supplied cliques. With the family equal to all
    loop-carrying support cliques this agrees with the general decider.
    """
    if q < 0:
        raise Error(f"threshold must be nonnegative, got {q}")
    membership = clique_lp_solve(gamma, family, "membership")
    if not membership.member:
        return RankResult("not-member")
    pairs = entry_pairs(gamma.n)
    bvec = [gamma[i, j] for i, j in pairs]
    columns = [(clique_id(c), _clique_column(c, pairs)) for c in family]
    weights = search_min_support(bvec, columns, q)
    if weights is None:
        return RankResult("answered", None, None, False)
    certificate = DecompositionCertificate.from_weights(gamma.n, "boolean", weights)
    return RankResult("answered", None, certificate, True)


def clique_separation_dual(gamma: RationalMatrix, y: RationalMatrix):
    """A support clique whose dual constraint the matrix y violates, or None.

    The dual of the clique-weight LP bounds, for every clique C, the sum of
    y over the entry pairs (i, j) with i <= j inside C by 1. Cliques are
    scanned in ascending generator-id order; diagonal pairs are included in
    the sums.
    """
    if not check_symmetric(y):
        raise AsymmetricInput("dual separation needs a symmetric matrix")
    if y.n != gamma.n:
        raise Error(f"matrix is {gamma.n}x{gamma.n} but y is {y.n}x{y.n}")
    for clique in support_clique_family(gamma):
        total = Fraction(0)
        for a in range(len(clique)):
            for b in range(a, len(clique)):
                total += y[clique[a], clique[b]]
        if total > 1:
            return clique
    return None
