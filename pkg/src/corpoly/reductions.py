"""Instance transformations between source problems and hull questions.

Each map here is a polynomial-time construction that carries a source
instance (an exact-cover triple system, a fractional clique cover question,
or a matrix) to an equivalent hull membership / rank / relaxed-rank
instance. The module also ships brute-force solvers for the source problems
so the transformations can be tested end to end.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Optional, Union

from .exactnum import Error, ParseError, RationalMatrix, as_rational, parse_rational
from .simplexcore import LinearSystem, lp_minimize


class NotLinear(Error):
    """Some unordered pair of universe elements occurs in two triples."""

    def __init__(self, pair):
        self.pair = tuple(pair)
        super().__init__(
            f"pair {{{self.pair[0]}, {self.pair[1]}}} occurs in more than one triple"
        )


class BadUniverseSize(Error):
    pass


class InvalidTriple(Error):
    pass


class InvalidEdge(Error):
    pass


class NonPositiveBudget(Error):
    pass


class NonUnitDiagonal(Error):
    pass


@dataclass(frozen=True)
class X3CInstance:
    """Exact cover by 3-sets over {1..3q}, with the linearity restriction
    that every unordered pair of elements lies in at most one triple."""

    universe_size: int
    triples: tuple

    def __post_init__(self):
        size = self.universe_size
        if size < 3 or size % 3 != 0:
            raise BadUniverseSize(f"universe size must be a positive multiple of 3, got {size}")
        norm = []
        for raw in self.triples:
            triple = tuple(sorted({int(e) for e in raw}))
            if len(triple) != 3:
                raise InvalidTriple(f"triple {tuple(raw)!r} must have exactly 3 distinct elements")
            if triple[0] < 1 or triple[-1] > size:
                raise InvalidTriple(f"triple {triple!r} leaves the universe 1..{size}")
            norm.append(triple)
        seen = set()
        for triple in norm:
            for pair in combinations(triple, 2):
                if pair in seen:
                    raise NotLinear(pair)
                seen.add(pair)
        object.__setattr__(self, "triples", tuple(norm))

    @property
    def q(self) -> int:
        return self.universe_size // 3


@dataclass(frozen=True)
class FCCInstance:
    """Fractional clique cover question: weight cliques of a simple graph so
    every vertex carries total weight exactly 1, within a budget."""

    num_vertices: int
    edges: tuple  # (i, j) pairs, 0-based, i < j
    budget: Fraction

    def __post_init__(self):
        if self.num_vertices < 1:
            raise InvalidEdge("graph needs at least one vertex")
        budget = as_rational(self.budget)
        if budget <= 0:
            raise NonPositiveBudget(f"budget must be positive, got {budget}")
        object.__setattr__(self, "budget", budget)
        seen = set()
        norm = []
        for raw in self.edges:
            i, j = int(raw[0]), int(raw[1])
            if i == j:
                raise InvalidEdge(f"loop at vertex {i}")
            if not (0 <= i < self.num_vertices and 0 <= j < self.num_vertices):
                raise InvalidEdge(f"edge ({i}, {j}) leaves the vertex range")
            edge = (min(i, j), max(i, j))
            if edge in seen:
                raise InvalidEdge(f"duplicate edge {edge}")
            seen.add(edge)
            norm.append(edge)
        object.__setattr__(self, "edges", tuple(sorted(norm)))


@dataclass(frozen=True)
class ReducedInstance:
    """A transformed instance: target matrix, hull family, optional threshold,
    and a record of where it came from."""

    matrix: RationalMatrix
    family: str
    threshold: Optional[Union[int, Fraction]] = None
    provenance: Mapping = field(default_factory=dict)


def lift_cor_to_conx(z: RationalMatrix) -> RationalMatrix:
    """Border a matrix with its own diagonal and a unit corner.

    The result is one dimension larger, with last row and column equal to
    the diagonal of ``z`` and a 1 in the corner. Polytope membership of
    ``z`` and cone membership of the lift coincide, and ranks transfer
    exactly.
    """
    n = z.n
    rows = [list(z.row(i)) + [z[i, i]] for i in range(n)]
    rows.append([z[i, i] for i in range(n)] + [Fraction(1)])
    return RationalMatrix(rows)


def lift_to_normalized(gamma: RationalMatrix) -> RationalMatrix:
    """Bordered matrix with the unit corner first: corner 1, then the
    diagonal along the borders, then the original block.

    The fixed 1 keeps the image away from the zero matrix, so polytope
    membership of ``gamma`` matches membership of the lift in the
    zero-vertex-free polytope one dimension up.
    """
    n = gamma.n
    rows = [[Fraction(1)] + [gamma[i, i] for i in range(n)]]
    for i in range(n):
        rows.append([gamma[i, i]] + list(gamma.row(i)))
    return RationalMatrix(rows)


def cor_to_cut(x: RationalMatrix) -> RationalMatrix:
    """Affine isomorphism onto unit-diagonal sign matrices, one size up.

    With rows and columns indexed 0..n, the image has Y00 = 1,
    Y0i = 2 Xii - 1, and Yij = 4 Xij - 2 Xii - 2 Xjj + 1 for i < j; the
    diagonal is identically 1, as for any outer product of a sign vector.
    """
    n = x.n
    out = [[Fraction(1)] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        v = 2 * x[i, i] - 1
        out[0][i + 1] = v
        out[i + 1][0] = v
    for i in range(n):
        for j in range(i + 1, n):
            v = 4 * x[i, j] - 2 * x[i, i] - 2 * x[j, j] + 1
            out[i + 1][j + 1] = v
            out[j + 1][i + 1] = v
    return RationalMatrix(out)


def cut_to_cor(y: RationalMatrix) -> RationalMatrix:
    """Inverse of :func:`cor_to_cut`: Xij = (1 + Y0i + Y0j + Yij) / 4."""
    m = y.n
    if m < 2:
        raise NonUnitDiagonal("need at least a 2x2 unit-diagonal matrix")
    for i in range(m):
        if y[i, i] != 1:
            raise NonUnitDiagonal(f"diagonal entry ({i},{i}) = {y[i, i]}, expected 1")
    n = m - 1
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = (1 + y[0, i + 1] + y[0, j + 1] + y[i + 1, j + 1]) / 4
            out[i][j] = v
            out[j][i] = v
    return RationalMatrix(out)


def x3c_to_rank_instance(instance: X3CInstance) -> ReducedInstance:
    """Cone rank instance encoding an exact-cover question.

    Universe element e becomes matrix index e - 1; the extra last index is
    tied to every element with weight 1 and carries q on the diagonal. Pairs
    inside a common triple get 1, all other off-diagonal element pairs 0.
    The cover exists iff the matrix decomposes with at most q generators.
    """
    size = instance.universe_size
    q = instance.q
    n = size + 1
    grid = [[Fraction(0)] * n for _ in range(n)]
    for i in range(size):
        grid[i][i] = Fraction(1)
        grid[i][n - 1] = Fraction(1)
        grid[n - 1][i] = Fraction(1)
    grid[n - 1][n - 1] = Fraction(q)
    for triple in instance.triples:
        for a, b in combinations(triple, 2):
            grid[a - 1][b - 1] = Fraction(1)
            grid[b - 1][a - 1] = Fraction(1)
    matrix = RationalMatrix(grid)
    provenance = {
        "map": "x3c-to-conx-rank",
        "universe_size": size,
        "num_triples": len(instance.triples),
        "source": instance,
    }
    return ReducedInstance(matrix, "conx", q, provenance)


def fcc_to_relaxed_rank_instance(instance: FCCInstance) -> ReducedInstance:
    """Cone relaxed-rank instance encoding a clique cover budget question.

    With n = |V| + 1: vertex diagonals are 1/n, graph edges and the last
    column are 1/n^2, the corner is t/n^2, and the threshold is
    (3 n^2 - n + 4 t) / (2 n^2). The budget is met iff the relaxed rank of
    the matrix stays within the threshold.
    """
    v = instance.num_vertices
    t = instance.budget
    n = v + 1
    nn = Fraction(n * n)
    grid = [[Fraction(0)] * n for _ in range(n)]
    for i in range(v):
        grid[i][i] = Fraction(1, n)
        grid[i][n - 1] = 1 / nn
        grid[n - 1][i] = 1 / nn
    for i, j in instance.edges:
        grid[i][j] = 1 / nn
        grid[j][i] = 1 / nn
    grid[n - 1][n - 1] = t / nn
    threshold = (3 * n * n - n + 4 * t) / (2 * n * n)
    matrix = RationalMatrix(grid)
    provenance = {
        "map": "fcc-to-conx-relaxed-rank",
        "num_vertices": v,
        "num_edges": len(instance.edges),
        "budget": t,
        "source": instance,
    }
    return ReducedInstance(matrix, "conx", threshold, provenance)


def solve_x3c(instance: X3CInstance) -> bool:
    """Exhaustive search for an exact cover by q of the triples."""
    q = instance.q
    size = instance.universe_size
    for combo in combinations(instance.triples, q):
        covered = set()
        for triple in combo:
            covered.update(triple)
        if len(covered) == size:
            return True
    return False


def _cliques_of(num_vertices, edges):
    adjacency = [0] * num_vertices
    for i, j in edges:
        adjacency[i] |= 1 << j
        adjacency[j] |= 1 << i
    cliques = []
    for mask in range(1, 1 << num_vertices):
        rest = mask
        ok = True
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            if (mask ^ low) & ~adjacency[i]:
                ok = False
                break
            rest ^= low
        if ok:
            cliques.append(mask)
    return cliques


def solve_fcc(instance: FCCInstance):
    """Exact optimum of the clique cover LP over every clique of the graph.

    Enumerates all cliques outright (exponential, fine at desk scale) and
    minimizes total weight subject to each vertex carrying weight exactly 1.
    Returns (optimum <= budget, optimum); singleton cliques keep the LP
    feasible for every simple graph.
    """
    v = instance.num_vertices
    cliques = _cliques_of(v, instance.edges)
    a = [
        [Fraction(1) if (mask >> vertex) & 1 else Fraction(0) for mask in cliques]
        for vertex in range(v)
    ]
    b = [Fraction(1)] * v
    c = [Fraction(1)] * len(cliques)
    outcome = lp_minimize(LinearSystem(a, b, c, num_cols=len(cliques)))
    if outcome.status != "optimal":
        raise AssertionError("the singleton cliques always give a feasible cover")
    return outcome.value <= instance.budget, outcome.value


# ---------------------------------------------------------------------------
# file formats

def parse_x3c(text: str) -> X3CInstance:
    """Parse 'size m' followed by m lines of three elements each."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty triple-system file", line=1)
    head = lines[0].split()
    if len(head) != 2 or not all(re.fullmatch(r"\d+", tok) for tok in head):
        raise ParseError("expected 'universe_size num_triples'", line=1)
    size, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise ParseError(f"expected {m} triple lines, found {len(lines) - 1}", line=len(lines))
    triples = []
    for r in range(m):
        tokens = lines[r + 1].split()
        if len(tokens) != 3 or not all(re.fullmatch(r"\d+", tok) for tok in tokens):
            raise ParseError("expected three elements", line=r + 2)
        triples.append(tuple(int(tok) for tok in tokens))
    return X3CInstance(size, tuple(triples))


def format_x3c(instance: X3CInstance) -> str:
    lines = [f"{instance.universe_size} {len(instance.triples)}"]
    lines.extend(" ".join(str(e) for e in triple) for triple in instance.triples)
    return "\n".join(lines) + "\n"


def parse_fcc(text: str) -> FCCInstance:
    """Parse 'num_vertices num_edges budget' followed by the edge lines.

    Vertices are 1-based in the file and 0-based in the instance.
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty graph file", line=1)
    head = lines[0].split()
    if len(head) != 3 or not all(re.fullmatch(r"\d+", tok) for tok in head[:2]):
        raise ParseError("expected 'num_vertices num_edges budget'", line=1)
    v, e = int(head[0]), int(head[1])
    try:
        budget = parse_rational(head[2])
    except ParseError:
        raise ParseError(f"malformed budget {head[2]!r}", line=1, column=3) from None
    if len(lines) - 1 != e:
        raise ParseError(f"expected {e} edge lines, found {len(lines) - 1}", line=len(lines))
    edges = []
    for r in range(e):
        tokens = lines[r + 1].split()
        if len(tokens) != 2 or not all(re.fullmatch(r"\d+", tok) for tok in tokens):
            raise ParseError("expected two vertex numbers", line=r + 2)
        i, j = int(tokens[0]), int(tokens[1])
        if i < 1 or j < 1:
            raise ParseError("vertices are numbered from 1", line=r + 2)
        edges.append((i - 1, j - 1))
    return FCCInstance(v, tuple(edges), budget)


def format_fcc(instance: FCCInstance) -> str:
    lines = [f"{instance.num_vertices} {len(instance.edges)} {instance.budget}"]
    lines.extend(f"{i + 1} {j + 1}" for i, j in instance.edges)
    return "\n".join(lines) + "\n"


def format_threshold(value) -> str:
    return f"threshold = {as_rational(value)}\n"


def parse_threshold(text: str) -> Fraction:
    match = re.fullmatch(r"threshold = (\S+)\s*", text)
    if not match:
        raise ParseError("expected 'threshold = <rational>'", line=1)
    return parse_rational(match.group(1))
