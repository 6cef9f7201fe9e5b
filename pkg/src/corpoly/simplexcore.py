"""Exact two-phase primal simplex for systems A p = b, p >= 0.

The solver works on equality form only; callers add explicit slack columns
if they have inequalities. Pivoting follows Bland's rule (entering column:
smallest index with negative reduced cost; leaving row: smallest ratio,
ties broken by smallest basic variable index), which makes every solve
deterministic and guarantees termination without any tolerance.

The only presolve is dropping identically-zero rows: with a zero right-hand
side they are vacuous, with a nonzero one the system is immediately
infeasible. Everything else, including redundant rows, is left to phase one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactnum import Error, as_rational


class DimensionMismatch(Error):
    """Row, column, or objective lengths disagree."""


class LinearSystem:
    """Equality-form system A p = b with p >= 0 and an optional objective c."""

    __slots__ = ("a", "b", "c", "num_cols")

    def __init__(self, a, b, c=None, num_cols=None):
        self.a = tuple(tuple(as_rational(x) for x in row) for row in a)
        self.b = tuple(as_rational(x) for x in b)
        if len(self.a) != len(self.b):
            raise DimensionMismatch(f"{len(self.a)} rows but {len(self.b)} right-hand sides")
        widths = {len(row) for row in self.a}
        if len(widths) > 1:
            raise DimensionMismatch("ragged constraint matrix")
        v = widths.pop() if widths else None
        if c is not None:
            self.c = tuple(as_rational(x) for x in c)
            if v is not None and len(self.c) != v:
                raise DimensionMismatch(f"objective length {len(self.c)} but {v} columns")
            if v is None:
                v = len(self.c)
        else:
            self.c = None
        if v is None:
            v = num_cols
        if v is None:
            raise DimensionMismatch("column count cannot be inferred from an empty system")
        if num_cols is not None and num_cols != v:
            raise DimensionMismatch(f"declared {num_cols} columns but rows have {v}")
        self.num_cols = v

    @property
    def num_rows(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class LpOutcome:
    """Solve result; the witness is always a basic solution (at most one
    nonzero per remaining row)."""

    status: str  # feasible | infeasible | optimal | unbounded
    witness: Optional[tuple] = None
    value: Optional[Fraction] = None
    basis: tuple = ()


_ZERO = Fraction(0)
_ONE = Fraction(1)


def _pivot(rows, cost, basis, r, c):
    prow = rows[r]
    piv = prow[c]
    if piv != 1:
        prow = [x / piv for x in prow]
        rows[r] = prow
    for i in range(len(rows)):
        if i == r:
            continue
        f = rows[i][c]
        if f:
            row = rows[i]
            rows[i] = [a - f * p for a, p in zip(row, prow)]
    f = cost[c]
    if f:
        cost[:] = [a - f * p for a, p in zip(cost, prow)]
    basis[r] = c


def _bland_minimize(rows, cost, basis, ncols):
    """Run simplex iterations until optimal or unbounded."""
    while True:
        enter = -1
        for j in range(ncols):
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            return "optimal"
        leave = -1
        best_ratio = None
        best_var = None
        for i, row in enumerate(rows):
            coeff = row[enter]
            if coeff > 0:
                ratio = row[-1] / coeff
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < best_var)
                ):
                    best_ratio = ratio
                    best_var = basis[i]
                    leave = i
        if leave < 0:
            return "unbounded"
        _pivot(rows, cost, basis, leave, enter)


def _presolve(system: LinearSystem):
    """Drop zero rows; None signals immediate infeasibility."""
    kept = []
    for arow, rhs in zip(system.a, system.b):
        if all(x == 0 for x in arow):
            if rhs != 0:
                return None
            continue
        if rhs < 0:
            kept.append(([-x for x in arow], -rhs))
        else:
            kept.append((list(arow), rhs))
    return kept


def _phase1(pairs, v):
    """Find a basic feasible solution with artificial variables.

    Returns (rows, basis) on the structural columns only, with redundant
    rows dropped, or None if the phase-one optimum is positive.
    """
    m = len(pairs)
    rows = []
    for i, (arow, rhs) in enumerate(pairs):
        art = [_ZERO] * m
        art[i] = _ONE
        rows.append(arow + art + [rhs])
    basis = [v + i for i in range(m)]
    total = v + m
    cost = [_ZERO] * (total + 1)
    for j in range(v, total):
        cost[j] = _ONE
    for row in rows:
        cost[:] = [a - b for a, b in zip(cost, row)]
    status = _bland_minimize(rows, cost, basis, total)
    assert status == "optimal"  # the artificial sum is bounded below by zero
    if cost[-1] != 0:  # phase-one objective is -cost[-1] > 0
        return None
    i = 0
    while i < len(rows):
        if basis[i] >= v:
            enter = -1
            for j in range(v):
                if rows[i][j] != 0:
                    enter = j
                    break
            if enter >= 0:
                # rhs is zero here, so this degenerate pivot keeps feasibility
                _pivot(rows, cost, basis, i, enter)
                i += 1
            else:
                del rows[i]
                del basis[i]
        else:
            i += 1
    rows = [row[:v] + [row[-1]] for row in rows]
    return rows, basis


def _witness(rows, basis, v):
    p = [_ZERO] * v
    for i, row in enumerate(rows):
        p[basis[i]] = row[-1]
    return tuple(p)


def lp_feasible(system: LinearSystem) -> LpOutcome:
    """Phase-one simplex: a basic feasible witness, or infeasibility."""
    pairs = _presolve(system)
    if pairs is None:
        return LpOutcome("infeasible")
    solved = _phase1(pairs, system.num_cols)
    if solved is None:
        return LpOutcome("infeasible")
    rows, basis = solved
    return LpOutcome("feasible", _witness(rows, basis, system.num_cols), None, tuple(sorted(basis)))


def lp_minimize(system: LinearSystem) -> LpOutcome:
    """Two-phase simplex minimizing c . p; exact optimum with basic witness."""
    if system.c is None:
        raise DimensionMismatch("lp_minimize needs an objective")
    pairs = _presolve(system)
    if pairs is None:
        return LpOutcome("infeasible")
    solved = _phase1(pairs, system.num_cols)
    if solved is None:
        return LpOutcome("infeasible")
    rows, basis = solved
    v = system.num_cols
    cost = list(system.c) + [_ZERO]
    for i, row in enumerate(rows):
        f = cost[basis[i]]
        if f:
            cost[:] = [a - f * p for a, p in zip(cost, row)]
    status = _bland_minimize(rows, cost, basis, v)
    if status == "unbounded":
        return LpOutcome("unbounded")
    witness = _witness(rows, basis, v)
    return LpOutcome("optimal", witness, -cost[-1], tuple(sorted(basis)))
