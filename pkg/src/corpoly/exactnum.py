"""Exact rational scalars, dense symmetric matrices, and membership screens.

Everything in this package is exact: entries are arbitrary-precision
rationals and no operation ever rounds. Positive semidefiniteness is decided
by iterated Schur complements, which stays inside the rationals where an
eigenvalue computation would not.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence


class Error(Exception):
    """Base class for every error raised by this package."""


class ParseError(Error):
    """Malformed input text; carries a 1-based line/column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            message = f"{where}: {message}"
        super().__init__(message)


class NonSquare(Error):
    """Row and column counts disagree."""


class AsymmetricInput(Error):
    """A symmetric matrix was required."""


# Accepted rational literals: an integer, or a quotient of integers with the
# sign (if any) on the numerator. Decimal and exponent notation is malformed
# on purpose; nothing in this package tolerates floating point.
_RATIONAL_RE = re.compile(r"-?\d+(/\d+)?")


def parse_rational(text: str) -> Fraction:
    """Parse ``a`` or ``a/b`` with b > 0 into an exact rational."""
    if not _RATIONAL_RE.fullmatch(text):
        raise ParseError(f"malformed rational {text!r} (expected 'a' or 'a/b')")
    num, _, den = text.partition("/")
    if not den:
        return Fraction(int(num))
    if int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den))


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction, or rational literal; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"exact rational required, got {type(value).__name__}")


class RationalMatrix:
    """Dense square matrix of exact rationals, immutable once built.

    Symmetry is checkable (:func:`check_symmetric`) but deliberately not
    enforced at construction: rejecting an asymmetric matrix with a
    diagnostic is part of the screens' contract.
    """

    __slots__ = ("_rows",)

    def __init__(self, rows: Sequence[Sequence]):
        converted = tuple(tuple(as_rational(v) for v in row) for row in rows)
        n = len(converted)
        if n == 0:
            raise NonSquare("a matrix needs at least one row")
        for row in converted:
            if len(row) != n:
                raise NonSquare(f"{n} rows but a row of length {len(row)}")
        self._rows = converted

    @classmethod
    def zeros(cls, n: int) -> "RationalMatrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self._rows)

    def rows(self):
        return self._rows

    def row(self, i):
        return self._rows[i]

    def __getitem__(self, key):
        i, j = key
        return self._rows[i][j]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        body = "; ".join(" ".join(str(v) for v in row) for row in self._rows)
        return f"RationalMatrix({self.n}x{self.n}: {body})"

    def __add__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if other.n != self.n:
            raise NonSquare("matrix sizes differ")
        return RationalMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self._rows, other._rows)]
        )

    def __sub__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if other.n != self.n:
            raise NonSquare("matrix sizes differ")
        return RationalMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self._rows, other._rows)]
        )

    def scale(self, factor) -> "RationalMatrix":
        f = as_rational(factor)
        return RationalMatrix([[f * v for v in row] for row in self._rows])

    def transpose(self) -> "RationalMatrix":
        n = self.n
        return RationalMatrix([[self._rows[j][i] for j in range(n)] for i in range(n)])

    def is_symmetric(self) -> bool:
        return first_asymmetry(self) is None


def first_asymmetry(m: RationalMatrix) -> Optional[tuple]:
    """First index pair (i, j), i < j, where the matrix differs from its transpose."""
    rows = m.rows()
    for i in range(m.n):
        for j in range(i + 1, m.n):
            if rows[i][j] != rows[j][i]:
                return (i, j)
    return None


def first_negative(m: RationalMatrix) -> Optional[tuple]:
    """First index pair, in row-major order, holding a negative entry."""
    for i, row in enumerate(m.rows()):
        for j, v in enumerate(row):
            if v < 0:
                return (i, j)
    return None


def check_symmetric(m: RationalMatrix) -> bool:
    """True iff the matrix equals its transpose, exactly."""
    return first_asymmetry(m) is None


@dataclass(frozen=True)
class PsdWitness:
    """Where the Schur elimination refuted positive semidefiniteness.

    ``index`` (and ``column``, for the zero-diagonal case) refer to positions
    in the original matrix, not the shrinking working copy.
    """

    step: int
    index: int
    kind: str  # "negative-pivot" or "zero-diagonal-nonzero-row"
    value: Fraction
    column: Optional[int] = None

    def describe(self) -> str:
        if self.kind == "negative-pivot":
            return f"negative pivot {self.value} at index {self.index} (step {self.step})"
        return (
            f"zero diagonal at index {self.index} with nonzero entry "
            f"{self.value} at column {self.column} (step {self.step})"
        )


def check_psd(m: RationalMatrix):
    """Exact PSD test by iterated Schur complements.

    Per elimination step: a negative pivot refutes; a zero pivot with a
    nonzero entry somewhere in its row refutes; a zero pivot with an all-zero
    row is dropped and elimination continues on the rest.

    Returns ``(flag, witness)`` where the witness records the refuting step.
    """
    if not check_symmetric(m):
        raise AsymmetricInput("positive semidefiniteness is only defined for symmetric matrices")
    work = [list(row) for row in m.rows()]
    labels = list(range(m.n))
    step = 0
    while work:
        size = len(work)
        pivot = work[0][0]
        if pivot < 0:
            return False, PsdWitness(step, labels[0], "negative-pivot", pivot)
        if pivot == 0:
            for j in range(1, size):
                if work[0][j] != 0:
                    return False, PsdWitness(
                        step, labels[0], "zero-diagonal-nonzero-row", work[0][j], labels[j]
                    )
            work = [row[1:] for row in work[1:]]
        else:
            head = work[0]
            work = [
                [work[i][j] - head[i] * head[j] / pivot for j in range(1, size)]
                for i in range(1, size)
            ]
        labels = labels[1:]
        step += 1
    return True, None


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the cheap necessary-condition screens.

    ``dnn`` is ``psd and nonnegative``; ``first_violation`` is the first
    failed condition in the order symmetric, nonnegative, psd, as a pair
    ``(condition name, detail)``.
    """

    symmetric: bool
    nonnegative: bool
    psd: bool
    dnn: bool
    first_violation: Optional[tuple] = None


def check_dnn(m: RationalMatrix) -> ConditionReport:
    """Report symmetry, nonnegativity, PSD, and DNN status for a matrix.

    Asymmetry is reported, not raised; PSD is recorded as false in that case
    since the Schur test presupposes symmetry.
    """
    asym = first_asymmetry(m)
    neg = first_negative(m)
    symmetric = asym is None
    nonnegative = neg is None
    if symmetric:
        psd, psd_witness = check_psd(m)
    else:
        psd, psd_witness = False, None
    first = None
    if not symmetric:
        first = ("symmetric", asym)
    elif not nonnegative:
        first = ("nonnegative", neg)
    elif not psd:
        first = ("psd", psd_witness)
    return ConditionReport(symmetric, nonnegative, psd, psd and nonnegative, first)


def parse_matrix(text: str) -> RationalMatrix:
    """Parse the matrix text format: a dimension line, then n rows of n rationals.

    Entries are ``a`` or ``a/b`` literals separated by whitespace. Anything
    else, including a wrong entry count or trailing garbage, is a
    :class:`ParseError` pointing at the offending line.
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty matrix file", line=1)
    head = lines[0].split()
    if len(head) != 1 or not re.fullmatch(r"\d+", head[0]):
        raise ParseError("expected the dimension alone on the first line", line=1)
    n = int(head[0])
    if n < 1:
        raise ParseError("dimension must be at least 1", line=1)
    if len(lines) - 1 < n:
        raise ParseError(f"expected {n} matrix rows, found {len(lines) - 1}", line=len(lines))
    if len(lines) - 1 > n:
        raise ParseError("unexpected extra content after the matrix", line=n + 2)
    rows = []
    for r in range(n):
        line_no = r + 2
        tokens = lines[r + 1].split()
        if len(tokens) != n:
            raise ParseError(f"expected {n} entries, found {len(tokens)}", line=line_no)
        row = []
        for c, token in enumerate(tokens):
            try:
                row.append(parse_rational(token))
            except ParseError:
                raise ParseError(
                    f"malformed rational {token!r}", line=line_no, column=c + 1
                ) from None
        rows.append(row)
    return RationalMatrix(rows)


def format_matrix(m: RationalMatrix) -> str:
    """Canonical text form; parses back to an equal matrix, byte for byte."""
    lines = [str(m.n)]
    lines.extend(" ".join(str(v) for v in row) for row in m.rows())
    return "\n".join(lines) + "\n"
