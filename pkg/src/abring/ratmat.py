"""Exact dense matrices over the rationals.

Scalars are :class:`fractions.Fraction`, which is always stored in lowest
terms with a positive denominator.  Matrices are immutable.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

Rational = Fraction


class DimensionError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(q: Fraction) -> str:
    """``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


class RatMatrix:
    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        data = tuple(to_rational(x) for x in entries)
        if rows < 0 or cols < 0 or len(data) != rows * cols:
            raise DimensionError(
                f"{len(data)} entries do not fill a {rows}x{cols} matrix")
        self.rows = rows
        self.cols = cols
        self._data = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, [int(i == j) for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence) -> "RatMatrix":
        n = len(values)
        return cls(n, n, [values[i] if i == j else 0
                          for i in range(n) for j in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self._data[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return self._data[j::self.cols] if self.cols else ()

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_strings(self) -> list[list[str]]:
        return [[format_rational(x) for x in self.row(i)] for i in range(self.rows)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        return mat_mul(self, other)

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(x) for x in self.row(i))
                         for i in range(self.rows))
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"


def mat_mul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    bcols = [b.col(j) for j in range(b.cols)]
    out = []
    for i in range(a.rows):
        r = a.row(i)
        for c in bcols:
            out.append(sum((x * y for x, y in zip(r, c) if x and y), Fraction(0)))
    return RatMatrix(a.rows, b.cols, out)


def mat_vec(a: RatMatrix, v: Sequence) -> list[Fraction]:
    if len(v) != a.cols:
        raise DimensionError(f"vector of length {len(v)} against {a.shape}")
    v = [to_rational(x) for x in v]
    return [sum((x * y for x, y in zip(a.row(i), v) if x and y), Fraction(0))
            for i in range(a.rows)]


def _require_square(a: RatMatrix) -> None:
    if not a.is_square:
        raise DimensionError(f"matrix is not square: {a.shape}")


def _pivot_row(m: list[list[Fraction]], col: int, start: int) -> int | None:
    for r in range(start, len(m)):
        if m[r][col] != 0:
            return r
    return None


def mat_det(a: RatMatrix) -> Fraction:
    _require_square(a)
    m = a.tolist()
    n = a.rows
    det = Fraction(1)
    for k in range(n):
        p = _pivot_row(m, k, k)
        if p is None:
            return Fraction(0)
        if p != k:
            m[k], m[p] = m[p], m[k]
            det = -det
        pivot = m[k][k]
        det *= pivot
        for r in range(k + 1, n):
            factor = m[r][k] / pivot
            if factor:
                row_r, row_k = m[r], m[k]
                for c in range(k, n):
                    row_r[c] -= factor * row_k[c]
    return det


def _gauss_jordan(a: RatMatrix, rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    """Reduce ``[a | rhs]`` to ``[I | a^-1 rhs]`` and return the right block."""
    _require_square(a)
    n = a.rows
    m = [list(a.row(i)) + rhs[i] for i in range(n)]
    width = a.cols + (len(rhs[0]) if rhs else 0)
    for k in range(n):
        p = _pivot_row(m, k, k)
        if p is None:
            raise SingularMatrixError(f"matrix is singular (no pivot in column {k})")
        if p != k:
            m[k], m[p] = m[p], m[k]
        pivot = m[k][k]
        if pivot != 1:
            m[k] = [x / pivot for x in m[k]]
        row_k = m[k]
        for r in range(n):
            if r != k and m[r][k]:
                factor = m[r][k]
                row_r = m[r]
                for c in range(k, width):
                    if row_k[c]:
                        row_r[c] -= factor * row_k[c]
    return [row[n:] for row in m]


def mat_inverse(a: RatMatrix) -> RatMatrix:
    _require_square(a)
    n = a.rows
    if n == 0:
        return RatMatrix(0, 0, [])
    eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return RatMatrix.from_rows(_gauss_jordan(a, eye), cols=n)


def mat_solve(a: RatMatrix, v: Sequence) -> list[Fraction]:
    _require_square(a)
    if len(v) != a.rows:
        raise DimensionError(f"right-hand side of length {len(v)} against {a.shape}")
    if a.rows == 0:
        return []
    sol = _gauss_jordan(a, [[to_rational(x)] for x in v])
    return [r[0] for r in sol]


def nullspace(a: RatMatrix) -> list[list[Fraction]]:
    """Basis of ``{x : a x = 0}`` from the reduced row echelon form.

    One basis vector per free column, with a 1 in that column.
    """
    m = a.tolist()
    rows, cols = a.rows, a.cols
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = _pivot_row(m, c, r)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pivot = m[r][c]
        m[r] = [x / pivot for x in m[r]]
        for k in range(rows):
            if k != r and m[k][c]:
                factor = m[k][c]
                m[k] = [x - factor * y for x, y in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        vec = [Fraction(0)] * cols
        vec[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][free]
        basis.append(vec)
    return basis
