"""Exact arbitrary-precision integer matrix algebra.

Dense matrices over Z together with the primitives everything else in the
package is built on: fraction-free determinants, Hermite and Smith normal
forms with their unimodular transforms, integer linear system solving, and
lattice indices.  A brute-force coset counting oracle cross-checks the index
computations by closure enumeration in a finite quotient, deliberately
avoiding the elimination code paths it is meant to audit.

Convention used throughout the package: vectors are rows and matrices act on
the right, x -> x*m, so row i of a matrix is the image of the i-th basis
vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class DimensionError(ValueError):
    """Raised when matrix or vector shapes do not line up."""


class _Infinite:
    """Distinguished infinite index value; use the INFINITE singleton."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "infinity"


INFINITE = _Infinite()

# A lattice index is a positive integer or INFINITE.
IndexValue = "int | _Infinite"


def is_infinite(value) -> bool:
    return isinstance(value, _Infinite)


class Matrix:
    """Immutable dense integer matrix, row-major, at least 1x1."""

    __slots__ = ("entries", "rows", "cols", "_hash")

    def __init__(self, entries: Iterable[Iterable[int]]):
        grid = tuple(tuple(int(e) for e in row) for row in entries)
        if not grid or not grid[0]:
            raise DimensionError("matrix needs at least one row and column")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise DimensionError("ragged rows")
        self.entries = grid
        self.rows = len(grid)
        self.cols = width
        self._hash = hash(grid)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def block_diagonal(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        if not blocks:
            raise DimensionError("need at least one block")
        size = sum(b.rows for b in blocks)
        grid = [[0] * size for _ in range(size)]
        offset = 0
        for b in blocks:
            if b.rows != b.cols:
                raise DimensionError("blocks must be square")
            for i in range(b.rows):
                for j in range(b.cols):
                    grid[offset + i][offset + j] = b.entries[i][j]
            offset += b.rows
        return cls(grid)

    @classmethod
    def from_text(cls, text: str) -> "Matrix":
        """Parse the delimited matrix format: rows split by ';', entries by ','.

        Entries are decimal integers with optional sign; whitespace is
        ignored, e.g. "-3,1; 1,0".
        """
        rows = []
        for chunk in text.strip().split(";"):
            cells = chunk.split(",")
            try:
                rows.append([int(cell.strip()) for cell in cells])
            except ValueError as exc:
                raise ValueError(f"bad matrix entry in {chunk!r}") from exc
        if not rows or any(not row for row in rows):
            raise ValueError("empty matrix text")
        if any(len(row) != len(rows[0]) for row in rows):
            raise DimensionError("ragged rows in matrix text")
        return cls(rows)

    def to_text(self) -> str:
        return ";".join(",".join(str(e) for e in row) for row in self.entries)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.entries))

    def trace(self) -> int:
        if not self.is_square:
            raise DimensionError("trace needs a square matrix")
        return sum(self.entries[i][i] for i in range(self.rows))

    def delete_row_col(self, i: int, j: int) -> "Matrix":
        return Matrix(
            [
                [e for c, e in enumerate(row) if c != j]
                for r, row in enumerate(self.entries)
                if r != i
            ]
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Matrix({self.to_text()!r})"

    def __add__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch in addition")
        return Matrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch in subtraction")
        return Matrix(
            [
                [a - b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ]
        )

    def __neg__(self) -> "Matrix":
        return Matrix([[-e for e in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, int):
            return Matrix([[e * other for e in row] for row in self.entries])
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionError("shape mismatch in product")
            cols = other.transpose().entries
            return Matrix(
                [
                    [sum(a * b for a, b in zip(row, col)) for col in cols]
                    for row in self.entries
                ]
            )
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented


def vector_times_matrix(x: Sequence[int], m: Matrix) -> tuple:
    if len(x) != m.rows:
        raise DimensionError("vector length must match row count")
    return tuple(
        sum(x[i] * m.entries[i][j] for i in range(m.rows)) for j in range(m.cols)
    )


def _xgcd(a: int, b: int) -> tuple:
    """Extended gcd: returns (g, s, t) with g = s*a + t*b and g >= 0.

    When a divides b the answer is the elementary (|a|, +-1, 0): the gcd row
    and column transforms built from it then leave the pivot line untouched,
    which is what makes the normal-form clearing loops terminate.
    """
    if a != 0 and b % a == 0:
        return (a, 1, 0) if a > 0 else (-a, -1, 0)
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def determinant(m: Matrix) -> int:
    """Fraction-free Bareiss determinant.

    Exact over arbitrary-precision integers; the intermediate divisions are
    guaranteed exact by the Bareiss recurrence.
    """
    if not m.is_square:
        raise DimensionError("determinant needs a square matrix")
    n = m.rows
    a = [list(row) for row in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot_row is None:
                return 0
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def determinant_cofactor(m: Matrix) -> int:
    """Cofactor-expansion determinant, kept as an independent oracle.

    Exponential in the dimension, so it refuses anything above 8x8; the
    elimination-based `determinant` is the production route.
    """
    if not m.is_square:
        raise DimensionError("determinant needs a square matrix")
    if m.rows > 8:
        raise DimensionError("cofactor expansion limited to 8x8")

    def expand(grid):
        n = len(grid)
        if n == 1:
            return grid[0][0]
        total = 0
        sign = 1
        rest = grid[1:]
        for j in range(n):
            if grid[0][j]:
                minor = [row[:j] + row[j + 1 :] for row in rest]
                total += sign * grid[0][j] * expand(minor)
            sign = -sign
        return total

    return expand([list(row) for row in m.entries])


@dataclass(frozen=True)
class HermiteForm:
    """Row-style Hermite normal form h = u*m with u unimodular."""

    h: Matrix
    u: Matrix


def _apply_row_pair(grid, i, j, a, b, c, d):
    # rows i, j <- (a*row_i + b*row_j, c*row_i + d*row_j); caller keeps ad-bc = +-1
    ri, rj = grid[i], grid[j]
    grid[i] = [a * x + b * y for x, y in zip(ri, rj)]
    grid[j] = [c * x + d * y for x, y in zip(ri, rj)]


def hermite_form(m: Matrix) -> HermiteForm:
    """Row Hermite normal form via extended-gcd row transforms.

    Returns HermiteForm(h, u) with u*m = h, |det u| = 1, pivots positive and
    strictly right of earlier pivots, entries above each pivot reduced into
    [0, pivot).  Deterministic for a fixed input.
    """
    work = [list(row) for row in m.entries]
    u = [list(row) for row in Matrix.identity(m.rows).entries]
    pivot_row = 0
    for col in range(m.cols):
        if pivot_row >= m.rows:
            break
        for i in range(pivot_row + 1, m.rows):
            if work[i][col] == 0:
                continue
            a, b = work[pivot_row][col], work[i][col]
            g, s, t = _xgcd(a, b)
            # 2x2 unimodular transform sending (a, b) -> (g, 0)
            _apply_row_pair(work, pivot_row, i, s, t, -(b // g), a // g)
            _apply_row_pair(u, pivot_row, i, s, t, -(b // g), a // g)
        if work[pivot_row][col] == 0:
            continue
        if work[pivot_row][col] < 0:
            work[pivot_row] = [-x for x in work[pivot_row]]
            u[pivot_row] = [-x for x in u[pivot_row]]
        pivot = work[pivot_row][col]
        for i in range(pivot_row):
            q = work[i][col] // pivot
            if q:
                work[i] = [x - q * y for x, y in zip(work[i], work[pivot_row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[pivot_row])]
        pivot_row += 1
    return HermiteForm(Matrix(work), Matrix(u))


@dataclass(frozen=True)
class SmithForm:
    """Smith normal form d = u*m*v with u, v unimodular."""

    d: Matrix
    u: Matrix
    v: Matrix


def smith_form(m: Matrix) -> SmithForm:
    """Smith normal form with both transforms.

    Returns SmithForm(d, u, v) with u*m*v = d diagonal, entries nonnegative
    and each dividing the next.
    """
    work = [list(row) for row in m.entries]
    rows, cols = m.rows, m.cols
    u = [list(row) for row in Matrix.identity(rows).entries]
    v = [list(row) for row in Matrix.identity(cols).entries]

    def apply_col_pair(grid, i, j, a, b, c, d):
        for row in grid:
            x, y = row[i], row[j]
            row[i] = a * x + b * y
            row[j] = c * x + d * y

    def swap_rows(i, j):
        work[i], work[j] = work[j], work[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for grid in (work, v):
            for row in grid:
                row[i], row[j] = row[j], row[i]

    limit = min(rows, cols)
    for t in range(limit):
        pivot = next(
            (
                (i, j)
                for i in range(t, rows)
                for j in range(t, cols)
                if work[i][j] != 0
            ),
            None,
        )
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(t, pivot[0])
        if pivot[1] != t:
            swap_cols(t, pivot[1])
        while True:
            for i in range(t + 1, rows):
                if work[i][t] == 0:
                    continue
                a, b = work[t][t], work[i][t]
                g, s, c = _xgcd(a, b)
                _apply_row_pair(work, t, i, s, c, -(b // g), a // g)
                _apply_row_pair(u, t, i, s, c, -(b // g), a // g)
            for j in range(t + 1, cols):
                if work[t][j] == 0:
                    continue
                a, b = work[t][t], work[t][j]
                g, s, c = _xgcd(a, b)
                apply_col_pair(work, t, j, s, c, -(b // g), a // g)
                apply_col_pair(v, t, j, s, c, -(b // g), a // g)
            if all(work[i][t] == 0 for i in range(t + 1, rows)) and all(
                work[t][j] == 0 for j in range(t + 1, cols)
            ):
                break
        if work[t][t] < 0:
            work[t] = [-x for x in work[t]]
            u[t] = [-x for x in u[t]]

    # enforce the divisibility chain with local gcd/lcm steps
    changed = True
    while changed:
        changed = False
        for i in range(limit - 1):
            b, c = work[i][i], work[i + 1][i + 1]
            if b == 0 or c % b == 0:
                continue
            changed = True
            g, x, y = _xgcd(b, c)
            # rows (i, i+1) then columns (i, i+1); sends diag(b, c) to
            # diag(g, b*c/g) while keeping both transforms unimodular
            _apply_row_pair(work, i, i + 1, x, y, -(c // g), b // g)
            _apply_row_pair(u, i, i + 1, x, y, -(c // g), b // g)
            apply_col_pair(work, i, i + 1, 1, 1, -(y * c) // g, (x * b) // g)
            apply_col_pair(v, i, i + 1, 1, 1, -(y * c) // g, (x * b) // g)
            if work[i][i] < 0:
                work[i] = [-e for e in work[i]]
                u[i] = [-e for e in u[i]]
            if work[i + 1][i + 1] < 0:
                work[i + 1] = [-e for e in work[i + 1]]
                u[i + 1] = [-e for e in u[i + 1]]
    return SmithForm(Matrix(work), Matrix(u), Matrix(v))


def lattice_index(m: Matrix) -> "int | _Infinite":
    """Index of the row (equivalently column) span of m inside Z^n.

    |det m| for nonsingular m, INFINITE when det m = 0.
    """
    d = determinant(m)
    if d == 0:
        return INFINITE
    return abs(d)


def solve_integer(
    m: Matrix,
    b: Sequence[int],
    hermite: Optional[HermiteForm] = None,
):
    """Solve x*m = b over the integers.

    Returns (particular, kernel_basis) where particular is one integer
    solution and kernel_basis is a tuple of rows spanning {x : x*m = 0}, or
    None when no integer solution exists.  Pass a precomputed hermite_form(m)
    to amortize repeated solves against the same matrix.
    """
    b = tuple(int(e) for e in b)
    if len(b) != m.cols:
        raise DimensionError("right-hand side length must match column count")
    hf = hermite if hermite is not None else hermite_form(m)
    h, u = hf.h.entries, hf.u
    residual = list(b)
    y = [0] * m.rows
    pivot_rows = []
    for i, row in enumerate(h):
        j = next((c for c, e in enumerate(row) if e != 0), None)
        if j is not None:
            pivot_rows.append((i, j))
    for i, j in pivot_rows:
        value = residual[j]
        if value % h[i][j] != 0:
            return None
        y[i] = value // h[i][j]
        if y[i]:
            residual = [r - y[i] * e for r, e in zip(residual, h[i])]
    if any(residual):
        return None
    particular = tuple(
        sum(y[i] * u.entries[i][j] for i in range(m.rows)) for j in range(m.rows)
    )
    pivot_set = {i for i, _ in pivot_rows}
    kernel = tuple(u.entries[i] for i in range(m.rows) if i not in pivot_set)
    return particular, kernel


def coset_count_oracle(m: Matrix, bound: int = 64) -> int:
    """Count cosets of the span of m in Z^n by brute-force closure.

    Works inside (Z/2|det m|)^n: the subgroup generated by the reduced
    columns has index exactly [Z^n : span], because every elementary divisor
    of m divides 2|det m|.  Uses the cofactor determinant only to fix the
    modulus and never touches the normal-form code it is checking against.
    Refuses singular input and |det m| > bound.
    """
    if not m.is_square:
        raise DimensionError("coset counting needs a square matrix")
    det = determinant_cofactor(m)
    if det == 0:
        raise ValueError("span has infinite index; coset enumeration refused")
    if abs(det) > bound:
        raise ValueError(f"|det| = {abs(det)} exceeds the oracle bound {bound}")
    n = m.rows
    mod = 2 * abs(det)
    generators = [tuple(e % mod for e in m.column(j)) for j in range(n)]
    zero = (0,) * n
    seen = {zero}
    frontier = [zero]
    while frontier:
        base = frontier.pop()
        for gen in generators:
            nxt = tuple((x + g) % mod for x, g in zip(base, gen))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return mod**n // len(seen)


def abelian_twisted_equivalent(
    m: Matrix, u: Sequence[int], v: Sequence[int]
) -> bool:
    """Twisted-conjugacy test in Z^n: are u, v congruent modulo the span of m?

    m is the matrix of (endomorphism - identity); u ~ v iff v - u lies in the
    span of its rows, decided by solve_integer.
    """
    u = tuple(int(e) for e in u)
    v = tuple(int(e) for e in v)
    if not m.is_square:
        raise DimensionError("twisted equivalence needs a square matrix")
    if len(u) != m.rows or len(v) != m.rows:
        raise DimensionError("vector length must match the matrix dimension")
    diff = tuple(b - a for a, b in zip(u, v))
    return solve_integer(m, diff) is not None
