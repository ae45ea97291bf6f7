"""Exact linear algebra over the rationals.

Dense matrices of ``fractions.Fraction`` for the small objects (can/var maps,
module maps), plus a sparse fraction-free integer rank used for the large
differentials of the Ginzburg complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def rational_str(q: Fraction) -> str:
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"entries length {len(self.entries)} != {self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        flat = tuple(to_rational(x) for r in rows for x in r)
        return cls(len(rows), cols, flat)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def scale(self, c) -> "Matrix":
        c = to_rational(c)
        return Matrix(self.rows, self.cols, tuple(c * x for x in self.entries))

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        return Matrix(self.rows, self.cols,
                      tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return compose(self, other)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def to_json(self) -> list:
        return [[rational_str(x) for x in self.row(i)] for i in range(self.rows)]


def compose(a: Matrix, b: Matrix) -> Matrix:
    """Exact product a·b."""
    if a.cols != b.rows:
        raise ValueError(f"cannot compose {a.rows}x{a.cols} with {b.rows}x{b.cols}")
    out = []
    b_cols = [[b[k, j] for k in range(b.rows)] for j in range(b.cols)]
    for i in range(a.rows):
        ai = a.row(i)
        for col in b_cols:
            out.append(sum((x * y for x, y in zip(ai, col) if x and y), Fraction(0)))
    return Matrix(a.rows, b.cols, tuple(out))


def power(m: Matrix, e: int) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("power of a non-square matrix")
    out = Matrix.identity(m.rows)
    for _ in range(e):
        out = compose(out, m)
    return out


def block_diag(blocks: Iterable[Matrix]) -> Matrix:
    blocks = list(blocks)
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[Fraction(0)] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r0 + i][c0 + j] = b[i, j]
        r0 += b.rows
        c0 += b.cols
    return Matrix(rows, cols, tuple(x for r in out for x in r))


def rref(m: Matrix) -> tuple[list, list]:
    """Reduced row echelon form; returns (rows, pivot columns).

    Pivots are chosen as the leftmost nonzero column, scanning rows top-down,
    so the output is deterministic.
    """
    rows = [m.row(i) for i in range(m.rows)]
    pivots = []
    r = 0
    for c in range(m.cols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return sparse_rank(
        {j: v for j, v in enumerate(m.row(i)) if v} for i in range(m.rows)
    )


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of {x : m·x = 0}."""
    reduced, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    cols = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        cols.append(v)
    if not cols:
        return Matrix(m.cols, 0, ())
    return Matrix.from_rows([[c[i] for c in cols] for i in range(m.cols)], len(cols))


def _integer_row(row: dict) -> dict:
    den = 1
    for v in row.values():
        v = to_rational(v)
        den = den * v.denominator // gcd(den, v.denominator)
    return {k: int(to_rational(v) * den) for k, v in row.items() if v}


class IntegerEchelon:
    """Fraction-free sparse echelon basis over ℤ.

    Incoming rows are reduced against stored pivot rows by cross
    multiplication and stored primitive (content 1), so entries stay small
    and no rational arithmetic is needed.
    """

    def __init__(self):
        self.pivots: dict = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def rows(self) -> list:
        return list(self.pivots.values())

    def add(self, row: dict) -> bool:
        """Insert an integer row; True if it enlarged the span."""
        row = {k: v for k, v in row.items() if v}
        while row:
            c = min(row)
            prow = self.pivots.get(c)
            if prow is None:
                g = 0
                for v in row.values():
                    g = gcd(g, v)
                if g > 1:
                    row = {k: v // g for k, v in row.items()}
                self.pivots[c] = row
                return True
            p, x = prow[c], row[c]
            if p in (1, -1):
                f = x * p
                for k, v in prow.items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        del row[k]
            else:
                g = gcd(p, x)
                mp, mx = p // g, x // g
                new = {k: v * mp for k, v in row.items()}
                for k, v in prow.items():
                    nv = new.get(k, 0) - mx * v
                    if nv:
                        new[k] = nv
                    else:
                        new.pop(k, None)
                row = new
        return False


def sparse_rank(rows: Iterable[dict]) -> int:
    """Rank of a sparse matrix given as {column: value} rows (rationals allowed)."""
    space = IntegerEchelon()
    for row in rows:
        space.add(_integer_row(row))
    return len(space)


class EchelonSpace:
    """Incrementally grown subspace of ℚ^N with sparse reduced rows.

    Used where a spanning set arrives piecemeal and membership or
    complements are needed (relation ideals, minimal generators).
    """

    def __init__(self):
        self.pivots: dict = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: dict) -> dict:
        vec = {k: to_rational(v) for k, v in vec.items() if v}
        while vec:
            for c in sorted(vec):
                if c in self.pivots:
                    break
            else:
                return vec
            prow = self.pivots[c]
            f = vec[c]
            for k, v in prow.items():
                nv = vec.get(k, 0) - f * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
        return vec

    def add(self, vec: dict) -> bool:
        """Insert vec; returns True if it enlarged the space."""
        vec = self.reduce(vec)
        if not vec:
            return False
        c = min(vec)
        inv = 1 / vec[c]
        self.pivots[c] = {k: v * inv for k, v in vec.items()}
        return True
