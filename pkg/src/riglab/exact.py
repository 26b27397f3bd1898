"""Exact arithmetic over Q and Q(sqrt d), exact rank, and the real-matrix norms.

Entries of :class:`ExactMatrix` are :class:`QuadScalar` values ``a + b*sqrt(d)``
with rational ``a``, ``b`` and a square-free ``d``.  Rational scalars
(``b == 0``) mix freely with any extension; two genuinely irrational scalars
from different extensions are rejected.

Real matrices are plain float numpy arrays; the helpers at the bottom of the
module validate shape and finiteness and compute the standard quantities.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "QuadScalar",
    "ExactMatrix",
    "squarefree_split",
    "rank_exact",
    "weight_diff",
    "submatrix",
    "as_real",
    "frobenius_norm",
    "row_inner",
    "trace",
    "max_abs_entry",
    "numerical_rank",
    "read_matrix",
    "write_matrix",
    "format_matrix",
    "parse_matrix",
]


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(c, d)`` with ``n == c*c*d`` and ``d`` square-free."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 0
    c, d = 1, n
    p = 2
    while p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            c *= p
        p += 1
    return c, d


def _is_squarefree(d: int) -> bool:
    return d >= 0 and squarefree_split(d)[1] == d


class QuadScalar:
    """Element ``a + b*sqrt(d)`` of Q(sqrt d).

    ``d`` of 0 or 1 means a plain rational; the irrational part is folded
    into ``a`` and ``d`` is stored as 0.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 0):
        a = Fraction(a)
        b = Fraction(b)
        d = int(d)
        if not _is_squarefree(d):
            raise ValueError(f"extension parameter {d} is not square-free")
        if d == 1:
            a, b, d = a + b, Fraction(0), 0
        elif d == 0:
            b = Fraction(0)
        if b == 0:
            d = 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadScalar is immutable")

    @classmethod
    def sqrt(cls, n: int) -> "QuadScalar":
        """sqrt(n) for a natural n, reduced so the radicand is square-free."""
        c, d = squarefree_split(int(n))
        if d <= 1:
            return cls(c * d if d else 0)
        return cls(0, c, d)

    @classmethod
    def coerce(cls, x) -> "QuadScalar":
        if isinstance(x, QuadScalar):
            return x
        if isinstance(x, (int, Fraction, np.integer)):
            return cls(int(x) if isinstance(x, np.integer) else x)
        if isinstance(x, float):
            if not math.isfinite(x):
                raise ValueError("non-finite scalar")
            return cls(Fraction(x))
        raise TypeError(f"cannot convert {type(x).__name__} to QuadScalar")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _common(self, other) -> tuple["QuadScalar", int]:
        other = QuadScalar.coerce(other)
        if self.d and other.d and self.d != other.d:
            raise ValueError(f"mixed extensions sqrt({self.d}) and sqrt({other.d})")
        return other, self.d or other.d

    def __add__(self, other):
        try:
            o, d = self._common(other)
        except TypeError:
            return NotImplemented
        return QuadScalar(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        try:
            o, d = self._common(other)
        except TypeError:
            return NotImplemented
        return QuadScalar(self.a - o.a, self.b - o.b, d)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        try:
            o, d = self._common(other)
        except TypeError:
            return NotImplemented
        return QuadScalar(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadScalar":
        return QuadScalar(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm ``a^2 - d*b^2``; zero only for the zero element."""
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "QuadScalar":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("QuadScalar division by zero")
        return QuadScalar(self.a / nrm, -self.b / nrm, self.d)

    def __truediv__(self, other):
        try:
            o, _ = self._common(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return QuadScalar.coerce(other) * self.inverse()

    def __eq__(self, other):
        try:
            o = QuadScalar.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == o.a and self.b == o.b and (self.b == 0 or self.d == o.d)

    def __hash__(self):
        return hash((self.a, self.b, self.d if self.b else 0))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __abs__(self):
        return self if float(self) >= 0 else -self

    def __repr__(self):
        if self.b == 0:
            return f"QuadScalar({self.a})"
        return f"QuadScalar({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        return format_scalar(self)


_TOKEN = re.compile(
    r"^(?P<a>[+-]?\d+(?:/\d+)?)(?:\+(?P<b>[+-]?\d+(?:/\d+)?)\*rt)?$"
)


def parse_scalar(token: str, d: int) -> QuadScalar:
    """Parse ``p``, ``p/q`` or ``p/q+r/s*rt`` where ``rt`` is sqrt(d)."""
    m = _TOKEN.match(token.strip())
    if m is None:
        raise ValueError(f"bad matrix token {token!r}")
    a = Fraction(m.group("a"))
    b = Fraction(m.group("b")) if m.group("b") else Fraction(0)
    if b and d <= 1:
        raise ValueError(f"token {token!r} uses rt but d = {d}")
    return QuadScalar(a, b, d if b else 0)


def _frac_token(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_scalar(x: QuadScalar) -> str:
    if x.b == 0:
        return _frac_token(x.a)
    a, b = x.a, x.b
    return (f"{a.numerator}/{a.denominator}+{b.numerator}/{b.denominator}*rt")


class ExactMatrix:
    """Dense immutable matrix over Q(sqrt d), stored row-major."""

    __slots__ = ("rows", "cols", "entries", "d")

    def __init__(self, rows: int, cols: int, entries: Iterable, d: int | None = None):
        entries = tuple(QuadScalar.coerce(x) for x in entries)
        if rows < 1 or cols < 1:
            raise ValueError("empty matrix")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        ds = {x.d for x in entries if x.d}
        if len(ds) > 1:
            raise ValueError(f"entries from mixed extensions {sorted(ds)}")
        found = ds.pop() if ds else 0
        if d is None:
            d = found
        elif d not in (0, 1) and not _is_squarefree(d):
            raise ValueError(f"extension parameter {d} is not square-free")
        elif found and found != d:
            raise ValueError(f"entries live in sqrt({found}) but matrix declares d={d}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "d", 0 if d == 1 else d)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], d: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("empty matrix")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), len(rows[0]), (x for r in rows for x in r), d)

    @classmethod
    def from_array(cls, arr) -> "ExactMatrix":
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls(arr.shape[0], arr.shape[1], (x.item() for x in arr.ravel()))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij) -> QuadScalar:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[QuadScalar, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list[QuadScalar]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows,
                           (self[i, j] for j in range(self.cols) for i in range(self.rows)),
                           self.d)

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def _check_same_shape(self, other: "ExactMatrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_shape(other)
        return ExactMatrix(self.rows, self.cols, (x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_shape(other)
        return ExactMatrix(self.rows, self.cols, (x - y for x, y in zip(self.entries, other.entries)))

    def scale(self, c) -> "ExactMatrix":
        c = QuadScalar.coerce(c)
        return ExactMatrix(self.rows, self.cols, (c * x for x in self.entries))

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                acc = QuadScalar(0)
                for k in range(self.cols):
                    if ri[k]:
                        acc = acc + ri[k] * other[k, j]
                out.append(acc)
        return ExactMatrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not any(self.entries)

    @property
    def is_rational(self) -> bool:
        return all(x.b == 0 for x in self.entries)

    def to_real(self) -> np.ndarray:
        return np.array([float(x) for x in self.entries], dtype=float).reshape(self.rows, self.cols)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols}, d={self.d})"


def _integer_rank(rows: list[list[int]]) -> int:
    """Bareiss fraction-free elimination on an integer matrix."""
    m = [r[:] for r in rows]
    nr, nc = len(m), len(m[0])
    rank, prev = 0, 1
    for c in range(nc):
        piv = next((i for i in range(rank, nr) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank]
        pc = p[c]
        for i in range(rank + 1, nr):
            row = m[i]
            f = row[c]
            # Bareiss: every entry is divisible by the previous pivot
            for k in range(c + 1, nc):
                row[k] = (pc * row[k] - f * p[k]) // prev
            row[c] = 0
        prev = pc
        rank += 1
        if rank == nr:
            break
    return rank


def _field_rank(rows: list[list[QuadScalar]]) -> int:
    m = [r[:] for r in rows]
    nr, nc = len(m), len(m[0])
    rank = 0
    for c in range(nc):
        piv = next((i for i in range(rank, nr) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][c].inverse()
        p = m[rank]
        for i in range(rank + 1, nr):
            f = m[i][c]
            if f:
                f = f * inv
                row = m[i]
                for k in range(c + 1, nc):
                    if p[k]:
                        row[k] = row[k] - f * p[k]
                row[c] = QuadScalar(0)
        rank += 1
        if rank == nr:
            break
    return rank


def integer_rank(arr) -> int:
    """Exact rank of an integer numpy array (or nested list)."""
    rows = [[int(x) for x in r] for r in np.asarray(arr).tolist()]
    if not rows or not rows[0]:
        raise ValueError("empty matrix")
    return _integer_rank(rows)


def rank_exact(M: ExactMatrix) -> int:
    """Exact rank by Gaussian elimination with first-nonzero pivoting.

    Rational matrices are scaled to integers and reduced fraction-free;
    matrices with irrational entries go through field elimination in Q(sqrt d).
    """
    if M.is_rational:
        rows = []
        for i in range(M.rows):
            r = [x.a for x in M.row(i)]
            lcm = math.lcm(*(x.denominator for x in r))
            rows.append([int(x * lcm) for x in r])
        return _integer_rank(rows)
    return _field_rank(M.tolist())


def weight_diff(M: ExactMatrix, N: ExactMatrix) -> int:
    """Number of positions where ``M`` and ``N`` differ."""
    M._check_same_shape(N)
    return sum(1 for x, y in zip(M.entries, N.entries) if x != y)


def _check_index_set(idx: Sequence[int], bound: int, what: str) -> list[int]:
    idx = [int(i) for i in idx]
    if not idx:
        raise ValueError(f"empty {what} set")
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate {what} index")
    bad = [i for i in idx if not 0 <= i < bound]
    if bad:
        raise IndexError(f"{what} index {bad[0]} out of range [0, {bound})")
    return idx


def submatrix(M: ExactMatrix, rowset: Sequence[int], colset: Sequence[int]) -> ExactMatrix:
    rows = _check_index_set(rowset, M.rows, "row")
    cols = _check_index_set(colset, M.cols, "column")
    return ExactMatrix(len(rows), len(cols), (M[i, j] for i in rows for j in cols), M.d)


# --- real matrices ---------------------------------------------------------

def as_real(M) -> np.ndarray:
    """Validate and return a 2-d finite float (or complex) array."""
    if isinstance(M, ExactMatrix):
        return M.to_real()
    if hasattr(M, "to_real"):
        return M.to_real()
    arr = np.asarray(M)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError("expected a non-empty 2-d matrix")
    if not np.iscomplexobj(arr):
        arr = arr.astype(float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def frobenius_norm(M) -> float:
    return float(np.sqrt(np.sum(np.abs(as_real(M)) ** 2)))


def row_inner(M, N, i: int):
    """Unnormalized inner product of row ``i`` of ``M`` with row ``i`` of ``N``."""
    M, N = as_real(M), as_real(N)
    if M.shape != N.shape:
        raise ValueError(f"shape mismatch {M.shape} vs {N.shape}")
    if not 0 <= i < M.shape[0]:
        raise IndexError(f"row {i} out of range")
    val = np.vdot(M[i], N[i])
    return float(val.real) if not np.iscomplexobj(val) or val.imag == 0 else complex(val)


def trace(M):
    M = as_real(M)
    if M.shape[0] != M.shape[1]:
        raise ValueError("trace of a non-square matrix")
    t = np.trace(M)
    return complex(t) if np.iscomplexobj(t) and t.imag != 0 else float(np.real(t))


def max_abs_entry(M) -> float:
    return float(np.max(np.abs(as_real(M))))


def numerical_rank(M, rtol: float = 1e-8) -> int:
    """Count singular values above ``rtol * sigma_max``."""
    s = np.linalg.svd(as_real(M), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


# --- text format -----------------------------------------------------------

def parse_matrix(text: str) -> ExactMatrix:
    """Parse the ``rows cols d`` header followed by whitespace-separated tokens."""
    tokens = text.split()
    if len(tokens) < 3:
        raise ValueError("missing matrix header")
    rows, cols, d = (int(t) for t in tokens[:3])
    body = tokens[3:]
    if len(body) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, found {len(body)}")
    if d > 1 and not _is_squarefree(d):
        raise ValueError(f"extension parameter {d} is not square-free")
    return ExactMatrix(rows, cols, (parse_scalar(t, d) for t in body), d)


def format_matrix(M: ExactMatrix) -> str:
    lines = [f"{M.rows} {M.cols} {M.d}"]
    for i in range(M.rows):
        lines.append(" ".join(format_scalar(x) for x in M.row(i)))
    return "\n".join(lines) + "\n"


def read_matrix(path) -> ExactMatrix:
    with open(path) as fh:
        return parse_matrix(fh.read())


def write_matrix(M: ExactMatrix, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(M))
