"""Explicit matrix constructions: zero-outside embedding, diagonal shift, block structure."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bounds import BoundQuery, thm2_rigidity_bound, valiant_floor
from .exact import ExactMatrix, QuadScalar, _check_index_set, as_real
from .hadamard import SignMatrix, is_hadamard, is_symmetric, sylvester

__all__ = [
    "Perturbation",
    "zero_outside",
    "diagonal_shift",
    "BlockDecomposition",
    "block_decompose",
    "MidrijanisReport",
    "midrijanis_lower_report",
]


def _as_base(M) -> np.ndarray:
    if isinstance(M, SignMatrix):
        return M.data.astype(float)
    return as_real(M)


@dataclass(frozen=True)
class Perturbation:
    """Sparse list of entry replacements ``(row, col, new_value)`` on an ``n x n`` base.

    ``new_value`` is a :class:`QuadScalar` (exact) or a float.  The optional
    ``theta_cap`` bounds ``|new - old|`` and is checked whenever the
    perturbation is applied to a base matrix.
    """

    base_n: int
    changes: tuple
    theta_cap: float | None = None

    def __post_init__(self):
        changes = tuple(sorted((int(i), int(j), v) for i, j, v in self.changes))
        seen = set()
        for i, j, _ in changes:
            if not (0 <= i < self.base_n and 0 <= j < self.base_n):
                raise IndexError(f"change position ({i}, {j}) out of range for n={self.base_n}")
            if (i, j) in seen:
                raise ValueError(f"duplicate change position ({i}, {j})")
            seen.add((i, j))
        if self.theta_cap is not None and self.theta_cap < 0:
            raise ValueError("theta_cap must be non-negative")
        object.__setattr__(self, "changes", changes)

    @property
    def weight(self) -> int:
        return len(self.changes)

    @property
    def positions(self) -> frozenset:
        return frozenset((i, j) for i, j, _ in self.changes)

    def row_counts(self) -> np.ndarray:
        """Changes per row, i.e. the Hamming distance of each perturbed row."""
        counts = np.zeros(self.base_n, dtype=int)
        for i, _, _ in self.changes:
            counts[i] += 1
        return counts

    @property
    def is_exact(self) -> bool:
        return all(not isinstance(v, float) for _, _, v in self.changes)

    def max_change(self, base) -> float:
        B = _as_base(base)
        return max((abs(float(v) - B[i, j]) for i, j, v in self.changes), default=0.0)

    def _validate_against(self, B: np.ndarray):
        if B.shape != (self.base_n, self.base_n):
            raise ValueError(f"base shape {B.shape} does not match n={self.base_n}")
        for i, j, v in self.changes:
            delta = abs(float(v) - B[i, j])
            if delta == 0:
                raise ValueError(f"change at ({i}, {j}) does not alter the entry")
            if self.theta_cap is not None and delta > self.theta_cap * (1 + 1e-12):
                raise ValueError(
                    f"change at ({i}, {j}) has size {delta:.6g} > theta cap {self.theta_cap}")

    def apply_real(self, base) -> np.ndarray:
        B = _as_base(base)
        self._validate_against(B)
        out = B.copy()
        for i, j, v in self.changes:
            out[i, j] = float(v)
        return out

    def apply_exact(self, base) -> ExactMatrix:
        if isinstance(base, SignMatrix):
            E = base.to_exact()
        elif isinstance(base, ExactMatrix):
            E = base
        else:
            E = ExactMatrix.from_array(np.asarray(base))
        self._validate_against(E.to_real())
        entries = list(E.entries)
        for i, j, v in self.changes:
            entries[i * E.cols + j] = QuadScalar.coerce(v)
        return ExactMatrix(E.rows, E.cols, entries)

    @classmethod
    def between(cls, base, target, theta_cap: float | None = None, atol: float = 0.0) -> "Perturbation":
        """Perturbation turning ``base`` into ``target`` (real arrays)."""
        B, T = _as_base(base), as_real(target)
        if B.shape != T.shape:
            raise ValueError("shape mismatch")
        diff = np.argwhere(np.abs(T - B) > atol)
        return cls(B.shape[0], tuple((int(i), int(j), float(T[i, j])) for i, j in diff), theta_cap)

    def to_json(self) -> dict:
        return {
            "base_n": self.base_n,
            "weight": self.weight,
            "theta_cap": self.theta_cap,
            "changes": [[i, j, str(v) if isinstance(v, QuadScalar) else v] for i, j, v in self.changes],
        }


def zero_outside(H: SignMatrix, rowset: Sequence[int], colset: Sequence[int]):
    """Keep ``H`` on ``rowset x colset`` and zero every other entry.

    Returns the exact matrix and the perturbation that produces it.
    """
    n = H.n
    rows = set(_check_index_set(rowset, n, "row"))
    cols = set(_check_index_set(colset, n, "column"))
    entries, changes = [], []
    for i in range(n):
        for j in range(n):
            if i in rows and j in cols:
                entries.append(int(H.data[i, j]))
            else:
                entries.append(0)
                changes.append((i, j, QuadScalar(0)))
    return ExactMatrix(n, n, entries), Perturbation(n, tuple(changes))


def diagonal_shift(H: SignMatrix, sign: int = -1):
    """``H + sign*sqrt(n) I`` over Q(sqrt n) for a symmetric Hadamard ``H``.

    Since ``H^2 = n I`` the eigenvalues are +-sqrt(n), each with multiplicity
    n/2 when the trace vanishes, so the shift has rank n/2 with n changes.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if H.n < 2:
        raise ValueError("diagonal shift needs n >= 2")
    if not is_symmetric(H):
        raise ValueError("diagonal shift needs a symmetric matrix")
    if not is_hadamard(H):
        raise ValueError("diagonal shift needs a Hadamard matrix")
    n = H.n
    root = QuadScalar.sqrt(n)
    shift = root if sign > 0 else -root
    E = H.to_exact()
    entries = list(E.entries)
    changes = []
    for i in range(n):
        v = entries[i * n + i] + shift
        entries[i * n + i] = v
        changes.append((i, i, v))
    return ExactMatrix(n, n, entries), Perturbation(n, tuple(changes))


@dataclass(frozen=True)
class BlockDecomposition:
    block_size: int
    signs: np.ndarray
    verified: bool
    mismatched_blocks: tuple = ()


def block_decompose(H: SignMatrix, j: int) -> BlockDecomposition:
    """Split ``H`` into ``2^j x 2^j`` blocks and check each is ``+-H_{2^j}``.

    The grid of block signs must itself be the Sylvester matrix of the
    complementary order.  Non-Sylvester inputs yield ``verified=False``.
    """
    n = H.n
    k = n.bit_length() - 1
    if n != 1 << k:
        return BlockDecomposition(0, np.zeros((0, 0), dtype=np.int8), False)
    if not 0 <= j <= k:
        raise ValueError(f"block exponent {j} outside [0, {k}]")
    b = 1 << j
    m = n // b
    ref = sylvester(j).data
    signs = np.zeros((m, m), dtype=np.int8)
    bad = []
    for p in range(m):
        for q in range(m):
            blk = H.data[p * b:(p + 1) * b, q * b:(q + 1) * b]
            if np.array_equal(blk, ref):
                signs[p, q] = 1
            elif np.array_equal(blk, -ref):
                signs[p, q] = -1
            else:
                bad.append((p, q))
    ok = not bad and np.array_equal(signs, sylvester(k - j).data)
    return BlockDecomposition(b, signs, bool(ok), tuple(bad))


@dataclass(frozen=True)
class MidrijanisReport:
    k: int
    r: int
    blocks: int
    errors_per_block: int
    value: Fraction
    thm2: Fraction
    matches: bool


def midrijanis_lower_report(k: int, r: int) -> MidrijanisReport:
    """Block-counting lower bound ``(n/2r)^2 * r`` for ``H_{2^k}``.

    Each ``2r x 2r`` block is a full-rank ``+-H_{2r}``; reducing it to rank r
    costs at least ``2r - r`` changes.
    """
    n = 1 << k
    if r < 1 or r & (r - 1):
        raise ValueError(f"r={r} is not a power of two")
    if 2 * r > n:
        raise ValueError(f"need r <= n/2 = {n // 2}")
    blocks = (n // (2 * r)) ** 2
    per_block = valiant_floor(BoundQuery(2 * r, r))
    value = Fraction(blocks * per_block)
    t2 = thm2_rigidity_bound(BoundQuery(n, r))
    return MidrijanisReport(k, r, blocks, per_block, value, t2, value == t2)
