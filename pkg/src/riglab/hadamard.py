"""Sylvester Hadamard matrices and the (generalized) Hadamard predicates."""

from __future__ import annotations

import numpy as np

from .exact import ExactMatrix, as_real, parse_matrix, format_matrix

__all__ = [
    "SignMatrix",
    "MAX_SYLVESTER_K",
    "sylvester",
    "is_hadamard",
    "is_generalized_hadamard",
    "is_symmetric",
    "read_sign_matrix",
    "write_sign_matrix",
]

MAX_SYLVESTER_K = 12

_H2 = np.array([[1, 1], [1, -1]], dtype=np.int8)


class SignMatrix:
    """Square matrix with entries in {+1, -1}, stored as an int8 array.

    ``verified_hadamard`` is set only after ``H @ H.T == n I`` has been
    checked exactly.
    """

    __slots__ = ("data", "verified_hadamard")

    def __init__(self, data, verified_hadamard: bool = False):
        arr = np.array(data)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.size == 0:
            raise ValueError(f"sign matrix must be square and non-empty, got shape {arr.shape}")
        if not np.all((arr == 1) | (arr == -1)):
            raise ValueError("sign matrix entries must be +1 or -1")
        arr = arr.astype(np.int8)
        arr.setflags(write=False)
        self.data = arr
        self.verified_hadamard = bool(verified_hadamard)
        if self.verified_hadamard and not _gram_is_scaled_identity(arr):
            raise ValueError("matrix flagged as Hadamard fails H H^T = n I")

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def to_exact(self) -> ExactMatrix:
        return ExactMatrix.from_array(self.data.astype(np.int64))

    def to_real(self) -> np.ndarray:
        return self.data.astype(float)

    def flip(self, i: int, j: int) -> "SignMatrix":
        arr = self.data.copy()
        arr[i, j] = -arr[i, j]
        return SignMatrix(arr)

    def __eq__(self, other):
        if not isinstance(other, SignMatrix):
            return NotImplemented
        return np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash(self.data.tobytes())

    def __repr__(self):
        tag = ", hadamard" if self.verified_hadamard else ""
        return f"SignMatrix(n={self.n}{tag})"


def _gram_is_scaled_identity(arr: np.ndarray) -> bool:
    a = arr.astype(np.int64)
    return np.array_equal(a @ a.T, a.shape[0] * np.eye(a.shape[0], dtype=np.int64))


def sylvester(k: int, max_k: int = MAX_SYLVESTER_K) -> SignMatrix:
    """``[[1, 1], [1, -1]]`` tensored with itself ``k`` times (order ``2**k``)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > max_k:
        raise ValueError(f"2^{k} exceeds the size cap 2^{max_k}")
    H = np.ones((1, 1), dtype=np.int8)
    for _ in range(k):
        H = np.kron(_H2, H)
    return SignMatrix(H, verified_hadamard=True)


def is_hadamard(M) -> bool:
    """Exact integer check of ``M M^T = n I`` for a +-1 matrix."""
    if isinstance(M, SignMatrix):
        return M.verified_hadamard or _gram_is_scaled_identity(M.data)
    arr = np.asarray(M)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        return False
    if not np.all((arr == 1) | (arr == -1)):
        return False
    return _gram_is_scaled_identity(arr.astype(np.int64))


def is_generalized_hadamard(M, imag=None, mag_rtol: float = 1e-10, orth_tol: float = 1e-9) -> bool:
    """True iff all entries share one magnitude and rows are pairwise orthogonal.

    ``M`` may be a real or complex array, a :class:`SignMatrix`, or the real
    part of a matrix whose imaginary part is passed as ``imag``.
    """
    A = as_real(M).astype(complex)
    if imag is not None:
        A = A + 1j * as_real(imag)
    if A.shape[0] != A.shape[1]:
        return False
    mags = np.abs(A)
    top = mags.max()
    if top == 0 or np.any(np.abs(mags - top) > mag_rtol * top):
        return False
    G = A @ A.conj().T
    off = G - np.diag(np.diag(G))
    # orthogonality measured on unit-normalized rows
    scale = top * top * A.shape[0]
    return bool(np.all(np.abs(off) <= orth_tol * scale))


def is_symmetric(M) -> bool:
    arr = M.data if isinstance(M, SignMatrix) else np.asarray(M)
    return arr.shape[0] == arr.shape[1] and bool(np.array_equal(arr, arr.T))


def read_sign_matrix(path) -> SignMatrix:
    with open(path) as fh:
        M = parse_matrix(fh.read())
    return exact_to_sign(M)


def exact_to_sign(M: ExactMatrix) -> SignMatrix:
    vals = []
    for x in M.entries:
        if x == 1:
            vals.append(1)
        elif x == -1:
            vals.append(-1)
        else:
            raise ValueError(f"entry {x} is not +-1")
    S = SignMatrix(np.array(vals).reshape(M.rows, M.cols))
    if is_hadamard(S):
        S.verified_hadamard = True
    return S


def write_sign_matrix(M: SignMatrix, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(M.to_exact()))
