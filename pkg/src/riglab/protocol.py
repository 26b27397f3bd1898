"""Rows of an approximation as quantum states, decoded in the Hadamard basis.

Alice encodes message ``i`` as the normalized row ``i`` of an approximation
``Ht`` of ``H``.  Because ``Ht`` has rank ``r`` the state lives in an
``r``-dimensional subspace, and Bob's average decoding success is at most
``r/n``.  Everything here is plain numpy; complex inputs are accepted and
real inputs stay real.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exact import ExactMatrix, as_real, numerical_rank, rank_exact
from .hadamard import SignMatrix

__all__ = [
    "ZeroRowError",
    "StateVector",
    "Povm",
    "ProtocolReport",
    "encode_rows",
    "success_probs",
    "verify_nayak",
    "rowspace_isometry",
    "hadamard_povm_in_rowspace",
    "RegevReport",
    "regev_chain_check",
    "Thm3RowCheck",
    "Thm3Report",
    "thm3_chain_check",
]

NORM_TOL = 1e-12
POVM_TOL = 1e-9
NAYAK_AVG_TOL = 1e-9
NAYAK_SUM_TOL = 1e-6
CHAIN_TOL = 1e-8


class ZeroRowError(ValueError):
    def __init__(self, row: int):
        super().__init__(f"row {row} is all zero and cannot be normalized")
        self.row = row


def _matrix(M) -> np.ndarray:
    if isinstance(M, SignMatrix):
        return M.data.astype(float)
    return as_real(M)


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes)
        if a.ndim != 1 or a.size == 0:
            raise ValueError("state must be a non-empty vector")
        nrm = np.linalg.norm(a)
        if nrm == 0:
            raise ValueError("zero vector is not a state")
        a = a / nrm
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class Povm:
    """Positive operators summing to the identity, validated on construction."""

    elements: tuple
    tol: float = POVM_TOL

    def __post_init__(self):
        els = tuple(np.atleast_2d(np.asarray(E)) for E in self.elements)
        if not els:
            raise ValueError("empty POVM")
        dim = els[0].shape[0]
        total = np.zeros((dim, dim), dtype=np.result_type(*els))
        for i, E in enumerate(els):
            if E.shape != (dim, dim):
                raise ValueError(f"element {i} has shape {E.shape}, expected {(dim, dim)}")
            if not np.allclose(E, E.conj().T, atol=self.tol):
                raise ValueError(f"element {i} is not Hermitian")
            lo = np.linalg.eigvalsh((E + E.conj().T) / 2)[0]
            if lo < -self.tol:
                raise ValueError(f"element {i} has negative eigenvalue {lo:.3g}")
            total = total + E
        err = np.max(np.abs(total - np.eye(dim)))
        if err > self.tol:
            raise ValueError(f"POVM elements sum to identity only within {err:.3g}")
        object.__setattr__(self, "elements", els)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self):
        return len(self.elements)


def _row_norms(A: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.abs(A) ** 2, axis=1))


def encode_rows(M) -> list[StateVector]:
    """Normalize every row of ``M`` into a unit vector."""
    A = _matrix(M)
    norms = _row_norms(A)
    for i, nrm in enumerate(norms):
        if nrm == 0:
            raise ZeroRowError(i)
    return [StateVector(A[i]) for i in range(A.shape[0])]


def _normalized_rows(A: np.ndarray, allow_zero: bool):
    norms = _row_norms(A)
    zero = norms == 0
    if zero.any() and not allow_zero:
        raise ZeroRowError(int(np.flatnonzero(zero)[0]))
    safe = np.where(zero, 1.0, norms)
    return A / safe[:, None], zero


def _probs(H, Htilde, allow_zero: bool):
    Hm, Ht = _matrix(H), _matrix(Htilde)
    if Hm.shape != Ht.shape:
        raise ValueError(f"shape mismatch {Hm.shape} vs {Ht.shape}")
    Hn, _ = _normalized_rows(Hm, allow_zero=False)
    Tn, zero = _normalized_rows(Ht, allow_zero)
    overlaps = np.sum(Hn.conj() * Tn, axis=1)
    return np.abs(overlaps) ** 2, zero


def success_probs(H, Htilde) -> np.ndarray:
    """``p_i = |<H_i|Ht_i>|^2`` on normalized rows."""
    p, _ = _probs(H, Htilde, allow_zero=False)
    return p


@dataclass
class ProtocolReport:
    n: int
    r: int
    rank_source: str
    p: np.ndarray
    p_avg: float
    nayak_rhs: float
    sum_p: float
    zero_rows: list[int] = field(default_factory=list)

    @property
    def pass_avg(self) -> bool:
        return self.p_avg <= self.nayak_rhs + NAYAK_AVG_TOL

    @property
    def pass_sum(self) -> bool:
        return self.sum_p <= self.r + NAYAK_SUM_TOL

    @property
    def passed(self) -> bool:
        return self.pass_avg

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "rank_source": self.rank_source,
            "p": [float(x) for x in self.p],
            "p_avg": self.p_avg,
            "nayak_rhs": self.nayak_rhs,
            "sum_p": self.sum_p,
            "zero_rows": self.zero_rows,
            "pass": self.passed,
            "pass_sum": self.pass_sum,
        }


def verify_nayak(H, Htilde, r: int | None = None, rtol: float = 1e-8) -> ProtocolReport:
    """Check ``p_avg <= r/n`` and ``sum_i p_i <= r`` for the row encoding of ``Htilde``.

    If ``r`` is omitted it is computed exactly for :class:`ExactMatrix` input and
    from singular values otherwise.  All-zero rows carry no message: their
    ``p_i`` is 0 and they are listed in ``zero_rows``.
    """
    if r is not None:
        source = "caller"
    elif isinstance(Htilde, ExactMatrix):
        r, source = rank_exact(Htilde), "exact"
    else:
        r, source = numerical_rank(_matrix(Htilde), rtol), "numerical"
    p, zero = _probs(H, Htilde, allow_zero=True)
    p[zero] = 0.0
    n = p.size
    return ProtocolReport(
        n=n, r=int(r), rank_source=source, p=p,
        p_avg=float(p.sum() / n), nayak_rhs=min(r / n, 1.0), sum_p=float(p.sum()),
        zero_rows=[int(i) for i in np.flatnonzero(zero)],
    )


def rowspace_isometry(Htilde, rtol: float = 1e-8):
    """Orthonormal basis ``A`` (n x r) of the row space and per-row coordinates.

    Row ``i`` of ``coords`` satisfies ``A @ coords[i] == normalized row i``;
    zero rows get zero coordinates.
    """
    T = _matrix(Htilde)
    _, s, Vh = np.linalg.svd(T)
    if s[0] == 0:
        raise ValueError("row space of the zero matrix is empty")
    r = int(np.sum(s > rtol * s[0]))
    A = Vh[:r].T.copy()
    # fix the sign so the first non-negligible entry of each column is positive
    for c in range(r):
        k = int(np.argmax(np.abs(A[:, c]) > 1e-12))
        phase = A[k, c] / abs(A[k, c])
        A[:, c] = A[:, c] / phase
    Tn, _ = _normalized_rows(T, allow_zero=True)
    coords = Tn @ A.conj()
    return A, coords


def hadamard_povm_in_rowspace(H, A) -> Povm:
    """Hadamard-basis measurement compressed to the row space: ``E_i = A^* h_i h_i^* A``."""
    Hn, _ = _normalized_rows(_matrix(H), allow_zero=False)
    A = np.asarray(A)
    if A.shape[0] != Hn.shape[1]:
        raise ValueError(f"isometry has {A.shape[0]} rows, expected {Hn.shape[1]}")
    W = Hn.conj() @ A  # row i: <h_i| A
    return Povm(tuple(np.outer(w.conj(), w) for w in W))


@dataclass
class RegevReport:
    p: np.ndarray
    op_norms: np.ndarray
    traces: np.ndarray
    trace_sum: float
    r: int
    link1: np.ndarray
    link2: np.ndarray
    trace_ok: bool

    @property
    def holds(self) -> bool:
        return bool(self.link1.all() and self.link2.all() and self.trace_ok)

    def to_json(self) -> dict:
        return {
            "p": self.p.tolist(),
            "op_norms": self.op_norms.tolist(),
            "traces": self.traces.tolist(),
            "trace_sum": self.trace_sum,
            "r": self.r,
            "holds": self.holds,
        }


def regev_chain_check(states, povm: Povm, tol: float = CHAIN_TOL) -> RegevReport:
    """Check ``p_i <= ||E_i|| <= Tr(E_i)`` per outcome and ``sum Tr(E_i) = r``."""
    if len(states) != len(povm):
        raise ValueError(f"{len(states)} states but {len(povm)} POVM elements")
    r = povm.dim
    for k, s in enumerate(states):
        if s.dim != r:
            raise ValueError(f"state {k} has dimension {s.dim}, POVM acts on {r}")
    p = np.array([float(np.real(np.vdot(s.amplitudes, E @ s.amplitudes)))
                  for s, E in zip(states, povm.elements)])
    norms = np.array([float(np.linalg.eigvalsh((E + E.conj().T) / 2)[-1]) for E in povm.elements])
    traces = np.array([float(np.real(np.trace(E))) for E in povm.elements])
    tsum = float(traces.sum())
    return RegevReport(
        p=p, op_norms=norms, traces=traces, trace_sum=tsum, r=r,
        link1=p <= norms + tol, link2=norms <= traces + tol,
        trace_ok=abs(tsum - r) <= tol,
    )


@dataclass
class Thm3RowCheck:
    row: int
    delta: int
    c_sq: float
    p: float
    overlap_floor: float     # c^2 (n - theta*delta)^2 / n
    linearized: float        # c^2 (n - 2 theta*delta)
    final: float             # (n - 2 theta*delta) / (n + delta(theta^2 + 2 theta))
    status: str              # "ok", "vacuous", "reversed", "zero-row", "violated"
    links: tuple = ()


@dataclass
class Thm3Report:
    n: int
    theta: float
    weight: int
    rows: list[Thm3RowCheck]
    p_avg: float
    aggregate_rhs: float
    aggregate_ok: bool

    def count(self, status: str) -> int:
        return sum(1 for r in self.rows if r.status == status)

    @property
    def violations(self) -> int:
        return self.count("violated") + (0 if self.aggregate_ok else 1)

    @property
    def holds(self) -> bool:
        return self.violations == 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "theta": self.theta,
            "weight": self.weight,
            "p_avg": self.p_avg,
            "aggregate_rhs": self.aggregate_rhs,
            "aggregate_ok": self.aggregate_ok,
            "rows": [
                {"row": r.row, "delta": r.delta, "p": r.p, "status": r.status,
                 "overlap_floor": r.overlap_floor, "linearized": r.linearized, "final": r.final}
                for r in self.rows
            ],
            "counts": {s: self.count(s) for s in ("ok", "vacuous", "reversed", "zero-row", "violated")},
            "holds": self.holds,
        }


def _ge(a: float, b: float, tol: float) -> bool:
    return a >= b - tol * max(1.0, abs(b))


def thm3_chain_check(H: SignMatrix, pert, theta: float | None = None, tol: float = CHAIN_TOL) -> Thm3Report:
    """Evaluate the per-row lower-bound chain for a theta-capped perturbation.

    Row statuses:

    * ``vacuous``  -- ``n - theta*delta < 0``; squaring the overlap bound is not allowed.
    * ``reversed`` -- ``n - 2 theta*delta < 0 <= n - theta*delta``; the last
      link multiplies ``c^2 >= 1/(n + delta(theta^2+2theta))`` by a negative
      number, so only the end-to-end inequality ``p >= final`` is checked.
    * ``zero-row`` -- the perturbed row vanished; ``p`` is taken as 0.
    """
    theta = pert.theta_cap if theta is None else theta
    if theta is None or theta <= 0:
        raise ValueError("chain check needs a positive theta")
    Hm = H.data.astype(float) if isinstance(H, SignMatrix) else _matrix(H)
    n = Hm.shape[0]
    if pert.base_n != n:
        raise ValueError(f"perturbation is for n={pert.base_n}, matrix has n={n}")
    capped = pert if pert.theta_cap is not None and pert.theta_cap <= theta else \
        type(pert)(pert.base_n, pert.changes, theta)
    T = capped.apply_real(Hm)
    deltas = pert.row_counts()
    k = theta * theta + 2 * theta
    sq = np.sum(T * T, axis=1)
    inner = np.sum(Hm * T, axis=1)

    rows = []
    for i in range(n):
        d = int(deltas[i])
        final = (n - 2 * theta * d) / (n + d * k)
        if sq[i] == 0:
            rows.append(Thm3RowCheck(i, d, float("inf"), 0.0, float("nan"), float("nan"), final,
                                     "zero-row" if _ge(0.0, final, tol) else "violated"))
            continue
        c_sq = 1.0 / sq[i]
        p = c_sq * inner[i] ** 2 / n
        floor = c_sq * (n - theta * d) ** 2 / n
        lin = c_sq * (n - 2 * theta * d)
        if n - theta * d < 0:
            status, links = "vacuous", ()
        else:
            links = (
                _ge(p, floor, tol),
                _ge(floor, lin, tol),
                # squared row norm never exceeds n + delta(theta^2 + 2 theta)
                _ge(n + d * k, sq[i], tol),
            )
            if n - 2 * theta * d < 0:
                status = "reversed"
                links = links + (_ge(p, final, tol),)
            else:
                status = "ok"
                links = links + (_ge(lin, final, tol),)
            if not all(links):
                status = "violated"
        rows.append(Thm3RowCheck(i, d, float(c_sq), float(p), float(floor), float(lin),
                                 float(final), status, links))

    p_all = np.array([r.p for r in rows])
    p_avg = float(p_all.mean())
    R = pert.weight
    agg = (n - 2 * theta * R / n) / (n + R * k / n)
    return Thm3Report(n, float(theta), R, rows, p_avg, float(agg), _ge(p_avg, agg, tol))
