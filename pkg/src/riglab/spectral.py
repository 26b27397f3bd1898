"""The linear-algebra (Cauchy-Schwarz) chain and its comparison with the sum-of-squares bound.

Both ``H`` and ``Ht`` are row-normalized before anything is measured, so for a
Hadamard ``H`` the normalized matrix is unitary and the chain reads

    sum_i <h_i, t_i> = Tr(H Ht^*) = Tr(H D E) <= ||H D||_F ||E||_F = sqrt(r) ||Ht||_F.

With raw +-1 rows every quantity on the left picks up a factor sqrt(n).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exact import as_real
from .hadamard import SignMatrix

__all__ = ["orthonormal_factor", "Link", "SpectralReport", "referee_chain_check"]

LINK_TOL = 1e-8


def _matrix(M) -> np.ndarray:
    if isinstance(M, SignMatrix):
        return M.data.astype(float)
    return as_real(M)


def orthonormal_factor(Htilde, rtol: float = 1e-8):
    """Factor ``Ht^* = D E`` with orthonormal columns in ``D``.

    Columns of ``Ht^*`` are orthonormalized by modified Gram-Schmidt with one
    reorthogonalization pass; columns whose residual falls under
    ``rtol * max column norm`` are treated as dependent.  ``E = D^* Ht^*``.
    """
    T = _matrix(Htilde)
    X = T.conj().T
    scale = np.max(np.linalg.norm(X, axis=0))
    if scale == 0:
        raise ValueError("cannot factor the zero matrix")
    basis: list[np.ndarray] = []
    for j in range(X.shape[1]):
        v = X[:, j].astype(np.result_type(X, float)).copy()
        for _ in range(2):
            for q in basis:
                v = v - np.vdot(q, v) * q
        nrm = np.linalg.norm(v)
        if nrm > rtol * scale:
            basis.append(v / nrm)
    D = np.column_stack(basis)
    E = D.conj().T @ X
    return D, E


@dataclass
class Link:
    name: str
    lhs: float
    rhs: float
    kind: str  # "le" or "eq"
    tol: float = LINK_TOL

    @property
    def holds(self) -> bool:
        slack = self.tol * max(1.0, abs(self.rhs))
        if self.kind == "eq":
            return abs(self.lhs - self.rhs) <= slack
        return self.lhs <= self.rhs + slack

    def to_json(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
                "kind": self.kind, "holds": self.holds}


@dataclass
class SpectralReport:
    n: int
    r: int
    lhs_sum_inner: float
    rhs_cs: float
    sqrt_rn: float
    sum_squares: float
    quantum_rhs: int
    links: list[Link] = field(default_factory=list)
    zero_rows: list[int] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(link.holds for link in self.links)

    @property
    def cs_implied(self) -> float:
        """Upper bound on the linear sum implied by the sum of squares."""
        return float(np.sqrt(self.n * self.sum_squares))

    @property
    def quantum_tighter(self) -> bool:
        """True when the sum-of-squares route gives a strictly smaller bound."""
        return self.cs_implied < self.sqrt_rn - 1e-12

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "lhs_sum_inner": self.lhs_sum_inner,
            "rhs_cs": self.rhs_cs,
            "sqrt_rn": self.sqrt_rn,
            "sum_squares": self.sum_squares,
            "quantum_rhs": self.quantum_rhs,
            "cs_implied": self.cs_implied,
            "quantum_tighter": self.quantum_tighter,
            "zero_rows": self.zero_rows,
            "links": [link.to_json() for link in self.links],
            "holds": self.holds,
        }


def referee_chain_check(H, Htilde, rtol: float = 1e-8, tol: float = LINK_TOL) -> SpectralReport:
    """Evaluate every link of the trace / Cauchy-Schwarz chain on one instance.

    Zero rows of ``Htilde`` stay zero after normalization and are reported.
    """
    Hm, T = _matrix(H), _matrix(Htilde)
    if Hm.shape != T.shape:
        raise ValueError(f"shape mismatch {Hm.shape} vs {T.shape}")
    n = Hm.shape[0]
    hn = np.linalg.norm(Hm, axis=1)
    if np.any(hn == 0):
        raise ValueError("H has a zero row")
    tn = np.linalg.norm(T, axis=1)
    zero = tn == 0
    Hh = Hm / hn[:, None]
    Th = T / np.where(zero, 1.0, tn)[:, None]

    D, E = orthonormal_factor(Th, rtol)
    r = D.shape[1]
    inner = np.sum(Hh.conj() * Th, axis=1)
    sum_inner = float(np.real(inner.sum()))
    tr = float(np.real(np.trace(Hh @ Th.conj().T)))
    tr_de = float(np.real(np.trace(Hh @ D @ E)))
    hd = float(np.linalg.norm(Hh @ D))
    d_f = float(np.linalg.norm(D))
    e_f = float(np.linalg.norm(E))
    t_f = float(np.linalg.norm(Th))
    live = int(n - zero.sum())
    sum_sq = float(np.sum(np.abs(inner) ** 2))
    rhs_cs = float(np.sqrt(r) * t_f)
    sqrt_rn = float(np.sqrt(r * n))

    links = [
        Link("sum_inner = Tr(H Ht*)", sum_inner, tr, "eq", tol),
        Link("Tr(H Ht*) = Tr(H D E)", tr, tr_de, "eq", tol),
        Link("Tr(H D E) <= ||HD||_F ||E||_F", tr_de, hd * e_f, "le", tol),
        Link("||HD||_F = ||D||_F", hd, d_f, "eq", tol),
        Link("||D||_F = sqrt(r)", d_f, float(np.sqrt(r)), "eq", tol),
        Link("||E||_F = ||Ht||_F", e_f, t_f, "eq", tol),
        Link("||Ht||_F = sqrt(live rows)", t_f, float(np.sqrt(live)), "eq", tol),
        Link("sum_inner <= sqrt(r) ||Ht||_F", sum_inner, rhs_cs, "le", tol),
        Link("sum_inner <= sqrt(r n)", sum_inner, sqrt_rn, "le", tol),
        Link("sum |<h_i,t_i>|^2 <= r", sum_sq, float(r), "le", tol),
        Link("sum_inner <= sqrt(n sum_squares)", sum_inner, float(np.sqrt(n * sum_sq)), "le", tol),
        Link("sqrt(n sum_squares) <= sqrt(r n)", float(np.sqrt(n * sum_sq)), sqrt_rn, "le", tol),
    ]
    return SpectralReport(
        n=n, r=r, lhs_sum_inner=sum_inner, rhs_cs=rhs_cs, sqrt_rn=sqrt_rn,
        sum_squares=sum_sq, quantum_rhs=r, links=links,
        zero_rows=[int(i) for i in np.flatnonzero(zero)],
    )
