"""Ground truth and heuristic brackets for the rigidity of small +-1 matrices.

Rank one is solved exactly.  Suppose a rank-<=1 matrix ``u v^T`` agrees with
``M`` outside a change set.  Every kept entry is +-1, so ``|u_i||v_j| = 1``
along each kept edge of the row/column bipartite graph.  Rescaling ``u`` by
``t`` and ``v`` by ``1/t`` on each connected component makes all touched
magnitudes 1 without changing agreement, and untouched coordinates can be set
to +-1 freely.  So the cheapest change set is the disagreement set of the best
sign outer product:

    R_M(1) = min over u, v in {+-1}^n of #{(i, j) : u_i v_j != M_ij}.

For fixed ``u`` the best ``v_j`` is the majority sign of column ``j`` of
``diag(u) M``.  For ranks above one the module only searches for upper
bounds: a candidate change pattern is accepted when masked alternating least
squares drives the residual off the pattern below ``1e-7``.  A failed solve
proves nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bounds import BoundQuery, thm2_rigidity_bound, thm3_relaxed_bound
from .constructions import Perturbation, diagonal_shift
from .exact import QuadScalar, integer_rank, numerical_rank, rank_exact
from .hadamard import SignMatrix, is_hadamard, is_symmetric

__all__ = [
    "ParityUnionFind",
    "rank1_rigidity_exact",
    "rank1_completion_feasible",
    "rank1_bracket",
    "RigidityBracket",
    "SearchConfig",
    "masked_completion",
    "verify_witness",
    "rank_r_upper_search",
    "relaxed_upper_search",
    "RANK1_CAP",
]

RANK1_CAP = 20


def _signs(M) -> np.ndarray:
    if isinstance(M, SignMatrix):
        return M.data.astype(np.int64)
    arr = np.asarray(M)
    if arr.ndim != 2 or not np.all((arr == 1) | (arr == -1)):
        raise ValueError("expected a +-1 matrix")
    return arr.astype(np.int64)


# --- rank one --------------------------------------------------------------

def rank1_rigidity_exact(M, cap: int = RANK1_CAP):
    """Exact ``R_M(1)`` and a witness perturbation, by enumerating ``u``.

    ``u_0`` is fixed to +1 (``u v^T = (-u)(-v)^T``).  Ties go to the first
    ``u`` in enumeration order, and a zero column sum picks ``v_j = +1``.
    """
    A = _signs(M)
    m, n = A.shape
    if m > cap:
        raise ValueError(f"{m} rows exceed the 2^n enumeration cap of {cap}")
    total = 1 << (m - 1)
    best_cost, best_u = None, None
    chunk = 1 << 14
    shifts = np.arange(1, m, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        bits = (idx[:, None] >> (shifts - 1)) & 1
        U = np.ones((idx.size, m), dtype=np.int64)
        U[:, 1:] = 1 - 2 * bits
        S = U @ A
        cost = (m * n - np.abs(S).sum(axis=1)) // 2
        k = int(np.argmin(cost))
        if best_cost is None or cost[k] < best_cost:
            best_cost, best_u = int(cost[k]), U[k].copy()
    s = best_u @ A
    v = np.where(s >= 0, 1, -1)
    target = np.outer(best_u, v)
    changes = tuple((int(i), int(j), QuadScalar(int(target[i, j])))
                    for i, j in np.argwhere(target != A))
    return best_cost, Perturbation(m, changes)


class ParityUnionFind:
    """Union-find where each node stores its parity relative to the root."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.parity = [0] * size
        self.rank = [0] * size

    def find(self, x: int) -> tuple[int, int]:
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root, acc = x, 0
        for node in reversed(path):
            acc ^= self.parity[node]
            self.parity[node] = acc
            self.parent[node] = root
        return root, (self.parity[path[0]] if path else 0)

    def union(self, a: int, b: int, parity: int) -> bool:
        """Record ``parity(a) xor parity(b) == parity``; False on contradiction."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == parity
        if self.rank[ra] < self.rank[rb]:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ parity
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def rank1_completion_feasible(M, changed) -> bool:
    """Can some rank-<=1 matrix agree with ``M`` off the ``changed`` positions?

    Kept entry ``(i, j)`` demands ``sign(u_i) sign(v_j) = M_ij``: an edge between
    row ``i`` and column ``j`` with parity ``M_ij == -1``.  Feasible iff the
    signed bipartite graph is balanced.
    """
    A = _signs(M)
    m, n = A.shape
    changed = {(int(i), int(j)) for i, j in changed}
    for i, j in changed:
        if not (0 <= i < m and 0 <= j < n):
            raise IndexError(f"position ({i}, {j}) out of range")
    uf = ParityUnionFind(m + n)
    for i in range(m):
        for j in range(n):
            if (i, j) not in changed and not uf.union(i, m + j, int(A[i, j] < 0)):
                return False
    return True


# --- brackets --------------------------------------------------------------

@dataclass
class RigidityBracket:
    n: int
    r: int
    lower: Fraction
    upper: float
    witness: Perturbation | None
    exact: int | None = None
    theta: float | None = None
    lower_source: str = ""
    witness_source: str = ""
    evaluations: int = 0
    certificate: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower > self.upper:
            raise AssertionError(f"bracket lower {self.lower} exceeds upper {self.upper}")
        if self.exact is not None and not (self.lower <= self.exact == self.upper):
            raise AssertionError("exact value inconsistent with the bracket")

    def to_json(self) -> dict:
        up = None if math.isinf(self.upper) else int(self.upper)
        return {
            "n": self.n,
            "r": self.r,
            "theta": self.theta,
            "lower": float(self.lower),
            "lower_rational": str(self.lower),
            "lower_source": self.lower_source,
            "upper": up,
            "upper_infinite": math.isinf(self.upper),
            "exact": self.exact,
            "witness_source": self.witness_source,
            "evaluations": self.evaluations,
            "certificate": self.certificate,
        }


def _lower(A: np.ndarray, r: int, theta: float | None) -> tuple[Fraction, str]:
    n = A.shape[0]
    best, src = Fraction(max(0, integer_rank(A) - r)), "rank floor rank(M) - r"
    if A.shape[0] == A.shape[1] and is_hadamard(A) and r <= n:
        q = BoundQuery(n, r, theta)
        if theta is None:
            t2 = thm2_rigidity_bound(q)
            if t2 is not None and t2 >= best:
                best, src = t2, "n^2/(4r)"
        else:
            # the relaxed bracket reports the relaxed bound itself, even when
            # the rank floor happens to be larger
            best, src = thm3_relaxed_bound(q), "n^2(n-r)/(2 theta n + r(theta^2 + 2 theta))"
    return best, src


def rank1_bracket(M) -> RigidityBracket:
    A = _signs(M)
    value, wit = rank1_rigidity_exact(A)
    lower, src = _lower(A, 1, None)
    return RigidityBracket(A.shape[0], 1, lower, value, wit, exact=value,
                           lower_source=src, witness_source="sign outer-product enumeration",
                           certificate=verify_witness(A, wit, 1))


def verify_witness(M, witness: Perturbation, r: int, theta: float | None = None,
                   rtol: float = 1e-7) -> dict:
    """Independent checks on a witness: weight, numerical rank, theta cap."""
    A = _signs(M).astype(float)
    T = witness.apply_real(A)
    weight = int(np.sum(T != A))
    rank = numerical_rank(T, rtol)
    max_change = float(np.max(np.abs(T - A))) if weight else 0.0
    cap_ok = theta is None or max_change <= theta * (1 + 1e-12)
    return {
        "weight": weight,
        "weight_matches": weight == witness.weight,
        "numerical_rank": rank,
        "rank_ok": rank <= r,
        "max_change": max_change,
        "theta_ok": cap_ok,
        "valid": weight == witness.weight and rank <= r and cap_ok,
    }


# --- masked alternating minimization ---------------------------------------

@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 50
    iterations: int = 500
    residual_tol: float = 1e-7
    shrink_restarts: int = 3
    ridge: float = 1e-12
    rank_rtol: float = 1e-7


def _solve_rows(V: np.ndarray, W: np.ndarray, X: np.ndarray, ridge: float) -> np.ndarray:
    # row i: argmin_u sum_j W_ij (u . V[:, j] - X_ij)^2
    r = V.shape[0]
    G = np.einsum("kj,ij,lj->ikl", V, W, V)
    scale = np.maximum(1.0, np.trace(G, axis1=1, axis2=2))
    G = G + ridge * scale[:, None, None] * np.eye(r)
    b = np.einsum("kj,ij->ik", V, W * X)[..., None]
    try:
        return np.linalg.solve(G, b)[..., 0]
    except np.linalg.LinAlgError:
        return (np.linalg.pinv(G) @ b)[..., 0]


def _project(L, A, keep, theta):
    if theta is None:
        return np.where(keep, A, L)
    return np.where(keep, A, np.clip(L, A - theta, A + theta))


def _weights(L, A, keep, theta):
    # free entries pinned only where the clamp is active
    if theta is None:
        return keep.astype(float)
    return (keep | (np.abs(L - A) > theta)).astype(float)


def _als_run(A, keep, r, U, V, theta, cfg: SearchConfig):
    res = np.inf
    history = []
    for it in range(cfg.iterations):
        L = U @ V
        U = _solve_rows(V, _weights(L, A, keep, theta), _project(L, A, keep, theta), cfg.ridge)
        L = U @ V
        W, X = _weights(L, A, keep, theta), _project(L, A, keep, theta)
        V = _solve_rows(U.T, W.T, X.T, cfg.ridge).T
        L = U @ V
        res = float(np.linalg.norm(L - _project(L, A, keep, theta)))
        if not np.isfinite(res):
            break
        if res < cfg.residual_tol:
            break
        history.append(res)
        # stagnation: under 2% progress over 20 sweeps while far from tolerance
        if it >= 40 and it % 10 == 0 and res > 1e3 * cfg.residual_tol:
            if res > 0.98 * history[-21]:
                break
        # keep the factors balanced so the ridge term stays negligible
        nu, nv = np.linalg.norm(U), np.linalg.norm(V)
        if nu > 0 and nv > 0:
            f = math.sqrt(nv / nu)
            U, V = U * f, V / f
    return U, V, res


def masked_completion(A, keep, r: int, rng, cfg: SearchConfig = SearchConfig(),
                      theta: float | None = None, warm=None, restarts: int | None = None):
    """Search for a rank-``r`` matrix equal to ``A`` where ``keep`` is set.

    With ``theta`` the free entries must also stay within ``theta`` of ``A``.
    Returns ``(U, V, residual)`` of the best restart.
    """
    A = np.asarray(A, dtype=float)
    n, m = A.shape
    restarts = cfg.restarts if restarts is None else restarts
    best = (None, None, np.inf)
    inits = []
    if warm is not None:
        inits.append(warm)
    X0 = np.where(keep, A, 0.0)
    Us, s, Vh = np.linalg.svd(X0)
    sq = np.sqrt(s[:r])
    inits.append((Us[:, :r] * sq, sq[:, None] * Vh[:r]))
    scale = math.sqrt(max(1.0, float(np.abs(A).max())))
    while len(inits) < max(restarts, 1):
        inits.append((rng.standard_normal((n, r)) * scale, rng.standard_normal((r, m)) * scale))
    for U0, V0 in inits[:max(restarts, 1)]:
        U, V, res = _als_run(A, keep, r, U0.copy(), V0.copy(), theta, cfg)
        if res < best[2]:
            best = (U, V, res)
        if res < cfg.residual_tol:
            break
    return best


def _witness_from(A, keep, L, theta, drop_tol=1e-9):
    T = _project(L, A, keep, theta)
    T = np.where(np.abs(T - A) <= drop_tol, A, T)
    return T, Perturbation.between(A, T, theta)


def _snap_exact(A, pert: Perturbation, r: int, theta, max_den: int = 64, atol: float = 1e-6):
    """Round changed entries to small rationals; keep the result if its exact rank is <= r."""
    changes = []
    for i, j, v in pert.changes:
        q = Fraction(v).limit_denominator(max_den)
        if abs(float(q) - v) > atol or q == A[i, j]:
            return None
        if theta is not None and abs(q - Fraction(int(A[i, j]))) > Fraction(repr(theta)):
            return None
        changes.append((i, j, QuadScalar(q)))
    snapped = Perturbation(pert.base_n, tuple(changes), theta)
    if rank_exact(snapped.apply_exact(A.astype(np.int64))) > r:
        return None
    return snapped


# --- search ----------------------------------------------------------------

class _Search:
    def __init__(self, A, r, theta, budget, seed, cfg):
        self.A = A.astype(float)
        self.n = A.shape[0]
        self.r = r
        self.theta = theta
        self.budget = budget
        self.used = 0
        self.cfg = cfg
        self.rng = np.random.default_rng(seed)
        self.best = None  # (weight, positions, perturbation, source)

    def offer(self, pert: Perturbation, source: str) -> bool:
        if not pert.is_exact:
            snapped = _snap_exact(self.A, pert, self.r, self.theta)
            if snapped is not None:
                pert, source = snapped, source + " (snapped to exact)"
        cert = verify_witness(self.A, pert, self.r, self.theta, self.cfg.rank_rtol)
        if not cert["valid"]:
            return False
        key = (pert.weight, tuple(sorted(pert.positions)))
        if self.best is None or key < self.best[:2]:
            self.best = (key[0], key[1], pert, source)
            return True
        return False

    def try_pattern(self, S: np.ndarray, warm=None, restarts=None):
        if self.used >= self.budget:
            return None
        self.used += 1
        keep = ~S
        U, V, res = masked_completion(self.A, keep, self.r, self.rng, self.cfg, self.theta,
                                      warm=warm, restarts=restarts)
        if U is None or res >= self.cfg.residual_tol:
            return None
        L = U @ V
        T, pert = _witness_from(self.A, keep, L, self.theta)
        if numerical_rank(T, self.cfg.rank_rtol) > self.r:
            return None
        return pert, (U, V), L

    def shrink(self, S: np.ndarray, found, source: str):
        pert, factors, L = found
        self.offer(pert, source)
        S = np.zeros_like(S)
        for i, j in pert.positions:
            S[i, j] = True
        improved = True
        while improved and self.used < self.budget:
            improved = False
            gap = np.abs(L - self.A)
            order = sorted(((gap[i, j], i, j) for i, j in np.argwhere(S)), key=lambda t: t)
            for _, i, j in order:
                if self.used >= self.budget:
                    break
                trial = S.copy()
                trial[i, j] = False
                got = self.try_pattern(trial, warm=factors, restarts=self.cfg.shrink_restarts)
                if got is not None:
                    pert, factors, L = got
                    self.offer(pert, source + " + greedy shrink")
                    S = np.zeros_like(S)
                    for a, b in pert.positions:
                        S[a, b] = True
                    improved = True
                    break

    def seed_patterns(self):
        n, r = self.n, self.r
        while self.used < self.budget:
            kind = self.rng.integers(3)
            S = np.zeros((n, n), dtype=bool)
            if kind == 0:
                S[self.rng.choice(n, n - r, replace=False), :] = True
                label = "random row zeroing"
            elif kind == 1:
                S[:, self.rng.choice(n, n - r, replace=False)] = True
                label = "random column zeroing"
            else:
                # residual-guided: largest deviations from a jittered rank-r fit
                Uf, s, Vh = np.linalg.svd(self.A + 0.3 * self.rng.standard_normal(self.A.shape))
                L = (Uf[:, :r] * s[:r]) @ Vh[:r]
                target = self.best[0] - 1 if self.best else n * (n - r)
                if target <= 0:
                    return
                flat = np.argsort(-np.abs(L - self.A), axis=None, kind="stable")[:target]
                S.flat[flat] = True
                label = "residual-guided pattern"
            found = self.try_pattern(S)
            if found is not None:
                self.shrink(S, found, label)


def _search(M, r: int, theta: float | None, budget: int, seed: int,
            cfg: SearchConfig) -> RigidityBracket:
    A = _signs(M)
    n = A.shape[0]
    if not 1 <= r < n:
        raise ValueError(f"need 1 <= r < n, got r={r}, n={n}")
    lower, lsrc = _lower(A, r, theta)
    if integer_rank(A) <= r:
        empty = Perturbation(n, ())
        return RigidityBracket(n, r, lower, 0, empty, theta=theta, lower_source=lsrc,
                               witness_source="already rank <= r",
                               certificate=verify_witness(A, empty, r, theta))
    s = _Search(A, r, theta, budget, seed, cfg)

    # constructive witnesses first
    Sm = SignMatrix(A)
    if 2 * r >= n and is_symmetric(Sm) and is_hadamard(Sm):
        if theta is None or math.sqrt(n) <= theta * (1 + 1e-12):
            _, pert = diagonal_shift(Sm)
            s.offer(pert, "diagonal shift H - sqrt(n) I")
    trivial = np.zeros((n, n), dtype=bool)
    trivial[r:, :] = True
    if theta is None or theta >= 1:
        zero_rows = Perturbation(
            n, tuple((i, j, QuadScalar(0)) for i, j in np.argwhere(trivial)), theta)
        s.offer(zero_rows, "zero the last n - r rows")
        start, label = trivial, "zero the last n - r rows"
    else:
        # zeroing is not admissible: start from the full pattern
        start, label = np.ones((n, n), dtype=bool), "clamped full pattern"
    found = s.try_pattern(start)
    if found is not None:
        s.shrink(start, found, label)
    if found is not None or start is trivial:
        # every seed pattern is a subset of the full one, hence at least as hard
        s.seed_patterns()

    if s.best is None:
        return RigidityBracket(n, r, lower, math.inf, None, theta=theta, lower_source=lsrc,
                               witness_source="none found", evaluations=s.used)
    weight, _, pert, src = s.best
    cert = verify_witness(A, pert, r, theta, cfg.rank_rtol)
    return RigidityBracket(n, r, lower, weight, pert, theta=theta, lower_source=lsrc,
                           witness_source=src, evaluations=s.used, certificate=cert)


def rank_r_upper_search(M, r: int, budget: int = 200, seed: int = 0,
                        cfg: SearchConfig = SearchConfig()) -> RigidityBracket:
    """Bracket ``R_M(r)``: proven lower bound and the best explicit witness found."""
    return _search(M, r, None, budget, seed, cfg)


def relaxed_upper_search(M, r: int, theta: float, budget: int = 200, seed: int = 0,
                         cfg: SearchConfig = SearchConfig()) -> RigidityBracket:
    """Like :func:`rank_r_upper_search` with every change capped at ``theta``.

    If no admissible witness is found the upper end is ``math.inf``.
    """
    if theta <= 0:
        raise ValueError("theta must be positive")
    return _search(M, r, float(theta), budget, seed, cfg)
