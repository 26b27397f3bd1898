"""Closed-form rigidity bounds for Hadamard matrices.

All values are computed as exact :class:`~fractions.Fraction` objects; a
``theta`` given as a float is read through its shortest decimal repr, a
string is parsed as a decimal or ``p/q`` rational.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

__all__ = [
    "BoundQuery",
    "BoundEntry",
    "BoundReport",
    "Regime",
    "valiant_floor",
    "thm1_submatrix_bound",
    "thm2_rigidity_bound",
    "kashin_razborov_constant",
    "thm3_relaxed_bound",
    "thm3_relaxed_bound_float",
    "theta_regime",
    "nayak_bound",
    "bound_report",
]


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("theta must be finite")
        # shortest decimal form, so 0.1 means 1/10 rather than its binary neighbour
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class BoundQuery:
    n: int
    r: int
    theta: Fraction | None = None

    def __post_init__(self):
        if not 1 <= self.r <= self.n:
            raise ValueError(f"need 1 <= r <= n, got n={self.n}, r={self.r}")
        if self.theta is not None:
            t = _to_fraction(self.theta)
            if t < 0:
                raise ValueError("theta must be non-negative")
            object.__setattr__(self, "theta", t)


@dataclass(frozen=True)
class BoundEntry:
    name: str
    value: Fraction | None
    applicable: bool
    source: str

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "value_rational": None if self.value is None else str(self.value),
            "value_float": None if self.value is None else float(self.value),
            "applicable": self.applicable,
            "source": self.source,
        }


@dataclass
class BoundReport:
    query: BoundQuery
    bounds: list[BoundEntry] = field(default_factory=list)

    def get(self, name: str) -> BoundEntry:
        for b in self.bounds:
            if b.name == name:
                return b
        raise KeyError(name)

    def dominant(self) -> str | None:
        """Name of the largest applicable lower bound on R_H(r) or R_H(r, theta)."""
        lower = [b for b in self.bounds
                 if b.applicable and b.value is not None and b.name in _LOWER_BOUNDS]
        if not lower:
            return None
        return max(lower, key=lambda b: b.value).name

    def to_json(self) -> dict:
        q = self.query
        return {
            "query": {"n": q.n, "r": q.r, "theta": None if q.theta is None else str(q.theta)},
            "bounds": [b.to_json() for b in self.bounds],
            "dominant": self.dominant(),
        }


_LOWER_BOUNDS = {"valiant_floor", "thm2_rigidity", "thm3_relaxed"}


class Regime(enum.Enum):
    """Which earlier asymptotic result the relaxed bound reproduces."""

    LOKAM = ("LokamRegime", "n(n-r)/theta")
    KASHIN_RAZBOROV = ("KRRegime", "n^2(n-r)/(r theta^2)")

    def __init__(self, label: str, shape: str):
        self.label = label
        self.shape = shape


def valiant_floor(q: BoundQuery) -> int:
    """Each unit of rank drop costs at least one changed entry."""
    return q.n - q.r


def thm1_submatrix_bound(a: int, b: int, n: int) -> int:
    """Least rank of an ``a x b`` submatrix of an order-``n`` Hadamard matrix."""
    if not (1 <= a <= n and 1 <= b <= n):
        raise ValueError(f"need 1 <= a, b <= n; got a={a}, b={b}, n={n}")
    return -(-a * b // n)


def thm2_rigidity_bound(q: BoundQuery) -> Fraction | None:
    """``n^2 / 4r`` when ``r <= n/2``; ``None`` marks the bound inapplicable."""
    if 2 * q.r > q.n:
        return None
    return Fraction(q.n * q.n, 4 * q.r)


def kashin_razborov_constant(q: BoundQuery) -> Fraction:
    return Fraction(q.n * q.n, 256 * q.r)


def _need_theta(q: BoundQuery) -> Fraction:
    if q.theta is None or q.theta == 0:
        raise ValueError("relaxed bound needs theta > 0")
    return q.theta


def thm3_relaxed_bound(q: BoundQuery) -> Fraction:
    t = _need_theta(q)
    n, r = q.n, q.r
    return Fraction(n * n * (n - r)) / (2 * t * n + r * (t * t + 2 * t))


def thm3_relaxed_bound_float(n: int, r: int, theta: float) -> float:
    """Float evaluation of the same formula, kept independent of the rational path."""
    if theta <= 0:
        raise ValueError("relaxed bound needs theta > 0")
    return n * n * (n - r) / (2.0 * theta * n + r * (theta * theta + 2.0 * theta))


def theta_regime(q: BoundQuery) -> Regime:
    # theta == n/r belongs to the Kashin-Razborov side
    t = _need_theta(q)
    return Regime.KASHIN_RAZBOROV if t >= Fraction(q.n, q.r) else Regime.LOKAM


def nayak_bound(n_messages: int, r: int) -> Fraction:
    """Average decoding success of ``n_messages`` from an ``r``-dim encoding."""
    if n_messages < 1 or r < 1:
        raise ValueError("need n_messages >= 1 and r >= 1")
    return min(Fraction(r, n_messages), Fraction(1))


def bound_report(q: BoundQuery) -> BoundReport:
    rep = BoundReport(q)
    rep.bounds.append(BoundEntry(
        "valiant_floor", Fraction(valiant_floor(q)), True,
        "rank drops by at most one per changed entry: R(r) >= n - r"))
    t2 = thm2_rigidity_bound(q)
    rep.bounds.append(BoundEntry(
        "thm2_rigidity", t2, t2 is not None,
        "R_H(r) >= n^2/(4r), valid for r <= n/2"))
    rep.bounds.append(BoundEntry(
        "kashin_razborov_constant", kashin_razborov_constant(q), 2 * q.r <= q.n,
        "comparison: constant 1/256 from the earlier Kashin-Razborov proof"))
    rep.bounds.append(BoundEntry(
        "nayak", nayak_bound(q.n, q.r), True,
        "average success probability p <= r/n"))
    if 2 * q.r == q.n:
        rep.bounds.append(BoundEntry(
            "shift_upper", Fraction(q.n), True,
            "upper bound R_H(n/2) <= n via H - sqrt(n) I, symmetric H only"))
    if q.theta is not None and q.theta > 0:
        reg = theta_regime(q)
        rep.bounds.append(BoundEntry(
            "thm3_relaxed", thm3_relaxed_bound(q), True,
            "R_H(r,theta) >= n^2(n-r)/(2 theta n + r(theta^2 + 2 theta))"))
        rep.bounds.append(BoundEntry(
            "theta_regime", None, True,
            f"{reg.label}: shape {reg.shape}; split at theta = n/r, "
            "boundary on the KR side; a 'theta > r/n' condition is read as n/r"))
    return rep
