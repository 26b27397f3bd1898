"""Scan submatrices of a Hadamard matrix and check the rank floor ``ceil(ab/n)``."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial

import numpy as np

from ._parallel import ordered_map
from .bounds import thm1_submatrix_bound
from .exact import _integer_rank
from .hadamard import SignMatrix, is_hadamard

__all__ = ["Violation", "SubmatrixScanReport", "scan_all_submatrices", "EXHAUSTIVE_CAP"]

# (2^n - 1)^2 pairs; 225 for n = 4.  n = 8 (65025 pairs) needs an explicit cap raise.
EXHAUSTIVE_CAP = 225


@dataclass(frozen=True)
class Violation:
    rows: tuple
    cols: tuple
    rank: int
    bound: int


@dataclass
class SubmatrixScanReport:
    n: int
    mode: str
    total_checked: int
    violations: list[Violation] = field(default_factory=list)
    min_slack: int | None = None
    tight_example: tuple | None = None
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "seed": self.seed,
            "total_checked": self.total_checked,
            "violations": [v.__dict__ for v in self.violations],
            "min_slack": self.min_slack,
            "tight_example": None if self.tight_example is None
            else {"rows": list(self.tight_example[0]), "cols": list(self.tight_example[1])},
            "ok": self.ok,
        }


def _bits(mask: int, n: int) -> tuple:
    return tuple(i for i in range(n) if mask >> i & 1)


def _check_pairs(pairs, rows_of_h):
    """Return (checked, violations, min_slack, tight) for a batch of mask pairs."""
    n = len(rows_of_h)
    violations = []
    best, tight = None, None
    for rmask, cmask in pairs:
        rs, cs = _bits(rmask, n), _bits(cmask, n)
        sub = [[rows_of_h[i][j] for j in cs] for i in rs]
        rank = _integer_rank(sub)
        bound = thm1_submatrix_bound(len(rs), len(cs), n)
        slack = rank - bound
        if slack < 0:
            violations.append(Violation(rs, cs, rank, bound))
        if best is None or slack < best:
            best, tight = slack, (rs, cs)
    return len(pairs), violations, best, tight


def scan_all_submatrices(H: SignMatrix, mode: str = "exhaustive", sample_count: int = 10_000,
                         seed: int = 1, cap: int = EXHAUSTIVE_CAP,
                         workers: int | None = None) -> SubmatrixScanReport:
    """Check ``rank(A) >= ceil(ab/n)`` for every (or a sample of) nonempty submatrix ``A``.

    Sampled mode draws row and column subsets independently and uniformly from
    the nonempty subsets, with ``numpy.random.default_rng(seed)``.
    """
    if not is_hadamard(H):
        raise ValueError("submatrix scan needs a Hadamard matrix")
    n = H.n
    full = (1 << n) - 1
    if mode == "exhaustive":
        if full * full > cap:
            raise ValueError(f"exhaustive scan of n={n} has {full * full} pairs, cap is {cap}")
        pairs = [(rm, cm) for rm in range(1, full + 1) for cm in range(1, full + 1)]
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        rms = rng.integers(1, full + 1, size=sample_count)
        cms = rng.integers(1, full + 1, size=sample_count)
        pairs = [(int(a), int(b)) for a, b in zip(rms, cms)]
    else:
        raise ValueError(f"unknown mode {mode!r}")

    rows_of_h = H.data.astype(int).tolist()
    chunk = max(1, -(-len(pairs) // 64))
    batches = [pairs[i:i + chunk] for i in range(0, len(pairs), chunk)]
    results = ordered_map(partial(_check_pairs, rows_of_h=rows_of_h), batches, workers)

    report = SubmatrixScanReport(n, mode, 0, seed=seed if mode == "sampled" else None)
    for checked, viol, slack, tight in results:
        report.total_checked += checked
        report.violations.extend(viol)
        if slack is not None and (report.min_slack is None or slack < report.min_slack):
            report.min_slack, report.tight_example = slack, tight
    return report
