"""Desk-scale reproduction suite: every proven inequality checked on concrete instances."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .bounds import BoundQuery, thm2_rigidity_bound, thm3_relaxed_bound
from .constructions import block_decompose, diagonal_shift, midrijanis_lower_report, zero_outside
from .exact import ExactMatrix, rank_exact
from .hadamard import sylvester
from .instances import random_zero_outside, rowspace_projection, theta_perturbation
from .oracle import rank1_rigidity_exact
from .protocol import (StateVector, hadamard_povm_in_rowspace, regev_chain_check,
                       rowspace_isometry, thm3_chain_check, verify_nayak)
from .spectral import referee_chain_check
from .submatrix_verify import scan_all_submatrices


@dataclass
class ReproduceConfig:
    seed: int = 1
    samples_h8: int = 10_000
    instances: int = 250
    max_k: int = 4


def _suite(checked: int, violations: list, **details) -> dict:
    return {"checked": checked, "violations": violations, **details}


def suite_thm1(cfg: ReproduceConfig) -> dict:
    ex = scan_all_submatrices(sylvester(2), "exhaustive")
    sm = scan_all_submatrices(sylvester(3), "sampled", cfg.samples_h8, cfg.seed)
    viol = [asdict(v) for v in ex.violations + sm.violations]
    return _suite(ex.total_checked + sm.total_checked, viol,
                  exhaustive_h4=ex.to_json(), sampled_h8=sm.to_json())


def suite_thm2_oracle(cfg: ReproduceConfig) -> dict:
    rows, viol = [], []
    for k in (1, 2):
        n = 1 << k
        value, _ = rank1_rigidity_exact(sylvester(k))
        bound = thm2_rigidity_bound(BoundQuery(n, 1))
        rows.append({"n": n, "rank1_exact": value, "n2_over_4r": str(bound)})
        if value < bound:
            viol.append(rows[-1])
    return _suite(len(rows), viol, values=rows)


def suite_shift(cfg: ReproduceConfig) -> dict:
    certs, viol = [], []
    for k in range(1, cfg.max_k + 1):
        H = sylvester(k)
        n = H.n
        minus, pert = diagonal_shift(H, -1)
        plus, _ = diagonal_shift(H, +1)
        rk = rank_exact(minus)
        product_zero = (minus @ plus).is_zero()
        cert = {"n": n, "rank_exact": rk, "weight": pert.weight, "product_zero": product_zero,
                "rank_sum": rk + rank_exact(plus)}
        certs.append(cert)
        if rk != n // 2 or pert.weight != n or not product_zero or cert["rank_sum"] != n:
            viol.append(cert)
    return _suite(len(certs), viol, certificates=certs)


def suite_midrijanis(cfg: ReproduceConfig) -> dict:
    checked, viol, reports = 0, [], []
    for k in range(cfg.max_k + 1):
        H = sylvester(k)
        for j in range(k + 1):
            checked += 1
            if not block_decompose(H, j).verified:
                viol.append({"k": k, "j": j})
        r = 1
        while 2 * r <= 1 << k:
            rep = midrijanis_lower_report(k, r)
            checked += 1
            reports.append({"k": k, "r": r, "value": str(rep.value), "thm2": str(rep.thm2),
                            "equal": rep.matches})
            if not rep.matches:
                viol.append(reports[-1])
            r *= 2
    return _suite(checked, viol, reports=reports)


def _approximants(cfg: ReproduceConfig, rng):
    """Yield (H, Htilde, kind) over the three approximation families."""
    per = max(1, cfg.instances // 3)
    for t in range(per):
        H = sylvester(3 + t % 2)
        r = (1, 2, 4)[t % 3]
        yield H, rowspace_projection(H, r, rng), f"projection r={r}"
    for t in range(per):
        H = sylvester(2 + t % 2)
        M, _, _, _ = random_zero_outside(H, rng)
        yield H, M, "zero-outside"
    for t in range(per):
        H = sylvester(2 + t % 2)
        theta = (0.5, 1.0, 2.0)[t % 3]
        pert = theta_perturbation(H, theta, rng)
        yield H, pert.apply_real(H), f"theta={theta}"


def suite_nayak(cfg: ReproduceConfig) -> dict:
    rng = np.random.default_rng(cfg.seed)
    checked, viol = 0, []
    for H, Ht, kind in _approximants(cfg, rng):
        rep = verify_nayak(H, Ht)
        checked += 1
        if not rep.passed:
            viol.append({"kind": kind, **rep.to_json()})
    return _suite(checked, viol)


def suite_regev(cfg: ReproduceConfig) -> dict:
    rng = np.random.default_rng(cfg.seed + 1)
    checked, viol = 0, []
    for H, Ht, kind in _approximants(cfg, rng):
        T = Ht.to_real() if isinstance(Ht, ExactMatrix) else Ht
        A, coords = rowspace_isometry(T)
        povm = hadamard_povm_in_rowspace(H, A)
        live = np.linalg.norm(coords, axis=1) > 0
        # a zero row sends nothing; any unit state satisfies the per-outcome links
        states = [c if ok else np.eye(A.shape[1])[0] for c, ok in zip(coords, live)]
        rep = regev_chain_check([StateVector(s) for s in states], povm)
        checked += 1
        if not rep.holds:
            viol.append({"kind": kind, **rep.to_json()})
    return _suite(checked, viol)


def suite_thm3(cfg: ReproduceConfig) -> dict:
    rng = np.random.default_rng(cfg.seed + 2)
    checked, viol = 0, []
    counts = {"ok": 0, "vacuous": 0, "reversed": 0, "zero-row": 0}
    for t in range(cfg.instances):
        H = sylvester(2 + t % 2)
        theta = (0.5, 1.0, 2.0)[t % 3]
        pert = theta_perturbation(H, theta, rng)
        rep = thm3_chain_check(H, pert)
        checked += 1
        for key in counts:
            counts[key] += rep.count(key)
        if not rep.holds:
            viol.append(rep.to_json())
    closed = thm3_relaxed_bound(BoundQuery(4, 2, Fraction(1)))
    if closed != Fraction(16, 7):
        viol.append({"thm3(4,2,1)": str(closed)})
    return _suite(checked, viol, row_status=counts, thm3_4_2_1=str(closed))


def suite_spectral(cfg: ReproduceConfig) -> dict:
    rng = np.random.default_rng(cfg.seed + 3)
    checked, viol, tighter = 0, [], 0
    for H, Ht, kind in _approximants(cfg, rng):
        rep = referee_chain_check(H, Ht)
        checked += 1
        tighter += rep.quantum_tighter
        if not rep.holds:
            viol.append({"kind": kind, **rep.to_json()})
    H = sylvester(2)
    M, _ = zero_outside(H, [0, 1], [0, 1, 2, 3])
    demo = referee_chain_check(H, M)
    return _suite(checked, viol, quantum_tighter_count=tighter, zero_outside_h4=demo.to_json())


def suite_headline(cfg: ReproduceConfig) -> dict:
    t2 = thm2_rigidity_bound(BoundQuery(8, 2))
    mid = midrijanis_lower_report(3, 2)
    rows = {"thm2_8_2": str(t2), "midrijanis_3_2": str(mid.value), "equal": t2 == mid.value}
    return _suite(1, [] if rows["equal"] else [rows], **rows)


SUITES = {
    "thm1_submatrix": suite_thm1,
    "thm2_rank1_oracle": suite_thm2_oracle,
    "shift_construction": suite_shift,
    "midrijanis_blocks": suite_midrijanis,
    "nayak": suite_nayak,
    "regev_chain": suite_regev,
    "thm3_chain": suite_thm3,
    "spectral_chain": suite_spectral,
    "headline_values": suite_headline,
}


def run_reproduce(cfg: ReproduceConfig = ReproduceConfig()) -> dict:
    bundle = {"config": asdict(cfg), "suites": {}}
    total = 0
    for name, fn in SUITES.items():
        t0 = time.perf_counter()
        res = fn(cfg)
        res["seconds"] = round(time.perf_counter() - t0, 4)
        total += len(res["violations"])
        bundle["suites"][name] = res
    bundle["total_violations"] = total
    bundle["ok"] = total == 0
    return bundle


def summarize(bundle: dict) -> str:
    lines = []
    for name, res in bundle["suites"].items():
        flag = "PASS" if not res["violations"] else "FAIL"
        lines.append(f"{flag}  {name:<20} checked={res['checked']:<6} "
                     f"violations={len(res['violations'])}  ({res['seconds']:.2f}s)")
    lines.append(f"total violations: {bundle['total_violations']}")
    return "\n".join(lines)
