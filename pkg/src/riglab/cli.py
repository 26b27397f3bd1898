"""Command-line entry point: ``riglab <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import bounds as B
from .constructions import block_decompose, diagonal_shift, zero_outside
from .exact import ExactMatrix, numerical_rank, rank_exact, read_matrix, write_matrix
from .hadamard import exact_to_sign, sylvester, write_sign_matrix
from .oracle import rank1_bracket, rank_r_upper_search, relaxed_upper_search, SearchConfig
from .protocol import verify_nayak
from .reproduce import ReproduceConfig, run_reproduce, summarize
from .spectral import referee_chain_check
from .submatrix_verify import EXHAUSTIVE_CAP, scan_all_submatrices


@dataclass
class RunConfig:
    """Parsed options shared by every command; tolerances default per module."""

    command: str
    json: bool = False
    rank_rtol: float = 1e-8
    witness_rtol: float = 1e-7
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.rank_rtol <= 0 or self.witness_rtol <= 0:
            raise ValueError("tolerances must be positive")


def _emit(cfg: RunConfig, payload: dict, text: str | None = None) -> None:
    if cfg.json or text is None:
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(text)


def _index_list(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x.strip()]


def _load_sign(path):
    return exact_to_sign(read_matrix(path))


def _matrix_or_sylvester(args):
    if getattr(args, "matrix", None):
        return _load_sign(args.matrix)
    if getattr(args, "k", None) is not None:
        return sylvester(args.k)
    raise SystemExit("need --matrix FILE or --k K")


def cmd_gen(args, cfg):
    H = sylvester(args.sylvester)
    write_sign_matrix(H, args.out)
    _emit(cfg, {"n": H.n, "out": args.out, "hadamard": True}, f"wrote H_{H.n} to {args.out}")
    return 0


def cmd_rank(args, cfg):
    M = read_matrix(args.matrix)
    rk = rank_exact(M)
    payload = {"rows": M.rows, "cols": M.cols, "d": M.d, "rank_exact": rk,
               "rank_numerical": numerical_rank(M.to_real(), cfg.rank_rtol)}
    _emit(cfg, payload, f"rank {rk}")
    return 0


def cmd_bounds(args, cfg):
    theta = None if args.theta is None else Fraction(args.theta)
    rep = B.bound_report(B.BoundQuery(args.n, args.r, theta))
    payload = rep.to_json()
    lines = [f"{b.name:<26} {'-' if b.value is None else f'{float(b.value):.6g}':>12}  "
             f"{'applicable' if b.applicable else 'n/a':<10}  {b.source}" for b in rep.bounds]
    _emit(cfg, payload, "\n".join(lines))
    return 0


def cmd_verify_submatrix(args, cfg):
    H = _matrix_or_sylvester(args)
    cap = EXHAUSTIVE_CAP if not args.allow_large else ((1 << H.n) - 1) ** 2
    rep = scan_all_submatrices(H, args.mode, args.samples, args.seed, cap=cap)
    _emit(cfg, rep.to_json(),
          f"n={rep.n} {rep.mode}: checked {rep.total_checked}, "
          f"violations {len(rep.violations)}, min slack {rep.min_slack}")
    return 0 if rep.ok else 1


def cmd_protocol(args, cfg):
    H = _load_sign(args.matrix)
    Ht = read_matrix(args.approx)
    if args.rank is not None:
        rep = verify_nayak(H, Ht.to_real(), args.rank)
    elif Ht.rows <= 64:
        rep = verify_nayak(H, Ht)
    else:
        rep = verify_nayak(H, Ht.to_real(), rtol=cfg.rank_rtol)
    _emit(cfg, rep.to_json(),
          f"r={rep.r} ({rep.rank_source}) p_avg={rep.p_avg:.6g} <= {rep.nayak_rhs:.6g}: "
          f"{'pass' if rep.passed else 'FAIL'}; sum p = {rep.sum_p:.6g}")
    return 0 if rep.passed else 1


def cmd_construct(args, cfg):
    H = _matrix_or_sylvester(args)
    if args.shift:
        M, pert = diagonal_shift(H, -1 if args.sign == "minus" else 1)
        rk = rank_exact(M)
        claims = {"rank_is_n_over_2": rk == H.n // 2, "weight_is_n": pert.weight == H.n}
        name = "diagonal_shift"
    elif args.zero_outside:
        rows, cols = _index_list(args.rows), _index_list(args.cols)
        M, pert = zero_outside(H, rows, cols)
        rk = rank_exact(M)
        floor = B.thm1_submatrix_bound(len(rows), len(cols), H.n)
        claims = {"rank_at_least_ceil_ab_over_n": rk >= floor,
                  "weight_is_n2_minus_ab": pert.weight == H.n ** 2 - len(rows) * len(cols)}
        name = "zero_outside"
    elif args.blocks is not None:
        dec = block_decompose(H, args.blocks)
        payload = {"construction": "blocks", "block_size": dec.block_size,
                   "signs": dec.signs.tolist(), "claims_checked": {"verified": dec.verified}}
        _emit(cfg, payload, f"blocks of size {dec.block_size}: verified={dec.verified}")
        return 0 if dec.verified else 1
    else:
        raise SystemExit("choose --shift, --zero-outside or --blocks J")
    if args.out:
        write_matrix(M, args.out)
    payload = {"construction": name, "weight": pert.weight, "rank_exact": rk,
               "claims_checked": claims, "out": args.out}
    _emit(cfg, payload, f"{name}: weight {pert.weight}, rank {rk}, claims {claims}")
    return 0 if all(claims.values()) else 1


def _write_witness(H, pert, path):
    if pert is None or path is None:
        return None
    if pert.is_exact:
        T = pert.apply_exact(H)
    else:
        R = pert.apply_real(H)
        T = ExactMatrix(R.shape[0], R.shape[1], (Fraction(float(x)) for x in R.ravel()))
    write_matrix(T, path)
    return path


def cmd_oracle_r1(args, cfg):
    M = _matrix_or_sylvester(args)
    br = rank1_bracket(M)
    payload = br.to_json()
    payload["witness_file"] = _write_witness(M, br.witness, args.witness_out)
    _emit(cfg, payload, f"R_M(1) = {br.exact} (lower bound {float(br.lower):.6g})")
    return 0


def cmd_search(args, cfg):
    M = _matrix_or_sylvester(args)
    sc = SearchConfig(restarts=args.restarts, iterations=args.iterations,
                      rank_rtol=cfg.witness_rtol)
    if args.theta is None:
        br = rank_r_upper_search(M, args.r, args.budget, args.seed, sc)
    else:
        br = relaxed_upper_search(M, args.r, float(Fraction(args.theta)), args.budget, args.seed, sc)
    payload = br.to_json()
    payload["witness_file"] = _write_witness(M, br.witness, args.witness_out)
    _emit(cfg, payload, f"{float(br.lower):.6g} <= R <= {br.upper}  ({br.witness_source})")
    return 0


def cmd_spectral(args, cfg):
    H = _load_sign(args.matrix)
    Ht = read_matrix(args.approx).to_real()
    rep = referee_chain_check(H, Ht, cfg.rank_rtol)
    lines = [f"{'ok ' if link.holds else 'BAD'} {link.name}: {link.lhs:.6g} vs {link.rhs:.6g}"
             for link in rep.links]
    _emit(cfg, rep.to_json(), "\n".join(lines))
    return 0 if rep.holds else 1


def cmd_reproduce(args, cfg):
    rc = ReproduceConfig(seed=args.seed, samples_h8=args.samples, instances=args.instances)
    bundle = run_reproduce(rc)
    bundle["config"]["tolerances"] = {"rank_rtol": cfg.rank_rtol, "witness_rtol": cfg.witness_rtol}
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(bundle, fh, indent=2, default=str)
    _emit(cfg, bundle, summarize(bundle))
    return 0 if bundle["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="riglab", description=__doc__)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--rank-rtol", type=float, default=1e-8,
                   help="relative singular-value tolerance for numerical rank")
    p.add_argument("--witness-rtol", type=float, default=1e-7,
                   help="rank tolerance for search witnesses")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        return sp

    sp = add("gen", cmd_gen, "write a Sylvester Hadamard matrix")
    sp.add_argument("--sylvester", type=int, required=True, metavar="K")
    sp.add_argument("--out", required=True)

    sp = add("rank", cmd_rank, "exact rank of a matrix file")
    sp.add_argument("--matrix", required=True)

    sp = add("bounds", cmd_bounds, "evaluate the closed-form bounds")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--theta", default=None, help="change cap, decimal or p/q")

    sp = add("verify-submatrix", cmd_verify_submatrix, "check rank >= ceil(ab/n) on submatrices")
    sp.add_argument("--matrix")
    sp.add_argument("--k", type=int)
    sp.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--allow-large", action="store_true", help="lift the exhaustive cap")

    sp = add("protocol", cmd_protocol, "row-encoding success probabilities vs r/n")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--approx", required=True)
    sp.add_argument("--rank", type=int)

    sp = add("construct", cmd_construct, "shift, zero-outside and block constructions")
    sp.add_argument("--matrix")
    sp.add_argument("--k", type=int)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--shift", action="store_true")
    g.add_argument("--zero-outside", action="store_true")
    g.add_argument("--blocks", type=int, metavar="J")
    sp.add_argument("--sign", choices=["minus", "plus"], default="minus")
    sp.add_argument("--rows", default="")
    sp.add_argument("--cols", default="")
    sp.add_argument("--out")

    sp = add("oracle-r1", cmd_oracle_r1, "exact rank-1 rigidity of a +-1 matrix")
    sp.add_argument("--matrix")
    sp.add_argument("--k", type=int)
    sp.add_argument("--witness-out")

    sp = add("search", cmd_search, "heuristic upper bound on R_M(r) or R_M(r, theta)")
    sp.add_argument("--matrix")
    sp.add_argument("--k", type=int)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--theta", default=None)
    sp.add_argument("--budget", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=int, default=50)
    sp.add_argument("--iterations", type=int, default=500)
    sp.add_argument("--witness-out")

    sp = add("spectral", cmd_spectral, "trace / Cauchy-Schwarz chain vs sum of squares")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--approx", required=True)

    sp = add("reproduce", cmd_reproduce, "run every desk-scale check")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--instances", type=int, default=250)
    sp.add_argument("--out")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, json=args.json, rank_rtol=args.rank_rtol,
                    witness_rtol=args.witness_rtol)
    try:
        return args.func(args, cfg)
    except (ValueError, IndexError, OSError) as exc:
        print(f"riglab {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
