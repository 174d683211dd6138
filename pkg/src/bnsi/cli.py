"""Command-line front end: ``bnsi <command> ...``.

Exit codes: 0 success, 2 a checked object is invalid (encoder, problem,
decode failure), 3 a brute-force guard was exceeded, 64 usage error,
65 unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .bounds import (
    bounds_report,
    ecc_based_encoder,
    partition_optimizer,
    simple_scheme,
    upper_bound_disjoint,
    upper_bound_mds,
    upper_bound_mds_disjoint,
)
from .codes import LinearCodeSpec
from .decoder import build_decoder, decode
from .errors import (
    BnsiError,
    DistanceTooSmall,
    GuardExceeded,
    InvalidEncoder,
    InvalidProblem,
    ParseError,
    PreconditionViolated,
    SyndromeNotFound,
)
from .gf import matrix_from_text, matrix_to_text
from .index_coding import ic_acyclic_lower_bound, reduce_to_ic, save_ic
from .oracle import optimal_codelength_exhaustive, optimal_codelength_subspace
from .problem import lint_problem, load_problem
from .sim import simulate
from .structure import b_max, disjoint_phi_collection, phi_emptiness
from .validity import as_encoder, is_valid, necessary_check

__version__ = "0.1.0"

EXIT_INVALID = 2
EXIT_GUARD = 3
EXIT_USAGE = 64
EXIT_DATA = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read_source(name: str) -> str:
    """Read a file, or a bundled fixture by name (with or without .txt)."""
    path = Path(name)
    if path.is_file():
        return path.read_text()
    fixtures = resources.files("bnsi") / "fixtures"
    for cand in (name, f"{name}.txt"):
        res = fixtures / cand
        if res.is_file():
            return res.read_text()
    raise FileNotFoundError(f"no such file or fixture: {name}")


def _problem(args):
    p = load_problem(_read_source(args.problem))
    if getattr(args, "q", None):
        p = p.with_field(args.q)
    return p


def _matrix(name, p):
    return as_encoder(p, matrix_from_text(_read_source(name)))


def _vector(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()]


def _emit(args, text_lines, data):
    if args.format == "structured":
        print(json.dumps(data, indent=2))
    else:
        print("\n".join(text_lines))


def _write(path, text):
    Path(path).write_text(text)


# commands


def cmd_validate(args) -> int:
    p = _problem(args)
    warnings = lint_problem(p)
    if args.matrix is None:
        _emit(args, [f"problem ok: {p}"] + [f"warning: {w}" for w in warnings],
              {"problem_valid": True, "warnings": warnings})
        return 0
    L = _matrix(args.matrix, p)
    res = necessary_check(p, L) if args.method == "necessary" else is_valid(p, L, args.method)
    lines = [f"valid: {str(res.valid).lower()} ({res.method})"]
    if res.witness is not None:
        lines.append(f"witness: {res.witness}")
    _emit(args, lines, {"valid": res.valid, "method": res.method,
                        "witness": list(res.witness) if res.witness else None})
    return 0 if res.valid else EXIT_INVALID


def cmd_solve(args) -> int:
    p = _problem(args)
    if args.method == "exhaustive":
        n_max = p.n if args.n_max is None else args.n_max
        N = optimal_codelength_exhaustive(p, n_max)
        _emit(args, [f"N_opt: {N if N is not None else f'> {n_max}'}"],
              {"N_opt": N, "method": "exhaustive", "N_max": n_max})
        return 0
    N, L = optimal_codelength_subspace(p)
    if args.out:
        _write(args.out, matrix_to_text(L))
    _emit(args, [f"N_opt: {N}", "encoder:", matrix_to_text(L).rstrip()],
          {"N_opt": N, "method": "subspace", "encoder": L.tolist()})
    return 0


def cmd_bounds(args) -> int:
    p = _problem(args)
    r = bounds_report(p, oracle=args.oracle)
    data = r.as_dict()
    lines = [f"problem: {p}"]
    for name, b in r.bounds.items():
        val = "unknown" if b.value is None else str(b.value)
        extra = f"  ({b.reason})" if b.reason else ""
        lines.append(f"{name}: {val}  [{b.tag}]{extra}")
    lines.append(f"best lower: {r.best_lower}")
    lines.append(f"best upper: {r.best_upper}")
    if args.oracle:
        lines.append(f"N_opt: {'unknown' if r.oracle is None else r.oracle}")
    if r.best_lower == r.best_upper:
        lines.append(f"N_opt pinned at {r.best_lower}")
    for v in r.violations:
        lines.append(f"VIOLATION: {v}")
    _emit(args, lines, data)
    return EXIT_INVALID if r.violations else 0


def cmd_construct(args) -> int:
    p = _problem(args)
    scheme = args.scheme
    if scheme == "simple":
        L = simple_scheme(p, check=True)
    elif scheme == "ecc":
        if not args.code:
            raise UsageError("construct --scheme ecc needs --code")
        H = matrix_from_text(_read_source(args.code))
        L = ecc_based_encoder(p, LinearCodeSpec(H), check=True)
    else:
        if scheme == "partition":
            res = partition_optimizer(p)
            L = res.matrix if res is not None else None
        else:
            fn = {"mds": upper_bound_mds, "disjoint": upper_bound_disjoint,
                  "mds-disjoint": upper_bound_mds_disjoint}[scheme]
            b = fn(p)
            if not b.available:
                print(f"unavailable: {b.reason}", file=sys.stderr)
                return EXIT_INVALID
            L = b.matrix
        if L is None:
            print("unavailable: Phi is empty", file=sys.stderr)
            return EXIT_INVALID
    if args.out:
        _write(args.out, matrix_to_text(L))
    _emit(args, [f"N: {L.cols}", matrix_to_text(L).rstrip()],
          {"scheme": scheme, "N": L.cols, "encoder": L.tolist()})
    return 0


def cmd_analyze(args) -> int:
    p = _problem(args)
    phi = phi_emptiness(p)
    data = {
        "phi_empty": phi.is_empty,
        "c_max": sorted(phi.witness) if phi.witness else None,
        "deleted_users": list(phi.deleted_users),
    }
    lines = [f"Phi empty: {str(phi.is_empty).lower()}"]
    if phi.witness:
        lines.append(f"C_max: {sorted(phi.witness)}")
    lines.append(f"deleted users: {list(phi.deleted_users)}")
    try:
        B = sorted(b_max(p))
        data["b_max"] = B
        lines.append(f"B_max: {B} (size {len(B)})")
    except GuardExceeded as e:
        data["b_max"] = None
        lines.append(f"B_max: unknown ({e})")
    coll = disjoint_phi_collection(p)
    data["disjoint_collection"] = [sorted(c) for c in coll.parts]
    data["disjoint_mode"] = coll.mode
    lines.append(f"disjoint collection ({coll.mode}): {[sorted(c) for c in coll.parts]}")
    _emit(args, lines, data)
    return 0


def cmd_decode(args) -> int:
    p = _problem(args)
    L = _matrix(args.matrix, p)
    d = build_decoder(p, L, args.user, fallback=True)
    c, xe = _vector(args.codeword), _vector(args.side_info)
    try:
        x = decode(d, c, xe)
    except SyndromeNotFound as e:
        print(f"decode failed: {e}", file=sys.stderr)
        return EXIT_INVALID
    lines = [f"user {args.user}: x_X = {' '.join(map(str, x))}",
             f"beta: {list(d.beta)}", f"syndrome: {list(d.syndrome(c, xe))}"]
    data = {"user": args.user, "X": list(d.X), "x": list(x), "beta": list(d.beta),
            "syndrome": list(d.syndrome(c, xe))}
    if args.table and d.uses_table:
        table = d.table
        lines.append("syndrome table:")
        lines += [f"  {''.join(map(str, s))} -> {''.join(map(str, e))}" for s, e in sorted(table.items())]
        data["table"] = [[list(s), list(e)] for s, e in sorted(table.items())]
    _emit(args, lines, data)
    return 0


def cmd_reduce(args) -> int:
    p = _problem(args)
    ic = reduce_to_ic(p, dedupe=not args.keep_duplicates)
    if args.out:
        _write(args.out, save_ic(ic))
    lines = [f"generated users (m_hat): {ic.m_hat_formula}", f"distinct users: {ic.m_distinct}"]
    users = []
    for (f, side), (i, j, Q) in zip(ic.users, ic.provenance):
        lines.append(f"  demand x{f}  side {sorted(side)}  from user {i}, p={j}, Q={list(Q)}")
        users.append({"demand": f, "side": sorted(side), "from": [i, j, list(Q)]})
    data = {"m_hat": ic.m_hat_formula, "m_distinct": ic.m_distinct, "users": users}
    if args.acyclic:
        lb = ic_acyclic_lower_bound(ic)
        lines.append(f"acyclic lower bound: {lb}")
        data["acyclic_lower_bound"] = lb
    _emit(args, lines, data)
    return 0


def cmd_simulate(args) -> int:
    p = _problem(args)
    L = _matrix(args.matrix, p)
    r = simulate(p, L, args.trials, args.seed, fault_weight=args.fault_weight)
    lines = [f"trials: {r.trials}", f"channel uses: N = {r.N} of n = {r.n} (savings {r.savings})"]
    lines += [f"user {i}: {s}/{r.trials} decoded" for i, s in r.users]
    lines.append(f"failures: {r.failures}")
    _emit(args, lines, r.as_dict())
    return 0 if r.failures == 0 or args.fault_weight is not None else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="bnsi", description="Linear coding for broadcast with noisy side information.")
    ap.add_argument("--format", choices=["text", "structured"], default="text")
    ap.add_argument("--version", action="version", version=f"bnsi {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_problem(sp):
        sp.add_argument("--problem", required=True, help="problem file or bundled fixture name")
        sp.add_argument("--q", type=int, help="override the problem's field size")
        return sp

    sp = with_problem(sub.add_parser("validate", help="check a problem, or an encoder for it"))
    sp.add_argument("--matrix")
    sp.add_argument("--method", choices=["rank", "enumeration", "both", "necessary"], default="rank")
    sp.set_defaults(func=cmd_validate)

    sp = with_problem(sub.add_parser("solve", help="optimal codelength by brute force"))
    sp.add_argument("--method", choices=["subspace", "exhaustive"], default="subspace")
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_solve)

    sp = with_problem(sub.add_parser("bounds", help="all lower and upper bounds"))
    sp.add_argument("--oracle", action="store_true")
    sp.set_defaults(func=cmd_bounds)

    sp = with_problem(sub.add_parser("construct", help="build an encoder"))
    sp.add_argument("--scheme", required=True,
                    choices=["simple", "mds", "disjoint", "mds-disjoint", "partition", "ecc"])
    sp.add_argument("--code", help="parity-check matrix file for --scheme ecc")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_construct)

    sp = with_problem(sub.add_parser("analyze", help="Phi, C_max, B_max, disjoint collection"))
    sp.set_defaults(func=cmd_analyze)

    sp = with_problem(sub.add_parser("decode", help="decode one user's reception"))
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--user", type=int, required=True)
    sp.add_argument("--codeword", required=True)
    sp.add_argument("--side-info", required=True)
    sp.add_argument("--table", action="store_true", help="also print the syndrome table")
    sp.set_defaults(func=cmd_decode)

    sp = with_problem(sub.add_parser("reduce", help="reduce to index coding"))
    sp.add_argument("--out")
    sp.add_argument("--keep-duplicates", action="store_true")
    sp.add_argument("--acyclic", action="store_true", help="also compute the acyclic lower bound")
    sp.set_defaults(func=cmd_reduce)

    sp = with_problem(sub.add_parser("simulate", help="random retransmission rounds"))
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--fault-weight", type=int, help="force this error weight (beyond delta_s)")
    sp.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except GuardExceeded as e:
        print(f"guard exceeded: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (ParseError, FileNotFoundError, UnicodeDecodeError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (InvalidProblem, InvalidEncoder, PreconditionViolated, DistanceTooSmall) as e:
        print(f"invalid: {e}", file=sys.stderr)
        return EXIT_INVALID
    except BnsiError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
