"""Command-line front end.

Exit codes: 0 success, 1 negative membership answer, 2 invalid input,
3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import __version__
from .gf2 import NotSymplecticError
from .io import ParseError, parse_matrix, parse_monodromy
from .sampling import DEFAULT_SEED
from .symplectic import (
    DomainError,
    SymplecticIntegerMatrix,
    TokenError,
    decompose,
    gamma_member,
    igusa_member,
    k_member,
    remark3_member,
    theta_member,
)
from .theta import InvariantViolation, SurfaceRelationError, sigma, signature_mod8
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_NO = 1
EXIT_INVALID = 2
EXIT_INVARIANT = 3


class UsageError(ValueError):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _integer_matrix(path: str) -> SymplecticIntegerMatrix:
    X = parse_matrix(_read(path))
    if not isinstance(X, SymplecticIntegerMatrix):
        raise UsageError("this command needs an integer matrix (header 'mod 0')")
    return X


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def cmd_member(args) -> int:
    X = _integer_matrix(args.file)
    group = args.group
    if group in ("gamma", "igusa") and args.n is None:
        raise UsageError(f"--group {group} needs --n")
    if args.n is not None and args.n < 1:
        raise UsageError("--n must be a positive integer")
    if group == "gamma":
        answer = gamma_member(X, args.n)
    elif group == "igusa":
        answer = igusa_member(X, args.n)
    elif group == "theta":
        answer = theta_member(X)
    elif group == "k":
        answer = k_member(X)
    else:
        answer = remark3_member(X)
    _emit(args, {"group": group, "n": args.n, "member": answer}, "yes" if answer else "no")
    return EXIT_OK if answer else EXIT_NO


def cmd_sigma(args) -> int:
    X = _integer_matrix(args.file)
    if args.out == "word":
        word = decompose(X)
        tokens = [str(t) for t in word.tokens]
        _emit(args, {"g": X.g, "word": tokens}, "\n".join(tokens) if tokens else "")
        return EXIT_OK
    U = sigma(X).rep
    triples = U.triples()
    text = "\n".join(f"{re} {im} {k}" for re, im, k in triples)
    _emit(args, {"g": X.g, "dim": U.dim, "entries": [list(t) for t in triples]}, text)
    return EXIT_OK


def cmd_signature(args) -> int:
    pairs = parse_monodromy(_read(args.file))
    value = signature_mod8(pairs)
    _emit(args, {"handles": len(pairs), "signature_mod8": value}, str(value))
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = DEFAULT_SEED if args.seed is None else args.seed
    results = []
    failed = False
    if not args.json:
        print(f"seed {seed}", flush=True)
    for r in run_suite(args.suite, args.g_max, seed, args.samples):
        failed |= r.status == "FAIL"
        if args.json:
            results.append(r.as_dict())
        else:
            print(r.line, flush=True)
    if args.json:
        print(json.dumps({"seed": seed, "results": results, "ok": not failed}, sort_keys=True))
    return EXIT_NO if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sympsig", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--json", action="store_true", help="print JSON instead of plain text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("member", help="subgroup membership of an integer symplectic matrix")
    p.add_argument("file", help="matrix file, '-' for stdin")
    p.add_argument("--group", required=True, choices=["gamma", "igusa", "theta", "k", "remark3"])
    p.add_argument("--n", type=int, default=None, help="level N for gamma and igusa")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("sigma", help="exact projective image of a matrix, or its generator word")
    p.add_argument("file", help="matrix file, '-' for stdin")
    p.add_argument("--out", choices=["entries", "word"], default="entries")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("signature-mod8", help="signature mod 8 of a surface bundle from its monodromy")
    p.add_argument("file", help="monodromy file, '-' for stdin")
    p.set_defaults(func=cmd_signature)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--g-max", type=int, default=2)
    p.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    p.add_argument("--seed", type=int, default=None, help=f"default {DEFAULT_SEED}")
    p.add_argument("--samples", type=int, default=200, help="random samples per property check")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8", line_buffering=True)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify" and args.g_max < 1:
            raise UsageError("--g-max must be at least 1")
        return args.func(args)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except InvariantViolation as exc:
        print(f"error: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except SurfaceRelationError as exc:
        print(f"error: not a surface-bundle monodromy: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ParseError, UsageError, DomainError, NotSymplecticError, TokenError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
