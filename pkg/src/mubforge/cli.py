"""Command-line interface: ``mubforge {catalog,gen,bases,verify,table1,ingest}``.

Exit codes: 0 success / verification passed, 1 verification failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import is_prime
from .bases import mub_family_dd, meb_family_d_lambda_d, mub_family_p_p2
from .designs import (
    BUILTIN_NAMES,
    DifferenceMatrix,
    dm_builtin,
    dm_construct_cyclic_smallest_prime,
    dm_construct_gf_mult,
    dm_construct_qq1,
    dm_from_json,
    dm_normalize,
    dm_to_json,
    dm_verify,
)
from .fileio import family_from_json, family_to_json, report_to_json
from .hadamard import fourier, hw_power
from .verify import DEFAULT_TOL, family_report

DM_DIR_ENV = "MUBFORGE_DM_DIR"

# d -> N for the (d,N,1)-DMs whose existence is known but which are not built in
TABLE1_TARGETS = {12: 6, 21: 6, 24: 8, 33: 6, 39: 6, 48: 9, 51: 6, 57: 7, 75: 8, 273: 16}


class UsageError(Exception):
    """Bad parameters or malformed input; maps to exit code 2."""


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _dm_params(M: DifferenceMatrix) -> str:
    return f"d={M.d} N={M.n_rows} λ={M.lam}"


# ---------------------------------------------------------------------------
# catalog


def cmd_catalog(args) -> int:
    for name in BUILTIN_NAMES:
        M = dm_builtin(name)
        print(f"{name} over {M.group.label}: {_dm_params(M)}")
    return 0


# ---------------------------------------------------------------------------
# gen


def _construct(args) -> DifferenceMatrix:
    kind = args.construction
    try:
        if kind == "gf-mult":
            return dm_construct_gf_mult(_need(args.q, "--q"))
        if kind == "qq1":
            return dm_construct_qq1(_need(args.q, "--q"))
        if kind == "cyclic-smallest-prime":
            return dm_construct_cyclic_smallest_prime(_need(args.d, "--d"))
        return dm_builtin(_need(args.name, "--name"))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required for this construction")
    return value


def cmd_gen(args) -> int:
    M = _construct(args)
    report = dm_verify(M)
    if not report:
        raise UsageError(f"construction failed verification: {report.violation}")
    _write(dm_to_json(M), args.out)
    return 0


# ---------------------------------------------------------------------------
# DM lookup shared by bases / table1 / ingest


def _load_dm_file(path: Path) -> DifferenceMatrix:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return dm_from_json(text, name=path.stem)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _resolve_dm(ref: str) -> DifferenceMatrix:
    if ref in BUILTIN_NAMES:
        return dm_builtin(ref)
    path = Path(ref)
    if path.is_file():
        return _load_dm_file(path)
    dm_dir = os.environ.get(DM_DIR_ENV)
    if dm_dir:
        for cand in (Path(dm_dir) / ref, Path(dm_dir) / f"{ref}.json"):
            if cand.is_file():
                return _load_dm_file(cand)
    raise UsageError(f"no built-in or file named {ref!r}")


def _hadamard(selector: str, order: int) -> np.ndarray:
    if selector == "fourier":
        return fourier(order)
    if selector.startswith("hw:"):
        try:
            r = int(selector[3:])
        except ValueError as exc:
            raise UsageError(f"bad Hadamard selector {selector!r}") from exc
        if not is_prime(order):
            raise UsageError(f"hw:{r} needs a prime order, got {order}")
        return hw_power(order, r)
    raise UsageError(f"unknown Hadamard selector {selector!r} (use 'fourier' or 'hw:<r>')")


def _hadamard_list(selectors, count: int, order: int, flag: str) -> list[np.ndarray]:
    selectors = selectors or ["fourier"]
    if len(selectors) == 1:
        selectors = selectors * count
    if len(selectors) != count:
        raise UsageError(f"{flag} given {len(selectors)} times; need 1 or {count}")
    return [_hadamard(s, order) for s in selectors]


def _family_from_dm(M: DifferenceMatrix, h1, h2):
    report = dm_verify(M)
    if not report:
        raise UsageError(f"difference matrix fails verification: {report.violation}")
    if M.lam == 1:
        if h2:
            raise UsageError("--hadamard2 only applies to lambda >= 2 difference matrices")
        if not M.normalized:
            M = dm_normalize(M)
        return mub_family_dd(M, _hadamard_list(h1, M.n_rows, M.d, "--hadamard"))
    try:
        n_balanced = M.n_rows - int(np.any(np.all(M.rows == 0, axis=1)))
        H1s = _hadamard_list(h1, n_balanced - 1, M.d, "--hadamard")
        H2s = _hadamard_list(h2, n_balanced, M.lam, "--hadamard2")
        return meb_family_d_lambda_d(M, H1s, H2s)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# bases


def cmd_bases(args) -> int:
    if args.theorem:
        if args.dm:
            raise UsageError("use either --dm or --theorem, not both")
        if args.p is None or not is_prime(args.p):
            raise UsageError("--theorem p-p2 needs a prime --p")
        family = mub_family_p_p2(args.p)
    elif args.dm:
        family = _family_from_dm(_resolve_dm(args.dm), args.hadamard, args.hadamard2)
    else:
        raise UsageError("give --dm <file|builtin> or --theorem p-p2 --p <p>")
    _write(family_to_json(family), args.out)
    return 0


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    report_path = args.report or f"{args.input}.report.json"
    try:
        try:
            text = Path(args.input).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc}") from exc
        try:
            family = family_from_json(text)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    except UsageError as exc:
        Path(report_path).write_text(
            json.dumps({"verdict": "malformed", "error": str(exc)}, indent=2) + "\n", encoding="utf-8"
        )
        raise
    report = family_report(family, args.tolerance)
    Path(report_path).write_text(report_to_json(report), encoding="utf-8")
    print(f"{'PASS' if report.passed else 'FAIL'}: {report.summary}")
    if not report.passed:
        for p in report.pairs:
            if not p.passed:
                print(f"  pair ({p.first},{p.second}): |<u|v>| in [{p.min_magnitude:.6g}, "
                      f"{p.max_magnitude:.6g}], expected {p.expected:.6g}")
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# table1


def _find_dm(dm_dir: Path | None, d: int) -> DifferenceMatrix | None:
    if dm_dir is None or not dm_dir.is_dir():
        return None
    best = None
    for path in sorted(dm_dir.glob("*.json")):
        try:
            M = dm_from_json(path.read_text(encoding="utf-8"), name=path.stem)
        except (ValueError, OSError):
            continue
        if M.d != d or M.lam != 1 or not dm_verify(M):
            continue
        if best is None or M.n_rows > best.n_rows:
            best = M
    return best


def cmd_table1(args) -> int:
    dm_dir = args.dm_dir or os.environ.get(DM_DIR_ENV)
    dm_dir = Path(dm_dir) if dm_dir else None
    print("d\tM(d,d) lower bound (verified here)")
    for d, n in TABLE1_TARGETS.items():
        M = dm_builtin("12-6-1") if d == 12 else _find_dm(dm_dir, d)
        if M is None:
            print(f"{d}\tneeds ({d},{n},1)-DM file (requires external DM file)")
            continue
        if d * d > args.max_dim:
            print(f"{d}\tskipped: dimension {d * d} exceeds --max-dim {args.max_dim}")
            continue
        family = mub_family_dd(dm_normalize(M), [fourier(d)] * M.n_rows)
        report = family_report(family, args.tolerance)
        value = report.verified_meb_count if report.passed else f"FAILED ({report.summary})"
        print(f"{d}\t{value}")
    return 0


# ---------------------------------------------------------------------------
# ingest


def cmd_ingest(args) -> int:
    M = _load_dm_file(Path(args.input))
    report = dm_verify(M)
    if not report:
        i, j, g, count = report.violation
        print(f"INVALID: rows {i},{j}: element {g} occurs {count} times, expected {M.lam}")
        return 1
    if args.normalize:
        M = dm_normalize(M)
    print(f"valid ({M.d},{M.n_rows},{M.lam})-DM over {M.group.label}"
          f"{' (normalized)' if M.normalized else ''}")
    if args.out:
        _write(dm_to_json(M), args.out)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mubforge",
        description="Build and verify mutually unbiased bases from difference matrices.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list built-in difference matrices")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("gen", help="write a difference matrix as JSON")
    p.add_argument("--construction", required=True,
                   choices=["gf-mult", "qq1", "cyclic-smallest-prime", "builtin"])
    p.add_argument("--q", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--name")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bases", help="construct a basis family and write it as JSON")
    p.add_argument("--dm", help="built-in name, DM file, or file name inside $" + DM_DIR_ENV)
    p.add_argument("--theorem", choices=["p-p2"])
    p.add_argument("--p", type=int)
    p.add_argument("--hadamard", action="append",
                   help="'fourier' or 'hw:<r>'; once for all bases or once per basis")
    p.add_argument("--hadamard2", action="append",
                   help="second-factor Hadamards (order lambda) for lambda >= 2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bases)

    p = sub.add_parser("verify", help="verify a basis family file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--report", help="report path (default: <in>.report.json)")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table1", help="lower bounds on M(d,d) achievable from available DMs")
    p.add_argument("--dm-dir")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-dim", type=int, default=3600,
                   help="largest d*d verified densely")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("ingest", help="re-verify a difference matrix file")
    p.add_argument("input")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ingest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
