"""Command-line entry point: ``cubecorr <command> ...``.

Exit status is 0 when every checked bound holds (or does not apply), 2 when a
violation or identity disagreement is found, and 1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .core import (
    MAX_N_ENV,
    CubeError,
    DimensionMismatch,
    dumps,
    fourier_transform,
    function_to_json,
    inverse_transform,
    load_function,
    load_spectrum,
    spectrum_to_json,
)
from .explorer import (
    RATIO_FIELDS,
    SCAN_BOUNDS,
    csv_text,
    majority_sequence,
    monotone_tables,
    monotone_tables_by_filter,
    scan_pairs,
    tightness_scan,
    tribes_sequence,
    hamming_sequence,
)
from .families import FAMILIES, FamilySpec, generate
from .identities import IDENTITIES, kernel_bound_check, level_d_kernel_check
from .inequalities import BOUND_PARAMS, BOUNDS, SINGLE, verify
from .quadrature import QuadratureError, QuadratureSpec
from .structure import NotApplicable, analyze

THREADS_ENV = "CUBECORR_THREADS"
EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2
DEFAULT_R_GRID = "1,e^0.5,e,e^2,e^4,e^8,e^16"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _r_value(tok: str) -> float:
    """Accepts plain numbers, ``e`` and ``e^x``."""
    tok = tok.strip()
    if tok == "e":
        return math.e
    if tok.startswith("e^"):
        return math.exp(float(tok[2:]))
    return float(tok)


def _r_list(text: str) -> list[float]:
    try:
        return [_r_value(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected R values like 1,e,e^2, got {text!r}") from None


def _threads_default() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{THREADS_ENV}={raw!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cubecorr", description="Correlation inequalities on the Boolean hypercube.")
    p.add_argument("--version", action="version", version=f"cubecorr {__version__}")
    p.add_argument("--max-n", type=int, help=f"largest dimension accepted (default ${MAX_N_ENV} or 26)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a family member")
    g.add_argument("--family", choices=FAMILIES)
    g.add_argument("--spec", help="FamilySpec JSON file (overrides the family flags)")
    g.add_argument("--n", type=int)
    g.add_argument("--coords", type=_int_list)
    g.add_argument("--k", type=int)
    g.add_argument("--width", type=int)
    g.add_argument("--count", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--universe", type=int, default=8)
    g.add_argument("--atoms", type=int, default=6)
    g.add_argument("--weights", type=_float_list)
    g.add_argument("--dual", action="store_true")
    g.add_argument("--compact", action="store_true", help="write boolean tables as bits_hex")
    g.add_argument("--out")

    a = sub.add_parser("analyze", help="structural profile of a function")
    a.add_argument("--f", required=True)
    a.add_argument("--out")

    w = sub.add_parser("fwht", help="function to spectrum, or back with --inverse")
    w.add_argument("--in", dest="inp", required=True)
    w.add_argument("--inverse", action="store_true")
    w.add_argument("--out")

    v = sub.add_parser("verify", help="check one bound on a pair")
    v.add_argument("--bound", required=True, choices=sorted(BOUNDS))
    v.add_argument("--f", required=True)
    v.add_argument("--g")
    _bound_flags(v)
    v.add_argument("--p", type=float)
    v.add_argument("--q", type=float)
    v.add_argument("--t", type=float)
    v.add_argument("--out")

    i = sub.add_parser("identity", help="check an identity on a pair")
    i.add_argument("--id", dest="identity", required=True, choices=sorted(IDENTITIES))
    i.add_argument("--f", required=True)
    i.add_argument("--g", required=True)
    i.add_argument("--d", type=int)
    i.add_argument("--i", type=int)
    i.add_argument("--j", type=int)
    i.add_argument("--s", type=float)
    i.add_argument("--t", type=float)
    i.add_argument("--rel-tol", type=float, default=QuadratureSpec.rel_tol)
    i.add_argument("--min-horizon", type=float, default=QuadratureSpec.min_horizon)
    i.add_argument("--out")

    s = sub.add_parser("scan", help="evaluate a bound over all (or sampled) ordered pairs")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--bound", required=True, choices=SCAN_BOUNDS)
    s.add_argument("--filter", default="all")
    _bound_flags(s)
    s.add_argument("--universe", choices=("monotone", "boolean"), default="monotone")
    s.add_argument("--allow-n5", action="store_true", help="permit the n=5 exhaustive scan")
    s.add_argument("--samples", type=int, help="scan a seeded sample of this many functions instead")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int)
    s.add_argument("--summary", help="also write the ScanResult JSON here")
    s.add_argument("--out", help="CSV path (default stdout)")

    e = sub.add_parser("enumerate", help="list monotone boolean functions")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--method", choices=("recursive", "filter"), default="recursive")
    e.add_argument("--count-only", action="store_true")
    e.add_argument("--out")

    t = sub.add_parser("tightness", help="ratio table for a family sequence")
    t.add_argument("--family", choices=("majority", "tribes", "hamming"), required=True)
    t.add_argument("--ns", type=_int_list, help="odd n for majority")
    t.add_argument("--configs", help="width:count (tribes) or n:k (hamming) pairs, comma separated")
    t.add_argument("--out")

    k = sub.add_parser("kernel", help="tabulate I(R) against its bounds")
    k.add_argument("--R", dest="rs", type=_r_list, default=_r_list(DEFAULT_R_GRID))
    k.add_argument("--d", type=int, default=2)
    k.add_argument("--rel-tol", type=float, default=QuadratureSpec.rel_tol)
    k.add_argument("--out")
    return p


def _bound_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theta", type=float)
    p.add_argument("--d", type=int)
    p.add_argument("--i", type=int)


def _bound_params(bound: str, args) -> dict:
    allowed = BOUND_PARAMS.get(bound, {})
    params = {}
    for name in ("theta", "d", "i", "p", "q", "t"):
        val = getattr(args, name, None)
        if val is None:
            continue
        if name not in allowed:
            raise UsageError(f"--{name} does not apply to bound {bound!r}")
        params[name] = val
    return params


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _envelope(command: str, params: dict, body: dict) -> dict:
    return {"tool": "cubecorr", "version": __version__, "command": command, "params": params, **body}


def _load_pair(args):
    f = load_function(args.f)
    g = load_function(args.g) if args.g else None
    if g is not None and f.n != g.n:
        raise DimensionMismatch(f"--f {args.f} has n={f.n} but --g {args.g} has n={g.n}")
    return f, g


def cmd_gen(args) -> int:
    if args.spec:
        from .core import _read_json

        spec = FamilySpec.from_dict(_read_json(args.spec))
    else:
        if args.family is None or args.n is None:
            raise UsageError("gen needs --family and --n (or --spec)")
        spec = FamilySpec(
            args.family, args.n, args.coords, args.k, args.width, args.count,
            args.seed, args.universe, args.atoms, args.weights, args.dual,
        )
    f = generate(spec)
    _emit(dumps(function_to_json(f, compact=args.compact and f.kind == "boolean")), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    f = load_function(args.f)
    body = {"profile": analyze(f).to_dict()}
    _emit(dumps(_envelope("analyze", {"f": args.f}, body)), args.out)
    return EXIT_OK


def cmd_fwht(args) -> int:
    if args.inverse:
        obj = function_to_json(inverse_transform(load_spectrum(args.inp)))
    else:
        obj = spectrum_to_json(fourier_transform(load_function(args.inp)))
    _emit(dumps(obj), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    params = _bound_params(args.bound, args)
    f, g = _load_pair(args)
    if g is None and args.bound not in SINGLE:
        raise UsageError(f"--g is required for bound {args.bound!r}")
    report = verify(args.bound, f, g, **params)
    echo = {"bound": args.bound, "f": args.f, "g": args.g, **report.params}
    _emit(dumps(_envelope("verify", echo, {"report": report.to_dict()})), args.out)
    return EXIT_VIOLATION if report.violated else EXIT_OK


IDENTITY_PARAMS = {
    "heat-partial": (),
    "heat-D": (),
    "level-d": ("d",),
    "barrier": ("i", "j", "s", "t"),
    "restriction": ("i",),
}


def cmd_identity(args) -> int:
    wanted = IDENTITY_PARAMS[args.identity]
    params = {}
    for name in ("d", "i", "j", "s", "t"):
        val = getattr(args, name)
        if val is None:
            continue
        if name not in wanted:
            raise UsageError(f"--{name} does not apply to identity {args.identity!r}")
        params[name] = val
    if args.identity == "barrier":
        missing = [n for n in wanted if n not in params]
        if missing:
            raise UsageError(f"barrier identity needs --{', --'.join(missing)}")
    if args.identity == "level-d" and "d" not in params:
        raise UsageError("level-d identity needs --d")
    f, g = _load_pair(args)
    if args.identity in ("heat-partial", "heat-D", "level-d"):
        params["quad"] = QuadratureSpec(rel_tol=args.rel_tol, min_horizon=args.min_horizon)
    report = IDENTITIES[args.identity](f, g, **params)
    echo = {"identity": args.identity, "f": args.f, "g": args.g, "rel_tol": args.rel_tol, **report.params}
    _emit(dumps(_envelope("identity", echo, {"report": report.to_dict()})), args.out)
    return EXIT_OK if report.agrees else EXIT_VIOLATION


def cmd_scan(args) -> int:
    params = _bound_params(args.bound, args)
    threads = args.threads if args.threads is not None else _threads_default()
    if threads < 1:
        raise UsageError("--threads must be at least 1")
    if args.samples is None and args.n > 5:
        raise UsageError("--n above 5 needs --samples (exhaustive scans stop at n=5)")
    res = scan_pairs(
        args.n, args.filter, args.bound, params, args.universe, args.allow_n5, args.samples, args.seed, threads
    )
    _emit(csv_text(res.csv_rows()), args.out)
    if args.summary:
        Path(args.summary).write_text(dumps(_envelope("scan", {"threads": threads}, {"scan": res.to_dict(False)})))
    print(
        f"{res.bound_id} n={res.n} filter={res.filter}: {res.pairs_examined} pairs, "
        f"{res.applicable_pairs} applicable, {res.violations} violations, min slack {res.min_slack}",
        file=sys.stderr,
    )
    return EXIT_VIOLATION if res.violations else EXIT_OK


def cmd_enumerate(args) -> int:
    tables = monotone_tables(args.n) if args.method == "recursive" else monotone_tables_by_filter(args.n)
    if args.count_only:
        _emit(f"{len(tables)}\n", args.out)
        return EXIT_OK
    width = max(1, ((1 << args.n) + 3) // 4)
    lines = ["f_id,n,bits_hex"] + [f"{k},{args.n},{t:0{width}x}" for k, t in enumerate(tables)]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _pairs_of(text: Optional[str], flag: str) -> list[tuple[int, int]]:
    if not text:
        raise UsageError(f"{flag} is required for this family")
    out = []
    for tok in text.split(","):
        try:
            a, b = tok.split(":")
            out.append((int(a), int(b)))
        except ValueError:
            raise UsageError(f"{flag}: expected a:b pairs, got {tok!r}") from None
    return out


def cmd_tightness(args) -> int:
    if args.family == "majority":
        if not args.ns:
            raise UsageError("--ns is required for majority")
        seq = majority_sequence(args.ns)
    elif args.family == "tribes":
        seq = tribes_sequence(_pairs_of(args.configs, "--configs"))
    else:
        seq = hamming_sequence(_pairs_of(args.configs, "--configs"))
    _emit(csv_text(tightness_scan(seq), RATIO_FIELDS), args.out)
    return EXIT_OK


def cmd_kernel(args) -> int:
    if args.d < 2:
        raise UsageError("--d must be at least 2")
    quad = QuadratureSpec(rel_tol=args.rel_tol)
    lines = ["R,log_R,value,rhs,slack,satisfied"]
    bad = False
    for R in args.rs:
        if R < 1:
            raise UsageError(f"--R values must be >= 1, got {R}")
        rep = kernel_bound_check(R, quad) if args.d == 2 else level_d_kernel_check(R, args.d, quad)
        bad |= rep.violated
        lines.append(f"{R!r},{math.log(R)!r},{rep.lhs!r},{rep.rhs!r},{rep.slack!r},{rep.satisfied}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_VIOLATION if bad else EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "analyze": cmd_analyze,
    "fwht": cmd_fwht,
    "verify": cmd_verify,
    "identity": cmd_identity,
    "scan": cmd_scan,
    "enumerate": cmd_enumerate,
    "tightness": cmd_tightness,
    "kernel": cmd_kernel,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.max_n is not None:
            os.environ[MAX_N_ENV] = str(args.max_n)
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
    except (CubeError, NotApplicable, QuadratureError) as e:
        print(f"error: {e}", file=sys.stderr)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
