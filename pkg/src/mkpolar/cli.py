"""Command-line front end (``mkpolar <command>``).

Exit codes: 0 success, 1 failed check or runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    format_table,
    inequality_suite,
    martingale_report,
    multi_kernel_exponent,
    polarization_trajectory,
)
from .channel import ErasureChannel, parse_channel
from .construction import CodeSpec, construct_code
from .gf2 import BitMatrix
from .kernel import BY_SIZE, Kernel, get_kernel, validate_kernel
from .simulation import CSV_HEADER, run_fer_simulation
from .synthesis import bec_tree

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ALPHA_BETA_GRID = [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (3, 3)]


class UsageError(Exception):
    pass


def _kernels(text: str) -> list[Kernel]:
    try:
        return [get_kernel(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise UsageError(str(e)) from None


def _channel(text: str):
    try:
        return parse_channel(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_construct(args) -> int:
    ks = _kernels(args.kernels)
    n = 1
    for k in ks:
        n *= k.size
    if not 0 <= args.K <= n:
        raise UsageError(f"--K {args.K} is outside [0, N={n}] for kernels {args.kernels}")
    spec = construct_code(ks, _channel(args.channel), args.K)
    _emit(spec.to_json(), args.out)
    if args.out:
        print(f"wrote {args.out}: N={spec.N} K={spec.K} mode={spec.design_mode}", file=sys.stderr)
    return EXIT_OK


def cmd_analyze_kernel(args) -> int:
    if args.file:
        try:
            # singular matrices are loaded too so the report can say why they fail
            kern = Kernel(BitMatrix.load(args.file), name=Path(args.file).stem, check=False)
        except (OSError, ValueError) as e:
            raise UsageError(f"cannot read kernel file {args.file}: {e}") from None
    else:
        try:
            kern = get_kernel(args.kernel)
        except ValueError as e:
            raise UsageError(str(e)) from None
    rep = validate_kernel(kern)
    rows = []
    if rep.invertible and kern.size <= 4:
        for a, b in ALPHA_BETA_GRID:
            r = inequality_suite(kern, a, b, n_random=args.random, seed=args.seed)
            rows.append(r.to_dict())
    result = {
        "kernel": kern.name,
        "size": kern.size,
        "matrix": [("".join(map(str, r))) for r in kern.rows],
        "partial_distances": list(rep.partial_distances),
        "exponent": kern.exponent,
        "invertible": rep.invertible,
        "accepted": rep.accepted,
        "failures": list(rep.failures),
        "inequality_grid": rows,
        "seed": args.seed,
        "version": __version__,
    }
    if args.json:
        print(json.dumps(result, sort_keys=True, indent=2))
    else:
        print(f"kernel {kern.name} (l={kern.size})")
        for r in result["matrix"]:
            print(f"  {r}")
        print(f"partial distances: {list(rep.partial_distances)}")
        print(f"exponent E_l: {kern.exponent:.6f}")
        print(f"valid: {'yes' if rep.accepted else 'no'}" + "".join(f"\n  - {f}" for f in rep.failures))
        if rows:
            print("per-step inequality (numerical evidence):")
            print(format_table(["alpha", "beta", "worst_margin", "pass"],
                               [(r["alpha"], r["beta"], r["worst_margin"], r["pass"]) for r in rows]), end="")
    return EXIT_OK if rep.accepted else EXIT_FAIL


def cmd_polarize(args) -> int:
    ks = _kernels(args.kernels)
    w = _channel(args.channel)
    if not isinstance(w, ErasureChannel):
        raise UsageError("polarize follows erasure channels exactly; use --channel bec:<eps>")
    if not 0 < args.threshold < 0.5:
        raise UsageError("--threshold must lie in (0, 0.5)")
    tree = bec_tree(w.epsilon, ks)
    mart = martingale_report(w, ks)
    traj = polarization_trajectory(tree, args.threshold)
    rows = [(m, tree.stage_size(m), mart.stage_means[m], mart.deviations[m], *traj[m])
            for m in range(tree.depth + 1)]
    if args.csv:
        Path(args.csv).write_text(tree.to_csv())
    if args.json:
        print(json.dumps({
            "channel": w.spec(), "kernels": [k.name for k in ks], "threshold": args.threshold,
            "stages": [dict(zip(["stage", "N", "mean_I", "deviation", "high", "low", "middle"], r)) for r in rows],
            "version": __version__,
        }, sort_keys=True, indent=2))
    else:
        print(format_table(["stage", "N", "mean_I", "deviation", "high", "low", "middle"], rows), end="")
    return EXIT_OK


def _profile(text: str):
    entries = []
    for part in text.split(","):
        ref, sep, freq = part.partition(":")
        if not sep:
            raise UsageError(f"profile entries look like <kernel>:<frequency>, got {part!r}")
        try:
            k = get_kernel(ref)
            p = float(freq)
        except ValueError as e:
            raise UsageError(str(e)) from None
        entries.append((k, p))
    return entries


def cmd_exponent(args) -> int:
    entries = _profile(args.profile)
    try:
        e = multi_kernel_exponent(entries)
    except ValueError as err:
        raise UsageError(str(err)) from None
    if args.json:
        print(json.dumps({"combined": e, "entries": [
            {"kernel": k.name, "size": k.size, "frequency": p, "exponent": k.exponent} for k, p in entries],
            "version": __version__}, sort_keys=True, indent=2))
    else:
        print(f"{e:.4g}")
        print(format_table(["kernel", "l", "p", "E_l"], [(k.name, k.size, p, k.exponent) for k, p in entries]), end="")
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        spec = CodeSpec.load(args.spec)
    except (OSError, ValueError, KeyError) as e:
        raise UsageError(f"cannot read code spec {args.spec}: {e}") from None
    w = _channel(args.channel)
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    try:
        rep = run_fer_simulation(spec, w, args.trials, args.seed, threads=args.threads,
                                 spec_name=Path(args.spec).name)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _emit(rep.to_json(include_timing=args.timing), args.out)
    if args.csv:
        p = Path(args.csv)
        if not p.exists() or p.stat().st_size == 0:
            p.write_text(CSV_HEADER)
        with p.open("a") as fh:
            fh.write(rep.csv_row())
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suites

    try:
        checks = run_suites(args.suite)
    except ValueError as e:
        raise UsageError(str(e)) from None
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mkpolar", description="Multi-kernel polar code toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    kernel_help = f"comma-separated kernels: names (T2, T3), sizes {sorted(BY_SIZE)} or matrix files"

    c = sub.add_parser("construct", help="design a code and write its spec JSON")
    c.add_argument("--kernels", required=True, help=kernel_help)
    c.add_argument("--channel", required=True, help="design channel, e.g. bec:0.5 or bsc:0.11")
    c.add_argument("--K", type=int, required=True, help="number of information bits")
    c.add_argument("--out", help="output path (default: stdout)")
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze-kernel", help="partial distances, exponent and validity of a kernel")
    g = a.add_mutually_exclusive_group(required=True)
    g.add_argument("--kernel", help="built-in kernel name")
    g.add_argument("--file", help="kernel matrix text file")
    a.add_argument("--random", type=int, default=100, help="random channels per inequality check")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze_kernel)

    z = sub.add_parser("polarize", help="exact erasure evolution and polarization fractions")
    z.add_argument("--kernels", required=True, help=kernel_help)
    z.add_argument("--channel", required=True, help="bec:<eps>")
    z.add_argument("--threshold", type=float, default=0.01)
    z.add_argument("--csv", help="write the leaf table to this CSV file")
    z.add_argument("--json", action="store_true")
    z.set_defaults(func=cmd_polarize)

    e = sub.add_parser("exponent", help="combined exponent of a kernel mix")
    e.add_argument("--profile", required=True, help="e.g. 2:0.5,3:0.5 or T2:1.0")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_exponent)

    s = sub.add_parser("simulate", help="Monte-Carlo FER/BER of SC decoding")
    s.add_argument("--spec", required=True, help="code spec JSON from 'construct'")
    s.add_argument("--channel", required=True, help="bec:<eps> or bsc:<p>")
    s.add_argument("--trials", type=int, default=10000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=None, help="worker threads (default: $MKPOLAR_THREADS or 1)")
    s.add_argument("--out", help="report JSON path (default: stdout)")
    s.add_argument("--csv", help="append a result row to this CSV file")
    s.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="run the built-in invariant suites")
    v.add_argument("--suite", nargs="+", default=["all"])
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"mkpolar {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"mkpolar {args.command}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
