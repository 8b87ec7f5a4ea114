"""``eltip`` command line.

Exit status: 0 on success, 1 when a computation fails (work caps, integration
accuracy), 2 for usage and I/O problems.  Data goes to stdout or ``--out``;
the version banner and progress notes go to stderr.

Instances are file paths, or ``@name`` for a shipped fixture (``@fig1b``).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, _backend
from .dynamics import DENSE_CAP, Integrator, SCHEDULES, AnnealSpec, log_grid, plan_steps, sweep
from .errors import EltipError, InstanceParseError, InstanceValidationError
from .formats import (
    InstanceDocument,
    gnuplot_script,
    load_document,
    load_fixture,
    serialize_document,
    write_report,
    write_sweep_csv,
)
from .ising import ENUMERATION_CAP, diagonal, full_spectrum
from .landscape import analyze, rank_landscapes
from .transform import apply_T, verify_spectrum_invariance

#: Sweeps beyond any of these need ``--force-long``.
MAX_STEPS = 1e9
MAX_SPINS = 8
MAX_TIME = 1e6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read_instance(ref: str) -> InstanceDocument:
    try:
        if ref.startswith("@"):
            return load_fixture(ref[1:])
        return load_document(ref)
    except FileNotFoundError as exc:
        raise UsageError(f"cannot read instance {ref}: {exc.strerror or exc}") from None
    except (InstanceParseError, InstanceValidationError) as exc:
        raise UsageError(f"invalid instance {ref}: {exc}") from None
    except OSError as exc:
        raise UsageError(f"cannot read instance {ref}: {exc}") from None


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from None


def parse_times(text: str) -> list[float]:
    """``"1e0:1e6:25"`` is a log-spaced grid; otherwise a comma-separated list."""
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1 or not 0 < start <= stop:
                raise ValueError
            times = [float(t) for t in log_grid(start, stop, count)]
            times[-1] = stop
            return times
        times = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad time grid {text!r}; use START:STOP:COUNT or a comma list") from None
    if not times or any(not t > 0 for t in times) or any(b < a for a, b in zip(times, times[1:])):
        raise UsageError(f"bad time grid {text!r}; times must be positive and ascending")
    return times


# --- subcommands -----------------------------------------------------------


def cmd_spectrum(args) -> int:
    doc = _read_instance(args.instance)
    spec = full_spectrum(doc.problem, args.cap)
    count = len(spec) if args.levels is None else args.levels
    if count < 1:
        raise UsageError("--levels must be >= 1")
    lines = [f"{e:.12g} {cfg}" for e, cfg in spec.head(count)]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_transform(args) -> int:
    doc = _read_instance(args.instance)
    n = doc.problem.n
    if args.all == (args.k is not None):
        raise UsageError("give exactly one of K or --all")
    ks = range(n) if args.all else [args.k]
    if any(not 0 <= k < n for k in ks):
        raise UsageError(f"spin index {args.k} out of range for {n} spins")
    chunks = []
    if args.all:
        chunks.append(f"# identity landscape is the input itself; {n} transformed documents follow\n")
    for k in ks:
        q = apply_T(doc.problem, k)
        meta = dict(doc.metadata)
        if doc.name:
            meta["name"] = f"{doc.name}-T{k}"
        meta["transform"] = f"T{k}"
        if args.all:
            chunks.append(f"# T{k}\n")
        chunks.append(serialize_document(InstanceDocument(q, meta, dict(doc.extra))))
        if args.verify:
            dev = verify_spectrum_invariance(doc.problem, q, args.cap)
            # stderr keeps the emitted documents parseable
            print(f"T{k} max spectrum deviation {dev:.3g}", file=sys.stderr)
    _emit("".join(chunks), args.out)
    return 0


def cmd_sweep(args) -> int:
    doc = _read_instance(args.instance)
    problem = doc.problem
    times = parse_times(args.times)
    if args.integrator == "exact" and problem.n > DENSE_CAP:
        raise UsageError(f"the exact integrator is limited to {DENSE_CAP} spins")
    integ = Integrator(args.integrator, dt=args.dt, force_long=args.force_long)
    if not args.force_long:
        diag = diagonal(problem)
        steps = max(plan_steps(AnnealSpec(problem, t, args.schedule, integ), diag)[0] for t in times)
        reasons = []
        if problem.n > MAX_SPINS:
            reasons.append(f"{problem.n} spins > {MAX_SPINS}")
        if times[-1] > MAX_TIME:
            reasons.append(f"T = {times[-1]:g} > {MAX_TIME:g}")
        if steps > MAX_STEPS:
            reasons.append(f"{steps} steps > {MAX_STEPS:g}")
        if reasons:
            raise UsageError(f"eltip sweep: refusing long run ({'; '.join(reasons)}); pass --force-long")
    result = sweep(problem, times, args.schedule, integ, workers=args.workers)
    _emit(write_sweep_csv(result), args.out)
    for t, g in zip(result.times, result.ground_probability):
        print(f"T={t:.6g} ground={g:.6f}", file=sys.stderr if args.out in (None, "-") else sys.stdout)
    if args.gnuplot:
        csv_name = args.out if args.out not in (None, "-") else "sweep.csv"
        title = doc.name or Path(args.instance).stem
        _emit(gnuplot_script(csv_name, problem.n, title), args.gnuplot)
    return 0


def cmd_rank(args) -> int:
    doc = _read_instance(args.instance)
    if args.levels is not None and not 2 <= args.levels <= (1 << doc.problem.n):
        raise UsageError(f"--levels must lie in [2, {1 << doc.problem.n}]")
    ranked = rank_landscapes(doc.problem, args.levels, args.cap)
    _emit(write_report(ranked), args.out)
    return 0


def cmd_analyze(args) -> int:
    doc = _read_instance(args.instance)
    if args.levels is not None and not 1 <= args.levels <= (1 << doc.problem.n):
        raise UsageError(f"--levels must lie in [1, {1 << doc.problem.n}]")
    _emit(write_report(analyze(doc.problem, args.levels, args.cap)), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eltip", description="Energy-landscape transformations for Ising problems.")
    p.add_argument("--version", action="version", version=f"eltip {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, levels=False):
        sp.add_argument("instance", help="instance file, or @name for a shipped fixture")
        sp.add_argument("-o", "--out", default=None, help="output file (default: stdout)")
        sp.add_argument("--cap", type=int, default=ENUMERATION_CAP, help="enumeration cap (default %(default)s)")
        if levels:
            sp.add_argument("--levels", type=int, default=None, help="level count L (default min(16, 2^n))")

    sp = sub.add_parser("spectrum", help="all classical levels, lowest first")
    common(sp)
    sp.add_argument("--levels", type=int, default=None, help="print only the lowest L levels (default all)")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("transform", help="apply T_k and print the transformed instance")
    common(sp)
    sp.add_argument("k", nargs="?", type=int, default=None, help="spin index")
    sp.add_argument("--all", action="store_true", help="emit T_k for every k")
    sp.add_argument("--verify", action="store_true", help="also print the max spectrum deviation")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("sweep", help="final-state probabilities against total annealing time (CSV)")
    common(sp)
    sp.add_argument("--times", default="1:1e4:17", help="START:STOP:COUNT log grid or a comma list (default %(default)s)")
    sp.add_argument("--schedule", default="linear", choices=sorted(SCHEDULES), help="default %(default)s")
    sp.add_argument("--integrator", default="rk4", choices=["rk4", "magnus4", "exact"], help="default %(default)s")
    sp.add_argument("--dt", type=float, default=None, help="fixed step (default: per-integrator rule)")
    sp.add_argument("--workers", type=int, default=None, help="processes (default ELTIP_WORKERS or cpu count)")
    sp.add_argument("--gnuplot", default=None, metavar="FILE", help="also write a gnuplot script")
    sp.add_argument("--force-long", action="store_true", help=f"allow n > {MAX_SPINS}, T > {MAX_TIME:g} or > {MAX_STEPS:g} steps")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("rank", help="rank the n+1 landscapes by difficulty score")
    common(sp, levels=True)
    sp.set_defaults(func=cmd_rank)

    sp = sub.add_parser("analyze", help="gaps and Hamming distances of the lowest levels")
    common(sp, levels=True)
    sp.set_defaults(func=cmd_analyze)
    return p


def main(argv: list[str] | None = None) -> int:
    print(f"eltip {__version__} ({_backend.BACKEND} kernels)", file=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "dt", None) is not None and not args.dt > 0:
            raise UsageError("--dt must be positive")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except (EltipError, ArithmeticError, ValueError) as exc:
        print(f"eltip: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
