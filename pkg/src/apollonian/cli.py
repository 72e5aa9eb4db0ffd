"""Command line entry point: ``apollonian <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import acph
from .core import packing_from_spec
from .densities import DELTA, constants_json
from .enumerate import DEFAULT_MEMORY_BUDGET, histogram, walk
from .errors import ApollonianError, UsageError
from .localglobal import find_exceptions, fit_growth, frequency_distribution, predicted_mean
from .orbits import orbit_json
from .primestats import ratio_series
from .render import render_svg


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _size(text: str) -> int:
    units = {"k": 1 << 10, "m": 1 << 20, "g": 1 << 30}
    t = text.strip().lower().rstrip("ib").rstrip("b") if text[-1:].lower() == "b" else text.strip().lower()
    mult = 1
    if t and t[-1] in units:
        mult = units[t[-1]]
        t = t[:-1]
    try:
        return int(float(t) * mult)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size {text!r}") from None


def _int(text: str) -> int:
    try:
        v = float(text) if any(c in text.lower() for c in ".e") else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer {text!r}") from None
    if isinstance(v, float):
        if not v.is_integer():
            raise argparse.ArgumentTypeError(f"bad integer {text!r}")
        v = int(v)
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--root", default="bugeye",
                        help='preset name (bugeye, coins) or "v1,v2,v3,v4"')
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--memory-budget", type=_size, default=DEFAULT_MEMORY_BUDGET,
                        help="bytes (suffix K/M/G allowed), default 2G")
    common.add_argument("--check", action="store_true",
                        help="verify every quadruple during traversal")
    common.add_argument("--out", help="output path (default: stdout)")

    p = _Parser(prog="apollonian", description="Integral Apollonian packing experiments")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("stats", parents=[common], help="prime and kissing-prime ratio series (CSV)")
    s.add_argument("--bound", type=_int, required=True)
    s.add_argument("--checkpoints", type=int, default=20)
    s.add_argument("--x-min", type=_int)

    s = sub.add_parser("orbit", parents=[common], help="orbit modulo d (JSON)")
    s.add_argument("--mod", type=int, required=True)

    sub.add_parser("residues", parents=[common], help="residue profile mod 24 (JSON)")

    s = sub.add_parser("exceptions", parents=[common], help="local-global exceptions (JSON)")
    s.add_argument("--lo", type=_int, required=True)
    s.add_argument("--hi", type=_int, required=True)
    s.add_argument("--residue", type=int)
    s.add_argument("--chunk", type=_int)

    s = sub.add_parser("hist", parents=[common], help="curvature histogram (ACPH file)")
    s.add_argument("--lo", type=_int, required=True)
    s.add_argument("--hi", type=_int, required=True)

    s = sub.add_parser("hist-summary", parents=[common], help="frequency distribution from an ACPH file (CSV)")
    s.add_argument("path")
    s.add_argument("--residue", type=int, required=True)

    s = sub.add_parser("constants", parents=[common], help="limit constants (JSON)")
    s.add_argument("--tol", type=float, default=1e-12)
    s.add_argument("--prime-bound", type=_int, default=10**6)

    s = sub.add_parser("render", parents=[common], help="SVG drawing of the packing")
    s.add_argument("--max", type=_int, required=True, dest="max_curvature")
    s.add_argument("--canvas", type=int, default=800)
    s.add_argument("--stroke", default="black")
    s.add_argument("--fill", default="none")
    s.add_argument("--no-labels", action="store_true")

    s = sub.add_parser("fit", parents=[common], help="fit N(x) ~ c x^delta (JSON)")
    s.add_argument("--xs", default="10000,100000,1000000",
                   help="comma-separated sample points")
    return p


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _run(args) -> None:
    cmd = args.command
    if cmd == "hist-summary":
        hist = acph.read(args.path)
        fd = frequency_distribution(hist, args.residue)
        from .core import validate_packing
        packing = validate_packing(hist.root)
        pred = predicted_mean(packing, args.residue, hist.lo, hist.hi, "measured",
                              counts=(0, hist.total()))
        _emit(args, fd.to_csv(pred))
        return
    if cmd == "constants":
        _emit(args, _dump(constants_json(args.tol, args.prime_bound)))
        return

    packing = packing_from_spec(args.root)
    if cmd == "stats":
        series = ratio_series(packing, args.bound, args.checkpoints, x_min=args.x_min,
                              threads=args.threads, memory_budget=args.memory_budget)
        _emit(args, series.to_csv())
    elif cmd == "orbit":
        _emit(args, _dump(orbit_json(packing, args.mod)))
    elif cmd == "residues":
        from .orbits import gamma_profile
        prof = gamma_profile(packing)
        _emit(args, _dump({
            "root": list(packing.root),
            "gamma": {str(n): f"{g.numerator}/{g.denominator}" for n, g in prof.gamma.items() if g},
            "admissible": prof.admissible,
        }))
    elif cmd == "exceptions":
        rep = find_exceptions(packing, args.lo, args.hi, args.residue, chunk_size=args.chunk,
                              threads=args.threads, memory_budget=args.memory_budget)
        _emit(args, _dump(rep.to_json()))
    elif cmd == "hist":
        if not args.out:
            raise UsageError("hist needs --out FILE.acph")
        h = histogram(packing, args.lo, args.hi, threads=args.threads,
                      memory_budget=args.memory_budget, check=args.check)
        acph.write(args.out, h)
    elif cmd == "render":
        _emit(args, render_svg(packing, args.max_curvature, args.canvas, stroke=args.stroke,
                               fill=args.fill, labels=not args.no_labels))
    elif cmd == "fit":
        xs = sorted(_int(t) for t in args.xs.split(",") if t.strip())
        res = walk(packing, xs[-1], edges=xs, threads=args.threads, check=args.check)
        ns = [int(v) for v in res.bin_n.cumsum()]
        delta_hat, c_hat = fit_growth(list(zip(xs, ns)))
        _emit(args, _dump({"root": list(packing.root), "samples": [[x, n] for x, n in zip(xs, ns)],
                           "delta": delta_hat, "c": c_hat, "delta_reference": DELTA}))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _run(args)
    except ApollonianError as exc:
        print(f"apollonian {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI, converting argparse exits into return codes."""
    try:
        return main(argv)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
