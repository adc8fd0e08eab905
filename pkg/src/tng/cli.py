"""Command line front end: ``tng bound``, ``tng ball`` and ``tng resume``.

Exit codes: 0 certified, 2 bounded, 3 inconclusive, 64 usage error,
65 bad input data.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .driver import (
    UpperBoundRegistry,
    load_registry,
    load_state,
    render_report,
    resume,
    run_algorithm_a,
    run_algorithm_b,
    save_state,
)
from .errors import InputError, TngError, UnsupportedFormat
from .covers import EnumerationCursor
from .words import load_presentation

EX_USAGE, EX_DATAERR = 64, 65


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _phi(text: str):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--phi expects comma separated integers, got {text!r}") from None


def _common(sp):
    sp.add_argument("--pres", required=True, help="presentation file (gens:/rel: lines)")
    sp.add_argument("--manifold", help="registry id; defaults to the file stem")
    sp.add_argument("--max-degree", type=int, default=4, help="largest permutation degree n (<= 7)")
    sp.add_argument("--max-char-order", type=int, default=6, help="largest character order m")
    sp.add_argument("--max-dim", type=int, default=24, help="largest induced dimension k")
    sp.add_argument("--budget", type=int, default=200, help="number of candidate representations")
    sp.add_argument("--registry", help="JSON file of upper bounds")
    sp.add_argument("--out", help="write the report here instead of stdout")
    sp.add_argument("--format", choices=("json", "svg"), default="json")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--save-state", help="write a resumable state file after the run")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="tng", description="Thurston norm lower bounds from twisted torsion of finite covers.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    b = sub.add_parser("bound", help="lower bound for one class (per-class algorithm)")
    _common(b)
    b.add_argument("--phi", type=_phi, required=True, help="class as comma separated coordinates")
    ball = sub.add_parser("ball", help="norm ball over all of H^1 (norm-ball algorithm)")
    _common(ball)
    ball.add_argument("--strict", action="store_true", help="certify on every ray instead of every cone")
    r = sub.add_parser("resume", help="continue a saved run")
    r.add_argument("--state", required=True)
    r.add_argument("--budget", type=int, help="additional candidates (default: the saved budget again)")
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--out")
    r.add_argument("--format", choices=("json", "svg"), default="json")
    r.add_argument("--save-state")
    return ap


def _emit(report, args):
    data = render_report(report, args.format)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "resume":
            state = load_state(args.state)
            report, state = resume(state, args.budget, args.workers)
        else:
            if args.budget < 0:
                raise UnsupportedFormat("--budget must be nonnegative")
            pres = load_presentation(args.pres)
            manifold = args.manifold or Path(args.pres).stem
            registry = load_registry(args.registry) if args.registry else UpperBoundRegistry()
            cursor = EnumerationCursor(max_degree=args.max_degree, max_order=args.max_char_order,
                                       max_dim=args.max_dim)
            if args.command == "bound":
                report, state = run_algorithm_a(pres, args.phi, registry, args.budget, manifold,
                                                cursor=cursor, workers=args.workers)
            else:
                mode = "rays" if args.strict else "cones"
                report, state = run_algorithm_b(pres, registry, args.budget, manifold, cursor=cursor,
                                                workers=args.workers, certify_mode=mode)
        if args.save_state:
            save_state(state, args.save_state)
        _emit(report, args)
    except UnsupportedFormat as e:
        print(f"tng: {e}", file=sys.stderr)
        return EX_USAGE
    except (InputError, TngError, OSError, ValueError) as e:
        print(f"tng: {type(e).__name__}: {e}", file=sys.stderr)
        return EX_DATAERR
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
