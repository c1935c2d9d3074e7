"""``polytverb`` command-line interface.

Exit codes follow the BSD sysexits convention for input problems: 64 for
malformed files or usage errors, 65 for kind/dimension combinations that
are not supported.  ``solve`` additionally returns 2 on a degenerate zero,
3 when the solver gives up and 4 on a wrong point count.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .engine import find_partition, verify_result
from .exceptions import (DegenerateError, EnumerationBoundError, InvalidInputError,
                         MalformedFileError, SolverFailedError, WrongCountError)
from .geometry import EPS_KILL, EPS_LEAD, PointCloud, generate_points
from .caratheodory import EPS_ZERO
from .io import load_frame, load_instance, load_result, save_instance, save_result
from .oracle import MAX_LABELINGS, polytopal_partition_exists, tightness_experiment
from .problems import KINDS, make_kind, required_points
from .svg import render_svg

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_DEGENERATE = 2
EXIT_SOLVER_FAILED = 3
EXIT_WRONG_COUNT = 4
EXIT_MALFORMED = 64
EXIT_UNSUPPORTED = 65

SEED_ENV = "POLYTVERB_SEED"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def _pair(text: str) -> tuple[int, int]:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'i,j', got {text!r}") from None
    return i, j


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"polytverb: {SEED_ENV}={raw!r} is not an integer") from None


def _add_kind_args(p: argparse.ArgumentParser, need_dim: bool = False) -> None:
    g = p.add_argument_group("problem kind")
    g.add_argument("--kind", required=True, choices=sorted(KINDS))
    g.add_argument("--r", type=int, help="polygon size")
    g.add_argument("--factors", type=_int_list, help="polygon sizes of a (multi)prism, e.g. 3,3")
    g.add_argument("--k", type=int, help="orthotope rank")
    g.add_argument("--plane", type=_pair, action="append",
                   help="coordinate plane i,j (repeat for several factors)")
    g.add_argument("--frame", help="JSON file with orthonormal vectors u and w")
    if need_dim:
        g.add_argument("--dim", type=int, help="ambient dimension")


def _kind(args, dimension: Optional[int]):
    frame = load_frame(args.frame) if args.frame else None
    return make_kind(args.kind, dimension=dimension, r=args.r, factors=args.factors,
                     k=args.k, planes=args.plane, frame=frame)


def _eps_args(p):
    p.add_argument("--eps-kill", type=float, default=EPS_KILL)
    p.add_argument("--eps-lead", type=float, default=EPS_LEAD)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polytverb", description="Polytopal Tverberg-type partitions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write a seeded random instance")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--color-classes", type=int, default=None,
                   help="split the points into this many equal consecutive color classes")
    p.add_argument("--out", default=None)

    p = sub.add_parser("solve", help="compute a polytopal partition")
    p.add_argument("--in", dest="instance", required=True)
    _add_kind_args(p)
    p.add_argument("--eps-zero", type=float, default=EPS_ZERO)
    _eps_args(p)
    p.add_argument("--max-iter", type=int, default=20000)
    p.add_argument("--retries", type=int, default=5)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--allow-surplus", action="store_true",
                   help="accept more points than required")
    p.add_argument("--no-timestamp", action="store_true")
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify", help="re-verify a result file")
    p.add_argument("--in", dest="instance", required=True)
    p.add_argument("--result", required=True)
    _eps_args(p)

    p = sub.add_parser("oracle", help="exhaustive existence check")
    p.add_argument("--in", dest="instance", required=True)
    _add_kind_args(p)
    p.add_argument("--no-dedup", action="store_true")
    p.add_argument("--max-labelings", type=int, default=MAX_LABELINGS)
    p.add_argument("--out", default=None, help="write the example partition here")

    p = sub.add_parser("tightness", help="failure rate one point below the required count")
    _add_kind_args(p, need_dim=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--deficit", type=int, default=1,
                   help="points below the required count (0 runs the control)")
    p.add_argument("--max-labelings", type=int, default=MAX_LABELINGS)

    p = sub.add_parser("render", help="draw a result as SVG")
    p.add_argument("--in", dest="instance", required=True)
    p.add_argument("--result", required=True)
    p.add_argument("--proj", type=_pair, default=None)
    p.add_argument("--size", type=int, default=480)
    p.add_argument("--out", default=None)
    return parser


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_generate(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    colors = None
    if args.color_classes:
        if args.count % args.color_classes:
            raise InvalidInputError("--count must be a multiple of --color-classes")
        colors = np.repeat(np.arange(args.color_classes), args.count // args.color_classes)
    cloud = generate_points(args.dim, args.count, seed=seed, scale=args.scale, colors=colors)
    meta = {"generator": "uniform", "seed": seed, "scale": args.scale}
    _emit(save_instance(None, cloud, meta), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    cloud, _ = load_instance(args.instance)
    kind = _kind(args, cloud.dimension)
    seed = _default_seed() if args.seed is None else args.seed
    try:
        result = find_partition(cloud, kind, eps_zero=args.eps_zero, eps_kill=args.eps_kill,
                                eps_lead=args.eps_lead, max_iter=args.max_iter, seed=seed,
                                retries=args.retries, allow_surplus=args.allow_surplus)
    except DegenerateError as exc:
        print(f"Degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except SolverFailedError as exc:
        print(f"SolverFailed: {exc}", file=sys.stderr)
        return EXIT_SOLVER_FAILED
    text = save_result(None, result, timestamp=not args.no_timestamp)
    cert = result.certificate
    if args.out is None:
        sys.stdout.write(text)
    else:
        _emit(text, args.out)
        print(f"VALID kind={kind.name} points={cloud.n_points} "
              f"kill={cert.residual:.3e} lead={cert.leading_magnitude:.3e}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cloud, _ = load_instance(args.instance)
    result = load_result(args.result)
    if cloud.dimension != result.kind.dimension:
        raise InvalidInputError(
            f"result is for R^{result.kind.dimension}, instance is in R^{cloud.dimension}")
    ver = verify_result(cloud, result.kind, result, eps_kill=args.eps_kill,
                        eps_lead=args.eps_lead)
    print(ver.table())
    print("VALID" if ver.passed else "INVALID")
    return EXIT_OK if ver.passed else EXIT_FAIL


def cmd_oracle(args) -> int:
    cloud, _ = load_instance(args.instance)
    kind = _kind(args, cloud.dimension)
    res = polytopal_partition_exists(cloud, kind, dedup=not args.no_dedup,
                                     max_labelings=args.max_labelings)
    print(f"found={'true' if res.found else 'false'} labelings={res.n_labelings}")
    if res.found and args.out:
        save_result(args.out, res.example, timestamp=False)
    return EXIT_OK if res.found else EXIT_FAIL


def cmd_tightness(args) -> int:
    kind = _kind(args, args.dim)
    seed = _default_seed() if args.seed is None else args.seed
    res = tightness_experiment(kind, args.trials, seed=seed, jobs=args.jobs,
                               deficit=args.deficit, max_labelings=args.max_labelings)
    print(f"kind={kind.name} points={res.n_points} required={required_points(kind)} "
          f"trials={res.trials} failures={res.failures} rate={res.rate!r}")
    return EXIT_OK


def cmd_render(args) -> int:
    cloud, _ = load_instance(args.instance)
    result = load_result(args.result)
    _emit(render_svg(cloud, result, proj=args.proj, size=args.size), args.out)
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "solve": cmd_solve, "verify": cmd_verify,
            "oracle": cmd_oracle, "tightness": cmd_tightness, "render": cmd_render}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except MalformedFileError as exc:
        print(f"polytverb: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except WrongCountError as exc:
        print(f"WrongCount: {exc}", file=sys.stderr)
        return EXIT_WRONG_COUNT
    except (InvalidInputError, EnumerationBoundError) as exc:
        print(f"polytverb: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except OSError as exc:
        print(f"polytverb: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
