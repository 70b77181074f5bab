"""Command-line entry point: ``samecp segment | bench | quantile``."""

from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path
from typing import Callable

from . import __version__
from ._validation import InvalidInputError
from .baselines import PenaltySpec, binary_segmentation, pelt
from .io import SeriesFormatError, format_segments_tsv, read_series, segmentation_to_json
from .pipeline import SameConfig, Segmentation, segment
from .simulation import (
    DEFAULT_MASTER_SEED,
    GRID_L,
    GRID_M,
    GRID_S,
    ReplicateError,
    SimSpec,
    run_grid,
)
from .stats import folded_quantile

METHODS = ("same", "binseg", "pelt")


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _penalty(text: str, min_seg: int) -> PenaltySpec:
    if text in ("bic", "aic"):
        return PenaltySpec(kind=text, min_seg=min_seg)
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"--penalty must be bic, aic or a number, got {text!r}")
    return PenaltySpec(kind="manual", value=value, min_seg=min_seg)


def make_segmenter(
    method: str,
    *,
    alpha: float = 0.01,
    bandwidths=(25, 50, 100),
    min_seg: int = 20,
    alpha_merge: float = 0.01,
    penalty: str = "bic",
) -> tuple[Callable, dict]:
    """Build ``series -> change-points`` for a method name, plus its settings."""
    if method == "same":
        config = SameConfig(
            bandwidths=tuple(bandwidths), alpha_screen=alpha, k_prime=min_seg,
            alpha_merge=alpha_merge,
        )
        return (lambda x: segment(x, config).change_points), config.to_dict()
    if method == "binseg":
        return (
            lambda x: binary_segmentation(x, alpha, min_seg),
            {"alpha": alpha, "min_seg": min_seg},
        )
    if method == "pelt":
        spec = _penalty(penalty, min_seg)
        return (lambda x: pelt(x, spec)), {"penalty": penalty, "min_seg": min_seg}
    raise UsageError(f"unknown method {method!r}; available: {', '.join(METHODS)}")


def cmd_segment(args) -> int:
    if args.penalty is not None and args.method != "pelt":
        raise UsageError("--penalty only applies to --method pelt")
    if args.method != "same":
        for flag, value in (("--bandwidths", args.bandwidths), ("--alpha-merge", args.alpha_merge)):
            if value is not None:
                raise UsageError(f"{flag} only applies to --method same")
    if args.method == "pelt" and args.alpha is not None:
        raise UsageError("--alpha does not apply to --method pelt")

    fn, settings = make_segmenter(
        args.method,
        alpha=0.01 if args.alpha is None else args.alpha,
        bandwidths=args.bandwidths or (25, 50, 100),
        min_seg=args.min_seg,
        alpha_merge=0.01 if args.alpha_merge is None else args.alpha_merge,
        penalty=args.penalty or "bic",
    )
    x = read_series(args.input)
    seg = Segmentation.from_change_points(x, fn(x))
    if args.format == "json":
        meta = {"n": int(x.size), "method": args.method, "config": settings, "version": __version__}
        text = segmentation_to_json(seg, meta)
    else:
        text = format_segments_tsv(seg)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def parse_scenarios(items: list[str], n: int, noise: str) -> list[SimSpec]:
    """Expand ``all`` or ``m=..,l=..,s=..`` items; omitted keys range over the default grid."""
    if not items or items == ["all"]:
        items = [""]
    specs: list[SimSpec] = []
    for item in itertools.chain.from_iterable(i.split(";") for i in items):
        item = item.strip()
        grid = {"m": list(GRID_M), "l": list(GRID_L), "s": list(GRID_S)}
        if item and item != "all":
            for part in item.split(","):
                key, sep, value = part.partition("=")
                key = key.strip()
                if not sep or key not in grid:
                    raise UsageError(f"bad scenario term {part!r}; use m=..,l=..,s=..")
                try:
                    grid[key] = [float(value) if key == "s" else int(value)]
                except ValueError:
                    raise UsageError(f"bad value in scenario term {part!r}")
        for m, l, s in itertools.product(grid["m"], grid["l"], grid["s"]):
            specs.append(SimSpec(n=n, m=m, l=l, s=s, noise=noise))
    return specs


def cmd_bench(args) -> int:
    names = [m.strip() for m in args.methods.split(",") if m.strip()]
    unknown = [m for m in names if m not in METHODS]
    if unknown or not names:
        raise UsageError(
            f"unknown method(s) {', '.join(unknown) or '(none)'}; available: {', '.join(METHODS)}"
        )
    if args.replicates < 1:
        raise UsageError("--replicates must be at least 1")
    pools = None
    if args.noise == "pool":
        if not (args.neutral_pool and args.altered_pool):
            raise UsageError("--noise pool needs --neutral-pool and --altered-pool")
        pools = (read_series(args.neutral_pool), read_series(args.altered_pool))
    scenarios = parse_scenarios(args.scenarios, args.n, args.noise)
    penalty = args.penalty or ("aic" if args.noise == "pool" else "bic")
    methods = {name: make_segmenter(name, penalty=penalty)[0] for name in names}

    report = run_grid(methods, scenarios, args.replicates, master_seed=args.seed, pools=pools)
    csv_text = report.to_csv()
    if args.out:
        Path(args.out).write_text(csv_text)
        print(report.summary())
    else:
        sys.stdout.write(csv_text)
        print(report.summary(), file=sys.stderr)
    return 0


def cmd_quantile(args) -> int:
    if not 0.0 < args.alpha <= 1.0:
        raise UsageError(f"--alpha must lie in (0, 1], got {args.alpha}")
    print(f"{folded_quantile(args.alpha):.10f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="samecp",
        description="Screening-and-merging change-point segmentation (1-based positions).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="segment a series file")
    p.add_argument("--input", required=True, help="one- or two-column text file")
    p.add_argument("--method", choices=METHODS, default="same")
    p.add_argument("--alpha", type=float, default=None, help="screening level (default 0.01)")
    p.add_argument("--bandwidths", type=_int_list, default=None, help="default 25,50,100")
    p.add_argument("--min-seg", type=int, default=20)
    p.add_argument("--alpha-merge", type=float, default=None, help="merge level (default 0.01)")
    p.add_argument("--penalty", default=None, help="bic, aic or a number (pelt only)")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--output", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("bench", help="run the simulation grid")
    p.add_argument("--scenarios", action="append", default=None,
                   help="'all' or m=..,l=..,s=.. (';'-separated or repeated)")
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--methods", default="same,binseg,pelt")
    p.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--noise", choices=("gaussian", "pool"), default="gaussian")
    p.add_argument("--neutral-pool", default=None)
    p.add_argument("--altered-pool", default=None)
    p.add_argument("--penalty", default=None,
                   help="pelt penalty (default bic, aic for pool noise)")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("quantile", help="print the screening threshold for a level")
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=cmd_quantile)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (InvalidInputError, SeriesFormatError, ReplicateError, OSError) as exc:
        print(f"samecp: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
