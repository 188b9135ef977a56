"""Command-line interface: ``tfplunge <subcommand> [options]``.

Exit status is 0 on success, 1 for invalid input and 2 for numerical
failures (non-frame windows, eigensolver breakdown).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import experiments as ex
from .dgt import FrameError
from .eigensolve import EigenSolveError
from .masks import DEFAULT_SEED, SHAPES, make_shape, measure, save_mask

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=int, default=10, help="time hop in samples")
    p.add_argument("--M", type=int, default=100, help="frequency channels (L = a*M)")
    p.add_argument("--window", choices=("gauss", "box"), default="gauss")
    p.add_argument("--box-width", type=int, default=None, help="box window width W in samples")
    p.add_argument("--delta", type=float, default=0.1, help="plunge threshold")
    p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    p.add_argument("--out", default="results", help="output directory")
    p.add_argument("--mask", default=None, help="PBM/PGM symbol file (overrides --shape)")
    p.add_argument("--shape", choices=SHAPES, default="disk")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--perimeter", choices=("regionprops", "chain"), default="regionprops")


def _config(args) -> ex.ExperimentConfig:
    return ex.ExperimentConfig(
        shape=args.shape, a=args.a, M=args.M, window=args.window, box_width=args.box_width,
        delta=args.delta, seed=args.seed, scale=args.scale, mask_path=args.mask,
        perimeter=args.perimeter, out=args.out,
    )


def cmd_analytic(args) -> int:
    params = {"kmax": args.kmax}
    if args.kind in ("disk", "annulus"):
        params["radius"] = args.radius
    if args.kind == "annulus":
        params["ratio"] = args.ratio
    if args.kind == "radial":
        radii = args.annuli
        if len(radii) % 2:
            raise ValueError("--annuli needs an even number of radii (inner outer ...)")
        params["annuli"] = list(zip(radii[::2], radii[1::2]))
    _, err = ex.analytic_experiment(args.kind, out=args.out, **params)
    print(f"{args.kind}: max |sorted - profile| = {err:.6f}")
    return EXIT_OK


def cmd_mask(args) -> int:
    mask = make_shape(args.shape, args.M, args.scale, args.seed)
    save_mask(mask, args.path, binary=not args.ascii)
    print(f"wrote {args.path} ({args.M}x{args.M}, {int(mask.sum())} pixels)")
    return EXIT_OK


def cmd_measure(args) -> int:
    cfg = _config(args)
    m = measure(ex.build_mask(cfg), cfg.lattice, method=args.perimeter)
    print(json.dumps(m.__dict__, indent=2))
    return EXIT_OK


def cmd_eig(args) -> int:
    report, _, _ = ex.eigen_experiment(_config(args))
    print(f"{report.label}: L-inf error {report.linf_error:.4f}, plunge count {report.plunge.count}, "
          f"perimeter/count {report.ratio:.4f}")
    print(f"eigenvalues: {report.eigenvalues}\nplot: {report.plot}")
    return EXIT_OK


def cmd_table1(args) -> int:
    results = ex.table1(out=args.out, seed=args.seed)
    print(ex.table1_markdown(results), end="")
    return EXIT_OK if all(r["pass"] for r in results) else EXIT_NUMERIC


def cmd_spectrogram(args) -> int:
    result = ex.spectrogram_experiment(_config(args), target=args.target)
    print(f"{result['label']}: eigenvalues {', '.join(f'{v:.4f}' for v in result['eigenvalues'])}; "
          f"channel overlap {result['overlap']:.4f}")
    print(f"image: {result['image']}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.analytic:
        rows, slope = ex.analytic_sweep(args.values, out=args.out)
        for r in rows:
            print(f"R={r['R']:g}: {r['linf_error']:.6f}")
        print(f"log-log slope {slope:.3f}")
        return EXIT_OK
    rows = ex.sweep_experiment(_config(args), args.values)
    for r in rows:
        flag = "  [touches border]" if r["flagged"] else ""
        print(f"scale={r['scale']:g}: L-inf error {r['linf_error']:.4f}, ratio {r['ratio']:.4f}{flag}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tfplunge", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="closed-form radial eigenvalues vs the erfc profile")
    p.add_argument("kind", choices=("disk", "annulus", "radial"))
    p.add_argument("--radius", type=float, default=15.0)
    p.add_argument("--ratio", type=float, default=0.6, help="annulus inner/outer ratio")
    p.add_argument("--annuli", type=float, nargs="+", default=[], help="inner outer [inner outer ...]")
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--out", default="results")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("mask", help="write a generated symbol as PBM")
    p.add_argument("path")
    p.add_argument("--shape", choices=SHAPES, default="disk")
    p.add_argument("--M", type=int, default=100)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    p.add_argument("--ascii", action="store_true", help="write P1 instead of P4")
    p.set_defaults(func=cmd_mask)

    for name, func, help_ in (
        ("measure", cmd_measure, "area, perimeter and components of a symbol"),
        ("eig", cmd_eig, "frame multiplier spectrum vs the erfc profile"),
        ("spectrogram", cmd_spectrogram, "RGB spectrograms of plunge eigenvectors (PPM)"),
        ("sweep", cmd_sweep, "profile error under dilation"),
    ):
        p = sub.add_parser(name, help=help_)
        _common(p)
        p.set_defaults(func=func)
        if name == "spectrogram":
            p.add_argument("--target", type=float, default=0.5)
        if name == "sweep":
            p.add_argument("--values", type=float, nargs="+", default=[0.5, 1.0],
                           help="shape scales, or radii with --analytic")
            p.add_argument("--analytic", action="store_true", help="sweep the closed-form disk")

    p = sub.add_parser("table1", help="run the reference symbol collection")
    p.add_argument("--out", default="results")
    p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    p.set_defaults(func=cmd_table1)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (FrameError, EigenSolveError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
