"""Command-line entry point: `grovearctic <command> [options]`.

Exit status: 0 on success, 1 for invalid input, 2 when an internal
consistency check fails, 64 for an unknown command.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import List, Optional

from .algebra import format_rational
from .conductance import BUNDLED, ConfigError, FieldConfig, bundled_config, load_config
from .recurrence import ConsistencyError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INCONSISTENT = 2
EXIT_USAGE = 64

COMMANDS = ("sample", "enumerate", "genfun", "series", "arctic", "laplacian", "verify", "render")


class UsageError(Exception):
    pass


class InconsistencyFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        if "invalid choice" in message:
            raise UsageError(message)
        raise ConfigError("<arguments>", message)


def resolve_config(spec: str) -> FieldConfig:
    """A path to a JSON file, or the name of a bundled configuration."""
    path = Path(spec)
    if path.exists():
        return load_config(path)
    if spec in BUNDLED:
        return bundled_config(spec)
    raise ConfigError("--config", f"no such file or bundled configuration: {spec!r} (bundled: {', '.join(BUNDLED)})")


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


# commands


def cmd_sample(args) -> int:
    """JSON for all samples, or SVG of the first one when --out ends in .svg."""
    from .arctic import render_svg
    from .shuffle import sample_batch

    cfg = resolve_config(args.config)
    batch = sample_batch(cfg.field(), args.order, args.samples, args.seed)
    if args.out and args.out.endswith(".svg"):
        _write(args.out, render_svg(batch.grove(0), None, n=args.order))
        return EXIT_OK
    groves = [batch.grove(s).to_json() for s in range(args.samples)]
    _write(args.out, _dump({"config": cfg.name, "order": args.order, "seed": args.seed, "groves": groves}))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    from .shuffle import enumerate_groves, partition_function

    cfg = resolve_config(args.config)
    field = cfg.field()
    law = enumerate_groves(field, args.order)
    prod, total = partition_function(field, args.order)
    groves = [dict(g.to_json(), probability=format_rational(p)) for g, p in law.groves()]
    data = {
        "config": cfg.name,
        "order": args.order,
        "count": len(groves),
        "partition_function": {"product": format_rational(prod), "weight_sum": format_rational(total)},
        "groves": groves,
    }
    _write(args.out, _dump(data))
    if prod != total or law.total() != 1:
        raise InconsistencyFailure(f"partition function mismatch: {prod} vs {total}")
    return EXIT_OK


def _solved(cfg):
    from .genfun import bundle_from_config, solve_system

    return solve_system(bundle_from_config(cfg))


def cmd_genfun(args) -> int:
    cfg = resolve_config(args.config)
    _write(args.out, _dump(_solved(cfg).to_json()))
    return EXIT_OK


def cmd_series(args) -> int:
    from .genfun import series_rows

    cfg = resolve_config(args.config)
    rows = series_rows(_solved(cfg), args.depth)
    target = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="")
    try:
        w = csv.writer(target, lineterminator="\n")
        w.writerow(["class", "i", "j", "k", "kind", "value"])
        for cls, i, j, k, kind, value in rows:
            w.writerow([" ".join(str(c) for c in cls), i, j, k, kind, format_rational(value)])
    finally:
        if target is not sys.stdout:
            target.close()
    return EXIT_OK


def _dual_for(cfg):
    from .arctic import dual_curve, homogeneous_part_at

    bundle = _solved(cfg)
    qt = homogeneous_part_at(bundle.det, note=f"Q~ of {cfg.name}")
    return qt, dual_curve(qt)


def cmd_arctic(args) -> int:
    from .arctic import arctic_slice, render_svg

    cfg = resolve_config(args.config)
    qt, dual = _dual_for(cfg)
    sl = arctic_slice(dual.curve, args.resolution)
    _write(args.out, render_svg(None, sl, n=1))
    if args.emit_poly:
        data = {
            "config": cfg.name,
            "homogeneous_part": qt.poly.to_json(),
            "dual": dual.curve.poly.to_json(),
            "dual_text": dual.curve.poly.to_text(),
        }
        Path(args.emit_poly).write_text(_dump(data))
    return EXIT_OK


def cmd_laplacian(args) -> int:
    from .spectral import char_poly, laplacian, newton_polygon

    cfg = resolve_config(args.config)
    L = laplacian(cfg.torus)
    P = char_poly(L)
    data = {
        "config": cfg.name,
        "laplacian": L.to_text(),
        "char_poly": P.to_json(),
        "char_poly_text": P.to_text(),
        "newton_polygon": newton_polygon(P).to_json(),
    }
    _write(args.out, _dump(data))
    if not P.subs({"z": 1, "w": 1}).is_zero():
        raise InconsistencyFailure("P(1,1) is not zero")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .seriescheck import full_suite

    names = [args.config] if args.config else list(BUNDLED)
    out = {}
    ok = True
    for name in names:
        cfg = resolve_config(name)
        report = full_suite(cfg, depth=args.depth)
        out[cfg.name] = report.to_json()
        ok = ok and report.passed
        for c in report.checks:
            print(f"[{'PASS' if c.passed else 'FAIL'}] {cfg.name}: {c.name}", file=sys.stderr)
    if args.out:
        Path(args.out).write_text(_dump(out))
    if not ok:
        raise InconsistencyFailure("verification failed")
    print("all identity checks passed", file=sys.stderr)
    return EXIT_OK


def cmd_render(args) -> int:
    from .arctic import arctic_slice, render_svg
    from .shuffle import sample_grove

    cfg = resolve_config(args.config)
    grove = sample_grove(cfg.field(), args.order, args.seed)
    sl = None
    if not args.no_curve:
        _, dual = _dual_for(cfg)
        sl = arctic_slice(dual.curve, args.resolution)
    _write(args.out, render_svg(grove, sl, n=args.order))
    return EXIT_OK


HANDLERS = {
    "sample": cmd_sample,
    "enumerate": cmd_enumerate,
    "genfun": cmd_genfun,
    "series": cmd_series,
    "arctic": cmd_arctic,
    "laplacian": cmd_laplacian,
    "verify": cmd_verify,
    "render": cmd_render,
}


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="grovearctic", description="Groves, generating functions and arctic curves for periodic conductances.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def add(name, help_text, config_required=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=config_required, help="JSON config path or bundled name (" + ", ".join(BUNDLED) + ")")
        p.add_argument("--out", help="output path (default stdout)")
        return p

    p = add("sample", "sample random groves on I(n) by shuffling")
    p.add_argument("--order", type=_positive, required=True)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--samples", type=_positive, default=1)

    p = add("enumerate", "exact law of the shuffle on I(n)")
    p.add_argument("--order", type=_positive, required=True)

    add("genfun", "assemble and solve the generating-function systems")

    p = add("series", "series coefficients of p, q, r, E as CSV")
    p.add_argument("--depth", type=int, default=6)

    p = add("arctic", "dual curve and arctic-curve slice as SVG")
    p.add_argument("--resolution", type=_positive, default=400)
    p.add_argument("--emit-poly", help="write the homogeneous part and dual polynomial as JSON")

    add("laplacian", "Laplacian, characteristic polynomial and Newton polygon")

    p = add("verify", "run every identity check (all bundled configs by default)", config_required=False)
    p.add_argument("--depth", type=int, default=3)

    p = add("render", "SVG of a sampled grove with the arctic curve overlaid")
    p.add_argument("--order", type=_positive, required=True)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--resolution", type=_positive, default=400)
    p.add_argument("--no-curve", action="store_true")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"grovearctic: {exc}", file=sys.stderr)
        print(f"commands: {', '.join(COMMANDS)}", file=sys.stderr)
        return EXIT_USAGE
    except (InconsistencyFailure, ConsistencyError, ArithmeticError) as exc:
        print(f"grovearctic: consistency failure: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (ConfigError, ValueError) as exc:
        print(f"grovearctic: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
