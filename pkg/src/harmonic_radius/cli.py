"""Command-line interface.

Subcommands::

    radius    --kind convex|univalent
    table     [--family n1|n2] --n-max K
    certify   --map SPEC --r R [--check sense|pairwise|boundary] [--convex-h]
    sharpness --kind convex|univalent --r R
    render    --map SPEC --out FILE [--rmax X]

SPEC is ``f1``, ``f2`` or ``h=<catalog>;w=<catalog>`` where a catalog entry is
one of ``halfplane:+1``, ``koebe:-1``, ``blaschke:0.9``, ``monomial:0:2``
(theta in radians, degree) or ``const:0.5+0i``.

Exit codes: 0 success / HOLDS_SAMPLED, 2 usage error, 3 FAILS_WITNESS,
4 INCONCLUSIVE.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

from .certify import (
    Check,
    GridSpec,
    Verdict,
    boundary_simple,
    certify_sense_preserving,
    infer_injectivity,
    injective_pairwise,
)
from .expr import CatalogError
from .mapping import MappingSpecError, NormalizationError, DilatationBoundError, parse_mapping
from .radius import radius_n1, radius_n2, sharpness_witness, theorem_radius
from .render import emit_svg, sample_image

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAILS = 3
EXIT_INCONCLUSIVE = 4

VERDICT_EXIT = {
    Verdict.HOLDS_SAMPLED: EXIT_OK,
    Verdict.FAILS_WITNESS: EXIT_FAILS,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="harmonic-radius", description="Injectivity radii for harmonic mappings f = h + conj(w h).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("radius", help="sharp sense-preservation radius")
    s.add_argument("--kind", choices=["convex", "univalent"], required=True)

    s = sub.add_parser("table", help="CSV of monomial-dilatation radii")
    s.add_argument("--family", choices=["n1", "n2"])
    s.add_argument("--n-max", type=int, required=True)

    s = sub.add_parser("certify", help="JSON certificate for a mapping on |z| <= r")
    s.add_argument("--map", required=True, dest="mapping")
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--check", choices=["sense", "pairwise", "boundary"], default="sense")
    s.add_argument("--convex-h", action="store_true",
                   help="assert h is convex univalent; promotes a sense-preservation pass to injectivity")
    s.add_argument("--n-radii", type=int, default=GridSpec.n_radii)
    s.add_argument("--n-angles", type=int, default=GridSpec.n_angles)
    s.add_argument("--refine-depth", type=int, default=GridSpec.refine_depth)
    s.add_argument("--samples", type=int, default=4096, help="boundary samples")
    s.add_argument("--tol", type=float, default=1e-9, help="pairwise image tolerance")

    s = sub.add_parser("sharpness", help="extremal witness zeta above the sharp radius")
    s.add_argument("--kind", choices=["convex", "univalent"], required=True)
    s.add_argument("--r", type=float, required=True)

    s = sub.add_parser("render", help="SVG of the image of the polar grid")
    s.add_argument("--map", required=True, dest="mapping")
    s.add_argument("--out", required=True)
    s.add_argument("--rmax", type=float, default=0.98)
    s.add_argument("--width", type=int, default=800)
    s.add_argument("--n-circles", type=int, default=12)
    s.add_argument("--n-rays", type=int, default=24)
    s.add_argument("--points", type=int, default=512)
    return p


def _cmd_radius(args, out):
    res = theorem_radius(args.kind)
    print(f"{res.value!r} ({res.exact})", file=out)
    return EXIT_OK


def _cmd_table(args, out):
    if args.n_max < 1:
        raise UsageError("--n-max must be >= 1")
    writer = csv.writer(out, lineterminator="\n")
    families = [args.family] if args.family else ["n1", "n2"]
    header = ["n"]
    for fam in families:
        header += [f"r_{fam}", f"residual_{fam}"]
    writer.writerow(header)
    for n in range(1, args.n_max + 1):
        row = [n]
        for fam in families:
            res = radius_n1(n) if fam == "n1" else radius_n2(n)
            row += [repr(res.value), repr(res.residual)]
        writer.writerow(row)
    return EXIT_OK


def _cmd_certify(args, out):
    if args.convex_h and args.check != "sense":
        raise UsageError("--convex-h only applies to --check sense")
    m = parse_mapping(args.mapping)
    if args.check == "sense":
        grid = GridSpec(args.n_radii, args.n_angles, args.refine_depth)
        cert = certify_sense_preserving(m, args.r, grid)
        if args.convex_h and cert.verdict is Verdict.HOLDS_SAMPLED:
            cert = infer_injectivity(cert, True)
    elif args.check == "pairwise":
        grid = GridSpec(args.n_radii, args.n_angles, args.refine_depth)
        cert = injective_pairwise(m, args.r, grid, args.tol)
    else:
        cert = boundary_simple(m, args.r, args.samples)
    print(cert.to_json(), file=out)
    return VERDICT_EXIT[cert.verdict]


def _cmd_sharpness(args, out):
    wit = sharpness_witness(args.kind, args.r)
    doc = {"kind": args.kind, "r": args.r, "witness": None, "message": "no witness"}
    if wit is not None:
        doc["witness"] = {"zeta": wit.zeta, "excess": wit.excess}
        doc["message"] = "sense-preservation fails at z = r for the extremal mapping"
    print(json.dumps(doc, sort_keys=True), file=out)
    return EXIT_OK


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cmd_render(args, out):
    m = parse_mapping(args.mapping)
    img = sample_image(m, args.rmax, args.n_circles, args.n_rays, args.points)
    write_atomic(args.out, emit_svg(img, args.width))
    print(args.out, file=out)
    return EXIT_OK


COMMANDS = {
    "radius": _cmd_radius,
    "table": _cmd_table,
    "certify": _cmd_certify,
    "sharpness": _cmd_sharpness,
    "render": _cmd_render,
}


def _error(kind: str, message: str, err) -> None:
    print(json.dumps({"error": kind, "message": message}), file=err)


def run(argv=None, out=None, err=None) -> int:
    """Execute one command; returns the process exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        buf = io.StringIO()
        code = COMMANDS[args.command](args, buf)
    except UsageError as exc:
        _error("usage", str(exc), err)
        return EXIT_USAGE
    except (CatalogError, MappingSpecError, NormalizationError, DilatationBoundError) as exc:
        _error("mapping", str(exc), err)
        return EXIT_USAGE
    except ValueError as exc:
        _error("value", str(exc), err)
        return EXIT_USAGE
    out.write(buf.getvalue())
    return code


def main() -> None:
    sys.exit(run())
