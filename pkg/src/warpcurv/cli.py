"""Command-line entry point: ``warpcurv <command> ...``.

Exit codes: 0 success, 1 invalid input, 2 scientific failure (construction,
certification or oracle comparison).
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .bundle import OrientableFlatBundle, deform, trivializing_cover_degree, validate
from .certify import (Unbounded, certify_upper_bound, pinching, principal_profiles,
                      rescale_to_unit_lower_bound)
from .checks import CHECKS
from .errors import (CertificationFailed, ConstructionFailed, InvalidParams, UnboundedInput,
                     WarpcurvError)
from .metricspec import CUSP, HYPERBOLIC, MetricSpec
from .morse import StratumData, handle_decomposition, homotopy_type, is_aspherical, kernel_rank
from .treegraded import (ConePoint, MetricTree, NotFound, find_open_perturbation, is_open,
                         wall_crossings)
from .volume import Divergent, EndSpec, end_volume
from .warpfn import MetricVariant, build_interpolant, choose_rho

EXIT_OK, EXIT_INPUT, EXIT_FAILURE = 0, 1, 2

VARIANTS = {
    "paper": MetricVariant.PAPER,
    MetricVariant.PAPER: MetricVariant.PAPER,
    "heintze-schroeder": MetricVariant.HEINTZE_SCHROEDER,
    "fujiwara": MetricVariant.FUJIWARA,
    "hyperbolic": HYPERBOLIC,
    "cusp": CUSP,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _kv(key: str, value) -> str:
    if isinstance(value, float):
        value = _fmt(value)
    return f"{key} = {value}"


def _emit(lines, out=None):
    text = "\n".join(lines) + "\n"
    (out or sys.stdout).write(text)


# ---------------------------------------------------------------------------
# commands

def cmd_construct(args) -> int:
    model = VARIANTS[args.variant]
    if model in (HYPERBOLIC, CUSP):
        spec = MetricSpec.hyperbolic(args.n) if model == HYPERBOLIC else MetricSpec.cusp(args.n)
        report = [_kv("model", model), _kv("n", args.n)]
    else:
        if not args.eps > 0:
            raise InvalidParams(f"--eps must be positive, got {args.eps}")
        if model == MetricVariant.FUJIWARA:
            variant = MetricVariant.fujiwara(args.tau)
        elif args.tau is not None:
            raise InvalidParams(f"--tau only applies to the fujiwara variant")
        else:
            variant = MetricVariant(model)
        rho0 = choose_rho(args.eps)
        ip = build_interpolant(args.eps, args.rho if args.rho is not None else rho0, variant)
        spec = MetricSpec.from_interpolant(ip, args.n)
        report = [_kv("model", model), _kv("n", args.n), _kv("eps", float(args.eps)),
                  _kv("rho_min", rho0), _kv("rho", float(ip.rho)), _kv("retries", ip.retries),
                  _kv("grid_step", ip.grid_step),
                  _kv("glue_mismatch", max(ip.v.glue_mismatch(), ip.h.glue_mismatch())),
                  _kv("pieces", len(ip.v.pieces))]
        if model == MetricVariant.FUJIWARA:
            report.append(_kv("tau", float(args.tau)))
        for key in sorted(ip.minima):
            report.append(_kv(f"min {key}", ip.minima[key]))
        strict = variant.strict
        ok = min(ip.minima.values()) > 0 if strict else min(ip.minima.values()) >= 0
        report.append(_kv("positivity", "strict" if strict and ok else
                          ("nonnegative" if ok else "violated")))
    if args.out:
        spec.save(args.out)
        report.append(_kv("spec", args.out))
        _emit(report)
    else:
        sys.stdout.write(spec.to_text())
        _emit(report, sys.stderr)
    return EXIT_OK


def cmd_curvature(args) -> int:
    spec = MetricSpec.load(args.spec)
    if not args.step > 0 or args.stop < args.start:
        raise InvalidParams("need step > 0 and stop >= start")
    count = int(math.floor((args.stop - args.start) / args.step + 1e-9)) + 1
    grid = args.start + args.step * np.arange(count)
    sys.stdout.write(principal_profiles(spec, grid).to_csv())
    return EXIT_OK


def cmd_certify(args) -> int:
    spec = MetricSpec.load(args.spec)
    cert = certify_upper_bound(spec)
    sys.stdout.write(cert.to_text())
    if args.rescale:
        try:
            res = rescale_to_unit_lower_bound(cert)
        except UnboundedInput as exc:
            _emit([_kv("rescale", f"unavailable ({exc})")])
        else:
            _emit([_kv("rescale_factor", res.scale), _kv("rescaled_lower", res.lower),
                   _kv("rescaled_upper", res.upper)])
    return EXIT_OK


def cmd_pinching(args) -> int:
    spec = MetricSpec.load(args.spec)
    p = pinching(spec)
    if isinstance(p, Unbounded):
        lines = ["pinching = unbounded"]
        lines += [f"witness = {_fmt(r)} {_fmt(k)} {_fmt(b)}" for r, k, b in p.witness]
        lines.append(_kv("witness_verified", str(p.verified()).lower()))
    else:
        lines = ["pinching = finite", _kv("lower", p.lower), _kv("upper", p.upper),
                 _kv("lower_attained", str(p.lower_attained).lower()),
                 _kv("upper_attained", str(p.upper_attained).lower())]
    _emit(lines)
    return EXIT_OK


def cmd_volume(args) -> int:
    spec = MetricSpec.load(args.spec)
    vol = end_volume(EndSpec(spec.v, spec.h, spec.n, args.volB, args.r0))
    if isinstance(vol, Divergent):
        _emit(["volume = divergent", _kv("reason", vol.reason)])
    else:
        _emit([_kv("volume", vol)])
    return EXIT_OK


def cmd_oracle(args) -> int:
    res = CHECKS[args.check]()
    sys.stdout.write(res.to_text())
    return EXIT_OK if res.passed else EXIT_FAILURE


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()] if text else []


def cmd_bundle(args) -> int:
    torsion = _int_list(args.torsion)
    angles = [Fraction(x) for x in args.torsion_angles.split(",")] if args.torsion_angles else []
    free = [float(x) for x in args.free_angles.split(",")] if args.free_angles else []
    b = validate(OrientableFlatBundle(len(free), torsion, free, angles))
    d = deform(b, args.t)
    _emit([_kv("valid", "true"),
           _kv("rank", b.rank),
           _kv("free_angles_at_t", " ".join(_fmt(a) for a in d.free_angles)),
           _kv("torsion_angles", " ".join(str(a) for a in d.torsion_angles)),
           _kv("trivializing_cover_degree", trivializing_cover_degree(b))])
    return EXIT_OK


def cmd_morse(args) -> int:
    s = StratumData(_int_list(args.codims), args.countable)
    handles = handle_decomposition(s)
    asph = is_aspherical(s)
    lines = [_kv("handles", " ".join(f"{k}:{v}" for k, v in handles.items()) or "none"),
             _kv("aspherical", str(asph).lower()),
             _kv("kernel_rank", kernel_rank(s) if asph else "undefined"),
             _kv("wedge_of_spheres", " ".join(str(k) for k in homotopy_type(s)) or "point")]
    _emit(lines)
    return EXIT_OK


def _cone_point(T: MetricTree, text: str) -> ConePoint:
    """``t,vertex`` or ``t,edge:offset``."""
    t, sep, where = text.partition(",")
    if not sep:
        raise InvalidParams(f"point must be 't,vertex' or 't,edge:offset', got {text!r}")
    if ":" in where:
        e, off = where.split(":", 1)
        p = T.point(int(e), float(off))
    else:
        p = T.vertex(where.strip())
    return ConePoint(float(t), p)


def cmd_tree(args) -> int:
    T = MetricTree.load(args.tree)
    x, y, z = (_cone_point(T, s) for s in args.open)
    opened = is_open(T, x, y, z)
    try:
        crossings = " ".join(str(c) for c in wall_crossings(T, x, y, z))
    except WarpcurvError:
        crossings = "degenerate tripod"
    _emit([f"{'open' if opened else 'not open'}; crossings {crossings}"])
    if args.perturb:
        res = find_open_perturbation(T, x, y, z, args.perturb)
        if isinstance(res, NotFound):
            _emit([f"perturbation not found; {res.diagnostic}"])
            return EXIT_FAILURE
        _emit([f"perturbation {_fmt(res.t)},{res.p.edge}:{_fmt(res.p.offset)}"])
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="warpcurv", description="Warped-product curvature workbench.")
    ap.add_argument("--version", action="version", version=f"warpcurv {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="build a warping pair and write a metric spec")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--variant", choices=sorted(VARIANTS), default="paper")
    p.add_argument("--tau", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("curvature", help="CSV of the principal curvature profiles")
    p.add_argument("--spec", required=True)
    p.add_argument("--start", type=float, default=-1.0)
    p.add_argument("--stop", type=float, default=1.0)
    p.add_argument("--step", type=float, default=0.1)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("certify", help="curvature-bound certificate")
    p.add_argument("--spec", required=True)
    p.add_argument("--rescale", action="store_true")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("pinching", help="two-sided bounds or unboundedness witnesses")
    p.add_argument("--spec", required=True)
    p.set_defaults(func=cmd_pinching)

    p = sub.add_parser("volume", help="volume of the end (-inf, r0]")
    p.add_argument("--spec", required=True)
    p.add_argument("--r0", type=float, default=0.0)
    p.add_argument("--volB", type=float, default=1.0)
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("oracle", help="compare formulas with the finite-difference oracle")
    p.add_argument("--check", choices=sorted(CHECKS), required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bundle", help="flat circle bundle holonomy")
    p.add_argument("--torsion", default="")
    p.add_argument("--torsion-angles", default="")
    p.add_argument("--free-angles", default="")
    p.add_argument("--t", type=float, default=1.0)
    p.set_defaults(func=cmd_bundle)

    p = sub.add_parser("morse", help="handle bookkeeping for a codimension census")
    p.add_argument("--codims", default="")
    p.add_argument("--countable", action="store_true")
    p.set_defaults(func=cmd_morse)

    p = sub.add_parser("tree", help="open-triangle test in R x tree")
    p.add_argument("--tree", required=True)
    p.add_argument("--open", nargs=3, required=True, metavar="T,POINT")
    p.add_argument("--perturb", type=int, default=0, metavar="N")
    p.set_defaults(func=cmd_tree)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConstructionFailed, CertificationFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (WarpcurvError, OSError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
