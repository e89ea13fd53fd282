"""Command-line front end.

Usage:
    steklov-annulus spectrum --T 1 --rho1 1 --rho2 1 --k 4 [--format json|csv]
    steklov-annulus family --q 2 | --T 3.5 [--branch lower] | --sweep 0.5:4:0.5
    steklov-annulus audit --q 2
    steklov-annulus scan --T 3.04 [--json]
    steklov-annulus below-t1 --T 1.0
    steklov-annulus galerkin --T 3 --rho1 1 --rho2 1 --eps 0.1 --m 1 --N 16 --k 6
    steklov-annulus export-mesh --q 1/2 --resolution 64 --output catenoid.obj
    steklov-annulus verify

Exit codes: 0 success, 1 failed check, 2 usage error, 3 infeasible input,
4 I/O error. Relative output paths resolve against $STEKLOV_ANNULUS_OUTDIR
when it is set.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import acceptance, audit, explorer, family, galerkin, mesh, spectrum
from .errors import InfeasibleError, NoCriticalClassError, RangeError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_IO = 0, 1, 2, 3, 4
OUTDIR_ENV = "STEKLOV_ANNULUS_OUTDIR"


def _number(text: str) -> float:
    try:
        value = float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def _positive(text: str) -> float:
    value = _number(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def _resolution(text: str) -> int:
    value = _positive_int(text)
    if value < 8:
        raise argparse.ArgumentTypeError(f"resolution must be >= 8: {text!r}")
    return value


def _sweep(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("sweep must be start:stop:step")
    start, stop, step = (_positive(p) for p in parts)
    if stop < start:
        raise argparse.ArgumentTypeError("sweep stop must be >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def _resolve(path: str) -> Path:
    p = Path(path)
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not p.is_absolute():
        p = Path(outdir) / p
    return p


def _write_all(outputs: dict[str, str]) -> None:
    """Write every file or none: stage to temporaries, then rename into place."""
    staged: list[tuple[str, Path]] = []
    try:
        for path, text in outputs.items():
            target = _resolve(path)
            fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
            staged.append((tmp, target))
        for tmp, target in staged:
            os.replace(tmp, target)
    except OSError:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
        raise


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        _write_all({output: text})


def cmd_spectrum(args) -> int:
    spec = spectrum.assemble_spectrum(args.T, args.rho1, args.rho2, args.k)
    _emit(spec.to_csv() if args.format == "csv" else spec.to_json(), args.output)
    return EXIT_OK


def cmd_family(args) -> int:
    if args.sweep is not None:
        _emit(family.family_csv(args.sweep), args.output)
        return EXIT_OK
    if args.q is not None:
        cc = family.solve_Tq(args.q)
        fbm = family.map_for_q(args.q)
    else:
        fbm = family.build_map(args.T, args.branch)
        cc = family.solve_Tq(fbm.q)
    report = {"critical_class": cc.to_dict(), "map": fbm.to_dict()}
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_audit(args) -> int:
    rep = audit.audit_free_boundary(family.map_for_q(args.q), (args.grid, args.grid))
    _emit(rep.to_json(), args.output)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_scan(args) -> int:
    grid = np.logspace(math.log10(args.qmin), math.log10(args.qmax), args.n)
    prof = explorer.scan_q(args.T, grid)
    text = json.dumps(prof.summary(), indent=2) + "\n" if args.json else prof.to_csv()
    _emit(text, args.output)
    return EXIT_OK


def cmd_below_t1(args) -> int:
    _emit(explorer.below_T1_report(args.T).to_json(), args.output)
    return EXIT_OK


def cmd_galerkin(args) -> int:
    F = galerkin.FourierDensity
    rho0 = F.cosine(args.rho1, args.eps, args.m) if args.eps else F.constant(args.rho1)
    rhoT = F.constant(args.rho2)
    system = galerkin.build_system(rho0, rhoT, args.T, args.N)
    spec = galerkin.solve_generalized(system, min(args.k, system.size))
    outputs = {}
    if args.matrices:
        stem = args.matrices
        outputs = {f"{stem}_D.csv": system.to_csv("D"), f"{stem}_M.csv": system.to_csv("M")}
    if args.output:
        outputs[args.output] = spec.to_json()
    else:
        sys.stdout.write(spec.to_json())
    if outputs:
        _write_all(outputs)
    return EXIT_OK


def cmd_export_mesh(args) -> int:
    fbm = family.map_for_q(args.q)
    n = args.resolution
    vertices, faces = mesh.surface_mesh(fbm, n, n)
    comment = f"stretched catenoid q={args.q!r} T={fbm.T!r}\nvertices {len(vertices)} faces {len(faces)}"
    obj_path = args.output
    csv_path = str(Path(obj_path).with_suffix(".csv"))
    _write_all({obj_path: mesh.to_obj(vertices, faces, comment), csv_path: mesh.profile_csv(fbm, n)})
    return EXIT_OK


def cmd_verify(args) -> int:
    results = acceptance.run_all()
    for r in results:
        print(r.line())
        if args.verbose:
            for name, ok, detail in r.checks:
                print(f"        {'ok ' if ok else 'BAD'} {name}: {detail}")
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return EXIT_OK if passed == len(results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steklov-annulus", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="closed-form Steklov spectrum")
    p.add_argument("--T", type=_positive, required=True)
    p.add_argument("--rho1", type=_positive, required=True)
    p.add_argument("--rho2", type=_positive, required=True)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("family", help="critical class and free boundary map")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--q", type=_positive)
    g.add_argument("--T", type=_positive)
    g.add_argument("--sweep", type=_sweep, metavar="START:STOP:STEP")
    p.add_argument("--branch", choices=("upper", "lower"), default="upper")
    p.add_argument("--output")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("audit", help="audit the family map with density ratio q")
    p.add_argument("--q", type=_positive, required=True)
    p.add_argument("--grid", type=_resolution, default=32)
    p.add_argument("--output")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("scan", help="normalized sigma1 over q at fixed T")
    p.add_argument("--T", type=_positive, required=True)
    p.add_argument("--qmin", type=_positive, default=1e-2)
    p.add_argument("--qmax", type=_positive, default=1e2)
    p.add_argument("--n", type=_positive_int, default=400)
    p.add_argument("--json", action="store_true", help="print the summary instead of the profile CSV")
    p.add_argument("--output")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("below-t1", help="verdict for a modulus below T1")
    p.add_argument("--T", type=_positive, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_below_t1)

    p = sub.add_parser("galerkin", help="Fourier-Galerkin spectrum, optional cosine perturbation at t=0")
    p.add_argument("--T", type=_positive, required=True)
    p.add_argument("--rho1", type=_positive, default=1.0)
    p.add_argument("--rho2", type=_positive, default=1.0)
    p.add_argument("--eps", type=_number, default=0.0)
    p.add_argument("--m", type=_positive_int, default=1)
    p.add_argument("--N", type=_positive_int, default=16)
    p.add_argument("--k", type=_positive_int, default=8)
    p.add_argument("--matrices", metavar="STEM", help="also write STEM_D.csv and STEM_M.csv")
    p.add_argument("--output")
    p.set_defaults(func=cmd_galerkin)

    p = sub.add_parser("export-mesh", help="OBJ surface and CSV profile of a stretched catenoid")
    p.add_argument("--q", type=_positive, required=True)
    p.add_argument("--resolution", type=_resolution, default=64)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_export_mesh)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--verbose", "-v", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NoCriticalClassError, InfeasibleError, RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
