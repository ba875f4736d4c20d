"""Command-line entry point: ``thetalocus {theta,incidence,census,verify,io}``.

Exit codes: 0 pass, 1 fail, 2 usage, 3 indeterminate.  The config file for
``verify`` may also be given through ``THETALOCUS_CONFIG``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import census, incidence
from .charalg import Characteristic, CharacteristicError
from .io import SchemaError, dumps, io_roundtrip, load_vector
from .siegel import DEFAULT_TOL, PeriodMatrix, SiegelError
from .thetanum import (
    DEFAULT_EVAL_TOL,
    TruncationError,
    eval_theta,
    heat_residual,
    jet_at_zero,
    vanishing_order_at_zero,
)
from .verify import VerifyConfig, run_verify

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_UNSURE = 0, 1, 2, 3


def _complex(v: complex) -> dict:
    return {"re": v.real, "im": v.imag}


def _emit(obj) -> None:
    sys.stdout.write(dumps(obj) + "\n")


def _load_omega(args):
    obj = json.loads(Path(args.omega).read_text())
    try:
        return PeriodMatrix.from_json(obj, tol=args.tol_member)
    except SiegelError as exc:
        raise SchemaError(f"period_matrix: {exc}") from exc


def _theta(args) -> int:
    delta = Characteristic.parse(args.delta)
    omega = _load_omega(args)
    if args.action == "eval":
        z = load_vector(args.z, omega.genus) if args.z else np.zeros(omega.genus, dtype=complex)
        v = eval_theta(delta, omega, z, args.tol)
        _emit({"value": _complex(v.value), "tail_bound": v.tail_bound, "radius": v.radius, "n_terms": v.n_terms})
    elif args.action == "jet":
        j = jet_at_zero(delta, omega, args.tol)
        _emit({
            "value": _complex(j.value),
            "gradient": [_complex(x) for x in j.gradient],
            "hessian": [[_complex(x) for x in row] for row in j.hessian],
            "bounds": [j.value_bound, j.gradient_bound, j.hessian_bound],
            "radius": j.radius,
        })
    elif args.action == "heat":
        res = heat_residual(delta, omega, args.j - 1, args.k - 1, args.tol, args.fd_step)
        _emit({"j": args.j, "k": args.k, "residual": res, "fd_step": args.fd_step})
    elif args.action == "order":
        order = vanishing_order_at_zero(delta, omega, args.tol)
        _emit({"order": order})
        if isinstance(order, str):
            return EXIT_UNSURE
    return EXIT_PASS


def _incidence(args) -> int:
    if args.action == "census":
        _emit(incidence.local_intersection_census())
        return EXIT_PASS
    point = incidence.sample_point(args.kind, args.seed)
    try:
        report = incidence.vanishing_set_numeric(point, args.tol)
    except incidence.ClassificationUncertain as exc:
        _emit({"error": str(exc), "offending": [d.compact() for d in exc.offending]})
        return EXIT_UNSURE
    _emit(report)
    return EXIT_PASS


def _census(args) -> int:
    if args.action == "components":
        c = census.component_count(args.genus)
        _emit({"genus": args.genus, "count": str(c), "integral": c.denominator == 1})
    elif args.action == "betti":
        _emit({
            "genus": args.genus,
            "betti_1": census.moduli_betti(args.genus),
            "closed_form": census.moduli_betti_closed_form(args.genus),
            "poincare_polynomial": census.poincare_polynomial(args.genus),
        })
    elif args.action == "nerve":
        data = census.NerveInput.from_json(json.loads(Path(args.config).read_text())) if args.config \
            else census.boundary_configuration()
        table = census.nerve_e1(data)
        _emit({"input": data, "table": table, "degrees": census.supported_degrees(table)})
    elif args.action == "gysin":
        gys = census.gysin_support(args.ambient_dim, args.boundary)
        _emit({str(k): v for k, v in gys.items()})
    return EXIT_PASS


def _verify(args) -> int:
    cfg_path = args.config or os.environ.get("THETALOCUS_CONFIG")
    if cfg_path:
        config = VerifyConfig.from_json(json.loads(Path(cfg_path).read_text()))
    else:
        config = VerifyConfig()
    if args.seed is not None:
        config.seed = args.seed
    if args.tol is not None:
        config.tol = args.tol
    if args.checks:
        config.checks = args.checks
    report = run_verify(config)
    text = dumps(report)
    if args.json:
        Path(args.json).write_text(text + "\n")
    for c in report.checks:
        print(f"{c.status.upper():>13}  {c.name}  ({c.elapsed_s:.2f} s)", file=sys.stderr)
    print(f"overall: {report.status}", file=sys.stderr)
    if not args.json:
        sys.stdout.write(text + "\n")
    return report.exit_code()


def _io(args) -> int:
    ok = io_roundtrip(args.path)
    _emit({"path": args.path, "roundtrip_identical": ok})
    return EXIT_PASS if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thetalocus", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    th = sub.add_parser("theta", help="evaluate theta functions")
    th.add_argument("action", choices=["eval", "jet", "heat", "order"])
    th.add_argument("--delta", required=True, help="characteristic such as [110|100]")
    th.add_argument("--omega", required=True, help="period matrix JSON file")
    th.add_argument("--z", help="z vector JSON file (eval only)")
    th.add_argument("--tol", type=float, default=DEFAULT_EVAL_TOL)
    th.add_argument("--tol-member", dest="tol_member", type=float, default=DEFAULT_TOL,
                    help="Siegel membership tolerance")
    th.add_argument("--j", type=int, default=1, help="1-based row index (heat)")
    th.add_argument("--k", type=int, default=1, help="1-based column index (heat)")
    th.add_argument("--fd-step", dest="fd_step", type=float, default=1e-5)
    th.set_defaults(func=_theta)

    inc = sub.add_parser("incidence", help="vanishing even thetanulls on reducible strata")
    inc.add_argument("action", choices=["report", "census"])
    inc.add_argument("--kind", choices=list(incidence.KINDS), default=incidence.RED)
    inc.add_argument("--seed", type=int, default=0)
    inc.add_argument("--tol", type=float, default=DEFAULT_EVAL_TOL)
    inc.set_defaults(func=_incidence)

    ce = sub.add_parser("census", help="exact counts and degree support")
    ce.add_argument("action", choices=["components", "betti", "nerve", "gysin"])
    ce.add_argument("--genus", type=int, default=3)
    ce.add_argument("--config", help="NerveInput JSON file (nerve)")
    ce.add_argument("--ambient-dim", dest="ambient_dim", type=int, default=10)
    ce.add_argument("--boundary", type=int, nargs="+", default=[7, 8])
    ce.set_defaults(func=_census)

    ve = sub.add_parser("verify", help="run the reproduction checks")
    ve.add_argument("--json", help="write the report here instead of stdout")
    ve.add_argument("--seed", type=int)
    ve.add_argument("--tol", type=float)
    ve.add_argument("--config", help="JSON config {seed, tol, checks}")
    ve.add_argument("--checks", nargs="+", help="check names or prefixes, e.g. charalg census")
    ve.set_defaults(func=_verify)

    io_ = sub.add_parser("io", help="parse/serialize round trip of a JSON document")
    io_.add_argument("path")
    io_.set_defaults(func=_io)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except (CharacteristicError, SiegelError, SchemaError, ValueError, FileNotFoundError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TruncationError as exc:
        print(f"error: {exc} (best bound {exc.best_bound:.3e})", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
