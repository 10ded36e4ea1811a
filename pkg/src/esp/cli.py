"""``esp`` command line.

Exit codes: 0 success, 1 verification or solver failure, 2 usage or
parameter error. Numbers are printed with 12 significant digits.
"""

import argparse
import csv
import dataclasses
import io
import json
import math
import sys

import numpy as np

from . import catalog, eop, numsolve, specfun, verify
from .catalog import FamilyId, Reading
from .errors import ConvergenceError, ParameterError, SingularityError, SolverError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# flag -> parameter field name
FAMILY_FLAGS = ("omega", "ell", "dim", "p2", "A", "B", "P1", "Q", "p", "a", "b", "alpha")

SYMBOLS = """\
flag      meaning
--omega   oscillator frequency
--ell     angular momentum quantum number
--dim     number of space dimensions
--p2      Morse range parameter of the extended Morse family
--A --B   strength parameters (extended Morse, Scarf I; standard Morse, Rosen-Morse)
--P1 --Q  extended Rosen-Morse parameters
--p       Scarf I scale (interval is |r| < pi/(2p))
--a --b --alpha   standard Scarf I parameters; --a is also the standard Morse
                  and Rosen-Morse range parameter
"""


class UsageError(Exception):
    pass


def fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def _grid(text, need_points=True):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--grid expects min:max:points, got {text!r}")
    try:
        lo = float(parts[0]) if parts[0] else None
        hi = float(parts[1]) if parts[1] else None
        n = int(parts[2]) if parts[2] else None
    except ValueError:
        raise UsageError(f"malformed --grid {text!r}") from None
    if need_points and n is None:
        raise UsageError("--grid needs a point count")
    if n is not None and n < 1:
        raise UsageError("--grid point count must be positive")
    return lo, hi, n


def _family_params(args):
    fid = FamilyId(args.family)
    cls = catalog.PARAMS_BY_FAMILY[fid]
    fields = {f.name: f for f in dataclasses.fields(cls)}
    params = {}
    for flag in FAMILY_FLAGS:
        val = getattr(args, flag, None)
        if val is None:
            continue
        if flag not in fields:
            raise UsageError(f"--{flag} does not apply to {fid.value}")
        params[flag] = val
    if getattr(args, "reading", None) is not None:
        if "reading" not in fields:
            raise UsageError(f"--reading does not apply to {fid.value}")
        params["reading"] = Reading(args.reading)
    missing = [
        n for n, f in fields.items()
        if f.default is dataclasses.MISSING and n not in params
    ]
    if missing:
        raise UsageError(f"{fid.value} needs " + ", ".join(f"--{m}" for m in missing))
    for key in ("ell", "dim"):
        if key in params:
            if float(params[key]) != int(params[key]):
                raise ParameterError(f"--{key} must be an integer")
            params[key] = int(params[key])
    return fid, params


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(header, rows):
    cells = [header] + [[fmt(v) if not isinstance(v, str) else v for v in r] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
    lines = ["  ".join(c[i].rjust(widths[i]) for i in range(len(header))) for c in cells]
    return "\n".join(lines) + "\n"


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in r])
    return buf.getvalue()


def _render(header, rows, form):
    if form == "csv":
        return _csv(header, rows)
    if form == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    return _table(header, rows)


# Subcommands -------------------------------------------------------------------


def cmd_list(args):
    fids = [FamilyId(args.family)] if args.family else list(FamilyId)
    entries = []
    for fid in fids:
        cls = catalog.PARAMS_BY_FAMILY[fid]
        params = {}
        for f in dataclasses.fields(cls):
            d = None if f.default is dataclasses.MISSING else f.default
            params[f.name] = d.value if isinstance(d, Reading) else d
        entries.append({
            "family": fid.value,
            "partner": catalog.partner(fid).value,
            "params": params,
            "admissibility": catalog.ADMISSIBILITY[fid],
        })
    if args.format == "json":
        _emit(json.dumps(entries, indent=2) + "\n", args.out)
    else:
        lines = []
        for e in entries:
            ps = ", ".join(f"{k}" + ("" if v is None else f"={v}") for k, v in e["params"].items())
            lines.append(f"{e['family']}: params({ps}); partner {e['partner']}")
            lines.append(f"    {e['admissibility']}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _check_levels(model, levels):
    if levels < 1:
        raise UsageError("--levels must be >= 1")
    if model.m_max is not None and levels - 1 > model.m_max:
        raise ParameterError(
            f"{model.id.value}: requested {levels} levels but m_max={model.m_max}"
        )


def cmd_spectrum(args):
    fid, params = _family_params(args)
    model = catalog.build_model(fid, params)
    _check_levels(model, args.levels)
    header = ["m", "E_analytic"]
    rows = [[m, model.energy(m)] for m in range(args.levels)]
    if args.numeric:
        header += ["E_numeric_fd", "E_numeric_numerov", "abs_err"]
        shared = None
        for m, row in enumerate(rows):
            if model.level_dependent_potential or shared is None:
                prob = numsolve.reduce(
                    model, m, levels=None if model.level_dependent_potential else args.levels
                )
                lo, hi, n = _grid(args.grid, need_points=False) if args.grid else (None,) * 3
                grid = numsolve.default_grid(prob, n)
                if lo is not None or hi is not None:
                    grid = numsolve.GridSpec(
                        lo if lo is not None else grid.r_min,
                        hi if hi is not None else grid.r_max,
                        grid.points,
                    )
                k = m + 3 if model.level_dependent_potential else args.levels + 1
                fdv = numsolve.fd_spectrum_richardson(prob, grid, k)
                shared = (prob, grid, fdv)
            prob, grid, fdv = shared
            E = row[1]
            j = (int(np.argmin(np.abs(np.asarray(fdv[0][:-1]) - E)))
                 if model.level_dependent_potential else m)
            sol = numsolve.solve_level(prob, grid, j, fdv)
            row += [sol.E_fd, sol.numerov.E, max(abs(sol.E_fd - E), abs(sol.numerov.E - E))]
    if args.format == "json":
        doc = {
            "family": fid.value,
            "params": catalog.params_to_dict(model.params),
            "levels": [{h: (float(fmt(v)) if h != "m" else v) for h, v in zip(header, r)}
                       for r in rows],
        }
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        _emit(_render(header, rows, args.format), args.out)
    return EXIT_OK


def cmd_verify(args):
    fid, params = _family_params(args)
    model = catalog.build_model(fid, params)
    _check_levels(model, args.levels)
    points = _grid(args.grid, need_points=False)[2] if args.grid else None
    tols = verify.Tolerances(spectrum_rel=args.tol) if args.tol else None
    report = verify.verify_family(fid, params, args.levels, tols=tols, grid_points=points)
    if args.format == "json":
        _emit(report.to_json(indent=2) + "\n", args.out)
    else:
        header = ["m", "E_analytic", "E_numeric_fd", "E_numeric_numerov", "rel_err",
                  "nodes_expected", "nodes_found", "norm_dev", "residual_max"]
        rows = [[getattr(r, h) for h in header] for r in report.rows]
        text = _render(header, rows, args.format)
        if args.format == "table":
            text += f"pass: {fmt(report.passed)}\n"
            if report.resolved_reading:
                text += f"resolved reading: {report.resolved_reading}\n"
        _emit(text, args.out)
    if not report.passed:
        for e in report.errors:
            print(f"esp: {e}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_wavefunction(args):
    fid, params = _family_params(args)
    model = catalog.build_model(fid, params)
    model.check_level(args.m)
    if not args.grid:
        raise UsageError("wavefunction needs --grid min:max:points")
    lo, hi, n = _grid(args.grid)
    if lo is None or hi is None:
        raise UsageError("wavefunction --grid needs explicit min and max")
    r = np.linspace(lo, hi, n)
    if not model.domain.contains(r):
        raise ParameterError(
            f"grid [{lo}, {hi}] leaves the open domain ({model.domain.lo}, {model.domain.hi})"
        )
    m = args.m
    cols = [r, model.psi(m, r), model.V(r, m), model.V1(r, m), model.V2(r, m)]
    rows = [list(t) for t in zip(*cols)]
    _emit(_csv(["r", "psi", "V", "V1", "V2"], rows), args.out)
    return EXIT_OK


def cmd_eval_poly(args):
    poly = args.poly
    if args.z is not None:
        z = np.asarray(args.z, dtype=float)
    elif args.grid:
        lo, hi, n = _grid(args.grid)
        if lo is None or hi is None:
            raise UsageError("eval-poly --grid needs explicit min and max")
        z = np.linspace(lo, hi, n)
    else:
        raise UsageError("eval-poly needs --z or --grid")
    alpha = 0.0 if args.alpha is None else args.alpha
    if poly in ("jacobi", "x1-jacobi") and args.beta is None:
        raise UsageError(f"--poly {poly} needs --beta")
    if poly == "laguerre":
        vals = specfun.laguerre(args.n, alpha, z)
    elif poly == "jacobi":
        vals = specfun.jacobi(args.n, alpha, args.beta, z)
    elif poly == "x1-laguerre":
        vals = eop.eval_x1_laguerre(eop.EopParams.laguerre(args.n, alpha), z)
    else:
        vals = eop.eval_x1_jacobi(eop.EopParams.jacobi(args.n, alpha, args.beta), z)
    vals = np.broadcast_to(np.asarray(vals, dtype=float), z.shape)
    _emit(_render(["z", "value"], [[a, b] for a, b in zip(z, vals)], args.format), args.out)
    return EXIT_OK


# Parser ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"esp: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_family(p, required=True):
    p.add_argument("--family", required=required, choices=[f.value for f in FamilyId])
    for flag in FAMILY_FLAGS:
        p.add_argument(f"--{flag}", type=float, default=None)
    p.add_argument("--reading", choices=[r.value for r in Reading], default=None,
                   help="form of the rational part (extended Morse and Rosen-Morse)")


def _add_output(p, formats=("table", "json", "csv")):
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", default=None, help="write to this file instead of stdout")


def build_parser():
    parser = _Parser(
        prog="esp",
        description="Rationally extended solvable potentials: closed forms and numerical checks.",
        epilog=SYMBOLS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("list", help="families, parameters and admissibility rules",
                       allow_abbrev=False)
    p.add_argument("--family", choices=[f.value for f in FamilyId], default=None)
    _add_output(p, ("table", "json"))
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("spectrum", help="analytic (and optionally numeric) energies",
                       epilog=SYMBOLS, formatter_class=argparse.RawDescriptionHelpFormatter,
                       allow_abbrev=False)
    _add_family(p)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--numeric", action="store_true", help="also solve numerically")
    p.add_argument("--grid", default=None, help="solver grid min:max:points (parts optional)")
    _add_output(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="full analytic-versus-numeric report",
                       epilog=SYMBOLS, formatter_class=argparse.RawDescriptionHelpFormatter,
                       allow_abbrev=False)
    _add_family(p)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--grid", default=None, help="solver grid ::points")
    p.add_argument("--tol", type=float, default=None, help="relative spectrum tolerance")
    _add_output(p, ("json", "table", "csv"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("wavefunction", help="CSV of r, psi, V, V1, V2",
                       epilog=SYMBOLS, formatter_class=argparse.RawDescriptionHelpFormatter,
                       allow_abbrev=False)
    _add_family(p)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--grid", required=True, help="min:max:points")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("eval-poly", help="classical or X1 polynomial values",
                       allow_abbrev=False)
    p.add_argument("--poly", required=True,
                   choices=["laguerre", "jacobi", "x1-laguerre", "x1-jacobi"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--z", type=float, nargs="+", default=None)
    p.add_argument("--grid", default=None, help="min:max:points")
    _add_output(p, ("table", "csv", "json"))
    p.set_defaults(func=cmd_eval_poly)
    return parser


def _join_grid(argv):
    # "--grid -2:2:10" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--grid":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--grid={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(_join_grid(sys.argv[1:] if argv is None else list(argv)))
    try:
        return args.func(args)
    except (UsageError, ParameterError, SingularityError) as exc:
        print(f"esp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, ConvergenceError) as exc:
        print(f"esp: solver failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
