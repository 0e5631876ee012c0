"""Command line front end.

Exit codes: 0 success / all checks pass, 1 an analytic check failed,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .bounds import lf_data, prop4_bound, theorem3_bound
from .dirichlet import AnalyticSeries, dirichlet_weights
from .exceptions import ConditionError, NotLinearFractionalError, WcoError
from .generator import GeneratorInput, generated_spec, generator_preset, verify_generated
from .geometry import selfmap_certificate_exact
from .grids import interior_t_grid, parse_grid, polar_grid
from .matrices import M1Params, M2Params, MATRIX_PRESETS, finite_section, operator_coefficients, spectral_norm, truncate
from .operator import (OperatorSpec, apply_composed, apply_direct, kernel, load_spec, preset,
                       selfmap_condition_sampled, well_defined_certificate)
from .quadrature import QuadratureConfig
from .tables import run_tables
from .validation import check_alpha, check_points, parse_complex

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _c(x) -> list:
    x = complex(x)
    return [x.real, x.imag]


def _cvals(a):
    a = np.atleast_1d(np.asarray(a))
    return [_c(v) for v in a.ravel()]


def _spec_from(args) -> OperatorSpec:
    if bool(args.preset) == bool(args.spec):
        raise UsageError("give exactly one of --preset or --spec")
    if args.preset:
        try:
            return preset(args.preset)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from exc
    try:
        return load_spec(args.spec)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read spec: {exc}") from exc


def _quad(args) -> QuadratureConfig:
    return QuadratureConfig(nodes=args.quad_nodes, tol=args.tol)


def _points(values) -> np.ndarray:
    try:
        return check_points([parse_complex(v) for v in values])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _grid(args) -> np.ndarray:
    try:
        nr, na = parse_grid(args.grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return polar_grid(nr, na)


def _emit(obj, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(obj, out, indent=2)
        out.write("\n")
    else:
        out.write(_text(obj))


def _text(obj, indent: str = "") -> str:
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.append(_text(v, indent + "  ").rstrip("\n"))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{indent}{k}: {len(v)} item(s)")
            for item in v:
                lines.append(f"{indent}  - " + ", ".join(f"{a}={b}" for a, b in item.items()))
        else:
            lines.append(f"{indent}{k}: {v}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------- commands


def cmd_check(args, out) -> int:
    spec = _spec_from(args)
    z = _grid(args)
    certs = [well_defined_certificate(spec, z),
             selfmap_condition_sampled(spec, interior_t_grid(args.t_nodes), z),
             selfmap_certificate_exact(spec, z)]
    ok = all(c.passed for c in certs)
    _emit({"spec": spec.to_json(), "pass": ok, "certificates": [c.to_json() for c in certs]}, args.format, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_kernel(args, out) -> int:
    spec = _spec_from(args)
    z = _points(args.z)
    t = np.asarray(args.t, dtype=float)
    if np.any((t < 0) | (t > 1)):
        raise UsageError("t must lie in [0, 1]")
    rows = []
    for tt in t:
        for zz in z:
            kp = kernel(spec, tt, zz)
            rows.append({"t": float(tt), "z": _c(zz), "w": _c(kp.w), "gamma": _c(kp.gamma),
                         "gamma_dt": _c(kp.gamma_dt), "gamma_dz": _c(kp.gamma_dz), "w_dz": _c(kp.w_dz)})
    if args.format == "csv":
        _write_csv(out, ["t", "z_re", "z_im", "w_re", "w_im", "gamma_re", "gamma_im"],
                   [[r["t"], *r["z"], *r["w"], *r["gamma"]] for r in rows])
    else:
        _emit({"spec": spec.to_json(), "values": rows}, args.format, out)
    return EXIT_OK


def _parse_f(text: str) -> AnalyticSeries:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError:
        path = Path(text)
        if not path.exists():
            raise UsageError("--f must be a JSON coefficient list or a path to one") from None
        raw = json.loads(path.read_text())
    try:
        return AnalyticSeries.from_json(raw)
    except (TypeError, ValueError, KeyError) as exc:
        raise UsageError(f"bad coefficients: {exc}") from exc


def cmd_apply(args, out) -> int:
    spec = _spec_from(args)
    f = _parse_f(args.f)
    z = _points(args.z)
    fn = apply_composed if args.method == "composed" else apply_direct
    try:
        vals = np.atleast_1d(fn(spec, f, z, _quad(args)))
    except ConditionError as exc:
        _emit({"error": str(exc)}, "json", out)
        return EXIT_FAIL
    if args.format == "csv":
        _write_csv(out, ["z_re", "z_im", "value_re", "value_im"],
                   [[*_c(a), *_c(b)] for a, b in zip(z, vals)])
    else:
        _emit({"method": args.method, "z": _cvals(z), "value": _cvals(vals)}, args.format, out)
    return EXIT_OK


def _matrix_source(args):
    if args.m1 or args.m2:
        raw = args.m1 or args.m2
        try:
            vals = [float(v) for v in raw.split(",")]
            return (M1Params if args.m1 else M2Params)(*vals)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad matrix parameters {raw!r}: {exc}") from exc
    if args.family:
        return MATRIX_PRESETS[args.family]
    return None


def _write_csv(out, header, rows):
    w = csv.writer(out, lineterminator="\n")
    if header:
        w.writerow(header)
    w.writerows(rows)


def cmd_matrix(args, out) -> int:
    family = _matrix_source(args)
    if family is not None:
        if args.preset or args.spec:
            raise UsageError("--m1/--m2/--family exclude --preset/--spec")
        M = truncate(family, args.n)
        if args.alpha is not None:
            w = np.sqrt(dirichlet_weights(args.n, check_alpha(args.alpha)))
            M = w[:, None] * M / w[None, :]
    else:
        spec = _spec_from(args)
        if args.alpha is None:
            M = operator_coefficients(spec, args.n, method=args.method)
        else:
            M = finite_section(spec, check_alpha(args.alpha), args.n, method=args.method)
    if args.format == "csv":
        if np.iscomplexobj(M):
            _write_csv(out, None, [[repr(complex(v)) for v in row] for row in M])
        else:
            _write_csv(out, None, [[repr(float(v)) for v in row] for row in M])
    else:
        body = M.tolist() if not np.iscomplexobj(M) else [[_c(v) for v in row] for row in M]
        _emit({"n": args.n, "alpha": args.alpha, "matrix": body}, "json", out)
    return EXIT_OK


def cmd_bound(args, out) -> int:
    """Prop. 4 bound for linear fractional gamma; the Theorem 3 bracket on request or otherwise."""
    spec = _spec_from(args)
    alpha = check_alpha(args.alpha)
    try:
        lf = lf_data(spec)
    except NotLinearFractionalError:
        lf = None
    body = {"spec": spec.to_json(), "alpha": alpha, "conditions": None, "delta_integrable": None,
            "prop4_bound": None, "theorem3_bound": None, "convergence": {}, "note": ""}
    ok = True
    if lf is not None:
        rep = prop4_bound(lf, alpha).to_json()
        body.update({k: rep[k] for k in ("conditions", "delta_integrable", "prop4_bound", "note")})
        body["convergence"]["prop4"] = rep["convergence"]
        ok = rep["prop4_bound"] is not None
    if lf is None or args.theorem3:
        try:
            res = theorem3_bound(spec, alpha)
        except ConditionError as exc:
            body["note"] = (body["note"] + "; " if body["note"] else "") + f"theorem3: {exc}"
            ok = False
        else:
            body["theorem3_bound"] = res.value
            body["convergence"]["theorem3"] = res.to_json()
            ok = ok and res.value is not None
    _emit(body, args.format, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_norm(args, out) -> int:
    spec = _spec_from(args)
    alpha = check_alpha(args.alpha)
    T = finite_section(spec, alpha, args.n, method=args.method)
    est = spectral_norm(T, tol=args.tol)
    _emit({"spec": spec.name or "custom", "alpha": alpha, "n": args.n, "norm": est.value,
           "converged": est.converged, "iterations": est.iterations}, args.format, out)
    return EXIT_OK if est.converged else EXIT_FAIL


def cmd_generate(args, out) -> int:
    if bool(args.preset) == bool(args.input):
        raise UsageError("give exactly one of --preset or --input")
    try:
        gin = generator_preset(args.preset) if args.preset else \
            GeneratorInput.from_json(json.loads(Path(args.input).read_text()))
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read generator input: {exc}") from exc
    spec = generated_spec(gin)
    cert = verify_generated(gin, _grid(args) if args.grid else None)
    _emit({"input": gin.to_json(), "spec": spec.to_json(), "certificate": cert.to_json()}, args.format, out)
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_tables(args, out) -> int:
    try:
        rep = run_tables(args.table, args.golden)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "text":
        for c in rep.checks:
            flag = "ok  " if c.passed else "DIFF"
            out.write(f"{flag} table {c.table} {c.item}: max_error={c.max_error:.3g} tol={c.tol:g} {c.detail}\n")
    else:
        _emit(rep.to_json(), "json", out)
    return EXIT_OK if rep.passed else EXIT_FAIL


# --------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wco-kit", description="Integral operators as averages of weighted composition operators.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, spec=True, fmt=("json", "text")):
        if spec:
            p.add_argument("--preset", help="cesaro, adjoint-cesaro, j, hilbert, reduced-hilbert")
            p.add_argument("--spec", help="path to an operator spec JSON file")
        p.add_argument("--format", choices=fmt, default="json")
        p.add_argument("--quad-nodes", type=int, default=64)
        p.add_argument("--tol", type=float, default=1e-11)

    p = sub.add_parser("check", help="well-definedness and self-map certificates")
    common(p)
    p.add_argument("--grid", default="41x64", help="polar grid RADIIxANGLES")
    p.add_argument("--t-nodes", type=int, default=33)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("kernel", help="w(t, z) and gamma(t, z)")
    common(p, fmt=("json", "text", "csv"))
    p.add_argument("--t", type=float, nargs="+", required=True)
    p.add_argument("--z", nargs="+", required=True)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("apply", help="evaluate I(f)(z)")
    common(p, fmt=("json", "text", "csv"))
    p.add_argument("--f", required=True, help='Taylor coefficients as JSON, e.g. "[1, 0, 2]"')
    p.add_argument("--z", nargs="+", required=True)
    p.add_argument("--method", choices=("direct", "composed"), default="direct")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("matrix", help="N x N coefficient matrix or D_alpha section")
    common(p, fmt=("json", "csv"))
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--alpha", type=float)
    p.add_argument("--m1", help="p0,q0,x1,x2")
    p.add_argument("--m2", help="p0,q0,lambda1,lambda2")
    p.add_argument("--family", choices=sorted(MATRIX_PRESETS))
    p.add_argument("--method", choices=("auto", "quadrature"), default="auto")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("bound", help="boundedness bound on D_alpha")
    common(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--theorem3", action="store_true", help="also evaluate the general area/sup bracket")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("norm", help="spectral norm of the N x N section on D_alpha")
    common(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--method", choices=("auto", "quadrature"), default="auto")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("generate", help="derive q from (phi1, phi2, p, omega) and verify")
    common(p, spec=False)
    p.add_argument("--preset", help="table6-case1 .. table6-case6")
    p.add_argument("--input", help="generator input JSON file")
    p.add_argument("--grid", help="polar grid RADIIxANGLES (default 21x21)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("tables", help="regenerate the reference tables and diff against golden values")
    common(p, spec=False)
    p.add_argument("--table", type=int, action="append", choices=range(1, 8))
    p.add_argument("--golden", help="alternative golden JSON")
    p.set_defaults(func=cmd_tables)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except ConditionError as exc:
        print(f"wco-kit: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, WcoError, ValueError, TypeError, KeyError) as exc:
        print(f"wco-kit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run(argv) -> tuple[int, str]:
    """Run the CLI in-process and capture stdout."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
