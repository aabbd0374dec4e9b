"""Command-line front end.

Sources are either catalog entry names or paths to structure-equation
files; metric parameters come from ``--params r=..,s=..,u=..`` or the
file's metric block.  Output is deterministic: fixed key order and 12
significant digits for floats.

Exit codes: 0 success or condition holds, 1 condition fails, 2 input
error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

import numpy as np

from . import catalog, invariant as inv, structfile, yamabe
from .forms import CoframeAlgebra, InvariantForm, NotIntegrable
from .scalars import QQi, is_exact


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# deterministic formatting

def fmt_number(v) -> str:
    if isinstance(v, QQi):
        return structfile.format_complex(v)
    if is_exact(v):
        return str(Fraction(v))
    v = complex(v)
    if v.imag == 0:
        return _fmt_float(v.real)
    out = _fmt_float(v.real) if v.real else ""
    im = _fmt_float(v.imag)
    if not im.startswith("-") and out:
        im = "+" + im
    return out + im + "i"


def _fmt_float(x: float) -> str:
    if x == 0:
        return "0"
    return f"{x:.12g}"


def fmt_form(form: InvariantForm) -> str:
    if not form.coefficients:
        return "0"
    n = form.n
    parts = []
    for key in sorted(form.coefficients):
        names = "^".join(
            f"phi{i + 1}" if i < n else f"bar{i - n + 1}" for i in key)
        parts.append(f"({fmt_number(form.coefficients[key])}) {names}"
                     if names else fmt_number(form.coefficients[key]))
    return " + ".join(parts)


class Report:
    """Flat, ordered key-value tree with text and kv renderings."""

    def __init__(self):
        self.items = []

    def add(self, key: str, value):
        if isinstance(value, InvariantForm):
            text = fmt_form(value)
        elif isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, str):
            text = value
        elif isinstance(value, (int,)) and not isinstance(value, bool):
            text = str(value)
        else:
            text = fmt_number(value)
        self.items.append((key, text))

    def render(self, style: str) -> str:
        if style == "kv":
            return "\n".join(f"{k} = {v}" for k, v in self.items)
        width = max((len(k) for k, _ in self.items), default=0)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in self.items)


# ---------------------------------------------------------------------------
# input resolution

def parse_params(text: str) -> dict:
    """``r=1,s=2,u=1/2+1i[,ell=2]`` with the structure-file literal
    grammar."""
    out = {}
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "=" not in piece:
            raise InputError(f"expected key=value in --params, got {piece!r}")
        key, _, val = piece.partition("=")
        key = key.strip()
        if key not in ("r", "s", "u", "ell"):
            raise InputError(f"unknown parameter {key!r}")
        try:
            out[key] = structfile.parse_complex(val.strip())
        except ValueError as exc:
            raise InputError(str(exc)) from None
    return out


def _simplify(v):
    """QQi with zero imaginary part to Fraction, for r, s, ell slots."""
    if isinstance(v, QQi) and v.im == 0:
        return v.re
    return v


def resolve_source(source: str, params: dict, exact: bool):
    """(algebra, metric, label, params) from an entry name or a file."""
    if source in catalog.list_entries():
        merged = {k: _simplify(v) if k != "u" else v
                  for k, v in params.items()}
        alg, h, p = catalog.build(source, merged, exact=exact)
        return alg, h, source, p
    if not os.path.exists(source):
        raise InputError(f"{source!r} is neither a catalog entry nor a file")
    with open(source) as fh:
        doc = structfile.parse_structure(fh.read())
    if doc.jacobi_passed is False:
        print(f"warning: Jacobi identity fails "
              f"(residual {doc.jacobi_residual:.3e})", file=sys.stderr)
    merged = dict(doc.metric_params or {})
    merged.update(params)
    merged.setdefault("r", QQi(1))
    merged.setdefault("s", QQi(1))
    merged.setdefault("u", QQi(0))
    p = {k: (_simplify(v) if k != "u" else (v if isinstance(v, QQi)
                                            else QQi(v)))
         for k, v in merged.items() if k in ("r", "s", "u")}
    alg = doc.algebra
    if not exact:
        alg = CoframeAlgebra(
            alg.n, {k: complex(v) for k, v in alg.a.items()},
            {k: complex(v) for k, v in alg.b.items()},
            {k: complex(v) for k, v in alg.c.items()})
        sp = inv.SurfaceMetricParams(
            complex(p["r"]).real, complex(p["s"]).real, complex(p["u"]))
    else:
        sp = inv.SurfaceMetricParams(p["r"], p["s"], p["u"])
    if alg.n != 2:
        raise InputError("surface metric parameters need dim 2")
    if not sp.admissible():
        raise InputError("metric parameters are not admissible")
    return alg, sp.metric(exact=exact), os.path.basename(source), p


def _emit(report: Report, args) -> None:
    print(report.render(args.format))


# ---------------------------------------------------------------------------
# subcommands

def cmd_curvature(args) -> int:
    alg, h, label, p = resolve_source(args.source, args.params, args.exact)
    curv = inv.chern_curvature(alg, h)
    rep = Report()
    rep.add("entry", label)
    _add_params(rep, p)
    n = alg.n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                for l in range(1, n + 1):
                    v = curv.component(i, j, k, l)
                    if abs(complex(v)) > 1e-14:
                        rep.add(f"theta_{i}{j}{k}{l}", v)
    rep.add("ric1", inv.ricci(1, curv, h))
    rep.add("ric2", inv.ricci(2, curv, h))
    rep.add("s_chern", inv.scalar_chern(curv, h))
    rep.add("s_third", inv.scalar_third(curv, h))
    _emit(rep, args)
    return 0


def cmd_einstein(args) -> int:
    alg, h, label, p = resolve_source(args.source, args.params, args.exact)
    lam, residual = inv.einstein_residual(args.kind, alg, h, mode=args.mode)
    rep = Report()
    rep.add("entry", label)
    _add_params(rep, p)
    rep.add("kind", args.kind)
    rep.add("mode", args.mode)
    rep.add("lambda", lam)
    rep.add("residual", residual)
    holds = residual <= args.tol
    rep.add("einstein", holds)
    _emit(rep, args)
    return 0 if holds else 1


def cmd_scan(args) -> int:
    grid = None
    if args.grid:
        grid = _parse_grid(args.grid)
    if args.source in catalog.list_entries():
        entry = catalog.get(args.source)
        alg = entry.algebra(
            catalog._norm_params(None, entry.defaults, False), False)
        cert = entry.certificate
        label = args.source
    else:
        alg, _, label, _ = resolve_source(args.source, args.params, False)
        cert = None
    report = inv.scan(alg, args.kind, grid=grid, mode=args.mode,
                      certificate=cert, entry_name=label)
    rep = Report()
    rep.add("entry", label)
    rep.add("kind", args.kind)
    rep.add("points", report.count)
    rep.add("min_residual", report.min_residual)
    rep.add("min_residual_abs", report.min_residual_abs)
    r, s, u = report.argmin
    rep.add("argmin_r", r)
    rep.add("argmin_s", s)
    rep.add("argmin_u", u)
    if report.certificate_ok is not None:
        rep.add("certificate_ok", report.certificate_ok)
        rep.add("certificate_worst", report.certificate_worst)
    _emit(rep, args)
    return 0


def _parse_grid(spec: str):
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise InputError(
            f"--grid wants start:stop:step, got {spec!r}") from None
    values = []
    v = start
    while v <= stop + 1e-12:
        values.append(v)
        v += step
    if not values:
        raise InputError("empty grid")
    return inv.default_surface_grid(r_values=values, s_values=values)


def cmd_catalog(args) -> int:
    if args.action == "list":
        rep = Report()
        for name in catalog.list_entries():
            rep.add(name, catalog.get(name).doc)
        _emit(rep, args)
        return 0
    if args.action == "export":
        if not args.entry:
            raise InputError("catalog export needs an entry name")
        print(catalog.to_structure_text(args.entry, args.params or None),
              end="")
        return 0
    # verify
    names = [args.entry] if args.entry else catalog.list_entries()
    mode = "exact" if args.exact else "float"
    rep = Report()
    all_ok = True
    for name in names:
        entry = catalog.get(name)
        points = [args.params] if args.params else \
            (entry.points or [entry.defaults])
        for idx, pt in enumerate(points):
            vrep = catalog.verify(name, pt, mode=mode)
            for row in vrep.rows:
                key = f"{name}.{idx}.{row.quantity}"
                if row.asserted:
                    rep.add(key, "pass" if row.passed else "FAIL")
                    all_ok = all_ok and bool(row.passed)
                else:
                    rep.add(key, f"reported {_as_text(row.computed)}")
    rep.add("all_passed", all_ok)
    _emit(rep, args)
    return 0 if all_ok else 1


def _as_text(v):
    if isinstance(v, InvariantForm):
        return fmt_form(v)
    return fmt_number(v)


def cmd_yamabe(args) -> int:
    if args.problem:
        problem = yamabe.load_problem(args.problem)
    else:
        problem = yamabe.make_problem(args.generator, N=args.N, n=args.n,
                                      tol=args.tol)
    f0 = None
    if args.seed is not None:
        rng = np.random.default_rng(args.seed)
        f0 = 0.1 * rng.standard_normal((problem.grid.N, problem.grid.N))
    try:
        result = yamabe.solve_chya(problem, f0=f0)
    except yamabe.PositiveDegreeOpen as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except yamabe.SolverDiverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    law = yamabe.conformal_scalar_law(problem.S, result.f, problem.n,
                                      problem.grid)
    rep = Report()
    rep.add("N", problem.grid.N)
    rep.add("n", problem.n)
    rep.add("degree", yamabe.gauduchon_degree_grid(problem.S))
    rep.add("lambda", result.lam)
    rep.add("residual", result.residual)
    rep.add("iterations", result.iterations)
    rep.add("converged", result.converged)
    rep.add("f_min", float(np.min(result.f)))
    rep.add("f_max", float(np.max(result.f)))
    rep.add("law_constancy", float(np.max(np.abs(
        law - problem.n * result.lam))))
    _emit(rep, args)
    return 0 if result.converged else 1


def cmd_lee(args) -> int:
    alg, h, label, p = resolve_source(args.source, args.params, False)
    theta, lck, residual = inv.lee_form(alg, h)
    rep = Report()
    rep.add("entry", label)
    _add_params(rep, p)
    if theta is None:
        rep.add("lee_form", "none")
    else:
        rep.add("lee_form", theta)
        rep.add("lck", lck)
    rep.add("residual", residual)
    _emit(rep, args)
    return 0 if theta is not None else 1


def cmd_gauduchon(args) -> int:
    alg, h, label, p = resolve_source(args.source, args.params, False)
    ok, residual = inv.is_gauduchon(alg, h)
    rep = Report()
    rep.add("entry", label)
    _add_params(rep, p)
    rep.add("gauduchon", ok)
    rep.add("residual", residual)
    if ok:
        rep.add("degree", inv.gauduchon_degree(alg, h))
    _emit(rep, args)
    return 0 if ok else 1


def cmd_bl(args) -> int:
    alg, h, label, p = resolve_source(args.source, args.params, False)
    curv = inv.chern_curvature(alg, h)
    value = inv.bogomolov_lubke(curv, h)
    rep = Report()
    rep.add("entry", label)
    _add_params(rep, p)
    rep.add("bogomolov_lubke", value)
    rep.add("inequality_holds", value <= args.tol)
    _emit(rep, args)
    return 0 if value <= args.tol else 1


def _add_params(rep: Report, p: dict):
    for key in ("r", "s", "u", "ell"):
        if key in p:
            rep.add(f"param_{key}", p[key])


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(sub, source=True):
    if source:
        sub.add_argument("source", help="catalog entry name or structure "
                         "file path")
    sub.add_argument("--params", type=parse_params, default={},
                     help="metric parameters, e.g. r=1,s=2,u=1/2+1i")
    sub.add_argument("--format", choices=("text", "kv"), default="text")
    sub.add_argument("--tol", type=float, default=1e-9)
    sub.add_argument("--exact", action="store_true",
                     help="exact rational arithmetic (rational parameters "
                     "only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cherncurv",
        description="Chern curvature, Einstein residuals and conformal "
                    "normalization for invariant Hermitian metrics")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("curvature", help="curvature tensor and Ricci forms")
    _add_common(p)
    p.set_defaults(fn=cmd_curvature)

    p = subs.add_parser("einstein", help="Einstein factor and residual")
    _add_common(p)
    p.add_argument("--kind", type=int, choices=(1, 2, 3), default=2)
    p.add_argument("--mode", choices=("strong", "weak"), default="strong")
    p.set_defaults(fn=cmd_einstein)

    p = subs.add_parser("scan", help="Einstein residual over an (r,s,u) grid")
    _add_common(p)
    p.add_argument("--kind", type=int, choices=(1, 2, 3), default=2)
    p.add_argument("--mode", choices=("strong", "weak"), default="strong")
    p.add_argument("--grid", help="r and s range as start:stop:step")
    p.set_defaults(fn=cmd_scan)

    p = subs.add_parser("catalog", help="inspect or verify the registry")
    p.add_argument("action", choices=("list", "verify", "export"))
    p.add_argument("entry", nargs="?", help="restrict to one entry")
    p.add_argument("--params", type=parse_params, default={})
    p.add_argument("--format", choices=("text", "kv"), default="text")
    p.add_argument("--exact", action="store_true")
    p.set_defaults(fn=cmd_catalog)

    p = subs.add_parser("yamabe", help="conformal normalization solver")
    p.add_argument("--problem", help="key-value problem file")
    p.add_argument("--generator", default="synthetic-v",
                   choices=sorted(yamabe.GENERATORS))
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, help="randomize the initial guess")
    p.add_argument("--format", choices=("text", "kv"), default="text")
    p.set_defaults(fn=cmd_yamabe)

    p = subs.add_parser("lee", help="Lee form of the invariant metric")
    _add_common(p)
    p.set_defaults(fn=cmd_lee)

    p = subs.add_parser("gauduchon", help="Gauduchon condition and degree")
    _add_common(p)
    p.set_defaults(fn=cmd_gauduchon)

    p = subs.add_parser("bl", help="Bogomolov-Lubke pairing")
    _add_common(p)
    p.set_defaults(fn=cmd_bl)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, structfile.ParseError, NotIntegrable,
            catalog.UnknownEntry, catalog.UnknownQuantity) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
