"""Command-line front end.

Subcommands read a JSON function descriptor (``--input``) and write CSV or
JSON (``--output``, default stdout):

  eval       values on a polar grid or a point list
  factor     helson / koebe / squares decompositions with residuals
  product    convergence verdict and partial-product trace
  aintegral  Herglotz A-integral trace along a truncation ladder
  hp         radial H^p means and growth verdicts
  verify     built-in self-check suites (exit 0 iff all pass)

Every CSV starts with ``# smirnov <version> seed=<seed>`` followed by a
header row; numbers are written with 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings

import numpy as np

from smirnov import __version__
from smirnov.a_integral import TruncationLadder, herglotz_a_integral
from smirnov.boundary import BoundaryGrid, arc_indicator_grid
from smirnov.catalog import NAMES, named_example
from smirnov.cayley import ArcSet, ClosedFormFallback, CayleyInnerFn
from smirnov.disk import (
    apply_K,
    apply_T,
    apply_T_inverse,
    cayley_leaf,
    constant,
    inner_leaf,
    integer_power,
    outer_leaf,
    product,
    quotient,
)
from smirnov.errors import PoleError, SmirnovError
from smirnov.factorization import RealSmirnovFn, helson_decompose, koebe_factor, safe_eval, sum_of_squares
from smirnov.hp import membership_trend
from smirnov.inner import InnerFunction
from smirnov.outer import AnalyticFactor, outer_from_argument, outer_from_factors, outer_from_logmod
from smirnov.products import InnerSequence, unilateral_trace_bounds, unilateral_verdict
from smirnov.verify import SUITES, disk_points, run_suite, staircase


class SchemaError(ValueError):
    """Descriptor does not match the expected JSON shape."""


# ---------------------------------------------------------------------------
# Descriptor parsing


def _complex(x, what="value"):
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
        return complex(x[0], x[1])
    raise SchemaError(f"{what} must be a number or [re, im], got {x!r}")


def _field(d, key, default=None, required=False):
    if not isinstance(d, dict):
        raise SchemaError(f"expected a JSON object, got {type(d).__name__}")
    if key not in d:
        if required:
            raise SchemaError(f"missing field {key!r}")
        return default
    return d[key]


def _schema(build):
    """Run ``build`` turning validation ValueErrors into schema errors."""
    try:
        return build()
    except SchemaError:
        raise
    except SmirnovError:
        raise
    except (ValueError, TypeError, IndexError) as exc:
        raise SchemaError(str(exc)) from None


def parse_inner(d):
    """{"xi": c, "power": N, "zeros": [[re, im, mult], ...], "atoms": [[theta, mass], ...]}"""
    xi = _complex(_field(d, "xi", 1.0), "xi")
    power = _field(d, "power", 0)
    zeros = []
    for item in _field(d, "zeros", []):
        if not isinstance(item, list) or len(item) not in (2, 3):
            raise SchemaError(f"zero entries are [re, im] or [re, im, mult], got {item!r}")
        zeros.append((complex(item[0], item[1]), int(item[2]) if len(item) == 3 else 1))
    atoms = []
    for item in _field(d, "atoms", []):
        if not isinstance(item, list) or len(item) != 2:
            raise SchemaError(f"atom entries are [theta, mass], got {item!r}")
        atoms.append((complex(math.cos(item[0]), math.sin(item[0])), float(item[1])))
    return _schema(lambda: InnerFunction(xi, power, tuple(zeros), tuple(atoms)))


def _grid_n(d):
    n = _field(d, "n")
    return None if n is None else int(n)


def parse_outer(d):
    """One of {"factors": [{"inner": {...}, "a": 1, "s": -1}, ...], "scale", "gamma"},
    {"logmod": [...], "gamma"} or {"argument": [...], "step": bool, "log_modulus_at_zero"}."""
    gamma = float(_field(d, "gamma", 0.0))
    if "factors" in d:
        fs = []
        for f in d["factors"]:
            phi = parse_inner(_field(f, "inner", required=True))
            fs.append(_schema(lambda: AnalyticFactor(phi, float(_field(f, "a", 1.0)), float(_field(f, "s", 1.0)))))
        return _schema(lambda: outer_from_factors(fs, float(_field(d, "scale", 1.0)), gamma, _grid_n(d)))
    if "logmod" in d:
        return _schema(lambda: outer_from_logmod(np.asarray(d["logmod"], dtype=float), gamma))
    if "argument" in d:
        arg = _schema(lambda: BoundaryGrid(np.asarray(d["argument"], dtype=float), bool(d.get("step", False))))
        return _schema(lambda: outer_from_argument(arg, float(d.get("log_modulus_at_zero", 0.0))))
    raise SchemaError("outer descriptor needs 'factors', 'logmod' or 'argument'")


def parse_arcs(arcs):
    if not isinstance(arcs, list):
        raise SchemaError("arcs must be a list of [beta, alpha]")
    for a in arcs:
        if not isinstance(a, list) or len(a) != 2:
            raise SchemaError(f"arc entries are [beta, alpha], got {a!r}")
    return _schema(lambda: ArcSet.from_arcs([(float(b), float(a)) for b, a in arcs]))


def _poly(c, what):
    if not isinstance(c, list) or not c:
        raise SchemaError(f"{what} must be a nonempty coefficient list")
    return np.array([_complex(x, what) for x in c])


def parse_function(d):
    """Descriptor -> (FunctionExpr, RealSmirnovFn or None)."""
    kind = _field(d, "kind", required=True)
    if kind == "inner":
        return inner_leaf(parse_inner(d)), None
    if kind == "outer":
        F = parse_outer(d)
        return outer_leaf(F), RealSmirnovFn(InnerFunction.constant(1.0), F)
    if kind == "cayley":
        fn = _schema(lambda: CayleyInnerFn(parse_arcs(_field(d, "arcs", required=True)), float(d.get("scale", 1.0))))
        return cayley_leaf(fn), None
    if kind == "named-example":
        name = _field(d, "name", required=True)
        if name not in NAMES:
            raise SchemaError(f"unknown named example {name!r}; choose from {', '.join(NAMES)}")
        ex = _schema(lambda: named_example(name, float(d.get("rho", 1.0)), _grid_n(d)))
        return ex.expr, ex.function
    if kind == "smirnov":
        I = parse_inner(_field(d, "inner", required=True))
        F = parse_outer(_field(d, "outer", required=True))
        rat = d.get("rational")
        rational = (_poly(rat["num"], "num"), _poly(rat["den"], "den")) if rat else None
        f = RealSmirnovFn(I, F, rational)
        return f.expr, f
    if kind == "rational":
        num, den = _poly(_field(d, "num", required=True), "num"), _poly(_field(d, "den", required=True), "den")
        f = RealSmirnovFn(None, None, (num, den))
        return _RationalExpr(num, den), f
    if kind == "expr":
        return _parse_expr(d), None
    raise SchemaError(f"unknown descriptor kind {kind!r}")


class _RationalExpr:
    """num/den from increasing-degree coefficients; division by zero is a pole."""

    def __init__(self, num, den):
        self.num, self.den = num, den

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        P = np.polynomial.polynomial
        den = P.polyval(z, self.den)
        if np.any(den == 0):
            raise PoleError("rational function evaluated at a pole")
        return P.polyval(z, self.num) / den


def _parse_expr(d):
    op = _field(d, "op", required=True)
    args = [parse_function(a)[0] for a in _field(d, "args", [])]

    def need(k):
        if len(args) != k:
            raise SchemaError(f"op {op!r} takes {k} argument(s), got {len(args)}")

    if op == "constant":
        return constant(_complex(_field(d, "value", required=True)))
    if op == "product":
        return product(*args)
    if op == "quotient":
        need(2)
        return quotient(*args)
    if op == "power":
        need(1)
        return integer_power(args[0], int(_field(d, "n", required=True)))
    if op in ("T", "T-inverse", "K"):
        need(1)
        return {"T": apply_T, "T-inverse": apply_T_inverse, "K": apply_K}[op](args[0])
    raise SchemaError(f"unknown expression op {op!r}")


# ---------------------------------------------------------------------------
# Serialization


def _fmt(x):
    return "%.17g" % x


def write_csv(out, columns, rows, seed, comments=()):
    lines = [f"# smirnov {__version__} seed={seed}"]
    lines += [f"# {c}" for c in comments]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else _fmt(v) for v in row))
    out.write("\n".join(lines) + "\n")


def describe_inner(I):
    return {
        "kind": "inner",
        "xi": [I.xi.real, I.xi.imag],
        "power": I.power,
        "zeros": [[a.real, a.imag, m] for a, m in I.zeros],
        "atoms": [[math.atan2(z.imag, z.real) % (2 * math.pi), mu] for z, mu in I.atoms],
    }


def describe_outer(F):
    d = {"kind": "outer", "gamma": F.gamma}
    if F.factors is not None:
        d["scale"] = F.scale
        d["factors"] = [{"inner": describe_inner(f.inner), "a": f.a, "s": f.s} for f in F.factors]
    else:
        d["logmod"] = F.logmod.real_values().tolist()
    return d


def describe_smirnov(f):
    if f.is_zero:
        return {"kind": "zero"}
    return {"kind": "smirnov", "inner": describe_inner(f.inner), "outer": describe_outer(f.outer)}


# ---------------------------------------------------------------------------
# Commands


def parse_points(text):
    """'x,y;x,y;...' -> complex array."""
    pts = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        parts = item.split(",")
        if len(parts) != 2:
            raise SchemaError(f"points are 'x,y' pairs separated by ';', got {item!r}")
        pts.append(complex(float(parts[0]), float(parts[1])))
    if not pts:
        raise SchemaError("empty point list")
    return np.array(pts)


def polar_grid(r, rings, angles):
    """The centre, then ``rings`` circles of radii r k/rings with ``angles`` points each."""
    t = 2 * np.pi * np.arange(angles) / angles
    rad = r * np.arange(1, rings + 1) / rings
    return np.concatenate([[0j], (rad[:, None] * np.exp(1j * t)[None, :]).ravel()])


def cmd_eval(args, out):
    expr, _ = parse_function(load_json(args.input))
    if args.points:
        z = parse_points(args.points)
    else:
        if not 0 < args.radius <= 1:
            raise SchemaError("--radius must lie in (0, 1]")
        z = polar_grid(args.radius, args.rings, args.angles)
    vals = safe_eval(expr, z)
    rows = []
    for w, v in zip(z, vals):
        pole = not np.isfinite(v)
        rows.append((w.real, w.imag, v.real if not pole else math.nan, v.imag if not pole else math.nan, "1" if pole else "0"))
    write_csv(out, ["x", "y", "re", "im", "pole"], rows, args.seed)
    return 0


def _residual(a, b):
    a, b = np.asarray(a), np.asarray(b)
    ok = np.isfinite(a) & np.isfinite(b)
    return float(np.max(np.abs(a[ok] - b[ok]) / np.maximum(1.0, np.abs(b[ok])))) if np.any(ok) else math.nan


def cmd_factor(args, out):
    _, f = parse_function(load_json(args.input))
    if f is None:
        raise SchemaError("factor needs a smirnov, rational, outer or named-example descriptor")
    z = disk_points(np.random.default_rng(args.seed), 64, 0.9)
    fz = safe_eval(_RationalExpr(*f.rational) if f.is_zero and f.rational is not None else f, z)
    report = {"mode": args.mode, "seed": args.seed, "probe_points": 64, "version": __version__}
    if args.mode == "helson":
        pair = helson_decompose(f)
        report["parts"] = {
            "psi1": describe_inner(pair.psi1),
            "psi2": describe_inner(pair.psi2),
            "merged_zeros": [[a.real, a.imag] for a in pair.merged_zeros],
        }
        report["residuals"] = {"reconstruction": _residual(pair.reconstruct(z), fz)}
    else:
        if f.inner is None:
            raise SchemaError(f"{args.mode} needs inner/outer data, not a bare rational descriptor")
        if args.mode == "koebe":
            K, R = koebe_factor(f)
            Ip = K.children[0].payload
            report["parts"] = {"koebe_inner": describe_inner(Ip), "remainder": describe_smirnov(R)}
            report["residuals"] = {"reconstruction": _residual(safe_eval(K, z) * R(z), fz)}
        else:
            g1, g2 = sum_of_squares(f)
            report["parts"] = {"g1": describe_smirnov(g1), "g2": describe_smirnov(g2)}
            report["residuals"] = {"reconstruction": _residual(g1(z) ** 2 + g2(z) ** 2, fz)}
    out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0


def parse_sequence(d):
    fam = _field(d, "family", required=True)
    if fam == "explicit":
        return InnerSequence.from_terms([parse_inner(t) for t in _field(d, "terms", required=True)])
    if fam == "explicit-arcs":
        return InnerSequence.from_arcsets([parse_arcs(s) for s in _field(d, "sets", required=True)])
    return _schema(lambda: InnerSequence.from_descriptor(d))


def cmd_product(args, out):
    seq = parse_sequence(load_json(args.input))
    K = args.truncation
    z = parse_points(args.points) if args.points else np.array([0j])
    verdict = unilateral_verdict(seq, K)
    rows = []
    for w in z:
        trace, bounds = unilateral_trace_bounds(seq, complex(w), K)
        if verdict.status != "converges":
            bounds = np.full(bounds.shape, math.inf)
        for n, (p, b) in enumerate(zip(trace, bounds), start=1):
            rows.append((n, w.real, w.imag, p.real, p.imag, b))
    comment = f"verdict={verdict.status} failing={verdict.failing} tail={_fmt(verdict.tail)} basis={verdict.basis}"
    write_csv(out, ["n", "x", "y", "re", "im", "tail_bound"], rows, args.seed, [comment])
    print(comment, file=sys.stderr)
    return 0


def parse_ladder(text):
    """'k0:k1' (A = 2^k) or a comma list of levels."""
    if text is None:
        return TruncationLadder()
    if ":" in text:
        k0, k1 = (int(t) for t in text.split(":"))
        return _schema(lambda: TruncationLadder.dyadic(k0, k1))
    return _schema(lambda: TruncationLadder(tuple(float(t) for t in text.split(","))))


def parse_boundary(d, n):
    """Real boundary data: staircase (alphas), arcs (with weights) or samples."""
    kind = _field(d, "kind", required=True)
    if kind == "staircase":
        return BoundaryGrid(float(d.get("scale", math.pi)) * staircase(d["alphas"], n), step=True)
    if kind == "arcs":
        arcs = [(float(b), float(a)) for b, a in _field(d, "arcs", required=True)]
        g = _schema(lambda: arc_indicator_grid(arcs, n, d.get("weights")))
        return g * float(d.get("scale", 1.0))
    if kind == "samples":
        return _schema(lambda: BoundaryGrid(np.asarray(d["values"], dtype=float), bool(d.get("step", False))))
    raise SchemaError(f"unknown boundary data kind {kind!r}")


def cmd_aintegral(args, out):
    from smirnov.config import default_grid_n

    v = parse_boundary(load_json(args.input), default_grid_n())
    ladder = parse_ladder(args.ladder)
    z = parse_points(args.points) if args.points else np.array([0j])
    res = herglotz_a_integral(v, z, ladder)
    rows = []
    for j, w in enumerate(z):
        prev = None
        for A, val in zip(ladder, res.trace[:, j]):
            inc = math.nan if prev is None else abs(val - prev)
            rows.append((w.real, w.imag, A, val.real, val.imag, inc))
            prev = val
    comment = f"error={_fmt(res.error)} flagged={int(res.flagged)}"
    write_csv(out, ["x", "y", "A", "re", "im", "increment"], rows, args.seed, [comment])
    return 0


def cmd_hp(args, out):
    expr, _ = parse_function(load_json(args.input))
    ps = [float(p) for p in args.p.split(",")]
    rows = []
    for p in ps:
        rep = membership_trend(expr, p)
        for r, m in zip(rep.radii, rep.means):
            rows.append((p, r, m, rep.verdict, rep.q))
    write_csv(out, ["p", "r", "mean", "verdict", "q"], rows, args.seed)
    return 0


def cmd_verify(args, out):
    names = SUITES if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in SUITES:
        raise SchemaError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
    out.write(f"# smirnov {__version__} seed={args.seed}\n")
    ok = True
    for name in names:
        for c in run_suite(name, args.seed):
            ok &= c.passed
            out.write(f"{'PASS' if c.passed else 'FAIL'} {c.suite}: {c.name} residual={_fmt(c.residual)} tol={_fmt(c.tol)}\n")
    out.write(f"{'ALL PASS' if ok else 'FAILURES'}\n")
    return 0 if ok else 1


def load_json(path):
    if path is None:
        raise SchemaError("--input is required")
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {path}: {exc}") from None


def build_parser():
    p = argparse.ArgumentParser(prog="smirnov", description="Real Smirnov function toolkit.")
    p.add_argument("--version", action="version", version=f"smirnov {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON descriptor file")
    common.add_argument("--output", help="output file (default stdout)")
    common.add_argument("--grid-n", type=int, help="boundary grid size (power of two >= 64)")
    common.add_argument("--seed", type=int, default=0, help="seed for probe points")
    common.add_argument("--points", help="evaluation points 'x,y;x,y;...'")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate on a polar grid or point list")
    e.add_argument("--radius", type=float, default=0.9)
    e.add_argument("--rings", type=int, default=32)
    e.add_argument("--angles", type=int, default=256)
    e.set_defaults(func=cmd_eval)

    f = sub.add_parser("factor", parents=[common], help="factorizations with residuals (JSON)")
    f.add_argument("--mode", choices=("helson", "koebe", "squares"), required=True)
    f.set_defaults(func=cmd_factor)

    pr = sub.add_parser("product", parents=[common], help="unilateral product verdict and trace")
    pr.add_argument("--truncation", type=int, default=256)
    pr.set_defaults(func=cmd_product)

    a = sub.add_parser("aintegral", parents=[common], help="Herglotz A-integral trace")
    a.add_argument("--ladder", help="'k0:k1' for A = 2^k, or comma-separated levels")
    a.set_defaults(func=cmd_aintegral)

    h = sub.add_parser("hp", parents=[common], help="H^p means and growth verdicts")
    h.add_argument("--p", default="1", help="comma-separated exponents in (0, 4]")
    h.set_defaults(func=cmd_hp)

    v = sub.add_parser("verify", parents=[common], help="run self-check suites")
    v.add_argument("--suite", default="all", help=f"one of all, {', '.join(SUITES)}")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.grid_n is not None:
        if args.grid_n < 64 or args.grid_n & (args.grid_n - 1):
            print("schema error: --grid-n must be a power of two >= 64", file=sys.stderr)
            return 2
        os.environ["SMIRNOV_GRID_N"] = str(args.grid_n)
    out = open(args.output, "w", newline="\n") if args.output else sys.stdout
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ClosedFormFallback)
            return args.func(args, out)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except SmirnovError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    finally:
        if args.output:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
