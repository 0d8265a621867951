"""Command-line surface: classify, check, region, sweep, quad, report.

Output is JSON by default (CSV where it makes sense for tables); exit codes
follow the verification contract: 0 all checks passed, 1 some check failed,
2 usage or domain error.  The default truncation order is 64 and can be
overridden per invocation with --order or globally with WCO_DEFAULT_ORDER.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import operators, spaces, symbols, verify
from .series import TruncatedSeries, series_from_json
from .spaces import (
    Binomial,
    DomainError,
    Exponential,
    NotHospitable,
    QuadratureError,
    WeightSequence,
    bergman_weights,
    classify_space,
    classify_weights,
    dirichlet_weights,
    family_weights,
    flat_weights,
    fock_weights,
    hardy_weights,
    space_class_to_json,
    weights_from_json,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

DEFAULT_ORDER = 64


def _default_order() -> int:
    env = os.environ.get("WCO_DEFAULT_ORDER")
    if env is None:
        return DEFAULT_ORDER
    try:
        value = int(env)
        if value < 2:
            raise ValueError
        return value
    except ValueError:
        raise SystemExit(f"WCO_DEFAULT_ORDER must be an integer >= 2 (got {env!r})")


# ---------------------------------------------------------------------------
# parsing helpers


def parse_complex(text: str) -> complex:
    """Complex literals: '0.5', '-0.3+0.2i', '1.2i', with i or j."""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r}")


_TERM_RE = re.compile(
    r"""^
    (?P<sign>[+-]?)
    (?P<coeff>\([^)]*\)|[^z*()]+)?         # number or parenthesized complex
    (?:\*?(?P<z>z(\^(?P<pow>\d+))?))?      # optional z^k
    $""",
    re.VERBOSE,
)


def parse_polynomial(text: str, order: int) -> TruncatedSeries:
    """Tiny polynomial grammar: sums of coeff*z^k terms.

    Coefficients are real or complex literals ('2', '-0.5', '(1+2i)');
    examples: 'z^3', '1 + 0.5*z - (0.25+1i)*z^2'.
    """
    stripped = text.replace(" ", "")
    if not stripped:
        raise ValueError("empty polynomial")
    # split on top-level +/- (never inside parentheses, never a leading sign)
    terms: list[str] = []
    depth, start = 0, 0
    for idx, ch in enumerate(stripped):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and idx > start:
            prev = stripped[idx - 1]
            if prev not in "+-*^(e":  # not an exponent sign or operator
                terms.append(stripped[start:idx])
                start = idx
    terms.append(stripped[start:])

    coeffs = np.zeros(order + 1, dtype=complex)
    for term in terms:
        match = _TERM_RE.match(term)
        if not match or (not match.group("coeff") and not match.group("z")):
            raise ValueError(f"cannot parse polynomial term {term!r}")
        sign = -1.0 if match.group("sign") == "-" else 1.0
        coeff_text = (match.group("coeff") or "").strip("()")
        if not coeff_text:
            coeff = 1.0 + 0j
        else:
            try:
                coeff = complex(coeff_text.replace("i", "j"))
            except ValueError:
                raise ValueError(f"cannot parse coefficient in term {term!r}")
        if match.group("z"):
            power = int(match.group("pow") or 1)
        else:
            power = 0
        if power > order:
            raise ValueError(f"term {term!r} exceeds the truncation order {order}")
        coeffs[power] += sign * coeff
    return TruncatedSeries(coeffs)


def _space_from_args(args, order: int) -> WeightSequence:
    if getattr(args, "beta_file", None):
        with open(args.beta_file, "r", encoding="utf-8") as handle:
            return weights_from_json(json.load(handle))
    family = (args.family or "").lower()
    if family == "hardy":
        return hardy_weights(order)
    if family == "bergman":
        if args.eta is None:
            raise ValueError("--eta is required for the bergman family")
        return bergman_weights(args.eta, order)
    if family == "fock":
        return fock_weights(args.b if args.b is not None else 1.0, order)
    if family == "binomial":
        if args.lam is None or args.eta is None:
            raise ValueError("--lam and --eta are required for the binomial family")
        cls = Binomial(lam=args.lam, eta=args.eta, gamma=(args.eta + 1.0) / args.eta)
        return family_weights(cls, order)
    if family == "dirichlet":
        return dirichlet_weights(order)
    if family == "flat":
        return flat_weights(order, level=args.level if args.level is not None else 2.0)
    raise ValueError(
        "specify a space: --beta-file FILE or --family "
        "{hardy,bergman,fock,binomial,dirichlet,flat}"
    )


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=False))


# ---------------------------------------------------------------------------
# subcommands


def cmd_classify(args) -> int:
    tol = args.tol if args.tol is not None else spaces.CLASSIFICATION_TOL
    if args.beta_file:
        with open(args.beta_file, "r", encoding="utf-8") as handle:
            ws = weights_from_json(json.load(handle))
        if args.order is not None and args.order < ws.order:
            ws = WeightSequence(ws.beta[: args.order + 1], ws.provenance)
        cls = classify_weights(ws, tol_class=tol)
    else:
        if args.beta1 is None or args.beta2 is None:
            raise ValueError("classify needs BETA1 BETA2 or --beta-file")
        cls = classify_space(args.beta1, args.beta2, tol=tol)
    _print_json(space_class_to_json(cls))
    return EXIT_OK if not isinstance(cls, NotHospitable) else EXIT_FAIL


def _report_for_args(args) -> verify.VerificationReport:
    order = args.order
    ws = _space_from_args(args, order)
    tolerances = {}
    if args.tol is not None:
        tolerances["identity"] = args.tol
    return verify.full_report(
        ws, args.a0, args.a1, args.c, order=order, tolerances=tolerances
    )


def cmd_check(args) -> int:
    report = _report_for_args(args)
    _print_json(report.to_dict())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_report(args) -> int:
    report = _report_for_args(args)
    for line in report.lines():
        print(line)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(report.to_json())
        print(f"wrote {args.output}")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_region(args) -> int:
    interval = symbols.selfmap_interval(args.a0, args.lam, args.rho)
    payload = {
        "a0_mod": interval.a0_mod,
        "lambda": interval.lam,
        "rho": interval.rho,
        "admissible": interval.admissible,
        "a1_min": interval.a1_min,
        "a1_max": interval.a1_max,
    }
    _print_json(payload)
    return EXIT_OK


def _polynomial_from_arg(text: str, order: int) -> TruncatedSeries:
    """Inline polynomial expression, or a path to a series JSON file."""
    if text.endswith(".json") and os.path.exists(text):
        with open(text, "r", encoding="utf-8") as handle:
            f = series_from_json(json.load(handle))
        return f.truncated(order) if f.order != order else f
    return parse_polynomial(text, order)


def cmd_quad(args) -> int:
    order = args.order
    ws = _space_from_args(args, order)
    cls = classify_weights(ws)
    f = _polynomial_from_arg(args.f, order)
    series_norm = spaces.norm(f, ws)
    payload = {
        "f": args.f,
        "order": order,
        "space": space_class_to_json(cls),
        "series_norm": series_norm,
        "series_norm_sq": series_norm**2,
    }
    if isinstance(cls, Exponential):
        q = spaces.fock_norm_quadrature(f, cls.b_sq)
        payload["quadrature"] = "gaussian-plane"
    elif isinstance(cls, Binomial) and abs(cls.lam - 1.0) < 1e-12:
        if cls.eta > 1.0 + 1e-9:
            q = spaces.bergman_norm_quadrature(f, cls.eta)
            payload["quadrature"] = "disk"
        elif abs(cls.eta - 1.0) <= 1e-9:
            q = spaces.hardy_norm_quadrature(f)
            payload["quadrature"] = "circle"
        else:
            raise DomainError(
                "no integral norm for eta < 1; use the series norm "
                "(cross-checked by the derivative sandwich)"
            )
    else:
        raise DomainError(
            "integral norms are available for the fock family and the "
            "lam = 1 binomial family only"
        )
    payload["quadrature_norm"] = q
    payload["quadrature_norm_sq"] = q**2
    payload["relative_gap"] = abs(q - series_norm) / max(series_norm, 1e-300)
    _print_json(payload)
    return EXIT_OK if payload["relative_gap"] <= 1e-6 else EXIT_FAIL


# ---------------------------------------------------------------------------
# parameter sweeps


def _expand_axis(spec) -> list:
    if isinstance(spec, list):
        return list(spec)
    if isinstance(spec, dict):
        return list(
            np.linspace(float(spec["start"]), float(spec["stop"]), int(spec["count"]))
        )
    return [spec]


def _sweep_cell(payload):
    """One grid cell: synthesize, build, measure.  Must stay importable at
    module scope for the process pool."""
    (index, family, fam_params, a0_mod, a0_arg, a1_fraction, c, order) = payload
    if family == "binomial":
        lam, eta = fam_params
        cls = Binomial(lam=lam, eta=eta, gamma=(eta + 1.0) / eta)
        ws = family_weights(cls, order)
        a0 = a0_mod * np.exp(1j * a0_arg)
        interval = symbols.selfmap_interval(a0, lam, 1.0)
        a1 = symbols.a1_from_fraction(interval, a1_fraction)
        sp = symbols.synthesize(cls, a0, a1, c, order)
    else:
        b_sq = fam_params[0] ** 2
        cls = Exponential(b_sq=b_sq)
        ws = family_weights(cls, order)
        a0 = a0_mod * np.exp(1j * a0_arg)
        a1 = a1_fraction * (1.0 - a0_mod)  # keep |a0| + |a1| <= 1
        sp = symbols.synthesize(cls, a0, a1, c, order)
    matrix = operators.build_matrix(sp, ws, order)
    deviation = operators.hermitian_deviation(matrix)
    moments = operators.moment_conditions(matrix)
    return {
        "index": index,
        "a0_mod": a0_mod,
        "a0_arg": a0_arg,
        "a1": float(np.real(a1)),
        "a1_fraction": a1_fraction,
        "c": c,
        "deviation": deviation,
        "m0": moments.m0,
        "m1": moments.m1,
        "m2": moments.m2,
        "pass": deviation <= 1e-10,
    }


def cmd_sweep(args) -> int:
    with open(args.config, "r", encoding="utf-8") as handle:
        config = json.load(handle)
    space = config.get("space", {})
    family = space.get("family", "binomial")
    if family == "binomial":
        fam_params = (float(space.get("lambda", 1.0)), float(space.get("eta", 1.0)))
    elif family == "fock":
        fam_params = (float(space.get("b", 1.0)),)
    else:
        raise ValueError(f"sweep supports binomial and fock families (got {family!r})")
    grid = config.get("grid", {})
    axes = [
        _expand_axis(grid.get("a0_mod", [0.3])),
        _expand_axis(grid.get("a0_arg", [0.0])),
        _expand_axis(grid.get("a1_fraction", [0.5])),
        _expand_axis(grid.get("c", [1.0])),
    ]
    order = int(config.get("order", args.order))
    cells = [
        (idx, family, fam_params, float(m), float(arg), float(frac), float(cc), order)
        for idx, (m, arg, frac, cc) in enumerate(itertools.product(*axes))
    ]
    workers = args.workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_cell, cells))
    else:
        rows = [_sweep_cell(cell) for cell in cells]
    rows.sort(key=lambda r: r["index"])

    result = {
        "schema": "wco-sweep/1",
        "space": space,
        "order": order,
        "seed": config.get("seed", 0),
        "rows": rows,
        "pass": all(r["pass"] for r in rows),
    }
    if args.csv:
        text = _rows_to_csv(rows)
        _write_or_print(args.output or (config.get("output") or None), text)
    else:
        text = json.dumps(result, indent=2)
        _write_or_print(args.output or (config.get("output") or None), text)
    return EXIT_OK if result["pass"] else EXIT_FAIL


def _rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _write_or_print(path, text) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"wrote {path}")
    else:
        print(text)


# ---------------------------------------------------------------------------
# argument wiring


def _add_order_option(cmd) -> None:
    cmd.add_argument(
        "--order", type=int, default=_default_order(),
        help="truncation order N (default 64, env WCO_DEFAULT_ORDER)",
    )


def _add_space_options(cmd) -> None:
    cmd.add_argument("--family", type=str, default=None,
                     help="hardy | bergman | fock | binomial | dirichlet | flat")
    cmd.add_argument("--eta", type=float, default=None, help="binomial/bergman exponent")
    cmd.add_argument("--lam", type=float, default=None, help="binomial lambda in (0, 1]")
    cmd.add_argument("--b", type=float, default=None, help="fock scale (default 1)")
    cmd.add_argument("--level", type=float, default=None, help="flat weight level (default 2)")
    cmd.add_argument("--beta-file", type=str, default=None,
                     help='JSON weight file {"order": N, "beta": [...]}')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wco",
        description="Hermitian weighted composition operators: classification and verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    classify_cmd = sub.add_parser("classify", help="classify a space from beta(1), beta(2) or a weight file")
    classify_cmd.add_argument(
        "--order", type=int, default=None,
        help="truncate a --beta-file to this order before verification",
    )
    classify_cmd.add_argument("beta1", type=float, nargs="?", default=None)
    classify_cmd.add_argument("beta2", type=float, nargs="?", default=None)
    classify_cmd.add_argument("--beta-file", type=str, default=None)
    classify_cmd.add_argument("--tol", type=float, default=None,
                              help="override the classification tolerance")
    classify_cmd.set_defaults(func=cmd_classify)

    for name, func, help_text in (
        ("check", cmd_check, "run all verification checks, JSON report"),
        ("report", cmd_report, "run all verification checks, human-readable lines"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        _add_order_option(cmd)
        _add_space_options(cmd)
        cmd.add_argument("--a0", type=parse_complex, required=True, help="phi(0), complex like 0.5 or 0.3+0.2i")
        cmd.add_argument("--a1", type=parse_complex, required=True, help="phi'(0)")
        cmd.add_argument("--c", type=parse_complex, required=True, help="psi(0)")
        cmd.add_argument("--tol", type=float, default=None, help="override the identity tolerance")
        if name == "report":
            cmd.add_argument("--output", type=str, default=None, help="also write the JSON report here")
        cmd.set_defaults(func=func)

    region_cmd = sub.add_parser("region", help="exact self-map interval for a1")
    region_cmd.add_argument("a0", type=parse_complex)
    region_cmd.add_argument("lam", type=float)
    region_cmd.add_argument("rho", type=float, nargs="?", default=1.0)
    region_cmd.set_defaults(func=cmd_region)

    sweep_cmd = sub.add_parser("sweep", help="grid sweep driven by a JSON config")
    _add_order_option(sweep_cmd)
    sweep_cmd.add_argument("--config", type=str, required=True)
    sweep_cmd.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
    sweep_cmd.add_argument("--output", type=str, default=None)
    sweep_cmd.add_argument("--workers", type=int, default=1)
    sweep_cmd.set_defaults(func=cmd_sweep)

    quad_cmd = sub.add_parser("quad", help="series norm vs integral quadrature norm")
    _add_order_option(quad_cmd)
    _add_space_options(quad_cmd)
    quad_cmd.add_argument("--f", type=str, required=True,
                          help="polynomial, e.g. 'z^3' or '1+0.5*z-(0.25+1i)*z^2'")
    quad_cmd.set_defaults(func=cmd_quad)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as exc:
        print(f"quadrature error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
