"""Command-line front end.

Subcommands: ``verify``, ``degree``, ``stability``, ``he-solve`` and
``continuity``.  Reports are JSON (with ``"schema": 1``) or CSV.

Exit codes: 0 ok, 1 verification failure, 2 bad configuration,
3 solver non-convergence.
"""

from __future__ import annotations

import argparse
import cmath
import datetime as _dt
import json
import math
import re
import sys
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import __version__
from .bundles import (
    Eta,
    degrees,
    example_4_11,
    example_4_12,
    example_4_13,
    line_bundle,
    scan_to_csv,
    stability_scan,
)
from .hopf import STRUCTURE_TABLE_MINUS, HopfGeometry, verify_all
from .symcalc import CoordForm

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3
SCHEMA = 1


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing helpers


def parse_alpha(text: str) -> Fraction:
    try:
        a = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid alpha {text!r}") from exc
    if not 0 < a < 1:
        raise ConfigError("alpha must lie in (0, 1)")
    return a


def parse_alpha_grid(text: str) -> list[Fraction]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError("alpha grid must look like a:b:step")
    try:
        a, b, step = (Fraction(p.strip()) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid alpha grid {text!r}") from exc
    if not (0 < a < 1 and 0 < b < 1):
        raise ConfigError("alpha grid endpoints must lie in (0, 1)")
    if step <= 0 or b < a:
        raise ConfigError("alpha grid needs a <= b and step > 0")
    n = int((b - a) / step)
    if n > 10**6:
        raise ConfigError("alpha grid too large")
    return [a + k * step for k in range(n + 1)]


_POLAR = re.compile(r"^\s*([^∠@]+)\s*[∠@]\s*(.+)$")
_TAU = re.compile(r"^\s*tau\s*\^\s*(-?\d+)\s*$")


def _float_expr(text: str) -> float:
    """A float, optionally written with ``pi`` (e.g. ``pi/3``, ``-2*pi``)."""
    t = text.strip().replace(" ", "")
    m = re.fullmatch(r"(-?)(\d*\.?\d*)\*?pi(?:/(\d+\.?\d*))?", t)
    if m:
        sign = -1.0 if m.group(1) else 1.0
        coef = float(m.group(2)) if m.group(2) else 1.0
        den = float(m.group(3)) if m.group(3) else 1.0
        return sign * coef * math.pi / den
    return float(t)


def parse_eta(text: str) -> Eta:
    """``tau^m`` (exact), ``r∠theta`` / ``r@theta`` (polar), or ``re,im``."""
    m = _TAU.match(text)
    if m:
        return Eta.tau_power(int(m.group(1)))
    try:
        m = _POLAR.match(text)
        if m:
            r, th = _float_expr(m.group(1)), _float_expr(m.group(2))
            if not r > 0:
                raise ConfigError("eta must be nonzero")
            return Eta.polar(r, th)
        if "," in text:
            re_s, im_s = text.split(",", 1)
            z = complex(float(re_s), float(im_s))
        else:
            z = complex(float(text), 0.0)
    except ValueError as exc:
        raise ConfigError(f"cannot parse eta {text!r}") from exc
    if z == 0:
        raise ConfigError("eta must be nonzero")
    return Eta.polar(abs(z), cmath.phase(z))


def _envelope(command: str, body: dict[str, Any]) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "command": command,
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        **body,
    }


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _dumps(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_verify(tau: float = 2.0, table: dict[str, CoordForm] | None = None,
               out: str | None = None, fmt: str = "json") -> int:
    """Run the identity suite.  ``table`` overrides expected structure equations."""
    geom = HopfGeometry(tau=tau)
    rep = verify_all(geom, table)
    if fmt == "csv":
        lines = ["check_name,status,witness_text"]
        for c in rep.checks:
            w = c.witness.replace('"', '""')
            lines.append(f'"{c.name}",{"pass" if c.passed else "fail"},"{w}"')
        _emit("\n".join(lines) + "\n", out)
    else:
        _emit(_dumps(_envelope("verify", rep.to_dict())), out)
    for c in rep.failures():
        print(f"FAILED {c.name}: {c.witness}", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def corrupted_table(geom: HopfGeometry | None = None) -> dict[str, CoordForm]:
    """Negative control: a wrong expected value for the first structure equation."""
    geom = geom or HopfGeometry()
    t = dict(STRUCTURE_TABLE_MINUS(geom))
    key = "∂̄₋α₁"
    t[key] = t[key] + CoordForm(2, {(0, 2): 1})
    return {key: t[key]}


def cmd_degree(eta: Eta, tau: float, alpha: Fraction, out: str | None = None, fmt: str = "json") -> int:
    L = line_bundle(eta, tau)
    d = degrees(L)
    values = {"pi": math.pi, "lntau": math.log(tau), **eta.value_map()}
    body = d.to_dict(alpha, values)
    if fmt == "csv":
        row = [str(alpha), repr(body["deg_plus_value"]), repr(body["deg_minus_value"]), repr(body["deg_alpha_value"])]
        _emit("alpha,deg_plus,deg_minus,deg_alpha\n" + ",".join(row) + "\n", out)
    else:
        _emit(_dumps(_envelope("degree", {"tau": tau, "eta": _eta_dict(eta), **body})), out)
    return EXIT_OK


def _eta_dict(eta: Eta) -> dict[str, Any]:
    return {"log_abs": eta.log_abs.to_tex(), "arg": eta.arg.to_tex(), "values": dict(eta.values)}


def cmd_stability(family: str, params: dict[str, int], grid: Sequence[Fraction],
                  out: str | None = None, fmt: str = "csv") -> int:
    try:
        if family == "4.11":
            desc = example_4_11(params["m_plus"], params["m_minus"])
        elif family == "4.12":
            desc = example_4_12(params["deg_plus_L"], params["m_minus"])
        else:
            raise ConfigError(f"unknown family {family!r}")
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"missing parameter {exc}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows = stability_scan(desc, grid)
    if fmt == "csv":
        _emit(scan_to_csv(rows, desc.alpha0), out)
    else:
        body = {
            **desc.to_dict(),
            "rows": [{"alpha": float(r["alpha"]), "mu_alpha_V": float(r["mu_alpha_V"]),
                      "mu_alpha_L": float(r["mu_alpha_L"]), "verdict": r["verdict"]} for r in rows],
        }
        _emit(_dumps(_envelope("stability", body)), out)
    return EXIT_OK


def parse_profile(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"invalid profile {text!r}") from exc
    if not vals:
        raise ConfigError("profile needs at least one coefficient")
    return vals


def cmd_he_solve(profile: Sequence[float], alpha: Fraction, tau: float = 2.0, eta: Eta | None = None,
                 n: int = 64, out: str | None = None, fmt: str = "json") -> int:
    """Line-bundle solve for ``f(t) = c0 + sum_k (a_k cos + b_k sin)(2 pi k t / T)``."""
    from .hesolver import SpectralGrid, reduce_operators, solve_line_he

    geom = HopfGeometry(tau=tau)
    L = line_bundle(eta or Eta.tau_power(0), tau)
    op = reduce_operators(geom, L, alpha)
    grid = SpectralGrid(n, geom.period)
    t = grid.t
    f = np.full(n, profile[0], dtype=float)
    coeffs = list(profile[1:])
    for k in range(0, len(coeffs), 2):
        mode = k // 2 + 1
        f += coeffs[k] * np.cos(2 * np.pi * mode * t / geom.period)
        if k + 1 < len(coeffs):
            f += coeffs[k + 1] * np.sin(2 * np.pi * mode * t / geom.period)
    res = solve_line_he(f, op, grid)
    k_vals = res.k.scalar_values()
    if fmt == "csv":
        lines = ["t,f,k"] + [f"{ti!r},{fi!r},{ki!r}" for ti, fi, ki in zip(t, f, k_vals)]
        _emit("\n".join(lines) + "\n", out)
    else:
        body = {"alpha": str(alpha), "tau": tau, "N": n, "lambda": res.lam, "residual": res.residual,
                "t": t.tolist(), "f": f.tolist(), "k": k_vals.tolist()}
        _emit(_dumps(_envelope("he-solve", body)), out)
    return EXIT_OK if res.residual <= 1e-8 else EXIT_SOLVER


def cmd_continuity(family: str, m_plus: int, m_minus: int, alpha: Fraction, config: Any,
                   tau: float = 2.0, out: str | None = None, fmt: str = "json") -> int:
    from .hesolver import newton_continuation

    if family != "4.13":
        raise ConfigError("continuity runs are available for family 4.13")
    try:
        s = example_4_13(m_plus, m_minus)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    trace = newton_continuation(s, float(alpha), config, HopfGeometry(tau=tau))
    if fmt == "csv":
        _emit(trace.to_csv(), out)
    else:
        body = {"family": family, "m_plus": m_plus, "m_minus": m_minus, "alpha": str(alpha), "tau": tau,
                "trace": trace.to_dict()}
        _emit(_dumps(_envelope("continuity", body)), out)
    return EXIT_OK if trace.converged_start else EXIT_SOLVER


# ---------------------------------------------------------------------------
# argparse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopfhe", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, fmt: str) -> None:
        sp.add_argument("--tau", type=float, default=2.0, help="contraction factor, > 1")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--format", choices=("json", "csv"), default=fmt)

    sp = sub.add_parser("verify", help="run the exact identity suite")
    common(sp, "json")
    sp.add_argument("--corrupt-table", action="store_true", help=argparse.SUPPRESS)

    sp = sub.add_parser("degree", help="degrees of a line bundle L_eta")
    common(sp, "json")
    sp.add_argument("--eta", required=True, help="tau^m, r∠theta (or r@theta), or re,im")
    sp.add_argument("--alpha", default="1/2")

    sp = sub.add_parser("stability", help="alpha-stability scan of a family")
    common(sp, "csv")
    sp.add_argument("--family", choices=("4.11", "4.12"), required=True)
    sp.add_argument("--m-plus", type=int)
    sp.add_argument("--m-minus", type=int)
    sp.add_argument("--deg-plus-l", type=int)
    sp.add_argument("--alpha-grid", default="0.1:0.9:0.1")

    sp = sub.add_parser("he-solve", help="line-bundle Hermitian-Einstein solve")
    common(sp, "json")
    sp.add_argument("--alpha", default="1/2")
    sp.add_argument("--eta", default="tau^0")
    sp.add_argument("--profile", default="0,1", help="c0,a1,b1,a2,b2,... Fourier coefficients of f")
    sp.add_argument("--grid-n", type=int, default=64)

    sp = sub.add_parser("continuity", help="continuity method for the 4.13 family")
    common(sp, "json")
    sp.add_argument("--family", choices=("4.13",), default="4.13")
    sp.add_argument("--m-plus", type=int, default=1)
    sp.add_argument("--m-minus", type=int, default=2)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--grid-n", type=int)
    sp.add_argument("--eps0", type=float)
    sp.add_argument("--eps-ratio", type=float)
    sp.add_argument("--eps-min", type=float)
    sp.add_argument("--config", default=None, help="solver config JSON file")
    return p


def _solver_config(args: argparse.Namespace, alpha: Fraction):
    from .hesolver import SolverConfig, SolverConfigError

    data: dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read solver config: {exc}") from exc
    for key, attr in (("N", "grid_n"), ("eps0", "eps0"), ("ratio", "eps_ratio"), ("eps_min", "eps_min")):
        v = getattr(args, attr)
        if v is not None:
            data[key] = v
    if "alpha" in data and Fraction(str(data["alpha"])) != alpha:
        raise ConfigError("alpha in solver config disagrees with --alpha")
    data["alpha"] = float(alpha)
    try:
        return SolverConfig.from_json(data)
    except SolverConfigError as exc:
        raise ConfigError(str(exc)) from exc


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if not args.tau > 1 or not math.isfinite(args.tau):
            raise ConfigError("tau must be a real number > 1")
        if args.command == "verify":
            table = corrupted_table(HopfGeometry(tau=args.tau)) if args.corrupt_table else None
            return cmd_verify(args.tau, table, args.out, args.format)
        if args.command == "degree":
            return cmd_degree(parse_eta(args.eta), args.tau, parse_alpha(args.alpha), args.out, args.format)
        if args.command == "stability":
            params = {k: v for k, v in (("m_plus", args.m_plus), ("m_minus", args.m_minus),
                                        ("deg_plus_L", args.deg_plus_l)) if v is not None}
            return cmd_stability(args.family, params, parse_alpha_grid(args.alpha_grid), args.out, args.format)
        if args.command == "he-solve":
            if args.grid_n < 4:
                raise ConfigError("--grid-n must be at least 4")
            return cmd_he_solve(parse_profile(args.profile), parse_alpha(args.alpha), args.tau,
                                parse_eta(args.eta), args.grid_n, args.out, args.format)
        if args.command == "continuity":
            alpha = parse_alpha(args.alpha)
            cfg = _solver_config(args, alpha)
            return cmd_continuity(args.family, args.m_plus, args.m_minus, alpha, cfg, args.tau, args.out, args.format)
    except ConfigError as exc:
        print(f"hopfhe: error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
