"""Command line front end: ``ddepair <subcommand> ...``.

Tables go out as CSV (header row, complex numbers split into ``re``/``im``
columns), reports as JSON.  Exit codes: 0 success, 1 failed acceptance
check, 2 invalid input, 3 accuracy or overflow failure, 4 outside the
mathematical domain.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import acceptance
from .adjoint import adjoint_constant, upq_limits
from .asym import p_series, q_series
from .errors import AccuracyError, DdeError, DomainError, ValidationError
from .oscillab import PiecewisePoly, canonical_extension_check, forward_extend, oscillation_report
from .params import make_params, params_from_json, preset
from .pfun import discontinuities, lift_a, lift_count, p_laplace_check, solve_p
from .qstar import integral_form_constant, qstar_many
from .quadrature import QuadratureConfig
from .special import ein, gamma_c, qn_values

OUT_DIR_ENV = "DDEPAIR_OUT_DIR"
EXIT_OK, EXIT_CHECK_FAILED, EXIT_VALIDATION, EXIT_ACCURACY, EXIT_DOMAIN = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    params: object
    fmt: str
    cfg: QuadratureConfig
    out: str | None


def parse_complex(text: str) -> complex:
    """``"1.5"``, ``"-2"``, ``"0.5+0.2i"`` or ``"-1-3i"``."""
    t = text.strip().replace(" ", "")
    if t.endswith("i"):
        t = t[:-1] + "j"
    try:
        return complex(t)
    except ValueError:
        raise ValidationError(f"cannot read {text!r} as a complex number") from None


def parse_list(text: str, conv=float):
    try:
        return [conv(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"cannot read list {text!r}") from None


def parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"grid must be A:B:N, got {text!r}")
    a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1:
        raise ValidationError("grid needs N >= 1")
    return np.linspace(a, b, n)


def _params(args):
    sources = [args.preset is not None, args.alphas is not None, args.params_json is not None]
    if sum(sources) != 1:
        raise ValidationError("give exactly one of --preset, --alphas/--shifts, --params-json")
    if args.preset is not None:
        return preset(args.preset, args.kappa)
    if args.params_json is not None:
        with open(args.params_json) as fh:
            return params_from_json(fh.read())
    if args.shifts is None:
        raise ValidationError("--alphas needs --shifts")
    return make_params(parse_list(args.alphas, parse_complex), parse_list(args.shifts))


def _cfg(args) -> QuadratureConfig:
    return QuadratureConfig(abs_tol=args.abs_tol, rel_tol=args.rel_tol)


def _points(args) -> np.ndarray:
    if getattr(args, "grid", None):
        return parse_grid(args.grid)
    at = getattr(args, "at", None)
    if at is None:
        at = getattr(args, "u", None)
    if at is None:
        raise ValidationError("give --u/--at or --grid")
    return np.array([float(at)])


def _write_csv(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return x


def _json(obj):
    def default(o):
        if isinstance(o, (complex, np.complexfloating)):
            return {"re": float(np.real(o)), "im": float(np.imag(o))}
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (np.floating, np.integer, np.bool_)):
            return o.item()
        raise TypeError(type(o))

    return json.dumps(obj, default=default)


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    base = os.environ.get(OUT_DIR_ENV)
    path = out if (os.path.isabs(out) or not base) else os.path.join(base, out)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def cmd_qstar(rc: RunConfig, args) -> int:
    us = _points(args)
    if args.integral_form:
        if len(us) < 2:
            raise ValidationError("--integral-form needs a --grid with at least two points")
        import warnings

        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            A, dev = integral_form_constant(rc.params, us, rc.cfg)
        out = {"grid": us, "A_mean": A, "max_dev": dev}
        if caught:
            out["note"] = "integrated form applies only to beta = -1"
        _emit(_json(out), rc.out)
        return EXIT_OK
    vals, err, rep = qstar_many(rc.params, us, rc.cfg)
    errs = np.broadcast_to(np.asarray(err, dtype=float), vals.shape)
    if rc.fmt == "json":
        text = _json([{"u": u, "value": v, "est_error": e, "representation": rep} for u, v, e in zip(us, vals, errs)])
    else:
        text = _write_csv(
            [(u, v.real, v.imag, e, rep) for u, v, e in zip(us, vals, errs)],
            ["u", "re", "im", "est_error", "representation"],
        )
    _emit(text, rc.out)
    return EXIT_OK


def cmd_pfun(rc: RunConfig, args) -> int:
    P = rc.params
    n = lift_count(P.a) if args.a_lift is None else args.a_lift
    base = solve_p(P.with_alpha0(P.alpha0 - n), args.U, rc.cfg)
    if args.discontinuities:
        reps = discontinuities(P, args.U, base)
        _emit("\n".join(_json(r.__dict__) for r in reps), rc.out)
        return EXIT_OK
    if args.laplace_check is not None:
        if n:
            raise DomainError("the Laplace identity needs Re(a) < 1; drop --a-lift")
        lhs, rhs, dev = p_laplace_check(P, parse_complex(args.laplace_check), base, rc.cfg)
        _emit(_json({"lhs": lhs, "rhs": rhs, "dev": dev}), rc.out)
        return EXIT_OK
    us = _points(args)
    rows = []
    for u in us:
        v = lift_a(P, float(u), n, base) if n else base(float(u))
        idx = int(base.panel_index(u)) if u > 0 else -1
        s = v / P.c0
        rows.append((u, v.real, v.imag, s.real, s.imag, idx))
    header = ["u", "re", "im", "scaled_re", "scaled_im", "panel_index"]
    if rc.fmt == "json":
        _emit(_json([dict(zip(header, r)) for r in rows]), rc.out)
    else:
        _emit(_write_csv(rows, header), rc.out)
    return EXIT_OK


def cmd_asym(rc: RunConfig, args) -> int:
    series = (p_series if args.side == "p" else q_series)(rc.params, args.N)
    rows, partial = [], 0j
    for n in range(args.N + 1):
        term = complex(series.term(n, args.u))
        rows.append((n, term.real, term.imag, abs(term), partial.real, partial.imag))
        partial += term
    header = ["n", "term_re", "term_im", "abs_term", "partial_before_re", "partial_before_im"]
    if rc.fmt == "json":
        _emit(_json([dict(zip(header, r)) for r in rows]), rc.out)
    else:
        _emit(_write_csv(rows, header), rc.out)
    return EXIT_OK


def cmd_adjoint(rc: RunConfig, args) -> int:
    grid = parse_grid(args.grid)
    rep = adjoint_constant(rc.params, grid, rc.cfg, bypass_normalization=args.bypass_normalization)
    out = {"grid": rep.grid, "A": rep.A_estimates, "A_mean": rep.A_mean, "max_dev": rep.max_dev}
    if args.limits:
        lim = upq_limits(rc.params, rc.cfg, U_large=args.U_large)
        out.update(
            limit_at_zero=lim.limit_zero,
            limit_at_zero_covered=lim.zero_covered,
            limit_at_inf=lim.limit_inf,
            limit_at_inf_richardson=lim.limit_inf_richardson,
        )
    _emit(_json(out), rc.out)
    return EXIT_OK


def cmd_oscillate(rc: RunConfig, args) -> int:
    if args.seed == "bump":
        seed = PiecewisePoly.bump(args.T, order=args.degree // 2)
    else:
        from .qstar import qstar_many as qm

        P = preset("iwaniec", args.kappa)
        seed = PiecewisePoly.fit(lambda u: qm(P, np.atleast_1d(u), rc.cfg)[0].real, args.T, args.T + 1, args.degree)
    q = forward_extend(args.kappa, seed, args.steps)
    if args.csv:
        us = np.linspace(q.start, q.end, int((q.end - q.start) * 64) + 1)[:-1]
        _emit(_write_csv(zip(us, q(us)), ["u", "q"]), rc.out)
        return EXIT_OK
    rep = oscillation_report(q)
    out = {
        "interval_left": rep.lefts,
        "max_abs": rep.max_abs,
        "sign_changes": rep.sign_changes,
        "first_sign_change": rep.first_sign_change,
        "settled_from": rep.settled_index(),
        "log_max_abs": rep.growth_exponents,
    }
    if args.seed == "fit-qstar":
        chk = canonical_extension_check(args.kappa, args.T, args.degree, min(args.steps, 3), cfg=rc.cfg)
        out["canonical"] = chk.__dict__
    _emit(_json(out), rc.out)
    return EXIT_OK


def cmd_special(rc: RunConfig, args) -> int:
    out = {}
    if args.ein is not None:
        out["ein"] = complex(ein(parse_complex(args.ein)))
    if args.gamma is not None:
        out["gamma"] = gamma_c(parse_complex(args.gamma))
    if args.qn is not None:
        if rc.params is None:
            raise ValidationError("--qn needs parameters")
        out["qn"] = list(qn_values(rc.params, args.u or 0.0, args.qn, args.sign))
    if not out:
        raise ValidationError("give --ein, --gamma or --qn")
    _emit(_json(out), rc.out)
    return EXIT_OK


def cmd_check_all(rc: RunConfig, args) -> int:
    lines = []

    def cb(res):
        line = json.dumps(res.to_json())
        if rc.out is None:
            print(line, flush=True)
        lines.append(line)

    results = acceptance.run_all(cb)
    if rc.out is not None:
        _emit("\n".join(lines), rc.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


def _add_common(p, params=True):
    if params:
        p.add_argument("--preset", choices=["dickman", "buchstab", "iwaniec", "q1"])
        p.add_argument("--kappa", type=float)
        p.add_argument("--alphas", help="comma separated, complex as re+imi")
        p.add_argument("--shifts", help="comma separated, starting with 0")
        p.add_argument("--params-json", help="file with {alphas, shifts} or {preset, kappa}")
    p.add_argument("--abs-tol", type=float, default=1e-10)
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", help=f"output file (relative paths resolve against ${OUT_DIR_ENV})")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ddepair", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("qstar", help="canonical solution q*")
    _add_common(p)
    p.add_argument("--u", type=float)
    p.add_argument("--grid")
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--integral-form", action="store_true", help="report the integrated-form constant over --grid")

    p = sub.add_parser("pfun", help="retarded solution p(u, a, b)")
    _add_common(p)
    p.add_argument("--U", type=float, required=True)
    p.add_argument("--a-lift", type=int)
    p.add_argument("--at", type=float)
    p.add_argument("--grid")
    p.add_argument("--discontinuities", action="store_true")
    p.add_argument("--laplace-check")

    p = sub.add_parser("asym", help="asymptotic series terms")
    _add_common(p)
    p.add_argument("--side", choices=["p", "q"], default="p")
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--N", type=int, default=4)

    p = sub.add_parser("adjoint", help="adjoint constant A(u)")
    _add_common(p)
    p.add_argument("--grid", required=True)
    p.add_argument("--bypass-normalization", action="store_true")
    p.add_argument("--limits", action="store_true", help="also report u p q at 0+ and infinity")
    p.add_argument("--U-large", type=float, default=60.0)

    p = sub.add_parser("oscillate", help="forward extension of non-canonical solutions")
    _add_common(p, params=False)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--T", type=float, default=5.0)
    p.add_argument("--seed", choices=["bump", "fit-qstar"], default="bump")
    p.add_argument("--degree", type=int, default=8)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--csv", action="store_true")

    p = sub.add_parser("special", help="Ein, Gamma and Q_n")
    _add_common(p)
    p.add_argument("--ein")
    p.add_argument("--gamma")
    p.add_argument("--qn", type=int, help="highest n")
    p.add_argument("--u", type=float)
    p.add_argument("--sign", type=int, choices=[1, -1], default=1)

    p = sub.add_parser("check-all", help="run the acceptance suite")
    p.add_argument("--out")
    return ap


COMMANDS = {
    "qstar": cmd_qstar,
    "pfun": cmd_pfun,
    "asym": cmd_asym,
    "adjoint": cmd_adjoint,
    "oscillate": cmd_oscillate,
    "special": cmd_special,
    "check-all": cmd_check_all,
}


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code else EXIT_OK
    try:
        if args.subcommand == "check-all":
            rc = RunConfig("check-all", None, "json", QuadratureConfig(), args.out)
        else:
            needs_params = args.subcommand not in ("oscillate",)
            has_params = needs_params and any(
                getattr(args, k, None) is not None for k in ("preset", "alphas", "params_json")
            )
            params = _params(args) if (needs_params and (has_params or args.subcommand != "special")) else None
            fmt = args.format
            if args.subcommand == "qstar" and args.json:
                fmt = "json"
            rc = RunConfig(args.subcommand, params, fmt, _cfg(args), args.out)
        return COMMANDS[args.subcommand](rc, args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (AccuracyError, OverflowError) as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DdeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
