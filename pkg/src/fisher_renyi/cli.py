"""Command-line front end (`frc`).

Subcommands:

    measure   one density, one (p, β, λ): F, N, C, K, C/K and domain flags
    sweep     quantum states x parameter grids -> CSV/JSON table
    gauss     tabulate the (p, β, λ)-Gaussian minimizer on an x grid
    escort    both sides of the escort scaling identities

Exit codes: 0 ok, 1 usage, 2 parameter domain, 3 numerical divergence, 4 I/O.
The default integration tolerance can be set with the FRC_TOL environment
variable; `--config PATH` reads `key = value` lines with the same names as
the long options.
"""

from __future__ import annotations

import argparse
import configparser
import itertools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

import numpy as np

from . import __version__
from .density import DensityModel, gaussian, pbl_gaussian, stretched_gaussian
from .errors import DivergenceError, DomainError, FRCError, NumericalError
from .escort import escort_transform
from .measures import complexity, fisher_info, renyi_entropy_power
from .quadrature import DEFAULT_REL_TOL
from .quantum import QuantumState, radial_density
from .stam import classify, sharp_bound

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_DIVERGENCE, EXIT_IO = 0, 1, 2, 3, 4

SWEEP_COLUMNS = (
    "system", "space", "d", "n", "l", "p", "beta", "lambda",
    "F", "N", "C", "K", "C_over_K", "status",
)
SWEEP_CONFIG_KEYS = frozenset(
    {"system", "space", "d", "n", "l", "p", "beta", "lambda", "tol", "format", "output", "jobs"}
)
# escort checks integrate through a numerically inverted map; near compact
# support edges that caps the attainable relative accuracy around 1e-8
ESCORT_DEFAULT_TOL = 1e-7


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- parsing helpers ----------------------------------------------------------


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v) + 0.0:.12g}"  # + 0.0 turns -0.0 into 0.0
    return str(v)


def float_list(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


def int_list(text: str) -> list[int]:
    vals = float_list(text)
    if any(v != int(v) for v in vals):
        raise UsageError(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


def str_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def parse_density(spec: str) -> DensityModel:
    """Build a density from `gaussian[:mu,sigma]`, `stretched:p,lambda`,
    `pbl:p,beta,lambda` or `quantum:system,space,d,n,l[,const]`."""
    name, _, rest = spec.partition(":")
    args = [a.strip() for a in rest.split(",")] if rest else []
    try:
        if name == "gaussian":
            if len(args) not in (0, 2):
                raise UsageError("gaussian takes no parameters or mu,sigma")
            return gaussian(*map(float, args))
        if name == "stretched":
            if len(args) != 2:
                raise UsageError("stretched takes p,lambda")
            return stretched_gaussian(*map(float, args))
        if name == "pbl":
            if len(args) != 3:
                raise UsageError("pbl takes p,beta,lambda")
            return pbl_gaussian(*map(float, args))
        if name == "quantum":
            if len(args) not in (5, 6):
                raise UsageError("quantum takes system,space,d,n,l[,const]")
            system, space = args[0], args[1]
            d, n, l = (int(a) for a in args[2:5])  # noqa: E741
            const = float(args[5]) if len(args) == 6 else 1.0
            return radial_density(QuantumState(system, n, l, d, const, space))
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise UsageError(f"bad density parameters in {spec!r}: {exc}") from None
    raise UsageError(f"unknown density {name!r} (gaussian, stretched, pbl, quantum)")


def default_tol(fallback: float = DEFAULT_REL_TOL) -> float:
    env = os.environ.get("FRC_TOL")
    if env:
        try:
            tol = float(env)
        except ValueError:
            raise UsageError(f"FRC_TOL must be a number, got {env!r}") from None
        if not tol > 0:
            raise UsageError("FRC_TOL must be positive")
        return tol
    return fallback


def read_config(path: str) -> dict[str, str]:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_string("[frc]\n" + fh.read())
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise UsageError(f"malformed config {path}: {exc}") from None
    return {k.replace("-", "_"): v for k, v in cp["frc"].items()}


# -- output ---------------------------------------------------------------------


def render(rows: list[dict], columns: Sequence[str], fmt_name: str, meta: dict) -> str:
    if fmt_name == "json":
        recs = [{c: (fmt(r.get(c)) if isinstance(r.get(c), str) else r.get(c)) for c in columns} for r in rows]
        for rec in recs:
            for k, v in rec.items():
                if isinstance(v, (float, np.floating)):
                    rec[k] = float(fmt(v)) if math.isfinite(v) else None
                elif isinstance(v, np.integer):
                    rec[k] = int(v)
                elif isinstance(v, np.bool_):
                    rec[k] = bool(v)
        return json.dumps(recs, indent=1) + "\n"
    lines = [f"# {k}: {v}" for k, v in meta.items()]
    lines.append(",".join(columns))
    for r in rows:
        lines.append(",".join(_csv_cell(fmt(r.get(c))) for c in columns))
    return "\n".join(lines) + "\n"


def _csv_cell(s: str) -> str:
    if any(ch in s for ch in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _meta(command: str, tol: float, argv: Sequence[str]) -> dict:
    return {"frc": __version__, "command": command, "tol": fmt(tol), "invocation": "frc " + " ".join(argv)}


# -- commands -------------------------------------------------------------------


def _domain_fields(p, beta, lam) -> dict:
    dc = classify(p, beta, lam)
    return {
        "in_D_tilde": dc.in_D_tilde,
        "in_D": dc.in_D,
        "on_L": dc.on_L,
        "on_L_bar": dc.on_L_bar,
        "escort_index_to_L": dc.escort_index_to_L,
        "escort_index_to_L_bar": dc.escort_index_to_L_bar,
    }


def cmd_measure(args, argv) -> int:
    tol = args.tol if args.tol is not None else default_tol()
    rho = parse_density(args.density)
    p, beta, lam = args.p, args.beta, args.lam
    try:
        bound = sharp_bound(p, beta, lam)
    except DomainError as exc:
        print(f"error: K_{{p,beta,lambda}}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    try:
        f = fisher_info(rho, p, beta, tol)
    except DivergenceError as exc:
        print(f"error: F_{{p,beta}} diverges for {rho.label}: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    try:
        n = renyi_entropy_power(rho, lam, tol)
    except DivergenceError as exc:
        print(f"error: N_lambda diverges for {rho.label}: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    c = (f * n) ** beta
    row = {
        "density": args.density, "p": p, "beta": beta, "lambda": lam,
        "F": f, "N": n, "C": c, "K": bound.K, "C_over_K": c / bound.K, "zeta": bound.zeta,
        **_domain_fields(p, beta, lam),
    }
    cols = list(row)
    emit(render([row], cols, args.format, _meta("measure", tol, argv)), args.output)
    return EXIT_OK


def _sweep_row(task) -> dict:
    (system, space, d, n, l, p, beta, lam), tol = task  # noqa: E741
    row = {"system": system, "space": space, "d": d, "n": n, "l": l, "p": p, "beta": beta, "lambda": lam}
    try:
        bound = sharp_bound(p, beta, lam)
        rho = radial_density(QuantumState(system, n, l, d, 1.0, space))
        rep = complexity(rho, (p, beta, lam), tol, full_output=True)
        row.update(F=rep.F, N=rep.N, C=rep.C, K=bound.K, C_over_K=rep.C / bound.K, status="ok")
    except DomainError as exc:
        row["status"] = f"error:domain: {exc}"
    except DivergenceError as exc:
        row["status"] = f"error:divergence: {exc}"
    except NumericalError as exc:
        row["status"] = f"error:numerical: {exc}"
    return row


def sweep_grid(opts: dict) -> list[tuple]:
    keys = ("system", "space", "d", "n", "l", "p", "beta", "lambda")
    return list(itertools.product(*(sorted(set(opts[k])) for k in keys)))


def cmd_sweep(args, argv) -> int:
    conf = read_config(args.config) if args.config else {}
    unknown = set(conf) - SWEEP_CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")

    def pick(name, parser, default):
        val = getattr(args, "lam" if name == "lambda" else name)
        if val is not None:
            return parser(val)
        if name in conf:
            return parser(conf[name])
        return parser(default)

    opts = {
        "system": pick("system", str_list, "hydrogenic"),
        "space": pick("space", str_list, "position"),
        "d": pick("d", int_list, "3"),
        "n": pick("n", int_list, "1,2,3,4"),
        "l": pick("l", int_list, "0,1,2,3"),
        "p": pick("p", float_list, "2"),
        "beta": pick("beta", float_list, "1"),
        "lambda": pick("lambda", float_list, "1"),
    }
    tol = args.tol if args.tol is not None else (float(conf["tol"]) if "tol" in conf else default_tol())
    fmt_name = args.format or conf.get("format", "csv")
    output = args.output or conf.get("output")
    jobs = args.jobs if args.jobs is not None else int(conf.get("jobs", 1))
    if fmt_name not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {fmt_name!r}")
    tasks = [(g, tol) for g in sweep_grid(opts)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_row, tasks))
    else:
        rows = [_sweep_row(t) for t in tasks]
    emit(render(rows, SWEEP_COLUMNS, fmt_name, _meta("sweep", tol, argv)), output)
    return EXIT_OK


def cmd_gauss(args, argv) -> int:
    p, beta, lam = args.p, args.beta, args.lam
    try:
        rho = pbl_gaussian(p, beta, lam)
    except DomainError as exc:
        print(f"error: (p,beta,lambda)-Gaussian: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.x is not None:
        xs = np.array(float_list(args.x))
    else:
        lo, hi, num = float_list(args.grid)
        if num != int(num) or num < 1:
            raise UsageError("--grid takes lo,hi,count with an integer count")
        xs = np.linspace(lo, hi, int(num))
    pdf = rho.pdf(xs) if xs.size else xs
    dpdf = rho.dpdf(xs) if xs.size else xs
    rows = [{"x": x, "pdf": f, "dpdf": g} for x, f, g in zip(xs, pdf, dpdf)]
    meta = _meta("gauss", DEFAULT_REL_TOL, argv)
    meta.update(
        support_lo=fmt(rho.support.lo),
        support_hi=fmt(rho.support.hi),
        normalization_constant=fmt(rho.normalization_constant),
        branch=rho.params.branch,
    )
    emit(render(rows, ("x", "pdf", "dpdf"), args.format, meta), args.output)
    return EXIT_OK


def _gap(lhs, rhs):
    if lhs == rhs:
        return 0.0
    return abs(lhs - rhs) / abs(rhs)


def _pb_list(text: str) -> list[tuple[float, float]]:
    out = []
    for item in str_list(text):
        a, sep, b = item.partition(":")
        if not sep:
            raise UsageError(f"p-beta pairs are written p:beta, got {item!r}")
        out.append((float(a), float(b)))
    return out


def escort_rows(rho: DensityModel, alpha: float, lams, pbs, tol) -> list[dict]:
    """Both sides of the escort scaling identities for E_α[ρ]."""
    e, _ = escort_transform(rho, alpha)
    rows = []

    def attempt(kind, params, lhs_fn, rhs_fn):
        row = {"identity": kind, **params}
        try:
            lhs, rhs = lhs_fn(), rhs_fn()
            row.update(lhs=lhs, rhs=rhs, gap=_gap(lhs, rhs), status="ok")
        except DomainError as exc:
            row["status"] = f"error:domain: {exc}"
        except DivergenceError as exc:
            row["status"] = f"error:divergence: {exc}"
        except NumericalError as exc:
            row["status"] = f"error:numerical: {exc}"
        rows.append(row)

    for lam in lams:
        lam2 = 1.0 + alpha * (lam - 1.0)
        attempt(
            "renyi", {"p": None, "beta": None, "lambda": lam},
            lambda lam=lam: renyi_entropy_power(e, lam, tol),
            lambda lam2=lam2: renyi_entropy_power(rho, lam2, tol) ** alpha,
        )
    for p, beta in pbs:
        attempt(
            "fisher", {"p": p, "beta": beta, "lambda": None},
            lambda p=p, beta=beta: fisher_info(e, p, beta, tol),
            lambda p=p, beta=beta: alpha ** (2.0 / beta) * fisher_info(rho, p, alpha * beta, tol) ** alpha,
        )
    for (p, beta), lam in itertools.product(pbs, lams):
        lam2 = 1.0 + alpha * (lam - 1.0)
        attempt(
            "complexity", {"p": p, "beta": beta, "lambda": lam},
            lambda p=p, beta=beta, lam=lam: complexity(e, (p, beta, lam), tol),
            lambda p=p, beta=beta, lam2=lam2: alpha**2 * complexity(rho, (p, alpha * beta, lam2), tol),
        )
    return rows


def cmd_escort(args, argv) -> int:
    tol = args.tol if args.tol is not None else default_tol(ESCORT_DEFAULT_TOL)
    if not args.alpha > 0:
        print(f"error: escort order alpha must be positive, got {args.alpha:g}", file=sys.stderr)
        return EXIT_DOMAIN
    rho = parse_density(args.density)
    try:
        rows = escort_rows(rho, args.alpha, float_list(args.lam), _pb_list(args.pb), tol)
    except DivergenceError as exc:
        print(f"error: escort map of {rho.label}: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    cols = ("identity", "p", "beta", "lambda", "lhs", "rhs", "gap", "status")
    meta = _meta("escort", tol, argv)
    meta.update(density=args.density, alpha=fmt(args.alpha))
    emit(render(rows, cols, args.format, meta), args.output)
    if any(r["status"].startswith("error:divergence") for r in rows):
        return EXIT_DIVERGENCE
    return EXIT_OK


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="frc", description="Fisher-Rényi complexity toolkit")
    ap.add_argument("--version", action="version", version=f"frc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, with_format=True):
        sp.add_argument("--tol", type=float, default=None, help="relative integration tolerance")
        sp.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        if with_format:
            sp.add_argument("--format", choices=("csv", "json"), default=None)

    m = sub.add_parser("measure", help="F, N, C, K and C/K for one density")
    m.add_argument("--density", required=True)
    m.add_argument("--p", type=float, required=True)
    m.add_argument("--beta", type=float, required=True)
    m.add_argument("--lambda", dest="lam", type=float, required=True)
    common(m)

    s = sub.add_parser("sweep", help="quantum states over parameter grids")
    s.add_argument("--config", default=None, help="key = value file with the same option names")
    s.add_argument("--system", default=None, help="hydrogenic,harmonic")
    s.add_argument("--space", default=None, help="position,momentum")
    s.add_argument("--d", default=None)
    s.add_argument("--n", default=None)
    s.add_argument("--l", default=None)
    s.add_argument("--p", default=None)
    s.add_argument("--beta", default=None)
    s.add_argument("--lambda", dest="lam", default=None)
    s.add_argument("--jobs", type=int, default=None)
    common(s)

    g = sub.add_parser("gauss", help="tabulate the (p,beta,lambda)-Gaussian")
    g.add_argument("--p", type=float, required=True)
    g.add_argument("--beta", type=float, required=True)
    g.add_argument("--lambda", dest="lam", type=float, required=True)
    xg = g.add_mutually_exclusive_group(required=True)
    xg.add_argument("--x", default=None, help="comma-separated points")
    xg.add_argument("--grid", default=None, help="lo,hi,count")
    common(g)

    e = sub.add_parser("escort", help="check the escort scaling identities")
    e.add_argument("--density", required=True)
    e.add_argument("--alpha", type=float, required=True)
    e.add_argument("--lambda", dest="lam", default="0.5,1,2")
    e.add_argument("--pb", default="2:1", help="p:beta pairs, comma-separated")
    common(e)
    return ap


COMMANDS = {"measure": cmd_measure, "sweep": cmd_sweep, "gauss": cmd_gauss, "escort": cmd_escort}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    if getattr(args, "format", None) is None and args.command != "sweep":
        args.format = "csv"
    try:
        return COMMANDS[args.command](args, argv)
    except UsageError as exc:
        print(f"frc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: parameter domain: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DivergenceError as exc:
        print(f"error: divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except OSError as exc:
        print(f"error: I/O: {exc}", file=sys.stderr)
        return EXIT_IO
    except FRCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE


if __name__ == "__main__":
    sys.exit(main())
