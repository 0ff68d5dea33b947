"""Command-line interface.

    phaseint eval         --potential airy --s 0 --grid 1:4:4
    phaseint wavefunction --potential airy --order third --anchor 1 --grid 1:4:4
    phaseint compare      --potential airy --anchor 10 --probe 3
    phaseint quantize     --Z 1 --l 0 --nr 0 --preset kramers-langer
    phaseint verify
    phaseint parse-check  --expr "2*E + 2/z"

Options may also come from a flat ``key = value`` file given with
``--config``; command-line flags win.  Exit codes: 0 success, 1 usage or
configuration error, 2 numerical breakdown, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from . import pim, platform as pf
from .base import BaseSpec, make_base
from .errors import (
    BreakdownError,
    ExprSyntaxError,
    GuardError,
    PhaseIntegralError,
    PotentialError,
    UnboundParameterError,
)
from .oracle import compare_orders
from .potential import Potential, from_selector
from .quantize import BoundStateProblem, bohr_energy, eigenvalue
from .verify import CHECKS, default_corpus, run_suite

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


# ----------------------------------------------------------------------------
# configuration


def read_config(path: str) -> dict[str, str]:
    """Parse a ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as err:
        raise ConfigError(f"{path}: {err.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw.strip()!r}")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value.strip()
    return out


def parse_params(text: str | None, field="params") -> dict[str, float]:
    params = {}
    if not text:
        return params
    for item in text.replace(";", ",").split(","):
        item = item.strip()
        if not item:
            continue
        name, sep, value = item.partition("=")
        try:
            if not sep:
                raise ValueError
            params[name.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"field {field!r}: expected name=value, got {item!r}") from None
    return params


def _floats(text, n, field):
    parts = str(text).split(":")
    if len(parts) != n:
        raise ConfigError(f"field {field!r}: expected {n} values separated by ':', got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"field {field!r}: not a number in {text!r}") from None


def _float(text, field):
    try:
        return float(text)
    except (TypeError, ValueError):
        raise ConfigError(f"field {field!r}: not a number: {text!r}") from None


@dataclass
class RunConfig:
    potential: Potential | None
    spec: BaseSpec
    order: pim.ExpansionOrder
    anchor: float | None
    grid: np.ndarray | None
    fmt: str
    abs_tol: float
    rel_tol: float
    out: str | None


def build_config(opts: dict) -> RunConfig:
    params = parse_params(opts.get("params"))
    domain = _floats(opts["domain"], 2, "domain") if opts.get("domain") else None
    potential = None
    selector = opts.get("potential")
    if opts.get("expr"):
        selector = "expr:" + opts["expr"]
    if selector:
        potential = from_selector(selector, params, domain)
    if opts.get("preset"):
        spec = BaseSpec(preset=opts["preset"])
    else:
        spec = BaseSpec(s=_float(opts.get("s", 0.0), "s"))
    grid = None
    if opts.get("grid"):
        lo, hi, n = _floats(opts["grid"], 3, "grid")
        if n < 2 or n != int(n):
            raise ConfigError("field 'grid': n must be an integer >= 2")
        grid = np.linspace(lo, hi, int(n))
    fmt = opts.get("format") or "csv"
    if fmt not in ("csv", "json"):
        raise ConfigError(f"field 'format': expected csv or json, got {fmt!r}")
    try:
        order = pim.ExpansionOrder.coerce(opts.get("order") or "third")
    except ValueError as err:
        raise ConfigError(f"field 'order': {err}") from None
    anchor = opts.get("anchor")
    return RunConfig(
        potential=potential,
        spec=spec,
        order=order,
        anchor=None if anchor in (None, "") else _float(anchor, "anchor"),
        grid=grid,
        fmt=fmt,
        abs_tol=_float(opts.get("abs_tol") or 1e-12, "abs_tol"),
        rel_tol=_float(opts.get("rel_tol") or 1e-10, "rel_tol"),
        out=opts.get("out"),
    )


# ----------------------------------------------------------------------------
# output


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def format_table(rows: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "json":
        records = [
            {c: (float(r[c]) if isinstance(r.get(c), (float, np.floating)) else r.get(c))
             for c in columns}
            for r in rows
        ]
        return json.dumps(records, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ----------------------------------------------------------------------------
# commands


def _need(cfg: RunConfig, *names):
    for n in names:
        if getattr(cfg, n) is None:
            raise ConfigError(f"field {n!r} is required for this command")


def _skip_reason(err: Exception) -> str:
    msg = str(err)
    if "singular" in msg:
        return "singular point"
    if "outside" in msg:
        return "outside domain"
    return "turning point or forbidden region"


EVAL_COLUMNS = ["z", "q2", "q", "p_s", "dp_s_dz", "y2", "skipped"]


def cmd_eval(cfg: RunConfig):
    """Rows of Q^2, Q, P_s, dP_s/dz and Y_2; guarded points become skipped rows."""
    _need(cfg, "potential", "grid")
    b = make_base(cfg.potential, cfg.spec)
    rows = []
    for z in cfg.grid:
        row = {"z": float(z)}
        try:
            row["q2"] = float(b.q2(z))
        except PhaseIntegralError:
            pass
        try:
            if not cfg.potential.inside(z):
                raise GuardError("outside domain")
            ev = pf.platform_eval(b, float(z))
            row.update(q=float(b.q(z)), p_s=ev.p, dp_s_dz=ev.dp_dz, y2=ev.y2)
        except PhaseIntegralError as err:
            row["skipped"] = _skip_reason(err)
        rows.append(row)
    return rows, EVAL_COLUMNS


WAVE_COLUMNS = ["z", "re_psi_plus", "im_psi_plus", "amplitude", "phase"]


def cmd_wavefunction(cfg: RunConfig):
    _need(cfg, "potential", "grid", "anchor")
    b = make_base(cfg.potential, cfg.spec)
    pa = pim.PhaseApprox(b, cfg.order, cfg.anchor, abs_tol=cfg.abs_tol, rel_tol=cfg.rel_tol)
    amps, phases = pim.evaluate_grid(pa, cfg.grid)
    rows = []
    for z, a, w in zip(cfg.grid, amps, phases):
        val = a * complex(math.cos(w), math.sin(w))
        rows.append(dict(z=float(z), re_psi_plus=val.real, im_psi_plus=val.imag,
                         amplitude=float(a), phase=float(w)))
    return rows, WAVE_COLUMNS


def cmd_compare(cfg: RunConfig, probe: float, tol: float):
    _need(cfg, "potential", "anchor")
    res = compare_orders(cfg.potential, cfg.spec, cfg.anchor, probe, tol)
    row = dict(anchor=cfg.anchor, probe=probe, err_first=float(res.err_first),
               err_third=float(res.err_third), ratio=float(res.ratio))
    return [row], ["anchor", "probe", "err_first", "err_third", "ratio"]


def cmd_quantize(Z: float, l: float, n_r: int, spec: BaseSpec, bracket=None):
    prob = BoundStateProblem.hydrogen(Z, l, n_r, spec)
    E = eigenvalue(prob, bracket)
    n = n_r + l + 1
    row = dict(Z=float(Z), l=float(l), n_r=n_r, s=spec.resolve(prob.potential).s,
               E=float(E), bohr=float(bohr_energy(Z, n)))
    return [row], ["Z", "l", "n_r", "s", "E", "bohr"]


def cmd_verify(checks=None, corpus_filter=None, stream=None):
    """Run the identity suite; returns the exit code."""
    stream = stream or sys.stdout
    corpus = default_corpus()
    if corpus_filter is not None:
        corpus = [e for e in corpus if any(e.name.startswith(f) for f in corpus_filter)]
    results = run_suite(checks, corpus)
    for r in results:
        print(r.line(), file=stream)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed", file=stream)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_parse_check(source: str, params: dict, at: float | None, stream=None):
    stream = stream or sys.stdout
    tree = ex.parse(source)
    d1 = ex.differentiate(tree)
    d2 = ex.differentiate(d1)
    print(f"expr:   {ex.to_string(tree)}", file=stream)
    print(f"d/dz:   {ex.to_string(d1)}", file=stream)
    print(f"d2/dz2: {ex.to_string(d2)}", file=stream)
    names = sorted(ex.parameters(tree))
    if names:
        print(f"params: {', '.join(names)}", file=stream)
    if at is not None:
        vals = [ex.evaluate(t, at, params) for t in (tree, d1, d2)]
        print("at z={}: {}".format(_cell(at), ", ".join(_cell(v) for v in vals)), file=stream)


# ----------------------------------------------------------------------------
# argument parsing

_CONFIG_KEYS = {
    "potential", "params", "expr", "domain", "s", "preset", "order", "anchor",
    "grid", "probe", "format", "abs_tol", "rel_tol", "out", "tol", "Z", "l", "nr",
    "bracket", "checks", "corpus", "at",
}


def _common(p):
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--potential", help="family name, family:<name> or expr:<source>")
    p.add_argument("--expr", help="expression for R(z), same as --potential expr:<source>")
    p.add_argument("--params", help="comma-separated name=value list")
    p.add_argument("--domain", help="lo:hi (inf allowed)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--s", help="platform parameter s")
    g.add_argument("--preset", choices=["unmodified", "kramers-langer", "no-centrifugal"])
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--abs-tol", dest="abs_tol")
    p.add_argument("--rel-tol", dest="rel_tol")
    p.add_argument("--out", help="output file (default: standard output)")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="phaseint", description="Phase-integral approximations of order one and three.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="tabulate Q^2, Q, P_s, dP_s/dz, Y_2 on a grid")
    _common(p)
    p.add_argument("--grid", help="lo:hi:n")

    p = sub.add_parser("wavefunction", help="tabulate psi_+ on a grid")
    _common(p)
    p.add_argument("--order", choices=["first", "third", "1", "3"])
    p.add_argument("--anchor")
    p.add_argument("--grid", help="lo:hi:n")

    p = sub.add_parser("compare", help="first vs third order against the ODE oracle")
    _common(p)
    p.add_argument("--anchor")
    p.add_argument("--probe")
    p.add_argument("--tol", help="oracle local tolerance (default 1e-12)")

    p = sub.add_parser("quantize", help="first-order hydrogen eigenvalue")
    p.add_argument("--config")
    p.add_argument("--Z")
    p.add_argument("--l")
    p.add_argument("--nr", help="radial quantum number n_r")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--s")
    g.add_argument("--preset", choices=["unmodified", "kramers-langer", "no-centrifugal"])
    p.add_argument("--bracket", help="E_lo:E_hi")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run the identity suite")
    p.add_argument("--checks", help=f"comma-separated subset of: {', '.join(CHECKS)}")
    p.add_argument("--corpus", help="comma-separated corpus name prefixes")

    p = sub.add_parser("parse-check", help="parse and differentiate an expression")
    p.add_argument("--expr", required=True)
    p.add_argument("--params")
    p.add_argument("--at", help="evaluate at this z")
    return parser


def _merged(args) -> dict:
    opts = {}
    if getattr(args, "config", None):
        opts.update(read_config(args.config))
    for k, v in vars(args).items():
        if k in ("command", "config") or v is None:
            continue
        opts[k] = v
    return opts


def _run(args) -> int:
    opts = _merged(args)
    cmd = args.command
    if cmd == "verify":
        checks = None if args.checks is None else [c for c in args.checks.split(",") if c.strip()]
        corpus = None if args.corpus is None else [c for c in args.corpus.split(",") if c.strip()]
        return cmd_verify(checks, corpus)
    if cmd == "parse-check":
        at = None if args.at is None else _float(args.at, "at")
        cmd_parse_check(args.expr, parse_params(args.params), at)
        return EXIT_OK
    if cmd == "quantize":
        if opts.get("preset"):
            spec = BaseSpec(preset=opts["preset"])
        else:
            spec = BaseSpec(s=_float(opts.get("s", 1.0), "s"))
        nr = _float(opts.get("nr", 0), "nr")
        if nr != int(nr) or nr < 0:
            raise ConfigError("field 'nr': expected a non-negative integer")
        bracket = _floats(opts["bracket"], 2, "bracket") if opts.get("bracket") else None
        rows, cols = cmd_quantize(_float(opts.get("Z", 1.0), "Z"), _float(opts.get("l", 0.0), "l"),
                                  int(nr), spec, bracket)
        _emit(format_table(rows, cols, opts.get("format") or "csv"), opts.get("out"))
        return EXIT_OK
    cfg = build_config(opts)
    if cmd == "eval":
        rows, cols = cmd_eval(cfg)
        skipped = sum(1 for r in rows if r.get("skipped"))
        if skipped:
            print(f"warning: {skipped} grid point(s) skipped", file=sys.stderr)
    elif cmd == "wavefunction":
        rows, cols = cmd_wavefunction(cfg)
    else:
        if opts.get("probe") is None:
            raise ConfigError("field 'probe' is required for this command")
        rows, cols = cmd_compare(cfg, _float(opts["probe"], "probe"),
                                 _float(opts.get("tol") or 1e-12, "tol"))
    _emit(format_table(rows, cols, cfg.fmt), cfg.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args)
    except ExprSyntaxError as err:
        print(f"error: {err}\n{err.caret()}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, PotentialError, UnboundParameterError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except BreakdownError as err:
        print(f"error: breakdown at z={err.z!r}: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except PhaseIntegralError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
