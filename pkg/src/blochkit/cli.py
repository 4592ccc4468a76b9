"""Command line entry point: ``blochkit <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .combination import CombinationSpec
from .diagnostics.criteria import difference_compactness, single_compactness_bloch, single_compactness_hinf
from .diagnostics.sequence import Params, power_sequence_p
from .errors import BlochKitError, ConfigError, InvalidSelfMap, ParseError
from .norms import DEFAULT_GRID, Grid, PowerNormSweep
from .reporting import Report, csv_text, emit, load_config, run
from .reporting.config import RunConfig
from .reporting.report import to_plain
from .symbols import compile_symbol, validate_self_map

EXIT_OK, EXIT_CONFIG, EXIT_SELF_MAP, EXIT_NUMERIC = 0, 2, 3, 4


def _grid(text):
    try:
        return Grid.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _scalar(text):
    try:
        return complex(text.replace("i", "j").replace(" ", ""))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from e


def _common(p, seq=True):
    p.add_argument("--norm", choices=("bloch", "hinf"), default="bloch")
    p.add_argument("--grid", type=_grid, default=DEFAULT_GRID, help="radial,angular[,max_exponent]")
    p.add_argument("--tol", type=float, default=None, help="zero threshold for verdicts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    if seq:
        p.add_argument("--nmax", type=int, default=256)


def _terms(p):
    p.add_argument("--term", nargs=2, action="append", metavar=("LAMBDA", "SYMBOL"), default=[],
                   help="one term lambda * C_phi; repeat for a combination")


def build_parser():
    ap = argparse.ArgumentParser(prog="blochkit", description="Compactness diagnostics for combinations of "
                                 "composition operators on the Bloch space and H^infinity.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check that a symbol maps the disk into itself")
    p.add_argument("symbol")
    p.add_argument("--resolution", type=int, default=1024)
    p.add_argument("--out", default=None)

    p = sub.add_parser("norm", help="norm of sum lambda_i phi_i^n for one n")
    p.add_argument("symbol", nargs="?")
    _terms(p)
    p.add_argument("--n", type=int, default=1)
    _common(p, seq=False)

    p = sub.add_parser("power-seq", help="s_n = ||sum lambda_i phi_i^n|| for n = 1..nmax, with a verdict")
    p.add_argument("symbol", nargs="?")
    _terms(p)
    _common(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("compactness", help="compactness of a single C_phi")
    p.add_argument("symbol")
    _common(p)

    p = sub.add_parser("difference", help="compactness of C_phi - C_psi on the Bloch space")
    p.add_argument("phi")
    p.add_argument("psi")
    _common(p)

    p = sub.add_parser("full-report", help="run every diagnostic from a TOML config")
    p.add_argument("--config", required=False)
    _terms(p)
    _common(p)
    p.add_argument("--format", default=None, help="comma list of json,csv,plot")
    return ap


def _params(args):
    kw = {"grid": args.grid}
    if getattr(args, "nmax", None) is not None:
        kw["n_max"] = args.nmax
    if args.tol is not None:
        kw["tol_zero"] = args.tol
    p = Params(**kw)
    return replace(p, paths=replace(p.paths, seed=args.seed))


def _spec(args):
    pairs = [(_scalar(lam), s) for lam, s in args.term]
    if getattr(args, "symbol", None):
        pairs.insert(0, (1.0, args.symbol))
    if not pairs:
        raise ConfigError("term", "give a symbol or at least one --term LAMBDA SYMBOL")
    for i, (lam, _) in enumerate(pairs):
        if lam == 0:
            raise ConfigError(f"term[{i}]", "scalars must be nonzero")
    return CombinationSpec.of(*pairs)


def _write(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj, out):
    _write(json.dumps(to_plain(obj), indent=2, sort_keys=True) + "\n", out)


def cmd_validate(args):
    sym = compile_symbol(args.symbol, validate=False)
    try:
        rep = validate_self_map(sym, args.resolution)
    except InvalidSelfMap as e:
        rep = getattr(e, "report", None)
        _dump({"symbol": sym.text, "accepted": False, "error": str(e),
               "report": rep.to_dict() if rep is not None else None}, args.out)
        return EXIT_SELF_MAP
    _dump({"symbol": sym.text, "accepted": True, "report": rep.to_dict()}, args.out)
    return EXIT_OK


def cmd_norm(args):
    spec = _spec(args)
    est = PowerNormSweep(spec, args.norm, args.grid).estimate(args.n)
    _dump({"combination": spec.describe(), "n": args.n, "norm": args.norm, **est.to_dict()}, args.out)
    return EXIT_OK


def cmd_power_seq(args):
    spec = _spec(args)
    seq = power_sequence_p(spec, args.norm, _params(args))
    if args.format == "csv":
        r = Report({}, args.seed, [], sequence=seq.to_dict())
        _write(csv_text(r), args.out)
    else:
        _dump({"combination": spec.describe(), **seq.to_dict()}, args.out)
    return EXIT_OK


def cmd_compactness(args):
    sym = compile_symbol(args.symbol)
    params = _params(args)
    rep = single_compactness_bloch(sym, params) if args.norm == "bloch" else single_compactness_hinf(sym, params)
    _dump({"symbol": sym.text, "norm": args.norm, "seed": args.seed, **rep.to_dict()}, args.out)
    return EXIT_OK


def cmd_difference(args):
    if args.norm != "bloch":
        raise ConfigError("norm", "the difference test is for the Bloch space")
    phi, psi = compile_symbol(args.phi), compile_symbol(args.psi)
    rep = difference_compactness(phi, psi, _params(args))
    _dump({"phi": phi.text, "psi": psi.text, "seed": args.seed, **rep.to_dict()}, args.out)
    return EXIT_OK


def cmd_full_report(args):
    if args.config:
        cfg = load_config(args.config)
        if args.seed:
            cfg = cfg.with_seed(args.seed)
    else:
        spec = _spec(args)
        cfg = RunConfig(tuple((lam, sym.text) for lam, sym in spec.terms), args.norm, _params(args), args.seed)
    formats = tuple(args.format.split(",")) if args.format else cfg.formats
    bad = [f for f in formats if f not in ("json", "csv", "plot")]
    if bad:
        raise ConfigError("format", f"unknown format(s) {bad}")
    report = run(cfg)
    out = args.out or cfg.out
    if out:
        emit(report, out, formats)
    else:
        sys.stdout.write(report.to_json())
    if any(v["accepted"] is False for v in report.validation):
        return EXIT_SELF_MAP
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "norm": cmd_norm,
    "power-seq": cmd_power_seq,
    "compactness": cmd_compactness,
    "difference": cmd_difference,
    "full-report": cmd_full_report,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InvalidSelfMap as e:
        print(f"error: invalid self-map: {e}", file=sys.stderr)
        return EXIT_SELF_MAP
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SELF_MAP if isinstance(e.__cause__, InvalidSelfMap) else EXIT_CONFIG
    except (ParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (BlochKitError, ArithmeticError, FloatingPointError) as e:
        print(f"error: numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
