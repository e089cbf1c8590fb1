"""Command-line interface.

Exit codes: 0 success, 1 other library errors (bad cache file, I/O),
2 usage or parse errors, 3 resource caps, 4 internal invariant violations.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bcd, growth, series
from .cache import SeriesCache, table_from_json, table_to_csv, table_to_json
from .errors import CglabError, InvariantViolation, NegativeDifference, ResourceCap
from .groups import parse_model

EPILOG_GROWTH = """examples:
  cglab growth count --group free:2 --kind conj --mode cumulative --max-n 3
  cglab growth count --group zm*zn:2,3 --kind comm --max-n 12 --format json
  cglab growth count --group zm*zn:2,2 --kind conj --max-n 29 --enum-cap 29 --cache-dir .cache
"""
EPILOG_SERIES = """examples:
  cglab series analyze --input table.json --test recurrence --max-order 8
  cglab series asymptotics --input table.json --base exact --range 10:18
"""
EPILOG_FSA = """examples:
  cglab fsa build --which lex --group free:2 --out dot
  cglab fsa build --which bcd --group free:2 --K 1 --out json
"""
EPILOG_DELTA = """examples:
  cglab delta apply --group free:2 --K 2 --word ba
"""

ENGINE_ALIASES = {"enum": "enumerate", "enumerate": "enumerate", "formula": "formula"}


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("formatter_class", argparse.RawDescriptionHelpFormatter)
        super().__init__(*args, **kwargs)


def _model(desc: str):
    try:
        return parse_model(desc)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cglab", description="Exact conjugacy growth and padded-language automata "
                "for free groups and free products of finite cyclic groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("growth", help="growth tables").add_subparsers(dest="action", required=True,
                                                                        parser_class=_Parser)
    gc = g.add_parser("count", help="count one growth function", epilog=EPILOG_GROWTH)
    gc.add_argument("--group", required=True, type=_model, help="free:<k> or zm*zn:<m>,<n>")
    gc.add_argument("--kind", required=True, choices=growth.KINDS)
    gc.add_argument("--mode", default="cumulative", choices=growth.MODES)
    gc.add_argument("--max-n", type=int, required=True)
    gc.add_argument("--engine", default="enum", choices=sorted(ENGINE_ALIASES))
    gc.add_argument("--format", default="csv", choices=("csv", "json"))
    gc.add_argument("--cache-dir", default=None, help="series cache (default: $CGLAB_CACHE)")
    gc.add_argument("--workers", type=int, default=1, help="processes for sphere shards")
    gc.add_argument("--enum-cap", type=int, default=growth.ENUM_CAP,
                    help=f"largest n the enumerate engine accepts (default {growth.ENUM_CAP})")
    gc.add_argument("--output", default=None, help="write here instead of stdout")

    s = sub.add_parser("series", help="analyses of a growth table").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    sa = s.add_parser("analyze", help="exact recurrence (rationality) test", epilog=EPILOG_SERIES)
    sa.add_argument("--input", required=True)
    sa.add_argument("--test", default="recurrence", choices=("recurrence", "rate"))
    sa.add_argument("--max-order", type=int, default=8)
    sa.add_argument("--mode", default="strict", choices=growth.MODES,
                    help="analyse the table in this mode (converted if needed)")
    ss = s.add_parser("asymptotics", help="growth base, exponent fit and band check",
                      epilog=EPILOG_SERIES)
    ss.add_argument("--input", required=True)
    ss.add_argument("--base", default="exact", help="'exact' (from the ball series) or a float")
    ss.add_argument("--range", default=None, help="lo:hi, inclusive")

    f = sub.add_parser("fsa", help="automata").add_subparsers(dest="action", required=True,
                                                              parser_class=_Parser)
    fb = f.add_parser("build", help="build and export an automaton", epilog=EPILOG_FSA)
    fb.add_argument("--which", required=True,
                    choices=("bcd", "lex", "S", "delta", "geodesic", "conj-geodesic"))
    fb.add_argument("--group", required=True, type=_model)
    fb.add_argument("--K", type=int, default=bcd.DEFAULT_K)
    fb.add_argument("--out", default="dot", choices=("dot", "json"))
    fb.add_argument("--max-states", type=int, default=100_000)

    d = sub.add_parser("delta", help="the Delta map").add_subparsers(dest="action", required=True,
                                                                   parser_class=_Parser)
    da = d.add_parser("apply", help="apply Delta to a conjugacy geodesic", epilog=EPILOG_DELTA)
    da.add_argument("--group", required=True, type=_model)
    da.add_argument("--K", type=int, default=bcd.DEFAULT_K)
    da.add_argument("--word", required=True)
    return p


def _emit(text: str, output: str | None = None):
    if output:
        Path(output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def cmd_growth_count(args) -> int:
    engine = ENGINE_ALIASES[args.engine]
    model = args.group
    cache = SeriesCache.from_env(args.cache_dir)
    table = cache.get(model.descriptor, args.kind, args.mode, engine, args.max_n) if cache else None
    if table is None:
        table = growth.count_growth(model, args.kind, args.max_n, engine, args.mode,
                                    workers=args.workers, enum_cap=args.enum_cap)
        if table.mode == "cumulative":
            try:
                growth.convert_mode(table)
            except NegativeDifference as exc:
                raise InvariantViolation(str(exc)) from exc
        if cache:
            cache.put(table)
    _emit(table_to_csv(table) if args.format == "csv" else table_to_json(table), args.output)
    return 0


def _load_table(path: str):
    return table_from_json(Path(path).read_text())


def cmd_series_analyze(args) -> int:
    t = _load_table(args.input)
    t = t.strict() if args.mode == "strict" else t.cumulative()
    if args.test == "recurrence":
        rep = series.find_recurrence(t.coeffs, args.max_order)
        out = {"schema": 1, "group": t.group, "kind": t.kind, "mode": t.mode, "test": "recurrence",
               "report": rep.to_dict()}
    else:
        rate = series.growth_rate(t.coeffs, args.max_order)
        out = {"schema": 1, "group": t.group, "kind": t.kind, "mode": t.mode, "test": "rate",
               "rate": str(rate) if isinstance(rate, Fraction) else series._fmt(rate),
               "exact": isinstance(rate, Fraction)}
    _emit(json.dumps(out, sort_keys=True))
    return 0


def cmd_series_asymptotics(args) -> int:
    t = _load_table(args.input)
    if args.base == "exact":
        model = parse_model(t.group)
        base = series.growth_rate(growth.ball_counts(model, 30))
    else:
        base = float(args.base)
    strict = t.strict()
    if args.range:
        lo, hi = (int(x) for x in args.range.split(":"))
    else:
        lo, hi = max(1, t.n_max // 2), t.n_max
    fit = series.exponent_fit(strict.coeffs, base, (lo, hi))
    band = series.band_check(t.cumulative(), base, range(lo, hi + 1))
    out = {"schema": 1, "group": t.group, "kind": t.kind,
           "base": str(base) if isinstance(base, Fraction) else series._fmt(base),
           "fit": fit.to_dict(), "band": band.to_dict()}
    _emit(json.dumps(out, sort_keys=True))
    return 0


def _symbol_label(tokens):
    def label(s):
        if isinstance(s, tuple):
            return "(" + ",".join(tokens[x] for x in s) + ")"
        return tokens[s]
    return label


def cmd_fsa_build(args) -> int:
    model = args.group
    which = args.which
    if which in ("geodesic", "conj-geodesic"):
        dfa = model.geodesic_dfa() if which == "geodesic" else model.conj_geodesic_dfa()
        tokens = model.alphabet.tokens
    else:
        cfg = bcd.BcdConfig(model, args.K)
        tokens = cfg.padded.tokens
        if which == "bcd":
            dfa = bcd.build_bcd_automaton(cfg)
        elif which == "lex":
            dfa = bcd.build_lex_automaton(cfg.padded)
        elif which == "S":
            dfa = bcd.build_S(cfg)
        else:
            dfa = bcd.build_delta(cfg, materialize=True, max_states=args.max_states).m2
    if args.out == "dot":
        _emit(dfa.to_dot(_symbol_label(tokens), name=which.replace("-", "_")).rstrip("\n"))
    else:
        _emit(dfa.to_json())
    return 0


def cmd_delta_apply(args) -> int:
    model = args.group
    word = model.alphabet.parse(args.word)
    cfg = bcd.BcdConfig(model, args.K)
    dm = bcd.build_delta(cfg)
    out, partner, g = bcd.delta_apply(dm, word)
    fmt = model.alphabet.format
    _emit(f"{fmt(out)}\npartner {cfg.padded.format(partner)}\nconjugator {fmt(g)}")
    return 0


COMMANDS = {
    ("growth", "count"): cmd_growth_count,
    ("series", "analyze"): cmd_series_analyze,
    ("series", "asymptotics"): cmd_series_asymptotics,
    ("fsa", "build"): cmd_fsa_build,
    ("delta", "apply"): cmd_delta_apply,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[(args.command, args.action)](args)
    except ResourceCap as exc:
        print(f"cglab: resource cap: {exc}", file=sys.stderr)
        return 3
    except InvariantViolation as exc:
        print(f"cglab: internal invariant violated: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"cglab: {exc}", file=sys.stderr)
        return 2
    except (CglabError, OSError) as exc:
        print(f"cglab: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
