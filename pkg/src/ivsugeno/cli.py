"""Command-line interface: ``ivsugeno {aggregate,check,fuse,network}``.

Exit codes: 0 success, 2 configuration or well-definedness error, 3 data
error, 4 an expected property was not observed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .config import RunConfig, build_functional, load_config, parse_order, preset_values
from .errors import ConfigError, DataError, IntervalError, IvSugenoError, WDSViolation
from .functional import MivF
from .fusion import build_interval_logits, evaluate, fuse_and_decide, load_score_table, make_partitions, \
    write_decisions_csv
from .intervals import format_float, format_interval, parse_interval_vector
from .miv import miv_property_suite
from .network import (centralities, cooccurrence_graph, iv_affinity_matrix, affinity_matrix, load_edges_csv,
                      load_tokens)
from .properties import property_suite

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_PROPERTY = 4

log = logging.getLogger("ivsugeno")


def _fmt(v):
    """JSON-ready value with floats at 12 significant digits."""
    if isinstance(v, float):
        return float(format_float(v))
    if isinstance(v, dict):
        return {k: _fmt(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_fmt(x) for x in v]
    return v


def _dump(obj) -> str:
    return json.dumps(_fmt(obj), indent=2, sort_keys=True)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat key=value configuration file")
    p.add_argument("--preset", help="iv-sugeno1 | iv-sugeno2 | iv-sugeno3 | sna")
    p.add_argument("--order", help="xy | lex1 | lex2 | alpha-plus:A | alpha-minus:A | alpha-beta:A,B")
    p.add_argument("--measure", help="cardinality | power:P | table:FILE")
    p.add_argument("--f", dest="f", help="F preset (meet, sugeno1, sugeno2, sna, miv:(i) .. miv:(v))")
    p.add_argument("--g", dest="g", help="G preset (max, max-square, max-sqrt, proj1, mean, capped-sum)")
    p.add_argument("--n", type=int, help="arity for family measures")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, help="worker threads (output does not depend on it)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--acknowledge-non-wds", action="store_true", default=None,
                   help="evaluate triples failing the well-definedness check")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ivsugeno", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("aggregate", help="evaluate the functional on one interval vector")
    _common(p)
    p.add_argument("intervals", nargs="*", help='intervals such as "[0.1,0.2]"; read from --input or stdin if absent')
    p.add_argument("--input", type=Path, help="file with one vector per line")
    p.add_argument("--trace", action="store_true", help="also print sigma, measure values and F-terms")

    p = sub.add_parser("check", help="property report for the configured functional")
    _common(p)
    p.add_argument("--samples", type=int)

    p = sub.add_parser("fuse", help="interval-valued ensemble score fusion")
    _common(p)
    p.add_argument("--scores", type=Path, required=True)
    p.add_argument("--labels", type=Path, required=True)
    p.add_argument("--partitions", type=int)
    p.add_argument("--test-fraction", type=float)
    p.add_argument("--rescale", action="store_true", default=None, help="min-max rescale scores per trial")
    p.add_argument("--decisions", type=Path, help="write per-trial decisions CSV here")
    p.add_argument("--report", type=Path, help="write the JSON report here")

    p = sub.add_parser("network", help="IV-affinity centralities")
    _common(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--edges", type=Path, help="CSV with columns src,dst,weight")
    src.add_argument("--tokens", type=Path, help="pre-tokenized text, whitespace separated")
    p.add_argument("--window", type=int)
    p.add_argument("--affinity", choices=("bf", "bcf"))
    p.add_argument("--dump-edges", action="store_true", help="print the weighted edge list first")
    p.add_argument("--out", type=Path, help="write the centralities CSV here")
    return parser


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    over = {k: getattr(args, k, None) for k in
            ("order", "measure", "f", "g", "n", "seed", "workers", "acknowledge_non_wds", "samples",
             "partitions", "test_fraction", "rescale", "affinity", "window")}
    if args.preset:
        over.update(preset_values(args.preset))
    cfg = cfg.with_overrides(**over)
    if cfg.workers < 1:
        raise ConfigError("workers must be at least 1")
    return cfg


# -- subcommands -------------------------------------------------------------


def _read_vectors(args) -> list[str]:
    if args.intervals:
        return [" ".join(args.intervals)]
    text = args.input.read_text() if args.input else sys.stdin.read()
    return [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]


def cmd_aggregate(args, cfg: RunConfig, out) -> int:
    lines = _read_vectors(args)
    if not lines:
        raise DataError("no input intervals")
    vectors = [parse_interval_vector(line) for line in lines]
    fg = build_functional(cfg, n=len(vectors[0]))
    with ThreadPoolExecutor(cfg.workers) as pool:
        results = list(pool.map(fg.trace if args.trace else fg, vectors))
    if args.json:
        rows = []
        for vec, r in zip(vectors, results):
            row = {"input": [format_interval(v) for v in vec]}
            if args.trace:
                row.update(result=format_interval(r["result"]), sigma=[i + 1 for i in r["sigma"]],
                           measure=[format_interval(v) for v in r["measure"]],
                           terms=[format_interval(v) for v in r["terms"]])
            else:
                row["result"] = format_interval(r)
            rows.append(row)
        out.write(_dump({"functional": fg.describe(), "non_wds": fg.non_wds, "results": rows}) + "\n")
        return 0
    for r in results:
        if args.trace:
            out.write(f"sigma = {' '.join(str(i + 1) for i in r['sigma'])}\n")
            out.write(f"measure = {' '.join(format_interval(v) for v in r['measure'])}\n")
            out.write(f"terms = {' '.join(format_interval(v) for v in r['terms'])}\n")
            out.write(f"result = {format_interval(r['result'])}\n")
        else:
            out.write(format_interval(r) + "\n")
    return 0


def cmd_check(args, cfg: RunConfig, out) -> int:
    n = cfg.n or (None if cfg.measure.startswith("table") else 4)
    fg = build_functional(cfg, n=n)
    rows = property_suite(fg, cfg.samples, cfg.seed)
    miv_rows = miv_property_suite(fg.F.spec, cfg.samples, cfg.seed) if isinstance(fg.F, MivF) else []
    failed = [r.name for r in rows if r.failed] + [f"miv {c.clause} {c.description}" for c in miv_rows
                                                   if not c.consistent and c.expected]
    if args.json:
        report = {
            "functional": fg.describe(),
            "wds": fg.wds.describe(),
            "properties": [
                {"name": r.name, "expected": r.expected, "observed": r.observed,
                 "counterexample": r.counterexample, "justification": r.justification}
                for r in rows
            ],
            "failed": failed,
        }
        if miv_rows:
            report["miv_clauses"] = [
                {"clause": c.clause, "description": c.description, "expected": c.expected,
                 "observed": c.observed, "counterexample": c.counterexample}
                for c in miv_rows
            ]
        out.write(_dump(report) + "\n")
    else:
        out.write(f"{fg.describe()}\n{fg.wds.describe()}\n\n")
        width = max(len(r.name) for r in rows)
        for r in rows:
            mark = "FAIL" if r.failed else "ok"
            out.write(f"{r.name:<{width}}  {r.status():<28}  {mark}\n")
            if r.counterexample and (r.failed or not r.observed):
                out.write(f"{'':<{width}}  counterexample: {r.counterexample}\n")
        for c in miv_rows:
            exp = "expected" if c.expected else "not expected"
            obs = "observed" if c.observed else "not observed"
            out.write(f"miv {c.clause} {c.description}: {exp}, {obs}\n")
    return EXIT_PROPERTY if failed else 0


def cmd_fuse(args, cfg: RunConfig, out) -> int:
    table = load_score_table(args.scores, args.labels)
    logits = build_interval_logits(table, rescale=cfg.rescale)
    fg = build_functional(cfg, n=len(logits.bands))
    decisions = fuse_and_decide(logits, fg, parse_order(cfg.order), workers=cfg.workers)
    parts = make_partitions(logits.trials, cfg.partitions, cfg.test_fraction, cfg.seed)
    report = evaluate(decisions, table.labels, parts, logits.classes)
    payload = {"functional": fg.describe(), "trials": len(logits.trials), "bands": list(logits.bands),
               "classes": list(logits.classes), "seed": cfg.seed, **report.to_dict()}
    if args.decisions:
        write_decisions_csv(decisions, logits.classes, args.decisions)
    if args.report:
        args.report.write_text(_dump(payload) + "\n")
    if args.json:
        out.write(_dump(payload) + "\n")
    else:
        out.write(f"{fg.describe()}\n")
        out.write(f"accuracy = {format_float(report.accuracy)} +- {format_float(report.accuracy_std)}\n")
        out.write(f"f1 = {format_float(report.f1)} +- {format_float(report.f1_std)}\n")
    return 0


def cmd_network(args, cfg: RunConfig, out) -> int:
    if args.edges:
        g = load_edges_csv(args.edges)
    else:
        g = cooccurrence_graph(load_tokens(args.tokens), cfg.window)
    order = parse_order(cfg.order)

    if cfg.measure.startswith("table"):
        raise ConfigError("network centralities need a family measure (cardinality or power)")
    net_cfg = cfg.with_overrides(f=cfg.f or "sna", g=cfg.g or "capped-sum")
    cache = {}

    def make(k):
        if k not in cache:
            cache[k] = build_functional(net_cfg, n=k)
        return cache[k]
    report = centralities(g, cfg.affinity, make, workers=cfg.workers)

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["actor", "asymmetry", "altruism", "egoism", "generosity"])
    for r in report.rows:
        w.writerow([r.actor, *(format_float(v) for v in (r.asymmetry, r.altruism, r.egoism, r.generosity))])
    table = buf.getvalue()
    if args.out:
        args.out.write_text(table)

    if args.json:
        ivm = iv_affinity_matrix(affinity_matrix(g, cfg.affinity))
        payload = {
            "affinity": cfg.affinity,
            "order": order.describe(),
            "edges": [[x, y, wt] for x, y, wt in g.edges()] if args.dump_edges else None,
            "actors": [
                {"actor": r.actor, "asymmetry": r.asymmetry, "altruism": r.altruism, "egoism": r.egoism,
                 "generosity": r.generosity,
                 "iv_affinity": {y: format_interval(v) for y, v in sorted(ivm.get(r.actor, {}).items())}}
                for r in report.rows
            ],
        }
        if payload["edges"] is None:
            del payload["edges"]
        out.write(_dump(payload) + "\n")
        return 0
    if args.dump_edges:
        out.write("src,dst,weight\n")
        for x, y, wt in g.edges():
            out.write(f"{x},{y},{format_float(wt)}\n")
        out.write("\n")
    out.write(table)
    return 0


COMMANDS = {"aggregate": cmd_aggregate, "check": cmd_check, "fuse": cmd_fuse, "network": cmd_network}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg, out)
    except WDSViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, IntervalError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except IvSugenoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
