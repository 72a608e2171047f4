"""Command line front end.

Verbs: report (JSON invariants for one algebra), verify-corpus (recompute the
bundled examples against their frozen values), search (CSV sweep over random
algebras), fmt (canonical form of a .quiv file).

Exit codes: 0 success, 2 bad input, 3 failed verification, 64 usage error.
Environment: SERIALDELL_PRIME and SERIALDELL_DELL_BUDGET supply defaults,
flags win over both.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

from . import invariants as IV
from .completions import completion_graph, pd_simple
from .corpus import CORPUS_NAMES, CorpusError, load_algebra, verify_corpus
from .generator import SHAPES, GeneratorConfig, random_algebra
from .gf import DEFAULT_PRIME
from .quiver import MonomialAlgebra, QuiverError, parse_algebra, serialize_algebra

USAGE_ERROR = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


class _InputError(Exception):
    pass


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise _InputError(f"environment variable {name} is not an integer: {raw!r}")


def _load(spec: str, prime: int) -> MonomialAlgebra:
    if spec in CORPUS_NAMES:
        alg = load_algebra(spec)
        if prime != alg.prime:
            return parse_algebra(serialize_algebra(alg), name=spec, prime=prime)
        return alg
    if os.path.exists(spec):
        try:
            with open(spec) as fh:
                return parse_algebra(fh.read(), name=os.path.basename(spec), prime=prime)
        except QuiverError as e:
            raise _InputError(f"cannot parse {spec}: {e}")
    raise _InputError(
        f"no such algebra: {spec!r} (expected a corpus name {CORPUS_NAMES} or a file path)"
    )


def _fmt_value(v) -> object:
    return "inf" if isinstance(v, float) and math.isinf(v) else int(v)


def _iv(value: IV.InvariantValue) -> dict:
    return {
        "value": _fmt_value(value.value),
        "status": value.status,
        "route": value.route,
        "certificate": value.certificate,
    }


def _report(alg: MonomialAlgebra, budget: int, seed: int) -> dict:
    g = completion_graph(alg)
    dell_val, dell_per = IV.dell_algebra(alg, budget, seed)
    dd_val, dd_per = IV.ddell_algebra(alg, budget, None, seed)
    sd_val, sd_per = IV.subddell_algebra(alg, budget, None, seed)
    fin = IV.findim_serial_full(alg, budget, seed)
    cls = alg.classify()
    simples = {}
    for v in alg.vertices:
        simples[v] = {
            "pd": _fmt_value(pd_simple(alg, v)),
            "dell": _fmt_value(dell_per[v].value),
            "dell_status": dell_per[v].status,
            "ddell": _iv(dd_per[v]),
            "subddell": _iv(sd_per[v]),
            "orbit": dell_per[v].trace().splitlines(),
        }
    return {
        "algebra": alg.name,
        "prime": alg.prime,
        "seed": seed,
        "budget": budget,
        "dimension": alg.dim(),
        "vertices": len(alg.vertices),
        "arrows": len(alg.arrows),
        "relations": len(alg.relations),
        "classification": {
            "right_serial": cls.right_serial,
            "left_serial": cls.left_serial,
            "nakayama": cls.nakayama,
        },
        "graph": {
            "nodes": sorted(" ".join(n) for n in g.nodes),
            "certified": sorted(" ".join(n) for n in g.certified_nodes()),
        },
        "simples": simples,
        "algebra_invariants": {
            "dell": _iv(dell_val),
            "ddell": _iv(dd_val),
            "subddell": _iv(sd_val),
            "findim_serial": {
                "value": _fmt_value(fin.value),
                "status": fin.status,
                "route": fin.route,
                "certificate": fin.certificate,
            },
        },
    }


def _cmd_report(args) -> int:
    alg = _load(args.algebra, args.prime)
    if args.opposite:
        alg = alg.opposite()
    report = _report(alg, args.budget, args.seed)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(completion_graph(alg).to_dot())
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _cmd_verify_corpus(args) -> int:
    results = verify_corpus(budget=args.budget)
    failures = 0
    for r in results:
        mark = "ok" if r.ok else "FAIL"
        detail = f"  {r.detail}" if (r.detail and not r.ok) else ""
        print(f"{mark:4} {r.name}{detail}")
        failures += 0 if r.ok else 1
    print(f"{len(results)} checks, {failures} failures")
    return 0 if failures == 0 else 3


def _cmd_search(args) -> int:
    cfg = GeneratorConfig(
        shape=args.shape,
        vertices=(args.vertices[0], args.vertices[1]),
        arrows=(args.arrows[0], args.arrows[1]),
        max_dim=args.max_dim,
        prime=args.prime,
    )
    out = open(args.out, "w", newline="") if args.out != "-" else sys.stdout
    writer = csv.writer(out)
    writer.writerow(
        [
            "seed", "vertices", "arrows", "relations", "shape",
            "dell_op", "route", "findim", "gap", "runtime_ms",
        ]
    )
    try:
        for seed in range(args.start_seed, args.start_seed + args.count):
            t0 = time.perf_counter()
            alg = random_algebra(seed, cfg)
            dop, _ = IV.dell_algebra(alg.opposite(), args.budget, args.seed)
            fin = IV.findim_serial_full(alg, args.budget, args.seed)
            ms = int((time.perf_counter() - t0) * 1000)
            gap = ""
            if fin.status == "exact" and dop.exact():
                gap = int(fin.value - dop.value)
            writer.writerow(
                [
                    seed, len(alg.vertices), len(alg.arrows), len(alg.relations),
                    cfg.shape, _fmt_value(dop.value), fin.route,
                    _fmt_value(fin.value), gap, ms,
                ]
            )
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_fmt(args) -> int:
    try:
        with open(args.file) as fh:
            text = fh.read()
    except OSError as e:
        raise _InputError(str(e))
    try:
        alg = parse_algebra(text, name=os.path.basename(args.file))
    except QuiverError as e:
        raise _InputError(f"cannot parse {args.file}: {e}")
    canonical = serialize_algebra(alg)
    if args.in_place:
        with open(args.file, "w") as fh:
            fh.write(canonical)
    else:
        sys.stdout.write(canonical)
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="serialdell", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    default_prime = _env_int("SERIALDELL_PRIME", DEFAULT_PRIME)
    default_budget = _env_int("SERIALDELL_DELL_BUDGET", 10)

    rep = sub.add_parser("report", help="JSON invariant report for one algebra")
    rep.add_argument("algebra", help="corpus name or .quiv file path")
    rep.add_argument("--budget", type=int, default=default_budget)
    rep.add_argument("--prime", type=int, default=default_prime)
    rep.add_argument("--seed", type=int, default=0)
    rep.add_argument("--opposite", action="store_true", help="report on the opposite algebra")
    rep.add_argument("--dot", metavar="FILE", help="also write the completion graph in DOT form")
    rep.set_defaults(func=_cmd_report)

    ver = sub.add_parser("verify-corpus", help="recompute the bundled examples")
    ver.add_argument("--budget", type=int, default=default_budget)
    ver.set_defaults(func=_cmd_verify_corpus)

    sea = sub.add_parser("search", help="CSV sweep over random algebras")
    sea.add_argument("--shape", choices=SHAPES, default="right-serial")
    sea.add_argument("--count", type=int, default=20)
    sea.add_argument("--start-seed", type=int, default=0)
    sea.add_argument("--vertices", type=int, nargs=2, default=[2, 5], metavar=("LO", "HI"))
    sea.add_argument("--arrows", type=int, nargs=2, default=[2, 6], metavar=("LO", "HI"))
    sea.add_argument("--max-dim", type=int, default=30)
    sea.add_argument("--budget", type=int, default=default_budget)
    sea.add_argument("--prime", type=int, default=default_prime)
    sea.add_argument("--seed", type=int, default=0, help="registry seed, not the generator seed")
    sea.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    sea.set_defaults(func=_cmd_search)

    fmt = sub.add_parser("fmt", help="rewrite a .quiv file in canonical form")
    fmt.add_argument("file")
    fmt.add_argument("--in-place", action="store_true")
    fmt.set_defaults(func=_cmd_fmt)
    return parser


def main(argv=None) -> int:
    try:
        parser = _build_parser()
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"serialdell: error: {e}", file=sys.stderr)
        return USAGE_ERROR
    except _InputError as e:
        print(f"serialdell: {e}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except _InputError as e:
        print(f"serialdell: {e}", file=sys.stderr)
        return 2
    except (QuiverError, CorpusError) as e:
        print(f"serialdell: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
