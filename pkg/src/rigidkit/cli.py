"""Command-line entry point: ``rigidkit <subcommand> ...``.

Exit codes: 0 success or rigid, 1 negative verdict, 2 usage or I/O error,
3 hypothesis violated.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiments as ex
from .connector import ConnectorConfig, ConnectorError, connector_certify
from .graph import EdgeListError, Partition, read_edgelist
from .partitions import (
    HYPOTHESIS_VIOLATED,
    GeneralizedPartitionSpec,
    certify_double_partition,
    certify_generalized_partition,
    certify_strong_partition,
)
from .randgraph import RngSpec, random_equipartition
from .rigidity import is_d_rigid
from .svgplot import line_chart

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_HYPOTHESIS = 0, 1, 2, 3


def _floats(v) -> list[float]:
    if isinstance(v, (list, tuple)):
        return [float(x) for x in v]
    return [float(x) for x in str(v).split(",") if x.strip()]


def _ints(v) -> list[int]:
    if isinstance(v, (list, tuple)):
        return [int(x) for x in v]
    return [int(x) for x in str(v).split(",") if x.strip()]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_csv(rows, out, comments=()):
    _emit(ex.format_csv(rows, comments), out)


def _header(args, name: str) -> list[str]:
    return [f"experiment={name} seed={args.seed} trials={args.trials}", ex.CONSTANTS_NOTE]


def cmd_check(args) -> int:
    G = read_edgelist(args.file)
    v = is_d_rigid(G, args.d, seed=args.seed, trials=args.trials)
    _emit(v.to_json() + "\n", args.out)
    return EXIT_OK if v.rigid else EXIT_NEGATIVE


def cmd_threshold(args) -> int:
    rows = ex.run_threshold(args.n, args.d, _floats(args.p_grid), args.trials, args.seed, args.threads)
    _emit_csv(rows, args.out, _header(args, "threshold"))
    return EXIT_OK


def cmd_giant(args) -> int:
    rows = ex.run_giant(args.n, args.p, args.m, args.k, args.eta, args.trials, args.seed, args.threads)
    _emit_csv(rows, args.out, _header(args, "giant"))
    return EXIT_OK


def cmd_regular(args) -> int:
    rows = ex.run_regular(args.n, args.r, args.d, args.trials, args.seed, args.threads)
    _emit_csv(rows, args.out, _header(args, "regular"))
    return EXIT_OK


def cmd_codegree(args) -> int:
    rows = ex.run_codegree(args.n, args.model, _ints(args.k_grid), args.trials, args.seed,
                           args.threads, m=args.m)
    _emit_csv(rows, args.out, _header(args, "codegree"))
    return EXIT_OK


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def cmd_certify_partition(args) -> int:
    G = read_edgelist(args.file)
    spec = _load_json(args.partition)
    P = Partition(spec["blocks"], G.n)
    kind = args.kind or spec.get("kind", "strong")
    if kind == "strong":
        v = certify_strong_partition(G, P, args.d, allow_self=not args.no_self, seed=args.seed, trials=args.trials)
    elif kind == "generalized":
        subs = {(s["i"], s["j"]): [tuple(e) for e in s["edges"]] for s in spec["subgraphs"]}
        g = GeneralizedPartitionSpec(G, P, tuple(spec["bounds"]), subs)
        v = certify_generalized_partition(g, args.d, seed=args.seed, trials=args.trials)
    elif kind == "double":
        forests = [[tuple(e) for e in f] for f in spec["forests"]]
        v = certify_double_partition(G, P, spec["subparts"], forests, args.d, seed=args.seed, trials=args.trials)
    else:
        raise ValueError(f"unknown partition kind {kind!r}")
    _emit(v.to_json(indent=1) + "\n", args.out)
    if v.accepted:
        return EXIT_OK
    return EXIT_HYPOTHESIS if v.failing_obligation == HYPOTHESIS_VIOLATED else EXIT_NEGATIVE


def cmd_connector(args) -> int:
    G = read_edgelist(args.file)
    if args.partition:
        P = Partition(_load_json(args.partition)["blocks"], G.n)
    elif args.m:
        P = random_equipartition(G.n, args.m, RngSpec(args.seed))
    else:
        raise ValueError("give --partition or --m")
    cfg = ConnectorConfig(args.k, args.eta, seed=args.seed)
    try:
        W, verdict, trace = connector_certify(G, P, cfg, trials=args.trials)
    except ConnectorError as exc:
        _emit(json.dumps({"accepted": False, "error": type(exc).__name__, "message": str(exc)}) + "\n", args.out)
        return EXIT_HYPOTHESIS
    out = {"verdict": verdict.to_dict(), "trace": trace.to_dict()}
    _emit(json.dumps(out, sort_keys=True, indent=1) + "\n", args.out)
    if verdict.accepted:
        return EXIT_OK
    return EXIT_HYPOTHESIS if verdict.failing_obligation == HYPOTHESIS_VIOLATED else EXIT_NEGATIVE


def cmd_plot(args) -> int:
    rows = ex.read_csv(Path(args.csv).read_text())
    svg = line_chart(rows, args.x, [c for c in str(args.y).split(",") if c], title=args.title or Path(args.csv).stem)
    _emit(svg, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed")
    common.add_argument("--trials", type=int, default=10)
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--config", default=None, help="JSON file whose keys mirror the flags")

    parser = argparse.ArgumentParser(prog="rigidkit", description="Generic rigidity toolkit", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide d-rigidity of an edge-list file")
    p.add_argument("file")
    p.add_argument("-d", type=int, required=True)
    p.set_defaults(func=cmd_check, trials=2)

    p = sub.add_parser("threshold", parents=[common], help="rigidity vs min degree on a p grid")
    p.add_argument("--n", type=int, default=150)
    p.add_argument("-d", type=int, default=2)
    p.add_argument("--p-grid", default="")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("giant", parents=[common], help="connector pipeline plus absorption on G(n,p)")
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--eta", type=float, default=1.0)
    p.set_defaults(func=cmd_giant)

    p = sub.add_parser("regular", parents=[common], help="rigidity of random regular graphs")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--r", type=int, default=20)
    p.add_argument("-d", type=int, default=2)
    p.set_defaults(func=cmd_regular)

    p = sub.add_parser("codegree", parents=[common], help="rigidity at codegree-derived dimensions")
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--model", choices=["cliques", "gnp", "partition"], default="cliques")
    p.add_argument("--k-grid", default="")
    p.add_argument("--m", type=int, default=None, help="block count for the partition model")
    p.set_defaults(func=cmd_codegree)

    p = sub.add_parser("certify-partition", parents=[common], help="check a partition certificate")
    p.add_argument("file")
    p.add_argument("partition", help="JSON with blocks (and subgraphs/subparts/forests)")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--kind", choices=["strong", "generalized", "double"], default=None)
    p.add_argument("--no-self", action="store_true", help="exclude j = i from the Q graphs")
    p.set_defaults(func=cmd_certify_partition, trials=2)

    p = sub.add_parser("connector", parents=[common], help="large rigid subgraph from a k-connector partition")
    p.add_argument("file")
    p.add_argument("--partition", default=None)
    p.add_argument("--m", type=int, default=None, help="use a random equipartition into m blocks")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--eta", type=float, default=1.0)
    p.set_defaults(func=cmd_connector, trials=2)

    p = sub.add_parser("plot", parents=[common], help="SVG line chart from a CSV")
    p.add_argument("csv")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True, help="comma-separated columns")
    p.add_argument("--title", default=None)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.config:
        try:
            cfg = {k.replace("-", "_"): v for k, v in _load_json(args.config).items()}
        except (OSError, ValueError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return EXIT_USAGE
        for sp in parser._subparsers._group_actions[0].choices.values():
            sp.set_defaults(**cfg)
        args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EdgeListError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
