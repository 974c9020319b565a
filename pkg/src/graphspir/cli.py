"""Command line front end.

Subcommands:
  tables    print a pinned, human-readable instance of a showcase scheme
  convert   run the masking conversion on a base scheme and report its
            parameters (optionally the full answer structure)
  audit     machine-check a bundled scheme and print the certificate report
  bounds    print rate bounds for path/cycle graphs over a range of sizes

Exit codes: 0 on success, 1 when an audit finds a violated property,
2 on bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import List, Optional

from . import tables as tables_mod
from .audit import DEFAULT_LIMIT, DEFAULT_SAMPLES, audit_family
from .capacity import bound_set
from .catalog import family_names, get_family
from .convert import conversion_params, convert_pir_to_spir, scheme_stats
from .schemes import cycle3_pir_family, path_pir_family


@dataclass
class RunConfig:
    """Parameters of one audit run."""

    scheme: str
    q: int = 2
    limit: int = DEFAULT_LIMIT
    mode: str = "exhaustive"
    samples: int = DEFAULT_SAMPLES
    seed: int = 0


def _emit(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text + "\n")
    else:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


def _cmd_tables(args: argparse.Namespace) -> int:
    if args.format == "table":
        text = tables_mod.golden_table(args.which)
    else:
        instances = [
            tables_mod.instance_to_json(tables_mod.golden_instance(args.which, theta))
            for theta in tables_mod.RENDERED_THETAS[args.which]
        ]
        text = json.dumps({"scheme": args.which, "instances": instances}, indent=2)
    _emit(text, args.output)
    return 0


def _cmd_convert(args: argparse.Namespace) -> int:
    if args.graph == "cycle" and args.n != 3:
        print("cycle conversion is only built in for 3 servers", file=sys.stderr)
        return 2
    if args.graph == "path":
        base = path_pir_family(args.n, q=args.q)
    else:
        base = cycle3_pir_family(q=args.q)
    converted = convert_pir_to_spir(base)
    params = conversion_params(
        base.base_symbols, base.graph.n_servers, base.message_count
    )
    stats = scheme_stats(converted)
    lines = [
        f"L'={base.base_symbols}",
        f"D'={base.base_download}",
        f"x={params.x}",
        f"y={params.y}",
        f"L={params.L}",
        f"D={stats.download}",
        f"rate={stats.rate}",
        f"rho={stats.rho}",
    ]
    text = "\n".join(lines)
    if args.full:
        space = converted.space()
        instance = converted.instance(
            args.theta, space.with_choices((1,) * len(space.choice_radices))
        )
        if args.format == "json":
            text += "\n" + json.dumps(tables_mod.instance_to_json(instance), indent=2)
        else:
            per_rep = base.base_download // base.graph.n_servers
            block = tables_mod.converted_block(
                instance,
                header_label=f"theta={args.theta}",
                raw_label="",
                pool_size=params.y,
                repetitions=params.x,
                packing=[[k] for k in range(per_rep)],
            )
            text += "\n" + "\n".join(block)
    _emit(text, None)
    return 0


def _cmd_audit(args: argparse.Namespace) -> int:
    config = RunConfig(
        scheme=args.scheme,
        q=args.q,
        limit=args.limit,
        mode=args.mode,
        samples=args.samples,
        seed=args.seed,
    )
    family = get_family(config.scheme, q=config.q)
    report = audit_family(
        family,
        limit=config.limit,
        seed=config.seed,
        samples=config.samples,
        force_sample=config.mode == "sample",
    )
    if args.format == "json":
        text = report.to_json_str()
    else:
        lines = [f"scheme: {report.scheme}"]
        for check in report.checks:
            lines.append(f"{check.name:<44} {check.status}")
        lines.append(f"{'overall':<44} {'pass' if report.ok else 'fail'}")
        text = "\n".join(lines)
    _emit(text, args.output)
    return 0 if report.ok else 1


def _parse_range(text: str) -> List[int]:
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _cmd_bounds(args: argparse.Namespace) -> int:
    try:
        sizes = _parse_range(args.n)
    except ValueError as exc:
        print(f"bad --n value: {exc}", file=sys.stderr)
        return 2
    kinds = ["path", "cycle"] if args.kind == "both" else [args.kind]
    try:
        rows = [bound_set(kind, n) for kind in kinds for n in sizes]
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    fields = ("kind", "N", "graph_replicated", "lower", "upper", "pir")
    if args.format == "csv":
        lines = [",".join(fields)]
        for b in rows:
            lines.append(
                ",".join(
                    [
                        b.kind,
                        str(b.n_servers),
                        str(b.graph_replicated),
                        str(b.lower),
                        str(b.upper),
                        str(b.pir),
                    ]
                )
            )
        text = "\n".join(lines)
    elif args.format == "json":
        text = json.dumps(
            [
                {
                    "kind": b.kind,
                    "N": b.n_servers,
                    "graph_replicated": str(b.graph_replicated),
                    "lower": str(b.lower),
                    "upper": str(b.upper),
                    "pir": str(b.pir),
                }
                for b in rows
            ],
            indent=2,
        )
    else:
        widths = (6, 3, 16, 12, 12, 12)
        header = " ".join(f"{name:>{w}}" for name, w in zip(fields, widths))
        lines = [header]
        for b in rows:
            cells = (
                b.kind,
                str(b.n_servers),
                str(b.graph_replicated),
                str(b.lower),
                str(b.upper),
                str(b.pir),
            )
            lines.append(" ".join(f"{cell:>{w}}" for cell, w in zip(cells, widths)))
        text = "\n".join(lines)
    _emit(text, None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphspir",
        description="Verified private retrieval schemes on graph-stored databases.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_tables = sub.add_parser("tables", help="print a pinned scheme instance")
    p_tables.add_argument(
        "--which", choices=tables_mod.GOLDEN_NAMES, default="p3-example"
    )
    p_tables.add_argument("--format", choices=("table", "json"), default="table")
    p_tables.add_argument("--output", default=None, help="write to a file")
    p_tables.set_defaults(func=_cmd_tables)

    p_convert = sub.add_parser("convert", help="run the masking conversion")
    p_convert.add_argument("--graph", choices=("path", "cycle"), required=True)
    p_convert.add_argument("--n", type=int, choices=range(3, 9), required=True)
    p_convert.add_argument("--q", type=int, default=2)
    p_convert.add_argument(
        "--full", action="store_true", help="also print the converted answers"
    )
    p_convert.add_argument("--theta", type=int, default=1)
    p_convert.add_argument("--format", choices=("table", "json"), default="table")
    p_convert.set_defaults(func=_cmd_convert)

    p_audit = sub.add_parser("audit", help="machine-check a bundled scheme")
    p_audit.add_argument("--scheme", choices=family_names(), required=True)
    p_audit.add_argument("--q", type=int, default=2)
    p_audit.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p_audit.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    p_audit.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p_audit.add_argument("--seed", type=int, default=0)
    p_audit.add_argument("--format", choices=("json", "table"), default="json")
    p_audit.add_argument("--output", default=None)
    p_audit.set_defaults(func=_cmd_audit)

    p_bounds = sub.add_parser("bounds", help="print rate bounds")
    p_bounds.add_argument("--kind", choices=("path", "cycle", "both"), default="both")
    p_bounds.add_argument("--n", default="3..8", help="server count or range a..b")
    p_bounds.add_argument(
        "--format", choices=("csv", "json", "table"), default="table"
    )
    p_bounds.set_defaults(func=_cmd_bounds)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
