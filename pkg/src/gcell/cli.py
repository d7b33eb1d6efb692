"""Command-line interface: certificates, enumerations and DOT emission.

Exit codes: 0 when the operation succeeded and every check passed, 1 when a
check failed or a counterexample was found, 2 on usage errors.  Reports go
to stdout (one header line naming the truncation, then one line per check);
diagnostics go to stderr.  ``--json`` renders the same facts as one object.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .constructions import BUILTIN_NAMES, builtin_system
from .dsl import system_from_dsl
from .errors import (
    DomainError,
    GcellError,
    ParameterError,
    RangeError,
    UsageError,
)
from .nonregular import d_trajectory, nonregular_system, nonregularity_witness
from .quotient import compare_quotients, quotient_at_depth
from .report import Report
from .system import Truncation, check_axioms
from .threads import (
    enumerate_threads,
    gcell_certificate,
    transitivity_counterexample,
)
from .vertices import vertex_name

DEFAULT_DEPTH = 4
DEFAULT_BREADTH = 24


def _load_system(spec: str):
    if spec in BUILTIN_NAMES or spec.startswith("wedge:"):
        return builtin_system(spec)
    path = Path(spec)
    if path.exists():
        return system_from_dsl(path.read_text())
    raise UsageError(f"unknown system {spec!r}: not a builtin and not a file")


def _emit(report: Report, as_json: bool) -> int:
    print(report.render_json() if as_json else report.render_text())
    return 0 if report.passed else 1


def _add_common(parser, *, system_default=None):
    if system_default is None:
        parser.add_argument("--system", required=True,
                            help="builtin name, wedge:<a>,<b>, or a DSL file path")
    else:
        parser.add_argument("--system", default=system_default)
    parser.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    parser.add_argument("--breadth", type=int, default=DEFAULT_BREADTH)
    parser.add_argument("--json", action="store_true")
    parser.add_argument("--seed", type=int, default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gcell",
        description="Construct, truncate and certify generalized cell structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="inverse-sequence axioms over a truncation")
    _add_common(p)
    p.add_argument("--surjectivity", action="store_true",
                   help="also require every truncated vertex to have a preimage")

    p = sub.add_parser("gcell", help="collapse certificates for every enumerated prefix")
    _add_common(p)

    p = sub.add_parser("counterexample", help="search for a transitivity failure")
    _add_common(p)

    p = sub.add_parser("threads", help="enumerate consistent prefixes")
    _add_common(p)

    p = sub.add_parser("quotient", help="closure classes of enumerated prefixes")
    _add_common(p)

    p = sub.add_parser("compare-quotients",
                       help="inverse limit vs limit of level quotients")
    _add_common(p)

    p = sub.add_parser("witness", help="non-regularity witness facts")
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--i", type=int, default=5)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("trajectory", help="upward d-trajectory to its c-block")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-steps", type=int, default=100)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("dot", help="emit one truncated level as a DOT graph")
    _add_common(p)
    p.add_argument("--level", type=int, default=1)

    return parser


def emit_dot(system, level: int, trunc: Truncation) -> str:
    """Deterministic undirected DOT text for one truncated level."""
    graph = system.level(level, trunc)
    vertices = graph.vertices
    vert_set = set(vertices)
    lines = [f'graph "{system.name} level {level}" {{']
    for v in vertices:
        lines.append(f'  "{vertex_name(v)}";')
    edges = set()
    for v in vertices:
        for u in graph.relation.ball(v).enumerate(trunc.bound(level)):
            if u in vert_set and u != v:
                edges.add(tuple(sorted((v, u), key=lambda w: w.sort_key)))
    for v, u in sorted(edges, key=lambda e: (e[0].sort_key, e[1].sort_key)):
        lines.append(f'  "{vertex_name(v)}" -- "{vertex_name(u)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _cmd_check(args):
    system = _load_system(args.system)
    trunc = Truncation(args.depth, args.breadth)
    report = check_axioms(system, trunc,
                          include_surjectivity=args.surjectivity, seed=args.seed)
    return _emit(report, args.json)


def _cmd_gcell(args):
    system = _load_system(args.system)
    # Certificates for level i usually live at some j > i, so the prefixes
    # are extended well past the requested depth before searching.
    horizon = 2 * args.depth + 2
    if system.max_depth is not None:
        horizon = min(horizon, system.max_depth)
    trunc = Truncation(horizon, args.breadth)
    threads = enumerate_threads(system, horizon, trunc)
    report = Report(system.name, trunc.describe())
    for p in threads:
        found = {}
        for i in range(1, args.depth + 1):
            found[i] = gcell_certificate(system, p, i)
        missing = [i for i, j in found.items() if j is None]
        detail = " ".join(f"{i}->{j}" for i, j in found.items() if j is not None)
        if missing:
            detail += f" no certificate within depth {horizon} for levels {missing}"
        report.add(f"collapse certificates for {p}", not missing, detail.strip())
    if not threads:
        report.add("no prefixes to certify", True, "")
    return _emit(report, args.json)


def _cmd_counterexample(args):
    system = _load_system(args.system)
    trunc = Truncation(args.depth + 1, args.breadth)
    triple = transitivity_counterexample(system, args.depth, trunc)
    report = Report(system.name, trunc.describe())
    if triple is None:
        report.add("transitivity on enumerated prefixes", True,
                   f"no counterexample at depth {args.depth}")
    else:
        x, y, z = triple
        report.add("transitivity on enumerated prefixes", False,
                   f"x={x} y={y} z={z}: x~y and y~z but not x~z")
    return _emit(report, args.json)


def _cmd_threads(args):
    system = _load_system(args.system)
    trunc = Truncation(args.depth + 1, args.breadth)
    threads = enumerate_threads(system, args.depth, trunc)
    report = Report(system.name, trunc.describe())
    report.add(f"enumerate depth-{args.depth} prefixes", True,
               f"{len(threads)} alive to depth {trunc.depth}")
    for idx, p in enumerate(threads):
        report.add(f"thread[{idx}]", True, str(p))
    return _emit(report, args.json)


def _cmd_quotient(args):
    system = _load_system(args.system)
    trunc = Truncation(args.depth + 1, args.breadth)
    partition = quotient_at_depth(system, args.depth, trunc)
    report = Report(system.name, trunc.describe())
    report.add(f"closure classes at depth {args.depth}", True,
               f"{len(partition.blocks)} blocks, "
               f"{len(partition.nontrivial_blocks)} non-singleton")
    for idx, block in enumerate(partition.blocks):
        members = ", ".join(str(p) for p in block)
        report.add(f"block[{idx}]", True, members)
    return _emit(report, args.json)


def _cmd_compare(args):
    system = _load_system(args.system)
    trunc = Truncation(args.depth + 1, args.breadth)
    result = compare_quotients(system, args.depth, trunc)
    report = Report(system.name, trunc.describe())
    report.add("gstar_classes", True, str(result.gstar_classes))
    report.add("levelq_threads", True, str(result.levelq_threads))
    report.add("witness", True, result.witness)
    return _emit(report, args.json)


def _cmd_witness(args):
    depth = args.depth if args.depth is not None else args.i + 5
    witness = nonregularity_witness(args.j, args.i, depth)
    return _emit(witness.report, args.json)


def _cmd_trajectory(args):
    chain = d_trajectory(args.i, args.k, args.max_steps)
    report = Report("nonregular", f"trajectory i={args.i} k={args.k}")
    path = " -> ".join(vertex_name(v) for v in chain)
    report.add("d-trajectory reaches a c-block", True,
               f"{path} ({len(chain) - 1} steps)")
    return _emit(report, args.json)


def _cmd_dot(args):
    system = _load_system(args.system)
    trunc = Truncation(max(args.depth, args.level), args.breadth)
    sys.stdout.write(emit_dot(system, args.level, trunc))
    return 0


_HANDLERS = {
    "check": _cmd_check,
    "gcell": _cmd_gcell,
    "counterexample": _cmd_counterexample,
    "threads": _cmd_threads,
    "quotient": _cmd_quotient,
    "compare-quotients": _cmd_compare,
    "witness": _cmd_witness,
    "trajectory": _cmd_trajectory,
    "dot": _cmd_dot,
}


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return 2 if stop.code not in (0, None) else 0
    try:
        return _HANDLERS[args.command](args)
    except GcellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc, (UsageError, ParameterError, RangeError, DomainError)):
            return 2
        return 1


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
