"""Command-line entry point: ``synthnet {generate,endorse,sample,analyze,rip2rep}``.

Every option can also come from a flat JSON object passed with
``--config``; keys are the option names with dashes replaced by
underscores. Options given on the command line win over the file.

Exit codes: 0 success, 2 search stalled or ran out of budget,
3 invalid input, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time

import numpy as np

from . import analysis, growth, patterns, reduction, sampling, search
from .graph import GraphError
from .serialize import FormatError, atomic_write, encode, read_network

EXIT_OK = 0
EXIT_STALLED = 2
EXIT_INVALID = 3
EXIT_IO = 4

log = logging.getLogger("synthnet")


class ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _resolve_seed(seed: int | None) -> int:
    if seed is None:
        seed = random.SystemRandom().randrange(2**32)
        print(f"seed {seed}")
    return seed


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


# -- subcommands ------------------------------------------------------------

def _growth_params(args) -> growth.GrowthParams:
    if args.params:
        return growth.GrowthParams.from_dict(json.loads(_read_text(args.params)))
    return growth.preset(args.preset)


def cmd_generate(args) -> int:
    params = _growth_params(args)
    if args.iterations is None and args.max_nodes is None and args.max_clock is None:
        raise ValidationError("give at least one of --iterations, --max-nodes, --max-clock")
    term = growth.TerminationSpec(max_clock=args.max_clock, max_iterations=args.iterations,
                                  max_nodes=args.max_nodes)
    seed = _resolve_seed(args.seed)
    start = time.perf_counter()
    result = growth.generate_base(params, term, seed)
    elapsed = time.perf_counter() - start
    atomic_write(args.output, encode(result.graph))
    if args.events:
        atomic_write(args.events, growth.events_to_csv(result.events).encode("utf-8"))
    g = result.graph
    print(f"iterations {result.iterations}  nodes {len(g)}  edges {g.number_of_edges()}  "
          f"clock {result.clock:.2f} days  stop {result.stop_reason}")
    print(f"time1 {elapsed:.2f} s")
    return EXIT_OK


def _weights(args, n_s: int) -> np.ndarray:
    if args.weights:
        w = patterns.validate_weights(patterns.parse_matrix_csv(_read_text(args.weights)))
        if w.shape[0] != n_s:
            raise ValidationError(f"weight matrix has {w.shape[0]} skills, target has {n_s}")
        return w
    return patterns.default_weights(n_s, args.weight_diagonal, args.weight_off_diagonal)


def cmd_endorse(args) -> int:
    g, _ = read_network(args.graph)
    target = patterns.validate_pattern(patterns.parse_matrix_csv(_read_text(args.target)))
    n_s = target.shape[0]
    if args.skills is not None and args.skills != n_s:
        raise ValidationError(f"--skills {args.skills} does not match the {n_s}x{n_s} target")
    weights = _weights(args, n_s)
    for i, j in patterns.sanity_violations(target):
        log.warning("target entry (%d, %d) = %g exceeds 1 and cannot be realized", i, j, target[i, j])
    seed = _resolve_seed(args.seed)
    start = time.perf_counter()
    d, trace = search.solve(g, target, weights, seed=seed, init=args.init, restarts=args.restarts,
                            threshold=args.threshold, stall=args.stall,
                            max_iterations=args.max_iterations)
    elapsed = time.perf_counter() - start
    atomic_write(args.output, encode(g, d))
    atomic_write(args.trace, trace.to_csv().encode("utf-8"))
    print(f"status {trace.status}  delta {trace.final_delta:.6g}  iterations {trace.iterations}  "
          f"accepted {trace.accepted}  arcs {d.number_of_arcs()}")
    print(f"time2 {elapsed:.2f} s")
    return EXIT_OK if trace.status == search.THRESHOLD_REACHED else EXIT_STALLED


def cmd_sample(args) -> int:
    g, d = read_network(args.graph)
    seed = _resolve_seed(args.seed)
    spec = sampling.SampleSpec(target_size=args.size, seed_vertex=args.seed_vertex, seed=seed)
    s = sampling.bfs_sample(g, d, spec)
    atomic_write(args.output, encode(s.graph, s.endorsements))
    if args.matrix:
        if s.endorsements is None:
            raise ValidationError("--matrix needs a graph file with endorsements")
        atomic_write(args.matrix, patterns.format_matrix_csv(sampling.estimate_pattern(s)).encode())
    print(f"seed vertex {s.seed_vertex}  nodes {len(s.graph)}  edges {s.graph.number_of_edges()}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    g, d = read_network(args.graph)
    degrees = g.degrees()
    n, m = len(g), g.number_of_edges()
    print(f"nodes {n}  edges {m}  average degree {2 * m / n if n else 0:.4f}")
    try:
        print(f"diameter {analysis.diameter(g)}")
    except analysis.AnalysisError as exc:
        print(f"diameter n/a ({exc})")
    try:
        print(f"power-law exponent (k_min={args.kmin}) "
              f"{analysis.fit_power_law(degrees, args.kmin):.4f}")
    except analysis.AnalysisError as exc:
        print(f"power-law exponent n/a ({exc})")
    if args.preset or args.params:
        print(f"theoretical exponent {analysis.theoretical_exponent(_growth_params(args)):.6f}")
    if d is not None:
        mat = patterns.compute_pattern_matrix(g, d)
        print("pattern matrix")
        print(patterns.format_matrix_csv(mat), end="")
        if args.matrix:
            atomic_write(args.matrix, patterns.format_matrix_csv(mat).encode())
    if args.events:
        events = growth.events_from_csv(_read_text(args.events))
        total = sum(1 for ev in events if ev.kind in growth.POP_EVENTS)
        rows = analysis.densification_report(events, analysis.quarter_checkpoints(total, args.checkpoints))
        header = "iteration,t,nodes,edges,avg_degree,diameter"
        lines = [header] + [f"{r.iteration},{r.t!r},{r.nodes},{r.edges},{r.avg_degree!r},{r.diameter}"
                            for r in rows]
        print("\n".join(lines))
        if args.report:
            atomic_write(args.report, ("\n".join(lines) + "\n").encode())
    return EXIT_OK


def cmd_rip2rep(args) -> int:
    text = _read_text(args.matrix_in)
    p = patterns.parse_matrix_csv(text)
    g, m = reduction.rip_to_rep(p.tolist())
    bad = reduction.unrealizable_pairs(p.astype(int).tolist())
    if bad:
        log.warning("pairs %s have p_ij > min(p_ii, p_jj); the instance is unrealizable", bad)
    atomic_write(args.output, encode(g))
    atomic_write(args.matrix, patterns.format_matrix_csv([[float(x) for x in row] for row in m]).encode())
    print(f"nodes {len(g)}  edges {g.number_of_edges()}  skills {len(m)}")
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="synthnet", description="Synthetic social networks with endorsements.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="flat JSON object with default option values")
        p.add_argument("--seed", type=int)

    p = sub.add_parser("generate", help="grow a base acquaintance graph")
    common(p)
    p.add_argument("--preset", default="linkedin", choices=sorted(growth.PRESETS))
    p.add_argument("--params", help="JSON growth parameters (overrides --preset)")
    p.add_argument("--iterations", type=int)
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--max-clock", type=float, help="days")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--events", help="write the event log as CSV")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("endorse", help="attach endorsement digraphs matching a target matrix")
    common(p)
    p.add_argument("--graph", required=True)
    p.add_argument("--target", required=True, help="pattern matrix CSV")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--trace", default="trace.csv")
    p.add_argument("--skills", type=int, help="expected number of skills")
    p.add_argument("--weights", help="weight matrix CSV")
    p.add_argument("--weight-diagonal", type=float, default=patterns.DEFAULT_DIAGONAL_WEIGHT)
    p.add_argument("--weight-off-diagonal", type=float, default=patterns.DEFAULT_OFF_DIAGONAL_WEIGHT)
    p.add_argument("--threshold", type=float, default=search.DEFAULT_THRESHOLD)
    p.add_argument("--stall", type=int, default=search.DEFAULT_STALL)
    p.add_argument("--max-iterations", type=int, default=search.DEFAULT_MAX_ITERATIONS)
    p.add_argument("--restarts", type=int, default=search.DEFAULT_RESTARTS)
    p.add_argument("--init", choices=("greedy", "random"), default="greedy")
    p.set_defaults(func=cmd_endorse)

    p = sub.add_parser("sample", help="breadth-first sample of a network")
    common(p)
    p.add_argument("--graph", required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--seed-vertex", type=int)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--matrix", help="write the estimated pattern matrix as CSV")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("analyze", help="report structural statistics")
    common(p)
    p.add_argument("--graph", required=True)
    p.add_argument("--events", help="event log CSV for the densification table")
    p.add_argument("--checkpoints", type=int, default=4)
    p.add_argument("--kmin", type=int, default=analysis.DEFAULT_KMIN)
    p.add_argument("--preset", choices=sorted(growth.PRESETS))
    p.add_argument("--params")
    p.add_argument("--report", help="write the densification table as CSV")
    p.add_argument("--matrix", help="write the pattern matrix as CSV")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("rip2rep", help="reduce an intersection-pattern instance")
    common(p)
    p.add_argument("matrix_in", metavar="MATRIX", help="symmetric integer matrix CSV")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--matrix", required=True, help="output pattern matrix CSV")
    p.set_defaults(func=cmd_rip2rep)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    choices = parser._subparsers._group_actions[0].choices
    command = next((a for a in argv if a in choices), None)
    if not known.config or command is None:
        return parser.parse_args(argv)
    try:
        doc = json.loads(_read_text(known.config))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file: {exc}") from None
    if not isinstance(doc, dict) or any(isinstance(v, (dict, list)) for v in doc.values()):
        raise ValidationError("config file must be a flat JSON object")
    subparser = choices[command]
    known_keys = {a.dest for a in subparser._actions} - {"help", "config", "func"}
    unknown = set(doc) - known_keys
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    for action in subparser._actions:
        if action.dest in doc:
            action.required = False
    subparser.set_defaults(**doc)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s: %(message)s")
        return args.func(args)
    except (ValidationError, FormatError, GraphError, growth.ParameterError,
            patterns.PatternError, reduction.InstanceError, analysis.AnalysisError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
