"""Command-line entry point: ``enumerate``, ``stream`` and ``bench``.

Exit status is 0 on success, 1 on a usage error and 2 when the input cannot be
read or parsed.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from typing import Sequence, TextIO

from .bench import ALGOS, bench, imbalance_report, rows_to_csv, run_static
from .dynamic import IncrementalEngine
from .graph import RANKINGS, EdgeListError, Graph, load_edge_list, load_edge_stream, ranking_by_name
from .parallel import ParallelConfig
from .sinks import CollectingSink, CountingSink

EXIT_USAGE = 1
EXIT_IO = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return value


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return value


def _choice_list(choices: Sequence[str]):
    def parse(text: str) -> list[str]:
        items = [t.strip() for t in text.split(",") if t.strip()]
        bad = [t for t in items if t not in choices]
        if bad or not items:
            raise argparse.ArgumentTypeError(f"expected a comma-separated subset of {','.join(choices)}")
        return items
    return parse


def _int_list(text: str) -> list[int]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items or not all(t.isdigit() and int(t) > 0 for t in items):
        raise argparse.ArgumentTypeError(f"expected comma-separated positive integers: {text!r}")
    return [int(t) for t in items]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parmce", description="Maximal clique enumeration on static and growing graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def parallel_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--threads", type=_positive, default=1, help="worker count (default 1)")
        p.add_argument("--grain", type=_nonnegative, default=16,
                       help="states with fewer candidate plus excluded vertices run serially (default 16)")
        p.add_argument("--backend", choices=("thread", "process"), default="thread",
                       help="worker kind; processes sidestep the interpreter lock (default thread)")

    e = sub.add_parser("enumerate", help="list or count the maximal cliques of a graph")
    e.add_argument("--input", required=True, help="edge list, one 'u v' pair per line")
    e.add_argument("--algo", choices=ALGOS, default="parmce")
    e.add_argument("--ranking", choices=tuple(RANKINGS), default="degree", help="vertex order for parmce")
    e.add_argument("--output", choices=("count", "list", "stats"), default="count")
    parallel_flags(e)

    s = sub.add_parser("stream", help="replay an edge stream in batches and report clique changes")
    s.add_argument("--input", required=True, help="edge list 'u v timestamp'; edges replay in timestamp order")
    s.add_argument("--batch-size", type=_positive, default=1000)
    s.add_argument("--batch-by-timestamp", action="store_true",
                   help="one batch per distinct timestamp instead of fixed-size batches")
    s.add_argument("--report", choices=("deltas", "counts"), default="deltas",
                   help="per-batch change sizes, or the clique count after each batch")
    s.add_argument("--mode", choices=("maintain", "count-only"), default="maintain",
                   help="count-only keeps no clique set and reports new cliques only")
    s.add_argument("--baseline", action="store_true", help="also time a serial step and report the speedup")
    parallel_flags(s)

    b = sub.add_parser("bench", help="time the static algorithms and report subproblem imbalance")
    b.add_argument("--input", required=True)
    b.add_argument("--threads-list", type=_int_list, default=[1, 2, 4, 8])
    b.add_argument("--algo-list", type=_choice_list(ALGOS), default=list(ALGOS))
    b.add_argument("--ranking-list", type=_choice_list(tuple(RANKINGS)), default=["degree"])
    b.add_argument("--repeats", type=_positive, default=1)
    b.add_argument("--grain", type=_nonnegative, default=16)
    b.add_argument("--backend", choices=("thread", "process"), default="thread")
    b.add_argument("--imbalance-ranking", choices=tuple(RANKINGS), default="degree")
    b.add_argument("--imbalance-top", type=_nonnegative, default=10,
                   help="largest subproblems listed in the imbalance report (default 10)")
    b.add_argument("--no-imbalance", action="store_true")
    return parser


def _config(args: argparse.Namespace) -> ParallelConfig:
    return ParallelConfig(threads=args.threads, grain_threshold=args.grain, backend=args.backend)


def _labelled(g: Graph, clique: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(g.labels[v] for v in clique))


def cmd_enumerate(args: argparse.Namespace, out: TextIO) -> int:
    g = load_edge_list(args.input)
    cfg = _config(args)
    if args.output == "list":
        sink = CollectingSink()
        run_static(g, args.algo, sink, cfg, args.ranking)
        for c in sorted(_labelled(g, c) for c in sink.cliques):
            out.write(" ".join(map(str, c)) + "\n")
        return 0
    counter = CountingSink()
    run_static(g, args.algo, counter, cfg, args.ranking)
    if args.output == "count":
        out.write(f"{counter.count}\n")
        return 0
    out.write("size\tfrequency\n")
    for size in sorted(counter.histogram):
        out.write(f"{size}\t{counter.histogram[size]}\n")
    out.write(f"M\t{g.m}\n")
    out.write(f"Delta\t{g.max_degree()}\n")
    out.write(f"cliques\t{counter.count}\n")
    return 0


def cmd_stream(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    stream = load_edge_stream(args.input)
    by_time = args.batch_by_timestamp
    if stream.edges and not stream.timestamped:
        err.write("parmce: warning: timestamp column missing; replaying edges in file order\n")
        if by_time:
            err.write(f"parmce: warning: batching by --batch-size {args.batch_size} instead of timestamp\n")
            by_time = False
    cfg = _config(args)
    maintain = args.mode == "maintain"
    w = csv.writer(out, lineterminator="\n")
    if args.report == "deltas":
        header = ["batch", "new", "del", "wall_ms"]
        if args.baseline:
            header += ["serial_ms", "speedup"]
    else:
        header = ["batch", "cliques"]
    w.writerow(header)
    total_new = 0
    engine = IncrementalEngine(stream.vertexless_graph(), maintain=maintain, grow=True)
    for i, batch in enumerate(
        stream.batches_by_timestamp() if by_time else stream.batches(args.batch_size), start=1
    ):
        serial_s = None
        if args.baseline:
            shadow = engine.copy()
            t0 = time.perf_counter()
            shadow.step(batch)
            serial_s = time.perf_counter() - t0
            del shadow
        t0 = time.perf_counter()
        delta = engine.step(batch, cfg)
        wall_s = time.perf_counter() - t0
        wall_ms = _ms(wall_s)
        total_new += delta.n_new
        if args.report == "deltas":
            row: list[object] = [i, delta.n_new, delta.n_del if maintain else "NA", wall_ms]
            if serial_s is not None:
                row += [_ms(serial_s), f"{serial_s / max(wall_s, 1e-9):.2f}"]
            w.writerow(row)
        else:
            w.writerow([i, len(engine.index) if maintain else total_new])
    if maintain:
        assert engine.index is not None
        w.writerow(["total", len(engine.index)])
    else:
        w.writerow(["new_total", total_new])
    return 0


def cmd_bench(args: argparse.Namespace, out: TextIO) -> int:
    g = load_edge_list(args.input)
    rows = bench(g, args.algo_list, args.ranking_list, args.threads_list, args.repeats, args.grain, args.backend)
    out.write(rows_to_csv(rows))
    if not args.no_imbalance:
        report = imbalance_report(g, ranking_by_name(g, args.imbalance_ranking))
        out.write("\n")
        out.write(report.to_csv(args.imbalance_top, g.labels))
    return 0


def _ms(seconds: float) -> int:
    return int(round(seconds * 1000))


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "enumerate":
            return cmd_enumerate(args, out)
        if args.command == "stream":
            return cmd_stream(args, out, err)
        return cmd_bench(args, out)
    except EdgeListError as exc:
        err.write(f"parmce: {args.input}: {exc}\n")
        return EXIT_IO
    except OSError as exc:
        err.write(f"parmce: cannot read {args.input}: {exc.strerror or exc}\n")
        return EXIT_IO
    except UnicodeDecodeError as exc:
        err.write(f"parmce: {args.input}: not a text file ({exc.reason})\n")
        return EXIT_IO
    except ValueError as exc:
        err.write(f"parmce: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
