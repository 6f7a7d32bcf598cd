"""Command-line interface: deterministic batch runs over edge-list files.

Subcommands: ``convert``, ``metrics``, ``centrality``, ``spyplot``,
``degree-fit``, and the debug helper ``resistance``.  Exit codes: 0 on
success, 2 for input/validation/usage problems, 3 for numerical failures.
Every output file is UTF-8 with LF endings and canonically sorted, so two
runs with identical inputs and flags are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

from . import __version__
from .graph import (
    DomainError,
    Graph,
    Hierarchy,
    ParseError,
    ValidationError,
    load_graph,
    load_hierarchy,
    serialize_graph,
    serialize_hierarchy,
)
from .metrics import (
    CENTRALITY_METRICS,
    NumericalError,
    centrality_suite,
    degree_fit,
    metrics_report,
    top_k,
)
from .resolution import ResolutionResult, disinherit, inherit, kron_sampling
from .spectral import effective_resistance, symmetrized_weights

METHODS = ("inherit", "disinherit", "kron")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load_pair(graph_path: str, hierarchy_path: str) -> tuple[Graph, Hierarchy]:
    graph = load_graph(_read(graph_path))
    hierarchy = load_hierarchy(_read(hierarchy_path), graph)
    # Work over the full tree universe so container vertices are counted.
    return graph.with_vertices(hierarchy.vertices), hierarchy


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _prepare_outdir(out: str, inputs: list[str], filenames: list[str]) -> Path:
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    input_paths = {Path(p).resolve() for p in inputs}
    for name in filenames:
        if (outdir / name).resolve() in input_paths:
            raise ValidationError(f"refusing to overwrite input file {outdir / name}")
    return outdir


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _fmt(x: float) -> str:
    return repr(float(x))


def _edge_label(edge: tuple[str, str]) -> str:
    return f"{edge[0]}->{edge[1]}"


def _provenance_lines(result: ResolutionResult) -> str:
    lines = []
    for out_edge in sorted(result.provenance):
        for in_edge in sorted(result.provenance[out_edge]):
            lines.append(f"{_edge_label(out_edge)}\t{_edge_label(in_edge)}")
    for in_edge in sorted(result.dropped):
        lines.append(f"dropped\t{_edge_label(in_edge)}")
    lines.sort()
    return "\n".join(lines) + ("\n" if lines else "")


def cmd_convert(args: argparse.Namespace) -> int:
    graph, hierarchy = _load_pair(args.graph, args.hierarchy)
    if args.method == "inherit":
        result = inherit(graph, hierarchy)
    elif args.method == "disinherit":
        result = disinherit(graph, hierarchy)
    else:
        result = kron_sampling(
            graph,
            hierarchy,
            descending=args.sort_direction == "desc",
            guard=args.guard_mode,
        )
    names = ["network.tsv", "hierarchy.tsv", "provenance.tsv", "manifest.json"]
    outdir = _prepare_outdir(args.out, [args.graph, args.hierarchy], names)
    _write(outdir / "network.tsv", serialize_graph(result.network))
    _write(outdir / "hierarchy.tsv", serialize_hierarchy(result.hierarchy))
    _write(outdir / "provenance.tsv", _provenance_lines(result))
    manifest = {
        "tool": "unires",
        "version": __version__,
        "command": "convert",
        "method": args.method,
        "flags": {
            "sort_direction": args.sort_direction,
            "guard_mode": args.guard_mode,
        },
        "inputs": {
            "graph": {"path": args.graph, "sha256": _sha256(_read(args.graph))},
            "hierarchy": {"path": args.hierarchy, "sha256": _sha256(_read(args.hierarchy))},
        },
        "outputs": names[:3],
    }
    _write(outdir / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return 0


def _metrics_text(report) -> str:
    rows = [
        ("vertices", str(report.vertex_count)),
        ("active vertices", str(report.active_vertex_count)),
        ("edges", str(report.edge_count)),
        ("density (active basis)", _fmt(report.density)),
        ("density (all vertices)", _fmt(report.density_all_vertices)),
        ("reciprocity", _fmt(report.reciprocity)),
        ("diameter", str(report.diameter)),
        ("characteristic path length", _fmt(report.characteristic_path_length)),
        ("mean clustering (directed)", _fmt(report.mean_clustering_directed)),
    ]
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name.ljust(width)}  {value}" for name, value in rows) + "\n"


def _load_graph_for_analysis(args: argparse.Namespace) -> Graph:
    if getattr(args, "hierarchy", None):
        graph, _ = _load_pair(args.graph, args.hierarchy)
        return graph
    return load_graph(_read(args.graph))


def cmd_metrics(args: argparse.Namespace) -> int:
    graph = _load_graph_for_analysis(args)
    report = metrics_report(graph)
    outdir = _prepare_outdir(args.out, [args.graph], ["metrics.json", "metrics.txt"])
    _write(outdir / "metrics.json", json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n")
    _write(outdir / "metrics.txt", _metrics_text(report))
    return 0


def cmd_centrality(args: argparse.Namespace) -> int:
    graph = _load_graph_for_analysis(args)
    table = centrality_suite(graph, pagerank_damping=args.pagerank_damping)
    ranked = top_k(table, args.top_k)
    outdir = _prepare_outdir(args.out, [args.graph], ["centrality.csv", "top_k.csv"])
    lines = ["vertex," + ",".join(CENTRALITY_METRICS)]
    for v in table.vertices:
        lines.append(v + "," + ",".join(_fmt(table.scores[m][v]) for m in CENTRALITY_METRICS))
    _write(outdir / "centrality.csv", "\n".join(lines) + "\n")
    lines = ["metric,rank,vertex,score"]
    for metric in CENTRALITY_METRICS:
        for rank, name, score in ranked[metric]:
            lines.append(f"{metric},{rank},{name},{_fmt(score)}")
    _write(outdir / "top_k.csv", "\n".join(lines) + "\n")
    return 0


def cmd_spyplot(args: argparse.Namespace) -> int:
    graph, hierarchy = _load_pair(args.graph, args.hierarchy)
    preorder = hierarchy.dfs_preorder()
    ordering = [v for v in preorder if not hierarchy.is_leaf(v)]
    ordering += [v for v in preorder if hierarchy.is_leaf(v)]
    position = {v: i for i, v in enumerate(ordering)}
    cells = sorted((position[u], position[v]) for u, v in graph.weights)
    outdir = _prepare_outdir(args.out, [args.graph, args.hierarchy], ["ordering.txt", "spy.tsv"])
    _write(outdir / "ordering.txt", "\n".join(ordering) + ("\n" if ordering else ""))
    _write(outdir / "spy.tsv", "\n".join(f"{r}\t{c}" for r, c in cells) + ("\n" if cells else ""))
    return 0


def cmd_degree_fit(args: argparse.Namespace) -> int:
    graph = _load_graph_for_analysis(args)
    fit = degree_fit(graph)
    outdir = _prepare_outdir(args.out, [args.graph], ["ccdf.csv", "fit.json"])
    lines = ["degree,ccdf_empirical,ccdf_fitted"]
    for degree, empirical, fitted in fit.ccdf_points:
        lines.append(f"{degree},{_fmt(empirical)},{_fmt(fitted)}")
    _write(outdir / "ccdf.csv", "\n".join(lines) + "\n")
    summary = {
        "lambda": fit.lam,
        "d_min": fit.d_min,
        "mean": fit.mean,
        "vertex_count": len(fit.degrees),
    }
    _write(outdir / "fit.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_resistance(args: argparse.Namespace) -> int:
    graph = load_graph(_read(args.graph))
    pairs = sorted(symmetrized_weights(graph))
    values = effective_resistance(graph, pairs)
    for u, v in pairs:
        r = values[(u, v)]
        sys.stdout.write(f"{u}\t{v}\t{'inf' if math.isinf(r) else _fmt(r)}\n")
    return 0


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _damping(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0, 1), got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unires",
        description="Convert mixed-resolution connectivity networks to leaf-level ones and analyze them.",
    )
    parser.add_argument("--version", action="version", version=f"unires {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    convert = sub.add_parser("convert", help="run one conversion method on a (graph, hierarchy) pair")
    convert.add_argument("--graph", required=True)
    convert.add_argument("--hierarchy", required=True)
    convert.add_argument("--method", required=True, choices=METHODS)
    convert.add_argument("--out", default=".")
    convert.add_argument("--sort-direction", choices=("desc", "asc"), default="desc",
                         help="depth-product order for kron edge placement (default: desc)")
    convert.add_argument("--guard-mode", choices=("any", "directed"), default="any",
                         help="what blocks a kron candidate set (default: any direction)")
    convert.set_defaults(func=cmd_convert)

    metrics = sub.add_parser("metrics", help="summary metrics of one network")
    metrics.add_argument("--graph", required=True)
    metrics.add_argument("--hierarchy", help="optional; counts hierarchy-only vertices in the universe")
    metrics.add_argument("--out", default=".")
    metrics.set_defaults(func=cmd_metrics)

    centrality = sub.add_parser("centrality", help="per-vertex centrality scores and top-k lists")
    centrality.add_argument("--graph", required=True)
    centrality.add_argument("--hierarchy", help="optional; counts hierarchy-only vertices in the universe")
    centrality.add_argument("--top-k", type=_positive_int, default=10)
    centrality.add_argument("--pagerank-damping", type=_damping, default=0.85)
    centrality.add_argument("--out", default=".")
    centrality.set_defaults(func=cmd_centrality)

    spyplot = sub.add_parser("spyplot", help="vertex ordering and adjacency cells for spy plots")
    spyplot.add_argument("--graph", required=True)
    spyplot.add_argument("--hierarchy", required=True)
    spyplot.add_argument("--out", default=".")
    spyplot.set_defaults(func=cmd_spyplot)

    fit = sub.add_parser("degree-fit", help="exponential fit of the total-degree distribution")
    fit.add_argument("--graph", required=True)
    fit.add_argument("--hierarchy", help="optional; counts hierarchy-only vertices in the universe")
    fit.add_argument("--out", default=".")
    fit.set_defaults(func=cmd_degree_fit)

    resistance = sub.add_parser("resistance", help="debug: effective resistance of every edge")
    resistance.add_argument("--graph", required=True)
    resistance.set_defaults(func=cmd_resistance)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:  # pragma: no cover - console-script shim
    raise SystemExit(main())
