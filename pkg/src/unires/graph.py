"""Directed connectivity networks and the vertex hierarchies that scope them.

A network is a set of named vertices plus directed, positively weighted
edges; a hierarchy is a rooted tree over a superset of those vertices.
Edges may sit at any tree vertex, internal or leaf; the resolution
algorithms in :mod:`unires.resolution` rewrite them onto leaves.

File formats (byte-exact CLI contracts):

* edge list  -- UTF-8, LF line endings, ``#`` comment lines, and data lines
  ``source<TAB>target`` or ``source<TAB>target<TAB>weight``.  Duplicate
  lines sum their weights; the default weight is 1.0.
* hierarchy  -- one ``parent<TAB>child`` line per tree edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

Edge = tuple[str, str]


class ParseError(ValueError):
    """A malformed input document; remembers the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class ValidationError(ValueError):
    """Structurally invalid data (bad tree, mismatched vertex sets, ...)."""


class DomainError(ValueError):
    """An operation was asked about a vertex or argument outside its domain."""


def _valid_name(token: str) -> bool:
    return bool(token) and token == token.strip() and "\t" not in token and "\n" not in token


def _check_names(names: Iterable[str]) -> None:
    for name in names:
        if not _valid_name(name):
            raise ValidationError(f"invalid vertex name {name!r}")


@dataclass(frozen=True)
class Graph:
    """A directed weighted graph without self-loops or parallel edges.

    ``vertices`` is the full vertex universe in sorted order; the position
    of a name in it is the vertex's dense integer id.  Vertices without any
    incident edge are allowed (hierarchy-only container vertices).
    Instances are immutable after construction; treat ``weights`` as
    read-only.
    """

    vertices: tuple[str, ...]
    weights: dict[Edge, float]

    def __post_init__(self):
        ordered = tuple(sorted(set(self.vertices)))
        object.__setattr__(self, "vertices", ordered)
        _check_names(ordered)
        universe = set(ordered)
        plain: dict[Edge, float] = {}
        for (u, v), w in self.weights.items():
            if u == v:
                raise ValidationError(f"self-loop at {u!r}")
            if u not in universe or v not in universe:
                raise ValidationError(f"edge ({u!r}, {v!r}) outside the vertex set")
            if not (isinstance(w, (int, float)) and math.isfinite(w) and w > 0):
                raise ValidationError(f"edge ({u!r}, {v!r}) has non-positive weight {w!r}")
            plain[(u, v)] = float(w)
        object.__setattr__(self, "weights", plain)

    @classmethod
    def from_edges(cls, weights: Mapping[Edge, float], vertices: Iterable[str] = ()) -> "Graph":
        """Build a graph from a weight map; the universe is the union of the
        given vertices and all edge endpoints."""
        universe = set(vertices)
        for u, v in weights:
            universe.add(u)
            universe.add(v)
        return cls(tuple(sorted(universe)), dict(weights))

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def out_map(self) -> dict[str, tuple[str, ...]]:
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.weights:
            adj[u].append(v)
        return {v: tuple(sorted(ts)) for v, ts in adj.items()}

    @cached_property
    def in_map(self) -> dict[str, tuple[str, ...]]:
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.weights:
            adj[v].append(u)
        return {v: tuple(sorted(ss)) for v, ss in adj.items()}

    @property
    def edge_count(self) -> int:
        return len(self.weights)

    def has_vertex(self, v: str) -> bool:
        return v in self.index

    def has_edge(self, u: str, v: str) -> bool:
        return (u, v) in self.weights

    def connectivity(self, v: str) -> bool:
        """True when ``v`` touches at least one edge, in either direction."""
        return bool(self.out_map[v]) or bool(self.in_map[v])

    def degree(self, v: str) -> int:
        """Total number of edges touching ``v`` (in plus out)."""
        return len(self.out_map[v]) + len(self.in_map[v])

    def active_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.connectivity(v))

    def with_vertices(self, extra: Iterable[str]) -> "Graph":
        """Same edges over a universe extended by ``extra`` names."""
        return Graph.from_edges(self.weights, vertices=(*self.vertices, *extra))


@dataclass(frozen=True)
class Hierarchy:
    """A rooted tree: every vertex except the root has exactly one parent."""

    vertices: tuple[str, ...]
    parent: dict[str, str]
    root: str

    def __post_init__(self):
        ordered = tuple(sorted(set(self.vertices)))
        object.__setattr__(self, "vertices", ordered)
        _check_names(ordered)
        universe = set(ordered)
        if self.root not in universe:
            raise ValidationError(f"root {self.root!r} not among the vertices")
        if set(self.parent) != universe - {self.root}:
            missing = sorted((universe - {self.root}) ^ set(self.parent))
            raise ValidationError(f"parent map must cover every non-root vertex; mismatch at {missing[:3]}")
        for child, par in self.parent.items():
            if par not in universe:
                raise ValidationError(f"parent {par!r} of {child!r} not among the vertices")
        # Reachability from the root doubles as the acyclicity check.
        seen = {self.root}
        stack = [self.root]
        while stack:
            v = stack.pop()
            for c in self.children[v]:
                if c in seen:
                    raise ValidationError(f"cycle through vertex {c!r}")
                seen.add(c)
                stack.append(c)
        if seen != universe:
            stranded = sorted(universe - seen)
            raise ValidationError(f"cycle: vertices {stranded[:3]} unreachable from root {self.root!r}")

    @cached_property
    def children(self) -> dict[str, tuple[str, ...]]:
        kids: dict[str, list[str]] = {v: [] for v in self.vertices}
        for child, par in self.parent.items():
            kids[par].append(child)
        return {v: tuple(sorted(cs)) for v, cs in kids.items()}

    @cached_property
    def _depths(self) -> dict[str, int]:
        depths = {self.root: 1}
        stack = [self.root]
        while stack:
            v = stack.pop()
            for c in self.children[v]:
                depths[c] = depths[v] + 1
                stack.append(c)
        return depths

    @cached_property
    def _leafsets(self) -> dict[str, frozenset[str]]:
        # Children before parents: sort by depth, deepest first.
        sets: dict[str, frozenset[str]] = {}
        for v in sorted(self.vertices, key=lambda u: self._depths[u], reverse=True):
            kids = self.children[v]
            if not kids:
                sets[v] = frozenset((v,))
            else:
                sets[v] = frozenset().union(*(sets[c] for c in kids))
        return sets

    def _require(self, v: str) -> None:
        if v not in self._depths:
            raise DomainError(f"unknown vertex {v!r}")

    def is_leaf(self, v: str) -> bool:
        self._require(v)
        return not self.children[v]

    def depth(self, v: str) -> int:
        """Tree depth of ``v``, with the root at depth 1."""
        self._require(v)
        return self._depths[v]

    def leafset(self, v: str) -> frozenset[str]:
        """All descendant leaves of ``v``; a leaf's leafset is itself."""
        self._require(v)
        return self._leafsets[v]

    def descendants(self, v: str) -> set[str]:
        """``v`` plus everything below it."""
        self._require(v)
        out = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for c in self.children[u]:
                out.add(c)
                stack.append(c)
        return out

    def leaves(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self.children[v])

    def internal_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.children[v])

    def dfs_preorder(self) -> tuple[str, ...]:
        """Depth-first preorder from the root, children in name order."""
        order: list[str] = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(self.children[v]))
        return tuple(order)

    def restricted_to(self, keep: Iterable[str]) -> "Hierarchy":
        """Sub-hierarchy on an ancestor-closed subset containing the root."""
        kept = set(keep)
        if self.root not in kept:
            raise ValidationError("restriction must keep the root")
        for v in kept:
            if v != self.root and self.parent[v] not in kept:
                raise ValidationError(f"restriction is not ancestor-closed at {v!r}")
        parent = {v: p for v, p in self.parent.items() if v in kept}
        return Hierarchy(tuple(sorted(kept)), parent, self.root)


@dataclass(frozen=True)
class VertexClassification:
    """Partition of the vertex universe by tree position and connectivity.

    ``silent`` holds every vertex without incident edges, container vertices
    and unreported leaves alike, so the three sets partition the universe.
    """

    internal_with_connectivity: frozenset[str]
    leaves_with_connectivity: frozenset[str]
    silent: frozenset[str]


def _iter_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.split("\n"), start=1):
        if not raw or raw.startswith("#"):
            continue
        yield lineno, raw


def load_graph(text: str) -> Graph:
    """Parse an edge-list document.

    Raises :class:`ParseError` (with the line number) on a wrong field
    count, an invalid vertex name, a non-positive or unparsable weight, or
    a self-loop.  Weights of duplicate edges are summed.
    """
    weights: dict[Edge, float] = {}
    for lineno, raw in _iter_lines(text):
        fields = raw.split("\t")
        if len(fields) not in (2, 3):
            raise ParseError(f"expected 2 or 3 tab-separated fields, got {len(fields)}", lineno)
        src, dst = fields[0], fields[1]
        for token in (src, dst):
            if not _valid_name(token):
                raise ParseError(f"invalid vertex name {token!r}", lineno)
        if src == dst:
            raise ParseError(f"self-loop at {src!r}", lineno)
        weight = 1.0
        if len(fields) == 3:
            try:
                weight = float(fields[2])
            except ValueError:
                raise ParseError(f"unparsable weight {fields[2]!r}", lineno) from None
            if not (math.isfinite(weight) and weight > 0):
                raise ParseError(f"weight must be positive and finite, got {fields[2]!r}", lineno)
        weights[(src, dst)] = weights.get((src, dst), 0.0) + weight
    return Graph.from_edges(weights)


def load_hierarchy(text: str, graph: Graph) -> Hierarchy:
    """Parse a parent-child document and check it covers ``graph``.

    Raises :class:`ParseError` for malformed lines and
    :class:`ValidationError` for a child with two parents, multiple roots,
    cycles, or a graph vertex missing from the tree (named in the message).
    """
    parent: dict[str, str] = {}
    universe: set[str] = set()
    for lineno, raw in _iter_lines(text):
        fields = raw.split("\t")
        if len(fields) != 2:
            raise ParseError(f"expected 2 tab-separated fields, got {len(fields)}", lineno)
        par, child = fields
        for token in (par, child):
            if not _valid_name(token):
                raise ParseError(f"invalid vertex name {token!r}", lineno)
        if child in parent and parent[child] != par:
            raise ValidationError(f"vertex {child!r} has two parents: {parent[child]!r} and {par!r}")
        parent[child] = par
        universe.add(par)
        universe.add(child)
    roots = sorted(universe - set(parent))
    if not universe:
        raise ValidationError("hierarchy document contains no tree edges")
    if not roots:
        raise ValidationError("no root vertex: parent links form a cycle")
    if len(roots) > 1:
        raise ValidationError(f"multiple roots: {roots}")
    for v in graph.vertices:
        if v not in universe:
            raise ValidationError(f"graph vertex {v!r} missing from the hierarchy")
    return Hierarchy(tuple(sorted(universe)), parent, roots[0])


def serialize_graph(g: Graph) -> str:
    """Canonical edge-list text: sorted lines, explicit weights."""
    lines = [f"{u}\t{v}\t{w!r}" for (u, v), w in sorted(g.weights.items())]
    return "\n".join(lines) + ("\n" if lines else "")


def serialize_hierarchy(h: Hierarchy) -> str:
    """Canonical parent-child text: one line per tree edge, sorted."""
    lines = [f"{p}\t{c}" for c, p in sorted(h.parent.items(), key=lambda it: (it[1], it[0]))]
    return "\n".join(lines) + ("\n" if lines else "")


def check_pair(g: Graph, t: Hierarchy) -> None:
    """Every graph vertex must sit in the hierarchy."""
    tree = set(t.vertices)
    for v in g.vertices:
        if v not in tree:
            raise ValidationError(f"graph vertex {v!r} missing from the hierarchy")


def classify(g: Graph, t: Hierarchy) -> VertexClassification:
    """Split the tree's vertex universe by connectivity and leaf status."""
    check_pair(g, t)
    internal_conn: set[str] = set()
    leaf_conn: set[str] = set()
    silent: set[str] = set()
    for v in t.vertices:
        if g.has_vertex(v) and g.connectivity(v):
            if t.is_leaf(v):
                leaf_conn.add(v)
            else:
                internal_conn.add(v)
        else:
            silent.add(v)
    return VertexClassification(frozenset(internal_conn), frozenset(leaf_conn), frozenset(silent))


def anchor(g: Graph, t: Hierarchy, v: str) -> str:
    """Topmost connectivity-bearing ancestor-or-self of ``v``.

    Returns ``v`` itself when no proper ancestor has connectivity; raises
    :class:`DomainError` when ``v`` has no connectivity at all.
    """
    check_pair(g, t)
    t._require(v)
    if not (g.has_vertex(v) and g.connectivity(v)):
        raise DomainError(f"vertex {v!r} has no connectivity")
    best = v
    cur = v
    while cur != t.root:
        cur = t.parent[cur]
        if g.has_vertex(cur) and g.connectivity(cur):
            best = cur
    return best
