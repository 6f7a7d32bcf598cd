"""Shared random-instance generators.  All randomness is seeded per test."""

from __future__ import annotations

import random

from unires.graph import Graph, Hierarchy


def names(n: int, prefix: str = "n") -> list[str]:
    return [f"{prefix}{i:03d}" for i in range(n)]


def random_hierarchy(rng: random.Random, labels: list[str]) -> Hierarchy:
    """Random rooted tree by preferential-free attachment; unary chains can occur."""
    order = labels[:]
    rng.shuffle(order)
    parent = {}
    for i, v in enumerate(order[1:], start=1):
        parent[v] = order[rng.randrange(i)]
    return Hierarchy(tuple(order), parent, order[0])


def branching_hierarchy(rng: random.Random, labels: list[str]) -> Hierarchy:
    """Random rooted tree where every internal vertex has at least 2 children."""
    assert len(labels) >= 3
    order = labels[:]
    rng.shuffle(order)
    parent: dict[str, str] = {}

    def build(root: str, pool: list[str]) -> None:
        if not pool:
            return
        # Split into parts of size 1 or >= 3 so no subtree root ends up with
        # a single child; force at least two parts.
        sizes: list[int] = []
        remaining = len(pool)
        while remaining:
            if remaining == 2:
                sizes += [1, 1]
                break
            allowed = [1] + [s for s in range(3, remaining + 1) if s <= 6]
            if not sizes:
                allowed = [s for s in allowed if s < remaining] or [1]
            size = rng.choice(allowed)
            if remaining - size == 2:
                sizes += [size, 1, 1]
                break
            sizes.append(size)
            remaining -= size
        start = 0
        for size in sizes:
            part = pool[start:start + size]
            start += size
            head = part[0]
            parent[head] = root
            build(head, part[1:])

    build(order[0], order[1:])
    return Hierarchy(tuple(order), parent, order[0])


def random_graph_on(
    rng: random.Random,
    t: Hierarchy,
    edge_budget: int,
    leaf_only: bool = False,
) -> Graph:
    """Random directed graph over the tree universe with small integer weights."""
    pool = list(t.leaves()) if leaf_only else list(t.vertices)
    weights: dict[tuple[str, str], float] = {}
    for _ in range(edge_budget):
        u = rng.choice(pool)
        v = rng.choice(pool)
        if u == v:
            continue
        weights[(u, v)] = weights.get((u, v), 0.0) + rng.choice((1.0, 1.0, 2.0, 3.0))
    return Graph.from_edges(weights, vertices=t.vertices)


def random_pair(rng: random.Random, n: int, branching: bool = False) -> tuple[Graph, Hierarchy]:
    labels = names(n)
    t = branching_hierarchy(rng, labels) if branching else random_hierarchy(rng, labels)
    g = random_graph_on(rng, t, edge_budget=rng.randrange(1, max(2, 2 * n)))
    return g, t


def random_connected_weighted(rng: random.Random, n: int, extra_edges: int | None = None) -> Graph:
    """Connected weighted graph: a random spanning tree plus extra edges."""
    labels = names(n)
    rng.shuffle(labels)
    weights: dict[tuple[str, str], float] = {}
    for i in range(1, n):
        u = labels[rng.randrange(i)]
        v = labels[i]
        weights[(u, v)] = rng.uniform(0.1, 10.0)
    if extra_edges is None:
        extra_edges = rng.randrange(0, 2 * n)
    for _ in range(extra_edges):
        u, v = rng.sample(labels, 2)
        if (u, v) not in weights and (v, u) not in weights:
            weights[(u, v)] = rng.uniform(0.1, 10.0)
    return Graph.from_edges(weights, vertices=labels)


def random_digraph(rng: random.Random, n: int, p: float) -> Graph:
    labels = names(n)
    weights = {}
    for u in labels:
        for v in labels:
            if u != v and rng.random() < p:
                weights[(u, v)] = 1.0
    return Graph.from_edges(weights, vertices=labels)
