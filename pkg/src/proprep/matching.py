"""Bipartite b-matching on top of an augmenting-path maximum flow engine.

This backs the assignment-based committee score and the perfect
representation check, and houses the exact-cover-by-3-sets reduction.
Everything is integer arithmetic; all iteration orders are fixed, so
matchings and certificates are reproducible run to run.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import BallotProfile


class FlowNetwork:
    """Integer max-flow via BFS augmenting paths (shortest path first).

    Nodes are 0..num_nodes-1.  Edges augment in the deterministic order
    they were added, so the final flow is reproducible.
    """

    def __init__(self, num_nodes: int):
        self.num_nodes = num_nodes
        self.adjacency: list[list[int]] = [[] for _ in range(num_nodes)]
        self._to: list[int] = []
        self._cap: list[int] = []
        self._initial_cap: list[int] = []

    def add_edge(self, u: int, v: int, capacity: int) -> int:
        """Add a directed edge and its residual twin; returns the edge id."""
        if capacity < 0:
            raise ValueError("capacity must be non-negative")
        edge_id = len(self._to)
        self._to.append(v)
        self._cap.append(capacity)
        self._initial_cap.append(capacity)
        self.adjacency[u].append(edge_id)
        self._to.append(u)
        self._cap.append(0)
        self._initial_cap.append(0)
        self.adjacency[v].append(edge_id + 1)
        return edge_id

    def max_flow(self, source: int, sink: int) -> int:
        total = 0
        while True:
            parent_edge = [-1] * self.num_nodes
            parent_edge[source] = -2
            queue = deque([source])
            while queue and parent_edge[sink] == -1:
                u = queue.popleft()
                for edge_id in self.adjacency[u]:
                    v = self._to[edge_id]
                    if parent_edge[v] == -1 and self._cap[edge_id] > 0:
                        parent_edge[v] = edge_id
                        queue.append(v)
            if parent_edge[sink] == -1:
                return total
            # bottleneck along the BFS path, then push
            bottleneck = None
            v = sink
            while v != source:
                edge_id = parent_edge[v]
                residual = self._cap[edge_id]
                bottleneck = residual if bottleneck is None else min(bottleneck, residual)
                v = self._to[edge_id ^ 1]
            v = sink
            while v != source:
                edge_id = parent_edge[v]
                self._cap[edge_id] -= bottleneck
                self._cap[edge_id ^ 1] += bottleneck
                v = self._to[edge_id ^ 1]
            total += bottleneck

    def flow_on(self, edge_id: int) -> int:
        return self._initial_cap[edge_id] - self._cap[edge_id]


@dataclass(frozen=True)
class BipartiteCapGraph:
    """Bipartite graph with a per-node capacity on both sides.

    Left nodes are 1..left_count, right nodes 1..right_count; an edge may
    carry multiple units of matching, up to both endpoint capacities.
    """

    left_count: int
    right_count: int
    edges: tuple[tuple[int, int], ...]
    left_caps: tuple[int, ...]
    right_caps: tuple[int, ...]

    def __post_init__(self):
        if self.left_count < 1 or self.right_count < 1:
            raise ValueError("both sides must be non-empty")
        if len(self.left_caps) != self.left_count or len(self.right_caps) != self.right_count:
            raise ValueError("capacity list lengths must match node counts")
        if any(c < 1 for c in self.left_caps) or any(c < 1 for c in self.right_caps):
            raise ValueError("capacities must be >= 1")
        for left, right in self.edges:
            if not (1 <= left <= self.left_count and 1 <= right <= self.right_count):
                raise ValueError(f"edge ({left}, {right}) out of range")


def max_bmatching(graph: BipartiteCapGraph) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Maximum-cardinality b-matching.

    Returns the size and the matching as a multiset of (left, right)
    edges, sorted ascending, one entry per matched unit.
    """
    source = 0
    sink = graph.left_count + graph.right_count + 1
    network = FlowNetwork(sink + 1)
    for left in range(1, graph.left_count + 1):
        network.add_edge(source, left, graph.left_caps[left - 1])
    edge_ids = {}
    for left, right in sorted(set(graph.edges)):
        capacity = min(graph.left_caps[left - 1], graph.right_caps[right - 1])
        edge_ids[(left, right)] = network.add_edge(
            left, graph.left_count + right, capacity
        )
    for right in range(1, graph.right_count + 1):
        network.add_edge(graph.left_count + right, sink, graph.right_caps[right - 1])
    size = network.max_flow(source, sink)
    matching: list[tuple[int, int]] = []
    for (left, right), edge_id in sorted(edge_ids.items()):
        matching.extend([(left, right)] * network.flow_on(edge_id))
    return size, tuple(matching)


@dataclass(frozen=True)
class X3CInstance:
    """Exact cover by 3-sets: a universe of size nu and a family of triples."""

    universe_size: int
    sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.universe_size < 3 or self.universe_size % 3 != 0:
            raise ValueError("universe size must be a positive multiple of 3")
        for triple in self.sets:
            if len(triple) != 3:
                raise ValueError(f"{sorted(triple)} is not a 3-element set")
            if any(not 1 <= u <= self.universe_size for u in triple):
                raise ValueError(f"{sorted(triple)} has elements outside the universe")


def x3c_to_pr(instance: X3CInstance) -> tuple[BallotProfile, int]:
    """Turn an exact-cover instance into a committee election.

    One voter per universe element, one candidate per triple, a voter
    approving exactly the triples containing her element, committee size
    nu/3.  A committee giving every voter an approved representative with
    all loads equal to 3 exists iff the instance has an exact cover.

    An element contained in no triple would produce an empty ballot; such
    instances are trivially uncoverable and are rejected.
    """
    approvals: list[list[int]] = [[] for _ in range(instance.universe_size)]
    for j, triple in enumerate(instance.sets, start=1):
        for u in triple:
            approvals[u - 1].append(j)
    for u, approved in enumerate(approvals, start=1):
        if not approved:
            raise ValueError(
                f"element {u} is in no set, so it can never be covered"
            )
    profile = BallotProfile.from_approval_sets(len(instance.sets), approvals)
    return profile, instance.universe_size // 3


_X3C_HEADER_RE = re.compile(r"^x3c nu=(\d+)$")


def parse_x3c(text: str) -> X3CInstance:
    """Parse 'x3c nu=<int>' followed by one 'a b c' triple per line."""
    universe_size: int | None = None
    sets: list[frozenset[int]] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if universe_size is None:
            match = _X3C_HEADER_RE.match(line)
            if not match:
                raise ValueError(f"line {line_number}: expected 'x3c nu=<int>', got {line!r}")
            universe_size = int(match.group(1))
            continue
        tokens = line.split()
        if len(tokens) != 3 or not all(tok.isdigit() for tok in tokens):
            raise ValueError(f"line {line_number}: expected three integers, got {line!r}")
        sets.append(frozenset(int(tok) for tok in tokens))
    if universe_size is None:
        raise ValueError("missing 'x3c' header")
    return X3CInstance(universe_size, tuple(sets))


def serialize_x3c(instance: X3CInstance) -> str:
    lines = [f"x3c nu={instance.universe_size}"]
    for triple in instance.sets:
        lines.append(" ".join(str(u) for u in sorted(triple)))
    return "\n".join(lines) + "\n"
