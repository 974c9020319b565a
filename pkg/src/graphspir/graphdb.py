"""Storage topology: servers are vertices, messages are edges.

Every message lives on exactly the two servers joined by its edge, so a path
with N servers carries N-1 messages and a cycle carries N.  Servers and
messages are 1-indexed throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Graph:
    """A two-replication storage graph.

    edges[k-1] = (i, j) means message k is stored on servers i and j.
    kind is "path", "cycle", or "generic" (shape is not re-derived from the
    edge list; validate_graph checks the structural invariants).
    """

    n_servers: int
    edges: tuple[tuple[int, int], ...]
    kind: str = "generic"

    def __post_init__(self) -> None:
        if self.n_servers < 2:
            raise ValueError("need at least 2 servers")
        norm = []
        for i, j in self.edges:
            if not (1 <= i <= self.n_servers and 1 <= j <= self.n_servers):
                raise ValueError(f"edge ({i},{j}) references a missing server")
            norm.append((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def message_count(self) -> int:
        return len(self.edges)

    def servers_of(self, message: int) -> tuple[int, int]:
        """The two servers storing the given message, ascending."""
        if not 1 <= message <= self.message_count:
            raise ValueError(f"no message {message} (have 1..{self.message_count})")
        return self.edges[message - 1]

    def storage_of(self, server: int) -> tuple[int, ...]:
        """Messages stored on a server, ascending."""
        if not 1 <= server <= self.n_servers:
            raise ValueError(f"no server {server} (have 1..{self.n_servers})")
        return tuple(
            k for k, (i, j) in enumerate(self.edges, start=1) if server in (i, j)
        )

    def to_json(self) -> dict:
        return {"kind": self.kind, "N": self.n_servers, "edges": [list(e) for e in self.edges]}


def build_graph(kind: str, n: int) -> Graph:
    """Path (n >= 2) or cycle (n >= 3) topology with canonical edge order."""
    if kind == "path":
        if n < 2:
            raise ValueError("path graphs need n >= 2")
        edges = tuple((i, i + 1) for i in range(1, n))
    elif kind == "cycle":
        if n < 3:
            raise ValueError("cycle graphs need n >= 3")
        edges = tuple((i, i + 1) for i in range(1, n)) + ((n, 1),)
    else:
        raise ValueError(f"unknown graph kind {kind!r} (expected 'path' or 'cycle')")
    return Graph(n_servers=n, edges=edges, kind=kind)


def validate_graph(graph: Graph) -> Optional[str]:
    """First structural violation as text, or None when the graph is sound.

    Checks: no self-loops, no duplicate edges (simplicity), connectivity, and
    that every message is stored on exactly two distinct servers (which in this
    representation is the loop/duplicate condition again, stated per message).
    """
    seen: set[tuple[int, int]] = set()
    for k, (i, j) in enumerate(graph.edges, start=1):
        if i == j:
            return f"message {k} is stored on a single server ({i}); need two distinct servers"
        if (i, j) in seen:
            return f"duplicate edge ({i},{j}); two messages share the same server pair"
        seen.add((i, j))
    if graph.message_count == 0:
        return "graph has no messages"
    # Connectivity by breadth-first search over the replication edges.
    adjacency: dict[int, list[int]] = {v: [] for v in range(1, graph.n_servers + 1)}
    for i, j in graph.edges:
        adjacency[i].append(j)
        adjacency[j].append(i)
    frontier = [1]
    reached = {1}
    while frontier:
        v = frontier.pop()
        for w in adjacency[v]:
            if w not in reached:
                reached.add(w)
                frontier.append(w)
    if len(reached) != graph.n_servers:
        missing = sorted(set(range(1, graph.n_servers + 1)) - reached)
        return f"graph is disconnected; servers {missing} unreachable from server 1"
    return None
