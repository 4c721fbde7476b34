"""Graph and digraph types, random models, and edge-list file I/O.

Vertices are 1-based integers throughout (in memory and on disk).

Random models:
    * gen_boll_graph    - uniformly shuffle the edges of K_n, keep the shortest
                          prefix in which every vertex has degree >= 2.
    * gen_boll_digraph  - same over all arcs, stopping when every vertex has
                          in- and out-degree >= threshold (default 1).
    * gen_m_out         - exactly m random distinct out-arcs per vertex.
    * gen_in_out        - i random out-choices plus o random in-choices per
                          vertex, merged.
    * to_undirected     - forget orientation.

File format (see read_graph/write_graph):
    line 1: "g n m" (undirected) or "d n m" (directed)
    then m lines "u v", 1-based; lines starting with "#" are comments.
    Canonical write order is lexicographic.
"""

from __future__ import annotations

import random
from typing import Iterable, Union


class ParseError(ValueError):
    """Malformed graph/weight file; carries a 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Graph:
    """Simple undirected graph on vertices 1..n."""

    directed = False

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.adj: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
        self._edges: set[tuple[int, int]] = set()
        for u, v in edges:
            self.add_edge(u, v)

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"loop edge {u}-{v}")
        if not (1 <= u <= self.n and 1 <= v <= self.n):
            raise ValueError(f"vertex out of range in edge {u}-{v}")
        e = (u, v) if u < v else (v, u)
        if e in self._edges:
            raise ValueError(f"duplicate edge {u}-{v}")
        self._edges.add(e)
        self.adj[u].add(v)
        self.adj[v].add(u)

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> set[tuple[int, int]]:
        return self._edges

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def min_degree(self) -> int:
        return min(len(self.adj[v]) for v in self.adj)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    # Uniform membership interface shared with Digraph: an "arc" of an
    # undirected graph is either orientation of an edge.
    def has_arc(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def neighbors(self, v: int) -> set[int]:
        return self.adj[v]

    def copy(self) -> "Graph":
        return Graph(self.n, self._edges)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self._edges == other._edges
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


class Digraph:
    """Simple directed graph on vertices 1..n (no loops, no duplicate arcs)."""

    directed = True

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.out_adj: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
        self.in_adj: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
        self._arcs: set[tuple[int, int]] = set()
        for u, v in arcs:
            self.add_arc(u, v)

    def add_arc(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"loop arc ({u},{v})")
        if not (1 <= u <= self.n and 1 <= v <= self.n):
            raise ValueError(f"vertex out of range in arc ({u},{v})")
        if (u, v) in self._arcs:
            raise ValueError(f"duplicate arc ({u},{v})")
        self._arcs.add((u, v))
        self.out_adj[u].add(v)
        self.in_adj[v].add(u)

    @property
    def m(self) -> int:
        return len(self._arcs)

    @property
    def arcs(self) -> set[tuple[int, int]]:
        return self._arcs

    def outdeg(self, v: int) -> int:
        return len(self.out_adj[v])

    def indeg(self, v: int) -> int:
        return len(self.in_adj[v])

    def min_outdeg(self) -> int:
        return min(len(self.out_adj[v]) for v in self.out_adj)

    def min_indeg(self) -> int:
        return min(len(self.in_adj[v]) for v in self.in_adj)

    def has_arc(self, u: int, v: int) -> bool:
        return v in self.out_adj[u]

    def copy(self) -> "Digraph":
        return Digraph(self.n, self._arcs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Digraph)
            and self.n == other.n
            and self._arcs == other._arcs
        )

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"


AnyGraph = Union[Graph, Digraph]


def complete_graph(n: int) -> Graph:
    return Graph(n, ((u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)))


def complete_digraph(n: int) -> Digraph:
    return Digraph(
        n, ((u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v)
    )


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(v, v % n + 1) for v in range(1, n + 1)])


def _all_edges(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]


def _all_arcs(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]


def gen_boll_graph(n: int, seed: int) -> tuple[Graph, int]:
    """Random-permutation prefix of K_n's edges, stopped at min degree >= 2.

    Returns the graph and the stopping index m'' (number of edges kept).
    """
    if n < 3:
        raise ValueError("gen_boll_graph requires n >= 3")
    rng = random.Random(seed)
    universe = _all_edges(n)
    rng.shuffle(universe)
    g = Graph(n)
    deficient = n  # vertices with degree < 2
    m_stop = 0
    for u, v in universe:
        du, dv = len(g.adj[u]), len(g.adj[v])
        g.add_edge(u, v)
        m_stop += 1
        if du == 1:
            deficient -= 1
        if dv == 1:
            deficient -= 1
        if deficient == 0:
            break
    return g, m_stop


def gen_boll_digraph(
    n: int, seed: int, threshold: int = 1
) -> tuple[Digraph, int]:
    """Random-permutation prefix of all arcs, stopped when every vertex has
    in-degree and out-degree >= threshold (default 1)."""
    if n < 2:
        raise ValueError("gen_boll_digraph requires n >= 2")
    if threshold < 1 or threshold > n - 1:
        raise ValueError("threshold out of range")
    rng = random.Random(seed)
    universe = _all_arcs(n)
    rng.shuffle(universe)
    d = Digraph(n)
    deficient = 2 * n  # (vertex, side) pairs below threshold
    m_stop = 0
    for u, v in universe:
        ou, iv = len(d.out_adj[u]), len(d.in_adj[v])
        d.add_arc(u, v)
        m_stop += 1
        if ou == threshold - 1:
            deficient -= 1
        if iv == threshold - 1:
            deficient -= 1
        if deficient == 0:
            break
    return d, m_stop


def gen_m_out(n: int, m: int, seed: int) -> Digraph:
    """Exactly m distinct random out-arcs per vertex."""
    if not (1 <= m <= n - 1):
        raise ValueError("gen_m_out requires 1 <= m <= n-1")
    rng = random.Random(seed)
    d = Digraph(n)
    for v in range(1, n + 1):
        targets = [w for w in range(1, n + 1) if w != v]
        for w in rng.sample(targets, m):
            d.add_arc(v, w)
    return d


def gen_in_out(n: int, i: int, o: int, seed: int) -> Digraph:
    """i random out-choices and o random in-choices per vertex, merged."""
    if not (1 <= i <= n - 1 and 1 <= o <= n - 1):
        raise ValueError("gen_in_out requires 1 <= i,o <= n-1")
    rng = random.Random(seed)
    arcs: set[tuple[int, int]] = set()
    for v in range(1, n + 1):
        others = [w for w in range(1, n + 1) if w != v]
        for w in rng.sample(others, i):
            arcs.add((v, w))
        for w in rng.sample(others, o):
            arcs.add((w, v))
    return Digraph(n, arcs)


def to_undirected(d: Digraph) -> Graph:
    """Forget arc orientation; antiparallel arc pairs collapse to one edge."""
    g = Graph(d.n)
    for u, v in d.arcs:
        if not g.has_edge(u, v):
            g.add_edge(u, v)
    return g


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = {1}
    stack = [1]
    while stack:
        v = stack.pop()
        for w in g.adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


def is_strongly_connected(d: Digraph) -> bool:
    def reach(adj):
        seen = {1}
        stack = [1]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == d.n

    return reach(d.out_adj) and reach(d.in_adj)


def write_graph(g: AnyGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if g.directed:
            fh.write(f"d {g.n} {g.m}\n")
            pairs = sorted(g.arcs)
        else:
            fh.write(f"g {g.n} {g.m}\n")
            pairs = sorted(g.edges)
        for u, v in pairs:
            fh.write(f"{u} {v}\n")


def read_graph(path: str) -> AnyGraph:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    header = None
    header_line = 0
    g: AnyGraph | None = None
    expected = 0
    count = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 3 or parts[0] not in ("g", "d"):
                raise ParseError("expected header 'g n m' or 'd n m'", lineno)
            try:
                n, expected = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("non-integer header fields", lineno) from None
            if n < 1 or expected < 0:
                raise ParseError("header values out of range", lineno)
            header = parts[0]
            header_line = lineno
            g = Digraph(n) if header == "d" else Graph(n)
            continue
        if len(parts) != 2:
            raise ParseError("expected 'u v'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("non-integer vertex", lineno) from None
        try:
            if header == "d":
                g.add_arc(u, v)
            else:
                g.add_edge(u, v)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        count += 1
    if header is None:
        raise ParseError("empty file", 1)
    if count != expected:
        raise ParseError(
            f"header declares {expected} lines but found {count}", header_line
        )
    return g
