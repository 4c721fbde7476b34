"""Degree-2 subpath contraction.

Any Hamilton circuit must traverse every vertex of degree 2 (digraphs:
in-degree or out-degree 1) through its incident edges, so maximal chains of
such vertices are forced onto every circuit.  This module

    * finds those chains to a fixed point (forcing two edges at a vertex
      deletes its remaining edges, which can force more),
    * replaces each chain by a single "2-vertex" whose two attachment sides
      are the chain's endpoint vertices (digraphs: fixed initial/terminal
      sides),
    * deletes edges/arcs that join a chain's two endpoints directly (they
      would skip the chain interior and can lie on no circuit), and
    * expands a circuit of the contracted graph back to the host, orienting
      each chain by which side the circuit enters.

Infeasibility discovered during reduction (a vertex with three forced
edges, a vertex out of usable edges, or a forced cycle that does not span
the graph) proves the host non-Hamiltonian and raises ContractError.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .graphs import AnyGraph, Digraph, Graph


class ContractError(Exception):
    """The reduction proved the host non-Hamiltonian."""


class IsolatedCycleError(ContractError):
    """A forced cycle exists that does not span the vertex set."""


class ExpandError(ValueError):
    """The given circuit cannot be oriented through the 2-vertices."""


@dataclass(frozen=True)
class TwoPath:
    """A maximal forced chain [v_a, ..., v_a'] (endpoints included)."""

    vertices: tuple[int, ...]
    directed: bool

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def interior(self) -> tuple[int, ...]:
        return self.vertices[1:-1]


@dataclass
class ContractedGraph:
    host: AnyGraph
    graph: AnyGraph  # the contracted graph over new ids 1..n'
    elements: dict[int, Union[int, TwoPath]]  # new id -> host vertex | chain
    to_new: dict[int, int]  # non-interior host vertex -> new id
    two_paths: list[TwoPath]
    deleted: set[tuple]  # host edges/arcs removed by the reduction
    forced_circuit: Optional[list[int]] = None  # set when the host is one
    # forced cycle (the degenerate "whole graph is a chain" case)

    @property
    def is_identity(self) -> bool:
        return not self.two_paths and self.forced_circuit is None

    def sides(self, new_id: int) -> tuple[int, int]:
        """The two attachment sides (endpoint host vertices) of a 2-vertex."""
        el = self.elements[new_id]
        if isinstance(el, TwoPath):
            return el.start, el.end
        raise ValueError(f"{new_id} is not a 2-vertex")


# --------------------------------------------------------------------------
# reduction
# --------------------------------------------------------------------------


def _reduce_graph(g: Graph):
    adj = {v: set(g.adj[v]) for v in g.adj}
    deleted: set[tuple[int, int]] = set()
    n = g.n

    def delete(u, v):
        adj[u].discard(v)
        adj[v].discard(u)
        deleted.add((u, v) if u < v else (v, u))

    while True:
        changed = False
        for v in adj:
            if len(adj[v]) < 2:
                raise ContractError(f"vertex {v} has fewer than 2 usable edges")
        # edges incident to a degree-2 vertex are forced
        forced: dict[int, set[int]] = {v: set() for v in adj}
        for v in adj:
            if len(adj[v]) == 2:
                for w in adj[v]:
                    forced[v].add(w)
                    forced[w].add(v)
        for v in adj:
            if len(forced[v]) > 2:
                raise ContractError(f"vertex {v} has {len(forced[v])} forced edges")
        for v in list(adj):
            if len(forced[v]) == 2 and len(adj[v]) > 2:
                for w in list(adj[v]):
                    if w not in forced[v]:
                        delete(v, w)
                        changed = True
        if changed:
            continue
        # stable: walk chains of degree-2 vertices
        chains: list[list[int]] = []
        forced_cycle: Optional[list[int]] = None
        seen: set[int] = set()
        for s in adj:
            if len(adj[s]) != 2 or s in seen:
                continue
            # walk in one direction to an endpoint or back to s
            path = [s]
            seen.add(s)
            prev, cur = s, next(iter(adj[s]))
            while len(adj[cur]) == 2 and cur != s:
                path.append(cur)
                seen.add(cur)
                nxts = [w for w in adj[cur] if w != prev]
                prev, cur = cur, nxts[0]
            if cur == s:  # closed cycle of degree-2 vertices
                if len(path) == n:
                    forced_cycle = path
                    chains = []
                    break
                raise IsolatedCycleError(
                    f"forced cycle on {len(path)} of {n} vertices"
                )
            path.append(cur)  # first endpoint
            # walk the other direction from s
            prev, cur = s, [w for w in adj[s] if w != path[1]][0]
            head = []
            while len(adj[cur]) == 2:
                head.append(cur)
                seen.add(cur)
                nxts = [w for w in adj[cur] if w != prev]
                prev, cur = cur, nxts[0]
            head.append(cur)
            chain = list(reversed(head)) + path
            if chain[0] == chain[-1]:
                # both walks reached the same endpoint: forced cycle through
                # one junction vertex; spanning iff it covers everything
                if len(chain) - 1 == n:
                    forced_cycle = chain[:-1]
                    chains = []
                    break
                raise IsolatedCycleError(
                    f"forced cycle on {len(chain) - 1} of {n} vertices"
                )
            chains.append(chain)
        if forced_cycle is not None:
            return adj, deleted, [], forced_cycle
        # delete direct endpoint-to-endpoint edges (they skip the interior)
        for chain in chains:
            p, q = chain[0], chain[-1]
            if len(chain) >= 3 and q in adj[p]:
                delete(p, q)
                changed = True
        if not changed:
            return adj, deleted, chains, None


def _reduce_digraph(d: Digraph):
    out = {v: set(d.out_adj[v]) for v in d.out_adj}
    inn = {v: set(d.in_adj[v]) for v in d.in_adj}
    deleted: set[tuple[int, int]] = set()
    n = d.n

    def delete(u, v):
        out[u].discard(v)
        inn[v].discard(u)
        deleted.add((u, v))

    while True:
        changed = False
        for v in out:
            if not out[v] or not inn[v]:
                raise ContractError(f"vertex {v} has no usable in- or out-arc")
        for w in list(inn):
            if len(inn[w]) == 1:
                (u,) = inn[w]
                if len(out[u]) > 1:
                    for z in list(out[u]):
                        if z != w:
                            delete(u, z)
                    changed = True
        for u in list(out):
            if len(out[u]) == 1:
                (w,) = out[u]
                if len(inn[w]) > 1:
                    for z in list(inn[w]):
                        if z != u:
                            delete(z, w)
                    changed = True
        if changed:
            continue
        # forced arcs now have unique out at the tail and unique in at the head
        forced_out = {u: next(iter(out[u])) for u in out if len(out[u]) == 1}
        forced_in = {w for w in inn if len(inn[w]) == 1}
        chains: list[list[int]] = []
        forced_cycle: Optional[list[int]] = None
        seen: set[int] = set()
        for s in forced_out:
            if s in seen:
                continue
            # rewind to the start of this forced path (or detect a cycle)
            start = s
            while start in forced_in:
                (u,) = inn[start]
                if u in forced_out and forced_out[u] == start:
                    if u == s:
                        break  # closed forced cycle
                    start = u
                else:
                    break
            if start in forced_in and next(iter(inn[start])) == s and start != s:
                pass
            # walk forward
            path = [start]
            seen.add(start)
            cur = start
            closed = False
            while cur in forced_out:
                nxt = forced_out[cur]
                if nxt == start:
                    closed = True
                    break
                if nxt in seen:
                    break
                path.append(nxt)
                seen.add(nxt)
                cur = nxt
            if closed:
                if len(path) == n:
                    forced_cycle = path
                    chains = []
                    break
                raise IsolatedCycleError(
                    f"forced cycle on {len(path)} of {n} vertices"
                )
            if len(path) >= 2:
                chains.append(path)
        if forced_cycle is not None:
            return (out, inn), deleted, [], forced_cycle
        for chain in chains:
            p, q = chain[0], chain[-1]
            if p in out[q]:
                delete(q, p)
                changed = True
            if len(chain) >= 3 and q in out[p]:
                delete(p, q)
                changed = True
        if not changed:
            return (out, inn), deleted, chains, None


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------


def find_two_paths(g: AnyGraph) -> list[TwoPath]:
    """Maximal forced chains of g, endpoints included.

    The degenerate case where the forced structure is a spanning cycle
    returns a single closed TwoPath (first vertex repeated last); an
    un-spanning forced cycle raises IsolatedCycleError.
    """
    if g.directed:
        _, _, chains, cyc = _reduce_digraph(g)
    else:
        _, _, chains, cyc = _reduce_graph(g)
    if cyc is not None:
        return [TwoPath(tuple(cyc + cyc[:1]), g.directed)]
    return [TwoPath(tuple(c), g.directed) for c in chains]


def contract(g: AnyGraph) -> ContractedGraph:
    if g.directed:
        (out, _inn), deleted, chains, cyc = _reduce_digraph(g)
        remaining = [(u, v) for u in out for v in out[u]]
    else:
        adj, deleted, chains, cyc = _reduce_graph(g)
        remaining = [(u, v) for u in adj for v in adj[u] if u < v]
    two_paths = [TwoPath(tuple(c), g.directed) for c in chains]
    if cyc is not None:
        # whole host collapses to one forced circuit
        trivial = Digraph(1) if g.directed else Graph(1)
        return ContractedGraph(
            host=g,
            graph=trivial,
            elements={1: cyc[0]},
            to_new={cyc[0]: 1},
            two_paths=[],
            deleted=deleted,
            forced_circuit=list(cyc),
        )
    interior: set[int] = set()
    owner: dict[int, int] = {}  # endpoint host vertex -> chain index
    for idx, tp in enumerate(two_paths):
        interior.update(tp.interior)
        owner[tp.start] = idx
        owner[tp.end] = idx
    ordinary = sorted(
        v for v in range(1, g.n + 1) if v not in interior and v not in owner
    )
    elements: dict[int, Union[int, TwoPath]] = {}
    to_new: dict[int, int] = {}
    nid = 0
    for v in ordinary:
        nid += 1
        elements[nid] = v
        to_new[v] = nid
    chain_ids: dict[int, int] = {}
    for idx, tp in enumerate(sorted(two_paths, key=lambda tp: min(tp.vertices))):
        nid += 1
        elements[nid] = tp
        chain_ids[two_paths.index(tp)] = nid
        for e in (tp.start, tp.end):
            to_new[e] = nid
    cg_graph: AnyGraph = Digraph(nid) if g.directed else Graph(nid)
    for u, v in remaining:
        if u in interior or v in interior:
            continue
        nu, nv = to_new[u], to_new[v]
        if nu == nv:
            continue
        if g.directed:
            if not cg_graph.has_arc(nu, nv):
                cg_graph.add_arc(nu, nv)
        else:
            if not cg_graph.has_edge(nu, nv):
                cg_graph.add_edge(nu, nv)
    return ContractedGraph(
        host=g,
        graph=cg_graph,
        elements=elements,
        to_new=to_new,
        two_paths=two_paths,
        deleted=deleted,
    )


def _entry_exit_states(el: Union[int, TwoPath], directed: bool):
    if isinstance(el, TwoPath):
        if directed:
            return [(el.start, el.end)]
        if el.start == el.end:  # single-vertex chain cannot occur, but guard
            return [(el.start, el.end)]
        return [(el.start, el.end), (el.end, el.start)]
    return [(el, el)]


def expand(circuit: list[int], cg: ContractedGraph) -> list[int]:
    """Map a Hamilton circuit of the contracted graph back to the host.

    Each 2-vertex is oriented by which side the circuit enters; if no
    consistent orientation of all 2-vertices exists (a circuit entering and
    leaving some 2-vertex on the same side), ExpandError is raised.
    """
    if cg.forced_circuit is not None:
        return list(cg.forced_circuit)
    host = cg.host
    k = len(circuit)
    if sorted(circuit) != sorted(cg.elements):
        raise ExpandError("input is not a permutation of the contracted vertices")
    states = [
        _entry_exit_states(cg.elements[x], host.directed) for x in circuit
    ]
    # DP around the cycle over (entry, exit) orientations of each element.
    best: Optional[list[tuple[int, int]]] = None
    for s0 in states[0]:
        feasible: list[dict[tuple[int, int], tuple[int, int]]] = [{s0: s0}]
        ok = True
        for i in range(1, k):
            layer: dict[tuple[int, int], tuple[int, int]] = {}
            for s in states[i]:
                for pstate in feasible[i - 1]:
                    if host.has_arc(pstate[1], s[0]):
                        layer[s] = pstate
                        break
            if not layer:
                ok = False
                break
            feasible.append(layer)
        if not ok:
            continue
        # close the cycle
        for last in feasible[-1]:
            if host.has_arc(last[1], s0[0]):
                chosen = [last]
                for i in range(k - 1, 0, -1):
                    chosen.append(feasible[i][chosen[-1]])
                chosen.reverse()
                best = chosen
                break
        if best:
            break
    if not best:
        raise ExpandError("no consistent 2-vertex orientation (one-side rule)")
    out: list[int] = []
    for x, (entry, _exit) in zip(circuit, best):
        el = cg.elements[x]
        if isinstance(el, TwoPath):
            seq = list(el.vertices)
            if entry != el.start:
                seq.reverse()
            out.extend(seq)
        else:
            out.append(el)
    return out
