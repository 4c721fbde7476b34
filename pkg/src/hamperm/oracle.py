"""Ground truth at desk scale.

Three independent ways to reason about Hamilton circuits on small hosts:

    * brute_force_circuits - exhaustive backtracking (n <= 12), canonicalized.
    * sigma / constructive_step / converge - the constructive distance
      argument: sigma = t^{-1} o target measures how far a tour is from a
      target circuit; each step applies one admissible move built from
      sigma's cycle structure and removes at least two moved points, so a
      complement-start tour (every tour edge outside the host) reaches the
      target in at most ceil(n/2) moves without backtracking.
    * enumerate_all - breadth-wise branching on every admissible move whose
      two lead arcs land in the host; within ceil(n/2) levels this visits
      every circuit, and must agree with brute force exactly.

The constructive machinery never consults the host to make progress: the
move built from sigma exists for purely cyclic-order reasons, so it also
powers enumeration from an arbitrary start.  GEN mode on converge() skips
the complement-start requirement for experiments; no step-count guarantee
then applies.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .graphs import AnyGraph, Graph
from .tour import InadmissibleMove, Move, Tour

BRUTE_FORCE_CAP = 12
ENUMERATE_CAP = 10


class OracleError(ValueError):
    pass


class RegimeError(OracleError):
    """The starting tour violates the complement-start requirement."""


# --------------------------------------------------------------------------
# canonical circuit forms
# --------------------------------------------------------------------------


def canonical_circuit(seq: Sequence[int], directed: bool) -> tuple[int, ...]:
    """Least rotation (and, undirected, reflection) starting at vertex 1."""
    seq = list(seq)
    i = seq.index(1)
    rot = tuple(seq[i:] + seq[:i])
    if directed:
        return rot
    rev = (rot[0],) + tuple(reversed(rot[1:]))
    return min(rot, rev)


def verify_circuit(g: AnyGraph, seq: Sequence[int]) -> bool:
    """True iff seq is a Hamilton circuit of g (a permutation of 1..n whose
    consecutive pairs, cyclically, are all edges/arcs of g)."""
    if len(seq) != g.n or sorted(seq) != list(range(1, g.n + 1)):
        return False
    return all(g.has_arc(seq[i], seq[(i + 1) % g.n]) for i in range(g.n))


def brute_force_circuits(g: AnyGraph) -> list[tuple[int, ...]]:
    """All Hamilton circuits of g, canonicalized and sorted.  n <= 12."""
    if g.n > BRUTE_FORCE_CAP:
        raise OracleError(
            f"brute force is capped at n <= {BRUTE_FORCE_CAP} (got n={g.n}); "
            "use the solver for larger hosts"
        )
    n = g.n
    if n == 1:
        return []
    succ_of = (lambda v: g.out_adj[v]) if g.directed else (lambda v: g.adj[v])
    pred_of = (lambda v: g.in_adj[v]) if g.directed else (lambda v: g.adj[v])
    found: set[tuple[int, ...]] = set()
    path = [1]
    used = {1}

    def extend() -> None:
        v = path[-1]
        if len(path) == n:
            if 1 in succ_of(v):
                found.add(canonical_circuit(path, g.directed))
            return
        for w in succ_of(v):
            if w not in used:
                used.add(w)
                path.append(w)
                extend()
                path.pop()
                used.discard(w)

    if n >= 3 or (n == 2 and g.directed):
        extend()
    if n == 2 and not g.directed:
        return []  # a single edge is not a circuit
    return sorted(found)


# --------------------------------------------------------------------------
# sigma decomposition and the constructive step
# --------------------------------------------------------------------------


@dataclass
class SigmaDecomposition:
    """sigma = t^{-1} o target, so that t o sigma = target pointwise."""

    tour: Tour
    target: tuple[int, ...]
    target_succ: dict[int, int]
    cycles: list[tuple[int, ...]] = field(default_factory=list)
    moved: frozenset[int] = frozenset()

    @property
    def size(self) -> int:
        return len(self.moved)

    def sigma_of(self, v: int) -> int:
        return self.tour.pred(self.target_succ[v])


def sigma(t: Tour, target: Sequence[int]) -> SigmaDecomposition:
    host = t.host
    if not verify_circuit(host, target):
        raise OracleError("target is not a Hamilton circuit of the host")
    target = tuple(target)
    n = host.n
    tsucc = {target[i]: target[(i + 1) % n] for i in range(n)}
    smap = {v: t.pred(tsucc[v]) for v in range(1, n + 1)}
    moved = frozenset(v for v in smap if smap[v] != v)
    cycles: list[tuple[int, ...]] = []
    seen: set[int] = set()
    for v in sorted(moved):
        if v in seen:
            continue
        cyc = [v]
        seen.add(v)
        w = smap[v]
        while w != v:
            cyc.append(w)
            seen.add(w)
            w = smap[w]
        cycles.append(tuple(cyc))
    return SigmaDecomposition(t, target, tsucc, cycles, moved)


def _residual_ok(sd: SigmaDecomposition, point: int, value: int) -> bool:
    """A residual created arc (point -> value) is regime-preserving if it is
    a target arc or lies outside the host."""
    return sd.target_succ[point] == value or not sd.tour.host.has_arc(point, value)


def admissible_moves_from_sigma(sd: SigmaDecomposition) -> list[Move]:
    """Every admissible move the sigma structure offers, regime-preserving
    candidates first, 3-cycles before POTDTs."""
    t = sd.tour
    three: list[tuple[bool, Move]] = []
    for cyc in sd.cycles:
        k = len(cyc)
        if k < 3:
            continue
        for i in range(k):
            a, b, c = cyc[i], cyc[(i + 1) % k], cyc[(i + 2) % k]
            if t.clockwise(a, b, c):
                keep = _residual_ok(sd, c, t.succ(a))
                three.append((keep, Move.cycle3(a, b, c)))
    arcs = [(v, sd.sigma_of(v)) for cyc in sd.cycles for v in cyc]
    pairs: list[tuple[bool, Move]] = []
    for i, (a, c) in enumerate(arcs):
        for b, d in arcs[i + 1 :]:
            if len({a, b, c, d}) < 4:
                continue
            if t.interlace(a, c, b, d):
                keep = _residual_ok(sd, c, t.succ(a)) and _residual_ok(
                    sd, d, t.succ(b)
                )
                pairs.append((keep, Move.potdt(a, c, b, d)))
    ranked = [m for keep, m in three if keep]
    ranked += [m for keep, m in pairs if keep]
    ranked += [m for keep, m in three if not keep]
    ranked += [m for keep, m in pairs if not keep]
    return ranked


def constructive_step(sd: SigmaDecomposition) -> Move:
    """One admissible move, built from sigma, that lowers |sigma| by >= 2."""
    if sd.size == 0:
        raise OracleError("sigma is the identity; nothing to do")
    moves = admissible_moves_from_sigma(sd)
    if not moves:
        raise AssertionError(
            "no admissible move found from a nonidentity sigma; "
            "this is unreachable for circuit targets and indicates a bug"
        )
    return moves[0]


def complement_start_tour(
    g: AnyGraph, seed: int, tries: int = 64
) -> Optional[Tour]:
    """A seeded random tour all of whose arcs avoid g, or None if the
    complement of g has no Hamilton circuit."""
    rng = random.Random(seed)
    n = g.n
    verts = list(range(1, n + 1))

    def anti_succ(v: int) -> list[int]:
        return [w for w in verts if w != v and not g.has_arc(v, w)]

    # cheap randomized attempts first
    for _ in range(tries):
        rng.shuffle(verts)
        if all(
            not g.has_arc(verts[i], verts[(i + 1) % n]) for i in range(n)
        ):
            return Tour(g, list(verts))
    # exhaustive backtracking in the complement, in seeded random order
    verts.sort()
    order = [1]
    used = {1}

    def extend() -> Optional[list[int]]:
        v = order[-1]
        cands = [w for w in anti_succ(v) if w not in used]
        rng.shuffle(cands)
        for w in cands:
            order.append(w)
            used.add(w)
            if len(order) == n:
                if not g.has_arc(w, 1):
                    return list(order)
            else:
                got = extend()
                if got:
                    return got
            order.pop()
            used.discard(w)
        return None

    res = extend()
    return Tour(g, res) if res else None


def converge(
    g: AnyGraph,
    target: Sequence[int],
    seed: int,
    start: Optional[Sequence[int]] = None,
    gen_mode: bool = False,
) -> list[Move]:
    """Moves taking a complement-start tour of g to the target circuit.

    With gen_mode the start may be arbitrary; each vertex then seeds a move
    at most once (tracked, best-effort) and no step bound is promised.
    """
    if not verify_circuit(g, target):
        raise OracleError("target is not a Hamilton circuit of the host")
    n = g.n
    if start is not None:
        t = Tour(g, list(start))
    else:
        t = complement_start_tour(g, seed)
        if t is None:
            raise OracleError(
                "the complement of the host has no Hamilton circuit; "
                "supply a start tour with gen_mode"
            )
    if not gen_mode:
        bad = [v for v in range(1, n + 1) if g.has_arc(v, t.succ(v))]
        if bad:
            raise RegimeError(
                f"start tour shares arcs with the host at {bad[:4]}; "
                "use gen_mode for arbitrary starts"
            )
    moves: list[Move] = []
    seeded: set[int] = set()
    cap = math.ceil(n / 2) if not gen_mode else n
    sd = sigma(t, target)
    while sd.size:
        if len(moves) > cap:
            raise AssertionError("convergence exceeded its step bound")
        if gen_mode:
            all_moves = admissible_moves_from_sigma(sd)
            if not all_moves:
                raise AssertionError(
                    "no admissible move found from a nonidentity sigma"
                )
            fresh = [m for m in all_moves if m.verts[0] not in seeded]
            m = (fresh or all_moves)[0]
        else:
            m = constructive_step(sd)
        seeded.add(m.verts[0])
        before = sd.size
        t.apply(m)
        moves.append(m)
        sd = sigma(t, target)
        if not gen_mode and sd.size > before - 2:
            raise AssertionError("constructive step failed to drop |sigma| by 2")
    return moves


# --------------------------------------------------------------------------
# breadth-wise enumeration of all circuits
# --------------------------------------------------------------------------


def _splice_pairs(g: AnyGraph, order: list[int], pos: dict[int, int]):
    """All (a, b) with b = pred(x) for a host arc (a, x): the move lead
    positions whose created arc (a, old-succ(b)) lands in the host."""
    n = len(order)
    out = []
    nbrs = (lambda v: g.out_adj[v]) if g.directed else (lambda v: g.adj[v])
    for a in order:
        for x in nbrs(a):
            b = order[pos[x] - 1]  # pred(x); pos is 0-based, -1 wraps
            if b != a:
                out.append((a, b))
    return out


def _apply_mapping(order: list[int], pos: dict[int, int], mapping: dict[int, int]):
    """New order after composing the tour with the given permutation:
    succ'(v) = succ(mapping[v]).  Returns None if the result splits."""
    n = len(order)
    new = [order[0]]
    v = order[0]
    for _ in range(n - 1):
        w = mapping.get(v, v)
        v = order[(pos[w] + 1) % n]
        new.append(v)
    w = mapping.get(v, v)
    if order[(pos[w] + 1) % n] != new[0] or len(set(new)) != n:
        return None
    return new


def enumerate_all(
    g: AnyGraph, depth_cap: Optional[int] = None
) -> list[tuple[int, ...]]:
    """All Hamilton circuits of g by breadth-wise branching.

    Start from the identity tour, treat every vertex as movable, branch on
    every admissible 3-cycle/POTDT whose lead created arcs are host arcs,
    and collect circuits within ceil(n/2) levels.  Must equal
    brute_force_circuits(g) as a set.
    """
    n = g.n
    if n > ENUMERATE_CAP:
        raise OracleError(
            f"enumerate_all is capped at n <= {ENUMERATE_CAP} (got n={g.n})"
        )
    if n < 3:
        return brute_force_circuits(g)
    if depth_cap is None:
        depth_cap = math.ceil(n / 2)
    start = tuple(range(1, n + 1))
    seen: set[tuple[int, ...]] = set()
    results: set[tuple[int, ...]] = set()
    frontier = [start]
    seen.add(canonical_circuit(start, g.directed))
    if verify_circuit(g, start):
        results.add(canonical_circuit(start, g.directed))
    for _depth in range(depth_cap):
        nxt: list[tuple[int, ...]] = []
        for state in frontier:
            order = list(state)
            pos = {v: i for i, v in enumerate(order)}

            def clockwise(a, b, c):
                pa = pos[a]
                return (pos[b] - pa) % n < (pos[c] - pa) % n

            def interlace(a, c, b, d):
                pa = pos[a]
                qb, qc, qd = (
                    (pos[b] - pa) % n,
                    (pos[c] - pa) % n,
                    (pos[d] - pa) % n,
                )
                return (qb < qc) != (qd < qc)

            leads = _splice_pairs(g, order, pos)
            mappings: list[dict[int, int]] = []
            nbrs = (
                (lambda v: g.out_adj[v]) if g.directed else (lambda v: g.adj[v])
            )
            for a, b in leads:
                # 3-cycles (a b c): lead arcs land at a and b
                for y in nbrs(b):
                    c = order[pos[y] - 1]
                    if c not in (a, b) and clockwise(a, b, c):
                        mappings.append({a: b, b: c, c: a})
            for i, (a, c) in enumerate(leads):
                for b, d in leads[i + 1 :]:
                    if len({a, b, c, d}) < 4:
                        continue
                    if interlace(a, c, b, d):
                        mappings.append({a: c, c: a, b: d, d: b})
            for mp in mappings:
                new = _apply_mapping(order, pos, mp)
                if new is None:
                    continue
                key = canonical_circuit(new, g.directed)
                if key in seen:
                    continue
                seen.add(key)
                if verify_circuit(g, new):
                    results.add(key)
                nxt.append(tuple(new))
        frontier = nxt
        if not frontier:
            break
    return sorted(results)
