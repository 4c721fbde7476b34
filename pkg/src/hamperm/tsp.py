"""Weighted symmetric tours: good rotations, good move sets, local search.

A rotation or admissible move is "good" when the arcs it creates weigh
strictly less than the arcs it replaces, so every accepted step strictly
decreases the tour weight.  tsp_solve runs a greedy good-rotation sweep
(a 2-opt pass) to a local optimum, then repeatedly tries good admissible
moves composed with up to one (3-cycle) or two (POTDT) follow-up rotations,
committing a composite only when its net weight strictly improves; the
best tour seen is kept in a BestQueue.

Weights are exact (int or Fraction) so the strict comparisons never suffer
floating-point noise.  File format: line 1 "w n", then n rows of n numbers;
symmetry and a zero diagonal are validated on read.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .graphs import ParseError, complete_graph
from .tour import InadmissibleMove, Move, Tour

Weight = Union[int, Fraction]


class WeightMatrix:
    """Symmetric nonnegative weights with a zero diagonal, 1-based."""

    def __init__(self, rows: Sequence[Sequence[Weight]]):
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise ValueError("weight matrix must be square")
        self.n = n
        self.rows = [list(r) for r in rows]
        for i in range(n):
            if self.rows[i][i] != 0:
                raise ValueError(f"diagonal entry ({i + 1},{i + 1}) is nonzero")
            for j in range(n):
                if self.rows[i][j] != self.rows[j][i]:
                    raise ValueError(f"asymmetric at ({i + 1},{j + 1})")
                if self.rows[i][j] < 0:
                    raise ValueError(f"negative weight at ({i + 1},{j + 1})")

    def w(self, i: int, j: int) -> Weight:
        return self.rows[i - 1][j - 1]


def _parse_number(tok: str, lineno: int) -> Weight:
    try:
        return int(tok)
    except ValueError:
        try:
            return Fraction(tok)
        except ValueError:
            raise ParseError(f"bad number {tok!r}", lineno) from None


def read_weights(path: str) -> WeightMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    n = None
    rows: list[list[Weight]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "w":
                raise ParseError("expected header 'w n'", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError("non-integer size", lineno) from None
            if n < 1:
                raise ParseError("size out of range", lineno)
            continue
        if len(parts) != n:
            raise ParseError(f"expected {n} entries", lineno)
        rows.append([_parse_number(tok, lineno) for tok in parts])
    if n is None:
        raise ParseError("empty file", 1)
    if len(rows) != n:
        raise ParseError(f"expected {n} rows, found {len(rows)}", 1)
    try:
        return WeightMatrix(rows)
    except ValueError as exc:
        raise ParseError(str(exc), 1) from None


def write_weights(wm: WeightMatrix, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"w {wm.n}\n")
        for row in wm.rows:
            fh.write(" ".join(str(x) for x in row) + "\n")


@dataclass
class BestQueue:
    tour: Optional[list[int]] = None
    weight: Optional[Weight] = None

    def offer(self, tour: Sequence[int], weight: Weight) -> bool:
        if self.weight is None or weight < self.weight:
            self.tour = list(tour)
            self.weight = weight
            return True
        return False


def tour_weight(wm: WeightMatrix, t: Union[Tour, Sequence[int]]) -> Weight:
    seq = t.sequence() if isinstance(t, Tour) else list(t)
    if sorted(seq) != list(range(1, wm.n + 1)):
        raise ValueError("tour is not a permutation of 1..n")
    return sum(wm.w(seq[i], seq[(i + 1) % wm.n]) for i in range(wm.n))


def is_good_rotation(wm: WeightMatrix, t: Tour, x: int, y: int) -> bool:
    """Strict 2-opt gain: w[x,y] + w[H(x),H(y)] < w[x,H(x)] + w[y,H(y)]."""
    if y in (x, t.succ(x), t.pred(x)):
        raise ValueError(f"{x} and {y} are adjacent on the tour")
    hx, hy = t.succ(x), t.succ(y)
    return wm.w(x, y) + wm.w(hx, hy) < wm.w(x, hx) + wm.w(y, hy)


def is_good_set(wm: WeightMatrix, t: Tour, m: Move) -> bool:
    """Created arcs strictly outweighed by the arcs they replace."""
    if not t.admissible(m):
        raise InadmissibleMove(f"{m} is not admissible on the tour")
    new_sum = sum(wm.w(u, v) for u, v in t.new_arcs(m))
    old_sum = sum(wm.w(u, v) for u, v in t.replaced_arcs(m))
    return new_sum < old_sum


# --------------------------------------------------------------------------
# local search
# --------------------------------------------------------------------------


def _rotation_sweep(wm: WeightMatrix, t: Tour, trace: list) -> None:
    """Apply good rotations until none exists (a full 2-opt pass)."""
    n = wm.n
    improved = True
    while improved:
        improved = False
        for x in range(1, n + 1):
            for y in range(1, n + 1):
                if y in (x, t.succ(x), t.pred(x)):
                    continue
                if is_good_rotation(wm, t, x, y):
                    t.rotate(x, y)
                    trace.append(("rotation", (x, y), tour_weight(wm, t)))
                    improved = True


def _good_composite(
    wm: WeightMatrix,
    t: Tour,
    rng: random.Random,
    potdt_samples: int,
) -> Optional[Tour]:
    """One strictly improving composite: an admissible move followed by up
    to one (3-cycle) or two (POTDT) good rotations, committed atomically."""
    n = wm.n
    base = tour_weight(wm, t)

    def attempt(m: Move, extra_rotations: int) -> Optional[Tour]:
        t2 = t.copy()
        t2.apply(m)
        for _ in range(extra_rotations):
            gain = None
            for x in set(m.verts):
                for y in range(1, n + 1):
                    if y in (x, t2.succ(x), t2.pred(x)):
                        continue
                    if is_good_rotation(wm, t2, x, y):
                        gain = (x, y)
                        break
                if gain:
                    break
            if not gain:
                break
            t2.rotate(*gain)
        return t2 if tour_weight(wm, t2) < base else None

    for a in range(1, n + 1):
        for b in range(1, n + 1):
            for c in range(1, n + 1):
                if len({a, b, c}) < 3 or not t.clockwise(a, b, c):
                    continue
                got = attempt(Move.cycle3(a, b, c), 1)
                if got is not None:
                    return got
    for _ in range(potdt_samples):
        a, c, b, d = rng.sample(range(1, n + 1), 4)
        if not t.interlace(a, c, b, d):
            continue
        got = attempt(Move.potdt(a, c, b, d), 2)
        if got is not None:
            return got
    return None


def tsp_solve(
    wm: WeightMatrix, seed: int, budget: Optional[int] = None
) -> tuple[list[int], Weight, list]:
    """Seeded local search; returns (tour, weight, trace of accepted steps).

    The returned weight equals tour_weight of the returned tour and never
    exceeds the starting weight; every accepted step strictly decreases it.
    """
    n = wm.n
    if n < 4:
        raise ValueError("tsp_solve requires n >= 4")
    if budget is None:
        budget = 20 * n
    rng = random.Random(seed)
    host = complete_graph(n)
    verts = list(range(1, n + 1))
    rng.shuffle(verts)
    t = Tour(host, verts)
    trace: list = [("start", None, tour_weight(wm, t))]
    best = BestQueue()
    best.offer(t.sequence_from(1), tour_weight(wm, t))
    _rotation_sweep(wm, t, trace)
    best.offer(t.sequence_from(1), tour_weight(wm, t))
    for _ in range(budget):
        nxt = _good_composite(wm, t, rng, potdt_samples=4 * n * n)
        if nxt is None:
            break
        t = nxt
        trace.append(("composite", None, tour_weight(wm, t)))
        _rotation_sweep(wm, t, trace)
        best.offer(t.sequence_from(1), tour_weight(wm, t))
    return best.tour, best.weight, trace
