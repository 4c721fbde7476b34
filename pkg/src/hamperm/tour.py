"""Pseudo-Hamilton circuits and the moves that transform them.

A Tour is a cyclic order (an n-cycle) over all vertices of a host graph or
digraph.  Consecutive pairs that are not realized by host edges/arcs are
pseudo-arcs; the registry of their initial vertices is kept incrementally.

Moves are admissible permutations: 3-cycles (a b c) and products of two
disjoint transpositions (a c)(b d) ("POTDT").  A move is admissible exactly
when composing it into the n-cycle yields another n-cycle, which is
equivalent to:

    * 3-cycle (a b c): the ordinals of a, b, c occur clockwise on the tour;
    * POTDT (a c)(b d): the chords [a,c] and [b,d] properly interlace.

Composition convention: applying move s to tour h yields h' = h . s, i.e.
h'(x) = h(s(x)).  Concretely a 3-cycle (a b c) rewires

    succ(a) <- succ(b),  succ(b) <- succ(c),  succ(c) <- succ(a)

and a POTDT (a c)(b d) rewires

    succ(a) <- succ(c),  succ(c) <- succ(a),
    succ(b) <- succ(d),  succ(d) <- succ(b).

Rotations (graph mode only) reverse the tour segment between v and w where
[v, w] is a host edge off the tour.

Abbreviations represent the current tour as a short list of runs of
base-tour ordinals, so a bounded number of moves can be applied and undone
cheaply before re-materializing ("rebasing") against a new base.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graphs import AnyGraph


class InadmissibleMove(ValueError):
    pass


class UnsupportedOperation(RuntimeError):
    pass


@dataclass(frozen=True)
class Move:
    """A 3-cycle (a b c) or a POTDT (a c)(b d).

    For kind "cycle3", verts = (a, b, c).
    For kind "potdt", verts = (a, c, b, d), meaning the product (a c)(b d).
    """

    kind: str  # "cycle3" | "potdt"
    verts: tuple[int, ...]

    @staticmethod
    def cycle3(a: int, b: int, c: int) -> "Move":
        if len({a, b, c}) != 3:
            raise ValueError("3-cycle vertices must be distinct")
        return Move("cycle3", (a, b, c))

    @staticmethod
    def potdt(a: int, c: int, b: int, d: int) -> "Move":
        if len({a, b, c, d}) != 4:
            raise ValueError("POTDT vertices must be distinct")
        return Move("potdt", (a, c, b, d))

    def perm(self) -> dict[int, int]:
        """The move as a permutation (only moved points)."""
        if self.kind == "cycle3":
            a, b, c = self.verts
            return {a: b, b: c, c: a}
        a, c, b, d = self.verts
        return {a: c, c: a, b: d, d: b}

    def inverse(self) -> "Move":
        if self.kind == "cycle3":
            a, b, c = self.verts
            return Move("cycle3", (a, c, b))
        return self  # a POTDT is its own inverse

    def canonical_key(self):
        """Equality key identifying a move with its cyclic/pair rewritings."""
        if self.kind == "cycle3":
            a, b, c = self.verts
            rots = [(a, b, c), (b, c, a), (c, a, b)]
            return ("cycle3", min(rots))
        a, c, b, d = self.verts
        p1 = (a, c) if a < c else (c, a)
        p2 = (b, d) if b < d else (d, b)
        return ("potdt", min(p1, p2), max(p1, p2))

    def __str__(self) -> str:
        if self.kind == "cycle3":
            return "(%d %d %d)" % self.verts
        a, c, b, d = self.verts
        return "(%d %d)(%d %d)" % (a, c, b, d)


class Tour:
    """A pseudo-Hamilton circuit over a host graph/digraph."""

    def __init__(self, host: AnyGraph, order: Sequence[int]):
        if sorted(order) != list(range(1, host.n + 1)):
            raise ValueError("order must be a permutation of 1..n")
        self.host = host
        self.order: list[int] = list(order)
        self.pos: dict[int, int] = {v: i for i, v in enumerate(self.order)}
        self.pseudo: set[int] = set()
        self._recount_pseudo()

    # ---------- basic accessors ----------

    @property
    def n(self) -> int:
        return len(self.order)

    def succ(self, v: int) -> int:
        i = self.pos[v] + 1
        return self.order[i if i < len(self.order) else 0]

    def pred(self, v: int) -> int:
        return self.order[self.pos[v] - 1]

    def ord(self, v: int) -> int:
        """1-based ordinal with ord(order[0]) = 1."""
        return self.pos[v] + 1

    def sequence(self) -> list[int]:
        return list(self.order)

    def sequence_from(self, v: int) -> list[int]:
        """The tour as a list starting at vertex v."""
        i = self.pos[v]
        return self.order[i:] + self.order[:i]

    def copy(self) -> "Tour":
        t = Tour.__new__(Tour)
        t.host = self.host
        t.order = list(self.order)
        t.pos = dict(self.pos)
        t.pseudo = set(self.pseudo)
        return t

    def same_cycle(self, other: "Tour") -> bool:
        """True if the two tours are the same cyclic order (same start or not)."""
        if self.n != other.n:
            return False
        return all(self.succ(v) == other.succ(v) for v in self.order)

    # ---------- pseudo registry ----------

    def _is_pseudo(self, v: int, w: int) -> bool:
        return not self.host.has_arc(v, w)

    def _recount_pseudo(self) -> None:
        self.pseudo = {v for v in self.order if self._is_pseudo(v, self.succ(v))}

    def _refresh_pseudo(self, vertices: Iterable[int]) -> None:
        for v in vertices:
            if self._is_pseudo(v, self.succ(v)):
                self.pseudo.add(v)
            else:
                self.pseudo.discard(v)

    def pseudo_vertices(self) -> set[int]:
        """Initial vertices of the current pseudo-arcs."""
        return self.pseudo

    def pseudo_arcs(self) -> set[tuple[int, int]]:
        return {(v, self.succ(v)) for v in self.pseudo}

    def is_circuit(self) -> bool:
        return not self.pseudo

    # ---------- cyclic order predicates ----------

    def clockwise(self, a: int, b: int, c: int) -> bool:
        """True iff a, b, c occur in clockwise cyclic order on the tour."""
        n = len(self.order)
        pa = self.pos[a]
        return (self.pos[b] - pa) % n < (self.pos[c] - pa) % n

    def interlace(self, a: int, c: int, b: int, d: int) -> bool:
        """True iff chords [a,c] and [b,d] properly interlace on the circle."""
        n = len(self.order)
        pa = self.pos[a]
        qc = (self.pos[c] - pa) % n
        qb = (self.pos[b] - pa) % n
        qd = (self.pos[d] - pa) % n
        return (qb < qc) != (qd < qc)

    # ---------- move application ----------

    def admissible(self, m: Move) -> bool:
        if m.kind == "cycle3":
            a, b, c = m.verts
            return self.clockwise(a, b, c)
        a, c, b, d = m.verts
        return self.interlace(a, c, b, d)

    def overlay(self, m: Move) -> dict[int, int]:
        """New successors the move installs (old arcs read before rewiring)."""
        p = m.perm()
        return {v: self.succ(p[v]) for v in p}

    def new_arcs(self, m: Move) -> list[tuple[int, int]]:
        ov = self.overlay(m)
        return [(v, ov[v]) for v in m.perm()]

    def replaced_arcs(self, m: Move) -> list[tuple[int, int]]:
        return [(v, self.succ(v)) for v in m.perm()]

    def apply(self, m: Move) -> "Tour":
        """Apply an admissible move in place; returns self."""
        if not self.admissible(m):
            raise InadmissibleMove(f"move {m} is not admissible on this tour")
        overlay = self.overlay(m)
        order = self.order
        pos = self.pos
        n = len(order)
        start = order[0]
        new_order = []
        v = start
        for _ in range(n):
            new_order.append(v)
            nxt = overlay.get(v)
            if nxt is None:
                i = pos[v] + 1
                nxt = order[i if i < n else 0]
            v = nxt
        if v != start:  # pragma: no cover - guarded by admissibility
            raise InadmissibleMove(f"move {m} does not yield a single n-cycle")
        self.order = new_order
        self.pos = {u: i for i, u in enumerate(new_order)}
        self._refresh_pseudo(m.perm())
        return self

    # ---------- rotation (graph mode) ----------

    def rotate(self, v: int, w: int) -> "Tour":
        """Reverse the segment succ(v)..w so the tour reads v, w, ..., succ(v).

        Requires [v, w] to be a host edge not on the tour; graph mode only.
        """
        if self.host.directed:
            raise UnsupportedOperation("rotations are undefined for digraphs")
        if w == v or w == self.succ(v) or w == self.pred(v):
            raise ValueError("rotation endpoints must be nonadjacent on the tour")
        if not self.host.has_arc(v, w):
            raise ValueError(f"[{v},{w}] is not a host edge")
        i = self.pos[v]
        if i != 0:
            self.order = self.order[i:] + self.order[:i]
            self.pos = {u: k for k, u in enumerate(self.order)}
        j = self.pos[w]
        seg = self.order[1 : j + 1]
        seg.reverse()
        self.order[1 : j + 1] = seg
        for k, u in enumerate(seg, start=1):
            self.pos[u] = k
        self._refresh_pseudo([v] + seg)
        return self

    # ---------- integrity / serialization ----------

    def check_invariants(self) -> None:
        n = len(self.order)
        assert sorted(self.order) == list(range(1, n + 1))
        for i, v in enumerate(self.order):
            assert self.pos[v] == i
            assert self.ord(self.succ(v)) == self.ord(v) % n + 1
        assert self.pseudo == {
            v for v in self.order if not self.host.has_arc(v, self.succ(v))
        }

    def to_text(self) -> str:
        lines = [" ".join(str(v) for v in self.order)]
        if self.pseudo:
            lines.append(
                " ".join(
                    f"{v}~{self.succ(v)}" for v in sorted(self.pseudo)
                )
            )
        return "\n".join(lines)


# ---------- module-level operation surface ----------


def admissible_3cycle(t: Tour, a: int, b: int, c: int) -> bool:
    if len({a, b, c}) != 3:
        raise ValueError("vertices must be distinct")
    return t.clockwise(a, b, c)


def admissible_potdt(t: Tour, a: int, c: int, b: int, d: int) -> bool:
    if len({a, b, c, d}) != 4:
        raise ValueError("vertices must be distinct")
    return t.interlace(a, c, b, d)


def apply_move(t: Tour, m: Move) -> Tour:
    return t.apply(m)


def rotate(t: Tour, v: int, w: int) -> Tour:
    return t.rotate(v, w)


def diff_score(t: Tour, m: Move) -> int:
    """DIFF = (host edges among the arcs m creates) - (arc vertices among m's
    vertices).  Higher is better."""
    e_s = sum(1 for u, w in t.new_arcs(m) if t.host.has_arc(u, w))
    a_s = sum(1 for v in m.perm() if v not in t.pseudo)
    return e_s - a_s


def passes_pseudo_filter(t: Tour, m: Move) -> bool:
    """Legality filter used by the solver: at most one of the arcs a move
    creates may be a pseudo-arc."""
    bad = sum(1 for u, w in t.new_arcs(m) if not t.host.has_arc(u, w))
    return bad <= 1


# ---------- abbreviations ----------


class AbbreviationError(ValueError):
    pass


class Abbreviation:
    """A tour represented as runs of ordinals over a frozen base tour.

    A run (a, b) denotes the base ordinals a..b traversed ascending when
    a <= b and descending (the "---" / minus-sign convention) when a > b.
    Moves and rotations splice O(1) runs each, so as long as the number of
    moves since the base is bounded the structure stays sparse; rebasing
    materializes and starts a fresh base.
    """

    def __init__(self, base: Tour):
        self.base_order = list(base.order)
        self.base_pos = {v: i for i, v in enumerate(self.base_order)}
        self.host = base.host
        self.runs: list[tuple[int, int]] = [(1, len(self.base_order))]
        self.move_count = 0

    # base ordinals are 1-based positions in base_order
    def _ord(self, v: int) -> int:
        return self.base_pos[v] + 1

    def _vertex(self, o: int) -> int:
        return self.base_order[o - 1]

    @staticmethod
    def _run_len(run: tuple[int, int]) -> int:
        return abs(run[1] - run[0]) + 1

    def _expand(self) -> list[int]:
        out: list[int] = []
        for a, b in self.runs:
            step = 1 if b >= a else -1
            out.extend(range(a, b + step, step))
        return out

    def _check(self) -> None:
        seq = self._expand()
        n = len(self.base_order)
        if sorted(seq) != list(range(1, n + 1)):
            raise AbbreviationError("corrupt run list")

    def ordinal_sequence(self) -> list[int]:
        return self._expand()

    def materialize(self) -> Tour:
        seq = [self._vertex(o) for o in self._expand()]
        return Tour(self.host, seq)

    # ---- run surgery ----

    def _locate(self, o: int) -> tuple[int, int]:
        """(run index, offset within run) for base ordinal o."""
        for i, (a, b) in enumerate(self.runs):
            if a <= b:
                if a <= o <= b:
                    return i, o - a
            else:
                if b <= o <= a:
                    return i, a - o
        raise AbbreviationError(f"ordinal {o} missing from runs")

    def _split_after(self, o: int) -> int:
        """Ensure a boundary right after ordinal o; return index of the run
        that ends with o."""
        i, off = self._locate(o)
        a, b = self.runs[i]
        step = 1 if b >= a else -1
        length = abs(b - a) + 1
        if off == length - 1:
            return i
        self.runs[i : i + 1] = [(a, o), (o + step, b)]
        return i

    def _cut_cyclic(self, o: int) -> None:
        """Rotate the run list so it begins right after ordinal o."""
        i = self._split_after(o)
        self.runs = self.runs[i + 1 :] + self.runs[: i + 1]

    def _normalize(self) -> None:
        """Rotate so the base's first vertex (ordinal 1) is first."""
        i, off = self._locate(1)
        a, b = self.runs[i]
        step = 1 if b >= a else -1
        if off > 0:
            self.runs[i : i + 1] = [(a, 1 - step), (1, b)]
            i += 1
        self.runs = self.runs[i:] + self.runs[:i]

    # ---- operations ----

    def apply_move(self, m: Move) -> None:
        perm = m.perm()
        cuts = {self._ord(v) for v in perm}
        for o in cuts:
            self._split_after(o)
        # Group the run list into chunks, each ending at a cut ordinal.
        boundaries = [i for i, (_, b) in enumerate(self.runs) if b in cuts]
        if len(boundaries) != len(cuts):
            raise AbbreviationError("cut vertices not at run boundaries")
        chunks: dict[int, list[tuple[int, int]]] = {}  # end ordinal -> runs
        order_of_cuts: list[int] = []  # cut ordinals in current cyclic order
        prev = boundaries[-1]
        nrun = len(self.runs)
        for idx in boundaries:
            start = (prev + 1) % nrun
            runs = []
            k = start
            while True:
                runs.append(self.runs[k])
                if k == idx:
                    break
                k = (k + 1) % nrun
            end = self.runs[idx][1]
            chunks[end] = runs
            order_of_cuts.append(end)
            prev = idx
        pos_in_cycle = {o: k for k, o in enumerate(order_of_cuts)}
        k_cuts = len(order_of_cuts)
        ord_of = {self._ord(v): v for v in perm}
        # Re-link: in h' = h . s the chunk after cut vertex u is the chunk
        # that used to begin at succ(s(u)), i.e. the chunk ending at the next
        # cut (in old cyclic order) after s(u).
        start_cut = order_of_cuts[0]
        seq_runs: list[tuple[int, int]] = list(chunks[start_cut])
        cur_end = start_cut
        for _ in range(k_cuts - 1):
            s_of_end = self._ord(perm[ord_of[cur_end]])
            cur_end = order_of_cuts[(pos_in_cycle[s_of_end] + 1) % k_cuts]
            seq_runs.extend(chunks[cur_end])
        self.runs = seq_runs
        self.move_count += 1
        self._normalize()

    def rotate(self, v: int, w: int) -> None:
        ov, ow = self._ord(v), self._ord(w)
        self._cut_cyclic(ov)  # list now begins at succ(v), ends at v
        i = self._split_after(ow)
        head = self.runs[: i + 1]
        tail = self.runs[i + 1 :]
        head = [(b, a) for (a, b) in reversed(head)]
        self.runs = head + tail
        self.move_count += 1
        self._normalize()

    # ---- rendering ----

    def render(self) -> str:
        """Sparse printed form: ascending runs as 'a … b', descending runs as
        'a --- b' (2-element runs printed in full)."""
        parts: list[str] = []
        for a, b in self.runs:
            if a == b:
                parts.append(str(a))
            elif abs(b - a) == 1:
                parts.extend([str(a), str(b)])
            elif b > a:
                parts.extend([str(a), "…", str(b)])
            else:
                parts.extend([str(a), "---", str(b)])
        return " ".join(parts)


def rebase(t: Tour) -> Abbreviation:
    return Abbreviation(t)


def materialize(a: Abbreviation) -> Tour:
    a._check()
    return a.materialize()
