"""Side graph, taut turn paths, dual sides and the Euler weight of a path.

A turn path is a loop in one disk that alternates between turn arcs and
immersed paths in the disk boundary.  Between two consecutive arcs the path
runs inside a single long side of a handle; that stretch is the *middle* of
the side.  Arcs are nodes of the side graph and sides are its edges, so taut
turn paths are exactly the simple directed cycles of the per-disk graphs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .errors import OrientationIncoherent, PathExplosion
from .model import Layout, Point, ValidationReport, other_side

DEFAULT_PATH_CAP = 10**6


@dataclass(frozen=True)
class ArcRef:
    kind: str  # "turn" | "alpha"
    id: str
    forward: bool = True

    @classmethod
    def turn(cls, tid):
        return cls("turn", tid, True)

    @classmethod
    def alpha(cls, aid, forward=True):
        return cls("alpha", aid, forward)

    @property
    def is_turn(self):
        return self.kind == "turn"

    def reverse_alpha(self) -> "ArcRef":
        assert not self.is_turn
        return ArcRef("alpha", self.id, not self.forward)

    def __str__(self):
        if self.is_turn:
            return f"T:{self.id}"
        return f"A:{self.id}{'+' if self.forward else '-'}"

    @classmethod
    def parse(cls, text: str) -> "ArcRef":
        kind, rest = text.split(":", 1)
        if kind == "T":
            return cls.turn(rest)
        return cls.alpha(rest[:-1], rest[-1] == "+")


@dataclass(frozen=True)
class Segment:
    """Stretch of a long side between marked positions ``lo < hi``.

    It covers the slots ``lo .. hi - 1``; a single slot has ``hi == lo + 1``.
    """

    handle: str
    side: str
    lo: int
    hi: int

    @property
    def slots(self) -> range:
        return range(self.lo, self.hi)

    def __str__(self):
        return f"{self.handle}.{self.side}[{self.lo},{self.hi}]"


@dataclass(frozen=True)
class Side:
    first: ArcRef
    second: ArcRef
    middle: Segment
    disk: str

    def __str__(self):
        return f"({self.first},{self.second})@{self.middle}"


@dataclass(frozen=True)
class TurnPath:
    disk: str
    steps: tuple[ArcRef, ...]
    sides: tuple[Side, ...] = field(compare=False)

    @property
    def kappa(self) -> Fraction:
        return kappa(self)

    @property
    def label(self) -> str:
        return " ".join(str(s) for s in self.steps)

    def uses(self, arc: ArcRef) -> bool:
        return arc in self.steps


def arc_key(layout: Layout, arc: ArcRef):
    if arc.is_turn:
        return (0, layout.turn_rank[arc.id], 0)
    return (1, layout.alpha_rank[arc.id], 0 if arc.forward else 1)


def canonical_rotation(layout: Layout, steps) -> tuple:
    steps = tuple(steps)
    return min((steps[i:] + steps[:i] for i in range(len(steps))),
               key=lambda r: [arc_key(layout, a) for a in r])


class SideGraph:
    """Directed graph on arcs with side-labelled edges, one subgraph per disk.

    With ``single_slot=True`` a middle may not pass over an intermediate
    strand endpoint; the default admits every stretch inside one long side.
    """

    def __init__(self, layout: Layout, single_slot: bool = False):
        self.layout = layout
        self.single_slot = single_slot
        self.nodes = {d: [] for d in layout.disk_order}
        for t in layout.turn_arcs:
            self.nodes[t.disk].append(ArcRef.turn(t.id))
        for a in layout.alpha_order:
            disk = layout.alpha_disk[a][0]
            self.nodes[disk].extend([ArcRef.alpha(a, True), ArcRef.alpha(a, False)])
        for d in self.nodes:
            self.nodes[d].sort(key=lambda x: arc_key(layout, x))
        self.edges: dict[tuple[ArcRef, ArcRef], Side] = {}
        for d, nodes in self.nodes.items():
            for x in nodes:
                for side in self._sides_from(x, d):
                    key = (side.first, side.second)
                    assert key not in self.edges, key
                    self.edges[key] = side

    def _terminal(self, x: ArcRef):
        lay = self.layout
        if x.is_turn:
            p = lay.turn_arc_by_id[x.id].end
            return p, (1, -1)
        if x.forward:
            p = lay.alpha_end(x.id)
            return p, (lay.forward_step(p.handle, p.side),)
        p = lay.alpha_start(x.id)
        return p, (-lay.forward_step(p.handle, p.side),)

    def _sides_from(self, x: ArcRef, disk: str):
        lay = self.layout
        p, directions = self._terminal(x)
        last = lay.n_strands(p.handle) + 1
        for step in directions:
            q = p.position + step
            while 0 <= q <= last:
                if q in (0, last):
                    corner = Point(p.handle, p.side, q)
                    alpha, kind = lay.corner_alpha[corner]
                    y = ArcRef.alpha(alpha, kind == "start")
                    yield Side(x, y, Segment(p.handle, p.side, min(p.position, q),
                                             max(p.position, q)), disk)
                    break
                pt = Point(p.handle, p.side, q)
                if not lay.is_arrival(pt):
                    y = ArcRef.turn(lay.arc_starting_at[pt].id)
                    yield Side(x, y, Segment(p.handle, p.side, min(p.position, q),
                                             max(p.position, q)), disk)
                if self.single_slot:
                    break
                q += step

    def digraph(self, disk: str) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes[disk])
        for (x, y), side in self.edges.items():
            if side.disk == disk:
                g.add_edge(x, y, side=side)
        return g

    def side(self, x: ArcRef, y: ArcRef) -> Side | None:
        return self.edges.get((x, y))

    def successors(self, x: ArcRef) -> list[ArcRef]:
        return [y for (a, y) in self.edges if a == x]

    def dual(self, s: Side) -> Side:
        return dual(s, self.layout)

    def make_path(self, disk: str, steps) -> TurnPath:
        steps = canonical_rotation(self.layout, steps)
        n = len(steps)
        sides = tuple(self.edges[(steps[i], steps[(i + 1) % n])] for i in range(n))
        return TurnPath(disk, steps, sides)


def build_side_graph(report: ValidationReport, single_slot: bool = False) -> SideGraph:
    return SideGraph(report.require_valid(), single_slot=single_slot)


def arc_end_position(layout: Layout, arc: ArcRef) -> int:
    if arc.is_turn:
        return layout.turn_arc_by_id[arc.id].end.position
    return (layout.alpha_end(arc.id) if arc.forward else layout.alpha_start(arc.id)).position


def arc_start_position(layout: Layout, arc: ArcRef) -> int:
    if arc.is_turn:
        return layout.turn_arc_by_id[arc.id].start.position
    return (layout.alpha_start(arc.id) if arc.forward else layout.alpha_end(arc.id)).position


def dual(s: Side, layout: Layout) -> Side:
    """The side across the subrectangle bounded by ``s.middle``.

    The dual middle covers the same positions on the opposite long side and
    is traversed anti-parallel in handle coordinates.
    """
    h, sigma = s.middle.handle, s.middle.side
    s2 = other_side(sigma)
    p_in = arc_end_position(layout, s.first)
    p_out = arc_start_position(layout, s.second)
    last = layout.n_strands(h) + 1

    def arriving(pos):
        pt = Point(h, s2, pos)
        if pos in (0, last):
            alpha, kind = layout.corner_alpha[pt]
            return ArcRef.alpha(alpha, kind == "end")
        if not layout.is_arrival(pt):
            raise OrientationIncoherent(f"no turn arc ends at {pt} for dual of {s}")
        return ArcRef.turn(layout.arc_ending_at[pt].id)

    def leaving(pos):
        pt = Point(h, s2, pos)
        if pos in (0, last):
            alpha, kind = layout.corner_alpha[pt]
            return ArcRef.alpha(alpha, kind == "start")
        if layout.is_arrival(pt):
            raise OrientationIncoherent(f"no turn arc starts at {pt} for dual of {s}")
        return ArcRef.turn(layout.arc_starting_at[pt].id)

    first, second = arriving(p_out), leaving(p_in)
    for mine, theirs in ((s.first, second), (s.second, first)):
        if not mine.is_turn and mine.forward != theirs.forward:
            raise OrientationIncoherent(
                f"dual of {s} reverses an alpha arc; handle {h} is twisted")
    return Side(first, second, s.middle.__class__(h, s2, s.middle.lo, s.middle.hi),
                layout.side_disk(h, s2))


def enumerate_taut_turn_paths(report_or_graph, cap: int = DEFAULT_PATH_CAP,
                              single_slot: bool = False) -> list[TurnPath]:
    """All taut turn paths in canonical order (disk order, then least rotation)."""
    graph = report_or_graph
    if isinstance(report_or_graph, ValidationReport):
        graph = build_side_graph(report_or_graph, single_slot=single_slot)
    layout = graph.layout
    out = []
    for disk in layout.disk_order:
        found = []
        for cyc in nx.simple_cycles(graph.digraph(disk)):
            found.append(graph.make_path(disk, cyc))
            if len(out) + len(found) > cap:
                raise PathExplosion(len(out) + len(found), cap)
        found.sort(key=lambda p: [arc_key(layout, a) for a in p.steps])
        out.extend(found)
    return out


def brute_force_cycles(graph: SideGraph) -> set[tuple[str, tuple]]:
    """Every simple cycle by plain depth-first search, as (disk, canonical steps)."""
    layout = graph.layout
    succ = {}
    for (x, y) in graph.edges:
        succ.setdefault(x, []).append(y)
    seen = set()
    for disk, nodes in graph.nodes.items():
        for start in nodes:
            stack = [(start, [start])]
            while stack:
                node, path = stack.pop()
                for y in succ.get(node, ()):
                    if y == start:
                        seen.add((disk, canonical_rotation(layout, path)))
                    elif y not in path:
                        stack.append((y, path + [y]))
    return seen


def kappa(p: TurnPath) -> Fraction:
    return 1 - Fraction(len(p.sides), 2)
