"""Cellular structure on the closed surface and the null-homology test for the chain."""
from __future__ import annotations

from dataclasses import dataclass, field

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_decomp

from .model import AlphaRef, DecompositionSpec, Layout, Point, validate


@dataclass
class CellComplex:
    vertices: list = field(default_factory=list)
    edges: dict = field(default_factory=dict)  # name -> (tail, head)
    faces: dict = field(default_factory=dict)  # name -> {edge name: coefficient}

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def edge_index(self) -> dict:
        return {e: i for i, e in enumerate(self.edges)}

    def boundary2(self) -> list[list[int]]:
        idx = self.edge_index()
        mat = [[0] * len(self.faces) for _ in self.edges]
        for j, bd in enumerate(self.faces.values()):
            for e, c in bd.items():
                mat[idx[e]][j] += c
        return mat

    def boundary1(self, chain: dict) -> dict:
        out = {}
        for e, c in chain.items():
            tail, head = self.edges[e]
            out[head] = out.get(head, 0) + c
            out[tail] = out.get(tail, 0) - c
        return {v: c for v, c in out.items() if c}


def _add(acc: dict, key, c):
    acc[key] = acc.get(key, 0) + c
    if acc[key] == 0:
        del acc[key]


def disk_boundary_steps(layout: Layout, disk_id: str) -> list:
    """Disk boundary as ``(from_vertex, edge, sign, to_vertex)`` steps in boundary order."""
    disk = layout.spec.disks[layout.disk_order.index(disk_id)]
    steps = []
    for e in disk.boundary:
        if isinstance(e, AlphaRef):
            steps.append((layout.alpha_start(e.alpha), ("alpha", e.alpha), 1,
                          layout.alpha_end(e.alpha)))
            continue
        s = layout.n_strands(e.handle)
        ks = range(s, -1, -1) if e.reversed else range(s + 1)
        for k in ks:
            lo, hi = Point(e.handle, e.side, k), Point(e.handle, e.side, k + 1)
            if e.reversed:
                steps.append((hi, ("seg", e.handle, e.side, k), -1, lo))
            else:
                steps.append((lo, ("seg", e.handle, e.side, k), 1, hi))
    return steps


def build_cell_complex(layout: Layout) -> CellComplex:
    cx = CellComplex()
    spec = layout.spec
    for hid in layout.handle_order:
        s = layout.n_strands(hid)
        for side in ("A", "B"):
            cx.vertices.extend(Point(hid, side, k) for k in range(s + 2))
    for a in layout.alpha_order:
        cx.edges[("alpha", a)] = (layout.alpha_start(a), layout.alpha_end(a))

    def fibre(hid, j):
        s = layout.n_strands(hid)
        if j == 0:
            return ("end", hid, 0)
        if j == s + 1:
            return ("end", hid, 1)
        return ("strand", hid, j)

    for hid in layout.handle_order:
        s = layout.n_strands(hid)
        for side in ("A", "B"):
            for k in range(s + 1):
                cx.edges[("seg", hid, side, k)] = (Point(hid, side, k), Point(hid, side, k + 1))
        for e in (0, 1):
            cx.edges[("end", hid, e)] = (layout.corner(hid, e, "A"), layout.corner(hid, e, "B"))
        for k in range(1, s + 1):
            cx.edges[("strand", hid, k)] = (Point(hid, "A", k), Point(hid, "B", k))

    cycles = layout.derived_sigma1_cycles()
    b = len(cycles)
    genus1 = (2 - spec.sigma1.euler_char - b) // 2
    base = layout.alpha_start(cycles[0][0].alpha)
    for i in range(genus1):
        cx.edges[("aux", "a", i)] = (base, base)
        cx.edges[("aux", "b", i)] = (base, base)
    for j in range(1, b):
        cx.edges[("aux", "e", j)] = (base, layout.alpha_start(cycles[j][0].alpha))

    for d in spec.disks:
        bd = {}
        for _, edge, sign, _ in disk_boundary_steps(layout, d.id):
            _add(bd, edge, sign)
        cx.faces[("disk", d.id)] = bd
    for hid in layout.handle_order:
        s = layout.n_strands(hid)
        eps = 1 if layout.positive(hid) else -1
        for k in range(s + 1):
            bd = {}
            _add(bd, ("seg", hid, "A", k), eps)
            _add(bd, fibre(hid, k + 1), eps)
            _add(bd, ("seg", hid, "B", k), -eps)
            _add(bd, fibre(hid, k), -eps)
            cx.faces[("rect", hid, k)] = bd

    # Sigma1 as one polygon; the genus and connecting edges cancel in its boundary.
    bd = {}
    for cyc in cycles:
        for i, it in enumerate(cyc):
            if isinstance(it, AlphaRef):
                _add(bd, ("alpha", it.alpha), -1)
            else:
                prev = cyc[i - 1]
                arrive = layout.alpha_start(prev.alpha)
                _add(bd, ("end", it.handle, it.end), 1 if arrive.side == "A" else -1)
    cx.faces[("sigma1",)] = bd
    return cx


def chain_cycle(layout: Layout) -> dict:
    """The chain as a cellular 1-cycle, weights cleared to integers.

    Each turn arc is pushed onto the disk boundary, running forward from its
    start to its end; both paths lie in the same disk so the class is unchanged.
    """
    scale = layout.weight_scale()
    walks = {d: disk_boundary_steps(layout, d) for d in layout.disk_order}
    cycle = {}
    for comp in layout.spec.chain:
        w = int(comp.weight * scale)
        for cr in comp.route:
            k = layout.strand_position[(cr.handle, cr.strand)]
            sign = 1 if layout.strand_direction(cr.handle, k) == "AtoB" else -1
            _add(cycle, ("strand", cr.handle, k), w * sign)
        for t in layout.turn_arcs:
            if t.component != comp.id:
                continue
            steps = walks[t.disk]
            i = next(n for n, st in enumerate(steps) if st[0] == t.start)
            while True:
                _, edge, sign, to = steps[i % len(steps)]
                _add(cycle, edge, w * sign)
                if to == t.end:
                    break
                i += 1
    return cycle


def solvable_over_integers(matrix: list[list[int]], rhs: list[int]) -> bool:
    """Decide whether ``matrix @ x == rhs`` has an integer solution via Smith normal form."""
    if not matrix or not matrix[0]:
        return all(c == 0 for c in rhs)
    m = Matrix(matrix)
    smith, u, _ = smith_normal_decomp(m, domain=ZZ)
    t = u * Matrix(rhs)
    for i in range(m.rows):
        d = smith[i, i] if i < m.cols else 0
        if d == 0:
            if t[i] != 0:
                return False
        elif t[i] % d:
            return False
    return True


def check_null_homologous(spec_or_report) -> bool:
    """True iff the chain is zero in integral first homology of the closed surface."""
    report = spec_or_report
    if isinstance(spec_or_report, DecompositionSpec):
        report = validate(spec_or_report)
    layout = report.require_valid()
    cx = build_cell_complex(layout)
    cyc = chain_cycle(layout)
    idx = cx.edge_index()
    rhs = [0] * len(idx)
    for e, c in cyc.items():
        rhs[idx[e]] = c
    return solvable_over_integers(cx.boundary2(), rhs)
