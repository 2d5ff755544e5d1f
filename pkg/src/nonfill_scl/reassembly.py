"""From an optimal vertex back to a surface: turn disks, rectangles and covers of Sigma1.

The surface over the disks and handles, S3, is glued combinatorially from
x_p polygons per path and d_s rectangles per dual pair.  Its Sigma1-boundary
degrees prescribe a branched cover of Sigma1; the branch points are then
traded for a scale factor N via unbranched covers of the pieces, and
the report checks -chi = 2 n scl exactly.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .covers import CoverPlan, SurfaceBase, build_homology_cover, degrees_over, plan_branched_cover
from .errors import DegreeMismatch, MatchingViolation, NonOrientable, SclError
from .lp import EncodingVector, LinearProgramInstance, SclResult
from .model import AlphaRef, Layout, ValidationReport, format_rational, other_side
from .turnpaths import TurnPath, arc_end_position, arc_start_position, dual


# ------------------------------------------------------------------ helpers

class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def integerize(v: EncodingVector) -> tuple[int, EncodingVector]:
    vals = [Fraction(t) for t in v.x.values()] + [Fraction(v.r_plus), Fraction(v.r_minus)]
    n0 = math.lcm(*(t.denominator for t in vals)) if vals else 1
    return n0, EncodingVector({k: Fraction(t) * n0 for k, t in v.x.items()},
                              Fraction(v.r_plus) * n0, Fraction(v.r_minus) * n0)


def _side_key(s):
    m = s.middle
    return (m.handle, m.side, m.lo, m.hi, str(s.first), str(s.second))


def sigma3_components(layout: Layout) -> list[dict]:
    """Components of the union of disks and handles, with their Sigma1 boundary cycles."""
    uf = _UnionFind()
    for d in layout.disk_order:
        uf.find(d)
    for h in layout.handle_order:
        uf.union(layout.side_disk(h, "A"), layout.side_disk(h, "B"))
    groups = defaultdict(list)
    for d in layout.disk_order:
        groups[uf.find(d)].append(d)
    cycles = layout.derived_sigma1_cycles()
    out = []
    for disks in groups.values():
        ds = set(disks)
        handles = [h for h in layout.handle_order if layout.side_disk(h, "A") in ds]
        cyc = [i for i, c in enumerate(cycles) if layout.alpha_disk[c[0].alpha][0] in ds]
        chi = len(disks) - len(handles)
        out.append({"disks": disks, "handles": handles, "cycles": cyc,
                    "base": SurfaceBase.from_euler(chi, len(cyc)) if cyc else None,
                    "euler_char": chi})
    return out


# --------------------------------------------------------------- assembly

@dataclass(frozen=True)
class DiskInstance:
    path: str
    copy: int


@dataclass(frozen=True)
class RectInstance:
    pair: str
    copy: int


@dataclass
class BoundaryComponent:
    kind: str  # "gamma" | "sigma1"
    target: object  # chain component id, or sigma1 cycle index
    degree: int  # signed for sigma1 circles
    length: int  # number of arc edges
    component: int = -1  # index into AssembledS3.components


@dataclass
class S3Component:
    faces: list
    euler_char: int
    boundary: list  # indices into AssembledS3.boundary
    touches_gamma: bool

    @property
    def genus(self):
        return (2 - self.euler_char - len(self.boundary)) // 2


@dataclass
class AssembledS3:
    faces: list
    gluing: list  # (disk face, step, rect face, "s" | "dual")
    boundary: list
    euler_char: int
    orientable: bool
    n_vertices: int
    n_edges: int
    components: list
    encoding: EncodingVector
    kappa_sum: Fraction
    layout: Layout = field(repr=False, compare=False, default=None)

    def summary(self):
        return {"faces": len(self.faces),
                "disks": sum(isinstance(f, DiskInstance) for f in self.faces),
                "rectangles": sum(isinstance(f, RectInstance) for f in self.faces),
                "V": self.n_vertices, "E": self.n_edges, "F": len(self.faces),
                "euler_char": self.euler_char, "orientable": self.orientable,
                "components": [{"euler_char": c.euler_char, "genus": c.genus,
                                "boundary": len(c.boundary), "touches_gamma": c.touches_gamma}
                               for c in self.components],
                "boundary": [{"kind": b.kind, "target": b.target, "degree": b.degree}
                             for b in self.boundary]}

    def gamma_degrees(self) -> dict:
        out = defaultdict(int)
        for b in self.boundary:
            if b.kind == "gamma":
                out[b.target] += b.degree
        return dict(out)

    def sigma1_partitions(self, n_cycles: int):
        """Per Sigma1 cycle: (positive degrees, negative degrees)."""
        pos = [[] for _ in range(n_cycles)]
        neg = [[] for _ in range(n_cycles)]
        for b in self.boundary:
            if b.kind == "sigma1":
                (pos if b.degree > 0 else neg)[b.target].append(abs(b.degree))
        return pos, neg


def _paths_of(paths_or_inst):
    if isinstance(paths_or_inst, LinearProgramInstance):
        return list(paths_or_inst.paths)
    return list(paths_or_inst)


def assemble_S3(report: ValidationReport, paths_or_inst, v: EncodingVector) -> AssembledS3:
    layout = report.require_valid()
    paths: list[TurnPath] = _paths_of(paths_or_inst)
    counts = []
    for i in range(len(paths)):
        q = Fraction(v.x.get(f"p{i}", 0))
        if q < 0 or q.denominator != 1:
            raise MatchingViolation(f"p{i} has non-integral or negative multiplicity {q}")
        counts.append(int(q))
    unknown = set(v.x) - {f"p{i}" for i in range(len(paths))}
    if unknown:
        raise MatchingViolation(f"unknown path ids {sorted(unknown)}")

    faces: list = []
    disk_faces = []  # (face index, path index)
    for i, c in enumerate(counts):
        for k in range(c):
            disk_faces.append((len(faces), i))
            faces.append(DiskInstance(f"p{i}", k))

    n_steps = {f: len(paths[i].steps) for f, i in disk_faces}
    occ = defaultdict(list)
    for f, i in disk_faces:
        for st, s in enumerate(paths[i].sides):
            occ[s].append((f, st))

    uf = _UnionFind()
    gluing, boundary_edges = [], []  # boundary edges: (tail corner, head corner, label)
    n_glued = 0
    done = set()
    for s in sorted(occ, key=_side_key):
        if s in done:
            continue
        sh = dual(s, layout)
        done.update((s, sh))
        if len(occ[s]) != len(occ.get(sh, ())):
            raise MatchingViolation(
                f"side {s} occurs {len(occ[s])} times but its dual {sh} {len(occ.get(sh, ()))} times")
        sigma, sigma2 = s.middle.side, other_side(s.middle.side)
        h = s.middle.handle
        px, py = arc_end_position(layout, s.first), arc_start_position(layout, s.second)
        label = f"{s}|{sh}"
        for k, ((f1, st1), (f2, st2)) in enumerate(zip(occ[s], occ[sh])):
            rf = len(faces)
            faces.append(RectInstance(label, k))

            def R(pos, side, rf=rf):
                return ("R", rf, pos, side)

            def P(f, st, which):
                return ("D", f, st % n_steps[f], which)

            # side s: disk runs end(first) -> start(second); rectangle runs the other way
            uf.union(P(f1, st1, "e"), R(px, sigma))
            uf.union(P(f1, st1 + 1, "s"), R(py, sigma))
            ex, sy = arc_end_position(layout, sh.first), arc_start_position(layout, sh.second)
            if (ex, sy) != (py, px) or sh.middle.side != sigma2:
                raise NonOrientable(f"dual side {sh} does not run anti-parallel to {s}")
            uf.union(P(f2, st2, "e"), R(ex, sigma2))
            uf.union(P(f2, st2 + 1, "s"), R(sy, sigma2))
            last = layout.n_strands(h) + 1
            for pos, tail, head in ((px, R(px, sigma), R(px, sigma2)), (py, R(py, sigma2), R(py, sigma))):
                lab = ("end", h, 0 if pos == 0 else 1) if pos in (0, last) else ("strand", h, pos)
                boundary_edges.append((tail, head, lab, rf))
            gluing.append((f1, st1, rf, "s"))
            gluing.append((f2, st2, rf, "dual"))
            n_glued += 2
    for f, i in disk_faces:
        for st, arc in enumerate(paths[i].steps):
            boundary_edges.append((("D", f, st, "s"), ("D", f, st, "e"), ("arc", arc), f))
            uf.find(("D", f, st, "s"))
            uf.find(("D", f, st, "e"))
    for tail, head, _, _ in boundary_edges:
        uf.find(tail)
        uf.find(head)
    vertices = {uf.find(x) for x in list(uf.parent)}
    n_edges = len(boundary_edges) + n_glued
    chi = len(vertices) - n_edges + len(faces)

    # trace boundary circles
    out_edge = {}
    for e in boundary_edges:
        t = uf.find(e[0])
        if t in out_edge:
            raise NonOrientable(f"two boundary edges leave the same vertex {e[0]}")
        out_edge[t] = e
    incoming = defaultdict(int)
    for e in boundary_edges:
        incoming[uf.find(e[1])] += 1
    if any(incoming[t] != 1 for t in out_edge) or set(incoming) != set(out_edge):
        raise NonOrientable("boundary is not a union of coherently oriented circles")

    cycles = layout.derived_sigma1_cycles()
    alpha_cycle = {}
    for ci, cyc in enumerate(cycles):
        for it in cyc:
            if isinstance(it, AlphaRef):
                alpha_cycle[it.alpha] = ci
    comp_len = {c.id: len(c.route) for c in layout.spec.chain}

    boundary, edge_bc = [], {}
    used = set()
    for e in boundary_edges:
        if id(e) in used:
            continue
        circle, cur = [], e
        while id(cur) not in used:
            used.add(id(cur))
            circle.append(cur)
            cur = out_edge[uf.find(cur[1])]
        arcs = [lab[1] for _, _, lab, _ in circle if lab[0] == "arc"]
        turns = [a for a in arcs if a.is_turn]
        alphas = [a for a in arcs if not a.is_turn]
        if turns and alphas:
            raise NonOrientable("a boundary circle mixes the chain with Sigma1")
        if turns:
            comps = {layout.turn_arc_by_id[a.id].component for a in turns}
            if len(comps) != 1:
                raise SclError(f"a boundary circle runs over several components {sorted(comps)}")
            (cid,) = comps
            deg, rem = divmod(len(turns), comp_len[cid])
            if rem:
                raise DegreeMismatch(f"boundary circle covers {cid} a fractional number of times")
            bc = BoundaryComponent("gamma", cid, deg, len(arcs))
        else:
            dirs = {a.forward for a in alphas}
            cyc_ids = {alpha_cycle[a.id] for a in alphas}
            if len(dirs) != 1 or len(cyc_ids) != 1:
                raise NonOrientable("a Sigma1 boundary circle changes direction or cycle")
            (ci,) = cyc_ids
            n_alpha = sum(isinstance(it, AlphaRef) for it in cycles[ci])
            deg, rem = divmod(len(alphas), n_alpha)
            if rem:
                raise DegreeMismatch("boundary circle covers a Sigma1 cycle a fractional number of times")
            bc = BoundaryComponent("sigma1", ci, deg if dirs.pop() else -deg, len(arcs))
        for x in circle:
            edge_bc[id(x)] = len(boundary)
        boundary.append(bc)

    # connected components of S3
    fu = _UnionFind()
    for f in range(len(faces)):
        fu.find(f)
    for f1, _, rf, _ in gluing:
        fu.union(f1, rf)
    comp_index, comps = {}, []
    for f in range(len(faces)):
        r = fu.find(f)
        if r not in comp_index:
            comp_index[r] = len(comps)
            comps.append({"faces": [], "V": set(), "E": 0, "boundary": []})
        comps[comp_index[r]]["faces"].append(f)
    corner_face = {}
    for x in uf.parent:
        corner_face[x] = x[1]
    for x in uf.parent:
        comps[comp_index[fu.find(corner_face[x])]]["V"].add(uf.find(x))
    for e in boundary_edges:
        comps[comp_index[fu.find(e[3])]]["E"] += 1
    for f1, _, _, _ in gluing:
        comps[comp_index[fu.find(f1)]]["E"] += 1
    for e in boundary_edges:
        bi = edge_bc[id(e)]
        ci = comp_index[fu.find(e[3])]
        if bi not in comps[ci]["boundary"]:
            comps[ci]["boundary"].append(bi)
        boundary[bi].component = ci
    components = [S3Component(c["faces"], len(c["V"]) - c["E"] + len(c["faces"]),
                              sorted(c["boundary"]),
                              any(boundary[b].kind == "gamma" for b in c["boundary"]))
                  for c in comps]

    # re-encode: disk counts per path, sheet counts from the Sigma1 circles
    pos, neg = defaultdict(int), defaultdict(int)
    for b in boundary:
        if b.kind == "sigma1":
            (pos if b.degree > 0 else neg)[b.target] += abs(b.degree)
    rp = {pos[i] for i in range(len(cycles))}
    rm = {neg[i] for i in range(len(cycles))}
    if len(rp) != 1 or len(rm) != 1:
        raise DegreeMismatch(f"Sigma1 cycles are covered unevenly: {dict(pos)} / {dict(neg)}")
    enc = EncodingVector({f"p{i}": Fraction(c) for i, c in enumerate(counts) if c},
                         Fraction(rp.pop()), Fraction(rm.pop()))
    ksum = sum(paths[i].kappa * c for i, c in enumerate(counts))
    return AssembledS3(faces, gluing, boundary, chi, True, len(vertices), n_edges, components,
                       enc, ksum, layout)


# ------------------------------------------------------------- Sigma1 cover

def sigma1_base(layout: Layout) -> SurfaceBase:
    return SurfaceBase.from_euler(layout.spec.sigma1.euler_char, len(layout.derived_sigma1_cycles()))


def plan_sigma1_cover(s3: AssembledS3) -> CoverPlan:
    """Branched cover of Sigma1 matching the Sigma1 circles of S3, positive sheets first."""
    layout = s3.layout
    base = sigma1_base(layout)
    pos, neg = s3.sigma1_partitions(base.n_boundary)
    blocks = [plan_branched_cover(base, parts) for parts in (pos, neg) if sum(parts[0]) > 0]
    if not blocks:
        return CoverPlan(base, 0, [[] for _ in range(base.n_boundary)], {}, [], 0, "empty")
    plan = blocks[0]
    for other in blocks[1:]:
        plan = plan.disjoint_union(other)
    plan.orientation_split = (int(s3.encoding.r_plus), int(s3.encoding.r_minus))
    return plan


# ------------------------------------------------------------ final report

@dataclass
class ExtremalSurfaceReport:
    scl_value: Fraction
    N0: int
    integer_vector: EncodingVector
    s3: dict
    sigma1_cover: CoverPlan
    branch_count_before: int
    N: int
    d: int
    n_final: int
    chi_final: int
    weight_scale: int
    covers: dict
    checks: dict

    @property
    def ok(self):
        return all(self.checks.values())

    def to_dict(self):
        return {"scl_value": format_rational(self.scl_value), "N0": self.N0,
                "integer_vector": self.integer_vector.to_dict(), "s3": self.s3,
                "sigma1_cover": self.sigma1_cover.to_dict(),
                "branch_count_before": self.branch_count_before, "N": self.N, "d": self.d,
                "weight_scale": self.weight_scale,
                "n_final": self.n_final, "chi_final": self.chi_final,
                "covers": self.covers, "audits": self.checks}


def remove_branch_points(s3: AssembledS3, cover: CoverPlan, *, N0: int = 1,
                         weight_scale: int = 1, scl_value: Fraction | None = None,
                         integer_vector: EncodingVector | None = None) -> ExtremalSurfaceReport:
    layout = s3.layout
    base1 = sigma1_base(layout)
    chi1 = base1.euler_char
    rp, rm = int(s3.encoding.r_plus), int(s3.encoding.r_minus)
    r = rp + rm
    checks, covers = {}, {}

    # the cover must glue to S3 along equal and opposite Sigma1 degrees
    pos, neg = s3.sigma1_partitions(base1.n_boundary)
    for j in range(base1.n_boundary):
        want = sorted(pos[j] + neg[j], reverse=True)
        have = sorted(degrees_over(cover, j + 1), reverse=True) if cover.sheets else []
        if want != have:
            raise DegreeMismatch(f"Sigma1 cycle {j}: S3 degrees {want}, cover degrees {have}")
    checks["cover_plan_valid"] = cover.verify() if cover.sheets else True
    checks["cover_sheets_equal_r"] = cover.sheets == r
    branch = cover.n_branch

    if branch == 0:
        N, d = 1, 1
        chi_s1 = cover.euler_char_cover
    else:
        t3 = [c for c in s3.components if c.touches_gamma]
        degs = [abs(s3.boundary[b].degree) for c in t3 for b in c.boundary
                if s3.boundary[b].kind == "sigma1"]
        d = math.lcm(*degs) if degs else 1
        constraints = []
        t3_sheets = []
        for ci, comp in enumerate(s3.components):
            if not comp.touches_gamma:
                continue
            sig = [b for b in comp.boundary if s3.boundary[b].kind == "sigma1"]
            prescribed = {k + 1: d // abs(s3.boundary[b].degree)
                          for k, b in enumerate(comp.boundary) if b in sig}
            if not any(v > 1 for v in prescribed.values()):
                t3_sheets.append(1)
                continue
            base = SurfaceBase(comp.genus, len(comp.boundary))
            plan = build_homology_cover(base, prescribed=prescribed)
            ok = plan.verify() and all(set(degrees_over(plan, k)) == {v} for k, v in prescribed.items())
            checks[f"T3_component_{ci}_cover"] = ok
            covers[f"T3_component_{ci}"] = {"sheets": plan.sheets, "prescribed": prescribed}
            t3_sheets.append(plan.sheets)
        constraints.append(math.lcm(*t3_sheets) if t3_sheets else 1)

        for si, sc in enumerate(sigma3_components(layout)):
            closed = [c for c in s3.components if not c.touches_gamma
                      and any(s3.boundary[b].target in sc["cycles"] for b in c.boundary)]
            if not closed or not sc["cycles"]:
                continue
            ref = sc["cycles"][0]
            s_plus = sum(s3.boundary[b].degree for c in closed for b in c.boundary
                         if s3.boundary[b].target == ref and s3.boundary[b].degree > 0)
            s_minus = -sum(s3.boundary[b].degree for c in closed for b in c.boundary
                           if s3.boundary[b].target == ref and s3.boundary[b].degree < 0)
            checks[f"sigma3_{si}_closed_pieces_cover"] = (
                sum(c.euler_char for c in closed) == (s_plus + s_minus) * sc["euler_char"])
            if d > 1:
                plan = build_homology_cover(sc["base"], uniform=d)
                checks[f"sigma3_{si}_uniform_cover"] = plan.verify() and all(
                    set(plan.boundary_degrees(j)) == {d} for j in range(1, sc["base"].n_boundary + 1))
                k3 = plan.sheets
                covers[f"sigma3_{si}"] = {"sheets": k3, "s_plus": s_plus, "s_minus": s_minus}
                for s in (s_plus, s_minus):
                    if s:
                        constraints.append(k3 // math.gcd(k3, s))
        if d > 1:
            plan1 = build_homology_cover(base1, uniform=d)
            checks["sigma1_uniform_cover"] = plan1.verify() and all(
                set(plan1.boundary_degrees(j)) == {d} for j in range(1, base1.n_boundary + 1))
            k1 = plan1.sheets
            covers["sigma1"] = {"sheets": k1, "r_plus": rp, "r_minus": rm}
            for s in (rp, rm):
                if s:
                    constraints.append(k1 // math.gcd(k1, s))
        N = math.lcm(*constraints)
        # curve counts over each Sigma1 cycle must pair off
        for ci in range(base1.n_boundary):
            plus = sum(N * s3.boundary[b].degree for b in range(len(s3.boundary))
                       if s3.boundary[b].kind == "sigma1" and s3.boundary[b].target == ci
                       and s3.boundary[b].degree > 0)
            minus = -sum(N * s3.boundary[b].degree for b in range(len(s3.boundary))
                         if s3.boundary[b].kind == "sigma1" and s3.boundary[b].target == ci
                         and s3.boundary[b].degree < 0)
            checks[f"sigma1_cycle_{ci}_curve_pairing"] = (
                plus % d == 0 and minus % d == 0 and plus == N * rp and minus == N * rm)
        chi_s1 = N * r * chi1

    chi_final = N * s3.euler_char + chi_s1
    n_s = N0 * weight_scale
    n_final = N * n_s
    covers["N_constraints_note"] = "N is a valid, not necessarily minimal, common scale"
    if branch == 0:
        checks["unbranched_euler"] = cover.euler_char_cover == r * chi1
    f_chi = s3.kappa_sum + chi1 * r
    checks["euler_equals_kappa_sum"] = s3.euler_char == s3.kappa_sum
    checks["chi_final_equals_N_F_chi"] = chi_final == N * f_chi
    gam = s3.gamma_degrees()
    weights = layout.weights()
    checks["gamma_degrees"] = all(
        gam.get(cid, 0) == weights[cid] * n_s for cid in weights)
    value = Fraction(-chi_final, 2 * n_final)
    if scl_value is None:
        scl_value = value
    checks["extremal_identity"] = -chi_final == 2 * n_final * scl_value
    return ExtremalSurfaceReport(scl_value, N0, integer_vector or s3.encoding, s3.summary(), cover, branch,
                                 N, d, n_final, chi_final, weight_scale, covers, checks)


def extremal_surface(report: ValidationReport, inst: LinearProgramInstance,
                     result: SclResult | EncodingVector) -> ExtremalSurfaceReport:
    """Vertex -> integral vector -> S3 -> Sigma1 cover -> branch-point removal."""
    if isinstance(result, SclResult):
        if result.status != "optimal":
            raise SclError(f"cannot build a surface from a {result.status} program")
        v, value = result.primal, result.value
    else:
        v = result
        value = inst.objective(inst.flatten(v)) / inst.weight_scale
    n0, iv = integerize(v)
    s3 = assemble_S3(report, inst, iv)
    checks_pre = {
        "reencoding_roundtrip": s3.encoding == EncodingVector(
            {k: t for k, t in iv.x.items() if t}, iv.r_plus, iv.r_minus),
        "matching_rows_hold": all(res == 0 for res in _scaled_residuals(inst, iv, n0)),
    }
    cover = plan_sigma1_cover(s3)
    rep = remove_branch_points(s3, cover, N0=n0, weight_scale=inst.weight_scale,
                               scl_value=value, integer_vector=iv)
    rep.checks = {**checks_pre, **rep.checks}
    return rep


def _scaled_residuals(inst, iv, n0):
    x = inst.flatten(iv)
    return [sum(a * t for a, t in zip(row, x)) - n0 * b for row, b in zip(inst.a, inst.b)]
