"""Matching-equation program over path multiplicities and the two sheet counts.

Columns are the taut turn paths (ids ``p0, p1, ...`` in canonical order)
followed by ``r+`` and ``r-``.  The optimum of -1/2 F_chi over the region
cut out by the matching rows, divided by the weight scale, is scl.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EmptyTurnPaths, TooLarge, UnknownPath
from .model import ValidationReport, format_rational
from .simplex import row_echelon_rank, simplex, solve_square
from .turnpaths import ArcRef, SideGraph, TurnPath, dual

BRUTEFORCE_GUARD = 24


@dataclass(frozen=True)
class EncodingVector:
    x: dict  # path id -> Fraction
    r_plus: Fraction = Fraction(0)
    r_minus: Fraction = Fraction(0)

    def to_dict(self):
        return {"x": {k: format_rational(v) for k, v in self.x.items() if v},
                "r_plus": format_rational(self.r_plus),
                "r_minus": format_rational(self.r_minus)}


def _side_key(s):
    m = s.middle
    return (m.handle, m.side, m.lo, m.hi, str(s.first), str(s.second))


@dataclass
class LinearProgramInstance:
    paths: list
    columns: list  # path ids then "r+", "r-"
    row_labels: list
    a: list  # dense rows of Fractions
    b: list
    c: list
    chi_sigma1: int
    weight_scale: int
    kappas: list = field(default_factory=list)

    @property
    def n_vars(self):
        return len(self.columns)

    def column_of(self, pid):
        try:
            return self.columns.index(pid)
        except ValueError:
            raise UnknownPath(f"no column named {pid!r}") from None

    def vector(self, values: list) -> EncodingVector:
        k = len(self.paths)
        return EncodingVector({self.columns[i]: values[i] for i in range(k) if values[i]},
                              values[k], values[k + 1])

    def flatten(self, v: EncodingVector) -> list:
        out = [Fraction(0)] * self.n_vars
        for pid, val in v.x.items():
            out[self.column_of(pid)] = Fraction(val)
        out[-2], out[-1] = Fraction(v.r_plus), Fraction(v.r_minus)
        return out

    def residuals(self, values: list) -> list:
        return [sum(ai * xi for ai, xi in zip(row, values) if ai) - bi
                for row, bi in zip(self.a, self.b)]

    def objective(self, values: list) -> Fraction:
        return sum(ci * xi for ci, xi in zip(self.c, values))

    def to_dict(self):
        return {
            "columns": self.columns,
            "paths": [{"id": pid, "disk": p.disk, "steps": [str(s) for s in p.steps],
                       "kappa": format_rational(p.kappa)}
                      for pid, p in zip(self.columns, self.paths)],
            "rows": [{"label": lab, "coefficients": {self.columns[j]: format_rational(v)
                                                     for j, v in enumerate(row) if v},
                      "rhs": format_rational(bi)}
                     for lab, row, bi in zip(self.row_labels, self.a, self.b)],
            "objective": {self.columns[j]: format_rational(v) for j, v in enumerate(self.c) if v},
            "sense": "minimize",
            "chi_sigma1": self.chi_sigma1,
            "weight_scale": self.weight_scale,
        }


@dataclass
class SclResult:
    status: str
    value: Fraction | None
    primal: EncodingVector | None
    dual: list
    reduced_costs: list
    stats: dict

    def to_dict(self):
        return {"status": self.status,
                "value": None if self.value is None else format_rational(self.value),
                "primal": self.primal.to_dict() if self.primal else None,
                "dual": [format_rational(y) for y in self.dual],
                "reduced_costs": [format_rational(v) for v in self.reduced_costs],
                "stats": self.stats}


def build_program(report: ValidationReport, paths: list[TurnPath],
                  weights: dict | None = None) -> LinearProgramInstance:
    if not paths:
        raise EmptyTurnPaths("no taut turn path exists")
    layout = report.require_valid()
    weights = dict(layout.weights() if weights is None else weights)
    scale = math.lcm(*(Fraction(w).denominator for w in weights.values()))
    k = len(paths)
    columns = [f"p{i}" for i in range(k)] + ["r+", "r-"]
    rows, labels, rhs = [], [], []

    def new_row():
        return [Fraction(0)] * (k + 2)

    # One row per unordered dual pair among the sides that occur.
    occurring = {}
    for i, p in enumerate(paths):
        for s in p.sides:
            occurring.setdefault(s, []).append(i)
    done = set()
    for s in sorted(occurring, key=_side_key):
        if s in done:
            continue
        sh = dual(s, layout)
        done.update((s, sh))
        if sh == s:
            continue
        row = new_row()
        for i in occurring[s]:
            row[i] += 1
        for i in occurring.get(sh, ()):
            row[i] -= 1
        rows.append(row)
        labels.append(f"side {s} ~ {sh}")
        rhs.append(Fraction(0))
    for a in layout.alpha_order:
        for fwd, col in ((True, k), (False, k + 1)):
            arc = ArcRef.alpha(a, fwd)
            row = new_row()
            for i, p in enumerate(paths):
                if p.uses(arc):
                    row[i] += 1
            row[col] -= 1
            rows.append(row)
            labels.append(f"alpha {arc}")
            rhs.append(Fraction(0))
    for t in layout.turn_arcs:
        arc = ArcRef.turn(t.id)
        row = new_row()
        for i, p in enumerate(paths):
            if p.uses(arc):
                row[i] += 1
        rows.append(row)
        labels.append(f"turn {arc}")
        rhs.append(Fraction(weights[t.component]) * scale)

    chi1 = layout.spec.sigma1.euler_char
    c = [-p.kappa / 2 for p in paths] + [Fraction(-chi1, 2)] * 2
    return LinearProgramInstance(list(paths), columns, labels, rows, rhs, c, chi1, scale,
                                 [p.kappa for p in paths])


def F_chi(v: EncodingVector, chi_sigma1: int, paths: list[TurnPath] | LinearProgramInstance):
    """Sum of kappa(p) x_p plus chi(Sigma1)(r+ + r-)."""
    if isinstance(paths, LinearProgramInstance):
        paths = paths.paths
    by_id = {f"p{i}": p for i, p in enumerate(paths)}
    total = Fraction(chi_sigma1) * (Fraction(v.r_plus) + Fraction(v.r_minus))
    for pid, val in v.x.items():
        if pid not in by_id:
            raise UnknownPath(f"no path with id {pid!r}")
        total += by_id[pid].kappa * Fraction(val)
    return total


def _reduced_costs(inst, y):
    return [inst.c[j] - sum(inst.a[r][j] * y[r] for r in range(len(inst.a)) if inst.a[r][j])
            for j in range(inst.n_vars)]


def solve(inst: LinearProgramInstance) -> SclResult:
    out = simplex(inst.a, inst.b, inst.c)
    stats = {"pivots": out.pivots, "rows": len(inst.a), "columns": inst.n_vars,
             "paths": len(inst.paths), "rank": len(out.kept_rows)}
    if out.status != "optimal":
        return SclResult(out.status, None, None, [], [], stats)
    return SclResult("optimal", out.objective / inst.weight_scale, inst.vector(out.x),
                     out.y, _reduced_costs(inst, out.y), stats)


def verify_certificate(inst: LinearProgramInstance, result: SclResult) -> bool:
    if result.status != "optimal" or result.primal is None:
        return False
    try:
        x = inst.flatten(result.primal)
    except UnknownPath:
        return False
    if any(v < 0 for v in x) or any(r != 0 for r in inst.residuals(x)):
        return False
    y = list(result.dual)
    if len(y) != len(inst.a):
        return False
    if any(v < 0 for v in _reduced_costs(inst, y)):
        return False
    primal_obj = inst.objective(x)
    dual_obj = sum(bi * yi for bi, yi in zip(inst.b, y))
    return primal_obj == dual_obj and result.value == primal_obj / inst.weight_scale


def forced_zero_columns(inst: LinearProgramInstance) -> set[int]:
    """Columns that vanish on every feasible point.

    A row with zero right-hand side whose coefficients all share one sign
    forces its support to zero; dropping those columns can expose more such
    rows, so this iterates to a fixed point.
    """
    dead: set[int] = set()
    changed = True
    while changed:
        changed = False
        for row, bi in zip(inst.a, inst.b):
            if bi != 0:
                continue
            live = [j for j, v in enumerate(row) if v and j not in dead]
            if live and (all(row[j] > 0 for j in live) or all(row[j] < 0 for j in live)):
                dead.update(live)
                changed = True
    return dead


def enumerate_vertices_bruteforce(inst: LinearProgramInstance, guard: int = BRUTEFORCE_GUARD,
                                  presolve: bool = True):
    """Every basic feasible solution with its scl value, by solving square subsystems.

    With ``presolve`` the columns that vanish on the whole region are removed
    first; the guard applies to the surviving columns.
    """
    dead = forced_zero_columns(inst) if presolve else set()
    cols = [j for j in range(inst.n_vars) if j not in dead]
    if len(cols) > guard:
        raise TooLarge(f"{len(cols)} variables exceed the brute-force guard of {guard}")
    sub = [[row[j] for j in cols] for row in inst.a]
    rank, rows = row_echelon_rank(sub)
    sub = [sub[r] for r in rows]
    b = [inst.b[r] for r in rows]
    colvec = [[row[j] for row in sub] for j in range(len(cols))]
    found = {}

    def leaf(combo):
        m = [[row[j] for j in combo] for row in sub]
        z = solve_square(m, b) if rank else []
        if z is None or any(v < 0 for v in z):
            return
        full = [Fraction(0)] * inst.n_vars
        for j, v in zip(combo, z):
            full[cols[j]] = v
        # rows dropped as dependent, or emptied by the presolve, still bind
        if any(inst.residuals(full)):
            return
        key = tuple(full)
        if key not in found:
            found[key] = inst.objective(full) / inst.weight_scale

    # Depth-first over increasing column subsets; a column dependent on the
    # ones already chosen can never complete a basis, so that branch is cut.
    def extend(start, combo, basis):
        if len(combo) == rank:
            leaf(combo)
            return
        for j in range(start, len(cols) - (rank - len(combo)) + 1):
            v = list(colvec[j])
            for piv, bv in basis:
                if v[piv]:
                    f = v[piv] / bv[piv]
                    v = [x - f * y for x, y in zip(v, bv)]
            piv = next((i for i, x in enumerate(v) if x), None)
            if piv is None:
                continue
            extend(j + 1, combo + [j], basis + [(piv, v)])

    extend(0, [], [])
    return [(inst.vector(list(k)), val) for k, val in found.items()]


def compute_scl(report: ValidationReport, graph: SideGraph | None = None, **kw):
    """Convenience pipeline: enumerate, build, solve."""
    from .turnpaths import build_side_graph, enumerate_taut_turn_paths
    graph = graph or build_side_graph(report, single_slot=kw.pop("single_slot", False))
    paths = enumerate_taut_turn_paths(graph, **kw)
    inst = build_program(report, paths)
    return inst, solve(inst)
