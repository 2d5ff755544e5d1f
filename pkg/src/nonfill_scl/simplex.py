"""Exact two-phase primal simplex over the rationals.

Problems are in standard form: minimize c.x subject to A x = b, x >= 0.
Pivoting follows Bland's rule throughout, so the solver terminates on
degenerate instances and always reports the same basis for the same input.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

Z = Fraction(0)


@dataclass
class SimplexOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list = field(default_factory=list)
    y: list = field(default_factory=list)
    basis: list = field(default_factory=list)  # column per kept row
    kept_rows: list = field(default_factory=list)
    pivots: int = 0
    objective: Fraction | None = None


def solve_square(m: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve m z = rhs for square m; None when m is singular."""
    n = len(m)
    aug = [list(row) + [r] for row, r in zip(m, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        pr = [v / p for v in aug[col]]
        aug[col] = pr
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * q for a, q in zip(aug[r], pr)]
    return [aug[r][n] for r in range(n)]


def row_echelon_rank(rows: list[list[Fraction]]) -> tuple[int, list[int]]:
    """Rank and the indices of a maximal independent subset of ``rows`` (greedy, in order)."""
    basis: list[tuple[int, list[Fraction]]] = []  # (pivot column, reduced row)
    kept = []
    for i, row in enumerate(rows):
        v = list(row)
        for pc, br in basis:
            if v[pc] != 0:
                f = v[pc] / br[pc]
                v = [a - f * b for a, b in zip(v, br)]
        pc = next((j for j, a in enumerate(v) if a != 0), None)
        if pc is not None:
            basis.append((pc, v))
            kept.append(i)
    return len(kept), kept


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r, j):
        p = self.rows[r][j]
        self.rows[r] = [v / p for v in self.rows[r]]
        self.rhs[r] /= p
        pr, pb = self.rows[r], self.rhs[r]
        for i in range(len(self.rows)):
            if i != r and self.rows[i][j] != 0:
                f = self.rows[i][j]
                self.rows[i] = [a - f * q for a, q in zip(self.rows[i], pr)]
                self.rhs[i] -= f * pb
        self.basis[r] = j
        self.pivots += 1

    def reduced_costs(self, c, allowed):
        cb = [c[j] for j in self.basis]
        out = {}
        for j in allowed:
            out[j] = c[j] - sum(cb[i] * self.rows[i][j] for i in range(len(self.rows))
                                if self.rows[i][j] != 0)
        return out

    def run(self, c, allowed) -> str:
        while True:
            rc = self.reduced_costs(c, allowed)
            entering = next((j for j in sorted(allowed) if rc[j] < 0), None)
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)


def simplex(a: list[list[Fraction]], b: list[Fraction], c: list[Fraction]) -> SimplexOutcome:
    m, n = len(a), len(c)
    rows, rhs = [], []
    for i, (row, bi) in enumerate(zip(a, b)):
        row, bi = [Fraction(v) for v in row], Fraction(bi)
        if bi < 0:
            row, bi = [-v for v in row], -bi
        rows.append(row + [Fraction(int(i == k)) for k in range(m)])
        rhs.append(bi)
    tab = _Tableau(rows, rhs, [n + i for i in range(m)])
    phase1 = [Z] * n + [Fraction(1)] * m
    tab.run(phase1, range(n + m))
    if sum(tab.rhs[i] for i in range(m) if tab.basis[i] >= n) != 0:
        return SimplexOutcome("infeasible", pivots=tab.pivots)

    # Drive the remaining (zero-level) artificials out; rows where that fails are redundant.
    redundant = set()
    for r in range(m):
        if tab.basis[r] < n:
            continue
        j = next((j for j in range(n) if tab.rows[r][j] != 0), None)
        if j is None:
            redundant.add(r)
        else:
            tab.pivot(r, j)
    keep = [r for r in range(m) if r not in redundant]
    tab.rows = [tab.rows[r][:n] for r in keep]
    tab.rhs = [tab.rhs[r] for r in keep]
    tab.basis = [tab.basis[r] for r in keep]
    status = tab.run([Fraction(v) for v in c], range(n))
    if status != "optimal":
        return SimplexOutcome(status, pivots=tab.pivots)

    x = [Z] * n
    for r, j in enumerate(tab.basis):
        x[j] = tab.rhs[r]
    # Row multipliers from the original rows: (A_KB)^T y_K = c_B, y = 0 on redundant rows.
    kept_rows = _original_kept_rows(a, keep, tab.basis)
    mt = [[Fraction(a[r][j]) for r in kept_rows] for j in tab.basis]
    yk = solve_square(mt, [Fraction(c[j]) for j in tab.basis]) if mt else []
    y = [Z] * m
    for r, v in zip(kept_rows, yk):
        y[r] = v
    obj = sum(Fraction(ci) * xi for ci, xi in zip(c, x))
    return SimplexOutcome("optimal", x, y, list(tab.basis), kept_rows, tab.pivots, obj)


def _original_kept_rows(a, keep, basis):
    """Original rows whose restriction to the basis columns is nonsingular.

    The basis columns span the column space, so any such row set fixes the
    multipliers; the remaining rows are combinations and get y = 0.
    """
    if not basis:
        return []
    _, idx = row_echelon_rank([[Fraction(a[r][j]) for j in basis] for r in range(len(a))])
    return idx
