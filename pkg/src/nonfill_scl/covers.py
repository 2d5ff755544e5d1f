"""Finite covers of compact surfaces, represented by monodromy permutations.

A base surface of genus g with b >= 1 boundary circles has free fundamental
group on a1, b1, ..., ag, bg, c1, ..., c(b-1); the last boundary loop is
determined by  [a1,b1] ... [ag,bg] c1 ... cb = 1.  A branched cover adds one
loop e_j around each branch point and the relation picks up e1 ... ek.

Permutations are tuples acting on the right: sheet i goes to p[i], and a
word is applied letter by letter from the left.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import BadPartition, DiskBase, SclError


# ------------------------------------------------------------ permutations

def identity(n):
    return tuple(range(n))


def compose(*perms):
    """Right action: apply the first permutation, then the next."""
    n = len(perms[0]) if perms else 0
    out = list(range(n))
    for p in perms:
        out = [p[i] for i in out]
    return tuple(out)


def inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def cycles(p):
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


def cycle_type(p):
    return tuple(sorted((len(c) for c in cycles(p)), reverse=True))


def from_cycle_type(parts, offset=0, n=None):
    """Permutation with consecutive cycles of the given lengths."""
    n = sum(parts) if n is None else n
    out = list(range(n))
    i = offset
    for m in parts:
        for k in range(m):
            out[i + k] = i + (k + 1) % m
        i += m
    return tuple(out)


def transpositions_of(p):
    """Transpositions t1, ..., tk with compose(t1, ..., tk) == p and k = n - #cycles."""
    n = len(p)
    out = []
    for cyc in cycles(p):
        for x in cyc[1:]:
            t = list(range(n))
            t[cyc[0]], t[x] = x, cyc[0]
            out.append(tuple(t))
    return out


def orbits(perms, n):
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for p in perms:
        for i, j in enumerate(p):
            parent[find(i)] = find(j)
    return len({find(i) for i in range(n)})


# ------------------------------------------------------------ base surfaces

@dataclass(frozen=True)
class SurfaceBase:
    genus: int
    n_boundary: int

    @property
    def euler_char(self):
        return 2 - 2 * self.genus - self.n_boundary

    @classmethod
    def from_euler(cls, euler_char, n_boundary):
        g2 = 2 - euler_char - n_boundary
        if g2 < 0 or g2 % 2:
            raise SclError(f"no surface with chi={euler_char} and {n_boundary} boundary circles")
        return cls(g2 // 2, n_boundary)

    def generators(self):
        gens = []
        for i in range(1, self.genus + 1):
            gens += [f"a{i}", f"b{i}"]
        return gens + [f"c{j}" for j in range(1, self.n_boundary)]


def _word_perm(word, mono, n):
    perm = identity(n)
    for letter in word:
        inv = letter.endswith("^")
        p = mono[letter.rstrip("^")]
        perm = compose(perm, inverse(p) if inv else p)
    return perm


def commutator_word(genus):
    w = []
    for i in range(1, genus + 1):
        w += [f"a{i}", f"b{i}", f"a{i}^", f"b{i}^"]
    return w


@dataclass
class CoverPlan:
    base: SurfaceBase
    sheets: int
    partitions: list  # declared cycle type per boundary circle
    monodromy: dict  # generator name -> permutation, including every c_j and e_j
    branch_points: list = field(default_factory=list)  # (location tag, index)
    euler_char_cover: int = 0
    recipe: str = ""
    # caller-side index of each stored boundary circle, when they were reordered
    boundary_labels: list | None = None

    @property
    def n_branch(self):
        return len(self.branch_points)

    def boundary_perm(self, j):
        return self.monodromy[f"c{j}"]

    def relation_holds(self):
        n = self.sheets
        word = commutator_word(self.base.genus)
        word += [f"c{j}" for j in range(1, self.base.n_boundary + 1)]
        word += [f"e{j}" for j in range(1, self.n_branch + 1)]
        return _word_perm(word, self.monodromy, n) == identity(n)

    def boundary_degrees(self, j):
        return cycle_type(self.boundary_perm(j))

    def orbit_euler_char(self):
        """chi of the cover from the unbranched part plus one disk per branch-loop orbit."""
        n, k = self.sheets, self.n_branch
        punctured = n * (self.base.euler_char - k)
        return punctured + sum(len(cycles(self.monodromy[f"e{j}"])) for j in range(1, k + 1))

    def riemann_hurwitz(self):
        return self.euler_char_cover == self.sheets * self.base.euler_char - sum(
            idx - 1 for _, idx in self.branch_points)

    def n_components(self):
        return orbits(list(self.monodromy.values()), self.sheets) if self.sheets else 0

    def checks(self):
        declared = all(self.boundary_degrees(j) == tuple(sorted(self.partitions[j - 1], reverse=True))
                       for j in range(1, self.base.n_boundary + 1))
        branch_ok = all(
            self.branch_points[j - 1][1] - 1 == self.sheets - len(cycles(self.monodromy[f"e{j}"]))
            for j in range(1, self.n_branch + 1))
        return {"relation": self.relation_holds(),
                "boundary_cycle_types": declared,
                "branch_indices": branch_ok,
                "riemann_hurwitz": self.riemann_hurwitz(),
                "orbit_count_euler": self.orbit_euler_char() == self.euler_char_cover}

    def verify(self):
        return all(self.checks().values())

    def disjoint_union(self, other: "CoverPlan") -> "CoverPlan":
        """Block sum of two covers of the same base; sheets never mix."""
        assert self.base == other.base
        n, m = self.sheets, other.sheets
        names = set(self.monodromy) | set(other.monodromy)
        mono = {}
        for g in names:
            p = self.monodromy.get(g, identity(n))
            q = other.monodromy.get(g, identity(m))
            mono[g] = tuple(p) + tuple(n + v for v in q)
        # branch loops: relabel the second block's e_j after the first block's
        k = self.n_branch
        for j in range(1, other.n_branch + 1):
            mono.pop(f"e{j}", None)
        for j in range(1, k + 1):
            mono[f"e{j}"] = tuple(self.monodromy[f"e{j}"]) + tuple(range(n, n + m))
        for j in range(1, other.n_branch + 1):
            q = other.monodromy[f"e{j}"]
            mono[f"e{k + j}"] = tuple(range(n)) + tuple(n + v for v in q)
        parts = [sorted(list(a) + list(b), reverse=True)
                 for a, b in zip(self.partitions, other.partitions)]
        return CoverPlan(self.base, n + m, parts, mono,
                         list(self.branch_points) + list(other.branch_points),
                         self.euler_char_cover + other.euler_char_cover,
                         f"{self.recipe}+{other.recipe}")

    def to_dict(self):
        return {"base": {"genus": self.base.genus, "n_boundary": self.base.n_boundary,
                         "euler_char": self.base.euler_char},
                "sheets": self.sheets,
                "partitions": [list(p) for p in self.partitions],
                "monodromy": {k: list(v) for k, v in sorted(self.monodromy.items())},
                "branch_points": [list(b) for b in self.branch_points],
                "euler_char_cover": self.euler_char_cover,
                "components": self.n_components(),
                "recipe": self.recipe}


def _as_base(base) -> SurfaceBase:
    if isinstance(base, SurfaceBase):
        return base
    if hasattr(base, "euler_char") and hasattr(base, "boundary"):
        return SurfaceBase.from_euler(base.euler_char, len(base.boundary))
    genus, nb = base
    return SurfaceBase(genus, nb)


def plan_branched_cover(base, partitions) -> CoverPlan:
    """Branched cover with prescribed boundary degrees.

    Boundary loops get the canonical permutation of each cycle type, the
    genus generators stay trivial, and the product of the boundary loops is
    cancelled by a minimal string of transpositions, one index-2 branch
    point each.
    """
    base = _as_base(base)
    partitions = [tuple(int(v) for v in p) for p in partitions]
    if len(partitions) != base.n_boundary:
        raise BadPartition(f"expected {base.n_boundary} partitions, got {len(partitions)}")
    sizes = {sum(p) for p in partitions}
    if len(sizes) != 1 or any(v <= 0 for p in partitions for v in p):
        raise BadPartition(f"partitions {partitions} do not share one total")
    n = sizes.pop()
    mono = {g: identity(n) for g in base.generators()}
    prod = identity(n)
    for j, lam in enumerate(partitions, start=1):
        mono[f"c{j}"] = from_cycle_type(sorted(lam, reverse=True))
        prod = compose(prod, mono[f"c{j}"])
    ts = transpositions_of(inverse(prod))
    for j, t in enumerate(ts, start=1):
        mono[f"e{j}"] = t
    branch = [("interior", 2) for _ in ts]
    return CoverPlan(base, n, [sorted(p, reverse=True) for p in partitions], mono, branch,
                     n * base.euler_char - len(ts), "branched")


def _regular_cover(base: SurfaceBase, group_order, phi, add):
    """Cover for a homomorphism to a finite abelian group given by ``phi`` on generators.

    Elements are indexed 0..order-1; ``add(i, v)`` translates element i by v.
    """
    n = group_order
    mono = {}
    for g in base.generators():
        mono[g] = tuple(add(i, phi.get(g)) for i in range(n))
    word = commutator_word(base.genus) + [f"c{j}" for j in range(1, base.n_boundary)]
    last = _word_perm(word, mono, n)
    mono[f"c{base.n_boundary}"] = inverse(last)
    parts = [list(cycle_type(mono[f"c{j}"])) for j in range(1, base.n_boundary + 1)]
    return CoverPlan(base, n, parts, mono, [], n * base.euler_char)


def _unit_solution(coeffs, n):
    """Integer vector z with sum(coeffs * z) == 1 mod n.

    Runs the extended Euclidean algorithm over (n, c1, c2, ...), keeping
    g == sum(z_i c_i) mod n for the running gcd g.
    """
    g, z = n, [0] * len(coeffs)
    for i, c in enumerate(coeffs):
        g2, u, v = _egcd(g, c % n)
        z = [u * t for t in z]
        z[i] += v
        g = g2
    if g != 1:
        raise SclError(f"boundary class is not primitive mod {n}")
    z = [t % n for t in z]
    assert sum(c * t for c, t in zip(coeffs, z)) % n == 1 % n
    return z


def _egcd(a, b):
    if b == 0:
        return (a, 1, 0)
    g, x, y = _egcd(b, a % b)
    return (g, y, x - (a // b) * y)


def _double_then_cyclic(base: SurfaceBase, n: int) -> CoverPlan:
    """One boundary circle: a connected double cover, then a Z/n cover of it.

    The double cover sends a1 to the nontrivial element; it has two boundary
    circles, each of degree 1.  The Z/n cover of the double is described on
    the Schreier generators for the transversal {1, a1}, solved so that the
    first lifted boundary circle maps to 1 (the second then maps to -1).
    """
    gens = base.generators()
    eps = {g: int(g == "a1") for g in gens}

    def schreier(e, g):
        return (e, g)

    # Trace the lift of c1 = ([a1,b1]...[ag,bg])^-1 starting at each sheet.
    word = commutator_word(base.genus)
    inv_word = [w[:-1] if w.endswith("^") else w + "^" for w in reversed(word)]
    keys = [(e, g) for e in (0, 1) for g in gens if not (e == 0 and g == "a1")]
    index = {k: i for i, k in enumerate(keys)}

    def lift_coeffs(start):
        coeffs = [0] * len(keys)
        e = start
        for letter in inv_word:
            g = letter.rstrip("^")
            if letter.endswith("^"):
                e = (e + eps[g]) % 2  # previous sheet: e' with e' * g = e
                if schreier(e, g) in index:
                    coeffs[index[schreier(e, g)]] -= 1
            else:
                if schreier(e, g) in index:
                    coeffs[index[schreier(e, g)]] += 1
                e = (e + eps[g]) % 2
        assert e == start
        return coeffs

    psi_vals = _unit_solution(lift_coeffs(0), n)
    psi = {k: psi_vals[i] for k, i in index.items()}
    size = 2 * n
    mono = {}
    for g in gens:
        perm = []
        for sheet in range(size):
            e, k = sheet % 2, sheet // 2
            k2 = (k + psi.get((e, g), 0)) % n
            perm.append(2 * k2 + (e + eps[g]) % 2)
        mono[g] = tuple(perm)
    mono["c1"] = inverse(_word_perm(word, mono, size))
    return CoverPlan(base, size, [list(cycle_type(mono["c1"]))], mono, [],
                     size * base.euler_char, "double+cyclic")


def build_homology_cover(base, prescribed: dict | None = None, uniform: int | None = None) -> CoverPlan:
    """Unbranched cover with prescribed boundary degrees.

    ``prescribed`` maps 1-based boundary indices to degrees and must leave
    at least one boundary circle free; the cover comes from H1 -> Z/N with
    c_i -> N/n_i.  ``uniform=n`` asks for degree n on every boundary circle.
    """
    base = _as_base(base)
    if base.genus == 0 and base.n_boundary == 1:
        raise DiskBase("the disk has no nontrivial covers")
    p = base.n_boundary
    if uniform is None:
        prescribed = {int(k): int(v) for k, v in (prescribed or {}).items()}
        free = [j for j in range(1, p + 1) if j not in prescribed]
        if not free:
            raise SclError("case 1 needs an unprescribed boundary circle; use uniform=")
        # Relabel so a free circle is the dependent last one.
        order = [j for j in range(1, p + 1) if j != free[-1]] + [free[-1]]
        rel = SurfaceBase(base.genus, p)
        N = math.lcm(*prescribed.values()) if prescribed else 1
        phi = {f"c{i}": N // prescribed[j] for i, j in enumerate(order[:-1], start=1)
               if j in prescribed}
        plan = _regular_cover(rel, N, phi, lambda i, v: (i + (v or 0)) % N)
        plan.boundary_labels = order
        plan.recipe = "cyclic"
    elif p > 1:
        n = int(uniform)
        dims = p - 1

        def add(i, v):
            if not v:
                return i
            digits = [(i // n**t) % n for t in range(dims)]
            digits = [(d + w) % n for d, w in zip(digits, v)]
            return sum(d * n**t for t, d in enumerate(digits))

        phi = {f"c{i}": tuple(int(t == i - 1) for t in range(dims)) for i in range(1, p)}
        plan = _regular_cover(base, n**dims, phi, add)
        plan.recipe = "abelian"
    else:
        n = int(uniform)
        plan = _double_then_cyclic(base, n) if n > 1 else _regular_cover(base, 1, {}, lambda i, v: i)
        if n == 1:
            plan.recipe = "trivial"
    return plan


def degrees_over(plan: CoverPlan, original_index: int):
    """Cycle type over a boundary circle given by its caller-side index."""
    labels = plan.boundary_labels
    j = labels.index(original_index) + 1 if labels else original_index
    return plan.boundary_degrees(j)
