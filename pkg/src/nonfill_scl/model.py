"""Combinatorial description of the surface, its handle decomposition and the chain.

The surface is cut into three kinds of pieces: a compact subsurface ``sigma1``
disjoint from the chain, rectangular 1-handles crossed by the chain as fibres,
and disks containing every self-crossing of the chain.  Only the incidence data
is stored; turn arcs are derived from consecutive handle crossings.

Coordinates on a handle: the length parameter ``t`` runs from end 0 to end 1,
the crossing parameter ``u`` runs from long side A to long side B.  Marked
points on a long side are indexed by position ``0 .. len(strands) + 1``;
positions 0 and ``len(strands) + 1`` are the corners at end 0 and end 1.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from pathlib import Path
from typing import Union

from .errors import InvalidSpec, ParseError

FORMAT_VERSION = 1
SIDES = ("A", "B")
DIRECTIONS = ("AtoB", "BtoA")


def other_side(side: str) -> str:
    return "B" if side == "A" else "A"


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ParseError(f"not a rational: {value!r}")


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------- domain types


@dataclass(frozen=True)
class AlphaRef:
    alpha: str


@dataclass(frozen=True)
class HandleEnd:
    handle: str
    end: int


BoundaryItem = Union[AlphaRef, HandleEnd]


@dataclass(frozen=True)
class Sigma1Spec:
    euler_char: int
    boundary: tuple[tuple[BoundaryItem, ...], ...]


@dataclass(frozen=True)
class StrandSpec:
    id: str
    direction: str  # "AtoB" | "BtoA"


@dataclass(frozen=True)
class HandleSpec:
    id: str
    strands: tuple[StrandSpec, ...] = ()


@dataclass(frozen=True)
class LongSide:
    handle: str
    side: str
    reversed: bool


DiskBoundaryEntry = Union[AlphaRef, LongSide]


@dataclass(frozen=True)
class DiskSpec:
    id: str
    boundary: tuple[DiskBoundaryEntry, ...]


@dataclass(frozen=True)
class CrossingRef:
    handle: str
    strand: str


@dataclass(frozen=True)
class ChainComponentSpec:
    id: str
    route: tuple[CrossingRef, ...]
    weight: Fraction = Fraction(1)


@dataclass(frozen=True)
class DecompositionSpec:
    sigma1: Sigma1Spec
    handles: tuple[HandleSpec, ...]
    disks: tuple[DiskSpec, ...]
    chain: tuple[ChainComponentSpec, ...]

    def with_chain(self, chain) -> "DecompositionSpec":
        return DecompositionSpec(self.sigma1, self.handles, self.disks, tuple(chain))

    def scaled(self, k) -> "DecompositionSpec":
        """Same decomposition with every chain weight multiplied by ``k``."""
        k = Fraction(k)
        return self.with_chain(
            ChainComponentSpec(c.id, c.route, c.weight * k) for c in self.chain)

    def reversed_chain(self) -> "DecompositionSpec":
        """The chain with every component traversed backwards.

        Strand directions flip and routes are read in reverse order.
        """
        handles = tuple(
            HandleSpec(h.id, tuple(StrandSpec(s.id, "BtoA" if s.direction == "AtoB" else "AtoB")
                                   for s in h.strands))
            for h in self.handles)
        chain = tuple(ChainComponentSpec(c.id, tuple(reversed(c.route)), c.weight)
                      for c in self.chain)
        return DecompositionSpec(self.sigma1, handles, self.disks, chain)


@dataclass(frozen=True, order=True)
class Point:
    """A marked point on a long side; corners have position 0 or n_strands + 1."""

    handle: str
    side: str
    position: int


@dataclass(frozen=True)
class TurnArc:
    id: str
    disk: str
    component: str
    index: int
    start: Point
    end: Point


@dataclass(frozen=True)
class Failure:
    code: str
    message: str
    location: str = ""


@dataclass(frozen=True)
class ValidationReport:
    status: str
    derived_genus: int | None
    derived_turn_arcs: tuple[TurnArc, ...]
    failures: tuple[Failure, ...]
    spec: DecompositionSpec = field(compare=False, repr=False)
    layout: "Layout | None" = field(default=None, compare=False, repr=False)

    @property
    def valid(self) -> bool:
        return self.status == "valid"

    def require_valid(self) -> "Layout":
        if not self.valid:
            codes = ", ".join(f.code for f in self.failures)
            raise InvalidSpec(f"specification failed validation ({codes})")
        return self.layout

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "derived_genus": self.derived_genus,
            "derived_turn_arcs": [
                {"id": t.id, "disk": t.disk, "component": t.component,
                 "from": _point_dict(t.start), "to": _point_dict(t.end)}
                for t in self.derived_turn_arcs],
            "failures": [{"code": f.code, "message": f.message, "location": f.location}
                         for f in self.failures],
        }


def _point_dict(p: Point) -> dict:
    return {"handle": p.handle, "side": p.side, "position": p.position}


# ---------------------------------------------------------------- parsing


def _expect_keys(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ParseError(f"{where}: unknown keys {sorted(unknown)}")
    missing = set(required) - set(obj)
    if missing:
        raise ParseError(f"{where}: missing keys {sorted(missing)}")


def _expect_str(value, where):
    if not isinstance(value, str) or not value:
        raise ParseError(f"{where}: expected a non-empty string id")
    return value


def _expect_list(value, where):
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected a list")
    return value


def _parse_sigma1_item(obj, where) -> BoundaryItem:
    if isinstance(obj, dict) and "alpha" in obj:
        _expect_keys(obj, ["alpha"], ["alpha"], where)
        return AlphaRef(_expect_str(obj["alpha"], where))
    _expect_keys(obj, ["handle", "end"], ["handle", "end"], where)
    end = obj["end"]
    if end not in (0, 1) or isinstance(end, bool):
        raise ParseError(f"{where}: handle end must be 0 or 1")
    return HandleEnd(_expect_str(obj["handle"], where), end)


def _parse_disk_entry(obj, where) -> DiskBoundaryEntry:
    if isinstance(obj, dict) and "alpha" in obj:
        _expect_keys(obj, ["alpha"], ["alpha"], where)
        return AlphaRef(_expect_str(obj["alpha"], where))
    _expect_keys(obj, ["handle", "side", "reversed"], ["handle", "side"], where)
    if obj["side"] not in SIDES:
        raise ParseError(f"{where}: side must be 'A' or 'B'")
    rev = obj.get("reversed", False)
    if not isinstance(rev, bool):
        raise ParseError(f"{where}: reversed must be a boolean")
    return LongSide(_expect_str(obj["handle"], where), obj["side"], rev)


def spec_from_dict(doc) -> DecompositionSpec:
    """Build a :class:`DecompositionSpec` from the JSON document model."""
    _expect_keys(doc, ["format", "sigma1", "handles", "disks", "chain"],
                 ["format", "sigma1", "handles", "disks", "chain"], "document")
    if doc["format"] != FORMAT_VERSION or isinstance(doc["format"], bool):
        raise ParseError(f"unsupported format {doc['format']!r} (expected {FORMAT_VERSION})")

    s1 = doc["sigma1"]
    _expect_keys(s1, ["euler_char", "boundary"], ["euler_char", "boundary"], "sigma1")
    if not isinstance(s1["euler_char"], int) or isinstance(s1["euler_char"], bool):
        raise ParseError("sigma1.euler_char must be an integer")
    cycles = []
    for i, cyc in enumerate(_expect_list(s1["boundary"], "sigma1.boundary")):
        where = f"sigma1.boundary[{i}]"
        cycles.append(tuple(_parse_sigma1_item(it, f"{where}[{j}]")
                            for j, it in enumerate(_expect_list(cyc, where))))
    sigma1 = Sigma1Spec(s1["euler_char"], tuple(cycles))

    handles = []
    for i, h in enumerate(_expect_list(doc["handles"], "handles")):
        where = f"handles[{i}]"
        _expect_keys(h, ["id", "strands"], ["id"], where)
        strands = []
        for j, s in enumerate(_expect_list(h.get("strands", []), where + ".strands")):
            w = f"{where}.strands[{j}]"
            _expect_keys(s, ["id", "direction"], ["id", "direction"], w)
            if s["direction"] not in DIRECTIONS:
                raise ParseError(f"{w}: direction must be 'AtoB' or 'BtoA'")
            strands.append(StrandSpec(_expect_str(s["id"], w), s["direction"]))
        handles.append(HandleSpec(_expect_str(h["id"], where), tuple(strands)))

    disks = []
    for i, d in enumerate(_expect_list(doc["disks"], "disks")):
        where = f"disks[{i}]"
        _expect_keys(d, ["id", "boundary"], ["id", "boundary"], where)
        entries = tuple(_parse_disk_entry(e, f"{where}.boundary[{j}]")
                        for j, e in enumerate(_expect_list(d["boundary"], where + ".boundary")))
        disks.append(DiskSpec(_expect_str(d["id"], where), entries))

    chain = []
    for i, c in enumerate(_expect_list(doc["chain"], "chain")):
        where = f"chain[{i}]"
        _expect_keys(c, ["id", "weight", "route"], ["id", "route"], where)
        route = []
        for j, r in enumerate(_expect_list(c["route"], where + ".route")):
            w = f"{where}.route[{j}]"
            _expect_keys(r, ["handle", "strand"], ["handle", "strand"], w)
            route.append(CrossingRef(_expect_str(r["handle"], w), _expect_str(r["strand"], w)))
        weight = parse_rational(c.get("weight", 1))
        chain.append(ChainComponentSpec(_expect_str(c["id"], where), tuple(route), weight))

    return DecompositionSpec(sigma1, tuple(handles), tuple(disks), tuple(chain))


def spec_to_dict(spec: DecompositionSpec) -> dict:
    def s1_item(it):
        if isinstance(it, AlphaRef):
            return {"alpha": it.alpha}
        return {"handle": it.handle, "end": it.end}

    def disk_item(it):
        if isinstance(it, AlphaRef):
            return {"alpha": it.alpha}
        return {"handle": it.handle, "side": it.side, "reversed": it.reversed}

    return {
        "format": FORMAT_VERSION,
        "sigma1": {"euler_char": spec.sigma1.euler_char,
                   "boundary": [[s1_item(it) for it in cyc] for cyc in spec.sigma1.boundary]},
        "handles": [{"id": h.id, "strands": [{"id": s.id, "direction": s.direction}
                                             for s in h.strands]} for h in spec.handles],
        "disks": [{"id": d.id, "boundary": [disk_item(e) for e in d.boundary]}
                  for d in spec.disks],
        "chain": [{"id": c.id, "weight": format_rational(c.weight),
                   "route": [{"handle": r.handle, "strand": r.strand} for r in c.route]}
                  for c in spec.chain],
    }


def load_spec(path) -> DecompositionSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    return spec_from_dict(doc)


# ---------------------------------------------------------------- derived layout


class Layout:
    """Lookup tables derived from a structurally valid specification."""

    def __init__(self, spec: DecompositionSpec):
        self.spec = spec
        self.handles = {h.id: h for h in spec.handles}
        self.handle_order = [h.id for h in spec.handles]
        self.disk_order = [d.id for d in spec.disks]
        self.strand_position = {}
        for h in spec.handles:
            for k, s in enumerate(h.strands, start=1):
                self.strand_position[(h.id, s.id)] = k
        # (handle, side) -> (disk, index in disk boundary, reversed)
        self.long_side = {}
        self.alpha_disk = {}
        self.alpha_order = []
        for d in spec.disks:
            for i, e in enumerate(d.boundary):
                if isinstance(e, LongSide):
                    self.long_side[(e.handle, e.side)] = (d.id, i, e.reversed)
                else:
                    self.alpha_disk[e.alpha] = (d.id, i)
                    self.alpha_order.append(e.alpha)
        self.alpha_rank = {a: i for i, a in enumerate(self.alpha_order)}

    # -- handles
    def n_strands(self, handle: str) -> int:
        return len(self.handles[handle].strands)

    def strand_direction(self, handle: str, position: int) -> str:
        return self.handles[handle].strands[position - 1].direction

    def positive(self, handle: str) -> bool:
        """True when the (t, u) frame of the handle agrees with the surface orientation."""
        return self.long_side[(handle, "A")][2]

    def corner(self, handle: str, end: int, side: str) -> Point:
        return Point(handle, side, 0 if end == 0 else self.n_strands(handle) + 1)

    def forward_step(self, handle: str, side: str) -> int:
        """+1 if the disk boundary runs along the long side with increasing t."""
        return -1 if self.long_side[(handle, side)][2] else 1

    def side_disk(self, handle: str, side: str) -> str:
        return self.long_side[(handle, side)][0]

    def is_arrival(self, p: Point) -> bool:
        """True when the chain passes from the disk into the handle at ``p``."""
        d = self.strand_direction(p.handle, p.position)
        return (d == "AtoB") == (p.side == "A")

    # -- alphas
    def _neighbour(self, alpha: str, offset: int) -> LongSide:
        disk, i = self.alpha_disk[alpha]
        entries = self.spec.disks[self.disk_order.index(disk)].boundary
        return entries[(i + offset) % len(entries)]

    def alpha_start(self, alpha: str) -> Point:
        """Corner where ``alpha`` begins (the disk-boundary end of the previous long side)."""
        prev = self._neighbour(alpha, -1)
        return self.corner(prev.handle, 0 if prev.reversed else 1, prev.side)

    def alpha_end(self, alpha: str) -> Point:
        nxt = self._neighbour(alpha, +1)
        return self.corner(nxt.handle, 1 if nxt.reversed else 0, nxt.side)

    @cached_property
    def corner_alpha(self) -> dict:
        """Corner point -> (alpha, "start" | "end")."""
        table = {}
        for a in self.alpha_order:
            table[self.alpha_start(a)] = (a, "start")
            table[self.alpha_end(a)] = (a, "end")
        return table

    def derived_sigma1_cycles(self) -> list[tuple[BoundaryItem, ...]]:
        """Boundary cycles of sigma1, oriented as the boundary of sigma1.

        Sigma1 runs along each alpha against its disk-boundary direction and
        crosses a handle end between the two corners at that end.
        """
        seen, cycles = set(), []
        for a0 in self.alpha_order:
            if a0 in seen:
                continue
            cyc, a = [], a0
            while a not in seen:
                seen.add(a)
                cyc.append(AlphaRef(a))
                c = self.alpha_start(a)
                end = 0 if c.position == 0 else 1
                cyc.append(HandleEnd(c.handle, end))
                nxt, kind = self.corner_alpha[self.corner(c.handle, end, other_side(c.side))]
                assert kind == "end"
                a = nxt
            cycles.append(tuple(cyc))
        return cycles

    @cached_property
    def turn_arcs(self) -> tuple[TurnArc, ...]:
        arcs = []
        for comp in self.spec.chain:
            m = len(comp.route)
            for i, cr in enumerate(comp.route):
                nxt = comp.route[(i + 1) % m]
                p = self.exit_point(cr)
                arcs.append(TurnArc(f"{comp.id}#{i}", self.side_disk(p.handle, p.side),
                                    comp.id, i, p, self.entry_point(nxt)))
        return tuple(arcs)

    @cached_property
    def turn_arc_by_id(self) -> dict:
        return {t.id: t for t in self.turn_arcs}

    @cached_property
    def turn_rank(self) -> dict:
        return {t.id: i for i, t in enumerate(self.turn_arcs)}

    @cached_property
    def arc_ending_at(self) -> dict:
        return {t.end: t for t in self.turn_arcs}

    @cached_property
    def arc_starting_at(self) -> dict:
        return {t.start: t for t in self.turn_arcs}

    def exit_point(self, cr: CrossingRef) -> Point:
        k = self.strand_position[(cr.handle, cr.strand)]
        side = "B" if self.strand_direction(cr.handle, k) == "AtoB" else "A"
        return Point(cr.handle, side, k)

    def entry_point(self, cr: CrossingRef) -> Point:
        k = self.strand_position[(cr.handle, cr.strand)]
        side = "A" if self.strand_direction(cr.handle, k) == "AtoB" else "B"
        return Point(cr.handle, side, k)

    def weights(self) -> dict:
        return {c.id: c.weight for c in self.spec.chain}

    def weight_scale(self) -> int:
        """Least common denominator of the chain weights."""
        return lcm(*(c.weight.denominator for c in self.spec.chain)) if self.spec.chain else 1

    def disk_alphas(self, disk: str) -> list[str]:
        return [a for a in self.alpha_order if self.alpha_disk[a][0] == disk]

    def disk_turn_arcs(self, disk: str) -> list[TurnArc]:
        return [t for t in self.turn_arcs if t.disk == disk]


# ---------------------------------------------------------------- validation


def _rotations(seq):
    return [tuple(seq[i:]) + tuple(seq[:i]) for i in range(len(seq))]


def _cyclically_reduced_length(letters) -> int:
    stack = []
    for x in letters:
        if stack and stack[-1] == (x[0], -x[1]):
            stack.pop()
        else:
            stack.append(x)
    lo, hi = 0, len(stack) - 1
    while lo < hi and stack[lo] == (stack[hi][0], -stack[hi][1]):
        lo += 1
        hi -= 1
    return max(0, hi - lo + 1)


def validate(spec: DecompositionSpec) -> ValidationReport:
    """Check every structural invariant; failures are returned as data."""
    fails: list[Failure] = []

    def fail(code, message, location=""):
        fails.append(Failure(code, message, location))

    def report(genus=None, arcs=(), layout=None):
        status = "valid" if not fails else "invalid"
        return ValidationReport(status, genus, tuple(arcs), tuple(fails), spec,
                                layout if not fails else None)

    # ids
    for kind, ids in (("handle", [h.id for h in spec.handles]),
                      ("disk", [d.id for d in spec.disks]),
                      ("component", [c.id for c in spec.chain])):
        for x, n in Counter(ids).items():
            if n > 1:
                fail("DUPLICATE_ID", f"{kind} id {x!r} used {n} times", x)
    for h in spec.handles:
        for x, n in Counter(s.id for s in h.strands).items():
            if n > 1:
                fail("DUPLICATE_ID", f"strand id {x!r} used {n} times in handle {h.id}", h.id)
    handle_ids = {h.id for h in spec.handles}

    if spec.sigma1.euler_char > 0:
        fail("SIGMA1_EULER", "sigma1 must have non-positive Euler characteristic", "sigma1")
    if not spec.handles:
        fail("NO_HANDLES", "at least one handle is required")
    if not spec.disks:
        fail("NO_DISKS", "at least one disk is required")
    if not spec.chain:
        fail("EMPTY_CHAIN", "the chain has no components")

    # disks
    alpha_seen = Counter()
    side_seen = Counter()
    for d in spec.disks:
        kinds = [isinstance(e, AlphaRef) for e in d.boundary]
        if not kinds or all(kinds) or not any(kinds) or any(
                kinds[i] == kinds[(i + 1) % len(kinds)] for i in range(len(kinds))):
            fail("DISK_ALTERNATION", f"boundary of disk {d.id} must alternate alpha / long side",
                 d.id)
        for e in d.boundary:
            if isinstance(e, AlphaRef):
                alpha_seen[e.alpha] += 1
            else:
                if e.handle not in handle_ids:
                    fail("UNKNOWN_HANDLE", f"disk {d.id} references unknown handle {e.handle!r}",
                         d.id)
                    continue
                side_seen[(e.handle, e.side)] += 1
    for a, n in alpha_seen.items():
        if n > 1:
            fail("DUPLICATE_ALPHA", f"alpha {a!r} occurs {n} times on disk boundaries", a)
    for key, n in side_seen.items():
        if n > 1:
            fail("DUPLICATE_LONG_SIDE", f"long side {key[0]}.{key[1]} listed {n} times",
                 f"{key[0]}.{key[1]}")
    for h in spec.handles:
        for side in SIDES:
            if side_seen[(h.id, side)] == 0:
                fail("MISSING_LONG_SIDE", f"long side {h.id}.{side} is on no disk",
                     f"{h.id}.{side}")
    rev_flags = {}
    for d in spec.disks:
        for e in d.boundary:
            if isinstance(e, LongSide):
                rev_flags.setdefault(e.handle, []).append(e.reversed)
    for h, flags in rev_flags.items():
        if len(flags) == 2 and sum(flags) != 1:
            fail("ORIENTATION_CONVENTION",
                 f"exactly one long side of handle {h} must be reversed", h)

    # sigma1 boundary
    s1_alpha = Counter()
    s1_ends = Counter()
    for cyc in spec.sigma1.boundary:
        if not cyc:
            fail("SIGMA1_BOUNDARY", "empty sigma1 boundary cycle", "sigma1")
        for it in cyc:
            if isinstance(it, AlphaRef):
                s1_alpha[it.alpha] += 1
            else:
                if it.handle not in handle_ids:
                    fail("UNKNOWN_HANDLE", f"sigma1 references unknown handle {it.handle!r}",
                         "sigma1")
                s1_ends[(it.handle, it.end)] += 1
    for a in set(s1_alpha) | set(alpha_seen):
        if s1_alpha[a] != 1:
            fail("SIGMA1_ALPHA", f"alpha {a!r} must appear exactly once on the sigma1 boundary",
                 a)
        if alpha_seen[a] == 0:
            fail("UNKNOWN_ALPHA", f"alpha {a!r} lies on no disk", a)
    for h in spec.handles:
        for end in (0, 1):
            if s1_ends[(h.id, end)] != 1:
                fail("SIGMA1_HANDLE_END",
                     f"end {end} of handle {h.id} must appear exactly once on the sigma1 boundary",
                     h.id)
    b = len(spec.sigma1.boundary)
    g1_twice = 2 - spec.sigma1.euler_char - b
    if g1_twice < 0 or g1_twice % 2:
        fail("SIGMA1_GENUS", f"euler_char {spec.sigma1.euler_char} with {b} boundary cycles "
             "gives no integral genus", "sigma1")

    # chain references
    refs = Counter()
    for c in spec.chain:
        if c.weight <= 0:
            fail("NONPOSITIVE_WEIGHT", f"component {c.id} has weight {c.weight}", c.id)
        if not c.route:
            fail("EMPTY_ROUTE", f"component {c.id} has an empty route", c.id)
        for r in c.route:
            refs[(r.handle, r.strand)] += 1
    strand_keys = {(h.id, s.id) for h in spec.handles for s in h.strands}
    for key, n in refs.items():
        if key not in strand_keys:
            fail("UNKNOWN_STRAND", f"route references unknown strand {key[0]}.{key[1]}",
                 f"{key[0]}.{key[1]}")
        elif n > 1:
            fail("STRAND_REUSED", f"strand {key[0]}.{key[1]} crossed {n} times",
                 f"{key[0]}.{key[1]}")
    for key in sorted(strand_keys - set(refs)):
        fail("STRAND_UNUSED", f"strand {key[0]}.{key[1]} is crossed by no component",
             f"{key[0]}.{key[1]}")

    if fails:
        return report()

    layout = Layout(spec)

    # disk/handle/sigma1 consistency
    derived = layout.derived_sigma1_cycles()
    given = [tuple(c) for c in spec.sigma1.boundary]
    derived_keys = sorted((min(_rotations(c), key=repr) for c in derived), key=repr)
    given_keys = sorted((min(_rotations(c), key=repr) for c in given), key=repr)
    if derived_keys != given_keys:
        fail("SIGMA1_BOUNDARY_MISMATCH",
             "sigma1 boundary cycles disagree with the cycles implied by the disks "
             "(expected, up to rotation: "
             + "; ".join(" ".join(_item_str(i) for i in c) for c in derived) + ")", "sigma1")

    twice = spec.sigma1.euler_char + len(spec.disks) - len(spec.handles)
    genus = None
    if (2 - twice) % 2 or (2 - twice) // 2 < 2:
        fail("GENUS", f"Euler characteristic {twice} is not that of a closed surface of "
             "genus at least 2", "")
    else:
        genus = (2 - twice) // 2

    # turn arcs
    arcs = []
    for comp in spec.chain:
        m = len(comp.route)
        letters = []
        for i, cr in enumerate(comp.route):
            nxt = comp.route[(i + 1) % m]
            p, q = layout.exit_point(cr), layout.entry_point(nxt)
            dp, dq = layout.side_disk(p.handle, p.side), layout.side_disk(q.handle, q.side)
            if dp != dq:
                fail("TURN_ARC_DISK", f"component {comp.id}: crossing {i} exits into disk {dp} "
                     f"but crossing {(i + 1) % m} enters from disk {dq}", comp.id)
            k = layout.strand_position[(cr.handle, cr.strand)]
            letters.append((cr.handle, 1 if layout.strand_direction(cr.handle, k) == "AtoB"
                            else -1))
        if _cyclically_reduced_length(letters) == 0:
            fail("TRIVIAL_COMPONENT", f"component {comp.id} is null-homotopic", comp.id)
    if not fails:
        arcs = layout.turn_arcs
    return report(genus, arcs, layout)


def _item_str(it) -> str:
    if isinstance(it, AlphaRef):
        return it.alpha
    return f"{it.handle}:{it.end}"
