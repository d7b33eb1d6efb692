"""Inverse sequences of cellular graphs, truncation, and the axiom checker.

A system is a pure description: level universes, per-level relations, a
single-step bonding map and a preimage oracle.  A :class:`Truncation` is a
view on it -- depth D levels, with a per-level integer parameter bound that
grows downward so that bonding images stay inside the truncation (the
built-in symbolic system can raise a d-index by up to i-1 when mapping from
level i+1 to level i, and the schedule's step of i+1 covers that).

All checks are certificates about the truncation: monotone evidence for the
infinite system, not proofs about it.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import DomainError, RangeError, UsageError
from .relations import CellularGraph, Relation
from .report import Report
from .sets import LinearFamily, SymbolicVertexSet, vset
from .vertices import Vertex

COMPOSITION_SAMPLE = 10_000


@dataclass(frozen=True)
class Truncation:
    depth: int
    breadth: int

    def __post_init__(self):
        if self.depth < 1:
            raise RangeError("truncation depth must be >= 1")
        if self.breadth < 0:
            raise RangeError("truncation breadth must be >= 0")

    def bound(self, i: int) -> int:
        """Parameter bound at level i: breadth + sum of levels above i."""
        return self.breadth + sum(range(i + 1, self.depth + 1))

    def describe(self) -> str:
        return f"depth={self.depth} breadth={self.breadth}"


class InverseSystem:
    """Base class for inverse sequences of cellular graphs."""

    name = "system"
    max_depth: int | None = None
    # Systems whose every vertex provably has a preimage (checked in tests)
    # may set this to skip the bounded liveness probe during enumeration.
    vertices_always_extend = False

    def __init__(self):
        self._level_cache: dict = {}

    # -- description hooks ---------------------------------------------------

    def universe(self, i: int) -> SymbolicVertexSet:
        raise NotImplementedError

    def relation(self, i: int) -> Relation:
        raise NotImplementedError

    def bonding(self, i: int, v: Vertex) -> Vertex:
        """Single bonding step: level i+1 vertex to level i vertex."""
        raise NotImplementedError

    def preimages(self, i: int, v: Vertex, bound: int) -> tuple[Vertex, ...]:
        """All level-(i+1) vertices with params <= bound mapping to v.

        The default scans the enumerated upper level; symbolic systems
        override this with exact row inversions.
        """
        self._check_level_member(i, v)
        hits = [
            w for w in self.universe(i + 1).enumerate(bound)
            if self.bonding(i, w) == v
        ]
        return tuple(sorted(hits, key=lambda w: w.sort_key))

    def family_image(self, i: int, fam: LinearFamily):
        """Image of a within-level family under bonding(i), or None."""
        return None

    # -- truncated views -----------------------------------------------------

    def truncated_vertices(self, i: int, trunc: Truncation):
        return tuple(self.universe(i).enumerate(trunc.bound(i)))

    def level(self, i: int, trunc: Truncation) -> CellularGraph:
        """The truncated level-i graph (memoized per (i, truncation))."""
        if not 1 <= i <= trunc.depth:
            raise RangeError(f"level {i} outside truncation depth {trunc.depth}")
        if self.max_depth is not None and i > self.max_depth:
            raise RangeError(f"system {self.name} has only {self.max_depth} levels")
        key = (i, trunc)
        got = self._level_cache.get(key)
        if got is None:
            got = CellularGraph(i, self.relation(i), self.truncated_vertices(i, trunc))
            self._level_cache[key] = got
        return got

    def _check_level_member(self, i: int, v: Vertex):
        if not self.universe(i).contains(v):
            raise DomainError(f"vertex {v} not in level {i} of {self.name}")

    def has_preimage(self, i: int, v: Vertex, trunc: Truncation) -> bool:
        if self.vertices_always_extend:
            return True
        return bool(self.preimages(i, v, trunc.bound(i + 1)))


def bonding_composite(system: InverseSystem, i: int, j: int, v: Vertex) -> Vertex:
    """g_i^j(v) by j - i single steps; the identity when i == j."""
    if i > j:
        raise UsageError(f"need i <= j, got i={i} j={j}")
    system._check_level_member(j, v)
    for t in range(j - 1, i - 1, -1):
        v = system.bonding(t, v)
    return v


def map_set_down(system: InverseSystem, j: int, i: int,
                 s: SymbolicVertexSet) -> SymbolicVertexSet:
    """Image of a level-j set under g_i^j, exact (atoms and families)."""
    if i > j:
        raise UsageError(f"need i <= j, got i={i} j={j}")
    cur = s
    for t in range(j - 1, i - 1, -1):
        atoms = {system.bonding(t, v) for v in cur.atoms}
        nxt = SymbolicVertexSet(atoms)
        for fam in cur.families:
            img = system.family_image(t, fam)
            if img is None:
                raise UsageError(
                    f"system {system.name} cannot map the family {fam} "
                    f"through bonding({t}) symbolically"
                )
            nxt = nxt.union(img)
        cur = nxt
    return cur


def preimages(system: InverseSystem, i: int, v: Vertex, bound: int):
    system._check_level_member(i, v)
    return system.preimages(i, v, bound)


def check_axioms(system: InverseSystem, trunc: Truncation, *,
                 include_surjectivity=False, seed=None) -> Report:
    """Run the inverse-sequence axioms over a truncation.

    Per level: reflexivity and symmetry of the relation on the enumeration.
    Per adjacent pair: bonding totality, edge preservation for every
    enumerated edge, and forward closure.  The composition law g_n^l =
    g_n^m o g_m^l is checked exhaustively when the triple count is small,
    else on a deterministic pseudo-random sample seeded by the system name.
    Surjectivity is optional: some systems legitimately have dead vertices.
    """
    report = Report(system.name, trunc.describe())
    depth = trunc.depth
    if system.max_depth is not None:
        depth = min(depth, system.max_depth)

    levels = {i: system.level(i, trunc) for i in range(1, depth + 1)}

    for i in range(1, depth + 1):
        graph = levels[i]
        rel = graph.relation
        vert_set = set(graph.vertices)

        bad = next((v for v in graph.vertices if not rel.ball(v).contains(v)), None)
        report.add(f"level {i} relation reflexive", bad is None,
                   f"counterexample {bad}" if bad else f"{len(graph.vertices)} vertices",
                   payload=bad)

        asym = None
        for v in graph.vertices:
            for u in rel.ball(v).enumerate(trunc.bound(i)):
                if u in vert_set and not rel.ball(u).contains(v):
                    asym = (v, u)
                    break
            if asym:
                break
        report.add(f"level {i} relation symmetric", asym is None,
                   f"({asym[0]}, {asym[1]}) one-directional" if asym else "",
                   payload=asym)

    for i in range(1, depth):
        upper = levels[i + 1]
        lower = levels[i]
        lower_set = set(lower.vertices)

        stray = None
        for w in upper.vertices:
            try:
                img = system.bonding(i, w)
            except Exception:  # noqa: BLE001 - report, never raise
                stray = (w, None)
                break
            if not system.universe(i).contains(img):
                stray = (w, img)
                break
        report.add(f"bonding {i + 1}->{i} total", stray is None,
                   f"{stray[0]} maps outside level {i}" if stray else "",
                   payload=stray)
        if stray:
            continue

        leak = next(
            (w for w in upper.vertices if system.bonding(i, w) not in lower_set),
            None,
        )
        report.add(f"level {i + 1} forward closure", leak is None,
                   f"{leak} maps outside the truncated level {i}" if leak else "",
                   payload=leak)

        bad_edge = None
        upper_set = set(upper.vertices)
        for w in upper.vertices:
            ball_w = upper.relation.ball(w)
            for u in ball_w.enumerate(trunc.bound(i + 1)):
                if u not in upper_set:
                    continue
                if not lower.relation.contains_pair(
                    system.bonding(i, w), system.bonding(i, u)
                ):
                    bad_edge = (w, u)
                    break
            if bad_edge:
                break
        report.add(
            f"bonding {i + 1}->{i} preserves edges", bad_edge is None,
            f"edge ({bad_edge[0]}, {bad_edge[1]}) maps to a non-edge"
            if bad_edge else "",
            payload=bad_edge,
        )

    _check_composition(system, levels, depth, report, seed)

    if include_surjectivity:
        for i in range(1, depth):
            dead = next(
                (v for v in levels[i].vertices
                 if not system.has_preimage(i, v, trunc)),
                None,
            )
            report.add(f"level {i} bonding surjective on truncation",
                       dead is None,
                       f"{dead} has no preimage within bounds" if dead else "",
                       payload=dead)

    return report


def _check_composition(system, levels, depth, report, seed):
    combos = list(itertools.combinations(range(1, depth + 1), 3))
    triple_count = sum(len(levels[l].vertices) for (_, _, l) in combos)

    ident_bad = next(
        (v for i in range(1, depth + 1) for v in levels[i].vertices
         if bonding_composite(system, i, i, v) != v),
        None,
    )
    report.add("bonding identity g_i^i", ident_bad is None,
               f"moved {ident_bad}" if ident_bad else "", payload=ident_bad)

    def law_holds(n, m, l, v):
        via = bonding_composite(system, n, m, bonding_composite(system, m, l, v))
        return bonding_composite(system, n, l, v) == via

    bad = None
    if triple_count <= COMPOSITION_SAMPLE:
        for n, m, l in combos:
            for v in levels[l].vertices:
                if not law_holds(n, m, l, v):
                    bad = (n, m, l, v)
                    break
            if bad:
                break
        mode = f"exhaustive, {triple_count} triples"
    else:
        rng = random.Random(f"{system.name}:{seed}")
        for _ in range(COMPOSITION_SAMPLE):
            n, m, l = rng.choice(combos)
            v = rng.choice(levels[l].vertices)
            if not law_holds(n, m, l, v):
                bad = (n, m, l, v)
                break
        mode = f"sampled, {COMPOSITION_SAMPLE} triples"
    report.add("bonding composition g_n^l = g_n^m o g_m^l", bad is None,
               f"violated at {bad}" if bad else mode, payload=bad)


def diagonal_relation(vertices) -> Relation:
    """The identity entourage over a finite vertex collection."""
    universe = vset(*vertices)
    return Relation.from_pairs({(v, v) for v in universe.atoms}, universe)
