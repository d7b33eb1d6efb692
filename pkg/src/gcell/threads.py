"""Finite-depth thread machinery over an inverse system.

A depth-n prefix approximates a thread of the inverse limit by its first n
coordinates.  Because bonding maps are functions, a consistent prefix is
determined by its top coordinate; enumeration therefore walks the truncated
top level and descends, discarding prefixes that cannot be extended to the
truncation horizon (those witness non-surjectivity, and are reported when
asked for).

Everything here is evidence about the truncation: relatedness at depth n is
necessary, not sufficient, for relatedness of full threads.  In particular
a finite-depth transitivity counterexample may die at deeper levels; only a
g-cell certificate (the collapse condition on 2r-balls) is conclusive.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ResourceBudgetError, UsageError
from .relations import ball, two_ball
from .sets import SymbolicVertexSet, subset_of, vset
from .system import InverseSystem, Truncation, bonding_composite, map_set_down
from .vertices import Vertex

ENUMERATION_BUDGET = 20_000


@dataclass(frozen=True)
class ThreadPrefix:
    coords: tuple[Vertex, ...]

    @property
    def depth(self) -> int:
        return len(self.coords)

    def coord(self, i: int) -> Vertex:
        """1-based coordinate access: coord(i) lives in level i."""
        return self.coords[i - 1]

    def restrict(self, n: int) -> "ThreadPrefix":
        return ThreadPrefix(self.coords[:n])

    def is_consistent(self, system: InverseSystem) -> bool:
        return all(
            system.bonding(i, self.coord(i + 1)) == self.coord(i)
            for i in range(1, self.depth)
        )

    @property
    def sort_key(self):
        return tuple(v.sort_key for v in self.coords)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self.coords) + ")"

    def __repr__(self):
        return f"<prefix {self}>"


def prefix_of(*coords: Vertex) -> ThreadPrefix:
    return ThreadPrefix(coords)


def descend(system: InverseSystem, depth: int, top: Vertex) -> ThreadPrefix:
    """The unique consistent prefix with the given top coordinate."""
    coords = [top]
    for i in range(depth - 1, 0, -1):
        coords.append(system.bonding(i, coords[-1]))
    return ThreadPrefix(tuple(reversed(coords)))


def extend(p: ThreadPrefix, system: InverseSystem, bound: int):
    """All consistent one-step extensions within the parameter bound."""
    tops = system.preimages(p.depth, p.coord(p.depth), bound)
    return [ThreadPrefix(p.coords + (w,)) for w in tops]


def enumerate_threads(system: InverseSystem, depth: int, trunc: Truncation,
                      budget: int = ENUMERATION_BUDGET, include_dead=False):
    """All depth-n prefixes alive to the truncation horizon, sorted.

    A prefix is alive when its top coordinate has a chain of preimages
    reaching level trunc.depth within the breadth schedule.  With
    ``include_dead`` the dead prefixes are returned as a second list
    instead of being dropped silently.
    """
    if depth > trunc.depth:
        raise UsageError(f"depth {depth} exceeds truncation depth {trunc.depth}")
    horizon = trunc.depth
    if system.max_depth is not None:
        horizon = min(horizon, system.max_depth)
    if depth > horizon:
        raise UsageError(f"system {system.name} has only {horizon} levels")

    alive_memo: dict = {}

    def alive(i, v):
        if system.vertices_always_extend or i >= horizon:
            return True
        key = (i, v)
        got = alive_memo.get(key)
        if got is None:
            got = any(
                alive(i + 1, w)
                for w in system.preimages(i, v, trunc.bound(i + 1))
            )
            alive_memo[key] = got
        return got

    tops = system.level(depth, trunc).vertices
    if len(tops) > budget:
        raise ResourceBudgetError(
            f"thread enumeration exceeds budget at {len(tops)} candidates",
            count=len(tops),
        )
    live, dead = [], []
    for v in tops:
        (live if alive(depth, v) else dead).append(descend(system, depth, v))
    live.sort(key=lambda p: p.sort_key)
    if include_dead:
        dead.sort(key=lambda p: p.sort_key)
        return live, dead
    return live


def related_at_depth(x: ThreadPrefix, y: ThreadPrefix,
                     system: InverseSystem) -> bool:
    """The natural relation at finite depth: related at every coordinate."""
    if x.depth != y.depth:
        raise UsageError(f"depth mismatch: {x.depth} vs {y.depth}")
    return all(
        system.relation(i).contains_pair(x.coord(i), y.coord(i))
        for i in range(1, x.depth + 1)
    )


def _adjacency(threads, system):
    nbrs = {p: {p} for p in threads}
    for ia, x in enumerate(threads):
        for y in threads[ia + 1:]:
            if related_at_depth(x, y, system):
                nbrs[x].add(y)
                nbrs[y].add(x)
    return nbrs


def transitivity_counterexample(system: InverseSystem, depth: int,
                                trunc: Truncation,
                                budget: int = ENUMERATION_BUDGET):
    """First (x, y, z) with x~y, y~z but not x~z among enumerated prefixes.

    Returns None when no such triple exists; absence at finite depth is
    evidence of g-cellness, not a proof.
    """
    threads = enumerate_threads(system, depth, trunc, budget=budget)
    nbrs = _adjacency(threads, system)
    for x in threads:
        for y in sorted(nbrs[x], key=lambda p: p.sort_key):
            for z in sorted(nbrs[y], key=lambda p: p.sort_key):
                if z not in nbrs[x]:
                    return x, y, z
    return None


def gcell_certificate(system: InverseSystem, p: ThreadPrefix, i: int,
                      budget_j: int | None = None):
    """Least j in [i, budget] with g_i^j(B(p_j, 2r_j)) inside B(p_i, r_i).

    This is the collapse condition: g_i^j folds every length-2 path at p_j
    into an edge at p_i.  Computed with exact symbolic sets.  Returns None
    when no level within the prefix (and budget) certifies.
    """
    if not 1 <= i <= p.depth:
        raise UsageError(f"level {i} outside prefix depth {p.depth}")
    top = p.depth if budget_j is None else min(p.depth, budget_j)
    target = ball(p.coord(i), system.relation(i))
    for j in range(i, top + 1):
        wide = two_ball(p.coord(j), system.relation(j))
        image = map_set_down(system, j, i, wide)
        ok, _ = subset_of(image, target)
        if ok:
            return j
    return None


@dataclass(frozen=True)
class BasicOpen:
    """A cylinder g_i^{-1}(A): threads whose level-i coordinate lies in A."""

    level: int
    vertex_set: SymbolicVertexSet


def in_basic_open(p: ThreadPrefix, u: BasicOpen) -> bool:
    if p.depth < u.level:
        raise UsageError(f"prefix depth {p.depth} below cylinder level {u.level}")
    return u.vertex_set.contains(p.coord(u.level))


def saturate(s, all_threads, system: InverseSystem):
    """Depth-n approximation of B(S, r): everything related to a member of S."""
    depths = {p.depth for p in s} | {p.depth for p in all_threads}
    if len(depths) > 1:
        raise UsageError(f"mixed depths {sorted(depths)} in saturation")
    return [
        y for y in all_threads
        if any(related_at_depth(x, y, system) for x in s)
    ]


def closedness_probe(system: InverseSystem, x: ThreadPrefix, opens, trunc):
    """Search for a cylinder U around x with B(U, r) inside the union of opens.

    The candidate cylinders are g_j^{-1}(x_j) for j up to the prefix depth,
    the shape the closed-quotient-map criterion uses for discrete levels.
    Precondition: the opens must cover the saturation of {x}; a violation
    raises naming an uncovered related prefix.
    """
    all_threads = enumerate_threads(system, x.depth, trunc)

    def covered(p):
        return any(in_basic_open(p, u) for u in opens)

    for p in saturate([x], all_threads, system):
        if not covered(p):
            raise UsageError(
                f"open family does not cover B(x, r): uncovered prefix {p}"
            )

    for j in range(1, x.depth + 1):
        members = [p for p in all_threads if p.coord(j) == x.coord(j)]
        if all(covered(p) for p in saturate(members, all_threads, system)):
            return BasicOpen(j, vset(x.coord(j)))
    return None


@dataclass(frozen=True)
class SeparationSetDescriptor:
    """One side of a separation pair: {[z] : z_i in center and some level
    j > i unrelates z from every thread over the boundary}."""

    level: int
    center: SymbolicVertexSet
    witness_depth: int | None
    boundary: SymbolicVertexSet

    def contains(self, p: ThreadPrefix, all_threads, system) -> bool:
        if not self.center.contains(p.coord(self.level)):
            return False
        boundary_threads = [
            w for w in all_threads
            if self.boundary.contains(w.coord(self.level))
        ]
        for j in range(self.level + 1, p.depth + 1):
            rel = system.relation(j)
            if all(
                not rel.contains_pair(p.coord(j), w.coord(j))
                for w in boundary_threads
            ):
                return True
        return False


def separation_sets(x: ThreadPrefix, y: ThreadPrefix, system: InverseSystem,
                    trunc: Truncation | None = None):
    """Build the two separation descriptors for unrelated threads x and y.

    Levels are discrete here, so the centers are the singletons {x_i} and
    {y_i} at the least level i where the coordinates are unrelated.  With a
    truncation, disjointness over the enumerated prefixes is verified and
    witness depths for x and y themselves are recorded when they exist.
    """
    if x.depth != y.depth:
        raise UsageError(f"depth mismatch: {x.depth} vs {y.depth}")
    split = next(
        (i for i in range(1, x.depth + 1)
         if not system.relation(i).contains_pair(x.coord(i), y.coord(i))),
        None,
    )
    if split is None:
        raise UsageError("threads are related at every level; no separation")

    def build(center_vertex):
        rel = system.relation(split)
        boundary = ball(center_vertex, rel).without_atom(center_vertex)
        return vset(center_vertex), boundary

    center_x, boundary_x = build(x.coord(split))
    center_y, boundary_y = build(y.coord(split))
    witness_x = witness_y = None

    if trunc is not None:
        all_threads = enumerate_threads(system, x.depth, trunc)
        witness_x = _own_witness_depth(x, split, boundary_x, all_threads, system)
        witness_y = _own_witness_depth(y, split, boundary_y, all_threads, system)
        desc_x = SeparationSetDescriptor(split, center_x, witness_x, boundary_x)
        desc_y = SeparationSetDescriptor(split, center_y, witness_y, boundary_y)
        both = [
            p for p in all_threads
            if desc_x.contains(p, all_threads, system)
            and desc_y.contains(p, all_threads, system)
        ]
        if both:
            raise UsageError(f"separation sets intersect at {both[0]}")
        return desc_x, desc_y

    desc_x = SeparationSetDescriptor(split, center_x, witness_x, boundary_x)
    desc_y = SeparationSetDescriptor(split, center_y, witness_y, boundary_y)
    return desc_x, desc_y


def _own_witness_depth(p, split, boundary, all_threads, system):
    boundary_threads = [
        w for w in all_threads if boundary.contains(w.coord(split))
    ]
    for j in range(split + 1, p.depth + 1):
        rel = system.relation(j)
        if all(
            not rel.contains_pair(p.coord(j), w.coord(j))
            for w in boundary_threads
        ):
            return j
    return None
