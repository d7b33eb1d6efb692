"""Cellular graphs: entourage relations over vertex universes.

A relation body is one of three shapes: an explicit finite pair set, a
"full" marker (every pair related), or a ball oracle giving ``B(v, r)``
in closed symbolic form.  Oracles used with infinite universes must also
map a :class:`LinearFamily` to the union of its members' balls; that is a
construction obligation of each system, spot-checked by the axiom checker.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError, UsageError
from .sets import (
    LinearFamily,
    SetOrder,
    SymbolicVertexSet,
    compare_sets,
    intersect_sets,
    subset_of,
    vset,
)
from .vertices import Vertex


class Relation:
    """A reflexive, symmetric relation (entourage of the diagonal)."""

    __slots__ = ("universe", "pairs", "_ball_fn", "_family_fn", "full", "_index")

    def __init__(self, universe, *, pairs=None, ball_fn=None, family_fn=None,
                 full=False):
        if sum((pairs is not None, ball_fn is not None, full)) != 1:
            raise UsageError("relation body must be pairs, an oracle, or full")
        self.universe = universe
        self.pairs = frozenset(pairs) if pairs is not None else None
        self._ball_fn = ball_fn
        self._family_fn = family_fn
        self.full = full
        self._index = None

    @classmethod
    def from_pairs(cls, pairs, universe):
        return cls(universe, pairs=pairs)

    @classmethod
    def from_oracle(cls, universe, ball_fn, family_fn=None):
        return cls(universe, ball_fn=ball_fn, family_fn=family_fn)

    @classmethod
    def full_on(cls, universe):
        return cls(universe, full=True)

    def _check_member(self, v):
        if not self.universe.contains(v):
            raise DomainError(f"vertex {v} outside the relation's universe")

    def ball(self, v: Vertex) -> SymbolicVertexSet:
        self._check_member(v)
        if self.full:
            return self.universe
        if self.pairs is not None:
            if self._index is None:
                index = {}
                for p, q in self.pairs:
                    index.setdefault(p, set()).add(q)
                self._index = index
            return vset(v, *self._index.get(v, ()))
        return self._ball_fn(v)

    def family_ball(self, fam: LinearFamily) -> SymbolicVertexSet:
        if self.full:
            return self.universe
        if self._family_fn is None:
            raise UsageError(
                "relation has no family-aware oracle; cannot take the ball "
                f"of the infinite family {fam}"
            )
        return self._family_fn(fam)

    def contains_pair(self, u: Vertex, v: Vertex) -> bool:
        if u == v:
            self._check_member(u)
            return True
        return self.ball(u).contains(v)


def make_relation(pairs, universe: SymbolicVertexSet) -> Relation:
    """Smallest reflexive symmetric relation containing the given pairs.

    The universe must be finite (atoms only) so the diagonal can be
    materialized; symbolic systems supply ball oracles instead.
    """
    if universe.families:
        raise DomainError("make_relation needs a finite universe")
    closure = {(v, v) for v in universe.atoms}
    for u, v in pairs:
        for endpoint in (u, v):
            if not universe.contains(endpoint):
                raise DomainError(f"pair endpoint {endpoint} outside universe")
        closure.add((u, v))
        closure.add((v, u))
    return Relation.from_pairs(closure, universe)


def ball(v: Vertex, r: Relation) -> SymbolicVertexSet:
    return r.ball(v)


def ball_set(s: SymbolicVertexSet, r: Relation) -> SymbolicVertexSet:
    """Union of the balls of all members of s (exact, family-wise)."""
    ok, stray = subset_of(s, r.universe)
    if not ok:
        raise DomainError(f"set member {stray} outside the relation's universe")
    out = s
    for v in s.atoms:
        out = out.union(r.ball(v))
    for fam in s.families:
        out = out.union(r.family_ball(fam))
    return out


def two_ball(v: Vertex, r: Relation) -> SymbolicVertexSet:
    """B(v, 2r): everything reachable by a path of length two."""
    return ball_set(r.ball(v), r)


def is_transitive_on(r: Relation, bound: int):
    """Check B(x, 2r) <= B(x, r) for every x enumerated up to bound.

    Returns (True, None) or (False, (x, y, z)) with (x,y),(y,z) in r and
    (x,z) not.  The ball comparison itself is exact (symbolic), only the
    quantifier over x is truncated.
    """
    for x in r.universe.enumerate(bound):
        b1 = r.ball(x)
        b2 = two_ball(x, r)
        order, sep = compare_sets(b2, b1)
        if order is SetOrder.EQUAL:
            continue
        z = sep  # a member of B(x,2r) \ B(x,r)
        mid = intersect_sets(r.ball(x), r.ball(z))
        y = mid.min_member()
        return False, (x, y, z)
    return True, None


@dataclass(frozen=True)
class CellularGraph:
    """One truncated level: its index, relation, and materialized vertices."""

    level: int
    relation: Relation
    vertices: tuple[Vertex, ...] = field(default=())

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level index must be >= 1")
