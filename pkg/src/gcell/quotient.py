"""Finite-depth quotient approximations and the level-quotient comparison.

``quotient_at_depth`` partitions the enumerated prefixes into the
equivalence closure of finite-depth relatedness (closure is needed: even
for g-cell systems the finite-depth relation need not be transitive, so
blocks are "closure classes", deliberately not called classes of r).

``level_quotient_system`` builds the inverse system of per-level quotients
G_i / r_i -- only defined when each truncated relation is transitive and
the induced maps are well-defined.  ``compare_quotients`` then contrasts
the size of the enumerated inverse limit against the number of threads of
the level-quotient system: the two sides genuinely diverge (the paper's
shrinking-interval example dies on the limit side while every level keeps
one class).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UsageError
from .relations import Relation, is_transitive_on, make_relation
from .sets import vset
from .system import InverseSystem, Truncation
from .threads import ThreadPrefix, _adjacency, enumerate_threads
from .vertices import Vertex


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:  # path compression
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx

    def blocks(self):
        groups: dict = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return list(groups.values())


@dataclass(frozen=True)
class Partition:
    depth: int
    blocks: tuple[tuple[ThreadPrefix, ...], ...]

    def block_of(self, p: ThreadPrefix):
        for idx, block in enumerate(self.blocks):
            if p in block:
                return idx
        raise UsageError(f"prefix {p} not in the partitioned set")

    def same_block(self, p, q) -> bool:
        return self.block_of(p) == self.block_of(q)

    @property
    def nontrivial_blocks(self):
        return tuple(b for b in self.blocks if len(b) > 1)


def quotient_at_depth(system: InverseSystem, depth: int,
                      trunc: Truncation) -> Partition:
    """Equivalence-closure classes of relatedness over enumerated prefixes."""
    threads = enumerate_threads(system, depth, trunc)
    uf = _UnionFind(threads)
    nbrs = _adjacency(threads, system)
    for x in threads:
        for y in nbrs[x]:
            uf.union(x, y)
    blocks = [tuple(sorted(b, key=lambda p: p.sort_key)) for b in uf.blocks()]
    blocks.sort(key=lambda b: b[0].sort_key)
    return Partition(depth, tuple(blocks))


class LevelQuotientSystem(InverseSystem):
    """The inverse system of per-level quotient graphs.

    Vertices of level i are class representatives (lexicographic minima);
    the quotient of an equivalence relation relates classes only to
    themselves, so each level carries the diagonal relation.  Levels are
    already finite, so the breadth bound is not re-applied to them.
    """

    def __init__(self, base: InverseSystem, levels, to_rep):
        super().__init__()
        self.name = f"levelq({base.name})"
        self.base = base
        self._levels = levels      # i -> tuple of representatives
        self._to_rep = to_rep      # i -> callable vertex -> representative
        self.max_depth = len(levels)

    def universe(self, i):
        return vset(*self._levels[i - 1])

    def relation(self, i):
        return make_relation([], self.universe(i))

    def truncated_vertices(self, i, trunc):
        return self._levels[i - 1]

    def bonding(self, i, v):
        return self._to_rep[i - 1](self.base.bonding(i, v))

    def preimages(self, i, v, bound):
        self._check_level_member(i, v)
        if i >= self.max_depth:
            return ()
        return tuple(
            w for w in self._levels[i] if self.bonding(i, w) == v
        )


def level_quotient_system(system: InverseSystem, trunc: Truncation,
                          depth: int | None = None) -> LevelQuotientSystem:
    """Quotient each truncated level by its (checked transitive) relation.

    A full relation over a symbolically nonempty universe collapses to a
    single class regardless of the enumeration, so unboundedly wide levels
    (the shrinking-interval and natural-number examples) keep their one
    class even when the breadth schedule cannot see any vertex.
    """
    top = depth if depth is not None else trunc.depth
    if system.max_depth is not None:
        top = min(top, system.max_depth)

    levels = []
    to_rep = []
    for i in range(1, top + 1):
        rel = system.relation(i)
        if rel.full and not rel.universe.is_empty:
            rep = rel.universe.min_member()
            levels.append((rep,))
            to_rep.append(lambda v, rep=rep: rep)
            continue
        verts = system.level(i, trunc).vertices
        ok, witness = is_transitive_on(rel, trunc.bound(i))
        if not ok:
            raise UsageError(
                f"level {i} relation is not transitive; witness {witness}"
            )
        uf = _UnionFind(verts)
        vert_set = set(verts)
        for v in verts:
            for u in rel.ball(v).enumerate(trunc.bound(i)):
                if u in vert_set:
                    uf.union(v, u)
        reps = {}
        for block in uf.blocks():
            rep = min(block, key=lambda v: v.sort_key)
            for v in block:
                reps[v] = rep
        levels.append(tuple(sorted(set(reps.values()), key=lambda v: v.sort_key)))
        to_rep.append(lambda v, table=reps: table[v])

    _check_induced_maps(system, trunc, top, levels, to_rep)
    return LevelQuotientSystem(system, levels, to_rep)


def _check_induced_maps(system, trunc, top, levels, to_rep):
    """Induced maps must send related vertices to the same class."""
    for i in range(1, top):
        rel_up = system.relation(i + 1)
        rep_low = to_rep[i - 1]
        verts = system.level(i + 1, trunc).vertices
        if rel_up.full:
            images = {rep_low(system.bonding(i, v)) for v in verts}
            if len(images) > 1:
                raise UsageError(
                    f"induced map ill-defined at level {i + 1}: the full "
                    f"relation maps onto {len(images)} distinct classes"
                )
            continue
        vert_set = set(verts)
        for v in verts:
            for u in rel_up.ball(v).enumerate(trunc.bound(i + 1)):
                if u not in vert_set:
                    continue
                if rep_low(system.bonding(i, v)) != rep_low(system.bonding(i, u)):
                    raise UsageError(
                        f"induced map ill-defined at level {i + 1}: edge "
                        f"({v}, {u}) maps to distinct classes"
                    )


@dataclass(frozen=True)
class QuotientComparison:
    gstar_classes: int
    levelq_threads: int
    witness: str

    @property
    def equal(self) -> bool:
        return self.gstar_classes == self.levelq_threads


def compare_quotients(system: InverseSystem, depth: int,
                      trunc: Truncation) -> QuotientComparison:
    """Contrast the enumerated inverse limit with the limit of quotients.

    The left count is the number of depth-n prefixes alive to the
    truncation horizon (the paper's comparisons concern whether the limit
    side is empty or how many points it carries).  The right count
    enumerates threads of the level-quotient system built over the first
    ``depth`` levels, with no lookahead beyond them: that system has no
    deeper levels to prune against.
    """
    gstar = len(enumerate_threads(system, depth, trunc))
    inner = Truncation(depth, trunc.breadth)
    lqs = level_quotient_system(system, inner)
    levelq = len(enumerate_threads(lqs, depth, inner))
    if gstar == levelq:
        witness = f"counts agree at depth {depth}"
    else:
        witness = (
            f"depth-{depth} inverse limit keeps {gstar} thread(s) within the "
            f"truncation while the limit of level quotients keeps {levelq}"
        )
    return QuotientComparison(gstar, levelq, witness)
