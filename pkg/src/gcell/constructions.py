"""Built-in example systems and the wedge combiner.

The circle family lives on a rational grid: every level is the full grid on
[0, 1], the relation pairs x with 1-x (plus the 1/2 pairs), and the folding
bonding map sends [1/2, 1] back onto [0, 1/2].  The identity variant keeps
the same levels and relations but breaks the fold, which destroys
transitivity of the natural relation in one step.

The vanishing-tail system shrinks its levels: level n is the grid trace of
(0, 2^-n] with the full relation and inclusion bonding, so threads die even
though every level quotient is a single class.  The verbatim variant keeps
the printed constant levels (0, 1/2]; it is retained behind its own name
because the shrinking reading is the one that makes the limit empty.

The wedge combiner glues systems at designated base threads: level i is the
disjoint union of the component levels at their i-th collapse indices, the
relation is the union of the component relations plus the full square on
the union of the base-coordinate balls.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import ParameterError, ResourceBudgetError, UsageError
from .nonregular import collapse_next, nonregular_system
from .relations import Relation, make_relation
from .sets import (
    LinearFamily,
    SymbolicVertexSet,
    intersect_sets,
    vset,
)
from .system import InverseSystem, map_set_down
from .threads import ThreadPrefix
from .vertices import Vertex, a, nat, rat


class CircleSystem(InverseSystem):
    def __init__(self, grid_denominator: int, identity_bonding=False):
        super().__init__()
        if grid_denominator <= 0 or grid_denominator % 2:
            raise ParameterError(
                f"grid denominator must be even and positive, got {grid_denominator}"
            )
        self.grid = grid_denominator
        self.identity_bonding = identity_bonding
        self.name = "circle-identity" if identity_bonding else "circle"
        self._universe = vset(*(rat(k, self.grid) for k in range(self.grid + 1)))
        half = rat(1, 2)
        pairs = [(rat(k, self.grid), rat(self.grid - k, self.grid))
                 for k in range(1, self.grid // 2)]
        pairs += [(rat(0), half), (half, rat(1))]
        self._relation = make_relation(pairs, self._universe)

    def universe(self, i):
        return self._universe

    def relation(self, i):
        return self._relation

    def bonding(self, i, v):
        if self.identity_bonding:
            return v
        x = v.as_fraction()
        return v if x < Fraction(1, 2) else rat(1 - x)

    def preimages(self, i, v, bound):
        if self.identity_bonding:
            out = [v]
        else:
            x = v.as_fraction()
            if x > Fraction(1, 2):
                out = []
            elif x == Fraction(1, 2):
                out = [v]
            else:
                out = [v, rat(1 - x)]
        keep = [w for w in out if all(p <= bound for p in w.params)]
        return tuple(sorted(keep, key=lambda w: w.sort_key))


def circle_system(grid_denominator: int) -> CircleSystem:
    return CircleSystem(grid_denominator)


def circle_identity_variant(grid_denominator: int) -> CircleSystem:
    return CircleSystem(grid_denominator, identity_bonding=True)


class VanishingTailSystem(InverseSystem):
    def __init__(self, reading="shrinking", grid_denominator=16):
        super().__init__()
        if reading not in ("shrinking", "verbatim"):
            raise ParameterError(f"unknown reading {reading!r}")
        self.reading = reading
        self.grid = grid_denominator
        self.name = ("vanishing-tail" if reading == "shrinking"
                     else "vanishing-tail-verbatim")

    @lru_cache(maxsize=None)
    def universe(self, i):
        if self.reading == "verbatim":
            top = self.grid // 2
        else:
            top = self.grid // (2 ** i)  # grid points in (0, 2^-i]
        return vset(*(rat(k, self.grid) for k in range(1, top + 1)))

    def relation(self, i):
        return Relation.full_on(self.universe(i))

    def bonding(self, i, v):
        return v

    def preimages(self, i, v, bound):
        if not self.universe(i + 1).contains(v):
            return ()
        if any(p > bound for p in v.params):
            return ()
        return (v,)


def vanishing_tail_system(reading="shrinking", grid_denominator=16):
    return VanishingTailSystem(reading, grid_denominator)


class NatFullSystem(InverseSystem):
    """Constant levels over the natural numbers, full relation, identity maps."""

    name = "nat-full"

    def __init__(self):
        super().__init__()
        self._universe = vset(families=[LinearFamily("N", (1,), 0, 1)])

    def universe(self, i):
        return self._universe

    def relation(self, i):
        return Relation.full_on(self._universe)

    def bonding(self, i, v):
        return v

    def preimages(self, i, v, bound):
        return (v,) if all(p <= bound for p in v.params) else ()

    def family_image(self, i, fam):
        return vset(families=[fam])


def nat_full_system() -> NatFullSystem:
    return NatFullSystem()


# -- wedge sum ----------------------------------------------------------------

def _wrap(part: int, v: Vertex) -> Vertex:
    return Vertex(f"W{part}:{v.tag}", v.params, v.label)


def _unwrap(v: Vertex):
    head, _, tag = v.tag.partition(":")
    return int(head[1:]), Vertex(tag, v.params, v.label)


def _wrap_set(part: int, s: SymbolicVertexSet) -> SymbolicVertexSet:
    atoms = [_wrap(part, v) for v in s.atoms]
    families = [
        LinearFamily(f"W{part}:{f.tag}", f.params, f.slot, f.stride)
        for f in s.families
    ]
    return SymbolicVertexSet(atoms, families)


class WedgeInput:
    """Component systems with their designated base threads and a search budget."""

    def __init__(self, parts, budget=32):
        if not parts:
            raise UsageError("a wedge needs at least one component")
        for system, base in parts:
            if not base.is_consistent(system):
                raise UsageError(f"base thread for {system.name} is inconsistent")
        self.parts = tuple(parts)
        self.budget = budget


class WedgeSystem(InverseSystem):
    def __init__(self, wedge_input: WedgeInput):
        super().__init__()
        self.parts = wedge_input.parts
        self.budget = wedge_input.budget
        self.name = "wedge(" + ",".join(s.name for s, _ in self.parts) + ")"
        # Collapse indices per part, grown on demand; js[k][i] = j_i^k, js[k][0] = 1.
        self._js = [[1] for _ in self.parts]

    def _j(self, part: int, i: int) -> int:
        js = self._js[part]
        system, base = self.parts[part]
        while len(js) <= i:
            js.append(collapse_next(system, base, js[-1], self.budget))
        return js[i]

    def _part_level(self, part: int, i: int):
        system, base = self.parts[part]
        ji = self._j(part, i)
        if ji > base.depth:
            raise ResourceBudgetError(
                f"base thread of {system.name} is too shallow for wedge level {i}"
            )
        return system, base, ji

    @lru_cache(maxsize=None)
    def universe(self, i):
        out = vset()
        for part in range(len(self.parts)):
            system, _, ji = self._part_level(part, i)
            out = out.union(_wrap_set(part, system.universe(ji)))
        return out

    @lru_cache(maxsize=None)
    def _hub(self, i):
        """The union of the base-coordinate balls, wrapped: one glue clique."""
        out = vset()
        for part in range(len(self.parts)):
            system, base, ji = self._part_level(part, i)
            out = out.union(
                _wrap_set(part, system.relation(ji).ball(base.coord(ji)))
            )
        return out

    def relation(self, i):
        return Relation.from_oracle(
            self.universe(i),
            ball_fn=lambda v: self._ball(i, v),
            family_fn=lambda fam: self._family_ball(i, fam),
        )

    def _ball(self, i, v):
        part, orig = _unwrap(v)
        system, base, ji = self._part_level(part, i)
        rel = system.relation(ji)
        out = _wrap_set(part, rel.ball(orig))
        if rel.ball(base.coord(ji)).contains(orig):
            out = out.union(self._hub(i))
        return out

    def _family_ball(self, i, fam):
        part = int(fam.tag.partition(":")[0][1:])
        inner = LinearFamily(fam.tag.partition(":")[2], fam.params, fam.slot,
                             fam.stride)
        system, base, ji = self._part_level(part, i)
        rel = system.relation(ji)
        out = _wrap_set(part, rel.family_ball(inner))
        base_ball = rel.ball(base.coord(ji))
        if not intersect_sets(vset(families=[inner]), base_ball).is_empty:
            out = out.union(self._hub(i))
        return out

    def bonding(self, i, v):
        part, orig = _unwrap(v)
        system, _, _ = self._part_level(part, i)
        cur = self._j(part, i + 1)
        target = self._j(part, i)
        for t in range(cur - 1, target - 1, -1):
            orig = system.bonding(t, orig)
        return _wrap(part, orig)

    def preimages(self, i, v, bound):
        part, orig = _unwrap(v)
        system, _, _ = self._part_level(part, i)
        lo, hi = self._j(part, i), self._j(part, i + 1)
        frontier = {orig}
        for t in range(lo, hi):
            frontier = {
                w for u in frontier for w in system.preimages(t, u, bound)
            }
        keep = [
            _wrap(part, w) for w in frontier
            if all(p <= bound for p in w.params)
        ]
        return tuple(sorted(keep, key=lambda w: w.sort_key))

    def family_image(self, i, fam):
        part = int(fam.tag.partition(":")[0][1:])
        inner = LinearFamily(fam.tag.partition(":")[2], fam.params, fam.slot,
                             fam.stride)
        system, _, _ = self._part_level(part, i)
        image = map_set_down(
            system, self._j(part, i + 1), self._j(part, i), vset(families=[inner])
        )
        return _wrap_set(part, image)


def wedge_combine(wedge_input: WedgeInput) -> WedgeSystem:
    return WedgeSystem(wedge_input)


# -- builtin registry for the CLI ---------------------------------------------

DEFAULT_GRID = 16
BUILTIN_NAMES = (
    "circle", "circle-identity", "vanishing-tail", "vanishing-tail-verbatim",
    "nat-full", "nonregular",
)


def base_thread(system: InverseSystem, depth: int) -> ThreadPrefix:
    """A canonical base for wedges: the lexicographically least extendable thread."""
    if isinstance(system, CircleSystem):
        return ThreadPrefix(tuple(rat(0) for _ in range(depth)))
    if system.name == "nonregular":
        return ThreadPrefix(tuple(a(n) for n in range(1, depth + 1)))
    if isinstance(system, NatFullSystem):
        return ThreadPrefix(tuple(nat(1) for _ in range(depth)))
    raise UsageError(f"no canonical base thread for {system.name}")


def builtin_system(name: str) -> InverseSystem:
    if name == "circle":
        return circle_system(DEFAULT_GRID)
    if name == "circle-identity":
        return circle_identity_variant(DEFAULT_GRID)
    if name == "vanishing-tail":
        return vanishing_tail_system("shrinking", DEFAULT_GRID)
    if name == "vanishing-tail-verbatim":
        return vanishing_tail_system("verbatim", DEFAULT_GRID)
    if name == "nat-full":
        return nat_full_system()
    if name == "nonregular":
        return nonregular_system()
    if name.startswith("wedge:"):
        names = name[len("wedge:"):].split(",")
        if len(names) < 2:
            raise UsageError("wedge needs at least two component names")
        parts = []
        for inner in names:
            system = builtin_system(inner.strip())
            parts.append((system, base_thread(system, 64)))
        return wedge_combine(WedgeInput(parts))
    raise UsageError(f"unknown builtin system {name!r}")
