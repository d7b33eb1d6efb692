"""Shared builders for the test suite."""

import random

import pytest

from gcell.dsl import system_from_dsl
from gcell.relations import make_relation
from gcell.sets import vset
from gcell.system import InverseSystem
from gcell.vertices import user


def toy_dsl_text(name="toy", levels=6, clique=("x", "y"), extra=("z",)):
    """A finite g-cell system: one clique plus isolated vertices, identity maps.

    Pass ``clique=None`` for a purely diagonal relation.
    """
    names = (list(clique) if clique else []) + list(extra)
    lines = [f"system {name}"]
    for i in range(1, levels + 1):
        lines.append(f"level {i}")
        lines.append("vertex " + " ".join(names))
        if clique:
            lines.append(f"edge {clique[0]} {clique[1]}")
    for j in range(2, levels + 1):
        lines.append(f"map {j} {j - 1}")
        for n in names:
            lines.append(f"{n} -> {n}")
    return "\n".join(lines) + "\n"


@pytest.fixture
def toy_system():
    return system_from_dsl(toy_dsl_text())


class RandomFiniteSystem(InverseSystem):
    """A small random system with edge preservation by construction.

    Maps are drawn first; each lower relation then contains the image of
    the relation above it plus its own random extra pairs, which makes
    edge preservation hold for every draw.
    """

    def __init__(self, rng: random.Random, depth=3, width=4):
        super().__init__()
        self.name = f"random-{rng.random():.6f}"
        self.max_depth = depth
        sizes = [rng.randint(1, width) for _ in range(depth)]
        self._verts = [
            tuple(user(f"v{i}_{n}") for n in range(sizes[i]))
            for i in range(depth)
        ]
        self._maps = []
        for i in range(depth - 1):
            self._maps.append({
                w: rng.choice(self._verts[i]) for w in self._verts[i + 1]
            })
        pair_sets = [set() for _ in range(depth)]
        for i in reversed(range(depth)):
            verts = self._verts[i]
            for _ in range(rng.randint(0, 2 * len(verts))):
                pair_sets[i].add((rng.choice(verts), rng.choice(verts)))
            if i + 1 < depth:
                down = self._maps[i]
                for u, v in pair_sets[i + 1]:
                    pair_sets[i].add((down[u], down[v]))
        self._relations = [
            make_relation(pair_sets[i], vset(*self._verts[i]))
            for i in range(depth)
        ]

    def universe(self, i):
        return vset(*self._verts[i - 1])

    def relation(self, i):
        return self._relations[i - 1]

    def bonding(self, i, v):
        return self._maps[i - 1][v]


def random_finite_system(seed, depth=3, width=4):
    return RandomFiniteSystem(random.Random(seed), depth, width)
