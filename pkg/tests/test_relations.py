"""Relation algebra: closure, balls, 2r-balls, transitivity probes."""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from gcell.constructions import circle_identity_variant, circle_system
from gcell.errors import DomainError
from gcell.relations import (
    ball,
    ball_set,
    is_transitive_on,
    make_relation,
    two_ball,
)
from gcell.sets import SetOrder, compare_sets, subset_of, vset
from gcell.vertices import b, d, rat, user


def verts(*names):
    return tuple(user(n) for n in names)


def test_empty_closure_is_diagonal():
    p, q = verts("p", "q")
    rel = make_relation([], vset(p, q))
    assert rel.pairs == {(p, p), (q, q)}


def test_symmetric_reflexive_closure():
    p, q = verts("p", "q")
    rel = make_relation([(p, q)], vset(p, q))
    assert rel.pairs == {(p, p), (q, q), (p, q), (q, p)}


def test_circle_pairs_restricted():
    # the circle relation restricted to {0, 1/4, 1/2, 3/4, 1}
    pts = [rat(0), rat(1, 4), rat(1, 2), rat(3, 4), rat(1)]
    universe = vset(*pts)
    pairs = [(rat(1, 4), rat(3, 4)), (rat(0), rat(1, 2)), (rat(1, 2), rat(1))]
    rel = make_relation(pairs, universe)
    assert rel.contains_pair(rat(1, 4), rat(3, 4))
    assert rel.contains_pair(rat(0), rat(1, 2))
    assert rel.contains_pair(rat(1, 2), rat(1))
    assert rel.contains_pair(rat(3, 4), rat(1, 4))
    for p in pts:
        assert rel.contains_pair(p, p)


def test_endpoint_outside_universe_rejected():
    p, q = verts("p", "q")
    with pytest.raises(DomainError):
        make_relation([(p, user("stray"))], vset(p, q))
    rel = make_relation([], vset(p, q))
    with pytest.raises(DomainError):
        ball(user("stray"), rel)


def test_ball_examples():
    circle = circle_system(8)
    r1 = circle.relation(1)
    assert ball(rat(0), r1) == vset(rat(0), rat(1, 2))

    p, q = verts("p", "q")
    delta = make_relation([], vset(p, q))
    assert ball(p, delta) == vset(p)


def test_ball_set_examples():
    circle = circle_system(8)
    r1 = circle.relation(1)
    assert ball_set(vset(), r1).is_empty
    assert ball_set(vset(rat(0), rat(1, 2)), r1) == vset(rat(0), rat(1, 2), rat(1))


def test_two_ball_contains_length_two_paths():
    ident = circle_identity_variant(8)
    r1 = ident.relation(1)
    wide = two_ball(rat(0), r1)
    assert wide.contains(rat(1))  # path 0 - 1/2 - 1

    # independent oracle: brute-force length-2 paths over the explicit pairs
    reachable = {
        z for (x, y) in r1.pairs if x == rat(0)
        for (y2, z) in r1.pairs if y2 == y
    }
    assert set(wide.enumerate(8)) == reachable

    p, q = verts("p", "q")
    delta = make_relation([], vset(p, q))
    assert two_ball(p, delta) == vset(p)


def test_is_transitive_examples():
    p, q, s = verts("p", "q", "s")
    delta = make_relation([], vset(p, q, s))
    assert is_transitive_on(delta, 10) == (True, None)

    full = make_relation(
        [(x, y) for x in (p, q, s) for y in (p, q, s)], vset(p, q, s)
    )
    assert is_transitive_on(full, 10) == (True, None)

    circle = circle_system(8)
    ok, witness = is_transitive_on(circle.relation(1), 8)
    assert not ok
    x, y, z = witness
    rel = circle.relation(1)
    assert rel.contains_pair(x, y) and rel.contains_pair(y, z)
    assert not rel.contains_pair(x, z)


def _closure_fixpoint(pairs, universe_atoms):
    """Independent oracle: iterate the closure conditions to a fixpoint."""
    got = set(pairs)
    got |= {(v, v) for v in universe_atoms}
    while True:
        extra = {(y, x) for (x, y) in got} - got
        if not extra:
            return got
        got |= extra


def test_closure_minimality_by_full_enumeration():
    # every reflexive-symmetric superset over a 3-vertex universe
    vs = verts("p", "q", "s")
    universe = vset(*vs)
    base = [(vs[0], vs[1])]
    all_pairs = list(itertools.product(vs, vs))
    optional = [pr for pr in all_pairs if pr[0] != pr[1]]
    supersets = []
    for mask in range(2 ** len(optional)):
        rel = {(v, v) for v in vs} | set(base)
        rel |= {optional[t] for t in range(len(optional)) if mask >> t & 1}
        if all((y, x) in rel for (x, y) in rel):
            supersets.append(rel)
    intersection = set.intersection(*supersets)
    assert make_relation(base, universe).pairs == intersection


@settings(max_examples=150, derandomize=True, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31), st.integers(2, 6))
def test_closure_minimality_vs_fixpoint(seed, size):
    rng = random.Random(seed)
    vs = verts(*(f"v{n}" for n in range(size)))
    pairs = [
        (rng.choice(vs), rng.choice(vs)) for _ in range(rng.randint(0, size * 2))
    ]
    assert make_relation(pairs, vset(*vs)).pairs == _closure_fixpoint(pairs, vs)


@settings(max_examples=150, derandomize=True, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31), st.integers(2, 6))
def test_ball_monotone_under_relation_growth(seed, size):
    rng = random.Random(seed)
    vs = verts(*(f"v{n}" for n in range(size)))
    universe = vset(*vs)
    small = [(rng.choice(vs), rng.choice(vs)) for _ in range(rng.randint(0, size))]
    extra = [(rng.choice(vs), rng.choice(vs)) for _ in range(rng.randint(0, size))]
    r = make_relation(small, universe)
    s = make_relation(small + extra, universe)
    for v in vs:
        ok, _ = subset_of(ball(v, r), ball(v, s))
        assert ok


@settings(max_examples=150, derandomize=True, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31), st.integers(2, 6))
def test_ball_symmetry_and_two_ball_growth(seed, size):
    rng = random.Random(seed)
    vs = verts(*(f"v{n}" for n in range(size)))
    universe = vset(*vs)
    pairs = [(rng.choice(vs), rng.choice(vs)) for _ in range(rng.randint(0, 2 * size))]
    rel = make_relation(pairs, universe)
    for v in vs:
        for u in vs:
            assert rel.ball(v).contains(u) == rel.ball(u).contains(v)
        ok, _ = subset_of(ball(v, rel), two_ball(v, rel))
        assert ok


@settings(max_examples=100, derandomize=True, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31), st.integers(2, 5))
def test_transitivity_probe_agrees_with_two_ball_equality(seed, size):
    rng = random.Random(seed)
    vs = verts(*(f"v{n}" for n in range(size)))
    universe = vset(*vs)
    pairs = [(rng.choice(vs), rng.choice(vs)) for _ in range(rng.randint(0, 2 * size))]
    rel = make_relation(pairs, universe)
    ok, witness = is_transitive_on(rel, 10)
    balls_equal = all(
        compare_sets(two_ball(v, rel), ball(v, rel))[0] is SetOrder.EQUAL
        for v in vs
    )
    assert ok == balls_equal
    if not ok:
        x, y, z = witness
        assert rel.contains_pair(x, y) and rel.contains_pair(y, z)
        assert not rel.contains_pair(x, z)


def test_symbolic_transitivity_witness_on_nonregular_level():
    from gcell.nonregular import nonregular_system

    rel = nonregular_system().relation(3)
    ok, witness = is_transitive_on(rel, 6)
    assert not ok
    x, y, z = witness
    assert rel.contains_pair(x, y) and rel.contains_pair(y, z)
    assert not rel.contains_pair(x, z)
    assert x.tag == "D"  # only d-vertices break transitivity at a level
