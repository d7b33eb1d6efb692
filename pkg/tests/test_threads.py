"""Thread prefixes: enumeration, relatedness, certificates, separations."""

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_finite_system, toy_dsl_text

from gcell.constructions import (
    circle_identity_variant,
    circle_system,
    vanishing_tail_system,
)
from gcell.dsl import system_from_dsl
from gcell.errors import UsageError
from gcell.nonregular import nonregular_system
from gcell.sets import vset
from gcell.system import Truncation
from gcell.threads import (
    BasicOpen,
    closedness_probe,
    descend,
    enumerate_threads,
    extend,
    gcell_certificate,
    in_basic_open,
    prefix_of,
    related_at_depth,
    saturate,
    separation_sets,
    transitivity_counterexample,
)
from gcell.vertices import a, b, c, d, rat, user


def constant(v, depth):
    return prefix_of(*[v] * depth)


def a_bar(depth):
    return prefix_of(*[a(n) for n in range(1, depth + 1)])


def b_bar(k, depth):
    return prefix_of(*[b(n, k) for n in range(1, depth + 1)])


def test_extend_examples():
    nr = nonregular_system()
    exts = extend(prefix_of(a(1)), nr, 3)
    tops = {p.coord(2) for p in exts}
    assert {a(2), c(1, 2, 1), d(2, 1)} <= tops
    assert all(p.is_consistent(nr) for p in exts)

    toy = system_from_dsl(toy_dsl_text(levels=3))
    x = user("x")
    assert extend(prefix_of(x), toy, 10) == [prefix_of(x, x)]

    van = vanishing_tail_system("shrinking", 16)
    dying = prefix_of(*[rat(1, 16)] * 4)  # 1/16 <= 2^-4 but not 2^-5
    assert extend(dying, van, 16) == []


def test_enumerate_circle_constants_only():
    circle = circle_system(8)
    threads = enumerate_threads(circle, 4, Truncation(5, 8))
    assert threads == sorted(
        (constant(rat(k, 8), 4) for k in range(5)), key=lambda p: p.sort_key
    )


def test_enumerate_identity_all_constants():
    toy = system_from_dsl(toy_dsl_text(levels=3))
    threads = enumerate_threads(toy, 3, Truncation(3, 10))
    assert threads == sorted(
        (constant(user(n), 3) for n in ("x", "y", "z")),
        key=lambda p: p.sort_key,
    )


def test_enumerate_reports_dead_prefixes():
    circle = circle_system(8)
    live, dead = enumerate_threads(circle, 4, Truncation(5, 8), include_dead=True)
    assert all(p.coord(4).as_fraction() > 0.5 for p in dead)
    assert len(live) + len(dead) == 9


def test_enumerate_nonregular_contains_named_witnesses():
    nr = nonregular_system()
    threads = enumerate_threads(nr, 3, Truncation(3, 3))
    assert a_bar(3) in threads
    assert b_bar(2, 3) in threads


def test_enumerate_equals_union_of_extensions():
    nr = nonregular_system()
    tr = Truncation(4, 6)
    prev = enumerate_threads(nr, 3, tr)
    via_extend = {
        q for p in prev for q in extend(p, nr, tr.bound(4))
    }
    assert sorted(via_extend, key=lambda p: p.sort_key) == \
        enumerate_threads(nr, 4, tr)


def test_related_at_depth_examples():
    ident = circle_identity_variant(8)
    zero = constant(rat(0), 5)
    half = constant(rat(1, 2), 5)
    one = constant(rat(1), 5)
    assert related_at_depth(zero, half, ident)
    assert not related_at_depth(
        constant(rat(0), 1), constant(rat(1), 1), ident
    )
    assert related_at_depth(one, one, ident)
    with pytest.raises(UsageError):
        related_at_depth(zero, constant(rat(0), 3), ident)


def test_related_depth_monotone():
    nr = nonregular_system()
    x = a_bar(4)
    y = b_bar(4, 4)
    assert related_at_depth(x, y, nr)
    assert related_at_depth(x.restrict(3), y.restrict(3), nr)
    assert not related_at_depth(a_bar(5), b_bar(4, 5), nr)


def test_counterexample_identity_variant_exact_triple():
    ident = circle_identity_variant(16)
    got = transitivity_counterexample(ident, 1, Truncation(2, 24))
    assert got == (
        constant(rat(0), 1), constant(rat(1, 2), 1), constant(rat(1), 1)
    )


def test_counterexample_circle_none():
    circle = circle_system(16)
    assert transitivity_counterexample(circle, 5, Truncation(6, 24)) is None


def test_counterexample_nonregular_exists_but_does_not_lift():
    # The finite-depth relation of the symbolic system is not transitive at
    # any depth: d-threads that descend into the a-spine are related to a
    # low b-thread while distinct d-tops never relate to each other.  The
    # triple is a truncation artifact: the middle thread's extensions split
    # (the b-chain keeps one relation, the c2-chain the other), so no
    # depth-6 triple projects onto it.  That split is why g-cellness needs
    # the collapse certificates instead of finite-depth relatedness.
    nr = nonregular_system()
    got = transitivity_counterexample(nr, 5, Truncation(6, 20))
    assert got is not None
    x, y, z = got
    assert x == prefix_of(a(1), a(2), a(3), a(4), d(5, 4))
    assert y == prefix_of(*[b(n, 4) for n in range(1, 6)])
    assert z == prefix_of(a(1), a(2), a(3), a(4), d(5, 8))
    assert related_at_depth(x, y, nr) and related_at_depth(y, z, nr)
    assert not related_at_depth(x, z, nr)

    tr = Truncation(6, 26)
    sixes = enumerate_threads(nr, 6, tr)
    exts = {p: [q for q in sixes if q.restrict(5) == p] for p in (x, y, z)}
    assert all(exts[p] for p in (x, y, z))
    bridging = [
        qy for qy in exts[y]
        if any(related_at_depth(qx, qy, nr) for qx in exts[x])
        and any(related_at_depth(qy, qz, nr) for qz in exts[z])
    ]
    assert bridging == []


def test_gcell_certificate_examples():
    nr = nonregular_system()
    assert gcell_certificate(nr, a_bar(6), 2) == 2

    toy = system_from_dsl(toy_dsl_text(levels=4))
    thread = constant(user("x"), 4)
    assert gcell_certificate(toy, thread, 1) == 1  # transitive levels

    d_thread = descend(nr, 6, c(1, 6, 12))  # passes through d_3^5
    assert d_thread.coord(3) == d(3, 5)
    assert gcell_certificate(nr, d_thread, 3) == 6  # the trajectory c-level
    assert gcell_certificate(nr, d_thread.restrict(5), 3) is None


def test_certificate_implies_collapse_of_relation_chains():
    nr = nonregular_system()
    tr = Truncation(6, 8)
    x = descend(nr, 6, c(1, 6, 12))
    i, j = 3, gcell_certificate(nr, x, 3)
    threads = enumerate_threads(nr, 6, tr)
    rel_j = nr.relation(j)
    rel_i = nr.relation(i)
    for y in threads:
        if not rel_j.contains_pair(x.coord(j), y.coord(j)):
            continue
        for z in threads:
            if rel_j.contains_pair(y.coord(j), z.coord(j)):
                assert rel_i.contains_pair(x.coord(i), z.coord(i))


def test_basic_open_membership():
    nr = nonregular_system()
    assert in_basic_open(a_bar(3), BasicOpen(2, vset(a(2))))
    assert not in_basic_open(b_bar(2, 3), BasicOpen(3, vset(a(3))))
    half = constant(rat(1, 2), 4)
    assert in_basic_open(half, BasicOpen(1, vset(rat(0), rat(1, 2))))
    with pytest.raises(UsageError):
        in_basic_open(a_bar(2), BasicOpen(3, vset(a(3))))


def test_saturate_examples():
    circle = circle_system(8)
    tr = Truncation(5, 8)
    threads = enumerate_threads(circle, 4, tr)
    zero = constant(rat(0), 4)
    got = saturate([zero], threads, circle)
    assert got == [zero, constant(rat(1, 2), 4)]
    assert saturate(threads, threads, circle) == threads

    nr = nonregular_system()
    tr3 = Truncation(3, 5)
    all3 = enumerate_threads(nr, 3, tr3)
    sat = saturate([a_bar(3)], all3, nr)
    assert sat == [a_bar(3)] + [b_bar(k, 3) for k in range(3, 6)]


def test_saturate_extensive_and_monotone():
    nr = nonregular_system()
    tr = Truncation(3, 4)
    threads = enumerate_threads(nr, 3, tr)
    small = threads[:2]
    big = threads[:4]
    sat_small = saturate(small, threads, nr)
    sat_big = saturate(big, threads, nr)
    assert set(small) <= set(sat_small)
    assert set(sat_small) <= set(sat_big)


def test_closedness_probe_identity_example():
    ident = circle_identity_variant(8)
    zero = constant(rat(0), 3)
    opens = [BasicOpen(1, vset(rat(0), rat(1, 2)))]
    got = closedness_probe(ident, zero, opens, Truncation(3, 8))
    assert got == BasicOpen(1, vset(rat(0)))


def test_closedness_probe_full_relation_returns_first_cylinder():
    toy = system_from_dsl(toy_dsl_text(levels=3, clique=("x", "y"), extra=()))
    x = constant(user("x"), 3)
    opens = [BasicOpen(1, vset(user("x"), user("y")))]
    got = closedness_probe(toy, x, opens, Truncation(3, 10))
    assert got == BasicOpen(1, vset(user("x")))


def test_closedness_probe_uncovered_saturation_raises():
    # Any cylinder around the a-thread leaks b-threads; with an open family
    # that cannot contain them the precondition fails loudly.
    nr = nonregular_system()
    with pytest.raises(UsageError, match="uncovered"):
        closedness_probe(
            nr, a_bar(3), [BasicOpen(1, vset(a(1)))], Truncation(3, 6)
        )


def test_separation_sets_examples():
    nr = nonregular_system()
    tr = Truncation(6, 10)
    da, db = separation_sets(a_bar(6), b_bar(2, 6), nr, tr)
    assert da.level == 3 and db.level == 3
    assert da.center == vset(a(3))
    assert db.center == vset(b(3, 2))
    assert da.boundary.contains(b(3, 3)) and not da.boundary.contains(a(3))

    da5, _ = separation_sets(a_bar(6), b_bar(5, 6), nr, tr)
    assert da5.level == 6

    toy = system_from_dsl(toy_dsl_text(levels=2, clique=("x", "y"), extra=("z",)))
    dx, dz = separation_sets(
        constant(user("x"), 2), constant(user("z"), 2), toy, Truncation(2, 10)
    )
    assert dx.level == 1

    with pytest.raises(UsageError):
        separation_sets(a_bar(6), a_bar(6), nr)


def test_separation_descriptor_membership_disjointness():
    toy = system_from_dsl(toy_dsl_text(levels=3, clique=("x", "y"), extra=("z",)))
    tr = Truncation(3, 10)
    threads = enumerate_threads(toy, 3, tr)
    x = constant(user("x"), 3)
    z = constant(user("z"), 3)
    dx, dz = separation_sets(x, z, toy, tr)
    in_x = [p for p in threads if dx.contains(p, threads, toy)]
    in_z = [p for p in threads if dz.contains(p, threads, toy)]
    assert not (set(in_x) & set(in_z))
    assert z in in_z  # z has no boundary at all, so it qualifies at once


@settings(max_examples=120, derandomize=True, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31))
def test_relatedness_reflexive_symmetric_random(seed):
    system = random_finite_system(seed)
    tr = Truncation(system.max_depth, 10)
    threads = enumerate_threads(system, system.max_depth, tr)
    for p in threads:
        assert related_at_depth(p, p, system)
    for p in threads:
        for q in threads:
            assert related_at_depth(p, q, system) == related_at_depth(q, p, system)
