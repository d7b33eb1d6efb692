"""DSL parsing, rendering, round trips, and error reporting."""

import random
import string

import pytest
from hypothesis import given, settings, strategies as st

from gcell.dsl import (
    DslError,
    LevelDecl,
    SystemDescription,
    parse_dsl,
    render_dsl,
    system_from_dsl,
)
from gcell.system import Truncation, check_axioms
from gcell.vertices import user

TWO_LEVEL = """\
# a planted two-level example
system toy
level 1
vertex p q
level 2
vertex p0 p1 q0
edge p0 p1
map 2 1
p0 -> p
p1 -> p
q0 -> q
"""


def test_parse_two_level_toy():
    desc = parse_dsl(TWO_LEVEL)
    assert desc.name == "toy"
    assert desc.levels[1].vertices == ("p", "q")
    assert desc.levels[2].edges == (("p0", "p1"),)
    assert desc.maps[2] == (("p0", "p"), ("p1", "p"), ("q0", "q"))
    system = system_from_dsl(TWO_LEVEL)
    # the declared edge maps into the diagonal
    assert system.bonding(1, user("p0")) == system.bonding(1, user("p1"))
    assert check_axioms(system, Truncation(2, 10)).passed


def test_round_trip_identity():
    desc = parse_dsl(TWO_LEVEL)
    assert parse_dsl(render_dsl(desc)) == desc


def test_non_adjacent_map_rejected():
    text = TWO_LEVEL.replace("map 2 1", "map 3 1")
    with pytest.raises(DslError, match="adjacent"):
        parse_dsl(text)


def test_non_total_map_rejected():
    text = TWO_LEVEL.replace("q0 -> q\n", "")
    with pytest.raises(DslError, match="map not total at level 2: q0"):
        parse_dsl(text)


def test_undeclared_identifier_rejected():
    with pytest.raises(DslError, match="undeclared"):
        parse_dsl(TWO_LEVEL.replace("edge p0 p1", "edge p0 ghost"))
    with pytest.raises(DslError, match="undeclared"):
        parse_dsl(TWO_LEVEL.replace("q0 -> q", "q0 -> ghost"))


def test_syntax_errors_carry_positions():
    with pytest.raises(DslError, match="line 3"):
        parse_dsl("system x\nlevel 1\nvertexx p\n")
    with pytest.raises(DslError, match="missing system"):
        parse_dsl("level 1\nvertex p\n")
    with pytest.raises(DslError, match="contiguous"):
        parse_dsl("system x\nlevel 2\nvertex p\n")
    with pytest.raises(DslError, match="missing map"):
        parse_dsl("system x\nlevel 1\nvertex p\nlevel 2\nvertex q\n")


def test_comments_and_blanks_ignored():
    noisy = TWO_LEVEL.replace("level 2", "\n   # noise\nlevel 2  # tail comment")
    assert parse_dsl(noisy) == parse_dsl(TWO_LEVEL)


_names = st.lists(
    st.text(alphabet=string.ascii_lowercase, min_size=1, max_size=3),
    min_size=1, max_size=4, unique=True,
)


@st.composite
def descriptions(draw):
    depth = draw(st.integers(min_value=1, max_value=3))
    levels = {}
    per_level = []
    for i in range(1, depth + 1):
        raw = draw(_names)
        names = tuple(f"l{i}_{n}" for n in raw)
        per_level.append(names)
        count = len(names)
        edges = tuple(
            (names[a], names[b])
            for a, b in draw(st.lists(
                st.tuples(st.integers(0, count - 1), st.integers(0, count - 1)),
                max_size=3,
            ))
        )
        levels[i] = LevelDecl(names, edges)
    maps = {}
    for j in range(2, depth + 1):
        rng = random.Random(draw(st.integers(0, 2 ** 20)))
        maps[j] = tuple(
            (src, rng.choice(per_level[j - 2])) for src in per_level[j - 1]
        )
    name = "sys_" + draw(st.text(alphabet=string.ascii_lowercase, min_size=1,
                                 max_size=5))
    return SystemDescription(name, levels, maps)


@settings(max_examples=120, derandomize=True, deadline=None)
@given(descriptions())
def test_round_trip_random_descriptions(desc):
    assert parse_dsl(render_dsl(desc)) == desc
