"""Line-oriented DSL for finite user-defined systems.

Grammar (one directive per line, ``#`` starts a comment, blanks ignored)::

    system NAME
    level 1
    vertex p q
    edge p q
    level 2
    vertex p0 p1 q0
    edge p0 p1
    map 2 1
    p0 -> p
    p1 -> p
    q0 -> q

Levels must be contiguous from 1; map headers must connect adjacent levels;
maps must be total on their upper level.  The reflexive-symmetric closure
of the declared edges is applied when the system is built, so files never
list the diagonal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import UsageError
from .relations import make_relation
from .system import InverseSystem
from .vertices import user

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class DslError(UsageError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where = f" ({where})"
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


@dataclass
class LevelDecl:
    vertices: tuple[str, ...] = ()
    edges: tuple[tuple[str, str], ...] = ()


@dataclass
class SystemDescription:
    name: str
    levels: dict[int, LevelDecl] = field(default_factory=dict)
    maps: dict[int, tuple[tuple[str, str], ...]] = field(default_factory=dict)
    # maps[j] holds the entries of `map j j-1`


def parse_dsl(text: str) -> SystemDescription:
    name = None
    levels: dict[int, LevelDecl] = {}
    maps: dict[int, list] = {}
    mode = None  # ("level", i) or ("map", j)

    def err(message, line_no, token=None, line=""):
        column = line.find(token) + 1 if token and token in line else None
        raise DslError(message, line_no, column)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]

        if head == "system":
            if len(words) != 2:
                err("system line needs exactly one name", line_no, line=raw)
            if name is not None:
                err("duplicate system line", line_no, head, raw)
            name = words[1]
        elif head == "level":
            if len(words) != 2 or not words[1].isdigit():
                err("level line needs one positive integer", line_no, line=raw)
            idx = int(words[1])
            if idx < 1:
                err("level indices start at 1", line_no, words[1], raw)
            if idx in levels:
                err(f"duplicate level {idx}", line_no, words[1], raw)
            levels[idx] = LevelDecl()
            mode = ("level", idx)
        elif head == "vertex":
            if mode is None or mode[0] != "level":
                err("vertex line outside a level block", line_no, head, raw)
            if len(words) < 2:
                err("vertex line needs at least one identifier", line_no, line=raw)
            decl = levels[mode[1]]
            fresh = []
            for ident in words[1:]:
                if not _IDENT.match(ident):
                    err(f"bad identifier {ident!r}", line_no, ident, raw)
                if ident in decl.vertices or ident in fresh:
                    err(f"duplicate vertex {ident!r}", line_no, ident, raw)
                fresh.append(ident)
            decl.vertices += tuple(fresh)
        elif head == "edge":
            if mode is None or mode[0] != "level":
                err("edge line outside a level block", line_no, head, raw)
            if len(words) != 3:
                err("edge line needs exactly two identifiers", line_no, line=raw)
            decl = levels[mode[1]]
            for ident in words[1:]:
                if ident not in decl.vertices:
                    err(f"undeclared identifier {ident!r}", line_no, ident, raw)
            decl.edges += ((words[1], words[2]),)
        elif head == "map":
            if len(words) != 3 or not all(w.isdigit() for w in words[1:]):
                err("map line needs two level numbers", line_no, line=raw)
            upper, lower = int(words[1]), int(words[2])
            if upper != lower + 1:
                err("maps must connect adjacent levels", line_no, words[1], raw)
            if upper in maps:
                err(f"duplicate map {upper} {lower}", line_no, words[1], raw)
            maps[upper] = []
            mode = ("map", upper)
        elif "->" in words:
            if mode is None or mode[0] != "map":
                err("map entry outside a map block", line_no, line=raw)
            if len(words) != 3 or words[1] != "->":
                err("map entries look like SRC -> DST", line_no, line=raw)
            maps[mode[1]].append((words[0], words[2]))
        else:
            err(f"unknown directive {head!r}", line_no, head, raw)

    if name is None:
        raise DslError("missing system line")
    if not levels:
        raise DslError("no levels declared")
    count = len(levels)
    if sorted(levels) != list(range(1, count + 1)):
        raise DslError(
            f"levels must be contiguous from 1, got {sorted(levels)}"
        )

    for upper in range(2, count + 1):
        entries = maps.get(upper)
        if entries is None:
            raise DslError(f"missing map {upper} {upper - 1}")
        seen = {}
        for src, dst in entries:
            if src not in levels[upper].vertices:
                raise DslError(
                    f"undeclared identifier {src!r} in map {upper} {upper - 1}"
                )
            if dst not in levels[upper - 1].vertices:
                raise DslError(
                    f"undeclared identifier {dst!r} in map {upper} {upper - 1}"
                )
            if src in seen:
                raise DslError(f"duplicate map entry for {src!r}")
            seen[src] = dst
        missing = [v for v in levels[upper].vertices if v not in seen]
        if missing:
            raise DslError(f"map not total at level {upper}: {missing[0]}")

    return SystemDescription(
        name,
        {i: levels[i] for i in sorted(levels)},
        {j: tuple(maps[j]) for j in sorted(maps)},
    )


def render_dsl(desc: SystemDescription) -> str:
    lines = [f"system {desc.name}"]
    for i in sorted(desc.levels):
        decl = desc.levels[i]
        lines.append(f"level {i}")
        if decl.vertices:
            lines.append("vertex " + " ".join(decl.vertices))
        for u, v in decl.edges:
            lines.append(f"edge {u} {v}")
    for j in sorted(desc.maps):
        lines.append(f"map {j} {j - 1}")
        for src, dst in desc.maps[j]:
            lines.append(f"{src} -> {dst}")
    return "\n".join(lines) + "\n"


class DslSystem(InverseSystem):
    """A finite-depth system built from a parsed description."""

    def __init__(self, desc: SystemDescription):
        super().__init__()
        self.name = desc.name
        self.max_depth = len(desc.levels)
        self._universes = {}
        self._relations = {}
        self._maps = {}
        for i, decl in desc.levels.items():
            universe = vset_from_idents(decl.vertices)
            pairs = [(user(x), user(y)) for x, y in decl.edges]
            self._universes[i] = universe
            self._relations[i] = make_relation(pairs, universe)
        for j, entries in desc.maps.items():
            self._maps[j - 1] = {user(src): user(dst) for src, dst in entries}

    def universe(self, i):
        self._check_depth(i)
        return self._universes[i]

    def relation(self, i):
        self._check_depth(i)
        return self._relations[i]

    def bonding(self, i, v):
        self._check_depth(i + 1)
        return self._maps[i][v]

    def _check_depth(self, i):
        if not 1 <= i <= self.max_depth:
            raise UsageError(
                f"system {self.name} has levels 1..{self.max_depth}, asked for {i}"
            )


def vset_from_idents(idents):
    from .sets import vset

    return vset(*(user(ident) for ident in idents))


def system_from_dsl(text: str) -> DslSystem:
    return DslSystem(parse_dsl(text))
