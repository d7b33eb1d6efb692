"""Symbolic vertex sets: finitely many atoms plus linear one-parameter families.

A :class:`LinearFamily` denotes ``{tag(.., offset + stride*j, ..) : j >= 0}``
with exactly one varying parameter slot.  A :class:`SymbolicVertexSet` is a
union of atoms and families kept in a canonical normal form, so membership,
subset, equality, union and intersection are all exact and decidable.  This
is deliberately *not* general semilinear arithmetic: one varying slot per
family is the precise shape of every neighborhood that occurs in the
built-in systems.

Normal form
-----------
Families with the same tag, slot and fixed parameters are merged into the
minimal eventual period of their union (residue classes modulo the lcm of
the strides), absorbing any adjacent atoms; whatever cannot be absorbed
stays a sporadic atom.  Equal sets therefore have identical normal forms,
and ``normalize`` is idempotent by construction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd, lcm

from .vertices import Vertex


@dataclass(frozen=True)
class LinearFamily:
    """All vertices whose slot parameter runs over offset + stride*j, j >= 0."""

    tag: str
    params: tuple[int, ...]  # params[slot] is the offset (first member)
    slot: int
    stride: int

    def __post_init__(self):
        if not self.params:
            raise ValueError("a family needs at least one parameter")
        if not 0 <= self.slot < len(self.params):
            raise ValueError(f"slot {self.slot} out of range for {self.params!r}")
        if self.stride < 1:
            raise ValueError("stride must be positive")

    @property
    def offset(self) -> int:
        return self.params[self.slot]

    @property
    def fixed_key(self):
        """Grouping key: tag, slot and the non-varying parameters."""
        masked = tuple(p for t, p in enumerate(self.params) if t != self.slot)
        return (self.tag, self.slot, masked)

    @property
    def sort_key(self):
        return (self.tag, self.params, self.slot, self.stride)

    def with_value(self, value: int) -> Vertex:
        ps = list(self.params)
        ps[self.slot] = value
        return Vertex(self.tag, tuple(ps))

    def member(self, j: int) -> Vertex:
        return self.with_value(self.offset + self.stride * j)

    def contains(self, v: Vertex) -> bool:
        if v.tag != self.tag or v.label or len(v.params) != len(self.params):
            return False
        for t, (pv, pf) in enumerate(zip(v.params, self.params)):
            if t != self.slot and pv != pf:
                return False
        delta = v.params[self.slot] - self.offset
        return delta >= 0 and delta % self.stride == 0

    def enumerate(self, bound: int) -> list[Vertex]:
        """Members whose every integer parameter is <= bound."""
        if any(p > bound for t, p in enumerate(self.params) if t != self.slot):
            return []
        out = []
        value = self.offset
        while value <= bound:
            out.append(self.with_value(value))
            value += self.stride
        return out

    def __str__(self):
        return f"{{{self.member(0)}, {self.member(1)}, ...}}"

    def __repr__(self):
        return f"<fam {self}>"


class SetOrder(enum.Enum):
    EQUAL = "equal"
    A_SUBSET = "A_subset"
    B_SUBSET = "B_subset"
    INCOMPARABLE = "incomparable"


class SymbolicVertexSet:
    """Finite atoms plus finitely many linear families, in normal form."""

    __slots__ = ("atoms", "families")

    def __init__(self, atoms=(), families=()):
        norm_atoms, norm_families = _normalize(atoms, families)
        object.__setattr__(self, "atoms", norm_atoms)
        object.__setattr__(self, "families", norm_families)

    def __setattr__(self, *_):
        raise AttributeError("SymbolicVertexSet is immutable")

    def __eq__(self, other):
        if not isinstance(other, SymbolicVertexSet):
            return NotImplemented
        return self.atoms == other.atoms and self.families == other.families

    def __hash__(self):
        return hash((self.atoms, self.families))

    def contains(self, v: Vertex) -> bool:
        return v in self.atoms or any(f.contains(v) for f in self.families)

    __contains__ = contains

    @property
    def is_empty(self) -> bool:
        return not self.atoms and not self.families

    @property
    def is_finite(self) -> bool:
        return not self.families

    def enumerate(self, bound: int) -> list[Vertex]:
        """All members whose every integer parameter is <= bound, sorted."""
        out = {v for v in self.atoms if all(p <= bound for p in v.params)}
        for f in self.families:
            out.update(f.enumerate(bound))
        return sorted(out, key=lambda v: v.sort_key)

    def min_member(self) -> Vertex | None:
        """Lexicographically least member, or None for the empty set."""
        candidates = list(self.atoms) + [f.member(0) for f in self.families]
        return min(candidates, key=lambda v: v.sort_key, default=None)

    def union(self, other: "SymbolicVertexSet") -> "SymbolicVertexSet":
        return SymbolicVertexSet(
            self.atoms | other.atoms, self.families + other.families
        )

    def without_atom(self, v: Vertex) -> "SymbolicVertexSet":
        """Remove a single vertex, splitting a family around it if needed."""
        if v in self.atoms:
            return SymbolicVertexSet(self.atoms - {v}, self.families)
        atoms = set(self.atoms)
        families = []
        for f in self.families:
            if not f.contains(v):
                families.append(f)
                continue
            value = v.params[f.slot]
            head = f.offset
            while head < value:
                atoms.add(f.with_value(head))
                head += f.stride
            tail = LinearFamily(f.tag, f.with_value(value + f.stride).params,
                                f.slot, f.stride)
            families.append(tail)
        return SymbolicVertexSet(atoms, families)

    def __str__(self):
        parts = [str(v) for v in sorted(self.atoms, key=lambda v: v.sort_key)]
        body = "{" + ", ".join(parts) + "}"
        for f in sorted(self.families, key=lambda f: f.sort_key):
            body += f" u {f}"
        return body

    def __repr__(self):
        return f"<set {self}>"


def vset(*vertices: Vertex, families=()) -> SymbolicVertexSet:
    return SymbolicVertexSet(vertices, families)


# -- normal form -------------------------------------------------------------

def _normalize(atoms, families):
    atom_set = set(atoms)
    groups: dict[tuple, list[LinearFamily]] = {}
    for f in families:
        groups.setdefault(f.fixed_key, []).append(f)

    out_families: set[LinearFamily] = set()
    for key, fams in groups.items():
        tag, slot, _ = key
        template = fams[0]
        matching_atoms = {
            v for v in atom_set
            if v.tag == tag and not v.label and len(v.params) == len(template.params)
            and all(v.params[t] == template.params[t]
                    for t in range(len(v.params)) if t != slot)
        }
        atom_set -= matching_atoms
        atom_vals = {v.params[slot] for v in matching_atoms}
        new_fams, sporadic = _canonical_group(
            [(f.offset, f.stride) for f in fams], atom_vals
        )
        for off, stride in new_fams:
            out_families.add(
                LinearFamily(tag, template.with_value(off).params, slot, stride)
            )
        for value in sporadic:
            atom_set.add(template.with_value(value))

    return frozenset(atom_set), tuple(
        sorted(out_families, key=lambda f: f.sort_key)
    )


def _canonical_group(progs, atom_vals):
    """Canonicalize one group of progressions plus loose values.

    Returns (families, sporadic) where families is a list of (offset, stride)
    with the minimal eventual period, and sporadic the leftover values.
    """
    big_l = lcm(*(s for _, s in progs))
    theta = max(a for a, _ in progs)

    residues = set()
    for a, s in progs:
        for t in range(big_l // s):
            residues.add((a + s * t) % big_l)

    period = next(
        p for p in range(1, big_l + 1)
        if big_l % p == 0 and {(r + p) % big_l for r in residues} == residues
    )

    def in_values(x):
        return x in atom_vals or any(
            x >= a and (x - a) % s == 0 for a, s in progs
        )

    families = []
    starts = {}
    for cls in sorted({r % period for r in residues}):
        m = theta + 1 + ((cls - theta - 1) % period)
        while in_values(m - period):
            m -= period
        families.append((m, period))
        starts[cls] = m

    sporadic = set()
    for x in atom_vals:
        start = starts.get(x % period)
        if start is None or x < start:
            sporadic.add(x)
    for a, s in progs:
        x = a
        while x <= theta:
            if x < starts[x % period]:
                sporadic.add(x)
            x += s
    return families, sporadic


# -- exact comparison ---------------------------------------------------------

def subset_of(a: SymbolicVertexSet, b: SymbolicVertexSet):
    """Decide a <= b exactly.  Returns (ok, witness in a \\ b or None)."""
    for v in sorted(a.atoms, key=lambda v: v.sort_key):
        if not b.contains(v):
            return False, v
    for f in sorted(a.families, key=lambda f: f.sort_key):
        ok, witness = _family_covered(f, b)
        if not ok:
            return False, witness
    return True, None


def _family_covered(f: LinearFamily, b: SymbolicVertexSet):
    group = [g for g in b.families if g.fixed_key == f.fixed_key]
    big_l = lcm(f.stride, *(g.stride for g in group)) if group else f.stride
    # Members outside the same-shape families of b can only be covered by
    # atoms or by families varying a different slot (one member each).
    scan_limit = len(b.atoms) + len(b.families) + 1

    for sub in range(f.offset, f.offset + big_l, f.stride):
        matching = [g for g in group if (sub - g.offset) % g.stride == 0]
        if matching:
            threshold = min(g.offset for g in matching)
            x = sub
            while x < threshold:
                v = f.with_value(x)
                if not b.contains(v):
                    return False, v
                x += big_l
        else:
            x = sub
            for _ in range(scan_limit):
                v = f.with_value(x)
                if not b.contains(v):
                    return False, v
                x += big_l
            raise AssertionError("unreachable: finite cover of an infinite line")
    return True, None


def compare_sets(a: SymbolicVertexSet, b: SymbolicVertexSet):
    """Exact order decision with a separating element when not equal.

    Returns (SetOrder, separator).  The separator is a member of the
    symmetric difference (from A \\ B when A is not a subset of B).
    """
    ab, wit_a = subset_of(a, b)
    ba, wit_b = subset_of(b, a)
    if ab and ba:
        return SetOrder.EQUAL, None
    if ab:
        return SetOrder.A_SUBSET, wit_b
    if ba:
        return SetOrder.B_SUBSET, wit_a
    return SetOrder.INCOMPARABLE, wit_a


# -- exact intersection -------------------------------------------------------

def intersect_sets(a: SymbolicVertexSet, b: SymbolicVertexSet) -> SymbolicVertexSet:
    atoms = {v for v in a.atoms if b.contains(v)}
    atoms |= {v for v in b.atoms if a.contains(v)}
    families = []
    for f in a.families:
        for g in b.families:
            piece = _intersect_families(f, g)
            if isinstance(piece, LinearFamily):
                families.append(piece)
            else:
                atoms |= piece
    return SymbolicVertexSet(atoms, families)


def _intersect_families(f: LinearFamily, g: LinearFamily):
    """Intersection of two families: a family, or a finite set of vertices."""
    if f.tag != g.tag or len(f.params) != len(g.params):
        return set()
    if f.slot == g.slot:
        if f.fixed_key != g.fixed_key:
            return set()
        got = _crt(f.offset, f.stride, g.offset, g.stride)
        if got is None:
            return set()
        start, step = got
        return LinearFamily(f.tag, f.with_value(start).params, f.slot, step)
    # Different varying slots: each family pins the other's slot, so the
    # intersection is at most one vertex.
    ps = list(f.params)
    ps[f.slot] = g.params[f.slot]
    v = Vertex(f.tag, tuple(ps))
    return {v} if f.contains(v) and g.contains(v) else set()


def _crt(a1, s1, a2, s2):
    """Least x >= max(a1, a2) with x = a1 (mod s1) and x = a2 (mod s2).

    Returns (x, lcm(s1, s2)) or None when the congruences are incompatible.
    """
    g = gcd(s1, s2)
    if (a2 - a1) % g:
        return None
    step = lcm(s1, s2)
    t = ((a2 - a1) // g * pow(s1 // g, -1, s2 // g)) % (s2 // g)
    x = a1 + s1 * t
    lo = max(a1, a2)
    if x < lo:
        x += -(-(lo - x) // step) * step
    return x, step


EMPTY_SET = SymbolicVertexSet()
