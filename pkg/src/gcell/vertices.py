"""Vertex atoms: tagged integer tuples and exact rationals.

Every vertex in the package is one immutable :class:`Vertex`.  The tags
``A``/``B``/``C``/``D`` name the vertex families of the built-in symbolic
system, ``RATIONAL`` holds an exact fraction in lowest terms, ``N`` a
natural number, and ``USER`` a bare identifier from the DSL.  Composite
systems may introduce further tags (see the wedge construction); those
carry no arity constraint here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

# Parameter arity of the built-in symbol kinds.  C stores (level, family
# index, superscript), i.e. c^r_{i,k} has params (i, k, r).
_ARITY = {"A": 1, "B": 2, "C": 3, "D": 2, "RATIONAL": 2, "N": 1, "USER": 0}


@dataclass(frozen=True)
class Vertex:
    tag: str
    params: tuple[int, ...] = ()
    label: str = ""

    def __post_init__(self):
        arity = _ARITY.get(self.tag)
        if arity is not None and len(self.params) != arity:
            raise ValueError(
                f"tag {self.tag} takes {arity} params, got {self.params!r}"
            )
        if self.tag == "RATIONAL":
            num, den = self.params
            f = Fraction(num, den)
            if (f.numerator, f.denominator) != (num, den):
                raise ValueError(f"rational {num}/{den} not in lowest terms")

    @property
    def sort_key(self):
        return (self.tag, self.params, self.label)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def as_fraction(self) -> Fraction:
        if self.tag != "RATIONAL":
            raise ValueError(f"{self} is not a rational vertex")
        return Fraction(self.params[0], self.params[1])

    def __str__(self):
        return vertex_name(self)

    def __repr__(self):
        return f"<{vertex_name(self)}>"


def a(i: int) -> Vertex:
    return Vertex("A", (i,))


def b(i: int, k: int) -> Vertex:
    return Vertex("B", (i, k))


def c(r: int, i: int, k: int) -> Vertex:
    return Vertex("C", (i, k, r))


def d(i: int, k: int) -> Vertex:
    return Vertex("D", (i, k))


def rat(value, den=None) -> Vertex:
    f = Fraction(value, den) if den is not None else Fraction(value)
    return Vertex("RATIONAL", (f.numerator, f.denominator))


def nat(n: int) -> Vertex:
    return Vertex("N", (n,))


def user(name: str) -> Vertex:
    return Vertex("USER", (), name)


def vertex_name(v: Vertex) -> str:
    """Canonical display name, stable across runs (used in reports and DOT)."""
    if v.tag == "A":
        return f"a_{v.params[0]}"
    if v.tag == "B":
        return f"b_{v.params[0]}^{v.params[1]}"
    if v.tag == "C":
        i, k, r = v.params
        return f"c{r}_{i}_{k}"
    if v.tag == "D":
        return f"d_{v.params[0]}^{v.params[1]}"
    if v.tag == "RATIONAL":
        num, den = v.params
        return str(num) if den == 1 else f"{num}/{den}"
    if v.tag == "N":
        return f"n{v.params[0]}"
    if v.tag == "USER":
        return v.label
    if ":" in v.tag:
        # Wedge-wrapped vertex: tag "W<part>:<orig tag>".
        part, _, orig = v.tag.partition(":")
        return f"{vertex_name(Vertex(orig, v.params, v.label))}@{part[1:]}"
    inner = ",".join(str(p) for p in v.params)
    return f"{v.tag}({inner}){v.label}"
