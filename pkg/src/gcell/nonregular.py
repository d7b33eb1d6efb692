"""The symbolic system whose quotient space fails regularity.

Level i holds one hub vertex a_i, a tail of b_i^k, L(i) two-element blocks
{c1_i_k, c2_i_k}, and a tail of d_i^k (no c/d at level 1).  The block count
follows L(2) = 1, L(i) = L(i-1) + i - 1, i.e. L(i) = i(i-1)/2.

The relation, given as a closed-form ball oracle:
  * a_i and every b_i^k with k >= i form a clique;
  * b_i^k with k < i pairs with the d-progression d_i^{(i-1)j + k}, j >= 0;
  * each c-block is a clique;
  * nothing else (plus the diagonal).

The bonding map follows nine rows.  Writing the level-(i+1) vertex on the
left and its level-i image on the right:
  a_{i+1}                  -> a_i
  b_{i+1}^k                -> b_i^k
  c1_{i+1}_1               -> a_i
  c2_{i+1}_1               -> b_i^i
  cr_{i+1}_k, 2<=k<=L(i)+1 -> cr_i_{k-1}
  c1_{i+1}_k, k> L(i)+1    -> d_i^{k-L(i)-1}
  c2_{i+1}_k, k> L(i)+1    -> b_i^{k-L(i)-1}
  d_{i+1}^{ij+n}, 0<n<i    -> d_i^{(i-1)(j+1)+n}
  d_{i+1}^{ij}             -> a_i

Every vertex has a structural preimage (tested exhaustively), and each
d-vertex has exactly one preimage among the c/d vertices, which makes the
upward trajectory of a d-vertex unique; it ends in a c-block after roughly
k/(i-1) steps, and that c-level is where the 2r-ball of the d-thread
finally collapses.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import lcm

from .errors import (
    CertificateFailure,
    DomainError,
    RangeError,
    ResourceBudgetError,
    UsageError,
)
from .relations import Relation, ball, two_ball
from .report import Report
from .sets import LinearFamily, SymbolicVertexSet, subset_of, vset
from .system import InverseSystem, bonding_composite, map_set_down
from .threads import ThreadPrefix
from .vertices import a, b, c, d


def l_index(i: int) -> int:
    """Block count L(i): the recursion L(2)=1, L(i)=L(i-1)+i-1 in closed form."""
    if i < 2:
        raise RangeError(f"L is defined for levels >= 2, got {i}")
    return i * (i - 1) // 2


def _l(i: int) -> int:
    # Internal variant: 0 below level 2, so range arithmetic needs no guards.
    return 0 if i < 2 else i * (i - 1) // 2


def _b_family(i: int, start: int, stride: int = 1) -> LinearFamily:
    return LinearFamily("B", (i, start), slot=1, stride=stride)


def _d_family(i: int, start: int, stride: int) -> LinearFamily:
    return LinearFamily("D", (i, start), slot=1, stride=stride)


class NonRegularSystem(InverseSystem):
    name = "nonregular"
    vertices_always_extend = True  # every vertex has a preimage, see preimages()

    @lru_cache(maxsize=None)
    def universe(self, i):
        if i < 1:
            raise RangeError(f"level index must be >= 1, got {i}")
        atoms = [a(i)]
        families = [_b_family(i, 1)]
        if i >= 2:
            atoms += [c(r, i, k) for k in range(1, _l(i) + 1) for r in (1, 2)]
            families.append(_d_family(i, 1, 1))
        return SymbolicVertexSet(atoms, families)

    @lru_cache(maxsize=None)
    def relation(self, i):
        return Relation.from_oracle(
            self.universe(i),
            ball_fn=lambda v: self._ball(i, v),
            family_fn=lambda fam: self._family_ball(i, fam),
        )

    @lru_cache(maxsize=None)
    def _ball(self, i, v):
        if v.tag == "A":
            return vset(a(i), families=[_b_family(i, i)])
        if v.tag == "B":
            k = v.params[1]
            if k >= i:
                return vset(a(i), families=[_b_family(i, i)])
            return vset(v, families=[_d_family(i, k, i - 1)])
        if v.tag == "C":
            _, k, _ = v.params
            return vset(c(1, i, k), c(2, i, k))
        if v.tag == "D":
            m = v.params[1]
            return vset(v, b(i, ((m - 1) % (i - 1)) + 1))
        raise DomainError(f"vertex {v} not in level {i}")

    def _family_ball(self, i, fam):
        if fam.slot != 1 or fam.params[0] != i:
            raise DomainError(f"family {fam} does not vary within level {i}")
        if fam.tag == "B":
            out = vset(a(i), families=[_b_family(i, i)])  # some member is >= i
            k = fam.offset
            while k < i:
                out = out.union(self._ball(i, b(i, k)))
                k += fam.stride
            return out
        if fam.tag == "D":
            hits = set()
            value = fam.offset
            for _ in range(lcm(fam.stride, i - 1) // fam.stride):
                hits.add(b(i, ((value - 1) % (i - 1)) + 1))
                value += fam.stride
            return SymbolicVertexSet(hits, [fam])
        raise DomainError(f"no infinite {fam.tag}-family lies in level {i}")

    def bonding(self, i, v):
        if v.tag == "A":
            return a(i)
        if v.tag == "B":
            return b(i, v.params[1])
        if v.tag == "C":
            _, k, r = v.params
            if k == 1:
                return a(i) if r == 1 else b(i, i)
            if k <= _l(i) + 1:
                return c(r, i, k - 1)
            if k <= _l(i + 1):
                tail = k - _l(i) - 1
                return d(i, tail) if r == 1 else b(i, tail)
            raise DomainError(f"{v} is not a level-{i + 1} vertex")
        if v.tag == "D":
            k = v.params[1]
            n = k % i
            if n == 0:
                return a(i)
            return d(i, (i - 1) * (k // i + 1) + n)
        raise DomainError(f"vertex {v} not in level {i + 1}")

    def preimages(self, i, v, bound):
        self._check_level_member(i, v)
        out = []
        if v.tag == "A":
            out = [a(i + 1), c(1, i + 1, 1)]
            j = 1
            while i * j <= bound:
                out.append(d(i + 1, i * j))
                j += 1
        elif v.tag == "B":
            k = v.params[1]
            out = [b(i + 1, k)]
            if k == i:
                out.append(c(2, i + 1, 1))
            if 1 <= k <= i - 1:
                out.append(c(2, i + 1, k + _l(i) + 1))
        elif v.tag == "C":
            _, k, r = v.params
            out = [c(r, i + 1, k + 1)]
        elif v.tag == "D":
            m = v.params[1]
            if m <= i - 1:
                out = [c(1, i + 1, m + _l(i) + 1)]
            else:
                n = ((m - 1) % (i - 1)) + 1
                out = [d(i + 1, i * ((m - n) // (i - 1) - 1) + n)]
        keep = [w for w in out if all(p <= bound for p in w.params)]
        return tuple(sorted(keep, key=lambda w: w.sort_key))

    def family_image(self, i, fam):
        if fam.slot != 1 or fam.params[0] != i + 1:
            return None
        if fam.tag == "B":
            return vset(families=[_b_family(i, fam.offset, fam.stride)])
        if fam.tag == "D":
            # Split the progression by its residue mod i: multiples of i drop
            # to a_i (row 9), each other residue class stays a d-progression.
            step = lcm(fam.stride, i)
            parts = vset()
            for t in range(step // fam.stride):
                start = fam.offset + fam.stride * t
                n = start % i
                if n == 0:
                    parts = parts.union(vset(a(i)))
                else:
                    image_start = (i - 1) * (start // i + 1) + n
                    parts = parts.union(vset(families=[
                        _d_family(i, image_start, (i - 1) * step // i)
                    ]))
            return parts
        return None


@lru_cache(maxsize=1)
def nonregular_system() -> NonRegularSystem:
    return NonRegularSystem()


def d_trajectory(i: int, k: int, max_steps: int = 100):
    """The unique upward preimage chain from d_i^k to its first c-vertex.

    Each d-vertex has exactly one preimage among the c/d vertices, so the
    chain is forced; it must end in a c-block (that is the content of the
    existence lemma, and exhausting max_steps would falsify it).
    """
    if i < 2 or k < 1:
        raise RangeError(f"d-vertices need level >= 2 and index >= 1, got ({i}, {k})")
    chain = [d(i, k)]
    level, value = i, k
    for _ in range(max_steps):
        if value <= level - 1:
            chain.append(c(1, level + 1, value + _l(level) + 1))
            return chain
        n = ((value - 1) % (level - 1)) + 1
        value = level * ((value - n) // (level - 1) - 1) + n
        level += 1
        chain.append(d(level, value))
    raise CertificateFailure(
        f"d-trajectory from d_{i}^{k} did not reach a c-block in "
        f"{max_steps} steps"
    )


def collapse_next(system: InverseSystem, base: ThreadPrefix, prev: int,
                  budget: int) -> int:
    """Least j > prev with g_prev^j(B(base_j, 2r_j)) inside B(base_prev, r)."""
    target = ball(base.coord(prev), system.relation(prev))
    for cand in range(prev + 1, budget + 1):
        if cand > base.depth:
            raise ResourceBudgetError(
                f"base prefix of depth {base.depth} too shallow to reach a "
                f"collapse level past {prev}",
                progress=prev,
            )
        wide = two_ball(base.coord(cand), system.relation(cand))
        image = map_set_down(system, cand, prev, wide)
        if subset_of(image, target)[0]:
            return cand
    raise ResourceBudgetError(
        f"no collapse level found above {prev} within budget {budget}",
        progress=prev,
    )


def collapse_indices(system: InverseSystem, base: ThreadPrefix, count: int,
                     budget: int):
    """The increasing collapse levels j_1 < ... < j_count, anchored at j_0 = 1."""
    js = [1]
    while len(js) <= count:
        js.append(collapse_next(system, base, js[-1], budget))
    return js[1:]


# -- the non-regularity witness ----------------------------------------------

def _a_thread(depth):
    return ThreadPrefix(tuple(a(n) for n in range(1, depth + 1)))


def _b_thread(k, depth):
    return ThreadPrefix(tuple(b(n, k) for n in range(1, depth + 1)))


@dataclass
class WitnessReport:
    j: int
    i: int
    depth: int
    threads: dict
    report: Report

    @property
    def passed(self) -> bool:
        return self.report.passed


def nonregularity_witness(j: int, i: int, depth: int | None = None) -> WitnessReport:
    """Machine-check the thread quartet behind the non-regularity proof.

    For 1 <= j < i the proof separates the a-thread from the closed image of
    the b-threads using two cylinders, then exhibits threads c (through
    c2-blocks over b_i^j) and d (through the sibling c1-blocks, descending to
    a_j) that are related at every level, meeting both cylinders.  Every fact
    the argument uses is checked here at finite depth.
    """
    if not 1 <= j < i:
        raise UsageError(f"need 1 <= j < i, got j={j} i={i}")
    if depth is None:
        depth = i + 5
    if depth < i + 3:
        raise UsageError(f"depth must be at least i+3 = {i + 3}, got {depth}")

    system = nonregular_system()
    block = j + _l(i) + 1

    a_bar = _a_thread(depth)
    b_bar = _b_thread(j, depth)
    c_coords = [b(n, j) for n in range(1, i + 1)]
    d_top = c(1, i + 1, block)
    d_coords = [bonding_composite(system, n, i + 1, d_top) for n in range(1, i + 1)]
    for n in range(i + 1, depth + 1):
        c_coords.append(c(2, n, block + (n - i - 1)))
        d_coords.append(c(1, n, block + (n - i - 1)))
    c_bar = ThreadPrefix(tuple(c_coords))
    d_bar = ThreadPrefix(tuple(d_coords))

    report = Report("nonregular", f"witness j={j} i={i} depth={depth}")
    for label, thread in (("a", a_bar), ("b", b_bar), ("c", c_bar), ("d", d_bar)):
        report.add(f"{label}-thread consistent", thread.is_consistent(system),
                   str(thread), payload=thread)

    unrelated = next(
        (n for n in range(1, depth + 1)
         if not system.relation(n).contains_pair(c_bar.coord(n), d_bar.coord(n))),
        None,
    )
    report.add("(c_n, d_n) related at every level", unrelated is None,
               f"fails at level {unrelated}" if unrelated else f"levels 1..{depth}",
               payload=unrelated)

    report.add(f"d-thread lies in the cylinder over a_{j}",
               d_bar.coord(j) == a(j), f"d_{j} coordinate is {d_bar.coord(j)}")
    report.add(f"c-thread lies in the cylinder over b_{i}^{j}",
               c_bar.coord(i) == b(i, j), f"c_{i} coordinate is {c_bar.coord(i)}")

    sep = next(
        (n for n in range(1, depth + 1)
         if not system.relation(n).contains_pair(a_bar.coord(n), b_bar.coord(n))),
        None,
    )
    report.add(f"a-thread vs b-thread separate first at level {j + 1}",
               sep == j + 1, f"separation level {sep}", payload=sep)
    threads = {"a": a_bar, "b": b_bar, "c": c_bar, "d": d_bar}
    return WitnessReport(j, i, depth, threads, report)
