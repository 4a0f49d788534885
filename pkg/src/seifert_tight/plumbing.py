"""Weighted plumbing trees and their intersection lattices."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cf import cf_eval, cf_expand, riemenschneider_dual
from .seifert import SeifertInvariants, euler_number

__all__ = [
    "PlumbingTree",
    "StarShape",
    "IntersectionLattice",
    "star_tree_from_seifert",
    "seifert_from_star_tree",
    "dual_tree",
    "intersection_lattice",
    "bad_vertices",
    "recognize_Mn",
    "truncate_third_leg",
    "Mn_star",
    "integer_det",
    "signature",
]


class PlumbingTree:
    """A weighted tree: vertex ids with integer weights and unordered edges."""

    def __init__(self, weights, edges=()):
        if isinstance(weights, dict):
            items = list(weights.items())
        else:
            items = list(weights)
        self.weights = {}
        for vid, w in items:
            vid, w = int(vid), int(w)
            if vid in self.weights:
                raise ValueError(f"duplicate vertex id {vid}")
            self.weights[vid] = w
        if not self.weights:
            raise ValueError("a plumbing tree needs at least one vertex")
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if u not in self.weights or v not in self.weights:
                raise ValueError(f"edge ({u}, {v}) references an unknown vertex")
            e = (min(u, v), max(u, v))
            if e in norm:
                raise ValueError(f"repeated edge {e}")
            norm.add(e)
        self.edges = tuple(sorted(norm))
        self.ids = tuple(sorted(self.weights))
        self.index = {vid: i for i, vid in enumerate(self.ids)}
        self._nbrs = {vid: [] for vid in self.ids}
        for u, v in self.edges:
            self._nbrs[u].append(v)
            self._nbrs[v].append(u)
        for vid in self.ids:
            self._nbrs[vid].sort()
        self._check_tree()

    def _check_tree(self):
        if len(self.edges) != len(self.ids) - 1:
            raise ValueError("edges do not form a tree (wrong edge count)")
        seen = {self.ids[0]}
        stack = [self.ids[0]]
        while stack:
            u = stack.pop()
            for v in self._nbrs[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) != len(self.ids):
            raise ValueError("edges do not form a tree (disconnected)")

    def __len__(self):
        return len(self.ids)

    def __eq__(self, other):
        return (isinstance(other, PlumbingTree) and self.weights == other.weights
                and self.edges == other.edges)

    def __hash__(self):
        return hash((tuple(sorted(self.weights.items())), self.edges))

    def __repr__(self):
        return f"PlumbingTree({self.weights!r}, {list(self.edges)!r})"

    def neighbors(self, vid: int) -> list[int]:
        return list(self._nbrs[vid])

    def valency(self, vid: int) -> int:
        return len(self._nbrs[vid])

    def matrix(self) -> list[list[int]]:
        n = len(self.ids)
        Q = [[0] * n for _ in range(n)]
        for vid, i in self.index.items():
            Q[i][i] = self.weights[vid]
        for u, v in self.edges:
            i, j = self.index[u], self.index[v]
            Q[i][j] = Q[j][i] = 1
        return Q

    def relabel(self, mapping: dict) -> "PlumbingTree":
        return PlumbingTree({mapping[v]: w for v, w in self.weights.items()},
                            [(mapping[u], mapping[v]) for u, v in self.edges])

    def star_shape(self) -> "StarShape":
        """Decompose into center and legs (legs ordered by first vertex id).

        For a chain the center is the lowest id vertex such that every other
        weight is <= -2.
        """
        high = [v for v in self.ids if self.valency(v) >= 3]
        if len(high) > 1:
            raise ValueError("tree is not star-shaped: several vertices of valency >= 3")
        if high:
            candidates = high
        else:
            candidates = [v for v in self.ids
                          if all(self.weights[u] <= -2 for u in self.ids if u != v)]
            if not candidates:
                raise ValueError("chain has no admissible central vertex")
        center = candidates[0]
        legs = []
        for first in self._nbrs[center]:
            leg = [first]
            prev, cur = center, first
            while True:
                nxt = [u for u in self._nbrs[cur] if u != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                leg.append(cur)
            legs.append(leg)
        return StarShape(self.weights[center],
                         tuple(tuple(self.weights[v] for v in leg) for leg in legs))

    def to_json(self) -> dict:
        return {"vertices": [{"id": v, "weight": self.weights[v]} for v in self.ids],
                "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "PlumbingTree":
        if "center" in data:
            return StarShape(int(data["center"]),
                             tuple(tuple(int(w) for w in leg) for leg in data["legs"])).tree()
        return cls([(v["id"], v["weight"]) for v in data["vertices"]],
                   [tuple(e) for e in data["edges"]])


@dataclass(frozen=True)
class StarShape:
    """Star-shaped tree: central weight and legs listed from the center out.

    ``tree()`` numbers the center 0 and then the legs' vertices consecutively,
    so ``leg_ids(i)`` is stable.
    """

    center_weight: int
    legs: tuple = field(default=())

    def __post_init__(self):
        legs = tuple(tuple(int(w) for w in leg) for leg in self.legs)
        for leg in legs:
            if not leg:
                raise ValueError("empty leg")
        object.__setattr__(self, "legs", legs)

    def leg_ids(self, i: int) -> list[int]:
        start = 1 + sum(len(leg) for leg in self.legs[:i])
        return list(range(start, start + len(self.legs[i])))

    def tree(self) -> PlumbingTree:
        weights = {0: self.center_weight}
        edges = []
        for i, leg in enumerate(self.legs):
            prev = 0
            for vid, w in zip(self.leg_ids(i), leg):
                weights[vid] = w
                edges.append((prev, vid))
                prev = vid
        return PlumbingTree(weights, edges)

    def cf_legs(self) -> list[tuple[int, ...]]:
        out = []
        for leg in self.legs:
            if any(w > -2 for w in leg):
                raise ValueError(f"leg {list(leg)} has a weight > -2")
            out.append(tuple(-w for w in leg))
        return out

    def seifert(self) -> SeifertInvariants:
        return SeifertInvariants(self.center_weight,
                                 tuple(1 / cf_eval(a) for a in self.cf_legs()))

    def sorted_legs(self) -> "StarShape":
        """Legs reordered by descending Seifert ratio (stable)."""
        order = sorted(range(len(self.legs)), key=lambda i: 1 / cf_eval(self.cf_legs()[i]),
                       reverse=True)
        return StarShape(self.center_weight, tuple(self.legs[i] for i in order))

    def dual(self) -> "StarShape":
        if self.center_weight != -1 or len(self.legs) != 3:
            raise ValueError("the dual tree is defined for a -1 center with three legs")
        return StarShape(-2, tuple(tuple(-t for t in riemenschneider_dual(a))
                                   for a in self.cf_legs()))

    def truncate_third_leg(self) -> "StarShape":
        if len(self.legs) != 3:
            raise ValueError("truncation needs exactly three legs")
        return StarShape(self.center_weight, self.legs[:2] + (self.legs[2][:1],))

    def to_json(self) -> dict:
        return {"center": self.center_weight, "legs": [list(leg) for leg in self.legs]}


@dataclass(frozen=True)
class IntersectionLattice:
    ids: tuple
    Q: tuple
    det: int
    signature: tuple  # (b2+, b2-, b2^0)

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def b2(self) -> int:
        return len(self.ids)

    @property
    def sigma(self) -> int:
        return self.signature[0] - self.signature[1]

    def is_negative_definite(self) -> bool:
        return self.signature == (0, self.n, 0)


def integer_det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    A = [list(row) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def signature(M: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """(positive, negative, zero) counts by exact congruence diagonalization."""
    A = [list(row) for row in M]  # ints until a division makes a Fraction
    n = len(A)
    active = set(range(n))
    nnz = [sum(1 for x in row if x != 0) for row in A]
    pos = neg = 0
    while active:
        # sparsest row first: on a tree this eliminates leaves and causes no fill-in
        piv = min((i for i in active if A[i][i] != 0), key=lambda i: (nnz[i], i), default=None)
        if piv is None:
            pair = next(((i, j) for i in sorted(active) for j in sorted(active)
                         if i < j and A[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # replace basis vector i by i + j; A[i][i] becomes 2 A[i][j] != 0
            for t in range(n):
                A[i][t] += A[j][t]
            for t in range(n):
                A[t][i] += A[t][j]
            nnz = [sum(1 for t in active if A[r][t] != 0) for r in range(n)]
            continue
        d = A[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.discard(piv)
        support = [t for t in active if A[piv][t] != 0]
        for j in support:
            f = Fraction(A[j][piv]) / d
            for t in support:
                A[j][t] -= f * A[piv][t]
            A[j][piv] = 0
            nnz[j] = sum(1 for t in active if A[j][t] != 0)
        for j in active:
            A[piv][j] = 0
    return pos, neg, len(active)


def intersection_lattice(tree: PlumbingTree) -> IntersectionLattice:
    Q = tree.matrix()
    return IntersectionLattice(tree.ids, tuple(tuple(r) for r in Q), integer_det(Q),
                               signature(Q))


def bad_vertices(tree: PlumbingTree) -> list[int]:
    return [v for v in tree.ids if tree.valency(v) > abs(tree.weights[v])]


def star_tree_from_seifert(si: SeifertInvariants) -> PlumbingTree:
    return star_from_seifert(si).tree()


def star_from_seifert(si: SeifertInvariants) -> StarShape:
    return StarShape(si.e0, tuple(tuple(-t for t in cf_expand(1 / r)) for r in si.ratios))


def seifert_from_star_tree(tree: PlumbingTree) -> SeifertInvariants:
    return tree.star_shape().seifert()


def dual_tree(tree: PlumbingTree) -> PlumbingTree:
    """The tree bounding ``-Y``: center -2 and Riemenschneider-dual legs."""
    return tree.star_shape().sorted_legs().dual().tree()


def truncate_third_leg(tree: PlumbingTree) -> PlumbingTree:
    return tree.star_shape().sorted_legs().truncate_third_leg().tree()


def Mn_star(n: int) -> StarShape:
    """Star shape of M_n: -1 center, legs [-2], [-3, -2 x (n-1)], [-(2n+3)]."""
    if n < 1:
        raise ValueError("M_n is defined for n >= 1")
    return StarShape(-1, ((-2,), (-3,) + (-2,) * (n - 1), (-(2 * n + 3),)))


def recognize_Mn(tree) -> Optional[int]:
    """Return ``n`` if the tree is the M_n plumbing up to leg order."""
    shape = tree if isinstance(tree, StarShape) else _try_star(tree)
    if shape is None or shape.center_weight != -1 or len(shape.legs) != 3:
        return None
    legs = sorted(shape.legs, key=lambda leg: (len(leg), leg))
    for n in range(1, 2 + max(len(leg) for leg in legs)):
        if legs == sorted(Mn_star(n).legs, key=lambda leg: (len(leg), leg)):
            return n
    return None


def _try_star(tree: PlumbingTree) -> Optional[StarShape]:
    try:
        return tree.star_shape()
    except ValueError:
        return None


def euler_positive(shape: StarShape) -> bool:
    return euler_number(shape.seifert()) > 0
