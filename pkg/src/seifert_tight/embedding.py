"""Homology of a blown-up projective plane containing both plumbings.

Start from CP^2 blown up at the triple point ``p`` of three lines (class
``e1``), then blow up where the line avoiding ``p`` meets each of the three
lines (``e2, e3, e4``).  The line avoiding ``p`` becomes the central vertex
``h - e2 - e3 - e4`` of the dual tree, the exceptional curve over ``p`` is
the central vertex of the original tree.  Each leg is then grown by
repeatedly blowing up a point where the newest exceptional curve meets one
of its two chain neighbours.  The schedule for a leg is obtained by running
the blow-down of ``L_i, (-1), reversed(L'_i)`` backwards.

Every model is verified after construction: same-side pairings must
reproduce the two intersection matrices and cross-side pairings must vanish.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .lattice import lattice_for
from .plumbing import StarShape
from .seifert import euler_number

__all__ = [
    "EmbeddingError",
    "HomologyClass",
    "EmbeddingModel",
    "CharClassC",
    "embed_union",
    "blowup_schedule",
    "family_a_parameters",
    "family_b_parameters",
    "build_class_c_A",
    "build_class_c_B",
    "evaluate",
    "restrict_square",
    "verify_char_and_signature",
]

GAMMA, GAMMA_P = "G", "Gp"


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class HomologyClass:
    """``h_coeff * h + sum e_coeffs[i] * e_{i+1}`` in H_2 of CP^2 # N(-CP^2)."""

    h: int
    e: tuple

    def pair(self, other: "HomologyClass") -> int:
        n = max(len(self.e), len(other.e))
        a = self.e + (0,) * (n - len(self.e))
        b = other.e + (0,) * (n - len(other.e))
        return self.h * other.h - sum(x * y for x, y in zip(a, b))

    def padded(self, N: int) -> "HomologyClass":
        return HomologyClass(self.h, self.e + (0,) * (N - len(self.e)))

    def to_json(self) -> dict:
        return {"h": self.h, "e": list(self.e)}

    @classmethod
    def from_json(cls, data: dict) -> "HomologyClass":
        return cls(int(data["h"]), tuple(int(x) for x in data["e"]))


class _Curve:
    __slots__ = ("h", "e")

    def __init__(self, h, e):
        self.h = h
        self.e = dict(e)

    def blow(self, idx):
        # proper transform through the blown-up point
        self.e[idx] = self.e.get(idx, 0) - 1

    def freeze(self, N) -> HomologyClass:
        return HomologyClass(self.h, tuple(self.e.get(i, 0) for i in range(1, N + 1)))


def blowup_schedule(left, right) -> list[str]:
    """Moves growing the chain ``left, E, reversed(right)`` out of ``A(0), B``.

    ``left`` lists the Gamma-side leg from the central-adjacent vertex out,
    ``right`` the dual leg from its central-adjacent vertex out (both as
    positive continued fraction terms).  Move ``"L"`` blows up where the
    newest exceptional curve meets its Gamma-side neighbour, ``"R"`` where it
    meets its dual-side neighbour.
    """
    L, R = list(left), list(right)
    moves = []
    while not (L == [1] and not R):
        if not R:
            raise EmbeddingError(f"legs {list(left)} / {list(right)} are not dual")
        L[-1] -= 1
        R[-1] -= 1
        if R[-1] == 1 and (L[-1] != 1 or L == [1]):
            R.pop()
            moves.append("L")
        elif L[-1] == 1 and len(L) > 1:
            L.pop()
            moves.append("R")
        else:
            raise EmbeddingError(f"legs {list(left)} / {list(right)} are not dual")
        if min(L + R, default=1) < 1:
            raise EmbeddingError(f"legs {list(left)} / {list(right)} are not dual")
    moves.reverse()
    return moves


@dataclass
class EmbeddingModel:
    """Classes of the vertices of both trees inside the blown-up plane.

    ``legs[i]`` / ``dual_legs[i]`` list vertex ids of leg i of each tree from
    the center out; ids are those of ``gamma.tree()`` / ``gamma_p.tree()``.
    """

    N: int
    gamma: StarShape
    gamma_p: StarShape
    classes: dict
    separators: tuple = ()

    def vertex_class(self, side: str, vid: int) -> HomologyClass:
        return self.classes[(side, vid)]

    def legs(self, side: str) -> list[list[int]]:
        shape = self.gamma if side == GAMMA else self.gamma_p
        return [shape.leg_ids(i) for i in range(len(shape.legs))]

    def side_ids(self, side: str) -> tuple:
        shape = self.gamma if side == GAMMA else self.gamma_p
        return shape.tree().ids

    def verify(self) -> list[str]:
        problems = []
        for side, shape in ((GAMMA, self.gamma), (GAMMA_P, self.gamma_p)):
            tree = shape.tree()
            Q = tree.matrix()
            for a in tree.ids:
                for b in tree.ids:
                    got = self.classes[(side, a)].pair(self.classes[(side, b)])
                    want = Q[tree.index[a]][tree.index[b]]
                    if got != want:
                        problems.append(f"{side}: pairing({a},{b}) = {got}, expected {want}")
        for a in self.gamma.tree().ids:
            for b in self.gamma_p.tree().ids:
                if self.classes[(GAMMA, a)].pair(self.classes[(GAMMA_P, b)]) != 0:
                    problems.append(f"cross pairing (G:{a}, Gp:{b}) nonzero")
        if len(self.gamma.tree()) + len(self.gamma_p.tree()) != self.N + 1:
            problems.append("rank count b2(W) + b2(W') != N + 1")
        return problems

    def to_json(self) -> dict:
        return {"N": self.N,
                "gamma": self.gamma.to_json(),
                "gamma_p": self.gamma_p.to_json(),
                "classes": {f"{side}:{vid}": c.to_json()
                            for (side, vid), c in sorted(self.classes.items())}}

    @classmethod
    def from_json(cls, data: dict) -> "EmbeddingModel":
        classes = {}
        for key, val in data["classes"].items():
            side, vid = key.split(":")
            classes[(side, int(vid))] = HomologyClass.from_json(val)
        gamma = StarShape(data["gamma"]["center"], data["gamma"]["legs"])
        gamma_p = StarShape(data["gamma_p"]["center"], data["gamma_p"]["legs"])
        return cls(int(data["N"]), gamma, gamma_p, classes)


def embed_union(gamma: StarShape) -> EmbeddingModel:
    """Embed the plumbings of ``gamma`` and its dual into CP^2 # N(-CP^2).

    ``gamma`` needs a -1 center and three legs in descending-ratio order.
    """
    if gamma.center_weight != -1 or len(gamma.legs) != 3:
        raise EmbeddingError("embedding needs a -1 central vertex and three legs")
    if euler_number(gamma.seifert()) <= 0:
        raise EmbeddingError("embedding needs positive rational Euler number")
    gamma_p = gamma.dual()
    center = _Curve(0, {1: 1})
    dual_center = _Curve(1, {2: -1, 3: -1, 4: -1})
    N = 4
    g_legs, gp_legs, seps = [], [], []
    for i, (a, ap) in enumerate(zip(gamma.cf_legs(), gamma_p.cf_legs())):
        left = [_Curve(1, {1: -1, i + 2: -1})]
        right = []
        E = _Curve(0, {i + 2: 1})
        for move in blowup_schedule(a, ap):
            N += 1
            nb = left[-1] if move == "L" else right[-1]
            nb.blow(N)
            E.blow(N)
            (right if move == "L" else left).append(E)
            E = _Curve(0, {N: 1})
        g_legs.append(left)
        gp_legs.append(right)
        seps.append(E)
    classes = {(GAMMA, 0): center.freeze(N), (GAMMA_P, 0): dual_center.freeze(N)}
    for i in range(3):
        for vid, curve in zip(gamma.leg_ids(i), g_legs[i]):
            classes[(GAMMA, vid)] = curve.freeze(N)
        for vid, curve in zip(gamma_p.leg_ids(i), gp_legs[i]):
            classes[(GAMMA_P, vid)] = curve.freeze(N)
    model = EmbeddingModel(N, gamma, gamma_p, classes, tuple(s.freeze(N) for s in seps))
    problems = model.verify()
    if problems:
        raise EmbeddingError("embedding verification failed: " + "; ".join(problems[:5]))
    return model


# ---------------------------------------------------------------------------
# the class c


@dataclass
class CharClassC:
    model: EmbeddingModel
    pd: HomologyClass
    family: str
    params: dict
    values: dict  # (side, vid) -> int

    def side_vector(self, side: str) -> tuple:
        return tuple(self.values[(side, vid)] for vid in self.model.side_ids(side))

    def to_json(self) -> dict:
        return {"pd": self.pd.to_json(),
                "values": {f"{s}:{v}": x for (s, v), x in sorted(self.values.items())}}


def family_a_parameters(gamma: StarShape) -> Optional[dict]:
    """``k`` and the data of the leg-one-long family, or None if out of family.

    Conditions: a1 = ... = ak = 2 with n1 = k or a_{k+1} > 2, b1 = k + 2,
    c1 >= b1, n1 > 1 and n3 = 1.
    """
    if gamma.center_weight != -1 or len(gamma.legs) != 3:
        return None
    a, b, c = gamma.cf_legs()
    k = 0
    while k < len(a) and a[k] == 2:
        k += 1
    if k == 0 or len(a) <= 1 or len(c) != 1 or b[0] != k + 2 or c[0] < b[0]:
        return None
    return {"k": k, "n1": len(a), "n2": len(b), "c1": c[0]}


def family_b_parameters(gamma: StarShape) -> Optional[dict]:
    """``(s, m)`` for legs [2], [3, 2^s, m], [2s+5]; None if out of family."""
    if gamma.center_weight != -1 or len(gamma.legs) != 3:
        return None
    a, b, c = gamma.cf_legs()
    if a != (2,) or len(c) != 1 or b[0] != 3:
        return None
    s = 0
    while 1 + s < len(b) and b[1 + s] == 2:
        s += 1
    if len(b) != s + 2 or c[0] != 2 * s + 5:
        return None
    return {"s": s, "m": b[-1]}


def _build(model: EmbeddingModel, S: set, T: set, family: str, params: dict) -> CharClassC:
    if S & T:
        raise EmbeddingError(f"S and T intersect: {sorted(S & T)}")
    coeffs = tuple(1 if (i in S or i in T) else -1 for i in range(1, model.N + 1))
    pd = HomologyClass(1, coeffs)
    values = {key: pd.pair(cls) for key, cls in model.classes.items()}
    return CharClassC(model, pd, family, params, values)


def _meets(model, i, side, vid) -> bool:
    # e_i . u != 0  <=>  the e_i-coefficient of u is nonzero
    return model.classes[(side, vid)].e[i - 1] != 0


def build_class_c_A(model: EmbeddingModel) -> CharClassC:
    params = family_a_parameters(model.gamma)
    if params is None:
        raise EmbeddingError("tree is outside the family with n1 > 1")
    k = params["k"]
    l2 = model.legs(GAMMA_P)[1]
    l3 = model.legs(GAMMA_P)[2]
    head, tail = l2[:k], l2[k:]
    S = {i for i in range(1, model.N + 1)
         if not any(_meets(model, i, GAMMA_P, u) for u in head)
         and any(_meets(model, i, GAMMA_P, u) for u in tail)}
    T = {i for i in range(1, model.N + 1)
         if any(_meets(model, i, GAMMA_P, u) for u in l3[:-1])}
    return _build(model, S, T, "A", params)


def build_class_c_B(model: EmbeddingModel) -> CharClassC:
    params = family_b_parameters(model.gamma)
    if params is None:
        raise EmbeddingError("tree is outside the family [2], [3, 2^s, m], [2s+5]")
    l2 = model.legs(GAMMA_P)[1]
    l3 = model.legs(GAMMA_P)[2]
    x2, v, rest = l2[0], l2[1], l2[2:]
    # in this basis the tail past v is a chain e_a - e_b, e_b - e_c, ...;
    # "meets some tail vertex" is what reproduces the value lists for m >= 4
    S = {i for i in range(1, model.N + 1)
         if any(_meets(model, i, GAMMA_P, u) for u in rest)
         and not _meets(model, i, GAMMA_P, x2) and not _meets(model, i, GAMMA_P, v)}
    T = {i for i in range(1, model.N + 1)
         if any(_meets(model, i, GAMMA_P, u) for u in l3[:-1])}
    return _build(model, S, T, "B", params)


def evaluate(c: CharClassC, side: str, vid: int) -> int:
    return c.pd.pair(c.model.vertex_class(side, vid))


def restrict_square(c: CharClassC, side: str) -> Fraction:
    shape = c.model.gamma if side == GAMMA else c.model.gamma_p
    return lattice_for(shape.tree()).square(c.side_vector(side))


def verify_char_and_signature(c: CharClassC) -> bool:
    """Characteristic on the basis h, e_i, every <c, e_i> = +-1, c^2 = 1 - N."""
    pd, N = c.pd, c.model.N
    if len(pd.e) != N:
        return False
    if (pd.h - 1) % 2 != 0 or any((x - 1) % 2 != 0 for x in pd.e):
        return False
    if any(abs(x) != 1 for x in pd.e):
        return False
    return pd.pair(pd) == 1 - N
