"""Full-path search on negative definite plumbing lattices.

Characteristic covectors are stored as tuples of integers indexed like
``tree.ids``.  A push at vertex ``v`` is allowed when ``K[v] == -v.v`` and
adds twice the row of ``v`` in the intersection matrix.

Two facts keep the search small:

* a coordinate above ``-v.v`` can never come back down, so such states are
  dead;
* pushes at non-adjacent vertices commute, while pushing one of two
  adjacent pushable vertices overshoots the other.  Hence from any state the
  push process either always reaches the same terminal vector or never
  reaches one.  Generators are therefore keyed by their terminal vector.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Optional

import numpy as np

from .plumbing import PlumbingTree, bad_vertices, intersection_lattice

__all__ = [
    "LatticeError",
    "HFLattice",
    "lattice_for",
    "FullPath",
    "SpinCClass",
    "Generator",
    "push",
    "square",
    "degree",
    "find_full_path_through",
    "spinc_class",
    "enumerate_generators",
    "is_L_space",
    "correction_terms",
]


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class FullPath:
    steps: tuple
    pushed: tuple
    degree: Fraction

    def __post_init__(self):
        if not self.steps or len(self.pushed) != len(self.steps) - 1:
            raise ValueError("a full path has one more step than pushes")

    def __len__(self):
        return len(self.steps)

    def to_json(self) -> dict:
        return {"steps": [list(s) for s in self.steps], "pushed": list(self.pushed),
                "degree": str(self.degree)}

    @classmethod
    def from_json(cls, data: dict) -> "FullPath":
        return cls(tuple(tuple(int(x) for x in s) for s in data["steps"]),
                   tuple(int(v) for v in data["pushed"]), Fraction(data["degree"]))


@dataclass(frozen=True, order=True)
class SpinCClass:
    """Coset of a characteristic vector modulo ``2 Q Z^n``."""

    representative: tuple


@dataclass(frozen=True)
class Generator:
    degree: Fraction
    terminal: tuple
    witness: Optional[FullPath]


def _inverse(Q) -> list[list[Fraction]]:
    n = len(Q)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(Q)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise LatticeError("intersection matrix is singular")
        A[c], A[p] = A[p], A[c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def _adjugate(Q) -> tuple[int, list[list[int]]]:
    """(d, R) with Q R = d I, by fraction-free Gauss-Jordan; all divisions exact."""
    n = len(Q)
    M = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(Q)]
    prev = 1
    for k in range(n):
        p = next((r for r in range(k, n) if M[r][k] != 0), None)
        if p is None:
            raise LatticeError("intersection matrix is singular")
        M[k], M[p] = M[p], M[k]
        pk = M[k]
        piv = pk[k]
        for i in range(n):
            if i == k:
                continue
            row = M[i]
            f = row[k]
            M[i] = [(piv * x - f * y) // prev for x, y in zip(row, pk)]
        prev = piv
    return prev, [row[n:] for row in M]


class HFLattice:
    """Intersection lattice of a plumbing tree, prepared for path search."""

    def __init__(self, tree: PlumbingTree):
        self.tree = tree
        self.ids = tree.ids
        self.n = len(tree.ids)
        lat = intersection_lattice(tree)
        self.Q = lat.Q
        self.det = lat.det
        self.signature = lat.signature
        self.w = tuple(self.Q[i][i] for i in range(self.n))
        self.nbrs = tuple(tuple(tree.index[u] for u in tree.neighbors(v)) for v in self.ids)
        self._Qinv = None
        self._adj = None
        self._dead = set()

    # basic algebra -------------------------------------------------------

    @property
    def Qinv(self):
        if self._Qinv is None:
            if self.det == 0:
                raise LatticeError("intersection matrix is singular")
            self._Qinv = _inverse(self.Q)
        return self._Qinv

    @property
    def adjugate(self) -> list[list[int]]:
        """``det * Q^-1`` as an integer matrix."""
        if self._adj is None:
            if self.det == 0:
                raise LatticeError("intersection matrix is singular")
            d, R = _adjugate(self.Q)
            if d != self.det:
                R = [[x * self.det // d for x in row] for row in R]
            check = [[sum(a * b for a, b in zip(row, col)) for col in zip(*R)] for row in self.Q]
            if check != [[self.det * int(i == j) for j in range(self.n)] for i in range(self.n)]:
                raise LatticeError("adjugate failed its exact check")
            self._adj = R
        return self._adj

    def is_negative_definite(self) -> bool:
        return self.signature == (0, self.n, 0)

    def check_algorithm_preconditions(self):
        problems = []
        if not self.is_negative_definite():
            problems.append(f"not negative definite (signature {self.signature})")
        bad = bad_vertices(self.tree)
        if len(bad) > 1:
            problems.append(f"{len(bad)} bad vertices {bad}")
        if problems:
            raise LatticeError("full-path algorithm unavailable: " + "; ".join(problems))

    def _vec(self, K) -> tuple:
        K = tuple(int(x) for x in K)
        if len(K) != self.n:
            raise LatticeError(f"vector has {len(K)} entries, lattice has {self.n} vertices")
        return K

    def is_characteristic(self, K) -> bool:
        return all((k - w) % 2 == 0 for k, w in zip(K, self.w))

    def is_initial(self, K) -> bool:
        return all(w + 2 <= k <= -w for k, w in zip(K, self.w))

    def is_terminal(self, K) -> bool:
        return all(w <= k <= -w - 2 for k, w in zip(K, self.w))

    def in_box(self, K) -> bool:
        return all(w <= k <= -w for k, w in zip(K, self.w))

    def square(self, K) -> Fraction:
        K = self._vec(K)
        adj = self.adjugate
        nz = [i for i in range(self.n) if K[i]]
        total = sum(K[i] * sum(adj[i][j] * K[j] for j in nz) for i in nz)
        return Fraction(total, self.det)

    def degree(self, K) -> Fraction:
        return (self.square(K) + self.n) / 4

    def push(self, K, i: int) -> tuple:
        """Push at vertex index ``i`` (not id)."""
        if K[i] != -self.w[i]:
            raise LatticeError(f"cannot push at vertex {self.ids[i]}: value {K[i]} != {-self.w[i]}")
        out = list(K)
        out[i] += 2 * self.w[i]
        for j in self.nbrs[i]:
            out[j] += 2
        return tuple(out)

    def unpush(self, K, i: int) -> tuple:
        if K[i] != self.w[i]:
            raise LatticeError(f"cannot unpush at vertex {self.ids[i]}: value {K[i]} != {self.w[i]}")
        out = list(K)
        out[i] -= 2 * self.w[i]
        for j in self.nbrs[i]:
            out[j] -= 2
        return tuple(out)

    # search --------------------------------------------------------------

    def _moves(self, K):
        """Legal pushes from K, empty if K is dead."""
        pushable = []
        for i, (k, w) in enumerate(zip(K, self.w)):
            if k > -w:
                return []
            if k == -w:
                pushable.append(i)
        ps = set(pushable)
        for i in pushable:
            if any(j in ps for j in self.nbrs[i]):
                return []
        return pushable

    def forward(self, K) -> Optional[tuple[list, list]]:
        """Depth-first push search from K to a terminal vector.

        Returns (states, pushed vertex indices) or None.  Dead states are
        cached on the lattice and shared between searches.
        """
        dead = self._dead
        if K in dead:
            return None
        if self.is_terminal(K):
            return [K], []
        stack = [(K, iter(self._moves(K)))]
        pushed = []
        while stack:
            state, moves = stack[-1]
            i = next(moves, None)
            if i is None:
                dead.add(state)
                stack.pop()
                if pushed:
                    pushed.pop()
                continue
            new = self.push(state, i)
            if new in dead:
                continue
            pushed.append(i)
            if self.is_terminal(new):
                return [s for s, _ in stack] + [new], pushed
            stack.append((new, iter(self._moves(new))))
        return None

    def full_path_through(self, K) -> Optional[FullPath]:
        K = self._vec(K)
        if not self.is_characteristic(K) or not self.in_box(K):
            return None
        fwd = self.forward(K)
        if fwd is None:
            return None
        neg = tuple(-x for x in K)
        bwd = self.forward(neg)
        if bwd is None:
            return None
        b_states, b_pushed = bwd
        steps = [tuple(-x for x in s) for s in reversed(b_states)] + fwd[0][1:]
        pushed = [self.ids[i] for i in reversed(b_pushed)] + [self.ids[i] for i in fwd[1]]
        return FullPath(tuple(steps), tuple(pushed), self.degree(K))

    # spin^c structures ---------------------------------------------------

    def spinc_class(self, K) -> SpinCClass:
        """Canonical representative ``Q x`` with ``x = Q^-1 K`` reduced into [0, 2)."""
        K = self._vec(K)
        adj, D = self.adjugate, abs(self.det)
        sign = 1 if self.det > 0 else -1
        # x = y / D with y integral; reduce y modulo 2D
        y = [sign * sum(a * k for a, k in zip(row, K)) % (2 * D) for row in adj]
        rep = []
        for row in self.Q:
            num = sum(q * yi for q, yi in zip(row, y))
            assert num % D == 0
            rep.append(num // D)
        return SpinCClass(tuple(rep))

    # enumeration ---------------------------------------------------------

    def _dtype(self):
        # live coordinates stay within [w, -w] up to one round of neighbour pushes
        bound = max(abs(w) for w in self.w) + 2 * sum(abs(q) for row in self.Q for q in row)
        return np.int16 if bound < 2 ** 14 else np.int64

    def initial_vectors(self) -> np.ndarray:
        axes = [np.arange(w + 2, -w + 1, 2, dtype=self._dtype()) for w in self.w]
        grid = np.meshgrid(*axes, indexing="ij", copy=False)
        return np.stack([g.reshape(-1) for g in grid], axis=1)

    def live_initial_vectors(self) -> np.ndarray:
        """Initial vectors with no two adjacent coordinates at -w.

        Any other initial vector is stuck at its first step, so it cannot
        reach a terminal.  Built vertex by vertex in BFS order so each row
        is pruned as soon as its parent coordinate is known.
        """
        dtype = self._dtype()
        order, parent = [0], {0: None}
        for v in order:
            for u in self.nbrs[v]:
                if u not in parent:
                    parent[u] = v
                    order.append(u)
        if len(order) != self.n:
            raise LatticeError("plumbing graph is not connected")
        rows = np.zeros((1, self.n), dtype=dtype)
        for v in order:
            vals = np.arange(self.w[v] + 2, -self.w[v] + 1, 2, dtype=dtype)
            rows = np.repeat(rows, len(vals), axis=0)
            rows[:, v] = np.tile(vals, len(rows) // len(vals))
            p = parent[v]
            if p is not None:
                rows = rows[~((rows[:, v] == -self.w[v]) & (rows[:, p] == -self.w[p]))]
        return rows

    def batch_terminals(self, states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Terminal vector reached from each row, plus a mask of rows that got one.

        Pushes every pushable vertex at once; this is the same as pushing them
        one by one because they are pairwise non-adjacent.
        """
        edges = [(i, j, self.Q[i][j]) for i in range(self.n) for j in range(i + 1, self.n)
                 if self.Q[i][j]]
        top = -np.array(self.w, dtype=states.dtype)[:, None]
        out = np.zeros_like(states)
        ok = np.zeros(len(states), dtype=bool)
        idx = np.arange(len(states))
        cur = np.ascontiguousarray(states.T)  # one contiguous row per vertex
        while cur.shape[1]:
            pushable = cur == top
            dead = (cur > top).any(axis=0)
            for i, j, _ in edges:
                dead |= pushable[i] & pushable[j]
            done = ~dead & ~pushable.any(axis=0)
            out[idx[done]] = cur[:, done].T
            ok[idx[done]] = True
            keep = np.flatnonzero(~dead & ~done)
            cur, pushable, idx = cur[:, keep], pushable[:, keep], idx[keep]
            # a pushed coordinate goes from -w to w; each pushed neighbour adds 2 q_ij
            cur[pushable] *= -1
            for i, j, q in edges:
                cur[j] += (2 * q) * pushable[i]
                cur[i] += (2 * q) * pushable[j]
        return out, ok

    def _terminal_starts(self) -> dict:
        """terminal -> the initial vector it is reached from."""
        self.check_algorithm_preconditions()
        inits = self.live_initial_vectors()
        terms, ok = self.batch_terminals(inits)
        start = {}
        for row, t in zip(inits[ok].tolist(), terms[ok].tolist()):
            t = tuple(t)
            if t in start:
                raise LatticeError(f"terminal {t} reached from {start[t]} and {tuple(row)}")
            start[t] = tuple(row)
        return start

    def generator_count(self) -> int:
        return len(self._terminal_starts())

    def generators(self, with_paths: bool = True) -> dict:
        """Map SpinCClass -> list of Generator, sorted canonically.

        Each terminal vector is reached from exactly one initial vector;
        a second one would contradict the confluence argument and raises.
        Without ``with_paths`` the witnesses are left as None.
        """
        start = self._terminal_starts()
        table = {}
        for t in sorted(start):
            path = None
            if with_paths:
                path = self.full_path_through(start[t])
                if path is None or path.steps[0] != start[t] or path.steps[-1] != t:
                    raise LatticeError(f"batch and scalar searches disagree from {start[t]}")
            deg = path.degree if path else self.degree(t)
            table.setdefault(self.spinc_class(t), []).append(Generator(deg, t, path))
        return {c: sorted(table[c], key=lambda g: (g.degree, g.terminal))
                for c in sorted(table)}


@lru_cache(maxsize=512)
def lattice_for(tree: PlumbingTree) -> HFLattice:
    """Shared HFLattice per tree, so inverses and dead-state caches are reused."""
    return HFLattice(tree)


def _lat(lattice) -> HFLattice:
    return lattice if isinstance(lattice, HFLattice) else lattice_for(lattice)


def push(K, v: int, lattice) -> tuple:
    """Push at vertex id ``v``."""
    lat = _lat(lattice)
    return lat.push(lat._vec(K), lat.tree.index[v])


def square(K, lattice) -> Fraction:
    return _lat(lattice).square(K)


def degree(K, lattice) -> Fraction:
    return _lat(lattice).degree(K)


def find_full_path_through(K, lattice) -> Optional[FullPath]:
    return _lat(lattice).full_path_through(K)


def spinc_class(K, lattice) -> SpinCClass:
    return _lat(lattice).spinc_class(K)


def enumerate_generators(lattice) -> dict:
    return _lat(lattice).generators()


def is_L_space(lattice) -> bool:
    lat = _lat(lattice)
    return lat.generator_count() == abs(lat.det)


def correction_terms(lattice) -> dict:
    lat = _lat(lattice)
    table = lat.generators()
    multi = {c: len(g) for c, g in table.items() if len(g) != 1}
    if multi or len(table) != abs(lat.det):
        raise LatticeError(
            f"not an L-space: {sum(len(g) for g in table.values())} generators for "
            f"|det| = {abs(lat.det)}; classes with several generators: {len(multi)}")
    return {c: g[0].degree for c, g in table.items()}
