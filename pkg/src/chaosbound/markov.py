"""Markov partitions for rational plateau maps and open maps.

The critical orbits of a canonical cover with rational data live on a
finite grid, so they close up and their union is a Markov partition.
Entropy positivity is read off the strongly connected components of the
transition graph; the numerical value comes from a Collatz-Wielandt
enclosure of the spectral radius.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from . import kernels
from .covers import DoubleCover, PlateauConfig, format_rational

__all__ = [
    "MarkovError",
    "MarkovSystem",
    "EntropyResult",
    "DimensionResult",
    "build_markov",
    "build_open_markov",
    "entropy",
    "is_chaotic",
    "survivor_dimension",
    "cylinder_count",
    "cylinder_counts",
    "spectral_radius",
    "periodic_points",
    "periodic_orbit_periods",
]


class MarkovError(RuntimeError):
    """Internal inconsistency: the critical orbits did not produce a Markov partition."""


@dataclass(frozen=True)
class MarkovSystem:
    """Interval partition with its 0/1 transition structure.

    ``intervals[i]`` is a closed interval; ``active`` lists the intervals
    carried by a branch (the rows/columns of ``matrix``); the remainder
    holds plateau intervals, collapsed to a point by the map.
    """

    points: tuple[Fraction, ...]
    intervals: tuple[tuple[Fraction, Fraction], ...]
    active: tuple[int, ...]
    remainder: tuple[tuple[Fraction, Fraction], ...]
    edges: tuple[tuple[int, int], ...]
    branch: tuple[int, ...]  # branch index (0/1) for each active interval
    cover: DoubleCover = field(compare=False)

    @property
    def size(self) -> int:
        return len(self.active)

    @property
    def matrix(self) -> sparse.csr_matrix:
        n = self.size
        if not self.edges:
            return sparse.csr_matrix((n, n), dtype=np.int64)
        rows, cols = zip(*self.edges)
        return sparse.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(n, n))

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def triplets(self) -> str:
        """Sparse triplet text: a header ``n nnz`` then ``i j 1`` per edge."""
        lines = [f"{self.size} {len(self.edges)}"]
        lines += [f"{i} {j} 1" for i, j in sorted(self.edges)]
        return "\n".join(lines) + "\n"

    def partition_text(self) -> str:
        """Active intervals as ``lo hi`` rational pairs, one per line."""
        rows = []
        for k in self.active:
            lo, hi = self.intervals[k]
            rows.append(f"{format_rational(lo)} {format_rational(hi)}")
        return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class EntropyResult:
    positive: bool
    value: float
    lower: float
    upper: float
    matrix_size: int

    @property
    def error(self) -> float:
        return max(self.upper - self.value, self.value - self.lower)


@dataclass(frozen=True)
class DimensionResult:
    value: float
    lower: float
    upper: float
    method: str
    n: int | None = None

    @property
    def error(self) -> float:
        return max(self.upper - self.value, self.value - self.lower)


def _grid(config: PlateauConfig) -> tuple[int, int, int, int]:
    D = config.denominator
    scale = lambda x: x.numerator * (D // x.denominator)  # noqa: E731
    return D, scale(config.a), scale(config.b), scale(config.c)


def _kernel_args(cover: DoubleCover, D: int) -> tuple[int, int, int, int]:
    return cover.slope0, cover.icpt0, cover.slope1, cover.icpt1


def _assemble(cover, D, pts, kinds, image) -> MarkovSystem:
    """Shared assembly: ``kinds[i]`` is 0/1 for branch intervals, None for plateau/hole."""
    index = {p: i for i, p in enumerate(pts)}
    active = [i for i, k in enumerate(kinds) if k is not None]
    pos = {i: r for r, i in enumerate(active)}
    edges = []
    for i in active:
        lo, hi = image(kinds[i], pts[i], pts[i + 1])
        j0 = index.get(lo)
        j1 = index.get(hi)
        if j0 is None:
            j0 = bisect_left(pts, lo)
            if kinds[j0 - 1] is not None if 0 < j0 <= len(kinds) else True:
                raise MarkovError(f"image endpoint {Fraction(lo, D)} is not a partition point")
        if j1 is None:
            j1 = bisect_left(pts, hi)
            if kinds[j1 - 1] is not None if 0 < j1 <= len(kinds) else True:
                raise MarkovError(f"image endpoint {Fraction(hi, D)} is not a partition point")
            j1 -= 1
        for j in range(j0, j1):
            if kinds[j] is not None:
                edges.append((pos[i], pos[j]))
    fr = [Fraction(p, D) for p in pts]
    intervals = tuple((fr[i], fr[i + 1]) for i in range(len(pts) - 1))
    remainder = tuple(intervals[i] for i, k in enumerate(kinds) if k is None)
    return MarkovSystem(
        points=tuple(fr),
        intervals=intervals,
        active=tuple(active),
        remainder=remainder,
        edges=tuple(edges),
        branch=tuple(kinds[i] for i in active),
        cover=cover,
    )


def build_markov(config: PlateauConfig) -> MarkovSystem:
    """Markov partition of the plateau map F_{a,b} from its critical orbits."""
    cover = config.cover
    D, A, B, C = _grid(config)
    s0, k0, s1, k1 = _kernel_args(cover, D)
    pts = kernels.plateau_orbit_points(D, s0, k0, s1, k1, A, B, C, 10 * D + 100)
    kinds = []
    for lo, hi in zip(pts, pts[1:]):
        if hi <= A:
            kinds.append(0)
        elif lo >= B:
            kinds.append(1)
        else:
            kinds.append(None)

    def image(kind, lo, hi):
        s, k = (s0, k0) if kind == 0 else (s1, k1)
        u, v = s * lo + k * D, s * hi + k * D
        return (u, v) if u < v else (v, u)

    return _assemble(cover, D, pts, kinds, image)


def build_open_markov(cover: DoubleCover, a: Fraction, b: Fraction, c: Fraction = Fraction(1, 2)) -> MarkovSystem:
    """Markov partition of the open map on [a_m, a] u [b, b_m]; the hole is the remainder."""
    config = PlateauConfig(cover, a, b, c)
    D, A, B, C = _grid(config)
    s0, k0, s1, k1 = _kernel_args(cover, D)
    pts = kernels.open_orbit_points(D, s0, k0, s1, k1, A, B, C, 10 * D + 100)
    if A == B == C and C not in pts:
        pts = sorted(set(pts) | {C})
    kinds = []
    for lo, hi in zip(pts, pts[1:]):
        if hi <= A:
            kinds.append(0)
        elif lo >= B:
            kinds.append(1)
        else:
            kinds.append(None)

    def image(kind, lo, hi):
        s, k = (s0, k0) if kind == 0 else (s1, k1)
        u, v = s * lo + k * D, s * hi + k * D
        u, v = (u, v) if u < v else (v, u)
        # an endpoint that fell into the hole is replaced by the hole edge
        if A < u < B:
            u = B
        if A < v < B:
            v = A
        return u, v

    return _assemble(cover, D, pts, kinds, image)


def _components(n: int, edges) -> tuple[int, np.ndarray]:
    if n == 0:
        return 0, np.zeros(0, dtype=int)
    if edges:
        rows, cols = zip(*edges)
    else:
        rows, cols = (), ()
    g = sparse.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    return connected_components(g, directed=True, connection="strong")


def _positive_components(n: int, edges) -> list[list[int]]:
    """SCCs carrying positive entropy: some vertex has two out-edges inside the component."""
    ncomp, labels = _components(n, edges)
    internal_out = np.zeros(n, dtype=int)
    for i, j in edges:
        if labels[i] == labels[j]:
            internal_out[i] += 1
    out = []
    for comp in range(ncomp):
        members = np.flatnonzero(labels == comp)
        if internal_out[members].max(initial=0) >= 2:
            out.append(members.tolist())
    return out


def spectral_radius(matrix) -> tuple[float, float, float]:
    """(estimate, lower, upper) for the Perron root of an irreducible nonnegative matrix.

    Bounds are Collatz-Wielandt quotients min/max (Mx)_i / x_i of the
    shifted matrix M = T + I at a positive approximate Perron vector,
    widened by a few ulps for the floating-point evaluation.
    """
    T = sparse.csr_matrix(matrix, dtype=float)
    n = T.shape[0]
    M = T + sparse.identity(n, format="csr")
    if n <= 400:
        w, v = np.linalg.eig(M.toarray())
        k = int(np.argmax(w.real))
        x = np.abs(v[:, k].real)
    else:
        x = np.ones(n)
    x = np.where(x > 0, x, 1e-300) + 1e-18 * x.max()
    lo, hi = 0.0, math.inf
    for _ in range(20000):
        y = M @ x
        q = y / x
        lo, hi = q.min(), q.max()
        if hi - lo <= 4e-16 * hi:
            break
        x = y / y.max()
    pad = 8 * n * np.finfo(float).eps * hi
    est = 0.5 * (lo + hi) - 1.0
    return est, max(lo - pad - 1.0, 0.0), hi + pad - 1.0


def entropy(sys: MarkovSystem) -> EntropyResult:
    """Topological entropy of the coded dynamics: exact sign, enclosed value."""
    comps = _positive_components(sys.size, sys.edges)
    if not comps:
        return EntropyResult(False, 0.0, 0.0, 0.0, sys.size)
    best = (1.0, 1.0, 1.0)
    for members in comps:
        idx = {v: r for r, v in enumerate(members)}
        sub = [(idx[i], idx[j]) for i, j in sys.edges if i in idx and j in idx]
        rows, cols = zip(*sub)
        m = sparse.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(members),) * 2)
        r = spectral_radius(m)
        if r[0] > best[0]:
            best = r
    est, lo, hi = best
    return EntropyResult(True, math.log(est), math.log(max(lo, 1.0)), math.log(hi), sys.size)


@lru_cache(maxsize=200_000)
def _chaotic_cached(config: PlateauConfig) -> bool:
    sys = build_markov(config)
    return bool(_positive_components(sys.size, sys.edges))


def is_chaotic(config: PlateauConfig) -> bool:
    """Exact verdict h_top(F_{a,b}) > 0."""
    return _chaotic_cached(config)


def survivor_dimension(cover: DoubleCover, a: Fraction, b: Fraction) -> DimensionResult:
    """Hausdorff dimension of the survivor set of the open map, log rho / log lam."""
    sys = build_open_markov(cover, Fraction(a), Fraction(b))
    h = entropy(sys)
    ll = math.log(cover.lam)
    return DimensionResult(h.value / ll, h.lower / ll, h.upper / ll, "markov_exact")


def cylinder_counts(cover: DoubleCover, a: Fraction, b: Fraction, n: int) -> list[int]:
    """N_1..N_n: words of each length whose survivor cylinder has positive length."""
    if n < 1:
        raise ValueError("n must be positive")
    config = PlateauConfig(cover, a, b)
    D, A, B, _ = _grid(config)
    return list(kernels.cylinder_counts(D, cover.slope0, cover.icpt0, cover.slope1, cover.icpt1, A, B, n))


def cylinder_count(cover: DoubleCover, a: Fraction, b: Fraction, n: int) -> tuple[int, DimensionResult]:
    """N_n together with the dimension estimate log N_n / (n log lam)."""
    N = cylinder_counts(cover, a, b, n)[-1]
    est = math.log(N) / (n * math.log(cover.lam)) if N > 0 else 0.0
    return N, DimensionResult(est, 0.0, est, "cylinder_count", n)


def _affine_along(sys: MarkovSystem, k: int) -> tuple[int, int]:
    cv = sys.cover
    return (cv.slope0, cv.icpt0) if sys.branch[k] == 0 else (cv.slope1, cv.icpt1)


def periodic_points(sys: MarkovSystem, period: int, max_walks: int = 2_000_000) -> set[Fraction]:
    """Points of least period ``period`` coded by closed walks of the transition graph.

    Each closed walk i_0 -> ... -> i_p = i_0 gives an affine return map of
    slope +-lam^p with a unique fixed point; it is kept when every iterate
    stays in the interval named by the walk.
    """
    n = sys.size
    succ = [[] for _ in range(n)]
    for i, j in sys.edges:
        succ[i].append(j)
    pred = [[] for _ in range(n)]
    for i, j in sys.edges:
        pred[j].append(i)
    found: set[Fraction] = set()
    walks = 0
    for start in range(n):
        # dist[v] = fewest steps from v back to start
        dist = {start: 0}
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                for u in pred[v]:
                    if u not in dist:
                        dist[u] = dist[v] + 1
                        nxt.append(u)
            frontier = nxt
        if start not in {j for j in succ[start]} and dist.get(start) is None:
            continue
        stack = [(start, 0, (1, Fraction(0)), (start,))]
        while stack:
            v, depth, (S, K), path = stack.pop()
            walks += 1
            if walks > max_walks:
                raise MarkovError("periodic-point search exceeded its walk budget")
            s, k = _affine_along(sys, v)
            S2, K2 = s * S, s * K + k
            for w in succ[v]:
                if depth + 1 == period:
                    if w == start:
                        x = K2 / (1 - S2)
                        if _walk_holds(sys, x, path):
                            found.add(x)
                elif dist.get(w, period + 1) <= period - depth - 1:
                    stack.append((w, depth + 1, (S2, K2), path + (w,)))
    return {x for x in found if _least_period(sys.cover, x, path_len=period, pts=found) == period}


def _walk_holds(sys: MarkovSystem, x: Fraction, path) -> bool:
    for v in path:
        lo, hi = sys.intervals[sys.active[v]]
        if not (lo <= x <= hi):
            return False
        s, k = _affine_along(sys, v)
        x = s * x + k
    return True


def _least_period(cover: DoubleCover, x: Fraction, path_len: int, pts) -> int:
    y = x
    for m in range(1, path_len + 1):
        y = cover(y) if cover.a_m <= y <= cover.b_m else y
        if y == x:
            return m
    return path_len


def periodic_orbit_periods(sys: MarkovSystem, max_period: int) -> dict[int, int]:
    """Number of periodic orbits of each least period up to ``max_period``."""
    out = {}
    for p in range(1, max_period + 1):
        pts = periodic_points(sys, p)
        if pts:
            out[p] = len(pts) // p
    return out
