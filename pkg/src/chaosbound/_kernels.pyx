# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled integer kernels; same contracts as ``_kernels_py``.

Callers must keep |slope| * D well inside the signed 64-bit range
(``kernels.py`` routes larger grids to the Python fallback).
"""

from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

from ._kernels_py import OrbitBudgetExceeded


cdef inline long long _plateau(long long x, long long D, long long s0, long long k0,
                               long long s1, long long k1, long long A, long long B,
                               long long C, long long lv, long long rv) nogil:
    if x < C:
        return s0 * x + k0 * D if x <= A else lv
    return s1 * x + k1 * D if x >= B else rv


def plateau_orbit_points(long long D, long long s0, long long k0, long long s1,
                         long long k1, long long A, long long B, long long C,
                         long long budget):
    cdef long long lv = s0 * (A if A < C else C) + k0 * D
    cdef long long rv = s1 * (B if B > C else C) + k1 * D
    cdef unordered_set[long long] seen
    cdef vector[long long] stack
    cdef long long x, y, steps = 0
    for x in (0, D, A, B, C, lv, rv):
        seen.insert(x)
    for x in (0, D, A, B, lv, rv):
        stack.push_back(x)
    while stack.size():
        x = stack.back()
        stack.pop_back()
        if x == C:
            continue
        y = _plateau(x, D, s0, k0, s1, k1, A, B, C, lv, rv)
        if seen.count(y) == 0:
            seen.insert(y)
            stack.push_back(y)
        steps += 1
        if steps > budget:
            raise OrbitBudgetExceeded(f"orbit closure exceeded {budget} steps")
    return sorted(seen)


def open_orbit_points(long long D, long long s0, long long k0, long long s1,
                      long long k1, long long A, long long B, long long C,
                      long long budget):
    cdef unordered_set[long long] seen
    cdef vector[long long] stack
    cdef long long x, y, steps = 0
    cdef bint msdm = (A == B and B == C)
    seeds = [0, D, A, B]
    if msdm:
        seeds += [s0 * C + k0 * D, s1 * C + k1 * D, C]
    for x in seeds:
        if not (A < x < B) and seen.count(x) == 0:
            seen.insert(x)
            stack.push_back(x)
    while stack.size():
        x = stack.back()
        stack.pop_back()
        if msdm and x == C:
            continue
        y = s0 * x + k0 * D if x <= A else s1 * x + k1 * D
        if not (A < y < B) and seen.count(y) == 0:
            seen.insert(y)
            stack.push_back(y)
        steps += 1
        if steps > budget:
            raise OrbitBudgetExceeded(f"orbit closure exceeded {budget} steps")
    return sorted(seen)


def cylinder_counts(long long D, long long s0, long long k0, long long s1,
                    long long k1, long long A, long long B, int n):
    cdef vector[long long] counts
    cdef vector[long long] s_lo, s_hi
    cdef vector[int] s_sym, s_depth
    cdef long long lo, hi, u, v, t, lo0, hi0, lo1, hi1
    cdef int sym, depth
    if n < 1:
        return []
    counts.resize(n, 0)
    with nogil:
        if A > 0:
            s_lo.push_back(0); s_hi.push_back(A); s_sym.push_back(0); s_depth.push_back(1)
        if B < D:
            s_lo.push_back(B); s_hi.push_back(D); s_sym.push_back(1); s_depth.push_back(1)
        while s_lo.size():
            lo = s_lo.back(); hi = s_hi.back(); sym = s_sym.back(); depth = s_depth.back()
            s_lo.pop_back(); s_hi.pop_back(); s_sym.pop_back(); s_depth.pop_back()
            counts[depth - 1] += 1
            if depth == n:
                continue
            if sym == 0:
                u = s0 * lo + k0 * D
                v = s0 * hi + k0 * D
            else:
                u = s1 * lo + k1 * D
                v = s1 * hi + k1 * D
            if u > v:
                t = u; u = v; v = t
            lo0 = u if u > 0 else 0
            hi0 = v if v < A else A
            if lo0 < hi0:
                s_lo.push_back(lo0); s_hi.push_back(hi0); s_sym.push_back(0); s_depth.push_back(depth + 1)
            lo1 = u if u > B else B
            hi1 = v if v < D else D
            if lo1 < hi1:
                s_lo.push_back(lo1); s_hi.push_back(hi1); s_sym.push_back(1); s_depth.push_back(depth + 1)
    return [counts[i] for i in range(n)]
