"""Pure-Python integer kernels (reference implementation and fallback).

Points are integers X standing for X / D on the canonical domain [0, 1];
the branches are X -> s0*X + k0*D on the left and X -> s1*X + k1*D on the
right.  ``A, B, C`` are the scaled hole endpoints and split point.
"""

from __future__ import annotations


class OrbitBudgetExceeded(RuntimeError):
    """Critical orbits did not close within the iteration budget."""


def plateau_orbit_points(D, s0, k0, s1, k1, A, B, C, budget):
    """Sorted union of the forward plateau-map orbits of the critical set."""
    lv = s0 * (A if A < C else C) + k0 * D
    rv = s1 * (B if B > C else C) + k1 * D
    seen = {0, D, A, B, C, lv, rv}
    stack = [0, D, A, B, lv, rv]
    steps = 0
    while stack:
        x = stack.pop()
        if x == C:
            continue
        if x < C:
            y = s0 * x + k0 * D if x <= A else lv
        else:
            y = s1 * x + k1 * D if x >= B else rv
        if y not in seen:
            seen.add(y)
            stack.append(y)
        steps += 1
        if steps > budget:
            raise OrbitBudgetExceeded(f"orbit closure exceeded {budget} steps")
    return sorted(seen)


def open_orbit_points(D, s0, k0, s1, k1, A, B, C, budget):
    """Sorted union of the open-map orbits of 0, D, A, B (orbits stop in the hole)."""
    seeds = [0, D, A, B]
    if A == B == C:
        seeds += [s0 * C + k0 * D, s1 * C + k1 * D, C]
    seen = set()
    stack = []
    for x in seeds:
        if not (A < x < B) and x not in seen:
            seen.add(x)
            stack.append(x)
    steps = 0
    while stack:
        x = stack.pop()
        if A == B == C and x == C:
            continue
        y = s0 * x + k0 * D if x <= A else s1 * x + k1 * D
        if not (A < y < B) and y not in seen:
            seen.add(y)
            stack.append(y)
        steps += 1
        if steps > budget:
            raise OrbitBudgetExceeded(f"orbit closure exceeded {budget} steps")
    return sorted(seen)


def cylinder_counts(D, s0, k0, s1, k1, A, B, n):
    """Numbers N_1..N_n of words whose cylinder has positive length in the survivor dynamics.

    The image f^k(C_w) of a cylinder is tracked as an integer interval on
    the grid: D_0 = I_{w_0}, D_k = f(D_{k-1}) & I_{w_k}, with I_0 = [0, A]
    and I_1 = [B, D].
    """
    counts = [0] * n
    stack = []
    if A > 0:
        stack.append((0, A, 0, 1))
    if B < D:
        stack.append((B, D, 1, 1))
    while stack:
        lo, hi, sym, depth = stack.pop()
        counts[depth - 1] += 1
        if depth == n:
            continue
        if sym == 0:
            u, v = s0 * lo + k0 * D, s0 * hi + k0 * D
        else:
            u, v = s1 * lo + k1 * D, s1 * hi + k1 * D
        if u > v:
            u, v = v, u
        lo0, hi0 = max(u, 0), min(v, A)
        if lo0 < hi0:
            stack.append((lo0, hi0, 0, depth + 1))
        lo1, hi1 = max(u, B), min(v, D)
        if lo1 < hi1:
            stack.append((lo1, hi1, 1, depth + 1))
    return counts
