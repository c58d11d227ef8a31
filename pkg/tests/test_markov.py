import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from chaosbound.covers import PlateauConfig, canonical_cover
from chaosbound.markov import (
    MarkovSystem,
    build_markov,
    build_open_markov,
    cylinder_count,
    cylinder_counts,
    entropy,
    is_chaotic,
    periodic_orbit_periods,
    spectral_radius,
    survivor_dimension,
)
from chaosbound.symbolic import ClassLabel
from edge_lemmas import sweep

HALF = F(1, 2)
LOG2 = math.log(2)


def cover(cls, lam=2):
    return canonical_cover(cls, lam)


def from_edges(n, edges):
    return MarkovSystem(
        points=(), intervals=(), active=tuple(range(n)), remainder=(),
        edges=tuple(edges), branch=(0,) * n, cover=cover("A"),
    )


def random_hole(rng, cv, den=64):
    a = cv.a_m + (cv.a_M - cv.a_m) * F(rng.randrange(0, den + 1), den)
    b = cv.b_M + (cv.b_m - cv.b_M) * F(rng.randrange(0, den + 1), den)
    return a, b


# --- construction ------------------------------------------------------------------


def test_doubling_partition():
    sys = build_markov(PlateauConfig(cover("A"), HALF, HALF))
    assert sys.intervals == ((0, HALF), (HALF, 1))
    assert sys.dense().tolist() == [[1, 1], [1, 1]]
    assert sys.remainder == ()


def test_maximal_hole_is_empty():
    sys = build_markov(PlateauConfig(cover("A"), F(0), F(1)))
    assert sys.size == 0
    assert sys.remainder == ((0, HALF), (HALF, 1))
    assert not entropy(sys).positive


def test_full_tent():
    sys = build_markov(PlateauConfig(cover("B"), HALF, HALF))
    assert sys.dense().tolist() == [[1, 1], [1, 1]]


def test_exports():
    sys = build_markov(PlateauConfig(cover("A"), HALF, HALF))
    assert sys.triplets().splitlines() == ["2 4", "0 0 1", "0 1 1", "1 0 1", "1 1 1"]
    assert sys.partition_text().split() == ["0/1", "1/2", "1/2", "1/1"]


@pytest.mark.parametrize("cls", list(ClassLabel))
def test_markov_property(cls):
    rng = random.Random(17)
    cv = cover(cls)
    for _ in range(40):
        a, b = random_hole(rng, cv)
        sys = build_markov(PlateauConfig(cv, a, b))
        pts = set(sys.points)
        assert pts >= {a, b, cv.a_m, cv.b_m}
        for k, idx in enumerate(sys.active):
            lo, hi = sys.intervals[idx]
            ends = {cv.branch(sys.branch[k], lo), cv.branch(sys.branch[k], hi)}
            assert ends <= pts


# --- entropy -------------------------------------------------------------------------


def test_entropy_full_shift():
    res = entropy(from_edges(2, [(0, 0), (0, 1), (1, 0), (1, 1)]))
    assert res.positive
    assert abs(res.value - LOG2) <= 1e-12
    assert res.lower <= LOG2 <= res.upper


def test_entropy_single_fixed_point():
    res = entropy(from_edges(1, [(0, 0)]))
    assert not res.positive and res.value == 0


def test_entropy_permutation():
    res = entropy(from_edges(3, [(0, 1), (1, 2), (2, 0)]))
    assert not res.positive and res.value == 0


def test_entropy_golden_mean():
    res = entropy(from_edges(2, [(0, 0), (0, 1), (1, 0)]))
    phi = (1 + math.sqrt(5)) / 2
    assert res.lower <= math.log(phi) <= res.upper
    assert res.error < 1e-12


def test_spectral_radius_enclosure():
    rng = np.random.default_rng(4)
    for _ in range(20):
        m = (rng.random((7, 7)) < 0.45).astype(float)
        m[np.arange(7), (np.arange(7) + 1) % 7] = 1  # irreducible
        est, lo, hi = spectral_radius(m)
        true = max(abs(np.linalg.eigvals(m)))
        assert lo <= true <= hi
        assert lo <= est <= hi


# --- chaos decision -------------------------------------------------------------------


@pytest.mark.parametrize("b", [HALF, F(5, 8), F(7, 8), F(1)])
def test_a_zero_is_never_chaotic(b):
    assert not is_chaotic(PlateauConfig(cover("A"), F(0), b))


def test_msdm_is_chaotic():
    assert is_chaotic(PlateauConfig(cover("A"), HALF, HALF))


def test_lower_edge_example():
    # F(3/8) = 3/4 > 1/2
    assert is_chaotic(PlateauConfig(cover("A"), F(3, 8), HALF))


@pytest.mark.parametrize("cls", list(ClassLabel))
@pytest.mark.parametrize("lam", [2, 3])
def test_edge_lemmas(cls, lam):
    cv = cover(cls, lam)
    seen = set()
    for edge, a, b, expected in sweep(cls, lam):
        assert is_chaotic(PlateauConfig(cv, a, b)) is expected, (edge, a, b)
        seen.add((edge, expected))
    # each inner edge carries both verdicts
    assert {("a_M", True), ("a_M", False), ("b_M", True), ("b_M", False)} <= seen


def test_class_c_two_step_branch_is_exercised():
    cv = cover("C")
    hits = 0
    for edge, a, b, expected in sweep("C"):
        if edge != "b_M" or a == cv.a_M:
            continue
        cfg = PlateauConfig(cv, a, b)
        fa = cv.branch(0, a)
        if fa > cfg.c:
            hits += 1
            two = cv.branch(1, fa) if fa >= cv.b_M else cv.branch(0, fa)
            assert is_chaotic(cfg) is (two > cv.b_M)
    assert hits > 5


@pytest.mark.parametrize("cls", list(ClassLabel))
def test_nested_hole_monotonicity(cls):
    rng = random.Random(23)
    cv = cover(cls)
    for _ in range(125):
        a1, b1 = random_hole(rng, cv)
        a2 = cv.a_m + (a1 - cv.a_m) * F(rng.randrange(0, 33), 32)
        b2 = b1 + (cv.b_m - b1) * F(rng.randrange(0, 33), 32)
        small, large = PlateauConfig(cv, a1, b1), PlateauConfig(cv, a2, b2)
        assert not (is_chaotic(large) and not is_chaotic(small))
        h_small = entropy(build_markov(small))
        h_large = entropy(build_markov(large))
        assert h_large.lower <= h_small.upper


# --- open map and dimension ------------------------------------------------------------


def test_dimension_examples():
    A = cover("A")
    full = survivor_dimension(A, HALF, HALF)
    assert abs(full.value - 1) <= 1e-12 and full.method == "markov_exact"
    assert survivor_dimension(A, F(1, 4), F(3, 4)).value == 0
    mid = survivor_dimension(A, F(7, 16), F(9, 16))
    assert 0 < mid.lower and mid.upper < 1


def test_cylinder_count_examples():
    A = cover("A")
    assert cylinder_counts(A, HALF, HALF, 10) == [2**n for n in range(1, 11)]
    assert cylinder_counts(A, F(0), F(1), 5) == [0] * 5
    assert cylinder_count(A, F(1, 4), F(3, 4), 6)[0] == 2
    n, est = cylinder_count(A, F(7, 16), F(9, 16), 20)
    assert n > 2**10 and est.method == "cylinder_count" and est.n == 20
    with pytest.raises(ValueError):
        cylinder_counts(A, HALF, HALF, 0)


def _brute_cylinders(cv, a, b, n):
    """Words w of length n whose survivor set inside the w-cylinder has positive length."""
    count = 0
    for w in range(2**n):
        J = (cv.a_m, cv.b_m)
        for k in range(n):
            s = (w >> (n - 1 - k)) & 1
            lo, hi = (max(J[0], cv.a_m), min(J[1], a)) if s == 0 else (max(J[0], b), min(J[1], cv.b_m))
            if hi <= lo:
                break
            J = tuple(sorted((cv.branch(s, lo), cv.branch(s, hi))))
        else:
            count += 1
    return count


@pytest.mark.parametrize("cls", list(ClassLabel))
def test_cylinder_brute_force(cls):
    cv = cover(cls)
    for a, b in [(F(1, 4), F(3, 4)), (F(3, 8), F(5, 8)), (F(7, 16), F(9, 16)), (F(1, 8), F(5, 8))]:
        assert cylinder_counts(cv, a, b, 8)[-1] == _brute_cylinders(cv, a, b, 8)


@pytest.mark.parametrize("cls", list(ClassLabel))
def test_submultiplicativity(cls):
    rng = random.Random(31)
    cv = cover(cls)
    for _ in range(10):
        a, b = random_hole(rng, cv, 32)
        N = [1] + cylinder_counts(cv, a, b, 12)
        for m in range(1, 7):
            for n in range(1, 13 - m):
                assert N[m + n] <= N[m] * N[n]


def test_cylinder_estimate_converges():
    A = cover("A")
    exact = survivor_dimension(A, F(7, 16), F(9, 16)).value
    errs = [abs(cylinder_count(A, F(7, 16), F(9, 16), n)[1].value - exact) for n in (8, 16, 24)]
    # the count estimate approaches the exact value at rate O(1/n)
    C = max(e * n for e, n in zip(errs, (8, 16, 24)))
    assert errs[-1] <= C / 24 and C < 5


@pytest.mark.parametrize("cls", list(ClassLabel))
def test_entropy_dimension_equivalence(cls):
    rng = random.Random(41)
    cv = cover(cls)
    for _ in range(60):
        a, b = random_hole(rng, cv)
        d = survivor_dimension(cv, a, b)
        h = entropy(build_markov(PlateauConfig(cv, a, b)))
        assert (d.value > 0) is h.positive, (a, b)
        if cls == "A":
            assert abs(d.value * LOG2 - h.value) <= (d.upper - d.lower) * LOG2 + (h.upper - h.lower) + 1e-12


def test_open_markov_hole_edges():
    sys = build_open_markov(cover("A"), F(3, 8), F(5, 8))
    for idx in sys.active:
        lo, hi = sys.intervals[idx]
        assert hi <= F(3, 8) or lo >= F(5, 8)


# --- periodic orbits ----------------------------------------------------------------------


def test_doubling_periodic_orbits():
    sys = build_markov(PlateauConfig(cover("A"), HALF, HALF))
    # necklace counts of the full 2-shift; the fixed points 0 and 1 both count
    assert periodic_orbit_periods(sys, 6) == {1: 2, 2: 1, 3: 2, 4: 3, 5: 6, 6: 9}
