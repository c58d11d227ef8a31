import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaosbound.covers import (
    CoverError,
    PlateauConfig,
    Side,
    address,
    canonical_cover,
    evaluate,
    format_rational,
    itinerary,
    kneading_invariant,
    parse_rational,
    right_fixed_point,
)
from chaosbound.symbolic import ClassLabel, Order, Seq, compare, is_compatible_pair, parse_seq

HALF = F(1, 2)


def cover(cls, lam=2):
    return canonical_cover(cls, lam)


def test_doubling_map():
    A = cover("A")
    assert A(F(1, 4)) == HALF
    assert A(F(3, 4)) == HALF


def test_class_c_boundary_values():
    C = cover("C")
    assert C(F(0)) == 1 and C(F(1)) == 0
    assert C.branch(0, HALF) == 0 and C.branch(1, HALF) == 1


def test_tent():
    B = cover("B")
    assert B.branch(0, HALF) == 1 and B.branch(1, HALF) == 1


@pytest.mark.parametrize("cls", list(ClassLabel))
@pytest.mark.parametrize("lam", [2, 3, 5])
def test_cover_boundary_conditions(cls, lam):
    cv = cover(cls, lam)
    f0 = lambda x: cv.branch(0, x)  # noqa: E731
    f1 = lambda x: cv.branch(1, x)  # noqa: E731
    assert {f0(cv.a_m), f0(cv.a_M)} == {F(0), F(1)}
    assert {f1(cv.b_M), f1(cv.b_m)} == {F(0), F(1)}
    expected = {
        ClassLabel.A: (f0(cv.a_m) == cv.a_m, f1(cv.b_m) == cv.b_m),
        ClassLabel.B: (f0(cv.a_m) == cv.a_m, f1(cv.b_m) == cv.a_m),
        ClassLabel.C: (f1(cv.b_m) == cv.a_m, f0(cv.a_m) == cv.b_m),
        ClassLabel.D: (f0(cv.a_m) == cv.b_m, f1(cv.b_m) == cv.b_m),
    }[cls]
    assert all(expected)
    assert abs(cv.slope(0)) == abs(cv.slope(1)) == lam


def test_lambda_validation():
    with pytest.raises(CoverError):
        canonical_cover("A", 1)
    A3 = cover("A", 3)
    assert (A3.a_M, A3.b_M) == (F(1, 3), F(2, 3))


def test_evaluate_examples():
    cfg = PlateauConfig(cover("A"), F(3, 8), F(5, 8))
    assert evaluate(cfg, F(1, 4)) == HALF
    assert evaluate(cfg, HALF, Side.MINUS) == F(3, 4)
    assert evaluate(cfg, HALF, Side.PLUS) == F(1, 4)
    assert evaluate(cfg, F(7, 16)) == F(3, 4)
    with pytest.raises(CoverError):
        evaluate(cfg, F(3, 2))


def test_config_validation():
    with pytest.raises(CoverError):
        PlateauConfig(cover("A"), F(3, 4), F(3, 4))


def test_itinerary_examples():
    msdm = lambda cls: PlateauConfig(cover(cls), HALF, HALF)  # noqa: E731
    assert itinerary(msdm("A"), F(1, 3), Side.MINUS, 8) == "01" * 4
    assert itinerary(msdm("C"), F(0), Side.MINUS, 8) == "01" * 4
    assert itinerary(msdm("A"), F(0), Side.PLUS, 10) == "0" * 10


def test_kneading_examples():
    A, C = cover("A"), cover("C")
    assert kneading_invariant(PlateauConfig(A, F(1, 4), HALF), 12)[0] == "010" + "0" * 9
    assert kneading_invariant(PlateauConfig(A, HALF, HALF), 10) == ("0" + "1" * 9, "1" + "0" * 9)
    # left branch 1 - 2x sends c- to 0, then 0 -> 1 -> 0 ...
    assert kneading_invariant(PlateauConfig(C, HALF, HALF), 9)[0] == "0" + "01" * 4


@pytest.mark.parametrize(
    "cls, text, value",
    [
        ("C", "(0)", F(1, 3)),
        ("C", "1(0)", F(5, 6)),
        ("A", "1(0)", HALF),
        ("C", "001(0)", F(11, 24)),
        ("C", "(01)", F(0)),
        ("C", "0(1)", F(1, 6)),
        ("C", "11(01)", HALF),
        ("C", "(1)", F(2, 3)),
        ("C", "110(1)", F(13, 24)),
    ],
)
def test_address_examples(cls, text, value):
    assert address(cover(cls), parse_seq(text)) == value


def test_right_fixed_point():
    assert right_fixed_point(cover("C")) == F(2, 3)
    assert right_fixed_point(cover("B")) == F(2, 3)
    assert right_fixed_point(cover("A")) == 1


def test_rational_text():
    assert parse_rational("3/6") == HALF
    assert format_rational(F(2, 4)) == "1/2"
    with pytest.raises((CoverError, ValueError)):
        parse_rational("x/2")


@st.composite
def seqs(draw):
    pre = draw(st.text(alphabet="01", max_size=5))
    per = draw(st.text(alphabet="01", min_size=1, max_size=4))
    return Seq.periodic(per, pre)


@settings(max_examples=300)
@given(st.sampled_from(list(ClassLabel)), seqs())
def test_address_roundtrip(cls, s):
    cv = cover(cls)
    x = address(cv, s)
    assert cv.a_m <= x <= cv.b_m
    n = len(s.pre) + 3 * len(s.period)
    msdm = PlateauConfig(cv, HALF, HALF)
    # on a symbol boundary one of the two one-sided itineraries carries s
    its = {itinerary(msdm, x, side, n) for side in Side}
    assert s.prefix(n) in its


@pytest.mark.parametrize("cls", list(ClassLabel))
def test_order_consistency(cls):
    rng = random.Random(3)
    cfg = PlateauConfig(cover(cls), HALF, HALF)
    for _ in range(2500):
        x, y = sorted(F(rng.randrange(0, 4097), 4096) for _ in range(2))
        if x == y:
            continue
        kx = Seq.finite(itinerary(cfg, x, Side.PLUS, 64))
        ky = Seq.finite(itinerary(cfg, y, Side.MINUS, 64))
        assert compare(cls, kx, ky) is not Order.GREATER


@pytest.mark.parametrize("cls", list(ClassLabel))
def test_conjugacy(cls):
    rng = random.Random(5)
    cfg = PlateauConfig(cover(cls), F(3, 8), F(11, 16))
    for _ in range(300):
        x = F(rng.randrange(0, 10007), 10007)
        if x in (cfg.a, cfg.b, cfg.c):
            continue
        orbit = [x]
        for _ in range(21):
            orbit.append(evaluate(cfg, orbit[-1]))
        if {cfg.a, cfg.b, cfg.c} & set(orbit):
            continue
        fx = orbit[1]
        assert itinerary(cfg, fx, Side.MINUS, 20) == itinerary(cfg, x, Side.MINUS, 21)[1:]


@pytest.mark.parametrize("cls", list(ClassLabel))
def test_fullness(cls):
    cv = cover(cls)
    rng = random.Random(11)
    hits = 0
    while hits < 25:
        km = Seq.periodic("".join(rng.choice("01") for _ in range(rng.randrange(1, 4))),
                          "0" + "".join(rng.choice("01") for _ in range(rng.randrange(0, 4))))
        kp = Seq.periodic("".join(rng.choice("01") for _ in range(rng.randrange(1, 4))),
                          "1" + "".join(rng.choice("01") for _ in range(rng.randrange(0, 4))))
        if km[0] != "0" or kp[0] != "1" or not is_compatible_pair(cls, (km, kp)):
            continue
        a, b = address(cv, km), address(cv, kp)
        if not (cv.a_m <= a <= cv.a_M and cv.b_M <= b <= cv.b_m):
            continue
        hits += 1
        km_got, kp_got = kneading_invariant(PlateauConfig(cv, a, b), 24)
        assert (km_got, kp_got) == (km.prefix(24), kp.prefix(24)), (km, kp, a, b)
